//! Minimal self-contained SVG charts.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

pub const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Roughly five round tick positions covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    if !(span > 0.0) || !span.is_finite() {
        return vec![lo];
    }
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * span {
        out.push(if t.abs() < 1e-12 * step { 0.0 } else { t });
        t += step;
    }
    out
}

fn label(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

struct Canvas {
    svg: String,
    x: (f64, f64),
    y: (f64, f64),
}

impl Canvas {
    fn new(title: &str, x: (f64, f64), y: (f64, f64)) -> Self {
        let pad = |(a, b): (f64, f64)| if b > a { (a, b) } else { (a - 0.5, a + 0.5) };
        let mut svg = String::new();
        let _ = write!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">
<rect width="100%" height="100%" fill="white"/>
<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>
"#,
            WIDTH / 2.0,
            escape(title)
        );
        Self {
            svg,
            x: pad(x),
            y: pad(y),
        }
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }

    fn axes(&mut self, xlabel: &str, ylabel: &str, x_ticks: bool) {
        let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
        let _ = writeln!(
            self.svg,
            r#"<path d="M{x0},{y0} L{x0},{y1} L{x1},{y1}" fill="none" stroke="black"/>"#
        );
        for t in ticks(self.y.0, self.y.1) {
            let py = self.py(t);
            let _ = writeln!(
                self.svg,
                r##"<line x1="{}" y1="{py:.2}" x2="{x0}" y2="{py:.2}" stroke="black"/><line x1="{x0}" y1="{py:.2}" x2="{x1}" y2="{py:.2}" stroke="#e0e0e0"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"##,
                x0 - 5.0,
                x0 - 8.0,
                py + 4.0,
                label(t)
            );
        }
        if x_ticks {
            for t in ticks(self.x.0, self.x.1) {
                let px = self.px(t);
                let _ = writeln!(
                    self.svg,
                    r#"<line x1="{px:.2}" y1="{y1}" x2="{px:.2}" y2="{}" stroke="black"/><text x="{px:.2}" y="{}" text-anchor="middle">{}</text>"#,
                    y1 + 5.0,
                    y1 + 18.0,
                    label(t)
                );
            }
        }
        let _ = writeln!(
            self.svg,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>
<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
            (x0 + x1) / 2.0,
            HEIGHT - 15.0,
            escape(xlabel),
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            escape(ylabel)
        );
    }

    fn polyline(&mut self, pts: &[(f64, f64)], color: &str, width: f64) {
        let d: Vec<String> = pts
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y)))
            .collect();
        let _ = writeln!(
            self.svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="{width}"/>"#,
            d.join(" ")
        );
    }

    fn legend(&mut self, entries: &[(&str, &str)]) {
        for (i, (name, color)) in entries.iter().enumerate() {
            let y = TOP + 10.0 + 18.0 * i as f64;
            let x = WIDTH - RIGHT - 200.0;
            let _ = writeln!(
                self.svg,
                r#"<rect x="{x}" y="{}" width="14" height="4" fill="{color}"/><text x="{}" y="{}">{}</text>"#,
                y - 2.0,
                x + 20.0,
                y + 4.0,
                escape(name)
            );
        }
    }

    fn finish(mut self) -> String {
        self.svg.push_str("</svg>\n");
        self.svg
    }
}

/// Vertical bars on a [0, 1] scale, one per label.
pub fn bar_chart(title: &str, xlabel: &str, labels: &[String], values: &[f64]) -> String {
    let n = labels.len().max(1) as f64;
    let mut c = Canvas::new(title, (0.0, n), (0.0, 1.0));
    c.axes(xlabel, "probability", false);
    let slot = (WIDTH - LEFT - RIGHT) / n;
    for (i, (name, &v)) in labels.iter().zip(values).enumerate() {
        let v = if v.is_finite() { v.clamp(0.0, 1.0) } else { 0.0 };
        let (x, top) = (c.px(i as f64) + 0.15 * slot, c.py(v));
        let _ = writeln!(
            c.svg,
            r#"<rect x="{x:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="{}"><title>{}: {v}</title></rect><text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
            0.7 * slot,
            c.py(0.0) - top,
            PALETTE[0],
            escape(name),
            x + 0.35 * slot,
            HEIGHT - BOTTOM + 18.0,
            escape(name)
        );
    }
    c.finish()
}

/// A curve drawn through the data.
pub struct Series<'a> {
    pub name: &'a str,
    pub color: &'a str,
    pub points: Vec<(f64, f64)>,
}

/// Data points, fitted curves and an optional shaded band `(x, lower, upper)`.
pub fn data_with_curves(
    title: &str,
    data: &[(f64, f64)],
    curves: &[Series<'_>],
    band: Option<&[(f64, f64, f64)]>,
) -> String {
    let xs = data.iter().map(|p| p.0).chain(curves.iter().flat_map(|c| c.points.iter().map(|p| p.0)));
    let ys = data
        .iter()
        .map(|p| p.1)
        .chain(curves.iter().flat_map(|c| c.points.iter().map(|p| p.1)))
        .chain(band.into_iter().flatten().flat_map(|b| [b.1, b.2]));
    let range = |it: &mut dyn Iterator<Item = f64>| {
        it.filter(|v| v.is_finite())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)))
    };
    let (x, mut y) = (range(&mut xs.into_iter()), range(&mut ys.into_iter()));
    let margin = 0.05 * (y.1 - y.0);
    y = (y.0 - margin, y.1 + margin);
    let mut c = Canvas::new(title, x, y);
    c.axes("x", "y", true);
    if let Some(band) = band {
        let upper: Vec<String> = band.iter().map(|b| format!("{:.2},{:.2}", c.px(b.0), c.py(b.2))).collect();
        let lower: Vec<String> = band.iter().rev().map(|b| format!("{:.2},{:.2}", c.px(b.0), c.py(b.1))).collect();
        let _ = writeln!(
            c.svg,
            r##"<polygon points="{} {}" fill="#ff7f0e" fill-opacity="0.25" stroke="none"/>"##,
            upper.join(" "),
            lower.join(" ")
        );
    }
    for &(x, y) in data {
        let _ = writeln!(
            c.svg,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="black"/>"#,
            c.px(x),
            c.py(y)
        );
    }
    for s in curves {
        c.polyline(&s.points, s.color, 2.0);
    }
    let legend: Vec<(&str, &str)> = curves.iter().map(|s| (s.name, s.color)).collect();
    c.legend(&legend);
    c.finish()
}

/// Probability against subset sequence number, drawn as stems.
pub fn index_chart(title: &str, points: &[(u64, f64)]) -> String {
    let max_p = points.iter().map(|p| p.1).fold(0.0, f64::max);
    let x = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.0 as f64), b.max(p.0 as f64)));
    let x = if x.0.is_finite() { x } else { (0.0, 1.0) };
    let mut c = Canvas::new(title, x, (0.0, if max_p > 0.0 { max_p * 1.05 } else { 1.0 }));
    c.axes("subset number", "probability", true);
    for &(i, p) in points {
        let (px, base) = (c.px(i as f64), c.py(0.0));
        let _ = writeln!(
            c.svg,
            r#"<line x1="{px:.2}" y1="{base:.2}" x2="{px:.2}" y2="{:.2}" stroke="{}"><title>#{i}: {p}</title></line>"#,
            c.py(p),
            PALETTE[0]
        );
    }
    c.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tick_positions_are_round() {
        assert_eq!(ticks(0.0, 1.0), vec![0.0, 0.2, 0.4, 0.6000000000000001, 0.8, 1.0]);
        assert_eq!(ticks(-1.0, 1.0), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(label(0.6000000000000001), "0.6");
    }

    #[test]
    fn charts_are_well_formed() {
        let svg = bar_chart("p", "degree", &["0".into(), "1".into()], &[0.25, 0.75]);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<rect x=").count(), 2);
        let svg = data_with_curves(
            "fit",
            &[(0.0, 1.0), (1.0, 2.0)],
            &[Series { name: "a<b", color: "red", points: vec![(0.0, 1.0), (1.0, 2.0)] }],
            Some(&[(0.0, 0.5, 1.5), (1.0, 1.5, 2.5)]),
        );
        assert!(svg.contains("a&lt;b") && svg.contains("<polygon"));
        let svg = index_chart("s", &[(0, 0.1), (10, 0.5)]);
        assert_eq!(svg.matches("<title>#").count(), 2);
    }
}
