//! Results table and plain-text report.

use std::fmt::Write;

use polyevidence::PosteriorRow;

pub const RESULTS_SCHEMA: &str = "# polyevidence-results v1";
pub const RESULTS_COLUMNS: [&str; 8] = ["id", "l", "basis", "log_z", "probability", "chi_eps2", "method", "status"];

/// Shortest round-trip form, in exponent notation outside `[1e-4, 1e15)`.
/// Used by both the table and the report.
pub fn format_value(v: f64) -> String {
    let a = v.abs();
    if v.is_finite() && a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn row_fields(row: &PosteriorRow) -> [String; 8] {
    [
        row.id.to_string(),
        row.l.to_string(),
        row.label.clone(),
        format_value(row.log_z),
        format_value(row.probability),
        format_value(row.chi_eps2),
        row.method.map_or("-", |m| m.as_str()).to_string(),
        row.status.as_str().to_string(),
    ]
}

/// Tab-separated table: schema line, `# key=value` metadata lines, column
/// header, then one line per row.
pub fn results_table(metadata: &[(String, String)], rows: &[PosteriorRow]) -> String {
    let mut out = String::new();
    out.push_str(RESULTS_SCHEMA);
    out.push('\n');
    for (k, v) in metadata {
        let _ = writeln!(out, "# {k}={v}");
    }
    out.push_str(&RESULTS_COLUMNS.join("\t"));
    out.push('\n');
    for row in rows {
        out.push_str(&row_fields(row).join("\t"));
        out.push('\n');
    }
    out
}

/// A parsed results table.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultsTable {
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<Vec<String>>,
}

impl ResultsTable {
    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let i = RESULTS_COLUMNS.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[i].as_str()).collect())
    }
}

/// Reads back a table written by [`results_table`].
pub fn parse_results_table(text: &str) -> Result<ResultsTable, String> {
    let mut lines = text.lines();
    if lines.next() != Some(RESULTS_SCHEMA) {
        return Err("missing schema line".into());
    }
    let mut metadata = Vec::new();
    let mut rows = Vec::new();
    let mut header_seen = false;
    for line in lines {
        if let Some(meta) = line.strip_prefix("# ") {
            let (k, v) = meta.split_once('=').ok_or_else(|| format!("bad metadata line {line:?}"))?;
            metadata.push((k.to_string(), v.to_string()));
        } else if !header_seen {
            if line.split('\t').ne(RESULTS_COLUMNS.iter().copied()) {
                return Err(format!("unexpected header {line:?}"));
            }
            header_seen = true;
        } else {
            let fields: Vec<String> = line.split('\t').map(str::to_string).collect();
            if fields.len() != RESULTS_COLUMNS.len() {
                return Err(format!("row has {} fields: {line:?}", fields.len()));
            }
            rows.push(fields);
        }
    }
    Ok(ResultsTable { metadata, rows })
}

/// Human-readable listing of rows, best first by probability.
pub fn rows_section(rows: &[PosteriorRow], limit: usize) -> String {
    let mut order: Vec<&PosteriorRow> = rows.iter().collect();
    order.sort_by(|a, b| b.probability.total_cmp(&a.probability).then(a.id.cmp(&b.id)));
    let mut out = String::new();
    let _ = writeln!(out, "{:>8}  {:>3}  {:>24}  {:>22}  {:>10}  basis", "id", "l", "probability", "log_z", "status");
    for row in order.into_iter().take(limit) {
        let _ = writeln!(
            out,
            "{:>8}  {:>3}  {:>24}  {:>22}  {:>10}  {}",
            row.id,
            row.l,
            format_value(row.probability),
            format_value(row.log_z),
            row.status.as_str(),
            row.label
        );
    }
    out
}
