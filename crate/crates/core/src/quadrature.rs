//! Globally adaptive 15-point Gauss–Kronrod quadrature on a finite interval.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
    /// Number of equal pieces the interval is cut into before adapting.
    pub initial_pieces: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 0.0,
            max_intervals: 4000,
            initial_pieces: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureEstimate {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

fn gauss_kronrod<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        lo,
        hi,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrates `f` over `[lo, hi]`, always bisecting the segment with the
/// largest error estimate until the total error meets the tolerance.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    opts: QuadratureOptions,
) -> Result<QuadratureEstimate> {
    if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
        return Err(Error::InvalidInput(format!(
            "quadrature interval [{lo}, {hi}] must be finite and non-empty"
        )));
    }
    let pieces = opts.initial_pieces.max(1);
    let width = (hi - lo) / pieces as f64;
    let mut segments: Vec<Segment> = (0..pieces)
        .map(|i| {
            let a = lo + width * i as f64;
            let b = if i + 1 == pieces { hi } else { a + width };
            gauss_kronrod(&mut f, a, b)
        })
        .collect();

    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::QuadratureNotConverged {
                estimate: value,
                error_estimate: error,
                intervals: segments.len(),
                detail: "integrand produced a non-finite value".into(),
            });
        }
        if error <= opts.abs_tol.max(opts.rel_tol * value.abs()) {
            return Ok(QuadratureEstimate {
                value,
                error,
                intervals: segments.len(),
            });
        }
        if segments.len() >= opts.max_intervals {
            return Err(Error::QuadratureNotConverged {
                estimate: value,
                error_estimate: error,
                intervals: segments.len(),
                detail: format!("interval limit {} reached", opts.max_intervals),
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.lo + seg.hi);
        if mid <= seg.lo || mid >= seg.hi {
            return Err(Error::QuadratureNotConverged {
                estimate: value,
                error_estimate: error,
                intervals: segments.len() + 1,
                detail: "segment collapsed to machine precision".into(),
            });
        }
        segments.push(gauss_kronrod(&mut f, seg.lo, mid));
        segments.push(gauss_kronrod(&mut f, mid, seg.hi));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_is_exact() {
        let est = integrate(|x| x.powi(5) - 3.0 * x * x + 1.0, -1.0, 2.0, QuadratureOptions::default()).unwrap();
        // ∫ x^5 - 3x^2 + 1 = [x^6/6 - x^3 + x]
        let exact = (64.0 / 6.0 - 8.0 + 2.0) - (1.0 / 6.0 + 1.0 - 1.0);
        assert_relative_eq!(est.value, exact, max_relative = 1e-14);
    }

    #[test]
    fn peaked_gaussian() {
        let est = integrate(
            |x| (-(x - 0.3).powi(2) / (2.0 * 1e-4)).exp(),
            -10.0,
            10.0,
            QuadratureOptions::default(),
        )
        .unwrap();
        assert_relative_eq!(est.value, (2.0 * std::f64::consts::PI * 1e-4).sqrt(), max_relative = 1e-11);
    }

    #[test]
    fn rejects_bad_interval_and_reports_nonconvergence() {
        assert!(integrate(|x| x, 1.0, 1.0, QuadratureOptions::default()).is_err());
        let opts = QuadratureOptions {
            max_intervals: 20,
            ..Default::default()
        };
        let err = integrate(|x| (1.0 / x).sin(), 1e-8, 1.0, opts).unwrap_err();
        assert!(matches!(err, Error::QuadratureNotConverged { .. }));
    }
}
