//! Special functions in logarithmic form.
//!
//! Everything here returns natural logarithms so that evidences for large `N`
//! (which routinely over- or underflow `f64`) can be combined safely.

use crate::error::{Error, Result};

const LN_2PI_HALF: f64 = 0.918_938_533_204_672_7;

/// Largest argument accepted by [`log_reg_hyp2f1`]. Beyond it the series needs
/// millions of terms and callers should switch to quadrature.
pub const HYP2F1_MAX_Z: f64 = 0.999;

const HYP2F1_MAX_TERMS: usize = 5_000_000;
const INC_GAMMA_MAX_TERMS: usize = 100_000;

// Stirling correction coefficients B_{2k} / (2k (2k - 1)).
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Natural log of Γ(x) for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            function: "log_gamma",
            detail: format!("x = {x} must be positive and finite"),
        });
    }
    Ok(ln_gamma(x))
}

/// Unchecked log-gamma; callers guarantee `x > 0`.
pub(crate) fn ln_gamma(x: f64) -> f64 {
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    if x.fract() == 0.0 && x <= 20.0 {
        let mut f = 1.0_f64;
        let mut k = 2.0;
        while k < x {
            f *= k;
            k += 1.0;
        }
        return f.ln();
    }
    let mut shifted = x;
    let mut prod = 1.0_f64;
    while shifted < 15.0 {
        prod *= shifted;
        shifted += 1.0;
    }
    stirling(shifted) - prod.ln()
}

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv;
    for c in STIRLING {
        series += c * pow;
        pow *= inv2;
    }
    (x - 0.5) * x.ln() - x + LN_2PI_HALF + series
}

fn check_incomplete_args(function: &'static str, a: f64, x: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() || !(x >= 0.0) || x.is_nan() {
        return Err(Error::Domain {
            function,
            detail: format!("need a > 0 and x >= 0, got a = {a}, x = {x}"),
        });
    }
    Ok(())
}

/// `ln Σ_k x^k / (a (a+1) ... (a+k))`, so that `γ(a, x) = x^a e^{-x} · exp(result)`.
fn lower_series(a: f64, x: f64) -> Result<f64> {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut denom = a;
    for _ in 0..INC_GAMMA_MAX_TERMS {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if term.abs() < sum.abs() * f64::EPSILON * 0.25 {
            return Ok(sum.ln());
        }
    }
    Err(Error::SeriesNotConverged {
        function: "lower incomplete gamma",
        iterations: INC_GAMMA_MAX_TERMS,
    })
}

/// Continued fraction (modified Lentz) for Γ(a, x) = e^{-x} x^a · h; returns ln h.
fn upper_continued_fraction(a: f64, x: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..INC_GAMMA_MAX_TERMS {
        let fi = i as f64;
        let an = -fi * (fi - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < f64::EPSILON {
            return Ok(h.ln());
        }
    }
    Err(Error::SeriesNotConverged {
        function: "upper incomplete gamma",
        iterations: INC_GAMMA_MAX_TERMS,
    })
}

/// Natural log of the upper incomplete gamma function Γ(a, x) = ∫_x^∞ t^{a-1} e^{-t} dt.
///
/// Uses the power series for the lower function when `x < a + 1` and a
/// continued fraction otherwise.
pub fn log_upper_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    check_incomplete_args("log_upper_incomplete_gamma", a, x)?;
    if x == 0.0 {
        return Ok(ln_gamma(a));
    }
    if x.is_infinite() {
        return Ok(f64::NEG_INFINITY);
    }
    if x < a + 1.0 {
        let lg = ln_gamma(a);
        let log_lower = a * x.ln() - x + lower_series(a, x)?;
        let p = (log_lower - lg).exp();
        Ok(lg + (-p).ln_1p())
    } else {
        Ok(-x + a * x.ln() + upper_continued_fraction(a, x)?)
    }
}

/// Natural log of `γ(a, x) / x^a`, where γ is the lower incomplete gamma function.
///
/// The scaling keeps the value finite at `x = 0`, where it equals `-ln a`.
pub fn log_lower_incomplete_gamma_scaled(a: f64, x: f64) -> Result<f64> {
    check_incomplete_args("log_lower_incomplete_gamma_scaled", a, x)?;
    if x.is_infinite() {
        return Ok(f64::NEG_INFINITY);
    }
    if x < a + 1.0 {
        Ok(-x + lower_series(a, x)?)
    } else {
        let lg = ln_gamma(a);
        let log_upper = -x + a * x.ln() + upper_continued_fraction(a, x)?;
        let q = (log_upper - lg).exp();
        Ok(lg + (-q).ln_1p() - a * x.ln())
    }
}

/// Terms `t_k = (a)_k (b)_k / ((c)_k k!) z^k` of the Gauss series, starting at `t_0 = 1`.
///
/// Terms are produced in plain `f64` and can overflow for extreme parameters;
/// [`log_reg_hyp2f1`] rescales while summing.
#[derive(Debug, Clone)]
pub struct Hyp2F1Terms {
    a: f64,
    b: f64,
    c: f64,
    z: f64,
    k: usize,
    term: f64,
}

impl Hyp2F1Terms {
    pub fn new(a: f64, b: f64, c: f64, z: f64) -> Self {
        Self {
            a,
            b,
            c,
            z,
            k: 0,
            term: 1.0,
        }
    }

    fn ratio(&self, k: usize) -> f64 {
        let k = k as f64;
        (self.a + k) * (self.b + k) / ((self.c + k) * (1.0 + k)) * self.z
    }
}

impl Iterator for Hyp2F1Terms {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let out = self.term;
        self.term *= self.ratio(self.k);
        self.k += 1;
        Some(out)
    }
}

/// Natural log of the regularized Gauss hypergeometric function
/// ₂F̃₁(a, b; c; z) = ₂F₁(a, b; c; z) / Γ(c).
///
/// Only the convergent, all-positive regime is supported: `a, b >= 0`, `c > 0`
/// and `0 <= z <= HYP2F1_MAX_Z`. Arguments outside it return
/// [`Error::Domain`] so the caller can fall back to quadrature.
pub fn log_reg_hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if !(a >= 0.0 && b >= 0.0 && c > 0.0) || !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(Error::Domain {
            function: "log_reg_hyp2f1",
            detail: format!("need a, b >= 0 and c > 0, got a = {a}, b = {b}, c = {c}"),
        });
    }
    if !(0.0..=HYP2F1_MAX_Z).contains(&z) {
        return Err(Error::Domain {
            function: "log_reg_hyp2f1",
            detail: format!("z = {z} outside the series domain [0, {HYP2F1_MAX_Z}]; use the quadrature path"),
        });
    }
    Ok(log_hyp2f1_series(a, b, c, z)? - ln_gamma(c))
}

/// ln ₂F₁(a, b; c; z) by direct summation with overflow rescaling.
fn log_hyp2f1_series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    const RESCALE: f64 = 1e280;
    let ln_rescale = RESCALE.ln();
    if z == 0.0 {
        return Ok(0.0);
    }
    let mut terms = Hyp2F1Terms::new(a, b, c, z);
    let mut sum = 0.0_f64;
    let mut log_shift = 0.0_f64;
    for k in 0..HYP2F1_MAX_TERMS {
        let t = terms.next().unwrap_or(0.0);
        sum += t;
        if sum > RESCALE {
            sum /= RESCALE;
            terms.term /= RESCALE;
            log_shift += ln_rescale;
        }
        if terms.term == 0.0 {
            return Ok(sum.ln() + log_shift);
        }
        // Once the term ratio drops below one the tail is bounded by a geometric series.
        let r = terms.ratio(k + 1).max(z);
        if r < 1.0 && terms.term * r / (1.0 - r) <= sum * 1e-17 {
            return Ok((sum + terms.term).ln() + log_shift);
        }
    }
    Err(Error::SeriesNotConverged {
        function: "hypergeometric 2F1",
        iterations: HYP2F1_MAX_TERMS,
    })
}

/// `ln Σ exp(x_i)` computed without overflow. Empty input gives `-∞`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = xs.iter().map(|&x| (x - max).exp()).sum();
    max + sum.ln()
}

/// `ln(exp(a) - exp(b))` for `a > b`, as `a + ln(1 - exp(b - a))`.
pub fn log_diff_exp(a: f64, b: f64) -> f64 {
    debug_assert!(a > b, "log_diff_exp needs a > b (a = {a}, b = {b})");
    a + (-(b - a).exp()).ln_1p()
}
