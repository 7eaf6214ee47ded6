//! Model evidence for a linear model with unknown noise scale.
//!
//! With a Jeffreys prior on σ, a Jeffreys prior on the data scale β and the
//! maximum-entropy Gaussian prior `a ~ N(0, (β² − σ²)(WᵀW)⁻¹)`, integrating out
//! `a` and β leaves
//!
//! ```text
//! Z = (2π)^{-N/2} 2^{l/2-1} |ŷ|^{-l} ∫₀^∞ σ^{l-N-1} exp(-yᵀê / 2σ²) γ(l/2, |ŷ|²/2σ²) dσ
//! ```
//!
//! and the σ-integral has the closed form (with `m = (N-l)/2`, `z = yᵀê/|ŷ|²`)
//!
//! ```text
//! Z = Γ(m) / (4 π^{N/2}) · [ Γ(l/2) |ŷ|^{-l} (yᵀê)^{-m}
//!                           − Γ(N/2) ₂F̃₁(N/2, m; m+1; −z) |ŷ|^{-N} ].
//! ```
//!
//! Note the second term: its gamma factor is Γ(N/2), and the hypergeometric
//! function has first parameter N/2 and argument −z. A variant
//! with `₂F̃₁(l/2, m; m+1; +z)` does not match the integral; the tests in this
//! module pin the formula against [`log_evidence_quadrature`].
//!
//! The negative argument is handled with the Pfaff transformation
//! `₂F₁(N/2, m; m+1; −z) = (1+z)^{-N/2} ₂F₁(1, N/2; m+1; z/(1+z))`, whose series
//! has positive terms. When the two terms nearly cancel, the algebraically
//! equivalent single-term form
//!
//! ```text
//! Z = Γ(N/2) / (4 π^{N/2} · l/2) · (|ŷ|² + yᵀê)^{-N/2} · ₂F₁(1, N/2; l/2+1; |ŷ|²/(|ŷ|² + yᵀê))
//! ```
//!
//! is used instead. It also stays finite when `|ŷ| = 0` (a constant-only model
//! on centered data).
//!
//! All results are natural logs and keep every model-independent constant, so
//! closed-form and quadrature values are comparable in absolute terms. The
//! improper priors leave a common unknown scale factor that cancels on
//! normalization.

use std::f64::consts::{LN_2, PI};
use std::fmt;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureOptions};
use crate::regression::FitResult;
use crate::special::{
    ln_gamma, log_diff_exp, log_lower_incomplete_gamma_scaled, log_reg_hyp2f1, HYP2F1_MAX_Z,
};

/// `yᵀê < EXACT_FIT_TOLERANCE · |ŷ|²` is treated as an exact fit.
pub const EXACT_FIT_TOLERANCE: f64 = 1e-12;

/// The two-term difference is only trusted while its second term
/// stays below this fraction of the first.
const MAX_CANCELLATION: f64 = 0.9;

/// Largest `yᵀê/|ŷ|²` for which the two-term form is attempted.
const TWO_TERM_MAX_RATIO: f64 = 1.0;

/// Half-width, in units of ln σ, of the quadrature window around the peak.
pub const QUADRATURE_HALF_WINDOW: f64 = 40.0;

/// Declared relative accuracy of the quadrature path; also the tolerance of the
/// window-doubling check.
pub const QUADRATURE_ACCURACY: f64 = 1e-8;

/// Sufficient statistics of a least-squares fit for the evidence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvidenceInput {
    pub n_data: usize,
    pub n_params: usize,
    /// `|ŷ|²`
    pub chi_y2: f64,
    /// `yᵀê`
    pub y_dot_e: f64,
}

impl EvidenceInput {
    pub fn new(n_data: usize, n_params: usize, chi_y2: f64, y_dot_e: f64) -> Result<Self> {
        if n_params == 0 {
            return Err(Error::InvalidInput("a model needs at least one parameter".into()));
        }
        if n_data <= n_params {
            return Err(Error::TooFewPoints {
                n: n_data,
                l: n_params,
            });
        }
        if !(chi_y2 >= 0.0) || !chi_y2.is_finite() || !y_dot_e.is_finite() {
            return Err(Error::InvalidInput(format!(
                "need finite |ŷ|² >= 0 and finite yᵀê, got {chi_y2}, {y_dot_e}"
            )));
        }
        if chi_y2 == 0.0 && y_dot_e <= 0.0 {
            return Err(Error::InvalidInput(
                "both |ŷ|² and yᵀê vanish: the data are identically zero".into(),
            ));
        }
        Ok(Self {
            n_data,
            n_params,
            chi_y2,
            y_dot_e,
        })
    }

    pub fn from_fit(fit: &FitResult) -> Result<Self> {
        Self::new(fit.residuals.len(), fit.coefficients.len(), fit.chi_y2, fit.y_dot_e)
    }

    pub fn is_exact_fit(&self) -> bool {
        self.y_dot_e < EXACT_FIT_TOLERANCE * self.chi_y2
    }

    fn n(&self) -> f64 {
        self.n_data as f64
    }

    fn l(&self) -> f64 {
        self.n_params as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EvidenceMethod {
    ClosedForm,
    Quadrature,
    AsymptoticP1,
    AsymptoticP2,
    Gull,
}

impl EvidenceMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::ClosedForm => "closed-form",
            Self::Quadrature => "quadrature",
            Self::AsymptoticP1 => "asymptotic-p1",
            Self::AsymptoticP2 => "asymptotic-p2",
            Self::Gull => "gull",
        }
    }
}

impl fmt::Display for EvidenceMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvidenceResult {
    /// Natural log of the evidence, up to the scale factor shared by all models.
    pub log_z: f64,
    pub method: EvidenceMethod,
    /// Set when the residuals vanish; `log_z` is then `+∞`.
    pub degenerate_exact_fit: bool,
}

impl EvidenceResult {
    fn value(log_z: f64, method: EvidenceMethod) -> Self {
        Self {
            log_z,
            method,
            degenerate_exact_fit: false,
        }
    }

    fn exact_fit(method: EvidenceMethod) -> Self {
        Self {
            log_z: f64::INFINITY,
            method,
            degenerate_exact_fit: true,
        }
    }
}

/// `-ln 4 - (N/2) ln π`, common to every closed-form expression.
fn log_constant(n: f64) -> f64 {
    -2.0 * LN_2 - 0.5 * n * PI.ln()
}

/// Logs of the two terms of the closed form, without the common constant.
///
/// Returns `None` when the hypergeometric argument leaves the series domain.
fn log_terms(input: &EvidenceInput) -> Result<Option<(f64, f64)>> {
    let (n, l) = (input.n(), input.l());
    let (half_l, half_n, m) = (0.5 * l, 0.5 * n, 0.5 * (n - l));
    let (y2, e) = (input.chi_y2, input.y_dot_e);
    let w = e / (y2 + e);
    if w > HYP2F1_MAX_Z {
        return Ok(None);
    }
    let log_t1 = ln_gamma(m) + ln_gamma(half_l) - half_l * y2.ln() - m * e.ln();
    let log_t2 = ln_gamma(m) + ln_gamma(half_n) - half_n * (y2 + e).ln()
        + log_reg_hyp2f1(1.0, half_n, m + 1.0, w)?;
    Ok(Some((log_t1, log_t2)))
}

/// The two-term closed form, evaluated literally as `ln(term1 − term2)`.
///
/// Fails with [`Error::NonPositiveEvidence`] if rounding makes `term2 >= term1`
/// and with [`Error::Domain`] if `z` is too large for the series. Most callers
/// want [`log_evidence_closed`], which picks the better-conditioned form.
pub fn log_evidence_two_term(input: &EvidenceInput) -> Result<EvidenceResult> {
    if input.is_exact_fit() {
        return Ok(EvidenceResult::exact_fit(EvidenceMethod::ClosedForm));
    }
    if input.chi_y2 == 0.0 {
        return Err(Error::Domain {
            function: "log_evidence_two_term",
            detail: "|ŷ| = 0; use the single-term form".into(),
        });
    }
    let (log_t1, log_t2) = log_terms(input)?.ok_or_else(|| Error::Domain {
        function: "log_evidence_two_term",
        detail: format!("yᵀê/|ŷ|² = {} too large for the series", input.y_dot_e / input.chi_y2),
    })?;
    if log_t2 >= log_t1 {
        return Err(Error::NonPositiveEvidence {
            log_term1: log_t1,
            log_term2: log_t2,
        });
    }
    Ok(EvidenceResult::value(
        log_constant(input.n()) + log_diff_exp(log_t1, log_t2),
        EvidenceMethod::ClosedForm,
    ))
}

/// Single-term form; `None` if `|ŷ|²/(|ŷ|²+yᵀê)` leaves the series domain.
fn log_single_term(input: &EvidenceInput) -> Result<Option<f64>> {
    let (n, l) = (input.n(), input.l());
    let (half_l, half_n) = (0.5 * l, 0.5 * n);
    let (y2, e) = (input.chi_y2, input.y_dot_e);
    let v = y2 / (y2 + e);
    if v > HYP2F1_MAX_Z {
        return Ok(None);
    }
    // ln ₂F₁ = ln ₂F̃₁ + ln Γ(c)
    let log_f = log_reg_hyp2f1(1.0, half_n, half_l + 1.0, v)? + ln_gamma(half_l + 1.0);
    Ok(Some(
        log_constant(n) + ln_gamma(half_n) - half_l.ln() - half_n * (y2 + e).ln() + log_f,
    ))
}

/// Closed-form log-evidence.
///
/// Exact fits (`yᵀê < 1e-12 |ŷ|²`) return `+∞` with `degenerate_exact_fit` set.
/// If neither series form is usable the value is computed by
/// [`log_evidence_quadrature`] and tagged accordingly.
pub fn log_evidence_closed(input: &EvidenceInput) -> Result<EvidenceResult> {
    if input.is_exact_fit() {
        return Ok(EvidenceResult::exact_fit(EvidenceMethod::ClosedForm));
    }
    if input.chi_y2 > 0.0 && input.y_dot_e <= TWO_TERM_MAX_RATIO * input.chi_y2 {
        if let Some((log_t1, log_t2)) = log_terms(input)? {
            if log_t2 - log_t1 <= MAX_CANCELLATION.ln() {
                return Ok(EvidenceResult::value(
                    log_constant(input.n()) + log_diff_exp(log_t1, log_t2),
                    EvidenceMethod::ClosedForm,
                ));
            }
        }
    }
    match log_single_term(input)? {
        Some(log_z) => Ok(EvidenceResult::value(log_z, EvidenceMethod::ClosedForm)),
        None => log_evidence_quadrature(input),
    }
}

/// Log-evidence by direct numerical integration over σ. This is the oracle
/// for [`log_evidence_closed`] and shares none of its special-function path
/// beyond the lower incomplete gamma in the integrand.
pub fn log_evidence_quadrature(input: &EvidenceInput) -> Result<EvidenceResult> {
    log_evidence_quadrature_with_shape(input, 0.5 * input.l())
}

/// Like [`log_evidence_quadrature`], but with the first argument of the
/// incomplete gamma function in the integrand chosen by the caller. The
/// β-integration gives `shape = l/2`; other values exist to test alternative
/// readings of the integrand.
pub fn log_evidence_quadrature_with_shape(input: &EvidenceInput, shape: f64) -> Result<EvidenceResult> {
    if input.is_exact_fit() {
        return Ok(EvidenceResult::exact_fit(EvidenceMethod::Quadrature));
    }
    if !(input.y_dot_e > 0.0) {
        return Err(Error::InvalidInput(format!(
            "quadrature needs yᵀê > 0, got {}",
            input.y_dot_e
        )));
    }
    if !(shape > 0.0) {
        return Err(Error::InvalidInput(format!("shape must be positive, got {shape}")));
    }
    let (n, l) = (input.n(), input.l());
    let half_l = 0.5 * l;
    let (y2, e) = (input.chi_y2, input.y_dot_e);
    if y2 == 0.0 && shape != half_l {
        return Err(Error::InvalidInput(
            "|ŷ| = 0 only has a finite limit for shape = l/2".into(),
        ));
    }
    let log_y2 = if y2 > 0.0 { y2.ln() } else { 0.0 };

    // u = ln σ, x = 1/(2σ²). The integrand of ∫ … dσ = ∫ … σ du, with the
    // |ŷ|^{-l} prefactor folded into γ(shape, |ŷ|² x) / |ŷ|^l.
    let log_integrand = |u: f64| -> f64 {
        let x = 0.5 * (-2.0 * u).exp();
        let lower = match log_lower_incomplete_gamma_scaled(shape, y2 * x) {
            Ok(v) => v,
            Err(_) => return f64::NEG_INFINITY,
        };
        (l - n) * u - e * x + (shape - half_l) * log_y2 + shape * x.ln() + lower
    };

    // Peak of σ^{l-N} exp(-yᵀê/2σ²) in u.
    let peak = 0.5 * (e / (n - l)).ln();
    let window = |half: f64| -> Result<f64> {
        let (lo, hi) = (peak - half, peak + half);
        let grid = 400;
        let scale = (0..=grid)
            .map(|i| log_integrand(lo + (hi - lo) * i as f64 / grid as f64))
            .fold(f64::NEG_INFINITY, f64::max);
        if !scale.is_finite() {
            return Err(Error::QuadratureNotConverged {
                estimate: f64::NAN,
                error_estimate: f64::NAN,
                intervals: 0,
                detail: "integrand has no finite values in the window".into(),
            });
        }
        let est = integrate(
            |u| (log_integrand(u) - scale).exp(),
            lo,
            hi,
            QuadratureOptions {
                rel_tol: 1e-13,
                max_intervals: 8000,
                initial_pieces: 32,
                ..Default::default()
            },
        )?;
        Ok(scale + est.value.ln())
    };

    let log_integral = window(QUADRATURE_HALF_WINDOW)?;
    let check = window(2.0 * QUADRATURE_HALF_WINDOW)?;
    if (check - log_integral).abs() > QUADRATURE_ACCURACY {
        return Err(Error::QuadratureNotConverged {
            estimate: log_integral,
            error_estimate: (check - log_integral).abs(),
            intervals: 0,
            detail: format!("window doubling changed ln Z from {log_integral} to {check}"),
        });
    }
    // (2π)^{-N/2} 2^{l/2 - 1}
    let log_prefactor = -0.5 * n * (2.0 * PI).ln() + (half_l - 1.0) * LN_2;
    Ok(EvidenceResult::value(log_prefactor + log_integral, EvidenceMethod::Quadrature))
}

/// Large-sample approximations of the evidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AsymptoticRegime {
    /// `Γ(m)Γ(l/2)(χ_y/χ_ε)^{N-l} − Γ(N/2)(1 + χ_ε²/χ_y²)^{-N/2}`
    P1,
    /// Good data and good models: the first term of P1 alone.
    P2,
    /// Log form of P2; numerically identical, tagged separately.
    Gull,
}

/// Offset that turns a closed-form `log_z` into the scale of the asymptotic
/// forms, which omit `4 π^{N/2} |ŷ|^N`: `p ≈ log_z + offset`.
pub fn asymptotic_offset(input: &EvidenceInput) -> f64 {
    -log_constant(input.n()) + 0.5 * input.n() * input.chi_y2.ln()
}

/// Asymptotic log-evidence, identifying `χ_ε² = yᵀê` and `χ_y² = |ŷ|²`.
///
/// These drop the `|ŷ|^{-N}` factor, so values are only comparable between
/// models fitted to the same data.
pub fn log_evidence_asymptotic(input: &EvidenceInput, regime: AsymptoticRegime) -> Result<EvidenceResult> {
    let method = match regime {
        AsymptoticRegime::P1 => EvidenceMethod::AsymptoticP1,
        AsymptoticRegime::P2 => EvidenceMethod::AsymptoticP2,
        AsymptoticRegime::Gull => EvidenceMethod::Gull,
    };
    if input.y_dot_e <= 0.0 || input.is_exact_fit() {
        return Ok(EvidenceResult::exact_fit(method));
    }
    if input.chi_y2 == 0.0 {
        return Err(Error::InvalidInput(
            "asymptotic forms need |ŷ| > 0".into(),
        ));
    }
    let (n, l) = (input.n(), input.l());
    let (half_l, half_n, m) = (0.5 * l, 0.5 * n, 0.5 * (n - l));
    let ratio2 = input.y_dot_e / input.chi_y2;
    // Γ(m) Γ(l/2) (χ_y/χ_ε)^{N-l}
    let log_t1 = ln_gamma(m) + ln_gamma(half_l) - m * ratio2.ln();
    let log_z = match regime {
        AsymptoticRegime::P2 | AsymptoticRegime::Gull => log_t1,
        AsymptoticRegime::P1 => {
            let log_t2 = ln_gamma(half_n) - half_n * ratio2.ln_1p();
            if log_t2 >= log_t1 {
                return Err(Error::NonPositiveEvidence {
                    log_term1: log_t1,
                    log_term2: log_t2,
                });
            }
            log_diff_exp(log_t1, log_t2)
        }
    };
    Ok(EvidenceResult::value(log_z, method))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn input(n: usize, l: usize, y2: f64, e: f64) -> EvidenceInput {
        EvidenceInput::new(n, l, y2, e).unwrap()
    }

    // ln Z from 50-digit mpmath quadrature of the σ-integral.
    const REFERENCE: [(usize, usize, f64, f64, f64); 8] = [
        (50, 6, 100.0, 8.0, -43.494_479_903_238_706_162),
        (10, 1, 1.0, 1.0, -4.098_911_614_792_475_640_6),
        (10, 3, 1.0, 0.5, -3.647_495_931_159_267_294_8),
        (20, 5, 2.0, 3.0, -15.134_389_311_168_153_923),
        (200, 5, 1.0, 1e-4, 1_130.099_060_089_522_057_7),
        (10, 9, 1.0, 10.0, -17.339_061_110_307_904_746),
        (21, 20, 1.0, 0.5, -5.003_716_947_710_905_332_1),
        (50, 1, 1e-30, 4.0, -9.184_023_956_679_895_943_8),
    ];

    #[test]
    fn closed_form_matches_reference() {
        for (n, l, y2, e, want) in REFERENCE {
            let got = log_evidence_closed(&input(n, l, y2, e)).unwrap();
            assert_eq!(got.method, EvidenceMethod::ClosedForm);
            assert!((got.log_z - want).abs() < 1e-9, "N={n} l={l}: {} vs {want}", got.log_z);
        }
    }

    #[test]
    fn quadrature_matches_reference() {
        for (n, l, y2, e, want) in REFERENCE {
            let got = log_evidence_quadrature(&input(n, l, y2, e)).unwrap();
            assert!((got.log_z - want).abs() < 1e-8, "N={n} l={l}: {} vs {want}", got.log_z);
        }
    }

    #[test]
    fn two_term_form_agrees_where_well_conditioned() {
        for (n, l, y2, e) in [(50, 6, 100.0, 8.0), (30, 5, 1.0, 0.05), (10, 3, 1.0, 0.5)] {
            let inp = input(n, l, y2, e);
            let a = log_evidence_two_term(&inp).unwrap().log_z;
            let b = log_single_term(&inp).unwrap().unwrap();
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn zero_fitted_power_has_finite_limit() {
        let r = log_evidence_closed(&input(50, 1, 0.0, 4.0)).unwrap();
        assert!((r.log_z - -9.184_023_956_679_895_943_8).abs() < 1e-9);
        let q = log_evidence_quadrature(&input(50, 1, 0.0, 4.0)).unwrap();
        assert!((q.log_z - r.log_z).abs() < 1e-8);
        assert!(log_evidence_two_term(&input(50, 1, 0.0, 4.0)).is_err());
    }

    #[test]
    fn plus_z_variants_do_not_match_the_integral() {
        // The variant Γ(m)[Γ(l/2)|ŷ|^{-l}(yᵀê)^{-m} − G ₂F̃₁(l/2, m; m+1; +z)|ŷ|^{-N}]
        // misses the integral for either G = Γ(l/2) or G = Γ(N/2).
        let inp = input(10, 3, 1.0, 0.5);
        let (n, l) = (10.0_f64, 3.0_f64);
        let m = 0.5 * (n - l);
        let oracle = log_evidence_quadrature(&inp).unwrap().log_z;
        let t1 = ln_gamma(m) + ln_gamma(0.5 * l) - m * 0.5_f64.ln();
        let hyp = log_reg_hyp2f1(0.5 * l, m, m + 1.0, 0.5).unwrap();
        for log_g in [ln_gamma(0.5 * l), ln_gamma(0.5 * n)] {
            let t2 = ln_gamma(m) + log_g + hyp;
            let variant = log_constant(n) + log_diff_exp(t1, t2);
            assert!((variant - oracle).abs() > 1e-2, "variant {variant} vs {oracle}");
        }
    }

    #[test]
    fn other_incomplete_gamma_shapes_disagree() {
        let inp = input(20, 5, 2.0, 3.0);
        let right = log_evidence_quadrature_with_shape(&inp, 2.5).unwrap().log_z;
        let wrong = log_evidence_quadrature_with_shape(&inp, 10.0).unwrap().log_z;
        assert!((right - -15.134_389_311_168_153_923).abs() < 1e-8);
        assert!((right - wrong).abs() > 1e-2);
    }

    #[test]
    fn exact_fit_is_degenerate() {
        let r = log_evidence_closed(&input(20, 3, 5.0, 1e-14)).unwrap();
        assert!(r.degenerate_exact_fit);
        assert_eq!(r.log_z, f64::INFINITY);
        // Approaching the limit from above, the evidence keeps growing.
        let mut last = f64::NEG_INFINITY;
        for k in 1..10 {
            let e = 10f64.powi(-k);
            let v = log_evidence_closed(&input(20, 3, 5.0, e)).unwrap();
            assert!(!v.degenerate_exact_fit);
            assert!(v.log_z > last);
            last = v.log_z;
        }
    }

    #[test]
    fn scale_law_both_methods() {
        let lambda: f64 = 2.0;
        for (n, l, y2, e) in [(50, 6, 100.0, 8.0), (10, 1, 1.0, 1.0), (30, 4, 1.0, 5.0)] {
            let base = input(n, l, y2, e);
            let scaled = input(n, l, y2 * lambda * lambda, e * lambda * lambda);
            let shift = -(n as f64) * lambda.ln();
            let c0 = log_evidence_closed(&base).unwrap().log_z;
            let c1 = log_evidence_closed(&scaled).unwrap().log_z;
            assert!((c1 - c0 - shift).abs() < 1e-9, "closed: {}", c1 - c0 - shift);
            let q0 = log_evidence_quadrature(&base).unwrap().log_z;
            let q1 = log_evidence_quadrature(&scaled).unwrap().log_z;
            assert!((q1 - q0 - shift).abs() < 1e-8, "quadrature: {}", q1 - q0 - shift);
        }
    }

    #[test]
    fn quadrature_is_stable_under_window_change() {
        let r = log_evidence_quadrature(&input(10, 1, 1.0, 1.0)).unwrap();
        assert!(r.log_z.is_finite());
        assert_relative_eq!(r.log_z, -4.098_911_614_792_475_640_6, epsilon = 1e-8);
    }

    #[test]
    fn asymptotic_forms() {
        let inp = input(200, 5, 1.0, 1e-4);
        let p2 = log_evidence_asymptotic(&inp, AsymptoticRegime::P2).unwrap();
        let gull = log_evidence_asymptotic(&inp, AsymptoticRegime::Gull).unwrap();
        assert_eq!(p2.log_z, gull.log_z);
        assert_eq!(gull.method, EvidenceMethod::Gull);
        let closed = log_evidence_closed(&inp).unwrap().log_z + asymptotic_offset(&inp);
        assert!(((p2.log_z - closed) / closed).abs() < 0.01);
        let p1 = log_evidence_asymptotic(&inp, AsymptoticRegime::P1).unwrap();
        assert!(p1.log_z <= p2.log_z);
        let zero = log_evidence_asymptotic(&input(20, 2, 1.0, 0.0), AsymptoticRegime::P2).unwrap();
        assert!(zero.degenerate_exact_fit);
    }

    #[test]
    fn input_validation() {
        assert!(matches!(EvidenceInput::new(5, 5, 1.0, 1.0), Err(Error::TooFewPoints { .. })));
        assert!(EvidenceInput::new(5, 0, 1.0, 1.0).is_err());
        assert!(EvidenceInput::new(10, 2, -1.0, 1.0).is_err());
        assert!(EvidenceInput::new(10, 2, 0.0, 0.0).is_err());
        assert!(EvidenceInput::new(10, 2, 1.0, f64::NAN).is_err());
    }
}
