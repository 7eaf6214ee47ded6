//! Least-squares fitting through a QR factorization of the design matrix.

use nalgebra::{DMatrix, DVector};

use crate::basis::DesignMatrix;
use crate::error::{Error, Result};

/// Least-squares solution and the statistics the evidence needs.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// `â`, minimizing `|y − W a|²`.
    pub coefficients: Vec<f64>,
    /// `ŷ = W â`
    pub fitted: Vec<f64>,
    /// `ê = y − ŷ`
    pub residuals: Vec<f64>,
    /// `|ŷ|²`
    pub chi_y2: f64,
    /// `|ê|²`
    pub chi_eps2: f64,
    /// `yᵀê`, computed as a literal inner product.
    pub y_dot_e: f64,
    pub rank: usize,
    /// Ratio of the largest to the smallest singular value of `W`.
    pub condition_estimate: f64,
}

impl FitResult {
    pub fn n_params(&self) -> usize {
        self.coefficients.len()
    }

    /// `ŷᵀê`; zero up to rounding for an orthogonal projection.
    pub fn fitted_dot_residuals(&self) -> f64 {
        dot(&self.fitted, &self.residuals)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Singular values below `max_sv · N · ε` count as zero.
fn rank_tolerance(max_sv: f64, n_rows: usize) -> f64 {
    max_sv * n_rows as f64 * f64::EPSILON
}

fn numerical_rank(m: &DMatrix<f64>) -> usize {
    let sv = m.clone().singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let tol = rank_tolerance(max, m.nrows());
    sv.iter().filter(|&&s| s > tol).count()
}

/// Columns that add nothing to the span of the columns before them.
fn dependent_columns(design: &DesignMatrix) -> Vec<String> {
    let w = design.values();
    let mut kept: Vec<usize> = Vec::new();
    let mut offending = Vec::new();
    for j in 0..w.ncols() {
        let mut trial = kept.clone();
        trial.push(j);
        if numerical_rank(&w.select_columns(&trial)) == trial.len() {
            kept = trial;
        } else {
            offending.push(format!("#{j} {}", design.columns()[j]));
        }
    }
    offending
}

/// Fits `y ≈ W a` by Householder QR (the normal equations are never formed).
///
/// Rank is judged from the singular values of the triangular factor, which
/// equal those of `W`.
pub fn fit(design: &DesignMatrix, y: &[f64]) -> Result<FitResult> {
    let (n, l) = (design.n_rows(), design.n_cols());
    if y.len() != n {
        return Err(Error::LengthMismatch {
            what: "y",
            expected: n,
            actual: y.len(),
        });
    }
    if n <= l {
        return Err(Error::TooFewPoints { n, l });
    }

    let qr = design.values().clone().qr();
    let r = qr.r();
    let sv = r.clone().singular_values();
    let max_sv = sv.iter().copied().fold(0.0, f64::max);
    let min_sv = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = rank_tolerance(max_sv, n);
    let rank = sv.iter().filter(|&&s| s > tol).count();
    if rank < l {
        return Err(Error::RankDeficient {
            rank,
            l,
            columns: dependent_columns(design),
        });
    }

    let q = qr.q();
    let yv = DVector::from_column_slice(y);
    let qty = q.tr_mul(&yv);
    let coefficients = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| Error::RankDeficient {
            rank,
            l,
            columns: dependent_columns(design),
        })?;
    let fitted = &q * &qty;
    let fitted: Vec<f64> = fitted.iter().copied().collect();
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();

    Ok(FitResult {
        coefficients: coefficients.iter().copied().collect(),
        chi_y2: dot(&fitted, &fitted),
        chi_eps2: dot(&residuals, &residuals),
        y_dot_e: dot(y, &residuals),
        fitted,
        residuals,
        rank,
        condition_estimate: max_sv / min_sv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{build_design_matrix, total_degree_set, BasisFunction, BasisSet, Family, Points};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn design_1d(xs: &[f64], q: u32) -> DesignMatrix {
        build_design_matrix(&Points::one_d(xs.to_vec()), &total_degree_set(q, 1, Family::Monomial).unwrap()).unwrap()
    }

    #[test]
    fn straight_line_through_three_points() {
        let fit = fit(&design_1d(&[-1.0, 0.0, 1.0], 1), &[1.0, 2.0, 3.0]).unwrap();
        assert_relative_eq!(fit.coefficients[0], 2.0, max_relative = 1e-14);
        assert_relative_eq!(fit.coefficients[1], 1.0, max_relative = 1e-14);
        assert!(fit.residuals.iter().all(|r| r.abs() < 1e-14));
        assert!(fit.chi_eps2 < 1e-28);
        assert_eq!(fit.rank, 2);
    }

    #[test]
    fn exact_representation_has_zero_residuals() {
        let xs: Vec<f64> = (0..20).map(|i| -1.0 + i as f64 * 0.1).collect();
        let y: Vec<f64> = xs.iter().map(|x| 0.5 - x + 3.0 * x * x * x).collect();
        let fit = fit(&design_1d(&xs, 4), &y).unwrap();
        assert!(fit.chi_eps2 < 1e-26 * fit.chi_y2);
        assert_relative_eq!(fit.coefficients[3], 3.0, max_relative = 1e-10);
    }

    #[test]
    fn rank_deficiency_names_the_columns() {
        // Only two distinct abscissae: x^2 is a combination of 1 and x.
        let w = design_1d(&[0.0, 1.0, 0.0, 1.0, 0.0], 2);
        match fit(&w, &[1.0, 2.0, 3.0, 4.0, 5.0]) {
            Err(Error::RankDeficient { rank, l, columns }) => {
                assert_eq!((rank, l), (2, 3));
                assert_eq!(columns, vec!["#2 x^2".to_string()]);
            }
            other => panic!("expected rank deficiency, got {other:?}"),
        }
    }

    #[test]
    fn too_few_points_and_length_mismatch() {
        assert!(matches!(fit(&design_1d(&[0.1, 0.2], 1), &[1.0, 2.0]), Err(Error::TooFewPoints { n: 2, l: 2 })));
        assert!(matches!(fit(&design_1d(&[0.1, 0.2, 0.3], 1), &[1.0]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn nesting_never_increases_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let xs: Vec<f64> = (0..30).map(|_| rng.random_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..30).map(|_| rng.random_range(-1.0..1.0)).collect();
            let mut last = f64::INFINITY;
            for q in 0..8 {
                let f = fit(&design_1d(&xs, q), &y).unwrap();
                assert!(f.chi_eps2 <= last * (1.0 + 1e-12));
                last = f.chi_eps2;
            }
        }
    }

    #[test]
    fn permuted_columns_permute_coefficients() {
        let pts = Points::two_d(&[[0.1, 0.3], [0.5, -0.2], [-0.7, 0.9], [0.2, 0.2], [-0.4, -0.8], [0.9, 0.1]]);
        let basis = total_degree_set(1, 2, Family::Legendre).unwrap();
        let y = [0.3, -1.0, 0.4, 0.8, -0.5, 0.1];
        let f1 = fit(&build_design_matrix(&pts, &basis).unwrap(), &y).unwrap();
        let perm = [2, 0, 1];
        let permuted = BasisSet::new(perm.iter().map(|&i| basis.functions()[i]).collect::<Vec<BasisFunction>>()).unwrap();
        let f2 = fit(&build_design_matrix(&pts, &permuted).unwrap(), &y).unwrap();
        for (k, &i) in perm.iter().enumerate() {
            assert_relative_eq!(f2.coefficients[k], f1.coefficients[i], max_relative = 1e-12, epsilon = 1e-14);
        }
        for (a, b) in f1.fitted.iter().zip(&f2.fitted) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn projection_identities(seed in any::<u64>(), n in 8usize..60, q in 0u32..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let xs: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let f = fit(&design_1d(&xs, q.min(n as u32 - 2)), &y).unwrap();
            let y2: f64 = y.iter().map(|v| v * v).sum();
            prop_assert!((y2 - f.chi_y2 - f.chi_eps2).abs() <= 1e-9 * y2);
            prop_assert!(f.fitted_dot_residuals().abs() <= 1e-9 * y2);
            prop_assert!((f.y_dot_e - f.chi_eps2).abs() <= 1e-9 * y2);
            prop_assert!(f.y_dot_e > 0.0);
            for ((a, b), c) in f.fitted.iter().zip(&f.residuals).zip(&y) {
                prop_assert!((a + b - c).abs() <= 1e-12 * (1.0 + c.abs()));
            }
        }

        #[test]
        fn scale_equivariance(seed in any::<u64>(), lambda in prop::sample::select(vec![0.5, 3.0])) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let xs: Vec<f64> = (0..25).map(|_| rng.random_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..25).map(|_| rng.random_range(-2.0..2.0)).collect();
            let ys: Vec<f64> = y.iter().map(|v| v * lambda).collect();
            let w = design_1d(&xs, 3);
            let (a, b) = (fit(&w, &y).unwrap(), fit(&w, &ys).unwrap());
            for (ca, cb) in a.coefficients.iter().zip(&b.coefficients) {
                prop_assert!((cb - lambda * ca).abs() <= 1e-10 * (1.0 + ca.abs()));
            }
            prop_assert!((b.chi_y2 - lambda * lambda * a.chi_y2).abs() <= 1e-10 * b.chi_y2);
            prop_assert!((b.chi_eps2 - lambda * lambda * a.chi_eps2).abs() <= 1e-10 * b.chi_eps2);
        }
    }
}
