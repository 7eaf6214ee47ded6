//! Bayesian selection of basis-function sets for linear regression.
//!
//! Given noisy samples `y = W a + ε` with Gaussian errors of unknown variance,
//! each candidate design matrix `W` is scored by its exact marginal likelihood
//! (the evidence) under a Jeffreys prior on the noise scale and a
//! maximum-entropy Gaussian prior on the coefficients. The prior is absorbed
//! analytically: the evidence depends only on `N`, `l`, `|ŷ|²` and `yᵀê`.
//!
//! The crate is organised bottom-up:
//!
//! * [`basis`]: monomial and Legendre families, total-degree sets, design
//!   matrices and deterministic subset enumeration.
//! * [`regression`]: least squares via an orthogonal decomposition.
//! * [`special`]: log-gamma, incomplete gamma and the Gauss hypergeometric series.
//! * [`evidence`]: closed-form evidence, an independent quadrature oracle and the
//!   large-sample approximations.
//! * [`selection`]: posterior model probabilities, subset search and model averaging.
//! * [`data`]: data samples, centering, scaling and seeded simulation.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too; reference
// values are kept at the precision they were computed to.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod basis;
pub mod data;
pub mod error;
pub mod evidence;
pub mod quadrature;
pub mod regression;
pub mod selection;
pub mod special;

pub use basis::{
    build_design_matrix, enumerate_subsets, total_degree_set, BasisFunction, BasisSet,
    DesignMatrix, Family, Points, Subset, SubsetEnumerator,
};
pub use data::{simulate, simulate_surface, AxisScale, DataSample, Provenance, SimulationConfig};
pub use error::{Error, Result};
pub use evidence::{
    log_evidence_asymptotic, log_evidence_closed, log_evidence_quadrature, AsymptoticRegime,
    EvidenceInput, EvidenceMethod, EvidenceResult,
};
pub use regression::{fit, FitResult};
pub use selection::{
    evaluate_models, evaluate_models_with_fits, model_average, subset_search, AveragedPrediction,
    ModelCandidate, PosteriorRow, PosteriorTable, RowStatus, SearchOptions, SelectionOptions,
    SubsetSearch,
};
