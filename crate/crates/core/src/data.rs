//! Data samples: axis scaling, mean removal and seeded simulation.

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::basis::{BasisSet, Points};
use crate::error::{Error, Result};

/// Affine map `x' = (x − offset) / scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisScale {
    pub offset: f64,
    pub scale: f64,
}

impl AxisScale {
    pub const IDENTITY: AxisScale = AxisScale {
        offset: 0.0,
        scale: 1.0,
    };

    pub fn new(offset: f64, scale: f64) -> Result<Self> {
        if !offset.is_finite() || !scale.is_finite() || scale == 0.0 {
            return Err(Error::InvalidInput(format!(
                "axis scaling needs a finite offset and a finite nonzero scale, got {offset} and {scale}"
            )));
        }
        Ok(Self { offset, scale })
    }

    /// Maps the observed range of `values` onto exactly `[−1, 1]`.
    pub fn auto(values: &[f64]) -> Result<Self> {
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !(max > min) {
            return Err(Error::InvalidInput(
                "cannot auto-scale an axis whose values are all equal".into(),
            ));
        }
        Self::new(0.5 * (min + max), 0.5 * (max - min))
    }

    pub fn apply(&self, x: f64) -> f64 {
        (x - self.offset) / self.scale
    }

    pub fn invert(&self, x: f64) -> f64 {
        x * self.scale + self.offset
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    File(PathBuf),
    Simulation { seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataSample {
    pub points: Points,
    pub y: Vec<f64>,
    pub provenance: Provenance,
    /// One entry per axis, `IDENTITY` when unscaled.
    pub axis_scales: Vec<AxisScale>,
    /// Mean removed from `y` (zero if not centered).
    pub y_offset: f64,
    pub centered: bool,
}

impl DataSample {
    pub fn new(points: Points, y: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if points.len() != y.len() {
            return Err(Error::LengthMismatch {
                what: "y",
                expected: points.len(),
                actual: y.len(),
            });
        }
        if y.len() < 2 {
            return Err(Error::InvalidInput(format!("need at least 2 data points, got {}", y.len())));
        }
        if let Some(v) = points.as_flat().iter().chain(&y).find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite value {v} in data")));
        }
        let dim = points.dim();
        Ok(Self {
            points,
            y,
            provenance,
            axis_scales: vec![AxisScale::IDENTITY; dim],
            y_offset: 0.0,
            centered: false,
        })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.dim()
    }

    /// Subtracts the arithmetic mean of `y`. Calling it twice is harmless.
    pub fn center(&mut self) {
        let mean = self.y.iter().sum::<f64>() / self.y.len() as f64;
        self.y.iter_mut().for_each(|v| *v -= mean);
        // A second pass removes the rounding left by the first.
        let residue = self.y.iter().sum::<f64>() / self.y.len() as f64;
        self.y.iter_mut().for_each(|v| *v -= residue);
        self.y_offset += mean + residue;
        self.centered = true;
    }

    /// Rescales every axis; composes with any scaling already applied.
    pub fn scale_axes(&mut self, scales: &[AxisScale]) -> Result<()> {
        if scales.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: scales.len(),
            });
        }
        let dim = self.dim();
        for (i, v) in self.points.as_flat_mut().iter_mut().enumerate() {
            *v = scales[i % dim].apply(*v);
        }
        for (old, new) in self.axis_scales.iter_mut().zip(scales) {
            *old = AxisScale {
                offset: old.offset + old.scale * new.offset,
                scale: old.scale * new.scale,
            };
        }
        Ok(())
    }

    /// Scales every axis so its observed range becomes `[−1, 1]`.
    pub fn auto_scale(&mut self) -> Result<Vec<AxisScale>> {
        let scales = (0..self.dim())
            .map(|a| AxisScale::auto(&self.points.axis(a)))
            .collect::<Result<Vec<_>>>()?;
        self.scale_axes(&scales)?;
        Ok(scales)
    }
}

/// Settings for the one-dimensional polynomial experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub seed: u64,
    pub n: usize,
    pub sigma: f64,
    /// Monomial coefficients, constant first.
    pub coefficients: Vec<f64>,
}

impl SimulationConfig {
    /// `y = −x − 10x² + 2x³ + 5x⁵`
    pub const DEFAULT_COEFFICIENTS: [f64; 6] = [0.0, -1.0, -10.0, 2.0, 0.0, 5.0];

    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            n: 50,
            sigma: 0.4,
            coefficients: Self::DEFAULT_COEFFICIENTS.to_vec(),
        }
    }
}

fn noise(sigma: f64) -> Result<Normal<f64>> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidInput(format!("sigma must be finite and nonnegative, got {sigma}")));
    }
    Normal::new(0.0, sigma).map_err(|e| Error::InvalidInput(e.to_string()))
}

fn horner(coefficients: &[f64], x: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Draws `n` abscissae uniformly in `[−1, 1]`, evaluates the polynomial, adds
/// Gaussian noise and removes the mean.
///
/// All abscissae are drawn before any noise so that changing `sigma` keeps the
/// same sample points for a given seed.
pub fn simulate(config: &SimulationConfig) -> Result<DataSample> {
    if config.n < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 data points, got {}", config.n)));
    }
    let dist = noise(config.sigma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let xs: Vec<f64> = (0..config.n).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let y: Vec<f64> = xs
        .iter()
        .map(|&x| horner(&config.coefficients, x) + dist.sample(&mut rng))
        .collect();
    let mut sample = DataSample::new(Points::one_d(xs), y, Provenance::Simulation { seed: config.seed })?;
    sample.center();
    Ok(sample)
}

/// Two-dimensional analogue of [`simulate`]: points uniform in `[−1, 1]²` and
/// `y = Σ c_m w_m(x) + noise` for the given basis and coefficients.
pub fn simulate_surface(
    seed: u64,
    n: usize,
    sigma: f64,
    basis: &BasisSet,
    coefficients: &[f64],
) -> Result<DataSample> {
    if basis.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: basis.dim(),
        });
    }
    if n < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 data points, got {n}")));
    }
    let dist = noise(sigma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords: Vec<f64> = (0..2 * n).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let points = Points::from_flat(2, coords)?;
    let y = points
        .iter()
        .map(|p| Ok(basis.eval_combination(coefficients, p)? + dist.sample(&mut rng)))
        .collect::<Result<Vec<f64>>>()?;
    let mut sample = DataSample::new(points, y, Provenance::Simulation { seed })?;
    sample.center();
    Ok(sample)
}
