use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::ValueEnum;
use polyevidence::{AxisScale, Family};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Posterior over total-degree sets for a range of degrees.
    Scan,
    /// Exhaustive search over subsets of one total-degree set.
    SubsetSearch,
    /// Write a simulated data set.
    Simulate,
    /// Compare closed-form and quadrature evidence on a fixed grid.
    OracleCheck,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Scan => "scan",
            Mode::SubsetSearch => "subset-search",
            Mode::Simulate => "simulate",
            Mode::OracleCheck => "oracle-check",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Schema {
    #[value(name = "1d")]
    OneD,
    #[value(name = "2d")]
    TwoD,
}

impl Schema {
    pub fn dim(self) -> usize {
        match self {
            Schema::OneD => 1,
            Schema::TwoD => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisKind {
    Monomial,
    Legendre,
}

impl From<BasisKind> for Family {
    fn from(k: BasisKind) -> Family {
        match k {
            BasisKind::Monomial => Family::Monomial,
            BasisKind::Legendre => Family::Legendre,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScaleMode {
    None,
    /// Map each axis's observed range onto [−1, 1].
    Auto,
    /// `x' = (x − offset) / scale` per axis.
    Explicit(Vec<AxisScale>),
}

/// Parses `auto`, `none` or `offset:scale[,offset:scale]`.
pub fn parse_scale(s: &str) -> Result<ScaleMode> {
    match s.trim() {
        "auto" => Ok(ScaleMode::Auto),
        "none" => Ok(ScaleMode::None),
        spec => spec
            .split(',')
            .map(|pair| {
                let (o, sc) = pair
                    .split_once(':')
                    .ok_or_else(|| CliError::Config(format!("scale entry {pair:?} is not offset:scale")))?;
                let parse = |v: &str| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|e| CliError::Config(format!("scale entry {pair:?}: {e}")))
                };
                Ok(AxisScale::new(parse(o)?, parse(sc)?)?)
            })
            .collect::<Result<Vec<_>>>()
            .map(ScaleMode::Explicit),
    }
}

/// Parses `A..B` (inclusive) or a single degree.
pub fn parse_degrees(s: &str) -> Result<RangeInclusive<u32>> {
    let bad = |e: std::num::ParseIntError| CliError::Config(format!("degree range {s:?}: {e}"));
    let range = match s.split_once("..") {
        Some((a, b)) => a.trim().parse().map_err(bad)?..=b.trim_start_matches('=').trim().parse().map_err(bad)?,
        None => {
            let d = s.trim().parse().map_err(bad)?;
            d..=d
        }
    };
    if range.is_empty() {
        return Err(CliError::Config(format!("degree range {s:?} is empty")));
    }
    Ok(range)
}

/// Parses a comma-separated list of sizes; `A..B` entries expand inclusively.
pub fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    let bad = |e: std::num::ParseIntError| CliError::Config(format!("subset sizes {s:?}: {e}"));
    let mut sizes = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b): (usize, usize) = (a.parse().map_err(bad)?, b.parse().map_err(bad)?);
                sizes.extend(a..=b);
            }
            None => sizes.push(part.parse().map_err(bad)?),
        }
    }
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.is_empty() {
        return Err(CliError::Config("no subset sizes given".into()));
    }
    Ok(sizes)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    /// Simulated data is used when absent.
    pub input: Option<PathBuf>,
    pub schema: Schema,
    pub basis: BasisKind,
    /// Scan: degrees to compare. Subset search: the upper end is the total
    /// degree of the full set.
    pub degrees: RangeInclusive<u32>,
    pub subset_sizes: Vec<usize>,
    pub center: bool,
    pub scale: ScaleMode,
    pub seed: u64,
    pub n: usize,
    pub sigma: f64,
    /// Simulation coefficients; defaults depend on the schema.
    pub coefficients: Option<Vec<f64>>,
    pub top_k: usize,
    pub parallelism: usize,
    pub out_dir: PathBuf,
    pub dump_all: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Scan,
            input: None,
            schema: Schema::OneD,
            basis: BasisKind::Monomial,
            degrees: 0..=9,
            subset_sizes: vec![14, 15, 16],
            center: true,
            scale: ScaleMode::None,
            seed: 0,
            n: 50,
            sigma: 0.4,
            coefficients: None,
            top_k: 400,
            parallelism: 0,
            out_dir: PathBuf::from("polyevidence-out"),
            dump_all: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(CliError::Config(format!("--n must be at least 2, got {}", self.n)));
        }
        if !(self.sigma >= 0.0) || !self.sigma.is_finite() {
            return Err(CliError::Config(format!("--sigma must be finite and nonnegative, got {}", self.sigma)));
        }
        if self.top_k == 0 {
            return Err(CliError::Config("--top-k must be positive".into()));
        }
        if let ScaleMode::Explicit(s) = &self.scale {
            if s.len() != self.schema.dim() {
                return Err(CliError::Config(format!(
                    "--scale gives {} axes but the {} schema has {}",
                    s.len(),
                    if self.schema == Schema::OneD { "1d" } else { "2d" },
                    self.schema.dim()
                )));
            }
        }
        if self.mode == Mode::Simulate && self.input.is_some() {
            return Err(CliError::Config("simulate mode does not read --input".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_ranges() {
        assert_eq!(parse_degrees("0..9").unwrap(), 0..=9);
        assert_eq!(parse_degrees("2..=4").unwrap(), 2..=4);
        assert_eq!(parse_degrees("5").unwrap(), 5..=5);
        assert!(parse_degrees("4..2").is_err());
        assert!(parse_degrees("a..2").is_err());
    }

    #[test]
    fn size_lists() {
        assert_eq!(parse_sizes("14,15,16").unwrap(), vec![14, 15, 16]);
        assert_eq!(parse_sizes("16, 14..15").unwrap(), vec![14, 15, 16]);
        assert!(parse_sizes("").is_err());
    }

    #[test]
    fn scale_specs() {
        assert_eq!(parse_scale("auto").unwrap(), ScaleMode::Auto);
        assert_eq!(parse_scale("none").unwrap(), ScaleMode::None);
        assert_eq!(
            parse_scale("300:50,0:2").unwrap(),
            ScaleMode::Explicit(vec![AxisScale::new(300.0, 50.0).unwrap(), AxisScale::new(0.0, 2.0).unwrap()])
        );
        assert!(parse_scale("300:0").is_err());
        assert!(parse_scale("300").is_err());
    }
}
