//! Posterior probabilities over a family of candidate models.
//!
//! Every candidate gets the same prior weight, so the posterior is the evidence
//! normalized over the family. Normalization happens in log space in a fixed
//! order, which keeps results bitwise reproducible for any thread count.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::basis::{build_design_matrix, BasisSet, DesignMatrix, Points, SubsetEnumerator};
use crate::error::{Error, Result};
use crate::evidence::{log_evidence_closed, EvidenceInput, EvidenceMethod};
use crate::regression::{fit, FitResult};

/// Candidates with posterior probability below this are skipped when averaging.
pub const AVERAGING_THRESHOLD: f64 = 1e-12;

/// `|mean(y)| < CENTERING_TOLERANCE · rms(y)` counts as centered.
pub const CENTERING_TOLERANCE: f64 = 1e-9;

/// Subsets are scored in chunks of this many, independent of the thread count.
pub const SEARCH_CHUNK: u64 = 2048;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelCandidate {
    pub id: u64,
    pub basis: BasisSet,
    pub label: String,
}

impl ModelCandidate {
    /// A candidate labelled with its member list.
    pub fn new(id: u64, basis: BasisSet) -> Self {
        let label = basis.to_string();
        Self { id, basis, label }
    }

    pub fn with_label(id: u64, basis: BasisSet, label: impl Into<String>) -> Self {
        Self {
            id,
            basis,
            label: label.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    /// Residuals vanish; the evidence diverges.
    ExactFit,
    /// Excluded from normalization.
    RankDeficient { columns: Vec<String> },
}

impl RowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::ExactFit => "exact-fit",
            RowStatus::RankDeficient { .. } => "rank-deficient",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorRow {
    pub id: u64,
    pub label: String,
    pub l: usize,
    /// `NaN` for excluded rows, `+∞` for exact fits.
    pub log_z: f64,
    pub probability: f64,
    pub chi_eps2: f64,
    pub method: Option<EvidenceMethod>,
    pub status: RowStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorTable {
    pub rows: Vec<PosteriorRow>,
    /// `ln Σ Z` over the included models (`+∞` if any fit is exact).
    pub log_normalizer: f64,
    pub n_models: usize,
    pub warnings: Vec<String>,
}

impl PosteriorTable {
    /// The row with the highest probability; ties go to the earlier row.
    /// `None` if no row carries probability.
    pub fn best(&self) -> Option<&PosteriorRow> {
        self.rows
            .iter()
            .filter(|r| r.probability > 0.0)
            .fold(None, |best: Option<&PosteriorRow>, r| match best {
                Some(b) if b.probability >= r.probability => Some(b),
                _ => Some(r),
            })
    }

    pub fn probability_sum(&self) -> f64 {
        self.rows.iter().map(|r| r.probability).sum()
    }

    pub fn row(&self, id: u64) -> Option<&PosteriorRow> {
        self.rows.iter().find(|r| r.id == id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelectionOptions {
    /// Worker threads; 0 uses the global rayon pool.
    pub parallelism: usize,
    /// Reject data whose mean has not been removed.
    pub require_centered: bool,
}

impl Default for SelectionOptions {
    fn default() -> Self {
        Self {
            parallelism: 0,
            require_centered: true,
        }
    }
}

fn run_in_pool<T: Send>(parallelism: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    if parallelism == 0 {
        return Ok(job());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| Error::ThreadPool(e.to_string()))?;
    Ok(pool.install(job))
}

pub(crate) fn check_centered(y: &[f64]) -> Result<()> {
    let n = y.len() as f64;
    let mean = y.iter().sum::<f64>() / n;
    let rms = (y.iter().map(|v| v * v).sum::<f64>() / n).sqrt();
    if rms == 0.0 {
        return Err(Error::InvalidInput("all data values are zero".into()));
    }
    if mean.abs() >= CENTERING_TOLERANCE * rms {
        return Err(Error::NotCentered { mean, rms });
    }
    Ok(())
}

fn check_data(points: &Points, y: &[f64], require_centered: bool) -> Result<()> {
    if points.len() != y.len() {
        return Err(Error::LengthMismatch {
            what: "y",
            expected: points.len(),
            actual: y.len(),
        });
    }
    if y.is_empty() {
        return Err(Error::InvalidInput("no data".into()));
    }
    if require_centered {
        check_centered(y)?;
    }
    Ok(())
}

/// Outcome of fitting and scoring one design.
#[derive(Debug, Clone)]
struct Scored {
    l: usize,
    log_z: f64,
    chi_eps2: f64,
    method: Option<EvidenceMethod>,
    status: RowStatus,
    fit: Option<FitResult>,
}

fn score(design: &DesignMatrix, y: &[f64]) -> Result<Scored> {
    let l = design.n_cols();
    match fit(design, y) {
        Ok(f) => {
            let ev = log_evidence_closed(&EvidenceInput::from_fit(&f)?)?;
            Ok(Scored {
                l,
                log_z: ev.log_z,
                chi_eps2: f.chi_eps2,
                method: Some(ev.method),
                status: if ev.degenerate_exact_fit {
                    RowStatus::ExactFit
                } else {
                    RowStatus::Ok
                },
                fit: Some(f),
            })
        }
        Err(Error::RankDeficient { columns, .. }) => Ok(Scored {
            l,
            log_z: f64::NAN,
            chi_eps2: f64::NAN,
            method: None,
            status: RowStatus::RankDeficient { columns },
            fit: None,
        }),
        Err(e) => Err(e),
    }
}

/// Fills in probabilities for rows whose `log_z` is already set.
///
/// Exact fits take all the mass (smallest `l`, then earliest row); otherwise
/// `p_k = exp(log_z_k − ln Σ exp(log_z))` over the `Ok` rows in row order.
fn normalize(rows: &mut [PosteriorRow]) -> f64 {
    let exact = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.status == RowStatus::ExactFit)
        .min_by_key(|(i, r)| (r.l, *i))
        .map(|(i, _)| i);
    if let Some(winner) = exact {
        for (i, r) in rows.iter_mut().enumerate() {
            r.probability = if i == winner { 1.0 } else { 0.0 };
        }
        return f64::INFINITY;
    }
    let mut acc = LogSum::default();
    for r in rows.iter().filter(|r| r.status == RowStatus::Ok) {
        acc.add(r.log_z);
    }
    let log_norm = acc.value();
    for r in rows.iter_mut() {
        r.probability = match r.status {
            RowStatus::Ok => (r.log_z - log_norm).exp(),
            _ => 0.0,
        };
    }
    log_norm
}

/// Running `ln Σ exp(x)` that can be merged with another partial sum.
#[derive(Debug, Clone, Copy)]
struct LogSum {
    max: f64,
    sum: f64,
}

impl Default for LogSum {
    fn default() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            sum: 0.0,
        }
    }
}

impl LogSum {
    fn add(&mut self, x: f64) {
        if x <= self.max {
            self.sum += (x - self.max).exp();
        } else {
            self.sum = self.sum * (self.max - x).exp() + 1.0;
            self.max = x;
        }
    }

    fn merge(&mut self, other: LogSum) {
        if other.max == f64::NEG_INFINITY {
            return;
        }
        if other.max <= self.max {
            self.sum += other.sum * (other.max - self.max).exp();
        } else {
            self.sum = self.sum * (self.max - other.max).exp() + other.sum;
            self.max = other.max;
        }
    }

    fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.sum.ln()
        }
    }
}

/// Scores every candidate on one data set and normalizes the evidences.
pub fn evaluate_models(
    points: &Points,
    y: &[f64],
    candidates: &[ModelCandidate],
    opts: SelectionOptions,
) -> Result<PosteriorTable> {
    evaluate_models_with_fits(points, y, candidates, opts).map(|(table, _)| table)
}

/// Like [`evaluate_models`], also returning each candidate's fit (in the
/// table's row order, `None` for rank-deficient candidates).
pub fn evaluate_models_with_fits(
    points: &Points,
    y: &[f64],
    candidates: &[ModelCandidate],
    opts: SelectionOptions,
) -> Result<(PosteriorTable, Vec<Option<FitResult>>)> {
    check_data(points, y, opts.require_centered)?;
    if candidates.is_empty() {
        return Err(Error::InvalidInput("no candidate models".into()));
    }
    let mut ids = HashSet::with_capacity(candidates.len());
    for c in candidates {
        if !ids.insert(c.id) {
            return Err(Error::InvalidInput(format!("duplicate candidate id {}", c.id)));
        }
        if y.len() <= c.basis.len() {
            return Err(Error::TooFewPoints {
                n: y.len(),
                l: c.basis.len(),
            });
        }
    }
    let mut order: Vec<&ModelCandidate> = candidates.iter().collect();
    order.sort_by_key(|c| c.id);

    let scored: Vec<Result<Scored>> = run_in_pool(opts.parallelism, || {
        order
            .par_iter()
            .map(|c| score(&build_design_matrix(points, &c.basis)?, y))
            .collect()
    })?;

    let mut rows = Vec::with_capacity(order.len());
    let mut fits = Vec::with_capacity(order.len());
    let mut warnings = Vec::new();
    for (c, s) in order.iter().zip(scored) {
        let s = s?;
        if let RowStatus::RankDeficient { columns } = &s.status {
            warnings.push(format!(
                "candidate {} ({}) is rank deficient and was excluded; dependent columns: {}",
                c.id,
                c.label,
                columns.join(", ")
            ));
        }
        rows.push(PosteriorRow {
            id: c.id,
            label: c.label.clone(),
            l: s.l,
            log_z: s.log_z,
            probability: 0.0,
            chi_eps2: s.chi_eps2,
            method: s.method,
            status: s.status,
        });
        fits.push(s.fit);
    }
    let log_normalizer = normalize(&mut rows);
    if log_normalizer == f64::NEG_INFINITY {
        warnings.push("no candidate could be scored".into());
    }
    Ok((
        PosteriorTable {
            n_models: rows.len(),
            rows,
            log_normalizer,
            warnings,
        },
        fits,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Rows kept in the ranked table.
    pub top_k: usize,
    /// Also return every row in enumeration order.
    pub keep_all: bool,
    pub parallelism: usize,
    pub require_centered: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            top_k: 400,
            keep_all: false,
            parallelism: 0,
            require_centered: true,
        }
    }
}

/// Result of an exhaustive subset search.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetSearch {
    /// The `top_k` best subsets, best first, with probabilities normalized over
    /// every evaluated subset. Row ids are subset sequence numbers.
    pub table: PosteriorTable,
    pub n_evaluated: u64,
    pub n_excluded: u64,
    /// Total probability held by the rows of `table`.
    pub top_mass: f64,
    pub winner: Option<(u64, BasisSet)>,
    /// Every row in enumeration order, when requested.
    pub all_rows: Option<Vec<PosteriorRow>>,
}

#[derive(Debug, Clone)]
struct Ranked {
    index: u64,
    l: usize,
    log_z: f64,
    chi_eps2: f64,
    method: Option<EvidenceMethod>,
    status: RowStatus,
}

/// Orders by decreasing evidence (exact fits first, smallest `l` first among
/// them), then by sequence number.
fn rank_order(a: &Ranked, b: &Ranked) -> std::cmp::Ordering {
    let key = |r: &Ranked| match r.status {
        RowStatus::ExactFit => (0u8, r.l as f64),
        RowStatus::Ok => (1, -r.log_z),
        RowStatus::RankDeficient { .. } => (2, 0.0),
    };
    let (ka, kb) = (key(a), key(b));
    ka.0.cmp(&kb.0)
        .then(ka.1.total_cmp(&kb.1))
        .then(a.index.cmp(&b.index))
}

#[derive(Debug, Default)]
struct ChunkSummary {
    sum: LogSum,
    evaluated: u64,
    excluded: u64,
    top: Vec<Ranked>,
    all: Vec<Ranked>,
}

fn keep_top(rows: &mut Vec<Ranked>, k: usize) {
    rows.sort_by(rank_order);
    rows.truncate(k);
}

fn search_chunk(
    design: &DesignMatrix,
    y: &[f64],
    subsets: SubsetEnumerator,
    opts: &SearchOptions,
) -> Result<ChunkSummary> {
    let mut out = ChunkSummary::default();
    for subset in subsets {
        let s = score(&design.select_columns(&subset.kept)?, y)?;
        out.evaluated += 1;
        match s.status {
            RowStatus::Ok => out.sum.add(s.log_z),
            RowStatus::RankDeficient { .. } => out.excluded += 1,
            RowStatus::ExactFit => {}
        }
        let ranked = Ranked {
            index: subset.index,
            l: s.l,
            log_z: s.log_z,
            chi_eps2: s.chi_eps2,
            method: s.method,
            status: s.status,
        };
        if opts.keep_all {
            out.all.push(ranked.clone());
        }
        out.top.push(ranked);
        if out.top.len() >= 2 * opts.top_k.max(1) {
            keep_top(&mut out.top, opts.top_k);
        }
    }
    keep_top(&mut out.top, opts.top_k);
    Ok(out)
}

/// Scores every subset of `full` with a size in `sizes`.
///
/// Subsets are streamed from [`SubsetEnumerator`]; only the best `top_k` rows
/// are kept (plus every row if `keep_all`), while the normalizer accumulates
/// over all of them. Work is split into fixed chunks of [`SEARCH_CHUNK`]
/// subsets and merged in sequence order, so the output does not depend on
/// `parallelism`.
pub fn subset_search(
    points: &Points,
    y: &[f64],
    full: &BasisSet,
    sizes: &[usize],
    opts: SearchOptions,
) -> Result<SubsetSearch> {
    check_data(points, y, opts.require_centered)?;
    let enumerator = SubsetEnumerator::new(full.len(), sizes)?;
    if let Some(&k) = sizes.iter().max() {
        if y.len() <= k {
            return Err(Error::TooFewPoints { n: y.len(), l: k });
        }
    }
    let design = build_design_matrix(points, full)?;
    let total = enumerator.total();
    let n_chunks = total.div_ceil(SEARCH_CHUNK);

    let chunks: Vec<Result<ChunkSummary>> = run_in_pool(opts.parallelism, || {
        (0..n_chunks)
            .into_par_iter()
            .map(|c| {
                let start = c * SEARCH_CHUNK;
                let range = enumerator.clone().range(start, start + SEARCH_CHUNK);
                search_chunk(&design, y, range, &opts)
            })
            .collect()
    })?;

    let mut sum = LogSum::default();
    let mut top: Vec<Ranked> = Vec::new();
    let mut all = opts.keep_all.then(Vec::new);
    let (mut evaluated, mut excluded) = (0u64, 0u64);
    for chunk in chunks {
        let chunk = chunk?;
        sum.merge(chunk.sum);
        evaluated += chunk.evaluated;
        excluded += chunk.excluded;
        top.extend(chunk.top);
        keep_top(&mut top, opts.top_k);
        if let Some(all) = all.as_mut() {
            all.extend(chunk.all);
        }
    }

    let exact_winner = top
        .first()
        .filter(|r| r.status == RowStatus::ExactFit)
        .map(|r| r.index);
    let log_normalizer = if exact_winner.is_some() {
        f64::INFINITY
    } else {
        sum.value()
    };
    let probability = |r: &Ranked| match (exact_winner, &r.status) {
        (Some(w), _) => {
            if r.index == w {
                1.0
            } else {
                0.0
            }
        }
        (None, RowStatus::Ok) => (r.log_z - log_normalizer).exp(),
        _ => 0.0,
    };
    let label = |index: u64| -> Result<String> {
        let subset = enumerator
            .subset_at(index)
            .ok_or_else(|| Error::InvalidInput(format!("subset {index} out of range")))?;
        Ok(subset.basis(full)?.to_string())
    };
    let to_row = |r: &Ranked| -> Result<PosteriorRow> {
        Ok(PosteriorRow {
            id: r.index,
            label: label(r.index)?,
            l: r.l,
            log_z: r.log_z,
            probability: probability(r),
            chi_eps2: r.chi_eps2,
            method: r.method,
            status: r.status.clone(),
        })
    };

    let rows = top.iter().map(to_row).collect::<Result<Vec<_>>>()?;
    let top_mass = rows.iter().map(|r| r.probability).sum();
    let winner = match rows.first() {
        Some(r) if r.probability > 0.0 => {
            let subset = enumerator.subset_at(r.id).expect("winner index is in range");
            Some((r.id, subset.basis(full)?))
        }
        _ => None,
    };
    let all_rows = match all {
        Some(all) => Some(all.iter().map(to_row).collect::<Result<Vec<_>>>()?),
        None => None,
    };
    let mut warnings = Vec::new();
    if excluded > 0 {
        warnings.push(format!("{excluded} rank-deficient subsets were excluded from normalization"));
    }
    Ok(SubsetSearch {
        table: PosteriorTable {
            n_models: rows.len(),
            rows,
            log_normalizer,
            warnings,
        },
        n_evaluated: evaluated,
        n_excluded: excluded,
        top_mass,
        winner,
        all_rows,
    })
}

/// Probability-weighted prediction over the candidate family.
#[derive(Debug, Clone, PartialEq)]
pub struct AveragedPrediction {
    pub points: Points,
    pub mean: Vec<f64>,
    /// Between-model standard deviation; parameter uncertainty within each
    /// model is not included.
    pub spread: Vec<f64>,
}

/// Averages the candidates' predictions at `query` with posterior weights.
///
/// `table`, `candidates` and `fits` must come from the same
/// [`evaluate_models_with_fits`] call: `fits` follows the table's row order and
/// candidates are matched to rows by id. Candidates below
/// [`AVERAGING_THRESHOLD`] are skipped and the remaining weights renormalized.
pub fn model_average(
    table: &PosteriorTable,
    candidates: &[ModelCandidate],
    fits: &[Option<FitResult>],
    query: &Points,
) -> Result<AveragedPrediction> {
    if fits.len() != table.rows.len() || candidates.len() != table.rows.len() {
        return Err(Error::ProvenanceMismatch(format!(
            "{} rows, {} candidates, {} fits",
            table.rows.len(),
            candidates.len(),
            fits.len()
        )));
    }
    let mut models = Vec::new();
    for (row, fit) in table.rows.iter().zip(fits) {
        if row.probability < AVERAGING_THRESHOLD {
            continue;
        }
        let cand = candidates
            .iter()
            .find(|c| c.id == row.id)
            .ok_or_else(|| Error::ProvenanceMismatch(format!("no candidate with id {}", row.id)))?;
        let fit = fit
            .as_ref()
            .ok_or_else(|| Error::ProvenanceMismatch(format!("row {} has probability but no fit", row.id)))?;
        if cand.basis.len() != row.l || fit.coefficients.len() != row.l {
            return Err(Error::ProvenanceMismatch(format!(
                "row {} has l = {}, candidate has {}, fit has {} coefficients",
                row.id,
                row.l,
                cand.basis.len(),
                fit.coefficients.len()
            )));
        }
        if cand.basis.dim() != query.dim() {
            return Err(Error::DimensionMismatch {
                expected: cand.basis.dim(),
                actual: query.dim(),
            });
        }
        models.push((row.probability, &cand.basis, &fit.coefficients));
    }
    let weight: f64 = models.iter().map(|m| m.0).sum();
    if models.is_empty() || !(weight > 0.0) {
        return Err(Error::InvalidInput("no model carries posterior probability".into()));
    }

    let mut mean = Vec::with_capacity(query.len());
    let mut spread = Vec::with_capacity(query.len());
    let mut preds = vec![0.0; models.len()];
    for point in query.iter() {
        for (slot, (_, basis, coef)) in preds.iter_mut().zip(&models) {
            *slot = basis.eval_combination(coef, point)?;
        }
        let mu = models.iter().zip(&preds).map(|(m, p)| m.0 * p).sum::<f64>() / weight;
        let var = models
            .iter()
            .zip(&preds)
            .map(|(m, p)| m.0 * (p - mu) * (p - mu))
            .sum::<f64>()
            / weight;
        mean.push(mu);
        spread.push(var.max(0.0).sqrt());
    }
    Ok(AveragedPrediction {
        points: query.clone(),
        mean,
        spread,
    })
}
