//! Mode dispatch and artifact writing.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use polyevidence::{
    evaluate_models_with_fits, log_evidence_closed, log_evidence_quadrature, model_average,
    simulate, simulate_surface, subset_search, total_degree_set, BasisSet, DataSample,
    EvidenceInput, EvidenceMethod, Family, ModelCandidate, Points, Provenance, SearchOptions,
    SelectionOptions, SimulationConfig,
};

use crate::config::{Mode, RunConfig, Schema};
use crate::error::{CliError, Result};
use crate::ingest::{describe_preprocessing, ingest_csv, write_csv, IngestOptions};
use crate::output::{format_value, results_table, rows_section};
use crate::plot::{self, Series, PALETTE};

pub const RESULTS_FILE: &str = "results.tsv";
pub const REPORT_FILE: &str = "report.txt";
pub const FAILURE_MARKER: &str = "FAILED.txt";

/// Largest tolerated `|closed − quadrature|` in oracle-check mode.
pub const ORACLE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub files: Vec<PathBuf>,
    /// One-line outcome for the terminal.
    pub headline: String,
}

struct Outputs {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Outputs {
    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
        self.written.push(path);
        Ok(())
    }

    fn mark_failed(&self, err: &CliError) {
        let mut text = format!("run did not complete: {err}\n");
        if self.written.is_empty() {
            text.push_str("no other files were written\n");
        } else {
            text.push_str("files written before the failure (may be incomplete):\n");
            for p in &self.written {
                let _ = writeln!(text, "  {}", p.display());
            }
        }
        // Best effort: the original error is what gets reported.
        let _ = fs::write(self.dir.join(FAILURE_MARKER), text);
    }
}

/// Runs one mode and writes its artifacts into `config.out_dir`.
///
/// On failure any files already written stay in place and a
/// [`FAILURE_MARKER`] file lists them next to the error.
pub fn run(config: &RunConfig) -> Result<RunSummary> {
    config.validate()?;
    fs::create_dir_all(&config.out_dir).map_err(|e| CliError::io(&config.out_dir, e))?;
    let marker = config.out_dir.join(FAILURE_MARKER);
    if marker.exists() {
        fs::remove_file(&marker).map_err(|e| CliError::io(&marker, e))?;
    }
    let mut out = Outputs {
        dir: config.out_dir.clone(),
        written: Vec::new(),
    };
    let result = match config.mode {
        Mode::Scan => scan(config, &mut out),
        Mode::SubsetSearch => search(config, &mut out),
        Mode::Simulate => simulate_mode(config, &mut out),
        Mode::OracleCheck => oracle_check(&mut out),
    };
    match result {
        Ok(headline) => Ok(RunSummary {
            files: out.written,
            headline,
        }),
        Err(e) => {
            out.mark_failed(&e);
            Err(e)
        }
    }
}

/// Default surface coefficients: `1/(1+i)` on the members of total degree
/// ≤ 3, zero elsewhere.
fn default_surface_coefficients(basis: &BasisSet) -> Vec<f64> {
    basis
        .iter()
        .enumerate()
        .map(|(i, f)| if f.total_degree() <= 3 { 1.0 / (1.0 + i as f64) } else { 0.0 })
        .collect()
}

fn load_data(config: &RunConfig) -> Result<DataSample> {
    if let Some(path) = &config.input {
        return ingest_csv(
            path,
            &IngestOptions {
                schema: config.schema,
                center: config.center,
                scale: config.scale.clone(),
            },
        );
    }
    match config.schema {
        Schema::OneD => Ok(simulate(&SimulationConfig {
            seed: config.seed,
            n: config.n,
            sigma: config.sigma,
            coefficients: config
                .coefficients
                .clone()
                .unwrap_or_else(|| SimulationConfig::DEFAULT_COEFFICIENTS.to_vec()),
        })?),
        Schema::TwoD => {
            let basis = total_degree_set(*config.degrees.end(), 2, config.basis.into())?;
            let coef = match &config.coefficients {
                Some(c) if c.len() == basis.len() => c.clone(),
                Some(c) => {
                    return Err(CliError::Config(format!(
                        "--coefficients has {} values but the degree-{} set has {} members",
                        c.len(),
                        config.degrees.end(),
                        basis.len()
                    )))
                }
                None => default_surface_coefficients(&basis),
            };
            Ok(simulate_surface(config.seed, config.n, config.sigma, &basis, &coef)?)
        }
    }
}

fn source_metadata(config: &RunConfig, sample: &DataSample) -> Vec<(String, String)> {
    let source = match &sample.provenance {
        Provenance::File(p) => format!("file:{}", p.display()),
        Provenance::Simulation { seed } => {
            format!("simulation seed={seed} n={} sigma={}", config.n, config.sigma)
        }
    };
    vec![
        ("mode".into(), config.mode.as_str().into()),
        ("source".into(), source),
        ("n".into(), sample.len().to_string()),
        ("dim".into(), sample.dim().to_string()),
        (
            "basis".into(),
            match Family::from(config.basis) {
                Family::Monomial => "monomial".into(),
                Family::Legendre => "legendre".into(),
            },
        ),
        ("preprocessing".into(), describe_preprocessing(sample)),
    ]
}

fn header_block(title: &str, metadata: &[(String, String)]) -> String {
    let mut text = format!("{title}\n{}\n", "=".repeat(title.len()));
    for (k, v) in metadata {
        let _ = writeln!(text, "{k}: {v}");
    }
    text.push('\n');
    text
}

fn scan(config: &RunConfig, out: &mut Outputs) -> Result<String> {
    let sample = load_data(config)?;
    let family: Family = config.basis.into();
    let candidates = config
        .degrees
        .clone()
        .map(|q| Ok(ModelCandidate::new(q as u64, total_degree_set(q, sample.dim(), family)?)))
        .collect::<Result<Vec<_>>>()?;
    let (table, fits) = evaluate_models_with_fits(
        &sample.points,
        &sample.y,
        &candidates,
        SelectionOptions {
            parallelism: config.parallelism,
            require_centered: config.center,
        },
    )?;

    let mut metadata = source_metadata(config, &sample);
    metadata.push(("degrees".into(), format!("{}..{}", config.degrees.start(), config.degrees.end())));
    metadata.push(("log_normalizer".into(), format_value(table.log_normalizer)));
    out.write(RESULTS_FILE, &results_table(&metadata, &table.rows))?;

    let best = table.best().ok_or_else(|| CliError::Config("no candidate could be scored".into()))?;
    let mut report = header_block("Degree scan", &metadata);
    let _ = writeln!(report, "most probable degree: {} (probability {})", best.id, format_value(best.probability));
    let _ = writeln!(report, "basis: {}\n", best.label);
    report.push_str(&rows_section(&table.rows, table.rows.len()));
    for w in &table.warnings {
        let _ = writeln!(report, "warning: {w}");
    }

    let labels: Vec<String> = table.rows.iter().map(|r| r.id.to_string()).collect();
    let probs: Vec<f64> = table.rows.iter().map(|r| r.probability).collect();
    out.write(
        "probability.svg",
        &plot::bar_chart("Posterior probability by degree", "degree", &labels, &probs),
    )?;

    // Averaged prediction, on a grid in 1-D and at the sample points in 2-D.
    let query = if sample.dim() == 1 {
        let xs = sample.points.axis(0);
        let (lo, hi) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        Points::one_d((0..=200).map(|i| lo + (hi - lo) * i as f64 / 200.0).collect())
    } else {
        sample.points.clone()
    };
    let avg = model_average(&table, &candidates, &fits, &query)?;
    let mut avg_text = String::from("# polyevidence-average v1\n# coordinates after axis scaling; mean and spread of the centered response\n");
    avg_text.push_str(if sample.dim() == 1 { "x\tmean\tspread\n" } else { "x1\tx2\tmean\tspread\n" });
    for ((p, m), s) in query.iter().zip(&avg.mean).zip(&avg.spread) {
        for v in p {
            avg_text.push_str(&format!("{v}\t"));
        }
        let _ = writeln!(avg_text, "{m}\t{s}");
    }
    out.write("averaged.tsv", &avg_text)?;

    if sample.dim() == 1 {
        let best_index = table.rows.iter().position(|r| r.id == best.id).expect("best row is in the table");
        let coef = &fits[best_index].as_ref().expect("best row was fitted").coefficients;
        let basis = &candidates.iter().find(|c| c.id == best.id).expect("candidate exists").basis;
        let winner: Vec<(f64, f64)> = query
            .iter()
            .map(|p| Ok((p[0], basis.eval_combination(coef, p)?)))
            .collect::<polyevidence::Result<_>>()?;
        let mean: Vec<(f64, f64)> = query.iter().zip(&avg.mean).map(|(p, m)| (p[0], *m)).collect();
        let band: Vec<(f64, f64, f64)> = query
            .iter()
            .zip(avg.mean.iter().zip(&avg.spread))
            .map(|(p, (m, s))| (p[0], m - s, m + s))
            .collect();
        let data: Vec<(f64, f64)> = sample.points.iter().zip(&sample.y).map(|(p, y)| (p[0], *y)).collect();
        let winner_name = format!("degree {}", best.id);
        let svg = plot::data_with_curves(
            "Data and most probable fit",
            &data,
            &[
                Series { name: &winner_name, color: PALETTE[1], points: winner },
                Series { name: "model average", color: PALETTE[2], points: mean },
            ],
            Some(&band),
        );
        out.write("fit.svg", &svg)?;
    }
    out.write(REPORT_FILE, &report)?;
    Ok(format!("most probable degree {} with probability {}", best.id, format_value(best.probability)))
}

fn search(config: &RunConfig, out: &mut Outputs) -> Result<String> {
    let sample = load_data(config)?;
    let full = total_degree_set(*config.degrees.end(), sample.dim(), config.basis.into())?;
    let result = subset_search(
        &sample.points,
        &sample.y,
        &full,
        &config.subset_sizes,
        SearchOptions {
            top_k: config.top_k,
            keep_all: config.dump_all,
            parallelism: config.parallelism,
            require_centered: config.center,
        },
    )?;

    let mut metadata = source_metadata(config, &sample);
    metadata.push(("full_set".into(), full.to_string()));
    metadata.push((
        "subset_sizes".into(),
        config.subset_sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","),
    ));
    metadata.push(("evaluated".into(), result.n_evaluated.to_string()));
    metadata.push(("excluded".into(), result.n_excluded.to_string()));
    metadata.push(("log_normalizer".into(), format_value(result.table.log_normalizer)));
    metadata.push(("top_k".into(), result.table.rows.len().to_string()));
    metadata.push(("top_k_mass".into(), format_value(result.top_mass)));
    out.write(RESULTS_FILE, &results_table(&metadata, &result.table.rows))?;
    if let Some(all) = &result.all_rows {
        out.write("all_subsets.tsv", &results_table(&metadata, all))?;
    }

    let points: Vec<(u64, f64)> = result.table.rows.iter().map(|r| (r.id, r.probability)).collect();
    out.write(
        "subset_probability.svg",
        &plot::index_chart("Posterior probability of the most probable subsets", &points),
    )?;

    let mut report = header_block("Subset search", &metadata);
    match &result.winner {
        Some((index, basis)) => {
            let _ = writeln!(
                report,
                "most probable subset: #{index} with {} members (probability {})",
                basis.len(),
                format_value(result.table.rows[0].probability)
            );
            let _ = writeln!(report, "members: {basis}\n");
        }
        None => report.push_str("no subset could be scored\n\n"),
    }
    report.push_str(&rows_section(&result.table.rows, 25));
    for w in &result.table.warnings {
        let _ = writeln!(report, "warning: {w}");
    }
    out.write(REPORT_FILE, &report)?;
    Ok(format!(
        "{} subsets evaluated; best #{}",
        result.n_evaluated,
        result.winner.map_or("-".to_string(), |w| w.0.to_string())
    ))
}

fn simulate_mode(config: &RunConfig, out: &mut Outputs) -> Result<String> {
    let sample = load_data(config)?;
    let path = out.dir.join("data.csv");
    write_csv(&sample, &path)?;
    out.written.push(path);
    let metadata = source_metadata(config, &sample);
    out.write(REPORT_FILE, &header_block("Simulated data", &metadata))?;
    Ok(format!("wrote {} simulated points", sample.len()))
}

/// The `(N, l, yᵀê/|ŷ|², |ŷ|²)` grid checked in oracle-check mode.
pub fn oracle_grid() -> Vec<(usize, usize, f64, f64)> {
    let mut grid = Vec::new();
    for n in [10usize, 50, 200] {
        for l in 1..=9.min(n - 1) {
            for ratio in [1e-4, 1e-2, 0.1, 0.5, 0.9, 2.0, 10.0] {
                for y2 in [1e-2, 1.0, 1e2] {
                    grid.push((n, l, ratio, y2));
                }
            }
        }
    }
    grid
}

fn oracle_check(out: &mut Outputs) -> Result<String> {
    let mut text = String::from("# polyevidence-oracle v1\nN\tl\tratio\tchi_y2\tclosed\tquadrature\tabs_diff\tclosed_method\n");
    let (mut worst, mut fallback) = (0.0f64, 0);
    let grid = oracle_grid();
    for &(n, l, ratio, y2) in &grid {
        let input = EvidenceInput::new(n, l, y2, ratio * y2)?;
        let c = log_evidence_closed(&input)?;
        let q = log_evidence_quadrature(&input)?;
        let d = (c.log_z - q.log_z).abs();
        worst = worst.max(d);
        if c.method == EvidenceMethod::Quadrature {
            fallback += 1;
        }
        let _ = writeln!(text, "{n}\t{l}\t{ratio}\t{y2}\t{}\t{}\t{d:e}\t{}", c.log_z, q.log_z, c.method);
    }
    out.write("oracle.tsv", &text)?;
    let verdict = if worst <= ORACLE_TOLERANCE { "pass" } else { "FAIL" };
    let report = format!(
        "Oracle check\n============\ncases: {}\nmax |closed − quadrature|: {worst:e}\ntolerance: {ORACLE_TOLERANCE:e}\nclosed form delegated to quadrature: {fallback}\nverdict: {verdict}\n",
        grid.len()
    );
    out.write(REPORT_FILE, &report)?;
    if worst > ORACLE_TOLERANCE {
        return Err(CliError::OracleMismatch(worst));
    }
    Ok(format!("max |closed − quadrature| = {worst:e} over {} cases", grid.len()))
}

/// Convenience for tests and scripts: the directory's results table.
pub fn results_path(dir: &Path) -> PathBuf {
    dir.join(RESULTS_FILE)
}
