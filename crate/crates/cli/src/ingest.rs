//! CSV input and output of data samples.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use polyevidence::{AxisScale, DataSample, Points, Provenance};

use crate::config::{Schema, ScaleMode};
use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct IngestOptions {
    pub schema: Schema,
    pub center: bool,
    pub scale: ScaleMode,
}

impl Default for IngestOptions {
    fn default() -> Self {
        Self {
            schema: Schema::OneD,
            center: true,
            scale: ScaleMode::None,
        }
    }
}

/// Reads `x,y` (1-D) or `x1,x2,y` (2-D) rows. A first row that does not parse
/// as numbers is taken to be a header.
pub fn ingest_csv(path: &Path, opts: &IngestOptions) -> Result<DataSample> {
    let (points, y) = read_rows(path, opts.schema)?;
    let mut sample = DataSample::new(points, y, Provenance::File(path.to_path_buf()))?;
    match &opts.scale {
        ScaleMode::None => {}
        ScaleMode::Auto => {
            sample.auto_scale()?;
        }
        ScaleMode::Explicit(scales) => sample.scale_axes(scales)?,
    }
    if opts.center {
        sample.center();
    }
    Ok(sample)
}

fn read_rows(path: &Path, schema: Schema) -> Result<(Points, Vec<f64>)> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(file);
    let width = schema.dim() + 1;
    let (mut coords, mut y) = (Vec::new(), Vec::new());
    let mut first = true;
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if first => {
                first = false;
                continue;
            }
            Err(e) => {
                return Err(CliError::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("cannot parse {:?}: {e}", record.iter().collect::<Vec<_>>()),
                })
            }
        };
        first = false;
        if values.len() != width {
            return Err(CliError::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("expected {width} columns, found {}", values.len()),
            });
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(CliError::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("non-finite value {v}"),
            });
        }
        coords.extend_from_slice(&values[..width - 1]);
        y.push(values[width - 1]);
    }
    if y.is_empty() {
        return Err(CliError::Empty(path.to_path_buf()));
    }
    Ok((Points::from_flat(schema.dim(), coords)?, y))
}

/// Writes the sample's current points and values with a header row. Values are
/// printed in shortest round-trip form, so reading the file back reproduces
/// them exactly.
pub fn write_csv(sample: &DataSample, path: &Path) -> Result<()> {
    let mut out = String::new();
    out.push_str(if sample.dim() == 1 { "x,y\n" } else { "x1,x2,y\n" });
    for (p, y) in sample.points.iter().zip(&sample.y) {
        for v in p {
            out.push_str(&format!("{v},"));
        }
        out.push_str(&format!("{y}\n"));
    }
    let mut file = File::create(path).map_err(|e| CliError::io(path, e))?;
    file.write_all(out.as_bytes()).map_err(|e| CliError::io(path, e))
}

/// One-line description of the preprocessing applied to a sample.
pub fn describe_preprocessing(sample: &DataSample) -> String {
    let scales: Vec<String> = sample
        .axis_scales
        .iter()
        .map(|s: &AxisScale| format!("{}:{}", s.offset, s.scale))
        .collect();
    format!(
        "centered={} y_offset={} axis_scaling={}",
        sample.centered,
        sample.y_offset,
        scales.join(",")
    )
}
