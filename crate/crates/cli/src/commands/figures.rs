//! Data grids behind the figures: the optimal-weight surface over
//! probability pairs, and classical means against the hedged combination.

use serde::Serialize;

use klmix::{combine_binary, Interval, SolverConfig};

use crate::error::CliError;
use crate::io::{fmt, OutputSink};
use crate::{FigureMeansArgs, FigureWeightSurfaceArgs, Format};

#[derive(Serialize)]
pub(crate) struct SurfaceRow {
    pub p_min: f64,
    pub p_max: f64,
    pub w_plus: f64,
}

/// Weight on the lower probability for every ordered pair on an interior
/// grid of (0, 1).
pub fn weight_surface(args: &FigureWeightSurfaceArgs) -> Result<(), CliError> {
    if !(args.grid_step > 0.0 && args.grid_step <= 0.5) {
        return Err(CliError::Input("--grid-step must lie in (0, 0.5]".into()));
    }
    let config = args.solver.to_config()?;
    let rows = surface_rows(args.grid_step, &config)?;

    write_rows(
        &args.out.output,
        args.out.format,
        "p_min,p_max,w_plus",
        &rows,
        |r| format!("{},{},{}", fmt(r.p_min), fmt(r.p_max), fmt(r.w_plus)),
    )
}

pub(crate) fn surface_rows(
    step: f64,
    config: &SolverConfig,
) -> Result<Vec<SurfaceRow>, CliError> {
    let mut grid = Vec::new();
    let mut k = 1usize;
    loop {
        let p = k as f64 * step;
        if p >= 1.0 - 1e-12 {
            break;
        }
        grid.push(p);
        k += 1;
    }
    let mut rows = Vec::new();
    for (i, &p_min) in grid.iter().enumerate() {
        for &p_max in &grid[i + 1..] {
            let r = combine_binary(&[p_min, p_max], &Interval::full(), config)?;
            rows.push(SurfaceRow {
                p_min,
                p_max,
                w_plus: r.weight_low,
            });
        }
    }
    Ok(rows)
}

#[derive(Serialize)]
pub(crate) struct MeansRow {
    pub p_low: f64,
    pub p_high: f64,
    pub arithmetic: f64,
    pub geometric: f64,
    pub harmonic: f64,
    pub combined: f64,
}

/// Arithmetic, geometric, and harmonic means of two probability curves
/// next to the game combination.
pub fn means(args: &FigureMeansArgs) -> Result<(), CliError> {
    let config = args.solver.to_config()?;
    let pairs = match &args.input {
        Some(path) => read_pairs_csv(path)?,
        None => {
            if args.points < 2 {
                return Err(CliError::Input("--points must be at least 2".into()));
            }
            if !(args.p_high > 0.0 && args.p_high <= 1.0) {
                return Err(CliError::Input("--p-high must lie in (0, 1]".into()));
            }
            default_pairs(args.points, args.p_high)
        }
    };
    let rows = means_rows(&pairs, &config)?;

    write_rows(
        &args.out.output,
        args.out.format,
        "p_low,p_high,arithmetic,geometric,harmonic,combined",
        &rows,
        |r| {
            format!(
                "{},{},{},{},{},{}",
                fmt(r.p_low),
                fmt(r.p_high),
                fmt(r.arithmetic),
                fmt(r.geometric),
                fmt(r.harmonic),
                fmt(r.combined)
            )
        },
    )
}

/// The display range: p_low sweeps [1e-3, 0.2] logarithmically against a
/// constant p_high.
pub(crate) fn default_pairs(points: usize, p_high: f64) -> Vec<(f64, f64)> {
    let lo = 1e-3f64;
    let hi = 0.2f64;
    let ratio = (hi / lo).ln();
    (0..points)
        .map(|i| {
            let t = i as f64 / (points - 1) as f64;
            (lo * (ratio * t).exp(), p_high)
        })
        .collect()
}

pub(crate) fn means_rows(
    pairs: &[(f64, f64)],
    config: &SolverConfig,
) -> Result<Vec<MeansRow>, CliError> {
    pairs
        .iter()
        .map(|&(a, b)| {
            let r = combine_binary(&[a, b], &Interval::full(), config)?;
            Ok(MeansRow {
                p_low: a,
                p_high: b,
                arithmetic: 0.5 * (a + b),
                geometric: (a * b).sqrt(),
                harmonic: if a + b > 0.0 { 2.0 * a * b / (a + b) } else { 0.0 },
                combined: r.p_plus,
            })
        })
        .collect()
}

fn read_pairs_csv(path: &std::path::Path) -> Result<Vec<(f64, f64)>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut pairs = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() < 2 {
            return Err(CliError::Input(format!(
                "{}: line {}: need two columns p_low,p_high",
                path.display(),
                idx + 2
            )));
        }
        let parse = |s: &str| -> Result<f64, CliError> {
            s.parse().map_err(|_| {
                CliError::Input(format!(
                    "{}: line {}: not a number: {s:?}",
                    path.display(),
                    idx + 2
                ))
            })
        };
        let a = parse(&record[0])?;
        let b = parse(&record[1])?;
        pairs.push((a.min(b), a.max(b)));
    }
    if pairs.is_empty() {
        return Err(CliError::Input(format!("{}: no rows", path.display())));
    }
    Ok(pairs)
}

fn write_rows<T: Serialize>(
    output: &Option<std::path::PathBuf>,
    format: Format,
    header: &str,
    rows: &[T],
    to_csv: impl Fn(&T) -> String,
) -> Result<(), CliError> {
    let sink = OutputSink::new(output);
    match format {
        Format::Csv => {
            let mut text = String::from(header);
            text.push('\n');
            for row in rows {
                text.push_str(&to_csv(row));
                text.push('\n');
            }
            sink.write(&text)
        }
        Format::Json => {
            let mut text = serde_json::to_string_pretty(rows)?;
            text.push('\n');
            sink.write(&text)
        }
    }
}
