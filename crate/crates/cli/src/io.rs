//! File schemas and deterministic output formatting.
//!
//! CSV carries 12 significant digits so regression files are stable
//! across platforms; JSON keeps full float precision.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use klmix::ebayes::ExpressionMatrix;

use crate::error::CliError;

/// 12-significant-digit scientific notation for CSV payloads.
pub fn fmt(x: f64) -> String {
    format!("{x:.11e}")
}

/// Where command output goes: a file, or stdout when no path was given.
pub struct OutputSink {
    path: Option<PathBuf>,
}

impl OutputSink {
    pub fn new(path: &Option<PathBuf>) -> Self {
        Self { path: path.clone() }
    }

    pub fn write(&self, contents: &str) -> Result<(), CliError> {
        match &self.path {
            Some(path) => {
                fs::write(path, contents)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            }
            None => {
                std::io::stdout().write_all(contents.as_bytes())?;
            }
        }
        Ok(())
    }

    /// A path derived from the output path by appending an extension;
    /// None when writing to stdout.
    pub fn sibling(&self, suffix: &str) -> Option<PathBuf> {
        self.path.as_ref().map(|p| {
            let mut name = p.as_os_str().to_owned();
            name.push(suffix);
            PathBuf::from(name)
        })
    }
}

/// One probability per line; blank lines and '#' comments are skipped.
/// Malformed lines are reported with their line number.
pub fn read_probability_lines(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut probs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let value: f64 = line.parse().map_err(|_| {
            CliError::Input(format!(
                "{}: line {}: not a number: {line:?}",
                path.display(),
                idx + 1
            ))
        })?;
        if !value.is_finite() || !(0.0..=1.0).contains(&value) {
            return Err(CliError::Input(format!(
                "{}: line {}: probability out of [0, 1]: {value}",
                path.display(),
                idx + 1
            )));
        }
        probs.push(value);
    }
    if probs.is_empty() {
        return Err(CliError::Input(format!(
            "{}: no probabilities found",
            path.display()
        )));
    }
    Ok(probs)
}

/// Expression CSV: header row of replicate names with a leading gene-id
/// column; one gene per row. Rows with missing cells ("", "NA", "NaN")
/// are dropped, matching complete-case analysis; the count of dropped
/// rows is returned. Unparseable non-missing cells are input errors.
pub fn read_expression_csv(path: &Path) -> Result<(ExpressionMatrix, usize), CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let replicates = reader.headers()?.len().saturating_sub(1);
    if replicates < 2 {
        return Err(CliError::Input(format!(
            "{}: need a gene-id column plus at least two replicate columns",
            path.display()
        )));
    }

    let mut gene_ids = Vec::new();
    let mut values: Vec<Vec<f64>> = Vec::new();
    let mut dropped = 0usize;
    for (row_idx, record) in reader.records().enumerate() {
        let record = record?;
        let line = row_idx + 2; // header is line 1
        if record.len() != replicates + 1 {
            return Err(CliError::Input(format!(
                "{}: line {line}: expected {} fields, found {}",
                path.display(),
                replicates + 1,
                record.len()
            )));
        }
        let mut row = Vec::with_capacity(replicates);
        let mut missing = false;
        for cell in record.iter().skip(1) {
            if cell.is_empty() || cell.eq_ignore_ascii_case("na") || cell.eq_ignore_ascii_case("nan")
            {
                missing = true;
                break;
            }
            let value: f64 = cell.parse().map_err(|_| {
                CliError::Input(format!(
                    "{}: line {line}: not a number: {cell:?}",
                    path.display()
                ))
            })?;
            if !value.is_finite() {
                missing = true;
                break;
            }
            row.push(value);
        }
        if missing {
            dropped += 1;
            continue;
        }
        gene_ids.push(record[0].to_string());
        values.push(row);
    }
    if values.is_empty() {
        return Err(CliError::Input(format!(
            "{}: no complete rows",
            path.display()
        )));
    }
    Ok((ExpressionMatrix::new(gene_ids, values)?, dropped))
}

/// Capacity input: a JSON array of probability tuples.
pub fn read_distributions_json(path: &Path) -> Result<Vec<klmix::FiniteDistribution>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let tuples: Vec<Vec<f64>> = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    if tuples.is_empty() {
        return Err(CliError::Input(format!(
            "{}: need at least one distribution",
            path.display()
        )));
    }
    tuples
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            klmix::FiniteDistribution::new(t)
                .map_err(|e| CliError::Input(format!("{}: distribution {i}: {e}", path.display())))
        })
        .collect()
}

/// Expression CSV writer (the simulate command's output format, and the
/// combine-lfdr input format).
pub fn expression_csv(matrix: &ExpressionMatrix) -> String {
    let mut out = String::from("gene_id");
    for r in 0..matrix.replicates() {
        out.push_str(&format!(",rep{}", r + 1));
    }
    out.push('\n');
    for g in 0..matrix.genes() {
        out.push_str(&matrix.gene_ids()[g]);
        for v in matrix.row(g) {
            out.push(',');
            out.push_str(&fmt(*v));
        }
        out.push('\n');
    }
    out
}
