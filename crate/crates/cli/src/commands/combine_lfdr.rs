//! `combine-lfdr`: t-tests, three LFDR estimators, the likelihood
//! screening bound, and the hedged combination of the survivors.

use serde::Serialize;

use klmix::ebayes::{
    combine_lfdr, lfdr_empirical, lfdr_lower_bound, lfdr_theoretical, q_values, simulate_dataset,
    t_test, CombinedLfdr, EmpiricalNullLfdr, ExpressionMatrix, LfdrConfig, LfdrVector,
    TestResult, TheoreticalNullLfdr,
};
use klmix::SolverConfig;

use crate::error::CliError;
use crate::io::{fmt, read_expression_csv, OutputSink};
use crate::{CombineLfdrArgs, Format};

/// Everything the pipeline produces, kept structured so tests can drive
/// the command in-process.
pub struct PipelineOutput {
    pub tests: TestResult,
    pub theoretical: TheoreticalNullLfdr,
    pub empirical: EmpiricalNullLfdr,
    pub qvalues: LfdrVector,
    pub lower: klmix::ebayes::LowerBoundResult,
    pub combined: CombinedLfdr,
}

/// The estimator order used throughout the outputs.
pub const METHOD_NAMES: [&str; 3] = ["theoretical-null", "empirical-null", "q-value"];

pub fn run_pipeline(
    matrix: &ExpressionMatrix,
    pi0_lower: f64,
    lfdr_config: &LfdrConfig,
    solver_config: &SolverConfig,
) -> Result<PipelineOutput, CliError> {
    let tests = t_test(matrix)?;
    let theoretical = lfdr_theoretical(&tests.p_values, &tests.t_stats, lfdr_config)?;
    let empirical = lfdr_empirical(&tests.p_values, &tests.t_stats, lfdr_config)?;
    let qvalues = q_values(&tests.p_values)?;
    let lower = lfdr_lower_bound(matrix, pi0_lower)?;
    let combined = combine_lfdr(
        &[
            theoretical.lfdr.clone(),
            empirical.lfdr.clone(),
            qvalues.clone(),
        ],
        &lower.bounds,
        solver_config,
    )?;
    Ok(PipelineOutput {
        tests,
        theoretical,
        empirical,
        qvalues,
        lower,
        combined,
    })
}

#[derive(Serialize)]
struct GeneRow<'a> {
    gene_id: &'a str,
    lfdr_theoretical: f64,
    lfdr_empirical: f64,
    qvalue: f64,
    lower_bound: f64,
    combined: f64,
}

#[derive(Serialize)]
struct Metadata {
    surviving: Vec<&'static str>,
    excluded: Vec<&'static str>,
    /// Weight per surviving method, aligned with `surviving`.
    weights: Vec<f64>,
    value: f64,
    gap: f64,
    iterations: usize,
    /// Genes at which each surviving method is the smallest estimate.
    binds_min: Vec<usize>,
    /// Genes at which each surviving method is the largest estimate.
    binds_max: Vec<usize>,
    pi0_hat_theoretical: f64,
    pi0_hat_empirical: f64,
    empirical_null_mu: f64,
    empirical_null_sigma: f64,
    lower_bound_flagged: usize,
    dropped_rows: usize,
    seed: Option<u64>,
    configuration: Configuration,
}

#[derive(Serialize)]
struct Configuration {
    pi0_lower: f64,
    bins: usize,
    lambda: f64,
    tol: f64,
    max_iter: usize,
    simulate: Option<Vec<f64>>,
}

fn obtain_matrix(args: &CombineLfdrArgs) -> Result<(ExpressionMatrix, usize), CliError> {
    match (&args.input, &args.simulate) {
        (Some(path), None) => read_expression_csv(path),
        (None, Some(values)) => {
            let config = super::simulate::parse_simulation(values, args.seed)?;
            let (matrix, _) = simulate_dataset(&config)?;
            Ok((matrix, 0))
        }
        _ => Err(CliError::Input(
            "combine-lfdr needs exactly one of --input or --simulate".into(),
        )),
    }
}

pub fn run(args: &CombineLfdrArgs) -> Result<(), CliError> {
    if !(args.pi0_lower > 0.0 && args.pi0_lower < 1.0) {
        return Err(CliError::Input(
            "--pi0-lower must lie strictly between 0 and 1".into(),
        ));
    }
    let lfdr_config = LfdrConfig {
        bins: args.bins,
        lambda: args.lambda,
    };
    let solver_config = args.solver.to_config()?;
    let (matrix, dropped) = obtain_matrix(args)?;
    let output = run_pipeline(&matrix, args.pi0_lower, &lfdr_config, &solver_config)?;

    let estimates = [
        &output.theoretical.lfdr.values,
        &output.empirical.lfdr.values,
        &output.qvalues.values,
    ];
    let surviving = &output.combined.result.surviving;
    let mut binds_min = vec![0usize; surviving.len()];
    let mut binds_max = vec![0usize; surviving.len()];
    for g in 0..matrix.genes() {
        let vals: Vec<f64> = surviving.iter().map(|&m| estimates[m][g]).collect();
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for (k, &v) in vals.iter().enumerate() {
            if (v - lo).abs() <= 1e-12 {
                binds_min[k] += 1;
            }
            if (v - hi).abs() <= 1e-12 {
                binds_max[k] += 1;
            }
        }
    }

    let metadata = Metadata {
        surviving: surviving.iter().map(|&m| METHOD_NAMES[m]).collect(),
        excluded: output
            .combined
            .excluded
            .iter()
            .map(|&m| METHOD_NAMES[m])
            .collect(),
        weights: surviving
            .iter()
            .map(|&m| {
                // weights are reported over extreme members; a surviving
                // non-extreme member carries zero weight
                output
                    .combined
                    .result
                    .extreme
                    .iter()
                    .position(|&e| e == m)
                    .map(|k| output.combined.result.weights.get(k))
                    .unwrap_or(0.0)
            })
            .collect(),
        value: output.combined.result.value,
        gap: output.combined.result.gap,
        iterations: output.combined.result.iterations,
        binds_min,
        binds_max,
        pi0_hat_theoretical: output.theoretical.pi0_hat,
        pi0_hat_empirical: output.empirical.pi0_hat,
        empirical_null_mu: output.empirical.mu,
        empirical_null_sigma: output.empirical.sigma,
        lower_bound_flagged: output.lower.flagged.len(),
        dropped_rows: dropped,
        seed: args.simulate.as_ref().map(|_| args.seed),
        configuration: Configuration {
            pi0_lower: args.pi0_lower,
            bins: args.bins,
            lambda: args.lambda,
            tol: args.solver.tol,
            max_iter: args.solver.max_iter,
            simulate: args.simulate.clone(),
        },
    };

    let rows: Vec<GeneRow> = (0..matrix.genes())
        .map(|g| GeneRow {
            gene_id: &matrix.gene_ids()[g],
            lfdr_theoretical: output.theoretical.lfdr.values[g],
            lfdr_empirical: output.empirical.lfdr.values[g],
            qvalue: output.qvalues.values[g],
            lower_bound: output.lower.bounds.values[g],
            combined: output.combined.combined.values[g],
        })
        .collect();

    let sink = OutputSink::new(&args.out.output);
    match args.out.format {
        Format::Csv => {
            let mut text =
                String::from("gene_id,lfdr_theoretical,lfdr_empirical,qvalue,lower_bound,combined\n");
            for row in &rows {
                text.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    row.gene_id,
                    fmt(row.lfdr_theoretical),
                    fmt(row.lfdr_empirical),
                    fmt(row.qvalue),
                    fmt(row.lower_bound),
                    fmt(row.combined),
                ));
            }
            sink.write(&text)?;
            let meta_json = serde_json::to_string_pretty(&metadata)?;
            match sink.sibling(".meta.json") {
                Some(path) => std::fs::write(&path, meta_json + "\n")
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
                None => println!("# metadata: {}", serde_json::to_string(&metadata)?),
            }
            Ok(())
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Report<'a> {
                genes: &'a [GeneRow<'a>],
                metadata: &'a Metadata,
            }
            let mut text = serde_json::to_string_pretty(&Report {
                genes: &rows,
                metadata: &metadata,
            })?;
            text.push('\n');
            sink.write(&text)
        }
    }
}
