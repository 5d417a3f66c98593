//! `simulate`: write a seeded synthetic expression dataset with truth
//! labels.

use serde::Serialize;

use klmix::ebayes::{simulate_dataset, SimulationConfig};

use crate::error::CliError;
use crate::io::{expression_csv, OutputSink};
use crate::{Format, SimulateArgs};

pub(crate) fn parse_simulation(
    values: &[f64],
    seed: u64,
) -> Result<SimulationConfig, CliError> {
    if values.len() != 5 {
        return Err(CliError::Input(
            "--simulate needs five values: N n pi0 effect_sd noise_sd".into(),
        ));
    }
    let genes = values[0];
    let replicates = values[1];
    if genes.fract() != 0.0 || genes < 1.0 || replicates.fract() != 0.0 || replicates < 2.0 {
        return Err(CliError::Input(
            "--simulate: N must be a positive integer and n an integer of at least 2".into(),
        ));
    }
    Ok(SimulationConfig {
        genes: genes as usize,
        replicates: replicates as usize,
        pi0: values[2],
        effect_sd: values[3],
        noise_sd: values[4],
        seed,
    })
}

#[derive(Serialize)]
struct SimulateJson<'a> {
    gene_ids: &'a [String],
    values: Vec<&'a [f64]>,
    is_alternative: &'a [bool],
    seed: u64,
}

pub fn run(args: &SimulateArgs) -> Result<(), CliError> {
    let config = parse_simulation(&args.simulate, args.seed)?;
    let (matrix, truth) = simulate_dataset(&config)?;
    let sink = OutputSink::new(&args.out.output);

    match args.out.format {
        Format::Csv => {
            sink.write(&expression_csv(&matrix))?;
            // truth labels ride in a sidecar so the main file stays a
            // valid pipeline input
            if let Some(truth_path) = sink.sibling(".truth.csv") {
                let mut text = String::from("gene_id,is_alternative\n");
                for (id, alt) in matrix.gene_ids().iter().zip(&truth) {
                    text.push_str(&format!("{id},{}\n", if *alt { 1 } else { 0 }));
                }
                std::fs::write(&truth_path, text)
                    .map_err(|e| CliError::Input(format!("{}: {e}", truth_path.display())))?;
            } else {
                eprintln!("note: truth labels are only written alongside --output");
            }
            Ok(())
        }
        Format::Json => {
            let report = SimulateJson {
                gene_ids: matrix.gene_ids(),
                values: (0..matrix.genes()).map(|g| matrix.row(g)).collect(),
                is_alternative: &truth,
                seed: args.seed,
            };
            let mut text = serde_json::to_string_pretty(&report)?;
            text.push('\n');
            sink.write(&text)
        }
    }
}
