//! `capacity`: induced weighting and centroid of a distribution family.

use serde::Serialize;

use klmix::induced_weighting;

use crate::commands::in_unit;
use crate::error::CliError;
use crate::io::{fmt, read_distributions_json, OutputSink};
use crate::{CapacityArgs, Format};

#[derive(Serialize)]
struct CapacityReport {
    weights: Vec<f64>,
    centroid: Vec<f64>,
    value: f64,
    gap: f64,
    iterations: usize,
    unit: &'static str,
}

pub fn run(args: &CapacityArgs) -> Result<(), CliError> {
    let family = read_distributions_json(&args.input)?;
    let config = args.solver.to_config()?;
    let result = induced_weighting(&family, &config)?;

    let report = CapacityReport {
        weights: result.weights.weights().to_vec(),
        centroid: result.centroid.probs().to_vec(),
        value: in_unit(result.value, args.bits),
        gap: in_unit(result.gap, args.bits),
        iterations: result.iterations,
        unit: if args.bits { "bits" } else { "nats" },
    };

    let sink = OutputSink::new(&args.out.output);
    match args.out.format {
        Format::Csv => {
            let mut text = String::from("field,index,value\n");
            for (i, w) in report.weights.iter().enumerate() {
                text.push_str(&format!("weight,{i},{}\n", fmt(*w)));
            }
            for (i, c) in report.centroid.iter().enumerate() {
                text.push_str(&format!("centroid,{i},{}\n", fmt(*c)));
            }
            text.push_str(&format!("value,,{}\n", fmt(report.value)));
            text.push_str(&format!("gap,,{}\n", fmt(report.gap)));
            text.push_str(&format!("iterations,,{}\n", report.iterations));
            text.push_str(&format!("unit,,{}\n", report.unit));
            sink.write(&text)
        }
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&report)?;
            text.push('\n');
            sink.write(&text)
        }
    }
}
