//! `combine-probs`: hedged combination of event probabilities from a
//! text file.

use serde::Serialize;

use klmix::{combine_binary, Interval};

use crate::commands::in_unit;
use crate::error::CliError;
use crate::io::{fmt, read_probability_lines, OutputSink};
use crate::{CombineProbsArgs, Format};

#[derive(Serialize)]
struct CombineProbsReport {
    lo: f64,
    hi: f64,
    w_plus: f64,
    p_plus: f64,
    value: f64,
    unit: &'static str,
}

pub fn run(args: &CombineProbsArgs) -> Result<(), CliError> {
    let probs = read_probability_lines(&args.input)?;
    let plausible = Interval::new(args.lower, args.upper)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let config = args.solver.to_config()?;
    let result = combine_binary(&probs, &plausible, &config)?;

    let unit = if args.bits { "bits" } else { "nats" };
    let report = CombineProbsReport {
        lo: result.lo,
        hi: result.hi,
        w_plus: result.weight_low,
        p_plus: result.p_plus,
        value: in_unit(result.value, args.bits),
        unit,
    };

    let sink = OutputSink::new(&args.out.output);
    match args.out.format {
        Format::Csv => {
            let mut text = String::from("lo,hi,w_plus,p_plus,value,unit\n");
            text.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fmt(report.lo),
                fmt(report.hi),
                fmt(report.w_plus),
                fmt(report.p_plus),
                fmt(report.value),
                report.unit
            ));
            sink.write(&text)
        }
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&report)?;
            text.push('\n');
            sink.write(&text)
        }
    }
}
