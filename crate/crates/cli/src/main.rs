use std::process::exit;

use clap::error::ErrorKind;
use clap::Parser;

use klmix_cli::Cli;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{err}");
                exit(0);
            }
            eprint!("{err}");
            exit(1);
        }
    };
    if let Err(err) = klmix_cli::run(cli) {
        eprintln!("error: {err}");
        exit(err.exit_code());
    }
}
