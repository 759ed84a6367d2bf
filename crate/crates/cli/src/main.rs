mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match &cli.command {
        Command::Table(a) => commands::table(a),
        Command::Verify(a) => commands::verify(a, cli.jobs),
        Command::Certify(a) => commands::certify(a),
        Command::GammaCheck(a) => commands::gamma_check(a, cli.jobs),
        Command::Sample(a) => commands::sample(a),
    };
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            eprintln!("degderange: {e}");
            return ExitCode::from(2);
        }
    };
    let written = report
        .render(cli.format)
        .and_then(|bytes| output::emit(&bytes, cli.out.as_deref()));
    if let Err(e) = written {
        eprintln!("degderange: cannot write output: {e}");
        return ExitCode::from(2);
    }
    if report.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
