mod args;
mod commands;
mod settings;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use settings::Precision;

fn run(argv: Vec<std::ffi::OsString>) -> Result<String, (u8, String)> {
    let fail = |e: centrefall::Error| (if e.is_domain() { 2 } else { 1 }, e.to_string());
    let argv = settings::merge_config(argv).map_err(fail)?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Ok(e.to_string()),
                _ => Err((1, e.render().to_string())),
            }
        }
    };
    let precision = Precision::from_env().map_err(fail)?;
    let out = match &cli.command {
        Command::Evolve(a) => commands::evolve(a),
        Command::Fate(a) => commands::fate(a),
        Command::FallTime(a) => commands::fall_time(a),
        Command::Trial(a) => commands::trial(a, &precision),
        Command::Critical(a) => commands::critical(a),
        Command::Propagate(a) => commands::propagate(a, &precision),
        Command::Wire(a) => commands::wire(a),
        Command::Scale(a) => commands::scale(a),
        Command::Figure1(a) => commands::figure1(a),
        Command::Constants(a) => commands::constants(a),
    };
    out.map_err(fail)
}

fn main() -> ExitCode {
    match run(std::env::args_os().collect()) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err((code, msg)) => {
            let msg = msg.trim_end();
            eprintln!("{}", msg.strip_prefix("error: ").map_or(format!("error: {msg}"), |m| format!("error: {m}")));
            ExitCode::from(code)
        }
    }
}
