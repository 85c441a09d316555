mod args;
mod commands;
mod input;
mod manifest;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Status;

fn init_logging() {
    let level = match std::env::var("LUCID_LOG").as_deref() {
        Ok("quiet") => log::LevelFilter::Error,
        Ok("debug") => log::LevelFilter::Debug,
        Ok("info") | Err(_) => log::LevelFilter::Info,
        Ok(other) => {
            eprintln!("LUCID_LOG must be quiet, info or debug (got `{other}`); using info");
            log::LevelFilter::Info
        }
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .format_target(false)
        .init();
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let infeasible = err
        .chain()
        .any(|e| matches!(e.downcast_ref::<lucid_core::Error>(), Some(lucid_core::Error::Infeasible(_))));
    if infeasible {
        Status::Infeasible.code()
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_logging();
    let result = match &cli.command {
        Command::Binarize(a) => commands::binarize::run(a),
        Command::TrainRulelist(a) => commands::rulelist::train(a),
        Command::TrainRiskslim(a) => commands::riskslim::train(a),
        Command::Rashomon(a) => commands::rulelist::rashomon(a),
        Command::Counterfactual(a) => commands::counterfactual::run(a),
        Command::Compare(a) => commands::compare::run(a),
        Command::BruteForce(a) => commands::brute::run(a),
    };
    let code = match result.and_then(|(status, run)| {
        run.finish(status.code())?;
        Ok(status)
    }) {
        Ok(status) => {
            match status {
                Status::Gap => log::warn!("search budget exhausted; outputs carry the remaining gap"),
                Status::Infeasible => log::warn!("no answer within the given limits"),
                Status::Done => {}
            }
            status.code()
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            exit_code(&err)
        }
    };
    ExitCode::from(code)
}
