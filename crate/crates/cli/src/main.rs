mod commands;
mod common;
mod config;
mod manifest;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{decode, distance, export, params, pseudothreshold, search, simulate};

/// Self-dual stacked CSS codes: parameters, distances, search and memory simulation.
#[derive(Parser)]
#[command(name = "selfdual", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print n, k, parity, k_max, d and kd²/n of a code spec.
    Params(params::Args),
    /// Exact or randomized minimum distance.
    Distance(distance::Args),
    /// Search polynomial exponents for good codes.
    Search(search::Args),
    /// Memory experiment over a grid of physical error rates.
    Simulate(simulate::Args),
    /// Crossing of the LFR curve with the unencoded error rate.
    Pseudothreshold(pseudothreshold::Args),
    /// Write H, logicals or the seed stabilizer support.
    Export(export::Args),
    /// Decode packed samples against a detector model.
    Decode(decode::Args),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Params(a) => params::run(a),
        Command::Distance(a) => distance::run(a),
        Command::Search(a) => search::run(a),
        Command::Simulate(a) => simulate::run(a),
        Command::Pseudothreshold(a) => pseudothreshold::run(a),
        Command::Export(a) => export::run(a),
        Command::Decode(a) => decode::run(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(common::exit_code(&e))
        }
    }
}
