//! `snpcut`: network-guided SNP selection from the command line.

mod args;
mod commands;
mod inputs;
mod rundir;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

const EXIT_INVALID: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let infeasible = e.chain().any(|c| {
                c.downcast_ref::<snpcut::Error>()
                    .is_some_and(snpcut::Error::is_infeasible)
            });
            ExitCode::from(if infeasible {
                EXIT_INFEASIBLE
            } else {
                EXIT_INVALID
            })
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let common = cli.command.common();
    if let Some(threads) = common.threads {
        anyhow::ensure!(threads > 0, "--threads must be at least 1");
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()?;
    }
    match &cli.command {
        Command::BuildNetwork(a) => commands::build_network(a),
        Command::Select(a) => commands::select(a),
        Command::Cv(a) => commands::cv(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Evaluate(a) => commands::evaluate(a),
        Command::Baseline(a) => commands::baseline(a),
    }
}
