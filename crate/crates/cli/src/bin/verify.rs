use std::process::ExitCode;

use clap::{Parser, Subcommand};
use schur_cli::{emit, fail, status};
use schur_core::io::Block;
use schur_core::suites::{verify_suite, SUITES};
use schur_core::{Deadline, Error};

#[derive(Parser)]
#[command(name = "verify", about = "Seeded property suites")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one named suite.
    Suite {
        #[arg(long)]
        name: String,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// List suite names.
    List,
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.cmd {
        Cmd::Suite { name, p, seed, trials, timeout, json } => {
            let r = verify_suite(&name, p, seed, trials, &Deadline::from_secs(timeout))?;
            let b = Block::new()
                .field("suite", r.name.clone())
                .field("p", r.p)
                .field("seed", r.seed)
                .field("trials", r.trials)
                .field("cases", r.cases)
                .field("skipped", r.skipped.len())
                .field("failures", r.failures.len())
                .field("verdict", if r.passed() { "pass" } else { "fail" })
                .field("wall_time_secs", format!("{:.3}", r.wall_time_secs));
            let mut blocks = vec![b];
            blocks.extend(r.skipped.iter().map(|s| Block::new().field("skipped", s.clone())));
            blocks.extend(r.failures.iter().map(|f| Block::new().field("failure", f.clone())));
            emit(&blocks, json);
            Ok(status(r.passed()))
        }
        Cmd::List => {
            for s in SUITES {
                println!("{s}");
            }
            Ok(status(true))
        }
    }
}

fn main() -> ExitCode {
    run(Cli::parse()).unwrap_or_else(|e| fail(&e))
}
