use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use schur_cli::{emit, fail, read_input, status};
use schur_core::analysis::{is_ci_sring, is_ci_subset, CiCertificate};
use schur_core::gfp::GroupContext;
use schur_core::io::{parse_sets, parse_sring, Block};
use schur_core::{Deadline, Error};

#[derive(Parser)]
#[command(name = "ci", about = "CI tests through regular subgroup conjugacy")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[arg(long, global = true)]
    timeout: Option<f64>,
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Test Cay(H, S) for the comma-separated set S.
    Subset {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        set: String,
    },
    /// Test an S-ring file.
    Sring { file: PathBuf },
}

fn report(cert: &CiCertificate) -> Vec<Block> {
    let mut blocks = vec![Block::new()
        .field("ci", cert.ci)
        .field("aut_order", cert.aut_order.to_string())
        .field("search_order", cert.search_order.to_string())
        .field("regular_subgroups", cert.regular.len())];
    for (i, r) in cert.regular.iter().enumerate() {
        let gens: Vec<String> = r.generators.iter().map(|g| g.to_string()).collect();
        let mut b = Block::new().field("subgroup", i).field("generators", gens.join("\n"));
        match &r.conjugator {
            Some(g) => b.push("conjugator", g.to_string()),
            None => b.push("conjugator", "none"),
        }
        blocks.push(b);
    }
    blocks
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let d = Deadline::from_secs(cli.timeout);
    let cert = match cli.cmd {
        Cmd::Subset { p, n, set } => {
            let ctx = GroupContext::new(p, n)?;
            let s = parse_sets(&ctx, &set)?.concat();
            is_ci_subset(&ctx, &s, &d)?
        }
        Cmd::Sring { file } => is_ci_sring(&parse_sring(&read_input(&file)?)?, &d)?,
    };
    emit(&report(&cert), cli.json);
    Ok(status(cert.ci))
}

fn main() -> ExitCode {
    run(Cli::parse()).unwrap_or_else(|e| fail(&e))
}
