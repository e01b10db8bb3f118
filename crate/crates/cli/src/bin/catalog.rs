use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use schur_cli::{emit, fail, status, write_output};
use schur_core::catalog::{build_table1, exceptional_sring, ll2_sring, ClassificationReport};
use schur_core::io::{render_json, render_text, serialize_sring, Block};
use schur_core::{Deadline, Error};

#[derive(Parser)]
#[command(name = "catalog", about = "Named S-rings and the p-S-rings over Z_p^3")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify transitivity modules of subgroups of UT(3, p) up to Cayley isomorphism.
    Table1 {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Orbits of the unipotent Jordan block on Z_p^3.
    Exceptional {
        #[arg(long)]
        p: u32,
    },
    /// The rank-51 ring over Z_p^5 with its two generating matrices.
    Ll2 {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        json: bool,
    },
}

fn table_blocks(r: &ClassificationReport) -> Vec<Block> {
    let mut blocks = vec![Block::new()
        .field("p", r.p)
        .field("n", r.n)
        .field("scope", r.scope.clone())
        .field("total_inputs", r.total_inputs)
        .field("distinct_srings", r.distinct_srings)
        .field("classes", r.classes.len())
        .field("matches_table", r.matches_table())];
    for c in &r.classes {
        let sizes: Vec<String> = c.fingerprint.sizes.iter().map(|(s, m)| format!("{s}^{m}")).collect();
        let counts: Vec<String> = c.fingerprint.subgroup_counts.iter().map(|x| x.to_string()).collect();
        blocks.push(
            Block::new()
                .field("row", c.row.map_or_else(|| "unmatched".to_string(), |r| r.to_string()))
                .field("rank", c.fingerprint.rank)
                .field("sizes", sizes.join(" "))
                .field("subgroup_counts", counts.join(" "))
                .field("decomposable", c.fingerprint.decomposable)
                .field("schurian", c.schurian)
                .field("aut_order", c.aut_order.clone())
                .field("members", c.member_count)
                .field("representative", c.representative.clone()),
        );
    }
    blocks
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.cmd {
        Cmd::Table1 { p, out, timeout, json } => {
            let r = build_table1(p, &Deadline::from_secs(timeout))?;
            let blocks = table_blocks(&r);
            if let Some(path) = out {
                let text = if json { render_json(&blocks) } else { render_text(&blocks) };
                write_output(&path, &text)?;
            } else {
                emit(&blocks, json);
            }
            if !r.matches_table() {
                eprintln!("classification does not match the six expected rows");
            }
            Ok(status(r.matches_table()))
        }
        Cmd::Exceptional { p } => {
            print!("{}", serialize_sring(&exceptional_sring(p)?));
            Ok(status(true))
        }
        Cmd::Ll2 { p, json } => {
            let (a, l) = ll2_sring(p)?;
            if json {
                let mats: Vec<Vec<Vec<u32>>> = l.iter().map(|m| m.rows().to_vec()).collect();
                let b = Block::new()
                    .field("rank", a.rank())
                    .field("matrices", serde_json::to_value(mats).expect("plain data"))
                    .field("sring", serialize_sring(&a));
                emit(&[b], true);
            } else {
                print!("{}", serialize_sring(&a));
            }
            Ok(status(true))
        }
    }
}

fn main() -> ExitCode {
    run(Cli::parse()).unwrap_or_else(|e| fail(&e))
}
