use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use schur_cli::{emit, fail, read_input, status, write_output};
use schur_core::analysis::{aut_group, decomposability_witness, schurian_with};
use schur_core::build::{quotient_sring, stabilize, transitivity_module};
use schur_core::gfp::{span_of_indices, GroupContext, Subspace};
use schur_core::io::{
    parse_matrices, parse_partition, parse_sets, parse_sring, serialize_perm_group, serialize_sring, Block,
};
use schur_core::sring::verify_sring;
use schur_core::{Deadline, Error};

#[derive(Parser)]
#[command(name = "sring", about = "Build and inspect Schur rings over Z_p^n")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the S-ring axioms for a partition file.
    Verify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// The S-ring generated by one or more sets, separated by `;`.
    Gen {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        set: String,
    },
    /// Orbits of the group generated by matrices (rows act on row vectors).
    FromMatrices {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: usize,
        file: PathBuf,
    },
    /// Automorphism group of the Cayley coloring.
    Aut {
        file: PathBuf,
        #[arg(long)]
        timeout: Option<f64>,
        /// Also write the generators as a group file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Find S-ring subgroups F <= E exhibiting a wedge decomposition.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Quotient by the subgroup spanned by comma-separated element indices.
    Quotient {
        file: PathBuf,
        #[arg(long)]
        by: String,
    },
}

fn basis_field(ctx: &GroupContext, s: &Subspace) -> String {
    let v: Vec<String> = s.basis_indices(ctx).iter().map(|x| x.to_string()).collect();
    v.join(",")
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.cmd {
        Cmd::Verify { file, json } => {
            let (ctx, classes) = parse_partition(&read_input(&file)?)?;
            let verdict = verify_sring(&ctx, &classes);
            let mut b = Block::new().field("p", ctx.p()).field("n", ctx.n()).field("classes", classes.len());
            b.push("valid", verdict.is_ok());
            if let Err(v) = &verdict {
                b.push("violation", v.to_string());
            }
            emit(&[b], json);
            Ok(status(verdict.is_ok()))
        }
        Cmd::Gen { p, n, set } => {
            let ctx = GroupContext::new(p, n)?;
            let sets = parse_sets(&ctx, &set)?;
            let mut labels = vec![0u32; ctx.order()];
            for (i, s) in sets.iter().enumerate() {
                if i >= 31 {
                    return Err(Error::Unsupported("more than 31 sets".into()));
                }
                for &x in s {
                    labels[x] |= 1 << i;
                }
            }
            print!("{}", serialize_sring(&stabilize(&ctx, &labels)?));
            Ok(status(true))
        }
        Cmd::FromMatrices { p, n, file } => {
            let ctx = GroupContext::new(p, n)?;
            let mats = parse_matrices(&ctx, &read_input(&file)?)?;
            print!("{}", serialize_sring(&transitivity_module(&ctx, &mats)?));
            Ok(status(true))
        }
        Cmd::Aut { file, timeout, out, json } => {
            let a = parse_sring(&read_input(&file)?)?;
            let g = aut_group(&a, &Deadline::from_secs(timeout))?;
            if let Some(path) = out {
                write_output(&path, &serialize_perm_group(&g))?;
            }
            let b = Block::new()
                .field("degree", g.degree())
                .field("order", g.order().to_string())
                .field("generators", g.generators().len())
                .field("base", g.base())
                .field("orbit_lengths", g.basic_orbit_lengths())
                .field("schurian", schurian_with(&a, &g));
            emit(&[b], json);
            Ok(status(true))
        }
        Cmd::Decompose { file, json } => {
            let a = parse_sring(&read_input(&file)?)?;
            let ctx = a.ctx();
            let mut b = Block::new().field("rank", a.rank());
            match decomposability_witness(&a)? {
                Some((e, f)) => {
                    b.push("decomposable", true);
                    b.push("e_dim", e.dim());
                    b.push("e_basis", basis_field(ctx, &e));
                    b.push("f_dim", f.dim());
                    b.push("f_basis", basis_field(ctx, &f));
                }
                None => b.push("decomposable", false),
            }
            emit(&[b], json);
            Ok(status(true))
        }
        Cmd::Quotient { file, by } => {
            let a = parse_sring(&read_input(&file)?)?;
            let gens = parse_sets(a.ctx(), &by)?.concat();
            let k = span_of_indices(a.ctx(), &gens);
            print!("{}", serialize_sring(&quotient_sring(&a, &k)?));
            Ok(status(true))
        }
    }
}

fn main() -> ExitCode {
    run(Cli::parse()).unwrap_or_else(|e| fail(&e))
}
