//! Code file format and command implementations.

pub mod codefile;
pub mod commands;
pub mod error;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::codefile::CodeFile;
use crate::commands::{ConstructOptions, Family, LemmaSet, Outcome};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "cdc", version, about = "Construct, verify and report on constant-dimension subspace codes")]
pub struct Cli {
    /// Worker threads for verification; results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a code and write it in canonical form.
    Construct(ConstructArgs),
    /// Check the minimum distance (and orbit claim, if any) of a code file.
    Verify(VerifyArgs),
    /// Print a text report.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(value_enum)]
    pub family_pos: Option<Family>,
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    #[arg(long)]
    pub q: u32,
    /// Primitive polynomial of GF(q^3) over GF(p), comma-separated ascending
    /// coefficients (degree 3e).
    #[arg(long)]
    pub poly: Option<String>,
    /// Seed for the choice of planes through the lines of gamma; lex when absent.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Disjoint family placed first in the pg8 linkage.
    #[arg(long, default_value_t = 0)]
    pub a_prime: usize,
    /// Output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_name = "FILE")]
    pub file: Option<PathBuf>,
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Required minimum distance; defaults to the `d` in the header.
    #[arg(long)]
    pub expect_min_dist: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportKind {
    Bounds,
    Lemmas,
    Fingerprint,
    Partition,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(value_enum)]
    pub kind: ReportKind,
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    /// A_q(n-k+d/2, d; d/2), for a one-step Johnson bound.
    #[arg(long)]
    pub known_a: Option<u64>,
    /// Code file whose size is reported as constructed.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Which lemma set to run.
    #[arg(long, value_enum, default_value = "cdc6")]
    pub family: LemmaSet,
    #[arg(long)]
    pub poly: Option<String>,
    #[arg(long)]
    pub a: Option<PathBuf>,
    #[arg(long)]
    pub b: Option<PathBuf>,
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

pub fn read_code(path: &std::path::Path) -> Result<CodeFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    CodeFile::parse(&text)
}

/// Runs one command inside a pool of `threads` workers. Files requested with
/// `--out` are written here; everything else is returned as text.
pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    if cli.threads == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    pool.install(|| dispatch(cli.command))
}

fn dispatch(cmd: Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Construct(a) => {
            let family = match (a.family_pos, a.family) {
                (Some(x), Some(y)) if x != y => {
                    return Err(CliError::Usage("conflicting families given".into()))
                }
                (x, y) => need(x.or(y), "family")?,
            };
            let poly = a.poly.as_deref().map(commands::parse_poly).transpose()?;
            let file = commands::construct(&ConstructOptions { family, q: a.q, poly, seed: a.seed, a_prime: a.a_prime })?;
            let text = file.to_text();
            match a.out {
                Some(path) => {
                    std::fs::write(&path, &text)?;
                    Ok(Outcome {
                        text: format!("wrote {} family={} q={} count={}\n", path.display(), family.tag(), a.q, file.header.count),
                        passed: true,
                    })
                }
                None => Ok(Outcome { text, passed: true }),
            }
        }
        Command::Verify(a) => {
            let path = match (a.file, a.input) {
                (Some(_), Some(_)) => return Err(CliError::Usage("give the file once".into())),
                (x, y) => need(x.or(y), "in")?,
            };
            commands::verify(&read_code(&path)?, a.expect_min_dist)
        }
        Command::Report(a) => {
            let tower = || {
                let poly = a.poly.as_deref().map(commands::parse_poly).transpose()?;
                commands::tower_for(need(a.q, "q")?, poly.as_deref())
            };
            match a.kind {
                ReportKind::Bounds => {
                    let file = a.input.as_deref().map(read_code).transpose()?;
                    commands::report_bounds(
                        need(a.n, "n")?,
                        need(a.d, "d")?,
                        need(a.k, "k")?,
                        need(a.q, "q")?,
                        a.known_a,
                        file.as_ref(),
                    )
                }
                ReportKind::Lemmas => commands::report_lemmas(&tower()?, a.family),
                ReportKind::Partition => commands::report_partition(&tower()?),
                ReportKind::Fingerprint => match (&a.a, &a.b) {
                    (Some(pa), Some(pb)) => commands::report_fingerprint(&read_code(pa)?, &read_code(pb)?),
                    (None, None) => commands::report_non_equivalence(&tower()?),
                    _ => Err(CliError::Usage("give both --a and --b, or neither".into())),
                },
            }
        }
    }
}
