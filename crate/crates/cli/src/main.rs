//! `reflexpoly`: command-line front end.
//!
//! Exit codes: 0 success, 1 a verification or property check failed,
//! 2 invalid input or capability exceeded. Data goes to stdout in a
//! canonical order; diagnostics and timing go to stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use reflexpoly::audit::verification_suite;
use reflexpoly::classify::{
    analyze_sweep, check_uniqueness, classify_sublattices, default_cap, find_all_transversals,
    find_transversal, group_by_family, is_reflexive_lemma, theorem_a_findings, TSV_HEADER,
};
use reflexpoly::polymatroid::{points_of_rank, rank_from_sublattice, RankFunction};
use reflexpoly::polytope::{independence_hrep, is_reflexive_direct, HPolytope};
use reflexpoly::setfam::{enumerate_sublattices, SetFamily};
use reflexpoly::{Error, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "reflexpoly",
    version,
    about = "Discrete polymatroids with reflexive independence polytopes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the sublattices of 2^[d] (d <= 4), one JSON family per line.
    Sublattices {
        #[arg(long)]
        d: usize,
        /// Print only the number of sublattices.
        #[arg(long)]
        count_only: bool,
    },
    /// Build the rank function of a sublattice and its independence polytope.
    FromSublattice {
        /// Set family file: {"d":3,"sets":[[],[3],[2,3],[1,2,3]]}.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Emit::All)]
        emit: Emit,
    },
    /// Validate a rank table; exits 1 with the violated axiom if invalid.
    RankCheck {
        /// Rank function file: {"d":2,"values":[0,3,2,3]}.
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Reflexivity verdicts; exits 1 if the two verdicts disagree.
    Reflexive(ReflexiveArgs),
    /// Classify every sublattice of 2^[d].
    Classify {
        #[arg(long)]
        d: usize,
        /// Also search for a transversal presentation of each rank function.
        #[arg(long)]
        transversal: bool,
        #[arg(long, value_enum, default_value_t = Format::Jsonl)]
        format: Format,
    },
    /// Sweep every valid loopless rank table with values <= cap.
    Sweep {
        #[arg(long)]
        d: usize,
        /// Largest table value; defaults to 2d.
        #[arg(long)]
        cap: Option<u64>,
        #[arg(long, value_enum, default_value_t = Report::All)]
        report: Report,
    },
    /// Search for a transversal presentation with rho([d]) blocks.
    Transversal {
        #[arg(long)]
        rank: PathBuf,
        /// List every presentation instead of the first.
        #[arg(long)]
        all: bool,
    },
    /// Run the full verification suite; exits 1 if any check fails.
    VerifyPaper {
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u8).range(1..=8))]
        dmax: u8,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ReflexiveArgs {
    /// Rank function file; both verdicts are computed.
    #[arg(long)]
    rank: Option<PathBuf>,
    /// Inequality system file: {"d":2,"ineqs":[{"a":[-1,0],"b":0},...]}.
    #[arg(long)]
    hrep: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Rank,
    Hrep,
    Points,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Jsonl,
    Tsv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Report {
    Uniqueness,
    TheoremA,
    All,
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

fn line<T: Serialize>(value: &T) -> Result<()> {
    let s = serde_json::to_string(value).map_err(|e| Error::internal(e.to_string()))?;
    println!("{s}");
    Ok(())
}

/// `value` as a JSON object with an extra `report` key.
fn tagged<T: Serialize>(report: &str, value: &T) -> Result<Value> {
    let mut v = serde_json::to_value(value).map_err(|e| Error::internal(e.to_string()))?;
    if let Value::Object(map) = &mut v {
        map.insert("report".into(), json!(report));
    }
    Ok(v)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Sublattices { d, count_only } => {
            let all = enumerate_sublattices(d)?;
            if count_only {
                println!("{}", all.len());
            } else {
                for f in &all {
                    line(f)?;
                }
            }
        }
        Command::FromSublattice { input, emit } => {
            let lattice: SetFamily = read_json(&input)?;
            let rank = rank_from_sublattice(&lattice)?;
            match emit {
                Emit::Rank => line(&rank)?,
                Emit::Hrep => line(&independence_hrep(&rank, false)?)?,
                Emit::Points => line(&points_of_rank(&rank)?)?,
                Emit::All => {
                    let hrep = independence_hrep(&rank, false)?;
                    let direct = is_reflexive_direct(&hrep)?;
                    line(&json!({
                        "rank": rank,
                        "hrep": hrep,
                        "points": points_of_rank(&rank)?,
                        "reflexive_lemma": is_reflexive_lemma(&rank)?,
                        "reflexive_direct": direct.reflexive,
                        "center": direct.center,
                    }))?;
                }
            }
        }
        Command::RankCheck { input } => {
            let rank: RankFunction = read_json(&input)?;
            let check = rank.validate();
            line(&check)?;
            if let Some(v) = &check.violation {
                eprintln!("invalid rank function {rank}: {v}");
                return Ok(ExitCode::from(1));
            }
        }
        Command::Reflexive(ReflexiveArgs { rank, hrep }) => {
            if let Some(path) = rank {
                let rank: RankFunction = read_json(&path)?;
                let lemma = is_reflexive_lemma(&rank)?;
                let direct = is_reflexive_direct(&independence_hrep(&rank, false)?)?;
                line(&json!({
                    "reflexive_lemma": lemma,
                    "reflexive_direct": direct.reflexive,
                    "center": direct.center,
                }))?;
                if lemma != direct.reflexive {
                    eprintln!("verdicts disagree on {rank}");
                    return Ok(ExitCode::from(1));
                }
            } else if let Some(path) = hrep {
                let h: HPolytope = read_json(&path)?;
                let direct = is_reflexive_direct(&h)?;
                line(&json!({
                    "reflexive_direct": direct.reflexive,
                    "center": direct.center,
                }))?;
            }
        }
        Command::Classify {
            d,
            transversal,
            format,
        } => {
            let records = classify_sublattices(d, transversal)?;
            match format {
                Format::Jsonl => {
                    for r in &records {
                        line(r)?;
                    }
                }
                Format::Tsv => {
                    println!("{TSV_HEADER}");
                    for r in &records {
                        println!("{}", r.to_tsv());
                    }
                }
            }
            if let Some(bad) = records.iter().find(|r| !r.is_consistent()) {
                eprintln!("inconsistent record: {}", bad.to_tsv());
                return Ok(ExitCode::from(1));
            }
        }
        Command::Sweep { d, cap, report } => {
            let cap = cap.unwrap_or_else(|| default_cap(d));
            let entries = analyze_sweep(d, cap)?;
            eprintln!(
                "swept {} rank functions, {} reflexive",
                entries.len(),
                entries.iter().filter(|e| e.reflexive_direct).count()
            );
            let mut failed = false;
            if report != Report::TheoremA {
                let groups = group_by_family(&entries);
                for (family, ranks) in &groups {
                    line(&json!({
                        "report": "uniqueness",
                        "family": family,
                        "ranks": ranks,
                    }))?;
                }
                if let Err(e) = check_uniqueness(d, &groups) {
                    eprintln!("{e}");
                    failed = true;
                }
            }
            if report != Report::Uniqueness {
                for f in theorem_a_findings(&entries) {
                    line(&tagged("theorem_a", &f)?)?;
                }
            }
            if failed {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Transversal { rank, all } => {
            let rank: RankFunction = read_json(&rank)?;
            if all {
                for p in find_all_transversals(&rank, rank.total())? {
                    line(&p)?;
                }
            } else {
                line(&find_transversal(&rank, rank.total())?)?;
            }
        }
        Command::VerifyPaper { dmax } => {
            let results = verification_suite(dmax.into(), |c| println!("{}", c.line()));
            let failed = results.iter().filter(|c| !c.passed).count();
            eprintln!("{} checks, {failed} failed", results.len());
            if failed > 0 {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Input(_) | Error::Capability(_) => ExitCode::from(2),
                Error::Verification { .. } | Error::Internal(_) => ExitCode::from(1),
            }
        }
    };
    eprintln!("elapsed {:.2?}", start.elapsed());
    code
}
