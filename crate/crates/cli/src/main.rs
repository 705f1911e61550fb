//! `dilate-lab`: sums of dilates, their constants, lemma checks and
//! extremal search from the command line.
//!
//! Exit status: 0 when every check holds, 1 when a checked inequality
//! fails (the failing instance is printed), 2 on usage, parse or
//! precondition errors.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use dilate_core::bounds::{recursive_constants_with, SubTupleMode};
use dilate_core::dilates::{dilate_sum, dilate_sum_fast};
use dilate_core::residue::{fine_partition, residue_partition};
use dilate_core::search::{constant_table, ResultsStore, SearchConfig, SearchRecord, WindowPolicy};
use dilate_core::verify;
use dilate_core::{DilateTuple, Error, IntSet};

use output::{emit, Format};

#[derive(Parser)]
#[command(name = "dilate-lab", version, about = "Sums of dilates of finite integer sets")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Promise that nothing random runs. Every command is deterministic,
    /// so this only records the request.
    #[arg(long, global = true)]
    seedless: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct LambdaSet {
    /// Coefficients, e.g. `1,2` or `(2,-3)`.
    #[arg(long, allow_hyphen_values = true)]
    lambdas: DilateTuple,
    /// Set literal, e.g. `0,1,3` or `0..9,12`.
    #[arg(long, allow_hyphen_values = true)]
    set: IntSet,
}

#[derive(Subcommand)]
enum Command {
    /// The dilate sum and its size.
    Sum {
        #[command(flatten)]
        args: LambdaSet,
        /// Use the nested-loop reference instead of the bitset kernel.
        #[arg(long)]
        reference: bool,
    },
    /// Check an inequality on one set.
    Verify {
        #[command(subcommand)]
        which: VerifyCommand,
    },
    /// Leave-one-out sumset bound for two or more sets.
    Gmr {
        /// One set literal per summand; repeat the flag.
        #[arg(long = "set", allow_hyphen_values = true, required = true)]
        sets: Vec<IntSet>,
    },
    /// Residue classes mod `q`, or mod every cofactor gcd and their product.
    Partition {
        #[arg(long, allow_hyphen_values = true)]
        set: IntSet,
        #[arg(long, conflicts_with = "lambdas")]
        modulus: Option<i64>,
        #[arg(long, allow_hyphen_values = true, required_unless_present = "modulus")]
        lambdas: Option<DilateTuple>,
    },
    /// Replay one induction step with its case classification.
    Trace {
        #[command(flatten)]
        args: LambdaSet,
        #[arg(long)]
        u: u64,
    },
    /// Exhaustive minimum of the dilate-sum size over canonical sets.
    Search {
        #[arg(long, allow_hyphen_values = true)]
        lambdas: DilateTuple,
        /// Smallest set size.
        #[arg(long)]
        n: usize,
        /// Largest set size (defaults to `n`).
        #[arg(long)]
        n_to: Option<usize>,
        /// Fixed window `W`; sets live in `{0, ..., W-1}`.
        #[arg(long, conflicts_with = "window_factor")]
        window: Option<u64>,
        /// Window `W = factor * n`.
        #[arg(long, default_value_t = 3)]
        window_factor: u64,
        /// Results directory.
        #[arg(long, default_value = "results")]
        store: PathBuf,
        /// Largest number of candidate sets per search.
        #[arg(long, env = "DILATE_LAB_BUDGET", default_value_t = dilate_core::search::DEFAULT_BUDGET)]
        budget: u128,
    },
    /// The additive constants and their derivation.
    Constants {
        #[arg(long, allow_hyphen_values = true)]
        lambdas: DilateTuple,
        /// Evaluate sub-tuples as they are instead of dividing by `g_i`.
        #[arg(long)]
        raw: bool,
    },
    /// Size of the dilate sum of `{0, ..., n-1}` against its upper bound.
    Interval {
        #[arg(long, allow_hyphen_values = true)]
        lambdas: DilateTuple,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// `|sum| >= S|A| - C`.
    Main(LambdaSet),
    /// The bound for sets fully distributed mod every cofactor gcd.
    Fd(LambdaSet),
    /// Class dichotomy; all classes unless `--i` and `--j` are given.
    Dist1 {
        #[command(flatten)]
        args: LambdaSet,
        #[arg(long, requires = "j")]
        i: Option<usize>,
        #[arg(long, requires = "i")]
        j: Option<usize>,
    },
    /// Cell dichotomy; all hypothesis-satisfying cells unless `--e` is given.
    Dist2 {
        #[command(flatten)]
        args: LambdaSet,
        #[arg(long)]
        e: Option<usize>,
    },
    /// The dilate sum splits over residue-class tuples.
    Decomposition(LambdaSet),
}

struct Outcome {
    report: Value,
    holds: bool,
}

impl Outcome {
    fn new(report: impl Serialize, holds: bool) -> Result<Self, Error> {
        Ok(Outcome {
            report: serde_json::to_value(report)?,
            holds,
        })
    }

    fn info(report: impl Serialize) -> Result<Self, Error> {
        Self::new(report, true)
    }
}

fn run_verify(which: VerifyCommand) -> Result<Outcome, Error> {
    match which {
        VerifyCommand::Main(a) => {
            let r = verify::verify_main(&a.lambdas, &a.set)?;
            let holds = r.holds;
            Outcome::new(r, holds)
        }
        VerifyCommand::Fd(a) => {
            let r = verify::verify_fd_lemma(&a.lambdas, &a.set)?;
            let holds = r.holds;
            Outcome::new(r, holds)
        }
        VerifyCommand::Dist1 { args, i, j } => match i.zip(j) {
            Some((i, j)) => {
                let r = verify::verify_dist1(&args.lambdas, &args.set, i, j)?;
                let holds = r.holds;
                Outcome::new(r, holds)
            }
            None => {
                let rs = verify::verify_dist1_all(&args.lambdas, &args.set)?;
                let holds = rs.iter().all(|r| r.holds);
                Outcome::new(rs, holds)
            }
        },
        VerifyCommand::Dist2 { args, e } => match e {
            Some(e) => {
                let r = verify::verify_dist2(&args.lambdas, &args.set, e)?;
                let holds = r.holds;
                Outcome::new(r, holds)
            }
            None => {
                let rs = verify::verify_dist2_all(&args.lambdas, &args.set)?;
                let holds = rs.iter().all(|r| r.holds);
                Outcome::new(rs, holds)
            }
        },
        VerifyCommand::Decomposition(a) => {
            let r = verify::verify_decomposition(&a.lambdas, &a.set)?;
            let holds = r.holds;
            Outcome::new(r, holds)
        }
    }
}

fn partition_report(set: &IntSet, modulus: Option<i64>, lambdas: Option<DilateTuple>) -> Result<Value, Error> {
    let classes = |p: &dilate_core::ResiduePartition| -> Vec<Value> {
        p.classes
            .iter()
            .map(|c| json!({"offset": c.offset, "members": c.members, "quotient": c.quotient}))
            .collect()
    };
    if let Some(q) = modulus {
        let p = residue_partition(set, q)?;
        return Ok(json!({
            "set": set,
            "modulus": q,
            "fully_distributed": dilate_core::residue::is_fully_distributed(set, q)?,
            "classes": classes(&p),
        }));
    }
    let lambdas = lambdas.expect("clap requires --lambdas without --modulus");
    let fine = fine_partition(&lambdas, set)?;
    let coarse: Vec<Value> = fine
        .coarse
        .iter()
        .zip(fine.cofactors.as_slice())
        .map(|(p, g)| json!({"modulus": g, "classes": classes(p)}))
        .collect();
    let cells: Vec<Value> = fine
        .cells
        .iter()
        .map(|c| {
            json!({
                "offset": c.offset,
                "members": c.members,
                "quotient": c.quotient,
                "classes": c.coarse_index,
            })
        })
        .collect();
    Ok(json!({
        "lambdas": lambdas,
        "set": set,
        "cofactors": fine.cofactors.as_slice(),
        "modulus": fine.modulus,
        "coarse": coarse,
        "cells": cells,
    }))
}

fn run_search(
    lambdas: &DilateTuple,
    n: usize,
    n_to: Option<usize>,
    policy: WindowPolicy,
    store: PathBuf,
    budget: u128,
) -> Result<Vec<SearchRecord>, Error> {
    let store = ResultsStore::new(store);
    let config = SearchConfig {
        budget,
        ..SearchConfig::default()
    };
    constant_table(lambdas, n, n_to.unwrap_or(n), policy, &store, &config, |r, cached| {
        eprintln!(
            "search {}: n={} W={} min={} c_emp={}{}",
            r.lambdas,
            r.n,
            r.window,
            r.min_size,
            r.empirical_constant,
            if cached { " (cached)" } else { "" }
        );
    })
}

fn run(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Sum { args, reference } => {
            let sum = if reference {
                dilate_sum(&args.lambdas, &args.set)?
            } else {
                dilate_sum_fast(&args.lambdas, &args.set)?
            };
            Outcome::info(json!({
                "lambdas": args.lambdas,
                "set": args.set,
                "sum": sum,
                "size": sum.len(),
            }))
        }
        Command::Verify { which } => run_verify(which),
        Command::Gmr { sets } => {
            let r = verify::verify_gmr(&sets)?;
            let holds = r.holds;
            Outcome::new(r, holds)
        }
        Command::Partition { set, modulus, lambdas } => Outcome::info(partition_report(&set, modulus, lambdas)?),
        Command::Trace { args, u } => {
            let t = verify::trace_cases(&args.lambdas, &args.set, u)?;
            let holds = t.all_hold && t.labels_unique;
            Outcome::new(t, holds)
        }
        Command::Search {
            lambdas,
            n,
            n_to,
            window,
            window_factor,
            store,
            budget,
        } => {
            let policy = match window {
                Some(w) => WindowPolicy::Fixed(w),
                None => WindowPolicy::Multiple(window_factor),
            };
            Outcome::info(run_search(&lambdas, n, n_to, policy, store, budget)?)
        }
        Command::Constants { lambdas, raw } => {
            let mode = if raw { SubTupleMode::Raw } else { SubTupleMode::Normalized };
            Outcome::info(&*recursive_constants_with(&lambdas, mode)?)
        }
        Command::Interval { lambdas, n } => {
            let r = verify::verify_interval(&lambdas, n)?;
            let holds = r.holds;
            Outcome::new(r, holds)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(outcome.report, cli.format) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if outcome.holds {
        ExitCode::SUCCESS
    } else {
        eprintln!("error: a checked inequality fails; the report above is a counterexample");
        ExitCode::from(1)
    }
}
