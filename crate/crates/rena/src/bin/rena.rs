// SPDX-License-Identifier: Apache-2.0

//! Command-line front end: exact counting, enumeration, uniform sampling,
//! automaton construction, singularity analysis and the oracle suite, all
//! as reproducible machine-readable reports.
//!
//! Exit codes: 0 ok, 1 usage error, 2 check failure, 3 budget exceeded.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use rena::asymptotics::{self, Singularity};
use rena::enumeration::{self, MeasureAggregate};
use rena::expr;
use rena::glushkov;
use rena::sampler::{ExprClass, Sampler};
use rena::series::CoeffTable;
use rena::stats;

#[derive(Parser)]
#[command(name = "rena", version, about = "Regular-expression class analytics")]
struct Cli {
    /// Base seed for anything randomized.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Working precision for the numeric analysis, in decimal digits.
    #[arg(long, global = true)]
    precision_digits: Option<usize>,

    /// Worker threads (0 = rayon default).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact series coefficients up to an order, as CSV or the JSON table.
    Count(CountArgs),
    /// Exhaustive enumeration aggregates, one JSON record per size.
    Enumerate(EnumerateArgs),
    /// Uniform random expressions, one per line (or aggregate stats).
    Sample(SampleArgs),
    /// Position automaton and counting functions of one expression.
    Glushkov(GlushkovArgs),
    /// Singularity table: rho, eta, psi, g, letters ratio, lambda.
    Theory(TheoryArgs),
    /// Sampled measures next to theory and exact-series values.
    Compare(CompareArgs),
    /// Oracle-vs-series equality suite; fails loudly on any divergence.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Re,
    Rena,
}

impl From<ClassArg> for ExprClass {
    fn from(c: ClassArg) -> ExprClass {
        match c {
            ClassArg::Re => ExprClass::Re,
            ClassArg::Rena => ExprClass::Rena,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    n_max: usize,
    #[arg(long, value_enum)]
    class: ClassArg,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    n_max: usize,
    /// Visit cap per size.
    #[arg(long, default_value_t = enumeration::DEFAULT_BUDGET)]
    cap: u128,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum)]
    class: ClassArg,
    #[arg(long)]
    count: u64,
    /// Emit aggregate measures instead of the expressions.
    #[arg(long)]
    stats_only: bool,
}

#[derive(Args)]
struct GlushkovArgs {
    #[arg(long)]
    expr: String,
    #[arg(long)]
    k: u32,
}

#[derive(Args)]
struct TheoryArgs {
    /// Comma-separated alphabet sizes, e.g. 2,5,10,50,100,10000.
    #[arg(long, value_delimiter = ',')]
    k_list: Vec<u32>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    samples: u64,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    n_max: usize,
    #[arg(long, default_value_t = enumeration::DEFAULT_BUDGET)]
    cap: u128,
}

enum AppError {
    Usage(String),
    Check(String),
    Budget(String),
}

impl AppError {
    fn code(&self) -> u8 {
        match self {
            AppError::Usage(_) => 1,
            AppError::Check(_) => 2,
            AppError::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Usage(m) | AppError::Check(m) | AppError::Budget(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's rendering, but the spec's usage exit code
            let is_usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if is_usage { 1 } else { 0 });
        }
    };
    if cli.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match run(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli.output, &out) {
                eprintln!("rena: cannot write output: {e}");
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("rena: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn emit(path: &Option<PathBuf>, content: &str) -> std::io::Result<()> {
    match path {
        None => std::io::stdout().lock().write_all(content.as_bytes()),
        Some(p) => std::fs::write(p, content),
    }
}

/// Full flag set for provenance, exactly as invoked.
fn invocation() -> Vec<String> {
    std::env::args().skip(1).collect()
}

fn provenance() -> serde_json::Value {
    json!({
        "name": "rena",
        "version": env!("CARGO_PKG_VERSION"),
        "args": invocation(),
    })
}

fn csv_provenance() -> String {
    format!(
        "# rena v{} :: {}\n",
        env!("CARGO_PKG_VERSION"),
        invocation().join(" ")
    )
}

/// Series order budget: coefficient bit-length grows like n·log2(1/η), so
/// the allowance shrinks as k grows.
fn series_budget(k: u32) -> usize {
    let per_coeff = 0.5 * (8.0 + 8.0 * k as f64).log2();
    ((24_000.0 / per_coeff) as usize).min(4000)
}

fn run(cli: &Cli) -> Result<String, AppError> {
    match &cli.cmd {
        Cmd::Count(args) => cmd_count(cli, args),
        Cmd::Enumerate(args) => cmd_enumerate(cli, args),
        Cmd::Sample(args) => cmd_sample(cli, args),
        Cmd::Glushkov(args) => cmd_glushkov(cli, args),
        Cmd::Theory(args) => cmd_theory(cli, args),
        Cmd::Compare(args) => cmd_compare(cli, args),
        Cmd::Oracle(args) => cmd_oracle(cli, args),
    }
}

fn require(cond: bool, msg: &str) -> Result<(), AppError> {
    if cond {
        Ok(())
    } else {
        Err(AppError::Usage(msg.to_string()))
    }
}

fn check_series_budget(k: u32, n_max: usize) -> Result<(), AppError> {
    let allowed = series_budget(k);
    if n_max > allowed {
        return Err(AppError::Budget(format!(
            "series order {n_max} exceeds the budget {allowed} for k={k}"
        )));
    }
    Ok(())
}

fn cmd_count(_cli: &Cli, args: &CountArgs) -> Result<String, AppError> {
    require(args.k >= 1, "count: --k must be at least 1")?;
    require(args.n_max >= 1, "count: --n-max must be at least 1")?;
    check_series_budget(args.k, args.n_max)?;
    let table = CoeffTable::build(args.k, args.n_max);
    match args.format {
        FormatArg::Json => {
            let mut doc = table.to_json();
            doc.as_object_mut()
                .unwrap()
                .insert("tool".into(), provenance());
            Ok(format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
        }
        FormatArg::Csv => {
            let mut out = csv_provenance();
            match args.class.into() {
                ExprClass::Re => {
                    out.push_str("n,B\n");
                    for n in 1..=args.n_max {
                        let _ = writeln!(out, "{n},{}", table.b[n]);
                    }
                }
                ExprClass::Rena => {
                    out.push_str("n,R,L,F,E,E_star,T\n");
                    for n in 1..=args.n_max {
                        let _ = writeln!(
                            out,
                            "{n},{},{},{},{},{},{}",
                            table.r[n],
                            table.l[n],
                            table.f[n],
                            table.e[n],
                            table.e_star[n],
                            table.t[n]
                        );
                    }
                }
            }
            Ok(out)
        }
    }
}

fn aggregate_json(agg: &MeasureAggregate) -> serde_json::Value {
    json!({
        "count": agg.count.to_string(),
        "letters": agg.letters.to_string(),
        "first": agg.first.to_string(),
        "last": agg.last.to_string(),
        "follow": agg.follow.to_string(),
        "star_follow": agg.star_follow.to_string(),
        "transitions": agg.transitions.to_string(),
        "nullable": agg.nullable.to_string(),
    })
}

fn cmd_enumerate(_cli: &Cli, args: &EnumerateArgs) -> Result<String, AppError> {
    require(args.k >= 1, "enumerate: --k must be at least 1")?;
    require(args.n_max >= 1, "enumerate: --n-max must be at least 1")?;
    let mut out = String::new();
    for n in 1..=args.n_max {
        let all = enumeration::enumerate_filtered(args.k, n, args.cap, |_| true)
            .map_err(|e| AppError::Budget(e.to_string()))?;
        let rena_agg = enumeration::enumerate_filtered(args.k, n, args.cap, |e| {
            e.avoids_absorbing_in_union(args.k)
        })
        .map_err(|e| AppError::Budget(e.to_string()))?;
        let record = json!({
            "k": args.k,
            "n": n,
            "all": aggregate_json(&all),
            "rena": aggregate_json(&rena_agg),
            "tool": provenance(),
        });
        let _ = writeln!(out, "{record}");
    }
    Ok(out)
}

fn cmd_sample(cli: &Cli, args: &SampleArgs) -> Result<String, AppError> {
    require(args.k >= 1, "sample: --k must be at least 1")?;
    require(args.n >= 1, "sample: --n must be at least 1")?;
    check_series_budget(args.k, args.n)?;
    let sampler = Sampler::new(args.k, args.n, args.class.into())
        .map_err(|e| AppError::Usage(e.to_string()))?;
    let batch = sampler.sample_batch(cli.seed, args.count, cli.threads);
    if !args.stats_only {
        let mut out = String::new();
        for e in &batch {
            let _ = writeln!(out, "{e}");
        }
        return Ok(out);
    }
    let mut agg = MeasureAggregate::default();
    for e in &batch {
        agg.add(e);
    }
    let letters = stats::sample_stats(
        batch
            .iter()
            .map(|e| e.alphabetic_size() as f64 / args.n as f64),
    );
    let transitions = stats::sample_stats(
        batch
            .iter()
            .map(|e| glushkov::count_functions(e).transitions as f64 / args.n as f64),
    );
    let class_name = match args.class {
        ClassArg::Re => "re",
        ClassArg::Rena => "rena",
    };
    let doc = json!({
        "k": args.k,
        "n": args.n,
        "class": class_name,
        "samples": args.count,
        "seed": cli.seed,
        "aggregate": aggregate_json(&agg),
        "letters_per_size": { "mean": letters.mean, "se": letters.se },
        "transitions_per_size": { "mean": transitions.mean, "se": transitions.se },
        "tool": provenance(),
    });
    Ok(format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
}

fn cmd_glushkov(_cli: &Cli, args: &GlushkovArgs) -> Result<String, AppError> {
    require(args.k >= 1, "glushkov: --k must be at least 1")?;
    let e = expr::parse(&args.expr, args.k).map_err(|err| AppError::Usage(err.to_string()))?;
    let nfa = glushkov::build_glushkov(&e);
    let counts = glushkov::count_functions(&e);
    let transitions: Vec<serde_json::Value> = nfa
        .transitions
        .iter()
        .map(|&(src, letter, dst)| json!([src, expr::letter_name(letter), dst]))
        .collect();
    let doc = json!({
        "expr": e.to_string(),
        "k": args.k,
        "states": nfa.state_count,
        "transitions": transitions,
        "finals": nfa.finals,
        "counts": {
            "f": counts.first,
            "s": counts.last,
            "e": counts.follow,
            "e_star": counts.star_follow,
            "t": counts.transitions,
        },
        "tool": provenance(),
    });
    Ok(format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
}

fn cmd_theory(cli: &Cli, args: &TheoryArgs) -> Result<String, AppError> {
    require(
        !args.k_list.is_empty(),
        "theory: --k-list must not be empty",
    )?;
    require(
        args.k_list.iter().all(|&k| k >= 1),
        "theory: alphabet sizes must be at least 1",
    )?;
    let rows: Result<Vec<_>, AppError> = args
        .k_list
        .par_iter()
        .map(|&k| {
            let digits = cli
                .precision_digits
                .unwrap_or_else(|| asymptotics::default_digits(k));
            let mut sing =
                Singularity::solve(k, digits).map_err(|e| AppError::Check(e.to_string()))?;
            sing.report().map_err(|e| AppError::Check(e.to_string()))
        })
        .collect();
    let rows = rows?;
    let mut out = csv_provenance();
    out.push_str("k,rho,eta,psi,g,letters_ratio,lambda,residual\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.3e}",
            r.k, r.rho, r.eta, r.psi, r.g, r.letters_ratio, r.lambda, r.residual
        );
    }
    Ok(out)
}

fn cmd_compare(cli: &Cli, args: &CompareArgs) -> Result<String, AppError> {
    require(args.k >= 1, "compare: --k must be at least 1")?;
    require(args.n >= 2, "compare: --n must be at least 2")?;
    let digits = cli
        .precision_digits
        .unwrap_or_else(|| asymptotics::default_digits(args.k));
    let sing = Singularity::solve(args.k, digits).map_err(|e| AppError::Check(e.to_string()))?;
    let lambda = sing.lambda().map_err(|e| AppError::Check(e.to_string()))?;
    let theory = json!({
        "letters_ratio": sing.letters_ratio(),
        "lambda": lambda.value,
    });

    // exact-series finite-n values when the order is within budget
    let series = if args.n <= series_budget(args.k) {
        let table = CoeffTable::build(args.k, args.n);
        let denom = &table.r[args.n] * (args.n as u64);
        let mut doc = json!({
            "n": args.n,
            "letters_ratio_at_n": rena::series::ratio_to_f64(&table.l[args.n], &denom),
            "transitions_ratio_at_n": rena::series::ratio_to_f64(&table.t[args.n], &denom),
        });
        if args.n >= 128 {
            doc.as_object_mut().unwrap().insert(
                "letters_ratio_extrapolated".into(),
                asymptotics::letters_ratio_series_estimate(&table, args.n).into(),
            );
            doc.as_object_mut().unwrap().insert(
                "lambda_extrapolated".into(),
                asymptotics::lambda_series_estimate(&table, args.n).into(),
            );
        }
        doc
    } else {
        serde_json::Value::Null
    };

    let empirical = if args.samples > 0 {
        let sampler = Sampler::new(args.k, args.n, ExprClass::Rena)
            .map_err(|e| AppError::Usage(e.to_string()))?;
        let batch = sampler.sample_batch(cli.seed, args.samples, cli.threads);
        let letters = stats::sample_stats(
            batch
                .iter()
                .map(|e| e.alphabetic_size() as f64 / args.n as f64),
        );
        let transitions = stats::sample_stats(
            batch
                .iter()
                .map(|e| glushkov::count_functions(e).transitions as f64 / args.n as f64),
        );
        json!({
            "letters_per_size": { "mean": letters.mean, "se": letters.se },
            "transitions_per_size": { "mean": transitions.mean, "se": transitions.se },
        })
    } else {
        serde_json::Value::Null
    };

    let doc = json!({
        "k": args.k,
        "n": args.n,
        "samples": args.samples,
        "seed": cli.seed,
        "theory": theory,
        "series": series,
        "empirical": empirical,
        "tool": provenance(),
    });
    Ok(format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
}

fn cmd_oracle(_cli: &Cli, args: &OracleArgs) -> Result<String, AppError> {
    require(args.k >= 1, "oracle: --k must be at least 1")?;
    require(args.n_max >= 1, "oracle: --n-max must be at least 1")?;
    let table = CoeffTable::build(args.k, args.n_max);
    let mut out = csv_provenance();
    for n in 1..=args.n_max {
        match enumeration::oracle_compare(args.k, n, args.cap, &table) {
            Ok(agg) => {
                let _ = writeln!(
                    out,
                    "ok k={} n={n}: {} expressions, all series and automaton checks agree",
                    args.k, agg.count
                );
            }
            Err(enumeration::OracleError::Budget(e)) => {
                return Err(AppError::Budget(e.to_string()));
            }
            Err(enumeration::OracleError::Mismatch(e)) => {
                let _ = writeln!(out, "FAIL {e}");
                print!("{out}");
                return Err(AppError::Check(e.to_string()));
            }
        }
    }
    Ok(out)
}
