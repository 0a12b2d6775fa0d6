//! The `xnr` command line.
//!
//! Exit status is the verdict: 0 yes, 1 no, 2 usage or input error,
//! 3 a size bound refused the query.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use xnr_core::conditions::{all_literals, parse_condition};
use xnr_core::minimality::{is_min_necessary_with, MinimalityChecker, ScanOrder};
use xnr_core::necessity::NecessityEngine;
use xnr_core::oracle::Oracle;
use xnr_core::testgen::{
    cnf_to_mlp, random_bdd, random_classifier, random_condition, random_dt, random_mlp,
    random_perceptron,
};
use xnr_core::{Bounds, Class, Classifier, Condition, Family, Model, Preorder};

use crate::dimacs::{parse_dimacs, DimacsError};
use crate::model_io::{load_model, model_to_json, save_model, ModelError};

#[derive(Debug, Parser)]
#[command(name = "xnr", version, about = "Global necessary reasons for binary classifiers")]
pub struct Cli {
    /// Print a JSON run report instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Cross-check the answer against brute-force enumeration.
    #[arg(long, global = true)]
    verify: bool,

    /// Largest MLP arity the exhaustive engine accepts.
    #[arg(long, global = true, env = "XNR_MLP_BOUND", default_value_t = Bounds::DEFAULT_MLP)]
    mlp_bound: usize,

    /// Largest arity the brute-force oracle accepts.
    #[arg(long, global = true, env = "XNR_ORACLE_BOUND", default_value_t = Bounds::DEFAULT_ORACLE)]
    oracle_bound: usize,

    /// Worker threads for `verify` (defaults to the available parallelism).
    #[arg(long, global = true)]
    threads: Option<NonZeroUsize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Is the condition satisfied by every instance of the class?
    CheckNecessary(Query),
    /// Is the condition a minimal necessary reason?
    ///
    /// Cardinality and subset minimality coincide for this condition
    /// language, so both preorders give the same answer.
    CheckMinimal {
        #[command(flatten)]
        query: Query,
        #[arg(long, value_enum, default_value_t = PreorderArg::Subset)]
        preorder: PreorderArg,
    },
    /// Compute a minimal necessary reason.
    FindMinimal {
        #[command(flatten)]
        target: Target,
        /// Also print the literals in the order they were added.
        #[arg(long)]
        trace: bool,
    },
    /// Compare the engines with brute-force enumeration.
    Verify(VerifyArgs),
    /// Write a random or CNF-derived model file.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
}

#[derive(Debug, Args)]
struct Target {
    /// Model file (JSON).
    #[arg(long)]
    model: PathBuf,
    /// Target class.
    #[arg(long, value_parser = parse_class)]
    class: Class,
}

#[derive(Debug, Args)]
struct Query {
    #[command(flatten)]
    target: Target,
    /// Condition such as "v1=1 & v2!=v3", or "true".
    #[arg(long)]
    condition: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PreorderArg {
    Card,
    Subset,
}

impl From<PreorderArg> for Preorder {
    fn from(p: PreorderArg) -> Preorder {
        match p {
            PreorderArg::Card => Preorder::Cardinality,
            PreorderArg::Subset => Preorder::Subset,
        }
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct VerifyArgs {
    /// Check every single-literal condition of this model, for both classes.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Check COUNT generated (model, class, condition) cases.
    #[arg(long, num_args = 4, value_names = ["FAMILY", "N", "COUNT", "SEED"])]
    generate: Option<Vec<String>>,
}

#[derive(Debug, Args)]
struct Output {
    /// Output file; stdout if omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum GenCommand {
    Perceptron {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Weights lie in [-B, B].
        #[arg(long, default_value_t = 4)]
        weight_bound: i64,
        #[command(flatten)]
        out: Output,
    },
    Mlp {
        #[arg(long)]
        n: usize,
        /// Hidden layer widths, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "4")]
        hidden: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        weight_bound: i64,
        #[command(flatten)]
        out: Output,
    },
    Bdd {
        #[arg(long)]
        n: usize,
        /// Number of decision nodes (default 3n); fewer if the layers fill up.
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    Dt {
        #[arg(long)]
        n: usize,
        /// Maximum depth (default min(n, 6)).
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Network computing a CNF formula.
    CnfMlp {
        #[arg(long)]
        dimacs: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

fn parse_class(s: &str) -> Result<Class, String> {
    match s.trim() {
        "0" => Ok(Class::Zero),
        "1" => Ok(Class::One),
        other => Err(format!("class must be 0 or 1, not {other:?}")),
    }
}

fn parse_family(s: &str) -> Result<Family, CliError> {
    Ok(match s {
        "bdd" => Family::Bdd,
        "dt" => Family::DecisionTree,
        "perceptron" => Family::Perceptron,
        "mlp" => Family::Mlp,
        _ => return Err(CliError::Usage(format!("unknown family {s:?}; use bdd, dt, perceptron or mlp"))),
    })
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Core(#[from] xnr_core::Error),
    #[error("{}: {source}", path.display())]
    Dimacs { path: PathBuf, source: DimacsError },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    fn status(&self) -> u8 {
        match self {
            CliError::Core(xnr_core::Error::BoundExceeded { .. }) => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Yes,
    No,
}

impl Verdict {
    fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    fn text(self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
        }
    }
}

#[derive(Debug, Serialize)]
struct VerifySummary {
    cases: usize,
    agree: usize,
    disagreements: Vec<String>,
}

/// What a run printed, in machine-readable form.
#[derive(Debug, Default, Serialize)]
struct RunReport {
    command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    engine: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    class: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    preorder: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    condition: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    added_literals: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_agrees: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verify: Option<VerifySummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<String>,
    timing_ms: f64,
}

struct Context {
    json: bool,
    verify: bool,
    bounds: Bounds,
    threads: usize,
}

/// Runs the command line and returns the process status.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let ctx = Context {
        json: cli.json,
        verify: cli.verify,
        bounds: Bounds {
            mlp: cli.mlp_bound,
            oracle: cli.oracle_bound,
        },
        threads: cli
            .threads
            .or_else(|| std::thread::available_parallelism().ok())
            .map_or(1, NonZeroUsize::get),
    };
    let mut report = RunReport {
        command: args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect(),
        ..RunReport::default()
    };
    let start = Instant::now();
    let result = dispatch(cli.command, &ctx, &mut report);
    report.timing_ms = start.elapsed().as_secs_f64() * 1e3;
    match result {
        Ok(Some(text)) => {
            if ctx.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
            } else if !text.is_empty() {
                print!("{text}");
            }
            let status = match report.verdict {
                Some("no") => 1,
                _ => 0,
            };
            ExitCode::from(status)
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("xnr: {e}");
            ExitCode::from(e.status())
        }
    }
}

/// `Ok(None)` means the command already wrote its output.
fn dispatch(command: Command, ctx: &Context, report: &mut RunReport) -> Result<Option<String>, CliError> {
    match command {
        Command::CheckNecessary(q) => check_necessary(q, ctx, report).map(Some),
        Command::CheckMinimal { query, preorder } => check_minimal(query, preorder, ctx, report).map(Some),
        Command::FindMinimal { target, trace } => find_minimal(target, trace, ctx, report).map(Some),
        Command::Verify(v) => verify(v, ctx, report).map(Some),
        Command::Gen { what } => gen(what, ctx, report),
    }
}

fn load(target: &Target, report: &mut RunReport) -> Result<Classifier, CliError> {
    let m = load_model(&target.model)?;
    report.engine = Some(m.family().name());
    report.class = Some(target.class as u8);
    Ok(m)
}

fn condition_for(m: &Classifier, text: &str) -> Result<Condition, CliError> {
    let phi = parse_condition(text)?;
    phi.check_arity(m.arity())?;
    Ok(phi)
}

fn oracle_line(report: &mut RunReport, agrees: Option<bool>) -> String {
    report.oracle_agrees = agrees;
    match agrees {
        Some(true) => "oracle: agrees\n".into(),
        Some(false) => "oracle: DISAGREES\n".into(),
        None => String::new(),
    }
}

fn check_necessary(q: Query, ctx: &Context, report: &mut RunReport) -> Result<String, CliError> {
    let m = load(&q.target, report)?;
    let phi = condition_for(&m, &q.condition)?;
    report.condition = Some(phi.to_string());
    let engine = NecessityEngine::new(&m, q.target.class, &ctx.bounds)?;
    let cex = engine.counterexample(&phi)?;
    let verdict = Verdict::from_bool(cex.is_none());
    report.verdict = Some(verdict.text());
    let mut text = String::from(verdict.text());
    if let Some(x) = &cex {
        report.counterexample = Some(x.to_string());
        text.push_str(&format!(" (counterexample {x})"));
    }
    text.push('\n');
    let agrees = if ctx.verify {
        let oracle = Oracle::new(&m, q.target.class, ctx.bounds.oracle)?;
        Some(oracle.is_necessary(&phi)? == (verdict == Verdict::Yes))
    } else {
        None
    };
    text.push_str(&oracle_line(report, agrees));
    Ok(text)
}

fn check_minimal(q: Query, preorder: PreorderArg, ctx: &Context, report: &mut RunReport) -> Result<String, CliError> {
    let m = load(&q.target, report)?;
    let phi = condition_for(&m, &q.condition)?;
    let preorder = Preorder::from(preorder);
    report.condition = Some(phi.to_string());
    report.preorder = Some(preorder.to_string());
    let yes = is_min_necessary_with(&m, q.target.class, &phi, preorder, &ctx.bounds)?;
    let verdict = Verdict::from_bool(yes);
    report.verdict = Some(verdict.text());
    let agrees = if ctx.verify {
        let oracle = Oracle::new(&m, q.target.class, ctx.bounds.oracle)?;
        Some(oracle.is_min_necessary(&phi)? == yes)
    } else {
        None
    };
    Ok(format!("{}\n{}", verdict.text(), oracle_line(report, agrees)))
}

fn find_minimal(target: Target, trace: bool, ctx: &Context, report: &mut RunReport) -> Result<String, CliError> {
    let m = load(&target, report)?;
    let e = MinimalityChecker::new(&m, target.class, &ctx.bounds)?.find(ScanOrder::Canonical)?;
    report.condition = Some(e.condition.to_string());
    let mut text = format!("{}\n", e.condition);
    if trace {
        let added: Vec<String> = e.added_literals.iter().map(ToString::to_string).collect();
        for l in &added {
            text.push_str(&format!("added {l}\n"));
        }
        report.added_literals = Some(added);
    }
    let agrees = if ctx.verify {
        let oracle = Oracle::new(&m, target.class, ctx.bounds.oracle)?;
        Some(oracle.is_min_necessary(&e.condition)?)
    } else {
        None
    };
    text.push_str(&oracle_line(report, agrees));
    Ok(text)
}

/// One verification case and whether both engines matched the oracle.
struct Case {
    label: String,
    agrees: bool,
}

fn check_case(m: &Classifier, class: Class, phi: &Condition, oracle: &Oracle, bounds: &Bounds) -> Result<bool, CliError> {
    let engine = NecessityEngine::new(m, class, bounds)?;
    let min = is_min_necessary_with(m, class, phi, Preorder::default(), bounds)?;
    Ok(engine.is_necessary(phi)? == oracle.is_necessary(phi)? && min == oracle.is_min_necessary(phi)?)
}

/// Runs `count` jobs on `threads` scoped workers, each with its own state
/// from `init`; results come back in index order whatever the partition.
fn parallel<S, T: Send>(
    count: usize,
    threads: usize,
    init: impl Fn() -> S + Sync,
    job: impl Fn(&S, usize) -> T + Sync,
) -> Vec<T> {
    let threads = threads.clamp(1, count.max(1));
    let mut slots: Vec<Option<T>> = (0..count).map(|_| None).collect();
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                let (init, job) = (&init, &job);
                s.spawn(move || {
                    let state = init();
                    (w..count).step_by(threads).map(|i| (i, job(&state, i))).collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, v) in h.join().expect("verify worker panicked") {
                slots[i] = Some(v);
            }
        }
    });
    slots.into_iter().map(|v| v.expect("every index is assigned")).collect()
}

fn verify_model(path: &Path, ctx: &Context, report: &mut RunReport) -> Result<Vec<Case>, CliError> {
    let m = load_model(path)?;
    report.engine = Some(m.family().name());
    let n = m.arity();
    let mut out = Vec::new();
    for class in [Class::Zero, Class::One] {
        let oracle = Oracle::new(&m, class, ctx.bounds.oracle)?;
        let mut conditions: Vec<Condition> = vec![Condition::top()];
        conditions.extend(all_literals(n).into_iter().map(Condition::literal));
        conditions.push(MinimalityChecker::new(&m, class, &ctx.bounds)?.find(ScanOrder::Canonical)?.condition);
        let results = parallel(
            conditions.len(),
            ctx.threads,
            || MinimalityChecker::new(&m, class, &ctx.bounds),
            |checker, i| -> Result<bool, xnr_core::Error> {
                let checker = checker.as_ref().map_err(Clone::clone)?;
                let phi = &conditions[i];
                Ok(checker.engine().is_necessary(phi)? == oracle.is_necessary(phi)?
                    && checker.is_min_necessary(phi)? == oracle.is_min_necessary(phi)?)
            },
        );
        for (phi, r) in conditions.iter().zip(results) {
            out.push(Case {
                label: format!("class {class} condition {phi}"),
                agrees: r?,
            });
        }
    }
    Ok(out)
}

fn generated_case(family: Family, n: usize, seed: u64, i: usize, bounds: &Bounds) -> Result<Case, CliError> {
    let case_seed = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(i as u64);
    let m = random_classifier(family, n, case_seed);
    let class = Class::from_bool(i % 2 == 1);
    let oracle = Oracle::new(&m, class, bounds.oracle)?;
    // Mix random conditions with synthesized reasons and weakened ones.
    let phi = match i % 3 {
        0 => random_condition(n, 3, case_seed),
        _ => {
            let found = MinimalityChecker::new(&m, class, bounds)?.find(ScanOrder::Canonical)?;
            let mut lits = found.condition.literals().to_vec();
            if i % 3 == 2 {
                lits.pop();
            }
            Condition::from_literals(lits)
        }
    };
    Ok(Case {
        agrees: check_case(&m, class, &phi, &oracle, bounds)?,
        label: format!("case {i} (model seed {case_seed}, class {class}, condition {phi})"),
    })
}

fn bound_error(what: &'static str, arity: usize, bound: usize) -> CliError {
    xnr_core::Error::BoundExceeded { what, arity, bound }.into()
}

fn verify(args: VerifyArgs, ctx: &Context, report: &mut RunReport) -> Result<String, CliError> {
    let cases = if let Some(path) = &args.model {
        verify_model(path, ctx, report)?
    } else {
        let g = args.generate.expect("clap requires one of --model and --generate");
        let family = parse_family(&g[0])?;
        let num = |s: &str, what: &str| {
            s.parse::<u64>()
                .map_err(|_| CliError::Usage(format!("{what} must be a non-negative integer, not {s:?}")))
        };
        let n = num(&g[1], "N")? as usize;
        let count = num(&g[2], "COUNT")? as usize;
        let seed = num(&g[3], "SEED")?;
        if n == 0 {
            return Err(CliError::Usage("N must be at least 1".into()));
        }
        report.engine = Some(family.name());
        if n > ctx.bounds.oracle {
            return Err(bound_error("brute-force oracle", n, ctx.bounds.oracle));
        }
        if family == Family::Mlp && n > ctx.bounds.mlp {
            return Err(bound_error("exhaustive MLP engine", n, ctx.bounds.mlp));
        }
        parallel(count, ctx.threads, || (), |_, i| generated_case(family, n, seed, i, &ctx.bounds))
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?
    };
    let agree = cases.iter().filter(|c| c.agrees).count();
    let disagreements: Vec<String> = cases.iter().filter(|c| !c.agrees).map(|c| c.label.clone()).collect();
    let verdict = Verdict::from_bool(disagreements.is_empty());
    report.verdict = Some(verdict.text());
    let mut text = format!("{agree}/{} agree\n", cases.len());
    for d in disagreements.iter().take(20) {
        text.push_str(&format!("disagreement: {d}\n"));
    }
    report.verify = Some(VerifySummary {
        cases: cases.len(),
        agree,
        disagreements,
    });
    Ok(text)
}

fn gen(what: GenCommand, ctx: &Context, report: &mut RunReport) -> Result<Option<String>, CliError> {
    let positive = |v: usize, what: &str| {
        if v == 0 {
            Err(CliError::Usage(format!("{what} must be at least 1")))
        } else {
            Ok(())
        }
    };
    let (model, out): (Model, Output) = match what {
        GenCommand::Perceptron { n, seed, weight_bound, out } => {
            positive(n, "--n")?;
            positive(weight_bound.max(0) as usize, "--weight-bound")?;
            (random_perceptron(n, weight_bound, seed).into(), out)
        }
        GenCommand::Mlp { n, hidden, seed, weight_bound, out } => {
            positive(n, "--n")?;
            positive(weight_bound.max(0) as usize, "--weight-bound")?;
            for &w in &hidden {
                positive(w, "every hidden width")?;
            }
            (random_mlp(n, &hidden, weight_bound, seed).into(), out)
        }
        GenCommand::Bdd { n, nodes, seed, out } => {
            positive(n, "--n")?;
            (random_bdd(n, nodes.unwrap_or(3 * n), seed).into(), out)
        }
        GenCommand::Dt { n, depth, seed, out } => {
            positive(n, "--n")?;
            (random_dt(n, depth.unwrap_or(n.min(6)), seed).into(), out)
        }
        GenCommand::CnfMlp { dimacs, out } => {
            let text = fs::read_to_string(&dimacs).map_err(|source| CliError::Io {
                path: dimacs.clone(),
                source,
            })?;
            let f = parse_dimacs(&text).map_err(|source| CliError::Dimacs { path: dimacs, source })?;
            (cnf_to_mlp(&f)?.into(), out)
        }
    };
    let m = Classifier::new(model)?;
    report.engine = Some(m.family().name());
    match out.output {
        Some(path) => {
            save_model(m.model(), &path)?;
            report.output = Some(path.display().to_string());
            Ok(Some(if ctx.json { String::new() } else { format!("wrote {}\n", path.display()) }))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(model_to_json(m.model()).as_bytes())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })?;
            Ok(None)
        }
    }
}
