//! Command-line front end. Every command produces a JSON report carrying
//! `schema_version` and an exit code: 0 success or in-region, 2 out of
//! region or failed verification, 3 step cap exhausted, 1 usage or input
//! error.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cluster::{
    auto_mu, check_dobrushin, check_fp, check_shearer_region, mt_bounds, ActivityVector, ConvergenceReport,
    Criterion, ShearerOptions,
};
use crate::depgraph::{DependencyGraph, EXACT_CAP};
use crate::error::{Error, Result};
use crate::instances::{hypergraph_coloring_to_lll, parse_dimacs, parse_graph_instance, parse_hypergraph, sat_to_lll, LllInstance};
use crate::mt_engine::{run_batch, run_mt, MtConfig, SelectionRule, DEFAULT_SEED, DEFAULT_STEP_CAP};
use crate::penrose::{penrose_trees, VertexTuple};
use crate::sweep::{verify_suite, VerifyConfig, SCHEMA_VERSION};
use crate::trees::{enumerate_labeled_trees, enumerate_plane_trees};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_OUT_OF_REGION: i32 = 2;
pub const EXIT_CAP_EXHAUSTED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "mtcluster", version, about = "Convergence checks, resampling runs and oracle sweeps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Convergence criteria, region membership and resampling bounds.
    Check(CheckArgs),
    /// Run the resampling algorithm (one seed or a batch).
    Run(RunArgs),
    /// Exhaustive identity checks on small graphs.
    Verify(VerifyArgs),
    /// List plane, labeled or Penrose trees.
    Enumerate(EnumerateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Dimacs,
    Hypergraph,
    Graph,
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Inferred from the extension when omitted (.cnf, .hg, .graph).
    #[arg(long, value_enum)]
    pub format: Option<InputFormat>,
}

#[derive(Args, Debug, Clone)]
pub struct CheckArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// "auto" or a comma-separated vector.
    #[arg(long, default_value = "auto")]
    pub mu: String,
    /// Check every subset rather than those the recursion reaches.
    #[arg(long)]
    pub paranoid: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Lowest,
    Random,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Batch mode over the half-open range A..B.
    #[arg(long)]
    pub seeds: Option<String>,
    #[arg(long, default_value_t = DEFAULT_STEP_CAP)]
    pub step_cap: usize,
    #[arg(long, value_enum, default_value = "lowest")]
    pub rule: RuleArg,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest tuple order n.
    #[arg(long, default_value_t = 4)]
    pub n_max: usize,
    /// Drop the uncle rule; the Ursell family should then fail.
    #[arg(long)]
    pub mutate: bool,
    #[arg(long, default_value_t = 200)]
    pub witness_runs: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TreeKind {
    Plane,
    Labeled,
    Penrose,
}

#[derive(Args, Debug, Clone)]
pub struct EnumerateArgs {
    #[arg(value_enum)]
    pub kind: TreeKind,
    /// Number of non-root vertices (plane, labeled).
    #[arg(long, default_value_t = 2)]
    pub n_max: usize,
    /// Comma-separated tuple (penrose).
    #[arg(long)]
    pub tuple: Option<String>,
    /// Instance whose dependency graph the tuple lives in (penrose).
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<InputFormat>,
}

/// A finished command: the report and the process exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub exit_code: i32,
}

enum Loaded {
    Variables(LllInstance),
    Abstract(DependencyGraph, ActivityVector),
}

impl Loaded {
    fn graph(&self) -> &DependencyGraph {
        match self {
            Loaded::Variables(i) => &i.graph,
            Loaded::Abstract(g, _) => g,
        }
    }

    fn p(&self) -> &ActivityVector {
        match self {
            Loaded::Variables(i) => &i.p,
            Loaded::Abstract(_, p) => p,
        }
    }
}

fn infer_format(path: &Path, given: Option<InputFormat>) -> InputFormat {
    given.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some("hg" | "hyp" | "hypergraph") => InputFormat::Hypergraph,
        Some("graph" | "g") => InputFormat::Graph,
        _ => InputFormat::Dimacs,
    })
}

fn load(path: &Path, format: Option<InputFormat>) -> Result<Loaded> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        msg: format!("cannot read {}: {e}", path.display()),
    })?;
    Ok(match infer_format(path, format) {
        InputFormat::Dimacs => Loaded::Variables(sat_to_lll(&parse_dimacs(&text)?)?),
        InputFormat::Hypergraph => Loaded::Variables(hypergraph_coloring_to_lll(&parse_hypergraph(&text)?)?),
        InputFormat::Graph => {
            let (g, p) = parse_graph_instance(&text)?;
            Loaded::Abstract(g, p)
        }
    })
}

fn parse_list<T: std::str::FromStr>(what: &str, s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse().map_err(|_| Error::Parse {
                line: 0,
                msg: format!("bad {what} entry {t:?}"),
            })
        })
        .collect()
}

fn parse_seed_range(s: &str) -> Result<std::ops::Range<u64>> {
    let bad = || Error::Parse {
        line: 0,
        msg: format!("seed range must look like A..B, got {s:?}"),
    };
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if a >= b {
        return Err(bad());
    }
    Ok(a..b)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

pub fn cmd_check(args: &CheckArgs) -> Result<Outcome> {
    let loaded = load(&args.input.input, args.input.format)?;
    let (g, p) = (loaded.graph(), loaded.p());
    let (dob, fp, mu_source) = if args.mu.trim() == "auto" {
        let dmu = auto_mu(g, p, Criterion::Dobrushin)?;
        let fmu = auto_mu(g, p, Criterion::Fp)?;
        let mut dob = check_dobrushin(g, p, &dmu.mu)?;
        let mut fp = check_fp(g, p, &fmu.mu)?;
        // a diverged search certifies nothing
        for (report, search) in [(&mut dob, &dmu), (&mut fp, &fmu)] {
            if !search.converged {
                report.all_pass = false;
            }
        }
        (dob, fp, "auto")
    } else {
        let mu = ActivityVector::new(parse_list("mu", &args.mu)?);
        (check_dobrushin(g, p, &mu)?, check_fp(g, p, &mu)?, "given")
    };
    let mut report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "check",
        "events": g.len(),
        "p": p,
        "mu_source": mu_source,
        "dobrushin": to_value(&dob),
        "fp": to_value(&fp),
    });
    let in_region = if g.len() <= EXACT_CAP {
        let options = ShearerOptions {
            exhaustive: args.paranoid,
            ..Default::default()
        };
        let shearer = check_shearer_region(g, p, options)?;
        report["shearer"] = to_value(&shearer);
        report["region_method"] = json!("shearer");
        if shearer.in_region {
            report["mt_bounds"] = to_value(&mt_bounds(g, p)?);
        }
        shearer.in_region
    } else {
        report["region_method"] = json!("criteria");
        dob.all_pass || fp.all_pass
    };
    report["in_region"] = json!(in_region);
    Ok(Outcome {
        report,
        exit_code: if in_region { EXIT_OK } else { EXIT_OUT_OF_REGION },
    })
}

fn bounds_for(g: &DependencyGraph, p: &ActivityVector) -> Option<ConvergenceReport> {
    (g.len() <= EXACT_CAP).then(|| mt_bounds(g, p).ok()).flatten()
}

pub fn cmd_run(args: &RunArgs) -> Result<Outcome> {
    let instance = match load(&args.input.input, args.input.format)? {
        Loaded::Variables(i) => i,
        Loaded::Abstract(..) => {
            return Err(Error::InvalidModel("the graph format carries no variables to resample".into()))
        }
    };
    let rule = match args.rule {
        RuleArg::Lowest => SelectionRule::LowestIndex,
        RuleArg::Random => SelectionRule::UniformRandom,
    };
    let config = MtConfig {
        seed: args.seed,
        step_cap: args.step_cap,
        rule,
    };
    let bounds = bounds_for(&instance.graph, &instance.p);
    let t_bound = |x: usize| bounds.as_ref().and_then(|b| b.per_vertex[x].t_bound);
    if let Some(range) = &args.seeds {
        let seeds = parse_seed_range(range)?;
        let summary = run_batch(&instance.model, &instance.events, &instance.graph, seeds.clone(), &config)?;
        let table: Vec<Value> = (0..instance.events.len())
            .map(|x| {
                let bound = t_bound(x);
                json!({
                    "event": x,
                    "mean": summary.mean[x],
                    "std_err": summary.std_err[x],
                    "bound": bound,
                    "within_bound": bound.map(|b| summary.mean[x] <= b + 3.0 * summary.std_err[x]),
                })
            })
            .collect();
        let exit_code = if summary.all_terminated { EXIT_OK } else { EXIT_CAP_EXHAUSTED };
        return Ok(Outcome {
            report: json!({
                "schema_version": SCHEMA_VERSION,
                "command": "run",
                "mode": "batch",
                "seeds": { "start": seeds.start, "end": seeds.end },
                "rule": rule,
                "step_cap": args.step_cap,
                "runs": summary.runs,
                "all_terminated": summary.all_terminated,
                "max_steps": summary.max_steps,
                "total_bound": bounds.as_ref().and_then(|b| b.total_bound),
                "events": table,
            }),
            exit_code,
        });
    }
    let log = run_mt(&instance.model, &instance.events, &instance.graph, &config)?;
    let mut scratch = Vec::new();
    let verified = log.terminated && instance.events.iter().all(|e| !e.holds(&log.assignment, &mut scratch));
    let table: Vec<Value> = (0..instance.events.len())
        .map(|x| json!({ "event": x, "count": log.count(x), "bound": t_bound(x) }))
        .collect();
    let exit_code = if log.terminated { EXIT_OK } else { EXIT_CAP_EXHAUSTED };
    Ok(Outcome {
        report: json!({
            "schema_version": SCHEMA_VERSION,
            "command": "run",
            "mode": "single",
            "step_cap": args.step_cap,
            "assignment_verified": verified,
            "total_bound": bounds.as_ref().and_then(|b| b.total_bound),
            "events": table,
            "log": to_value(&log),
        }),
        exit_code,
    })
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Outcome> {
    let report = verify_suite(&VerifyConfig {
        seed: args.seed,
        max_order: args.n_max,
        mutate: args.mutate,
        witness_runs: args.witness_runs,
    })?;
    let exit_code = if report.all_pass { EXIT_OK } else { EXIT_OUT_OF_REGION };
    Ok(Outcome {
        report: to_value(&report),
        exit_code,
    })
}

pub fn cmd_enumerate(args: &EnumerateArgs) -> Result<Outcome> {
    let (n, items): (usize, Vec<Value>) = match args.kind {
        TreeKind::Plane => (
            args.n_max,
            enumerate_plane_trees(args.n_max)?.iter().map(|t| json!(t.to_parens())).collect(),
        ),
        TreeKind::Labeled => (
            args.n_max,
            enumerate_labeled_trees(args.n_max)?.iter().map(|t| json!(t.edges())).collect(),
        ),
        TreeKind::Penrose => {
            let tuple = args.tuple.as_deref().ok_or_else(|| Error::Parse {
                line: 0,
                msg: "penrose enumeration needs --tuple".into(),
            })?;
            let input = args.input.as_deref().ok_or_else(|| Error::Parse {
                line: 0,
                msg: "penrose enumeration needs --input".into(),
            })?;
            let loaded = load(input, args.format)?;
            let tuple = VertexTuple(parse_list("tuple", tuple)?);
            let trees = penrose_trees(&tuple, loaded.graph())?;
            (tuple.order(), trees.iter().map(|t| json!(t.edges())).collect())
        }
    };
    let kind = match args.kind {
        TreeKind::Plane => "plane",
        TreeKind::Labeled => "labeled",
        TreeKind::Penrose => "penrose",
    };
    Ok(Outcome {
        report: json!({
            "schema_version": SCHEMA_VERSION,
            "command": "enumerate",
            "kind": kind,
            "n": n,
            "count": items.len(),
            "items": items,
        }),
        exit_code: EXIT_OK,
    })
}

/// Dispatches a parsed command; errors become an exit-1 report.
pub fn execute(command: &Command) -> Outcome {
    let result = match command {
        Command::Check(a) => cmd_check(a),
        Command::Run(a) => cmd_run(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Enumerate(a) => cmd_enumerate(a),
    };
    result.unwrap_or_else(|e| Outcome {
        report: json!({ "schema_version": SCHEMA_VERSION, "error": e.to_string() }),
        exit_code: EXIT_ERROR,
    })
}

/// Parses `args`, runs the command, writes the report, and returns the exit
/// code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    let outcome = execute(&cli.command);
    let text = serde_json::to_string_pretty(&outcome.report).expect("reports serialize") + "\n";
    if let Some(err) = outcome.report.get("error") {
        eprintln!("error: {}", err.as_str().unwrap_or_default());
    }
    match &cli.output {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_ERROR;
            }
        }
        None => print!("{text}"),
    }
    outcome.exit_code
}
