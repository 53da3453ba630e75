use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use spanweight::formats::{
    lists_from_json, parse_json, to_dot, to_pretty, weighting_from_json, weighting_to_json,
};
use spanweight::graph::{parse_graph, weighted_degree, BaseWeighting, Graph, TotalWeighting};
use spanweight::levels::LevelError;
use spanweight::mwis::{mwis_exact, phi_weight, MwisError};
use spanweight::oracle::{
    exhaustive_offsets, fuzz_campaign, gen_named, gen_random, gen_regular, oracle_accepts,
    FuzzConfig,
};
use spanweight::rational::Rational;
use spanweight::verify::{verify_list_membership, verify_offsets, verify_proper};
use spanweight::weighting::{
    solve_lists_with, solve_offsets_with, ListAssignment, OffsetWeighting, SolveError, SolveOptions,
};
use spanweight::wellgraph::{check_preconditions, find_well_subgraph, WellError, WellInstance};

#[derive(Parser)]
#[command(
    name = "spanweight",
    version,
    about = "Proper total weightings from two-element lists of one span"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and write the total weighting as JSON.
    Weigh(WeighArgs),
    /// Check a weighting file; exit 0 iff every check passes.
    Verify(VerifyArgs),
    /// Exhaustive search over all offset assignments of a small instance.
    Oracle(OracleArgs),
    /// Seeded random campaign: solver, verifiers and oracle on each instance.
    Fuzz(FuzzArgs),
    /// Write a graph in edge-list format.
    Gen(GenArgs),
    /// Graphviz export of a weighting.
    Dot(DotArgs),
    /// Maximum weight independent set with the smallest-witness tie-break.
    Mwis(MwisArgs),
    /// Star covering for a JSON instance.
    Well(WellArgs),
}

#[derive(Args)]
struct Instance {
    /// Edge-list file: header "n m", then m lines "u v"; '#' starts a comment.
    #[arg(long)]
    graph: PathBuf,
    /// Base weighting: "zero" or "file:PATH".
    #[arg(long)]
    base: Option<String>,
    /// Common span a > 0, e.g. "1", "5/2", "0.25".
    #[arg(long)]
    span: Option<String>,
    /// Lists: "uniform:x,y" or "file:PATH".
    #[arg(long, conflicts_with_all = ["base", "span"])]
    lists: Option<String>,
}

#[derive(Args)]
struct WeighArgs {
    #[command(flatten)]
    instance: Instance,
    /// Write the level decomposition as JSON.
    #[arg(long)]
    emit_levels: Option<PathBuf>,
    /// Write the run trace as JSON.
    #[arg(long)]
    emit_trace: Option<PathBuf>,
    /// Output file; stdout if absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Seconds allowed for the independent set searches.
    #[arg(long)]
    time_limit: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    weighting: PathBuf,
    /// Also check membership in these lists ("uniform:x,y" or "file:PATH").
    #[arg(long)]
    lists: Option<String>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value = "zero")]
    base: String,
    #[arg(long)]
    span: Option<String>,
}

#[derive(Args)]
struct FuzzArgs {
    #[arg(long, default_value_t = 500)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    nmax: usize,
    /// Comma-separated spans.
    #[arg(long, default_value = "1,1/3,5/2")]
    spans: String,
    /// Comma-separated edge probabilities.
    #[arg(long, default_value = "1/4,1/2,3/4")]
    probs: String,
    /// Comma-separated pool of base weights.
    #[arg(long, default_value = "0,1,1/2,-2/3")]
    weights: String,
    /// Write the full JSON report here.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// path, cycle, complete, complete_bipartite, star, petersen, hypercube,
    /// random (n p seed) or regular (n d seed).
    name: String,
    params: Vec<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DotArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    weighting: PathBuf,
    /// Base weighting ("zero" or "file:PATH"); elements differing from it are drawn heavy.
    #[arg(long)]
    base: Option<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MwisArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Comma-separated vertex weights; all ones if absent.
    #[arg(long)]
    phi: Option<String>,
}

#[derive(Args)]
struct WellArgs {
    #[arg(long)]
    instance: PathBuf,
}

/// Exit codes: 1 a check failed, 2 invalid input, 3 internal error.
enum Failure {
    Check(String),
    Input(anyhow::Error),
    Internal(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_graph(path: &Path) -> anyhow::Result<Graph> {
    parse_graph(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_json(path: &Path) -> anyhow::Result<Value> {
    parse_json(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn rational(text: &str) -> anyhow::Result<Rational> {
    text.trim().parse().map_err(|e| anyhow!("{e}: {text:?}"))
}

fn rational_list(text: &str) -> anyhow::Result<Vec<Rational>> {
    text.split(',').map(rational).collect()
}

fn write_out(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_base(g: &Graph, source: &str) -> anyhow::Result<(BaseWeighting, Option<Rational>)> {
    if source == "zero" {
        return Ok((BaseWeighting::zero(g), None));
    }
    let path = source
        .strip_prefix("file:")
        .ok_or_else(|| anyhow!("--base must be \"zero\" or \"file:PATH\", got {source:?}"))?;
    let (span, w) = weighting_from_json(g, &load_json(Path::new(path))?)
        .with_context(|| format!("in {path}"))?;
    Ok((w, span))
}

fn load_lists(g: &Graph, source: &str) -> anyhow::Result<ListAssignment> {
    if let Some(pair) = source.strip_prefix("uniform:") {
        let xs = rational_list(pair)?;
        let [x, y] = xs.as_slice() else {
            bail!("uniform lists take two values, got {pair:?}");
        };
        return Ok(ListAssignment::uniform(g, x, y));
    }
    let path = source.strip_prefix("file:").ok_or_else(|| {
        anyhow!("--lists must be \"uniform:x,y\" or \"file:PATH\", got {source:?}")
    })?;
    let map =
        lists_from_json(&load_json(Path::new(path))?).with_context(|| format!("in {path}"))?;
    Ok(ListAssignment::from_elements(g, &map)?)
}

/// Base weighting and span from the instance flags.
fn base_and_span(
    g: &Graph,
    base: Option<&str>,
    span: Option<&str>,
) -> anyhow::Result<(BaseWeighting, Rational)> {
    let (w0, file_span) = load_base(g, base.unwrap_or("zero"))?;
    let a = match (span, file_span) {
        (Some(s), _) => rational(s)?,
        (None, Some(a)) => a,
        (None, None) => bail!("--span is required"),
    };
    if !a.is_positive() {
        bail!("span {a} is not positive");
    }
    Ok((w0, a))
}

fn sigma_json(g: &Graph, w: &TotalWeighting) -> Value {
    let sigma: serde_json::Map<String, Value> = g
        .vertices()
        .map(|v| {
            (
                v.to_string(),
                Value::String(weighted_degree(g, w, v).unwrap().to_string()),
            )
        })
        .collect();
    Value::Object(sigma)
}

fn solve_failure(e: SolveError) -> Failure {
    match e {
        SolveError::InternalInvariantViolation { message, trace } => {
            eprintln!("{}", to_pretty(&trace.to_json()));
            Failure::Internal(message)
        }
        SolveError::Levels(LevelError::Mwis(MwisError::Budget)) => {
            Failure::Internal("time limit exceeded".into())
        }
        SolveError::Levels(LevelError::Internal(m)) => Failure::Internal(m),
        other => Failure::Input(other.into()),
    }
}

fn cmd_weigh(args: WeighArgs) -> CmdResult {
    let inst = &args.instance;
    let g = load_graph(&inst.graph)?;
    let deadline = match args.time_limit {
        Some(s) if s.is_finite() && s >= 0.0 => Some(Instant::now() + Duration::from_secs_f64(s)),
        Some(s) => return Err(anyhow!("invalid time limit {s}").into()),
        None => None,
    };
    let opts = SolveOptions { deadline };

    let internal = |e: spanweight::graph::GraphError| Failure::Internal(e.to_string());
    let (w, span, solution, report) = if let Some(source) = &inst.lists {
        let lists = load_lists(&g, source)?;
        let (w, sol) = solve_lists_with(&g, &lists, opts).map_err(solve_failure)?;
        let span = sol.as_ref().map(|s| s.levels.span.clone());
        let mut report = verify_proper(&g, &w).map_err(internal)?;
        report.merge(verify_list_membership(&g, &lists, &w).map_err(internal)?);
        (w, span, sol, report)
    } else {
        let (w0, a) = base_and_span(&g, inst.base.as_deref(), inst.span.as_deref())?;
        let sol = solve_offsets_with(&g, &w0, &a, opts).map_err(solve_failure)?;
        let report = verify_offsets(&g, &w0, &a, &sol.offsets.values(), &sol.levels);
        (sol.offsets.apply(&w0), Some(a), Some(sol), report)
    };
    if let Some(sol) = &solution {
        if let Some(path) = &args.emit_levels {
            write_out(Some(path), &to_pretty(&sol.levels.to_json()))?;
        }
        if let Some(path) = &args.emit_trace {
            write_out(Some(path), &to_pretty(&sol.trace.to_json()))?;
        }
    }

    let mut out = weighting_to_json(&g, span.as_ref(), &w);
    out["sigma"] = sigma_json(&g, &w);
    write_out(args.output.as_deref(), &to_pretty(&out))?;
    eprint!("{report}");
    if report.overall() {
        Ok(())
    } else {
        Err(Failure::Check(
            "verification of the solver output failed".into(),
        ))
    }
}

fn cmd_verify(args: VerifyArgs) -> CmdResult {
    let g = load_graph(&args.graph)?;
    let doc = load_json(&args.weighting)?;
    let (span, w) = weighting_from_json(&g, &doc)
        .with_context(|| format!("in {}", args.weighting.display()))?;
    let mut report = verify_proper(&g, &w).map_err(anyhow::Error::from)?;
    if let Some(source) = &args.lists {
        let lists = load_lists(&g, source)?;
        if let (Some(a), Ok(Some(common))) = (&span, lists.common_span(&g)) {
            if *a != common {
                report.record(
                    "span",
                    vec![format!("file says {a}, lists have span {common}")],
                );
            }
        }
        report.merge(verify_list_membership(&g, &lists, &w).map_err(anyhow::Error::from)?);
    }
    print!("{report}");
    if report.overall() {
        Ok(())
    } else {
        Err(Failure::Check("verification failed".into()))
    }
}

fn cmd_oracle(args: OracleArgs) -> CmdResult {
    let g = load_graph(&args.graph)?;
    let (w0, a) = base_and_span(&g, Some(&args.base), args.span.as_deref())?;
    let ex = exhaustive_offsets(&g, &w0, &a).map_err(anyhow::Error::from)?;
    println!(
        "{}, count={}",
        if ex.feasible() {
            "feasible"
        } else {
            "infeasible"
        },
        ex.count
    );
    if let Some(first) = &ex.first {
        println!("first: {}", first.pattern());
    }
    let sol = solve_offsets_with(&g, &w0, &a, SolveOptions::default()).map_err(solve_failure)?;
    let accepted = oracle_accepts(&g, &w0, &a, &sol.offsets).map_err(anyhow::Error::from)?;
    println!(
        "solver: {} ({})",
        if accepted { "accepted" } else { "rejected" },
        sol.offsets.pattern()
    );
    if ex.feasible() && accepted {
        Ok(())
    } else {
        Err(Failure::Check("oracle disagreement".into()))
    }
}

fn cmd_fuzz(args: FuzzArgs) -> CmdResult {
    let cfg = FuzzConfig {
        count: args.count,
        seed: args.seed,
        nmax: args.nmax,
        pset: rational_list(&args.probs)?,
        spans: rational_list(&args.spans)?,
        base_pool: rational_list(&args.weights)?,
    };
    if cfg.nmax == 0 {
        return Err(anyhow!("--nmax must be at least 1").into());
    }
    let report = fuzz_campaign(&cfg).map_err(|e| anyhow!(e))?;
    if let Some(path) = &args.output {
        write_out(Some(path), &to_pretty(&report.to_json()))?;
    }
    println!(
        "{}: {} passed, {} failed, {} checked against exhaustive search",
        if report.all_passed() {
            "all pass"
        } else {
            "FAILURES"
        },
        report.passed,
        report.failed,
        report.oracle_checked
    );
    for f in report.failures.iter().take(5) {
        println!("instance {}: {}", f.index, f.reason);
    }
    if let Some(m) = &report.minimal {
        println!("minimal failing instance:\n{}", to_pretty(m));
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "{} failing instances",
            report.failed
        )))
    }
}

fn cmd_gen(args: GenArgs) -> CmdResult {
    let ints = |k: usize| -> anyhow::Result<Vec<usize>> {
        if args.params.len() != k {
            bail!(
                "{} takes {k} parameters, got {}",
                args.name,
                args.params.len()
            );
        }
        args.params
            .iter()
            .map(|p| p.parse().map_err(|_| anyhow!("bad integer {p:?}")))
            .collect()
    };
    let g = match args.name.as_str() {
        "random" => {
            if args.params.len() != 3 {
                return Err(anyhow!("random takes n p seed").into());
            }
            let n = args.params[0].parse().map_err(|_| anyhow!("bad n"))?;
            let seed = args.params[2].parse().map_err(|_| anyhow!("bad seed"))?;
            gen_random(n, &rational(&args.params[1])?, seed).map_err(anyhow::Error::from)?
        }
        "regular" => {
            let p = ints(3)?;
            gen_regular(p[0], p[1], p[2] as u64).map_err(anyhow::Error::from)?
        }
        name => {
            let params = args
                .params
                .iter()
                .map(|p| p.parse().map_err(|_| anyhow!("bad integer {p:?}")))
                .collect::<anyhow::Result<Vec<usize>>>()?;
            gen_named(name, &params).map_err(anyhow::Error::from)?
        }
    };
    write_out(args.output.as_deref(), &g.to_edge_list())?;
    Ok(())
}

fn cmd_dot(args: DotArgs) -> CmdResult {
    let g = load_graph(&args.graph)?;
    let (span, w) = weighting_from_json(&g, &load_json(&args.weighting)?)
        .with_context(|| format!("in {}", args.weighting.display()))?;
    let heavy = match &args.base {
        Some(source) => {
            let (w0, _) = load_base(&g, source)?;
            Some(OffsetWeighting {
                span: span.unwrap_or_else(Rational::zero),
                vertex: w
                    .vertex
                    .iter()
                    .zip(&w0.vertex)
                    .map(|(x, y)| x != y)
                    .collect(),
                edge: w.edge.iter().zip(&w0.edge).map(|(x, y)| x != y).collect(),
            })
        }
        None => None,
    };
    write_out(args.output.as_deref(), &to_dot(&g, &w, heavy.as_ref()))?;
    Ok(())
}

fn cmd_mwis(args: MwisArgs) -> CmdResult {
    let g = load_graph(&args.graph)?;
    let phi: Vec<u64> = match &args.phi {
        Some(text) => text
            .split(',')
            .map(|x| x.trim().parse().map_err(|_| anyhow!("bad weight {x:?}")))
            .collect::<anyhow::Result<_>>()?,
        None => vec![1; g.n()],
    };
    if phi.len() != g.n() {
        return Err(anyhow!("{} weights for {} vertices", phi.len(), g.n()).into());
    }
    let set = mwis_exact(&g, &phi);
    println!("{}", json!({"weight": phi_weight(&phi, &set), "set": set}));
    Ok(())
}

fn cmd_well(args: WellArgs) -> CmdResult {
    let inst: WellInstance = serde_json::from_value(load_json(&args.instance)?)
        .with_context(|| format!("in {}", args.instance.display()))?;
    inst.validate().map_err(anyhow::Error::from)?;
    let pre = check_preconditions(&inst);
    eprint!("{pre}");
    match find_well_subgraph(&inst) {
        Ok(f) => {
            println!("{}", json!({"forest": f.edges}));
            Ok(())
        }
        Err(e @ WellError::NoAugmentingPath { .. }) => Err(Failure::Check(e.to_string())),
        Err(e) => Err(anyhow::Error::from(e).into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Weigh(a) => cmd_weigh(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Fuzz(a) => cmd_fuzz(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Dot(a) => cmd_dot(a),
        Command::Mwis(a) => cmd_mwis(a),
        Command::Well(a) => cmd_well(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
