//! Command surface of the `chordwalk` binary.
//!
//! [`run`] parses arguments, executes one command on a private thread
//! pool and returns what would be printed plus the exit code, so tests
//! can drive every command in-process.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use chordwalk_core::cleanup::extract_expander;
use chordwalk_core::graph::{BipartiteGraph, Graph, Side, VertexSet, EXHAUSTIVE_LIMIT};
use chordwalk_core::io::{bytes_hash, graph_hash, parse_edge_list, write_edge_list};
use chordwalk_core::pipeline::{find_chordal_cycle, witness_problems, CycleWitness};
use chordwalk_core::{generators, oracle, spectral, walk};
use chordwalk_core::{ConstantsProfile, Error, Preset};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "chordwalk", version, about = "Chord-rich cycles from random walks in expanders")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Constants preset: paper or desk.
    #[arg(long, global = true, default_value = "desk")]
    pub preset: String,
    /// Override one constant, e.g. --set beta=0.5 (repeatable).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Flat key=value file applied before --set.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Main output file (default: stdout).
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Model {
    Gnp,
    RandomRegular,
    RandomBipartite,
    Complete,
    Cycle,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum EstimateKind {
    SelfAvoid,
    AvoidEvent,
    IntersectionTail,
    CrossEdges,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum OracleKind {
    ChordSurplus,
    SelfAvoid,
    AvoidEvent,
    WalkMatrix,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a seeded random or named graph as an edge list.
    Generate {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
    },
    /// Extract a certified almost-regular bipartite expander.
    Clean {
        #[arg(long)]
        input: PathBuf,
        /// JSON-lines cleanup report (default: stdout).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Spectral profile of a graph.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        /// Largest n for exhaustive conductance.
        #[arg(long, default_value_t = EXHAUSTIVE_LIMIT)]
        exact_limit: usize,
    },
    /// Search for a cycle with at least as many chords as vertices.
    FindCycle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
        /// Graphviz rendering of the witness.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Monte Carlo estimate with confidence intervals.
    Estimate {
        #[arg(long, value_enum)]
        kind: EstimateKind,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        vertex: usize,
        /// Second start vertex (cross_edges).
        #[arg(long, default_value_t = 1)]
        other: usize,
        /// Walk length.
        #[arg(long, default_value_t = 10)]
        length: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Comma-separated vertex set (avoid_event, intersection_tail).
        #[arg(long, default_value = "")]
        vertices: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// Exact check of a witness against a graph.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        witness: PathBuf,
    },
    /// Exact brute-force quantities.
    Oracle {
        #[arg(long, value_enum)]
        kind: OracleKind,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        vertex: usize,
        #[arg(long, default_value_t = 2)]
        length: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value = "")]
        vertices: String,
        /// Largest n accepted by the exact methods.
        #[arg(long, default_value_t = oracle::MATRIX_LIMIT)]
        exact_limit: usize,
        /// Include wall-clock time (breaks byte-identical reruns).
        #[arg(long)]
        timing: bool,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// Error plus the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExhausted(_) | Error::SizeLimit { .. } => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

struct Context<'a> {
    cli: &'a Cli,
    profile: ConstantsProfile,
    out: Outcome,
}

impl Context<'_> {
    fn header(&self, input_hash: Option<&str>) -> Value {
        json!({
            "tool": "chordwalk",
            "version": VERSION,
            "input_hash": input_hash,
            "seed": self.cli.seed,
            "preset": self.profile.preset,
            "overrides": self.cli.overrides,
        })
    }

    fn emit(&mut self, path: Option<&Path>, text: &str) -> Result<(), Failure> {
        match path {
            Some(p) => fs::write(p, text).map_err(|e| invalid(format!("{}: {e}", p.display()))),
            None => {
                self.out.stdout.push_str(text);
                Ok(())
            }
        }
    }

    fn emit_json(&mut self, value: &Value) -> Result<(), Failure> {
        let text = serde_json::to_string_pretty(value).expect("json") + "\n";
        let path = self.cli.output.clone();
        self.emit(path.as_deref(), &text)
    }
}

fn load(path: &Path) -> Result<(Graph, String), Failure> {
    let text = fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let loaded = parse_edge_list(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let hash = graph_hash(&loaded.graph);
    Ok((loaded.graph, hash))
}

fn parse_vertices(list: &str, n: usize) -> Result<VertexSet, Failure> {
    let ids = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().map_err(|_| invalid(format!("bad vertex id {s:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VertexSet::new(ids, n)?)
}

fn build_profile(cli: &Cli) -> Result<ConstantsProfile, Failure> {
    let preset: Preset = cli.preset.parse()?;
    let mut profile = ConstantsProfile::from_preset(preset);
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        profile.apply_config(&text)?;
    }
    for item in &cli.overrides {
        let (key, value) = item.split_once('=').ok_or_else(|| invalid(format!("--set expects KEY=VALUE, got {item:?}")))?;
        profile.set(key.trim(), value)?;
    }
    Ok(profile)
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    run_cli(&cli)
}

pub fn run_cli(cli: &Cli) -> Outcome {
    let profile = match build_profile(cli) {
        Ok(p) => p,
        Err(f) => return Outcome { code: f.code, stdout: String::new(), stderr: format!("error: {}\n", f.message) },
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build() {
        Ok(pool) => pool,
        Err(e) => return Outcome { code: 1, stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    let mut ctx = Context { cli, profile, out: Outcome::default() };
    let result = pool.install(|| dispatch(&mut ctx));
    let mut out = ctx.out;
    match result {
        Ok(code) => out.code = code,
        Err(f) => {
            out.code = f.code;
            out.stderr.push_str(&format!("error: {}\n", f.message));
        }
    }
    out
}

fn dispatch(ctx: &mut Context) -> Result<u8, Failure> {
    match &ctx.cli.command {
        Command::Generate { model, n, p, d, a, b } => generate(ctx, *model, *n, *p, *d, *a, *b),
        Command::Clean { input, report } => clean(ctx, input, report.as_deref()),
        Command::Analyze { input, exact_limit } => analyze(ctx, input, *exact_limit),
        Command::FindCycle { input, budget, dot } => find_cycle(ctx, input, *budget, dot.as_deref()),
        Command::Estimate { kind, input, vertex, other, length, k, vertices, trials } => {
            estimate(ctx, *kind, input, *vertex, *other, *length, *k, vertices, *trials)
        }
        Command::Verify { input, witness } => verify(ctx, input, witness),
        Command::Oracle { kind, input, vertex, length, k, vertices, exact_limit, timing } => {
            run_oracle(ctx, *kind, input, *vertex, *length, *k, vertices, *exact_limit, *timing)
        }
    }
}

fn need<T: Copy>(value: Option<T>, name: &str, model: Model) -> Result<T, Failure> {
    value.ok_or_else(|| invalid(format!("model {model:?} needs --{name}")))
}

#[allow(clippy::too_many_arguments)]
fn generate(
    ctx: &mut Context,
    model: Model,
    n: Option<usize>,
    p: Option<f64>,
    d: Option<usize>,
    a: Option<usize>,
    b: Option<usize>,
) -> Result<u8, Failure> {
    let seed = ctx.cli.seed;
    let (graph, params) = match model {
        Model::Gnp => {
            let (n, p) = (need(n, "n", model)?, need(p, "p", model)?);
            (generators::gnp(n, p, seed)?, format!("model=gnp n={n} p={p}"))
        }
        Model::RandomRegular => {
            let (n, d) = (need(n, "n", model)?, need(d, "d", model)?);
            (generators::random_regular(n, d, seed)?, format!("model=random_regular n={n} d={d}"))
        }
        Model::RandomBipartite => {
            let (a, b, p) = (need(a, "a", model)?, need(b, "b", model)?, need(p, "p", model)?);
            (generators::random_bipartite(a, b, p, seed)?, format!("model=random_bipartite a={a} b={b} p={p}"))
        }
        Model::Complete => {
            let n = need(n, "n", model)?;
            (Graph::complete(n), format!("model=complete n={n}"))
        }
        Model::Cycle => {
            let n = need(n, "n", model)?;
            if n < 3 {
                return Err(invalid("a cycle needs at least 3 vertices"));
            }
            (Graph::cycle(n), format!("model=cycle n={n}"))
        }
    };
    let header = [format!("chordwalk {VERSION} generate"), format!("{params} seed={seed}")];
    let text = write_edge_list(&graph, &header);
    let path = ctx.cli.output.clone();
    ctx.emit(path.as_deref(), &text)?;
    Ok(0)
}

fn clean(ctx: &mut Context, input: &Path, report: Option<&Path>) -> Result<u8, Failure> {
    let (g, hash) = load(input)?;
    let extraction = extract_expander(&g, &ctx.profile)?;
    let post = extraction.postconditions(&g, &ctx.profile);
    let mut lines = serde_json::to_string(&json!({ "header": ctx.header(Some(&hash)) })).expect("json") + "\n";
    lines.push_str(&extraction.report.to_json_lines());
    lines.push_str(&(serde_json::to_string(&json!({ "postconditions": post })).expect("json") + "\n"));
    ctx.emit(report, &lines)?;
    if let Some(path) = ctx.cli.output.clone() {
        let sides: String = (0..extraction.expander.n())
            .map(|v| if extraction.expander.side_of(v) == Side::X { 'x' } else { 'y' })
            .collect();
        let origin: Vec<String> = extraction.origin.iter().map(|v| v.to_string()).collect();
        let header = [
            format!("chordwalk {VERSION} clean"),
            format!("input_hash={hash} seed={} preset={}", ctx.cli.seed, ctx.profile.preset),
            format!("origin={}", origin.join(",")),
            format!("sides={sides}"),
        ];
        ctx.emit(Some(&path), &write_edge_list(extraction.expander.graph(), &header))?;
    }
    if post.all_certified() {
        Ok(0)
    } else {
        ctx.out.stderr.push_str("postconditions not all certified\n");
        Ok(1)
    }
}

fn analyze(ctx: &mut Context, input: &Path, exact_limit: usize) -> Result<u8, Failure> {
    let (g, hash) = load(input)?;
    if g.m() == 0 {
        return Err(Error::Edgeless.into());
    }
    let lambda2 = spectral::lambda2(&g)?;
    let ratio = g.regularity_ratio();
    let conductance = if g.n() <= exact_limit.min(EXHAUSTIVE_LIMIT) {
        let c = spectral::conductance_exact(&g)?;
        let expansion = g.expansion_constant()?;
        json!({
            "expansion_constant": expansion,
            "phi_lower_bound": spectral::conductance_lower_bound(expansion, ratio).ok(),
            "phi": c.phi,
            "numerator": c.numerator.to_string(),
            "denominator": c.denominator.to_string(),
            "witness": c.witness.as_slice(),
            "lambda2_upper_bound": spectral::lambda2_upper_bound(c.phi).ok(),
        })
    } else {
        Value::Null
    };
    let certificate = match BipartiteGraph::from_graph(g.clone()) {
        Ok(b) => match spectral::spectral_certificate(&b, ratio) {
            Ok(profile) => serde_json::to_value(profile).expect("json"),
            Err(e) => json!({ "unavailable": e.to_string() }),
        },
        Err(e) => json!({ "unavailable": e.to_string() }),
    };
    let value = json!({
        "header": ctx.header(Some(&hash)),
        "vertices": g.n(),
        "edges": g.m(),
        "average_degree": g.average_degree(),
        "regularity_ratio": ratio,
        "lambda2": lambda2,
        "conductance": conductance,
        "certificate": certificate,
    });
    ctx.emit_json(&value)?;
    Ok(0)
}

fn find_cycle(ctx: &mut Context, input: &Path, budget: u64, dot: Option<&Path>) -> Result<u8, Failure> {
    let (g, hash) = load(input)?;
    let search = find_chordal_cycle(&g, &ctx.profile, budget, ctx.cli.seed)?;
    let mut value = json!({
        "header": ctx.header(Some(&hash)),
        "config": search.config,
        "stats": search.stats,
        "expander_vertices": search.expander_vertices,
        "expander_edges": search.expander_edges,
        "below_edge_threshold": search.below_edge_threshold,
    });
    let code = match &search.witness {
        Some(w) => {
            let body = serde_json::to_value(w).expect("json");
            for (key, v) in body.as_object().expect("object") {
                value[key] = v.clone();
            }
            if let Some(path) = dot {
                ctx.emit(Some(path), &w.to_dot())?;
            }
            0
        }
        None => {
            ctx.out.stderr.push_str(&format!("no witness within {budget} attempts\n"));
            2
        }
    };
    ctx.emit_json(&value)?;
    Ok(code)
}

#[allow(clippy::too_many_arguments)]
fn estimate(
    ctx: &mut Context,
    kind: EstimateKind,
    input: &Path,
    vertex: usize,
    other: usize,
    length: usize,
    k: usize,
    vertices: &str,
    trials: u64,
) -> Result<u8, Failure> {
    let (g, hash) = load(input)?;
    let seed = ctx.cli.seed;
    let result = match kind {
        EstimateKind::SelfAvoid => serde_json::to_value(walk::self_avoiding_estimate(&g, vertex, length, trials, seed)?),
        EstimateKind::AvoidEvent => {
            let a = parse_vertices(vertices, g.n())?;
            serde_json::to_value(walk::avoid_event_estimate(&g, vertex, &a, k, trials, seed)?)
        }
        EstimateKind::IntersectionTail => {
            let x = parse_vertices(vertices, g.n())?;
            let b = BipartiteGraph::from_graph(g.clone())?;
            let c = ctx.profile.intersection_constant;
            serde_json::to_value(walk::intersection_tail_estimate(&b, &x, length, k, c, trials, seed)?)
        }
        EstimateKind::CrossEdges => {
            let c = ctx.profile.cross_edge_constant;
            serde_json::to_value(walk::cross_edge_tail_estimate(&g, vertex, other, length, k, c, trials, seed)?)
        }
    }
    .expect("json");
    let value = json!({
        "header": ctx.header(Some(&hash)),
        "kind": kind.to_possible_value().map(|v| v.get_name().to_string()),
        "params": { "vertex": vertex, "other": other, "length": length, "k": k, "vertices": vertices, "trials": trials },
        "result": result,
    });
    ctx.emit_json(&value)?;
    Ok(0)
}

fn verify(ctx: &mut Context, input: &Path, witness: &Path) -> Result<u8, Failure> {
    let (g, hash) = load(input)?;
    let text = fs::read_to_string(witness).map_err(|e| invalid(format!("{}: {e}", witness.display())))?;
    let w: CycleWitness =
        serde_json::from_str(&text).map_err(|e| invalid(format!("{}: not a witness: {e}", witness.display())))?;
    let problems = witness_problems(&g, &w);
    let value = json!({
        "header": ctx.header(Some(&hash)),
        "witness_hash": bytes_hash(text.as_bytes()),
        "verified": problems.is_empty(),
        "cycle_length": w.cycle.len(),
        "chords": w.chords.len(),
        "problems": problems,
    });
    ctx.emit_json(&value)?;
    Ok(if problems.is_empty() { 0 } else { 1 })
}

#[allow(clippy::too_many_arguments)]
fn run_oracle(
    ctx: &mut Context,
    kind: OracleKind,
    input: &Path,
    vertex: usize,
    length: usize,
    k: usize,
    vertices: &str,
    exact_limit: usize,
    timing: bool,
) -> Result<u8, Failure> {
    let (g, hash) = load(input)?;
    if g.n() > exact_limit {
        return Err(Error::SizeLimit { n: g.n(), limit: exact_limit, hint: "raise --exact-limit" }.into());
    }
    let clock = std::time::Instant::now();
    let (result, extra) = match kind {
        OracleKind::ChordSurplus => {
            let best = oracle::max_chord_surplus(&g)?;
            let (exact, size) = match &best {
                Some(b) => (b.surplus.to_string(), b.cyclic_sets),
                None => ("none".to_string(), 0),
            };
            let value = best.as_ref().map_or(f64::NAN, |b| b.surplus as f64);
            (oracle_result("max_chord_surplus", exact, value, size), json!({ "best": best }))
        }
        OracleKind::SelfAvoid => {
            let (p, walks) = oracle::exact_self_avoiding_prob(&g, vertex, length)?;
            let r = oracle_result("self_avoiding_probability", oracle::ratio_string(&p), oracle::ratio_to_f64(&p), walks);
            (r, json!({ "vertex": vertex, "length": length }))
        }
        OracleKind::AvoidEvent => {
            let a = parse_vertices(vertices, g.n())?;
            let p = oracle::exact_avoid_event(&g, vertex, &a, k)?;
            let r = oracle_result("avoid_event_probability", oracle::ratio_string(&p), oracle::ratio_to_f64(&p), (g.n() * k) as u64);
            (r, json!({ "vertex": vertex, "avoid": a.as_slice(), "k": k }))
        }
        OracleKind::WalkMatrix => {
            let m = oracle::exact_walk_matrix(&g, k)?;
            let rows: Vec<Vec<String>> =
                (0..g.n()).map(|v| (0..g.n()).map(|u| oracle::ratio_string(&m.entry(v, u))).collect()).collect();
            let r = oracle_result("walk_matrix_power", format!("M^{k}"), k as f64, (g.n() * g.n()) as u64);
            (r, json!({ "k": k, "rows": rows }))
        }
    };
    let mut result = result;
    if timing {
        result.elapsed_ms = Some(clock.elapsed().as_secs_f64() * 1e3);
    }
    let value = json!({ "header": ctx.header(Some(&hash)), "result": result, "detail": extra });
    ctx.emit_json(&value)?;
    Ok(0)
}

fn oracle_result(quantity: &str, exact: String, value: f64, size: u64) -> oracle::OracleResult {
    oracle::OracleResult { quantity: quantity.into(), exact, value, enumeration_size: size, elapsed_ms: None }
}
