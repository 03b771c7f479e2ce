//! The `pebble` command-line interface.
//!
//! One subcommand per toolkit surface: `reach`, `coop`, `aux`, `bound`,
//! `emit-ilp`, `solve` and `verify`. Human-readable output by default;
//! `--porcelain` switches to stable `key=value` lines. Exit codes: 0 success,
//! 1 verification failure, 2 usage or input error, 3 search budget exceeded.

use std::fs;
use std::io::Write;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::aux::AuxGraph;
use crate::bounds;
use crate::decompose::{self, UnitDistribution};
use crate::engine::PebbleDistribution;
use crate::graph::{Graph, GraphSpec};
use crate::solver::{self, SolveOptions};
use crate::verify::{self, SweepConfig};
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "pebble",
    about = "Graph pebbling toolkit: exact reachability, cooperation statistics, \
             lower bounds, ILP emission, and optimal pebbling",
    version
)]
struct Cli {
    /// Worker threads (default: PEBBLE_JOBS or all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Stable key=value output for scripts.
    #[arg(long, global = true)]
    porcelain: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute reach(P,v), excess and coverage for a distribution.
    Reach(ReachArgs),
    /// Cooperation statistics for a distribution and a unit.
    Coop(PairArgs),
    /// Build the auxiliary graph and run the transformations to fixpoint.
    Aux(AuxArgs),
    /// Print every applicable lower bound for a graph.
    Bound(BoundArgs),
    /// Write the optimal-pebbling integer program in LP format.
    #[command(name = "emit-ilp")]
    EmitIlp(EmitArgs),
    /// Exact optimal pebbling number with a witness.
    Solve(SolveArgs),
    /// Run the empirical verification suites.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct ReachArgs {
    /// Graph spec (path:n, cycle:n, grid:m,n, torus:m,n, or a file).
    #[arg(long)]
    graph: String,
    /// Distribution file: lines "vertex count".
    #[arg(long)]
    dist: String,
    /// Report a single target vertex.
    #[arg(long, conflicts_with = "all")]
    target: Option<usize>,
    /// Report every vertex (default).
    #[arg(long)]
    all: bool,
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long)]
    graph: String,
    /// Distribution file for P.
    #[arg(long = "dist-p")]
    dist_p: String,
    /// Unit distribution "vertex:count".
    #[arg(long)]
    unit: String,
}

#[derive(Args, Debug)]
struct AuxArgs {
    #[arg(long)]
    graph: String,
    #[arg(long = "dist-p")]
    dist_p: String,
    #[arg(long)]
    unit: String,
    /// Write the per-step trace to this file.
    #[arg(long)]
    trace: Option<String>,
    /// Step guard for the fixpoint loop.
    #[arg(long, default_value_t = 10_000)]
    step_limit: usize,
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[arg(long)]
    graph: String,
    /// Optional solvable distribution for the excess/structural bounds.
    #[arg(long)]
    dist: Option<String>,
}

#[derive(Args, Debug)]
struct EmitArgs {
    #[arg(long)]
    graph: String,
    /// Output path for the LP text.
    #[arg(long)]
    out: String,
    /// Emit the LP relaxation (drop integrality).
    #[arg(long)]
    relax: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Symmetry {
    /// Use the automorphisms known for the generated family.
    Auto,
    /// Raw enumeration.
    None,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    graph: String,
    #[arg(long, value_enum, default_value_t = Symmetry::Auto)]
    symmetry: Symmetry,
    /// Node budget for the search.
    #[arg(long = "budget-nodes")]
    budget_nodes: Option<u64>,
    /// Largest distribution size to try.
    #[arg(long = "max-size")]
    max_size: Option<u32>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite name (lemma41, theorem22, claim35, transform, cooperation,
    /// structural, path-cycle, grid-bound, torus-claims, ilp, ordering,
    /// unit-formulas).
    #[arg(long, conflicts_with = "all")]
    suite: Option<String>,
    /// Run every suite.
    #[arg(long)]
    all: bool,
    /// Largest graph order in the cooperation sweeps.
    #[arg(long = "max-n", default_value_t = 6)]
    max_n: usize,
    /// Largest |P| in the cooperation sweeps.
    #[arg(long = "max-pebbles", default_value_t = 4)]
    max_pebbles: u32,
    /// Largest unit size in the cooperation sweeps (units run 2..=unit-max).
    #[arg(long = "unit-max", default_value_t = 4)]
    unit_max: u32,
    /// Random connected graphs added when max-n exceeds 6.
    #[arg(long = "random-graphs", default_value_t = 0)]
    random_graphs: usize,
    #[arg(long, default_value_t = 0x5eed_cafe)]
    seed: u64,
    /// Largest torus side for the torus claims.
    #[arg(long = "torus-max", default_value_t = 7)]
    torus_max: usize,
    /// Largest unit size for the torus claims.
    #[arg(long = "torus-unit-max", default_value_t = 12)]
    torus_unit_max: u32,
    /// Largest n for the path/cycle solve suite.
    #[arg(long = "solve-max-n", default_value_t = 10)]
    solve_max_n: usize,
}

/// Parses argv and dispatches. Returns the process exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/version output with exit code 0
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };

    let jobs = cli.jobs.or_else(|| {
        std::env::var("PEBBLE_JOBS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(jobs) = jobs {
        // ignore failure: the global pool may already exist in-process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }

    match dispatch(cli.command, cli.porcelain) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded { .. } => 3,
                _ => 2,
            }
        }
    }
}

fn dispatch(command: Command, porcelain: bool) -> Result<i32> {
    match command {
        Command::Reach(args) => cmd_reach(args, porcelain),
        Command::Coop(args) => cmd_coop(args, porcelain),
        Command::Aux(args) => cmd_aux(args, porcelain),
        Command::Bound(args) => cmd_bound(args, porcelain),
        Command::EmitIlp(args) => cmd_emit(args, porcelain),
        Command::Solve(args) => cmd_solve(args, porcelain),
        Command::Verify(args) => cmd_verify(args, porcelain),
    }
}

fn load_graph(spec_text: &str) -> Result<(GraphSpec, Arc<Graph>)> {
    let spec: GraphSpec = spec_text.parse()?;
    let graph = Arc::new(spec.build()?);
    Ok((spec, graph))
}

fn load_distribution(graph: &Arc<Graph>, path: &str) -> Result<PebbleDistribution> {
    let text = fs::read_to_string(path)?;
    PebbleDistribution::parse(Arc::clone(graph), &text)
}

fn parse_unit(text: &str) -> Result<UnitDistribution> {
    let (v, k) = text
        .split_once(':')
        .ok_or_else(|| Error::parse(format!("unit must be vertex:count, got '{text}'")))?;
    let vertex = v
        .trim()
        .parse()
        .map_err(|_| Error::parse(format!("bad unit vertex: {v}")))?;
    let count = k
        .trim()
        .parse()
        .map_err(|_| Error::parse(format!("bad unit count: {k}")))?;
    Ok(UnitDistribution::new(vertex, count))
}

fn cmd_reach(args: ReachArgs, porcelain: bool) -> Result<i32> {
    let (_, graph) = load_graph(&args.graph)?;
    let dist = load_distribution(&graph, &args.dist)?;
    if let Some(target) = args.target {
        let r = dist.reach(target)?;
        if porcelain {
            println!("reach.{target}={r}");
        } else {
            println!("reach(P, {target}) = {r}");
        }
        return Ok(0);
    }
    let report = dist.analyze();
    if porcelain {
        for v in 0..graph.vertex_count() {
            println!("reach.{v}={}", report.reach[v]);
        }
        println!("te={}", report.total_excess);
        println!("cov={}", report.cov());
        println!("solvable={}", report.solvable);
    } else {
        println!("graph: {} ({})", args.graph, graph);
        println!("distribution: {dist} ({} pebbles)", dist.size());
        println!("{:>6} {:>6} {:>7}", "vertex", "reach", "excess");
        for v in 0..graph.vertex_count() {
            println!("{v:>6} {:>6} {:>7}", report.reach[v], report.excess[v]);
        }
        println!("TE = {}", report.total_excess);
        println!(
            "coverage = {}/{}{}",
            report.cov(),
            graph.vertex_count(),
            if report.solvable { " (solvable)" } else { "" }
        );
    }
    Ok(0)
}

fn cmd_coop(args: PairArgs, porcelain: bool) -> Result<i32> {
    let (_, graph) = load_graph(&args.graph)?;
    let p = load_distribution(&graph, &args.dist_p)?;
    let unit = parse_unit(&args.unit)?;
    let ud = unit.to_distribution(Arc::clone(&graph))?;
    let report = decompose::cooperation(&p, &ud)?;
    if porcelain {
        println!("coop={}", report.coop);
        println!("dc={}", report.dc);
        println!("ce={}", report.ce);
        for v in 0..graph.vertex_count() {
            println!(
                "vertex.{v}.ce={} vertex.{v}.m={} vertex.{v}.coop={} vertex.{v}.dc={}",
                report.per_vertex_ce[v],
                report.m_values[v],
                report.is_coop_vertex(v) as u8,
                report.is_double_covered(v) as u8,
            );
        }
    } else {
        println!("P = {p}, U = {unit}");
        println!(
            "coop = {}   DC = {}   CE = {}",
            report.coop, report.dc, report.ce
        );
        println!(
            "cooperation vertices: {:?}   double covered: {:?}",
            report.coop_vertices, report.dc_vertices
        );
        println!(
            "{:>6} {:>4} {:>5} {:>5} {:>4}",
            "vertex", "ce", "coop", "dc", "M"
        );
        for v in 0..graph.vertex_count() {
            println!(
                "{v:>6} {:>4} {:>5} {:>5} {:>4}",
                report.per_vertex_ce[v],
                report.is_coop_vertex(v) as u8,
                report.is_double_covered(v) as u8,
                report.m_values[v].to_string(),
            );
        }
    }
    Ok(0)
}

fn cmd_aux(args: AuxArgs, porcelain: bool) -> Result<i32> {
    let (_, graph) = load_graph(&args.graph)?;
    let p = load_distribution(&graph, &args.dist_p)?;
    let unit = parse_unit(&args.unit)?;
    let a0 = AuxGraph::build_a0(&graph, &p, &unit)?;
    let run = a0.run_to_fixpoint(args.step_limit)?;

    if let Some(path) = &args.trace {
        let mut f = fs::File::create(path)?;
        for step in &run.steps {
            writeln!(f, "{step}")?;
        }
    }

    let audits = run.result.audit_blocks();
    if porcelain {
        let (i1, i2, i3) = run.initial_sums;
        let (f1, f2, f3) = run.final_sums;
        println!("initial.c1={i1} initial.c2={i2} initial.c3={i3}");
        println!("final.c1={f1} final.c2={f2} final.c3={f3}");
        println!("steps={}", run.steps.len());
        println!("saturated={}", run.result.saturated_vertices().len());
        for (i, a) in audits.iter().enumerate() {
            println!(
                "block.{i}.c1={} block.{i}.c2={} block.{i}.c3={} block.{i}.ok={}",
                a.sum_c1,
                a.sum_c2,
                a.sum_c3,
                (a.inequality_holds && a.count_bound_holds) as u8
            );
        }
    } else {
        println!(
            "A_0: {} vertices, delta = {}, sums (c1,c2,c3) = {:?}",
            a0.vertex_count(),
            a0.delta(),
            run.initial_sums
        );
        println!(
            "fixpoint after {} steps: {} vertices, sums = {:?}, saturated = {}",
            run.steps.len(),
            run.result.vertex_count(),
            run.final_sums,
            run.result.saturated_vertices().len()
        );
        for (i, a) in audits.iter().enumerate() {
            println!(
                "A-block {i}: |B| = {}, c1 = {}, c2 = {}, c3 = {}, inner = {}, boundary = {}, \
                 inequality {}, boundary bound {}",
                a.block.len(),
                a.sum_c1,
                a.sum_c2,
                a.sum_c3,
                a.inner,
                a.boundary,
                if a.inequality_holds { "ok" } else { "VIOLATED" },
                if a.count_bound_holds {
                    "ok"
                } else {
                    "VIOLATED"
                },
            );
        }
        let sums_ok = run.initial_sums == run.final_sums;
        let blocks_ok = audits
            .iter()
            .all(|a| a.inequality_holds && a.count_bound_holds);
        println!(
            "audit: sums {}, blocks {}",
            if sums_ok { "preserved" } else { "DRIFTED" },
            if blocks_ok { "ok" } else { "VIOLATED" },
        );
    }
    Ok(0)
}

fn cmd_bound(args: BoundArgs, porcelain: bool) -> Result<i32> {
    let (spec, graph) = load_graph(&args.graph)?;
    let dist = match &args.dist {
        Some(path) => Some(load_distribution(&graph, path)?),
        None => None,
    };
    let report = bounds::bound_report(&graph, &args.graph, Some(&spec), dist.as_ref())?;
    if porcelain {
        println!("effect={}", report.effect);
        println!("transitive={}", report.vertex_transitive_like);
        if let Some(v) = report.fractional {
            println!("fractional={v}");
        }
        if let Some(v) = report.excess_bound {
            println!("excess={v}");
        }
        if let Some(v) = report.structural {
            println!("structural={v}");
        }
        if let Some(v) = report.grid {
            println!("grid={v}");
        }
        if let Some(v) = report.path_cycle {
            println!("path_cycle={v}");
        }
        println!("best={}", report.best_lower_bound());
    } else {
        println!("graph: {} ({})", report.graph_desc, graph);
        println!("ef(v0) = {}", report.effect);
        println!(
            "vertex-transitive screen: {}",
            if report.vertex_transitive_like {
                "pass"
            } else {
                "fail"
            }
        );
        let fmt = |o: Option<bounds::Rational>| match o {
            Some(v) => format!("{v} (~{:.3})", rational_f64(v)),
            None => "-".to_string(),
        };
        println!("fractional bound:  {}", fmt(report.fractional));
        println!("excess bound:      {}", fmt(report.excess_bound));
        println!("structural bound:  {}", fmt(report.structural));
        println!(
            "grid bound:        {}",
            report
                .grid
                .map(|v| v.to_string())
                .unwrap_or_else(|| "-".to_string())
        );
        println!(
            "path/cycle value:  {}",
            report
                .path_cycle
                .map(|v| v.to_string())
                .unwrap_or_else(|| "-".to_string())
        );
        println!("best integer lower bound: {}", report.best_lower_bound());
        for note in &report.notes {
            println!("note: {note}");
        }
    }
    Ok(0)
}

fn rational_f64(r: bounds::Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn cmd_emit(args: EmitArgs, porcelain: bool) -> Result<i32> {
    let (_, graph) = load_graph(&args.graph)?;
    let mut file = fs::File::create(&args.out)?;
    let summary = bounds::emit_ilp(&graph, &mut file, args.relax)?;
    if porcelain {
        println!("placement_vars={}", summary.placement_variables);
        println!("flow_vars={}", summary.flow_variables);
        println!("variables={}", summary.variables());
        println!("constraints={}", summary.constraints);
        println!("relaxed={}", summary.relaxed);
    } else {
        println!(
            "wrote {}: {} variables ({} placement + {} flow), {} constraints{}",
            args.out,
            summary.variables(),
            summary.placement_variables,
            summary.flow_variables,
            summary.constraints,
            if summary.relaxed { ", relaxed" } else { "" }
        );
    }
    Ok(0)
}

fn cmd_solve(args: SolveArgs, porcelain: bool) -> Result<i32> {
    let (spec, graph) = load_graph(&args.graph)?;
    let automorphisms = match args.symmetry {
        Symmetry::Auto => spec.automorphisms(),
        Symmetry::None => Vec::new(),
    };
    let mut lower_hint = None;
    if let GraphSpec::Torus(m, n) | GraphSpec::Grid(m, n) = spec {
        if m >= 5 && n >= 5 {
            lower_hint = Some(bounds::grid_bound(m, n)? as u32);
        }
    }
    let options = SolveOptions {
        automorphisms,
        lower_hint,
        max_nodes: args.budget_nodes,
        max_size: args.max_size,
    };
    let result = solver::solve(&graph, &options)?;
    if porcelain {
        println!("pi_opt={}", result.pi_opt);
        print!("witness=");
        let parts: Vec<String> = result
            .witness
            .occupied()
            .map(|v| format!("{v}:{}", result.witness.count(v)))
            .collect();
        println!("{}", parts.join(","));
        println!("lower_bound={}", result.lower_bound_used);
        println!("distributions_tested={}", result.stats.distributions_tested);
        println!("states_expanded={}", result.stats.states_expanded);
    } else {
        println!("pi_opt({}) = {}", args.graph, result.pi_opt);
        println!("witness (distribution format):");
        print!("{}", result.witness.to_text());
        println!(
            "stats: started at lower bound {}, tested {} distributions, expanded {} states",
            result.lower_bound_used,
            result.stats.distributions_tested,
            result.stats.states_expanded
        );
    }
    Ok(0)
}

fn cmd_verify(args: VerifyArgs, porcelain: bool) -> Result<i32> {
    let cfg = SweepConfig {
        max_n: args.max_n,
        max_pebbles: args.max_pebbles,
        unit_sizes: (2..=args.unit_max.max(2)).collect(),
        random_graphs: args.random_graphs,
        seed: args.seed,
        torus_max: args.torus_max,
        torus_unit_max: args.torus_unit_max,
        solve_max_n: args.solve_max_n,
        ..Default::default()
    };
    let outcomes = if args.all || args.suite.is_none() {
        verify::run_all(&cfg)
    } else {
        verify::run_suite(args.suite.as_deref().unwrap(), &cfg)?
    };
    let mut failed = false;
    for o in &outcomes {
        if porcelain {
            println!(
                "suite.{}.checked={} suite.{}.violations={}",
                o.name, o.checked, o.name, o.violations
            );
        } else {
            println!(
                "suite {:<14} {} ({} checks)",
                o.name,
                if o.passed() { "PASS" } else { "FAIL" },
                o.checked
            );
            for msg in &o.messages {
                println!("  violation: {msg}");
            }
            for note in &o.notes {
                println!("  note: {note}");
            }
        }
        failed |= !o.passed();
    }
    Ok(if failed { 1 } else { 0 })
}
