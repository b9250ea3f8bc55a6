use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use termgraph::families::{generate, generate_rules, GENERATORS, RULE_GENERATORS};
use termgraph::order::{glb, liminf, liminf_window, lub_directed};
use termgraph::unravel::develop_step_oracle;
use termgraph::{
    analyze_m, analyze_p, analyze_weak, apply, check_step_soundness, distance, le_bot, minimize, parse_graph,
    parse_grs, run, truncate, unravel_to_depth, Depth, Grs, InnermostFirst, NamedRule, NodeId, OutermostFirst,
    Position, RoundRobin, Signature, Soundness, Strategy, TermGraph, Trace, TruncationVariant,
};

#[derive(Parser)]
#[command(name = "tg", version, about = "Term graph rewriting with sharing and cycles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical form of a graph, or of a rule system with --rules
    Parse {
        #[arg(long)]
        rules: bool,
        input: String,
    },
    /// Apply one rule at a node or position
    Step {
        #[command(flatten)]
        rule: RuleArgs,
        #[command(flatten)]
        at: Target,
        #[arg(long)]
        json: bool,
        graph: String,
    },
    /// Run a strategy and print the trace
    Reduce {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        json: bool,
        graph: String,
    },
    /// Truncate a graph at a depth
    Trunc {
        /// A number or `inf`
        #[arg(long)]
        depth: Depth,
        #[arg(long, value_enum, default_value = "strict")]
        variant: Variant,
        graph: String,
    },
    /// Similarity of two graphs
    Sim(Pair),
    /// Distance of two graphs
    Dist(Pair),
    /// Order queries over a list of graphs
    Order {
        #[arg(value_enum)]
        op: OrderOp,
        /// With `liminf`, use the finite-window estimate at this depth
        #[arg(long)]
        depth: Option<usize>,
        #[arg(required = true)]
        graphs: Vec<String>,
    },
    /// Metric, strong partial-order and weak convergence reports
    Converge {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        json: bool,
        graph: String,
    },
    /// Unravel a graph down to a depth
    Unravel {
        #[arg(long)]
        depth: usize,
        graph: String,
    },
    /// Least bisimilar graph
    Minimize { graph: String },
    /// Compare graph steps with their term-level developments
    CheckSound {
        #[command(flatten)]
        run: RunArgs,
        /// Check a single step at this node instead of a trace
        #[arg(long, conflicts_with = "pos")]
        at: Option<u32>,
        /// Check a single step at this position instead of a trace
        #[arg(long)]
        pos: Option<Position>,
        /// Rule to apply for a single step
        #[arg(long)]
        name: Option<String>,
        #[arg(long, default_value_t = 5)]
        depth: usize,
        #[arg(long)]
        json: bool,
        graph: String,
    },
    /// Print a built-in example graph or rule system; lists them without a name
    Gen {
        /// Treat the name as a rule system
        #[arg(long)]
        rules: bool,
        name: Option<String>,
    },
}

#[derive(Args)]
struct Pair {
    #[arg(long, value_enum, default_value = "strict")]
    variant: Variant,
    #[arg(long)]
    json: bool,
    left: String,
    right: String,
}

#[derive(Args)]
struct RuleArgs {
    /// Rule file, inline rule text, or `gen:` rule system
    #[arg(long)]
    rule: String,
    /// Which rule of the system to use; defaults to the first
    #[arg(long)]
    name: Option<String>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Target {
    /// Canonical node index
    #[arg(long)]
    at: Option<u32>,
    /// Position such as `1,0`
    #[arg(long)]
    pos: Option<Position>,
}

#[derive(Args)]
struct RunArgs {
    /// Rule file, inline rule text, or `gen:` rule system
    #[arg(long)]
    rules: String,
    #[arg(long, value_enum, default_value = "outermost")]
    strategy: StrategyName,
    #[arg(long, default_value_t = 16)]
    steps: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Strict,
    FreshFringe,
    CycleFringe,
    Rigid,
    RigidShared,
}

impl From<Variant> for TruncationVariant {
    fn from(v: Variant) -> TruncationVariant {
        match v {
            Variant::Strict => TruncationVariant::Strict,
            Variant::FreshFringe => TruncationVariant::FreshFringe,
            Variant::CycleFringe => TruncationVariant::CycleFringe,
            Variant::Rigid => TruncationVariant::Rigid,
            Variant::RigidShared => TruncationVariant::RigidSharedFringe,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyName {
    Outermost,
    Innermost,
    RoundRobin,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderOp {
    Le,
    Glb,
    Lub,
    Liminf,
}

// Usage errors exit with 2, domain errors with 1.
enum Failure {
    Usage(String),
    Domain(String),
}

impl From<termgraph::Error> for Failure {
    fn from(e: termgraph::Error) -> Failure {
        Failure::Domain(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read_source(input: &str) -> Result<String, Failure> {
    if Path::new(input).is_file() {
        Ok(std::fs::read_to_string(input)?)
    } else {
        Ok(input.to_string())
    }
}

fn with_source<T>(input: &str, text: &str, r: termgraph::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| match e {
        termgraph::Error::Parse { offset, .. } | termgraph::Error::ArityConflict { offset, .. } => {
            let line = text.lines().next().unwrap_or("");
            let caret =
                if offset <= line.len() { format!("\n  {line}\n  {}^", " ".repeat(offset)) } else { String::new() };
            Failure::Domain(format!("{input}: {e}{caret}"))
        }
        e => Failure::Domain(e.to_string()),
    })
}

fn load_graph(input: &str, sig: &mut Signature) -> Result<TermGraph, Failure> {
    if input.starts_with("gen:") {
        return Ok(generate(input)?);
    }
    let text = read_source(input)?;
    with_source(input, &text, parse_graph(text.trim(), sig))
}

fn load_rules(input: &str, sig: &mut Signature) -> Result<Grs, Failure> {
    if input.starts_with("gen:") {
        return Ok(generate_rules(input)?);
    }
    let text = read_source(input)?;
    with_source(input, &text, parse_grs(&text, sig))
}

fn pick_rule<'a>(grs: &'a Grs, name: Option<&str>) -> Result<&'a NamedRule, Failure> {
    match name {
        Some(n) => Ok(grs.rule(n)?),
        None => grs.rules().first().ok_or_else(|| Failure::Domain("the rule system is empty".into())),
    }
}

fn resolve(g: &TermGraph, at: Option<u32>, pos: Option<&Position>) -> Result<NodeId, Failure> {
    match (at, pos) {
        (Some(n), _) if g.contains(NodeId(n)) => Ok(NodeId(n)),
        (Some(n), _) => Err(termgraph::Error::InvalidNode(NodeId(n)).into()),
        (None, Some(p)) => Ok(g.node_at(p)?),
        (None, None) => Err(Failure::Usage("one of --at or --pos is required".into())),
    }
}

fn strategy(name: StrategyName) -> Box<dyn Strategy> {
    match name {
        StrategyName::Outermost => Box::new(OutermostFirst),
        StrategyName::Innermost => Box::new(InnermostFirst),
        StrategyName::RoundRobin => Box::new(RoundRobin::default()),
    }
}

fn trace(args: &RunArgs, graph: &str) -> Result<Trace, Failure> {
    let mut sig = Signature::new();
    let grs = load_rules(&args.rules, &mut sig)?;
    let g = load_graph(graph, &mut sig)?;
    Ok(run(&grs, &g, strategy(args.strategy).as_mut(), args.steps)?)
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn step_json(i: usize, s: &termgraph::Step) -> Value {
    json!({
        "step": i,
        "rule": s.rule,
        "node": s.redex.0,
        "depth": s.redex_depth,
        "graph": s.after.to_string(),
        "context": s.context.to_string(),
    })
}

fn execute(command: Command) -> Outcome {
    match command {
        Command::Parse { rules, input } => {
            let mut sig = Signature::new();
            if rules {
                for r in load_rules(&input, &mut sig)?.rules() {
                    println!("{}: {}", r.name, r.rule);
                }
            } else {
                println!("{}", load_graph(&input, &mut sig)?);
            }
        }
        Command::Step { rule, at, json, graph } => {
            let mut sig = Signature::new();
            let grs = load_rules(&rule.rule, &mut sig)?;
            let g = load_graph(&graph, &mut sig)?;
            let r = pick_rule(&grs, rule.name.as_deref())?;
            let n = resolve(&g, at.at, at.pos.as_ref())?;
            let s = apply(&g, n, r)?;
            if json {
                print_json(&step_json(0, &s));
            } else {
                println!("{}", s.after);
            }
        }
        Command::Reduce { run, json, graph } => {
            let t = trace(&run, &graph)?;
            if json {
                let steps: Vec<Value> = t.steps.iter().enumerate().map(|(i, s)| step_json(i, s)).collect();
                print_json(&json!({ "initial": t.initial.to_string(), "steps": steps, "exhausted": t.exhausted }));
            } else {
                println!("0: {}", t.initial);
                for (i, s) in t.steps.iter().enumerate() {
                    println!("{}: {}  [{} at node {}, depth {}]", i + 1, s.after, s.rule, s.redex.0, s.redex_depth);
                }
                if t.exhausted {
                    println!("normal form");
                }
            }
        }
        Command::Trunc { depth, variant, graph } => {
            let g = load_graph(&graph, &mut Signature::new())?;
            println!("{}", truncate(&g, depth, variant.into()));
        }
        Command::Sim(pair) => compare(&pair, true)?,
        Command::Dist(pair) => compare(&pair, false)?,
        Command::Order { op, depth, graphs } => {
            let mut sig = Signature::new();
            let gs = graphs.iter().map(|s| load_graph(s, &mut sig)).collect::<Result<Vec<_>, _>>()?;
            match op {
                OrderOp::Le => {
                    if gs.len() != 2 {
                        return Err(Failure::Usage("`order le` takes exactly two graphs".into()));
                    }
                    println!("{}", le_bot(&gs[0], &gs[1]));
                }
                OrderOp::Glb => println!("{}", glb(&gs)?),
                OrderOp::Lub => println!("{}", lub_directed(&gs)?),
                OrderOp::Liminf => match depth {
                    Some(d) => {
                        let (g, stable) = liminf_window(&gs, d)?;
                        println!("{g}");
                        println!("stable: {stable}");
                    }
                    None => println!("{}", liminf(&gs)?),
                },
            }
        }
        Command::Converge { run, depth, json, graph } => {
            let t = trace(&run, &graph)?;
            let m = analyze_m(&t, depth);
            let p = analyze_p(&t, depth);
            let w = analyze_weak(&t, depth);
            if json {
                print_json(&json!({
                    "steps": t.steps.len(),
                    "depth": depth,
                    "graph": t.last().to_string(),
                    "m": m,
                    "p": p,
                    "weak": w,
                }));
            } else {
                let show = |g: &Option<TermGraph>| g.as_ref().map_or("none".to_string(), |g| g.to_string());
                println!("steps: {}", t.steps.len());
                println!("last: {}", t.last());
                println!("m certified prefix: {}", show(&m.certified_prefix));
                if let Some(p) = &m.diverging_at {
                    println!("m diverging at: {p}");
                }
                println!("p certified prefix: {}", p.certified_prefix);
                let cands: Vec<String> = p.volatile_candidates.iter().map(|q| q.to_string()).collect();
                println!("p volatile candidates: {}", cands.join(" "));
                println!("p total: {}", p.total);
                println!("weak m window: {}", show(&w.m_window));
                println!("weak p window: {} (stable: {})", w.p_window, w.p_stable);
            }
        }
        Command::Unravel { depth, graph } => {
            let g = load_graph(&graph, &mut Signature::new())?;
            println!("{}", unravel_to_depth(&g, depth));
        }
        Command::Minimize { graph } => {
            let g = load_graph(&graph, &mut Signature::new())?;
            println!("{}", minimize(&g));
        }
        Command::CheckSound { run, at, pos, name, depth, json, graph } => {
            let mut sig = Signature::new();
            let grs = load_rules(&run.rules, &mut sig)?;
            let g = load_graph(&graph, &mut sig)?;
            let steps: Vec<(TermGraph, NodeId, NamedRule)> = if at.is_some() || pos.is_some() {
                let n = resolve(&g, at, pos.as_ref())?;
                vec![(g.clone(), n, pick_rule(&grs, name.as_deref())?.clone())]
            } else {
                let t = termgraph::run(&grs, &g, strategy(run.strategy).as_mut(), run.steps)?;
                t.steps
                    .iter()
                    .map(|s| (s.before.clone(), s.redex, grs.rule(&s.rule).cloned()))
                    .map(|(g, n, r)| r.map(|r| (g, n, r)))
                    .collect::<termgraph::Result<_>>()?
            };
            let mut verdicts = Vec::new();
            for (g, n, r) in &steps {
                let v = check_step_soundness(g, *n, r, depth)?;
                let contractions = develop_step_oracle(g, *n, &r.rule, depth, None)?.contractions;
                verdicts.push((v, contractions));
            }
            let unsound = verdicts.iter().any(|(v, _)| *v == Soundness::Unsound);
            if json {
                let rows: Vec<Value> = steps
                    .iter()
                    .zip(&verdicts)
                    .enumerate()
                    .map(|(i, ((g, n, r), (v, c)))| {
                        json!({ "step": i, "rule": r.name, "node": n.0, "graph": g.to_string(), "verdict": format!("{v:?}").to_lowercase(), "contractions": c })
                    })
                    .collect();
                print_json(&json!({ "depth": depth, "steps": rows, "sound": !unsound }));
            } else {
                for (i, ((_, n, r), (v, c))) in steps.iter().zip(&verdicts).enumerate() {
                    println!("{i}: {} at node {}: {} ({c} contractions)", r.name, n.0, format!("{v:?}").to_lowercase());
                }
            }
            if unsound {
                return Err(Failure::Domain("a step disagrees with its term-level development".into()));
            }
        }
        Command::Gen { rules, name } => match name {
            None => {
                for g in GENERATORS {
                    println!("{g}");
                }
                for r in RULE_GENERATORS {
                    println!("{r} (--rules)");
                }
            }
            Some(n) if rules => {
                for r in generate_rules(&n)?.rules() {
                    println!("{}: {}", r.name, r.rule);
                }
            }
            Some(n) => println!("{}", generate(&n)?),
        },
    }
    Ok(())
}

fn compare(pair: &Pair, sim_only: bool) -> Outcome {
    let mut sig = Signature::new();
    let g = load_graph(&pair.left, &mut sig)?;
    let h = load_graph(&pair.right, &mut sig)?;
    let variant = pair.variant.into();
    let dist = distance(&g, &h, variant);
    if pair.json {
        print_json(&json!({
            "variant": TruncationVariant::from(pair.variant).name(),
            "similarity": dist.exponent,
            "distance_exponent": dist.exponent,
            "distance": dist.value(),
        }));
    } else if sim_only {
        println!("{}", dist.exponent);
    } else {
        println!("{dist}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
