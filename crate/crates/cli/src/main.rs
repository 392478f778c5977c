//! `numgame`: play, classify and inspect numbers games from the shell.
//!
//! Every command prints one JSON document on standard output. Node indices,
//! words, fired sequences and poset colors are 1-based.

mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use numgame_core::poset::infer_finite_type;
use numgame_core::{
    check_m_structure, classify, cycle_charpoly_shift, is_reduced, orbit, perron, play, replay,
    AmplitudeGraph, CatalogId, ComponentClass, CoxeterError, EdgeColoredPoset, EngineError,
    OrbitOptions, OrbitSize, Outcome, PlayOptions, Verdict, Witness,
};
use serde_json::{json, Value};

use input::ModeArg;

#[derive(Parser)]
#[command(name = "numgame", version, about = "The numbers game on GCM and E-GCM graphs")]
struct Cli {
    /// Print only the summary fields.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArgs {
    /// Catalog id (e.g. B2, affE8, calH3, I2(5)) or path to a graph JSON file.
    #[arg(long)]
    graph: String,
    /// Arithmetic: exact rationals or floating point. Defaults to the graph's own.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Subcommand)]
enum Command {
    /// Play a game until it converges, is certified divergent, or hits the limit.
    Play {
        #[command(flatten)]
        graph: GraphArgs,
        /// JSON array, `ones`, or `omega:<i>`.
        #[arg(long)]
        position: String,
        /// `lowest` or `random:<seed>`.
        #[arg(long, default_value = "lowest")]
        policy: String,
        #[arg(long)]
        limit: Option<usize>,
        /// Include every intermediate position.
        #[arg(long)]
        trace: bool,
        /// Skip the divergence certificate check and just play.
        #[arg(long)]
        no_certify: bool,
    },
    /// Fire a given sequence of nodes, failing at the first illegal firing.
    Replay {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        position: String,
        /// Comma-separated nodes, e.g. 1,2,1.
        #[arg(long)]
        fired: String,
    },
    /// Recognize each component and report its spectral class.
    Classify {
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Perron root and vector of each component.
    Spectral {
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Enumerate the Coxeter orbit of a strongly dominant position.
    Orbit {
        #[command(flatten)]
        graph: GraphArgs,
        /// Seed position; all ones by default.
        #[arg(long, default_value = "ones")]
        position: String,
        #[arg(long, default_value_t = numgame_core::coxeter::DEFAULT_ORBIT_CAP)]
        cap: usize,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Include every orbit element in breadth-first order.
        #[arg(long)]
        dump: bool,
    },
    /// Decide whether a word s_{i_p}...s_{i_1} is reduced.
    Reduce {
        #[command(flatten)]
        graph: GraphArgs,
        /// Comma-separated generators, leftmost first, e.g. 1,2,1.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Check the M-structure property of an edge-colored poset.
    CheckPoset {
        #[command(flatten)]
        graph: GraphArgs,
        /// Poset JSON file or inline JSON.
        #[arg(long)]
        poset: String,
        /// Also classify the graph and replay the rank descent.
        #[arg(long)]
        infer: bool,
    },
    /// List the catalog families and their ids.
    CatalogList,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flag value; exit code 2.
    Usage { flag: &'static str, message: String },
    /// Valid input the mathematics rejects; exit code 1.
    Domain(Value),
}

impl CliError {
    pub fn usage(flag: &'static str, message: impl Into<String>) -> Self {
        CliError::Usage { flag, message: message.into() }
    }

    pub fn domain(kind: &str, message: impl Into<String>) -> Self {
        CliError::Domain(json!({"error": kind, "message": message.into()}))
    }
}

/// Rounds away power-iteration noise below the solver tolerance.
fn round(x: f64) -> f64 {
    (x * 1e10).round() / 1e10
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

/// Like `Verdict::to_json`, with the (already global) witness edge 1-based.
fn verdict_json(c: &ComponentClass) -> Value {
    match &c.verdict {
        Verdict::Inadmissible(Witness::Edge { i, j, product }) => json!({
            "verdict": "Inadmissible",
            "witness": {"edge": [i + 1, j + 1], "product": product},
        }),
        v => v.to_json(),
    }
}

fn engine_error(e: EngineError) -> CliError {
    match e {
        EngineError::IllegalFiringAt { step, node } => CliError::Domain(json!({
            "error": "IllegalFiring",
            "step": step + 1,
            "node": node + 1,
            "message": format!("firing {} (node {}) is illegal", step + 1, node + 1),
        })),
        other => CliError::domain("Engine", other.to_string()),
    }
}

fn cmd_play(
    g: &AmplitudeGraph,
    position: &str,
    policy: &str,
    limit: Option<usize>,
    trace: bool,
    certify: bool,
    quiet: bool,
) -> Result<Value, CliError> {
    let start = input::parse_position(position, g)?;
    let policy = input::parse_policy(policy)?;
    let opts = PlayOptions { limit, retain_positions: trace, certify };
    let out = play(g, &start, policy, &opts).map_err(engine_error)?;
    let mut doc = match &out.outcome {
        Outcome::Converged { terminal, steps } => {
            json!({"outcome": "Converged", "terminal": terminal.to_json(), "steps": steps})
        }
        Outcome::DivergentCertified { certificate: c } => json!({
            "outcome": "DivergentCertified",
            "component": one_based(&c.component),
            "rho": round(c.rho),
            "pairing": round(c.pairing),
            "nu": c.nu.iter().map(|&x| round(x)).collect::<Vec<_>>(),
        }),
        Outcome::Exhausted { limit, last } => {
            json!({"outcome": "Exhausted", "limit": limit, "last": last.to_json()})
        }
    };
    if !quiet {
        doc["fired"] = json!(one_based(&out.trace.fired));
        if let Some(ps) = &out.trace.positions {
            doc["positions"] = Value::Array(ps.iter().map(|p| p.to_json()).collect());
        }
    } else if let Some(nu) = doc.as_object_mut() {
        nu.remove("nu");
    }
    Ok(doc)
}

fn cmd_classify(g: &AmplitudeGraph, quiet: bool) -> Result<Value, CliError> {
    let c = classify(g);
    let comps: Vec<Value> = c
        .components
        .iter()
        .map(|comp| {
            let mut v = verdict_json(comp);
            v["nodes"] = json!(one_based(&comp.nodes));
            v["trichotomy"] = json!(comp.trichotomy);
            if !quiet {
                let sub = g.induced_subgraph(&comp.nodes).expect("component is nonempty");
                if let Ok(r) = perron(&sub) {
                    v["rho"] = json!(round(r.rho));
                    v["nu"] = json!(r.nu.iter().map(|&x| round(x)).collect::<Vec<_>>());
                }
            }
            v
        })
        .collect();
    Ok(json!({"admissible": c.all_admissible(), "components": comps}))
}

fn cmd_spectral(g: &AmplitudeGraph, quiet: bool) -> Result<Value, CliError> {
    let mut comps = Vec::new();
    for nodes in g.connected_components() {
        let sub = g.induced_subgraph(&nodes).expect("component is nonempty");
        let r = perron(&sub).map_err(|e| CliError::domain("Spectral", e.to_string()))?;
        let mut v = json!({
            "nodes": one_based(&nodes),
            "rho": round(r.rho),
            "trichotomy": r.trichotomy,
        });
        if !quiet {
            v["nu"] = json!(r.nu.iter().map(|&x| round(x)).collect::<Vec<_>>());
            v["iterations"] = json!(r.iterations);
            if let Ok(s) = cycle_charpoly_shift(&sub) {
                v["cycle"] = json!({"pi": round(s.pi), "shift": round(s.shift)});
            }
        }
        comps.push(v);
    }
    Ok(json!({"components": comps}))
}

fn cmd_orbit(
    g: &AmplitudeGraph,
    position: &str,
    cap: usize,
    threads: usize,
    dump: bool,
) -> Result<Value, CliError> {
    if threads == 0 {
        return Err(CliError::usage("--threads", "must be at least 1"));
    }
    let seed = input::parse_position(position, g)?;
    if !seed.is_strongly_dominant() {
        return Err(CliError::usage("--position", "orbit seeds must be strongly dominant"));
    }
    let opts = OrbitOptions { cap, threads, keep_positions: dump };
    let res = orbit(g, &seed, &opts).map_err(|e| match e {
        CoxeterError::CapExceeded(c) => CliError::Domain(json!({
            "error": "CapExceeded",
            "cap": c,
            "message": e.to_string(),
        })),
        other => CliError::domain("Orbit", other.to_string()),
    })?;
    let mut doc = match res.size {
        OrbitSize::Finite(n) => json!({"size": n, "longest_length": res.longest_length}),
        OrbitSize::Infinite => json!({"size": "Infinite"}),
    };
    if let Some(ps) = res.positions {
        doc["positions"] = Value::Array(ps.iter().map(|p| p.to_json()).collect());
    }
    Ok(doc)
}

fn cmd_check_poset(g: &AmplitudeGraph, poset: &str, infer: bool) -> Result<Value, CliError> {
    let v = input::load_json("--poset", poset)?;
    let p = EdgeColoredPoset::from_json(&v).map_err(|e| CliError::domain("InvalidPoset", e.to_string()))?;
    let rep = check_m_structure(&p, g).map_err(|e| CliError::domain("Poset", e.to_string()))?;
    let violations: Vec<Value> = rep
        .violations
        .iter()
        .map(|x| {
            json!({
                "cover": x.cover + 1,
                "source": x.source,
                "target": x.target,
                "color": x.color + 1,
                "expected": x.expected,
                "actual": x.actual,
            })
        })
        .collect();
    let mut doc = json!({
        "ok": rep.ok,
        "violations": violations,
        "colors_used": one_based(&rep.colors_used),
        "surjective": rep.surjective,
        "sufficiently_surjective": rep.is_sufficiently_surjective(),
        "unranked_components": rep
            .ranked_component_failures
            .iter()
            .map(|(c, comp)| json!({"color": c + 1, "component": comp}))
            .collect::<Vec<_>>(),
    });
    if infer {
        let inf = infer_finite_type(&p, g).map_err(|e| CliError::domain("Inference", e.to_string()))?;
        let comps: Vec<Value> = inf
            .classification
            .components
            .iter()
            .map(|c| {
                let mut v = verdict_json(c);
                v["nodes"] = json!(one_based(&c.nodes));
                v
            })
            .collect();
        let descent: Vec<Value> = inf
            .descent
            .iter()
            .map(|s| json!({"element": s.element, "fired": s.fired.map(|i| i + 1), "weight": s.weight}))
            .collect();
        doc["inference"] = json!({"components": comps, "descent": descent});
    }
    Ok(doc)
}

fn cmd_catalog_list() -> Value {
    let families: Vec<Value> = CatalogId::families()
        .into_iter()
        .map(|(pattern, about)| json!({"pattern": pattern, "description": about}))
        .collect();
    json!({"families": families})
}

fn run(cli: Cli) -> Result<Value, CliError> {
    let quiet = cli.quiet;
    let graph = |a: &GraphArgs| input::load_graph(&a.graph, a.mode);
    match cli.command {
        Command::Play { graph: a, position, policy, limit, trace, no_certify } => {
            let g = graph(&a)?;
            cmd_play(&g, &position, &policy, limit, trace, !no_certify, quiet)
        }
        Command::Replay { graph: a, position, fired } => {
            let g = graph(&a)?;
            let start = input::parse_position(&position, &g)?;
            let fired = input::parse_nodes("--fired", &fired, g.n())?;
            let end = replay(&g, &start, &fired).map_err(engine_error)?;
            Ok(json!({"position": end.to_json(), "steps": fired.len()}))
        }
        Command::Classify { graph: a } => cmd_classify(&graph(&a)?, quiet),
        Command::Spectral { graph: a } => cmd_spectral(&graph(&a)?, quiet),
        Command::Orbit { graph: a, position, cap, threads, dump } => {
            cmd_orbit(&graph(&a)?, &position, cap, threads, dump)
        }
        Command::Reduce { graph: a, word } => {
            let g = graph(&a)?;
            let word = input::parse_nodes("--word", &word, g.n())?;
            let reduced = is_reduced(&g, &word).map_err(|e| CliError::domain("Coxeter", e.to_string()))?;
            Ok(json!({"reduced": reduced}))
        }
        Command::CheckPoset { graph: a, poset, infer } => cmd_check_poset(&graph(&a)?, &poset, infer),
        Command::CatalogList => Ok(cmd_catalog_list()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(doc) => {
            // A closed pipe (e.g. `| head`) is not an error worth a panic.
            let _ = writeln!(std::io::stdout(), "{doc}");
            ExitCode::SUCCESS
        }
        Err(CliError::Usage { flag, message }) => {
            eprintln!("error: invalid value for {flag}: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(doc)) => {
            eprintln!("{doc}");
            ExitCode::from(1)
        }
    }
}
