//! Flag values: graphs, positions, policies and 1-based index lists.

use std::path::Path;

use numgame_core::{catalog, AmplitudeGraph, CatalogError, Kind, Policy, Position};
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ModeArg {
    Exact,
    Approx,
}

/// `--graph`: a JSON file, or a catalog id when no such file exists.
pub fn load_graph(spec: &str, mode: Option<ModeArg>) -> Result<AmplitudeGraph, CliError> {
    let g = if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec)
            .map_err(|e| CliError::usage("--graph", format!("{spec}: {e}")))?;
        let v: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::usage("--graph", format!("{spec}: {e}")))?;
        AmplitudeGraph::from_json(&v).map_err(|e| CliError::domain("InvalidGraph", e.to_string()))?
    } else {
        catalog(spec).map_err(|e| match e {
            CatalogError::UnknownId(_) => CliError::usage(
                "--graph",
                format!("{spec:?} is neither a file nor a catalog id (see catalog-list)"),
            ),
            other => CliError::usage("--graph", other.to_string()),
        })?
    };
    let kind = match mode {
        None => return Ok(g),
        Some(ModeArg::Exact) => Kind::Gcm,
        Some(ModeArg::Approx) => Kind::Egcm,
    };
    g.with_kind(kind).map_err(|e| CliError::usage("--mode", e.to_string()))
}

/// `--position`: `ones`, `omega:<i>` (1-based) or a JSON array.
pub fn parse_position(spec: &str, g: &AmplitudeGraph) -> Result<Position, CliError> {
    let (mode, n) = (g.mode(), g.n());
    let bad = |msg: String| CliError::usage("--position", msg);
    if spec == "ones" {
        return Ok(Position::ones(mode, n));
    }
    if let Some(i) = spec.strip_prefix("omega:") {
        let i: usize = i.trim().parse().map_err(|_| bad(format!("{spec:?}: expected omega:<node>")))?;
        if !(1..=n).contains(&i) {
            return Err(bad(format!("node {i} is outside 1..={n}")));
        }
        return Ok(Position::fundamental(mode, n, i - 1));
    }
    let v: Value = serde_json::from_str(spec)
        .map_err(|_| bad(format!("{spec:?}: expected ones, omega:<i> or a JSON array")))?;
    let p = Position::from_json(&v, mode).map_err(|e| bad(e.to_string()))?;
    if p.len() != n {
        return Err(bad(format!("{} entries for a graph with {n} nodes", p.len())));
    }
    Ok(p)
}

/// `--policy`: `lowest` or `random:<seed>`.
pub fn parse_policy(spec: &str) -> Result<Policy, CliError> {
    match spec {
        "lowest" => Ok(Policy::LowestIndex),
        _ => spec
            .strip_prefix("random:")
            .and_then(|s| s.parse().ok())
            .map(|seed| Policy::Random { seed })
            .ok_or_else(|| CliError::usage("--policy", format!("{spec:?}: expected lowest or random:<seed>"))),
    }
}

/// A comma-separated list of 1-based nodes, returned 0-based.
pub fn parse_nodes(flag: &'static str, spec: &str, n: usize) -> Result<Vec<usize>, CliError> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| match s.parse::<usize>() {
            Ok(i) if (1..=n).contains(&i) => Ok(i - 1),
            _ => Err(CliError::usage(flag, format!("{s:?} is not a node in 1..={n}"))),
        })
        .collect()
}

/// `--poset`: a JSON file or inline JSON.
pub fn load_json(flag: &'static str, spec: &str) -> Result<Value, CliError> {
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec).map_err(|e| CliError::usage(flag, format!("{spec}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::usage(flag, e.to_string()))
}
