//! Coxeter matrices, reduced words and orbit enumeration.
//!
//! A word `s_{i_p} ⋯ s_{i_1}` is reduced exactly when firing
//! `i_1, …, i_p` (rightmost letter first) is legal from a strongly dominant
//! position. Orbits are enumerated with the reflection action
//! `λ ↦ λ - λ_i·(row i of M)`, which is applied regardless of sign.

use std::collections::HashMap;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{classify, recognize, Verdict};
use crate::engine::{play, reflect, replay, PlayOptions, Policy, Position};
use crate::graph::{AmplitudeGraph, CoxeterLabel};
use crate::scalar::Mode;

/// Grid used to key floating positions.
pub const QUANTUM: f64 = 1e-9;
/// Two positions sharing a key must be closer than this.
pub const AUDIT_DISTANCE: f64 = 1e-7;
pub const DEFAULT_ORBIT_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoxeterError {
    #[error("orbit exceeded the cap of {0} positions")]
    CapExceeded(usize),
    #[error("seed is not strongly dominant")]
    NotStronglyDominant,
    #[error("seed does not match the graph")]
    SeedMismatch,
    #[error("positions at distance {0} share a quantized key")]
    QuantizationCollision(f64),
    #[error("graph has a component that is not of finite type")]
    NotFiniteType,
    #[error("letter {0} out of range")]
    LetterOutOfRange(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterMatrix {
    pub m: Vec<Vec<CoxeterLabel>>,
}

impl Serialize for CoxeterMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.m.serialize(s)
    }
}

pub fn coxeter_matrix(g: &AmplitudeGraph) -> CoxeterMatrix {
    let n = g.n();
    let m = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { CoxeterLabel::Finite(1) } else { g.coxeter_label(i, j) })
                .collect()
        })
        .collect();
    CoxeterMatrix { m }
}

/// `word` is written left to right as `s_{i_p} ⋯ s_{i_1}` (0-based letters).
pub fn is_reduced(g: &AmplitudeGraph, word: &[usize]) -> Result<bool, CoxeterError> {
    if let Some(&bad) = word.iter().find(|&&i| i >= g.n()) {
        return Err(CoxeterError::LetterOutOfRange(bad));
    }
    let firing: Vec<usize> = word.iter().rev().copied().collect();
    Ok(replay(g, &Position::ones(g.mode(), g.n()), &firing).is_ok())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OrbitSize {
    Finite(usize),
    Infinite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitResult {
    pub size: OrbitSize,
    /// Largest BFS depth, for finite orbits.
    pub longest_length: Option<usize>,
    /// Every orbit element in BFS order, when requested.
    pub positions: Option<Vec<Position>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitOptions {
    pub cap: usize,
    /// Worker threads for frontier expansion; 1 runs inline.
    pub threads: usize,
    pub keep_positions: bool,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions { cap: DEFAULT_ORBIT_CAP, threads: 1, keep_positions: false }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Key {
    Exact(Vec<BigRational>),
    Grid(Vec<i64>),
}

/// Deduplicating store of orbit elements.
struct Seen {
    keys: HashMap<Key, usize>,
    items: Vec<Position>,
}

impl Seen {
    fn new() -> Self {
        Seen { keys: HashMap::new(), items: Vec::new() }
    }

    /// Inserts `p` unless an equal position is stored; returns whether it was new.
    fn insert(&mut self, p: Position) -> Result<bool, CoxeterError> {
        match p.mode() {
            Mode::Exact => {
                let k = Key::Exact(
                    p.values().iter().map(|v| v.as_exact().expect("exact").clone()).collect(),
                );
                if self.keys.contains_key(&k) {
                    return Ok(false);
                }
                self.keys.insert(k, self.items.len());
            }
            Mode::Approx => {
                let x = p.to_f64();
                let scaled: Vec<f64> = x.iter().map(|v| v / QUANTUM).collect();
                let base: Vec<i64> = scaled.iter().map(|v| v.round() as i64).collect();
                // Coordinates within rounding noise of a cell boundary are
                // probed on both sides.
                let ambiguous: Vec<usize> = (0..x.len())
                    .filter(|&i| (scaled[i] - scaled[i].floor() - 0.5).abs() < 1e-2)
                    .collect();
                for mask in 0u32..(1u32 << ambiguous.len().min(16)) {
                    let mut k = base.clone();
                    for (b, &i) in ambiguous.iter().enumerate() {
                        if mask & (1 << b) != 0 {
                            k[i] += if scaled[i] > base[i] as f64 { 1 } else { -1 };
                        }
                    }
                    if let Some(&idx) = self.keys.get(&Key::Grid(k)) {
                        let d = self.items[idx]
                            .to_f64()
                            .iter()
                            .zip(&x)
                            .map(|(a, b)| (a - b).abs())
                            .fold(0.0, f64::max);
                        if d >= AUDIT_DISTANCE {
                            return Err(CoxeterError::QuantizationCollision(d));
                        }
                        return Ok(false);
                    }
                }
                self.keys.insert(Key::Grid(base), self.items.len());
            }
        }
        self.items.push(p);
        Ok(true)
    }
}

fn children(g: &AmplitudeGraph, p: &Position) -> Vec<Position> {
    (0..g.n()).map(|i| reflect(g, p, i)).collect()
}

/// Breadth-first enumeration of the orbit of a strongly dominant `seed`.
/// Graphs with an inadmissible component have infinite orbits and are not
/// enumerated.
pub fn orbit(
    g: &AmplitudeGraph,
    seed: &Position,
    opts: &OrbitOptions,
) -> Result<OrbitResult, CoxeterError> {
    if seed.len() != g.n() || seed.mode() != g.mode() {
        return Err(CoxeterError::SeedMismatch);
    }
    if !seed.is_strongly_dominant() {
        return Err(CoxeterError::NotStronglyDominant);
    }
    if !classify(g).all_admissible() {
        return Ok(OrbitResult { size: OrbitSize::Infinite, longest_length: None, positions: None });
    }
    let pool = (opts.threads > 1).then(|| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .expect("thread pool")
    });
    let mut seen = Seen::new();
    seen.insert(seed.clone())?;
    let mut frontier = vec![seed.clone()];
    let mut depth = 0;
    loop {
        // Children are generated in parallel but inserted in frontier order,
        // so the result does not depend on the thread count.
        let batches: Vec<Vec<Position>> = match &pool {
            Some(pool) => pool.install(|| frontier.par_iter().map(|p| children(g, p)).collect()),
            None => frontier.iter().map(|p| children(g, p)).collect(),
        };
        let mut next = Vec::new();
        for c in batches.into_iter().flatten() {
            if seen.insert(c.clone())? {
                if seen.items.len() > opts.cap {
                    return Err(CoxeterError::CapExceeded(opts.cap));
                }
                next.push(c);
            }
        }
        if next.is_empty() {
            break;
        }
        depth += 1;
        frontier = next;
    }
    Ok(OrbitResult {
        size: OrbitSize::Finite(seen.items.len()),
        longest_length: Some(depth),
        positions: opts.keep_positions.then_some(seen.items),
    })
}

/// Length of the longest element: the step count of the game from all-ones.
pub fn longest_length(g: &AmplitudeGraph) -> Result<usize, CoxeterError> {
    for comp in g.connected_components() {
        let sub = g.induced_subgraph(&comp).expect("components are nonempty");
        if !matches!(recognize(&sub), Ok(Verdict::FiniteType(_)) | Ok(Verdict::ECoxeter(_))) {
            return Err(CoxeterError::NotFiniteType);
        }
    }
    let opts = PlayOptions { limit: None, retain_positions: false, certify: false };
    let out = play(g, &Position::ones(g.mode(), g.n()), Policy::LowestIndex, &opts)
        .map_err(|_| CoxeterError::NotFiniteType)?;
    out.converged().map(|(_, s)| s).ok_or(CoxeterError::NotFiniteType)
}

/// Seed used when none is given: all ones.
pub fn default_seed(g: &AmplitudeGraph) -> Position {
    Position::ones(g.mode(), g.n())
}
