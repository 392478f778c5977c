//! Firing rule, game play and replay.
//!
//! Firing node `i` sends `λ_j` to `λ_j - M_ij·λ_i` for every `j`; it is legal
//! only when `λ_i` is strictly positive. A game fires legal nodes until none
//! is left (convergence), a Perron certificate shows it can never end, or a
//! step limit runs out.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classify::{recognize, Verdict};
use crate::graph::AmplitudeGraph;
use crate::linalg;
use crate::scalar::{Mode, Scalar};
use crate::spectral::{certify_divergence, trichotomy, DivergenceCertificate, Trichotomy};

/// Step limit when the graph has an inadmissible component.
pub const DIVERGENT_STEP_LIMIT: usize = 10_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error("position has {got} entries but the graph has {expected} nodes")]
    LengthMismatch { expected: usize, got: usize },
    #[error("position is not in {expected} mode")]
    ModeMismatch { expected: Mode },
    #[error("position is empty")]
    EmptyPosition,
    #[error("node {0} out of range")]
    NodeOutOfRange(usize),
    #[error("node {0} is not positive and cannot be fired")]
    IllegalFiring(usize),
    #[error("firing {step} (node {node}) is illegal")]
    IllegalFiringAt { step: usize, node: usize },
    #[error("position became non-finite at step {step}")]
    NonFinite { step: usize },
    #[error("graph is not a connected tree")]
    NotATree,
    #[error("graph is not subcritical")]
    NotSubcritical,
    #[error("position JSON: {0}")]
    Json(String),
}

/// Numbers on the nodes, all in one arithmetic mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Position {
    values: Vec<Scalar>,
}

impl Position {
    pub fn new(values: Vec<Scalar>) -> Result<Self, EngineError> {
        let first = values.first().ok_or(EngineError::EmptyPosition)?.mode();
        if values.iter().any(|v| v.mode() != first) {
            return Err(EngineError::ModeMismatch { expected: first });
        }
        Ok(Position { values })
    }

    pub fn ones(mode: Mode, n: usize) -> Self {
        Position { values: vec![Scalar::one(mode); n] }
    }

    pub fn zeros(mode: Mode, n: usize) -> Self {
        Position { values: vec![Scalar::zero(mode); n] }
    }

    /// `ω_i`: 1 at node `i`, 0 elsewhere.
    pub fn fundamental(mode: Mode, n: usize, i: usize) -> Self {
        let mut p = Self::zeros(mode, n);
        p.values[i] = Scalar::one(mode);
        p
    }

    pub fn from_ints(mode: Mode, v: &[i64]) -> Self {
        Position { values: v.iter().map(|&x| Scalar::from_int(mode, x)).collect() }
    }

    pub fn from_f64(v: &[f64]) -> Self {
        Position { values: v.iter().map(|&x| Scalar::Approx(x)).collect() }
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mode(&self) -> Mode {
        self.values[0].mode()
    }

    pub fn is_dominant(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }

    pub fn is_strongly_dominant(&self) -> bool {
        self.values.iter().all(Scalar::is_positive)
    }

    pub fn is_nonzero(&self) -> bool {
        self.values.iter().any(|v| !v.is_zero())
    }

    pub fn scale(&self, r: &Scalar) -> Position {
        Position { values: self.values.iter().map(|v| v * r).collect() }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(Scalar::to_f64).collect()
    }

    pub fn to_mode(&self, mode: Mode) -> Option<Position> {
        let values = self.values.iter().map(|v| v.to_mode(mode)).collect::<Option<_>>()?;
        Some(Position { values })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.values.iter().map(Scalar::to_json).collect())
    }

    pub fn from_json(v: &serde_json::Value, mode: Mode) -> Result<Self, EngineError> {
        let arr = v
            .as_array()
            .ok_or_else(|| EngineError::Json("expected an array".into()))?;
        let values = arr
            .iter()
            .map(|x| {
                Scalar::from_json(x, mode)
                    .ok_or_else(|| EngineError::Json(format!("{x} is not a {mode} scalar")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(values)
    }
}

impl Serialize for Position {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

fn check(g: &AmplitudeGraph, lambda: &Position) -> Result<(), EngineError> {
    if lambda.len() != g.n() {
        return Err(EngineError::LengthMismatch { expected: g.n(), got: lambda.len() });
    }
    if lambda.mode() != g.mode() {
        return Err(EngineError::ModeMismatch { expected: g.mode() });
    }
    Ok(())
}

/// Nodes holding a strictly positive number, ascending.
pub fn legal_moves(g: &AmplitudeGraph, lambda: &Position) -> Vec<usize> {
    debug_assert_eq!(g.n(), lambda.len());
    (0..lambda.len()).filter(|&i| lambda.values[i].is_positive()).collect()
}

/// The reflection `λ ↦ λ - λ_i·(row i of M)`, applied regardless of sign.
pub fn reflect(g: &AmplitudeGraph, lambda: &Position, i: usize) -> Position {
    let mut values = lambda.values.clone();
    let li = &lambda.values[i];
    values[i] = -li;
    for &j in g.neighbors(i) {
        let d = g.amplitude(i, j) * li;
        values[j] = &values[j] - &d;
    }
    Position { values }
}

pub fn fire(g: &AmplitudeGraph, lambda: &Position, i: usize) -> Result<Position, EngineError> {
    check(g, lambda)?;
    if i >= g.n() {
        return Err(EngineError::NodeOutOfRange(i));
    }
    if !lambda.values[i].is_positive() {
        return Err(EngineError::IllegalFiring(i));
    }
    Ok(reflect(g, lambda, i))
}

/// Fires `fired` in order. On failure reports the 0-based index of the first
/// illegal firing and its node.
pub fn replay(g: &AmplitudeGraph, lambda: &Position, fired: &[usize]) -> Result<Position, EngineError> {
    check(g, lambda)?;
    let mut cur = lambda.clone();
    for (step, &node) in fired.iter().enumerate() {
        if node >= g.n() {
            return Err(EngineError::NodeOutOfRange(node));
        }
        if !cur.values[node].is_positive() {
            return Err(EngineError::IllegalFiringAt { step, node });
        }
        cur = reflect(g, &cur, node);
    }
    Ok(cur)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Policy {
    /// Fire the lowest-index legal node.
    #[default]
    LowestIndex,
    /// Fire a uniformly random legal node from a seeded ChaCha8 stream.
    Random { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlayOptions {
    /// `None` uses [`default_limit`].
    pub limit: Option<usize>,
    pub retain_positions: bool,
    /// Check for a divergence certificate before the first firing.
    pub certify: bool,
}

impl Default for PlayOptions {
    fn default() -> Self {
        PlayOptions { limit: None, retain_positions: false, certify: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameTrace {
    pub start: Position,
    pub fired: Vec<usize>,
    /// Positions after each firing, when requested.
    pub positions: Option<Vec<Position>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Converged { terminal: Position, steps: usize },
    DivergentCertified { certificate: DivergenceCertificate },
    Exhausted { limit: usize, last: Position },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameOutcome {
    pub outcome: Outcome,
    pub trace: GameTrace,
}

impl GameOutcome {
    pub fn is_converged(&self) -> bool {
        matches!(self.outcome, Outcome::Converged { .. })
    }

    /// Terminal position and step count of a converged game.
    pub fn converged(&self) -> Option<(&Position, usize)> {
        match &self.outcome {
            Outcome::Converged { terminal, steps } => Some((terminal, *steps)),
            _ => None,
        }
    }
}

/// Ten times the summed longest-element lengths when every component is
/// admissible, else [`DIVERGENT_STEP_LIMIT`].
pub fn default_limit(g: &AmplitudeGraph) -> usize {
    let mut total = 0;
    for comp in g.connected_components() {
        let sub = g.induced_subgraph(&comp).expect("components are nonempty");
        match recognize(&sub) {
            Ok(Verdict::FiniteType(id)) | Ok(Verdict::ECoxeter(id)) => {
                total += id.longest_length().expect("admissible ids have a length");
            }
            _ => return DIVERGENT_STEP_LIMIT,
        }
    }
    10 * total
}

pub fn play(
    g: &AmplitudeGraph,
    lambda: &Position,
    policy: Policy,
    opts: &PlayOptions,
) -> Result<GameOutcome, EngineError> {
    check(g, lambda)?;
    let limit = opts.limit.unwrap_or_else(|| default_limit(g));
    let mut trace = GameTrace {
        start: lambda.clone(),
        fired: Vec::new(),
        positions: opts.retain_positions.then(Vec::new),
    };
    if opts.certify {
        if let Some(certificate) = certify_divergence(g, lambda) {
            return Ok(GameOutcome { outcome: Outcome::DivergentCertified { certificate }, trace });
        }
    }
    let mut rng = match policy {
        Policy::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        Policy::LowestIndex => None,
    };
    if let Some(fast) = IntGame::new(g, lambda) {
        let outcome = fast.run(g, &mut rng, limit, &mut trace);
        return Ok(GameOutcome { outcome, trace });
    }
    let mut cur = lambda.clone();
    loop {
        let Some(node) = choose(&mut rng, cur.values.iter().map(Scalar::is_positive)) else {
            let steps = trace.fired.len();
            return Ok(GameOutcome { outcome: Outcome::Converged { terminal: cur, steps }, trace });
        };
        if trace.fired.len() == limit {
            return Ok(GameOutcome { outcome: Outcome::Exhausted { limit, last: cur }, trace });
        }
        cur = reflect(g, &cur, node);
        trace.fired.push(node);
        if !cur.values.iter().all(Scalar::is_finite) {
            return Err(EngineError::NonFinite { step: trace.fired.len() });
        }
        if let Some(ps) = &mut trace.positions {
            ps.push(cur.clone());
        }
    }
}

/// Picks the node to fire among the positive ones, or `None` if there is none.
fn choose(rng: &mut Option<ChaCha8Rng>, positive: impl Iterator<Item = bool>) -> Option<usize> {
    match rng {
        None => positive.into_iter().position(|p| p),
        Some(r) => {
            let moves: Vec<usize> = positive.enumerate().filter(|p| p.1).map(|p| p.0).collect();
            (!moves.is_empty()).then(|| moves[r.gen_range(0..moves.len())])
        }
    }
}

/// Exact games on integer graphs from integer positions stay integral, so
/// they run on machine integers, then on big integers once a value would
/// overflow.
struct IntGame {
    m: Vec<Vec<i64>>,
    small: Option<Vec<i64>>,
    big: Vec<BigInt>,
}

impl IntGame {
    fn new(g: &AmplitudeGraph, lambda: &Position) -> Option<Self> {
        if lambda.mode() != Mode::Exact {
            return None;
        }
        let m = g
            .amplitudes()
            .iter()
            .map(|r| r.iter().map(Scalar::to_i64).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        if !lambda.values.iter().all(Scalar::is_integer) {
            return None;
        }
        let small = lambda.values.iter().map(Scalar::to_i64).collect::<Option<Vec<_>>>();
        let big = match small {
            Some(_) => Vec::new(),
            None => lambda
                .values
                .iter()
                .map(|v| v.as_exact().expect("exact").numer().clone())
                .collect(),
        };
        Some(IntGame { m, small, big })
    }

    fn positive(&self, i: usize) -> bool {
        match &self.small {
            Some(v) => v[i] > 0,
            None => self.big[i].is_positive(),
        }
    }

    fn fire(&mut self, g: &AmplitudeGraph, i: usize) {
        if let Some(v) = &mut self.small {
            let li = v[i];
            let mut new = Vec::with_capacity(g.degree(i));
            for &j in g.neighbors(i) {
                match self.m[i][j].checked_mul(li).and_then(|d| v[j].checked_sub(d)) {
                    Some(x) => new.push(x),
                    None => break,
                }
            }
            if new.len() == g.degree(i) {
                for (&j, x) in g.neighbors(i).iter().zip(new) {
                    v[j] = x;
                }
                v[i] = -li;
                return;
            }
            self.big = v.iter().map(|&x| BigInt::from(x)).collect();
            self.small = None;
        }
        let li = self.big[i].clone();
        for &j in g.neighbors(i) {
            self.big[j] -= &li * self.m[i][j];
        }
        self.big[i] = -li;
    }

    fn position(&self) -> Position {
        let values = match &self.small {
            Some(v) => v.iter().map(|&x| Scalar::from_int(Mode::Exact, x)).collect(),
            None => self
                .big
                .iter()
                .map(|x| Scalar::Exact(BigRational::from_integer(x.clone())))
                .collect(),
        };
        Position { values }
    }

    fn run(mut self, g: &AmplitudeGraph, rng: &mut Option<ChaCha8Rng>, limit: usize, trace: &mut GameTrace) -> Outcome {
        loop {
            let Some(node) = choose(rng, (0..g.n()).map(|i| self.positive(i))) else {
                return Outcome::Converged { terminal: self.position(), steps: trace.fired.len() };
            };
            if trace.fired.len() == limit {
                return Outcome::Exhausted { limit, last: self.position() };
            }
            self.fire(g, node);
            trace.fired.push(node);
            if let Some(ps) = &mut trace.positions {
                ps.push(self.position());
            }
        }
    }
}

/// The form `Q = D·B⁻¹` with `B = -Mᵀ` and `D` the positive diagonal
/// symmetrizer (`D = 1` at node 0, `D_jj / D_ii = M_ji / M_ij` along edges).
/// `μᵀQμ` is unchanged by every firing. `Q` is negative definite.
pub fn conserved_form(g: &AmplitudeGraph) -> Result<Vec<Vec<Scalar>>, EngineError> {
    if !g.is_connected() || !g.is_acyclic() {
        return Err(EngineError::NotATree);
    }
    if trichotomy(g)[0].1 != Trichotomy::SubCritical {
        return Err(EngineError::NotSubcritical);
    }
    let n = g.n();
    let mode = g.mode();
    let mut d: Vec<Option<Scalar>> = vec![None; n];
    d[0] = Some(Scalar::one(mode));
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for &j in g.neighbors(i) {
            if d[j].is_none() {
                let r = g.amplitude(j, i) / g.amplitude(i, j);
                d[j] = Some(d[i].as_ref().expect("visited") * &r);
                stack.push(j);
            }
        }
    }
    let b: Vec<Vec<Scalar>> = linalg::transpose(g.amplitudes())
        .into_iter()
        .map(|r| r.into_iter().map(|v| -v).collect())
        .collect();
    let binv = linalg::inverse(&b).ok_or(EngineError::NotSubcritical)?;
    Ok(binv
        .into_iter()
        .zip(d)
        .map(|(row, di)| {
            let di = di.expect("tree is connected");
            row.iter().map(|v| &di * v).collect()
        })
        .collect())
}

/// `μᵀQμ`.
pub fn quadratic_value(q: &[Vec<Scalar>], mu: &Position) -> Scalar {
    linalg::quadratic(q, mu.values())
}
