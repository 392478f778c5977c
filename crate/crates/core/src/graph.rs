//! GCM and E-GCM graphs.
//!
//! An [`AmplitudeGraph`] is a validated amplitude matrix `M` together with the
//! simple graph it induces: nodes `i` and `j` are adjacent exactly when both
//! `M_ij` and `M_ji` are nonzero. Nodes are indexed `0..n`.

use std::collections::VecDeque;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::{Mode, Scalar};

/// Tolerance when matching an amplitude product against `4cos²(π/k)`.
pub const EPS_AMP: f64 = 1e-9;
/// Largest `k` tried when matching `4cos²(π/k)`.
pub const MAX_LABEL: u32 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Gcm,
    Egcm,
}

impl Kind {
    pub fn mode(self) -> Mode {
        match self {
            Kind::Gcm => Mode::Exact,
            Kind::Egcm => Mode::Approx,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("amplitude matrix is empty")]
    Empty,
    #[error("amplitude matrix is not square (row {row} has {len} entries, expected {n})")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("diagonal entry M[{0}][{0}] is not 2")]
    DiagonalNotTwo(usize),
    #[error("off-diagonal entry M[{0}][{1}] is positive")]
    PositiveOffDiagonal(usize, usize),
    #[error("M[{0}][{1}] is nonzero but M[{1}][{0}] is zero")]
    AsymmetricZeroPattern(usize, usize),
    #[error("GCM entry M[{0}][{1}] is not an integer")]
    NonIntegerGcmEntry(usize, usize),
    #[error("amplitude product {2} on edge ({0},{1}) is neither >= 4 nor 4cos^2(pi/k)")]
    IllegalAmplitudeProduct(usize, usize, f64),
    #[error("entry M[{0}][{1}] has the wrong arithmetic mode for a {2:?} graph")]
    ModeMismatch(usize, usize, Kind),
    #[error("empty node subset")]
    EmptySubset,
    #[error("node {0} out of range")]
    NodeOutOfRange(usize),
    #[error("graph JSON: {0}")]
    Json(String),
}

/// Coxeter label `m_ij` of a pair of nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoxeterLabel {
    Finite(u32),
    Infinite,
}

impl CoxeterLabel {
    pub fn finite(self) -> Option<u32> {
        match self {
            CoxeterLabel::Finite(k) => Some(k),
            CoxeterLabel::Infinite => None,
        }
    }
}

impl fmt::Display for CoxeterLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoxeterLabel::Finite(k) => write!(f, "{k}"),
            CoxeterLabel::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for CoxeterLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CoxeterLabel::Finite(k) => s.serialize_u32(*k),
            CoxeterLabel::Infinite => s.serialize_str("inf"),
        }
    }
}

/// `4cos²(π/k)`.
pub fn product_for_label(k: u32) -> f64 {
    let c = (PI / k as f64).cos();
    4.0 * c * c
}

/// Matches a positive amplitude product to a Coxeter label, or `None` when
/// the product is illegal for an E-GCM.
pub fn label_for_product(product: f64) -> Option<CoxeterLabel> {
    if product >= 4.0 - EPS_AMP {
        return Some(CoxeterLabel::Infinite);
    }
    let mut best: Option<(u32, f64)> = None;
    for k in 3..=MAX_LABEL {
        let d = (product - product_for_label(k)).abs();
        if best.map_or(true, |(_, bd)| d < bd) {
            best = Some((k, d));
        }
    }
    match best {
        Some((k, d)) if d <= EPS_AMP => Some(CoxeterLabel::Finite(k)),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeGraph {
    kind: Kind,
    m: Vec<Vec<Scalar>>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl AmplitudeGraph {
    /// Validates an amplitude matrix. Entries must already be in the mode of
    /// `kind` (exact rationals for GCM, floats for E-GCM).
    pub fn validate(matrix: Vec<Vec<Scalar>>, kind: Kind) -> Result<Self, GraphError> {
        let n = matrix.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        for (row, r) in matrix.iter().enumerate() {
            if r.len() != n {
                return Err(GraphError::NotSquare { row, len: r.len(), n });
            }
        }
        let mode = kind.mode();
        let two = Scalar::from_int(mode, 2);
        for i in 0..n {
            for j in 0..n {
                let v = &matrix[i][j];
                if v.mode() != mode {
                    return Err(GraphError::ModeMismatch(i, j, kind));
                }
                if i == j {
                    let ok = match v {
                        Scalar::Exact(_) => *v == two,
                        Scalar::Approx(x) => (x - 2.0).abs() <= EPS_AMP,
                    };
                    if !ok {
                        return Err(GraphError::DiagonalNotTwo(i));
                    }
                    continue;
                }
                if v.is_positive() {
                    return Err(GraphError::PositiveOffDiagonal(i, j));
                }
                if kind == Kind::Gcm && !v.is_integer() {
                    return Err(GraphError::NonIntegerGcmEntry(i, j));
                }
            }
        }
        let mut edges = Vec::new();
        let mut adj = vec![Vec::new(); n];
        for i in 0..n {
            for j in (i + 1)..n {
                let a = !matrix[i][j].is_zero();
                let b = !matrix[j][i].is_zero();
                match (a, b) {
                    (true, false) => return Err(GraphError::AsymmetricZeroPattern(i, j)),
                    (false, true) => return Err(GraphError::AsymmetricZeroPattern(j, i)),
                    (false, false) => {}
                    (true, true) => {
                        if kind == Kind::Egcm {
                            let p = (&matrix[i][j] * &matrix[j][i]).to_f64();
                            if label_for_product(p).is_none() {
                                return Err(GraphError::IllegalAmplitudeProduct(i, j, p));
                            }
                        }
                        edges.push((i, j));
                        adj[i].push(j);
                        adj[j].push(i);
                    }
                }
            }
        }
        Ok(AmplitudeGraph { kind, m: matrix, edges, adj })
    }

    /// Integer GCM from a plain integer matrix.
    pub fn gcm(rows: &[Vec<i64>]) -> Result<Self, GraphError> {
        let m = rows
            .iter()
            .map(|r| r.iter().map(|&v| Scalar::from_int(Mode::Exact, v)).collect())
            .collect();
        Self::validate(m, Kind::Gcm)
    }

    pub fn egcm(rows: &[Vec<f64>]) -> Result<Self, GraphError> {
        let m = rows
            .iter()
            .map(|r| r.iter().map(|&v| Scalar::Approx(v)).collect())
            .collect();
        Self::validate(m, Kind::Egcm)
    }

    pub fn n(&self) -> usize {
        self.m.len()
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn mode(&self) -> Mode {
        self.kind.mode()
    }

    pub fn amplitudes(&self) -> &[Vec<Scalar>] {
        &self.m
    }

    pub fn amplitude(&self, i: usize, j: usize) -> &Scalar {
        &self.m[i][j]
    }

    /// Row `i` of `M`: the change vector of firing node `i`.
    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.m[i]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(&j)
    }

    /// `M_ij · M_ji` as a float.
    pub fn product(&self, i: usize, j: usize) -> f64 {
        (&self.m[i][j] * &self.m[j][i]).to_f64()
    }

    pub fn to_f64_matrix(&self) -> Vec<Vec<f64>> {
        self.m
            .iter()
            .map(|r| r.iter().map(Scalar::to_f64).collect())
            .collect()
    }

    /// Reinterprets the graph in another kind. Every GCM is an E-GCM, so
    /// GCM to E-GCM always succeeds; the reverse requires integer entries.
    pub fn with_kind(&self, kind: Kind) -> Result<Self, GraphError> {
        if kind == self.kind {
            return Ok(self.clone());
        }
        let mode = kind.mode();
        let mut m = Vec::with_capacity(self.n());
        for (i, row) in self.m.iter().enumerate() {
            let mut r = Vec::with_capacity(row.len());
            for (j, v) in row.iter().enumerate() {
                let c = match (kind, v) {
                    (Kind::Gcm, Scalar::Approx(x)) => {
                        let rounded = x.round();
                        if (x - rounded).abs() > EPS_AMP {
                            return Err(GraphError::NonIntegerGcmEntry(i, j));
                        }
                        Scalar::from_int(Mode::Exact, rounded as i64)
                    }
                    _ => v
                        .to_mode(mode)
                        .ok_or(GraphError::ModeMismatch(i, j, kind))?,
                };
                r.push(c);
            }
            m.push(r);
        }
        Self::validate(m, kind)
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    /// Maximal connected node sets, each sorted, ordered by smallest node.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Induced subgraph on `nodes`, reindexed `0..nodes.len()` in the given order.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Result<Self, GraphError> {
        if nodes.is_empty() {
            return Err(GraphError::EmptySubset);
        }
        if let Some(&bad) = nodes.iter().find(|&&i| i >= self.n()) {
            return Err(GraphError::NodeOutOfRange(bad));
        }
        let m = nodes
            .iter()
            .map(|&i| nodes.iter().map(|&j| self.m[i][j].clone()).collect())
            .collect();
        Self::validate(m, self.kind)
    }

    /// `m_ij`: 2 for non-adjacent pairs, `k` when the product is `4cos²(π/k)`,
    /// infinite when the product is at least 4.
    pub fn coxeter_label(&self, i: usize, j: usize) -> CoxeterLabel {
        if !self.is_adjacent(i, j) {
            return CoxeterLabel::Finite(2);
        }
        if self.kind == Kind::Gcm {
            let p = &self.m[i][j] * &self.m[j][i];
            let p = p.to_f64().round() as i64;
            return match p {
                1 => CoxeterLabel::Finite(3),
                2 => CoxeterLabel::Finite(4),
                3 => CoxeterLabel::Finite(6),
                _ => CoxeterLabel::Infinite,
            };
        }
        label_for_product(self.product(i, j)).unwrap_or(CoxeterLabel::Infinite)
    }

    /// True when the graph has no cycles (a forest).
    pub fn is_acyclic(&self) -> bool {
        self.edges.len() + self.connected_components().len() == self.n()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": self.kind,
            "n": self.n(),
            "amplitudes": self
                .m
                .iter()
                .map(|r| r.iter().map(Scalar::to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, GraphError> {
        #[derive(Deserialize)]
        struct Doc {
            kind: Kind,
            n: usize,
            amplitudes: Vec<Vec<serde_json::Value>>,
        }
        let doc: Doc =
            serde_json::from_value(v.clone()).map_err(|e| GraphError::Json(e.to_string()))?;
        if doc.amplitudes.len() != doc.n {
            return Err(GraphError::Json(format!(
                "n = {} but {} rows given",
                doc.n,
                doc.amplitudes.len()
            )));
        }
        let mode = doc.kind.mode();
        let mut m = Vec::with_capacity(doc.n);
        for (i, row) in doc.amplitudes.iter().enumerate() {
            let mut r = Vec::with_capacity(row.len());
            for (j, x) in row.iter().enumerate() {
                r.push(Scalar::from_json(x, mode).ok_or_else(|| {
                    GraphError::Json(format!("entry [{i}][{j}] = {x} is not a {mode} scalar"))
                })?);
            }
            m.push(r);
        }
        Self::validate(m, doc.kind)
    }
}
