//! Edge-colored ranked posets and the M-structure property.
//!
//! For a color `i`, the `i`-components of a poset are the connected pieces
//! left after keeping only covers of color `i`. An element's weight is
//! `m_i(x) = 2ρ_i(x) - l_i(x)`, where `ρ_i` is its rank inside its
//! `i`-component and `l_i` the length of that component. The poset has the
//! M-structure property when every color-`i` cover `s → t` satisfies
//! `wt(s) + (row i of M) = wt(t)`.
//!
//! Colors are 0-based in the library and 1-based in JSON.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::classify::{classify, Classification, Verdict};
use crate::engine::{legal_moves, reflect, Position};
use crate::graph::{AmplitudeGraph, Kind};
use crate::scalar::{Scalar, EPS_ZERO};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PosetError {
    #[error("poset has no elements")]
    Empty,
    #[error("duplicate element id {0}")]
    DuplicateElement(String),
    #[error("cover refers to unknown element {0}")]
    UnknownElement(String),
    #[error("color {color} is outside 1..={n}")]
    ColorOutOfRange { color: i64, n: usize },
    #[error("cover {0} -> {1} is listed twice")]
    DuplicateCover(String, String),
    #[error("cover relation has a cycle")]
    CycleDetected,
    #[error("no rank function: cover {0} -> {1} conflicts with the ranks forced elsewhere")]
    NotRanked(String, String),
    #[error("color-{color} component {component:?} is not ranked")]
    ComponentNotRanked { color: usize, component: Vec<String> },
    #[error("poset has {poset} colors but the graph has {graph} nodes")]
    IndexMismatch { poset: usize, graph: usize },
    #[error("M-structure not verified: {0}")]
    StructureNotVerified(String),
    #[error("descent failed at step {0}")]
    DescentFailed(usize),
    #[error("classifier reports component {0:?} as not of finite type")]
    ClassifierDisagrees(Vec<usize>),
    #[error("poset JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeColoredPoset {
    n: usize,
    ids: Vec<String>,
    /// `(s, t, color)` with element indices and 0-based colors.
    covers: Vec<(usize, usize, usize)>,
    rank: Vec<usize>,
}

/// Union-find over element indices.
fn components(len: usize, edges: impl Iterator<Item = (usize, usize)>) -> Vec<Vec<usize>> {
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    let mut parent: Vec<usize> = (0..len).collect();
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for x in 0..len {
        let r = find(&mut parent, x);
        groups.entry(r).or_default().push(x);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort_by_key(|c| c[0]);
    out
}

impl EdgeColoredPoset {
    /// Validates elements and colored covers (colors 0-based, `< n`).
    pub fn new(
        n: usize,
        ids: Vec<String>,
        covers: Vec<(usize, usize, usize)>,
    ) -> Result<Self, PosetError> {
        let len = ids.len();
        if len == 0 {
            return Err(PosetError::Empty);
        }
        let mut seen = HashSet::new();
        for id in &ids {
            if !seen.insert(id) {
                return Err(PosetError::DuplicateElement(id.clone()));
            }
        }
        let mut pairs = HashSet::new();
        for &(s, t, c) in &covers {
            for x in [s, t] {
                if x >= len {
                    return Err(PosetError::UnknownElement(x.to_string()));
                }
            }
            if c >= n {
                return Err(PosetError::ColorOutOfRange { color: c as i64 + 1, n });
            }
            if !pairs.insert((s, t)) {
                return Err(PosetError::DuplicateCover(ids[s].clone(), ids[t].clone()));
            }
        }

        // Acyclicity (Kahn).
        let mut indeg = vec![0usize; len];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); len];
        for &(s, t, _) in &covers {
            indeg[t] += 1;
            out[s].push(t);
        }
        let mut q: VecDeque<usize> = (0..len).filter(|&x| indeg[x] == 0).collect();
        let mut done = 0;
        while let Some(u) = q.pop_front() {
            done += 1;
            for &v in &out[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    q.push_back(v);
                }
            }
        }
        if done < len {
            return Err(PosetError::CycleDetected);
        }

        let rank = rank_by_propagation(len, &covers)
            .map_err(|(s, t)| PosetError::NotRanked(ids[s].clone(), ids[t].clone()))?;
        Ok(EdgeColoredPoset { n, ids, covers, rank })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn covers(&self) -> &[(usize, usize, usize)] {
        &self.covers
    }

    pub fn rank(&self, x: usize) -> usize {
        self.rank[x]
    }

    /// `l`, the largest rank.
    pub fn length(&self) -> usize {
        *self.rank.iter().max().expect("nonempty")
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    /// Components after keeping only covers whose color is in `colors`.
    pub fn j_components(&self, colors: &[usize]) -> Vec<Vec<usize>> {
        components(
            self.len(),
            self.covers
                .iter()
                .filter(|c| colors.contains(&c.2))
                .map(|&(s, t, _)| (s, t)),
        )
    }

    /// Weight of element `x`: `m_i(x) = 2ρ_i(x) - l_i(x)` for every color.
    pub fn weight(&self, x: usize) -> Result<Vec<i64>, PosetError> {
        (0..self.n)
            .map(|i| {
                let comp = self
                    .j_components(&[i])
                    .into_iter()
                    .find(|c| c.contains(&x))
                    .expect("every element is in a component");
                let (rho, l) = self.component_rank(i, &comp, x)?;
                Ok(2 * rho as i64 - l as i64)
            })
            .collect()
    }

    /// `(ρ_i(x), l_i)` computed inside the color-`i` component itself.
    fn component_rank(&self, color: usize, comp: &[usize], x: usize) -> Result<(usize, usize), PosetError> {
        let local: HashMap<usize, usize> = comp.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        let covers: Vec<(usize, usize, usize)> = self
            .covers
            .iter()
            .filter(|c| c.2 == color && local.contains_key(&c.0))
            .map(|&(s, t, c)| (local[&s], local[&t], c))
            .collect();
        let r = rank_by_propagation(comp.len(), &covers).map_err(|_| PosetError::ComponentNotRanked {
            color,
            component: comp.iter().map(|&e| self.ids[e].clone()).collect(),
        })?;
        Ok((r[local[&x]], *r.iter().max().expect("nonempty")))
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, PosetError> {
        let err = |m: &str| PosetError::Json(m.to_string());
        let n = v.get("n").and_then(|x| x.as_u64()).ok_or_else(|| err("missing n"))? as usize;
        let elements = v
            .get("elements")
            .and_then(|x| x.as_array())
            .ok_or_else(|| err("missing elements"))?;
        let ids: Vec<String> = elements.iter().map(id_string).collect();
        let lookup: HashMap<&str, usize> =
            ids.iter().enumerate().map(|(k, s)| (s.as_str(), k)).collect();
        let mut covers = Vec::new();
        for c in v
            .get("covers")
            .and_then(|x| x.as_array())
            .ok_or_else(|| err("missing covers"))?
        {
            let a = c
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| err("each cover is [s, t, color]"))?;
            let end = |x: &serde_json::Value| {
                let s = id_string(x);
                lookup.get(s.as_str()).copied().ok_or(PosetError::UnknownElement(s))
            };
            let color = a[2].as_i64().ok_or_else(|| err("color must be an integer"))?;
            if color < 1 || color as usize > n {
                return Err(PosetError::ColorOutOfRange { color, n });
            }
            covers.push((end(&a[0])?, end(&a[1])?, color as usize - 1));
        }
        if lookup.len() != ids.len() {
            let mut seen = HashSet::new();
            let dup = ids.iter().find(|x| !seen.insert(*x)).expect("duplicate exists");
            return Err(PosetError::DuplicateElement(dup.clone()));
        }
        Self::new(n, ids, covers)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "elements": self.ids,
            "covers": self
                .covers
                .iter()
                .map(|&(s, t, c)| serde_json::json!([self.ids[s], self.ids[t], c + 1]))
                .collect::<Vec<_>>(),
        })
    }
}

fn id_string(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Ranks forced by `rank(t) = rank(s) + 1`, shifted so each connected piece
/// starts at 0. On conflict returns the offending cover.
fn rank_by_propagation(len: usize, covers: &[(usize, usize, usize)]) -> Result<Vec<usize>, (usize, usize)> {
    let mut adj: Vec<Vec<(usize, i64, usize)>> = vec![Vec::new(); len];
    for (k, &(s, t, _)) in covers.iter().enumerate() {
        adj[s].push((t, 1, k));
        adj[t].push((s, -1, k));
    }
    let mut r: Vec<Option<i64>> = vec![None; len];
    for start in 0..len {
        if r[start].is_some() {
            continue;
        }
        r[start] = Some(0);
        let mut comp = vec![start];
        let mut q = VecDeque::from([start]);
        while let Some(u) = q.pop_front() {
            let ru = r[u].expect("assigned");
            for &(v, d, k) in &adj[u] {
                match r[v] {
                    None => {
                        r[v] = Some(ru + d);
                        comp.push(v);
                        q.push_back(v);
                    }
                    Some(rv) if rv != ru + d => return Err((covers[k].0, covers[k].1)),
                    _ => {}
                }
            }
        }
        let lo = comp.iter().map(|&x| r[x].expect("assigned")).min().expect("nonempty");
        for &x in &comp {
            r[x] = Some(r[x].expect("assigned") - lo);
        }
    }
    Ok(r.into_iter().map(|x| x.expect("assigned") as usize).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    /// Index of the cover in the poset's cover list.
    pub cover: usize,
    pub source: String,
    pub target: String,
    /// 0-based color.
    pub color: usize,
    pub expected: Vec<f64>,
    pub actual: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureReport {
    pub ok: bool,
    /// Sorted by cover index.
    pub violations: Vec<Violation>,
    /// 0-based colors that appear on some cover.
    pub colors_used: Vec<usize>,
    /// One flag per connected component of the graph.
    pub sufficiently_surjective: Vec<bool>,
    pub surjective: bool,
    pub ranked_component_failures: Vec<(usize, Vec<String>)>,
}

impl StructureReport {
    pub fn is_sufficiently_surjective(&self) -> bool {
        self.sufficiently_surjective.iter().all(|&b| b)
    }
}

fn close(a: &Scalar, b: &Scalar) -> bool {
    match (a, b) {
        (Scalar::Exact(_), Scalar::Exact(_)) => a == b,
        _ => (a.to_f64() - b.to_f64()).abs() <= 1e3 * EPS_ZERO,
    }
}

/// Checks `wt(s) + (row i of M) = wt(t)` on every cover.
pub fn check_m_structure(p: &EdgeColoredPoset, g: &AmplitudeGraph) -> Result<StructureReport, PosetError> {
    if p.n() != g.n() {
        return Err(PosetError::IndexMismatch { poset: p.n(), graph: g.n() });
    }
    let mode = g.mode();
    let mut weights: Vec<Option<Vec<i64>>> = Vec::with_capacity(p.len());
    let mut failures = Vec::new();
    for x in 0..p.len() {
        match p.weight(x) {
            Ok(w) => weights.push(Some(w)),
            Err(PosetError::ComponentNotRanked { color, component }) => {
                if !failures.iter().any(|(c, comp)| *c == color && *comp == component) {
                    failures.push((color, component));
                }
                weights.push(None);
            }
            Err(e) => return Err(e),
        }
    }
    let mut violations = Vec::new();
    for (k, &(s, t, i)) in p.covers().iter().enumerate() {
        let (Some(ws), Some(wt)) = (&weights[s], &weights[t]) else { continue };
        let expected: Vec<Scalar> = ws
            .iter()
            .zip(g.row(i))
            .map(|(&w, a)| &Scalar::from_int(mode, w) + a)
            .collect();
        let matches = expected
            .iter()
            .zip(wt)
            .all(|(e, &w)| close(e, &Scalar::from_int(mode, w)));
        if !matches {
            violations.push(Violation {
                cover: k,
                source: p.ids[s].clone(),
                target: p.ids[t].clone(),
                color: i,
                expected: expected.iter().map(Scalar::to_f64).collect(),
                actual: wt.clone(),
            });
        }
    }
    let mut colors_used: Vec<usize> = p.covers().iter().map(|c| c.2).collect();
    colors_used.sort_unstable();
    colors_used.dedup();
    let sufficiently_surjective = g
        .connected_components()
        .iter()
        .map(|comp| comp.iter().any(|j| colors_used.contains(j)))
        .collect();
    Ok(StructureReport {
        ok: violations.is_empty() && failures.is_empty(),
        violations,
        surjective: colors_used.len() == g.n(),
        colors_used,
        sufficiently_surjective,
        ranked_component_failures: failures,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescentStep {
    pub element: String,
    /// 0-based color fired to reach the next element, if any.
    pub fired: Option<usize>,
    pub weight: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Inference {
    pub classification: Classification,
    pub descent: Vec<DescentStep>,
}

/// For a verified M-structure poset with a sufficiently surjective coloring,
/// classifies the graph (which must be of finite type) and replays the
/// rank descent from a top element: the game from `wt(t_0)` is played, and
/// each firing of color `i` moves to the element of `comp_i(t)` at the
/// mirrored rank `l_i - ρ_i(t)` (lowest id on ties), whose weight must be
/// the new position.
pub fn infer_finite_type(p: &EdgeColoredPoset, g: &AmplitudeGraph) -> Result<Inference, PosetError> {
    let report = check_m_structure(p, g)?;
    if !report.ok {
        return Err(PosetError::StructureNotVerified(format!(
            "{} violation(s), {} unranked component(s)",
            report.violations.len(),
            report.ranked_component_failures.len()
        )));
    }
    if !report.is_sufficiently_surjective() {
        return Err(PosetError::StructureNotVerified(
            "coloring is not sufficiently surjective".into(),
        ));
    }
    if p.covers().is_empty() {
        return Err(PosetError::StructureNotVerified("poset has no covers".into()));
    }
    let classification = classify(g);
    for c in &classification.components {
        let finite = match g.kind() {
            Kind::Gcm => matches!(c.verdict, Verdict::FiniteType(_)),
            Kind::Egcm => c.verdict.is_admissible(),
        };
        if !finite {
            return Err(PosetError::ClassifierDisagrees(c.nodes.clone()));
        }
    }

    let l = p.length();
    let mut t = (0..p.len()).find(|&x| p.rank(x) == l).expect("some element has rank l");
    let mut w = p.weight(t)?;
    let mut pos = Position::from_ints(g.mode(), &w);
    let mut descent = Vec::new();
    for step in 0..=l {
        let Some(&i) = legal_moves(g, &pos).first() else {
            descent.push(DescentStep { element: p.ids[t].clone(), fired: None, weight: w });
            return Ok(Inference { classification, descent });
        };
        descent.push(DescentStep { element: p.ids[t].clone(), fired: Some(i), weight: w.clone() });
        let comp = p
            .j_components(&[i])
            .into_iter()
            .find(|c| c.contains(&t))
            .expect("every element is in a component");
        let (rho, li) = p.component_rank(i, &comp, t)?;
        let target = li - rho;
        let mut candidates = Vec::new();
        for &x in &comp {
            if p.rank(x) < p.rank(t) && p.component_rank(i, &comp, x)?.0 == target {
                candidates.push(x);
            }
        }
        let next = *candidates.iter().min().ok_or(PosetError::DescentFailed(step))?;
        pos = reflect(g, &pos, i);
        w = p.weight(next)?;
        if Position::from_ints(g.mode(), &w)
            .values()
            .iter()
            .zip(pos.values())
            .any(|(a, b)| !close(a, b))
        {
            return Err(PosetError::DescentFailed(step));
        }
        t = next;
    }
    Err(PosetError::DescentFailed(l + 1))
}
