//! Structural recognition of admissible graphs.
//!
//! A connected GCM graph is admissible iff it is a Dynkin diagram of finite
//! type; a connected E-GCM graph iff it is an E-Coxeter graph. Recognition
//! walks a fixed decision tree (products, cycles, branch nodes, labeled
//! edges, leg lengths) and names either the type or an inadmissible catalog
//! graph that the input contains or dominates.

use std::collections::VecDeque;

use serde::Serialize;

use crate::catalog::CatalogId;
use crate::engine::{play, Outcome, PlayOptions, Policy, Position};
use crate::graph::{AmplitudeGraph, CoxeterLabel, Kind};
use crate::spectral::{certify_divergence, trichotomy, Trichotomy};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClassifyError {
    #[error("graph is not connected")]
    NotConnected,
    #[error("budget {budget} is below the longest game length {needed}")]
    BudgetExceeded { needed: usize, budget: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// The graph is, contains, or dominates this inadmissible catalog graph.
    Catalog(CatalogId),
    /// An edge whose amplitude product is at least 4.
    Edge { i: usize, j: usize, product: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    FiniteType(CatalogId),
    ECoxeter(CatalogId),
    Inadmissible(Witness),
}

impl Verdict {
    pub fn is_admissible(&self) -> bool {
        !matches!(self, Verdict::Inadmissible(_))
    }

    /// The named type, or the catalog witness of an inadmissible verdict.
    pub fn id(&self) -> Option<CatalogId> {
        match self {
            Verdict::FiniteType(id) | Verdict::ECoxeter(id) => Some(*id),
            Verdict::Inadmissible(Witness::Catalog(id)) => Some(*id),
            Verdict::Inadmissible(Witness::Edge { .. }) => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Verdict::FiniteType(id) => serde_json::json!({"verdict": "FiniteType", "id": id.to_string()}),
            Verdict::ECoxeter(id) => serde_json::json!({"verdict": "ECoxeter", "id": id.to_string()}),
            Verdict::Inadmissible(Witness::Catalog(id)) => serde_json::json!({
                "verdict": "Inadmissible",
                "witness": {"catalog": id.to_string()},
            }),
            Verdict::Inadmissible(Witness::Edge { i, j, product }) => serde_json::json!({
                "verdict": "Inadmissible",
                "witness": {"edge": [i + 1, j + 1], "product": product},
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentClass {
    pub nodes: Vec<usize>,
    pub verdict: Verdict,
    pub trichotomy: Trichotomy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub components: Vec<ComponentClass>,
}

impl Classification {
    pub fn all_admissible(&self) -> bool {
        self.components.iter().all(|c| c.verdict.is_admissible())
    }
}

fn bfs_parents(g: &AmplitudeGraph, s: usize) -> (Vec<usize>, Vec<usize>) {
    let n = g.n();
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    dist[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &v in g.neighbors(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                parent[v] = u;
                q.push_back(v);
            }
        }
    }
    (dist, parent)
}

/// Nodes on the tree path from `s` to `t`, inclusive.
fn tree_path(g: &AmplitudeGraph, s: usize, t: usize) -> Vec<usize> {
    let (_, parent) = bfs_parents(g, t);
    let mut out = vec![s];
    let mut u = s;
    while u != t {
        u = parent[u];
        out.push(u);
    }
    out
}

/// Length of a shortest cycle.
fn girth(g: &AmplitudeGraph) -> usize {
    let n = g.n();
    let mut best = usize::MAX;
    for s in 0..n {
        let (dist, parent) = bfs_parents(g, s);
        for &(u, v) in g.edges() {
            if dist[u] != usize::MAX && parent[u] != v && parent[v] != u {
                best = best.min(dist[u] + dist[v] + 1);
            }
        }
    }
    best
}

fn is_int(g: &AmplitudeGraph, i: usize, j: usize, v: f64) -> bool {
    g.amplitude(i, j).to_f64() == v
}

fn neg_int(g: &AmplitudeGraph, i: usize, j: usize) -> u32 {
    (-g.amplitude(i, j).to_f64()) as u32
}

fn cycle_witness(g: &AmplitudeGraph) -> CatalogId {
    let gcm = g.kind() == Kind::Gcm;
    if gcm && g.n() == 3 && g.edges().len() == 3 {
        let plain: Vec<(usize, usize)> =
            g.edges().iter().copied().filter(|&(i, j)| g.product(i, j) == 1.0).collect();
        if plain.len() == 1 || plain.len() == 2 {
            let (a, b) = plain[0];
            let c = 3 - a - b;
            return CatalogId::SmallCycle {
                p1: neg_int(g, a, c),
                q1: neg_int(g, c, a),
                p2: neg_int(g, b, c),
                q2: neg_int(g, c, b),
            };
        }
    }
    let k = girth(g) - 1;
    if gcm {
        CatalogId::AffA(k)
    } else {
        CatalogId::CalAffA(k)
    }
}

fn g2_witness(g: &AmplitudeGraph, u: usize, v: usize) -> CatalogId {
    if g.kind() == Kind::Egcm {
        return CatalogId::CalAffG2;
    }
    let path = if let Some(&w) = g.neighbors(v).iter().find(|&&w| w != u) {
        [u, v, w]
    } else {
        let w = *g.neighbors(u).iter().find(|&&w| w != v).expect("n >= 3 and connected");
        [v, u, w]
    };
    let sub = g.induced_subgraph(&path).expect("valid subset");
    for variant in 1..=6 {
        let id = CatalogId::AffG2(variant);
        if id.build().expect("valid variant") == sub {
            return id;
        }
    }
    if is_int(g, path[0], path[1], -1.0) {
        CatalogId::AffG2(1)
    } else {
        CatalogId::AffG2(4)
    }
}

/// Recognizes a connected graph.
pub fn recognize(g: &AmplitudeGraph) -> Result<Verdict, ClassifyError> {
    if !g.is_connected() {
        return Err(ClassifyError::NotConnected);
    }
    let n = g.n();
    let gcm = g.kind() == Kind::Gcm;
    let good = |gid: CatalogId, eid: CatalogId| {
        Ok(if gcm { Verdict::FiniteType(gid) } else { Verdict::ECoxeter(eid) })
    };
    let bad = |gid: CatalogId, eid: CatalogId| {
        Ok(Verdict::Inadmissible(Witness::Catalog(if gcm { gid } else { eid })))
    };
    if n == 1 {
        return good(CatalogId::A(1), CatalogId::CalA(1));
    }

    let mut labeled = Vec::new();
    for &(i, j) in g.edges() {
        match g.coxeter_label(i, j) {
            CoxeterLabel::Infinite => {
                return Ok(Verdict::Inadmissible(Witness::Edge { i, j, product: g.product(i, j) }))
            }
            CoxeterLabel::Finite(m) if m > 3 => labeled.push((i, j, m)),
            _ => {}
        }
    }

    if !g.is_acyclic() {
        return Ok(Verdict::Inadmissible(Witness::Catalog(cycle_witness(g))));
    }

    if (0..n).any(|i| g.degree(i) >= 4) {
        return bad(CatalogId::AffD(4), CatalogId::CalAffD(4));
    }
    let branch: Vec<usize> = (0..n).filter(|&i| g.degree(i) == 3).collect();
    if branch.len() >= 2 {
        let mut d = usize::MAX;
        for (k, &a) in branch.iter().enumerate() {
            let (dist, _) = bfs_parents(g, a);
            for &b in &branch[k + 1..] {
                d = d.min(dist[b]);
            }
        }
        return bad(CatalogId::AffD(d + 4), CatalogId::CalAffD(d + 4));
    }

    if n == 2 {
        return match labeled.first() {
            None => good(CatalogId::A(2), CatalogId::CalA(2)),
            Some(&(_, _, 4)) if gcm => good(CatalogId::B(2), CatalogId::B(2)),
            Some(&(_, _, _)) if gcm => good(CatalogId::G2, CatalogId::G2),
            Some(&(_, _, m)) => good(CatalogId::G2, CatalogId::CalI2(m)),
        };
    }

    if let Some(&(u, v, _)) = labeled.iter().find(|e| e.2 >= 6) {
        return Ok(Verdict::Inadmissible(Witness::Catalog(g2_witness(g, u, v))));
    }

    if labeled.len() >= 2 {
        // The closest pair of labeled edges spans a C~ path.
        let mut best: Option<Vec<usize>> = None;
        for (k, &(a, b, _)) in labeled.iter().enumerate() {
            for &(c, d, _) in &labeled[k + 1..] {
                let mut ends = (a, c);
                let mut far = 0;
                for x in [a, b] {
                    let (dist, _) = bfs_parents(g, x);
                    for y in [c, d] {
                        if dist[y] > far {
                            far = dist[y];
                            ends = (x, y);
                        }
                    }
                }
                let p = tree_path(g, ends.0, ends.1);
                if best.as_ref().map_or(true, |q| p.len() < q.len()) {
                    best = Some(p);
                }
            }
        }
        let q = best.expect("two labeled edges");
        let k = q.len() - 1;
        if !gcm {
            return bad(CatalogId::CalAffC(k), CatalogId::CalAffC(k));
        }
        let left_one = is_int(g, q[0], q[1], -1.0);
        let right_two = is_int(g, q[k], q[k - 1], -2.0);
        let id = match (left_one, right_two) {
            (true, false) => CatalogId::AffBprime(k),
            (false, true) => CatalogId::AffC(k),
            _ => CatalogId::AffCprime(k),
        };
        return Ok(Verdict::Inadmissible(Witness::Catalog(id)));
    }

    if let (Some(&(a, b, _)), Some(&c)) = (labeled.first(), branch.first()) {
        let (dist, _) = bfs_parents(g, c);
        let (u, v) = if dist[a] < dist[b] { (a, b) } else { (b, a) };
        let k = dist[v] + 2;
        let gid = if is_int(g, u, v, -2.0) {
            CatalogId::AffB(k)
        } else {
            CatalogId::AffCdprime(k)
        };
        return bad(gid, CatalogId::CalAffB(k));
    }

    if let Some(&(a, b, m)) = labeled.first() {
        // A path with one labeled edge, oriented so the edge sits nearer the start.
        let start = (0..n).find(|&i| g.degree(i) == 1).expect("paths have leaves");
        let end = (0..n).rev().find(|&i| g.degree(i) == 1).expect("paths have leaves");
        let mut p = tree_path(g, start, end);
        let pos = |p: &[usize]| p.iter().position(|&x| x == a).min(p.iter().position(|&x| x == b));
        let mut e = pos(&p).expect("edge on path");
        if e > n - 2 - e {
            p.reverse();
            e = n - 2 - e;
        }
        if m == 4 {
            if e == 0 {
                return if is_int(g, p[1], p[0], -2.0) {
                    good(CatalogId::B(n), CatalogId::CalB(n))
                } else {
                    good(CatalogId::C(n), CatalogId::CalB(n))
                };
            }
            if e == 1 && n == 4 {
                return good(CatalogId::F4, CatalogId::CalF4);
            }
            // A five-node window with the labeled edge at positions (1, 2).
            let w = if e == 1 {
                [p[0], p[1], p[2], p[3], p[4]]
            } else {
                [p[e + 2], p[e + 1], p[e], p[e - 1], p[e - 2]]
            };
            let gid = if is_int(g, w[1], w[2], -2.0) {
                CatalogId::AffF4
            } else {
                CatalogId::AffFprime4
            };
            return bad(gid, CatalogId::CalAffF4);
        }
        // m == 5; only E-GCM graphs get here.
        return match (e, n) {
            (0, 3) => good(CatalogId::CalH3, CatalogId::CalH3),
            (0, 4) => good(CatalogId::CalH4, CatalogId::CalH4),
            (0, _) => bad(CatalogId::CalAffH4, CatalogId::CalAffH4),
            _ => bad(CatalogId::CalAffH3, CatalogId::CalAffH3),
        };
    }

    let Some(&c) = branch.first() else {
        return good(CatalogId::A(n), CatalogId::CalA(n));
    };
    let (dist, parent) = bfs_parents(g, c);
    let mut legs: Vec<usize> = g
        .neighbors(c)
        .iter()
        .map(|&h| {
            (0..n)
                .filter(|&x| {
                    let mut u = x;
                    while dist[u] > 1 {
                        u = parent[u];
                    }
                    u == h
                })
                .count()
        })
        .collect();
    legs.sort_unstable();
    match (legs[0], legs[1], legs[2]) {
        (1, 1, x) => good(CatalogId::D(x + 3), CatalogId::CalD(x + 3)),
        (1, 2, 2) => good(CatalogId::E6, CatalogId::CalE6),
        (1, 2, 3) => good(CatalogId::E7, CatalogId::CalE7),
        (1, 2, 4) => good(CatalogId::E8, CatalogId::CalE8),
        (1, 2, _) => bad(CatalogId::AffE8, CatalogId::CalAffE8),
        (1, _, _) => bad(CatalogId::AffE7, CatalogId::CalAffE7),
        _ => bad(CatalogId::AffE6, CatalogId::CalAffE6),
    }
}

/// Verdict and trichotomy of every connected component. Edge witnesses use
/// the node numbering of `g`.
pub fn classify(g: &AmplitudeGraph) -> Classification {
    let tri = trichotomy(g);
    let components = tri
        .into_iter()
        .map(|(nodes, trichotomy)| {
            let sub = g.induced_subgraph(&nodes).expect("components are nonempty");
            let verdict = match recognize(&sub).expect("components are connected") {
                Verdict::Inadmissible(Witness::Edge { i, j, product }) => {
                    Verdict::Inadmissible(Witness::Edge { i: nodes[i], j: nodes[j], product })
                }
                v => v,
            };
            ComponentClass { nodes, verdict, trichotomy }
        })
        .collect();
    Classification { components }
}

pub fn is_admissible(g: &AmplitudeGraph) -> Result<(bool, Verdict), ClassifyError> {
    let v = recognize(g)?;
    Ok((v.is_admissible(), v))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Empirical {
    /// Every fundamental-position game converged.
    AllConverge,
    /// Some game ran out of steps and a certificate proves it never ends.
    Divergent,
    /// Some game ran out of steps without a certificate.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossReport {
    pub verdict: Verdict,
    pub trichotomy: Trichotomy,
    pub empirical: Empirical,
    pub agree: bool,
}

/// Compares structural recognition, the spectral trichotomy and play from
/// every fundamental position with step limit `budget`.
pub fn cross_validate(g: &AmplitudeGraph, budget: usize) -> Result<CrossReport, ClassifyError> {
    let verdict = recognize(g)?;
    if let Some(needed) = verdict.is_admissible().then(|| verdict.id()).flatten().and_then(|id| id.longest_length()) {
        if needed > budget {
            return Err(ClassifyError::BudgetExceeded { needed, budget });
        }
    }
    let tri = trichotomy(g)[0].1;
    let opts = PlayOptions { limit: Some(budget), retain_positions: false, certify: false };
    let (mut divergent, mut inconclusive) = (false, false);
    for i in 0..g.n() {
        let omega = Position::fundamental(g.mode(), g.n(), i);
        let converged = matches!(
            play(g, &omega, Policy::LowestIndex, &opts).map(|o| o.outcome),
            Ok(Outcome::Converged { .. })
        );
        if !converged {
            if certify_divergence(g, &omega).is_some() {
                divergent = true;
            } else {
                inconclusive = true;
            }
        }
    }
    let empirical = if divergent {
        Empirical::Divergent
    } else if inconclusive {
        Empirical::Inconclusive
    } else {
        Empirical::AllConverge
    };
    let adm = verdict.is_admissible();
    let agree = empirical != Empirical::Inconclusive
        && adm == (tri == Trichotomy::SubCritical)
        && adm == (empirical == Empirical::AllConverge);
    Ok(CrossReport { verdict, trichotomy: tri, empirical, agree })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: CatalogId) -> Verdict {
        recognize(&id.build().unwrap()).unwrap()
    }

    #[test]
    fn e6_round_trip() {
        assert_eq!(rec(CatalogId::E6), Verdict::FiniteType(CatalogId::E6));
    }

    #[test]
    fn doubly_labeled_path_is_c_tilde() {
        let g = AmplitudeGraph::egcm(&[
            vec![2.0, -2f64.sqrt(), 0.0],
            vec![-2f64.sqrt(), 2.0, -2f64.sqrt()],
            vec![0.0, -2f64.sqrt(), 2.0],
        ])
        .unwrap();
        assert_eq!(
            recognize(&g).unwrap(),
            Verdict::Inadmissible(Witness::Catalog(CatalogId::CalAffC(2)))
        );
    }

    #[test]
    fn triangle_is_a_tilde() {
        assert_eq!(
            rec(CatalogId::CalAffA(2)),
            Verdict::Inadmissible(Witness::Catalog(CatalogId::CalAffA(2)))
        );
    }

    #[test]
    fn admissibility_examples() {
        assert!(is_admissible(&CatalogId::B(2).build().unwrap()).unwrap().0);
        let (ok, v) = is_admissible(&CatalogId::CalAffA(1).build().unwrap()).unwrap();
        assert!(!ok);
        assert!(matches!(v, Verdict::Inadmissible(Witness::Edge { i: 0, j: 1, .. })));
        assert_eq!(rec(CatalogId::CalH3), Verdict::ECoxeter(CatalogId::CalH3));
    }

    #[test]
    fn not_connected() {
        let g = AmplitudeGraph::gcm(&[vec![2, 0], vec![0, 2]]).unwrap();
        assert_eq!(recognize(&g), Err(ClassifyError::NotConnected));
        let c = classify(&g);
        assert_eq!(c.components.len(), 2);
        assert!(c.all_admissible());
    }

    #[test]
    fn b_versus_c_by_orientation() {
        assert_eq!(rec(CatalogId::B(4)), Verdict::FiniteType(CatalogId::B(4)));
        assert_eq!(rec(CatalogId::C(4)), Verdict::FiniteType(CatalogId::C(4)));
        let e = CatalogId::B(4).build().unwrap().with_kind(Kind::Egcm).unwrap();
        assert_eq!(recognize(&e).unwrap(), Verdict::ECoxeter(CatalogId::CalB(4)));
    }

    #[test]
    fn cross_validate_small() {
        let r = cross_validate(&CatalogId::A(1).build().unwrap(), 10).unwrap();
        assert!(r.agree);
        assert_eq!(r.empirical, Empirical::AllConverge);
        assert_eq!(
            cross_validate(&CatalogId::E8.build().unwrap(), 50),
            Err(ClassifyError::BudgetExceeded { needed: 120, budget: 50 })
        );
        let r = cross_validate(&CatalogId::AffG2(3).build().unwrap(), 200).unwrap();
        assert!(r.agree);
        assert_eq!(r.empirical, Empirical::Divergent);
    }
}
