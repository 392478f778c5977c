//! Fixtures shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use numgame_core::{AmplitudeGraph, CatalogId, Mode, Position};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn build(id: CatalogId) -> AmplitudeGraph {
    id.build().unwrap_or_else(|e| panic!("{id}: {e}"))
}

/// Finite-type ids with at most `max_rank` nodes.
pub fn finite_type_ids(max_rank: usize) -> Vec<CatalogId> {
    use CatalogId::*;
    let mut v = Vec::new();
    for n in 1..=max_rank {
        v.push(A(n));
        if n >= 2 {
            v.push(B(n));
        }
        if n >= 3 {
            v.push(C(n));
        }
        if n >= 4 {
            v.push(D(n));
        }
    }
    for (id, n) in [(E6, 6), (E7, 7), (E8, 8), (F4, 4), (G2, 2)] {
        if n <= max_rank {
            v.push(id);
        }
    }
    v
}

/// E-Coxeter ids with at most `max_rank` nodes, plus a spread of dihedral labels.
pub fn ecoxeter_ids(max_rank: usize) -> Vec<CatalogId> {
    use CatalogId::*;
    let mut v = Vec::new();
    for n in 1..=max_rank {
        v.push(CalA(n));
        if n >= 3 {
            v.push(CalB(n));
        }
        if n >= 4 {
            v.push(CalD(n));
        }
    }
    for (id, n) in [(CalE6, 6), (CalE7, 7), (CalE8, 8), (CalF4, 4), (CalH3, 3), (CalH4, 4)] {
        if n <= max_rank {
            v.push(id);
        }
    }
    v.extend([4, 5, 6, 7, 8, 10, 12, 30].map(CalI2));
    v
}

/// Every affine family up to the given rank parameter, both regimes.
pub fn affine_ids(max_rank: usize) -> Vec<CatalogId> {
    use CatalogId::*;
    let mut v = Vec::new();
    for n in 1..=max_rank {
        v.push(AffA(n));
        v.push(CalAffA(n));
        if n >= 2 {
            v.extend([AffBprime(n), AffC(n), AffCprime(n), CalAffC(n)]);
        }
        if n >= 3 {
            v.extend([AffB(n), AffCdprime(n), CalAffB(n)]);
        }
        if n >= 4 {
            v.extend([AffD(n), CalAffD(n)]);
        }
    }
    v.extend([AffE6, AffE7, AffE8, AffF4, AffFprime4]);
    v.extend((1..=6).map(AffG2));
    v.extend([
        SmallCycle { p1: 1, q1: 1, p2: 1, q2: 1 },
        SmallCycle { p1: 1, q1: 2, p2: 1, q2: 3 },
        SmallCycle { p1: 2, q1: 1, p2: 1, q2: 2 },
        SmallCycle { p1: 3, q1: 1, p2: 3, q2: 1 },
    ]);
    v.extend([CalAffE6, CalAffE7, CalAffE8, CalAffF4, CalAffG2, CalAffH3, CalAffH4]);
    v
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_ints(r: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> Vec<i64> {
    (0..n).map(|_| r.gen_range(lo..=hi)).collect()
}

pub fn ints(p: &Position) -> Vec<i64> {
    p.to_f64().iter().map(|&x| {
        assert_eq!(x, x.round(), "{x} is not an integer");
        x as i64
    }).collect()
}

pub fn exact(v: &[i64]) -> Position {
    Position::from_ints(Mode::Exact, v)
}

/// Plain integer matrix of a GCM graph.
pub fn int_matrix(g: &AmplitudeGraph) -> Vec<Vec<i64>> {
    g.to_f64_matrix().iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect()
}

/// Integer reflection `λ_j ↦ λ_j - M_ij λ_i`, written out with no library help.
pub fn int_reflect(m: &[Vec<i64>], lam: &[i64], i: usize) -> Vec<i64> {
    let li = lam[i];
    lam.iter().enumerate().map(|(j, &x)| x - m[i][j] * li).collect()
}

/// Breadth-first depths of the orbit of `seed` under the integer reflections.
pub fn int_orbit_depths(m: &[Vec<i64>], seed: &[i64]) -> HashMap<Vec<i64>, usize> {
    let mut depth = HashMap::from([(seed.to_vec(), 0)]);
    let mut frontier = vec![seed.to_vec()];
    let mut d = 0;
    while !frontier.is_empty() {
        d += 1;
        let mut next = Vec::new();
        for p in &frontier {
            for i in 0..m.len() {
                let q = int_reflect(m, p, i);
                if !depth.contains_key(&q) {
                    depth.insert(q.clone(), d);
                    next.push(q);
                }
            }
        }
        frontier = next;
        assert!(depth.len() < 1_000_000, "orbit too large for the test oracle");
    }
    depth
}

/// The lowest-index game with plain integers: (terminal, steps).
pub fn int_game(m: &[Vec<i64>], start: &[i64], limit: usize) -> Option<(Vec<i64>, usize)> {
    let mut cur = start.to_vec();
    for steps in 0..=limit {
        match cur.iter().position(|&x| x > 0) {
            None => return Some((cur, steps)),
            Some(i) => cur = int_reflect(m, &cur, i),
        }
    }
    None
}

/// Words of every length up to `max_len` over `k` letters.
pub fn all_words(k: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| (0..k).map(move |i| {
                let mut v = w.clone();
                v.push(i);
                v
            }))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Largest entrywise gap after scaling both vectors to max entry 1.
pub fn max_norm_rel_err(a: &[f64], b: &[f64]) -> f64 {
    let ma = a.iter().cloned().fold(0.0, f64::max);
    let mb = b.iter().cloned().fold(0.0, f64::max);
    a.iter()
        .zip(b)
        .map(|(x, y)| (x / ma - y / mb).abs())
        .fold(0.0, f64::max)
}
