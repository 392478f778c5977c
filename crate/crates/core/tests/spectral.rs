mod common;

use common::*;
use numgame_core::engine::reflect;
use numgame_core::spectral::{perron_of_matrix, EPS_EIG};
use numgame_core::{
    certify_divergence, cycle_charpoly_shift, firing_matrix, perron, trichotomy, AmplitudeGraph,
    CatalogId, Mode, Position, SpectralError, Trichotomy,
};
use proptest::prelude::*;

fn residual(a: &[Vec<f64>], rho: f64, nu: &[f64]) -> f64 {
    a.iter()
        .zip(nu)
        .map(|(row, v)| (row.iter().zip(nu).map(|(p, q)| p * q).sum::<f64>() - rho * v).abs())
        .fold(0.0, f64::max)
}

fn catalog_graphs() -> Vec<(CatalogId, AmplitudeGraph)> {
    let mut ids = finite_type_ids(8);
    ids.extend(ecoxeter_ids(8));
    ids.extend(affine_ids(8));
    ids.into_iter().map(|id| (id, build(id))).collect()
}

#[test]
fn perron_pairs_have_small_residuals() {
    for (id, g) in catalog_graphs() {
        let r = perron(&g).unwrap();
        assert!(residual(&firing_matrix(&g), r.rho, &r.nu) < 1e-10, "{id}");
        assert!(r.nu.iter().all(|&v| v > 0.0), "{id}");
        assert_eq!(r.nu.iter().cloned().fold(0.0, f64::max), 1.0, "{id}");
    }
}

#[test]
fn trichotomy_follows_the_regime() {
    for (id, g) in catalog_graphs() {
        let t = perron(&g).unwrap().trichotomy;
        if id.is_admissible() {
            assert_eq!(t, Trichotomy::SubCritical, "{id}");
        } else {
            assert_ne!(t, Trichotomy::SubCritical, "{id}");
        }
    }
    for id in [CatalogId::AffE8, CatalogId::AffF4, CatalogId::AffG2(1), CatalogId::AffD(6)] {
        assert_eq!(perron(&build(id)).unwrap().trichotomy, Trichotomy::Critical, "{id}");
    }
}

#[test]
fn proper_subgraphs_have_smaller_roots() {
    for id in [CatalogId::AffE8, CatalogId::CalAffH4, CatalogId::AffC(4), CatalogId::E7, CatalogId::CalH4] {
        let g = build(id);
        let rho = perron(&g).unwrap().rho;
        for mask in 1u32..(1 << g.n()) - 1 {
            let nodes: Vec<usize> = (0..g.n()).filter(|&i| mask & (1 << i) != 0).collect();
            let sub = g.induced_subgraph(&nodes).unwrap();
            if sub.is_connected() {
                let r = perron(&sub).unwrap().rho;
                assert!(r < rho - 1e-9, "{id} {nodes:?}: {r} vs {rho}");
            }
        }
    }
}

#[test]
fn tree_roots_ignore_the_asymmetry_ratio() {
    for id in [CatalogId::CalE8, CatalogId::CalH4, CatalogId::CalB(5), CatalogId::CalAffE8, CatalogId::CalAffH3] {
        let base = perron(&build(id)).unwrap().rho;
        for r in [0.3, 0.8, 1.9, 5.0] {
            let skew = perron(&id.build_with_ratio(r).unwrap()).unwrap().rho;
            assert!((skew - base).abs() < 1e-9, "{id} r={r}: {skew} vs {base}");
        }
    }
    // On a cycle the ratio survives around the loop and raises the root.
    let cyc = CatalogId::CalAffA(3);
    let skew = perron(&cyc.build_with_ratio(1.5).unwrap()).unwrap();
    assert!(skew.rho > 2.0 + 1e-3);
    assert_eq!(skew.trichotomy, Trichotomy::SuperCritical);
}

#[test]
fn cycle_shift_vanishes_exactly_on_balanced_cycles() {
    let balanced = cycle_charpoly_shift(&build(CatalogId::CalAffA(3))).unwrap();
    assert!((balanced.pi - 1.0).abs() < 1e-12 && balanced.shift.abs() < 1e-12);
    let skew = cycle_charpoly_shift(&CatalogId::CalAffA(3).build_with_ratio(1.5).unwrap()).unwrap();
    assert!((skew.pi - 1.5f64.powi(2)).abs() < 1e-9, "{}", skew.pi);
    assert!(skew.shift < 0.0);
    assert_eq!(cycle_charpoly_shift(&build(CatalogId::AffE8)), Err(SpectralError::NotACycle));
}

#[test]
fn printed_tilde_b_marks_are_not_an_eigenvector() {
    let g = build(CatalogId::CalAffB(5));
    let a = firing_matrix(&g);
    let s2 = 2f64.sqrt();
    // Catalog order: path 0..=4 with the labeled edge (3, 4), leaf 5 on node 1.
    let printed = [s2, 2.0 * s2, 2.0 * s2, 2.0 * s2, 1.0, s2];
    let corrected = [1.0, 2.0, 2.0, 2.0, s2, 1.0];
    assert!(residual(&a, 2.0, &printed) > 0.5);
    assert!(residual(&a, 2.0, &corrected) < 1e-12);
    let nu = perron(&g).unwrap().nu;
    assert!(max_norm_rel_err(&nu, &corrected) < 1e-9);
}

#[test]
fn integer_affine_trichotomy_is_exactly_critical() {
    for id in affine_ids(6) {
        if id.kind() != numgame_core::Kind::Gcm {
            continue;
        }
        let g = build(id);
        let t = trichotomy(&g)[0].1;
        let hyperbolic = perron(&g).unwrap().rho > 2.0 + 1e-6;
        let want = if hyperbolic { Trichotomy::SuperCritical } else { Trichotomy::Critical };
        assert_eq!(t, want, "{id}");
    }
}

#[test]
fn disconnected_graphs_are_split_first() {
    let g = AmplitudeGraph::gcm(&[
        vec![2, -1, 0, 0],
        vec![-1, 2, 0, 0],
        vec![0, 0, 2, -2],
        vec![0, 0, -2, 2],
    ])
    .unwrap();
    assert_eq!(perron(&g), Err(SpectralError::NotConnected));
    let t = trichotomy(&g);
    assert_eq!(t, vec![(vec![0, 1], Trichotomy::SubCritical), (vec![2, 3], Trichotomy::Critical)]);
    let cert = certify_divergence(&g, &exact(&[1, 1, 0, 1])).unwrap();
    assert_eq!(cert.component, vec![2, 3]);
    assert!(certify_divergence(&g, &exact(&[1, 1, 0, 0])).is_none());
}

/// A connected nonnegative matrix: a weighted path plus random extra entries.
fn irreducible(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(0.0f64..2.0, n * n).prop_map(move |w| {
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j && w[i * n + j] > 1.2 {
                    a[i][j] = w[i * n + j] - 1.0;
                }
            }
        }
        for i in 0..n.saturating_sub(1) {
            a[i][i + 1] += 0.5;
            a[i + 1][i] += 0.5;
        }
        a
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn root_grows_with_entries(a in (2usize..7).prop_flat_map(irreducible), k in 0usize..49, bump in 0.01f64..1.0) {
        let n = a.len();
        let (i, j) = (k % n, (k / n) % n);
        prop_assume!(i != j);
        let (rho, nu, _) = perron_of_matrix(&a, EPS_EIG).unwrap();
        prop_assert!(residual(&a, rho, &nu) < 1e-9);
        let mut b = a.clone();
        b[i][j] += bump;
        let (rho2, _, _) = perron_of_matrix(&b, EPS_EIG).unwrap();
        prop_assert!(rho2 >= rho - 1e-10, "{} < {}", rho2, rho);
    }

    #[test]
    fn pairing_never_decreases_on_affine_graphs(k in 0usize..64, v in prop::collection::vec(-5i64..6, 9), picks in prop::collection::vec(0usize..9, 60)) {
        let ids = affine_ids(5);
        let g = build(ids[k % ids.len()]);
        let nu = perron(&g).unwrap().nu;
        let pair = |p: &Position| p.to_f64().iter().zip(&nu).map(|(x, y)| x * y).sum::<f64>();
        let mut p = match g.mode() {
            Mode::Exact => exact(&v[..g.n()]),
            Mode::Approx => Position::from_f64(&v[..g.n()].iter().map(|&x| x as f64).collect::<Vec<_>>()),
        };
        let mut last = pair(&p);
        for pick in picks {
            let moves = numgame_core::legal_moves(&g, &p);
            if moves.is_empty() {
                break;
            }
            p = reflect(&g, &p, moves[pick % moves.len()]);
            let now = pair(&p);
            prop_assert!(now >= last - 1e-9 * (1.0 + last.abs()), "{} -> {}", last, now);
            last = now;
        }
    }
}
