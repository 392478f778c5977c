mod common;

use common::*;
use numgame_core::poset::infer_finite_type;
use numgame_core::{
    check_m_structure, AmplitudeGraph, CatalogId, EdgeColoredPoset, PosetError, Verdict,
};
use proptest::prelude::*;
use serde_json::json;

fn chain(n: usize, colors: &[usize]) -> EdgeColoredPoset {
    let ids = (0..=colors.len()).map(|k| format!("x{k}")).collect();
    let covers = colors.iter().enumerate().map(|(k, &c)| (k, k + 1, c)).collect();
    EdgeColoredPoset::new(n, ids, covers).unwrap()
}

/// Colors `0, 1, …, n-1`: the vector representation of `A_n`.
fn a_chain(n: usize) -> EdgeColoredPoset {
    chain(n, &(0..n).collect::<Vec<_>>())
}

/// Colors `0, …, n-1, n-2, …, 0`: the vector representation of `C_n`.
fn c_chain(n: usize) -> EdgeColoredPoset {
    let colors: Vec<usize> = (0..n).chain((0..n - 1).rev()).collect();
    chain(n, &colors)
}

/// The square `00 < 10, 01 < 11` colored by direction.
fn square() -> EdgeColoredPoset {
    EdgeColoredPoset::new(
        2,
        ["00", "10", "01", "11"].map(String::from).to_vec(),
        vec![(0, 1, 0), (2, 3, 0), (0, 2, 1), (1, 3, 1)],
    )
    .unwrap()
}

#[test]
fn vector_chains_have_the_m_structure() {
    for n in 1..=6 {
        let rep = check_m_structure(&a_chain(n), &build(CatalogId::A(n))).unwrap();
        assert!(rep.ok, "A{n}: {:?}", rep.violations);
        assert!(rep.surjective);
    }
    for n in 3..=6 {
        let rep = check_m_structure(&c_chain(n), &build(CatalogId::C(n))).unwrap();
        assert!(rep.ok, "C{n}: {:?}", rep.violations);
        // The same chain does not fit the transposed matrix.
        let rep = check_m_structure(&c_chain(n), &build(CatalogId::B(n))).unwrap();
        assert!(!rep.ok, "B{n}");
    }
}

#[test]
fn a_chain_weights_are_differences_of_unit_vectors() {
    let p = a_chain(4);
    for k in 0..=4 {
        let mut want = vec![0i64; 4];
        if k > 0 {
            want[k - 1] += 1;
        }
        if k < 4 {
            want[k] -= 1;
        }
        assert_eq!(p.weight(k).unwrap(), want, "x{k}");
    }
}

#[test]
fn square_fits_two_disjoint_nodes_only() {
    let p = square();
    let weights: Vec<Vec<i64>> = (0..4).map(|x| p.weight(x).unwrap()).collect();
    assert_eq!(weights, vec![vec![-1, -1], vec![1, -1], vec![-1, 1], vec![1, 1]]);
    let two = AmplitudeGraph::gcm(&[vec![2, 0], vec![0, 2]]).unwrap();
    let rep = check_m_structure(&p, &two).unwrap();
    assert!(rep.ok);
    assert_eq!(rep.sufficiently_surjective, vec![true, true]);
    let rep = check_m_structure(&p, &build(CatalogId::A(2))).unwrap();
    assert_eq!(rep.violations.len(), 4);
}

#[test]
fn any_single_recolor_breaks_the_fixtures() {
    for (p, g) in [
        (a_chain(4), build(CatalogId::A(4))),
        (c_chain(4), build(CatalogId::C(4))),
        (square(), AmplitudeGraph::gcm(&[vec![2, 0], vec![0, 2]]).unwrap()),
    ] {
        for (k, &(s, t, c)) in p.covers().iter().enumerate() {
            for other in (0..p.n()).filter(|&o| o != c) {
                let mut covers = p.covers().to_vec();
                covers[k] = (s, t, other);
                let q = EdgeColoredPoset::new(p.n(), p.ids().to_vec(), covers).unwrap();
                let rep = check_m_structure(&q, &g).unwrap();
                assert!(!rep.ok, "cover {k} recolored to {other}");
                assert!(!rep.violations.is_empty());
            }
        }
    }
}

#[test]
fn descent_walks_the_whole_chain() {
    for n in 1..=5 {
        let inf = infer_finite_type(&a_chain(n), &build(CatalogId::A(n))).unwrap();
        assert_eq!(inf.classification.components[0].verdict, Verdict::FiniteType(CatalogId::A(n)));
        let path: Vec<String> = inf.descent.iter().map(|s| s.element.clone()).collect();
        let want: Vec<String> = (0..=n).rev().map(|k| format!("x{k}")).collect();
        assert_eq!(path, want);
        let fired: Vec<Option<usize>> = inf.descent.iter().map(|s| s.fired).collect();
        let mut want: Vec<Option<usize>> = (0..n).rev().map(Some).collect();
        want.push(None);
        assert_eq!(fired, want);
    }
    let inf = infer_finite_type(&c_chain(4), &build(CatalogId::C(4))).unwrap();
    assert_eq!(inf.descent.len(), 8);
    assert_eq!(inf.classification.components[0].verdict, Verdict::FiniteType(CatalogId::C(4)));
}

#[test]
fn inference_refuses_unverified_or_inadmissible_input() {
    let bad = chain(2, &[0, 0]);
    assert!(matches!(
        infer_finite_type(&bad, &build(CatalogId::A(2))),
        Err(PosetError::StructureNotVerified(_))
    ));
    let lonely = chain(2, &[0]);
    let two = AmplitudeGraph::gcm(&[vec![2, 0], vec![0, 2]]).unwrap();
    assert!(matches!(infer_finite_type(&lonely, &two), Err(PosetError::StructureNotVerified(_))));
    // On A1~ the edge x0 -> x1 needs wt(x1) = (-1, 0) + (2, -2), but wt(x1) = (1, 0).
    let aff = build(CatalogId::AffA(1));
    let p = chain(2, &[0]);
    let rep = check_m_structure(&p, &aff).unwrap();
    assert_eq!(rep.violations[0].expected, vec![1.0, -2.0]);
    assert_eq!(rep.violations[0].actual, vec![1, 0]);
    assert_eq!(
        check_m_structure(&p, &build(CatalogId::A(3))),
        Err(PosetError::IndexMismatch { poset: 2, graph: 3 })
    );
}

#[test]
fn json_round_trip_and_one_based_colors() {
    let p = c_chain(3);
    let j = p.to_json();
    assert_eq!(j["covers"][0], json!(["x0", "x1", 1]));
    assert_eq!(EdgeColoredPoset::from_json(&j).unwrap(), p);
    let ints = json!({"n": 2, "elements": [0, 1, 2], "covers": [[0, 1, 1], [1, 2, 2]]});
    let q = EdgeColoredPoset::from_json(&ints).unwrap();
    assert_eq!(q.weight(0).unwrap(), vec![-1, 0]);
}

#[test]
fn malformed_posets_are_rejected() {
    let parse = |v: serde_json::Value| EdgeColoredPoset::from_json(&v);
    assert_eq!(
        parse(json!({"n": 2, "elements": ["a", "b"], "covers": [["a", "b", 0]]})),
        Err(PosetError::ColorOutOfRange { color: 0, n: 2 })
    );
    assert_eq!(
        parse(json!({"n": 2, "elements": ["a", "b"], "covers": [["a", "b", 3]]})),
        Err(PosetError::ColorOutOfRange { color: 3, n: 2 })
    );
    assert_eq!(
        parse(json!({"n": 1, "elements": ["a", "a"], "covers": []})),
        Err(PosetError::DuplicateElement("a".into()))
    );
    assert_eq!(
        parse(json!({"n": 1, "elements": ["a"], "covers": [["a", "z", 1]]})),
        Err(PosetError::UnknownElement("z".into()))
    );
    assert_eq!(
        parse(json!({"n": 1, "elements": ["a", "b"], "covers": [["a", "b", 1], ["b", "a", 1]]})),
        Err(PosetError::CycleDetected)
    );
    assert!(matches!(
        parse(json!({"n": 1, "elements": ["a", "b", "c"], "covers": [["a", "b", 1], ["b", "c", 1], ["a", "c", 1]]})),
        Err(PosetError::NotRanked(..))
    ));
    assert_eq!(parse(json!({"n": 1, "elements": [], "covers": []})), Err(PosetError::Empty));
    assert!(matches!(parse(json!({"elements": []})), Err(PosetError::Json(_))));
}

fn random_chain() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (1usize..5).prop_flat_map(|n| (Just(n), prop::collection::vec(0..n, 1..10)))
}

proptest! {
    #[test]
    fn weights_have_the_parity_of_their_component_length((n, colors) in random_chain()) {
        let p = chain(n, &colors);
        for x in 0..p.len() {
            let w = p.weight(x).unwrap();
            for (i, &m) in w.iter().enumerate() {
                let comp = p.j_components(&[i]).into_iter().find(|c| c.contains(&x)).unwrap();
                let l = comp.len() as i64 - 1;
                prop_assert_eq!((m - l).rem_euclid(2), 0);
                prop_assert!(m.abs() <= l);
            }
        }
    }

    #[test]
    fn component_ends_have_opposite_weights((n, colors) in random_chain()) {
        let p = chain(n, &colors);
        for i in 0..n {
            for comp in p.j_components(&[i]) {
                // Chain components are runs of consecutive elements.
                for (a, b) in comp.iter().zip(comp.iter().rev()) {
                    prop_assert_eq!(p.weight(*a).unwrap()[i], -p.weight(*b).unwrap()[i]);
                }
            }
        }
    }

    #[test]
    fn json_round_trips((n, colors) in random_chain()) {
        let p = chain(n, &colors);
        prop_assert_eq!(EdgeColoredPoset::from_json(&p.to_json()).unwrap(), p);
    }
}
