mod common;

use common::*;
use numgame_core::catalog::Regime;
use numgame_core::{catalog, recognize, CatalogError, CatalogId, CoxeterLabel, Kind, Verdict};

fn all_ids() -> Vec<CatalogId> {
    let mut v = finite_type_ids(8);
    v.extend(ecoxeter_ids(8));
    v.extend(affine_ids(8));
    v
}

#[test]
fn every_id_builds_with_its_node_count() {
    for id in all_ids() {
        let g = build(id);
        assert_eq!(g.n(), id.node_count(), "{id}");
        assert_eq!(g.kind(), id.kind(), "{id}");
        assert!(g.is_connected(), "{id}");
    }
}

#[test]
fn names_round_trip() {
    for id in all_ids() {
        let s = id.to_string();
        assert_eq!(s.parse::<CatalogId>(), Ok(id), "{s}");
        assert_eq!(s.to_uppercase().parse::<CatalogId>(), Ok(id), "{s}");
        assert_eq!(s.replace('~', "").parse::<CatalogId>(), Ok(id), "{s}");
    }
}

#[test]
fn catalog_lookup_matches_build() {
    assert_eq!(catalog("B2").unwrap(), build(CatalogId::B(2)));
    assert_eq!(catalog("e8").unwrap(), build(CatalogId::E8));
    assert_eq!(catalog("affE8").unwrap(), build(CatalogId::AffE8));
    assert_eq!(catalog("I2(7)").unwrap(), build(CatalogId::CalI2(7)));
    assert!(matches!(catalog("Q7"), Err(CatalogError::UnknownId(_))));
    assert!(matches!(catalog("A0"), Err(CatalogError::RankOutOfRange { .. })));
    assert!(matches!(catalog("D3"), Err(CatalogError::RankOutOfRange { .. })));
    assert!(matches!(catalog("I2(3)"), Err(CatalogError::RankOutOfRange { .. })));
}

#[test]
fn finite_type_edges_have_products_one_two_three() {
    for id in finite_type_ids(8) {
        let g = build(id);
        assert!(g.is_acyclic(), "{id}");
        for &(i, j) in g.edges() {
            let p = g.product(i, j);
            assert!([1.0, 2.0, 3.0].contains(&p), "{id} edge ({i},{j}) product {p}");
        }
    }
}

#[test]
fn ecoxeter_edges_are_symmetric_cosines() {
    for id in ecoxeter_ids(8) {
        let g = build(id);
        assert_eq!(g.kind(), Kind::Egcm);
        for &(i, j) in g.edges() {
            assert_eq!(g.amplitude(i, j), g.amplitude(j, i), "{id}");
            let CoxeterLabel::Finite(m) = g.coxeter_label(i, j) else {
                panic!("{id}: infinite label")
            };
            let c = 2.0 * (std::f64::consts::PI / m as f64).cos();
            assert!((g.amplitude(i, j).to_f64() + c).abs() < 1e-12, "{id}");
        }
    }
}

#[test]
fn recognize_names_every_admissible_id() {
    for id in finite_type_ids(8).into_iter().chain(ecoxeter_ids(8)) {
        let v = recognize(&build(id)).unwrap();
        let got = v.id().unwrap_or_else(|| panic!("{id}: {v:?}"));
        match id.regime() {
            Regime::FiniteType => assert!(matches!(v, Verdict::FiniteType(_)), "{id}: {v:?}"),
            _ => assert!(matches!(v, Verdict::ECoxeter(_)), "{id}: {v:?}"),
        }
        // A few families coincide at low rank; then the graphs must agree.
        if got != id {
            assert_eq!(build(got), build(id), "{id} recognized as {got}");
        }
    }
}

#[test]
fn recognize_rejects_every_affine_id() {
    for id in affine_ids(8) {
        let v = recognize(&build(id)).unwrap();
        assert!(!v.is_admissible(), "{id}: {v:?}");
    }
}

#[test]
fn induced_subgraphs_of_catalog_graphs() {
    let a3 = build(CatalogId::A(3));
    assert_eq!(a3.induced_subgraph(&[0, 1]).unwrap(), build(CatalogId::A(2)));
    let b3 = build(CatalogId::B(3));
    // B2 is stored long node first, so the tail of B3 is B2 read backwards.
    let tail = b3.induced_subgraph(&[1, 2]).unwrap();
    assert_eq!(tail, build(CatalogId::B(2)).induced_subgraph(&[1, 0]).unwrap());
    assert_eq!(recognize(&tail).unwrap(), Verdict::FiniteType(CatalogId::B(2)));
    let e8 = build(CatalogId::E8);
    assert_eq!(e8.induced_subgraph(&[0, 1, 2, 3, 4, 5, 7]).unwrap(), build(CatalogId::E7));
    let d5 = build(CatalogId::D(5));
    let sub = d5.induced_subgraph(&[0, 4]).unwrap();
    assert!(!sub.is_connected());
}

#[test]
fn ratio_variants_keep_products() {
    let base = build(CatalogId::CalH4);
    let skew = CatalogId::CalH4.build_with_ratio(1.7).unwrap();
    for &(i, j) in base.edges() {
        assert!((base.product(i, j) - skew.product(i, j)).abs() < 1e-12);
    }
    assert_eq!(CatalogId::B(3).build_with_ratio(2.0), Err(CatalogError::RatioOnGcm));
    assert_eq!(CatalogId::CalH3.build_with_ratio(0.0), Err(CatalogError::BadRatio));
}

#[test]
fn families_listing_is_nonempty() {
    let fams = CatalogId::families();
    assert!(fams.len() >= 10);
    assert!(fams.iter().any(|(p, _)| p.contains("affE")));
}
