//! End-to-end runs from group presentations to cover homology and measures.

use abtorsion::alexmod::{alexander_polynomial, first_nonzero_alexander};
use abtorsion::covers::{cover_homology, module_cover_homology, torsion_growth_sequence, Schedule};
use abtorsion::foxcalc::{alexander_matrix_from_presentation, builtin_fixture, fixture_names, GroupPresentation};
use abtorsion::mahler::{mahler_multivariate, Strategy};
use abtorsion::{ChainComplex, LaurentPoly, Presentation, Sublattice};
use num_bigint::BigInt;

fn expectation<'a>(f: &'a abtorsion::foxcalc::Fixture, key: &str) -> Option<&'a str> {
    f.expected.iter().find(|e| e.invariant == key).map(|e| e.value.as_str())
}

#[test]
fn fixtures_reproduce_their_recorded_invariants() {
    for name in fixture_names() {
        let f = builtin_fixture(name).unwrap();
        let (pres, complex) = alexander_matrix_from_presentation(&f.presentation).unwrap();
        let m = pres.num_vars();
        for l in [0, 1] {
            if let Some(v) = expectation(&f, &format!("delta_{l}")) {
                let expected = LaurentPoly::parse_with_vars(v, m).unwrap();
                assert!(alexander_polynomial(&pres, l).associated(&expected), "{name} delta_{l}");
            }
        }
        if let Some(v) = expectation(&f, "mahler_delta") {
            let (_, delta) = first_nonzero_alexander(&pres);
            let got = mahler_multivariate::<f64>(&delta, &Strategy::Auto).unwrap().value;
            assert!((got - v.parse::<f64>().unwrap()).abs() < 1e-9, "{name} mahler {got}");
        }
        if let Some(v) = expectation(&f, "cover_torsion") {
            let orders: Vec<BigInt> = v.split(',').map(|x| x.parse().unwrap()).collect();
            let seq = torsion_growth_sequence(&complex, 1, &Schedule::Cyclic { ns: (1..=orders.len() as u64).collect() }).unwrap();
            let got: Vec<BigInt> = seq.steps.iter().map(|s| s.report.torsion_order.clone()).collect();
            assert_eq!(got, orders, "{name}");
        }
        if let Some(v) = expectation(&f, "l2_acyclic") {
            assert_eq!(complex.is_l2_acyclic(), v == "true", "{name}");
        }
    }
}

#[test]
fn module_and_complex_routes_agree_for_knots() {
    for name in ["trefoil", "figure_eight"] {
        let f = builtin_fixture(name).unwrap();
        let (pres, complex) = alexander_matrix_from_presentation(&f.presentation).unwrap();
        for n in 1..=9 {
            let h = Sublattice::cyclic(n).unwrap();
            let r = cover_homology(&complex, &h, 1).unwrap();
            // coker J^T is H_1 extended by the augmentation ideal, free of rank N - 1.
            let (betti, divisors) = module_cover_homology(&pres, &h).unwrap();
            assert_eq!(betti, r.betti + n - 1, "{name} N = {n}");
            assert_eq!(divisors, r.divisors, "{name} N = {n}");
        }
    }
}

#[test]
fn hopf_link_covers_are_tori() {
    let f = builtin_fixture("hopf_link").unwrap();
    let (_, complex) = alexander_matrix_from_presentation(&f.presentation).unwrap();
    for g in [vec![vec![2, 0], vec![0, 3]], vec![vec![4, 1], vec![0, 5]]] {
        let h = Sublattice::from_generators(g).unwrap();
        let ranks: Vec<u64> = (0..=2).map(|i| cover_homology(&complex, &h, i).unwrap().betti).collect();
        assert_eq!(ranks, [1, 2, 1]);
        assert!(cover_homology(&complex, &h, 1).unwrap().divisors.is_empty());
    }
}

#[test]
fn parsed_text_matches_the_fixture() {
    let f = builtin_fixture("figure_eight").unwrap();
    let parsed: GroupPresentation = f.text.parse().unwrap();
    assert_eq!(parsed, f.presentation);
    let again: GroupPresentation = parsed.to_string().parse().unwrap();
    assert_eq!(again, parsed);
}

#[test]
fn json_round_trips() {
    let f = builtin_fixture("whitehead_link").unwrap();
    let (pres, complex) = alexander_matrix_from_presentation(&f.presentation).unwrap();
    let p: Presentation = serde_json::from_str(&serde_json::to_string(&pres).unwrap()).unwrap();
    assert_eq!(p, pres);
    let c: ChainComplex = serde_json::from_str(&serde_json::to_string(&complex).unwrap()).unwrap();
    assert_eq!(c, complex);
    let seq = torsion_growth_sequence(&complex, 1, &Schedule::Gpm { steps: vec![(2, 7), (3, 17)] }).unwrap();
    let back: abtorsion::covers::GrowthSequence = serde_json::from_str(&serde_json::to_string(&seq).unwrap()).unwrap();
    assert_eq!(back, seq);
}
