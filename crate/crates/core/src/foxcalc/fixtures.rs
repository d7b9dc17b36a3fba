//! Named presentations of knot and link groups with their known invariants.

use serde::{Deserialize, Serialize};

use super::GroupPresentation;
use crate::error::{Error, Result};

/// A known value attached to a fixture, with where it comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectation {
    /// `delta_1`, `mahler_delta`, `cover_torsion`, `l2_acyclic`, ...
    pub invariant: String,
    pub value: String,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub text: String,
    pub presentation: GroupPresentation,
    pub expected: Vec<Expectation>,
}

struct Entry {
    name: &'static str,
    text: &'static str,
    expected: &'static [(&'static str, &'static str, &'static str)],
}

const TABLE: &[Entry] = &[
    Entry {
        name: "trefoil",
        text: "gens: x y; rels: x y x Y X Y; phi: x->t1, y->t1",
        expected: &[
            ("delta_1", "t1^2 - t1 + 1", "classical"),
            ("mahler_delta", "0", "cyclotomic, so the measure vanishes"),
            ("l2_acyclic", "true", "nonzero Alexander polynomial"),
        ],
    },
    Entry {
        // w = x Y X y and w x = y w.
        name: "figure_eight",
        text: "gens: x y; rels: x Y X y x Y x y X Y; phi: x->t1, y->t1",
        expected: &[
            ("delta_1", "t1^2 - 3*t1 + 1", "classical"),
            ("mahler_delta", "0.9624236501192069", "log of the golden ratio squared"),
            ("cover_torsion", "1,5,16,45,121", "cyclic resultants for N = 1..5"),
            ("l2_acyclic", "true", "nonzero Alexander polynomial"),
        ],
    },
    Entry {
        name: "hopf_link",
        text: "gens: x y; rels: x y X Y; phi: x->t1, y->t2",
        expected: &[("delta_1", "1", "classical"), ("l2_acyclic", "true", "nonzero Alexander polynomial")],
    },
    Entry {
        name: "circle",
        text: "gens: x; rels: ; phi: x->t1",
        expected: &[("delta_0", "0", "the 1 x 0 presentation of Z[t^±1]"), ("l2_acyclic", "true", "S^1 has vanishing l2-Betti numbers")],
    },
    Entry {
        // Two-bridge link b(8, 3): [x, w] with w = y x Y X Y x y.
        name: "whitehead_link",
        text: "gens: x y; rels: x y x Y X Y x y X Y X y x y X Y; phi: x->t1, y->t2",
        expected: &[("l2_acyclic", "true", "hyperbolic link complement")],
    },
];

pub fn fixture_names() -> Vec<&'static str> {
    TABLE.iter().map(|e| e.name).collect()
}

pub fn builtin_fixture(name: &str) -> Result<Fixture> {
    let e = TABLE.iter().find(|e| e.name == name).ok_or_else(|| Error::UnknownFixture(name.to_string()))?;
    Ok(Fixture {
        name: e.name.to_string(),
        text: e.text.to_string(),
        presentation: e.text.parse()?,
        expected: e
            .expected
            .iter()
            .map(|&(invariant, value, source)| Expectation { invariant: invariant.into(), value: value.into(), source: source.into() })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alexmod::{alexander_polynomial, first_nonzero_alexander, validate_chain_complex};
    use crate::foxcalc::alexander_matrix_from_presentation;
    use crate::laurent::LaurentPoly;

    #[test]
    fn every_fixture_is_a_valid_complex_with_its_expectations() {
        for name in fixture_names() {
            let f = builtin_fixture(name).unwrap();
            let (pres, c) = alexander_matrix_from_presentation(&f.presentation).unwrap();
            assert!(validate_chain_complex(&c), "{name}");
            for e in &f.expected {
                let m = f.presentation.num_vars();
                match e.invariant.as_str() {
                    "delta_1" => {
                        let expect = LaurentPoly::parse_with_vars(&e.value, m).unwrap();
                        let (j, d) = first_nonzero_alexander(&pres);
                        assert_eq!(j, 1, "{name}");
                        assert!(d.associated(&expect), "{name}: {d}");
                    }
                    "delta_0" => assert_eq!(alexander_polynomial(&pres, 0).to_string(), e.value),
                    "l2_acyclic" => assert_eq!(c.is_l2_acyclic().to_string(), e.value, "{name}"),
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn whitehead_delta_is_frozen() {
        let f = builtin_fixture("whitehead_link").unwrap();
        let (pres, _) = alexander_matrix_from_presentation(&f.presentation).unwrap();
        let (j, d) = first_nonzero_alexander(&pres);
        assert_eq!(j, 1);
        let frozen = LaurentPoly::parse_with_vars("t1*t2 - t1 - t2 + 1", 2).unwrap();
        assert!(d.associated(&frozen), "{d}");
    }

    #[test]
    fn unknown_fixture() {
        assert!(matches!(builtin_fixture("unknot"), Err(Error::UnknownFixture(_))));
    }
}
