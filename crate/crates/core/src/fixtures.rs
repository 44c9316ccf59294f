//! Canned documents shipped with the crate, each with the axiom table it
//! is expected to produce.

use thiserror::Error;

use crate::axioms::{check_rank_axiom, AxiomId, FamilyChecker, Mode};
use crate::crypto::{rank_from_independent, Check};
use crate::document::{Document, DocumentError};
use crate::family::SubspaceFamily;
use crate::qmatroid::{QMatroid, RankFunction};

/// Name of the family section every fixture carries.
pub const FAMILY: &str = "I";

/// Axioms reported in a fixture table, in report order.
pub const TABLE_AXIOMS: [AxiomId; 9] = [
    AxiomId::I1,
    AxiomId::I2,
    AxiomId::I3,
    AxiomId::I4,
    AxiomId::I4pp,
    AxiomId::NI3,
    AxiomId::R1,
    AxiomId::R2,
    AxiomId::R3,
];

const SHIPPED: [(&str, &str); 5] = [
    ("paper_counterexample", include_str!("../fixtures/paper_counterexample.qm")),
    ("mixed_diamond", include_str!("../fixtures/mixed_diamond.qm")),
    ("free", include_str!("../fixtures/free.qm")),
    ("zero", include_str!("../fixtures/zero.qm")),
    ("uniform", include_str!("../fixtures/uniform.qm")),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixtureError {
    #[error("unknown fixture '{0}' (known: {})", names().join(", "))]
    Unknown(String),
    #[error("fixture {name}: {source}")]
    Document { name: String, source: DocumentError },
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    /// The document text as shipped, or as rendered for generated fixtures.
    pub text: String,
    pub document: Document,
    /// Expected pass/fail of each axiom in [`TABLE_AXIOMS`].
    pub expected: Vec<(AxiomId, bool)>,
}

impl Fixture {
    fn parse(name: &str, text: &str, expected: Vec<(AxiomId, bool)>) -> Result<Self, FixtureError> {
        let document = Document::parse(text)
            .map_err(|source| FixtureError::Document { name: name.to_string(), source })?;
        Ok(Fixture { name: name.to_string(), text: text.to_string(), document, expected })
    }

    /// A q-matroid fixture: every table axiom passes.
    pub fn from_qmatroid(name: &str, m: &QMatroid) -> Self {
        let document = Document::from_qmatroid(m, FAMILY);
        Fixture {
            name: name.to_string(),
            text: document.render(),
            document,
            expected: TABLE_AXIOMS.iter().map(|&a| (a, true)).collect(),
        }
    }

    pub fn family(&self) -> &SubspaceFamily {
        self.document.family(FAMILY).expect("fixtures carry family I")
    }

    /// The rank section if present, otherwise the rank read off family `I`.
    pub fn rank(&self) -> RankFunction {
        match &self.document.rank {
            Some(r) => r.clone(),
            None => rank_from_independent(self.family(), Check::Unchecked).expect("unchecked"),
        }
    }

    /// What the checkers report today, in [`TABLE_AXIOMS`] order.
    pub fn live_table(&self, mode: Mode) -> Vec<(AxiomId, bool)> {
        let family = self.family();
        let checker = FamilyChecker::new(family, mode);
        let rank = self.rank();
        TABLE_AXIOMS
            .iter()
            .map(|&a| {
                let report = match a {
                    AxiomId::R1 | AxiomId::R2 | AxiomId::R3 => check_rank_axiom(a, &rank),
                    _ => checker.check(a),
                };
                (a, report.expect("table axioms apply").pass)
            })
            .collect()
    }
}

pub fn names() -> Vec<&'static str> {
    SHIPPED.iter().map(|(n, _)| *n).collect()
}

/// Raw text of a shipped fixture.
pub fn source(name: &str) -> Option<&'static str> {
    SHIPPED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Loads a shipped fixture by name.
pub fn fixture(name: &str) -> Result<Fixture, FixtureError> {
    let text = source(name).ok_or_else(|| FixtureError::Unknown(name.to_string()))?;
    let expected = match name {
        "paper_counterexample" => {
            let fails = [AxiomId::I4, AxiomId::I4pp, AxiomId::NI3, AxiomId::R3];
            TABLE_AXIOMS.iter().map(|&a| (a, !fails.contains(&a))).collect()
        }
        _ => TABLE_AXIOMS.iter().map(|&a| (a, true)).collect(),
    };
    Fixture::parse(name, text, expected)
}

/// Every shipped fixture.
pub fn all() -> Vec<Fixture> {
    names().into_iter().map(|n| fixture(n).expect("shipped fixtures parse")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldOrder;

    #[test]
    fn expected_tables_match_live_checkers() {
        for f in all() {
            for mode in [Mode::Dimension, Mode::Inclusion] {
                assert_eq!(f.live_table(mode), f.expected, "{} in {mode} mode", f.name);
            }
        }
    }

    #[test]
    fn shipped_files_are_canonical() {
        for f in all() {
            let reparsed = Document::parse(&f.document.render()).unwrap();
            assert_eq!(reparsed, f.document, "{}", f.name);
        }
    }

    #[test]
    fn shipped_qmatroids_match_constructors() {
        let f2 = FieldOrder::new(2).unwrap();
        let doc = |name: &str| fixture(name).unwrap().document;
        assert_eq!(doc("free"), Document::from_qmatroid(&QMatroid::free(f2, 3).unwrap(), FAMILY));
        assert_eq!(doc("zero"), Document::from_qmatroid(&QMatroid::zero(f2, 2).unwrap(), FAMILY));
        assert_eq!(doc("uniform"), Document::from_qmatroid(&QMatroid::uniform(2, 3, f2).unwrap(), FAMILY));
    }

    #[test]
    fn mixed_diamond_is_a_qmatroid_with_loop_space_z() {
        let f = fixture("mixed_diamond").unwrap();
        let m = QMatroid::new(f.rank()).unwrap();
        assert_eq!(m.independent_spaces(), *f.family());
        assert_eq!(m.loop_space().unwrap().literal(), "11");
        assert_eq!(f.rank(), rank_from_independent(f.family(), Check::Validate).unwrap());
    }

    #[test]
    fn counterexample_has_no_rank_section() {
        let f = fixture("paper_counterexample").unwrap();
        assert!(f.document.rank.is_none());
        assert!(QMatroid::new(f.rank()).is_err());
    }

    #[test]
    fn generated_fixtures_pass_everything() {
        for q in [2, 3] {
            let fq = FieldOrder::new(q).unwrap();
            for n in 0..=3 {
                let f = Fixture::from_qmatroid("free", &QMatroid::free(fq, n).unwrap());
                assert_eq!(f.live_table(Mode::Dimension), f.expected);
                for k in 0..=n {
                    let u = Fixture::from_qmatroid("uniform", &QMatroid::uniform(k, n, fq).unwrap());
                    assert_eq!(u.live_table(Mode::Dimension), u.expected, "U({k},{n}) over F_{q}");
                }
            }
        }
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(fixture("nope"), Err(FixtureError::Unknown(_))));
    }
}
