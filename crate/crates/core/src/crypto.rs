//! Conversions between the rank, independent space, basis and spanning
//! space presentations of a q-matroid.
//!
//! Each conversion validates its input against the matching axiom system
//! unless called with [`Check::Unchecked`]. The verification harness uses the
//! unchecked form on purpose, since it feeds families that are not
//! q-matroids.

use thiserror::Error;

use crate::axioms::{check_rank_axiom, AxiomId, AxiomKind, AxiomReport, FamilyChecker, Mode};
use crate::family::SubspaceFamily;
use crate::qmatroid::{QMatroid, QMatroidError, RankFunction};

/// Axioms a family must satisfy before it is accepted as independent spaces.
pub const INDEPENDENT_SYSTEM: [AxiomId; 3] = [AxiomId::I1, AxiomId::I2, AxiomId::NI3];
/// Axioms a family must satisfy before it is accepted as bases.
pub const BASIS_SYSTEM: [AxiomId; 3] = [AxiomId::B1, AxiomId::B2, AxiomId::B4];
/// Axioms a family must satisfy before it is accepted as spanning spaces.
pub const SPANNING_SYSTEM: [AxiomId; 3] = [AxiomId::S1, AxiomId::S2, AxiomId::NS3];
pub const RANK_SYSTEM: [AxiomId; 3] = [AxiomId::R1, AxiomId::R2, AxiomId::R3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Check {
    #[default]
    Validate,
    Unchecked,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CryptoError {
    #[error("input is not a valid presentation: {}", .0.line())]
    Precondition(Box<AxiomReport>),
    #[error(transparent)]
    QMatroid(#[from] QMatroidError),
}

fn require(family: &SubspaceFamily, ids: &[AxiomId], check: Check) -> Result<(), CryptoError> {
    if check == Check::Unchecked {
        return Ok(());
    }
    let checker = FamilyChecker::new(family, Mode::Dimension);
    for &id in ids {
        let report = checker.check(id).expect("family axiom");
        if !report.pass {
            return Err(CryptoError::Precondition(Box::new(report)));
        }
    }
    Ok(())
}

fn require_rank(rank: &RankFunction, check: Check) -> Result<(), CryptoError> {
    if check == Check::Unchecked {
        return Ok(());
    }
    for id in RANK_SYSTEM {
        let report = check_rank_axiom(id, rank).expect("rank axiom");
        if !report.pass {
            return Err(CryptoError::Precondition(Box::new(report)));
        }
    }
    Ok(())
}

/// `r(A) = dim max{I ⊆ A : I ∈ 𝓘}`, zero where no member fits.
pub fn rank_from_independent(family: &SubspaceFamily, check: Check) -> Result<RankFunction, CryptoError> {
    require(family, &[AxiomId::I1, AxiomId::I2], check)?;
    let l = family.lattice();
    let mut values = vec![0u32; l.len()];
    let mut found = vec![false; l.len()];
    for a in 0..l.len() {
        if family.contains_index(a) {
            values[a] = l.dim(a) as u32;
            found[a] = true;
        } else {
            for &b in l.lower_covers(a) {
                let b = b as usize;
                if found[b] && (!found[a] || values[b] > values[a]) {
                    values[a] = values[b];
                    found[a] = true;
                }
            }
        }
    }
    Ok(RankFunction::new(l, values)?)
}

/// `{A : r(A) = dim A}`.
pub fn independent_from_rank(rank: &RankFunction, check: Check) -> Result<SubspaceFamily, CryptoError> {
    require_rank(rank, check)?;
    let l = rank.lattice();
    Ok(SubspaceFamily::from_indices(l, (0..l.len()).filter(|&i| rank.value_at(i) as usize == l.dim(i))))
}

/// Inclusion-maximal independent spaces.
pub fn bases_from_independent(family: &SubspaceFamily, check: Check) -> Result<SubspaceFamily, CryptoError> {
    require(family, &INDEPENDENT_SYSTEM, check)?;
    Ok(family.max_incl())
}

/// Every subspace of a basis.
pub fn independent_from_bases(family: &SubspaceFamily, check: Check) -> Result<SubspaceFamily, CryptoError> {
    require(family, &BASIS_SYSTEM, check)?;
    Ok(family.down_closure())
}

/// Every superspace of a basis.
pub fn spanning_from_bases(family: &SubspaceFamily, check: Check) -> Result<SubspaceFamily, CryptoError> {
    require(family, &BASIS_SYSTEM, check)?;
    Ok(family.up_closure())
}

/// Inclusion-minimal spanning spaces.
pub fn bases_from_spanning(family: &SubspaceFamily, check: Check) -> Result<SubspaceFamily, CryptoError> {
    require(family, &SPANNING_SYSTEM, check)?;
    Ok(family.min_incl())
}

/// A q-matroid given by one of its cryptomorphic presentations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Presentation {
    Rank(RankFunction),
    Independent(SubspaceFamily),
    Bases(SubspaceFamily),
    Spanning(SubspaceFamily),
}

impl Presentation {
    pub fn kind(&self) -> AxiomKind {
        match self {
            Presentation::Rank(_) => AxiomKind::Rank,
            Presentation::Independent(_) => AxiomKind::Independent,
            Presentation::Bases(_) => AxiomKind::Bases,
            Presentation::Spanning(_) => AxiomKind::Spanning,
        }
    }

    pub fn family(&self) -> Option<&SubspaceFamily> {
        match self {
            Presentation::Rank(_) => None,
            Presentation::Independent(f) | Presentation::Bases(f) | Presentation::Spanning(f) => Some(f),
        }
    }

    /// Wraps a family of the given kind.
    pub fn from_family(kind: AxiomKind, family: SubspaceFamily) -> Option<Self> {
        match kind {
            AxiomKind::Rank => None,
            AxiomKind::Independent => Some(Presentation::Independent(family)),
            AxiomKind::Bases => Some(Presentation::Bases(family)),
            AxiomKind::Spanning => Some(Presentation::Spanning(family)),
        }
    }

    /// Checks the presentation against its axiom system.
    pub fn validate(&self) -> Result<(), CryptoError> {
        match self {
            Presentation::Rank(r) => require_rank(r, Check::Validate),
            Presentation::Independent(f) => require(f, &INDEPENDENT_SYSTEM, Check::Validate),
            Presentation::Bases(f) => require(f, &BASIS_SYSTEM, Check::Validate),
            Presentation::Spanning(f) => require(f, &SPANNING_SYSTEM, Check::Validate),
        }
    }

    /// Converts to another presentation, routing through bases where needed.
    pub fn convert(&self, to: AxiomKind, check: Check) -> Result<Presentation, CryptoError> {
        if check == Check::Validate {
            self.validate()?;
        }
        // inputs are validated once above
        let c = Check::Unchecked;
        let out = match (self, to) {
            (p, k) if p.kind() == k => p.clone(),
            (Presentation::Rank(r), AxiomKind::Independent) => {
                Presentation::Independent(independent_from_rank(r, c)?)
            }
            (Presentation::Rank(r), _) => {
                Presentation::Independent(independent_from_rank(r, c)?).convert(to, c)?
            }
            (Presentation::Independent(f), AxiomKind::Rank) => {
                Presentation::Rank(rank_from_independent(f, c)?)
            }
            (Presentation::Independent(f), AxiomKind::Bases) => {
                Presentation::Bases(bases_from_independent(f, c)?)
            }
            (Presentation::Independent(f), AxiomKind::Spanning) => {
                Presentation::Spanning(spanning_from_bases(&bases_from_independent(f, c)?, c)?)
            }
            (Presentation::Bases(f), AxiomKind::Independent) => {
                Presentation::Independent(independent_from_bases(f, c)?)
            }
            (Presentation::Bases(f), AxiomKind::Spanning) => {
                Presentation::Spanning(spanning_from_bases(f, c)?)
            }
            (Presentation::Bases(f), AxiomKind::Rank) => {
                Presentation::Rank(rank_from_independent(&independent_from_bases(f, c)?, c)?)
            }
            (Presentation::Spanning(f), _) => {
                Presentation::Bases(bases_from_spanning(f, c)?).convert(to, c)?
            }
            _ => unreachable!("same-kind conversions handled above"),
        };
        Ok(out)
    }

    /// The q-matroid described, validated through its rank function.
    pub fn to_qmatroid(&self, check: Check) -> Result<QMatroid, CryptoError> {
        match self.convert(AxiomKind::Rank, check)? {
            Presentation::Rank(r) => Ok(QMatroid::new(r)?),
            _ => unreachable!(),
        }
    }

    pub fn from_qmatroid(m: &QMatroid, kind: AxiomKind) -> Presentation {
        match kind {
            AxiomKind::Rank => Presentation::Rank(m.rank_function().clone()),
            AxiomKind::Independent => Presentation::Independent(m.independent_spaces()),
            AxiomKind::Bases => Presentation::Bases(m.bases()),
            AxiomKind::Spanning => Presentation::Spanning(m.spanning_spaces()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldOrder;
    use crate::lattice::SubspaceLattice;
    use std::sync::Arc;

    fn lat(q: u32, n: usize) -> Arc<SubspaceLattice> {
        SubspaceLattice::shared(FieldOrder::new(q).unwrap(), n).unwrap()
    }

    fn fam(l: &Arc<SubspaceLattice>, lits: &[&str]) -> SubspaceFamily {
        SubspaceFamily::from_literals(l, lits).unwrap()
    }

    fn r(rank: &RankFunction, l: &Arc<SubspaceLattice>, lit: &str) -> u32 {
        rank.value_at(l.parse(lit).unwrap())
    }

    #[test]
    fn rank_from_independent_examples() {
        let l = lat(2, 2);
        let ce = rank_from_independent(&fam(&l, &["0", "10"]), Check::Validate).unwrap();
        assert_eq!(r(&ce, &l, "10 01"), 1);
        assert_eq!(r(&ce, &l, "10"), 1);
        assert_eq!(r(&ce, &l, "01"), 0);
        assert_eq!(r(&ce, &l, "11"), 0);
        let full = rank_from_independent(&SubspaceFamily::all(&l), Check::Validate).unwrap();
        assert!((0..l.len()).all(|i| full.value_at(i) as usize == l.dim(i)));
        let mixed = rank_from_independent(&fam(&l, &["0", "10", "01"]), Check::Validate).unwrap();
        assert_eq!(r(&mixed, &l, "10 01"), 1);
        assert_eq!(r(&mixed, &l, "11"), 0);
    }

    #[test]
    fn rank_from_independent_rejects_non_downward_closed() {
        let l = lat(2, 2);
        let err = rank_from_independent(&fam(&l, &["10"]), Check::Validate).unwrap_err();
        assert!(matches!(err, CryptoError::Precondition(ref r) if r.axiom == AxiomId::I2));
        assert!(rank_from_independent(&fam(&l, &["10"]), Check::Unchecked).is_ok());
    }

    #[test]
    fn independent_from_rank_examples() {
        let f2 = FieldOrder::new(2).unwrap();
        let l = lat(2, 2);
        let free = QMatroid::free(f2, 2).unwrap();
        let indep = |m: &QMatroid| independent_from_rank(m.rank_function(), Check::Validate).unwrap();
        assert_eq!(indep(&free), SubspaceFamily::all(&l));
        assert_eq!(indep(&QMatroid::uniform(1, 2, f2).unwrap()), fam(&l, &["0", "10", "01", "11"]));
        assert_eq!(indep(&QMatroid::zero(f2, 2).unwrap()), fam(&l, &["0"]));
        let bad = rank_from_independent(&fam(&l, &["0", "10"]), Check::Validate).unwrap();
        assert!(independent_from_rank(&bad, Check::Validate).is_err());
    }

    #[test]
    fn basis_conversions() {
        let l = lat(2, 2);
        let v = Check::Validate;
        assert_eq!(bases_from_independent(&SubspaceFamily::all(&l), v).unwrap(), fam(&l, &["10 01"]));
        assert_eq!(bases_from_independent(&fam(&l, &["0", "10", "01"]), v).unwrap(), fam(&l, &["10", "01"]));
        assert_eq!(bases_from_independent(&fam(&l, &["0"]), v).unwrap(), fam(&l, &["0"]));
        assert!(bases_from_independent(&fam(&l, &["0", "10"]), v).is_err());

        assert_eq!(independent_from_bases(&fam(&l, &["10 01"]), v).unwrap(), SubspaceFamily::all(&l));
        assert_eq!(independent_from_bases(&fam(&l, &["10", "01"]), v).unwrap(), fam(&l, &["0", "10", "01"]));
        assert_eq!(independent_from_bases(&fam(&l, &["0"]), v).unwrap(), fam(&l, &["0"]));
        assert!(independent_from_bases(&fam(&l, &["10"]), v).is_err());

        assert_eq!(spanning_from_bases(&fam(&l, &["10 01"]), v).unwrap(), fam(&l, &["10 01"]));
        assert_eq!(spanning_from_bases(&fam(&l, &["10", "01"]), v).unwrap(), fam(&l, &["10", "01", "10 01"]));
        assert_eq!(spanning_from_bases(&fam(&l, &["0"]), v).unwrap(), SubspaceFamily::all(&l));

        assert_eq!(bases_from_spanning(&fam(&l, &["10 01"]), v).unwrap(), fam(&l, &["10 01"]));
        assert_eq!(bases_from_spanning(&fam(&l, &["10", "01", "10 01"]), v).unwrap(), fam(&l, &["10", "01"]));
        assert_eq!(bases_from_spanning(&SubspaceFamily::all(&l), v).unwrap(), fam(&l, &["0"]));
    }

    #[test]
    fn presentation_conversions_commute() {
        let f2 = FieldOrder::new(2).unwrap();
        for m in [
            QMatroid::uniform(1, 3, f2).unwrap(),
            QMatroid::uniform(2, 3, f2).unwrap(),
            QMatroid::free(f2, 2).unwrap(),
        ] {
            for from in [AxiomKind::Rank, AxiomKind::Independent, AxiomKind::Bases, AxiomKind::Spanning] {
                let p = Presentation::from_qmatroid(&m, from);
                for to in [AxiomKind::Rank, AxiomKind::Independent, AxiomKind::Bases, AxiomKind::Spanning] {
                    let got = p.convert(to, Check::Validate).unwrap();
                    assert_eq!(got, Presentation::from_qmatroid(&m, to), "{from} -> {to}");
                }
                assert_eq!(p.to_qmatroid(Check::Validate).unwrap(), m);
            }
        }
    }
}
