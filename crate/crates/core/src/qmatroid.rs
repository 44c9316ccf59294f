//! Rank functions, validated q-matroids and the operations on them.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::axioms::{check_rank_axiom, AxiomId, AxiomReport};
use crate::family::SubspaceFamily;
use crate::gf::FieldOrder;
use crate::lattice::{Embedding, LatticeError, QuotientMap, Subspace, SubspaceLattice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QMatroidError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("rank function violates {}", .0.line())]
    Axiom(Box<AxiomReport>),
    #[error("rank function is not total: no value for {0}")]
    NotTotal(String),
    #[error("rank function has {found} values, the lattice has {expected} subspaces")]
    WrongLength { expected: usize, found: usize },
    #[error("uniform q-matroid needs 0 <= k <= n (got k={k}, n={n})")]
    UniformRange { k: usize, n: usize },
    #[error("loops do not fill the subspace they span: {0} has rank > 0")]
    LoopSpace(String),
    #[error("q-matroids live on different lattices")]
    LatticeMismatch,
}

/// A total map from the subspaces of a lattice to non-negative integers.
#[derive(Clone)]
pub struct RankFunction {
    lattice: Arc<SubspaceLattice>,
    values: Vec<u32>,
}

impl RankFunction {
    /// Values in lattice order.
    pub fn new(lattice: &Arc<SubspaceLattice>, values: Vec<u32>) -> Result<Self, QMatroidError> {
        if values.len() != lattice.len() {
            return Err(QMatroidError::WrongLength { expected: lattice.len(), found: values.len() });
        }
        Ok(RankFunction { lattice: Arc::clone(lattice), values })
    }

    pub fn from_fn(lattice: &Arc<SubspaceLattice>, f: impl Fn(&Subspace) -> u32) -> Self {
        let values = lattice.subspaces().iter().map(f).collect();
        RankFunction { lattice: Arc::clone(lattice), values }
    }

    /// Builds from an explicit table, which must cover every subspace.
    pub fn from_map(
        lattice: &Arc<SubspaceLattice>,
        map: &HashMap<Subspace, u32>,
    ) -> Result<Self, QMatroidError> {
        let mut values = Vec::with_capacity(lattice.len());
        for s in lattice.subspaces() {
            match map.get(s) {
                Some(&v) => values.push(v),
                None => return Err(QMatroidError::NotTotal(s.literal())),
            }
        }
        Ok(RankFunction { lattice: Arc::clone(lattice), values })
    }

    pub fn lattice(&self) -> &Arc<SubspaceLattice> {
        &self.lattice
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    #[inline]
    pub fn value_at(&self, i: usize) -> u32 {
        self.values[i]
    }

    /// Rank of a subspace of the lattice's ambient space.
    pub fn value(&self, s: &Subspace) -> u32 {
        self.values[self.lattice.member(s).expect("subspace of this lattice")]
    }
}

impl PartialEq for RankFunction {
    fn eq(&self, other: &Self) -> bool {
        self.lattice.q() == other.lattice.q()
            && self.lattice.n() == other.lattice.n()
            && self.values == other.values
    }
}

impl Eq for RankFunction {}

impl std::fmt::Debug for RankFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map()
            .entries(self.lattice.subspaces().iter().zip(&self.values))
            .finish()
    }
}

/// A rank function known to satisfy (R1)-(R3).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMatroid {
    rank: RankFunction,
}

impl QMatroid {
    /// Validates (R1)-(R3); the first failing axiom is returned with its witness.
    pub fn new(rank: RankFunction) -> Result<Self, QMatroidError> {
        for id in [AxiomId::R1, AxiomId::R2, AxiomId::R3] {
            let report = check_rank_axiom(id, &rank).expect("rank axiom");
            if !report.pass {
                return Err(QMatroidError::Axiom(Box::new(report)));
            }
        }
        Ok(QMatroid { rank })
    }

    /// `r(A) = min(k, dim A)`.
    pub fn uniform(k: usize, n: usize, q: FieldOrder) -> Result<Self, QMatroidError> {
        if k > n {
            return Err(QMatroidError::UniformRange { k, n });
        }
        let l = SubspaceLattice::shared(q, n)?;
        Self::new(RankFunction::from_fn(&l, |s| s.dim().min(k) as u32))
    }

    /// Every subspace independent.
    pub fn free(q: FieldOrder, n: usize) -> Result<Self, QMatroidError> {
        Self::uniform(n, n, q)
    }

    /// Rank identically zero.
    pub fn zero(q: FieldOrder, n: usize) -> Result<Self, QMatroidError> {
        Self::uniform(0, n, q)
    }

    pub fn lattice(&self) -> &Arc<SubspaceLattice> {
        self.rank.lattice()
    }

    pub fn rank_function(&self) -> &RankFunction {
        &self.rank
    }

    pub fn rank_of(&self, s: &Subspace) -> u32 {
        self.rank.value(s)
    }

    /// `r(E)`.
    pub fn rank(&self) -> u32 {
        self.rank.value_at(self.lattice().ground_index())
    }

    fn select(&self, pred: impl Fn(usize) -> bool) -> SubspaceFamily {
        SubspaceFamily::from_indices(self.lattice(), (0..self.lattice().len()).filter(|&i| pred(i)))
    }

    /// `{A : r(A) = dim A}`.
    pub fn independent_spaces(&self) -> SubspaceFamily {
        let l = self.lattice();
        self.select(|i| self.rank.value_at(i) as usize == l.dim(i))
    }

    pub fn dependent_spaces(&self) -> SubspaceFamily {
        let l = self.lattice();
        self.select(|i| self.rank.value_at(i) as usize != l.dim(i))
    }

    /// Inclusion-maximal independent spaces.
    pub fn bases(&self) -> SubspaceFamily {
        self.independent_spaces().max_incl()
    }

    /// `{S : r(S) = r(E)}`.
    pub fn spanning_spaces(&self) -> SubspaceFamily {
        let top = self.rank();
        self.select(|i| self.rank.value_at(i) == top)
    }

    /// One-dimensional subspaces of rank zero.
    pub fn loops(&self) -> SubspaceFamily {
        let l = self.lattice();
        SubspaceFamily::from_indices(l, l.lines().filter(|&i| self.rank.value_at(i) == 0))
    }

    /// Sum of all loops. Fails if some line of that sum is not a loop.
    pub fn loop_space(&self) -> Result<Subspace, QMatroidError> {
        let l = self.lattice();
        let loops = self.loops();
        let sum = loops.indices().fold(SubspaceLattice::ZERO, |acc, i| l.join(acc, i));
        if let Some(bad) = l.lines().find(|&x| l.leq(x, sum) && !loops.contains_index(x)) {
            return Err(QMatroidError::LoopSpace(l.subspace(bad).literal()));
        }
        Ok(l.subspace(sum).clone())
    }

    /// `r*(A) = dim A - r(E) + r(A⊥)`.
    pub fn dual(&self) -> Result<QMatroid, QMatroidError> {
        let l = self.lattice();
        let top = self.rank() as i64;
        let values = (0..l.len())
            .map(|a| {
                let v = l.dim(a) as i64 - top + self.rank.value_at(l.perp_index(a)) as i64;
                u32::try_from(v).expect("dual rank of a q-matroid is non-negative")
            })
            .collect();
        QMatroid::new(RankFunction::new(l, values)?)
    }

    /// `M|X` on `F_q^{dim X}`, coordinatized along the canonical basis of `X`.
    pub fn restriction(&self, x: &Subspace) -> Result<QMatroid, QMatroidError> {
        Ok(self.restriction_with_map(x)?.0)
    }

    pub fn restriction_with_map(&self, x: &Subspace) -> Result<(QMatroid, Embedding), QMatroidError> {
        let l = self.lattice();
        l.member(x)?;
        let emb = Embedding::new(x);
        let small = SubspaceLattice::shared(l.q(), x.dim())?;
        let mut values = Vec::with_capacity(small.len());
        for a in small.subspaces() {
            values.push(self.rank_of(&emb.push(a)?));
        }
        let m = QMatroid::new(RankFunction::new(&small, values)?)?;
        Ok((m, emb))
    }

    /// `M/X` on `F_q^{n - dim X}` through [`QuotientMap`].
    pub fn contraction(&self, x: &Subspace) -> Result<QMatroid, QMatroidError> {
        Ok(self.contraction_with_map(x)?.0)
    }

    pub fn contraction_with_map(&self, x: &Subspace) -> Result<(QMatroid, QuotientMap), QMatroidError> {
        let l = self.lattice();
        l.member(x)?;
        let pi = QuotientMap::new(x);
        let small = SubspaceLattice::shared(l.q(), pi.quotient_dim())?;
        let rx = self.rank_of(x);
        let mut values = Vec::with_capacity(small.len());
        for w in small.subspaces() {
            values.push(self.rank_of(&pi.pull(w)?) - rx);
        }
        let m = QMatroid::new(RankFunction::new(&small, values)?)?;
        Ok((m, pi))
    }
}

/// True iff a lattice automorphism carries one rank function onto the other.
pub fn are_isomorphic(m1: &QMatroid, m2: &QMatroid) -> Result<bool, QMatroidError> {
    let (l1, l2) = (m1.lattice(), m2.lattice());
    if l1.q() != l2.q() || l1.n() != l2.n() {
        return Err(QMatroidError::LatticeMismatch);
    }
    if m1.rank() != m2.rank() {
        l1.automorphisms()?;
        return Ok(false);
    }
    let (r1, r2) = (m1.rank.values(), m2.rank.values());
    Ok(l1
        .automorphisms()?
        .iter()
        .any(|p| (0..r1.len()).all(|i| r1[i] == r2[p[i] as usize])))
}
