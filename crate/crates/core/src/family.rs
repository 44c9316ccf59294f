//! Finite families of subspaces and the min/max operators on them.

use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::lattice::{LatticeError, Subspace, SubspaceLattice};

/// A set of members of one lattice, kept in lattice order.
#[derive(Clone)]
pub struct SubspaceFamily {
    lattice: Arc<SubspaceLattice>,
    members: FixedBitSet,
}

impl SubspaceFamily {
    pub fn empty(lattice: &Arc<SubspaceLattice>) -> Self {
        SubspaceFamily {
            lattice: Arc::clone(lattice),
            members: FixedBitSet::with_capacity(lattice.len()),
        }
    }

    /// Every subspace of the lattice.
    pub fn all(lattice: &Arc<SubspaceLattice>) -> Self {
        let mut f = Self::empty(lattice);
        f.members.insert_range(..);
        f
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(lattice: &Arc<SubspaceLattice>, it: I) -> Self {
        let mut f = Self::empty(lattice);
        for i in it {
            f.members.insert(i);
        }
        f
    }

    pub fn from_bits(lattice: &Arc<SubspaceLattice>, members: FixedBitSet) -> Self {
        debug_assert_eq!(members.len(), lattice.len());
        SubspaceFamily { lattice: Arc::clone(lattice), members }
    }

    /// Builds a family from subspaces; duplicates collapse.
    pub fn from_subspaces<'a, I>(lattice: &Arc<SubspaceLattice>, it: I) -> Result<Self, LatticeError>
    where
        I: IntoIterator<Item = &'a Subspace>,
    {
        let mut f = Self::empty(lattice);
        for s in it {
            f.members.insert(lattice.member(s)?);
        }
        Ok(f)
    }

    /// Parses each literal against the lattice.
    pub fn from_literals(lattice: &Arc<SubspaceLattice>, literals: &[&str]) -> Result<Self, LatticeError> {
        let mut f = Self::empty(lattice);
        for lit in literals {
            f.members.insert(lattice.parse(lit)?);
        }
        Ok(f)
    }

    pub fn lattice(&self) -> &Arc<SubspaceLattice> {
        &self.lattice
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    #[inline]
    pub fn contains_index(&self, i: usize) -> bool {
        self.members.contains(i)
    }

    pub fn contains(&self, s: &Subspace) -> bool {
        self.lattice.member(s).map(|i| self.members.contains(i)).unwrap_or(false)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.ones()
    }

    pub fn subspaces(&self) -> impl Iterator<Item = &Subspace> + '_ {
        self.members.ones().map(|i| self.lattice.subspace(i))
    }

    pub fn insert(&mut self, i: usize) {
        self.members.insert(i);
    }

    /// `max(𝓐)`: members not strictly contained in another member.
    pub fn max_incl(&self) -> SubspaceFamily {
        let l = &self.lattice;
        let keep = self.indices().filter(|&x| {
            !self.indices().any(|a| a != x && l.leq(x, a))
        });
        Self::from_indices(l, keep.collect::<Vec<_>>())
    }

    /// `min(𝓐)`: members containing no other member.
    pub fn min_incl(&self) -> SubspaceFamily {
        let l = &self.lattice;
        let keep = self.indices().filter(|&x| {
            !self.indices().any(|a| a != x && l.leq(a, x))
        });
        Self::from_indices(l, keep.collect::<Vec<_>>())
    }

    /// `max(X, 𝓐)`: members inside `X` of largest dimension.
    pub fn max_dim_in(&self, x: usize) -> SubspaceFamily {
        let l = &self.lattice;
        let inside: Vec<usize> = self.indices().filter(|&a| l.leq(a, x)).collect();
        let top = inside.iter().map(|&a| l.dim(a)).max();
        Self::from_indices(l, inside.into_iter().filter(|&a| Some(l.dim(a)) == top))
    }

    /// `𝓐 ∩ L(X)`.
    pub fn below(&self, x: usize) -> SubspaceFamily {
        let mut bits = self.members.clone();
        bits.intersect_with(self.lattice.below(x));
        Self::from_bits(&self.lattice, bits)
    }

    /// `𝓐 ∩ [X, E]`.
    pub fn above(&self, x: usize) -> SubspaceFamily {
        let mut bits = self.members.clone();
        bits.intersect_with(self.lattice.above(x));
        Self::from_bits(&self.lattice, bits)
    }

    /// `{A⊥ : A ∈ 𝓐}`.
    pub fn perp(&self) -> SubspaceFamily {
        let l = &self.lattice;
        Self::from_indices(l, self.indices().map(|i| l.perp_index(i)).collect::<Vec<_>>())
    }

    /// Every subspace of some member.
    pub fn down_closure(&self) -> SubspaceFamily {
        let mut bits = FixedBitSet::with_capacity(self.lattice.len());
        for i in self.indices() {
            bits.union_with(self.lattice.below(i));
        }
        Self::from_bits(&self.lattice, bits)
    }

    /// Every superspace of some member.
    pub fn up_closure(&self) -> SubspaceFamily {
        let mut bits = FixedBitSet::with_capacity(self.lattice.len());
        for i in self.indices() {
            bits.union_with(self.lattice.above(i));
        }
        Self::from_bits(&self.lattice, bits)
    }

    pub fn is_downward_closed(&self) -> bool {
        self.indices().all(|i| self.lattice.below(i).is_subset(&self.members))
    }

    pub fn is_upward_closed(&self) -> bool {
        self.indices().all(|i| self.lattice.above(i).is_subset(&self.members))
    }

    pub fn is_antichain(&self) -> bool {
        self.indices().all(|i| self.indices().all(|j| i == j || !self.lattice.leq(i, j)))
    }

    /// Image under an index permutation of the lattice.
    pub fn permuted(&self, perm: &[u32]) -> SubspaceFamily {
        Self::from_indices(&self.lattice, self.indices().map(|i| perm[i] as usize).collect::<Vec<_>>())
    }

    /// Smallest image under the lattice automorphisms, comparing bit patterns.
    pub fn canonical_under(&self, perms: &[Vec<u32>]) -> Vec<usize> {
        perms
            .iter()
            .map(|p| {
                let mut v: Vec<usize> = self.indices().map(|i| p[i] as usize).collect();
                v.sort_unstable();
                v
            })
            .min()
            .unwrap_or_else(|| self.indices().collect())
    }
}

impl PartialEq for SubspaceFamily {
    fn eq(&self, other: &Self) -> bool {
        self.lattice.q() == other.lattice.q()
            && self.lattice.n() == other.lattice.n()
            && self.members == other.members
    }
}

impl Eq for SubspaceFamily {}

impl fmt::Debug for SubspaceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.subspaces()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldOrder;

    fn lat(q: u32, n: usize) -> Arc<SubspaceLattice> {
        SubspaceLattice::shared(FieldOrder::new(q).unwrap(), n).unwrap()
    }

    fn fam(l: &Arc<SubspaceLattice>, lits: &[&str]) -> SubspaceFamily {
        SubspaceFamily::from_literals(l, lits).unwrap()
    }

    #[test]
    fn max_incl_examples() {
        let l = lat(2, 2);
        assert_eq!(fam(&l, &["0", "10"]).max_incl(), fam(&l, &["10"]));
        assert_eq!(SubspaceFamily::all(&l).max_incl(), fam(&l, &["10 01"]));
        assert!(SubspaceFamily::empty(&l).max_incl().is_empty());
    }

    #[test]
    fn min_incl_examples() {
        let l = lat(2, 2);
        assert_eq!(SubspaceFamily::all(&l).min_incl(), fam(&l, &["0"]));
        assert_eq!(fam(&l, &["0", "10"]).min_incl(), fam(&l, &["0"]));
        assert_eq!(fam(&l, &["10", "01"]).min_incl(), fam(&l, &["10", "01"]));
    }

    #[test]
    fn max_dim_in_examples() {
        let l = lat(2, 2);
        let e = l.ground_index();
        assert_eq!(fam(&l, &["0", "10"]).max_dim_in(e), fam(&l, &["10"]));
        let y = l.parse("01").unwrap();
        assert_eq!(fam(&l, &["0", "10"]).max_dim_in(y), fam(&l, &["0"]));
        assert_eq!(fam(&l, &["0", "10", "01"]).max_dim_in(e), fam(&l, &["10", "01"]));
        assert!(fam(&l, &["10"]).max_dim_in(y).is_empty());
    }

    fn all_families(l: &Arc<SubspaceLattice>) -> Vec<SubspaceFamily> {
        let len = l.len();
        assert!(len <= 16);
        (0u32..(1 << len))
            .map(|mask| SubspaceFamily::from_indices(l, (0..len).filter(|i| mask >> i & 1 == 1)))
            .collect()
    }

    #[test]
    fn dimension_maximal_members_are_inclusion_maximal() {
        for (q, n) in [(2, 2), (3, 2)] {
            let l = lat(q, n);
            for f in all_families(&l) {
                for x in 0..l.len() {
                    let by_dim = f.max_dim_in(x);
                    let by_incl = f.below(x).max_incl();
                    assert!(by_dim.bits().is_subset(by_incl.bits()));
                }
            }
        }
    }

    #[test]
    fn dimension_maximal_members_are_inclusion_maximal_on_f2_cubed() {
        use rand::{Rng, SeedableRng};
        let l = lat(2, 3);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let mask: u32 = rng.gen_range(0..(1 << 16));
            let f = SubspaceFamily::from_indices(&l, (0..16).filter(|i| mask >> i & 1 == 1));
            for x in 0..l.len() {
                assert!(f.max_dim_in(x).bits().is_subset(f.below(x).max_incl().bits()));
            }
        }
    }

    #[test]
    fn restriction_commutes_with_operators() {
        let l = lat(2, 2);
        for f in all_families(&l) {
            for x in 0..l.len() {
                let restricted = f.below(x);
                assert_eq!(restricted.max_dim_in(x), f.max_dim_in(x));
                for a in restricted.max_incl().indices() {
                    assert!(l.leq(a, x));
                }
            }
        }
    }

    #[test]
    fn closures_and_shape_predicates() {
        let l = lat(2, 2);
        let f = fam(&l, &["10"]);
        assert_eq!(f.down_closure(), fam(&l, &["0", "10"]));
        assert_eq!(f.up_closure(), fam(&l, &["10", "11 01"]));
        assert!(f.down_closure().is_downward_closed());
        assert!(!f.is_downward_closed());
        assert!(fam(&l, &["10", "01"]).is_antichain());
        assert!(!fam(&l, &["0", "01"]).is_antichain());
        assert_eq!(fam(&l, &["10"]).perp(), fam(&l, &["01"]));
    }
}
