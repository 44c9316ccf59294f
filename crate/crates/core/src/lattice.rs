//! Subspaces of `F_q^n` in canonical form and the subspace lattice `L(E)`.
//!
//! A [`Subspace`] is stored as its reduced row echelon basis, which makes
//! structural equality coincide with equality of subspaces. The
//! [`SubspaceLattice`] materializes every subspace of `F_q^n` in a fixed
//! order (dimension first, then lexicographic on the canonical rows) and
//! hands out dense indices into that order. All of the heavier machinery in
//! this crate works on those indices.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::Range;
use std::sync::{Arc, Mutex, OnceLock};

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::gf::{FieldOrder, GfError, Scalar};

/// Default cap on the number of subspaces a lattice may hold.
pub const DEFAULT_SUBSPACE_LIMIT: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("subspaces live in different ambient spaces (q={0}, n={1} vs q={2}, n={3})")]
    AmbientMismatch(u8, usize, u8, usize),
    #[error("vector has length {found}, expected {expected}")]
    VectorLength { expected: usize, found: usize },
    #[error("digit '{digit}' is not a scalar of F_{q}")]
    BadDigit { digit: char, q: u8 },
    #[error("empty subspace literal")]
    EmptyLiteral,
    #[error("{lower} is not contained in {upper}")]
    NotNested { lower: String, upper: String },
    #[error("dimension {k} out of range for n={n}")]
    DimensionOutOfRange { k: usize, n: usize },
    #[error("L(F_{q}^{n}) has {count} subspaces, above the limit of {limit}")]
    TooLarge { q: u8, n: usize, count: u128, limit: u128 },
    #[error("isomorphism search is limited to n <= 3 and q in {{2, 3}} (got q={q}, n={n})")]
    AutomorphismGuard { q: u8, n: usize },
}

/// A subspace of `F_q^n`, held as its reduced row echelon basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    q: FieldOrder,
    n: usize,
    rows: Vec<Vec<Scalar>>,
}

impl Subspace {
    pub fn zero(q: FieldOrder, n: usize) -> Self {
        Subspace { q, n, rows: Vec::new() }
    }

    pub fn full(q: FieldOrder, n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![0; n];
                r[i] = 1;
                r
            })
            .collect();
        Subspace { q, n, rows }
    }

    /// The span of `generators`, canonicalized.
    pub fn span<V: AsRef<[Scalar]>>(
        q: FieldOrder,
        n: usize,
        generators: &[V],
    ) -> Result<Self, LatticeError> {
        let mut rows = Vec::with_capacity(generators.len());
        for g in generators {
            let g = g.as_ref();
            if g.len() != n {
                return Err(LatticeError::VectorLength { expected: n, found: g.len() });
            }
            for &x in g {
                q.scalar(x as u32)?;
            }
            rows.push(g.to_vec());
        }
        Ok(Self::from_rows_unchecked(q, n, rows))
    }

    /// Canonicalizes rows that are already known to be valid vectors.
    pub(crate) fn from_rows_unchecked(q: FieldOrder, n: usize, rows: Vec<Vec<Scalar>>) -> Self {
        Subspace { q, n, rows: rref(q, n, rows) }
    }

    /// Parses a subspace literal: `0`, or whitespace separated generators
    /// of exactly `n` digits each (coordinate 1 leftmost).
    pub fn parse(q: FieldOrder, n: usize, literal: &str) -> Result<Self, LatticeError> {
        let literal = literal.trim();
        if literal.is_empty() {
            return Err(LatticeError::EmptyLiteral);
        }
        if literal == "0" {
            return Ok(Self::zero(q, n));
        }
        let mut gens = Vec::new();
        for word in literal.split_whitespace() {
            gens.push(parse_vector(q, n, word)?);
        }
        Self::span(q, n, &gens)
    }

    /// The canonical literal. Zero renders as `0`.
    pub fn literal(&self) -> String {
        self.literal_with(" ")
    }

    /// Like [`Subspace::literal`] with a custom separator between rows.
    pub fn literal_with(&self, sep: &str) -> String {
        if self.rows.is_empty() {
            return "0".to_string();
        }
        self.rows
            .iter()
            .map(|r| r.iter().map(|&d| char::from_digit(d as u32, 36).unwrap()).collect::<String>())
            .collect::<Vec<_>>()
            .join(sep)
    }

    pub fn q(&self) -> FieldOrder {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Pivot column of each canonical row.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.iter().position(|&x| x != 0).unwrap()).collect()
    }

    fn same_ambient(&self, other: &Subspace) -> Result<(), LatticeError> {
        if self.q != other.q || self.n != other.n {
            return Err(LatticeError::AmbientMismatch(
                self.q.get(),
                self.n,
                other.q.get(),
                other.n,
            ));
        }
        Ok(())
    }

    /// `A + B`.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LatticeError> {
        self.same_ambient(other)?;
        let rows = self.rows.iter().chain(other.rows.iter()).cloned().collect();
        Ok(Self::from_rows_unchecked(self.q, self.n, rows))
    }

    /// `A ∩ B`, computed as `(A⊥ + B⊥)⊥`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LatticeError> {
        self.same_ambient(other)?;
        Ok(self.perp().sum(&other.perp())?.perp())
    }

    /// True iff `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool, LatticeError> {
        self.same_ambient(other)?;
        Ok(other.rows.iter().all(|v| self.contains_vector(v)))
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        let mut v = v.to_vec();
        reduce(self.q, &self.rows, &mut v);
        v.iter().all(|&x| x == 0)
    }

    /// Orthogonal complement under the standard dot product.
    pub fn perp(&self) -> Subspace {
        let q = self.q;
        let pivots = self.pivots();
        let mut basis = Vec::with_capacity(self.n - self.dim());
        for free in (0..self.n).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0; self.n];
            v[free] = 1;
            for (row, &p) in self.rows.iter().zip(&pivots) {
                v[p] = q.neg(row[free]);
            }
            basis.push(v);
        }
        Self::from_rows_unchecked(q, self.n, basis)
    }

    /// Every vector of the subspace, in no particular order.
    pub fn vectors(&self) -> Vec<Vec<Scalar>> {
        let q = self.q;
        let mut out = vec![vec![0; self.n]];
        for row in &self.rows {
            let mut next = Vec::with_capacity(out.len() * q.get() as usize);
            for v in &out {
                for c in q.elements() {
                    let w: Vec<Scalar> =
                        v.iter().zip(row).map(|(&a, &b)| q.add(a, q.mul(c, b))).collect();
                    next.push(w);
                }
            }
            out = next;
        }
        out
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Deterministic total order: ambient, then dimension, then lexicographic on
/// the canonical rows.
impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.q, self.n, self.rows.len(), &self.rows).cmp(&(
            other.q,
            other.n,
            other.rows.len(),
            &other.rows,
        ))
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.literal())
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.literal_with(","))
    }
}

/// Free-function form of [`Subspace::span`].
pub fn canonicalize<V: AsRef<[Scalar]>>(
    q: FieldOrder,
    n: usize,
    generators: &[V],
) -> Result<Subspace, LatticeError> {
    Subspace::span(q, n, generators)
}

pub fn parse_vector(q: FieldOrder, n: usize, word: &str) -> Result<Vec<Scalar>, LatticeError> {
    let mut v = Vec::with_capacity(n);
    for c in word.chars() {
        let d = c
            .to_digit(10)
            .filter(|&d| d < q.get() as u32)
            .ok_or(LatticeError::BadDigit { digit: c, q: q.get() })?;
        v.push(d as Scalar);
    }
    if v.len() != n {
        return Err(LatticeError::VectorLength { expected: n, found: v.len() });
    }
    Ok(v)
}

/// Reduced row echelon form; zero rows are dropped.
fn rref(q: FieldOrder, n: usize, mut rows: Vec<Vec<Scalar>>) -> Vec<Vec<Scalar>> {
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = q.inv(rows[rank][col]).expect("nonzero pivot");
        for x in rows[rank].iter_mut() {
            *x = q.mul(*x, inv);
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            let c = row[col];
            if r != rank && c != 0 {
                for (x, &p) in row.iter_mut().zip(&pivot) {
                    *x = q.sub(*x, q.mul(c, p));
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    rows
}

/// Reduces `v` against an RREF basis in place.
fn reduce(q: FieldOrder, basis: &[Vec<Scalar>], v: &mut [Scalar]) {
    for row in basis {
        let p = row.iter().position(|&x| x != 0).unwrap();
        let c = v[p];
        if c != 0 {
            for (x, &b) in v.iter_mut().zip(row) {
                *x = q.sub(*x, q.mul(c, b));
            }
        }
    }
}

/// Number of `k`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(n: usize, k: usize, q: u32) -> u128 {
    if k > n {
        return 0;
    }
    // [m, j] = [m-1, j-1] + q^j [m-1, j]
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for m in 1..=n {
        for j in (1..=k.min(m)).rev() {
            row[j] = row[j - 1].saturating_add((q as u128).saturating_pow(j as u32).saturating_mul(row[j]));
        }
    }
    row[k]
}

/// Total number of subspaces of `F_q^n`.
pub fn subspace_count(n: usize, q: u32) -> u128 {
    (0..=n).map(|k| gaussian_binomial(n, k, q)).fold(0u128, |a, b| a.saturating_add(b))
}

/// All subspaces (of dimension `k` when given) in the deterministic lattice
/// order.
pub fn enumerate(q: FieldOrder, n: usize, k: Option<usize>) -> Result<Vec<Subspace>, LatticeError> {
    enumerate_with_limit(q, n, k, DEFAULT_SUBSPACE_LIMIT)
}

pub fn enumerate_with_limit(
    q: FieldOrder,
    n: usize,
    k: Option<usize>,
    limit: u128,
) -> Result<Vec<Subspace>, LatticeError> {
    let dims: Vec<usize> = match k {
        Some(k) if k > n => return Err(LatticeError::DimensionOutOfRange { k, n }),
        Some(k) => vec![k],
        None => (0..=n).collect(),
    };
    let count: u128 = dims.iter().map(|&d| gaussian_binomial(n, d, q.get() as u32)).sum();
    if count > limit {
        return Err(LatticeError::TooLarge { q: q.get(), n, count, limit });
    }
    let mut out = Vec::with_capacity(count as usize);
    for d in dims {
        let start = out.len();
        for pivots in combinations(n, d) {
            push_rref_with_pivots(q, n, &pivots, &mut out);
        }
        out[start..].sort();
    }
    Ok(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Emits every RREF matrix with the given pivot columns.
fn push_rref_with_pivots(q: FieldOrder, n: usize, pivots: &[usize], out: &mut Vec<Subspace>) {
    // free slots: (row, col) with col > pivot[row] and col not a pivot
    let mut slots = Vec::new();
    for (r, &p) in pivots.iter().enumerate() {
        for c in (p + 1)..n {
            if !pivots.contains(&c) {
                slots.push((r, c));
            }
        }
    }
    let mut base = vec![vec![0 as Scalar; n]; pivots.len()];
    for (r, &p) in pivots.iter().enumerate() {
        base[r][p] = 1;
    }
    let mut digits = vec![0 as Scalar; slots.len()];
    loop {
        let mut rows = base.clone();
        for (&(r, c), &d) in slots.iter().zip(&digits) {
            rows[r][c] = d;
        }
        out.push(Subspace { q, n, rows });
        // odometer increment
        let mut i = 0;
        loop {
            if i == digits.len() {
                return;
            }
            digits[i] += 1;
            if digits[i] == q.get() {
                digits[i] = 0;
                i += 1;
            } else {
                break;
            }
        }
    }
}

/// Index-level lookup tables, built on first use.
struct Tables {
    join: Vec<u32>,
    meet: Vec<u32>,
    perp: Vec<u32>,
    below: Vec<FixedBitSet>,
    above: Vec<FixedBitSet>,
    lower_covers: Vec<Vec<u32>>,
    upper_covers: Vec<Vec<u32>>,
}

/// The lattice `L(F_q^n)` with every member enumerated.
pub struct SubspaceLattice {
    q: FieldOrder,
    n: usize,
    subspaces: Vec<Subspace>,
    index: HashMap<Subspace, u32>,
    by_dim: Vec<Range<usize>>,
    tables: OnceLock<Tables>,
    automorphisms: OnceLock<Vec<Vec<u32>>>,
}

impl fmt::Debug for SubspaceLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L(F_{}^{}) [{} subspaces]", self.q, self.n, self.subspaces.len())
    }
}

impl SubspaceLattice {
    pub fn new(q: FieldOrder, n: usize) -> Result<Self, LatticeError> {
        Self::with_limit(q, n, DEFAULT_SUBSPACE_LIMIT)
    }

    pub fn with_limit(q: FieldOrder, n: usize, limit: u128) -> Result<Self, LatticeError> {
        let subspaces = enumerate_with_limit(q, n, None, limit)?;
        let index = subspaces.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
        let mut by_dim = Vec::with_capacity(n + 1);
        let mut start = 0;
        for k in 0..=n {
            let end = start + gaussian_binomial(n, k, q.get() as u32) as usize;
            by_dim.push(start..end);
            start = end;
        }
        Ok(SubspaceLattice {
            q,
            n,
            subspaces,
            index,
            by_dim,
            tables: OnceLock::new(),
            automorphisms: OnceLock::new(),
        })
    }

    /// Process-wide shared lattice for `(q, n)` under the default limit.
    pub fn shared(q: FieldOrder, n: usize) -> Result<Arc<Self>, LatticeError> {
        type Cache = Mutex<HashMap<(FieldOrder, usize), Arc<SubspaceLattice>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(l) = cache.lock().unwrap().get(&(q, n)) {
            return Ok(Arc::clone(l));
        }
        let lattice = Arc::new(Self::new(q, n)?);
        let mut guard = cache.lock().unwrap();
        Ok(Arc::clone(guard.entry((q, n)).or_insert(lattice)))
    }

    pub fn q(&self) -> FieldOrder {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    pub fn subspace(&self, i: usize) -> &Subspace {
        &self.subspaces[i]
    }

    pub fn index_of(&self, s: &Subspace) -> Option<usize> {
        self.index.get(s).map(|&i| i as usize)
    }

    pub fn zero(&self) -> &Subspace {
        &self.subspaces[0]
    }

    pub fn ground(&self) -> &Subspace {
        self.subspaces.last().unwrap()
    }

    pub const ZERO: usize = 0;

    pub fn ground_index(&self) -> usize {
        self.subspaces.len() - 1
    }

    pub fn dim(&self, i: usize) -> usize {
        self.subspaces[i].dim()
    }

    /// Index range of the `k`-dimensional subspaces; empty when `k > n`.
    pub fn of_dim(&self, k: usize) -> Range<usize> {
        self.by_dim.get(k).cloned().unwrap_or(0..0)
    }

    pub fn lines(&self) -> Range<usize> {
        self.of_dim(1)
    }

    /// Codimension-one subspaces. The zero space has none.
    pub fn hyperplane_indices(&self) -> Range<usize> {
        match self.n {
            0 => 0..0,
            n => self.of_dim(n - 1),
        }
    }

    pub fn hyperplanes(&self) -> Vec<Subspace> {
        self.subspaces[self.hyperplane_indices()].to_vec()
    }

    pub fn member(&self, s: &Subspace) -> Result<usize, LatticeError> {
        if s.q != self.q || s.n != self.n {
            return Err(LatticeError::AmbientMismatch(s.q.get(), s.n, self.q.get(), self.n));
        }
        Ok(self.index_of(s).expect("canonical subspace is enumerated"))
    }

    pub fn parse(&self, literal: &str) -> Result<usize, LatticeError> {
        let s = Subspace::parse(self.q, self.n, literal)?;
        self.member(&s)
    }

    fn tables(&self) -> &Tables {
        self.tables.get_or_init(|| self.build_tables())
    }

    fn build_tables(&self) -> Tables {
        let len = self.len();
        let perp: Vec<u32> =
            self.subspaces.iter().map(|s| self.index[&s.perp()]).collect();
        let mut join = vec![0u32; len * len];
        for i in 0..len {
            join[i * len + i] = i as u32;
            for j in (i + 1)..len {
                let s = self.subspaces[i].sum(&self.subspaces[j]).unwrap();
                let k = self.index[&s];
                join[i * len + j] = k;
                join[j * len + i] = k;
            }
        }
        let mut meet = vec![0u32; len * len];
        for i in 0..len {
            for j in 0..len {
                let pj = join[perp[i] as usize * len + perp[j] as usize];
                meet[i * len + j] = perp[pj as usize];
            }
        }
        let mut below = vec![FixedBitSet::with_capacity(len); len];
        let mut above = vec![FixedBitSet::with_capacity(len); len];
        for i in 0..len {
            for j in 0..len {
                if join[i * len + j] as usize == j {
                    below[j].insert(i);
                    above[i].insert(j);
                }
            }
        }
        let mut lower_covers = vec![Vec::new(); len];
        let mut upper_covers = vec![Vec::new(); len];
        for j in 0..len {
            let d = self.dim(j);
            for i in below[j].ones() {
                if self.dim(i) + 1 == d {
                    lower_covers[j].push(i as u32);
                    upper_covers[i].push(j as u32);
                }
            }
        }
        Tables { join, meet, perp, below, above, lower_covers, upper_covers }
    }

    /// Index of `A + B`.
    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.tables().join[a * self.len() + b] as usize
    }

    /// Index of `A ∩ B`.
    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.tables().meet[a * self.len() + b] as usize
    }

    /// True iff `A ⊆ B`.
    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.tables().below[b].contains(a)
    }

    #[inline]
    pub fn perp_index(&self, a: usize) -> usize {
        self.tables().perp[a] as usize
    }

    /// Indices of all subspaces of `A` (including `A`).
    pub fn below(&self, a: usize) -> &FixedBitSet {
        &self.tables().below[a]
    }

    /// Indices of all superspaces of `A` (including `A`).
    pub fn above(&self, a: usize) -> &FixedBitSet {
        &self.tables().above[a]
    }

    /// Codimension-one subspaces of `A`.
    pub fn lower_covers(&self, a: usize) -> &[u32] {
        &self.tables().lower_covers[a]
    }

    /// Superspaces of `A` of one more dimension.
    pub fn upper_covers(&self, a: usize) -> &[u32] {
        &self.tables().upper_covers[a]
    }

    /// The interval `[A, B]`.
    pub fn interval(&self, lower: &Subspace, upper: &Subspace) -> Result<Interval, LatticeError> {
        let a = self.member(lower)?;
        let b = self.member(upper)?;
        if !self.leq(a, b) {
            return Err(LatticeError::NotNested { lower: lower.literal(), upper: upper.literal() });
        }
        let members = self.interval_indices(a, b).map(|i| self.subspaces[i].clone()).collect();
        Ok(Interval { lower: lower.clone(), upper: upper.clone(), members })
    }

    pub fn interval_indices(&self, a: usize, b: usize) -> impl Iterator<Item = usize> + '_ {
        let up = self.above(a);
        self.below(b).ones().filter(move |&i| up.contains(i))
    }

    /// Index permutations induced by lattice automorphisms, identity first.
    ///
    /// For `n = 2` these are the permutations of the atoms; for `n = 3` the
    /// maps induced by invertible matrices.
    pub fn automorphisms(&self) -> Result<&[Vec<u32>], LatticeError> {
        let q = self.q.get();
        if self.n > 3 || !(q == 2 || q == 3) {
            return Err(LatticeError::AutomorphismGuard { q, n: self.n });
        }
        Ok(self.automorphisms.get_or_init(|| self.build_automorphisms()))
    }

    fn build_automorphisms(&self) -> Vec<Vec<u32>> {
        let identity: Vec<u32> = (0..self.len() as u32).collect();
        match self.n {
            0 | 1 => vec![identity],
            2 => {
                let atoms: Vec<u32> = self.lines().map(|i| i as u32).collect();
                let mut out = Vec::new();
                for perm in permutations(&atoms) {
                    let mut p = identity.clone();
                    for (&from, &to) in atoms.iter().zip(&perm) {
                        p[from as usize] = to;
                    }
                    out.push(p);
                }
                out
            }
            _ => {
                let mut seen = HashSet::new();
                let mut out = Vec::new();
                seen.insert(identity.clone());
                out.push(identity);
                for m in invertible_matrices(self.q, self.n) {
                    let p: Vec<u32> = self
                        .subspaces
                        .iter()
                        .map(|s| {
                            let rows: Vec<Vec<Scalar>> =
                                s.rows.iter().map(|r| vec_mat(self.q, r, &m)).collect();
                            self.index[&Subspace::from_rows_unchecked(self.q, self.n, rows)]
                        })
                        .collect();
                    if seen.insert(p.clone()) {
                        out.push(p);
                    }
                }
                out
            }
        }
    }
}

fn permutations(items: &[u32]) -> Vec<Vec<u32>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn vec_mat(q: FieldOrder, v: &[Scalar], m: &[Vec<Scalar>]) -> Vec<Scalar> {
    let n = m[0].len();
    let mut out = vec![0; n];
    for (i, &c) in v.iter().enumerate() {
        if c != 0 {
            for j in 0..n {
                out[j] = q.add(out[j], q.mul(c, m[i][j]));
            }
        }
    }
    out
}

fn invertible_matrices(q: FieldOrder, n: usize) -> Vec<Vec<Vec<Scalar>>> {
    let vectors: Vec<Vec<Scalar>> = {
        let full = Subspace::full(q, n);
        let mut v = full.vectors();
        v.sort();
        v
    };
    let mut out = Vec::new();
    let mut cur: Vec<Vec<Scalar>> = Vec::new();
    fn rec(
        q: FieldOrder,
        n: usize,
        vectors: &[Vec<Scalar>],
        cur: &mut Vec<Vec<Scalar>>,
        out: &mut Vec<Vec<Vec<Scalar>>>,
    ) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let span = Subspace::from_rows_unchecked(q, n, cur.clone());
        for v in vectors {
            if !span.contains_vector(v) {
                cur.push(v.clone());
                rec(q, n, vectors, cur, out);
                cur.pop();
            }
        }
    }
    rec(q, n, &vectors, &mut cur, &mut out);
    out
}

/// The interval `[lower, upper]` of a lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lower: Subspace,
    pub upper: Subspace,
    pub members: Vec<Subspace>,
}

/// Linear surjection `F_q^n -> F_q^m` with kernel `X`, `m = n - dim X`.
///
/// The basis of `X` is extended by the lowest-index unit vectors outside the
/// running span; the coordinates along those added vectors are the image.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    kernel: Subspace,
    complement: Vec<Vec<Scalar>>,
    // inverse of the basis matrix [kernel rows; complement rows]
    inverse: Vec<Vec<Scalar>>,
}

impl QuotientMap {
    pub fn new(kernel: &Subspace) -> Self {
        let q = kernel.q;
        let n = kernel.n;
        let mut basis = kernel.rows.clone();
        let mut complement = Vec::new();
        for i in 0..n {
            if basis.len() == n {
                break;
            }
            let mut e = vec![0; n];
            e[i] = 1;
            let span = Subspace::from_rows_unchecked(q, n, basis.clone());
            if !span.contains_vector(&e) {
                basis.push(e.clone());
                complement.push(e);
            }
        }
        let inverse = invert(q, &basis);
        QuotientMap { kernel: kernel.clone(), complement, inverse }
    }

    pub fn kernel(&self) -> &Subspace {
        &self.kernel
    }

    pub fn quotient_dim(&self) -> usize {
        self.complement.len()
    }

    /// Lifts of the quotient's standard basis vectors.
    pub fn complement(&self) -> &[Vec<Scalar>] {
        &self.complement
    }

    pub fn project_vector(&self, v: &[Scalar]) -> Vec<Scalar> {
        let coeffs = vec_mat(self.kernel.q, v, &self.inverse);
        coeffs[self.kernel.dim()..].to_vec()
    }

    /// `π(A)`.
    pub fn push(&self, a: &Subspace) -> Result<Subspace, LatticeError> {
        self.kernel.same_ambient(a)?;
        let rows = a.rows.iter().map(|r| self.project_vector(r)).collect();
        Ok(Subspace::from_rows_unchecked(self.kernel.q, self.quotient_dim(), rows))
    }

    /// `π⁻¹(W)`, a member of `[X, E]`.
    pub fn pull(&self, w: &Subspace) -> Result<Subspace, LatticeError> {
        let q = self.kernel.q;
        if w.q != q || w.n != self.quotient_dim() {
            return Err(LatticeError::AmbientMismatch(w.q.get(), w.n, q.get(), self.quotient_dim()));
        }
        let mut rows = self.kernel.rows.clone();
        for r in &w.rows {
            rows.push(vec_mat(q, r, &self.complement));
        }
        Ok(Subspace::from_rows_unchecked(q, self.kernel.n, rows))
    }
}

/// Coordinate embedding `F_q^k -> X ⊆ F_q^n` along the canonical basis of `X`.
#[derive(Debug, Clone)]
pub struct Embedding {
    image: Subspace,
    pivots: Vec<usize>,
}

impl Embedding {
    pub fn new(image: &Subspace) -> Self {
        Embedding { image: image.clone(), pivots: image.pivots() }
    }

    pub fn image(&self) -> &Subspace {
        &self.image
    }

    pub fn source_dim(&self) -> usize {
        self.image.dim()
    }

    /// `ι(A)` for `A ⊆ F_q^k`.
    pub fn push(&self, a: &Subspace) -> Result<Subspace, LatticeError> {
        let q = self.image.q;
        if a.q != q || a.n != self.source_dim() {
            return Err(LatticeError::AmbientMismatch(a.q.get(), a.n, q.get(), self.source_dim()));
        }
        let rows = a.rows.iter().map(|r| vec_mat(q, r, &self.image.rows)).collect();
        Ok(Subspace::from_rows_unchecked(q, self.image.n, rows))
    }

    /// Coordinates of a subspace of `X`.
    pub fn pull(&self, a: &Subspace) -> Result<Subspace, LatticeError> {
        if !self.image.contains(a)? {
            return Err(LatticeError::NotNested { lower: a.literal(), upper: self.image.literal() });
        }
        let rows = a.rows.iter().map(|r| self.pivots.iter().map(|&p| r[p]).collect()).collect();
        Ok(Subspace::from_rows_unchecked(self.image.q, self.source_dim(), rows))
    }
}

fn invert(q: FieldOrder, m: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let n = m.len();
    let mut aug: Vec<Vec<Scalar>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| (i == j) as Scalar));
            row
        })
        .collect();
    let reduced = rref(q, 2 * n, std::mem::take(&mut aug));
    reduced.into_iter().map(|r| r[n..].to_vec()).collect()
}
