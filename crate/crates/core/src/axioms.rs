//! Checkers for the rank, independence, basis and spanning space axioms.
//!
//! Every checker scans the lattice in its deterministic order and stops at
//! the first violating tuple, which becomes the report's witness. The
//! witness roles follow the letters used in the axiom statements.

use std::cell::OnceCell;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::family::SubspaceFamily;
use crate::lattice::{Subspace, SubspaceLattice};
use crate::qmatroid::RankFunction;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("unknown axiom '{0}'")]
    Unknown(String),
    #[error("unknown maximality mode '{0}' (expected dimension or inclusion)")]
    UnknownMode(String),
    #[error("axiom {axiom} does not apply to {kind} presentations")]
    WrongKind { axiom: AxiomId, kind: AxiomKind },
}

/// Which presentation an axiom constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomKind {
    Rank,
    Independent,
    Bases,
    Spanning,
}

impl fmt::Display for AxiomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AxiomKind::Rank => "rank",
            AxiomKind::Independent => "independent",
            AxiomKind::Bases => "bases",
            AxiomKind::Spanning => "spanning",
        })
    }
}

impl FromStr for AxiomKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rank" => Ok(AxiomKind::Rank),
            "independent" => Ok(AxiomKind::Independent),
            "bases" => Ok(AxiomKind::Bases),
            "spanning" => Ok(AxiomKind::Spanning),
            _ => Err(format!("unknown presentation '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomId {
    R1,
    R2,
    R3,
    I1,
    I2,
    I3,
    I4,
    /// (I4''): single-line form of (I4).
    I4pp,
    NI3,
    B1,
    B2,
    B3,
    B4,
    /// (B4'): `J ⊆ I + B`.
    B4p,
    /// (B4''): `J ⊆ x + I`.
    B4pp,
    NB3,
    S1,
    S2,
    S3,
    S4,
    NS3,
}

impl AxiomId {
    pub const ALL: [AxiomId; 21] = [
        AxiomId::R1,
        AxiomId::R2,
        AxiomId::R3,
        AxiomId::I1,
        AxiomId::I2,
        AxiomId::I3,
        AxiomId::I4,
        AxiomId::I4pp,
        AxiomId::NI3,
        AxiomId::B1,
        AxiomId::B2,
        AxiomId::B3,
        AxiomId::B4,
        AxiomId::B4p,
        AxiomId::B4pp,
        AxiomId::NB3,
        AxiomId::S1,
        AxiomId::S2,
        AxiomId::S3,
        AxiomId::S4,
        AxiomId::NS3,
    ];

    pub fn kind(self) -> AxiomKind {
        use AxiomId::*;
        match self {
            R1 | R2 | R3 => AxiomKind::Rank,
            I1 | I2 | I3 | I4 | I4pp | NI3 => AxiomKind::Independent,
            B1 | B2 | B3 | B4 | B4p | B4pp | NB3 => AxiomKind::Bases,
            S1 | S2 | S3 | S4 | NS3 => AxiomKind::Spanning,
        }
    }

    pub fn of_kind(kind: AxiomKind) -> impl Iterator<Item = AxiomId> {
        Self::ALL.into_iter().filter(move |a| a.kind() == kind)
    }

    pub fn name(self) -> &'static str {
        use AxiomId::*;
        match self {
            R1 => "R1",
            R2 => "R2",
            R3 => "R3",
            I1 => "I1",
            I2 => "I2",
            I3 => "I3",
            I4 => "I4",
            I4pp => "I4pp",
            NI3 => "nI3",
            B1 => "B1",
            B2 => "B2",
            B3 => "B3",
            B4 => "B4",
            B4p => "B4p",
            B4pp => "B4pp",
            NB3 => "nB3",
            S1 => "S1",
            S2 => "S2",
            S3 => "S3",
            S4 => "S4",
            NS3 => "nS3",
        }
    }

    /// Parses a comma separated list such as `I1,I2,nI3`.
    pub fn parse_list(s: &str) -> Result<Vec<AxiomId>, AxiomError> {
        s.split(',').filter(|w| !w.trim().is_empty()).map(|w| w.trim().parse()).collect()
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomId {
    type Err = AxiomError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().replace("''", "pp").replace('\'', "p");
        AxiomId::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(&norm))
            .ok_or_else(|| AxiomError::Unknown(s.to_string()))
    }
}

/// How "maximal member" (and dually "minimal member") is read in
/// (I4), (I4''), (S4) and the basis-intersection axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    /// Largest (smallest) dimension among the candidates.
    #[default]
    Dimension,
    /// Maximal (minimal) under inclusion among the candidates.
    Inclusion,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Dimension => "dimension",
            Mode::Inclusion => "inclusion",
        })
    }
}

impl FromStr for Mode {
    type Err = AxiomError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dimension" => Ok(Mode::Dimension),
            "inclusion" => Ok(Mode::Inclusion),
            _ => Err(AxiomError::UnknownMode(s.to_string())),
        }
    }
}

/// Named subspaces that violate an axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness(pub Vec<(&'static str, Subspace)>);

impl Witness {
    pub fn get(&self, role: &str) -> Option<&Subspace> {
        self.0.iter().find(|(r, _)| *r == role).map(|(_, s)| s)
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.0.iter().map(|(role, s)| format!("{role}={}", s.literal_with(","))).collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub axiom: AxiomId,
    pub pass: bool,
    pub witness: Option<Witness>,
    pub mode: Mode,
}

impl AxiomReport {
    fn pass(axiom: AxiomId, mode: Mode) -> Self {
        AxiomReport { axiom, pass: true, witness: None, mode }
    }

    fn fail(axiom: AxiomId, mode: Mode, roles: Vec<(&'static str, Subspace)>) -> Self {
        AxiomReport { axiom, pass: false, witness: Some(Witness(roles)), mode }
    }

    /// `<id> PASS` or `<id> FAIL <role>=<literal> ...`.
    pub fn line(&self) -> String {
        match &self.witness {
            None => format!("{} PASS", self.axiom),
            Some(w) if w.0.is_empty() => format!("{} FAIL", self.axiom),
            Some(w) => format!("{} FAIL {w}", self.axiom),
        }
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.line())
    }
}

pub fn check_rank_axiom(id: AxiomId, rank: &RankFunction) -> Result<AxiomReport, AxiomError> {
    if id.kind() != AxiomKind::Rank {
        return Err(AxiomError::WrongKind { axiom: id, kind: AxiomKind::Rank });
    }
    let l = rank.lattice();
    let r = |i: usize| rank.value_at(i) as i64;
    let sub = |i: usize| l.subspace(i).clone();
    let mode = Mode::Dimension;
    let len = l.len();
    match id {
        AxiomId::R1 => {
            for a in 0..len {
                if r(a) > l.dim(a) as i64 {
                    return Ok(AxiomReport::fail(id, mode, vec![("A", sub(a))]));
                }
            }
        }
        AxiomId::R2 => {
            for b in 0..len {
                for a in l.below(b).ones() {
                    if r(a) > r(b) {
                        return Ok(AxiomReport::fail(id, mode, vec![("A", sub(a)), ("B", sub(b))]));
                    }
                }
            }
        }
        AxiomId::R3 => {
            for a in 0..len {
                for b in a..len {
                    if r(l.join(a, b)) + r(l.meet(a, b)) > r(a) + r(b) {
                        return Ok(AxiomReport::fail(id, mode, vec![("A", sub(a)), ("B", sub(b))]));
                    }
                }
            }
        }
        _ => unreachable!(),
    }
    Ok(AxiomReport::pass(id, mode))
}

pub fn check_independence_axiom(
    id: AxiomId,
    family: &SubspaceFamily,
    mode: Mode,
) -> Result<AxiomReport, AxiomError> {
    expect_kind(id, AxiomKind::Independent)?;
    FamilyChecker::new(family, mode).check(id)
}

pub fn check_basis_axiom(
    id: AxiomId,
    family: &SubspaceFamily,
    mode: Mode,
) -> Result<AxiomReport, AxiomError> {
    expect_kind(id, AxiomKind::Bases)?;
    FamilyChecker::new(family, mode).check(id)
}

pub fn check_spanning_axiom(
    id: AxiomId,
    family: &SubspaceFamily,
    mode: Mode,
) -> Result<AxiomReport, AxiomError> {
    expect_kind(id, AxiomKind::Spanning)?;
    FamilyChecker::new(family, mode).check(id)
}

fn expect_kind(id: AxiomId, kind: AxiomKind) -> Result<(), AxiomError> {
    if id.kind() == kind {
        Ok(())
    } else {
        Err(AxiomError::WrongKind { axiom: id, kind })
    }
}

/// Checks several axioms against one family, sharing precomputed tables.
pub struct FamilyChecker<'a> {
    family: &'a SubspaceFamily,
    l: &'a SubspaceLattice,
    mode: Mode,
    /// Largest dimension of a member inside each subspace, -1 if none.
    rank_below: OnceCell<Vec<i32>>,
    /// Smallest dimension of a member containing each subspace, `len` if none.
    corank_above: OnceCell<Vec<i32>>,
    /// Largest dimension of `B ∩ A` over members `B`, per `A`.
    meet_rank: OnceCell<Vec<i32>>,
    max_members: OnceCell<Vec<Vec<u32>>>,
    min_members: OnceCell<Vec<Vec<u32>>>,
    max_meets: OnceCell<Vec<Vec<u32>>>,
}

impl<'a> FamilyChecker<'a> {
    pub fn new(family: &'a SubspaceFamily, mode: Mode) -> Self {
        FamilyChecker {
            family,
            l: family.lattice(),
            mode,
            rank_below: OnceCell::new(),
            corank_above: OnceCell::new(),
            meet_rank: OnceCell::new(),
            max_members: OnceCell::new(),
            min_members: OnceCell::new(),
            max_meets: OnceCell::new(),
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn check(&self, id: AxiomId) -> Result<AxiomReport, AxiomError> {
        use AxiomId::*;
        let roles = match id {
            R1 | R2 | R3 => return Err(AxiomError::WrongKind { axiom: id, kind: AxiomKind::Rank }),
            I1 | B1 => {
                if self.family.is_empty() {
                    Some(vec![])
                } else {
                    None
                }
            }
            I2 => self.downward_closed(),
            I3 => self.i3(),
            I4 => self.i4(),
            I4pp => self.i4pp(),
            NI3 => self.ni3(),
            B2 => self.b2(),
            B3 => self.b3(),
            B4 => self.b4(),
            B4p => self.b4p(),
            B4pp => self.b4pp(),
            NB3 => self.nb3(),
            S1 => {
                let e = self.l.ground_index();
                if self.family.contains_index(e) {
                    None
                } else {
                    Some(vec![("E", self.sub(e))])
                }
            }
            S2 => self.upward_closed(),
            S3 => self.s3(),
            S4 => self.s4(),
            NS3 => self.ns3(),
        };
        Ok(match roles {
            None => AxiomReport::pass(id, self.mode),
            Some(r) => AxiomReport::fail(id, self.mode, r),
        })
    }

    /// Checks each axiom in turn.
    pub fn check_all(&self, ids: &[AxiomId]) -> Result<Vec<AxiomReport>, AxiomError> {
        ids.iter().map(|&id| self.check(id)).collect()
    }

    /// True iff every listed axiom holds; stops at the first failure.
    pub fn holds_all(&self, ids: &[AxiomId]) -> Result<bool, AxiomError> {
        for &id in ids {
            if !self.check(id)?.pass {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn sub(&self, i: usize) -> Subspace {
        self.l.subspace(i).clone()
    }

    fn has(&self, i: usize) -> bool {
        self.family.contains_index(i)
    }

    fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.family.indices()
    }

    fn rank_below(&self) -> &[i32] {
        self.rank_below.get_or_init(|| {
            let l = self.l;
            let mut r = vec![-1i32; l.len()];
            // lattice order lists lower covers before their upper covers
            for a in 0..l.len() {
                r[a] = if self.has(a) {
                    l.dim(a) as i32
                } else {
                    l.lower_covers(a).iter().map(|&b| r[b as usize]).max().unwrap_or(-1)
                };
            }
            r
        })
    }

    fn corank_above(&self) -> &[i32] {
        self.corank_above.get_or_init(|| {
            let l = self.l;
            let none = l.len() as i32;
            let mut r = vec![none; l.len()];
            for a in (0..l.len()).rev() {
                r[a] = if self.has(a) {
                    l.dim(a) as i32
                } else {
                    l.upper_covers(a).iter().map(|&b| r[b as usize]).min().unwrap_or(none)
                };
            }
            r
        })
    }

    fn meet_rank(&self) -> &[i32] {
        self.meet_rank.get_or_init(|| {
            let l = self.l;
            (0..l.len())
                .map(|a| self.members().map(|b| l.dim(l.meet(a, b)) as i32).max().unwrap_or(-1))
                .collect()
        })
    }

    /// Maximal members inside each subspace, per mode.
    fn max_members(&self) -> &[Vec<u32>] {
        self.max_members.get_or_init(|| {
            let l = self.l;
            let rank = self.rank_below();
            (0..l.len())
                .map(|a| {
                    let inside: Vec<usize> = self.members().filter(|&m| l.leq(m, a)).collect();
                    let keep = |&m: &usize| match self.mode {
                        Mode::Dimension => l.dim(m) as i32 == rank[a],
                        Mode::Inclusion => !inside.iter().any(|&o| o != m && l.leq(m, o)),
                    };
                    inside.iter().copied().filter(|m| keep(m)).map(|m| m as u32).collect()
                })
                .collect()
        })
    }

    /// Minimal members containing each subspace, per mode.
    fn min_members(&self) -> &[Vec<u32>] {
        self.min_members.get_or_init(|| {
            let l = self.l;
            let corank = self.corank_above();
            (0..l.len())
                .map(|a| {
                    let outside: Vec<usize> = self.members().filter(|&m| l.leq(a, m)).collect();
                    let keep = |&m: &usize| match self.mode {
                        Mode::Dimension => l.dim(m) as i32 == corank[a],
                        Mode::Inclusion => !outside.iter().any(|&o| o != m && l.leq(o, m)),
                    };
                    outside.iter().copied().filter(|m| keep(m)).map(|m| m as u32).collect()
                })
                .collect()
        })
    }

    /// Maximal intersections `B ∩ A` of members with each subspace, per mode.
    fn max_meets(&self) -> &[Vec<u32>] {
        self.max_meets.get_or_init(|| {
            let l = self.l;
            let rank = self.meet_rank();
            (0..l.len())
                .map(|a| {
                    let mut meets: Vec<usize> = self.members().map(|b| l.meet(a, b)).collect();
                    meets.sort_unstable();
                    meets.dedup();
                    let keep = |&m: &usize| match self.mode {
                        Mode::Dimension => l.dim(m) as i32 == rank[a],
                        Mode::Inclusion => !meets.iter().any(|&o| o != m && l.leq(m, o)),
                    };
                    meets.iter().copied().filter(|m| keep(m)).map(|m| m as u32).collect()
                })
                .collect()
        })
    }

    /// Some member of `cands` lies inside `bound`.
    fn some_below(&self, cands: &[u32], bound: usize) -> bool {
        cands.iter().any(|&k| self.l.leq(k as usize, bound))
    }

    /// Some member of `cands` contains `bound`.
    fn some_above(&self, cands: &[u32], bound: usize) -> bool {
        cands.iter().any(|&k| self.l.leq(bound, k as usize))
    }

    fn downward_closed(&self) -> Option<Vec<(&'static str, Subspace)>> {
        for j in self.members() {
            if let Some(i) = self.l.below(j).ones().find(|&i| !self.has(i)) {
                return Some(vec![("I", self.sub(i)), ("J", self.sub(j))]);
            }
        }
        None
    }

    fn upward_closed(&self) -> Option<Vec<(&'static str, Subspace)>> {
        for j in self.members() {
            if let Some(i) = self.l.above(j).ones().find(|&i| !self.has(i)) {
                return Some(vec![("I", self.sub(i)), ("J", self.sub(j))]);
            }
        }
        None
    }

    fn i3(&self) -> Option<Vec<(&'static str, Subspace)>> {
        let l = self.l;
        for i in self.members() {
            for j in self.members().filter(|&j| l.dim(i) < l.dim(j)) {
                let ok = l
                    .lines()
                    .any(|x| l.leq(x, j) && !l.leq(x, i) && self.has(l.join(i, x)));
                if !ok {
                    return Some(vec![("I", self.sub(i)), ("J", self.sub(j))]);
                }
            }
        }
        None
    }

    fn i4(&self) -> Option<Vec<(&'static str, Subspace)>> {
        let l = self.l;
        let maxes = self.max_members();
        let rank = self.rank_below();
        for a in 0..l.len() {
            for b in a..l.len() {
                let ab = l.join(a, b);
                for &i in &maxes[a] {
                    for &j in &maxes[b] {
                        let ij = l.join(i as usize, j as usize);
                        let ok = match self.mode {
                            // members inside I+J reach the rank of A+B
                            Mode::Dimension => rank[ij] == rank[ab],
                            Mode::Inclusion => self.some_below(&maxes[ab], ij),
                        };
                        if !ok {
                            return Some(vec![
                                ("A", self.sub(a)),
                                ("B", self.sub(b)),
                                ("I", self.sub(i as usize)),
                                ("J", self.sub(j as usize)),
                            ]);
                        }
                    }
                }
            }
        }
        None
    }

    fn i4pp(&self) -> Option<Vec<(&'static str, Subspace)>> {
        let l = self.l;
        let maxes = self.max_members();
        let rank = self.rank_below();
        for a in 0..l.len() {
            for &i in &maxes[a] {
                for x in l.lines() {
                    let xa = l.join(x, a);
                    let xi = l.join(x, i as usize);
                    let ok = match self.mode {
                        Mode::Dimension => rank[xi] == rank[xa],
                        Mode::Inclusion => self.some_below(&maxes[xa], xi),
                    };
                    if !ok {
                        return Some(vec![
                            ("A", self.sub(a)),
                            ("I", self.sub(i as usize)),
                            ("x", self.sub(x)),
                        ]);
                    }
                }
            }
        }
        None
    }

    /// Hyperplanes `X ⊇ I` such that `I + x` is a member for every line `x ⊄ X`.
    fn extension_hyperplanes(&self, i: usize) -> Vec<usize> {
        let l = self.l;
        l.hyperplane_indices()
            .filter(|&h| l.leq(i, h))
            .filter(|&h| l.lines().all(|x| l.leq(x, h) || self.has(l.join(i, x))))
            .collect()
    }

    fn ni3(&self) -> Option<Vec<(&'static str, Subspace)>> {
        let l = self.l;
        for i in self.members() {
            let mut good: Option<Vec<usize>> = None;
            for j in self.members().filter(|&j| l.dim(i) < l.dim(j)) {
                let good = good.get_or_insert_with(|| self.extension_hyperplanes(i));
                if !good.iter().any(|&h| !l.leq(j, h)) {
                    return Some(vec![("I", self.sub(i)), ("J", self.sub(j))]);
                }
            }
        }
        None
    }

    fn b2(&self) -> Option<Vec<(&'static str, Subspace)>> {
        for b1 in self.members() {
            for b2 in self.members() {
                if b1 != b2 && self.l.leq(b1, b2) {
                    return Some(vec![("B1", self.sub(b1)), ("B2", self.sub(b2))]);
                }
            }
        }
        None
    }

    fn b3(&self) -> Option<Vec<(&'static str, Subspace)>> {
        let l = self.l;
        for b1 in self.members() {
            for b2 in self.members() {
                let common = l.meet(b1, b2);
                for &a in l.lower_covers(b1) {
                    let a = a as usize;
                    if !l.leq(common, a) {
                        continue;
                    }
                    let ok = l.lines().any(|y| l.leq(y, b2) && self.has(l.join(a, y)));
                    if !ok {
                        return Some(vec![
                            ("B1", self.sub(b1)),
                            ("B2", self.sub(b2)),
                            ("A", self.sub(a)),
                        ]);
                    }
                }
            }
        }
        None
    }

    fn nb3(&self) -> Option<Vec<(&'static str, Subspace)>> {
        let l = self.l;
        for b1 in self.members() {
            for b2 in self.members() {
                let common = l.meet(b1, b2);
                for &a in l.lower_covers(b1) {
                    let a = a as usize;
                    if !l.leq(common, a) {
                        continue;
                    }
                    let ok = self.extension_hyperplanes(a).iter().any(|&h| !l.leq(b2, h));
                    if !ok {
                        return Some(vec![
                            ("B1", self.sub(b1)),
                            ("B2", self.sub(b2)),
                            ("A", self.sub(a)),
                        ]);
                    }
                }
            }
        }
        None
    }

    fn b4(&self) -> Option<Vec<(&'static str, Subspace)>> {
        let l = self.l;
        let meets = self.max_meets();
        let rank = self.meet_rank();
        for a in 0..l.len() {
            for b in a..l.len() {
                let ab = l.join(a, b);
                for &i in &meets[a] {
                    for &j in &meets[b] {
                        let ij = l.join(i as usize, j as usize);
                        let ok = match self.mode {
                            Mode::Dimension => rank[ij] == rank[ab],
                            Mode::Inclusion => self.some_below(&meets[ab], ij),
                        };
                        if !ok {
                            return Some(vec![
                                ("A", self.sub(a)),
                                ("B", self.sub(b)),
                                ("I", self.sub(i as usize)),
                                ("J", self.sub(j as usize)),
                            ]);
                        }
                    }
                }
            }
        }
        None
    }

    fn b4p(&self) -> Option<Vec<(&'static str, Subspace)>> {
        let l = self.l;
        let meets = self.max_meets();
        let rank = self.meet_rank();
        for a in 0..l.len() {
            for b in 0..l.len() {
                let ab = l.join(a, b);
                for &i in &meets[a] {
                    let ib = l.join(i as usize, b);
                    let ok = match self.mode {
                        Mode::Dimension => rank[ib] == rank[ab],
                        Mode::Inclusion => self.some_below(&meets[ab], ib),
                    };
                    if !ok {
                        return Some(vec![
                            ("A", self.sub(a)),
                            ("B", self.sub(b)),
                            ("I", self.sub(i as usize)),
                        ]);
                    }
                }
            }
        }
        None
    }

    fn b4pp(&self) -> Option<Vec<(&'static str, Subspace)>> {
        let l = self.l;
        let meets = self.max_meets();
        let rank = self.meet_rank();
        for a in 0..l.len() {
            for &i in &meets[a] {
                for x in l.lines() {
                    let xa = l.join(x, a);
                    let xi = l.join(x, i as usize);
                    let ok = match self.mode {
                        Mode::Dimension => rank[xi] == rank[xa],
                        Mode::Inclusion => self.some_below(&meets[xa], xi),
                    };
                    if !ok {
                        return Some(vec![
                            ("A", self.sub(a)),
                            ("I", self.sub(i as usize)),
                            ("x", self.sub(x)),
                        ]);
                    }
                }
            }
        }
        None
    }

    fn s3(&self) -> Option<Vec<(&'static str, Subspace)>> {
        let l = self.l;
        for i in self.members() {
            for j in self.members().filter(|&j| l.dim(j) < l.dim(i)) {
                let ok = l
                    .hyperplane_indices()
                    .any(|h| l.leq(j, h) && !l.leq(i, h) && self.has(l.meet(i, h)));
                if !ok {
                    return Some(vec![("I", self.sub(i)), ("J", self.sub(j))]);
                }
            }
        }
        None
    }

    fn s4(&self) -> Option<Vec<(&'static str, Subspace)>> {
        let l = self.l;
        let mins = self.min_members();
        let corank = self.corank_above();
        for a in 0..l.len() {
            for b in a..l.len() {
                let ab = l.meet(a, b);
                for &i in &mins[a] {
                    for &j in &mins[b] {
                        let ij = l.meet(i as usize, j as usize);
                        let ok = match self.mode {
                            Mode::Dimension => corank[ij] == corank[ab],
                            Mode::Inclusion => self.some_above(&mins[ab], ij),
                        };
                        if !ok {
                            return Some(vec![
                                ("A", self.sub(a)),
                                ("B", self.sub(b)),
                                ("I", self.sub(i as usize)),
                                ("J", self.sub(j as usize)),
                            ]);
                        }
                    }
                }
            }
        }
        None
    }

    /// Lines `x ⊆ S` such that `X ∩ S` is a member for every hyperplane `X ∌ x`.
    fn contraction_lines(&self, s: usize) -> Vec<usize> {
        let l = self.l;
        l.lines()
            .filter(|&x| l.leq(x, s))
            .filter(|&x| {
                l.hyperplane_indices().all(|h| l.leq(x, h) || self.has(l.meet(h, s)))
            })
            .collect()
    }

    fn ns3(&self) -> Option<Vec<(&'static str, Subspace)>> {
        let l = self.l;
        for s1 in self.members() {
            let mut good: Option<Vec<usize>> = None;
            for s2 in self.members().filter(|&s2| l.dim(s2) < l.dim(s1)) {
                let good = good.get_or_insert_with(|| self.contraction_lines(s1));
                if !good.iter().any(|&x| !l.leq(x, s2)) {
                    return Some(vec![("S1", self.sub(s1)), ("S2", self.sub(s2))]);
                }
            }
        }
        None
    }
}

/// Re-evaluates the axiom's defining condition on the witness tuple alone,
/// straight from the definitions. Returns true when the tuple indeed
/// violates the axiom.
pub fn witness_violates(report: &AxiomReport, family: &SubspaceFamily) -> bool {
    let Some(w) = &report.witness else {
        return false;
    };
    let l = family.lattice();
    let idx = |role: &str| l.index_of(w.get(role).expect("role present")).expect("member");
    let has = |i: usize| family.contains_index(i);
    let mode = report.mode;
    let lines: Vec<usize> = l.lines().collect();
    let hyperplanes: Vec<usize> = l.hyperplane_indices().collect();
    let members: Vec<usize> = family.indices().collect();
    let maximal = |a: usize| -> Vec<usize> {
        let inside: Vec<usize> = members.iter().copied().filter(|&m| l.leq(m, a)).collect();
        select_extreme(l, &inside, mode, true)
    };
    let minimal = |a: usize| -> Vec<usize> {
        let outside: Vec<usize> = members.iter().copied().filter(|&m| l.leq(a, m)).collect();
        select_extreme(l, &outside, mode, false)
    };
    let max_meets = |a: usize| -> Vec<usize> {
        let mut meets: Vec<usize> = members.iter().map(|&b| l.meet(a, b)).collect();
        meets.sort_unstable();
        meets.dedup();
        select_extreme(l, &meets, mode, true)
    };
    let extends = |base: usize, h: usize| lines.iter().all(|&x| l.leq(x, h) || has(l.join(base, x)));
    use AxiomId::*;
    match report.axiom {
        R1 | R2 | R3 => false,
        I1 | B1 => family.is_empty(),
        S1 => !has(l.ground_index()),
        I2 => {
            let (i, j) = (idx("I"), idx("J"));
            has(j) && l.leq(i, j) && !has(i)
        }
        S2 => {
            let (i, j) = (idx("I"), idx("J"));
            has(j) && l.leq(j, i) && !has(i)
        }
        I3 => {
            let (i, j) = (idx("I"), idx("J"));
            has(i)
                && has(j)
                && l.dim(i) < l.dim(j)
                && !lines.iter().any(|&x| l.leq(x, j) && !l.leq(x, i) && has(l.join(i, x)))
        }
        NI3 => {
            let (i, j) = (idx("I"), idx("J"));
            has(i)
                && has(j)
                && l.dim(i) < l.dim(j)
                && !hyperplanes.iter().any(|&h| l.leq(i, h) && !l.leq(j, h) && extends(i, h))
        }
        I4 => {
            let (a, b, i, j) = (idx("A"), idx("B"), idx("I"), idx("J"));
            let ij = l.join(i, j);
            maximal(a).contains(&i)
                && maximal(b).contains(&j)
                && !maximal(l.join(a, b)).iter().any(|&k| l.leq(k, ij))
        }
        I4pp => {
            let (a, i, x) = (idx("A"), idx("I"), idx("x"));
            let xi = l.join(x, i);
            l.dim(x) == 1
                && maximal(a).contains(&i)
                && !maximal(l.join(x, a)).iter().any(|&k| l.leq(k, xi))
        }
        B2 => {
            let (b1, b2) = (idx("B1"), idx("B2"));
            has(b1) && has(b2) && b1 != b2 && l.leq(b1, b2)
        }
        B3 | NB3 => {
            let (b1, b2, a) = (idx("B1"), idx("B2"), idx("A"));
            let premise = has(b1)
                && has(b2)
                && l.leq(a, b1)
                && l.dim(a) + 1 == l.dim(b1)
                && l.leq(l.meet(b1, b2), a);
            let rescued = if report.axiom == B3 {
                lines.iter().any(|&y| l.leq(y, b2) && has(l.join(a, y)))
            } else {
                hyperplanes.iter().any(|&h| l.leq(a, h) && !l.leq(b2, h) && extends(a, h))
            };
            premise && !rescued
        }
        B4 => {
            let (a, b, i, j) = (idx("A"), idx("B"), idx("I"), idx("J"));
            let ij = l.join(i, j);
            max_meets(a).contains(&i)
                && max_meets(b).contains(&j)
                && !max_meets(l.join(a, b)).iter().any(|&k| l.leq(k, ij))
        }
        B4p => {
            let (a, b, i) = (idx("A"), idx("B"), idx("I"));
            let ib = l.join(i, b);
            max_meets(a).contains(&i) && !max_meets(l.join(a, b)).iter().any(|&k| l.leq(k, ib))
        }
        B4pp => {
            let (a, i, x) = (idx("A"), idx("I"), idx("x"));
            let xi = l.join(x, i);
            l.dim(x) == 1
                && max_meets(a).contains(&i)
                && !max_meets(l.join(x, a)).iter().any(|&k| l.leq(k, xi))
        }
        S3 => {
            let (i, j) = (idx("I"), idx("J"));
            has(i)
                && has(j)
                && l.dim(j) < l.dim(i)
                && !hyperplanes.iter().any(|&h| l.leq(j, h) && !l.leq(i, h) && has(l.meet(i, h)))
        }
        S4 => {
            let (a, b, i, j) = (idx("A"), idx("B"), idx("I"), idx("J"));
            let ij = l.meet(i, j);
            minimal(a).contains(&i)
                && minimal(b).contains(&j)
                && !minimal(l.meet(a, b)).iter().any(|&k| l.leq(ij, k))
        }
        NS3 => {
            let (s1, s2) = (idx("S1"), idx("S2"));
            let shrinks = |x: usize| {
                hyperplanes.iter().all(|&h| l.leq(x, h) || has(l.meet(h, s1)))
            };
            has(s1)
                && has(s2)
                && l.dim(s2) < l.dim(s1)
                && !lines.iter().any(|&x| l.leq(x, s1) && !l.leq(x, s2) && shrinks(x))
        }
    }
}

/// Maximal (or minimal) elements of `cands` under the given mode.
fn select_extreme(l: &SubspaceLattice, cands: &[usize], mode: Mode, upward: bool) -> Vec<usize> {
    match mode {
        Mode::Dimension => {
            let dims = cands.iter().map(|&c| l.dim(c));
            let target = if upward { dims.max() } else { dims.min() };
            cands.iter().copied().filter(|&c| Some(l.dim(c)) == target).collect()
        }
        Mode::Inclusion => cands
            .iter()
            .copied()
            .filter(|&c| {
                !cands.iter().any(|&o| o != c && if upward { l.leq(c, o) } else { l.leq(o, c) })
            })
            .collect(),
    }
}

/// Re-checks a failed rank report against the rank values.
pub fn rank_witness_violates(report: &AxiomReport, rank: &RankFunction) -> bool {
    let Some(w) = &report.witness else {
        return false;
    };
    let get = |role: &str| w.get(role).expect("role present");
    match report.axiom {
        AxiomId::R1 => {
            let a = get("A");
            rank.value(a) > a.dim() as u32
        }
        AxiomId::R2 => {
            let (a, b) = (get("A"), get("B"));
            b.contains(a).unwrap() && rank.value(a) > rank.value(b)
        }
        AxiomId::R3 => {
            let (a, b) = (get("A"), get("B"));
            let s = a.sum(b).unwrap();
            let m = a.intersect(b).unwrap();
            rank.value(&s) + rank.value(&m) > rank.value(a) + rank.value(b)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldOrder;
    use std::sync::Arc;

    fn lat(q: u32, n: usize) -> Arc<SubspaceLattice> {
        SubspaceLattice::shared(FieldOrder::new(q).unwrap(), n).unwrap()
    }

    fn fam(l: &Arc<SubspaceLattice>, lits: &[&str]) -> SubspaceFamily {
        SubspaceFamily::from_literals(l, lits).unwrap()
    }

    fn check(id: AxiomId, f: &SubspaceFamily) -> AxiomReport {
        FamilyChecker::new(f, Mode::Dimension).check(id).unwrap()
    }

    #[test]
    fn parses_ids() {
        assert_eq!("nI3".parse::<AxiomId>(), Ok(AxiomId::NI3));
        assert_eq!("I4''".parse::<AxiomId>(), Ok(AxiomId::I4pp));
        assert_eq!("B4'".parse::<AxiomId>(), Ok(AxiomId::B4p));
        assert_eq!(
            AxiomId::parse_list("I1,I2,I3,I4").unwrap(),
            vec![AxiomId::I1, AxiomId::I2, AxiomId::I3, AxiomId::I4]
        );
        assert!("I5".parse::<AxiomId>().is_err());
        for id in AxiomId::ALL {
            assert_eq!(id.name().parse::<AxiomId>(), Ok(id));
        }
    }

    #[test]
    fn wrong_kind_is_rejected() {
        let l = lat(2, 2);
        let f = fam(&l, &["0"]);
        assert!(check_independence_axiom(AxiomId::B1, &f, Mode::Dimension).is_err());
        assert!(check_basis_axiom(AxiomId::S1, &f, Mode::Dimension).is_err());
        assert!(check_spanning_axiom(AxiomId::I1, &f, Mode::Dimension).is_err());
    }

    #[test]
    fn counterexample_independence_axioms() {
        let l = lat(2, 2);
        let f = fam(&l, &["0", "10"]);
        assert!(check(AxiomId::I1, &f).pass);
        assert!(check(AxiomId::I2, &f).pass);
        assert!(check(AxiomId::I3, &f).pass);
        let i4 = check(AxiomId::I4, &f);
        assert_eq!(i4.line(), "I4 FAIL A=01 B=11 I=0 J=0");
        let ni3 = check(AxiomId::NI3, &f);
        assert!(!ni3.pass);
        let w = ni3.witness.as_ref().unwrap();
        assert!(w.get("I").unwrap().is_zero());
        assert_eq!(w.get("J").unwrap().literal(), "10");
        assert!(witness_violates(&i4, &f));
        assert!(witness_violates(&ni3, &f));
    }

    #[test]
    fn full_lattice_is_downward_closed() {
        let l = lat(2, 3);
        assert!(check(AxiomId::I2, &SubspaceFamily::all(&l)).pass);
    }

    #[test]
    fn empty_family_edge_cases() {
        let l = lat(2, 2);
        let f = SubspaceFamily::empty(&l);
        for id in [AxiomId::I1, AxiomId::B1, AxiomId::S1] {
            let r = check(id, &f);
            assert!(!r.pass, "{id}");
            assert!(witness_violates(&r, &f));
        }
        for id in AxiomId::ALL.into_iter().filter(|a| a.kind() != AxiomKind::Rank) {
            if ![AxiomId::I1, AxiomId::B1, AxiomId::S1].contains(&id) {
                assert!(check(id, &f).pass, "{id} should be vacuous");
            }
        }
        assert_eq!(check(AxiomId::B1, &f).line(), "B1 FAIL");
    }

    #[test]
    fn basis_examples() {
        let l = lat(2, 2);
        let e = fam(&l, &["10 01"]);
        assert!(check(AxiomId::B2, &e).pass);
        let bases = fam(&l, &["10", "01"]);
        for id in [AxiomId::B1, AxiomId::B2, AxiomId::B3, AxiomId::B4, AxiomId::NB3] {
            assert!(check(id, &bases).pass, "{id}");
        }
        let single_line = fam(&l, &["10"]);
        assert!(!check(AxiomId::B4, &single_line).pass);
    }

    #[test]
    fn spanning_examples() {
        let l = lat(2, 2);
        assert!(check(AxiomId::S1, &fam(&l, &["10 01"])).pass);
        for g in [&["10"][..], &["0"], &["01", "11"]] {
            assert!(check(AxiomId::S2, &fam(&l, g).up_closure()).pass);
        }
        let span = fam(&l, &["10", "01", "11", "10 01"]);
        for id in AxiomId::of_kind(AxiomKind::Spanning) {
            assert!(check(id, &span).pass, "{id}");
        }
    }

    /// Literal quantifier scans, independent of the checker's shortcuts.
    fn literal_holds(id: AxiomId, f: &SubspaceFamily, mode: Mode) -> bool {
        let l = f.lattice();
        let members: Vec<usize> = f.indices().collect();
        let all: Vec<usize> = (0..l.len()).collect();
        let lines: Vec<usize> = l.lines().collect();
        let max_in = |a: usize| {
            let inside: Vec<usize> = members.iter().copied().filter(|&m| l.leq(m, a)).collect();
            select_extreme(l, &inside, mode, true)
        };
        let min_over = |a: usize| {
            let out: Vec<usize> = members.iter().copied().filter(|&m| l.leq(a, m)).collect();
            select_extreme(l, &out, mode, false)
        };
        let meets = |a: usize| {
            let mut v: Vec<usize> = members.iter().map(|&b| l.meet(a, b)).collect();
            v.sort();
            v.dedup();
            select_extreme(l, &v, mode, true)
        };
        match id {
            AxiomId::I4 => all.iter().all(|&a| {
                all.iter().all(|&b| {
                    max_in(a).iter().all(|&i| {
                        max_in(b).iter().all(|&j| {
                            max_in(l.join(a, b)).iter().any(|&k| l.leq(k, l.join(i, j)))
                        })
                    })
                })
            }),
            AxiomId::I4pp => all.iter().all(|&a| {
                max_in(a).iter().all(|&i| {
                    lines.iter().all(|&x| {
                        max_in(l.join(x, a)).iter().any(|&k| l.leq(k, l.join(x, i)))
                    })
                })
            }),
            AxiomId::S4 => all.iter().all(|&a| {
                all.iter().all(|&b| {
                    min_over(a).iter().all(|&i| {
                        min_over(b).iter().all(|&j| {
                            min_over(l.meet(a, b)).iter().any(|&k| l.leq(l.meet(i, j), k))
                        })
                    })
                })
            }),
            AxiomId::B4 => all.iter().all(|&a| {
                all.iter().all(|&b| {
                    meets(a).iter().all(|&i| {
                        meets(b).iter().all(|&j| {
                            meets(l.join(a, b)).iter().any(|&k| l.leq(k, l.join(i, j)))
                        })
                    })
                })
            }),
            AxiomId::B4p => all.iter().all(|&a| {
                all.iter().all(|&b| {
                    meets(a).iter().all(|&i| {
                        meets(l.join(a, b)).iter().any(|&k| l.leq(k, l.join(i, b)))
                    })
                })
            }),
            AxiomId::B4pp => all.iter().all(|&a| {
                meets(a).iter().all(|&i| {
                    lines.iter().all(|&x| {
                        meets(l.join(x, a)).iter().any(|&k| l.leq(k, l.join(x, i)))
                    })
                })
            }),
            _ => unreachable!(),
        }
    }

    fn all_families(l: &Arc<SubspaceLattice>) -> impl Iterator<Item = SubspaceFamily> + '_ {
        let len = l.len();
        (0u32..(1 << len))
            .map(move |m| SubspaceFamily::from_indices(l, (0..len).filter(|i| m >> i & 1 == 1)))
    }

    #[test]
    fn fast_checks_agree_with_literal_scans() {
        let ids = [AxiomId::I4, AxiomId::I4pp, AxiomId::S4, AxiomId::B4, AxiomId::B4p, AxiomId::B4pp];
        for (q, n) in [(2, 2), (3, 2), (2, 1)] {
            let l = lat(q, n);
            for f in all_families(&l) {
                for mode in [Mode::Dimension, Mode::Inclusion] {
                    let c = FamilyChecker::new(&f, mode);
                    for id in ids {
                        let got = c.check(id).unwrap();
                        assert_eq!(got.pass, literal_holds(id, &f, mode), "{id} {mode} {f:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn fast_checks_agree_with_literal_scans_on_f2_cubed_samples() {
        use rand::{Rng, SeedableRng};
        let l = lat(2, 3);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let ids = [AxiomId::I4, AxiomId::I4pp, AxiomId::S4, AxiomId::B4, AxiomId::B4p, AxiomId::B4pp];
        for _ in 0..60 {
            let gens: Vec<usize> = (0..rng.gen_range(1..4)).map(|_| rng.gen_range(0..l.len())).collect();
            let base = SubspaceFamily::from_indices(&l, gens);
            for f in [base.down_closure(), base.up_closure(), base.max_incl()] {
                for mode in [Mode::Dimension, Mode::Inclusion] {
                    let c = FamilyChecker::new(&f, mode);
                    for id in ids {
                        assert_eq!(c.check(id).unwrap().pass, literal_holds(id, &f, mode), "{id} {f:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn every_failed_witness_replays() {
        for (q, n) in [(2, 2), (3, 2)] {
            let l = lat(q, n);
            for f in all_families(&l) {
                for mode in [Mode::Dimension, Mode::Inclusion] {
                    let c = FamilyChecker::new(&f, mode);
                    for id in AxiomId::ALL.into_iter().filter(|a| a.kind() != AxiomKind::Rank) {
                        let r = c.check(id).unwrap();
                        assert_eq!(r.pass, r.witness.is_none());
                        if !r.pass {
                            assert!(witness_violates(&r, &f), "{} on {f:?}", r.line());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn duality_transport_between_independence_and_spanning() {
        // F satisfies (I1, I2, nI3) iff {X : X⊥ ∈ F} satisfies (S1, S2, nS3)
        for (q, n) in [(2, 2), (3, 2)] {
            let l = lat(q, n);
            for f in all_families(&l) {
                let dual = f.perp();
                let ci = FamilyChecker::new(&f, Mode::Dimension);
                let cs = FamilyChecker::new(&dual, Mode::Dimension);
                let i = ci.holds_all(&[AxiomId::I1, AxiomId::I2, AxiomId::NI3]).unwrap();
                let s = cs.holds_all(&[AxiomId::S1, AxiomId::S2, AxiomId::NS3]).unwrap();
                assert_eq!(i, s, "{f:?}");
                // the third axioms transport one-for-one
                for (a, b) in [(AxiomId::I3, AxiomId::S3), (AxiomId::NI3, AxiomId::NS3), (AxiomId::I4, AxiomId::S4)] {
                    assert_eq!(ci.check(a).unwrap().pass, cs.check(b).unwrap().pass, "{a}/{b} {f:?}");
                }
            }
        }
    }
}
