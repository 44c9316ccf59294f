//! Search harness for implications between axiom systems.
//!
//! A [`TheoremSpec`] names hypotheses and conclusions over one kind of
//! family. [`run_theorem`] streams candidate families on a small lattice,
//! keeps those satisfying every hypothesis, and checks the conclusions.
//! Small lattices are searched exhaustively, mid-sized ones through pruned
//! streams (downward-closed, upward-closed or antichain families), and
//! larger ones by seeded sampling.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::axioms::{check_rank_axiom, AxiomError, AxiomId, AxiomKind, AxiomReport, FamilyChecker, Mode};
use crate::crypto::{rank_from_independent, Check};
use crate::family::SubspaceFamily;
use crate::gf::FieldOrder;
use crate::lattice::{Embedding, LatticeError, Subspace, SubspaceLattice};

/// Largest lattice for which every family (or every pruned family) is listed.
pub const FAMILY_ENUMERATION_LIMIT: usize = 20;
/// Lattices up to this size are searched over all families by default.
pub const EXHAUSTIVE_DEFAULT_LIMIT: usize = 6;
pub const DEFAULT_SAMPLES: usize = 100_000;
pub const DEFAULT_SEED: u64 = 0x5eed_2021;
/// Violating families kept per run; the count is always exact.
pub const KEPT_VIOLATIONS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Axiom(#[from] AxiomError),
    #[error("unknown theorem '{0}'")]
    UnknownTheorem(String),
    #[error("lattice has {len} subspaces; listing families needs at most {limit}")]
    Guard { len: usize, limit: usize },
    #[error("{0} is not a family axiom")]
    RankAxiom(AxiomId),
}

/// Shape constraint on enumerated families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyConstraint {
    All,
    DownwardClosed,
    UpwardClosed,
    Antichain,
}

impl FamilyConstraint {
    /// The pruned stream matching a presentation kind.
    pub fn for_kind(kind: AxiomKind) -> Self {
        match kind {
            AxiomKind::Independent => FamilyConstraint::DownwardClosed,
            AxiomKind::Spanning => FamilyConstraint::UpwardClosed,
            AxiomKind::Bases => FamilyConstraint::Antichain,
            AxiomKind::Rank => FamilyConstraint::All,
        }
    }
}

impl fmt::Display for FamilyConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyConstraint::All => "all",
            FamilyConstraint::DownwardClosed => "downward-closed",
            FamilyConstraint::UpwardClosed => "upward-closed",
            FamilyConstraint::Antichain => "antichain",
        })
    }
}

impl std::str::FromStr for FamilyConstraint {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(FamilyConstraint::All),
            "downward-closed" | "down" => Ok(FamilyConstraint::DownwardClosed),
            "upward-closed" | "up" => Ok(FamilyConstraint::UpwardClosed),
            "antichain" => Ok(FamilyConstraint::Antichain),
            other => Err(format!(
                "unknown family constraint '{other}' (expected all, downward-closed, upward-closed or antichain)"
            )),
        }
    }
}

/// Lists every family of the given shape, in a fixed order.
///
/// `All` runs through bitmasks in increasing order. The other shapes are
/// generated from antichains found by backtracking over the lattice order,
/// and include the empty family.
pub fn enumerate_families(
    lattice: &Arc<SubspaceLattice>,
    constraint: FamilyConstraint,
) -> Result<Vec<SubspaceFamily>, VerifyError> {
    let len = lattice.len();
    if len > FAMILY_ENUMERATION_LIMIT {
        return Err(VerifyError::Guard { len, limit: FAMILY_ENUMERATION_LIMIT });
    }
    if constraint == FamilyConstraint::All {
        return Ok((0u32..(1u32 << len))
            .map(|mask| SubspaceFamily::from_indices(lattice, (0..len).filter(|i| mask >> i & 1 == 1)))
            .collect());
    }
    let mut antichains = Vec::new();
    let mut chosen = Vec::new();
    collect_antichains(lattice, 0, &mut chosen, &mut antichains);
    Ok(antichains
        .into_iter()
        .map(|members| {
            let f = SubspaceFamily::from_indices(lattice, members);
            match constraint {
                FamilyConstraint::DownwardClosed => f.down_closure(),
                FamilyConstraint::UpwardClosed => f.up_closure(),
                _ => f,
            }
        })
        .collect())
}

fn collect_antichains(l: &SubspaceLattice, next: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if next == l.len() {
        out.push(chosen.clone());
        return;
    }
    collect_antichains(l, next + 1, chosen, out);
    if chosen.iter().all(|&c| !l.leq(c, next) && !l.leq(next, c)) {
        chosen.push(next);
        collect_antichains(l, next + 1, chosen, out);
        chosen.pop();
    }
}

/// What must hold for a family that satisfies the hypotheses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Conclusion {
    Axiom(AxiomId),
    /// The rank function read off the family satisfies R1 to R3.
    DerivedRank,
    /// The listed axioms are all true or all false.
    Equivalent(Vec<AxiomId>),
    /// Every restriction `𝓘 ∩ L(F)`, recoordinatized on `F`, satisfies the
    /// listed axioms.
    RestrictionClosed(Vec<AxiomId>),
    /// Lines outside the family span a subspace made only of such lines.
    LoopSpace,
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |ids: &[AxiomId]| ids.iter().map(|a| a.name()).collect::<Vec<_>>().join(",");
        match self {
            Conclusion::Axiom(a) => write!(f, "{a}"),
            Conclusion::DerivedRank => f.write_str("R1,R2,R3 of derived rank"),
            Conclusion::Equivalent(ids) => write!(f, "{} equivalent", list(ids)),
            Conclusion::RestrictionClosed(ids) => write!(f, "{} on every restriction", list(ids)),
            Conclusion::LoopSpace => f.write_str("loops form a subspace"),
        }
    }
}

/// One implication over one kind of family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremPart {
    pub kind: AxiomKind,
    pub hypotheses: Vec<AxiomId>,
    pub conclusions: Vec<Conclusion>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremSpec {
    pub name: &'static str,
    pub summary: &'static str,
    pub parts: Vec<TheoremPart>,
}

impl TheoremSpec {
    fn single(
        name: &'static str,
        summary: &'static str,
        kind: AxiomKind,
        hypotheses: &[AxiomId],
        conclusions: Vec<Conclusion>,
    ) -> Self {
        TheoremSpec {
            name,
            summary,
            parts: vec![TheoremPart { kind, hypotheses: hypotheses.to_vec(), conclusions }],
        }
    }
}

/// The registered implications, T1 to T12.
pub fn registry() -> Vec<TheoremSpec> {
    use AxiomId::*;
    use AxiomKind::{Bases, Independent, Spanning};
    use Conclusion as C;
    vec![
        TheoremSpec::single("T1", "I1,I2,I4 => I3", Independent, &[I1, I2, I4], vec![C::Axiom(I3)]),
        TheoremSpec::single("T2", "B1,B2,B4 => B3", Bases, &[B1, B2, B4], vec![C::Axiom(B3)]),
        TheoremSpec::single("T3", "S1,S2,S4 => S3", Spanning, &[S1, S2, S4], vec![C::Axiom(S3)]),
        TheoremSpec::single("T4", "I1,I2,I4 => nI3", Independent, &[I1, I2, I4], vec![C::Axiom(NI3)]),
        TheoremSpec::single(
            "T5",
            "I1,I2,nI3 => I4 and the derived rank is a q-matroid rank",
            Independent,
            &[I1, I2, NI3],
            vec![C::Axiom(I4), C::DerivedRank],
        ),
        TheoremSpec::single("T6", "B1,B2,B4 => nB3", Bases, &[B1, B2, B4], vec![C::Axiom(NB3)]),
        TheoremSpec::single("T7", "B1,B2,nB3 => B4", Bases, &[B1, B2, NB3], vec![C::Axiom(B4)]),
        TheoremSpec::single(
            "T8",
            "under B1,B2,B3: B4 <=> B4' <=> B4''",
            Bases,
            &[B1, B2, B3],
            vec![C::Equivalent(vec![B4, B4p, B4pp])],
        ),
        TheoremSpec::single(
            "T9",
            "S1,S2,nS3 => S3,S4",
            Spanning,
            &[S1, S2, NS3],
            vec![C::Axiom(S3), C::Axiom(S4)],
        ),
        TheoremSpec::single(
            "T10",
            "I1,I2,nI3 are inherited by restrictions",
            Independent,
            &[I1, I2, NI3],
            vec![C::RestrictionClosed(vec![I1, I2, NI3])],
        ),
        TheoremSpec::single(
            "T11",
            "I1,I2,I4 => loops form a subspace",
            Independent,
            &[I1, I2, I4],
            vec![C::LoopSpace],
        ),
        TheoremSpec {
            name: "T12",
            summary: "nI3 => I3 and nB3 => B3",
            parts: vec![
                TheoremPart { kind: Independent, hypotheses: vec![NI3], conclusions: vec![C::Axiom(I3)] },
                TheoremPart { kind: Bases, hypotheses: vec![NB3], conclusions: vec![C::Axiom(B3)] },
            ],
        },
    ]
}

pub fn theorem(name: &str) -> Result<TheoremSpec, VerifyError> {
    registry()
        .into_iter()
        .find(|t| t.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| VerifyError::UnknownTheorem(name.to_string()))
}

/// How candidate families are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchPlan {
    /// Every family of the lattice.
    Exhaustive,
    /// Every family of the shape forced by the family kind's second axiom.
    Pruned,
    Sampled { count: usize, seed: u64 },
}

impl SearchPlan {
    /// Exhaustive on tiny lattices, pruned up to the enumeration limit,
    /// sampled beyond.
    pub fn default_for(lattice_len: usize, samples: usize, seed: u64) -> Self {
        if lattice_len <= EXHAUSTIVE_DEFAULT_LIMIT {
            SearchPlan::Exhaustive
        } else if lattice_len <= FAMILY_ENUMERATION_LIMIT {
            SearchPlan::Pruned
        } else {
            SearchPlan::Sampled { count: samples, seed }
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            SearchPlan::Sampled { seed, .. } => Some(*seed),
            _ => None,
        }
    }
}

impl fmt::Display for SearchPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchPlan::Exhaustive => f.write_str("exhaustive"),
            SearchPlan::Pruned => f.write_str("pruned-exhaustive"),
            SearchPlan::Sampled { count, seed } => write!(f, "sampled({count}, seed={seed})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    pub mode: Mode,
    pub samples: usize,
    pub seed: u64,
    /// Overrides [`SearchPlan::default_for`].
    pub plan: Option<SearchPlan>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { mode: Mode::Dimension, samples: DEFAULT_SAMPLES, seed: DEFAULT_SEED, plan: None }
    }
}

/// Why a family counts as a counterexample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Axiom(AxiomReport),
    DerivedRank(AxiomReport),
    Disagreement(Vec<AxiomReport>),
    Restriction { to: Subspace, report: AxiomReport },
    LoopSpace { non_loop: Subspace, span: Subspace },
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Axiom(r) => f.write_str(&r.line()),
            Failure::DerivedRank(r) => write!(f, "derived rank {}", r.line()),
            Failure::Disagreement(rs) => {
                let parts: Vec<String> = rs.iter().map(|r| r.line()).collect();
                write!(f, "disagree: {}", parts.join("; "))
            }
            Failure::Restriction { to, report } => {
                write!(f, "restriction to {}: {}", to.literal_with(","), report.line())
            }
            Failure::LoopSpace { non_loop, span } => write!(
                f,
                "loops span {} which contains the non-loop {}",
                span.literal_with(","),
                non_loop.literal_with(",")
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub family: SubspaceFamily,
    pub failure: Failure,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.family, self.failure)
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub name: &'static str,
    pub q: u8,
    pub n: usize,
    pub plan: SearchPlan,
    pub families_considered: u64,
    pub families_satisfying_hypotheses: u64,
    pub violation_count: u64,
    /// The first [`KEPT_VIOLATIONS`] violations in stream order.
    pub violations: Vec<Violation>,
    pub elapsed: Duration,
    pub seed: Option<u64>,
}

impl RunResult {
    pub fn held(&self) -> bool {
        self.violation_count == 0
    }

    /// `RESULT <name> checked=<k> violations=<v> seed=<s|none>`.
    pub fn result_line(&self) -> String {
        let seed = self.seed.map_or_else(|| "none".to_string(), |s| s.to_string());
        format!(
            "RESULT {} checked={} violations={} seed={}",
            self.name, self.families_satisfying_hypotheses, self.violation_count, seed
        )
    }
}

enum Outcome {
    Skipped,
    Held,
    Violated(Failure),
}

/// Per-lattice data for restriction checks: for every subspace `F`, the
/// lattice of `F` and the index in the ambient lattice of each of its members.
struct RestrictionTables {
    maps: Vec<(Arc<SubspaceLattice>, Vec<u32>)>,
}

impl RestrictionTables {
    fn new(l: &SubspaceLattice) -> Result<Self, LatticeError> {
        let mut maps = Vec::with_capacity(l.len());
        for f in l.subspaces() {
            let emb = Embedding::new(f);
            let small = SubspaceLattice::shared(l.q(), f.dim())?;
            let mut to_big = Vec::with_capacity(small.len());
            for s in small.subspaces() {
                to_big.push(l.member(&emb.push(s)?)? as u32);
            }
            maps.push((small, to_big));
        }
        Ok(RestrictionTables { maps })
    }

    fn restrict(&self, family: &SubspaceFamily, f: usize) -> SubspaceFamily {
        let (small, to_big) = &self.maps[f];
        let members: Vec<usize> =
            (0..small.len()).filter(|&s| family.contains_index(to_big[s] as usize)).collect();
        SubspaceFamily::from_indices(small, members)
    }
}

struct Evaluator<'a> {
    part: &'a TheoremPart,
    mode: Mode,
    restrictions: Option<RestrictionTables>,
}

impl<'a> Evaluator<'a> {
    fn new(part: &'a TheoremPart, lattice: &SubspaceLattice, mode: Mode) -> Result<Self, VerifyError> {
        for id in part.hypotheses.iter().copied().chain(part.conclusions.iter().flat_map(conclusion_axioms)) {
            if id.kind() == AxiomKind::Rank {
                return Err(VerifyError::RankAxiom(id));
            }
        }
        let needs_restrictions =
            part.conclusions.iter().any(|c| matches!(c, Conclusion::RestrictionClosed(_)));
        let restrictions = if needs_restrictions { Some(RestrictionTables::new(lattice)?) } else { None };
        Ok(Evaluator { part, mode, restrictions })
    }

    fn evaluate(&self, family: &SubspaceFamily) -> Outcome {
        let checker = FamilyChecker::new(family, self.mode);
        if !checker.holds_all(&self.part.hypotheses).expect("family axioms") {
            return Outcome::Skipped;
        }
        for c in &self.part.conclusions {
            if let Some(failure) = self.conclusion_fails(c, family, &checker) {
                return Outcome::Violated(failure);
            }
        }
        Outcome::Held
    }

    fn conclusion_fails(
        &self,
        c: &Conclusion,
        family: &SubspaceFamily,
        checker: &FamilyChecker<'_>,
    ) -> Option<Failure> {
        let check = |id| checker.check(id).expect("family axiom");
        match c {
            Conclusion::Axiom(id) => {
                let r = check(*id);
                (!r.pass).then_some(Failure::Axiom(r))
            }
            Conclusion::DerivedRank => {
                let rank = rank_from_independent(family, Check::Unchecked).expect("unchecked");
                [AxiomId::R1, AxiomId::R2, AxiomId::R3]
                    .into_iter()
                    .map(|id| check_rank_axiom(id, &rank).expect("rank axiom"))
                    .find(|r| !r.pass)
                    .map(Failure::DerivedRank)
            }
            Conclusion::Equivalent(ids) => {
                let reports: Vec<AxiomReport> = ids.iter().map(|&id| check(id)).collect();
                let first = reports[0].pass;
                reports.iter().any(|r| r.pass != first).then_some(Failure::Disagreement(reports))
            }
            Conclusion::RestrictionClosed(ids) => {
                let tables = self.restrictions.as_ref().expect("restriction tables");
                let l = family.lattice();
                (0..l.len()).find_map(|f| {
                    let restricted = tables.restrict(family, f);
                    let sub = FamilyChecker::new(&restricted, self.mode);
                    ids.iter().map(|&id| sub.check(id).expect("family axiom")).find(|r| !r.pass).map(
                        |report| Failure::Restriction { to: l.subspace(f).clone(), report },
                    )
                })
            }
            Conclusion::LoopSpace => {
                let l = family.lattice();
                let span = l
                    .lines()
                    .filter(|&x| !family.contains_index(x))
                    .fold(SubspaceLattice::ZERO, |acc, x| l.join(acc, x));
                l.lines().find(|&x| l.leq(x, span) && family.contains_index(x)).map(|x| Failure::LoopSpace {
                    non_loop: l.subspace(x).clone(),
                    span: l.subspace(span).clone(),
                })
            }
        }
    }
}

fn conclusion_axioms(c: &Conclusion) -> Vec<AxiomId> {
    match c {
        Conclusion::Axiom(a) => vec![*a],
        Conclusion::Equivalent(ids) | Conclusion::RestrictionClosed(ids) => ids.clone(),
        Conclusion::DerivedRank | Conclusion::LoopSpace => vec![],
    }
}

/// Tallies of one part over one stream.
#[derive(Default)]
struct Tally {
    considered: u64,
    satisfying: u64,
    violation_count: u64,
    violations: Vec<Violation>,
}

impl Tally {
    fn absorb(&mut self, family: SubspaceFamily, outcome: Outcome) {
        self.considered += 1;
        match outcome {
            Outcome::Skipped => {}
            Outcome::Held => self.satisfying += 1,
            Outcome::Violated(failure) => {
                self.satisfying += 1;
                self.violation_count += 1;
                if self.violations.len() < KEPT_VIOLATIONS {
                    self.violations.push(Violation { family, failure });
                }
            }
        }
    }
}

fn run_part(
    part: &TheoremPart,
    lattice: &Arc<SubspaceLattice>,
    plan: SearchPlan,
    mode: Mode,
) -> Result<Tally, VerifyError> {
    let eval = Evaluator::new(part, lattice, mode)?;
    let mut tally = Tally::default();
    match plan {
        SearchPlan::Exhaustive | SearchPlan::Pruned => {
            let constraint = match plan {
                SearchPlan::Exhaustive => FamilyConstraint::All,
                _ => FamilyConstraint::for_kind(part.kind),
            };
            let families = enumerate_families(lattice, constraint)?;
            let outcomes: Vec<Outcome> = families.par_iter().map(|f| eval.evaluate(f)).collect();
            for (f, o) in families.into_iter().zip(outcomes) {
                tally.absorb(f, o);
            }
        }
        SearchPlan::Sampled { count, seed } => {
            let results: Vec<(SubspaceFamily, Outcome)> = (0..count as u64)
                .into_par_iter()
                .map(|i| {
                    let f = sample_family(lattice, part.kind, seed, i);
                    let o = eval.evaluate(&f);
                    (f, o)
                })
                .collect();
            for (f, o) in results {
                tally.absorb(f, o);
            }
        }
    }
    Ok(tally)
}

/// Checks a registered theorem on `L(F_q^n)`.
pub fn run_theorem(spec: &TheoremSpec, q: u32, n: usize, config: &RunConfig) -> Result<RunResult, VerifyError> {
    let field = FieldOrder::new(q).map_err(LatticeError::from)?;
    let lattice = SubspaceLattice::shared(field, n)?;
    let plan = config.plan.unwrap_or_else(|| SearchPlan::default_for(lattice.len(), config.samples, config.seed));
    let start = Instant::now();
    let mut total = Tally::default();
    for part in &spec.parts {
        let t = run_part(part, &lattice, plan, config.mode)?;
        total.considered += t.considered;
        total.satisfying += t.satisfying;
        total.violation_count += t.violation_count;
        let room = KEPT_VIOLATIONS - total.violations.len();
        total.violations.extend(t.violations.into_iter().take(room));
    }
    Ok(RunResult {
        name: spec.name,
        q: field.get(),
        n,
        plan,
        families_considered: total.considered,
        families_satisfying_hypotheses: total.satisfying,
        violation_count: total.violation_count,
        violations: total.violations,
        elapsed: start.elapsed(),
        seed: plan.seed(),
    })
}

fn random_subspace(l: &SubspaceLattice, rng: &mut ChaCha8Rng, dim: usize) -> usize {
    let range = l.of_dim(dim);
    rng.gen_range(range)
}

/// Independent spaces of a q-matroid: subspaces of dimension at most `k`
/// meeting the loop space `loops` trivially.
fn structured_independents(l: &SubspaceLattice, loops: usize, k: usize) -> FixedBitSet {
    let mut bits = FixedBitSet::with_capacity(l.len());
    for a in 0..l.len() {
        if l.dim(a) <= k && l.meet(a, loops) == SubspaceLattice::ZERO {
            bits.insert(a);
        }
    }
    bits
}

/// Draws family number `index` of the seeded stream for `kind`.
///
/// Half of the draws close a few random generators (all of one dimension
/// or of mixed dimensions). The other half start from a q-matroid whose
/// rank is uniform modulo a random loop space, and half of those get one
/// subspace toggled before closing again.
pub fn sample_family(lattice: &Arc<SubspaceLattice>, kind: AxiomKind, seed: u64, index: u64) -> SubspaceFamily {
    let l = lattice.as_ref();
    let n = l.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let style = rng.gen_range(0..4u8);
    let base = match style {
        0 | 1 => {
            let count = rng.gen_range(1..=4);
            let fixed = rng.gen_range(0..=n);
            let gens: Vec<usize> = (0..count)
                .map(|_| {
                    let d = if style == 0 { fixed } else { rng.gen_range(0..=n) };
                    random_subspace(l, &mut rng, d)
                })
                .collect();
            SubspaceFamily::from_indices(lattice, gens)
        }
        _ => {
            let loop_dim = rng.gen_range(0..=n);
            let loops = random_subspace(l, &mut rng, loop_dim);
            let k = rng.gen_range(0..=n - loop_dim);
            let indep = SubspaceFamily::from_bits(lattice, structured_independents(l, loops, k));
            let mut f = match kind {
                AxiomKind::Independent | AxiomKind::Rank => indep,
                AxiomKind::Bases => indep.max_incl(),
                AxiomKind::Spanning => indep.max_incl().up_closure(),
            };
            if style == 3 {
                let flip = rng.gen_range(0..l.len());
                let mut bits = f.bits().clone();
                bits.toggle(flip);
                f = SubspaceFamily::from_bits(lattice, bits);
            }
            f
        }
    };
    match kind {
        AxiomKind::Independent | AxiomKind::Rank => base.down_closure(),
        AxiomKind::Bases => base.max_incl(),
        AxiomKind::Spanning => base.up_closure(),
    }
}

/// The family stream used by [`mine`] and [`census`]: every family on tiny
/// lattices, otherwise the pruned stream for the kind whose second axiom
/// is required.
fn query_stream(lattice: &Arc<SubspaceLattice>, satisfy: &[AxiomId]) -> Result<Vec<SubspaceFamily>, VerifyError> {
    let constraint = if lattice.len() <= EXHAUSTIVE_DEFAULT_LIMIT {
        FamilyConstraint::All
    } else if satisfy.contains(&AxiomId::I2) {
        FamilyConstraint::DownwardClosed
    } else if satisfy.contains(&AxiomId::S2) {
        FamilyConstraint::UpwardClosed
    } else if satisfy.contains(&AxiomId::B2) {
        FamilyConstraint::Antichain
    } else {
        FamilyConstraint::All
    };
    enumerate_families(lattice, constraint)
}

fn family_axioms(ids: &[AxiomId]) -> Result<(), VerifyError> {
    match ids.iter().find(|a| a.kind() == AxiomKind::Rank) {
        Some(&a) => Err(VerifyError::RankAxiom(a)),
        None => Ok(()),
    }
}

fn lattice_for(q: u32, n: usize) -> Result<Arc<SubspaceLattice>, VerifyError> {
    let field = FieldOrder::new(q).map_err(LatticeError::from)?;
    Ok(SubspaceLattice::shared(field, n)?)
}

/// Families satisfying all of `satisfy` and failing every axiom in
/// `violate`, at most `limit` of them, in stream order. With `up_to_iso`
/// only the first family of each automorphism class is kept.
pub fn mine(
    satisfy: &[AxiomId],
    violate: &[AxiomId],
    q: u32,
    n: usize,
    limit: usize,
    up_to_iso: bool,
    mode: Mode,
) -> Result<Vec<SubspaceFamily>, VerifyError> {
    family_axioms(satisfy)?;
    family_axioms(violate)?;
    let lattice = lattice_for(q, n)?;
    let perms = if up_to_iso { Some(lattice.automorphisms()?) } else { None };
    let stream = query_stream(&lattice, satisfy)?;
    let hits: Vec<bool> = stream
        .par_iter()
        .map(|f| {
            let c = FamilyChecker::new(f, mode);
            c.holds_all(satisfy).expect("family axioms")
                && violate.iter().all(|&id| !c.check(id).expect("family axiom").pass)
        })
        .collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (f, hit) in stream.into_iter().zip(hits) {
        if out.len() >= limit {
            break;
        }
        if !hit {
            continue;
        }
        if let Some(perms) = perms {
            if !seen.insert(f.canonical_under(perms)) {
                continue;
            }
        }
        out.push(f);
    }
    Ok(out)
}

/// Number of families satisfying every axiom of `system`, optionally
/// counted up to lattice automorphism.
pub fn census(q: u32, n: usize, system: &[AxiomId], up_to_iso: bool, mode: Mode) -> Result<u64, VerifyError> {
    Ok(mine(system, &[], q, n, usize::MAX, up_to_iso, mode)?.len() as u64)
}
