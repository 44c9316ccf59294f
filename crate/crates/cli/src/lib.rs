//! The `qmat` command line.
//!
//! Exit codes: 0 when every check passes, 1 when a violation or
//! counterexample is found, 2 on usage or input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use qmat::axioms::{check_rank_axiom, AxiomError, AxiomId, AxiomKind, FamilyChecker, Mode};
use qmat::crypto::{rank_from_independent, Check, CryptoError, Presentation};
use qmat::document::{Document, DocumentError};
use qmat::family::SubspaceFamily;
use qmat::gf::FieldOrder;
use qmat::lattice::{LatticeError, SubspaceLattice};
use qmat::qmatroid::{QMatroid, QMatroidError};
use qmat::verify::{self, FamilyConstraint, RunConfig, VerifyError};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Lattices searched by `verify --grid`.
pub const GRID: [(u32, usize); 5] = [(2, 2), (3, 2), (2, 3), (2, 4), (3, 3)];

#[derive(Debug, Parser)]
#[command(name = "qmat", version, about = "Construct, convert and verify q-matroids over prime fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Dimension,
    Inclusion,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Dimension => Mode::Dimension,
            ModeArg::Inclusion => Mode::Inclusion,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Rank,
    Independent,
    Bases,
    Spanning,
}

impl From<KindArg> for AxiomKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Rank => AxiomKind::Rank,
            KindArg::Independent => AxiomKind::Independent,
            KindArg::Bases => AxiomKind::Bases,
            KindArg::Spanning => AxiomKind::Spanning,
        }
    }
}

#[derive(Debug, Args)]
struct Input {
    /// A `.qm` document.
    #[arg(long)]
    file: PathBuf,
    /// Family section to read; optional when the document has exactly one.
    #[arg(long)]
    family: Option<String>,
}

#[derive(Debug, Args)]
struct ModeOpt {
    /// How maximal members are chosen.
    #[arg(long, value_enum, default_value = "dimension")]
    mode: ModeArg,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check axioms on a family or on the rank section.
    Check {
        #[command(flatten)]
        input: Input,
        /// Comma-separated axioms, e.g. I1,I2,I3,I4 or R1,R2,R3.
        #[arg(long, default_value = "I1,I2,I3,I4")]
        axioms: String,
        #[command(flatten)]
        mode: ModeOpt,
    },
    /// Convert between rank, independent, bases and spanning presentations.
    Derive {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        from: KindArg,
        #[arg(long, value_enum)]
        to: KindArg,
        /// Skip validating the input presentation.
        #[arg(long)]
        unchecked: bool,
    },
    /// Print the dual q-matroid.
    Dual {
        #[command(flatten)]
        input: Input,
    },
    /// Print a restriction or contraction.
    Minor {
        #[command(flatten)]
        input: Input,
        /// Restrict to this subspace literal.
        #[arg(long, conflicts_with = "contract", required_unless_present = "contract")]
        restrict: Option<String>,
        /// Contract this subspace literal.
        #[arg(long)]
        contract: Option<String>,
    },
    /// List subspaces, list families, or count families satisfying axioms.
    Enumerate {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        /// Only subspaces of this dimension.
        #[arg(long)]
        dim: Option<usize>,
        /// List families: all, downward-closed, upward-closed or antichain.
        #[arg(long)]
        families: Option<FamilyConstraint>,
        /// Count families satisfying these comma-separated axioms.
        #[arg(long)]
        satisfying: Option<String>,
        /// Count or list one family per automorphism class.
        #[arg(long)]
        up_to_iso: bool,
        #[command(flatten)]
        mode: ModeOpt,
    },
    /// Search for families satisfying some axioms and violating others.
    Mine {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        satisfy: String,
        #[arg(long, default_value = "")]
        violate: String,
        #[arg(long, default_value_t = 10)]
        limit: usize,
        #[arg(long)]
        up_to_iso: bool,
        #[command(flatten)]
        mode: ModeOpt,
    },
    /// Run registered implications over small lattices.
    Verify {
        /// Theorem name (T1..T12) or `all`.
        #[arg(long, default_value = "all")]
        theorem: String,
        #[arg(long, required_unless_present = "grid")]
        q: Option<u32>,
        #[arg(long, required_unless_present = "grid")]
        n: Option<usize>,
        /// Run on every lattice of the standard grid instead of one (q, n).
        #[arg(long, conflicts_with_all = ["q", "n"])]
        grid: bool,
        #[arg(long, default_value_t = verify::DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        /// Number of violating families to print per theorem.
        #[arg(long, default_value_t = 3)]
        show: usize,
        #[command(flatten)]
        mode: ModeOpt,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Document { path: PathBuf, source: DocumentError },
    #[error(transparent)]
    Axiom(#[from] AxiomError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("{0}")]
    Usage(String),
}

impl From<qmat::gf::GfError> for CliError {
    fn from(e: qmat::gf::GfError) -> Self {
        CliError::Lattice(e.into())
    }
}

type Outcome = Result<i32, CliError>;

fn load(path: &Path) -> Result<Document, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    Document::parse(&text).map_err(|source| CliError::Document { path: path.into(), source })
}

fn pick_family<'d>(doc: &'d Document, name: Option<&str>) -> Result<(&'d str, &'d SubspaceFamily), CliError> {
    match name {
        Some(n) => doc
            .families
            .iter()
            .find(|(k, _)| k == n)
            .map(|(k, f)| (k.as_str(), f))
            .ok_or_else(|| CliError::Usage(format!("no family section named '{n}'"))),
        None => match doc.families.as_slice() {
            [(k, f)] => Ok((k.as_str(), f)),
            [] => Err(CliError::Usage("document has no family section".into())),
            _ => Err(CliError::Usage("document has several families; pass --family".into())),
        },
    }
}

fn family_text(f: &SubspaceFamily) -> String {
    let lits: Vec<String> = f.subspaces().map(|s| s.literal()).collect();
    format!("{{{}}}", lits.join(", "))
}

fn lattice(q: u32, n: usize) -> Result<std::sync::Arc<SubspaceLattice>, CliError> {
    Ok(SubspaceLattice::shared(FieldOrder::new(q)?, n)?)
}

/// The q-matroid a document describes: its rank section, else the chosen
/// family read as independent spaces. `Err(Ok(code))` reports a violation.
fn qmatroid_of(doc: &Document, family: Option<&str>, out: &mut dyn Write) -> Result<Result<QMatroid, i32>, CliError> {
    let presentation = match &doc.rank {
        Some(r) if family.is_none() => Presentation::Rank(r.clone()),
        _ => Presentation::Independent(pick_family(doc, family)?.1.clone()),
    };
    match presentation.to_qmatroid(Check::Validate) {
        Ok(m) => Ok(Ok(m)),
        Err(CryptoError::Precondition(report)) => {
            let _ = writeln!(out, "not a q-matroid: {}", report.line());
            Ok(Err(EXIT_VIOLATION))
        }
        Err(CryptoError::QMatroid(QMatroidError::Axiom(report))) => {
            let _ = writeln!(out, "not a q-matroid: {}", report.line());
            Ok(Err(EXIT_VIOLATION))
        }
        Err(e) => Err(CliError::Usage(e.to_string())),
    }
}

fn cmd_check(input: &Input, axioms: &str, mode: Mode, out: &mut dyn Write) -> Outcome {
    let doc = load(&input.file)?;
    let ids = AxiomId::parse_list(axioms)?;
    let wants_family = input.family.is_some() || ids.iter().any(|a| a.kind() != AxiomKind::Rank);
    let family = if wants_family { Some(pick_family(&doc, input.family.as_deref())?.1) } else { None };
    let rank = if ids.iter().any(|a| a.kind() == AxiomKind::Rank) {
        Some(match (&doc.rank, family) {
            (Some(r), _) if input.family.is_none() => r.clone(),
            (_, Some(f)) => rank_from_independent(f, Check::Unchecked).expect("unchecked"),
            (_, None) => {
                let f = pick_family(&doc, None)?.1;
                rank_from_independent(f, Check::Unchecked).expect("unchecked")
            }
        })
    } else {
        None
    };
    let checker = family.map(|f| FamilyChecker::new(f, mode));
    let mut code = EXIT_PASS;
    for id in ids {
        let report = match id.kind() {
            AxiomKind::Rank => check_rank_axiom(id, rank.as_ref().expect("rank available"))?,
            _ => checker.as_ref().expect("family available").check(id)?,
        };
        if !report.pass {
            code = EXIT_VIOLATION;
        }
        let _ = writeln!(out, "{}", report.line());
    }
    Ok(code)
}

fn cmd_derive(input: &Input, from: AxiomKind, to: AxiomKind, unchecked: bool, out: &mut dyn Write) -> Outcome {
    let doc = load(&input.file)?;
    let presentation = match from {
        AxiomKind::Rank => Presentation::Rank(
            doc.rank.clone().ok_or_else(|| CliError::Usage("document has no [rank] section".into()))?,
        ),
        kind => Presentation::from_family(kind, pick_family(&doc, input.family.as_deref())?.1.clone())
            .expect("family kind"),
    };
    let check = if unchecked { Check::Unchecked } else { Check::Validate };
    let result = match presentation.convert(to, check) {
        Ok(p) => p,
        Err(CryptoError::Precondition(report)) => {
            let _ = writeln!(out, "input is not a valid {from} presentation: {}", report.line());
            return Ok(EXIT_VIOLATION);
        }
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    let mut outdoc = Document::new(&doc.lattice);
    match result {
        Presentation::Rank(r) => outdoc.rank = Some(r),
        Presentation::Independent(f) => outdoc.families.push(("I".into(), f)),
        Presentation::Bases(f) => outdoc.families.push(("B".into(), f)),
        Presentation::Spanning(f) => outdoc.families.push(("S".into(), f)),
    }
    let _ = write!(out, "{}", outdoc.render());
    Ok(EXIT_PASS)
}

fn cmd_dual(input: &Input, out: &mut dyn Write) -> Outcome {
    let doc = load(&input.file)?;
    let m = match qmatroid_of(&doc, input.family.as_deref(), out)? {
        Ok(m) => m,
        Err(code) => return Ok(code),
    };
    let dual = m.dual().map_err(|e| CliError::Usage(e.to_string()))?;
    let _ = write!(out, "{}", Document::from_qmatroid(&dual, "I").render());
    Ok(EXIT_PASS)
}

fn cmd_minor(input: &Input, restrict: Option<&str>, contract: Option<&str>, out: &mut dyn Write) -> Outcome {
    let doc = load(&input.file)?;
    let m = match qmatroid_of(&doc, input.family.as_deref(), out)? {
        Ok(m) => m,
        Err(code) => return Ok(code),
    };
    let l = &doc.lattice;
    let minor = match (restrict, contract) {
        (Some(x), None) => m.restriction(l.subspace(l.parse(x)?)),
        (None, Some(x)) => m.contraction(l.subspace(l.parse(x)?)),
        _ => return Err(CliError::Usage("pass exactly one of --restrict, --contract".into())),
    }
    .map_err(|e| CliError::Usage(e.to_string()))?;
    let _ = write!(out, "{}", Document::from_qmatroid(&minor, "I").render());
    Ok(EXIT_PASS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_enumerate(
    q: u32,
    n: usize,
    dim: Option<usize>,
    families: Option<FamilyConstraint>,
    satisfying: Option<&str>,
    up_to_iso: bool,
    mode: Mode,
    out: &mut dyn Write,
) -> Outcome {
    let l = lattice(q, n)?;
    if let Some(system) = satisfying {
        let ids = AxiomId::parse_list(system)?;
        let count = verify::census(q, n, &ids, up_to_iso, mode)?;
        let _ = writeln!(out, "census={count}");
        return Ok(EXIT_PASS);
    }
    if let Some(constraint) = families {
        let mut list = verify::enumerate_families(&l, constraint)?;
        if up_to_iso {
            let perms = l.automorphisms()?;
            let mut seen = std::collections::HashSet::new();
            list.retain(|f| seen.insert(f.canonical_under(perms)));
        }
        for f in &list {
            let _ = writeln!(out, "{}", family_text(f));
        }
        let _ = writeln!(out, "count={}", list.len());
        return Ok(EXIT_PASS);
    }
    let range = match dim {
        Some(k) if k > n => return Err(CliError::Usage(format!("--dim {k} exceeds n={n}"))),
        Some(k) => l.of_dim(k),
        None => 0..l.len(),
    };
    let count = range.len();
    for i in range {
        let _ = writeln!(out, "{}", l.subspace(i).literal());
    }
    let _ = writeln!(out, "count={count}");
    Ok(EXIT_PASS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_mine(
    q: u32,
    n: usize,
    satisfy: &str,
    violate: &str,
    limit: usize,
    up_to_iso: bool,
    mode: Mode,
    out: &mut dyn Write,
) -> Outcome {
    let satisfy = AxiomId::parse_list(satisfy)?;
    let violate = if violate.trim().is_empty() { vec![] } else { AxiomId::parse_list(violate)? };
    let found = verify::mine(&satisfy, &violate, q, n, limit, up_to_iso, mode)?;
    for f in &found {
        let checker = FamilyChecker::new(f, mode);
        let failures: Vec<String> =
            violate.iter().map(|&a| checker.check(a).map(|r| r.line())).collect::<Result<_, _>>()?;
        let _ = writeln!(out, "{}  {}", family_text(f), failures.join("; "));
    }
    let _ = writeln!(out, "found={}", found.len());
    Ok(if found.is_empty() { EXIT_PASS } else { EXIT_VIOLATION })
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    theorem: &str,
    lattices: &[(u32, usize)],
    samples: usize,
    seed: u64,
    show: usize,
    mode: Mode,
    out: &mut dyn Write,
) -> Outcome {
    let specs = if theorem.eq_ignore_ascii_case("all") {
        verify::registry()
    } else {
        vec![verify::theorem(theorem)?]
    };
    let config = RunConfig { mode, samples, seed, plan: None };
    let mut code = EXIT_PASS;
    for &(q, n) in lattices {
        for spec in &specs {
            let r = verify::run_theorem(spec, q, n, &config)?;
            let _ = writeln!(
                out,
                "{} ({}) on F_{}^{} [{}]: {} families, {} satisfy hypotheses, {} violations, {:.2?}",
                spec.name,
                spec.summary,
                q,
                n,
                r.plan,
                r.families_considered,
                r.families_satisfying_hypotheses,
                r.violation_count,
                r.elapsed
            );
            for v in r.violations.iter().take(show) {
                let _ = writeln!(out, "  counterexample {v}");
            }
            let _ = writeln!(out, "{}", r.result_line());
            if !r.held() {
                code = EXIT_VIOLATION;
            }
        }
    }
    Ok(code)
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Outcome {
    match cli.command {
        Command::Check { input, axioms, mode } => cmd_check(&input, &axioms, mode.mode.into(), out),
        Command::Derive { input, from, to, unchecked } => {
            cmd_derive(&input, from.into(), to.into(), unchecked, out)
        }
        Command::Dual { input } => cmd_dual(&input, out),
        Command::Minor { input, restrict, contract } => {
            cmd_minor(&input, restrict.as_deref(), contract.as_deref(), out)
        }
        Command::Enumerate { q, n, dim, families, satisfying, up_to_iso, mode } => {
            cmd_enumerate(q, n, dim, families, satisfying.as_deref(), up_to_iso, mode.mode.into(), out)
        }
        Command::Mine { q, n, satisfy, violate, limit, up_to_iso, mode } => {
            cmd_mine(q, n, &satisfy, &violate, limit, up_to_iso, mode.mode.into(), out)
        }
        Command::Verify { theorem, q, n, grid, samples, seed, show, mode } => {
            let lattices = if grid { GRID.to_vec() } else { vec![(q.expect("q"), n.expect("n"))] };
            cmd_verify(&theorem, &lattices, samples, seed, show, mode.mode.into(), out)
        }
    }
}

/// Runs one command line, writing the report to `out` and diagnostics to
/// `err`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
