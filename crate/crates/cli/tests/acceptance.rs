//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if
//! any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use qmat::axioms::{check_rank_axiom, AxiomId, AxiomKind, FamilyChecker, Mode};
use qmat::crypto::{
    bases_from_independent, bases_from_spanning, independent_from_bases, independent_from_rank,
    rank_from_independent, spanning_from_bases, Check, Presentation,
};
use qmat::document::Document;
use qmat::family::SubspaceFamily;
use qmat::fixtures;
use qmat::gf::FieldOrder;
use qmat::lattice::{enumerate, gaussian_binomial, SubspaceLattice};
use qmat::qmatroid::QMatroid;
use qmat::verify::{self, FamilyConstraint, RunConfig, SearchPlan};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lattice(q: u32, n: usize) -> Arc<SubspaceLattice> {
    SubspaceLattice::shared(FieldOrder::new(q).unwrap(), n).unwrap()
}

fn qmatroid_of_independents(f: &SubspaceFamily) -> QMatroid {
    QMatroid::new(rank_from_independent(f, Check::Validate).unwrap()).unwrap()
}

/// Every q-matroid on F_2^2, F_3^2 and F_2^3, found as (I1,I2,I4)-families,
/// plus every uniform q-matroid with n <= 4 over F_2 and F_3.
fn corpus() -> Vec<QMatroid> {
    use AxiomId::*;
    let mut out = Vec::new();
    for (q, n) in [(2, 2), (3, 2), (2, 3)] {
        for f in verify::mine(&[I1, I2, I4], &[], q, n, usize::MAX, false, Mode::Dimension).unwrap() {
            out.push(qmatroid_of_independents(&f));
        }
    }
    for q in [2, 3] {
        let fq = FieldOrder::new(q).unwrap();
        for n in 0..=4 {
            for k in 0..=n {
                out.push(QMatroid::uniform(k, n, fq).unwrap());
            }
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let f = fixtures::fixture("paper_counterexample").map_err(|e| e.to_string())?;
    let family = f.family();
    let checker = FamilyChecker::new(family, Mode::Dimension);
    let mut lines = Vec::new();
    for (id, want) in [
        (AxiomId::I1, true),
        (AxiomId::I2, true),
        (AxiomId::I3, true),
        (AxiomId::I4, false),
        (AxiomId::NI3, false),
    ] {
        let r = checker.check(id).unwrap();
        ensure(r.pass == want, || format!("{} expected {}", r.line(), if want { "PASS" } else { "FAIL" }))?;
        lines.push(r.line());
    }
    let rank = rank_from_independent(family, Check::Unchecked).unwrap();
    let r3 = check_rank_axiom(AxiomId::R3, &rank).unwrap();
    ensure(!r3.pass, || "derived rank satisfies R3".into())?;
    let l = family.lattice();
    let r = |lit: &str| rank.value_at(l.parse(lit).unwrap());
    let (lhs, rhs) = (r("10 01") + r("0"), r("01") + r("11"));
    ensure(lhs == 1 && rhs == 0, || format!("r(y+z)+r(y∩z)={lhs}, r(y)+r(z)={rhs}"))?;
    let w = r3.witness.as_ref().unwrap();
    let (a, b) = (w.get("A").unwrap().literal(), w.get("B").unwrap().literal());
    ensure((a.as_str(), b.as_str()) == ("01", "11"), || format!("R3 witness A={a} B={b}"))?;
    Ok(format!("{}; {}; r(y+z)+r(y∩z)={lhs} > r(y)+r(z)={rhs}", lines.join(", "), r3.line()))
}

fn criterion_2() -> Outcome {
    let config = RunConfig::default();
    let mut failed = Vec::new();
    let mut total_checked = 0;
    for (q, n) in [(2, 2), (3, 2), (2, 3), (2, 4), (3, 3)] {
        for spec in verify::registry() {
            let r = verify::run_theorem(&spec, q, n, &config).unwrap();
            println!("    F_{q}^{n} {:<10} {}", r.plan.to_string().split('(').next().unwrap(), r.result_line());
            match (q, n, r.plan) {
                (2, 2, SearchPlan::Exhaustive) | (3, 2, SearchPlan::Exhaustive) | (2, 3, SearchPlan::Pruned) => {}
                (_, _, SearchPlan::Sampled { count, .. }) if count >= 100_000 && r.seed.is_some() => {}
                other => return Err(format!("unexpected search plan {other:?}")),
            }
            if (q, n) == (2, 2) {
                ensure(r.families_considered == 32 * spec.parts.len() as u64, || "not all 32 families".into())?;
            }
            if (q, n) == (3, 2) {
                ensure(r.families_considered == 64 * spec.parts.len() as u64, || "not all 64 families".into())?;
            }
            total_checked += r.families_satisfying_hypotheses;
            if !r.held() {
                let example = r.violations.first().map(|v| v.to_string()).unwrap_or_default();
                failed.push(format!("{} on F_{q}^{n} ({} violations, e.g. {example})", spec.name, r.violation_count));
            }
        }
    }
    if failed.is_empty() {
        Ok(format!("T1-T12 hold; {total_checked} hypothesis-satisfying families checked"))
    } else {
        Err(failed.join("; "))
    }
}

fn criterion_3() -> Outcome {
    use AxiomId::*;
    let d = Mode::Dimension;
    let with_i4 = verify::mine(&[I1, I2, I4], &[], 2, 2, usize::MAX, false, d).unwrap();
    let with_ni3 = verify::mine(&[I1, I2, NI3], &[], 2, 2, usize::MAX, false, d).unwrap();
    ensure(with_i4.len() == 6, || format!("{} families satisfy I1,I2,I4", with_i4.len()))?;
    ensure(with_i4 == with_ni3, || "I1,I2,I4 and I1,I2,nI3 select different families".into())?;
    let classes = verify::census(2, 2, &[I1, I2, I4], true, d).unwrap();
    ensure(classes == 4, || format!("{classes} isomorphism classes"))?;
    // recount from rank functions alone
    let l = lattice(2, 2);
    let mut rank_count = 0;
    for code in 0..3u32.pow(l.len() as u32) {
        let values = (0..l.len()).map(|i| code / 3u32.pow(i as u32) % 3).collect();
        if QMatroid::new(qmat::qmatroid::RankFunction::new(&l, values).unwrap()).is_ok() {
            rank_count += 1;
        }
    }
    ensure(rank_count == 6, || format!("{rank_count} rank functions satisfy R1-R3"))?;
    Ok("6 families satisfy (I1,I2,I4), the same 6 satisfy (I1,I2,nI3), 4 classes; 6 rank functions by brute force".into())
}

fn criterion_4() -> Outcome {
    use AxiomId::*;
    let mut checked = 0;
    for n in [2, 3] {
        let l = lattice(2, n);
        for f in verify::enumerate_families(&l, FamilyConstraint::Antichain).unwrap() {
            for mode in [Mode::Dimension, Mode::Inclusion] {
                let c = FamilyChecker::new(&f, mode);
                if !c.holds_all(&[B1, B2, B3]).unwrap() {
                    continue;
                }
                checked += 1;
                let values: Vec<bool> = [B4, B4p, B4pp].iter().map(|&a| c.check(a).unwrap().pass).collect();
                ensure(values.iter().all(|&v| v == values[0]), || {
                    format!("{f:?} in {mode} mode: B4,B4',B4'' = {values:?}")
                })?;
            }
        }
    }
    Ok(format!("B4, B4', B4'' agree on {checked} (family, mode) pairs over F_2^2 and F_2^3"))
}

fn criterion_5(corpus: &[QMatroid]) -> Outcome {
    for m in corpus {
        let l = m.lattice();
        let d = m.dual().map_err(|e| e.to_string())?;
        ensure(d.dual().unwrap() == *m, || format!("dual of dual differs for {m:?}"))?;
        let (bases, dual_bases) = (m.bases(), d.bases());
        for b in 0..l.len() {
            ensure(bases.contains_index(b) == dual_bases.contains_index(l.perp_index(b)), || {
                format!("basis duality fails at {}", l.subspace(b))
            })?;
        }
        let dual_indep = d.independent_spaces();
        let expected = SubspaceFamily::from_indices(
            l,
            (0..l.len()).filter(|&a| dual_indep.contains_index(l.perp_index(a))).collect::<Vec<_>>(),
        );
        ensure(m.spanning_spaces() == expected, || format!("spanning duality fails for {m:?}"))?;
    }
    let mut uniform = 0;
    for q in [2, 3] {
        let fq = FieldOrder::new(q).unwrap();
        for n in 0..=4 {
            for k in 0..=n {
                let u = QMatroid::uniform(k, n, fq).unwrap();
                ensure(u.dual().unwrap() == QMatroid::uniform(n - k, n, fq).unwrap(), || {
                    format!("dual of U({k},{n}) over F_{q}")
                })?;
                uniform += 1;
            }
        }
    }
    Ok(format!("{} q-matroids; {uniform} uniform duals", corpus.len()))
}

fn criterion_6(corpus: &[QMatroid]) -> Outcome {
    let v = Check::Validate;
    let kinds = [AxiomKind::Rank, AxiomKind::Independent, AxiomKind::Bases, AxiomKind::Spanning];
    for m in corpus {
        let indep = m.independent_spaces();
        let rank = m.rank_function();
        ensure(independent_from_rank(&rank_from_independent(&indep, v).unwrap(), v).unwrap() == indep, || {
            format!("I -> r -> I for {m:?}")
        })?;
        ensure(rank_from_independent(&independent_from_rank(rank, v).unwrap(), v).unwrap() == *rank, || {
            format!("r -> I -> r for {m:?}")
        })?;
        let bases = bases_from_independent(&indep, v).unwrap();
        ensure(independent_from_bases(&bases, v).unwrap() == indep, || format!("I -> B -> I for {m:?}"))?;
        let spanning = spanning_from_bases(&bases, v).unwrap();
        ensure(bases_from_spanning(&spanning, v).unwrap() == bases, || format!("B -> S -> B for {m:?}"))?;
        ensure(spanning == m.spanning_spaces(), || format!("spanning coherence for {m:?}"))?;
        let d = m.dual().unwrap();
        ensure(bases_from_spanning(&indep.perp(), v).unwrap() == d.bases(), || {
            format!("perp of independents does not span the dual's bases for {m:?}")
        })?;
        for from in kinds {
            let p = Presentation::from_qmatroid(m, from);
            for to in kinds {
                ensure(p.convert(to, v).unwrap() == Presentation::from_qmatroid(m, to), || {
                    format!("{from} -> {to} for {m:?}")
                })?;
            }
        }
    }
    use AxiomId::*;
    let mut derived = 0;
    for (q, n) in [(2, 2), (3, 2), (2, 3)] {
        for f in verify::mine(&[I1, I2, NI3], &[], q, n, usize::MAX, false, Mode::Dimension).unwrap() {
            let r = rank_from_independent(&f, v).unwrap();
            for id in [R1, R2, R3] {
                let rep = check_rank_axiom(id, &r).unwrap();
                ensure(rep.pass, || format!("derived rank of {f:?}: {}", rep.line()))?;
            }
            derived += 1;
        }
    }
    let config = RunConfig::default();
    for (q, n) in [(2, 4), (3, 3)] {
        let r = verify::run_theorem(&verify::theorem("T5").unwrap(), q, n, &config).unwrap();
        ensure(r.held(), || format!("derived rank on sampled F_{q}^{n}: {}", r.result_line()))?;
        derived += r.families_satisfying_hypotheses as usize;
    }
    Ok(format!("round trips on {} q-matroids; derived rank semimodular on {derived} (I1,I2,nI3)-families", corpus.len()))
}

fn criterion_7() -> Outcome {
    for q in [2u32, 3] {
        let fq = FieldOrder::new(q).unwrap();
        for n in 0..=4 {
            for k in 0..=n {
                let count = enumerate(fq, n, Some(k)).unwrap().len() as u128;
                ensure(count == gaussian_binomial(n, k, q), || format!("count of {k}-subspaces of F_{q}^{n}"))?;
            }
        }
    }
    for (q, n) in [(2, 3), (3, 2)] {
        let l = lattice(q, n);
        for a in 0..l.len() {
            for b in 0..l.len() {
                ensure(l.dim(a) + l.dim(b) == l.dim(l.join(a, b)) + l.dim(l.meet(a, b)), || {
                    format!("modularity on F_{q}^{n} at {}, {}", l.subspace(a), l.subspace(b))
                })?;
            }
        }
    }
    let l = lattice(2, 3);
    for a in 0..l.len() {
        let pa = l.perp_index(a);
        ensure(l.perp_index(pa) == a, || format!("perp not involutive at {}", l.subspace(a)))?;
        ensure(l.dim(pa) == 3 - l.dim(a), || "perp dimension".into())?;
        for b in 0..l.len() {
            let pb = l.perp_index(b);
            ensure(l.leq(a, b) == l.leq(pb, pa), || "perp does not reverse order".into())?;
            ensure(l.perp_index(l.meet(a, b)) == l.join(pa, pb), || "perp(A∩B) != perp A + perp B".into())?;
            ensure(l.perp_index(l.join(a, b)) == l.meet(pa, pb), || "perp(A+B) != perp A ∩ perp B".into())?;
        }
    }
    Ok("Gaussian counts for n<=4, q in {2,3}; modularity on F_2^3, F_3^2; perp laws on F_2^3".into())
}

fn criterion_8(corpus: &[QMatroid]) -> Outcome {
    for m in corpus {
        let l = m.lattice();
        let space = m.loop_space().map_err(|e| e.to_string())?;
        let x = l.index_of(&space).unwrap();
        let lines_in_space = SubspaceFamily::from_indices(l, l.lines().filter(|&p| l.leq(p, x)).collect::<Vec<_>>());
        ensure(m.loops() == lines_in_space, || format!("loops differ from lines of {space} for {m:?}"))?;
    }
    Ok(format!("loops are the lines of loop_space(M) for all {} q-matroids", corpus.len()))
}

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(format!("{name}.qm"))
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = qmat_cli::run(std::iter::once("qmat").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn criterion_9() -> Outcome {
    let ce = fixture_path("paper_counterexample");
    let ce = ce.to_str().unwrap();
    let (code, out) = run_cli(&["check", "--file", ce, "--family", "I", "--axioms", "I1,I2,I3,I4"]);
    ensure(code == 1, || format!("check exited {code}"))?;
    ensure(out.contains("I4 FAIL A=01 B=11 I=0 J=0"), || format!("check printed {out:?}"))?;

    let (code, out) = run_cli(&["verify", "--theorem", "T1", "--q", "2", "--n", "2"]);
    ensure(code == 0, || format!("verify exited {code}"))?;
    ensure(out.lines().any(|l| l.starts_with("RESULT T1 checked=") && l.contains("violations=0")), || {
        format!("verify printed {out:?}")
    })?;

    let missing = std::env::temp_dir().join("qmat-acceptance-missing").join("absent.qm");
    let (code, _) = run_cli(&["check", "--file", missing.to_str().unwrap()]);
    ensure(code == 2, || format!("missing file exited {code}"))?;

    for f in fixtures::all() {
        let on_disk = std::fs::read_to_string(fixture_path(&f.name)).unwrap();
        let doc = Document::parse(&on_disk).map_err(|e| e.to_string())?;
        let rendered = doc.render();
        ensure(Document::parse(&rendered).unwrap() == doc, || format!("{} does not round-trip", f.name))?;
        ensure(Document::parse(&rendered).unwrap().render() == rendered, || format!("{} render unstable", f.name))?;
    }
    Ok(format!("exit codes 1/0/2; {} fixtures round-trip", fixtures::names().len()))
}

fn main() {
    let start = Instant::now();
    let corpus = corpus();
    type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion<'_>> = vec![
        ("1 counterexample reproduction", Box::new(criterion_1)),
        ("2 theorem harness T1-T12", Box::new(criterion_2)),
        ("3 census on F_2^2", Box::new(criterion_3)),
        ("4 B4/B4'/B4'' equivalence", Box::new(criterion_4)),
        ("5 duality suite", Box::new(|| criterion_5(&corpus))),
        ("6 cryptomorphism round trips", Box::new(|| criterion_6(&corpus))),
        ("7 lattice self-checks", Box::new(criterion_7)),
        ("8 loop-space lemma", Box::new(|| criterion_8(&corpus))),
        ("9 CLI contract", Box::new(criterion_9)),
    ];
    let mut failures = 0;
    for (name, check) in &criteria {
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("ACCEPTANCE {name}: PASS ({detail}) [{:.2?}]", t.elapsed()),
            Err(detail) => {
                failures += 1;
                println!("ACCEPTANCE {name}: FAIL ({detail}) [{:.2?}]", t.elapsed());
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed in {:.2?}",
        criteria.len() - failures,
        start.elapsed()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
