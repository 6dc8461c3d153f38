//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//! Run with `cargo test -p pivotal-core --test acceptance`.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{
    check_tables, definable_family, formulas, nixon_classical_pivot, nixon_four_pivot, pointwise_clone, quotient,
    structure, Tables, NIXON_FOUR_CLAIMS,
};
use pivotal_core::characterize::{run, Coverage, Proposition, VerifyOptions, VerifyReport};
use pivotal_core::consequence::entails_pivotal;
use pivotal_core::formula::parse;
use pivotal_core::semantics::{Assumption, Status, StructureKind};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn opts() -> VerifyOptions {
    VerifyOptions { samples: 10_000, ..VerifyOptions::default() }
}

/// Runs one proposition part (or all applicable parts) and requires zero failures.
fn verified(p: Proposition, kind: StructureKind, atoms: &str, part: Option<usize>, o: &VerifyOptions) -> Result<Vec<VerifyReport>, String> {
    let q = quotient(kind, atoms);
    let run = run(p, &q, part, o).map_err(|e| format!("{p} on {kind} {atoms}: {e}"))?;
    for r in &run.reports {
        ensure(r.passed(), || {
            format!("{}; first failure: {}", r.summary(), r.failures[0].detail)
        })?;
    }
    ensure(!run.reports.is_empty(), || format!("{p} on {kind} {atoms}: no part ran"))?;
    Ok(run.reports)
}

fn tables() -> Outcome {
    let mut cells = 0;
    for kind in [StructureKind::Four, StructureKind::J3, StructureKind::Classical] {
        cells += check_tables(kind)?;
    }
    Ok(format!("{cells} cells match"))
}

fn nixon_classical() -> Outcome {
    let q = quotient(StructureKind::Classical, "r,q,p");
    ensure(q.clone.len() == 256, || format!("clone has {} classes", q.clone.len()))?;
    let s = &q.structure;
    let pivot = nixon_classical_pivot(s);
    let holds = |g: &str, a: &pivotal_core::Formula| entails_pivotal(s, &pivot, &formulas(g), a).unwrap();
    ensure(holds("r", &parse("~p").unwrap()), || "{r} does not conclude ~p".into())?;
    ensure(holds("q", &parse("p").unwrap()), || "{q} does not conclude p".into())?;
    for g in ["r, p", "q, r"] {
        for c in 0..q.clone.len() {
            let w = q.clone.witness(c);
            ensure(holds(g, &w), || format!("{{{g}}} does not conclude {w}"))?;
        }
    }
    Ok("256 classes; {r,p} and {q,r} conclude every class".into())
}

fn nixon_four() -> Outcome {
    let s = structure(StructureKind::Four, "r,q,p");
    let pivot = nixon_four_pivot(&s);
    for &(g, a, expected) in NIXON_FOUR_CLAIMS {
        let got = entails_pivotal(&s, &pivot, &formulas(g), &parse(a).unwrap()).unwrap();
        ensure(got == expected, || format!("{{{g}}} |~ {a}: got {got}, expected {expected}"))?;
    }
    Ok(format!("{} claims match", NIXON_FOUR_CLAIMS.len()))
}

fn assumption_matrix() -> Outcome {
    for kind in [StructureKind::Classical, StructureKind::Four, StructureKind::J3] {
        let q = quotient(kind, "p");
        let report = q.assumptions();
        for a in Assumption::ALL {
            let expected = !(kind == StructureKind::Four && a == Assumption::A2);
            ensure(report.holds(a) == expected, || format!("{kind} {a}: expected {expected}"))?;
        }
        if let Status::Fails(cx) = report.status(Assumption::A2) {
            let genuine = cx.recheck(&q.structure).map_err(|e| e.to_string())?;
            ensure(genuine, || format!("{kind} (A2) counterexample does not recheck: {cx}"))?;
        }
    }
    Ok("classical and J3 satisfy all; FOUR fails (A2) with a rechecked counterexample".into())
}

fn pivot_rep() -> Outcome {
    let o = opts();
    let mut n = 0;
    n += verified(Proposition::PivotRep, StructureKind::Classical, "p", Some(0), &o)?[0].candidates;
    for kind in [StructureKind::Classical, StructureKind::Four] {
        for part in [1, 2] {
            n += verified(Proposition::PivotRep, kind, "p", Some(part), &o)?[0].candidates;
        }
    }
    Ok(format!("{n} candidates, universes up to {} elements", o.max_universe))
}

/// Distinct tables V ↦ V ∩ I over the definable family, computed from the
/// pointwise oracle: the number of choice functions that are SC and DP.
fn oracle_dp_pivot_tables(kind: StructureKind, atoms: usize) -> usize {
    let t = Tables::for_kind(kind);
    let family: Vec<Vec<bool>> = definable_family(t, &pointwise_clone(t, atoms)).into_iter().collect();
    let size = family[0].len();
    let mut tables = BTreeSet::new();
    for bits in 0u64..1 << size {
        let images: Vec<Vec<bool>> = family
            .iter()
            .map(|v| (0..size).map(|i| v[i] && bits >> (size - 1 - i) & 1 == 1).collect())
            .collect();
        if images.iter().all(|m| family.contains(m)) {
            tables.insert(images);
        }
    }
    tables.len()
}

fn rep_dp() -> Outcome {
    let o = opts();
    let one = &verified(Proposition::RepDp, StructureKind::Classical, "p", None, &o)?[0];
    ensure(one.mode == Coverage::Exhaustive && one.candidates >= 65_536, || {
        format!("classical p not exhaustive: {}", one.summary())
    })?;
    let expected = oracle_dp_pivot_tables(StructureKind::Classical, 1) as u64;
    ensure(one.family_size == expected, || format!("family size {} vs oracle {expected}", one.family_size))?;
    let two = &verified(Proposition::RepDp, StructureKind::Classical, "p,q", None, &o)?[0];
    let expected = oracle_dp_pivot_tables(StructureKind::Classical, 2) as u64;
    ensure(two.family_size == expected, || format!("family size {} vs oracle {expected}", two.family_size))?;
    Ok(format!("{} + {} candidates", one.candidates, two.candidates))
}

fn rep_general() -> Outcome {
    let o = opts();
    let mut n = 0;
    for part in [0, 1] {
        let r = &verified(Proposition::RepGeneral, StructureKind::Classical, "p", Some(part), &o)?[0];
        ensure(r.mode == Coverage::Exhaustive, || format!("not exhaustive: {}", r.summary()))?;
        n += r.candidates;
        n += verified(Proposition::RepGeneral, StructureKind::Four, "p", Some(part), &o)?[0].candidates;
    }
    Ok(format!("{n} candidates"))
}

fn rep_disc() -> Outcome {
    let o = opts();
    let mut n = 0;
    let mut runs = 0;
    for p in [Proposition::RepDiscDp, Proposition::RepDisc] {
        for r in verified(p, StructureKind::J3, "p", None, &o)?
            .into_iter()
            .chain(verified(p, StructureKind::Four, "p", None, &o)?)
        {
            if r.mode == Coverage::Sampled {
                ensure(r.notes.iter().any(|s| s.contains("sampled completeness")), || {
                    format!("sampled report lacks its label: {}", r.summary())
                })?;
            }
            n += r.candidates;
            runs += 1;
        }
    }
    // J3 runs every part; FOUR runs the parts without (A2).
    ensure(runs == 2 + 4 + 1 + 2, || format!("{runs} parts ran"))?;
    Ok(format!("{runs} parts, {n} candidates"))
}

fn xlogic() -> Outcome {
    let o = opts();
    let two = &verified(Proposition::Xlogic, StructureKind::Classical, "p,q", None, &o)?[0];
    let j3 = &verified(Proposition::Xlogic, StructureKind::J3, "p", None, &o)?[0];
    ensure(two.notes[0].starts_with("16 sets W"), || two.notes[0].clone())?;
    ensure(j3.notes[0].starts_with("8 sets W"), || j3.notes[0].clone())?;
    Ok(format!("{} + {} pertinence sets and pivots", two.candidates, j3.candidates))
}

fn properties() -> Outcome {
    let o = opts();
    let mut n = 0;
    for kind in [StructureKind::Classical, StructureKind::Four, StructureKind::J3] {
        n += verified(Proposition::Properties, kind, "p", None, &o)?[0].candidates;
    }
    Ok(format!("{n} draws"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, u64); 10] = [
        ("table fidelity", tables, 1),
        ("classical Nixon", nixon_classical, 10),
        ("FOUR Nixon", nixon_four, 1),
        ("assumption matrix", assumption_matrix, 30),
        ("pivot representation", pivot_rep, 60),
        ("definability-preserving representation", rep_dp, 300),
        ("general representation", rep_general, 300),
        ("discriminative representations", rep_disc, 600),
        ("pertinence relations", xlogic, 120),
        ("property suites", properties, 60),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let outcome = outcome.and_then(|d| {
            ensure(took <= Duration::from_secs(limit), || format!("took {took:.1?}, limit {limit} s"))?;
            Ok(d)
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail} ({took:.2?})", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {e} ({took:.2?})", i + 1);
            }
        }
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
