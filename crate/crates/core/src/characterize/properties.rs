//! Randomized property suites over a structure.

use std::sync::Arc;

use rand::Rng;

use crate::bitset::ValuationSet;
use crate::choice::{Pivot, SetFunction};
use crate::consequence::{Mode, PivotalRelation};
use crate::error::Result;
use crate::formula::Formula;
use crate::semantics::Quotient;

use super::verify::{random_subset, rng, Coverage, Failure, Proposition, Timer, VerifyOptions, VerifyReport};

/// Draws per suite.
pub const PROPERTY_DRAWS: usize = 1_000;

/// Runs three suites of [`PROPERTY_DRAWS`] draws each:
/// ν_f is a strongly coherent choice function for random f on the definable
/// family; plain pivotal relations are monotonic and supraclassical for
/// random (I, Γ, Δ) with Γ ⊆ Δ; discriminative relations never conclude both
/// α and ¬α for random (I, Γ).
///
/// Verdicts go through formula evaluation on clone witnesses.
pub fn verify_properties(quotient: &Quotient, opts: &VerifyOptions) -> Result<VerifyReport> {
    let timer = Timer::start(opts);
    quotient.clone.require_complete()?;
    let s = &quotient.structure;
    let clone = &quotient.clone;
    let universe = s.universe();
    let witnesses: Vec<Formula> = (0..clone.len()).map(|a| clone.witness(a)).collect();
    let domain: Arc<[ValuationSet]> = quotient.family.sets().into();
    let mut failures = Vec::new();

    let mut r = rng(opts, 10);
    for _ in 0..PROPERTY_DRAWS {
        let images = domain.iter().map(|_| random_subset(&mut r, &universe)).collect();
        let f = SetFunction::new(domain.clone(), images)?;
        let nu = f.nu();
        let chooses = (0..domain.len()).all(|i| nu.image(i).is_subset(&domain[i]));
        if !chooses || !nu.is_strongly_coherent() {
            failures.push(Failure {
                kind: "nu-not-sc".into(),
                detail: format!("f with images {:?}", f.images()),
            });
        }
    }

    let pick = |r: &mut rand_chacha::ChaCha8Rng, p: f64| -> Vec<Formula> {
        witnesses.iter().filter(|_| r.gen_bool(p)).cloned().collect()
    };
    let mut r = rng(opts, 11);
    for _ in 0..PROPERTY_DRAWS {
        let pivot = Pivot::new(random_subset(&mut r, &universe));
        let rel = PivotalRelation::new(pivot.clone(), Mode::Plain);
        let gamma = pick(&mut r, 0.2);
        let mut delta = gamma.clone();
        delta.extend(pick(&mut r, 0.1));
        for alpha in &witnesses {
            let from_gamma = rel.entails(s, &gamma, alpha)?;
            if from_gamma && !rel.entails(s, &delta, alpha)? {
                failures.push(Failure {
                    kind: "monotonicity".into(),
                    detail: format!("I={} Gamma={} Delta={} alpha={alpha}", pivot.set(), list(&gamma), list(&delta)),
                });
            }
            if s.entails(&gamma, alpha)? && !from_gamma {
                failures.push(Failure {
                    kind: "supraclassicality".into(),
                    detail: format!("I={} Gamma={} alpha={alpha}", pivot.set(), list(&gamma)),
                });
            }
        }
    }

    let mut r = rng(opts, 12);
    for _ in 0..PROPERTY_DRAWS {
        let pivot = Pivot::new(random_subset(&mut r, &universe));
        let rel = PivotalRelation::new(pivot.clone(), Mode::Discriminative);
        let gamma = pick(&mut r, 0.2);
        for alpha in &witnesses {
            let negated = alpha.clone().negate();
            if rel.entails(s, &gamma, alpha)? && rel.entails(s, &gamma, &negated)? {
                failures.push(Failure {
                    kind: "self-exclusion".into(),
                    detail: format!("I={} Gamma={} alpha={alpha}", pivot.set(), list(&gamma)),
                });
            }
        }
    }

    Ok(VerifyReport {
        proposition: Proposition::Properties.id().into(),
        part: 0,
        structure: s.describe(),
        mode: Coverage::Sampled,
        candidates: 3 * PROPERTY_DRAWS as u64,
        condition_passers: 0,
        family_size: 0,
        failures,
        runtime_ms: timer.elapsed_ms(),
        seed: opts.seed,
        notes: vec![
            format!("{PROPERTY_DRAWS} random functions f: nu_f is a strongly coherent choice function"),
            format!("{PROPERTY_DRAWS} random (I, Gamma, Delta): plain relations are monotonic and supraclassical"),
            format!("{PROPERTY_DRAWS} random (I, Gamma): discriminative relations never conclude a formula and its negation"),
        ],
    })
}

fn list(gamma: &[Formula]) -> String {
    format!("{{{}}}", gamma.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", "))
}
