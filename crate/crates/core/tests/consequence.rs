mod common;

use common::{formulas, nixon_classical_pivot, nixon_four_pivot, quotient, structure, NIXON_FOUR_CLAIMS};
use pivotal_core::characterize::{check_condition, first_failure, recheck, Condition, RelationUnderTest};
use pivotal_core::choice::{ChoiceFunction, Pivot};
use pivotal_core::consequence::{entails_basic, entails_discriminative, entails_pivotal, Mode};
use pivotal_core::formula::parse;
use pivotal_core::semantics::{Assumption, Counterexample, Status, StructureKind};

#[test]
fn nixon_classical_draws_the_expected_conclusions() {
    let q = quotient(StructureKind::Classical, "r,q,p");
    assert_eq!(q.clone.len(), 256);
    let s = &q.structure;
    let pivot = nixon_classical_pivot(s);
    assert!(entails_pivotal(s, &pivot, &formulas("r"), &parse("~p").unwrap()).unwrap());
    assert!(entails_pivotal(s, &pivot, &formulas("q"), &parse("p").unwrap()).unwrap());
    assert!(!entails_pivotal(s, &pivot, &formulas("r"), &parse("p").unwrap()).unwrap());
    for gamma in ["r, p", "q, r"] {
        for c in 0..q.clone.len() {
            let alpha = q.clone.witness(c);
            assert!(entails_pivotal(s, &pivot, &formulas(gamma), &alpha).unwrap(), "{{{gamma}}} |~ {alpha}");
        }
    }
}

#[test]
fn nixon_classical_basic_entailment_stays_cautious() {
    let s = structure(StructureKind::Classical, "r,q,p");
    assert!(!entails_basic(&s, &formulas("r"), &parse("~p").unwrap()).unwrap());
    assert!(entails_basic(&s, &formulas("r, p"), &parse("p").unwrap()).unwrap());
}

#[test]
fn nixon_four_claims_hold_with_the_pointwise_pivot() {
    let s = structure(StructureKind::Four, "r,q,p");
    let pivot = nixon_four_pivot(&s);
    assert_eq!(pivot.set().count(), 36);
    for &(gamma, alpha, expected) in NIXON_FOUR_CLAIMS {
        let got = entails_pivotal(&s, &pivot, &formulas(gamma), &parse(alpha).unwrap()).unwrap();
        assert_eq!(got, expected, "{{{gamma}}} |~ {alpha}");
    }
}

#[test]
fn bundled_four_pivot_file_matches_the_pointwise_pivot() {
    let s = structure(StructureKind::Four, "r,q,p");
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../cli/examples/nixon-four/nixon.pivot");
    let parsed = Pivot::parse(&s, &std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(parsed, nixon_four_pivot(&s));
}

#[test]
fn four_formula_pivot_is_not_the_pointwise_pivot() {
    // Mod(~r | ~p) drops every valuation with r=N, while the pointwise rule
    // keeps them because N is not designated.
    let s = structure(StructureKind::Four, "r,q,p");
    assert_ne!(nixon_classical_pivot(&s), nixon_four_pivot(&s));
}

#[test]
fn disjunctive_syllogism_fails_in_four() {
    let s = structure(StructureKind::Four, "p,q");
    assert!(!entails_basic(&s, &formulas("p, ~p | q"), &parse("q").unwrap()).unwrap());
    let c = structure(StructureKind::Classical, "p,q");
    assert!(entails_basic(&c, &formulas("p, ~p | q"), &parse("q").unwrap()).unwrap());
}

#[test]
fn discriminative_mode_concludes_nothing_from_an_empty_choice() {
    let s = structure(StructureKind::Classical, "r,q,p");
    let pivot = nixon_classical_pivot(&s);
    for alpha in ["p", "~p", "true", "false"] {
        assert!(!entails_discriminative(&s, &pivot, &formulas("r, p"), &parse(alpha).unwrap()).unwrap());
    }
    assert!(entails_discriminative(&s, &pivot, &formulas("r"), &parse("~p").unwrap()).unwrap());
    assert!(!entails_discriminative(&s, &pivot, &formulas("r"), &parse("p").unwrap()).unwrap());
}

#[test]
fn assumption_matrix_on_one_atom_structures() {
    for (kind, failing) in [
        (StructureKind::Classical, vec![]),
        (StructureKind::Four, vec![Assumption::A2]),
        (StructureKind::J3, vec![]),
    ] {
        let q = quotient(kind, "p");
        let report = q.assumptions();
        for a in Assumption::ALL {
            assert_eq!(report.holds(a), !failing.contains(&a), "{kind} {a}");
        }
    }
    let q = quotient(StructureKind::Four, "p");
    let Status::Fails(cx) = q.assumptions().status(Assumption::A2).clone() else {
        panic!("FOUR must fail (A2)");
    };
    assert!(matches!(cx, Counterexample::Undecided { .. }));
    assert!(cx.recheck(&q.structure).unwrap());
    assert!(q.assumptions().require(&[Assumption::A2]).is_err());
}

#[test]
fn universe_pivot_satisfies_the_plain_conditions() {
    for kind in [StructureKind::Classical, StructureKind::Four, StructureKind::J3] {
        let q = quotient(kind, "p");
        let rel = RelationUnderTest::from_pivot(&q, &Pivot::universe(q.universe_size()), Mode::Plain);
        let conditions = [Condition::C0, Condition::C1, Condition::C2, Condition::C3, Condition::C4];
        assert_eq!(first_failure(&conditions, &rel), None, "{kind}");
    }
}

#[test]
fn nixon_classical_relation_satisfies_the_pivotal_condition() {
    let q = quotient(StructureKind::Classical, "r,q,p");
    let rel = RelationUnderTest::from_pivot(&q, &nixon_classical_pivot(&q.structure), Mode::Plain);
    for c in [Condition::C0, Condition::C1, Condition::C2, Condition::C4, Condition::C5] {
        assert!(check_condition(c, &rel).holds, "{c}");
    }
}

#[test]
fn empty_conclusions_violate_inclusion_and_the_violation_rechecks() {
    let q = quotient(StructureKind::J3, "p");
    let table = vec![q.clone.empty_classes(); q.family.len()];
    let rel = RelationUnderTest::from_table(&q, table).unwrap();
    let report = check_condition(Condition::C2, &rel);
    assert!(!report.holds);
    assert!(recheck(Condition::C2, &rel, &report.counterexample.unwrap()).unwrap());
}

#[test]
fn condition_names_parse_in_every_spelling() {
    for s in ["c4", "4", "(|~4)", "C4"] {
        assert_eq!(s.parse::<Condition>().unwrap(), Condition::C4);
    }
    assert!("c13".parse::<Condition>().is_err());
}

/// For a coherency-preserving pivot in discriminative mode, the relation
/// regenerates its own choice: Mod(Γ) ∩ Mod(K) ∩ Mod(H) equals the chosen
/// set on coherent premises, and K = Th^d of that set.
#[test]
fn discriminative_pivots_are_recovered_from_their_conclusions() {
    for kind in [StructureKind::J3, StructureKind::Four] {
        let q = quotient(kind, "p");
        let mut checked = 0;
        for pivot in Pivot::all(q.universe_size()) {
            let mu = ChoiceFunction::from_pivot(q.family.sets().into(), &pivot);
            if !mu.is_coherency_preserving(&q) || !mu.is_definability_preserving(&q.family) {
                continue;
            }
            checked += 1;
            let rel = RelationUnderTest::from_pivot(&q, &pivot, Mode::Discriminative);
            for d in 0..q.family.len() {
                if !q.is_coherent_index(d) {
                    continue;
                }
                let base = rel.full_base(d);
                assert_eq!(base, pivot.choose(q.family.get(d)), "{kind} pivot {:?} premise {d}", pivot.set());
                assert_eq!(rel.conclusions(d), &q.clone.theory_d(&base));
            }
        }
        assert!(checked > 0, "{kind}");
    }
}
