mod common;

use common::{check_tables, definable_family, pointwise_clone, quotient, structure, Tables};
use pivotal_core::formula::{disjoin_sets, parse, parse_list};
use pivotal_core::semantics::{FormulaClone, StructureKind};
use pivotal_core::Formula;
use proptest::prelude::*;

#[test]
fn four_tables_match_cell_by_cell() {
    assert_eq!(check_tables(StructureKind::Four), Ok(4 + 16 + 16));
}

#[test]
fn j3_tables_match_cell_by_cell() {
    assert_eq!(check_tables(StructureKind::J3), Ok(3 + 9 + 9));
}

#[test]
fn classical_tables_match_cell_by_cell() {
    assert_eq!(check_tables(StructureKind::Classical), Ok(2 + 4 + 4));
}

#[test]
fn constants_take_fixed_values() {
    for kind in [StructureKind::Classical, StructureKind::Four, StructureKind::J3] {
        let s = structure(kind, "p");
        for v in 0..s.universe_size() {
            let val = s.valuation(v);
            assert_eq!(s.eval(&val, &parse("true").unwrap()).unwrap().symbol(), "t");
            assert_eq!(s.eval(&val, &parse("false").unwrap()).unwrap().symbol(), "f");
        }
    }
}

/// Class counts and definable-family sizes agree with a pointwise oracle.
#[test]
fn clone_and_family_sizes_match_the_pointwise_oracle() {
    let cases = [
        (StructureKind::Classical, "p", 4, 4),
        (StructureKind::Classical, "p,q", 16, 16),
        (StructureKind::Classical, "p,q,r", 256, 256),
        (StructureKind::J3, "p", 6, 5),
        (StructureKind::J3, "p,q", 84, 48),
        (StructureKind::Four, "p", 6, 6),
        (StructureKind::Four, "p,q", 168, 168),
    ];
    for (kind, atoms, classes, definable) in cases {
        let tables = Tables::for_kind(kind);
        let n = atoms.split(',').count();
        let oracle = pointwise_clone(tables, n);
        let family = definable_family(tables, &oracle);
        assert_eq!((oracle.len(), family.len()), (classes, definable), "{kind} {atoms}");
        let q = quotient(kind, atoms);
        assert_eq!(q.clone.len(), classes, "{kind} {atoms}");
        assert_eq!(q.family.len(), definable, "{kind} {atoms}");
        // Every class the library finds is realizable in the oracle.
        for c in q.clone.classes() {
            let vector: Vec<usize> = (0..q.universe_size())
                .map(|v| tables.index(c.value_at(v).symbol().chars().next().unwrap()))
                .collect();
            assert!(oracle.contains(&vector));
        }
    }
}

#[test]
fn clone_cap_leaves_the_clone_incomplete() {
    let s = structure(StructureKind::Four, "p,q");
    let clone = FormulaClone::compute(&s, 50);
    assert!(!clone.is_complete());
    assert!(clone.require_complete().is_err());
}

#[test]
fn nonexistent_atoms_are_reported() {
    let s = structure(StructureKind::Classical, "p");
    assert!(s.models(&[parse("q").unwrap()]).is_err());
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        4 => proptest::sample::select(vec!["p", "q"]).prop_map(Formula::atom),
        1 => any::<bool>().prop_map(Formula::Const),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::negate),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| l.or(r)),
            (inner.clone(), inner).prop_map(|(l, r)| l.and(r)),
        ]
    })
}

fn kinds() -> impl Strategy<Value = StructureKind> {
    proptest::sample::select(vec![StructureKind::Classical, StructureKind::Four, StructureKind::J3])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Classifying a formula and reading the class back gives the same
    /// models and the same entailments as evaluating the formula directly.
    #[test]
    fn quotienting_preserves_models_and_entailment(kind in kinds(), a in formula(), b in formula()) {
        let q = quotient(kind, "p,q");
        let (ca, cb) = (q.classify(&a).unwrap(), q.classify(&b).unwrap());
        prop_assert_eq!(q.clone.models(ca), &q.structure.models(std::slice::from_ref(&a)).unwrap());
        let via_classes = q.clone.models(ca).is_subset(q.clone.models(cb));
        prop_assert_eq!(via_classes, q.structure.entails(std::slice::from_ref(&a), &b).unwrap());
        let witness = q.clone.witness(ca);
        prop_assert_eq!(q.classify(&witness).unwrap(), ca);
    }

    /// V ⊆ Mod(Th(V)) and Th(Mod(Th(V))) = Th(V) for arbitrary valuation sets.
    #[test]
    fn theory_and_models_form_a_galois_connection(kind in kinds(), bits in any::<u64>()) {
        let q = quotient(kind, "p,q");
        let n = q.universe_size();
        let v = pivotal_core::ValuationSet::from_indices(n, (0..n).filter(|i| bits >> i & 1 == 1));
        let th = q.clone.theory(&v);
        let closure = q.clone.models_of(&th);
        prop_assert!(v.is_subset(&closure));
        prop_assert_eq!(q.clone.theory(&closure), th);
        prop_assert!(q.family.contains(&closure));
    }

    /// De Morgan and double negation hold on Mod in all three structures.
    #[test]
    fn de_morgan_laws_hold_on_models(kind in kinds(), a in formula(), b in formula()) {
        let s = structure(kind, "p,q");
        let m = |f: Formula| s.models(&[f]).unwrap();
        prop_assert_eq!(m(a.clone().or(b.clone()).negate()), m(a.clone().negate().and(b.clone().negate())));
        prop_assert_eq!(m(a.clone().and(b.clone()).negate()), m(a.clone().negate().or(b.clone().negate())));
        prop_assert_eq!(m(a.clone().negate().negate()), m(a));
    }

    /// With disjunction behaving as union on models, Mod(Γ ∨ Δ) = Mod(Γ) ∪ Mod(Δ).
    #[test]
    fn set_disjunction_unions_models(kind in kinds(), g in proptest::collection::vec(formula(), 1..4), d in proptest::collection::vec(formula(), 1..4)) {
        let s = structure(kind, "p,q");
        let joined = s.models(&disjoin_sets(&g, &d)).unwrap();
        prop_assert_eq!(joined, s.models(&g).unwrap().union(&s.models(&d).unwrap()));
    }
}

#[test]
fn four_models_of_a_contradiction() {
    let s = structure(StructureKind::Four, "p");
    let m = s.models(&parse_list("p, ~p").unwrap()).unwrap();
    assert_eq!(m.iter().map(|v| s.format_valuation(v)).collect::<Vec<_>>(), vec!["p=B"]);
}
