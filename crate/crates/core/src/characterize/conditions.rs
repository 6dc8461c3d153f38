//! The conditions (|~0) to (|~12) evaluated on a relation under test.
//!
//! Premise sets Γ, Δ range over the relation's premises and formulas α, β
//! over clone classes; C⊢(X) is Th(Mod X) throughout.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bitset::ValuationSet;
use crate::error::{Error, Result};
use crate::formula::Formula;

use super::relation::RelationUnderTest;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Condition {
    C0,
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
    C10,
    C11,
    C12,
}

impl Condition {
    pub const ALL: [Condition; 13] = [
        Condition::C0,
        Condition::C1,
        Condition::C2,
        Condition::C3,
        Condition::C4,
        Condition::C5,
        Condition::C6,
        Condition::C7,
        Condition::C8,
        Condition::C9,
        Condition::C10,
        Condition::C11,
        Condition::C12,
    ];

    pub fn number(self) -> usize {
        self as usize
    }

    /// Display label such as `(|~4)`.
    pub fn label(self) -> String {
        format!("(|~{})", self.number())
    }

    /// Plain-text statement of the condition.
    pub fn statement(self) -> &'static str {
        match self {
            Condition::C0 => "if C(G) = C(D) then C~(G) = C~(D)",
            Condition::C1 => "C~(G) = C(C~(G))",
            Condition::C2 => "G is included in C~(G)",
            Condition::C3 => "C~(G) is included in C(C~(D), G)",
            Condition::C4 => "C~(G) = Th({v in Mod G : v in Mod D implies v in Mod C~(D), for all D})",
            Condition::C5 => "V minus {v : v in Mod D implies v in Mod C~(D), for all D} is definable",
            Condition::C6 => "if b in C(G, C~(G)) \\ C~(G) and ~a in C(G, C~(G), ~b) then a not in C~(G)",
            Condition::C7 => "if a in C(G, C~(G)) \\ C~(G) and b in C(G, C~(G), ~a) \\ C~(G) then a | b not in C~(G)",
            Condition::C8 => "if a in C~(G) then ~a not in C(G, C~(G))",
            Condition::C9 => "C~(G) u H(G) is included in C(D, C~(D), H(D), G)",
            Condition::C10 => "if G is consistent then C~(G) is consistent, G is included in C~(G) and C(C~(G)) = C~(G)",
            Condition::C11 => "C(G, C~(G), H(G)) = Th({v in Mod G : v in Mod D implies v in Mod(C~(D), H(D)), for all D})",
            Condition::C12 => "V minus {v : v in Mod D implies v in Mod(C~(D), H(D)), for all D} is definable",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for Condition {
    type Err = Error;

    /// Accepts `c4`, `4` or `(|~4)`.
    fn from_str(s: &str) -> Result<Condition> {
        let digits = s
            .trim()
            .trim_start_matches("(|~")
            .trim_end_matches(')')
            .trim_start_matches(['c', 'C']);
        digits
            .parse::<usize>()
            .ok()
            .and_then(|n| Condition::ALL.get(n).copied())
            .ok_or_else(|| Error::UnknownCondition(s.to_owned()))
    }
}

/// The instance at which a condition fails. Premise indices refer to the
/// relation, formula indices to clone classes.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Violation {
    pub gamma: Option<usize>,
    pub delta: Option<usize>,
    pub alpha: Option<usize>,
    pub beta: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub condition: Condition,
    pub holds: bool,
    pub counterexample: Option<Violation>,
}

impl ConditionReport {
    fn from_violation(condition: Condition, v: Option<Violation>) -> ConditionReport {
        ConditionReport {
            condition,
            holds: v.is_none(),
            counterexample: v,
        }
    }
}

fn gamma(i: usize) -> Violation {
    Violation { gamma: Some(i), ..Violation::default() }
}

/// {v : for every premise Δ, v ∈ Mod(Δ) implies v ∈ target(Δ)}.
fn surviving(rel: &RelationUnderTest, target: impl Fn(usize) -> ValuationSet) -> ValuationSet {
    let mut kept = rel.quotient().structure.universe();
    for j in 0..rel.len() {
        kept.intersect_with(&rel.gamma_models(j).difference(&target(j)).complement());
    }
    kept
}

pub fn check_condition(condition: Condition, rel: &RelationUnderTest) -> ConditionReport {
    ConditionReport::from_violation(condition, find_violation(condition, rel))
}

/// Checks conditions in order, stopping at the first failure.
pub fn first_failure(conditions: &[Condition], rel: &RelationUnderTest) -> Option<ConditionReport> {
    conditions
        .iter()
        .map(|&c| check_condition(c, rel))
        .find(|r| !r.holds)
}

fn find_violation(condition: Condition, rel: &RelationUnderTest) -> Option<Violation> {
    let q = rel.quotient();
    let clone = &q.clone;
    let n = rel.len();
    let k = |i: usize| rel.conclusions(i);
    match condition {
        Condition::C0 => (0..n).find_map(|i| {
            (i + 1..n).find_map(|j| {
                let same = rel.premise(i).models == rel.premise(j).models;
                (same && k(i) != k(j)).then(|| Violation {
                    gamma: Some(i),
                    delta: Some(j),
                    alpha: k(i).union(k(j)).difference(&k(i).intersection(k(j))).first(),
                    beta: None,
                })
            })
        }),
        Condition::C1 => (0..n).find_map(|i| {
            let closure = clone.theory(rel.mod_k(i));
            (&closure != k(i)).then(|| Violation {
                alpha: closure.difference(k(i)).first().or(k(i).difference(&closure).first()),
                ..gamma(i)
            })
        }),
        Condition::C2 => (0..n).find_map(|i| {
            rel.premise(i)
                .gamma
                .difference(k(i))
                .first()
                .map(|a| Violation { alpha: Some(a), ..gamma(i) })
        }),
        Condition::C3 => (0..n).find_map(|i| {
            (0..n).find_map(|j| {
                let target = clone.theory(&rel.mod_k(j).intersection(rel.gamma_models(i)));
                k(i).difference(&target).first().map(|a| Violation {
                    gamma: Some(i),
                    delta: Some(j),
                    alpha: Some(a),
                    beta: None,
                })
            })
        }),
        Condition::C4 => {
            let kept = surviving(rel, |j| rel.mod_k(j).clone());
            (0..n).find_map(|i| {
                let target = clone.theory(&rel.gamma_models(i).intersection(&kept));
                (&target != k(i)).then(|| Violation {
                    alpha: target.difference(k(i)).first().or(k(i).difference(&target).first()),
                    ..gamma(i)
                })
            })
        }
        Condition::C5 => {
            let kept = surviving(rel, |j| rel.mod_k(j).clone());
            (!q.family.contains(&kept.complement())).then(Violation::default)
        }
        Condition::C6 => (0..n).find_map(|i| {
            let base = &rel.derived().base[i];
            let undecided = clone.theory(base).difference(k(i));
            let found = undecided.iter().find_map(|b| {
                let narrowed = base.intersection(&clone.class(b).falsity);
                k(i).iter()
                    .find(|&a| narrowed.is_subset(&clone.class(a).falsity))
                    .map(|a| Violation { alpha: Some(a), beta: Some(b), ..gamma(i) })
            });
            found
        }),
        Condition::C7 => (0..n).find_map(|i| {
            let base = &rel.derived().base[i];
            let undecided = clone.theory(base).difference(k(i));
            let found = undecided.iter().find_map(|a| {
                let narrowed = base.intersection(&clone.class(a).falsity);
                let betas = clone.theory(&narrowed).difference(k(i));
                let found = betas.iter().find_map(|b| {
                    let join = clone
                        .class_of(&clone.class(a).or(clone.class(b)))
                        .expect("complete clone is closed under disjunction");
                    k(i).contains(join)
                        .then_some(Violation { alpha: Some(a), beta: Some(b), ..gamma(i) })
                });
                found
            });
            found
        }),
        Condition::C8 => (0..n).find_map(|i| {
            let base = &rel.derived().base[i];
            k(i).iter()
                .find(|&a| base.is_subset(&clone.class(a).falsity))
                .map(|a| Violation { alpha: Some(a), ..gamma(i) })
        }),
        Condition::C9 => (0..n).find_map(|i| {
            let lhs = k(i).union(&rel.h(i).union);
            (0..n).find_map(|j| {
                let target = clone.theory(&rel.full_base(j).intersection(rel.gamma_models(i)));
                lhs.difference(&target).first().map(|a| Violation {
                    gamma: Some(i),
                    delta: Some(j),
                    alpha: Some(a),
                    beta: None,
                })
            })
        }),
        Condition::C10 => (0..n).find_map(|i| {
            if !q.is_coherent(rel.gamma_models(i)) {
                return None;
            }
            if !q.is_coherent(rel.mod_k(i)) {
                return Some(gamma(i));
            }
            if let Some(a) = rel.premise(i).gamma.difference(k(i)).first() {
                return Some(Violation { alpha: Some(a), ..gamma(i) });
            }
            let closure = clone.theory(rel.mod_k(i));
            (&closure != k(i)).then(|| Violation {
                alpha: closure.difference(k(i)).first(),
                ..gamma(i)
            })
        }),
        Condition::C11 => {
            let kept = surviving(rel, |j| rel.mod_k(j).intersection(&rel.derived().mod_h[j]));
            (0..n).find_map(|i| {
                let lhs = clone.theory(&rel.full_base(i));
                let rhs = clone.theory(&rel.gamma_models(i).intersection(&kept));
                (lhs != rhs).then(|| Violation {
                    alpha: lhs.difference(&rhs).first().or(rhs.difference(&lhs).first()),
                    ..gamma(i)
                })
            })
        }
        Condition::C12 => {
            let kept = surviving(rel, |j| rel.mod_k(j).intersection(&rel.derived().mod_h[j]));
            (!q.family.contains(&kept.complement())).then(Violation::default)
        }
    }
}

/// The relation re-derived through formula evaluation: every Mod and Th is
/// computed from witness formulas by the structure, not from class bitsets.
struct FormulaView<'a> {
    rel: &'a RelationUnderTest<'a>,
    gamma_models: Vec<ValuationSet>,
    k_models: Vec<ValuationSet>,
    h_models: Vec<ValuationSet>,
    h_members: Vec<Vec<usize>>,
}

impl<'a> FormulaView<'a> {
    fn new(rel: &'a RelationUnderTest<'a>) -> Result<FormulaView<'a>> {
        let q = rel.quotient();
        let s = &q.structure;
        let witnesses = |set: &crate::semantics::ClassSet| -> Vec<Formula> {
            set.iter().map(|c| q.clone.witness(c)).collect()
        };
        let mut view = FormulaView {
            rel,
            gamma_models: Vec::new(),
            k_models: Vec::new(),
            h_models: Vec::new(),
            h_members: Vec::new(),
        };
        for i in 0..rel.len() {
            let gm = s.models(&witnesses(&rel.premise(i).gamma))?;
            let km = s.models(&witnesses(rel.conclusions(i)))?;
            let (hm, members) = view.h_by_formulas(&gm.intersection(&km), i)?;
            view.gamma_models.push(gm);
            view.k_models.push(km);
            view.h_models.push(hm);
            view.h_members.push(members);
        }
        Ok(view)
    }

    /// H(Γ_i) computed stage by stage with entailment checks on formulas.
    fn h_by_formulas(&self, base: &ValuationSet, i: usize) -> Result<(ValuationSet, Vec<usize>)> {
        let q = self.rel.quotient();
        let s = &q.structure;
        let k = self.rel.conclusions(i);
        let mut base = base.clone();
        let mut members: Vec<usize> = Vec::new();
        loop {
            let mut added = false;
            for b in 0..q.clone.len() {
                if k.contains(b) {
                    continue;
                }
                let beta = q.clone.witness(b);
                let not_beta = beta.clone().negate();
                if s.theory_contains(&base, &beta)? && !s.theory_contains(&base, &not_beta)? {
                    let nb = q.classify(&not_beta)?;
                    if !members.contains(&nb) {
                        members.push(nb);
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
            let formulas: Vec<Formula> = members.iter().map(|&h| q.clone.witness(h)).collect();
            base.intersect_with(&s.models(&formulas)?);
        }
        let formulas: Vec<Formula> = members.iter().map(|&h| q.clone.witness(h)).collect();
        Ok((s.models(&formulas)?, members))
    }

    fn th(&self, set: &ValuationSet, class: usize) -> Result<bool> {
        let q = self.rel.quotient();
        q.structure.theory_contains(set, &q.clone.witness(class))
    }

    fn th_neg(&self, set: &ValuationSet, class: usize) -> Result<bool> {
        let q = self.rel.quotient();
        q.structure.theory_contains(set, &q.clone.witness(class).negate())
    }

    fn mod_neg(&self, class: usize) -> Result<ValuationSet> {
        let q = self.rel.quotient();
        q.structure.models(&[q.clone.witness(class).negate()])
    }

    fn in_k(&self, i: usize, class: usize) -> bool {
        self.rel.conclusions(i).contains(class)
    }

    fn base(&self, i: usize) -> ValuationSet {
        self.gamma_models[i].intersection(&self.k_models[i])
    }

    fn full_base(&self, i: usize) -> ValuationSet {
        self.base(i).intersection(&self.h_models[i])
    }

    fn surviving(&self, with_h: bool) -> ValuationSet {
        let mut kept = self.rel.quotient().structure.universe();
        for j in 0..self.rel.len() {
            let mut target = self.k_models[j].clone();
            if with_h {
                target.intersect_with(&self.h_models[j]);
            }
            kept.intersect_with(&self.gamma_models[j].difference(&target).complement());
        }
        kept
    }

    /// Whether the theory of `set` and the conclusions of premise `i` differ at `class`.
    fn theory_differs(&self, set: &ValuationSet, i: usize, class: usize) -> Result<bool> {
        Ok(self.th(set, class)? != self.in_k(i, class))
    }

    /// Whether Γ, given by its models, is consistent, decided on formulas.
    fn consistent(&self, set: &ValuationSet) -> Result<bool> {
        let q = self.rel.quotient();
        for a in 0..q.clone.len() {
            if self.th(set, a)? && self.th_neg(set, a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Re-evaluates a reported violation from scratch through formula evaluation.
/// Returns true when the instance is a genuine violation.
pub fn recheck(condition: Condition, rel: &RelationUnderTest, v: &Violation) -> Result<bool> {
    let view = FormulaView::new(rel)?;
    let q = rel.quotient();
    let need = |x: Option<usize>| x.ok_or_else(|| Error::Config("incomplete counterexample".into()));
    Ok(match condition {
        Condition::C0 => {
            let (i, j) = (need(v.gamma)?, need(v.delta)?);
            view.gamma_models[i] == view.gamma_models[j]
                && rel.conclusions(i) != rel.conclusions(j)
        }
        Condition::C1 => {
            let (i, a) = (need(v.gamma)?, need(v.alpha)?);
            view.theory_differs(&view.k_models[i], i, a)?
        }
        Condition::C2 => {
            let (i, a) = (need(v.gamma)?, need(v.alpha)?);
            view.th(&view.gamma_models[i], a)? && rel.premise(i).gamma.contains(a) && !view.in_k(i, a)
        }
        Condition::C3 => {
            let (i, j, a) = (need(v.gamma)?, need(v.delta)?, need(v.alpha)?);
            view.in_k(i, a) && !view.th(&view.k_models[j].intersection(&view.gamma_models[i]), a)?
        }
        Condition::C4 => {
            let (i, a) = (need(v.gamma)?, need(v.alpha)?);
            let set = view.gamma_models[i].intersection(&view.surviving(false));
            view.theory_differs(&set, i, a)?
        }
        Condition::C5 => !q.family.contains(&view.surviving(false).complement()),
        Condition::C6 => {
            let (i, a, b) = (need(v.gamma)?, need(v.alpha)?, need(v.beta)?);
            let base = view.base(i);
            view.th(&base, b)?
                && !view.in_k(i, b)
                && view.th_neg(&base.intersection(&view.mod_neg(b)?), a)?
                && view.in_k(i, a)
        }
        Condition::C7 => {
            let (i, a, b) = (need(v.gamma)?, need(v.alpha)?, need(v.beta)?);
            let base = view.base(i);
            let join = q.classify(&q.clone.witness(a).or(q.clone.witness(b)))?;
            view.th(&base, a)?
                && !view.in_k(i, a)
                && view.th(&base.intersection(&view.mod_neg(a)?), b)?
                && !view.in_k(i, b)
                && view.in_k(i, join)
        }
        Condition::C8 => {
            let (i, a) = (need(v.gamma)?, need(v.alpha)?);
            view.in_k(i, a) && view.th_neg(&view.base(i), a)?
        }
        Condition::C9 => {
            let (i, j, a) = (need(v.gamma)?, need(v.delta)?, need(v.alpha)?);
            let in_lhs = view.in_k(i, a) || view.h_members[i].contains(&a);
            in_lhs && !view.th(&view.full_base(j).intersection(&view.gamma_models[i]), a)?
        }
        Condition::C10 => {
            let i = need(v.gamma)?;
            let gm = &view.gamma_models[i];
            let km = &view.k_models[i];
            let mut broken = !view.consistent(km)?;
            if let Some(a) = v.alpha {
                broken |= rel.premise(i).gamma.contains(a) && !view.in_k(i, a);
                broken |= view.theory_differs(km, i, a)?;
            }
            view.consistent(gm)? && broken
        }
        Condition::C11 => {
            let (i, a) = (need(v.gamma)?, need(v.alpha)?);
            let rhs = view.gamma_models[i].intersection(&view.surviving(true));
            view.th(&view.full_base(i), a)? != view.th(&rhs, a)?
        }
        Condition::C12 => !q.family.contains(&view.surviving(true).complement()),
    })
}

/// Human-readable rendering of a violation, naming premises by formulas.
pub fn describe_violation(rel: &RelationUnderTest, condition: Condition, v: &Violation) -> String {
    let q = rel.quotient();
    let mut parts = vec![condition.label()];
    if let Some(i) = v.gamma {
        parts.push(format!("Gamma={}", rel.describe_premise(i)));
    }
    if let Some(j) = v.delta {
        parts.push(format!("Delta={}", rel.describe_premise(j)));
    }
    if let Some(a) = v.alpha {
        parts.push(format!("alpha={}", q.clone.witness(a)));
    }
    if let Some(b) = v.beta {
        parts.push(format!("beta={}", q.clone.witness(b)));
    }
    parts.join(" ")
}
