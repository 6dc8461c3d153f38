use std::sync::OnceLock;

use crate::bitset::ValuationSet;
use crate::choice::{ChoiceFunction, Pivot};
use crate::consequence::{h_sets, HSets, Mode};
use crate::error::{Error, Result};
use crate::semantics::{ClassSet, Quotient};

/// One premise set Γ of a relation under test: its formula classes and the
/// index of Mod(Γ) in the definable family.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Premise {
    pub gamma: ClassSet,
    pub models: usize,
}

/// Quantities derived from the conclusions, computed on first use.
#[derive(Debug)]
pub(crate) struct Derived {
    pub mod_k: Vec<ValuationSet>,
    /// Mod(Γ) ∩ Mod(C|~(Γ)).
    pub base: Vec<ValuationSet>,
    pub h: Vec<HSets>,
    pub mod_h: Vec<ValuationSet>,
}

/// A finite encoding of a relation |~: a list of premise sets with the set of
/// formula classes concluded from each.
///
/// A factored relation has exactly one premise per definable set V, namely
/// Γ = Th(V), so it is determined by a table from definable sets to class sets.
#[derive(Debug)]
pub struct RelationUnderTest<'q> {
    quotient: &'q Quotient,
    premises: Vec<Premise>,
    conclusions: Vec<ClassSet>,
    derived: OnceLock<Derived>,
}

impl<'q> RelationUnderTest<'q> {
    /// A factored relation from its table, indexed like the definable family.
    pub fn from_table(quotient: &'q Quotient, table: Vec<ClassSet>) -> Result<Self> {
        let family = &quotient.family;
        if table.len() != family.len() {
            return Err(Error::ShapeMismatch {
                domain: family.len(),
                image: table.len(),
            });
        }
        let premises = (0..family.len())
            .map(|d| Premise {
                gamma: quotient.clone.theory(family.get(d)),
                models: d,
            })
            .collect();
        RelationUnderTest::with_premises(quotient, premises, table)
    }

    /// A relation with explicit premises; several premises may share models.
    pub fn with_premises(
        quotient: &'q Quotient,
        premises: Vec<Premise>,
        conclusions: Vec<ClassSet>,
    ) -> Result<Self> {
        if premises.len() != conclusions.len() {
            return Err(Error::ShapeMismatch {
                domain: premises.len(),
                image: conclusions.len(),
            });
        }
        let n = quotient.clone.len();
        for p in &premises {
            let models = quotient.clone.models_of(&p.gamma);
            if p.gamma.capacity() != n || quotient.family.index_of(&models) != Some(p.models) {
                return Err(Error::Config("premise classes do not match its models".into()));
            }
        }
        if conclusions.iter().any(|k| k.capacity() != n) {
            return Err(Error::Config("conclusion set over a different clone".into()));
        }
        Ok(RelationUnderTest {
            quotient,
            premises,
            conclusions,
            derived: OnceLock::new(),
        })
    }

    /// The relation C|~(Γ) = Th(μ(Mod Γ)) (or Th^d in discriminative mode)
    /// for a choice function on the definable family.
    pub fn from_choice(quotient: &'q Quotient, mu: &ChoiceFunction, mode: Mode) -> Self {
        let table = mu
            .images()
            .iter()
            .map(|m| mode.conclusions(&quotient.clone, m))
            .collect();
        RelationUnderTest::from_table(quotient, table).expect("choice function over the family")
    }

    pub fn from_pivot(quotient: &'q Quotient, pivot: &Pivot, mode: Mode) -> Self {
        let table = quotient
            .family
            .sets()
            .iter()
            .map(|v| mode.conclusions(&quotient.clone, &pivot.choose(v)))
            .collect();
        RelationUnderTest::from_table(quotient, table).expect("table over the family")
    }

    pub fn quotient(&self) -> &'q Quotient {
        self.quotient
    }

    pub fn len(&self) -> usize {
        self.premises.len()
    }

    pub fn is_empty(&self) -> bool {
        self.premises.is_empty()
    }

    pub fn premises(&self) -> &[Premise] {
        &self.premises
    }

    pub fn premise(&self, i: usize) -> &Premise {
        &self.premises[i]
    }

    pub fn conclusions(&self, i: usize) -> &ClassSet {
        &self.conclusions[i]
    }

    pub fn all_conclusions(&self) -> &[ClassSet] {
        &self.conclusions
    }

    /// The table, when the relation is factored.
    pub fn table(&self) -> Option<&[ClassSet]> {
        let factored = self.premises.len() == self.quotient.family.len()
            && self.premises.iter().enumerate().all(|(d, p)| p.models == d);
        factored.then_some(&self.conclusions[..])
    }

    pub fn gamma_models(&self, i: usize) -> &ValuationSet {
        self.quotient.family.get(self.premises[i].models)
    }

    pub(crate) fn derived(&self) -> &Derived {
        self.derived.get_or_init(|| {
            let clone = &self.quotient.clone;
            let mod_k: Vec<ValuationSet> = self.conclusions.iter().map(|k| clone.models_of(k)).collect();
            let base: Vec<ValuationSet> = (0..self.len())
                .map(|i| self.gamma_models(i).intersection(&mod_k[i]))
                .collect();
            let h: Vec<HSets> = (0..self.len())
                .map(|i| h_sets(clone, self.gamma_models(i), &self.conclusions[i]))
                .collect();
            let mod_h = h.iter().map(|h| clone.models_of(&h.union)).collect();
            Derived { mod_k, base, h, mod_h }
        })
    }

    /// Mod(C|~(Γ_i)).
    pub fn mod_k(&self, i: usize) -> &ValuationSet {
        &self.derived().mod_k[i]
    }

    /// H(Γ_i) with its stages.
    pub fn h(&self, i: usize) -> &HSets {
        &self.derived().h[i]
    }

    /// Mod(Γ_i) ∩ Mod(C|~(Γ_i)) ∩ Mod(H(Γ_i)).
    pub fn full_base(&self, i: usize) -> ValuationSet {
        let d = self.derived();
        d.base[i].intersection(&d.mod_h[i])
    }

    /// Short human-readable name for premise `i`.
    pub fn describe_premise(&self, i: usize) -> String {
        self.quotient.describe_set(self.gamma_models(i))
    }
}
