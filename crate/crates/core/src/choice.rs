//! Pivots, choice functions over definable sets and their properties.

use std::sync::Arc;

use crate::bitset::ValuationSet;
use crate::error::{Error, Result};
use crate::formula::parse;
use crate::semantics::{DefinableFamily, Quotient, Structure};

/// A fixed set I of valuations; it chooses V ∩ I from every V.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pivot {
    set: ValuationSet,
}

impl Pivot {
    pub fn new(set: ValuationSet) -> Pivot {
        Pivot { set }
    }

    pub fn universe(size: usize) -> Pivot {
        Pivot::new(ValuationSet::full(size))
    }

    pub fn set(&self) -> &ValuationSet {
        &self.set
    }

    /// μ_I(V) = V ∩ I.
    pub fn choose(&self, v: &ValuationSet) -> ValuationSet {
        v.intersection(&self.set)
    }

    /// Reads a pivot description. Either every non-blank line is a valuation
    /// literal (`p=t q=B`), or every line is `@ formula` and the pivot is the
    /// set of models of all listed formulas. `#` starts a comment.
    pub fn parse(structure: &Structure, text: &str) -> Result<Pivot> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let formula_lines = lines.iter().filter(|(_, l)| l.starts_with('@')).count();
        if formula_lines > 0 && formula_lines < lines.len() {
            return Err(Error::Pivot(
                "mixes `@ formula` lines with valuation literals".into(),
            ));
        }
        if formula_lines > 0 {
            let mut formulas = Vec::new();
            for (n, line) in &lines {
                let f = parse(line[1..].trim())
                    .map_err(|e| Error::Pivot(format!("line {n}: {e}")))?;
                formulas.push(f);
            }
            return Ok(Pivot::new(structure.models(&formulas)?));
        }
        let mut set = structure.empty_set();
        for (n, line) in &lines {
            let v = structure
                .parse_valuation(line)
                .map_err(|e| Error::Pivot(format!("line {n}: {e}")))?;
            set.insert(v);
        }
        Ok(Pivot::new(set))
    }

    /// All pivots over a universe of `size` valuations, in bit order.
    pub fn all(size: usize) -> impl Iterator<Item = Pivot> {
        assert!(size < 32, "pivot enumeration needs a small universe");
        (0u64..1 << size).map(move |bits| Pivot::new(ValuationSet::from_bits(size, bits)))
    }
}

/// A map from a finite family of sets to sets, without the choice law.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetFunction {
    domain: Arc<[ValuationSet]>,
    images: Vec<ValuationSet>,
}

impl SetFunction {
    pub fn new(domain: Arc<[ValuationSet]>, images: Vec<ValuationSet>) -> Result<SetFunction> {
        if domain.len() != images.len() {
            return Err(Error::ShapeMismatch {
                domain: domain.len(),
                image: images.len(),
            });
        }
        Ok(SetFunction { domain, images })
    }

    pub fn domain(&self) -> &Arc<[ValuationSet]> {
        &self.domain
    }

    pub fn images(&self) -> &[ValuationSet] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &ValuationSet {
        &self.images[i]
    }

    /// The image of `v`, if `v` is in the domain.
    pub fn apply(&self, v: &ValuationSet) -> Option<&ValuationSet> {
        self.domain.iter().position(|d| d == v).map(|i| &self.images[i])
    }

    /// ν_f(V) = {v ∈ V : for every W in the domain, v ∈ W implies v ∈ f(W)}.
    pub fn nu(&self) -> ChoiceFunction {
        let len = self.domain.first().map_or(0, |d| d.capacity());
        // Valuations that survive every domain element containing them.
        let mut kept = ValuationSet::full(len);
        for (w, fw) in self.domain.iter().zip(&self.images) {
            kept.intersect_with(&w.difference(fw).complement());
        }
        let images = self.domain.iter().map(|v| v.intersection(&kept)).collect();
        ChoiceFunction {
            inner: SetFunction {
                domain: self.domain.clone(),
                images,
            },
        }
    }
}

/// A witness that strong coherence fails: μ(W) ∩ V ⊄ μ(V) at valuation `valuation`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct CoherenceViolation {
    pub v: usize,
    pub w: usize,
    pub valuation: usize,
}

/// A set function with μ(V) ⊆ V for every domain element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChoiceFunction {
    inner: SetFunction,
}

impl ChoiceFunction {
    pub fn new(domain: Arc<[ValuationSet]>, images: Vec<ValuationSet>) -> Result<ChoiceFunction> {
        ChoiceFunction::try_from(SetFunction::new(domain, images)?)
    }

    /// μ_I restricted to `domain`.
    pub fn from_pivot(domain: Arc<[ValuationSet]>, pivot: &Pivot) -> ChoiceFunction {
        let images = domain.iter().map(|v| pivot.choose(v)).collect();
        ChoiceFunction {
            inner: SetFunction { domain, images },
        }
    }

    pub fn as_set_function(&self) -> &SetFunction {
        &self.inner
    }

    pub fn domain(&self) -> &Arc<[ValuationSet]> {
        &self.inner.domain
    }

    pub fn images(&self) -> &[ValuationSet] {
        &self.inner.images
    }

    pub fn image(&self, i: usize) -> &ValuationSet {
        &self.inner.images[i]
    }

    pub fn apply(&self, v: &ValuationSet) -> Option<&ValuationSet> {
        self.inner.apply(v)
    }

    /// First (V, W, v) in domain order with v ∈ μ(W) ∩ V but v ∉ μ(V).
    pub fn coherence_violation(&self) -> Option<CoherenceViolation> {
        let domain = &self.inner.domain;
        let images = &self.inner.images;
        for (vi, v) in domain.iter().enumerate() {
            for (wi, mw) in images.iter().enumerate() {
                let escaped = mw.intersection(v).difference(&images[vi]);
                if let Some(valuation) = escaped.first() {
                    return Some(CoherenceViolation { v: vi, w: wi, valuation });
                }
            }
        }
        None
    }

    /// SC: μ(W) ∩ V ⊆ μ(V) for all V, W in the domain.
    pub fn is_strongly_coherent(&self) -> bool {
        self.coherence_violation().is_none()
    }

    /// DP: every definable domain element has a definable image.
    pub fn is_definability_preserving(&self, family: &DefinableFamily) -> bool {
        self.domain()
            .iter()
            .zip(self.images())
            .all(|(v, m)| !family.contains(v) || family.contains(m))
    }

    /// UC: the universe minus μ(universe) is definable.
    pub fn is_universe_codefinable(&self, family: &DefinableFamily) -> Result<bool> {
        let full = self
            .domain()
            .iter()
            .position(|v| v.is_full())
            .ok_or(Error::UniverseNotInDomain)?;
        Ok(family.contains(&self.image(full).complement()))
    }

    /// CP: every coherent definable domain element has a coherent image.
    pub fn is_coherency_preserving(&self, quotient: &Quotient) -> bool {
        self.domain().iter().zip(self.images()).all(|(v, m)| {
            !(quotient.family.contains(v) && quotient.is_coherent(v)) || quotient.is_coherent(m)
        })
    }

    pub fn nu(&self) -> ChoiceFunction {
        self.inner.nu()
    }

    /// The pivot I = ∪ μ(V), returned only if μ(V) = V ∩ I on the whole domain.
    pub fn pivot_representation(&self) -> Option<Pivot> {
        let len = self.domain().first().map_or(0, |d| d.capacity());
        let mut union = ValuationSet::empty(len);
        for m in self.images() {
            union.union_with(m);
        }
        let pivot = Pivot::new(union);
        self.domain()
            .iter()
            .zip(self.images())
            .all(|(v, m)| &pivot.choose(v) == m)
            .then_some(pivot)
    }
}

impl TryFrom<SetFunction> for ChoiceFunction {
    type Error = Error;

    fn try_from(f: SetFunction) -> Result<ChoiceFunction> {
        if let Some(i) = (0..f.domain.len()).find(|&i| !f.images[i].is_subset(&f.domain[i])) {
            return Err(Error::NotAChoiceFunction(i));
        }
        Ok(ChoiceFunction { inner: f })
    }
}

/// Every subset of `set`, in increasing bit order of the members chosen.
pub fn subsets(set: &ValuationSet) -> Vec<ValuationSet> {
    let members: Vec<usize> = set.iter().collect();
    assert!(members.len() < 32, "subset enumeration needs a small set");
    (0u64..1 << members.len())
        .map(|mask| {
            ValuationSet::from_indices(
                set.capacity(),
                members
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, &m)| m),
            )
        })
        .collect()
}

/// The power set of an abstract universe of `n` elements, in bit order.
pub fn power_set(n: usize) -> Arc<[ValuationSet]> {
    subsets(&ValuationSet::full(n)).into()
}

/// Number of choice functions on `domain`, or `None` if it overflows `u64`.
pub fn count_choice_functions(domain: &[ValuationSet]) -> Option<u64> {
    let bits: usize = domain.iter().map(|v| v.count()).sum();
    (bits < 64).then(|| 1u64 << bits)
}

/// All choice functions on `domain`, the last domain element varying fastest.
pub fn enumerate_choice_functions(domain: Arc<[ValuationSet]>) -> impl Iterator<Item = ChoiceFunction> {
    let options: Vec<Vec<ValuationSet>> = domain.iter().map(subsets).collect();
    let mut counters = vec![0usize; domain.len()];
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let images = counters
            .iter()
            .zip(&options)
            .map(|(&c, opts)| opts[c].clone())
            .collect();
        done = true;
        for k in (0..counters.len()).rev() {
            counters[k] += 1;
            if counters[k] < options[k].len() {
                done = false;
                break;
            }
            counters[k] = 0;
        }
        Some(ChoiceFunction {
            inner: SetFunction {
                domain: domain.clone(),
                images,
            },
        })
    })
}
