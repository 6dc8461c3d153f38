use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bitset::ValuationSet;
use crate::error::{Error, Result};
use crate::formula::{AtomSet, Formula};

use super::truth::TruthValue;

/// Default bound on the number of enumerated valuations.
pub const DEFAULT_UNIVERSE_CAP: u64 = 1 << 20;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StructureKind {
    Classical,
    Four,
    J3,
}

impl StructureKind {
    /// Truth values an atom may take, in canonical order.
    pub fn domain(self) -> &'static [TruthValue] {
        match self {
            StructureKind::Classical => &TruthValue::ALL[..2],
            StructureKind::J3 => &TruthValue::ALL[..3],
            StructureKind::Four => &TruthValue::ALL[..],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StructureKind::Classical => "classical",
            StructureKind::Four => "four",
            StructureKind::J3 => "j3",
        }
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StructureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "classical" => Ok(StructureKind::Classical),
            "four" => Ok(StructureKind::Four),
            "j3" => Ok(StructureKind::J3),
            other => Err(Error::Config(format!(
                "unknown structure kind `{other}` (expected classical, four or j3)"
            ))),
        }
    }
}

/// An assignment of truth values to a structure's atoms, in atom order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Valuation(Vec<TruthValue>);

impl Valuation {
    pub fn values(&self) -> &[TruthValue] {
        &self.0
    }

    pub fn value(&self, atom: usize) -> TruthValue {
        self.0[atom]
    }
}

/// The two halves of a formula's semantic function over the universe:
/// `truth` holds the valuations where 1 ∈ v(α) (that is, Mod(α)) and
/// `falsity` those where 0 ∈ v(α) (that is, Mod(¬α)).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SemanticFunction {
    pub truth: ValuationSet,
    pub falsity: ValuationSet,
}

impl SemanticFunction {
    pub fn constant(universe: usize, value: bool) -> Self {
        let (full, empty) = (ValuationSet::full(universe), ValuationSet::empty(universe));
        if value {
            SemanticFunction { truth: full, falsity: empty }
        } else {
            SemanticFunction { truth: empty, falsity: full }
        }
    }

    pub fn value_at(&self, v: usize) -> TruthValue {
        TruthValue::from_parts(self.truth.contains(v), self.falsity.contains(v))
    }

    pub fn negate(&self) -> Self {
        SemanticFunction {
            truth: self.falsity.clone(),
            falsity: self.truth.clone(),
        }
    }

    pub fn or(&self, rhs: &Self) -> Self {
        SemanticFunction {
            truth: self.truth.union(&rhs.truth),
            falsity: self.falsity.intersection(&rhs.falsity),
        }
    }

    pub fn and(&self, rhs: &Self) -> Self {
        SemanticFunction {
            truth: self.truth.intersection(&rhs.truth),
            falsity: self.falsity.union(&rhs.falsity),
        }
    }
}

/// A finite semantic structure: the formulas over `atoms`, every valuation of
/// those atoms into the kind's value domain, and satisfaction as 1 ∈ v(α).
#[derive(Clone, Debug)]
pub struct Structure {
    kind: StructureKind,
    atoms: AtomSet,
    size: usize,
    projections: Vec<SemanticFunction>,
}

impl Structure {
    pub fn new(kind: StructureKind, atoms: AtomSet) -> Result<Structure> {
        Structure::with_cap(kind, atoms, DEFAULT_UNIVERSE_CAP)
    }

    pub fn with_cap(kind: StructureKind, atoms: AtomSet, universe_cap: u64) -> Result<Structure> {
        let base = kind.domain().len() as u128;
        let size = (0..atoms.len()).try_fold(1u128, |acc, _| acc.checked_mul(base));
        let size = match size {
            Some(s) if s <= universe_cap as u128 => s as usize,
            Some(s) => return Err(Error::UniverseTooLarge { size: s, cap: universe_cap }),
            None => return Err(Error::UniverseTooLarge { size: u128::MAX, cap: universe_cap }),
        };
        let mut structure = Structure {
            kind,
            atoms,
            size,
            projections: Vec::new(),
        };
        structure.projections = (0..structure.atoms.len())
            .map(|a| {
                let mut truth = ValuationSet::empty(size);
                let mut falsity = ValuationSet::empty(size);
                for v in 0..size {
                    let value = structure.atom_value(v, a);
                    if value.has_one() {
                        truth.insert(v);
                    }
                    if value.has_zero() {
                        falsity.insert(v);
                    }
                }
                SemanticFunction { truth, falsity }
            })
            .collect();
        Ok(structure)
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    pub fn atoms(&self) -> &AtomSet {
        &self.atoms
    }

    /// Number of valuations in the universe.
    pub fn universe_size(&self) -> usize {
        self.size
    }

    pub fn universe(&self) -> ValuationSet {
        ValuationSet::full(self.size)
    }

    pub fn empty_set(&self) -> ValuationSet {
        ValuationSet::empty(self.size)
    }

    pub fn describe(&self) -> String {
        format!("{} [{}]", self.kind, self.atoms.names().join(","))
    }

    /// Value of atom `atom` in the valuation with canonical index `v`.
    /// The first atom is the most significant digit.
    pub fn atom_value(&self, v: usize, atom: usize) -> TruthValue {
        let domain = self.kind.domain();
        let base = domain.len();
        let shift = self.atoms.len() - 1 - atom;
        let digit = (v / base.pow(shift as u32)) % base;
        domain[digit]
    }

    pub fn valuation(&self, v: usize) -> Valuation {
        Valuation((0..self.atoms.len()).map(|a| self.atom_value(v, a)).collect())
    }

    pub fn index_of(&self, valuation: &Valuation) -> Result<usize> {
        if valuation.0.len() != self.atoms.len() {
            return Err(Error::Valuation(format!(
                "valuation has {} values for {} atoms",
                valuation.0.len(),
                self.atoms.len()
            )));
        }
        let domain = self.kind.domain();
        valuation.0.iter().try_fold(0usize, |acc, value| {
            let digit = domain.iter().position(|d| d == value).ok_or_else(|| {
                Error::Valuation(format!("value {value} is outside the {} domain", self.kind))
            })?;
            Ok(acc * domain.len() + digit)
        })
    }

    /// Every valuation in canonical order.
    pub fn enumerate_valuations(&self) -> Vec<Valuation> {
        (0..self.size).map(|v| self.valuation(v)).collect()
    }

    /// Renders a valuation in literal syntax, e.g. `r=t q=f p=B`.
    pub fn format_valuation(&self, v: usize) -> String {
        self.atoms
            .iter()
            .enumerate()
            .map(|(a, name)| format!("{name}={}", self.atom_value(v, a)))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses a valuation literal such as `p=t q=B r=f`. Every atom must be
    /// assigned exactly once; the order of the pairs is free.
    pub fn parse_valuation(&self, text: &str) -> Result<usize> {
        let mut values: Vec<Option<TruthValue>> = vec![None; self.atoms.len()];
        for pair in text.split_whitespace() {
            let (name, value) = pair
                .split_once('=')
                .ok_or_else(|| Error::Valuation(format!("expected atom=value, found `{pair}`")))?;
            let atom = self
                .atoms
                .index_of(name)
                .ok_or_else(|| Error::UnknownAtom(name.to_owned()))?;
            if values[atom].is_some() {
                return Err(Error::Valuation(format!("atom `{name}` assigned twice")));
            }
            values[atom] = Some(value.parse()?);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(a, v)| {
                v.ok_or_else(|| {
                    Error::Valuation(format!("atom `{}` is not assigned", self.atoms.names()[a]))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        self.index_of(&Valuation(values))
    }

    fn atom_index(&self, name: &str) -> Result<usize> {
        self.atoms
            .index_of(name)
            .ok_or_else(|| Error::UnknownAtom(name.to_owned()))
    }

    /// Evaluates `f` at `valuation` by recursive table lookup.
    pub fn eval(&self, valuation: &Valuation, f: &Formula) -> Result<TruthValue> {
        Ok(match f {
            Formula::Atom(name) => valuation.value(self.atom_index(name)?),
            Formula::Const(b) => {
                if *b {
                    TruthValue::True
                } else {
                    TruthValue::False
                }
            }
            Formula::Not(x) => self.eval(valuation, x)?.not(),
            Formula::Or(l, r) => self.eval(valuation, l)?.or(self.eval(valuation, r)?),
            Formula::And(l, r) => self.eval(valuation, l)?.and(self.eval(valuation, r)?),
        })
    }

    pub fn satisfies(&self, valuation: &Valuation, f: &Formula) -> Result<bool> {
        Ok(self.eval(valuation, f)?.has_one())
    }

    /// The semantic function of `f`, computed for all valuations at once.
    pub fn semantic(&self, f: &Formula) -> Result<SemanticFunction> {
        Ok(match f {
            Formula::Atom(name) => self.projections[self.atom_index(name)?].clone(),
            Formula::Const(b) => SemanticFunction::constant(self.size, *b),
            Formula::Not(x) => self.semantic(x)?.negate(),
            Formula::Or(l, r) => self.semantic(l)?.or(&self.semantic(r)?),
            Formula::And(l, r) => self.semantic(l)?.and(&self.semantic(r)?),
        })
    }

    /// Projection of atom `atom` as a semantic function.
    pub fn projection(&self, atom: usize) -> &SemanticFunction {
        &self.projections[atom]
    }

    /// Mod(Γ): valuations satisfying every formula of `gamma`.
    pub fn models(&self, gamma: &[Formula]) -> Result<ValuationSet> {
        let mut out = self.universe();
        for f in gamma {
            out.intersect_with(&self.semantic(f)?.truth);
        }
        Ok(out)
    }

    /// α ∈ Th(V), i.e. V ⊆ Mod(α).
    pub fn theory_contains(&self, set: &ValuationSet, f: &Formula) -> Result<bool> {
        Ok(set.is_subset(&self.semantic(f)?.truth))
    }

    /// α ∈ Th^d(V), i.e. V ⊆ Mod(α) and V ⊄ Mod(¬α).
    pub fn theory_d_contains(&self, set: &ValuationSet, f: &Formula) -> Result<bool> {
        let sem = self.semantic(f)?;
        Ok(set.is_subset(&sem.truth) && !set.is_subset(&sem.falsity))
    }

    /// Γ ⊢ α iff Mod(Γ) ⊆ Mod(α).
    pub fn entails(&self, gamma: &[Formula], alpha: &Formula) -> Result<bool> {
        self.theory_contains(&self.models(gamma)?, alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn structure(kind: StructureKind, atoms: &str) -> Structure {
        Structure::new(kind, AtomSet::parse_list(atoms).unwrap()).unwrap()
    }

    #[test]
    fn universe_sizes() {
        assert_eq!(structure(StructureKind::Classical, "p").enumerate_valuations().len(), 2);
        assert_eq!(structure(StructureKind::Four, "r,q,p").enumerate_valuations().len(), 64);
        let empty = structure(StructureKind::J3, "");
        assert_eq!(empty.enumerate_valuations(), vec![Valuation(vec![])]);
        assert_eq!(structure(StructureKind::J3, "a,b").universe_size(), 9);
    }

    #[test]
    fn universe_cap_is_enforced() {
        let atoms = AtomSet::parse_list("a,b,c,d,e,f,g,h,i,j,k").unwrap();
        assert!(matches!(
            Structure::new(StructureKind::Four, atoms.clone()),
            Err(Error::UniverseTooLarge { size: 4194304, .. })
        ));
        assert!(Structure::new(StructureKind::Classical, atoms).is_ok());
    }

    #[test]
    fn canonical_order_matches_nixon_table() {
        let s = structure(StructureKind::Classical, "r,q,p");
        assert_eq!(s.format_valuation(1), "r=f q=f p=t");
        assert_eq!(s.format_valuation(4), "r=t q=f p=f");
        assert_eq!(s.format_valuation(6), "r=t q=t p=f");
    }

    #[test]
    fn valuation_literals() {
        let s = structure(StructureKind::Four, "p,q,r");
        let v = s.parse_valuation("r=f p=t q=B").unwrap();
        assert_eq!(s.format_valuation(v), "p=t q=B r=f");
        assert!(s.parse_valuation("p=t q=B").is_err());
        assert!(s.parse_valuation("p=t q=B r=f p=t").is_err());
        assert!(matches!(s.parse_valuation("p=t q=B x=f"), Err(Error::UnknownAtom(_))));
        let c = structure(StructureKind::Classical, "p");
        assert!(c.parse_valuation("p=B").is_err());
    }

    #[test]
    fn eval_examples() {
        let s = structure(StructureKind::Four, "a,b");
        let v = s.parse_valuation("a=t b=B").unwrap();
        assert_eq!(s.eval(&s.valuation(v), &parse("a & b").unwrap()).unwrap(), TruthValue::Both);
        let v = s.parse_valuation("a=N b=f").unwrap();
        assert_eq!(s.eval(&s.valuation(v), &parse("~a").unwrap()).unwrap(), TruthValue::Neither);
        let j = structure(StructureKind::J3, "a,b");
        let v = j.parse_valuation("a=B b=f").unwrap();
        assert_eq!(j.eval(&j.valuation(v), &parse("a | b").unwrap()).unwrap(), TruthValue::Both);
        assert!(matches!(
            s.eval(&s.valuation(0), &parse("zz").unwrap()),
            Err(Error::UnknownAtom(_))
        ));
    }

    #[test]
    fn satisfies_examples() {
        let s = structure(StructureKind::Four, "p");
        let both = s.valuation(s.parse_valuation("p=B").unwrap());
        let neither = s.valuation(s.parse_valuation("p=N").unwrap());
        let (p, np) = (parse("p").unwrap(), parse("~p").unwrap());
        assert!(s.satisfies(&both, &p).unwrap() && s.satisfies(&both, &np).unwrap());
        assert!(!s.satisfies(&neither, &p).unwrap() && !s.satisfies(&neither, &np).unwrap());
        let c = structure(StructureKind::Classical, "p");
        let one = c.valuation(1);
        assert!(c.satisfies(&one, &p).unwrap() && !c.satisfies(&one, &np).unwrap());
    }

    #[test]
    fn models_examples() {
        for kind in [StructureKind::Classical, StructureKind::Four, StructureKind::J3] {
            let s = structure(kind, "p,q");
            assert_eq!(s.models(&[]).unwrap(), s.universe());
            assert!(s.models(&[Formula::falsity()]).unwrap().is_empty());
        }
        let s = structure(StructureKind::Four, "p");
        let m = s.models(&[parse("p").unwrap(), parse("~p").unwrap()]).unwrap();
        assert_eq!(m, ValuationSet::from_indices(4, [s.parse_valuation("p=B").unwrap()]));
    }

    #[test]
    fn theory_examples() {
        let s = structure(StructureKind::Four, "p");
        let p = parse("p").unwrap();
        assert!(s.theory_contains(&s.empty_set(), &p).unwrap());
        assert!(!s.theory_d_contains(&s.empty_set(), &Formula::truth()).unwrap());
        let both = ValuationSet::from_indices(4, [s.parse_valuation("p=B").unwrap()]);
        assert!(s.theory_contains(&both, &parse("~p").unwrap()).unwrap());
        assert!(!s.theory_d_contains(&both, &p).unwrap());

        let c = structure(StructureKind::Classical, "p,q");
        assert!(c.theory_contains(&c.universe(), &Formula::truth()).unwrap());
        assert!(!c.theory_contains(&c.universe(), &p).unwrap());
        let mp = c.models(&[p.clone()]).unwrap();
        assert!(c.theory_d_contains(&mp, &p).unwrap());
    }

    #[test]
    fn entailment_examples() {
        let p = parse("p").unwrap();
        let np = parse("~p").unwrap();
        let q = parse("q").unwrap();
        for kind in [StructureKind::Classical, StructureKind::Four, StructureKind::J3] {
            let s = structure(kind, "p,q");
            assert!(s.entails(&[p.clone()], &parse("p | q").unwrap()).unwrap());
        }
        let c = structure(StructureKind::Classical, "p,q");
        assert!(c.entails(&[p.clone(), np.clone()], &q).unwrap());
        let f = structure(StructureKind::Four, "p,q");
        assert!(!f.entails(&[p, np], &q).unwrap());
    }
}
