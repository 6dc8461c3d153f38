//! Independent oracles shared by the integration tests. Nothing here calls
//! the connective implementations of the library.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use pivotal_core::semantics::{Quotient, Structure, StructureKind, DEFAULT_CLONE_CAP};
use pivotal_core::AtomSet;

/// Literal negation, disjunction and conjunction tables over value symbols.
pub struct Tables {
    pub values: &'static [char],
    pub not: &'static [char],
    pub or: &'static [&'static str],
    pub and: &'static [&'static str],
}

pub const CLASSICAL: Tables = Tables {
    values: &['f', 't'],
    not: &['t', 'f'],
    or: &["ft", "tt"],
    and: &["ff", "ft"],
};

pub const FOUR: Tables = Tables {
    values: &['f', 't', 'B', 'N'],
    not: &['t', 'f', 'B', 'N'],
    or: &["ftBN", "tttt", "BtBt", "NttN"],
    and: &["ffff", "ftBN", "fBBf", "fNfN"],
};

pub const J3: Tables = Tables {
    values: &['f', 't', 'B'],
    not: &['t', 'f', 'B'],
    or: &["ftB", "ttt", "BtB"],
    and: &["fff", "ftB", "fBB"],
};

impl Tables {
    pub fn for_kind(kind: StructureKind) -> &'static Tables {
        match kind {
            StructureKind::Classical => &CLASSICAL,
            StructureKind::Four => &FOUR,
            StructureKind::J3 => &J3,
        }
    }

    pub fn index(&self, c: char) -> usize {
        self.values.iter().position(|&v| v == c).expect("known symbol")
    }

    fn not_i(&self, a: usize) -> usize {
        self.index(self.not[a])
    }

    fn or_i(&self, a: usize, b: usize) -> usize {
        self.index(self.or[a].chars().nth(b).unwrap())
    }

    fn and_i(&self, a: usize, b: usize) -> usize {
        self.index(self.and[a].chars().nth(b).unwrap())
    }

    /// Designated values: t and B.
    pub fn designated(&self, a: usize) -> bool {
        matches!(self.values[a], 't' | 'B')
    }
}

/// Value vectors over valuations, one entry per valuation in lexicographic
/// order with the first atom most significant.
pub type Pointwise = Vec<usize>;

pub fn atom_vectors(tables: &Tables, atoms: usize) -> Vec<Pointwise> {
    let base = tables.values.len();
    let size = base.pow(atoms as u32);
    (0..atoms)
        .map(|a| {
            let div = base.pow((atoms - 1 - a) as u32);
            (0..size).map(|v| (v / div) % base).collect()
        })
        .collect()
}

/// All value vectors realizable by formulas, by saturation under the tables.
pub fn pointwise_clone(tables: &Tables, atoms: usize) -> HashSet<Pointwise> {
    let size = tables.values.len().pow(atoms as u32);
    let t = tables.index('t');
    let f = tables.index('f');
    let mut known: Vec<Pointwise> = vec![vec![t; size], vec![f; size]];
    known.extend(atom_vectors(tables, atoms));
    let mut set: HashSet<Pointwise> = known.iter().cloned().collect();
    known = set.iter().cloned().collect();
    loop {
        let mut fresh = Vec::new();
        for a in &known {
            let n: Pointwise = a.iter().map(|&x| tables.not_i(x)).collect();
            fresh.push(n);
            for b in &known {
                fresh.push(a.iter().zip(b).map(|(&x, &y)| tables.or_i(x, y)).collect());
                fresh.push(a.iter().zip(b).map(|(&x, &y)| tables.and_i(x, y)).collect());
            }
        }
        let before = set.len();
        set.extend(fresh);
        if set.len() == before {
            return set;
        }
        known = set.iter().cloned().collect();
    }
}

/// The definable family: intersections of model sets of clone members,
/// with the universe as the empty intersection.
pub fn definable_family(tables: &Tables, clone: &HashSet<Pointwise>) -> BTreeSet<Vec<bool>> {
    let size = clone.iter().next().map_or(1, |v| v.len());
    let generators: BTreeSet<Vec<bool>> = clone
        .iter()
        .map(|vec| vec.iter().map(|&x| tables.designated(x)).collect())
        .collect();
    let mut family: BTreeSet<Vec<bool>> = BTreeSet::new();
    family.insert(vec![true; size]);
    loop {
        let mut fresh = Vec::new();
        for a in &family {
            for g in &generators {
                fresh.push(a.iter().zip(g).map(|(&x, &y)| x && y).collect::<Vec<bool>>());
            }
        }
        let before = family.len();
        family.extend(fresh);
        if family.len() == before {
            return family;
        }
    }
}

pub fn structure(kind: StructureKind, atoms: &str) -> Structure {
    Structure::new(kind, AtomSet::parse_list(atoms).unwrap()).unwrap()
}

pub fn quotient(kind: StructureKind, atoms: &str) -> Quotient {
    Quotient::new(structure(kind, atoms), DEFAULT_CLONE_CAP).unwrap()
}

pub fn formulas(text: &str) -> Vec<pivotal_core::Formula> {
    pivotal_core::formula::parse_list(text).unwrap()
}

/// Classical Nixon pivot: Mod(~r | ~p, ~q | p) over atoms r,q,p.
pub fn nixon_classical_pivot(s: &Structure) -> pivotal_core::choice::Pivot {
    pivotal_core::choice::Pivot::new(s.models(&formulas("~r | ~p, ~q | p")).unwrap())
}

/// FOUR Nixon pivot, built pointwise over atoms r,q,p: keep v iff
/// (r designated implies ~p designated) and (q designated implies p designated).
pub fn nixon_four_pivot(s: &Structure) -> pivotal_core::choice::Pivot {
    let designated = |c: char| FOUR.designated(FOUR.index(c));
    let sym = |v: usize, a: usize| s.atom_value(v, a).symbol().chars().next().unwrap();
    let kept = (0..s.universe_size()).filter(|&v| {
        let (r, q, p) = (sym(v, 0), sym(v, 1), sym(v, 2));
        let not_p = FOUR.not[FOUR.index(p)];
        (!designated(r) || designated(not_p)) && (!designated(q) || designated(p))
    });
    pivotal_core::choice::Pivot::new(pivotal_core::ValuationSet::from_indices(s.universe_size(), kept))
}

/// FOUR Nixon claims: premises, conclusion, expected verdict.
pub const NIXON_FOUR_CLAIMS: &[(&str, &str, bool)] = &[
    ("r", "~p", true),
    ("q", "p", true),
    ("r, p", "p", true),
    ("r, p", "~p", true),
    ("r, p", "r", true),
    ("r, p", "~r", false),
    ("p, ~p, q", "p", true),
    ("p, ~p, q", "~p", true),
    ("p, ~p, q", "q", true),
    ("p, ~p, q", "~q", false),
    ("q, r", "p", true),
    ("q, r", "~p", true),
    ("q, r", "q", true),
    ("q, r", "~q", false),
    ("q, r", "r", true),
    ("q, r", "~r", false),
    ("~r, r | q", "q", false),
];

/// Evaluates `~a`, `a | b` and `a & b` at every valuation of a two-atom
/// structure and compares each cell with the literal table. Returns the
/// number of cells checked, or the first mismatch.
pub fn check_tables(kind: StructureKind) -> Result<usize, String> {
    let tables = Tables::for_kind(kind);
    let s = structure(kind, "a,b");
    let parse = |t: &str| pivotal_core::formula::parse(t).unwrap();
    let (not, or, and) = (parse("~a"), parse("a | b"), parse("a & b"));
    let eval = |val: &pivotal_core::semantics::Valuation, f: &pivotal_core::Formula| {
        s.eval(val, f).unwrap().symbol().chars().next().unwrap()
    };
    let mut cells = 0;
    for v in 0..s.universe_size() {
        let val = s.valuation(v);
        let sym = |i: usize| val.value(i).symbol().chars().next().unwrap();
        let (a, b) = (tables.index(sym(0)), tables.index(sym(1)));
        let mut expect = vec![
            ("|", or.clone(), tables.or[a].chars().nth(b).unwrap()),
            ("&", and.clone(), tables.and[a].chars().nth(b).unwrap()),
        ];
        if b == 0 {
            expect.push(("~", not.clone(), tables.not[a]));
        }
        for (op, f, want) in expect {
            let got = eval(&val, &f);
            if got != want {
                return Err(format!("{kind}: {} {op} {} gave {got}, expected {want}", sym(0), sym(1)));
            }
            cells += 1;
        }
    }
    Ok(cells)
}
