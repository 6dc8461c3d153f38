//! Enumeration oracles for the representation results.
//!
//! Each representation result is checked in both directions on one finite
//! structure. Candidate relations are encoded as tables over the definable
//! family; a candidate's verdict (all listed conditions hold) must equal its
//! membership in the family of relations induced by choice functions with
//! the required properties. Condition-passers are additionally rebuilt
//! through the explicit construction (a choice function computed from the
//! table) and must regenerate themselves.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::ValuationSet;
use crate::choice::{count_choice_functions, enumerate_choice_functions, power_set, ChoiceFunction, Pivot, SetFunction};
use crate::consequence::{Mode, PertinenceRelation};
use crate::error::{Error, Result};
use crate::semantics::{Assumption, ClassSet, Quotient};

use super::conditions::{describe_violation, first_failure, recheck, Condition};
use super::relation::{Premise, RelationUnderTest};

pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_SEED: u64 = 20_240_601;
/// Largest candidate space enumerated in full.
pub const DEFAULT_ENUM_CAP: u64 = 1 << 20;

const QUOTIENT_NOTE: &str = "Candidates are tables from definable sets to sets of formula classes. \
Every condition set checked here contains (|~0) or (|~4) or (|~11), each of which forces a relation \
to depend on its premises only through their models; pivotal relations depend on formulas only \
through their semantic functions. A relation that does not factor this way therefore lies on neither \
side of the equivalence, so restricting the enumeration to tables loses nothing.";

const SAMPLED_NOTE: &str = "sampled completeness: the candidate space is too large to enumerate, so \
the backward direction runs over the family members, the structured family Th(W) for choice \
functions W, and seeded random tables.";

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub samples: usize,
    pub seed: u64,
    pub enum_cap: u64,
    /// Largest abstract universe for the pivot representation check.
    pub max_universe: usize,
    /// Record wall-clock time; disable for reproducible reports.
    pub timing: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            enum_cap: DEFAULT_ENUM_CAP,
            max_universe: 2,
            timing: true,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Proposition {
    PivotRep,
    RepDp,
    RepGeneral,
    RepDiscDp,
    RepDisc,
    Xlogic,
    Properties,
}

impl Proposition {
    pub const ALL: [Proposition; 7] = [
        Proposition::PivotRep,
        Proposition::RepDp,
        Proposition::RepGeneral,
        Proposition::RepDiscDp,
        Proposition::RepDisc,
        Proposition::Xlogic,
        Proposition::Properties,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Proposition::PivotRep => "pivot-rep",
            Proposition::RepDp => "rep-dp",
            Proposition::RepGeneral => "rep-general",
            Proposition::RepDiscDp => "rep-disc-dp",
            Proposition::RepDisc => "rep-disc",
            Proposition::Xlogic => "xlogic",
            Proposition::Properties => "properties",
        }
    }

    pub fn parts(self) -> usize {
        match self {
            Proposition::PivotRep => 3,
            Proposition::RepDp | Proposition::Xlogic | Proposition::Properties => 1,
            Proposition::RepGeneral | Proposition::RepDiscDp => 2,
            Proposition::RepDisc => 4,
        }
    }

    /// Assumptions a part needs from the structure.
    pub fn requirements(self, part: usize) -> Vec<Assumption> {
        use Assumption::*;
        match (self, part) {
            (Proposition::RepGeneral, 1) => vec![A0],
            (Proposition::RepDiscDp, 0) => vec![A1, A3],
            (Proposition::RepDiscDp, 1) => vec![A1, A3, A2],
            (Proposition::RepDisc, 0) => vec![A1, A3],
            (Proposition::RepDisc, 1) => vec![A1, A3, A0],
            (Proposition::RepDisc, 2) => vec![A1, A3, A2],
            (Proposition::RepDisc, 3) => vec![A1, A3, A0, A2],
            (Proposition::Xlogic, _) => vec![A4],
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Proposition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Proposition> {
        Proposition::ALL
            .into_iter()
            .find(|p| p.id() == s)
            .ok_or_else(|| Error::Config(format!("unknown proposition '{s}'")))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Coverage {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub kind: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub proposition: String,
    pub part: usize,
    pub structure: String,
    pub mode: Coverage,
    pub candidates: u64,
    pub condition_passers: u64,
    pub family_size: u64,
    pub failures: Vec<Failure>,
    pub runtime_ms: u64,
    pub seed: u64,
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// One-line summary.
    pub fn summary(&self) -> String {
        format!(
            "{} part {} on {}: {} candidates ({}), {} condition-passers, family size {}, {} failures",
            self.proposition,
            self.part,
            self.structure,
            self.candidates,
            match self.mode {
                Coverage::Exhaustive => "exhaustive",
                Coverage::Sampled => "sampled completeness",
            },
            self.condition_passers,
            self.family_size,
            self.failures.len()
        )
    }
}

/// The reports of one run and the parts skipped for unmet assumptions.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyRun {
    pub reports: Vec<VerifyReport>,
    pub skipped: Vec<(usize, String)>,
}

impl VerifyRun {
    pub fn failures(&self) -> usize {
        self.reports.iter().map(|r| r.failures.len()).sum()
    }
}

/// Runs a proposition on a structure. With `part` given, refuses if the
/// structure misses a required assumption; without it, runs every part
/// whose assumptions hold and lists the others as skipped.
pub fn run(proposition: Proposition, quotient: &Quotient, part: Option<usize>, opts: &VerifyOptions) -> Result<VerifyRun> {
    let assumptions = quotient.assumptions();
    let parts: Vec<usize> = match part {
        Some(p) if p >= proposition.parts() => {
            return Err(Error::Config(format!("{proposition} has no part {p}")));
        }
        Some(p) => {
            assumptions.require(&proposition.requirements(p))?;
            vec![p]
        }
        None => (0..proposition.parts()).collect(),
    };
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for p in parts {
        if let Err(e) = assumptions.require(&proposition.requirements(p)) {
            skipped.push((p, e.to_string()));
            continue;
        }
        let report = match proposition {
            Proposition::PivotRep => verify_pivot_representation(quotient, p, opts)?,
            Proposition::RepDp => verify_rep_dp(quotient, opts)?,
            Proposition::RepGeneral => verify_rep_general(quotient, p, opts)?,
            Proposition::RepDiscDp => verify_rep_disc_dp(quotient, p, opts)?,
            Proposition::RepDisc => verify_rep_disc(quotient, p, opts)?,
            Proposition::Xlogic => verify_xlogic(quotient, opts)?,
            Proposition::Properties => super::properties::verify_properties(quotient, opts)?,
        };
        reports.push(report);
    }
    Ok(VerifyRun { reports, skipped })
}

pub(crate) struct Timer {
    start: Instant,
    enabled: bool,
}

impl Timer {
    pub(crate) fn start(opts: &VerifyOptions) -> Timer {
        Timer { start: Instant::now(), enabled: opts.timing }
    }

    pub(crate) fn elapsed_ms(&self) -> u64 {
        if self.enabled {
            self.start.elapsed().as_millis() as u64
        } else {
            0
        }
    }
}

pub(crate) fn rng(opts: &VerifyOptions, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(stream);
    rng
}

/// A uniformly random subset of `of`.
pub(crate) fn random_subset(rng: &mut impl Rng, of: &ValuationSet) -> ValuationSet {
    ValuationSet::from_indices(of.capacity(), of.iter().filter(|_| rng.gen_bool(0.5)))
}

fn all_pivots(size: usize, cap: u64) -> Result<impl Iterator<Item = Pivot>> {
    if size >= 64 || 1u64 << size > cap {
        return Err(Error::CapExceeded { what: "pivots".into(), limit: cap });
    }
    Ok(Pivot::all(size))
}

// ---------------------------------------------------------------------------
// Pivot representation of choice functions.

/// Part 0: on every abstract universe up to `opts.max_universe` elements,
/// every choice function on the full power set is SC iff some pivot induces
/// it. Parts 1 and 2: on the definable family of `quotient`, SC and DP iff
/// induced by a definable pivot; SC and UC iff induced by a pivot with a
/// definable complement.
pub fn verify_pivot_representation(quotient: &Quotient, part: usize, opts: &VerifyOptions) -> Result<VerifyReport> {
    let timer = Timer::start(opts);
    let mut failures = Vec::new();
    let mut candidates = 0u64;
    let mut passers = 0u64;
    let mut coverage = Coverage::Exhaustive;
    let structure;
    let mut notes = Vec::new();
    if part == 0 {
        if opts.max_universe > 3 {
            return Err(Error::CapExceeded { what: "abstract universe size".into(), limit: 3 });
        }
        structure = format!("abstract universes of size 0..={}", opts.max_universe);
        for n in 0..=opts.max_universe {
            let domain = power_set(n);
            let induced = pivot_index(&domain, Pivot::all(n), |_| true);
            for mu in enumerate_choice_functions(domain.clone()) {
                candidates += 1;
                let sc = mu.is_strongly_coherent();
                passers += sc as u64;
                let oracle = induced.contains_key(mu.images());
                if sc != oracle || mu.pivot_representation().is_some() != sc {
                    failures.push(Failure {
                        kind: "mismatch".into(),
                        detail: format!("universe size {n}, images {:?}: SC={sc}, pivot exists={oracle}", mu.images()),
                    });
                }
            }
        }
    } else {
        let family = &quotient.family;
        structure = quotient.structure.describe();
        let domain: Arc<[ValuationSet]> = family.sets().into();
        let universe = quotient.structure.universe();
        let wanted = |i: &ValuationSet| match part {
            1 => family.contains(i),
            _ => family.contains(&universe.difference(i)),
        };
        let induced = pivot_index(&domain, all_pivots(quotient.universe_size(), opts.enum_cap)?, wanted);
        let property = |mu: &ChoiceFunction| -> Result<bool> {
            Ok(mu.is_strongly_coherent()
                && match part {
                    1 => mu.is_definability_preserving(family),
                    _ => mu.is_universe_codefinable(family)?,
                })
        };
        let mut check = |mu: &ChoiceFunction| -> Result<()> {
            candidates += 1;
            let verdict = property(mu)?;
            passers += verdict as u64;
            if verdict != induced.contains_key(mu.images()) {
                failures.push(Failure {
                    kind: "mismatch".into(),
                    detail: format!("images {:?}: property={verdict}", mu.images()),
                });
            }
            Ok(())
        };
        match count_choice_functions(&domain).filter(|&c| c <= opts.enum_cap) {
            Some(_) => {
                for mu in enumerate_choice_functions(domain.clone()) {
                    check(&mu)?;
                }
            }
            None => {
                coverage = Coverage::Sampled;
                notes.push(SAMPLED_NOTE.into());
                for pivot in all_pivots(quotient.universe_size(), opts.enum_cap)? {
                    check(&ChoiceFunction::from_pivot(domain.clone(), &pivot))?;
                }
                let mut rng = rng(opts, 1);
                for _ in 0..opts.samples {
                    let images = domain.iter().map(|v| random_subset(&mut rng, v)).collect();
                    check(&ChoiceFunction::new(domain.clone(), images)?)?;
                }
            }
        }
    }
    Ok(VerifyReport {
        proposition: Proposition::PivotRep.id().into(),
        part,
        structure,
        mode: coverage,
        candidates,
        condition_passers: passers,
        family_size: 0,
        failures,
        runtime_ms: timer.elapsed_ms(),
        seed: opts.seed,
        notes,
    })
}

/// Maps the image vector of μ_I on `domain` to the pivots inducing it, over
/// the pivots accepted by `keep`.
fn pivot_index(
    domain: &Arc<[ValuationSet]>,
    pivots: impl Iterator<Item = Pivot>,
    keep: impl Fn(&ValuationSet) -> bool,
) -> HashMap<Vec<ValuationSet>, Vec<Pivot>> {
    let mut out: HashMap<Vec<ValuationSet>, Vec<Pivot>> = HashMap::new();
    for pivot in pivots.filter(|p| keep(p.set())) {
        let images = ChoiceFunction::from_pivot(domain.clone(), &pivot).images().to_vec();
        out.entry(images).or_default().push(pivot);
    }
    out
}

// ---------------------------------------------------------------------------
// Representation of consequence relations.

/// Properties required of the choice functions in a family.
#[derive(Copy, Clone, Debug, Default)]
struct Properties {
    dp: bool,
    uc: bool,
    cp: bool,
}

impl Properties {
    fn holds(&self, quotient: &Quotient, mu: &ChoiceFunction) -> Result<bool> {
        Ok(mu.is_strongly_coherent()
            && (!self.dp || mu.is_definability_preserving(&quotient.family))
            && (!self.uc || mu.is_universe_codefinable(&quotient.family)?)
            && (!self.cp || mu.is_coherency_preserving(quotient)))
    }

    fn describe(&self) -> String {
        let mut names = vec!["SC"];
        for (on, name) in [(self.dp, "DP"), (self.uc, "UC"), (self.cp, "CP")] {
            if on {
                names.push(name);
            }
        }
        names.join(" ")
    }
}

/// How a condition-passing table is turned back into a choice function.
#[derive(Copy, Clone, Debug)]
enum Construction {
    /// μ(Mod Γ) is the chosen set of the premise itself.
    Direct,
    /// ν of the function sending Mod Γ to the chosen set.
    Nu,
}

struct Plan {
    proposition: Proposition,
    part: usize,
    mode: Mode,
    conditions: Vec<Condition>,
    properties: Properties,
    construction: Construction,
}

pub fn verify_rep_dp(quotient: &Quotient, opts: &VerifyOptions) -> Result<VerifyReport> {
    use Condition::*;
    run_plan(
        quotient,
        &Plan {
            proposition: Proposition::RepDp,
            part: 0,
            mode: Mode::Plain,
            conditions: vec![C0, C1, C2, C3],
            properties: Properties { dp: true, ..Properties::default() },
            construction: Construction::Direct,
        },
        opts,
    )
}

pub fn verify_rep_general(quotient: &Quotient, part: usize, opts: &VerifyOptions) -> Result<VerifyReport> {
    use Condition::*;
    let (conditions, uc) = match part {
        0 => (vec![C4], false),
        1 => (vec![C4, C5], true),
        _ => return Err(Error::Config(format!("rep-general has no part {part}"))),
    };
    run_plan(
        quotient,
        &Plan {
            proposition: Proposition::RepGeneral,
            part,
            mode: Mode::Plain,
            conditions,
            properties: Properties { uc, ..Properties::default() },
            construction: Construction::Nu,
        },
        opts,
    )
}

pub fn verify_rep_disc_dp(quotient: &Quotient, part: usize, opts: &VerifyOptions) -> Result<VerifyReport> {
    use Condition::*;
    let (conditions, cp) = match part {
        0 => (vec![C0, C6, C7, C8, C9, C10], true),
        1 => (vec![C0, C6, C7, C8, C9], false),
        _ => return Err(Error::Config(format!("rep-disc-dp has no part {part}"))),
    };
    run_plan(
        quotient,
        &Plan {
            proposition: Proposition::RepDiscDp,
            part,
            mode: Mode::Discriminative,
            conditions,
            properties: Properties { dp: true, cp, ..Properties::default() },
            construction: Construction::Direct,
        },
        opts,
    )
}

pub fn verify_rep_disc(quotient: &Quotient, part: usize, opts: &VerifyOptions) -> Result<VerifyReport> {
    use Condition::*;
    let (conditions, properties) = match part {
        0 => (vec![C0, C6, C7, C8, C10, C11], Properties { cp: true, ..Properties::default() }),
        1 => (vec![C0, C6, C7, C8, C10, C11, C12], Properties { cp: true, uc: true, ..Properties::default() }),
        2 => (vec![C0, C6, C7, C8, C11], Properties::default()),
        3 => (vec![C0, C6, C7, C8, C11, C12], Properties { uc: true, ..Properties::default() }),
        _ => return Err(Error::Config(format!("rep-disc has no part {part}"))),
    };
    run_plan(
        quotient,
        &Plan {
            proposition: Proposition::RepDisc,
            part,
            mode: Mode::Discriminative,
            conditions,
            properties,
            construction: Construction::Nu,
        },
        opts,
    )
}

type Table = Vec<ClassSet>;

/// The tables induced by choice functions with the plan's properties.
/// Enumerates every choice function on the definable family when feasible
/// and otherwise every pivot, relying on the pivot representation.
fn family_tables(quotient: &Quotient, plan: &Plan, opts: &VerifyOptions) -> Result<(HashSet<Table>, String)> {
    let domain: Arc<[ValuationSet]> = quotient.family.sets().into();
    let induce = |mu: &ChoiceFunction| -> Table {
        mu.images().iter().map(|m| plan.mode.conclusions(&quotient.clone, m)).collect()
    };
    let mut tables = HashSet::new();
    let source = match count_choice_functions(&domain).filter(|&c| c <= opts.enum_cap) {
        Some(count) => {
            for mu in enumerate_choice_functions(domain.clone()) {
                if plan.properties.holds(quotient, &mu)? {
                    tables.insert(induce(&mu));
                }
            }
            format!("family built from all {count} choice functions on the definable sets")
        }
        None => {
            for pivot in all_pivots(quotient.universe_size(), opts.enum_cap)? {
                let mu = ChoiceFunction::from_pivot(domain.clone(), &pivot);
                if plan.properties.holds(quotient, &mu)? {
                    tables.insert(induce(&mu));
                }
            }
            "family built from all pivots (choice functions on the definable sets are too many to enumerate)".into()
        }
    };
    Ok((tables, source))
}

/// Result of checking one candidate.
#[derive(Default)]
struct Outcome {
    passed: bool,
    failures: Vec<Failure>,
}

fn render_table(quotient: &Quotient, table: &[ClassSet]) -> String {
    let cells: Vec<String> = table
        .iter()
        .enumerate()
        .map(|(d, k)| format!("{} => {}", quotient.describe_set(quotient.family.get(d)), k))
        .collect();
    format!("[{}]", cells.join("; "))
}

/// Checks a factored candidate: verdict against membership, the
/// reconstruction for passers, and the counterexample for the others.
fn check_table(quotient: &Quotient, plan: &Plan, family: &HashSet<Table>, table: Table) -> Outcome {
    let member = family.contains(&table);
    let rel = RelationUnderTest::from_table(quotient, table).expect("table over the family");
    let failure = first_failure(&plan.conditions, &rel);
    let mut out = Outcome { passed: failure.is_none(), failures: Vec::new() };
    let describe = || render_table(quotient, rel.all_conclusions());
    if out.passed != member {
        let why = match &failure {
            Some(r) => describe_violation(&rel, r.condition, r.counterexample.as_ref().expect("failing report has a witness")),
            None => "all conditions hold".into(),
        };
        out.failures.push(Failure {
            kind: "mismatch".into(),
            detail: format!("member={member}, {why}, table {}", describe()),
        });
    }
    match failure {
        None => {
            if let Err(detail) = reconstruct(&rel, plan) {
                out.failures.push(Failure {
                    kind: "reconstruction".into(),
                    detail: format!("{detail}, table {}", describe()),
                });
            }
        }
        Some(report) => {
            let v = report.counterexample.expect("failing report has a witness");
            if !matches!(recheck(report.condition, &rel, &v), Ok(true)) {
                out.failures.push(Failure {
                    kind: "recheck".into(),
                    detail: format!("{} did not re-verify, table {}", describe_violation(&rel, report.condition, &v), describe()),
                });
            }
        }
    }
    out
}

/// Rebuilds a choice function from a condition-passing relation and checks
/// that it has the family's properties and regenerates the relation.
fn reconstruct(rel: &RelationUnderTest, plan: &Plan) -> std::result::Result<(), String> {
    let q = rel.quotient();
    let domain: Arc<[ValuationSet]> = q.family.sets().into();
    let chosen: Vec<ValuationSet> = (0..rel.len())
        .map(|i| match plan.mode {
            Mode::Plain => rel.mod_k(i).clone(),
            Mode::Discriminative => rel.full_base(i),
        })
        .collect();
    let mu = match plan.construction {
        Construction::Direct => ChoiceFunction::new(domain, chosen).map_err(|e| format!("constructed function: {e}"))?,
        Construction::Nu => SetFunction::new(domain, chosen).map_err(|e| e.to_string())?.nu(),
    };
    let holds = plan.properties.holds(q, &mu).map_err(|e| e.to_string())?;
    if !holds {
        return Err(format!("constructed choice function is not {}", plan.properties.describe()));
    }
    if mu.pivot_representation().is_none() {
        return Err("constructed choice function has no pivot".into());
    }
    for i in 0..rel.len() {
        if &plan.mode.conclusions(&q.clone, mu.image(i)) != rel.conclusions(i) {
            return Err(format!("constructed choice function changes the conclusions of {}", rel.describe_premise(i)));
        }
    }
    Ok(())
}

/// Candidate tables in a deterministic order.
enum Candidates {
    Exhaustive { cells: usize, width: usize, total: u64 },
    Sampled(Vec<Table>),
}

fn decode(index: u64, cells: usize, width: usize) -> Table {
    (0..cells)
        .map(|d| {
            let shift = (cells - 1 - d) * width;
            ClassSet::from_bits(width, (index >> shift) & ((1u64 << width) - 1))
        })
        .collect()
}

fn random_classes(rng: &mut impl Rng, width: usize) -> ClassSet {
    ClassSet::from_indices(width, (0..width).filter(|_| rng.gen_bool(0.5)))
}

fn sampled_candidates(
    quotient: &Quotient,
    plan: &Plan,
    family: &HashSet<Table>,
    opts: &VerifyOptions,
) -> Vec<Table> {
    let domain: Arc<[ValuationSet]> = quotient.family.sets().into();
    let width = quotient.clone.len();
    let mut rng = rng(opts, 2);
    let mut seen: BTreeSet<Table> = family.iter().cloned().collect();
    let members: Vec<Table> = seen.iter().cloned().collect();
    // Structured family: conclusions of an arbitrary choice function.
    let structured = |mu: &ChoiceFunction| -> Table {
        mu.images().iter().map(|m| plan.mode.conclusions(&quotient.clone, m)).collect()
    };
    match count_choice_functions(&domain).filter(|&c| c <= opts.enum_cap) {
        Some(_) => {
            for mu in enumerate_choice_functions(domain.clone()) {
                seen.insert(structured(&mu));
            }
        }
        None => {
            for _ in 0..opts.samples {
                let images = domain.iter().map(|v| random_subset(&mut rng, v)).collect();
                let mu = ChoiceFunction::new(domain.clone(), images).expect("subsets are chosen");
                seen.insert(structured(&mu));
            }
        }
    }
    let mut out: Vec<Table> = seen.into_iter().collect();
    // Random tables: half uniform, half one or two bits away from a member.
    for s in 0..opts.samples {
        let table = if s % 2 == 0 || members.is_empty() {
            (0..domain.len()).map(|_| random_classes(&mut rng, width)).collect()
        } else {
            let mut t = members[rng.gen_range(0..members.len())].clone();
            for _ in 0..rng.gen_range(1..=2) {
                let d = rng.gen_range(0..t.len());
                t[d].toggle(rng.gen_range(0..width));
            }
            t
        };
        out.push(table);
    }
    out
}

fn run_plan(quotient: &Quotient, plan: &Plan, opts: &VerifyOptions) -> Result<VerifyReport> {
    let timer = Timer::start(opts);
    quotient.clone.require_complete()?;
    let (family, family_source) = family_tables(quotient, plan, opts)?;
    let cells = quotient.family.len();
    let width = quotient.clone.len();
    let space = (width as u64)
        .checked_mul(cells as u64)
        .filter(|&bits| bits < 64)
        .map(|bits| 1u64 << bits);
    let candidates = match space.filter(|&n| n <= opts.enum_cap) {
        Some(total) => Candidates::Exhaustive { cells, width, total },
        None => Candidates::Sampled(sampled_candidates(quotient, plan, &family, opts)),
    };
    let mut notes = vec![QUOTIENT_NOTE.to_string(), family_source];
    let mut failures = Vec::new();
    let mut passers = 0u64;
    let mut count = 0u64;
    let mut absorb = |outcomes: Vec<Outcome>| {
        for o in outcomes {
            count += 1;
            passers += o.passed as u64;
            failures.extend(o.failures);
        }
    };
    let coverage = match &candidates {
        Candidates::Exhaustive { cells, width, total } => {
            absorb(
                (0..*total)
                    .into_par_iter()
                    .map(|i| check_table(quotient, plan, &family, decode(i, *cells, *width)))
                    .collect(),
            );
            Coverage::Exhaustive
        }
        Candidates::Sampled(tables) => {
            notes.push(SAMPLED_NOTE.into());
            absorb(
                tables
                    .par_iter()
                    .map(|t| check_table(quotient, plan, &family, t.clone()))
                    .collect(),
            );
            Coverage::Sampled
        }
    };
    // Forward direction over every pivot.
    let pivots: Vec<Pivot> = all_pivots(quotient.universe_size(), opts.enum_cap)?.collect();
    absorb(
        pivots
            .par_iter()
            .map(|p| {
                let table = RelationUnderTest::from_pivot(quotient, p, plan.mode).all_conclusions().to_vec();
                check_table(quotient, plan, &family, table)
            })
            .collect(),
    );
    notes.push(format!("forward direction checked on all {} pivots", pivots.len()));
    // Relations that do not factor through Mod(Γ).
    let non_factoring = non_factoring_relations(quotient, &family, opts);
    let nf_count = non_factoring.len();
    absorb(
        non_factoring
            .into_par_iter()
            .map(|(premises, conclusions)| check_non_factoring(quotient, plan, premises, conclusions))
            .collect(),
    );
    notes.push(format!("{nf_count} relations with two premises of equal models and different conclusions all fail the conditions"));
    Ok(VerifyReport {
        proposition: plan.proposition.id().into(),
        part: plan.part,
        structure: quotient.structure.describe(),
        mode: coverage,
        candidates: count,
        condition_passers: passers,
        family_size: family.len() as u64,
        failures,
        runtime_ms: timer.elapsed_ms(),
        seed: opts.seed,
        notes,
    })
}

/// Relations with one extra premise whose models repeat those of another
/// premise but whose conclusions differ.
fn non_factoring_relations(
    quotient: &Quotient,
    family: &HashSet<Table>,
    opts: &VerifyOptions,
) -> Vec<(Vec<Premise>, Vec<ClassSet>)> {
    let mut rng = rng(opts, 3);
    let members: BTreeSet<&Table> = family.iter().collect();
    let members: Vec<&Table> = members.into_iter().collect();
    let width = quotient.clone.len();
    let cells = quotient.family.len();
    let n = (opts.samples / 10).max(100);
    (0..n)
        .map(|s| {
            let base: Table = if s % 2 == 0 && !members.is_empty() {
                members[rng.gen_range(0..members.len())].clone()
            } else {
                (0..cells).map(|_| random_classes(&mut rng, width)).collect()
            };
            let d = rng.gen_range(0..cells);
            let set = quotient.family.get(d);
            let mut premises: Vec<Premise> = (0..cells)
                .map(|e| Premise { gamma: quotient.clone.theory(quotient.family.get(e)), models: e })
                .collect();
            // The copy is either Th(V) again or a small generating set of V.
            let gamma = if s % 3 == 0 {
                quotient.clone.theory(set)
            } else {
                let rep = quotient.representative(set).expect("definable");
                quotient.classify_all(&rep).expect("witnesses classify")
            };
            premises.push(Premise { gamma, models: d });
            let mut conclusions = base.clone();
            let mut extra = base[d].clone();
            extra.toggle(rng.gen_range(0..width));
            conclusions.push(extra);
            (premises, conclusions)
        })
        .collect()
}

fn check_non_factoring(quotient: &Quotient, plan: &Plan, premises: Vec<Premise>, conclusions: Vec<ClassSet>) -> Outcome {
    let rel = RelationUnderTest::with_premises(quotient, premises, conclusions).expect("valid premises");
    match first_failure(&plan.conditions, &rel) {
        None => Outcome {
            passed: true,
            failures: vec![Failure {
                kind: "non-factoring".into(),
                detail: format!("relation with duplicated premise {} passes every condition", rel.describe_premise(rel.len() - 1)),
            }],
        },
        Some(report) => {
            let v = report.counterexample.expect("failing report has a witness");
            let failures = if matches!(recheck(report.condition, &rel, &v), Ok(true)) {
                Vec::new()
            } else {
                vec![Failure {
                    kind: "recheck".into(),
                    detail: format!("{} did not re-verify on a non-factoring relation", describe_violation(&rel, report.condition, &v)),
                }]
            };
            Outcome { passed: false, failures }
        }
    }
}

// ---------------------------------------------------------------------------
// Pertinence relations.

/// For every W ⊆ V, the pertinence relation of E = Th(W) is closed and
/// agrees with the pivotal relation of I = V \ Mod(E), whose complement is
/// definable; for every pivot with definable complement, the relation
/// arises from E = Th(V \ I).
pub fn verify_xlogic(quotient: &Quotient, opts: &VerifyOptions) -> Result<VerifyReport> {
    let timer = Timer::start(opts);
    quotient.clone.require_complete()?;
    let clone = &quotient.clone;
    let universe = quotient.structure.universe();
    let mut failures = Vec::new();
    let mut candidates = 0u64;
    let mut passers = 0u64;
    let mut agree = |e: &ClassSet, pivot: &Pivot, label: &str| {
        candidates += 1;
        let before = failures.len();
        let pert = PertinenceRelation::from_classes(quotient, e);
        if pert.closed() != Some(true) {
            failures.push(Failure { kind: "not-closed".into(), detail: format!("{label}: E is not closed") });
        }
        if !quotient.family.contains(&universe.difference(pivot.set())) {
            failures.push(Failure { kind: "not-uc".into(), detail: format!("{label}: V \\ I is not definable") });
        }
        for gm in quotient.family.sets() {
            let chosen = pivot.choose(gm);
            for a in 0..clone.len() {
                let pertinent = pert.concludes(gm, clone.models(a));
                let pivotal = chosen.is_subset(clone.models(a));
                if pertinent != pivotal {
                    failures.push(Failure {
                        kind: "mismatch".into(),
                        detail: format!(
                            "{label}: Gamma={} alpha={} pertinence={pertinent} pivotal={pivotal}",
                            quotient.describe_set(gm),
                            clone.witness(a)
                        ),
                    });
                }
            }
        }
        passers += (failures.len() == before) as u64;
    };
    let mut w_count = 0;
    for w in all_pivots(quotient.universe_size(), opts.enum_cap)? {
        w_count += 1;
        let e = clone.theory(w.set());
        let pivot = Pivot::new(universe.difference(&clone.models_of(&e)));
        agree(&e, &pivot, &format!("W={}", w.set()));
    }
    let mut uc_count = 0;
    for pivot in all_pivots(quotient.universe_size(), opts.enum_cap)? {
        if quotient.family.contains(&universe.difference(pivot.set())) {
            uc_count += 1;
            let e = clone.theory(&universe.difference(pivot.set()));
            agree(&e, &pivot, &format!("I={}", pivot.set()));
        }
    }
    Ok(VerifyReport {
        proposition: Proposition::Xlogic.id().into(),
        part: 0,
        structure: quotient.structure.describe(),
        mode: Coverage::Exhaustive,
        candidates,
        condition_passers: passers,
        family_size: uc_count,
        failures,
        runtime_ms: timer.elapsed_ms(),
        seed: opts.seed,
        notes: vec![
            format!("{w_count} sets W, giving every closed E = Th(W)"),
            format!("{uc_count} pivots whose complement is definable"),
            "verdicts compared on every definable premise set and every formula class".into(),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::AtomSet;
    use crate::semantics::{Structure, StructureKind, DEFAULT_CLONE_CAP};

    fn quotient(kind: StructureKind, atoms: &str) -> Quotient {
        let s = Structure::new(kind, AtomSet::parse_list(atoms).unwrap()).unwrap();
        Quotient::new(s, DEFAULT_CLONE_CAP).unwrap()
    }

    fn quick() -> VerifyOptions {
        VerifyOptions { samples: 300, timing: false, ..VerifyOptions::default() }
    }

    #[test]
    fn proposition_ids_round_trip() {
        for p in Proposition::ALL {
            assert_eq!(p.id().parse::<Proposition>().unwrap(), p);
        }
        assert!("rep-normal".parse::<Proposition>().is_err());
    }

    #[test]
    fn decode_splits_the_index_into_cells() {
        let t = decode(0b0110_0001, 2, 4);
        assert_eq!(t[0].to_bits(), 0b0110);
        assert_eq!(t[1].to_bits(), 0b0001);
    }

    #[test]
    fn pivot_representation_on_tiny_universes() {
        let q = quotient(StructureKind::Classical, "p");
        let r = verify_pivot_representation(&q, 0, &quick()).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        // 1 + 2 + 16 choice functions on the power sets of sizes 0, 1, 2.
        assert_eq!(r.candidates, 19);
    }

    #[test]
    fn rep_dp_on_classical_single_atom() {
        let q = quotient(StructureKind::Classical, "p");
        let r = verify_rep_dp(&q, &quick()).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.mode, Coverage::Exhaustive);
    }

    #[test]
    fn refuses_parts_needing_missing_assumptions() {
        let q = quotient(StructureKind::Four, "p");
        let err = run(Proposition::RepDisc, &q, Some(2), &quick()).unwrap_err();
        assert!(err.to_string().contains("(A2)"), "{err}");
        let all = run(Proposition::RepDisc, &q, None, &quick()).unwrap();
        assert_eq!(all.skipped.iter().map(|s| s.0).collect::<Vec<_>>(), vec![2, 3]);
    }

    #[test]
    fn reports_are_reproducible_without_timing() {
        let q = quotient(StructureKind::J3, "p");
        let a = verify_rep_general(&q, 0, &quick()).unwrap();
        let b = verify_rep_general(&q, 0, &quick()).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }
}
