//! Subcommand implementations. Each returns the process exit code.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use pivotal_core::characterize::{run as run_verification, Proposition, VerifyOptions};
use pivotal_core::choice::Pivot;
use pivotal_core::consequence::{entails_basic, Mode, PertinenceRelation, PivotalRelation};
use pivotal_core::formula::{parse as parse_formula, parse_file, parse_list};
use pivotal_core::semantics::{self, FormulaClone, Quotient, Status, Structure};
use pivotal_core::{AtomSet, Formula};
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::GammaArgs;

fn emit(config: &RunConfig, text: &str, value: Value) -> Result<()> {
    match config.format {
        Format::Text => print!("{text}"),
        Format::Json => println!("{}", serde_json::to_string_pretty(&value)?),
    }
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_gamma(args: &GammaArgs) -> Result<Vec<Formula>> {
    match (&args.gamma_file, &args.gamma) {
        (Some(path), _) => Ok(parse_file(&read(path)?).with_context(|| format!("in {}", path.display()))?),
        (None, Some(text)) => Ok(parse_list(text).context("in --gamma")?),
        (None, None) => Ok(Vec::new()),
    }
}

fn render_list(gamma: &[Formula]) -> Vec<String> {
    gamma.iter().map(|f| f.to_string()).collect()
}

/// The structure of the run. Without configured atoms, the atoms of
/// `formulas` are used in order of first appearance.
fn structure(config: &RunConfig, formulas: &[&Formula]) -> Result<Structure> {
    let atoms = match &config.atoms {
        Some(atoms) => atoms.clone(),
        None => {
            let mut names: Vec<&str> = Vec::new();
            for f in formulas {
                for a in f.atoms() {
                    if !names.contains(&a) {
                        names.push(a);
                    }
                }
            }
            if names.is_empty() {
                bail!("no atoms given; pass --atoms");
            }
            AtomSet::new(names)?
        }
    };
    Ok(Structure::with_cap(config.kind, atoms, config.universe_cap)?)
}

fn quotient(config: &RunConfig, s: Structure) -> Result<Quotient> {
    Ok(Quotient::new(s, config.clone_cap)?)
}

fn load_pivot(s: &Structure, path: &Path) -> Result<Pivot> {
    Ok(Pivot::parse(s, &read(path)?).with_context(|| format!("in pivot {}", path.display()))?)
}

pub fn parse(config: &RunConfig, formulas: &[String], file: Option<&Path>) -> Result<ExitCode> {
    let mut parsed = Vec::new();
    for text in formulas {
        parsed.push((text.clone(), parse_formula(text).with_context(|| format!("in '{text}'"))?));
    }
    if let Some(path) = file {
        for f in parse_file(&read(path)?).with_context(|| format!("in {}", path.display()))? {
            parsed.push((f.to_string(), f));
        }
    }
    let mut text = String::new();
    let mut items = Vec::new();
    for (input, f) in &parsed {
        text.push_str(&format!("{f}\n"));
        items.push(json!({"input": input, "formula": f.to_string(), "atoms": f.atoms(), "size": f.size()}));
    }
    emit(config, &text, Value::Array(items))?;
    Ok(ExitCode::SUCCESS)
}

pub fn models(config: &RunConfig, gamma: &GammaArgs) -> Result<ExitCode> {
    let gamma = read_gamma(gamma)?;
    let s = structure(config, &gamma.iter().collect::<Vec<_>>())?;
    let m = s.models(&gamma)?;
    let listing: Vec<String> = m.iter().map(|v| s.format_valuation(v)).collect();
    let mut text = listing.iter().map(|l| format!("{l}\n")).collect::<String>();
    if listing.is_empty() {
        text.push_str("# no models\n");
    }
    emit(
        config,
        &text,
        json!({"structure": s.describe(), "gamma": render_list(&gamma), "count": listing.len(), "models": listing}),
    )?;
    Ok(ExitCode::SUCCESS)
}

pub struct EntailArgs {
    pub gamma: GammaArgs,
    pub alpha: Option<String>,
    pub mode: Option<String>,
    pub pivot: Option<PathBuf>,
    pub pertinence: Option<PathBuf>,
    pub batch: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum QueryMode {
    Basic,
    Pivotal(Mode),
    Xlogic,
}

impl QueryMode {
    fn parse(text: &str) -> Result<QueryMode> {
        Ok(match text {
            "basic" => QueryMode::Basic,
            "xlogic" | "pertinence" => QueryMode::Xlogic,
            other => QueryMode::Pivotal(other.parse::<Mode>()?),
        })
    }

    fn name(self) -> String {
        match self {
            QueryMode::Basic => "basic".into(),
            QueryMode::Pivotal(Mode::Plain) => "pivotal".into(),
            QueryMode::Pivotal(Mode::Discriminative) => "discriminative".into(),
            QueryMode::Xlogic => "xlogic".into(),
        }
    }
}

/// A consequence relation ready to answer queries.
enum Relation {
    Basic,
    Pivotal(PivotalRelation),
    Pertinence(PertinenceRelation),
}

impl Relation {
    fn entails(&self, s: &Structure, gamma: &[Formula], alpha: &Formula) -> Result<bool> {
        Ok(match self {
            Relation::Basic => entails_basic(s, gamma, alpha)?,
            Relation::Pivotal(rel) => rel.entails(s, gamma, alpha)?,
            Relation::Pertinence(rel) => rel.entails(s, gamma, alpha)?,
        })
    }
}

fn choose_mode(explicit: Option<&str>, config: &RunConfig, has_pivot: bool) -> Result<QueryMode> {
    match explicit.or(config.mode.as_deref()) {
        Some(m) => QueryMode::parse(m),
        None if has_pivot => Ok(QueryMode::Pivotal(Mode::Plain)),
        None => Ok(QueryMode::Basic),
    }
}

fn build_relation(
    s: &Structure,
    mode: QueryMode,
    pivot: Option<&Path>,
    pertinence: Option<&Path>,
    config: &RunConfig,
    notes: &mut Vec<String>,
) -> Result<Relation> {
    Ok(match mode {
        QueryMode::Basic => Relation::Basic,
        QueryMode::Pivotal(m) => {
            let path = pivot.ok_or_else(|| anyhow!("mode {} needs --pivot", mode.name()))?;
            Relation::Pivotal(PivotalRelation::new(load_pivot(s, path)?, m))
        }
        QueryMode::Xlogic => {
            let path = pertinence.ok_or_else(|| anyhow!("mode xlogic needs --pertinence"))?;
            let e = parse_file(&read(path)?).with_context(|| format!("in {}", path.display()))?;
            // Closedness is checked on formula classes when the clone fits the cap.
            match Quotient::new(s.clone(), config.clone_cap) {
                Ok(q) => {
                    let classes = q.classify_all(&e)?;
                    let closed = PertinenceRelation::from_classes(&q, &classes).closed() == Some(true);
                    notes.push(format!("pertinence set is {}closed", if closed { "" } else { "not " }));
                }
                Err(e) => notes.push(format!("closedness not checked: {e}")),
            }
            Relation::Pertinence(PertinenceRelation::from_formulas(s, &e)?)
        }
    })
}

pub fn entail(config: &RunConfig, args: EntailArgs) -> Result<ExitCode> {
    let pivot = args.pivot.or_else(|| config.pivot.clone());
    let pertinence = args.pertinence.or_else(|| config.pertinence.clone());
    let mode = choose_mode(args.mode.as_deref(), config, pivot.is_some())?;
    let mut notes = Vec::new();
    if let Some(batch) = &args.batch {
        return entail_batch(config, batch, mode, pivot.as_deref(), pertinence.as_deref());
    }
    let gamma = read_gamma(&args.gamma)?;
    let alpha_text = args.alpha.ok_or_else(|| anyhow!("--alpha is required"))?;
    let alpha = parse_formula(&alpha_text).context("in --alpha")?;
    let mut mentioned: Vec<&Formula> = gamma.iter().collect();
    mentioned.push(&alpha);
    let s = structure(config, &mentioned)?;
    let rel = build_relation(&s, mode, pivot.as_deref(), pertinence.as_deref(), config, &mut notes)?;
    let verdict = rel.entails(&s, &gamma, &alpha)?;
    let mut text = format!("{verdict}\n");
    for n in &notes {
        text.push_str(&format!("# {n}\n"));
    }
    emit(
        config,
        &text,
        json!({
            "structure": s.describe(),
            "mode": mode.name(),
            "gamma": render_list(&gamma),
            "alpha": alpha.to_string(),
            "verdict": verdict,
            "notes": notes,
        }),
    )?;
    Ok(if verdict { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn entail_batch(
    config: &RunConfig,
    batch: &Path,
    mode: QueryMode,
    pivot: Option<&Path>,
    pertinence: Option<&Path>,
) -> Result<ExitCode> {
    let base = batch.parent().unwrap_or(Path::new("."));
    let s = structure(config, &[]).context("batch queries need --atoms or a config")?;
    let mut notes = Vec::new();
    let rel = build_relation(&s, mode, pivot, pertinence, config, &mut notes)?;
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut all_ok = true;
    for (n, line) in read(batch)?.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split("::").map(str::trim).collect();
        let (gamma_file, alpha_text, expected) = match fields[..] {
            [g, a] => (g, a, None),
            [g, a, e] => (g, a, Some(e.parse::<bool>().map_err(|_| anyhow!("line {}: expected true or false", n + 1))?)),
            _ => bail!("line {}: expected `gamma_file :: alpha`", n + 1),
        };
        let gamma = parse_file(&read(&base.join(gamma_file))?).with_context(|| format!("in {gamma_file}"))?;
        let alpha = parse_formula(alpha_text).with_context(|| format!("line {}", n + 1))?;
        let verdict = rel.entails(&s, &gamma, &alpha)?;
        let ok = verdict == expected.unwrap_or(true);
        all_ok &= ok;
        let marker = match expected {
            Some(e) if e != verdict => format!("  MISMATCH (expected {e})"),
            _ => String::new(),
        };
        text.push_str(&format!("{{{}}} :: {alpha} => {verdict}{marker}\n", render_list(&gamma).join(", ")));
        rows.push(json!({
            "gamma_file": gamma_file,
            "gamma": render_list(&gamma),
            "alpha": alpha.to_string(),
            "verdict": verdict,
            "expected": expected,
        }));
    }
    emit(
        config,
        &text,
        json!({"structure": s.describe(), "mode": mode.name(), "queries": rows, "all_ok": all_ok, "notes": notes}),
    )?;
    Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

pub fn theory(config: &RunConfig, gamma: &GammaArgs, mode: Option<String>, pivot: Option<PathBuf>) -> Result<ExitCode> {
    let gamma = read_gamma(gamma)?;
    let pivot = pivot.or_else(|| config.pivot.clone());
    let mode = choose_mode(mode.as_deref(), config, pivot.is_some())?;
    let s = structure(config, &gamma.iter().collect::<Vec<_>>())?;
    let q = quotient(config, s)?;
    let gm = q.structure.models(&gamma)?;
    let classes = match mode {
        QueryMode::Basic => q.clone.theory(&gm),
        QueryMode::Pivotal(m) => {
            let path = pivot.ok_or_else(|| anyhow!("mode {} needs --pivot", mode.name()))?;
            PivotalRelation::new(load_pivot(&q.structure, &path)?, m).consequence_set(&q, &gm)
        }
        QueryMode::Xlogic => bail!("theory supports basic, pivotal and discriminative modes"),
    };
    let witnesses: Vec<String> = classes.iter().map(|c| q.clone.witness(c).to_string()).collect();
    let mut text = format!("# {} of {} formula classes\n", witnesses.len(), q.clone.len());
    for w in &witnesses {
        text.push_str(&format!("{w}\n"));
    }
    emit(
        config,
        &text,
        json!({
            "structure": q.structure.describe(),
            "mode": mode.name(),
            "gamma": render_list(&gamma),
            "count": witnesses.len(),
            "total_classes": q.clone.len(),
            "classes": witnesses,
        }),
    )?;
    Ok(ExitCode::SUCCESS)
}

pub fn check_assumptions(config: &RunConfig) -> Result<ExitCode> {
    let s = structure(config, &[])?;
    let clone = FormulaClone::compute(&s, config.clone_cap);
    let report = check_assumptions_report(&s, &clone)?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for (a, status, detail, rechecked) in &report {
        text.push_str(&format!("{a} {status}"));
        if let Some(d) = detail {
            text.push_str(&format!(": {d}"));
        }
        if let Some(r) = rechecked {
            text.push_str(if *r { " [re-verified]" } else { " [RE-CHECK FAILED]" });
        }
        text.push('\n');
        rows.push(json!({"assumption": a, "status": status, "detail": detail, "rechecked": rechecked}));
    }
    emit(
        config,
        &text,
        json!({
            "structure": s.describe(),
            "clone_complete": clone.is_complete(),
            "classes_checked": clone.len(),
            "assumptions": rows,
        }),
    )?;
    Ok(ExitCode::SUCCESS)
}

type AssumptionRow = (String, &'static str, Option<String>, Option<bool>);

fn check_assumptions_report(s: &Structure, clone: &FormulaClone) -> Result<Vec<AssumptionRow>> {
    let report = semantics::check_assumptions(s, clone);
    report
        .entries
        .iter()
        .map(|(a, status)| {
            Ok(match status {
                Status::Holds => (a.to_string(), "holds", None, None),
                Status::Fails(cx) => (a.to_string(), "fails", Some(cx.to_string()), Some(cx.recheck(s)?)),
                Status::Undecided(why) => (a.to_string(), "undecided", Some(why.clone()), None),
            })
        })
        .collect()
}

pub fn clone_info(config: &RunConfig, list: bool) -> Result<ExitCode> {
    let s = structure(config, &[])?;
    let clone = FormulaClone::compute(&s, config.clone_cap);
    let mut text = format!(
        "structure: {}\nvaluations: {}\nformula classes: {}{}\n",
        s.describe(),
        s.universe_size(),
        clone.len(),
        if clone.is_complete() { "" } else { " (incomplete: clone cap reached)" }
    );
    let mut value = json!({
        "structure": s.describe(),
        "valuations": s.universe_size(),
        "classes": clone.len(),
        "complete": clone.is_complete(),
    });
    if clone.is_complete() {
        let q = Quotient::from_parts(s.clone(), clone.clone())?;
        let coherent = (0..q.family.len()).filter(|&d| q.is_coherent_index(d)).count();
        text.push_str(&format!("definable sets: {}\ncoherent definable sets: {coherent}\n", q.family.len()));
        value["definable_sets"] = json!(q.family.len());
        value["coherent_definable_sets"] = json!(coherent);
    }
    if list {
        let mut rows = Vec::new();
        for i in 0..clone.len() {
            let w = clone.witness(i).to_string();
            let m = clone.models(i).to_string();
            text.push_str(&format!("#{i} {w}  Mod={m}\n"));
            rows.push(json!({"index": i, "witness": w, "models": clone.models(i)}));
        }
        value["list"] = Value::Array(rows);
    }
    emit(config, &text, value)?;
    Ok(ExitCode::SUCCESS)
}

pub fn verify(
    config: &RunConfig,
    proposition: &str,
    part: Option<usize>,
    out: Option<&Path>,
    no_timing: bool,
    max_universe: usize,
) -> Result<ExitCode> {
    let proposition: Proposition = proposition.parse()?;
    let s = structure(config, &[])?;
    let q = quotient(config, s)?;
    let defaults = VerifyOptions::default();
    let opts = VerifyOptions {
        samples: config.samples.unwrap_or(defaults.samples),
        seed: config.seed.unwrap_or(defaults.seed),
        enum_cap: config.enum_cap.unwrap_or(defaults.enum_cap),
        max_universe,
        timing: !no_timing,
    };
    let run = run_verification(proposition, &q, part, &opts).map_err(|e| anyhow!("refused: {e}"))?;
    let json = serde_json::to_string_pretty(&run)?;
    if let Some(path) = out {
        fs::write(path, format!("{json}\n")).with_context(|| format!("writing {}", path.display()))?;
    }
    match config.format {
        Format::Json => println!("{json}"),
        Format::Text => {
            for r in &run.reports {
                println!("{}", if r.passed() { "PASS" } else { "FAIL" }.to_owned() + " " + &r.summary());
                for f in r.failures.iter().take(10) {
                    println!("  {}: {}", f.kind, f.detail);
                }
            }
            for (p, why) in &run.skipped {
                println!("SKIP {proposition} part {p}: {why}");
            }
        }
    }
    Ok(if run.failures() == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
