//! Run configuration: a config file (JSON object or `key = value` lines)
//! overridden by command-line flags and environment variables.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use pivotal_core::semantics::{StructureKind, DEFAULT_CLONE_CAP, DEFAULT_UNIVERSE_CAP};
use pivotal_core::AtomSet;
use serde_json::Value;

#[derive(Copy, Clone, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Values read from a config file. Paths are resolved against the file's directory.
#[derive(Clone, Debug, Default)]
pub struct ConfigFile {
    pub structure: Option<String>,
    pub atoms: Option<String>,
    pub universe_cap: Option<u64>,
    pub clone_cap: Option<usize>,
    pub enum_cap: Option<u64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub pivot: Option<PathBuf>,
    pub pertinence: Option<PathBuf>,
    pub mode: Option<String>,
    pub format: Option<Format>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<ConfigFile> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let pairs = if text.trim_start().starts_with('{') {
            json_pairs(&text)?
        } else {
            text_pairs(&text)?
        };
        ConfigFile::from_pairs(pairs, base).with_context(|| format!("in config {}", path.display()))
    }

    fn from_pairs(pairs: Vec<(String, String)>, base: &Path) -> Result<ConfigFile> {
        let mut c = ConfigFile::default();
        for (key, value) in pairs {
            let number = || value.parse::<u64>().with_context(|| format!("{key} must be a non-negative integer"));
            match key.replace('-', "_").as_str() {
                "structure" => c.structure = Some(value),
                "atoms" => c.atoms = Some(value),
                "universe_cap" => c.universe_cap = Some(number()?),
                "clone_cap" => c.clone_cap = Some(number()? as usize),
                "enum_cap" => c.enum_cap = Some(number()?),
                "samples" => c.samples = Some(number()? as usize),
                "seed" => c.seed = Some(number()?),
                "pivot" => c.pivot = Some(base.join(value)),
                "pertinence" => c.pertinence = Some(base.join(value)),
                "mode" => c.mode = Some(value),
                "format" => {
                    c.format = Some(match value.as_str() {
                        "text" => Format::Text,
                        "json" => Format::Json,
                        other => bail!("unknown format '{other}'"),
                    })
                }
                other => bail!("unknown config key '{other}'"),
            }
        }
        Ok(c)
    }
}

fn json_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let value: Value = serde_json::from_str(text).context("config is not valid JSON")?;
    let Value::Object(map) = value else {
        bail!("config must be a JSON object");
    };
    map.into_iter()
        .map(|(k, v)| {
            let s = match v {
                Value::String(s) => s,
                Value::Number(n) => n.to_string(),
                Value::Array(items) => items
                    .iter()
                    .map(|i| i.as_str().map(str::to_owned).unwrap_or_else(|| i.to_string()))
                    .collect::<Vec<_>>()
                    .join(","),
                other => bail!("unsupported value for {k}: {other}"),
            };
            Ok((k, s))
        })
        .collect()
}

fn text_pairs(text: &str) -> Result<Vec<(String, String)>> {
    text.lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .map(|(n, l)| match l.split_once('=') {
            Some((k, v)) => Ok((k.trim().to_owned(), v.trim().to_owned())),
            None => bail!("line {n}: expected `key = value`"),
        })
        .collect()
}

/// Fully resolved settings for one run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub kind: StructureKind,
    pub atoms: Option<AtomSet>,
    pub universe_cap: u64,
    pub clone_cap: usize,
    pub enum_cap: Option<u64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub pivot: Option<PathBuf>,
    pub pertinence: Option<PathBuf>,
    pub mode: Option<String>,
    pub format: Format,
}

/// Settings given on the command line or through the environment.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub structure: Option<String>,
    pub atoms: Option<String>,
    pub universe_cap: Option<u64>,
    pub clone_cap: Option<usize>,
    pub enum_cap: Option<u64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn resolve(file: ConfigFile, over: Overrides) -> Result<RunConfig> {
        let kind = match over.structure.or(file.structure) {
            Some(s) => s.parse::<StructureKind>()?,
            None => StructureKind::Classical,
        };
        let atoms = over
            .atoms
            .or(file.atoms)
            .map(|a| AtomSet::parse_list(&a))
            .transpose()?;
        let universe_cap = over.universe_cap.or(file.universe_cap).unwrap_or(DEFAULT_UNIVERSE_CAP);
        let clone_cap = over.clone_cap.or(file.clone_cap).unwrap_or(DEFAULT_CLONE_CAP);
        let enum_cap = over.enum_cap.or(file.enum_cap);
        if universe_cap == 0 || clone_cap == 0 || enum_cap == Some(0) {
            bail!("caps must be positive");
        }
        Ok(RunConfig {
            kind,
            atoms,
            universe_cap,
            clone_cap,
            enum_cap,
            samples: over.samples.or(file.samples),
            seed: over.seed.or(file.seed),
            pivot: file.pivot,
            pertinence: file.pertinence,
            mode: file.mode,
            format: over.format.or(file.format).unwrap_or(Format::Text),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_configs_agree() {
        let base = Path::new("/tmp/x");
        let a = ConfigFile::from_pairs(text_pairs("structure = four # comment\natoms = r,q,p\nseed=7\npivot = n.pivot").unwrap(), base).unwrap();
        let b = ConfigFile::from_pairs(
            json_pairs(r#"{"structure": "four", "atoms": ["r","q","p"], "seed": 7, "pivot": "n.pivot"}"#).unwrap(),
            base,
        )
        .unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
        assert_eq!(a.pivot.unwrap(), base.join("n.pivot"));
    }

    #[test]
    fn unknown_keys_and_zero_caps_are_rejected() {
        assert!(ConfigFile::from_pairs(vec![("colour".into(), "red".into())], Path::new(".")).is_err());
        let over = Overrides { clone_cap: Some(0), ..Overrides::default() };
        assert!(RunConfig::resolve(ConfigFile::default(), over).is_err());
    }

    #[test]
    fn command_line_overrides_the_file() {
        let file = ConfigFile { structure: Some("four".into()), seed: Some(1), ..ConfigFile::default() };
        let over = Overrides { structure: Some("j3".into()), ..Overrides::default() };
        let c = RunConfig::resolve(file, over).unwrap();
        assert_eq!(c.kind, StructureKind::J3);
        assert_eq!(c.seed, Some(1));
    }
}
