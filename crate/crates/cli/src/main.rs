//! `pivotal`: query and verification front end.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{ConfigFile, Format, Overrides, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "pivotal", version, about = "Pivotal consequence relations over classical, FOUR and J3 semantics")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Config file: a JSON object or `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Semantic structure: classical, four or j3.
    #[arg(long, global = true)]
    structure: Option<String>,
    /// Comma-separated atoms; the first is the most significant in valuation order.
    #[arg(long, global = true)]
    atoms: Option<String>,
    #[arg(long, global = true, env = "PIVOTAL_UNIVERSE_CAP")]
    universe_cap: Option<u64>,
    #[arg(long, global = true, env = "PIVOTAL_CLONE_CAP")]
    clone_cap: Option<usize>,
    /// Largest candidate space enumerated in full by `verify`.
    #[arg(long, global = true, env = "PIVOTAL_ENUM_CAP")]
    enum_cap: Option<u64>,
    /// Random candidates drawn by `verify` when enumeration is infeasible.
    #[arg(long, global = true, env = "PIVOTAL_SAMPLES")]
    samples: Option<usize>,
    #[arg(long, global = true, env = "PIVOTAL_SEED")]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug, Clone)]
pub struct GammaArgs {
    /// Comma-separated premises.
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    /// File with one premise per line; takes precedence over --gamma.
    #[arg(long)]
    gamma_file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse formulas and print them in canonical form.
    Parse {
        formulas: Vec<String>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// List the models of a premise set.
    Models {
        #[command(flatten)]
        gamma: GammaArgs,
    },
    /// Decide whether the premises entail a formula.
    Entail {
        #[command(flatten)]
        gamma: GammaArgs,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        /// basic, pivotal, discriminative or xlogic.
        #[arg(long)]
        mode: Option<String>,
        /// Pivot file: valuation literals or `@ formula` lines.
        #[arg(long)]
        pivot: Option<PathBuf>,
        /// Pertinence set file for xlogic mode: one formula per line.
        #[arg(long)]
        pertinence: Option<PathBuf>,
        /// Batch file of `gamma_file :: alpha` lines, optionally `:: true|false`.
        #[arg(long)]
        batch: Option<PathBuf>,
    },
    /// List the formula classes concluded from the premises.
    Theory {
        #[command(flatten)]
        gamma: GammaArgs,
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        pivot: Option<PathBuf>,
    },
    /// Check the structural assumptions (A0) to (A4).
    CheckAssumptions,
    /// Summarize the formula classes and definable sets.
    CloneInfo {
        /// List every class with a witness and its models.
        #[arg(long)]
        list: bool,
    },
    /// Run a verification: pivot-rep, rep-dp, rep-general, rep-disc-dp, rep-disc, xlogic or properties.
    Verify {
        proposition: String,
        #[arg(long)]
        part: Option<usize>,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report runtime as 0 so identical runs give identical reports.
        #[arg(long)]
        no_timing: bool,
        /// Largest abstract universe for pivot-rep part 0 (at most 3).
        #[arg(long, default_value_t = 2)]
        max_universe: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let g = cli.global;
    let file = match &g.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let overrides = Overrides {
        structure: g.structure,
        atoms: g.atoms,
        universe_cap: g.universe_cap,
        clone_cap: g.clone_cap,
        enum_cap: g.enum_cap,
        samples: g.samples,
        seed: g.seed,
        format: g.format,
    };
    let config = RunConfig::resolve(file, overrides)?;
    match cli.command {
        Command::Parse { formulas, file } => commands::parse(&config, &formulas, file.as_deref()),
        Command::Models { gamma } => commands::models(&config, &gamma),
        Command::Entail { gamma, alpha, mode, pivot, pertinence, batch } => commands::entail(
            &config,
            commands::EntailArgs { gamma, alpha, mode, pivot, pertinence, batch },
        ),
        Command::Theory { gamma, mode, pivot } => commands::theory(&config, &gamma, mode, pivot),
        Command::CheckAssumptions => commands::check_assumptions(&config),
        Command::CloneInfo { list } => commands::clone_info(&config, list),
        Command::Verify { proposition, part, out, no_timing, max_universe } => {
            commands::verify(&config, &proposition, part, out.as_deref(), no_timing, max_universe)
        }
    }
}
