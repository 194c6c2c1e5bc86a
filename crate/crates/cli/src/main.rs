//! `lsi`: render, validate and inspect politeness-driven dialogues.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use lsi_core::dialogue::{has_errors, DEFAULT_SEED};
use lsi_core::strategy::DEFAULT_SUBSTITUTION_PROBABILITY;
use lsi_core::{
    bundled, compile, run_dialogue, Lexicon, Palette, RunConfig, ScriptDoc, SocialDoc, StrategyId,
    REGISTRY,
};

#[derive(Parser)]
#[command(name = "lsi", version, about = "Politeness-driven dialogue realisation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Realise a script as dialogue lines.
    Render(RenderArgs),
    /// Check a script and social structure without rendering.
    Validate(Inputs),
    /// List the strategy registry.
    Strategies,
}

#[derive(Args)]
struct Inputs {
    /// Script file (defaults to the bundled Casablanca excerpt).
    #[arg(long)]
    script: Option<PathBuf>,
    /// Social structure file (defaults to the bundled first Casablanca run).
    #[arg(long)]
    social: Option<PathBuf>,
    /// Lexicon file (defaults to the bundled lexicon).
    #[arg(long)]
    lexicon: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Affect palette file (defaults to the bundled palette).
    #[arg(long)]
    palette: Option<PathBuf>,
    #[arg(long, env = "LSI_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Emit one JSON record per line with prosody annotations.
    #[arg(long)]
    prosody: bool,
    /// Emit one JSON record per line with per-act selection traces.
    #[arg(long)]
    trace: bool,
    #[arg(long)]
    no_contractions: bool,
    /// Force a strategy for an act: TURN.ACT=STRATEGY, both numbers 1-based.
    #[arg(long = "force", value_name = "TURN.ACT=STRATEGY", value_parser = parse_force)]
    force: Vec<((usize, usize), StrategyId)>,
    /// Probability of using an autonomy strategy in the off-record band.
    #[arg(long, default_value_t = DEFAULT_SUBSTITUTION_PROBABILITY)]
    substitution: f64,
}

fn parse_force(s: &str) -> Result<((usize, usize), StrategyId), String> {
    let (pos, id) = s
        .split_once('=')
        .ok_or_else(|| format!("expected TURN.ACT=STRATEGY, got `{s}`"))?;
    let (turn, act) = pos
        .split_once('.')
        .ok_or_else(|| format!("expected TURN.ACT before `=`, got `{pos}`"))?;
    let turn = turn.parse().map_err(|_| format!("bad turn number `{turn}`"))?;
    let act = act.parse().map_err(|_| format!("bad act number `{act}`"))?;
    let id = id.parse::<StrategyId>().map_err(|e| e.to_string())?;
    Ok(((turn, act), id))
}

fn read_or(path: Option<&Path>, fallback: &str) -> Result<String> {
    match path {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        None => Ok(fallback.to_string()),
    }
}

fn load(inputs: &Inputs) -> Result<(ScriptDoc, SocialDoc, Lexicon)> {
    let script = ScriptDoc::from_json(&read_or(
        inputs.script.as_deref(),
        bundled::CASABLANCA_SCRIPT,
    )?)?;
    let social = SocialDoc::from_json(&read_or(
        inputs.social.as_deref(),
        bundled::CASABLANCA_RUN1_SOCIAL,
    )?)?;
    let lexicon = Lexicon::from_json(&read_or(inputs.lexicon.as_deref(), bundled::LEXICON)?)?;
    Ok((script, social, lexicon))
}

fn render(args: &RenderArgs) -> Result<ExitCode> {
    let (script, social, lexicon) = load(&args.inputs)?;
    let (dialogue, diagnostics) = compile(&script, &social, &lexicon);
    for d in &diagnostics {
        eprintln!("{d}");
    }
    let Some(dialogue) = dialogue else {
        return Ok(ExitCode::FAILURE);
    };
    let palette = if args.prosody {
        Some(Palette::from_json(&read_or(args.palette.as_deref(), bundled::PALETTE)?)?)
    } else {
        None
    };
    let config = RunConfig {
        seed: args.seed,
        substitution_probability: args.substitution,
        contractions: !args.no_contractions,
        forced: args.force.iter().copied().collect::<BTreeMap<_, _>>(),
    };
    let lines = run_dialogue(&dialogue, &lexicon, palette.as_ref(), &config)?;
    let mut out = io::stdout().lock();
    for line in &lines {
        if args.trace || args.prosody {
            writeln!(out, "{}", line.to_json(args.trace, args.prosody))?;
        } else {
            writeln!(out, "{}", line.to_text())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn validate(inputs: &Inputs) -> Result<ExitCode> {
    let (script, social, lexicon) = load(inputs)?;
    let diagnostics = compile(&script, &social, &lexicon).1;
    for d in &diagnostics {
        println!("{d}");
    }
    if has_errors(&diagnostics) {
        Ok(ExitCode::FAILURE)
    } else {
        if diagnostics.is_empty() {
            println!("ok");
        }
        Ok(ExitCode::SUCCESS)
    }
}

fn strategies() -> Result<ExitCode> {
    let mut out = io::stdout().lock();
    for info in REGISTRY.iter() {
        let acts: Vec<&str> = info.applies_to.iter().map(|a| a.as_str()).collect();
        writeln!(
            out,
            "{:<36} {:<10} {:<56} {}",
            info.name,
            info.band.as_str(),
            acts.join(","),
            info.summary
        )?;
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Render(args) => render(args),
        Command::Validate(inputs) => validate(inputs),
        Command::Strategies => strategies(),
    };
    match result {
        Ok(code) => code,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.downcast_ref::<io::Error>()
        .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
}
