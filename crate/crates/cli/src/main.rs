use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use gboundary::check::{Strategy, Verdict};
use gboundary::run::{self, RunReport};
use gboundary::scenario::Scenario;
use gboundary::{schreier_basis, AtomRecord};

#[derive(Parser)]
#[command(name = "gboundary", version, about = "Scenario-driven checks for induced boundary actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check of a scenario and emit a JSON report.
    Run {
        /// Scenario file, or the name of a bundled scenario.
        scenario: String,
        #[arg(long, env = "BOUNDARY_WORKERS")]
        workers: Option<usize>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay one certificate of a report from its serialized data.
    Replay {
        report: PathBuf,
        #[arg(long)]
        check: String,
        #[arg(long)]
        cert: String,
    },
    /// Print the coset table and Schreier basis of the scenario's subgroup.
    EnumerateCosets { scenario: String },
    /// Dump the coset table and the action of the generators on sampled points.
    Induce {
        scenario: String,
        #[arg(long)]
        space: Option<String>,
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
    /// Contract one measure (a JSON list of {point, weight}).
    Contract {
        scenario: String,
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        space: Option<String>,
        #[arg(long)]
        strategy: Option<Strategy>,
        #[arg(long)]
        target: Option<usize>,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// List the bundled scenarios.
    ListScenarios,
}

/// Errors in the input (bad files, bad scenarios, bad arguments) exit with 2.
struct UsageError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.into())
    }
}

fn load_scenario(arg: &str) -> Result<Scenario> {
    let text = match run::bundled_scenario(arg) {
        Some(text) if !Path::new(arg).exists() => text.to_string(),
        _ => fs::read_to_string(arg).with_context(|| format!("cannot read scenario {arg}"))?,
    };
    Scenario::from_json(&text).with_context(|| format!("scenario {arg}"))
}

fn exit_for(v: Verdict) -> ExitCode {
    match v {
        Verdict::Fail => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    }
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_json(v: &impl serde::Serialize) -> Result<()> {
    emit(&serde_json::to_string_pretty(v)?)
}

fn summary_line(report: &RunReport) -> String {
    let s = &report.summary;
    format!("{}: {} PASS, {} FAIL, {} INCONCLUSIVE", report.scenario.name, s.pass, s.fail, s.inconclusive)
}

fn execute(cmd: Command) -> Result<ExitCode, UsageError> {
    match cmd {
        Command::Run { scenario, workers, out } => {
            let s = load_scenario(&scenario)?;
            if workers == Some(0) {
                return Err(anyhow::anyhow!("--workers must be positive").into());
            }
            let report = run::run_scenario(&s, workers)?;
            let json = serde_json::to_string_pretty(&report)?;
            let log = |line: String| if out.is_some() { println!("{line}") } else { eprintln!("{line}") };
            for c in &report.checks {
                let flag = if c.report.verdict == Verdict::Inconclusive { "  (flagged)" } else { "" };
                log(format!("{:<13} {:<24} {:>7} ms{flag}", c.report.verdict.to_string(), c.id, c.wall_clock_ms));
            }
            log(summary_line(&report));
            match out {
                Some(path) => fs::write(&path, json).with_context(|| format!("cannot write {}", path.display()))?,
                None => emit(&json)?,
            }
            Ok(exit_for(report.summary.verdict()))
        }
        Command::Replay { report, check, cert } => {
            let text = fs::read_to_string(&report).with_context(|| format!("cannot read report {}", report.display()))?;
            let parsed: RunReport = serde_json::from_str(&text).with_context(|| format!("report {}", report.display()))?;
            let verdict = run::replay_certificate(&parsed, &check, &cert)?;
            print_json(&verdict)?;
            eprintln!("{} {check}/{cert}", verdict.verdict);
            Ok(exit_for(verdict.verdict))
        }
        Command::EnumerateCosets { scenario } => {
            let s = load_scenario(&scenario)?;
            let ws = s.build()?;
            let table = ws.table.ok_or_else(|| anyhow::anyhow!("the scenario declares no coset space"))?;
            let basis = if ws.group.is_free() { Some(schreier_basis(&table)?.generators().to_vec()) } else { None };
            print_json(&serde_json::json!({"coset_table": table.as_ref(), "schreier_basis": basis}))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Induce { scenario, space, samples } => {
            let s = load_scenario(&scenario)?;
            print_json(&run::induce_sample(&s, space.as_deref(), samples)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Contract { scenario, measure, space, strategy, target, steps } => {
            let s = load_scenario(&scenario)?;
            let text = fs::read_to_string(&measure).with_context(|| format!("cannot read measure {}", measure.display()))?;
            let records: Vec<AtomRecord> = serde_json::from_str(&text).with_context(|| format!("measure {}", measure.display()))?;
            let report = run::contract_in_scenario(&s, space.as_deref(), strategy, target, steps, &records)?;
            print_json(&report)?;
            Ok(exit_for(report.verdict))
        }
        Command::ListScenarios => {
            for name in run::bundled_names() {
                let s = Scenario::from_json(run::bundled_scenario(name).expect("listed")).expect("bundled scenarios parse");
                println!("{name:<14} {}", s.description.unwrap_or_default());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => code,
        Err(UsageError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
