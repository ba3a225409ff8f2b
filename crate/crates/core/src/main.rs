use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use cellcall::adversary::{star_network, AdversaryKind};
use cellcall::harness::{
    emit_report, emit_sweep, load_scenario, parse_grid, run_experiment, sweep, Format,
    ScenarioConfig, Traffic,
};
use cellcall::{Algorithm, Network};

/// Online call admission control on hexagonal cellular networks: run
/// scenarios, replay adversaries, sweep parameters and check the accounting.
#[derive(Parser, Debug)]
#[command(version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct Output {
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Report format: csv or text
    #[arg(long, global = true, default_value = "text", value_parser = parse_format)]
    format: Format,

    /// Override the seed of random traffic
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a scenario file
    Run { scenario: PathBuf },
    /// Run a scenario file with the optimum and certificates forced on
    Verify { scenario: PathBuf },
    /// Play an adversary against an algorithm and score it against the optimum
    Duel {
        /// fig2, fig3 or random:<seed>:<length>
        #[arg(long)]
        adversary: AdversaryKind,
        /// greedy, caco, caco2 or partition:x:y
        #[arg(long)]
        alg: Algorithm,
        #[arg(long)]
        omega: u32,
    },
    /// Run a template scenario over a parameter grid
    Sweep {
        template: PathBuf,
        /// e.g. "alg=partition:1:1,partition:2:1;omega=21,42;adversary=fig2"
        #[arg(long)]
        grid: String,
    },
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: cellcall::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Returns whether every requested check passed.
fn run(cli: Cli) -> Result<bool> {
    let out = &cli.output;
    let seeded = |c: ScenarioConfig| match out.seed {
        Some(seed) => c.with_seed(seed),
        None => c,
    };
    let (text, ok) = match cli.command {
        Command::Run { scenario } => single(seeded(load_scenario(&scenario)?), out.format)?,
        Command::Verify { scenario } => {
            let config = ScenarioConfig {
                verify_certificate: true,
                compute_opt: true,
                ..load_scenario(&scenario)?
            };
            single(seeded(config), out.format)?
        }
        Command::Duel {
            adversary,
            alg,
            omega,
        } => {
            let cells = match adversary {
                AdversaryKind::Fig2 | AdversaryKind::Fig3 => star_network(),
                AdversaryKind::Random { .. } => Network::flower(),
            };
            let config = ScenarioConfig {
                name: format!("duel {adversary} vs {alg}"),
                omega,
                cells: cells.cells().to_vec(),
                traffic: Traffic::Adversary(adversary),
                algorithm: alg,
                verify_certificate: true,
                compute_opt: true,
                opt_limits: None,
            };
            single(seeded(config), out.format)?
        }
        Command::Sweep { template, grid } => {
            let template = seeded(load_scenario(&template)?);
            let outcome = sweep(&template, &parse_grid(&grid)?);
            (emit_sweep(&outcome, out.format), !outcome.any_failed())
        }
    };
    write_output(out.out.as_deref(), &text)?;
    Ok(ok)
}

fn single(config: ScenarioConfig, format: Format) -> Result<(String, bool)> {
    let report = run_experiment(&config)?;
    Ok((emit_report(&report, format), report.passed()))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
