//! `dynalg` command line: simulate configs, classify integrability, count
//! degrees of freedom, and reproduce the built-in figure presets.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dynalg::error::Result;
use dynalg::experiment::{classify_line, execute, plan_invocation, ExperimentConfig};

#[derive(Parser)]
#[command(
    name = "dynalg",
    version,
    about = "Coherent-state quantumness, degree-of-freedom counting, and integrability classification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a config: evolve, classify, count IDF, write CSV/SVG outputs.
    Simulate {
        /// Flat JSON experiment config.
        config: PathBuf,
        /// Override a config field after preset expansion (repeatable).
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Replicate the run(s) over comma-separated μ values.
        #[arg(long, value_delimiter = ',', value_name = "MU,...")]
        sweep: Vec<f64>,
    },
    /// Print the integrability verdict for each run of a config.
    Classify {
        config: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Print the independent-degree-of-freedom count for each run.
    Idf {
        config: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Re-run a named figure preset (fig1, fig2 or fig3) end to end.
    Reproduce {
        figure: String,
        /// Output directory for CSV and SVG files.
        #[arg(long, default_value = ".")]
        outdir: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { config, set, sweep } => {
            let cfg = ExperimentConfig::from_file(&config)?;
            let plans = plan_invocation(&cfg, &set, &sweep)?;
            let out = execute(&plans)?;
            for s in &out.summaries {
                println!("{}", s.line());
            }
            if let Some(svg) = &out.svg {
                println!("svg={}", svg.display());
            }
        }
        Command::Classify { config, set } => {
            let cfg = ExperimentConfig::from_file(&config)?;
            let plans = plan_invocation(&cfg, &set, &[])?;
            let multi = plans.len() > 1;
            for plan in &plans {
                let verdict = plan.resolve()?.classify()?;
                if multi {
                    println!("run={} {}", plan.label, classify_line(&verdict));
                } else {
                    println!("{}", classify_line(&verdict));
                }
            }
        }
        Command::Idf { config, set } => {
            let cfg = ExperimentConfig::from_file(&config)?;
            let plans = plan_invocation(&cfg, &set, &[])?;
            let multi = plans.len() > 1;
            for plan in &plans {
                let count = plan.resolve()?.idf()?;
                if multi {
                    println!("run={} idf={count}", plan.label);
                } else {
                    println!("{count}");
                }
            }
        }
        Command::Reproduce {
            figure,
            outdir,
            set,
        } => {
            let cfg = ExperimentConfig {
                experiment: Some(figure.clone()),
                outdir: Some(outdir.display().to_string()),
                svg: Some(outdir.join(format!("{figure}.svg")).display().to_string()),
                ..Default::default()
            };
            let plans = plan_invocation(&cfg, &set, &[])?;
            let out = execute(&plans)?;
            for s in &out.summaries {
                println!("{}", s.line());
            }
            if let Some(svg) = &out.svg {
                println!("svg={}", svg.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
