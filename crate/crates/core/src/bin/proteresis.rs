//! Command-line front end for the reproducible experiments.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use proteretic::harness::{
    self, exit, ExperimentConfig, ExperimentOutput, SignalKind, VerifyOptions,
};
use proteretic::harness::config::VerifyConfig;
use proteretic::network::EvalOrder;
use proteretic::Error;

#[derive(Parser)]
#[command(name = "proteresis", version, about = "Proteretic relay device experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment configuration file.
    #[arg(long, value_name = "FILE")]
    config: PathBuf,
    /// Write the CSV here instead of output.csv.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Transfer-function orbit under a triangle input.
    Transfer(Common),
    /// M-level device on a smooth random input.
    Dodecanary {
        #[command(flatten)]
        common: Common,
        /// Override the smooth_random seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Lead against rate over ramps through every band.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated ramp rates, overriding signal.rates.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        rates: Option<Vec<f64>>,
    },
    /// Clean against noisy trapezoid pulses.
    Noise {
        #[command(flatten)]
        common: Common,
        /// Override signal.noise_seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated pulse rates, overriding signal.rates.
        #[arg(long, value_delimiter = ',')]
        rates: Option<Vec<f64>>,
    },
    /// Equivalence campaign: composed cell vs reference machine vs block network.
    Verify {
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Per-trial CSV, overriding output.csv.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Debug: evaluate relay B before relay A.
        #[arg(long)]
        reverse_order: bool,
        /// Debug: use band-hopping i.i.d. signals instead of well-sampled ones.
        #[arg(long)]
        coarse: bool,
    },
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load(common: &Common) -> Result<ExperimentConfig, Error> {
    let mut config = ExperimentConfig::parse(&read(&common.config)?)?;
    if let Some(out) = &common.out {
        config.output.csv = Some(out.clone());
    }
    config.validate()?;
    Ok(config)
}

fn finish(config: &ExperimentConfig, output: &ExperimentOutput) -> Result<i32, Error> {
    for path in harness::write_outputs(config, output)? {
        eprintln!("wrote {}", path.display());
    }
    print!("{}", output.report);
    println!("{}", harness::summary_line(&output.report));
    Ok(if output.report.passed() {
        exit::SUCCESS
    } else {
        exit::CHECK_FAILED
    })
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Transfer(common) => {
            let config = load(&common)?;
            finish(&config, &harness::run_transfer(&config)?)
        }
        Command::Dodecanary { common, seed } => {
            let mut config = load(&common)?;
            if let (Some(s), SignalKind::SmoothRandom { seed, .. }) = (seed, &mut config.signal.kind) {
                *seed = s;
            }
            finish(&config, &harness::run_dodecanary(&config)?)
        }
        Command::Sweep { common, rates } => {
            let config = load(&common)?;
            let rates = rates.unwrap_or_else(|| config.signal.rates.clone());
            finish(&config, &harness::run_rate_sweep(&config, &rates)?)
        }
        Command::Noise { common, seed, rates } => {
            let mut config = load(&common)?;
            if let Some(s) = seed {
                config.signal.noise_seed = s;
            }
            if let Some(r) = rates {
                config.signal.rates = r;
                config.validate()?;
            }
            finish(&config, &harness::run_noise_pulses(&config)?)
        }
        Command::Verify {
            config,
            trials,
            seed,
            out,
            reverse_order,
            coarse,
        } => {
            let (section, csv) = match config {
                Some(path) => {
                    let config = VerifyConfig::parse(&read(&path)?)?;
                    (config.verify, config.csv)
                }
                None => (harness::config::VerifySection { trials: 1000, seed: 7 }, None),
            };
            let options = VerifyOptions {
                order: if reverse_order {
                    EvalOrder::Reversed
                } else {
                    EvalOrder::Feedforward
                },
                coarse,
            };
            let outcome = harness::run_verify(
                trials.unwrap_or(section.trials),
                seed.unwrap_or(section.seed),
                options,
            )?;
            if let Some(path) = out.or(csv) {
                harness::write_text(&path, &outcome.table.render())?;
                eprintln!("wrote {}", path.display());
            }
            print!("{}", outcome.report);
            println!("{}", harness::summary_line(&outcome.report));
            Ok(if outcome.divergent_trials > 0 {
                exit::DIVERGENCE
            } else {
                exit::SUCCESS
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::CONFIG_ERROR as u8)
        }
    }
}
