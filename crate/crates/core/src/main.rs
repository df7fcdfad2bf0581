use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use froblab::cli::{gen_instance, parse_instance, run_suite, serialize_instance, GenConfig, SuiteConfig};
use froblab::frobenius::Corruption;

#[derive(Parser)]
#[command(name = "froblab", version, about = "Check pushforward stability of fibrations on finite sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a check suite over seeded random instances or one instance file.
    Check {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Falls back to FROBLAB_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 200)]
        runs: usize,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, default_value_t = 2)]
        interval_size: usize,
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Write the key-value report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Damage one map: kappa, kappa_prime, tau, tau_prime or section.
        #[arg(long, value_parser = parse_corruption)]
        corrupt: Option<Corruption>,
    },
    /// Print a random instance.
    Gen {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, default_value_t = 2)]
        interval_size: usize,
    },
}

fn parse_corruption(s: &str) -> Result<Corruption, String> {
    Corruption::parse(s).ok_or_else(|| {
        let names: Vec<_> = Corruption::ALL.iter().map(|c| c.name()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

fn seed_or_env(seed: Option<u64>) -> Result<u64, String> {
    match seed {
        Some(s) => Ok(s),
        None => match std::env::var("FROBLAB_SEED") {
            Ok(v) => v.trim().parse().map_err(|_| format!("FROBLAB_SEED is not a number: {v:?}")),
            Err(_) => Ok(0),
        },
    }
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("froblab: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Gen {
            seed,
            max_size,
            interval_size,
        } => {
            let seed = match seed_or_env(seed) {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            let cfg = GenConfig {
                max_size,
                interval_size,
                ..GenConfig::default()
            };
            print!("{}", serialize_instance(&gen_instance(seed, &cfg)));
            ExitCode::SUCCESS
        }
        Command::Check {
            suite,
            seed,
            runs,
            max_size,
            interval_size,
            instance,
            report,
            corrupt,
        } => {
            let seed = match seed_or_env(seed) {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            let instance = match instance {
                None => None,
                Some(path) => {
                    let text = match std::fs::read_to_string(&path) {
                        Ok(t) => t,
                        Err(e) => return usage(format!("{}: {e}", path.display())),
                    };
                    match parse_instance(&text) {
                        Ok(i) => Some(i),
                        Err(e) => return usage(format!("{}: {e}", path.display())),
                    }
                }
            };
            let interval_size = instance.as_ref().map_or(interval_size, |i| i.points().len());
            let cfg = SuiteConfig {
                seed,
                runs,
                max_size,
                interval_size,
                corrupt,
                instance,
            };
            let start = Instant::now();
            let result = match run_suite(&suite, &cfg) {
                Ok(r) => r,
                Err(e) => return usage(e),
            };
            print!("{}", result.to_human());
            println!("elapsed {:.2}s", start.elapsed().as_secs_f64());
            if let Some(path) = report {
                if let Err(e) = std::fs::write(&path, result.to_kv()) {
                    return usage(format!("{}: {e}", path.display()));
                }
            }
            if result.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
