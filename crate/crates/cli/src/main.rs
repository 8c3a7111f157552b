use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use feat_core::{format_trace, generate_instance, run_feat, FeatParams64, Instance64, InstanceGenConfig};
use feat_sim::{run_figures, run_sweep, write_csv, Overrides, SweepConfig};

#[derive(Parser)]
#[command(name = "feat", version, about = "FEAT water-filling simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    draws: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Output directory for CSV files.
    #[arg(long, env = "FEAT_OUT_DIR", default_value = "out")]
    out_dir: PathBuf,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            draws: self.draws,
            delta: self.delta,
            beta: self.beta,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by a config file; writes <out-dir>/<config-stem>.csv.
    Sweep {
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run a figure preset (or `all`); writes <out-dir>/<preset>.csv.
    Figure {
        id: String,
        #[command(flatten)]
        common: Common,
    },
    /// Print the round-by-round FEAT trace for one instance.
    Trace {
        /// Gain rows, users separated by ';' and carriers by ',' (e.g. "4,1;1,2").
        #[arg(long, conflicts_with_all = ["users", "carriers"])]
        gains: Option<String>,
        /// Noise power for --gains.
        #[arg(long, default_value_t = 1.0)]
        noise: f64,
        /// Per-user budgets for --gains (comma separated; one value applies to all).
        #[arg(long, default_value = "1")]
        budgets: String,
        /// Users of a random instance (with --carriers).
        #[arg(long, requires = "carriers")]
        users: Option<usize>,
        /// Carriers of a random instance (with --users).
        #[arg(long, requires = "users")]
        carriers: Option<usize>,
        /// SNR of the random instance.
        #[arg(long, default_value_t = 10.0)]
        snr_db: f64,
        /// Seed of the random instance.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
    },
}

fn parse_list(s: &str) -> anyhow::Result<Vec<f64>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .with_context(|| format!("invalid number '{}'", v.trim()))
        })
        .collect()
}

fn feat_params(delta: Option<f64>, beta: Option<f64>) -> anyhow::Result<FeatParams64> {
    let d = FeatParams64::default();
    Ok(FeatParams64::new(delta.unwrap_or(d.delta), beta.unwrap_or(d.beta))?)
}

fn sweep(config: &Path, common: &Common) -> anyhow::Result<()> {
    let text = fs::read_to_string(config).with_context(|| format!("reading {}", config.display()))?;
    let mut cfg = SweepConfig::parse(&text).with_context(|| format!("in {}", config.display()))?;
    cfg.apply(&common.overrides());
    cfg.validate().with_context(|| format!("in {}", config.display()))?;
    let table = run_sweep(&cfg);
    fs::create_dir_all(&common.out_dir).with_context(|| format!("creating {}", common.out_dir.display()))?;
    let stem = config.file_stem().and_then(|s| s.to_str()).unwrap_or("sweep");
    let path = common.out_dir.join(format!("{stem}.csv"));
    let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    write_csv(&table, file)?;
    println!("{}", path.display());
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Sweep { config, common } => sweep(&config, &common),
        Command::Figure { id, common } => {
            for (path, line) in run_figures(&id, &common.out_dir, &common.overrides())? {
                println!("{line}");
                println!("  -> {}", path.display());
            }
            Ok(())
        }
        Command::Trace {
            gains,
            noise,
            budgets,
            users,
            carriers,
            snr_db,
            seed,
            delta,
            beta,
        } => {
            let inst: Instance64 = match (gains, users, carriers) {
                (Some(g), _, _) => {
                    let rows = g.split(';').map(parse_list).collect::<anyhow::Result<Vec<_>>>()?;
                    let mut b = parse_list(&budgets)?;
                    if b.len() == 1 {
                        b = vec![b[0]; rows.len()];
                    }
                    Instance64::from_rows(&rows, noise, b)?
                }
                (None, Some(n_users), Some(n_carriers)) => generate_instance(&InstanceGenConfig {
                    n_users,
                    n_carriers,
                    snr_db,
                    seed,
                })?,
                _ => bail!("trace needs --gains or both --users and --carriers"),
            };
            let out = run_feat(&inst, &feat_params(delta, beta)?);
            print!("{}", format_trace(&out));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
