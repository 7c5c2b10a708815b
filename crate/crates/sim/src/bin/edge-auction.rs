use std::fs::{self, File};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand};
use edge_auction::auction::run_auction;
use edge_auction::calibration::{fit_alpha, read_samples, DEFAULT_INTERVAL};
use edge_auction::{BidderProfile, HashPowerSample};
use edge_auction_sim::{
    emit_results, run_sweep, run_sweep_serial, FlatConfig, Format, SweepParam, SweepSpec,
};

#[derive(Parser)]
#[command(
    name = "edge-auction",
    version,
    about = "Edge computing resource auction for mobile miners"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single auctions.
    #[command(subcommand)]
    Auction(AuctionCommand),
    /// Parameter sweeps.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
    /// Hash power exponent estimation.
    #[command(subcommand)]
    Calibrate(CalibrateCommand),
}

#[derive(Subcommand)]
enum AuctionCommand {
    /// Runs one auction on a JSON roster of {id, tx_size, demand, bid} objects.
    Run {
        #[arg(long)]
        bids: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Sweeps one parameter over a grid of values.
    Sweep {
        /// One of users, bonus, fee-rate, lambda.
        #[arg(long)]
        param: String,
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated grid; defaults to the parameter's standard grid.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// csv or json.
        #[arg(long, default_value = "csv")]
        format: String,
        /// Run on one thread; output is identical either way.
        #[arg(long)]
        serial: bool,
    },
}

#[derive(Subcommand)]
enum CalibrateCommand {
    /// Fits the hash power exponent to a sample file.
    FitAlpha {
        #[arg(long)]
        samples: PathBuf,
        #[arg(long, default_value_t = DEFAULT_INTERVAL.0)]
        lo: f64,
        #[arg(long, default_value_t = DEFAULT_INTERVAL.1)]
        hi: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Auction(AuctionCommand::Run { bids, config, out }) => {
            auction_run(&bids, &config, &out)
        }
        Command::Experiment(ExperimentCommand::Sweep {
            param,
            config,
            grid,
            instances,
            seed,
            out,
            format,
            serial,
        }) => {
            let param = SweepParam::from_cli_name(&param).ok_or_else(|| {
                anyhow!(
                    "unknown sweep parameter {param:?}; expected users, bonus, fee-rate or lambda"
                )
            })?;
            let format = Format::parse(&format)
                .ok_or_else(|| anyhow!("unknown format {format:?}; expected csv or json"))?;
            let grid = match grid {
                Some(list) => parse_grid(&list)?,
                None => param.default_grid(),
            };
            let spec = SweepSpec {
                param,
                grid,
                base: FlatConfig::load(&config)?.scenario()?,
                instances_per_point: instances,
                base_seed: seed,
            };
            let result = if serial {
                run_sweep_serial(&spec)?
            } else {
                run_sweep(&spec)?
            };
            for path in emit_results(&result, format, &out)? {
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Calibrate(CalibrateCommand::FitAlpha { samples, lo, hi }) => {
            let file = File::open(&samples).with_context(|| format!("{}", samples.display()))?;
            let samples: Vec<HashPowerSample> =
                read_samples(file).with_context(|| format!("{}", samples.display()))?;
            let fit = fit_alpha(&samples, (lo, hi))?;
            println!("{}", serde_json::to_string(&fit)?);
            Ok(())
        }
    }
}

fn auction_run(bids: &Path, config: &Path, out: &Path) -> anyhow::Result<()> {
    let text = fs::read_to_string(bids).with_context(|| format!("{}", bids.display()))?;
    let roster: Vec<BidderProfile> =
        serde_json::from_str(&text).with_context(|| format!("{}", bids.display()))?;
    let scenario = FlatConfig::load(config)?.scenario()?;
    let outcome = run_auction(&roster, &scenario.auction_config(roster.len()))?;
    let json = serde_json::to_string_pretty(&outcome)?;
    fs::write(out, json + "\n").with_context(|| format!("{}", out.display()))?;
    println!(
        "{} winners, welfare {}, revenue {}",
        outcome.winner_count(),
        outcome.welfare,
        outcome.total_payment()
    );
    Ok(())
}

fn parse_grid(list: &str) -> anyhow::Result<Vec<f64>> {
    let grid = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .with_context(|| format!("grid value {s:?}"))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    if grid.is_empty() {
        bail!("grid is empty");
    }
    Ok(grid)
}
