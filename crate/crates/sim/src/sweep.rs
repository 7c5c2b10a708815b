//! One-parameter sweeps: for every grid value, a batch of seeded random
//! markets is auctioned and welfare, winner count and revenue are recorded.

use std::fmt;

use edge_auction::auction::run_auction;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Scenario;
use crate::instance::{generate_instance, RNG_ALGORITHM};
use crate::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    NumUsers,
    FixedBonus,
    FeeRate,
    MeanBlockInterval,
}

impl SweepParam {
    pub const ALL: [SweepParam; 4] = [
        SweepParam::NumUsers,
        SweepParam::FixedBonus,
        SweepParam::FeeRate,
        SweepParam::MeanBlockInterval,
    ];

    /// Column value used in output files.
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::NumUsers => "num_users",
            SweepParam::FixedBonus => "fixed_bonus",
            SweepParam::FeeRate => "fee_rate",
            SweepParam::MeanBlockInterval => "mean_block_interval",
        }
    }

    /// Name accepted on the command line.
    pub fn cli_name(self) -> &'static str {
        match self {
            SweepParam::NumUsers => "users",
            SweepParam::FixedBonus => "bonus",
            SweepParam::FeeRate => "fee-rate",
            SweepParam::MeanBlockInterval => "lambda",
        }
    }

    pub fn from_cli_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.cli_name() == name)
    }

    pub fn default_grid(self) -> Vec<f64> {
        match self {
            SweepParam::NumUsers => (1..=10).map(|i| 100.0 * i as f64).collect(),
            SweepParam::FixedBonus => (0..=10).map(|i| i as f64 / 2.0).collect(),
            SweepParam::FeeRate => (1..=9).map(|i| i as f64 / 1000.0).collect(),
            SweepParam::MeanBlockInterval => (0..=8).map(|i| 100.0 + 212.5 * i as f64).collect(),
        }
    }

    /// `base` with this parameter set to `value`.
    pub fn apply(self, base: &Scenario, value: f64) -> Result<Scenario> {
        let mut s = *base;
        match self {
            SweepParam::NumUsers => {
                if !(value >= 1.0 && value.fract() == 0.0 && value <= u32::MAX as f64) {
                    return Err(SimError::InvalidSpec(format!(
                        "num_users grid value {value} is not a positive integer"
                    )));
                }
                s.num_users = value as usize;
            }
            SweepParam::FixedBonus => s.blockchain.fixed_bonus = value,
            SweepParam::FeeRate => s.blockchain.fee_rate = value,
            SweepParam::MeanBlockInterval => s.blockchain.mean_block_interval = value,
        }
        s.validate()?;
        Ok(s)
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub grid: Vec<f64>,
    pub base: Scenario,
    pub instances_per_point: usize,
    pub base_seed: u64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(SimError::InvalidSpec("grid is empty".into()));
        }
        if !self.grid.iter().all(|v| v.is_finite()) {
            return Err(SimError::InvalidSpec("grid values must be finite".into()));
        }
        if self.grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(SimError::InvalidSpec(
                "grid must be strictly increasing".into(),
            ));
        }
        if self.instances_per_point < 1 {
            return Err(SimError::InvalidSpec(
                "instances_per_point must be at least 1".into(),
            ));
        }
        self.base.validate()?;
        for &v in &self.grid {
            self.param.apply(&self.base, v)?;
        }
        Ok(())
    }

    /// Seed of one instance. Depends only on the base seed, the grid value
    /// and the instance index, never on the rest of the grid.
    pub fn instance_seed(&self, grid_value: f64, instance_index: usize) -> u64 {
        self.base_seed ^ splitmix64(splitmix64(grid_value.to_bits()) ^ instance_index as u64)
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InstancePoint {
    pub grid_value: f64,
    pub instance_index: usize,
    pub welfare: f64,
    pub winner_count: usize,
    pub total_payment: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridMean {
    pub grid_value: f64,
    pub n_instances: usize,
    pub welfare: f64,
    pub winner_count: f64,
    pub total_payment: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepMetadata {
    pub sweep_param: &'static str,
    pub grid: Vec<f64>,
    pub instances_per_point: usize,
    pub base_seed: u64,
    pub base: Scenario,
    pub rng: &'static str,
    pub seed_derivation: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub metadata: SweepMetadata,
    /// Sorted by grid value, then instance index.
    pub points: Vec<InstancePoint>,
    /// One per grid value, in grid order.
    pub means: Vec<GridMean>,
}

impl SweepResult {
    pub fn param(&self) -> &'static str {
        self.metadata.sweep_param
    }

    pub fn mean_welfare(&self) -> Vec<f64> {
        self.means.iter().map(|m| m.welfare).collect()
    }

    pub fn mean_winners(&self) -> Vec<f64> {
        self.means.iter().map(|m| m.winner_count).collect()
    }
}

/// Runs every (grid value, instance) pair in parallel. Output is identical
/// to [`run_sweep_serial`].
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let points = jobs(spec)
        .into_par_iter()
        .map(|(v, i)| evaluate(spec, v, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(spec, points))
}

pub fn run_sweep_serial(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let points = jobs(spec)
        .into_iter()
        .map(|(v, i)| evaluate(spec, v, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(spec, points))
}

fn jobs(spec: &SweepSpec) -> Vec<(f64, usize)> {
    spec.grid
        .iter()
        .flat_map(|&v| (0..spec.instances_per_point).map(move |i| (v, i)))
        .collect()
}

fn evaluate(spec: &SweepSpec, grid_value: f64, instance_index: usize) -> Result<InstancePoint> {
    let scenario = spec.param.apply(&spec.base, grid_value)?;
    let seed = spec.instance_seed(grid_value, instance_index);
    let roster = generate_instance(scenario.num_users, &scenario.blockchain, seed);
    let config = scenario.auction_config(roster.len());
    let outcome = run_auction(&roster, &config).map_err(|source| SimError::Instance {
        param: spec.param.name(),
        grid_value,
        instance_index,
        source,
    })?;
    Ok(InstancePoint {
        grid_value,
        instance_index,
        welfare: outcome.welfare,
        winner_count: outcome.winner_count(),
        total_payment: outcome.total_payment(),
    })
}

fn assemble(spec: &SweepSpec, mut points: Vec<InstancePoint>) -> SweepResult {
    points.sort_by(|a, b| {
        a.grid_value
            .total_cmp(&b.grid_value)
            .then(a.instance_index.cmp(&b.instance_index))
    });
    let means = points
        .chunk_by(|a, b| a.grid_value == b.grid_value)
        .map(|rows| {
            let n = rows.len() as f64;
            GridMean {
                grid_value: rows[0].grid_value,
                n_instances: rows.len(),
                welfare: rows.iter().map(|r| r.welfare).sum::<f64>() / n,
                winner_count: rows.iter().map(|r| r.winner_count as f64).sum::<f64>() / n,
                total_payment: rows.iter().map(|r| r.total_payment).sum::<f64>() / n,
            }
        })
        .collect();
    SweepResult {
        metadata: SweepMetadata {
            sweep_param: spec.param.name(),
            grid: spec.grid.clone(),
            instances_per_point: spec.instances_per_point,
            base_seed: spec.base_seed,
            base: spec.base,
            rng: RNG_ALGORITHM,
            seed_derivation:
                "base_seed ^ splitmix64(splitmix64(grid_value.to_bits()) ^ instance_index)",
        },
        points,
        means,
    }
}
