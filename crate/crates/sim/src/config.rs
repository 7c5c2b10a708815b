//! Flat JSON configuration shared by `auction run` and `experiment sweep`.

use std::fs;
use std::path::Path;

use edge_auction::{AuctionConfig, BlockchainParams, MarketConfig, NetworkEffectParams};
use serde::{Deserialize, Serialize};

use crate::{Result, SimError};

/// On-disk configuration: one flat JSON object.
///
/// `capacity` may be omitted or `null`, in which case it equals the number
/// of bidders in each auction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlatConfig {
    pub fixed_bonus: f64,
    pub fee_rate: f64,
    pub mean_block_interval: f64,
    pub propagation_coeff: f64,
    pub mu: f64,
    pub nu: f64,
    pub unit_cost: f64,
    #[serde(default)]
    pub capacity: Option<usize>,
    pub hash_exponent: f64,
    pub num_users: usize,
}

impl FlatConfig {
    /// Defaults of the reference experiments with capacity left non-binding.
    pub fn reference() -> Self {
        Self {
            fixed_bonus: 2.5,
            fee_rate: 0.007,
            mean_block_interval: 600.0,
            propagation_coeff: 1.0,
            mu: 0.5,
            nu: 0.005,
            unit_cost: 0.02,
            capacity: None,
            hash_exponent: 1.2,
            num_users: 600,
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| SimError::Io {
            path: path.to_owned(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| SimError::Json {
            path: path.to_owned(),
            source,
        })
    }

    pub fn scenario(&self) -> Result<Scenario> {
        let scenario = Scenario {
            blockchain: BlockchainParams {
                fixed_bonus: self.fixed_bonus,
                fee_rate: self.fee_rate,
                mean_block_interval: self.mean_block_interval,
                propagation_coeff: self.propagation_coeff,
            },
            network: NetworkEffectParams {
                mu: self.mu,
                nu: self.nu,
            },
            unit_cost: self.unit_cost,
            hash_exponent: self.hash_exponent,
            capacity: self.capacity,
            num_users: self.num_users,
        };
        scenario.validate()?;
        Ok(scenario)
    }
}

/// Validated model parameters for one market.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scenario {
    pub blockchain: BlockchainParams,
    pub network: NetworkEffectParams,
    pub unit_cost: f64,
    pub hash_exponent: f64,
    /// `None` means one unit per bidder, so capacity never binds.
    pub capacity: Option<usize>,
    pub num_users: usize,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.blockchain.validate()?;
        self.network.validate()?;
        if self.num_users < 1 {
            return Err(SimError::InvalidSpec("num_users must be at least 1".into()));
        }
        self.market(self.num_users).validate()?;
        Ok(())
    }

    /// Market seen by an auction over `bidders` bidders.
    pub fn market(&self, bidders: usize) -> MarketConfig {
        MarketConfig {
            unit_cost: self.unit_cost,
            capacity: self.capacity.unwrap_or(bidders.max(1)),
            hash_exponent: self.hash_exponent,
        }
    }

    pub fn auction_config(&self, bidders: usize) -> AuctionConfig {
        AuctionConfig {
            market: self.market(bidders),
            network: self.network,
        }
    }
}
