//! Auction of edge computing resources to proof-of-work miners.
//!
//! [`mining`] evaluates the valuation model, [`auction`] runs the greedy
//! welfare-maximizing mechanism and its reference oracles, and
//! [`calibration`] fits the hash power exponent to observed shares.
//!
//! Model code is generic over [`Scalar`] (`f32` or `f64`). The aliases at the
//! crate root fix the scalar to `f64`, which is what the tolerances in this
//! crate are calibrated for.

pub mod auction;
pub mod calibration;
pub mod error;
pub mod mining;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type BlockchainParams = mining::BlockchainParams<f64>;
pub type NetworkEffectParams = mining::NetworkEffectParams<f64>;
pub type MarketConfig = mining::MarketConfig<f64>;
pub type BidderProfile = mining::BidderProfile<f64>;
pub type AuctionConfig = auction::AuctionConfig<f64>;
pub type AuctionOutcome = auction::AuctionOutcome<f64>;
pub type HashPowerSample = calibration::HashPowerSample<f64>;
pub type AlphaFit = calibration::AlphaFit<f64>;

pub use auction::WinnerSet;
pub use mining::Allocation;
