//! Greedy winner selection with VCG-style payments for unit-demand bidders.
//!
//! With every demand equal to one unit, welfare only depends on the number
//! of winners `k` and the sum of their bids:
//!
//! ```text
//! S(W) = w(k) / k * sum_{i in W} b_i - c * k
//! ```
//!
//! Bidders are ranked by descending bid (ties by ascending id) and admitted
//! one at a time while welfare strictly increases and capacity allows. A
//! winner pays the welfare the others reach without it, less the welfare of
//! the remaining winners on their own.

mod greedy;
mod incentive;
mod oracle;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mining::{network_effect, Allocation, BidderProfile, MarketConfig, NetworkEffectParams};
use crate::scalar::{tolerance, Scalar};

pub use greedy::{select_winners_greedy, vcg_payment};
pub use incentive::{allocated_share, bidder_utility, utility_under_report, wins_with_bid};
pub use oracle::{oracle_exhaustive, oracle_topk, EXHAUSTIVE_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuctionConfig<T> {
    pub market: MarketConfig<T>,
    pub network: NetworkEffectParams<T>,
}

impl<T: Scalar> AuctionConfig<T> {
    pub fn new(market: MarketConfig<T>, network: NetworkEffectParams<T>) -> Result<Self> {
        let config = Self { market, network };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.market.validate()?;
        self.network.validate()
    }

    /// Maximum number of winners.
    pub fn capacity(&self) -> usize {
        self.market.capacity
    }
}

/// Winner ids in admission order.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WinnerSet(Vec<u64>);

impl WinnerSet {
    pub fn new(ids: Vec<u64>) -> Self {
        Self(ids)
    }

    pub fn ids(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, id: u64) -> bool {
        self.0.contains(&id)
    }

    /// Ids in ascending order.
    pub fn sorted(&self) -> Vec<u64> {
        let mut ids = self.0.clone();
        ids.sort_unstable();
        ids
    }
}

/// Result of one auction. `ids`, `allocation` and `payments` follow roster order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuctionOutcome<T> {
    pub ids: Vec<u64>,
    pub allocation: Allocation,
    pub payments: Vec<T>,
    pub winners: WinnerSet,
    pub welfare: T,
}

impl<T: Scalar> AuctionOutcome<T> {
    fn empty(ids: Vec<u64>) -> Self {
        let n = ids.len();
        Self {
            ids,
            allocation: Allocation::empty(n),
            payments: vec![T::zero(); n],
            winners: WinnerSet::default(),
            welfare: T::zero(),
        }
    }

    pub fn position(&self, id: u64) -> Option<usize> {
        self.ids.iter().position(|&x| x == id)
    }

    pub fn payment_of(&self, id: u64) -> Option<T> {
        self.position(id).map(|i| self.payments[i])
    }

    pub fn winner_count(&self) -> usize {
        self.winners.len()
    }

    pub fn total_payment(&self) -> T {
        self.payments.iter().fold(T::zero(), |acc, &p| acc + p)
    }
}

/// Welfare of a winner set given only its bids. The empty set has welfare 0.
pub fn welfare_of_set<T: Scalar>(bids: &[T], config: &AuctionConfig<T>) -> T {
    let sum = bids.iter().fold(T::zero(), |acc, &b| acc + b);
    set_welfare(bids.len(), sum, config)
}

pub(crate) fn set_welfare<T: Scalar>(count: usize, bid_sum: T, config: &AuctionConfig<T>) -> T {
    if count == 0 {
        return T::zero();
    }
    let k = T::from_count(count);
    network_effect(k, &config.network) / k * bid_sum - config.market.unit_cost * k
}

/// Runs the full mechanism: greedy winner selection, then one payment per winner.
pub fn run_auction<T: Scalar>(
    roster: &[BidderProfile<T>],
    config: &AuctionConfig<T>,
) -> Result<AuctionOutcome<T>> {
    config.validate()?;
    validate_roster(roster)?;

    let ids: Vec<u64> = roster.iter().map(|p| p.id).collect();
    let bids: Vec<T> = roster.iter().map(|p| p.bid).collect();
    let ranking = greedy::Ranking::new(&bids, &ids);
    let selection = ranking.select(config.capacity(), config);

    let mut outcome = AuctionOutcome::empty(ids);
    for pos in 0..selection.count {
        let index = ranking.order[pos];
        let payment = ranking.payment_at(pos, selection.count, config);
        outcome.allocation.set(index, true);
        outcome.payments[index] = settle_payment(roster[index].id, payment)?;
        outcome.winners.0.push(roster[index].id);
    }
    outcome.welfare = selection.welfare;
    Ok(outcome)
}

pub(crate) fn validate_roster<T: Scalar>(roster: &[BidderProfile<T>]) -> Result<()> {
    let mut seen = HashSet::with_capacity(roster.len());
    for profile in roster {
        profile.validate()?;
        if profile.demand != T::one() {
            return Err(Error::VariableDemand {
                id: profile.id,
                demand: profile.demand.to_string(),
            });
        }
        if !seen.insert(profile.id) {
            return Err(Error::DuplicateId(profile.id));
        }
    }
    Ok(())
}

/// Clamps float noise just below zero; anything more negative is a logic error.
pub(crate) fn settle_payment<T: Scalar>(id: u64, payment: T) -> Result<T> {
    if payment >= T::zero() {
        Ok(payment)
    } else if payment >= -tolerance::<T>() {
        Ok(T::zero())
    } else {
        Err(Error::NegativePayment {
            id,
            payment: payment.to_string(),
        })
    }
}
