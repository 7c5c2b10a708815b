//! Closed-form mining economics: hash power share, orphaning, network
//! effect, bidder valuations and the general welfare objective.
//!
//! Everything here is a pure function of its arguments.

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Protocol constants chosen by the blockchain owner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockchainParams<T> {
    /// Fixed bonus for a mined block.
    pub fixed_bonus: T,
    /// Fee earned per unit of transaction size.
    pub fee_rate: T,
    /// Mean time between blocks across the network.
    pub mean_block_interval: T,
    /// Propagation delay per unit of transaction size.
    pub propagation_coeff: T,
}

impl<T: Scalar> BlockchainParams<T> {
    pub fn new(
        fixed_bonus: T,
        fee_rate: T,
        mean_block_interval: T,
        propagation_coeff: T,
    ) -> Result<Self> {
        let params = Self {
            fixed_bonus,
            fee_rate,
            mean_block_interval,
            propagation_coeff,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        non_negative("fixed_bonus", self.fixed_bonus)?;
        non_negative("fee_rate", self.fee_rate)?;
        positive("mean_block_interval", self.mean_block_interval)?;
        non_negative("propagation_coeff", self.propagation_coeff)
    }

    /// exp(-xi * s / lambda): the probability a block of size `s` is not orphaned.
    fn survival(&self, tx_size: T) -> T {
        let propagation_time = self.propagation_coeff * tx_size;
        (-propagation_time / self.mean_block_interval).exp()
    }
}

/// Shape of the S-curve network effect.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkEffectParams<T> {
    pub mu: T,
    pub nu: T,
}

impl<T: Scalar> NetworkEffectParams<T> {
    pub fn new(mu: T, nu: T) -> Result<Self> {
        let params = Self { mu, nu };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        positive("mu", self.mu)?;
        positive("nu", self.nu)
    }
}

/// Constants on the service provider's side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketConfig<T> {
    /// Cost of serving one resource unit.
    pub unit_cost: T,
    /// Resource units on offer. With unit demand this is the maximum number of winners.
    pub capacity: usize,
    /// Exponent of the hash power function.
    pub hash_exponent: T,
}

impl<T: Scalar> MarketConfig<T> {
    pub fn new(unit_cost: T, capacity: usize, hash_exponent: T) -> Result<Self> {
        let config = Self {
            unit_cost,
            capacity,
            hash_exponent,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        non_negative("unit_cost", self.unit_cost)?;
        if self.capacity < 1 {
            return Err(invalid("capacity", self.capacity, "must be at least 1"));
        }
        positive("hash_exponent", self.hash_exponent)
    }
}

/// One mobile user taking part in the auction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BidderProfile<T> {
    pub id: u64,
    pub tx_size: T,
    pub demand: T,
    pub bid: T,
}

impl<T: Scalar> BidderProfile<T> {
    pub fn validate(&self) -> Result<()> {
        non_negative("tx_size", self.tx_size)?;
        positive("demand", self.demand)?;
        non_negative("bid", self.bid)
    }
}

/// Binary allocation vector, one entry per bidder in roster order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Deserialize)]
#[serde(from = "Vec<u8>")]
pub struct Allocation(Vec<bool>);

impl Allocation {
    pub fn empty(len: usize) -> Self {
        Self(vec![false; len])
    }

    pub fn from_indices(len: usize, winners: impl IntoIterator<Item = usize>) -> Self {
        let mut flags = vec![false; len];
        for i in winners {
            flags[i] = true;
        }
        Self(flags)
    }

    /// Bit `i` of `mask` allocates bidder `i`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        Self((0..len).map(|i| mask >> i & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_allocated(&self, index: usize) -> bool {
        self.0[index]
    }

    pub fn set(&mut self, index: usize, allocated: bool) {
        self.0[index] = allocated;
    }

    pub fn count(&self) -> usize {
        self.0.iter().filter(|&&x| x).count()
    }

    pub fn winners(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &x)| x)
            .map(|(i, _)| i)
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }
}

impl From<Vec<bool>> for Allocation {
    fn from(flags: Vec<bool>) -> Self {
        Self(flags)
    }
}

impl From<Vec<u8>> for Allocation {
    fn from(flags: Vec<u8>) -> Self {
        Self(flags.into_iter().map(|x| x != 0).collect())
    }
}

impl Serialize for Allocation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter().map(|&x| u8::from(x)))
    }
}

/// Each miner's share of the allocated hash power.
///
/// `gamma_i = d_i^alpha x_i / sum_j d_j^alpha x_j`; unallocated bidders get 0.
pub fn hash_power<T: Scalar>(demands: &[T], allocation: &Allocation, alpha: T) -> Result<Vec<T>> {
    check_len("allocation", allocation.len(), demands.len())?;
    let weights: Vec<T> = demands
        .iter()
        .zip(allocation.as_slice())
        .map(|(&d, &x)| if x { d.powf(alpha) } else { T::zero() })
        .collect();
    let total = weights.iter().fold(T::zero(), |acc, &w| acc + w);
    if allocation.count() == 0 || total <= T::zero() {
        return Err(Error::NoAllocatedMiners);
    }
    Ok(weights.into_iter().map(|w| w / total).collect())
}

/// Probability that a block carrying `tx_size` worth of transactions is orphaned.
pub fn orphan_probability<T: Scalar>(tx_size: T, params: &BlockchainParams<T>) -> T {
    T::one() - params.survival(tx_size)
}

/// Probability of mining the block first and having it survive propagation.
pub fn block_win_probability<T: Scalar>(gamma: T, tx_size: T, params: &BlockchainParams<T>) -> T {
    gamma * params.survival(tx_size)
}

/// S-shaped network effect of the total allocated resource `total_allocated`.
pub fn network_effect<T: Scalar>(total_allocated: T, params: &NetworkEffectParams<T>) -> T {
    let decay = (-params.nu * total_allocated).exp();
    (T::one() - decay) / (T::one() + params.mu * decay)
}

/// Expected reward before the allocation is known. This is the truthful bid.
pub fn ex_ante_valuation<T: Scalar>(tx_size: T, params: &BlockchainParams<T>) -> T {
    (params.fixed_bonus + params.fee_rate * tx_size) * params.survival(tx_size)
}

/// Realized value of bidder `index` under `allocation`, scaled by its hash
/// power share and by the network effect of the total allocation.
pub fn ex_post_valuation<T: Scalar>(
    index: usize,
    profiles: &[BidderProfile<T>],
    allocation: &Allocation,
    blockchain: &BlockchainParams<T>,
    network: &NetworkEffectParams<T>,
    alpha: T,
) -> Result<T> {
    if index >= profiles.len() {
        return Err(Error::IndexOutOfRange {
            index,
            len: profiles.len(),
        });
    }
    check_len("allocation", allocation.len(), profiles.len())?;
    if !allocation.is_allocated(index) {
        return Ok(T::zero());
    }
    let demands: Vec<T> = profiles.iter().map(|p| p.demand).collect();
    let gamma = hash_power(&demands, allocation, alpha)?[index];
    let effect = network_effect(allocated_total(&demands, allocation), network);
    Ok(gamma * effect * ex_ante_valuation(profiles[index].tx_size, blockchain))
}

/// Sum of ex-post valuations minus the provider's cost `c * sum d_i x_i`.
///
/// The capacity constraint is not enforced. The all-zero allocation has
/// welfare 0.
pub fn general_social_welfare<T: Scalar>(
    profiles: &[BidderProfile<T>],
    allocation: &Allocation,
    blockchain: &BlockchainParams<T>,
    network: &NetworkEffectParams<T>,
    market: &MarketConfig<T>,
) -> Result<T> {
    check_len("allocation", allocation.len(), profiles.len())?;
    if allocation.count() == 0 {
        return Ok(T::zero());
    }
    let demands: Vec<T> = profiles.iter().map(|p| p.demand).collect();
    let gammas = hash_power(&demands, allocation, market.hash_exponent)?;
    let total = allocated_total(&demands, allocation);
    let effect = network_effect(total, network);
    let value = profiles
        .iter()
        .zip(&gammas)
        .filter(|(_, &g)| g > T::zero())
        .fold(T::zero(), |acc, (p, &g)| {
            acc + g * effect * ex_ante_valuation(p.tx_size, blockchain)
        });
    Ok(value - market.unit_cost * total)
}

fn allocated_total<T: Scalar>(demands: &[T], allocation: &Allocation) -> T {
    allocation
        .winners()
        .fold(T::zero(), |acc, i| acc + demands[i])
}

fn check_len(what: &'static str, got: usize, expected: usize) -> Result<()> {
    if got != expected {
        return Err(Error::LengthMismatch {
            what,
            got,
            expected,
        });
    }
    Ok(())
}

fn non_negative<T: Scalar>(name: &'static str, value: T) -> Result<()> {
    if !(value.is_finite() && value >= T::zero()) {
        return Err(invalid(name, value, "must be finite and non-negative"));
    }
    Ok(())
}

fn positive<T: Scalar>(name: &'static str, value: T) -> Result<()> {
    if !(value.is_finite() && value > T::zero()) {
        return Err(invalid(name, value, "must be finite and positive"));
    }
    Ok(())
}
