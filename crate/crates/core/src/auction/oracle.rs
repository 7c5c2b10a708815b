//! Reference solvers used to check the greedy selection.
//!
//! Neither shares code with the greedy path: the top-k scan has its own sort
//! and evaluates every prefix, and the exhaustive search evaluates the
//! unit-demand objective over every allocation vector.

use super::{welfare_of_set, AuctionConfig, WinnerSet};
use crate::error::{Error, Result};
use crate::mining::{network_effect, Allocation, BidderProfile};
use crate::scalar::Scalar;

/// Largest roster `oracle_exhaustive` will enumerate.
pub const EXHAUSTIVE_LIMIT: usize = 20;

/// Best top-k prefix of the descending bids over every `k` in `0..=min(N, D)`.
/// Ties go to the smaller `k`. Winner ids are bid indices.
pub fn oracle_topk<T: Scalar>(bids: &[T], config: &AuctionConfig<T>) -> (WinnerSet, T) {
    let mut order: Vec<usize> = (0..bids.len()).collect();
    order.sort_by(|&a, &b| bids[b].partial_cmp(&bids[a]).unwrap().then(a.cmp(&b)));
    let sorted: Vec<T> = order.iter().map(|&i| bids[i]).collect();

    let mut best_k = 0;
    let mut best = T::zero();
    for k in 1..=bids.len().min(config.capacity()) {
        let welfare = welfare_of_set(&sorted[..k], config);
        if welfare > best {
            best_k = k;
            best = welfare;
        }
    }
    let winners = order[..best_k].iter().map(|&i| i as u64).collect();
    (WinnerSet::new(winners), best)
}

/// Solves the unit-demand welfare problem by enumerating all `2^N` allocations
/// with at most `D` winners. Ties go to the lexicographically smallest sorted
/// id list.
pub fn oracle_exhaustive<T: Scalar>(
    roster: &[BidderProfile<T>],
    config: &AuctionConfig<T>,
) -> Result<(Allocation, T)> {
    let n = roster.len();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::RosterTooLarge {
            size: n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let ids_of = |mask: u64| -> Vec<u64> {
        let mut ids: Vec<u64> = (0..n)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| roster[i].id)
            .collect();
        ids.sort_unstable();
        ids
    };

    let mut best_mask = 0u64;
    let mut best = T::zero();
    for mask in 1u64..(1 << n) {
        let winners = mask.count_ones() as usize;
        if winners > config.capacity() {
            continue;
        }
        let total = T::from_count(winners);
        let effect = network_effect(total, &config.network);
        let value = (0..n)
            .filter(|&i| mask >> i & 1 == 1)
            .fold(T::zero(), |acc, i| {
                acc + T::one() / total * effect * roster[i].bid
            });
        let welfare = value - config.market.unit_cost * total;
        if welfare > best || (welfare == best && ids_of(mask) < ids_of(best_mask)) {
            best_mask = mask;
            best = welfare;
        }
    }
    Ok((Allocation::from_mask(n, best_mask), best))
}
