//! Quasi-linear bidder utility and fast single-bidder re-evaluation, used by
//! the truthfulness and monotonicity checks.

use super::greedy::Ranking;
use super::{settle_payment, validate_roster, AuctionConfig, AuctionOutcome};
use crate::error::{Error, Result};
use crate::mining::{network_effect, BidderProfile};
use crate::scalar::Scalar;

/// Value a winner receives out of `value` when `winners` bidders share the pool.
pub fn allocated_share<T: Scalar>(winners: usize, value: T, config: &AuctionConfig<T>) -> T {
    if winners == 0 {
        return T::zero();
    }
    let k = T::from_count(winners);
    network_effect(k, &config.network) / k * value
}

/// `x_i * w(|W|)/|W| * true_value - p_i`; zero for losers.
pub fn bidder_utility<T: Scalar>(
    bidder_id: u64,
    true_value: T,
    outcome: &AuctionOutcome<T>,
    config: &AuctionConfig<T>,
) -> Result<T> {
    let index = outcome
        .position(bidder_id)
        .ok_or(Error::UnknownBidder(bidder_id))?;
    if !outcome.allocation.is_allocated(index) {
        return Ok(T::zero());
    }
    Ok(allocated_share(outcome.winner_count(), true_value, config) - outcome.payments[index])
}

/// Utility of roster entry `index` with value `true_value` if it reports
/// `reported_bid` while everyone else keeps their bid.
///
/// Equivalent to running the whole auction on the modified roster and calling
/// [`bidder_utility`], but only prices the bidder in question.
pub fn utility_under_report<T: Scalar>(
    roster: &[BidderProfile<T>],
    index: usize,
    reported_bid: T,
    true_value: T,
    config: &AuctionConfig<T>,
) -> Result<T> {
    let (ranking, count) = rerank(roster, index, reported_bid, config)?;
    let pos = ranking.rank_of(index);
    if pos >= count {
        return Ok(T::zero());
    }
    let payment = settle_payment(roster[index].id, ranking.payment_at(pos, count, config))?;
    Ok(allocated_share(count, true_value, config) - payment)
}

/// Whether roster entry `index` wins when it bids `bid`.
pub fn wins_with_bid<T: Scalar>(
    roster: &[BidderProfile<T>],
    index: usize,
    bid: T,
    config: &AuctionConfig<T>,
) -> Result<bool> {
    let (ranking, count) = rerank(roster, index, bid, config)?;
    Ok(ranking.rank_of(index) < count)
}

fn rerank<T: Scalar>(
    roster: &[BidderProfile<T>],
    index: usize,
    bid: T,
    config: &AuctionConfig<T>,
) -> Result<(Ranking<T>, usize)> {
    if index >= roster.len() {
        return Err(Error::IndexOutOfRange {
            index,
            len: roster.len(),
        });
    }
    let mut modified = roster[index];
    modified.bid = bid;
    modified.validate()?;
    validate_roster(roster)?;

    let ids: Vec<u64> = roster.iter().map(|p| p.id).collect();
    let mut bids: Vec<T> = roster.iter().map(|p| p.bid).collect();
    bids[index] = bid;
    let ranking = Ranking::new(&bids, &ids);
    let count = ranking.select(config.capacity(), config).count;
    Ok((ranking, count))
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::super::run_auction;
    use super::super::tests::{config, roster};
    use super::*;

    #[test]
    fn utility_examples() {
        let r = roster(&[10.0, 8.0]);
        let cfg = config(1);
        let outcome = run_auction(&r, &cfg).unwrap();
        let u = bidder_utility(0, 10.0, &outcome, &cfg).unwrap();
        assert_abs_diff_eq!(u, 0.026_661_101_871_150_925, epsilon = 1e-12);
        assert_eq!(bidder_utility(1, 8.0, &outcome, &cfg).unwrap(), 0.0);
        assert_eq!(
            bidder_utility(7, 8.0, &outcome, &cfg),
            Err(Error::UnknownBidder(7))
        );

        let solo = run_auction(&roster(&[10.0]), &config(3)).unwrap();
        assert_eq!(
            bidder_utility(0, 10.0, &solo, &config(3)).unwrap(),
            allocated_share(1, 10.0, &config(3))
        );
    }

    #[test]
    fn report_shortcut_matches_full_auction() {
        let bids = [4.0, 9.5, 7.25, 9.5, 6.0, 12.0, 3.0, 8.0];
        let r = roster(&bids);
        let mut cfg = config(6);
        cfg.market.unit_cost = 0.004;
        for index in 0..r.len() {
            for report in [0.0, 2.0, 5.0, 9.5, 13.0] {
                let mut modified = r.clone();
                modified[index].bid = report;
                let outcome = run_auction(&modified, &cfg).unwrap();
                let full = bidder_utility(r[index].id, bids[index], &outcome, &cfg).unwrap();
                let fast = utility_under_report(&r, index, report, bids[index], &cfg).unwrap();
                assert_eq!(full, fast);
                assert_eq!(
                    wins_with_bid(&r, index, report, &cfg).unwrap(),
                    outcome.allocation.is_allocated(index)
                );
            }
        }
    }
}
