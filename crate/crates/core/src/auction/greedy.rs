use std::cmp::Ordering;

use super::{set_welfare, settle_payment, welfare_of_set, AuctionConfig, WinnerSet};
use crate::error::{Error, Result};
use crate::mining::BidderProfile;
use crate::scalar::Scalar;

/// Bidders sorted once by descending bid, ties by ascending id.
pub(crate) struct Ranking<T> {
    /// Roster index of the bidder at each rank.
    pub order: Vec<usize>,
    /// Bids in rank order.
    pub sorted: Vec<T>,
}

pub(crate) struct Selection<T> {
    pub count: usize,
    pub welfare: T,
}

impl<T: Scalar> Ranking<T> {
    pub fn new(bids: &[T], ids: &[u64]) -> Self {
        let mut order: Vec<usize> = (0..bids.len()).collect();
        order.sort_by(|&a, &b| {
            bids[b]
                .partial_cmp(&bids[a])
                .unwrap_or(Ordering::Equal)
                .then(ids[a].cmp(&ids[b]))
        });
        let sorted = order.iter().map(|&i| bids[i]).collect();
        Self { order, sorted }
    }

    pub fn select(&self, capacity: usize, config: &AuctionConfig<T>) -> Selection<T> {
        admit(self.sorted.iter().copied(), capacity, config)
    }

    /// Rank of roster index `index`.
    pub fn rank_of(&self, index: usize) -> usize {
        self.order
            .iter()
            .position(|&i| i == index)
            .expect("index is part of the ranking")
    }

    /// Raw payment of the winner at rank `pos` when the first `count` ranks win.
    ///
    /// Re-running the greedy on the roster without that bidder visits the
    /// same ranking with one entry skipped, so no re-sort is needed.
    pub fn payment_at(&self, pos: usize, count: usize, config: &AuctionConfig<T>) -> T {
        let without = self.sorted_without(pos);
        let counterfactual = admit(without.clone(), config.capacity(), config);
        let others = without.take(count - 1).fold(T::zero(), |acc, b| acc + b);
        counterfactual.welfare - set_welfare(count - 1, others, config)
    }

    fn sorted_without(&self, pos: usize) -> impl Iterator<Item = T> + Clone + '_ {
        self.sorted
            .iter()
            .enumerate()
            .filter(move |&(r, _)| r != pos)
            .map(|(_, &b)| b)
    }
}

/// Admits bids in the given order while welfare strictly increases and
/// fewer than `capacity` are admitted.
pub(crate) fn admit<T: Scalar>(
    bids: impl Iterator<Item = T>,
    capacity: usize,
    config: &AuctionConfig<T>,
) -> Selection<T> {
    let mut count = 0;
    let mut sum = T::zero();
    let mut welfare = T::zero();
    for bid in bids {
        if count == capacity {
            break;
        }
        let candidate_sum = sum + bid;
        let candidate = set_welfare(count + 1, candidate_sum, config);
        if candidate <= welfare {
            break;
        }
        count += 1;
        sum = candidate_sum;
        welfare = candidate;
    }
    Selection { count, welfare }
}

/// Greedy winner selection on a bare bid vector. Winner ids are bid indices.
pub fn select_winners_greedy<T: Scalar>(bids: &[T], config: &AuctionConfig<T>) -> WinnerSet {
    let ids: Vec<u64> = (0..bids.len() as u64).collect();
    let ranking = Ranking::new(bids, &ids);
    let selection = ranking.select(config.capacity(), config);
    WinnerSet::new(
        ranking.order[..selection.count]
            .iter()
            .map(|&i| i as u64)
            .collect(),
    )
}

/// Payment of `winner_id`: greedy welfare of the roster without it, minus the
/// welfare the other members of `winners` would produce as a set on their own.
pub fn vcg_payment<T: Scalar>(
    winner_id: u64,
    roster: &[BidderProfile<T>],
    winners: &WinnerSet,
    config: &AuctionConfig<T>,
) -> Result<T> {
    if !winners.contains(winner_id) {
        return Err(Error::NotAWinner(winner_id));
    }
    let rest: Vec<&BidderProfile<T>> = roster.iter().filter(|p| p.id != winner_id).collect();
    let rest_bids: Vec<T> = rest.iter().map(|p| p.bid).collect();
    let rest_ids: Vec<u64> = rest.iter().map(|p| p.id).collect();
    let counterfactual = Ranking::new(&rest_bids, &rest_ids).select(config.capacity(), config);

    let mut others = Vec::with_capacity(winners.len());
    for &id in winners.ids().iter().filter(|&&id| id != winner_id) {
        let profile = roster
            .iter()
            .find(|p| p.id == id)
            .ok_or(Error::UnknownBidder(id))?;
        others.push(profile.bid);
    }
    settle_payment(
        winner_id,
        counterfactual.welfare - welfare_of_set(&others, config),
    )
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::super::run_auction;
    use super::super::tests::{config, roster};
    use super::*;

    #[test]
    fn stops_at_first_decrease() {
        assert_eq!(
            select_winners_greedy(&[10.0, 8.0, 1.0], &config(3)).ids(),
            &[0, 1]
        );
        assert_eq!(
            select_winners_greedy(&[1.0, 8.0, 10.0], &config(3)).ids(),
            &[2, 1]
        );
    }

    #[test]
    fn capacity_binds() {
        assert_eq!(select_winners_greedy(&[10.0, 8.0], &config(1)).ids(), &[0]);
    }

    #[test]
    fn unprofitable_bid_is_rejected() {
        // w(1) * 5 < 0.02
        assert!(select_winners_greedy(&[5.0], &config(3)).is_empty());
        assert!(select_winners_greedy::<f64>(&[], &config(3)).is_empty());
    }

    #[test]
    fn ties_break_toward_lower_index() {
        assert_eq!(select_winners_greedy(&[10.0, 10.0], &config(1)).ids(), &[0]);
    }

    #[test]
    fn payment_examples() {
        let r = roster(&[10.0, 8.0, 1.0]);
        let winners = WinnerSet::new(vec![0, 1]);
        let p = vcg_payment(0, &r, &winners, &config(3)).unwrap();
        assert_abs_diff_eq!(p, 0.0, epsilon = 1e-12);
        assert_eq!(
            vcg_payment(2, &r, &winners, &config(3)),
            Err(Error::NotAWinner(2))
        );

        let r = roster(&[10.0, 8.0]);
        let p = vcg_payment(0, &r, &WinnerSet::new(vec![0]), &config(1)).unwrap();
        assert_abs_diff_eq!(p, 0.006_644_407_484_603_699, epsilon = 1e-12);
    }

    #[test]
    fn fast_payments_match_full_rerun() {
        let bids = [4.0, 9.5, 7.25, 9.5, 6.0, 12.0, 3.0, 8.0, 11.0, 10.5];
        let r = roster(&bids);
        let mut cfg = config(10);
        cfg.market.unit_cost = 0.005;
        for capacity in 1..=10 {
            cfg.market.capacity = capacity;
            let outcome = run_auction(&r, &cfg).unwrap();
            for &id in outcome.winners.ids() {
                let slow = vcg_payment(id, &r, &outcome.winners, &cfg).unwrap();
                assert_eq!(outcome.payment_of(id), Some(slow));
            }
        }
    }
}
