use edge_auction::auction::{
    allocated_share, bidder_utility, oracle_exhaustive, oracle_topk, run_auction,
    select_winners_greedy, welfare_of_set, wins_with_bid, AuctionConfig,
};
use edge_auction::mining::{BidderProfile, MarketConfig, NetworkEffectParams};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config(unit_cost: f64, capacity: usize, mu: f64, nu: f64) -> AuctionConfig<f64> {
    AuctionConfig::new(
        MarketConfig::new(unit_cost, capacity, 1.2).unwrap(),
        NetworkEffectParams::new(mu, nu).unwrap(),
    )
    .unwrap()
}

fn roster(bids: &[f64]) -> Vec<BidderProfile<f64>> {
    bids.iter()
        .enumerate()
        .map(|(i, &bid)| BidderProfile {
            id: i as u64 * 7 + 3,
            tx_size: 0.0,
            demand: 1.0,
            bid,
        })
        .collect()
}

fn instance() -> impl Strategy<Value = (Vec<f64>, AuctionConfig<f64>)> {
    (1usize..14).prop_flat_map(|n| {
        (
            prop::collection::vec(0.0f64..12.0, n),
            1..=n,
            0.0005f64..0.03,
            0.1f64..1.0,
            0.001f64..0.05,
        )
            .prop_map(|(bids, d, c, mu, nu)| (bids, config(c, d, mu, nu)))
    })
}

#[test]
fn topk_matches_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let n = rng.random_range(1..=12);
        let cfg = config(
            rng.random_range(0.0005..0.03),
            rng.random_range(1..=n),
            rng.random_range(0.1..3.0),
            rng.random_range(0.001..0.5),
        );
        let bids: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..12.0)).collect();
        let (_, topk) = oracle_topk(&bids, &cfg);
        let (alloc, exhaustive) = oracle_exhaustive(&roster(&bids), &cfg).unwrap();
        assert!(
            (topk - exhaustive).abs() < 1e-9,
            "{bids:?}: {topk} vs {exhaustive}"
        );
        assert!(alloc.count() <= cfg.capacity());
    }
}

proptest! {
    #[test]
    fn greedy_matches_topk_for_concave_curves((bids, cfg) in instance()) {
        let greedy = select_winners_greedy(&bids, &cfg);
        let chosen: Vec<f64> = greedy.ids().iter().map(|&i| bids[i as usize]).collect();
        let (_, best) = oracle_topk(&bids, &cfg);
        prop_assert!((welfare_of_set(&chosen, &cfg) - best).abs() < 1e-9);
    }

    #[test]
    fn outcome_invariants((bids, cfg) in instance()) {
        let r = roster(&bids);
        let outcome = run_auction(&r, &cfg).unwrap();
        let k = outcome.winner_count();
        prop_assert!(k <= cfg.capacity());
        let winner_bids: Vec<f64> = outcome.allocation.winners().map(|i| bids[i]).collect();
        prop_assert!((outcome.welfare - welfare_of_set(&winner_bids, &cfg)).abs() < 1e-9);
        for (i, p) in r.iter().enumerate() {
            let pay = outcome.payments[i];
            if outcome.allocation.is_allocated(i) {
                prop_assert!(pay >= 0.0);
                prop_assert!(pay <= allocated_share(k, p.bid, &cfg) + 1e-9);
                prop_assert!(bidder_utility(p.id, p.bid, &outcome, &cfg).unwrap() >= -1e-9);
            } else {
                prop_assert_eq!(pay, 0.0);
            }
        }
        prop_assert_eq!(run_auction(&r, &cfg).unwrap(), outcome);
    }

    #[test]
    fn raising_a_winning_bid_keeps_it_winning((bids, cfg) in instance(), raise in 0.0f64..20.0) {
        let r = roster(&bids);
        let outcome = run_auction(&r, &cfg).unwrap();
        for i in outcome.allocation.winners() {
            prop_assert!(wins_with_bid(&r, i, bids[i] + raise, &cfg).unwrap());
        }
    }
}

/// With a convex start to the network effect no single bidder is profitable
/// but a group is, so stopping at the first non-improving admission misses
/// the optimum. The top-k scan finds it.
#[test]
fn greedy_can_stop_early_on_a_convex_start() {
    let cfg = config(0.1, 10, 50.0, 1.0);
    let bids = [1.0; 6];
    assert!(select_winners_greedy(&bids, &cfg).is_empty());
    let (winners, best) = oracle_topk(&bids, &cfg);
    assert!(winners.len() > 1);
    assert!(best > 0.1);
}

#[test]
fn determinism_is_bitwise() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let bids: Vec<f64> = (0..300).map(|_| rng.random_range(0.0..12.0)).collect();
    let cfg = config(0.004, 300, 0.5, 0.005);
    let a = run_auction(&roster(&bids), &cfg).unwrap();
    let b = run_auction(&roster(&bids), &cfg).unwrap();
    assert!(a.winner_count() > 0);
    assert_eq!(a.welfare.to_bits(), b.welfare.to_bits());
    assert!(a
        .payments
        .iter()
        .zip(&b.payments)
        .all(|(x, y)| x.to_bits() == y.to_bits()));
}
