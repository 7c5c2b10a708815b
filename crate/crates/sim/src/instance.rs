use edge_auction::mining::ex_ante_valuation;
use edge_auction::{BidderProfile, BlockchainParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Generator behind every random instance; recorded in sweep metadata.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng (rand_chacha 0.9) seeded with seed_from_u64";

/// Upper end of the uniform transaction-size distribution.
pub const MAX_TX_SIZE: f64 = 1000.0;

/// Draws `num_users` unit-demand bidders with transaction sizes uniform on
/// `[0, 1000)` who bid their ex-ante valuation. Ids are `0..num_users`.
pub fn generate_instance(
    num_users: usize,
    blockchain: &BlockchainParams,
    seed: u64,
) -> Vec<BidderProfile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..num_users as u64)
        .map(|id| {
            let tx_size = rng.random::<f64>() * MAX_TX_SIZE;
            BidderProfile {
                id,
                tx_size,
                demand: 1.0,
                bid: ex_ante_valuation(tx_size, blockchain),
            }
        })
        .collect()
}
