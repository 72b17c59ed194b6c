//! Seed expansion for independent replicas.
//!
//! Replica `r` of master seed `s` draws from ChaCha8 keyed by
//! `seed_from_u64(s)` on stream `r`. Streams are disjoint, and adding
//! replicas never changes the draws of existing ones.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub fn replica_rng(master_seed: u64, replica: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(replica);
    rng
}

/// Runs `count` replicas on the rayon pool; results come back in replica order.
pub fn run_replicas<T, F>(master_seed: u64, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut ChaCha8Rng) -> T + Sync,
{
    (0..count)
        .into_par_iter()
        .map(|r| {
            let mut rng = replica_rng(master_seed, r as u64);
            f(r, &mut rng)
        })
        .collect()
}
