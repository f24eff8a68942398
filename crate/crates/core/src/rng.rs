//! Deterministic random streams.
//!
//! Every replication (frame, packet) draws from its own ChaCha8 stream keyed
//! by `(master_seed, index)`. ChaCha is counter based: the stream id selects
//! one of 2^64 disjoint keystreams, each 2^68 bytes long, so results do not
//! depend on how replications are spread across worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Generator handed to every replication.
pub type Stream = ChaCha8Rng;

/// Seeds for a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngPlan {
    pub master_seed: u64,
}

impl RngPlan {
    pub fn new(master_seed: u64) -> Self {
        Self { master_seed }
    }

    pub fn stream(&self, index: u64) -> Stream {
        derive_stream(self.master_seed, index)
    }
}

impl Default for RngPlan {
    fn default() -> Self {
        Self { master_seed: 1 }
    }
}

/// Returns the generator for stream `index` under `master_seed`.
pub fn derive_stream(master_seed: u64, index: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Runs `n` independent replications on the current rayon pool.
///
/// Replication `i` always receives `plan.stream(i)`. Accumulators are folded
/// per worker and merged with `merge`, which must be associative and
/// commutative (integer counts) for the result to be worker-count invariant.
pub fn replicate<A, I, F, M>(plan: RngPlan, n: u64, init: I, step: F, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(&mut A, u64, &mut Stream) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    (0..n)
        .into_par_iter()
        .fold(&init, |mut acc, i| {
            let mut rng = plan.stream(i);
            step(&mut acc, i, &mut rng);
            acc
        })
        .reduce(&init, &merge)
}
