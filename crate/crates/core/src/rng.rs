//! Seeded, chunked random streams for Monte Carlo runs.
//!
//! Every run is cut into chunks of [`CHUNK_SAMPLES`] draws. Chunk `c` of a run
//! with seed `s` reads ChaCha8 stream `c` under key `s`, so a chunk's draws do
//! not depend on which thread evaluates it or on how many threads exist.
//! Per-chunk results come back in chunk order and are reduced sequentially.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const CHUNK_SAMPLES: u64 = 1 << 16;

/// Independent generator for `(seed, stream)`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs `work(rng, count)` once per chunk in parallel; results are in chunk order.
pub fn map_chunks<T, F>(samples: u64, seed: u64, work: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> T + Sync,
{
    let chunks = samples.div_ceil(CHUNK_SAMPLES);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let count = CHUNK_SAMPLES.min(samples - c * CHUNK_SAMPLES);
            work(&mut substream(seed, c), count)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_differ_and_repeat() {
        let a: u64 = substream(7, 0).random();
        let b: u64 = substream(7, 1).random();
        let c: u64 = substream(8, 0).random();
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, substream(7, 0).random::<u64>());
    }

    #[test]
    fn chunk_counts_cover_all_samples() {
        let counts = map_chunks(3 * CHUNK_SAMPLES + 5, 1, |_, n| n);
        assert_eq!(counts, vec![CHUNK_SAMPLES, CHUNK_SAMPLES, CHUNK_SAMPLES, 5]);
        assert!(map_chunks(0, 1, |_, n| n).is_empty());
    }

    #[test]
    fn results_independent_of_pool_size() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| map_chunks(10 * CHUNK_SAMPLES, 3, |rng, n| (0..n).map(|_| rng.random::<u32>() as u64).sum::<u64>()))
        };
        assert_eq!(run(1), run(4));
    }
}
