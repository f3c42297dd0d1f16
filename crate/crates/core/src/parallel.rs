//! Deterministic fan-out helpers.
//!
//! Work is cut into chunks whose boundaries do not depend on the number of
//! threads, each chunk gets its own seed, and results are combined in chunk
//! order, so outputs are bit-identical for any thread count.

use rayon::prelude::*;

/// Seed for chunk `index` derived from a base seed (SplitMix64 step).
pub fn chunk_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Maps `f` over `0..n` in parallel and returns results in index order.
pub fn ordered_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Splits `count` items into fixed-size chunks `(index, start, len)`.
pub fn chunks(count: usize, chunk: usize) -> Vec<(usize, usize, usize)> {
    let chunk = chunk.max(1);
    (0..count.div_ceil(chunk)).map(|i| (i, i * chunk, chunk.min(count - i * chunk))).collect()
}

/// Runs `f` inside a pool with the given number of threads (0 = rayon default).
pub fn with_threads<T: Send, F: FnOnce() -> T + Send>(threads: usize, f: F) -> T {
    if threads == 0 {
        return f();
    }
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool").install(f)
}
