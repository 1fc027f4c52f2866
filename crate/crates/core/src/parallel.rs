//! Trial scheduling. Results always come back in trial order, so the thread
//! count never changes an experiment's output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Mixes a master seed and a trial index into an independent 64-bit seed
/// (SplitMix64 step followed by its finalizer).
pub fn mix64(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Evaluates `f(0), …, f(n-1)`. `threads == 1` runs on the calling thread;
/// `0` uses every available core. Without the `parallel` feature everything
/// is sequential.
pub fn map_indexed<T, F>(n: usize, threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if threads != 1 {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build();
        if let Ok(pool) = pool {
            return pool.install(|| (0..n).into_par_iter().map(&f).collect());
        }
    }
    let _ = threads;
    (0..n).map(f).collect()
}
