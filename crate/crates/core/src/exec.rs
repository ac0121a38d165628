//! Deterministic fan-out over independent realizations.
//!
//! Every realization owns its own random sub-stream, so the result vector is
//! identical for any worker count. With the `parallel` feature disabled, or
//! with `workers == 1`, everything runs on the calling thread.

use serde::{Deserialize, Serialize};

/// Seed, replica count and worker count for a Monte Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonteCarlo {
    pub seed: u64,
    pub reps: usize,
    /// 0 means "all available threads".
    pub workers: usize,
}

impl MonteCarlo {
    pub fn new(seed: u64, reps: usize) -> Self {
        Self {
            seed,
            reps,
            workers: 0,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    /// Runs `f(rep)` for every replica and returns the results in replica order.
    pub fn map<T, F>(&self, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        map_indexed(self.reps, self.workers, f)
    }
}

/// Maps `f` over `0..n`, preserving index order in the output.
pub fn map_indexed<T, F>(n: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if workers != 1 && n > 1 {
            return par_map(n, workers, f);
        }
    }
    let _ = workers;
    (0..n).map(f).collect()
}

#[cfg(feature = "parallel")]
fn par_map<T, F>(n: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    if workers == 0 {
        return (0..n).into_par_iter().map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| (0..n).into_par_iter().map(&f).collect()),
        // fall back to the global pool if a dedicated one cannot be spawned
        Err(_) => (0..n).into_par_iter().map(f).collect(),
    }
}

/// Whether this build can fan out across threads.
pub const fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

/// Sample mean and standard error of the mean, summed in index order.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved_for_any_worker_count() {
        let seq = map_indexed(100, 1, |i| i * i);
        let par = map_indexed(100, 4, |i| i * i);
        let all = map_indexed(100, 0, |i| i * i);
        assert_eq!(seq, par);
        assert_eq!(seq, all);
    }

    #[test]
    fn mean_and_stderr_of_constant() {
        let (m, s) = mean_and_stderr(&[2.0, 2.0, 2.0]);
        assert_eq!(m, 2.0);
        assert_eq!(s, 0.0);
    }
}
