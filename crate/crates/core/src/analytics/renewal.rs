//! Loop (renewal) statistics of the polymer phase.

use super::{k_moment, MomentFunction};
use crate::pruefer::RegionParams;
use serde::{Deserialize, Serialize};

/// Interarrival times of completed loops pooled over realizations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenewalStats {
    pub samples: Vec<u64>,
    pub loops: usize,
    /// Total polymer steps observed.
    pub steps: u64,
    /// Mean interarrival time, `steps / loops` (infinite without loops).
    pub mean: f64,
    /// `loops / steps`.
    pub rate: f64,
    /// 95% half-width of the mean of the completed interarrival times.
    pub half_width: f64,
    pub eps: f64,
    pub k: f64,
}

impl RenewalStats {
    /// No loop completed anywhere.
    pub fn is_empty(&self) -> bool {
        self.loops == 0
    }

    /// Mean of the completed interarrival times only.
    pub fn mean_completed(&self) -> f64 {
        if self.samples.is_empty() {
            f64::INFINITY
        } else {
            self.samples.iter().sum::<u64>() as f64 / self.samples.len() as f64
        }
    }
}

/// Pools loop times of several realizations of `steps_per_rep[i]` steps.
pub fn renewal_stats(loops: &[Vec<u64>], steps_per_rep: &[u64], eps: f64, k: f64) -> RenewalStats {
    let samples: Vec<u64> = loops.iter().flatten().copied().collect();
    let steps: u64 = steps_per_rep.iter().sum();
    let n = samples.len();
    let (mean, rate) = if n == 0 {
        (f64::INFINITY, 0.0)
    } else {
        let mean = steps as f64 / n as f64;
        (mean, 1.0 / mean)
    };
    let half_width = if n > 1 {
        let m = samples.iter().sum::<u64>() as f64 / n as f64;
        let var = samples.iter().map(|&x| (x as f64 - m).powi(2)).sum::<f64>() / (n - 1) as f64;
        1.96 * (var / n as f64).sqrt()
    } else {
        f64::INFINITY
    };
    RenewalStats {
        samples,
        loops: n,
        steps,
        mean,
        rate,
        half_width,
        eps,
        k,
    }
}

/// Lower bound `½ (2C₄²K²ε²)^{ξ-ϱ} (1 - ⟨(kκ²)^{ϱ-ξ}⟩)` on the mean
/// interarrival time.
pub fn lemma44_bound(params: &RegionParams, mf: &MomentFunction, rho: f64, xi: f64) -> f64 {
    let base = 2.0 * params.c4 * params.c4 * params.big_k * params.big_k * params.eps * params.eps;
    0.5 * base.powf(xi - rho) * (1.0 - k_moment(mf, params.k, rho - xi))
}
