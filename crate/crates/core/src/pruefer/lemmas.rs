//! Sampling checks of the deterministic region bounds.

use super::dyson_schmidt::{classify_region, ds_step_d, ds_step_q, ProjectivePoint, Region, RegionParams};
use crate::model::{PolymerEnsemble, RealizationStream};
use crate::transfer::{decompose, CriticalData, Decomposition};
use crate::Result;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Outcome of [`check_lemma_4_1`]. Violations are data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma41Report {
    pub samples: usize,
    /// Samples for which each statement's hypothesis held.
    pub applicable: [usize; 4],
    /// Violations of the four statements: `Q·x ≤ kx` and `DQ·x ≤ kκ²x` on
    /// region III, entry to region I only through region IV, and `Q·x < Kε`
    /// from region I.
    pub violations: [usize; 4],
    /// Smallest relative slack seen per statement (negative on violation).
    pub margins: [f64; 4],
    /// Set when violations occurred or the boundaries are not ordered.
    pub epsilon_above_validity: bool,
}

impl Lemma41Report {
    pub fn total_violations(&self) -> usize {
        self.violations.iter().sum()
    }
}

/// Outcome of [`check_lemma_4_2`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma42Report {
    pub samples: usize,
    /// Samples that left region II at the next relevant half-step.
    pub exits: usize,
    pub violations: usize,
}

fn draw_decomposition<R: Rng>(
    ensemble: &PolymerEnsemble,
    data: &CriticalData,
    eps: f64,
    rng: &mut R,
) -> Result<Decomposition> {
    let p = ensemble.sample(rng);
    decompose(data, &p, eps)
}

/// Mixture of log-uniform magnitudes around the region boundaries, with
/// both signs, exact zero and infinity.
fn draw_x<R: Rng>(p: &RegionParams, rng: &mut R) -> ProjectivePoint {
    let u: f64 = rng.gen();
    if u < 0.02 {
        return ProjectivePoint::Finite(0.0);
    }
    if u < 0.04 {
        return ProjectivePoint::Infinity;
    }
    let (lo, hi) = if u < 0.5 {
        (p.lower().ln(), p.upper().ln())
    } else {
        ((p.lower() * 1e-3).ln(), (p.upper() * 1e3).ln())
    };
    let mag = (lo + (hi - lo) * rng.gen::<f64>()).exp();
    let sign = if u < 0.5 || rng.gen::<bool>() { 1.0 } else { -1.0 };
    ProjectivePoint::Finite(sign * mag)
}

fn in_region_iii(x: ProjectivePoint, p: &RegionParams) -> bool {
    matches!(classify_region(x, p), Region::IIILow | Region::IIIHigh)
}

/// Samples `(σ, σ', x)` and tests the four implications of the region lemma.
pub fn check_lemma_4_1(
    ensemble: &PolymerEnsemble,
    data: &CriticalData,
    params: &RegionParams,
    samples: usize,
    stream: &mut RealizationStream,
) -> Result<Lemma41Report> {
    let eps = params.eps;
    let k = params.k;
    let mut applicable = [0usize; 4];
    let mut violations = [0usize; 4];
    let mut margins = [f64::INFINITY; 4];
    for _ in 0..samples {
        let rng = stream.rng();
        let q1 = draw_decomposition(ensemble, data, eps, rng)?;
        let q2 = draw_decomposition(ensemble, data, eps, rng)?;
        let x = draw_x(params, rng);

        if in_region_iii(x, params) {
            let xv = x.to_f64();
            let qx = ds_step_q(x, &q1, eps).to_f64();
            let slack = (k * xv - qx) / xv;
            applicable[0] += 1;
            margins[0] = margins[0].min(slack);
            if !(qx <= k * xv) {
                violations[0] += 1;
            }
            // D of the next polymer after Q of this one
            let dqx = ds_step_d(ds_step_q(x, &q1, eps), q2.kappa).to_f64();
            let bound = k * q2.kappa * q2.kappa * xv;
            applicable[1] += 1;
            margins[1] = margins[1].min((bound - dqx) / bound);
            if !(dqx <= bound) {
                violations[1] += 1;
            }
        }

        if classify_region(x, params) != Region::I {
            let dx = ds_step_d(x, q1.kappa);
            let qdx = ds_step_q(dx, &q1, eps);
            if classify_region(qdx, params) == Region::I {
                applicable[2] += 1;
                let d = dx.to_f64();
                margins[2] = margins[2].min((d - params.upper()) / params.upper());
                if !(d > params.upper()) {
                    violations[2] += 1;
                }
            }
        }

        if classify_region(x, params) == Region::I {
            applicable[3] += 1;
            let qx = ds_step_q(x, &q1, eps).to_f64();
            margins[3] = margins[3].min((params.lower() - qx) / params.lower());
            if !(qx < params.lower()) {
                violations[3] += 1;
            }
        }
    }
    let total: usize = violations.iter().sum();
    Ok(Lemma41Report {
        samples,
        applicable,
        violations,
        margins,
        epsilon_above_validity: total > 0 || !params.ordered(),
    })
}

/// Samples states in region II at integer and half-integer times and checks
/// that a state leaving region II lands in region III^<.
pub fn check_lemma_4_2(
    ensemble: &PolymerEnsemble,
    data: &CriticalData,
    params: &RegionParams,
    samples: usize,
    stream: &mut RealizationStream,
) -> Result<Lemma42Report> {
    let eps = params.eps;
    let mut exits = 0;
    let mut violations = 0;
    for i in 0..samples {
        let rng = stream.rng();
        let x = ProjectivePoint::Finite(params.lower() * rng.gen::<f64>());
        if x == ProjectivePoint::Finite(0.0) {
            continue;
        }
        let q1 = draw_decomposition(ensemble, data, eps, rng)?;
        let y = if i % 2 == 0 {
            // integer time: the next half-step is D
            ds_step_d(x, q1.kappa)
        } else {
            // half-integer time: Q of this polymer, then D of the next
            let q2 = draw_decomposition(ensemble, data, eps, rng)?;
            ds_step_d(ds_step_q(x, &q1, eps), q2.kappa)
        };
        let r = classify_region(y, params);
        if r != Region::II {
            exits += 1;
            if r != Region::IIILow {
                violations += 1;
            }
        }
    }
    Ok(Lemma42Report {
        samples,
        exits,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{dimer_to_ensemble, DimerHoppingModel, XDist};
    use crate::transfer::compute_critical_data;

    fn uniform() -> (PolymerEnsemble, CriticalData) {
        let m = DimerHoppingModel::new(1.2, 0.4, 1.0, 0.0, XDist::Uniform).unwrap();
        let ens = dimer_to_ensemble(&m, None).unwrap().with_quadrature(8);
        let cd = compute_critical_data(&ens, 0.0).unwrap();
        (ens, cd)
    }

    #[test]
    fn small_epsilon_has_no_violations() {
        let (ens, cd) = uniform();
        let p = RegionParams::new(2.0, 0.02, &cd).unwrap();
        let r = check_lemma_4_1(&ens, &cd, &p, 20_000, &mut RealizationStream::new(1, 0)).unwrap();
        assert_eq!(r.violations, [0; 4], "{r:?}");
        assert!(r.applicable.iter().all(|&a| a > 0), "{r:?}");
        assert!(!r.epsilon_above_validity);
        let r2 = check_lemma_4_2(&ens, &cd, &p, 20_000, &mut RealizationStream::new(1, 1)).unwrap();
        assert_eq!(r2.violations, 0);
        assert!(r2.exits > 0);
    }

    #[test]
    fn entry_to_region_one_passes_through_region_four() {
        let (ens, cd) = uniform();
        let p = RegionParams::new(2.0, 0.05, &cd).unwrap();
        let r = check_lemma_4_1(&ens, &cd, &p, 20_000, &mut RealizationStream::new(8, 0)).unwrap();
        assert!(r.applicable[2] > 0);
        assert_eq!(r.violations[2], 0);
        assert!(r.margins[2] > 0.0);
    }

    #[test]
    fn large_epsilon_is_flagged() {
        let (ens, cd) = uniform();
        let p = RegionParams::new_unchecked(2.0, 0.5, &cd).unwrap();
        let r = check_lemma_4_1(&ens, &cd, &p, 5_000, &mut RealizationStream::new(3, 0)).unwrap();
        assert!(r.epsilon_above_validity);
    }
}
