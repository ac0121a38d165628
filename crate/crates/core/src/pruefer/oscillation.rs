//! Phase counts against Sturm counts on random finite chains.

use super::{default_theta0, free_pruefer_run, polymer_pruefer_run};
use crate::exec::map_indexed;
use crate::model::{flatten, sample_polymers, sample_sites, PolymerEnsemble, RealizationStream};
use crate::spectral::{eigen_count, JacobiMatrix};
use crate::transfer::CriticalData;
use crate::Result;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Allowed deviation of the free phase count.
pub const FREE_BOUND: f64 = 0.5;
/// Allowed deviation of the M-modified phase count.
pub const MODIFIED_BOUND: f64 = 2.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillationReport {
    pub triples: usize,
    /// Largest `|θ(N)/π - #{E_j ≤ E}|` for the free phase from `θ(0) = 0`.
    pub free_max: f64,
    pub free_violations: usize,
    /// Same for the M-modified polymer phase from `m(0)`.
    pub modified_max: f64,
    pub modified_violations: usize,
}

impl OscillationReport {
    pub fn violations(&self) -> usize {
        self.free_violations + self.modified_violations
    }
}

/// Draws `triples` independent `(realization, E, N)` with `N ≤ max_sites`
/// and `E` uniform on the Gershgorin interval of `H_N`.
pub fn oscillation_check(
    ensemble: &PolymerEnsemble,
    data: &CriticalData,
    triples: usize,
    max_sites: usize,
    seed: u64,
    workers: usize,
) -> Result<OscillationReport> {
    let max_sites = max_sites.max(1);
    let theta0 = default_theta0(data);
    let rows = map_indexed(triples, workers, |i| -> Result<(f64, f64)> {
        let mut st = RealizationStream::new(seed, i as u64);
        let n = st.rng().gen_range(1..=max_sites);
        let (mut t, mut v) = flatten(&sample_sites(ensemble, n, &mut st));
        t.truncate(n);
        v.truncate(n);
        let h = JacobiMatrix::from_sites(&t, &v)?;
        let (lo, hi) = h.gershgorin();
        let e = lo + (hi - lo) * st.rng().gen::<f64>();
        let free = free_pruefer_run(&t, &v, e, 0.0) / PI - eigen_count(&h, e) as f64;

        // whole polymers for the modified phase
        let polys = sample_polymers(ensemble, n.div_ceil(2), &mut st);
        let (t, v) = flatten(&polys);
        let h = JacobiMatrix::from_sites(&t, &v)?;
        let tr = polymer_pruefer_run(&polys, data, e - data.e_c, theta0)?;
        let modified = tr.theta[tr.steps()] / PI - eigen_count(&h, e) as f64;
        Ok((free.abs(), modified.abs()))
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(OscillationReport {
        triples,
        free_max: rows.iter().map(|r| r.0).fold(0.0, f64::max),
        free_violations: rows.iter().filter(|r| !(r.0 <= FREE_BOUND)).count(),
        modified_max: rows.iter().map(|r| r.1).fold(0.0, f64::max),
        modified_violations: rows.iter().filter(|r| !(r.1 <= MODIFIED_BOUND)).count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{dimer_to_ensemble, DimerHoppingModel, XDist};
    use crate::transfer::compute_critical_data;

    #[test]
    fn dimer_chains_have_no_violations() {
        let m = DimerHoppingModel::new(1.4, 1.3, 1.0, 0.0, XDist::Bernoulli { p: 2.0 / 3.0 }).unwrap();
        let ens = dimer_to_ensemble(&m, None).unwrap();
        let cd = compute_critical_data(&ens, 0.0).unwrap();
        let r = oscillation_check(&ens, &cd, 300, 200, 4, 0).unwrap();
        assert_eq!(r.violations(), 0, "{r:?}");
        assert_eq!(oscillation_check(&ens, &cd, 40, 200, 4, 1).unwrap().free_max, {
            oscillation_check(&ens, &cd, 40, 200, 4, 3).unwrap().free_max
        });
    }
}
