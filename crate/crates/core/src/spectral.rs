//! Finite Jacobi matrices: Sturm counts, bisection spectra, histograms, IDS,
//! Lyapunov exponents and the Thouless identity.

use crate::error::{Error, Result};
use crate::exec::{map_indexed, mean_and_stderr, MonteCarlo};
use crate::mat2::Mat2;
use crate::model::{flatten, sample_polymers, sample_sites, PolymerEnsemble, RealizationStream};
use crate::transfer::{site, transfer_product_norm};
use serde::{Deserialize, Serialize};

/// Default absolute tolerance of [`eigenvalues`].
pub const EIGEN_TOL: f64 = 1e-10;

/// Floor applied to `|E - E_j|` in the Thouless sum.
pub const THOULESS_FLOOR: f64 = 1e-13;

/// Symmetric tridiagonal matrix with diagonal `v(0..N)` and off-diagonal
/// entries `-t(1..N)` (Dirichlet truncation of the hopping operator).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobiMatrix {
    diag: Vec<f64>,
    /// `t(n)` coupling sites `n-1` and `n`, for `n = 1..N`.
    off: Vec<f64>,
}

impl JacobiMatrix {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Config("Jacobi matrix needs at least one site".into()));
        }
        if off.len() + 1 != diag.len() {
            return Err(Error::Config(format!(
                "{} diagonal entries need {} couplings, got {}",
                diag.len(),
                diag.len() - 1,
                off.len()
            )));
        }
        if off.iter().any(|t| !(*t > 0.0 && t.is_finite())) || diag.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("couplings must be positive and entries finite".into()));
        }
        Ok(Self { diag, off })
    }

    /// `H_N` from site sequences `t(0..N)`, `v(0..N)`; `t(0)` is not used.
    pub fn from_sites(t: &[f64], v: &[f64]) -> Result<Self> {
        if t.len() != v.len() {
            return Err(Error::Config("hopping and potential sequences differ in length".into()));
        }
        Self::new(v.to_vec(), t.get(1..).unwrap_or(&[]).to_vec())
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.size();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1] } else { 0.0 }
                + if i + 1 < n { self.off[i] } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The matrix with its last site removed.
    pub fn truncated(&self) -> Option<Self> {
        let n = self.size();
        (n > 1).then(|| Self {
            diag: self.diag[..n - 1].to_vec(),
            off: self.off[..n - 2].to_vec(),
        })
    }
}

/// Number of eigenvalues `≤ e`, by counting negative pivots of `H - e`.
pub fn eigen_count(h: &JacobiMatrix, e: f64) -> usize {
    let mut count = 0;
    let mut d = h.diag[0] - e;
    if d == 0.0 {
        d = -f64::EPSILON * (1.0 + e.abs());
    }
    if d < 0.0 {
        count += 1;
    }
    for (v, t) in h.diag[1..].iter().zip(&h.off) {
        d = (v - e) - t * t / d;
        if d == 0.0 {
            d = -f64::EPSILON * (1.0 + e.abs()) * t.max(1.0);
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues in ascending order, each by bisection on [`eigen_count`]
/// to absolute tolerance `tol`.
pub fn eigenvalues(h: &JacobiMatrix, tol: f64) -> Vec<f64> {
    eigenvalues_with_workers(h, tol, 0)
}

/// [`eigenvalues`] with an explicit worker count (0 = all threads).
pub fn eigenvalues_with_workers(h: &JacobiMatrix, tol: f64, workers: usize) -> Vec<f64> {
    let (lo, hi) = h.gershgorin();
    let pad = 1e-9 * (1.0 + lo.abs().max(hi.abs()));
    let (lo, hi) = (lo - pad, hi + pad);
    let tol = tol.max(f64::EPSILON * (1.0 + lo.abs().max(hi.abs())));
    map_indexed(h.size(), workers, |k| {
        // smallest x with count(x) ≥ k + 1
        let (mut a, mut b) = (lo, hi);
        while b - a > tol {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if eigen_count(h, m) > k {
                b = m;
            } else {
                a = m;
            }
        }
        0.5 * (a + b)
    })
}

/// Histogram bin selection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Binning {
    FreedmanDiaconis,
    Count { bins: usize },
    Width { lo: f64, hi: f64, width: f64 },
}

/// Binned eigenvalue counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralHistogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub total: u64,
    /// Whether [`SpectralHistogram::density`] is the intended reading.
    pub normalized: bool,
}

impl SpectralHistogram {
    pub fn new(values: &[f64], binning: Binning) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Config("cannot bin an empty sample".into()));
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let min = sorted[0];
        let max = sorted[sorted.len() - 1];
        let (lo, hi, bins) = match binning {
            Binning::Count { bins } => (min, max, bins.max(1)),
            Binning::Width { lo, hi, width } => {
                if !(width > 0.0 && hi > lo) {
                    return Err(Error::Config("histogram needs hi > lo and width > 0".into()));
                }
                (lo, hi, ((hi - lo) / width).round().max(1.0) as usize)
            }
            Binning::FreedmanDiaconis => {
                let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);
                let w = 2.0 * iqr / (sorted.len() as f64).cbrt();
                let bins = if w > 0.0 && max > min {
                    ((max - min) / w).ceil().clamp(1.0, 10_000.0) as usize
                } else {
                    1
                };
                (min, max, bins)
            }
        };
        let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
        let edges: Vec<f64> = (0..=bins).map(|i| lo + i as f64 * width).collect();
        let mut counts = vec![0u64; bins];
        let mut total = 0;
        for &x in &sorted {
            if x < lo || x > hi {
                continue;
            }
            let i = (((x - lo) / width) as usize).min(bins - 1);
            counts[i] += 1;
            total += 1;
        }
        Ok(Self {
            edges,
            counts,
            total,
            normalized: false,
        })
    }

    /// Counts divided by `total · width`.
    pub fn density(&self) -> Vec<f64> {
        self.counts
            .iter()
            .zip(self.edges.windows(2))
            .map(|(&c, w)| c as f64 / (self.total.max(1) as f64 * (w[1] - w[0])))
            .collect()
    }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let f = pos - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] * (1.0 - f) + sorted[i + 1] * f
    } else {
        sorted[i]
    }
}

/// IDS estimates on an energy grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IDSCurve {
    pub energies: Vec<f64>,
    pub values: Vec<f64>,
    pub stderr: Vec<f64>,
    pub n_sites: usize,
    pub reps: usize,
    pub seed: u64,
}

/// One realization of `H_N` drawn from `(seed, stream)`.
pub fn sample_jacobi(
    ensemble: &PolymerEnsemble,
    n_sites: usize,
    seed: u64,
    stream: u64,
) -> Result<JacobiMatrix> {
    let mut st = RealizationStream::new(seed, stream);
    let (mut t, mut v) = flatten(&sample_sites(ensemble, n_sites, &mut st));
    t.truncate(n_sites);
    v.truncate(n_sites);
    JacobiMatrix::from_sites(&t, &v)
}

/// `𝒩(E)` by counting over `mc.reps` realizations of `n_sites` sites.
pub fn ids_by_counting(
    ensemble: &PolymerEnsemble,
    e: f64,
    n_sites: usize,
    mc: &MonteCarlo,
) -> Result<(f64, f64)> {
    let c = ids_curve(ensemble, &[e], n_sites, mc)?;
    Ok((c.values[0], c.stderr[0]))
}

/// `𝒩(E)` by counting on a grid, sharing realizations across energies.
pub fn ids_curve(
    ensemble: &PolymerEnsemble,
    energies: &[f64],
    n_sites: usize,
    mc: &MonteCarlo,
) -> Result<IDSCurve> {
    if n_sites == 0 {
        return Err(Error::Config("n_sites must be positive".into()));
    }
    let per_rep = mc.map(|rep| -> Result<Vec<f64>> {
        let h = sample_jacobi(ensemble, n_sites, mc.seed, rep as u64)?;
        Ok(energies
            .iter()
            .map(|&e| eigen_count(&h, e) as f64 / n_sites as f64)
            .collect())
    });
    let per_rep = per_rep.into_iter().collect::<Result<Vec<_>>>()?;
    let mut values = Vec::with_capacity(energies.len());
    let mut stderr = Vec::with_capacity(energies.len());
    for j in 0..energies.len() {
        let col: Vec<f64> = per_rep.iter().map(|r| r[j]).collect();
        let (m, s) = mean_and_stderr(&col);
        values.push(m);
        stderr.push(s);
    }
    Ok(IDSCurve {
        energies: energies.to_vec(),
        values,
        stderr,
        n_sites,
        reps: mc.reps,
        seed: mc.seed,
    })
}

/// `𝒩(E_c + ε) - 𝒩(E_c)` by counting, differenced within each realization.
/// Returns means and standard errors in the order of `epsilons`.
pub fn ids_increments(
    ensemble: &PolymerEnsemble,
    e_c: f64,
    epsilons: &[f64],
    n_sites: usize,
    mc: &MonteCarlo,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if n_sites == 0 {
        return Err(Error::Config("n_sites must be positive".into()));
    }
    let per_rep = mc.map(|rep| -> Result<Vec<f64>> {
        let h = sample_jacobi(ensemble, n_sites, mc.seed, rep as u64)?;
        let base = eigen_count(&h, e_c) as f64;
        Ok(epsilons
            .iter()
            .map(|&eps| (eigen_count(&h, e_c + eps) as f64 - base) / n_sites as f64)
            .collect())
    });
    let per_rep = per_rep.into_iter().collect::<Result<Vec<_>>>()?;
    let cols: Vec<(f64, f64)> = (0..epsilons.len())
        .map(|j| mean_and_stderr(&per_rep.iter().map(|r| r[j]).collect::<Vec<_>>()))
        .collect();
    Ok(cols.into_iter().unzip())
}

/// `γ(E)` per site from renormalized products of `n_polymers` polymers.
pub fn lyapunov(
    ensemble: &PolymerEnsemble,
    e: f64,
    n_polymers: usize,
    mc: &MonteCarlo,
) -> (f64, f64) {
    let vals = mc.map(|rep| {
        let mut st = RealizationStream::new(mc.seed, rep as u64);
        let ps = sample_polymers(ensemble, n_polymers, &mut st);
        let sites: usize = ps.iter().map(|p| p.len()).sum();
        transfer_product_norm(&ps, e) / sites as f64
    });
    mean_and_stderr(&vals)
}

/// `log ‖T̂(N-1) ⋯ T̂(0)‖` over site sequences.
pub fn site_product_log_norm(t: &[f64], v: &[f64], e: f64) -> f64 {
    let mut acc = Mat2::IDENTITY;
    let mut log_norm = 0.0;
    for (i, (&t, &v)) in t.iter().zip(v).enumerate() {
        acc = site(v, t, e) * acc;
        if i % 16 == 15 {
            let n = acc.norm();
            log_norm += n.ln();
            acc = acc.scale(1.0 / n);
        }
    }
    log_norm + acc.norm().ln()
}

/// Mean Thouless residual over realizations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThoulessResidual {
    pub n_sites: usize,
    pub residual: f64,
    pub stderr: f64,
    /// Number of `|E - E_j|` terms raised to the floor.
    pub floored: usize,
}

/// `|γ_N(E) - (-⟨log t⟩ + (1/N) Σ_j log|E - E_j|)|` averaged over realizations.
pub fn thouless_residual(
    ensemble: &PolymerEnsemble,
    e: f64,
    n_sites: usize,
    mc: &MonteCarlo,
) -> Result<ThoulessResidual> {
    let per_rep = mc.map(|rep| -> Result<(f64, usize)> {
        let mut st = RealizationStream::new(mc.seed, rep as u64);
        let (mut t, mut v) = flatten(&sample_sites(ensemble, n_sites, &mut st));
        t.truncate(n_sites);
        v.truncate(n_sites);
        let h = JacobiMatrix::from_sites(&t, &v)?;
        let n = n_sites as f64;
        let gamma = site_product_log_norm(&t, &v, e) / n;
        let mean_log_t = t.iter().map(|x| x.ln()).sum::<f64>() / n;
        let mut floored = 0;
        let log_pot = eigenvalues_with_workers(&h, EIGEN_TOL, 1)
            .iter()
            .map(|ej| {
                let d = (e - ej).abs();
                if d < THOULESS_FLOOR {
                    floored += 1;
                    THOULESS_FLOOR.ln()
                } else {
                    d.ln()
                }
            })
            .sum::<f64>()
            / n;
        Ok(((gamma - (-mean_log_t + log_pot)).abs(), floored))
    });
    let per_rep = per_rep.into_iter().collect::<Result<Vec<_>>>()?;
    let vals: Vec<f64> = per_rep.iter().map(|r| r.0).collect();
    let (residual, stderr) = mean_and_stderr(&vals);
    Ok(ThoulessResidual {
        n_sites,
        residual,
        stderr,
        floored: per_rep.iter().map(|r| r.1).sum(),
    })
}
