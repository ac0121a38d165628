//! Power-law fit of IDS increments against the energy offset.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Result of [`holder_fit`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderFit {
    pub slope: f64,
    pub slope_stderr: f64,
    pub intercept: f64,
    /// Whether each grid point entered the fit.
    pub used: Vec<bool>,
    /// `log|Δ| - (intercept + slope log ε)` for every grid point.
    pub residuals: Vec<f64>,
    pub weighted: bool,
}

/// Minimal number of resolved points.
pub const MIN_POINTS: usize = 4;

/// Fits `log|Δ(ε)| = intercept + slope · log ε` by weighted least squares,
/// using only points with `|Δ| > 3·stderr`. Falls back to ordinary least
/// squares when some used point has zero standard error.
pub fn holder_fit(eps: &[f64], delta: &[f64], stderr: &[f64]) -> Result<HolderFit> {
    if eps.len() != delta.len() || eps.len() != stderr.len() {
        return Err(Error::Config("epsilon, increment and stderr lengths differ".into()));
    }
    let used: Vec<bool> = eps
        .iter()
        .zip(delta)
        .zip(stderr)
        .map(|((e, d), s)| *e > 0.0 && d.abs() > 3.0 * s && d.abs() > 0.0)
        .collect();
    let idx: Vec<usize> = (0..eps.len()).filter(|&i| used[i]).collect();
    if idx.len() < MIN_POINTS {
        let smallest = idx.iter().map(|&i| eps[i]).fold(None, |m: Option<f64>, e| {
            Some(m.map_or(e, |m| m.min(e)))
        });
        return Err(Error::UnderResolved {
            reason: format!(
                "{} of {} points resolved above 3 standard errors, need {MIN_POINTS}",
                idx.len(),
                eps.len()
            ),
            smallest_usable: smallest,
        });
    }
    let x: Vec<f64> = idx.iter().map(|&i| eps[i].ln()).collect();
    let y: Vec<f64> = idx.iter().map(|&i| delta[i].abs().ln()).collect();
    let weighted = idx.iter().all(|&i| stderr[i] > 0.0);
    let w: Vec<f64> = if weighted {
        // var(log|Δ|) ≈ (se/|Δ|)²
        idx.iter().map(|&i| (delta[i] / stderr[i]).powi(2)).collect()
    } else {
        vec![1.0; idx.len()]
    };
    let sw: f64 = w.iter().sum();
    let mx = x.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() / sw;
    let my = y.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() / sw;
    let sxx: f64 = x.iter().zip(&w).map(|(a, b)| b * (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(&y).zip(&w).map(|((a, c), b)| b * (a - mx) * (c - my)).sum();
    if sxx <= 0.0 {
        return Err(Error::UnderResolved {
            reason: "all resolved points share one epsilon".into(),
            smallest_usable: idx.iter().map(|&i| eps[i]).reduce(f64::min),
        });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_stderr = if weighted {
        (1.0 / sxx).sqrt()
    } else {
        let rss: f64 = x.iter().zip(&y).map(|(a, c)| (c - intercept - slope * a).powi(2)).sum();
        (rss / (idx.len() as f64 - 2.0) / sxx).sqrt()
    };
    let residuals = eps
        .iter()
        .zip(delta)
        .map(|(e, d)| d.abs().ln() - intercept - slope * e.ln())
        .collect();
    Ok(HolderFit {
        slope,
        slope_stderr,
        intercept,
        used,
        residuals,
        weighted,
    })
}
