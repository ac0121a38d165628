//! Run configuration read from JSON.

use crate::CliError;
use pseudogap_core::model::ModelConfig;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;

/// Model plus command parameters. Every parameter has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    #[serde(default)]
    pub params: Params,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    /// Critical energy.
    pub e_c: f64,
    /// Sites per realization for counting estimators and spectra.
    pub n_sites: usize,
    /// Polymers per realization for phase and transfer-matrix estimators.
    pub n_polymers: usize,
    pub reps: usize,
    /// Realizations diagonalized by `spectrum`.
    pub spectrum_reps: usize,
    /// Absolute energies for `ids` and `lyapunov`.
    pub energies: Vec<f64>,
    /// Offsets from `e_c` for `rotation`, `renewal` and `holder`.
    pub epsilons: Vec<f64>,
    /// Offset used by `verify` and `trajectory`.
    pub epsilon: f64,
    pub k: f64,
    /// Contraction factor for the large-deviation checks, which need
    /// `log k < -2 γ⁰`.
    pub ld_k: f64,
    /// Defaults to `ϱ_k / 2`.
    pub xi: Option<f64>,
    pub bins: Option<usize>,
    /// Samples for each lemma sampler.
    pub samples: usize,
    pub ld_samples: usize,
    pub ld_grid: Vec<LdPoint>,
    /// Random (realization, E, N) triples for the oscillation check.
    pub oscillation_triples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LdPoint {
    pub zeta: f64,
    pub n: usize,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            e_c: 0.0,
            n_sites: 5000,
            n_polymers: 100_000,
            reps: 20,
            spectrum_reps: 1,
            energies: (-20..=20).map(|i| i as f64 / 10.0).collect(),
            epsilons: geometric(0.02, 0.2, 6),
            epsilon: 0.02,
            k: 2.0,
            ld_k: 1.2,
            xi: None,
            bins: None,
            samples: 100_000,
            ld_samples: 20_000,
            ld_grid: vec![
                LdPoint { zeta: 1e-2, n: 20 },
                LdPoint { zeta: 1e-3, n: 50 },
                LdPoint { zeta: 1e-4, n: 100 },
            ],
            oscillation_triples: 1000,
        }
    }
}

/// `n` log-spaced points from `a` to `b`.
pub fn geometric(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let r = (b / a).ln() / (n - 1) as f64;
    (0..n).map(|i| a * (r * i as f64).exp()).collect()
}

impl Params {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Config(m.to_string()));
        if !self.e_c.is_finite() {
            return bad("params.e_c must be finite");
        }
        if self.n_sites == 0 || self.n_polymers == 0 || self.reps == 0 || self.spectrum_reps == 0 {
            return bad("params.n_sites, params.n_polymers, params.reps and params.spectrum_reps must be positive");
        }
        if self.energies.iter().any(|e| !e.is_finite()) {
            return bad("params.energies must be finite");
        }
        if self.epsilons.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
            return bad("params.epsilons must be positive");
        }
        if !(self.epsilon.is_finite() && self.epsilon != 0.0) {
            return bad("params.epsilon must be nonzero");
        }
        if !(self.k > 1.0 && self.k.is_finite() && self.ld_k > 1.0 && self.ld_k.is_finite()) {
            return bad("params.k and params.ld_k must exceed 1");
        }
        if matches!(self.xi, Some(x) if x.is_nan() || x <= 0.0) {
            return bad("params.xi must be positive");
        }
        if self.bins == Some(0) {
            return bad("params.bins must be positive");
        }
        if self.ld_grid.iter().any(|p| !(p.zeta > 0.0 && p.zeta < 1.0) || p.n < 4) {
            return bad("params.ld_grid needs 0 < zeta < 1 and n >= 4");
        }
        Ok(())
    }
}

/// A parsed configuration with the hash of its source text.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub sha256: String,
}

impl LoadedConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let config: RunConfig = serde_json::from_str(text).map_err(|e| {
            CliError::Config(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        config.params.validate()?;
        let sha256 = format!("{:x}", Sha256::digest(text.as_bytes()));
        Ok(Self { config, sha256 })
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}
