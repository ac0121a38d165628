//! Dyson–Schmidt variables `x = -cot θ` and the region decomposition of
//! the compactified real line.

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::transfer::{CriticalData, Decomposition};
use serde::{Deserialize, Serialize};

/// Above this modulus Möbius maps are evaluated on `(-1, 1/x)` instead of `(-x, 1)`.
const HOMOGENEOUS_SWITCH: f64 = 1e12;

/// A point of `ℝ ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ProjectivePoint {
    Finite(f64),
    Infinity,
}

impl ProjectivePoint {
    /// `-cot θ`.
    pub fn from_phase(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::from_homogeneous([c, s])
    }

    /// The point represented by the direction `v`, i.e. `-v₀/v₁`.
    pub fn from_homogeneous(v: [f64; 2]) -> Self {
        if v[1] == 0.0 || (v[0] / v[1]).abs() > 1e300 {
            Self::Infinity
        } else {
            Self::Finite(-v[0] / v[1])
        }
    }

    pub fn homogeneous(&self) -> [f64; 2] {
        match *self {
            Self::Infinity => [1.0, 0.0],
            Self::Finite(x) if x.abs() > HOMOGENEOUS_SWITCH => [-1.0, 1.0 / x],
            Self::Finite(x) => [-x, 1.0],
        }
    }

    /// `Some(x)` for finite points.
    pub fn value(&self) -> Option<f64> {
        match *self {
            Self::Finite(x) => Some(x),
            Self::Infinity => None,
        }
    }

    /// `x` as a float, with `∞` mapped to `+inf`.
    pub fn to_f64(&self) -> f64 {
        self.value().unwrap_or(f64::INFINITY)
    }

    /// Projective action of `b`: `x ↦ (b₁₁x - b₁₂)/(b₂₂ - b₂₁x)`.
    pub fn apply(&self, b: &Mat2) -> Self {
        Self::from_homogeneous(b.apply(self.homogeneous()))
    }
}

/// `D·x = κ² x`.
pub fn ds_step_d(x: ProjectivePoint, kappa: f64) -> ProjectivePoint {
    match x {
        ProjectivePoint::Finite(v) => {
            let y = kappa * kappa * v;
            if y.is_finite() {
                ProjectivePoint::Finite(y)
            } else {
                ProjectivePoint::Infinity
            }
        }
        ProjectivePoint::Infinity => ProjectivePoint::Infinity,
    }
}

/// `Q·x = ((1+ε²α)x + (a-b-εβ)ε) / (1 + ε²δ - (a+b+εγ)εx)`.
pub fn ds_step_q(x: ProjectivePoint, d: &Decomposition, eps: f64) -> ProjectivePoint {
    let e2 = eps * eps;
    let p = 1.0 + e2 * d.alpha();
    let q0 = (d.a - d.b - eps * d.beta()) * eps;
    let s = 1.0 + e2 * d.delta();
    let r = (d.a + d.b + eps * d.gamma()) * eps;
    let (num, den) = match x {
        ProjectivePoint::Infinity => (p, -r),
        ProjectivePoint::Finite(v) if v.abs() > HOMOGENEOUS_SWITCH => {
            (p + q0 / v, s / v - r)
        }
        ProjectivePoint::Finite(v) => (p * v + q0, s - r * v),
    };
    if den == 0.0 || (num / den).abs() > 1e300 {
        ProjectivePoint::Infinity
    } else {
        ProjectivePoint::Finite(num / den)
    }
}

/// Regions `I, II, III^<, III^>, IV` of `ℝ ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    I,
    II,
    IIILow,
    IIIHigh,
    IV,
}

impl Region {
    pub fn label(&self) -> &'static str {
        match self {
            Region::I => "I",
            Region::II => "II",
            Region::IIILow => "III<",
            Region::IIIHigh => "III>",
            Region::IV => "IV",
        }
    }
}

/// Region boundaries for parameters `k > 1` and `ε > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionParams {
    pub k: f64,
    /// `K = 2C₂/(1 - 1/k)`.
    pub big_k: f64,
    pub eps: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

impl RegionParams {
    /// Requires `Kε < 2C₄²Kε < (Kε)⁻¹`.
    pub fn new(k: f64, eps: f64, data: &CriticalData) -> Result<Self> {
        let p = Self::new_unchecked(k, eps, data)?;
        if !p.ordered() {
            return Err(Error::Domain(format!(
                "region boundaries are not ordered at eps = {eps}: K eps = {}, 2 C4^2 K eps = {}, 1/(K eps) = {}",
                p.lower(),
                p.split(),
                p.upper()
            )));
        }
        Ok(p)
    }

    /// Same as [`RegionParams::new`] without the ordering requirement, for
    /// probing `ε` beyond the validated range.
    pub fn new_unchecked(k: f64, eps: f64, data: &CriticalData) -> Result<Self> {
        if !(k > 1.0 && k.is_finite()) {
            return Err(Error::Domain(format!("k = {k} must exceed 1")));
        }
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::Domain(format!("eps = {eps} must be positive")));
        }
        Ok(Self {
            k,
            big_k: 2.0 * data.c2 / (1.0 - 1.0 / k),
            eps,
            c1: data.c1,
            c2: data.c2,
            c3: data.c3,
            c4: data.c4,
        })
    }

    /// `Kε`.
    pub fn lower(&self) -> f64 {
        self.big_k * self.eps
    }

    /// `2C₄²Kε`.
    pub fn split(&self) -> f64 {
        2.0 * self.c4 * self.c4 * self.lower()
    }

    /// `(Kε)⁻¹`.
    pub fn upper(&self) -> f64 {
        1.0 / self.lower()
    }

    pub fn ordered(&self) -> bool {
        0.0 < self.lower() && self.lower() < self.split() && self.split() < self.upper()
    }
}

pub fn classify_region(x: ProjectivePoint, p: &RegionParams) -> Region {
    match x {
        ProjectivePoint::Infinity => Region::IV,
        ProjectivePoint::Finite(x) if x <= 0.0 => Region::I,
        ProjectivePoint::Finite(x) if x < p.lower() => Region::II,
        ProjectivePoint::Finite(x) if x < p.split() => Region::IIILow,
        ProjectivePoint::Finite(x) if x <= p.upper() => Region::IIIHigh,
        ProjectivePoint::Finite(_) => Region::IV,
    }
}
