//! Real 2×2 matrices.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

/// A real 2×2 matrix `[[m11, m12], [m21, m22]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2::new(1.0, 0.0, 0.0, 1.0);
    pub const ZERO: Mat2 = Mat2::new(0.0, 0.0, 0.0, 0.0);
    /// Generator of rotations, `[[0, -1], [1, 0]]`.
    pub const ROTATION: Mat2 = Mat2::new(0.0, -1.0, 1.0, 0.0);
    /// `[[0, 1], [1, 0]]`.
    pub const SWAP: Mat2 = Mat2::new(0.0, 1.0, 1.0, 0.0);
    /// `[[1, 0], [0, -1]]`.
    pub const REFLECT: Mat2 = Mat2::new(1.0, 0.0, 0.0, -1.0);

    pub const fn new(m11: f64, m12: f64, m21: f64, m22: f64) -> Self {
        Self { m11, m12, m21, m22 }
    }

    pub const fn diag(a: f64, d: f64) -> Self {
        Self::new(a, 0.0, 0.0, d)
    }

    /// `D_κ = diag(κ, 1/κ)`.
    pub fn hyperbolic(kappa: f64) -> Self {
        Self::diag(kappa, kappa.recip())
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn trace(&self) -> f64 {
        self.m11 + self.m22
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.m11 * s, self.m12 * s, self.m21 * s, self.m22 * s)
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.m11, self.m21, self.m12, self.m22)
    }

    /// Inverse via the adjugate. Returns `None` for a singular matrix.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        Some(Self::new(self.m22, -self.m12, -self.m21, self.m11).scale(d.recip()))
    }

    /// Operator 2-norm (largest singular value), closed form for 2×2.
    pub fn norm(&self) -> f64 {
        let p = (self.m11 + self.m22).hypot(self.m21 - self.m12);
        let q = (self.m11 - self.m22).hypot(self.m12 + self.m21);
        0.5 * (p + q)
    }

    /// Smallest singular value.
    pub fn min_singular(&self) -> f64 {
        let p = (self.m11 + self.m22).hypot(self.m21 - self.m12);
        let q = (self.m11 - self.m22).hypot(self.m12 + self.m21);
        0.5 * (p - q).abs()
    }

    /// Condition number in the 2-norm.
    pub fn cond(&self) -> f64 {
        self.norm() / self.min_singular()
    }

    pub fn max_abs(&self) -> f64 {
        self.m11
            .abs()
            .max(self.m12.abs())
            .max(self.m21.abs())
            .max(self.m22.abs())
    }

    pub fn commutator(&self, other: &Mat2) -> Mat2 {
        *self * *other - *other * *self
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.m11 * v[0] + self.m12 * v[1],
            self.m21 * v[0] + self.m22 * v[1],
        ]
    }

    /// Angle of `self · e_θ`, in `(-π, π]`, together with its length.
    pub fn image_of_direction(&self, theta: f64) -> (f64, f64) {
        let (s, c) = theta.sin_cos();
        let [x, y] = self.apply([c, s]);
        (y.atan2(x), x.hypot(y))
    }

    pub fn is_finite(&self) -> bool {
        self.m11.is_finite() && self.m12.is_finite() && self.m21.is_finite() && self.m22.is_finite()
    }

    /// Real eigenvalues, if any, largest first.
    pub fn real_eigenvalues(&self) -> Option<(f64, f64)> {
        let tr = self.trace();
        let det = self.det();
        let disc = 0.25 * tr * tr - det;
        if disc < 0.0 {
            return None;
        }
        let root = disc.sqrt();
        // avoid cancellation for the smaller root
        let big = 0.5 * tr + root.copysign(tr);
        let small = if big != 0.0 { det / big } else { 0.5 * tr - root };
        Some(if big >= small { (big, small) } else { (small, big) })
    }

    /// An eigenvector for the real eigenvalue `lambda`, unit length.
    pub fn eigenvector(&self, lambda: f64) -> [f64; 2] {
        // the two rows of (A - λ) give two candidate null vectors; take the better conditioned
        let c1 = [self.m12, lambda - self.m11];
        let c2 = [lambda - self.m22, self.m21];
        let n1 = c1[0].hypot(c1[1]);
        let n2 = c2[0].hypot(c2[1]);
        if n1 >= n2 && n1 > 0.0 {
            [c1[0] / n1, c1[1] / n1]
        } else if n2 > 0.0 {
            [c2[0] / n2, c2[1] / n2]
        } else {
            [1.0, 0.0]
        }
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, b: Mat2) -> Mat2 {
        Mat2::new(
            self.m11 * b.m11 + self.m12 * b.m21,
            self.m11 * b.m12 + self.m12 * b.m22,
            self.m21 * b.m11 + self.m22 * b.m21,
            self.m21 * b.m12 + self.m22 * b.m22,
        )
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, b: Mat2) -> Mat2 {
        Mat2::new(self.m11 + b.m11, self.m12 + b.m12, self.m21 + b.m21, self.m22 + b.m22)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, b: Mat2) -> Mat2 {
        Mat2::new(self.m11 - b.m11, self.m12 - b.m12, self.m21 - b.m21, self.m22 - b.m22)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-1.0)
    }
}
