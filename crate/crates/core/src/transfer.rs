//! Transfer matrices, hyperbolic critical energies and the expansion
//! coefficients of the conjugated polymer transfer matrices.

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::model::{Atom, Polymer, PolymerEnsemble};
use serde::{Deserialize, Serialize};

/// Number of polymer steps between renormalizations of a long product.
const RENORM_EVERY: usize = 8;

/// `(1/t) [[v - E, -t²], [1, 0]]`.
pub fn single_site_transfer(v: f64, t: f64, e: f64) -> Result<Mat2> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("hopping {t} must be positive")));
    }
    Ok(site(v, t, e))
}

#[inline]
pub(crate) fn site(v: f64, t: f64, e: f64) -> Mat2 {
    Mat2::new((v - e) / t, -t, 1.0 / t, 0.0)
}

/// `T̂(site K-1) ⋯ T̂(site 0)` at energy `e`.
pub fn polymer_transfer(p: &Polymer, e: f64) -> Mat2 {
    p.sites()
        .fold(Mat2::IDENTITY, |acc, (v, t)| site(v, t, e) * acc)
}

/// The polymer transfer matrix and its energy derivative, by the product rule.
pub fn polymer_transfer_with_derivative(p: &Polymer, e: f64) -> (Mat2, Mat2) {
    let mut t_acc = Mat2::IDENTITY;
    let mut d_acc = Mat2::ZERO;
    for (v, t) in p.sites() {
        let s = site(v, t, e);
        let ds = Mat2::new(-1.0 / t, 0.0, 0.0, 0.0);
        d_acc = ds * t_acc + s * d_acc;
        t_acc = s * t_acc;
    }
    (t_acc, d_acc)
}

/// `log ‖T_{σ_{n-1}} ⋯ T_{σ_0}‖` with periodic renormalization.
pub fn transfer_product_norm(polymers: &[Polymer], e: f64) -> f64 {
    let mut acc = Mat2::IDENTITY;
    let mut log_norm = 0.0;
    for (i, p) in polymers.iter().enumerate() {
        acc = polymer_transfer(p, e) * acc;
        if (i + 1) % RENORM_EVERY == 0 || acc.max_abs() > 1e100 {
            let n = acc.norm();
            log_norm += n.ln();
            acc = acc.scale(1.0 / n);
        }
    }
    log_norm + acc.norm().ln()
}

/// Worst-case residuals found by [`detect_critical`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalReport {
    pub is_critical: bool,
    /// Largest `‖[T_σ, T_σ']‖` over atom pairs.
    pub max_commutator: f64,
    /// Largest distance to the nearest of `±1` among non-hyperbolic atoms
    /// (0 if every atom is hyperbolic).
    pub max_identity_residual: f64,
    /// Smallest `|Tr T_σ|` over atoms.
    pub min_abs_trace: f64,
    pub atoms: usize,
}

fn atoms_of(ensemble: &PolymerEnsemble) -> Result<Vec<Atom>> {
    ensemble.support_atoms()
}

/// Checks whether `e_c` is a hyperbolic critical energy of the ensemble.
pub fn detect_critical(ensemble: &PolymerEnsemble, e_c: f64, tol: f64) -> Result<CriticalReport> {
    let atoms = atoms_of(ensemble)?;
    let ts: Vec<Mat2> = atoms.iter().map(|a| polymer_transfer(&a.polymer, e_c)).collect();
    let mut max_comm: f64 = 0.0;
    for i in 0..ts.len() {
        for j in (i + 1)..ts.len() {
            max_comm = max_comm.max(ts[i].commutator(&ts[j]).norm());
        }
    }
    let mut max_id: f64 = 0.0;
    let mut min_tr = f64::INFINITY;
    let mut each_ok = true;
    for t in &ts {
        let tr = t.trace().abs();
        min_tr = min_tr.min(tr);
        if tr > 2.0 + tol {
            continue;
        }
        let r = (*t - Mat2::IDENTITY).norm().min((*t + Mat2::IDENTITY).norm());
        max_id = max_id.max(r);
        if r > tol {
            each_ok = false;
        }
    }
    Ok(CriticalReport {
        is_critical: each_ok && max_comm <= tol,
        max_commutator: max_comm,
        max_identity_residual: max_id,
        min_abs_trace: min_tr,
        atoms: ts.len(),
    })
}

/// Critical data of one atom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomData {
    pub polymer: Polymer,
    pub weight: f64,
    pub sign: f64,
    pub kappa: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Sign conditions `a_σ ≥ 0` and `a_σ² - b_σ² - c_σ² ≥ 0` over the atoms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignReport {
    pub atoms: usize,
    pub min_a: f64,
    pub min_form: f64,
    /// Atoms with `a < -A_TOL` or `a² - b² - c² < -FORM_TOL`.
    pub violations: usize,
}

impl SignReport {
    pub const A_TOL: f64 = 1e-10;
    pub const FORM_TOL: f64 = 1e-8;
}

/// Per-ensemble data at a hyperbolic critical energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalData {
    pub e_c: f64,
    pub m: Mat2,
    pub m_inv: Mat2,
    pub atoms: Vec<AtomData>,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    /// Weighted `⟨log κ⟩` after orientation, negative.
    pub mean_log_kappa: f64,
    /// Whether the orientation was flipped to make `⟨log κ⟩ < 0`.
    pub swapped: bool,
    pub max_commutator: f64,
    pub max_offdiagonal: f64,
    /// Largest `|𝟙|`-coefficient in the expansion; zero up to rounding.
    pub max_identity_coefficient: f64,
}

impl CriticalData {
    /// Rejects ensembles with `max |c_σ| > tol`.
    pub fn require_zero_c(&self, tol: f64) -> Result<()> {
        let worst = self.atoms.iter().map(|a| a.c.abs()).fold(0.0, f64::max);
        if worst > tol {
            return Err(Error::Unsupported(format!(
                "expansion coefficient c reaches {worst:e}, above {tol:e}"
            )));
        }
        Ok(())
    }

    pub fn sign_report(&self) -> SignReport {
        let mut r = SignReport {
            atoms: self.atoms.len(),
            min_a: f64::INFINITY,
            min_form: f64::INFINITY,
            violations: 0,
        };
        for at in &self.atoms {
            let form = at.a * at.a - at.b * at.b - at.c * at.c;
            r.min_a = r.min_a.min(at.a);
            r.min_form = r.min_form.min(form);
            if at.a < -SignReport::A_TOL || form < -SignReport::FORM_TOL {
                r.violations += 1;
            }
        }
        r
    }

    /// `M T^{E} M^{-1}` for a polymer.
    pub fn conjugated(&self, p: &Polymer, e: f64) -> Mat2 {
        self.m * polymer_transfer(p, e) * self.m_inv
    }

    /// Sign and `κ` read off the conjugated critical transfer matrix of `p`.
    pub fn sign_and_kappa(&self, p: &Polymer) -> (f64, f64) {
        let d = self.conjugated(p, self.e_c);
        let s = if d.m11 + d.m22 >= 0.0 { 1.0 } else { -1.0 };
        (s, s * d.m11)
    }
}

/// Coefficients `(a, b, c)` and the identity residual of `s·M ∂T M⁻¹ D_κ⁻¹`.
fn expansion(m: &Mat2, m_inv: &Mat2, s: f64, kappa: f64, dt: &Mat2) -> (f64, f64, f64, f64) {
    let x = (*m * *dt * *m_inv).scale(s) * Mat2::diag(1.0 / kappa, kappa);
    let c0 = 0.5 * (x.m11 + x.m22);
    let c = 0.5 * (x.m11 - x.m22);
    let a = 0.5 * (x.m21 - x.m12);
    let b = 0.5 * (x.m12 + x.m21);
    (a, b, c, c0.abs() / x.max_abs().max(1.0))
}

/// Off-diagonal size of `M T M⁻¹` relative to its norm.
fn offdiagonal(d: &Mat2) -> f64 {
    d.m12.abs().max(d.m21.abs()) / d.norm().max(1.0)
}

/// Tolerance for commutators, off-diagonals and the identity coefficient.
pub const CRITICAL_TOL: f64 = 1e-8;

/// Builds the simultaneous diagonalization and all per-atom data at `e_c`.
pub fn compute_critical_data(ensemble: &PolymerEnsemble, e_c: f64) -> Result<CriticalData> {
    let atoms = atoms_of(ensemble)?;
    let report = detect_critical(ensemble, e_c, CRITICAL_TOL)?;
    if !report.is_critical {
        return Err(Error::Consistency(format!(
            "energy {e_c} is not a hyperbolic critical energy (commutator {:e}, identity residual {:e})",
            report.max_commutator, report.max_identity_residual
        )));
    }
    let ts: Vec<(Mat2, Mat2)> = atoms
        .iter()
        .map(|a| polymer_transfer_with_derivative(&a.polymer, e_c))
        .collect();

    // reference atom: the heaviest hyperbolic one
    let reference = ts
        .iter()
        .zip(&atoms)
        .enumerate()
        .filter(|(_, ((t, _), _))| t.trace().abs() > 2.0 + CRITICAL_TOL)
        .max_by(|a, b| a.1 .1.weight.total_cmp(&b.1 .1.weight))
        .map(|(i, _)| i)
        .ok_or_else(|| Error::Degenerate("every atom is ±1 at the critical energy".into()))?;
    let t_ref = ts[reference].0;
    let (l1, l2) = t_ref
        .real_eigenvalues()
        .ok_or_else(|| Error::Consistency("reference atom is not hyperbolic".into()))?;
    // first column belongs to the eigenvalue of smaller modulus
    let (first, second) = if l1.abs() <= l2.abs() { (l1, l2) } else { (l2, l1) };
    let v1 = canonical(t_ref.eigenvector(first));
    let mut v2 = canonical(t_ref.eigenvector(second));
    let mut p = Mat2::new(v1[0], v2[0], v1[1], v2[1]);
    if p.det() < 0.0 {
        v2 = [-v2[0], -v2[1]];
        p = Mat2::new(v1[0], v2[0], v1[1], v2[1]);
    }
    let p = p.scale(1.0 / p.det().sqrt());
    let mut m_inv = p;
    let mut m = p
        .inverse()
        .ok_or_else(|| Error::Consistency("eigenvectors are parallel".into()))?;

    let total_weight: f64 = atoms.iter().map(|a| a.weight).sum();
    let mean_log = |m: &Mat2, m_inv: &Mat2| -> f64 {
        ts.iter()
            .zip(&atoms)
            .map(|((t, _), a)| {
                let d = *m * *t * *m_inv;
                a.weight * d.m11.abs().ln()
            })
            .sum::<f64>()
            / total_weight
    };
    let mut mean_log_kappa = mean_log(&m, &m_inv);
    if mean_log_kappa.abs() < 1e-12 {
        return Err(Error::Unsupported(
            "mean log kappa vanishes; the zero-drift case is not supported".into(),
        ));
    }
    let swapped = mean_log_kappa > 0.0;
    if swapped {
        m = Mat2::ROTATION * m;
        m_inv = m_inv * Mat2::ROTATION.transpose();
        mean_log_kappa = mean_log(&m, &m_inv);
    }

    let mut out = Vec::with_capacity(atoms.len());
    let mut max_off: f64 = 0.0;
    let mut max_c0: f64 = 0.0;
    for ((t, dt), atom) in ts.iter().zip(&atoms) {
        let d = m * *t * m_inv;
        max_off = max_off.max(offdiagonal(&d));
        let s = if d.m11 + d.m22 >= 0.0 { 1.0 } else { -1.0 };
        let kappa = s * d.m11;
        if !(kappa > 0.0) {
            return Err(Error::Consistency(format!(
                "diagonal entries of an atom have opposite signs ({}, {})",
                d.m11, d.m22
            )));
        }
        let (a, b, c, c0) = expansion(&m, &m_inv, s, kappa, dt);
        max_c0 = max_c0.max(c0);
        out.push(AtomData {
            polymer: atom.polymer.clone(),
            weight: atom.weight,
            sign: s,
            kappa,
            a,
            b,
            c,
        });
    }
    if max_off > CRITICAL_TOL {
        return Err(Error::Consistency(format!(
            "atoms are not simultaneously diagonalized (off-diagonal {max_off:e})"
        )));
    }
    if max_c0 > CRITICAL_TOL {
        return Err(Error::Consistency(format!(
            "identity coefficient {max_c0:e} in the expansion is not zero"
        )));
    }

    let c1 = out.iter().map(|a| a.a - a.b.abs()).fold(f64::INFINITY, f64::min);
    let c2 = out.iter().map(|a| a.a + a.b.abs()).fold(f64::NEG_INFINITY, f64::max);
    let c4 = out.iter().map(|a| a.kappa).fold(f64::NEG_INFINITY, f64::max);
    let mut data = CriticalData {
        e_c,
        m,
        m_inv,
        atoms: out,
        c1,
        c2,
        c3: 0.0,
        c4,
        mean_log_kappa,
        swapped,
        max_commutator: report.max_commutator,
        max_offdiagonal: max_off,
        max_identity_coefficient: max_c0,
    };
    data.c3 = data
        .atoms
        .iter()
        .map(|a| c3_of(&data, &a.polymer))
        .fold(0.0, f64::max);
    Ok(data)
}

/// Largest component first positive.
fn canonical(v: [f64; 2]) -> [f64; 2] {
    let lead = if v[0].abs() >= v[1].abs() { v[0] } else { v[1] };
    if lead < 0.0 {
        [-v[0], -v[1]]
    } else {
        v
    }
}

/// Grid of `ε` values over which `C₃` is maximized.
fn c3_grid() -> impl Iterator<Item = f64> {
    (1..=40).flat_map(|i| {
        let e = i as f64 / 40.0;
        [e, -e]
    })
}

fn c3_of(data: &CriticalData, p: &Polymer) -> f64 {
    c3_grid()
        .map(|eps| decompose(data, p, eps).map(|d| d.a_matrix.norm()).unwrap_or(0.0))
        .fold(0.0, f64::max)
}

/// `Q^ε_σ = s M T^{E_c+ε}_σ M⁻¹ D_κ⁻¹` together with the remainder `A^ε_σ`
/// of `Q = 𝟙 + ε(aJ + bS + cP) + ε²A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    pub sign: f64,
    pub kappa: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub q: Mat2,
    pub a_matrix: Mat2,
}

impl Decomposition {
    pub fn alpha(&self) -> f64 {
        self.a_matrix.m11
    }
    pub fn beta(&self) -> f64 {
        self.a_matrix.m12
    }
    pub fn gamma(&self) -> f64 {
        self.a_matrix.m21
    }
    pub fn delta(&self) -> f64 {
        self.a_matrix.m22
    }
}

/// Expansion of a single polymer (not necessarily an atom) at `E_c + ε`.
pub fn decompose(data: &CriticalData, p: &Polymer, eps: f64) -> Result<Decomposition> {
    let (t, dt) = polymer_transfer_with_derivative(p, data.e_c);
    let d = data.m * t * data.m_inv;
    if offdiagonal(&d) > CRITICAL_TOL {
        return Err(Error::Consistency(
            "polymer is not diagonalized by M at the critical energy".into(),
        ));
    }
    let s = if d.m11 + d.m22 >= 0.0 { 1.0 } else { -1.0 };
    let kappa = s * d.m11;
    let (a, b, c, _) = expansion(&data.m, &data.m_inv, s, kappa, &dt);
    let q = data.conjugated(p, data.e_c + eps).scale(s) * Mat2::diag(1.0 / kappa, kappa);
    let linear = Mat2::new(c, b - a, a + b, -c).scale(eps);
    let a_matrix = if eps == 0.0 {
        Mat2::ZERO
    } else {
        (q - Mat2::IDENTITY - linear).scale(1.0 / (eps * eps))
    };
    Ok(Decomposition {
        sign: s,
        kappa,
        a,
        b,
        c,
        q,
        a_matrix,
    })
}
