//! Free, M-modified and polymer Prüfer phases.
//!
//! All phases are continuous lifts. The free phase moves site by site with
//! increments in `(-π/2, 3π/2)`. The polymer phase is the M-modified phase
//! read at polymer boundaries; it is obtained from the free phase through
//! the lifted map `m`, which keeps a single unambiguous lift at any `ε`.

pub mod dyson_schmidt;
pub mod lemmas;
pub mod oscillation;

use crate::error::{Error, Result};
use crate::exec::{mean_and_stderr, MonteCarlo};
use crate::mat2::Mat2;
use crate::model::{sample_polymers, Polymer, PolymerEnsemble, RealizationStream};
use crate::transfer::CriticalData;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

pub use dyson_schmidt::{
    classify_region, ds_step_d, ds_step_q, ProjectivePoint, Region, RegionParams,
};
pub use lemmas::{check_lemma_4_1, check_lemma_4_2, Lemma41Report, Lemma42Report};
pub use oscillation::{oscillation_check, OscillationReport};

/// Reduces an angle to `(-π, π]`.
pub fn wrap_pi(x: f64) -> f64 {
    let r = x - 2.0 * PI * (x / (2.0 * PI)).round();
    if r <= -PI {
        r + 2.0 * PI
    } else if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// One free Prüfer step across a site with potential `v` and hopping `t`.
///
/// Returns the lifted phase of `T̂ e_θ` in `(θ - π/2, θ + 3π/2)` and the log
/// of its length.
pub fn free_pruefer_step(theta: f64, v: f64, t: f64, e: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    let x = ((v - e) * c - t * t * s) / t;
    let y = c / t;
    let inc = FRAC_PI_2 + wrap_pi(y.atan2(x) - theta - FRAC_PI_2);
    (theta + inc, x.hypot(y).ln())
}

/// Final free phase after running through the sites `(t, v)` from `theta0`.
pub fn free_pruefer_run(t: &[f64], v: &[f64], e: f64, theta0: f64) -> f64 {
    t.iter()
        .zip(v)
        .fold(theta0, |th, (&t, &v)| free_pruefer_step(th, v, t, e).0)
}

/// The lifted projective action of `b` (with `det b > 0`).
///
/// The image of `θ ∈ [0, π)` is placed in `[b₀, b₀ + π)` with `b₀ ∈ [-π, π)`
/// the angle of `b e₀`, and the map is extended by `θ + π ↦ image + π`.
/// Returns the lifted angle and the length `|b e_θ|`.
pub fn lift_map(b: &Mat2, theta: f64) -> (f64, f64) {
    let j = (theta / PI).floor();
    let mut theta_r = theta - j * PI;
    let mut j = j;
    if theta_r >= PI {
        theta_r -= PI;
        j += 1.0;
    }
    let mut b0 = b.m21.atan2(b.m11);
    if b0 >= PI {
        b0 -= 2.0 * PI;
    }
    let (ang, len) = b.image_of_direction(theta_r);
    let img = theta_r + b0 + wrap_pi(ang - theta_r - b0);
    (img + j * PI, len)
}

/// `m(θ)`: lifted phase of `M e_θ`.
pub fn m_modify(theta: f64, m: &Mat2) -> f64 {
    lift_map(m, theta).0
}

/// Inverse of [`m_modify`].
pub fn m_unmodify(theta: f64, m_inv: &Mat2) -> f64 {
    lift_map(m_inv, theta).0
}

/// One polymer step of the M-modified phase taken directly at polymer level:
/// the increment is `π l + wrap(angle(A e_θ) - θ - π l)`, where `A` is the
/// conjugated transfer matrix. Agrees with the site-resolved phase while the
/// true increment stays within `π/2`-ish of `π l`, i.e. for small `ε`.
pub fn polymer_lift_step(theta: f64, conj: &Mat2, label: i64) -> f64 {
    let (ang, _) = conj.image_of_direction(theta);
    let base = PI * label as f64;
    theta + base + wrap_pi(ang - theta - base)
}

/// Integer `l_σ` with free increment `π l_σ` across `σ` at the critical
/// energy, starting from `M⁻¹ e_{π/2}`.
pub fn gap_label(p: &Polymer, data: &CriticalData) -> Result<i64> {
    let start = m_unmodify(FRAC_PI_2, &data.m_inv);
    let end = free_pruefer_run(p.hoppings(), p.potentials(), data.e_c, start);
    let ratio = (end - start) / PI;
    let l = ratio.round();
    if (ratio - l).abs() > 1e-6 {
        return Err(Error::Consistency(format!(
            "phase increment {ratio}π across polymer is not a multiple of π"
        )));
    }
    Ok(l as i64)
}

/// `𝒩(E_c) = ⟨l_σ⟩ / ⟨L_σ⟩` over the support atoms.
pub fn ids_at_critical(data: &CriticalData) -> Result<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for a in &data.atoms {
        num += a.weight * gap_label(&a.polymer, data)? as f64;
        den += a.weight * a.polymer.len() as f64;
    }
    Ok(num / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Granularity {
    PerSite,
    PerPolymer,
}

/// Lifted phases and log-amplitudes, one entry per step plus the start.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrueferTrajectory {
    pub granularity: Granularity,
    /// Energy offset from the critical energy (per-polymer runs only).
    pub epsilon: f64,
    pub theta: Vec<f64>,
    pub log_r: Vec<f64>,
    /// Cumulative `Σ l_σ` before each entry (per-polymer runs only).
    pub label_sum: Vec<i64>,
    /// Cumulative site count before each entry.
    pub sites: Vec<usize>,
}

impl PrueferTrajectory {
    pub fn steps(&self) -> usize {
        self.theta.len() - 1
    }

    /// `θ(n) - π Σ_{k<n} l_{σ_k}`.
    pub fn excess(&self, n: usize) -> f64 {
        self.theta[n] - PI * self.label_sum.get(n).copied().unwrap_or(0) as f64
    }

    /// `(θ(N) - θ(0)) / (π · sites)`.
    pub fn rotation_ids(&self) -> f64 {
        let n = self.steps();
        (self.theta[n] - self.theta[0]) / (PI * self.sites[n] as f64)
    }
}

/// Free phase trajectory over the sites `(t, v)` at energy `e`.
pub fn free_pruefer_trajectory(t: &[f64], v: &[f64], e: f64, theta0: f64) -> PrueferTrajectory {
    let mut theta = Vec::with_capacity(t.len() + 1);
    let mut log_r = Vec::with_capacity(t.len() + 1);
    let (mut th, mut lr) = (theta0, 0.0);
    theta.push(th);
    log_r.push(lr);
    for (&t, &v) in t.iter().zip(v) {
        let (n, l) = free_pruefer_step(th, v, t, e);
        th = n;
        lr += l;
        theta.push(th);
        log_r.push(lr);
    }
    PrueferTrajectory {
        granularity: Granularity::PerSite,
        epsilon: f64::NAN,
        sites: (0..theta.len()).collect(),
        label_sum: Vec::new(),
        theta,
        log_r,
    }
}

/// Site-resolved stepper for the M-modified polymer phase at `E_c + ε`.
#[derive(Debug, Clone)]
pub struct PolymerPruefer<'a> {
    data: &'a CriticalData,
    e: f64,
    phi: f64,
    log_amp: f64,
}

impl<'a> PolymerPruefer<'a> {
    /// Starts at M-modified phase `theta0`.
    pub fn new(data: &'a CriticalData, eps: f64, theta0: f64) -> Self {
        Self {
            data,
            e: data.e_c + eps,
            phi: m_unmodify(theta0, &data.m_inv),
            log_amp: 0.0,
        }
    }

    /// Advances across one polymer.
    pub fn step(&mut self, p: &Polymer) {
        for (v, t) in p.sites() {
            let (n, l) = free_pruefer_step(self.phi, v, t, self.e);
            self.phi = n;
            self.log_amp += l;
        }
    }

    /// Current M-modified phase.
    pub fn theta(&self) -> f64 {
        m_modify(self.phi, &self.data.m)
    }

    /// Current `log R`, the log length of `M` applied to the solution vector.
    pub fn log_r(&self) -> f64 {
        self.log_amp + lift_map(&self.data.m, self.phi).1.ln()
    }

    /// The underlying free phase.
    pub fn free_phase(&self) -> f64 {
        self.phi
    }
}

/// Default starting phase `m(0)`, the image of the Dirichlet direction.
pub fn default_theta0(data: &CriticalData) -> f64 {
    m_modify(0.0, &data.m)
}

/// M-modified polymer phase trajectory at `E_c + ε`.
pub fn polymer_pruefer_run(
    config: &[Polymer],
    data: &CriticalData,
    eps: f64,
    theta0: f64,
) -> Result<PrueferTrajectory> {
    let n = config.len();
    let mut run = PolymerPruefer::new(data, eps, theta0);
    let mut theta = Vec::with_capacity(n + 1);
    let mut log_r = Vec::with_capacity(n + 1);
    let mut label_sum = Vec::with_capacity(n + 1);
    let mut sites = Vec::with_capacity(n + 1);
    let (mut ls, mut ss) = (0i64, 0usize);
    theta.push(run.theta());
    log_r.push(run.log_r());
    label_sum.push(0);
    sites.push(0);
    let mut cache: Option<(&Polymer, i64)> = None;
    for p in config {
        let l = match cache {
            Some((q, l)) if q == p => l,
            _ => gap_label(p, data)?,
        };
        cache = Some((p, l));
        run.step(p);
        ls += l;
        ss += p.len();
        theta.push(run.theta());
        log_r.push(run.log_r());
        label_sum.push(ls);
        sites.push(ss);
    }
    Ok(PrueferTrajectory {
        granularity: Granularity::PerPolymer,
        epsilon: eps,
        theta,
        log_r,
        label_sum,
        sites,
    })
}

/// Times (in polymer steps) between successive crossings of new multiples of
/// `π` by the excess phase `θ - πΣl`, in the direction of the drift. The first
/// loop time is measured from step 0.
pub fn detect_loops(traj: &PrueferTrajectory) -> Vec<u64> {
    let n = traj.steps();
    if n == 0 {
        return Vec::new();
    }
    let dir = if traj.epsilon > 0.0 {
        1.0
    } else if traj.epsilon < 0.0 {
        -1.0
    } else {
        let net = traj.excess(n) - traj.excess(0);
        if net == 0.0 {
            return Vec::new();
        }
        net.signum()
    };
    let mut level = (dir * traj.excess(0) / PI).floor();
    let mut last = 0u64;
    let mut out = Vec::new();
    for i in 1..=n {
        let cur = (dir * traj.excess(i) / PI).floor();
        while cur > level {
            level += 1.0;
            out.push(i as u64 - last);
            last = i as u64;
        }
    }
    out
}

/// Rotation-number estimate of `𝒩(E_c + ε)` over `reps` realizations of
/// `n_polymers` polymers each.
pub fn ids_by_rotation(
    ensemble: &PolymerEnsemble,
    data: &CriticalData,
    eps: f64,
    n_polymers: usize,
    mc: &MonteCarlo,
) -> (f64, f64) {
    let theta0 = default_theta0(data);
    let vals = mc.map(|rep| {
        let mut st = RealizationStream::new(mc.seed, rep as u64);
        let mut run = PolymerPruefer::new(data, eps, theta0);
        let mut sites = 0usize;
        let start = run.theta();
        for _ in 0..n_polymers {
            let p = ensemble.sample(st.rng());
            run.step(&p);
            sites += p.len();
        }
        (run.theta() - start) / (PI * sites as f64)
    });
    mean_and_stderr(&vals)
}

/// One realization's polymer trajectory drawn from `(seed, stream)`.
pub fn sample_trajectory(
    ensemble: &PolymerEnsemble,
    data: &CriticalData,
    eps: f64,
    n_polymers: usize,
    seed: u64,
    stream: u64,
) -> Result<PrueferTrajectory> {
    let mut st = RealizationStream::new(seed, stream);
    let config = sample_polymers(ensemble, n_polymers, &mut st);
    polymer_pruefer_run(&config, data, eps, default_theta0(data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{dimer_to_ensemble, flatten, DimerHoppingModel, XDist};
    use crate::transfer::compute_critical_data;
    use proptest::prelude::*;

    fn uniform_data() -> (PolymerEnsemble, CriticalData) {
        let m = DimerHoppingModel::new(1.2, 0.4, 1.0, 0.0, XDist::Uniform).unwrap();
        let ens = dimer_to_ensemble(&m, None).unwrap().with_quadrature(8);
        let cd = compute_critical_data(&ens, 0.0).unwrap();
        (ens, cd)
    }

    fn tilted_data() -> (PolymerEnsemble, CriticalData) {
        // powers of a hyperbolic polymer share a non-trivial basis M
        let s = Polymer::new(vec![0.9, 1.7, 0.6], vec![3.0, -0.4, 0.7]).unwrap();
        let s2 = Polymer::new(
            [s.hoppings(), s.hoppings()].concat(),
            [s.potentials(), s.potentials()].concat(),
        )
        .unwrap();
        let ens = PolymerEnsemble::discrete(vec![(s, 0.5), (s2, 0.5)]).unwrap();
        let cd = compute_critical_data(&ens, 0.0).unwrap();
        (ens, cd)
    }

    #[test]
    fn free_step_examples() {
        let (th, _) = free_pruefer_step(0.3, 0.0, 1.0, 0.0);
        assert!((th - 0.3 - FRAC_PI_2).abs() < 1e-14);
        let n = 40;
        let th = free_pruefer_run(&vec![1.0; n], &vec![0.0; n], 0.0, 0.0);
        assert!((th - n as f64 * FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn wrap_is_half_open() {
        assert_eq!(wrap_pi(PI), PI);
        assert_eq!(wrap_pi(-PI), PI);
        assert!((wrap_pi(3.0 * PI + 0.1) - (-PI + 0.1)).abs() < 1e-12);
    }

    #[test]
    fn diagonal_fixes_horizontal_direction() {
        let d = Mat2::hyperbolic(0.3);
        assert_eq!(lift_map(&d, 0.0).0, 0.0);
        assert!((lift_map(&d, FRAC_PI_2).0 - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn identity_m_is_identity_map() {
        for &th in &[-4.0, -0.2, 0.0, 1.0, 3.0, 7.5] {
            assert!((m_modify(th, &Mat2::IDENTITY) - th).abs() < 1e-12);
        }
    }

    #[test]
    fn m_zero_lies_in_half_open_range() {
        let (_, cd) = tilted_data();
        let m0 = m_modify(0.0, &cd.m);
        assert!((-PI..PI).contains(&m0));
    }

    #[test]
    fn dimer_labels_are_one() {
        let (_, cd) = uniform_data();
        for a in &cd.atoms {
            assert_eq!(gap_label(&a.polymer, &cd).unwrap(), 1);
        }
        assert!((ids_at_critical(&cd).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn free_block_label_counts_rotations() {
        // t = 1, v = 0 two-site block at E = 0 is -1: two quarter turns
        let p = Polymer::dimer(1.0, 1.0).unwrap();
        let q = Polymer::dimer(2.0, 1.0).unwrap();
        let ens = PolymerEnsemble::discrete(vec![(p.clone(), 0.5), (q, 0.5)]).unwrap();
        let cd = compute_critical_data(&ens, 0.0).unwrap();
        assert_eq!(gap_label(&p, &cd).unwrap(), 1);
    }

    #[test]
    fn non_critical_label_is_rejected() {
        let (_, mut cd) = uniform_data();
        cd.e_c = 0.3;
        let p = Polymer::dimer(1.3, 1.0).unwrap();
        assert!(matches!(gap_label(&p, &cd), Err(Error::Consistency(_))));
    }

    #[test]
    fn zero_epsilon_from_fixed_direction_advances_by_labels() {
        for (ens, cd) in [uniform_data(), tilted_data()] {
            let mut st = RealizationStream::new(9, 0);
            let config = sample_polymers(&ens, 300, &mut st);
            let tr = polymer_pruefer_run(&config, &cd, 0.0, FRAC_PI_2).unwrap();
            let n = tr.steps();
            let want = PI * tr.label_sum[n] as f64;
            assert!((tr.theta[n] - tr.theta[0] - want).abs() < 1e-8);
            assert!(detect_loops(&tr).is_empty());
        }
    }

    #[test]
    fn polymer_level_lift_matches_site_route() {
        for (ens, cd) in [uniform_data(), tilted_data()] {
            for eps in [1e-3, -2e-3, 0.02] {
                let mut st = RealizationStream::new(4, 1);
                let config = sample_polymers(&ens, 2000, &mut st);
                let tr = polymer_pruefer_run(&config, &cd, eps, default_theta0(&cd)).unwrap();
                let mut th = tr.theta[0];
                for (i, p) in config.iter().enumerate() {
                    let a = cd.conjugated(p, cd.e_c + eps);
                    let l = gap_label(p, &cd).unwrap();
                    th = polymer_lift_step(th, &a, l);
                    assert!((th - tr.theta[i + 1]).abs() < 1e-8, "step {i}: {th} vs {}", tr.theta[i + 1]);
                }
            }
        }
    }

    #[test]
    fn loops_telescope() {
        let (ens, cd) = uniform_data();
        let tr = sample_trajectory(&ens, &cd, 0.2, 5000, 1, 0).unwrap();
        let loops = detect_loops(&tr);
        assert!(!loops.is_empty());
        let total: u64 = loops.iter().sum();
        assert!(total <= tr.steps() as u64);
        let expected = ((tr.excess(tr.steps())) / PI).floor() - (tr.excess(0) / PI).floor();
        assert!(loops.len() as f64 <= expected.max(0.0) + 0.5);
    }

    #[test]
    fn epsilon_sign_sets_drift_direction() {
        let (ens, cd) = uniform_data();
        let up = sample_trajectory(&ens, &cd, 0.1, 20000, 2, 0).unwrap();
        let down = sample_trajectory(&ens, &cd, -0.1, 20000, 2, 0).unwrap();
        let n = up.steps();
        assert!(up.excess(n) - up.excess(0) > PI);
        assert!(down.excess(n) - down.excess(0) < -PI);
    }

    #[test]
    fn log_r_matches_direct_product() {
        let (ens, cd) = tilted_data();
        let mut st = RealizationStream::new(5, 0);
        let config = sample_polymers(&ens, 6, &mut st);
        let eps = 0.05;
        let th0 = default_theta0(&cd);
        let tr = polymer_pruefer_run(&config, &cd, eps, th0).unwrap();
        let mut v = [th0.cos(), th0.sin()];
        for p in &config {
            v = cd.conjugated(p, eps).apply(v);
        }
        let r = v[0].hypot(v[1]);
        let r0 = tr.log_r[0].exp();
        assert!((tr.log_r[6] - (r * r0).ln()).abs() < 1e-10);
        assert!(wrap_pi(2.0 * (v[1].atan2(v[0]) - tr.theta[6])).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn m_is_pi_equivariant(
            th in -10.0..10.0f64,
            a in 0.3..3.0f64, b in -2.0..2.0f64, c in -2.0..2.0f64,
        ) {
            let d = (1.0 + b * c) / a;
            let m = Mat2::new(a, b, c, d);
            prop_assert!((m_modify(th + PI, &m) - m_modify(th, &m) - PI).abs() < 1e-9);
            prop_assert!((m_unmodify(m_modify(th, &m), &m.inverse().unwrap()) - th).abs() < 1e-8);
        }

        #[test]
        fn m_is_increasing_with_bounded_slope(
            a in 0.3..3.0f64, b in -2.0..2.0f64, c in -2.0..2.0f64,
        ) {
            let d = (1.0 + b * c) / a;
            let m = Mat2::new(a, b, c, d);
            let k2 = m.cond().powi(2);
            let h = 1e-6;
            for i in 0..200 {
                let th = -PI + i as f64 * 0.0314;
                let slope = (m_modify(th + h, &m) - m_modify(th - h, &m)) / (2.0 * h);
                let r = m.image_of_direction(th).1;
                prop_assert!((slope - 1.0 / (r * r)).abs() < 1e-5 * slope.max(1.0));
                prop_assert!(slope >= 1.0 / k2 * (1.0 - 1e-6) && slope <= k2 * (1.0 + 1e-6));
            }
        }

        #[test]
        fn free_increments_stay_in_window(
            th in -10.0..10.0f64, v in -3.0..3.0f64, t in 0.1..3.0f64, e in -4.0..4.0f64,
        ) {
            let (n, _) = free_pruefer_step(th, v, t, e);
            prop_assert!(n - th > -FRAC_PI_2 && n - th < 1.5 * PI);
        }

        #[test]
        fn free_phase_is_increasing_in_energy(seed in 0u64..1000, e in -2.0..2.0f64) {
            let (ens, _) = uniform_data();
            let mut st = RealizationStream::new(seed, 0);
            let (t, v) = flatten(&sample_polymers(&ens, 20, &mut st));
            let lo = free_pruefer_run(&t, &v, e, 0.0);
            let hi = free_pruefer_run(&t, &v, e + 1e-3, 0.0);
            prop_assert!(hi > lo);
        }
    }
}
