use pseudogap_core::exec::MonteCarlo;
use pseudogap_core::model::{
    dimer_to_ensemble, flatten, sample_polymers, DimerHoppingModel, PolymerEnsemble,
    RealizationStream, XDist,
};
use pseudogap_core::pruefer::{
    default_theta0, detect_loops, ids_at_critical, ids_by_rotation, polymer_pruefer_run,
    sample_trajectory,
};
use pseudogap_core::spectral::{eigen_count, ids_by_counting, JacobiMatrix};
use pseudogap_core::transfer::compute_critical_data;
use std::f64::consts::PI;

fn bernoulli() -> PolymerEnsemble {
    let m = DimerHoppingModel::new(1.4, 1.3, 1.0, 0.0, XDist::Bernoulli { p: 2.0 / 3.0 }).unwrap();
    dimer_to_ensemble(&m, None).unwrap()
}

fn uniform() -> PolymerEnsemble {
    let m = DimerHoppingModel::new(1.2, 0.4, 1.0, 0.0, XDist::Uniform).unwrap();
    dimer_to_ensemble(&m, None).unwrap().with_quadrature(8)
}

#[test]
fn counting_and_rotation_agree_on_bernoulli() {
    let ens = bernoulli();
    let cd = compute_critical_data(&ens, 0.0).unwrap();
    let mc = MonteCarlo::new(7, 6);
    for eps in [0.05, 0.15] {
        let (a, sa) = ids_by_counting(&ens, eps, 20_000, &mc).unwrap();
        let (b, sb) = ids_by_rotation(&ens, &cd, eps, 10_000, &mc);
        // the same realizations are used, so the gap is the O(1/N) boundary term
        assert!((a - b).abs() < 3.0 * (sa * sa + sb * sb).sqrt() + 1e-4, "{a} ± {sa} vs {b} ± {sb}");
    }
}

#[test]
fn labels_predict_ids_at_critical_energy() {
    let ens = uniform();
    let cd = compute_critical_data(&ens, 0.0).unwrap();
    let pred = ids_at_critical(&cd).unwrap();
    let (n, _) = ids_by_counting(&ens, 0.0, 1000, &MonteCarlo::new(2, 3)).unwrap();
    assert!((pred - n).abs() <= 2.0 / 1000.0);
}

#[test]
fn modified_phase_tracks_sturm_count() {
    let ens = uniform();
    let cd = compute_critical_data(&ens, 0.0).unwrap();
    for rep in 0..50u64 {
        let eps = -0.5 + rep as f64 * 0.02;
        let mut st = RealizationStream::new(31, rep);
        let config = sample_polymers(&ens, 100, &mut st);
        let tr = polymer_pruefer_run(&config, &cd, eps, default_theta0(&cd)).unwrap();
        let (t, v) = flatten(&config);
        let h = JacobiMatrix::from_sites(&t, &v).unwrap();
        let diff = tr.theta[tr.steps()] / PI - eigen_count(&h, eps) as f64;
        assert!(diff.abs() <= 2.5, "rep {rep}: {diff}");
    }
}

#[test]
fn loop_count_tracks_excess_phase() {
    let ens = uniform();
    let cd = compute_critical_data(&ens, 0.0).unwrap();
    let tr = sample_trajectory(&ens, &cd, 0.15, 20_000, 4, 0).unwrap();
    let loops = detect_loops(&tr);
    let n = tr.steps() as f64;
    let excess_rate = (tr.excess(tr.steps()) - tr.excess(0)) / (PI * n);
    assert!((loops.len() as f64 / n - excess_rate).abs() <= 2.0 / n);
}

#[test]
fn worker_count_does_not_change_results() {
    let ens = bernoulli();
    let cd = compute_critical_data(&ens, 0.0).unwrap();
    let a = ids_by_rotation(&ens, &cd, 0.1, 2000, &MonteCarlo::new(3, 8).with_workers(1));
    let b = ids_by_rotation(&ens, &cd, 0.1, 2000, &MonteCarlo::new(3, 8).with_workers(4));
    assert_eq!(a, b);
    let c = ids_by_counting(&ens, 0.1, 2000, &MonteCarlo::new(3, 8).with_workers(1)).unwrap();
    let d = ids_by_counting(&ens, 0.1, 2000, &MonteCarlo::new(3, 8).with_workers(3)).unwrap();
    assert_eq!(c, d);
}
