//! Subcommand bodies.

use crate::config::{LoadedConfig, Params};
use crate::output::{num, write_csv, write_json, Meta};
use crate::{CliError, Command};
use pseudogap_core::analytics::{
    holder_fit, lemma44_bound, ld_bound_check, renewal_stats, solve_nu, solve_rho_k, LdCheck,
    MomentFunction, NuSolution, Provenance,
};
use pseudogap_core::exec::{map_indexed, mean_and_stderr, MonteCarlo};
use pseudogap_core::model::{ModelConfig, PolymerEnsemble, RealizationStream};
use pseudogap_core::pruefer::{
    check_lemma_4_1, check_lemma_4_2, classify_region, detect_loops, ids_at_critical,
    oscillation_check, sample_trajectory, Lemma41Report, Lemma42Report, OscillationReport,
    ProjectivePoint, RegionParams,
};
use pseudogap_core::spectral::{
    eigenvalues_with_workers, ids_curve, ids_increments, lyapunov, sample_jacobi, Binning,
    SpectralHistogram, EIGEN_TOL,
};
use pseudogap_core::transfer::{compute_critical_data, CriticalData, SignReport};
use serde::Serialize;
use std::path::{Path, PathBuf};

/// Largest chain used by the oscillation check.
const OSCILLATION_MAX_SITES: usize = 500;

pub struct Context<'a> {
    pub model: &'a ModelConfig,
    pub params: &'a Params,
    pub ensemble: PolymerEnsemble,
    pub config_sha256: &'a str,
    pub seed: u64,
    pub workers: usize,
    pub out: &'a Path,
}

impl<'a> Context<'a> {
    pub fn new(
        loaded: &'a LoadedConfig,
        seed: u64,
        workers: usize,
        out: &'a Path,
    ) -> Result<Self, CliError> {
        Ok(Self {
            model: &loaded.config.model,
            params: &loaded.config.params,
            ensemble: loaded.config.model.build()?,
            config_sha256: &loaded.sha256,
            seed,
            workers,
            out,
        })
    }

    fn meta(&self, cmd: Command) -> Meta {
        Meta::new(cmd.name(), self.config_sha256, self.seed)
    }

    fn mc(&self) -> MonteCarlo {
        MonteCarlo::new(self.seed, self.params.reps).with_workers(self.workers)
    }

    fn critical_data(&self) -> Result<CriticalData, CliError> {
        Ok(compute_critical_data(&self.ensemble, self.params.e_c)?)
    }

    /// Closed form for the dimer model, exact atom sums otherwise.
    fn moments(&self, data: Option<&CriticalData>) -> Result<MomentFunction, CliError> {
        if let Some(m) = self.model.dimer_model() {
            return Ok(MomentFunction::from_dimer(&m));
        }
        match data {
            Some(d) => Ok(MomentFunction::from_critical_data(d)),
            None => Ok(MomentFunction::from_critical_data(&self.critical_data()?)),
        }
    }

    /// Independent seed per sub-suite of a command.
    fn sub_seed(&self, k: u64) -> u64 {
        self.seed ^ k.wrapping_mul(0x9e37_79b9_7f4a_7c15)
    }
}

pub fn dispatch(cmd: Command, ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    match cmd {
        Command::Spectrum => spectrum(ctx),
        Command::Ids => ids(ctx),
        Command::Rotation => rotation(ctx),
        Command::Nu => nu(ctx),
        Command::Lyapunov => lyapunov_cmd(ctx),
        Command::Renewal => renewal(ctx),
        Command::Holder => holder(ctx),
        Command::Verify => verify(ctx),
        Command::Criticaldata => criticaldata(ctx),
        Command::Trajectory => trajectory(ctx),
    }
}

fn spectrum(ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    let p = ctx.params;
    let mut rows = Vec::new();
    let mut all = Vec::new();
    for rep in 0..p.spectrum_reps {
        let h = sample_jacobi(&ctx.ensemble, p.n_sites, ctx.seed, rep as u64)?;
        let ev = eigenvalues_with_workers(&h, EIGEN_TOL, ctx.workers);
        for (i, e) in ev.iter().enumerate() {
            rows.push(vec![rep.to_string(), i.to_string(), num(*e)]);
        }
        all.extend(ev);
    }
    let binning = match p.bins {
        Some(bins) => Binning::Count { bins },
        None => Binning::FreedmanDiaconis,
    };
    let hist = SpectralHistogram::new(&all, binning)?;
    let hrows: Vec<Vec<String>> = hist
        .counts
        .iter()
        .zip(hist.edges.windows(2))
        .zip(hist.density())
        .map(|((c, w), d)| vec![num(w[0]), num(w[1]), c.to_string(), num(d)])
        .collect();
    let meta = ctx.meta(Command::Spectrum);
    Ok(vec![
        write_csv(ctx.out, "spectrum.csv", &meta, &["realization", "index", "energy"], &rows)?,
        write_csv(ctx.out, "histogram.csv", &meta, &["lo", "hi", "count", "density"], &hrows)?,
    ])
}

fn ids(ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    let c = ids_curve(&ctx.ensemble, &ctx.params.energies, ctx.params.n_sites, &ctx.mc())?;
    let rows: Vec<Vec<String>> = (0..c.energies.len())
        .map(|i| vec![num(c.energies[i]), num(c.values[i]), num(c.stderr[i])])
        .collect();
    Ok(vec![write_csv(
        ctx.out,
        "ids.csv",
        &ctx.meta(Command::Ids),
        &["energy", "ids", "stderr"],
        &rows,
    )?])
}

/// Per-realization trajectories at one offset: rotation IDS, loop times and
/// polymer steps.
fn trajectories(
    ctx: &Context,
    data: &CriticalData,
    eps: f64,
) -> Result<Vec<(f64, Vec<u64>, u64)>, CliError> {
    let p = ctx.params;
    let runs = map_indexed(p.reps, ctx.workers, |rep| {
        sample_trajectory(&ctx.ensemble, data, eps, p.n_polymers, ctx.seed, rep as u64)
            .map(|tr| (tr.rotation_ids(), detect_loops(&tr), tr.steps() as u64))
    });
    Ok(runs.into_iter().collect::<Result<Vec<_>, _>>()?)
}

fn rotation(ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    let data = ctx.critical_data()?;
    let mut rows = Vec::new();
    for &eps in &ctx.params.epsilons {
        let runs = trajectories(ctx, &data, eps)?;
        let ids: Vec<f64> = runs.iter().map(|r| r.0).collect();
        let loops: Vec<f64> = runs.iter().map(|r| r.1.len() as f64).collect();
        let (m, se) = mean_and_stderr(&ids);
        let (lm, lse) = mean_and_stderr(&loops);
        rows.push(vec![
            num(eps),
            num(data.e_c + eps),
            num(m),
            num(se),
            num(lm),
            num(lse),
        ]);
    }
    Ok(vec![write_csv(
        ctx.out,
        "rotation.csv",
        &ctx.meta(Command::Rotation),
        &["epsilon", "energy", "ids_rotation", "stderr", "loops_mean", "loops_stderr"],
        &rows,
    )?])
}

#[derive(Serialize)]
struct NuOut {
    #[serde(flatten)]
    solution: NuSolution,
    provenance: Provenance,
}

fn nu(ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    let mf = ctx.moments(None)?;
    let solution = solve_nu(&mf)?;
    let out = NuOut {
        solution,
        provenance: mf.provenance(),
    };
    Ok(vec![write_json(ctx.out, "nu.json", &ctx.meta(Command::Nu), &out)?])
}

fn lyapunov_cmd(ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    let mc = ctx.mc();
    let rows: Vec<Vec<String>> = ctx
        .params
        .energies
        .iter()
        .map(|&e| {
            let (g, se) = lyapunov(&ctx.ensemble, e, ctx.params.n_polymers, &mc);
            vec![num(e), num(g), num(se)]
        })
        .collect();
    Ok(vec![write_csv(
        ctx.out,
        "lyapunov.csv",
        &ctx.meta(Command::Lyapunov),
        &["energy", "gamma", "stderr"],
        &rows,
    )?])
}

fn renewal(ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    let p = ctx.params;
    let data = ctx.critical_data()?;
    let mf = ctx.moments(Some(&data))?;
    // the bound needs ϱ_k; leave its columns empty when there is none
    let rho = solve_nu(&mf)
        .and_then(|s| solve_rho_k(&mf, s.nu, p.ld_k))
        .ok();
    let mut rows = Vec::new();
    for &eps in &p.epsilons {
        let runs = trajectories(ctx, &data, eps)?;
        let loops: Vec<Vec<u64>> = runs.iter().map(|r| r.1.clone()).collect();
        let steps: Vec<u64> = runs.iter().map(|r| r.2).collect();
        let s = renewal_stats(&loops, &steps, eps, p.ld_k);
        let (bound, holds) = match rho {
            Some(rho) => {
                let rp = RegionParams::new_unchecked(p.ld_k, eps, &data)?;
                let b = lemma44_bound(&rp, &mf, rho, p.xi.unwrap_or(rho / 2.0));
                (num(b), (s.mean >= b).to_string())
            }
            None => (String::new(), String::new()),
        };
        rows.push(vec![
            num(eps),
            p.reps.to_string(),
            s.loops.to_string(),
            s.steps.to_string(),
            num(s.mean),
            num(s.rate),
            num(s.half_width),
            bound,
            holds,
        ]);
    }
    Ok(vec![write_csv(
        ctx.out,
        "renewal.csv",
        &ctx.meta(Command::Renewal),
        &[
            "epsilon",
            "reps",
            "loops",
            "steps",
            "mean_interarrival",
            "rate",
            "half_width",
            "mean_lower_bound",
            "bound_holds",
        ],
        &rows,
    )?])
}

fn holder(ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    let p = ctx.params;
    let (delta, se) = ids_increments(&ctx.ensemble, p.e_c, &p.epsilons, p.n_sites, &ctx.mc())?;
    let rows: Vec<Vec<String>> = (0..p.epsilons.len())
        .map(|i| {
            vec![
                num(p.epsilons[i]),
                num(delta[i]),
                num(se[i]),
                num(p.epsilons[i].ln()),
                num(delta[i].abs().ln()),
            ]
        })
        .collect();
    let meta = ctx.meta(Command::Holder);
    let csv = write_csv(
        ctx.out,
        "holder.csv",
        &meta,
        &["epsilon", "ids_delta", "stderr", "log_eps", "log_delta"],
        &rows,
    )?;
    let fit = holder_fit(&p.epsilons, &delta, &se)?;
    Ok(vec![csv, write_json(ctx.out, "fit.json", &meta, &fit)?])
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub k: f64,
    pub epsilon: f64,
    pub regions_ordered: bool,
    pub lemma_4_1: Lemma41Report,
    pub lemma_4_2: Lemma42Report,
    pub ld_k: f64,
    pub nu: f64,
    pub large_deviation: Vec<LdCheck>,
    pub oscillation: OscillationReport,
    pub signs: SignReport,
    pub violations: usize,
}

fn verify(ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    let p = ctx.params;
    let data = ctx.critical_data()?;
    let rp = RegionParams::new_unchecked(p.k, p.epsilon, &data)?;
    let lemma_4_1 = check_lemma_4_1(
        &ctx.ensemble,
        &data,
        &rp,
        p.samples,
        &mut RealizationStream::new(ctx.sub_seed(1), 0),
    )?;
    let lemma_4_2 = check_lemma_4_2(
        &ctx.ensemble,
        &data,
        &rp,
        p.samples,
        &mut RealizationStream::new(ctx.sub_seed(2), 0),
    )?;
    let mf = ctx.moments(Some(&data))?;
    let nu = solve_nu(&mf)?.nu;
    let rho = solve_rho_k(&mf, nu, p.ld_k)?;
    let xi = p.xi.unwrap_or(rho / 2.0);
    let large_deviation = p
        .ld_grid
        .iter()
        .enumerate()
        .map(|(i, g)| {
            ld_bound_check(
                &ctx.ensemble,
                &data,
                &mf,
                nu,
                p.ld_k,
                xi,
                g.zeta,
                g.n,
                p.ld_samples,
                ctx.sub_seed(10 + i as u64),
                ctx.workers,
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    let oscillation = oscillation_check(
        &ctx.ensemble,
        &data,
        p.oscillation_triples,
        OSCILLATION_MAX_SITES,
        ctx.sub_seed(3),
        ctx.workers,
    )?;
    let signs = data.sign_report();
    let violations = lemma_4_1.total_violations()
        + lemma_4_2.violations
        + large_deviation.iter().filter(|c| !c.passes).count()
        + oscillation.violations()
        + signs.violations;
    let report = VerifyReport {
        k: p.k,
        epsilon: p.epsilon,
        regions_ordered: rp.ordered(),
        lemma_4_1,
        lemma_4_2,
        ld_k: p.ld_k,
        nu,
        large_deviation,
        oscillation,
        signs,
        violations,
    };
    let path = write_json(ctx.out, "verify.json", &ctx.meta(Command::Verify), &report)?;
    if violations > 0 {
        return Err(CliError::Violation(format!(
            "{violations} violations, see {}",
            path.display()
        )));
    }
    Ok(vec![path])
}

#[derive(Serialize)]
struct CriticalOut {
    #[serde(flatten)]
    data: CriticalData,
    ids_at_critical: f64,
}

fn criticaldata(ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    let data = ctx.critical_data()?;
    let ids_at_critical = ids_at_critical(&data)?;
    let out = CriticalOut {
        data,
        ids_at_critical,
    };
    Ok(vec![write_json(
        ctx.out,
        "criticaldata.json",
        &ctx.meta(Command::Criticaldata),
        &out,
    )?])
}

fn trajectory(ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    let p = ctx.params;
    let data = ctx.critical_data()?;
    let rp = RegionParams::new_unchecked(p.k, p.epsilon, &data)?;
    let tr = sample_trajectory(&ctx.ensemble, &data, p.epsilon, p.n_polymers, ctx.seed, 0)?;
    let loops = detect_loops(&tr);
    let mut completions = loops.iter().scan(0u64, |acc, d| {
        *acc += d;
        Some(*acc)
    });
    let mut next = completions.next();
    let mut winding = 0u64;
    let mut rows = Vec::with_capacity(tr.steps() + 1);
    for n in 0..=tr.steps() {
        while next == Some(n as u64) {
            winding += 1;
            next = completions.next();
        }
        let x = ProjectivePoint::from_phase(tr.theta[n]);
        rows.push(vec![
            n.to_string(),
            num(tr.theta[n]),
            num(tr.log_r[n]),
            num(x.to_f64()),
            classify_region(x, &rp).label().to_string(),
            winding.to_string(),
        ]);
    }
    Ok(vec![write_csv(
        ctx.out,
        "trajectory.csv",
        &ctx.meta(Command::Trajectory),
        &["step", "theta_lift", "log_R", "x", "region", "winding"],
        &rows,
    )?])
}
