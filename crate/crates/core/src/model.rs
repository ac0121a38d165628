//! Polymer ensembles and their seeded realizations.
//!
//! A polymer is a finite block of hoppings and potentials. A configuration
//! of the random operator is an i.i.d. sequence of polymers drawn from a
//! [`PolymerEnsemble`], always starting at a polymer boundary.

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Default maximal polymer length.
pub const DEFAULT_MAX_LENGTH: usize = 8;

/// Tolerance on the total weight of a discrete ensemble.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// A block of `len` sites with positive hoppings `t̂` and real potentials `v̂`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polymer {
    hoppings: Vec<f64>,
    potentials: Vec<f64>,
}

impl Polymer {
    pub fn new(hoppings: Vec<f64>, potentials: Vec<f64>) -> Result<Self> {
        if hoppings.is_empty() {
            return Err(Error::Config("polymer must have at least one site".into()));
        }
        if hoppings.len() != potentials.len() {
            return Err(Error::Config(format!(
                "polymer has {} hoppings but {} potentials",
                hoppings.len(),
                potentials.len()
            )));
        }
        if let Some(t) = hoppings.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return Err(Error::Config(format!("hopping {t} is not strictly positive")));
        }
        if potentials.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("potentials must be finite".into()));
        }
        Ok(Self {
            hoppings,
            potentials,
        })
    }

    /// Two-site block with zero potentials, hoppings `(t_ev, t_od)`.
    pub fn dimer(t_ev: f64, t_od: f64) -> Result<Self> {
        Self::new(vec![t_ev, t_od], vec![0.0, 0.0])
    }

    pub fn len(&self) -> usize {
        self.hoppings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hoppings.is_empty()
    }

    pub fn hoppings(&self) -> &[f64] {
        &self.hoppings
    }

    pub fn potentials(&self) -> &[f64] {
        &self.potentials
    }

    /// Sites as `(v, t)` pairs in transfer order.
    pub fn sites(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.potentials.iter().copied().zip(self.hoppings.iter().copied())
    }
}

/// Law of the auxiliary variable `x ∈ [-1, 1]` of the dimer model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum XDist {
    Uniform,
    /// `P(x = +1) = p`, `P(x = -1) = 1 - p`.
    Bernoulli { p: f64 },
}

/// Random hopping model on dimers: `t_ev = c_ev + λ_ev x`, `t_od = c_od + λ_od x'`
/// with independent `x, x'` distributed as `x_dist`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimerHoppingModel {
    pub c_ev: f64,
    #[serde(rename = "lambda_ev")]
    pub lambda_ev: f64,
    pub c_od: f64,
    #[serde(rename = "lambda_od")]
    pub lambda_od: f64,
    pub x_dist: XDist,
}

impl DimerHoppingModel {
    pub fn new(c_ev: f64, lambda_ev: f64, c_od: f64, lambda_od: f64, x_dist: XDist) -> Result<Self> {
        let m = Self {
            c_ev,
            lambda_ev,
            c_od,
            lambda_od,
            x_dist,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.c_ev, self.lambda_ev, self.c_od, self.lambda_od];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("dimer parameters must be finite".into()));
        }
        if self.lambda_ev < 0.0 || self.lambda_od < 0.0 {
            return Err(Error::Config("lambda_ev and lambda_od must be non-negative".into()));
        }
        if self.c_ev - self.lambda_ev <= 0.0 {
            return Err(Error::Config(format!(
                "even hopping support must lie in (0, inf): need lambda_ev < c_ev, got {} >= {}",
                self.lambda_ev, self.c_ev
            )));
        }
        if self.c_od - self.lambda_od <= 0.0 {
            return Err(Error::Config(format!(
                "odd hopping support must lie in (0, inf): need lambda_od < c_od, got {} >= {}",
                self.lambda_od, self.c_od
            )));
        }
        if let XDist::Bernoulli { p } = self.x_dist {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("Bernoulli parameter {p} not in [0, 1]")));
            }
        }
        Ok(())
    }

    pub fn t_ev(&self, x: f64) -> f64 {
        self.c_ev + self.lambda_ev * x
    }

    pub fn t_od(&self, x: f64) -> f64 {
        self.c_od + self.lambda_od * x
    }

    /// Independent draws of `(x_ev, x_od)`.
    fn sample_x<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let mut one = || -> f64 {
            let u: f64 = rng.gen();
            match self.x_dist {
                XDist::Uniform => 2.0 * u - 1.0,
                XDist::Bernoulli { p } => {
                    if u < p {
                        1.0
                    } else {
                        -1.0
                    }
                }
            }
        };
        let x_ev = one();
        let x_od = one();
        (x_ev, x_od)
    }
}

/// A polymer with its probability weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub polymer: Polymer,
    pub weight: f64,
}

/// Finitely many atoms with weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteEnsemble {
    atoms: Vec<Atom>,
    cumulative: Vec<f64>,
    max_length: usize,
}

impl DiscreteEnsemble {
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        self.cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.atoms.len() - 1)
    }
}

/// The continuous (uniform) dimer model, optionally carrying a quadrature
/// order for operations that need a finite support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParametricDimer {
    pub model: DimerHoppingModel,
    pub quadrature: Option<usize>,
}

/// A probability distribution on polymers.
#[derive(Debug, Clone, PartialEq)]
pub enum PolymerEnsemble {
    Discrete(DiscreteEnsemble),
    Parametric(ParametricDimer),
}

impl PolymerEnsemble {
    /// Discrete ensemble with the default maximal length.
    pub fn discrete(atoms: Vec<(Polymer, f64)>) -> Result<Self> {
        Self::discrete_with_max_length(atoms, DEFAULT_MAX_LENGTH)
    }

    pub fn discrete_with_max_length(atoms: Vec<(Polymer, f64)>, max_length: usize) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Config("ensemble has no atoms".into()));
        }
        let mut total = 0.0;
        let mut cumulative = Vec::with_capacity(atoms.len());
        for (p, w) in &atoms {
            if !(w.is_finite() && *w > 0.0 && *w <= 1.0) {
                return Err(Error::Config(format!("atom weight {w} not in (0, 1]")));
            }
            if p.len() > max_length {
                return Err(Error::Config(format!(
                    "polymer of length {} exceeds maximal length {max_length}",
                    p.len()
                )));
            }
            total += w;
            cumulative.push(total);
        }
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::Config(format!("weights sum to {total}, not 1")));
        }
        let atoms = atoms
            .into_iter()
            .map(|(polymer, weight)| Atom { polymer, weight })
            .collect();
        Ok(Self::Discrete(DiscreteEnsemble {
            atoms,
            cumulative,
            max_length,
        }))
    }

    /// Sets the quadrature order used for finite-support operations on a
    /// continuous ensemble. No effect on discrete ensembles.
    pub fn with_quadrature(self, nodes: usize) -> Self {
        match self {
            Self::Parametric(p) => Self::Parametric(ParametricDimer {
                quadrature: Some(nodes.max(1)),
                ..p
            }),
            d => d,
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Self::Discrete(_))
    }

    pub fn max_length(&self) -> usize {
        match self {
            Self::Discrete(d) => d.max_length,
            Self::Parametric(_) => 2,
        }
    }

    /// `⟨L_σ⟩`.
    pub fn mean_length(&self) -> f64 {
        match self {
            Self::Discrete(d) => d.atoms.iter().map(|a| a.weight * a.polymer.len() as f64).sum(),
            Self::Parametric(_) => 2.0,
        }
    }

    /// One draw from the ensemble.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Polymer {
        match self {
            Self::Discrete(d) => d.atoms[d.sample_index(rng)].polymer.clone(),
            Self::Parametric(p) => {
                let (x_ev, x_od) = p.model.sample_x(rng);
                Polymer {
                    hoppings: vec![p.model.t_ev(x_ev), p.model.t_od(x_od)],
                    potentials: vec![0.0, 0.0],
                }
            }
        }
    }

    /// A finite set of atoms representing the support.
    ///
    /// For a discrete ensemble these are its atoms. For the continuous dimer
    /// model they are the tensor Gauss–Legendre nodes with their weights,
    /// followed by zero-weight atoms at the corners of the support so that
    /// suprema and infima over the support are attained.
    pub fn support_atoms(&self) -> Result<Vec<Atom>> {
        match self {
            Self::Discrete(d) => Ok(d.atoms.clone()),
            Self::Parametric(p) => {
                let n = p.quadrature.ok_or_else(|| {
                    Error::Unsupported(
                        "continuous ensemble without a quadrature discretization".into(),
                    )
                })?;
                let mut atoms = quadrature_atoms(&p.model, n)?;
                let corners_od: &[f64] = if p.model.lambda_od > 0.0 { &[-1.0, 1.0] } else { &[0.0] };
                for &x_ev in &[-1.0, 1.0] {
                    for &x_od in corners_od {
                        atoms.push(Atom {
                            polymer: Polymer::dimer(p.model.t_ev(x_ev), p.model.t_od(x_od))?,
                            weight: 0.0,
                        });
                    }
                }
                Ok(atoms)
            }
        }
    }
}

fn quadrature_atoms(model: &DimerHoppingModel, n: usize) -> Result<Vec<Atom>> {
    let (nodes, weights) = gauss_legendre(n);
    let od: Vec<(f64, f64)> = if model.lambda_od > 0.0 {
        nodes.iter().zip(&weights).map(|(x, w)| (model.t_od(*x), w / 2.0)).collect()
    } else {
        vec![(model.c_od, 1.0)]
    };
    let mut atoms = Vec::with_capacity(n * od.len());
    for (x, w) in nodes.iter().zip(&weights) {
        for &(t_od, w_od) in &od {
            atoms.push(Atom {
                polymer: Polymer::dimer(model.t_ev(*x), t_od)?,
                weight: w / 2.0 * w_od,
            });
        }
    }
    Ok(atoms)
}

/// Builds the polymer ensemble of the dimer hopping model.
///
/// Bernoulli `x` gives a discrete ensemble with at most four atoms. Uniform
/// `x` gives a continuous ensemble, or with `discretization = Some(n)` the
/// discrete Gauss–Legendre approximation with `n` nodes per random hopping.
pub fn dimer_to_ensemble(
    model: &DimerHoppingModel,
    discretization: Option<usize>,
) -> Result<PolymerEnsemble> {
    model.validate()?;
    match model.x_dist {
        XDist::Bernoulli { p } => {
            let mut atoms: Vec<(Polymer, f64)> = Vec::with_capacity(4);
            let xs = [(1.0, p), (-1.0, 1.0 - p)];
            for &(x_ev, w_ev) in &xs {
                for &(x_od, w_od) in &xs {
                    let w = w_ev * w_od;
                    if w <= 0.0 {
                        continue;
                    }
                    let poly = Polymer::dimer(model.t_ev(x_ev), model.t_od(x_od))?;
                    match atoms.iter_mut().find(|(q, _)| *q == poly) {
                        Some((_, acc)) => *acc += w,
                        None => atoms.push((poly, w)),
                    }
                }
            }
            PolymerEnsemble::discrete(atoms)
        }
        XDist::Uniform => match discretization {
            Some(n) if n > 0 => PolymerEnsemble::discrete(
                quadrature_atoms(model, n)?
                    .into_iter()
                    .map(|a| (a.polymer, a.weight))
                    .collect(),
            ),
            _ => Ok(PolymerEnsemble::Parametric(ParametricDimer {
                model: *model,
                quadrature: None,
            })),
        },
    }
}

/// A seeded random sub-stream.
///
/// ChaCha8 with a 64-bit seed and a 64-bit stream selector: the same
/// `(seed, stream)` pair yields the same draws on every platform, and
/// distinct stream indices are independent.
#[derive(Debug, Clone)]
pub struct RealizationStream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RealizationStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Number of 32-bit words consumed so far.
    pub fn position(&self) -> u128 {
        self.rng.get_word_pos()
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// `count` independent draws from `ensemble`, advancing `stream`.
pub fn sample_polymers(
    ensemble: &PolymerEnsemble,
    count: usize,
    stream: &mut RealizationStream,
) -> Vec<Polymer> {
    (0..count).map(|_| ensemble.sample(stream.rng())).collect()
}

/// Draws polymers until at least `sites` sites are covered.
pub fn sample_sites(
    ensemble: &PolymerEnsemble,
    sites: usize,
    stream: &mut RealizationStream,
) -> Vec<Polymer> {
    let mut out = Vec::new();
    let mut covered = 0;
    while covered < sites {
        let p = ensemble.sample(stream.rng());
        covered += p.len();
        out.push(p);
    }
    out
}

/// Concatenates the polymer blocks into site sequences `(t, v)`.
pub fn flatten(polymers: &[Polymer]) -> (Vec<f64>, Vec<f64>) {
    let n: usize = polymers.iter().map(Polymer::len).sum();
    let mut t = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    for p in polymers {
        t.extend_from_slice(&p.hoppings);
        v.extend_from_slice(&p.potentials);
    }
    (t, v)
}

/// JSON model description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    DimerHopping {
        c_ev: f64,
        lambda_ev: f64,
        c_od: f64,
        lambda_od: f64,
        x_dist: XDist,
        /// Quadrature order for the continuous model (default 16).
        #[serde(default, skip_serializing_if = "Option::is_none")]
        quadrature: Option<usize>,
    },
    DiscretePolymers {
        atoms: Vec<AtomConfig>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_length: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomConfig {
    pub weight: f64,
    pub t: Vec<f64>,
    pub v: Vec<f64>,
}

/// Quadrature order used for continuous ensembles when the config omits it.
pub const DEFAULT_QUADRATURE: usize = 16;

impl ModelConfig {
    pub fn build(&self) -> Result<PolymerEnsemble> {
        match self {
            ModelConfig::DimerHopping {
                c_ev,
                lambda_ev,
                c_od,
                lambda_od,
                x_dist,
                quadrature,
            } => {
                let model = DimerHoppingModel::new(*c_ev, *lambda_ev, *c_od, *lambda_od, *x_dist)?;
                Ok(dimer_to_ensemble(&model, None)?
                    .with_quadrature(quadrature.unwrap_or(DEFAULT_QUADRATURE)))
            }
            ModelConfig::DiscretePolymers { atoms, max_length } => {
                let atoms = atoms
                    .iter()
                    .map(|a| Ok((Polymer::new(a.t.clone(), a.v.clone())?, a.weight)))
                    .collect::<Result<Vec<_>>>()?;
                PolymerEnsemble::discrete_with_max_length(
                    atoms,
                    max_length.unwrap_or(DEFAULT_MAX_LENGTH),
                )
            }
        }
    }

    /// The dimer model, when this config describes one.
    pub fn dimer_model(&self) -> Option<DimerHoppingModel> {
        match self {
            ModelConfig::DimerHopping {
                c_ev,
                lambda_ev,
                c_od,
                lambda_od,
                x_dist,
                ..
            } => DimerHoppingModel::new(*c_ev, *lambda_ev, *c_od, *lambda_od, *x_dist).ok(),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bernoulli() -> DimerHoppingModel {
        DimerHoppingModel::new(1.4, 1.3, 1.0, 0.0, XDist::Bernoulli { p: 2.0 / 3.0 }).unwrap()
    }

    #[test]
    fn single_atom_ensemble_repeats_itself() {
        let s0 = Polymer::dimer(2.0, 1.0).unwrap();
        let ens = PolymerEnsemble::discrete(vec![(s0.clone(), 1.0)]).unwrap();
        let mut st = RealizationStream::new(7, 0);
        assert_eq!(sample_polymers(&ens, 5, &mut st), vec![s0; 5]);
    }

    #[test]
    fn empirical_frequency_within_six_sigma() {
        let a = Polymer::dimer(2.0, 1.0).unwrap();
        let b = Polymer::dimer(0.5, 1.0).unwrap();
        let ens = PolymerEnsemble::discrete(vec![(a.clone(), 2.0 / 3.0), (b, 1.0 / 3.0)]).unwrap();
        let n = 1_000_000;
        for seed in [1u64, 2, 99] {
            let mut st = RealizationStream::new(seed, 0);
            let hits = (0..n).filter(|_| ens.sample(st.rng()) == a).count();
            let f = hits as f64 / n as f64;
            assert!((f - 2.0 / 3.0).abs() < 3e-3, "seed {seed}: {f}");
        }
    }

    #[test]
    fn bernoulli_even_hoppings_take_two_values() {
        let ens = dimer_to_ensemble(&bernoulli(), None).unwrap();
        let mut st = RealizationStream::new(11, 3);
        for p in sample_polymers(&ens, 10_000, &mut st) {
            let t = p.hoppings()[0];
            assert!(t == 2.7 || (t - 0.1).abs() < 1e-15, "unexpected hopping {t}");
            assert_eq!(p.hoppings()[1], 1.0);
        }
    }

    #[test]
    fn deterministic_dimer_is_single_atom() {
        let m = DimerHoppingModel::new(1.0, 0.0, 1.0, 0.0, XDist::Uniform).unwrap();
        let ens = dimer_to_ensemble(&m, Some(1)).unwrap();
        match ens {
            PolymerEnsemble::Discrete(d) => {
                assert_eq!(d.atoms().len(), 1);
                assert_eq!(d.atoms()[0].polymer.hoppings(), &[1.0, 1.0]);
                assert_eq!(d.atoms()[0].polymer.potentials(), &[0.0, 0.0]);
            }
            _ => panic!("expected a discrete ensemble"),
        }
    }

    #[test]
    fn bernoulli_atoms_and_weights() {
        let ens = dimer_to_ensemble(&bernoulli(), None).unwrap();
        let PolymerEnsemble::Discrete(d) = ens else {
            panic!("expected discrete")
        };
        assert_eq!(d.atoms().len(), 2);
        assert_eq!(d.atoms()[0].polymer.hoppings(), &[2.7, 1.0]);
        assert!((d.atoms()[0].weight - 2.0 / 3.0).abs() < 1e-15);
        assert!((d.atoms()[1].polymer.hoppings()[0] - 0.1).abs() < 1e-15);
        assert!((d.atoms()[1].weight - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_three_node_discretization() {
        let m = DimerHoppingModel::new(1.2, 0.4, 1.0, 0.0, XDist::Uniform).unwrap();
        let PolymerEnsemble::Discrete(d) = dimer_to_ensemble(&m, Some(3)).unwrap() else {
            panic!("expected discrete")
        };
        let r = 0.6f64.sqrt();
        let expect = [(1.2 - 0.4 * r, 5.0 / 18.0), (1.2, 8.0 / 18.0), (1.2 + 0.4 * r, 5.0 / 18.0)];
        assert_eq!(d.atoms().len(), 3);
        for (a, (t, w)) in d.atoms().iter().zip(expect) {
            assert!((a.polymer.hoppings()[0] - t).abs() < 1e-14);
            assert!((a.weight - w).abs() < 1e-14);
        }
    }

    #[test]
    fn invalid_configurations_are_rejected() {
        assert!(DimerHoppingModel::new(1.0, 1.0, 1.0, 0.0, XDist::Uniform).is_err());
        assert!(Polymer::new(vec![1.0, 0.0], vec![0.0, 0.0]).is_err());
        let p = Polymer::dimer(1.0, 1.0).unwrap();
        assert!(PolymerEnsemble::discrete(vec![(p.clone(), 0.5), (p.clone(), 0.4)]).is_err());
        let long = Polymer::new(vec![1.0; 9], vec![0.0; 9]).unwrap();
        assert!(PolymerEnsemble::discrete(vec![(long, 1.0)]).is_err());
    }

    #[test]
    fn flatten_concatenates() {
        let a = Polymer::new(vec![1.0, 2.0], vec![0.0, 0.5]).unwrap();
        let b = Polymer::new(vec![3.0], vec![-1.0]).unwrap();
        let (t, v) = flatten(&[a, b]);
        assert_eq!(t, vec![1.0, 2.0, 3.0]);
        assert_eq!(v, vec![0.0, 0.5, -1.0]);
        let d = Polymer::dimer(2.0, 1.0).unwrap();
        assert_eq!(flatten(&vec![d; 500]).0.len(), 1000);
    }

    #[test]
    fn same_seed_and_stream_reproduce() {
        let m = DimerHoppingModel::new(1.2, 0.4, 1.0, 0.0, XDist::Uniform).unwrap();
        let ens = dimer_to_ensemble(&m, None).unwrap();
        let a = sample_polymers(&ens, 100, &mut RealizationStream::new(5, 2));
        let b = sample_polymers(&ens, 100, &mut RealizationStream::new(5, 2));
        let c = sample_polymers(&ens, 100, &mut RealizationStream::new(5, 3));
        assert_eq!(a, b);
        assert_ne!(a, c);
        for p in &a {
            let t = p.hoppings()[0];
            assert!((0.8..=1.6).contains(&t));
        }
    }

    #[test]
    fn json_configs_parse() {
        let uni: ModelConfig = serde_json::from_str(
            r#"{"type":"dimer_hopping","c_ev":1.2,"lambda_ev":0.4,"c_od":1.0,"lambda_od":0.0,"x_dist":{"kind":"uniform"}}"#,
        )
        .unwrap();
        assert!(matches!(uni.build().unwrap(), PolymerEnsemble::Parametric(_)));
        let ber: ModelConfig = serde_json::from_str(
            r#"{"type":"dimer_hopping","c_ev":1.4,"lambda_ev":1.3,"c_od":1.0,"lambda_od":0.0,"x_dist":{"kind":"bernoulli","p":0.6666666667}}"#,
        )
        .unwrap();
        assert!(ber.build().unwrap().is_discrete());
        let disc: ModelConfig = serde_json::from_str(
            r#"{"type":"discrete_polymers","atoms":[{"weight":0.5,"t":[2.0,1.0],"v":[0.0,0.0]},{"weight":0.5,"t":[0.5,1.0],"v":[0.0,0.0]}]}"#,
        )
        .unwrap();
        assert_eq!(disc.build().unwrap().mean_length(), 2.0);
    }
}
