//! Randomized check that the localized trace of an unlabeled-ket state equals the
//! Fock-space reduction of the same state.
//!
//! Draws use `ChaCha20Rng::seed_from_u64(seed)`. Per trial, in order: the region (each spatial
//! tag kept with probability ½, redrawn while empty), then the coefficient tensor `C` in
//! row-major order with real and imaginary parts drawn from `N(0, ½)`. Even trials are bosonic,
//! odd trials fermionic. The state is normalized under the symmetric inner product before
//! reduction.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::fock::{ModeBasis, SingleParticleVector, Statistics};
use crate::lfc::{localized_partial_trace, to_fock, LfcState, ProductKet, SpatialRegion};
use crate::reduce::trace_one_particle;
use crate::{Error, Result};

/// Elementwise agreement required between the two reductions.
pub const EQUIVALENCE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialResult {
    pub trial: usize,
    pub statistics: &'static str,
    pub region: Vec<String>,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub trials: usize,
    pub spatial: usize,
    pub internal: usize,
    pub tolerance: f64,
    pub global_max: f64,
    pub pass: bool,
    pub per_trial: Vec<TrialResult>,
}

pub fn product_basis(spatial: usize, internal: usize) -> Result<ModeBasis> {
    ModeBasis::new(
        (0..spatial).map(|k| format!("s{k}")),
        (0..internal).map(|k| format!("i{k}")),
    )
}

/// A standard complex Gaussian sample.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, basis: &ModeBasis) -> SingleParticleVector {
    let amps = (0..basis.dim()).map(|_| complex_gaussian(rng)).collect();
    SingleParticleVector::new(basis.clone(), amps).expect("length matches basis")
}

pub fn random_product_ket<R: Rng + ?Sized>(rng: &mut R, basis: &ModeBasis) -> ProductKet {
    let first = random_vector(rng, basis);
    let second = random_vector(rng, basis);
    ProductKet::new(first, second).expect("shared basis")
}

/// Gaussian coefficient tensor over basis-mode product kets, unnormalized.
pub fn random_tensor_state<R: Rng + ?Sized>(
    rng: &mut R,
    basis: &ModeBasis,
    statistics: Statistics,
) -> LfcState {
    let dim = basis.dim();
    let entries: Vec<Complex64> = (0..dim * dim).map(|_| complex_gaussian(rng)).collect();
    let tensor = DMatrix::from_row_slice(dim, dim, &entries);
    LfcState::from_tensor(basis.clone(), statistics, &tensor).expect("square tensor")
}

/// Random nonempty set of spatial tags.
pub fn random_region<R: Rng + ?Sized>(rng: &mut R, basis: &ModeBasis) -> SpatialRegion {
    loop {
        let tags: Vec<&String> = basis
            .spatial_tags()
            .iter()
            .filter(|_| rng.random_bool(0.5))
            .collect();
        if !tags.is_empty() {
            return SpatialRegion::new(basis, tags.into_iter().cloned()).expect("tags from basis");
        }
    }
}

/// Largest elementwise difference between the two unnormalized reductions of `state`.
pub fn reduction_deviation(state: &LfcState, region: &SpatialRegion) -> Result<f64> {
    let lfc = localized_partial_trace(state, region)?;
    let fock = trace_one_particle(&to_fock(state)?, &region.mode_indices(state.basis()))?;
    lfc.raw.max_deviation(&fock.raw)
}

pub fn verify_equivalence(
    trials: usize,
    spatial: usize,
    internal: usize,
    seed: u64,
) -> Result<VerifyReport> {
    if trials == 0 || spatial == 0 || internal == 0 {
        return Err(Error::InvalidParameter(
            "trials and mode counts must be at least 1".into(),
        ));
    }
    let basis = product_basis(spatial, internal)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let inputs: Vec<(Statistics, SpatialRegion, LfcState)> = (0..trials)
        .map(|t| {
            let stats = if t % 2 == 0 {
                Statistics::Boson
            } else {
                Statistics::Fermion
            };
            let region = random_region(&mut rng, &basis);
            let state = random_tensor_state(&mut rng, &basis, stats);
            (stats, region, state)
        })
        .collect();
    let per_trial = inputs
        .into_par_iter()
        .enumerate()
        .map(|(trial, (stats, region, state))| {
            let state = state.normalized()?;
            Ok(TrialResult {
                trial,
                statistics: stats.name(),
                region: region.tags().map(str::to_string).collect(),
                deviation: reduction_deviation(&state, &region)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let global_max = per_trial.iter().map(|t| t.deviation).fold(0.0, f64::max);
    Ok(VerifyReport {
        seed,
        trials,
        spatial,
        internal,
        tolerance: EQUIVALENCE_TOL,
        global_max,
        pass: global_max <= EQUIVALENCE_TOL,
        per_trial,
    })
}
