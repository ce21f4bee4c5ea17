//! Occupation-number Fock space over a finite orthonormal mode basis.
//!
//! Occupation states are creation strings ordered by ascending mode index,
//! `|n_0, n_1, …⟩ ∝ (a†_0)^{n_0} (a†_1)^{n_1} … |0⟩`. A fermionic `a†_i` therefore picks up the
//! sign `(−1)^{#occupied modes with index < i}`; bosonic operators carry the usual `√n` factors.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::{Error, Result, NORM_THRESHOLD, ZERO_THRESHOLD};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statistics {
    Boson,
    Fermion,
}

impl Statistics {
    /// Exchange sign η: +1 for bosons, −1 for fermions.
    pub fn eta(self) -> i32 {
        match self {
            Statistics::Boson => 1,
            Statistics::Fermion => -1,
        }
    }

    pub fn eta_f64(self) -> f64 {
        f64::from(self.eta())
    }

    pub fn from_eta(eta: i32) -> Option<Self> {
        match eta {
            1 => Some(Statistics::Boson),
            -1 => Some(Statistics::Fermion),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
        }
    }
}

impl std::str::FromStr for Statistics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "boson" | "bosons" | "+1" | "1" => Ok(Statistics::Boson),
            "fermion" | "fermions" | "-1" => Ok(Statistics::Fermion),
            other => Err(Error::InvalidParameter(format!(
                "unknown statistics `{other}`"
            ))),
        }
    }
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A single-particle mode: a spatial tag paired with an internal (spin-like) tag.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeLabel {
    pub spatial: String,
    pub internal: String,
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.spatial, self.internal)
    }
}

#[derive(Debug)]
struct BasisInner {
    spatial: Vec<String>,
    internal: Vec<String>,
    modes: Vec<ModeLabel>,
}

/// Ordered orthonormal single-particle basis, the product of spatial and internal tags in
/// spatial-major order: `(s_0,i_0), (s_0,i_1), …, (s_1,i_0), …`.
///
/// The order fixes the fermionic sign convention and the row order of every matrix.
#[derive(Clone, Debug)]
pub struct ModeBasis(Arc<BasisInner>);

impl PartialEq for ModeBasis {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.spatial == other.0.spatial && self.0.internal == other.0.internal)
    }
}

impl Eq for ModeBasis {}

impl ModeBasis {
    pub fn new<S, I>(spatial: S, internal: I) -> Result<Self>
    where
        S: IntoIterator,
        S::Item: Into<String>,
        I: IntoIterator,
        I::Item: Into<String>,
    {
        let spatial: Vec<String> = spatial.into_iter().map(Into::into).collect();
        let internal: Vec<String> = internal.into_iter().map(Into::into).collect();
        if spatial.is_empty() || internal.is_empty() {
            return Err(Error::InvalidBasis(
                "spatial and internal tag sets must be nonempty".into(),
            ));
        }
        for (kind, tags) in [("spatial", &spatial), ("internal", &internal)] {
            let mut seen = BTreeSet::new();
            for t in tags {
                if !seen.insert(t.as_str()) {
                    return Err(Error::InvalidBasis(format!("duplicate {kind} tag `{t}`")));
                }
            }
        }
        let modes = spatial
            .iter()
            .flat_map(|s| {
                internal.iter().map(move |i| ModeLabel {
                    spatial: s.clone(),
                    internal: i.clone(),
                })
            })
            .collect();
        Ok(ModeBasis(Arc::new(BasisInner {
            spatial,
            internal,
            modes,
        })))
    }

    pub fn dim(&self) -> usize {
        self.0.modes.len()
    }

    pub fn modes(&self) -> &[ModeLabel] {
        &self.0.modes
    }

    pub fn spatial_tags(&self) -> &[String] {
        &self.0.spatial
    }

    pub fn internal_tags(&self) -> &[String] {
        &self.0.internal
    }

    pub fn index_of(&self, spatial: &str, internal: &str) -> Option<usize> {
        let s = self.0.spatial.iter().position(|t| t == spatial)?;
        let i = self.0.internal.iter().position(|t| t == internal)?;
        Some(s * self.0.internal.len() + i)
    }

    pub fn spatial_index(&self, spatial: &str) -> Option<usize> {
        self.0.spatial.iter().position(|t| t == spatial)
    }

    pub fn internal_index(&self, internal: &str) -> Option<usize> {
        self.0.internal.iter().position(|t| t == internal)
    }

    /// Indices of all modes whose spatial tag is in `tags`, ascending.
    pub fn modes_in_spatial<'a>(&self, tags: impl IntoIterator<Item = &'a str>) -> Vec<usize> {
        let wanted: BTreeSet<&str> = tags.into_iter().collect();
        self.0
            .modes
            .iter()
            .enumerate()
            .filter(|(_, m)| wanted.contains(m.spatial.as_str()))
            .map(|(k, _)| k)
            .collect()
    }

    pub(crate) fn check_index(&self, index: usize) -> Result<()> {
        if index < self.dim() {
            Ok(())
        } else {
            Err(Error::ModeIndex {
                index,
                dim: self.dim(),
            })
        }
    }
}

/// Particle counts per mode.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occupation(Vec<u32>);

impl Occupation {
    pub fn vacuum(dim: usize) -> Self {
        Occupation(vec![0; dim])
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        Occupation(counts)
    }

    /// The one-particle state with a single particle in `mode`.
    pub fn single(dim: usize, mode: usize) -> Self {
        let mut counts = vec![0; dim];
        counts[mode] = 1;
        Occupation(counts)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn particles(&self) -> usize {
        self.0.iter().map(|&n| n as usize).sum()
    }

    fn occupied_below(&self, mode: usize) -> u32 {
        self.0[..mode].iter().sum()
    }
}

/// All occupation states of `particles` particles over `dim` modes.
///
/// Earlier modes receive their largest occupation first, so the one-particle sector comes out
/// in mode order.
pub fn sector(dim: usize, particles: usize, statistics: Statistics) -> Vec<Occupation> {
    fn fill(mode: usize, left: u32, cap: u32, counts: &mut Vec<u32>, out: &mut Vec<Occupation>) {
        let dim = counts.len();
        if mode == dim {
            if left == 0 {
                out.push(Occupation(counts.clone()));
            }
            return;
        }
        for n in (0..=left.min(cap)).rev() {
            counts[mode] = n;
            fill(mode + 1, left - n, cap, counts, out);
        }
        counts[mode] = 0;
    }
    let cap = match statistics {
        Statistics::Boson => particles as u32,
        Statistics::Fermion => 1,
    };
    let mut out = Vec::new();
    fill(0, particles as u32, cap, &mut vec![0; dim], &mut out);
    out
}

/// Dense complex amplitude vector over a [`ModeBasis`].
#[derive(Clone, Debug, PartialEq)]
pub struct SingleParticleVector {
    basis: ModeBasis,
    amplitudes: Vec<Complex64>,
}

impl SingleParticleVector {
    pub fn new(basis: ModeBasis, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::InvalidBasis(format!(
                "vector of length {} over a basis of {} modes",
                amplitudes.len(),
                basis.dim()
            )));
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidParameter("non-finite amplitude".into()));
        }
        Ok(SingleParticleVector { basis, amplitudes })
    }

    pub fn zero(basis: ModeBasis) -> Self {
        let dim = basis.dim();
        SingleParticleVector {
            basis,
            amplitudes: vec![Complex64::new(0.0, 0.0); dim],
        }
    }

    /// The basis vector of mode `index`.
    pub fn mode(basis: ModeBasis, index: usize) -> Result<Self> {
        basis.check_index(index)?;
        let mut v = Self::zero(basis);
        v.amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn basis(&self) -> &ModeBasis {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        SingleParticleVector {
            basis: self.basis.clone(),
            amplitudes: self.amplitudes.iter().map(|z| z * factor).collect(),
        }
    }

    pub(crate) fn axpy(&mut self, factor: Complex64, other: &Self) {
        for (a, b) in self.amplitudes.iter_mut().zip(&other.amplitudes) {
            *a += factor * b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.norm_sqr().sqrt() <= NORM_THRESHOLD
    }
}

/// Sparse superposition of occupation states with a fixed particle number.
#[derive(Clone, Debug, PartialEq)]
pub struct ManyBodyVector {
    basis: ModeBasis,
    statistics: Statistics,
    particles: usize,
    amplitudes: BTreeMap<Occupation, Complex64>,
}

impl ManyBodyVector {
    pub fn zero(basis: ModeBasis, statistics: Statistics, particles: usize) -> Self {
        ManyBodyVector {
            basis,
            statistics,
            particles,
            amplitudes: BTreeMap::new(),
        }
    }

    pub fn vacuum(basis: ModeBasis, statistics: Statistics) -> Self {
        let mut v = Self::zero(basis.clone(), statistics, 0);
        v.amplitudes
            .insert(Occupation::vacuum(basis.dim()), Complex64::new(1.0, 0.0));
        v
    }

    /// Builds a vector from explicit occupation amplitudes. Repeated occupations accumulate.
    pub fn from_terms(
        basis: ModeBasis,
        statistics: Statistics,
        particles: usize,
        terms: impl IntoIterator<Item = (Occupation, Complex64)>,
    ) -> Result<Self> {
        let mut v = Self::zero(basis, statistics, particles);
        for (occ, amp) in terms {
            if occ.0.len() != v.basis.dim() {
                return Err(Error::InvalidBasis(
                    "occupation length differs from basis".into(),
                ));
            }
            if occ.particles() != particles {
                return Err(Error::ParticleNumber {
                    required: particles,
                    found: occ.particles(),
                });
            }
            if statistics == Statistics::Fermion && occ.0.iter().any(|&n| n > 1) {
                return Err(Error::InvalidParameter(
                    "fermionic occupation above one".into(),
                ));
            }
            v.accumulate(occ, amp);
        }
        v.prune();
        Ok(v)
    }

    pub fn basis(&self) -> &ModeBasis {
        &self.basis
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn amplitude(&self, occ: &Occupation) -> Complex64 {
        self.amplitudes.get(occ).copied().unwrap_or_default()
    }

    /// Stored terms in ascending occupation order.
    pub fn terms(&self) -> impl Iterator<Item = (&Occupation, &Complex64)> {
        self.amplitudes.iter()
    }

    pub fn support_len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|z| z.norm_sqr()).sum()
    }

    fn accumulate(&mut self, occ: Occupation, amp: Complex64) {
        *self.amplitudes.entry(occ).or_default() += amp;
    }

    fn prune(&mut self) {
        self.amplitudes.retain(|_, z| z.norm() >= ZERO_THRESHOLD);
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        if self.statistics != other.statistics {
            return Err(Error::StatisticsMismatch);
        }
        Ok(())
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        for z in out.amplitudes.values_mut() {
            *z *= factor;
        }
        out.prune();
        out
    }

    /// `self + factor · other`.
    pub fn add_scaled(&self, factor: Complex64, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        // an empty vector belongs to every sector
        if other.amplitudes.is_empty() {
            return Ok(self.clone());
        }
        if self.amplitudes.is_empty() {
            return Ok(other.scaled(factor));
        }
        if self.particles != other.particles {
            return Err(Error::ParticleNumber {
                required: self.particles,
                found: other.particles,
            });
        }
        let mut out = self.clone();
        for (occ, amp) in &other.amplitudes {
            out.accumulate(occ.clone(), factor * amp);
        }
        out.prune();
        Ok(out)
    }

    /// Largest amplitude difference between two vectors of the same sector.
    pub fn max_deviation(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        let keys: BTreeSet<&Occupation> = self
            .amplitudes
            .keys()
            .chain(other.amplitudes.keys())
            .collect();
        Ok(keys
            .into_iter()
            .map(|k| (self.amplitude(k) - other.amplitude(k)).norm())
            .fold(0.0, f64::max))
    }
}

/// `a†_mode |state⟩`.
pub fn apply_creation(mode: usize, state: &ManyBodyVector) -> Result<ManyBodyVector> {
    state.basis.check_index(mode)?;
    let mut out = ManyBodyVector::zero(state.basis.clone(), state.statistics, state.particles + 1);
    for (occ, amp) in &state.amplitudes {
        let n = occ.0[mode];
        let factor = match state.statistics {
            Statistics::Boson => f64::from(n + 1).sqrt(),
            Statistics::Fermion => {
                if n == 1 {
                    continue;
                }
                parity_sign(occ.occupied_below(mode))
            }
        };
        let mut next = occ.clone();
        next.0[mode] += 1;
        out.accumulate(next, amp * factor);
    }
    out.prune();
    Ok(out)
}

/// `a_mode |state⟩`. The vacuum sector maps to the zero vector.
pub fn apply_annihilation(mode: usize, state: &ManyBodyVector) -> Result<ManyBodyVector> {
    state.basis.check_index(mode)?;
    let mut out = ManyBodyVector::zero(
        state.basis.clone(),
        state.statistics,
        state.particles.saturating_sub(1),
    );
    for (occ, amp) in &state.amplitudes {
        let n = occ.0[mode];
        if n == 0 {
            continue;
        }
        let factor = match state.statistics {
            Statistics::Boson => f64::from(n).sqrt(),
            Statistics::Fermion => parity_sign(occ.occupied_below(mode)),
        };
        let mut next = occ.clone();
        next.0[mode] -= 1;
        out.accumulate(next, amp * factor);
    }
    out.prune();
    Ok(out)
}

/// `Σ_i c_i a†_i |state⟩` for the single-particle vector `Σ_i c_i |i⟩`.
pub fn apply_creation_vector(
    orbital: &SingleParticleVector,
    state: &ManyBodyVector,
) -> Result<ManyBodyVector> {
    if orbital.basis != state.basis {
        return Err(Error::BasisMismatch);
    }
    let mut out = ManyBodyVector::zero(state.basis.clone(), state.statistics, state.particles + 1);
    for (i, c) in orbital.amplitudes.iter().enumerate() {
        if c.norm() == 0.0 {
            continue;
        }
        let created = apply_creation(i, state)?;
        for (occ, amp) in created.amplitudes {
            out.accumulate(occ, c * amp);
        }
    }
    out.prune();
    Ok(out)
}

fn parity_sign(count: u32) -> f64 {
    if count.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Fock inner product `⟨x|y⟩`; vectors of different particle number are orthogonal.
pub fn inner(x: &ManyBodyVector, y: &ManyBodyVector) -> Result<Complex64> {
    x.check_compatible(y)?;
    if x.particles != y.particles {
        return Ok(Complex64::new(0.0, 0.0));
    }
    // iterate over the smaller support
    let (small, large, conj_small) = if x.amplitudes.len() <= y.amplitudes.len() {
        (x, y, true)
    } else {
        (y, x, false)
    };
    Ok(small
        .amplitudes
        .iter()
        .filter_map(|(occ, a)| {
            large.amplitudes.get(occ).map(|b| {
                if conj_small {
                    a.conj() * b
                } else {
                    b.conj() * a
                }
            })
        })
        .sum())
}

/// `(Σ_i c_i a†_i)(Σ_j d_j a†_j)|0⟩` for `first = Σ c_i|i⟩`, `second = Σ d_j|j⟩`.
pub fn build_two_particle(
    first: &SingleParticleVector,
    second: &SingleParticleVector,
    statistics: Statistics,
) -> Result<ManyBodyVector> {
    if first.basis != second.basis {
        return Err(Error::BasisMismatch);
    }
    let vacuum = ManyBodyVector::vacuum(first.basis.clone(), statistics);
    let one = apply_creation_vector(second, &vacuum)?;
    apply_creation_vector(first, &one)
}
