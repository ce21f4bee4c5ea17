//! Unlabeled two-particle kets with a symmetrized inner product.
//!
//! A two-particle state is a combination of product kets `|φ₁,φ₂⟩` that carry no particle
//! labels. Exchange statistics enter only through the inner product
//! `⟨φ,ζ|χ₁,χ₂⟩ = ⟨φ|χ₁⟩⟨ζ|χ₂⟩ + η⟨φ|χ₂⟩⟨ζ|χ₁⟩`, and through the single-particle projection
//! built on it. Reduced matrices here are computed from the two-particle coefficient tensor
//! alone, with no reference to occupation numbers.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::fock::{
    build_two_particle, ManyBodyVector, ModeBasis, SingleParticleVector, Statistics,
};
use crate::reduce::{DensityMatrix, Reduced};
use crate::{Error, Result, NORM_THRESHOLD};

/// The unlabeled entity `|first, second⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductKet {
    pub first: SingleParticleVector,
    pub second: SingleParticleVector,
}

impl ProductKet {
    pub fn new(first: SingleParticleVector, second: SingleParticleVector) -> Result<Self> {
        if first.basis() != second.basis() {
            return Err(Error::BasisMismatch);
        }
        Ok(ProductKet { first, second })
    }

    pub fn basis(&self) -> &ModeBasis {
        self.first.basis()
    }
}

/// `⟨φ,ζ|χ₁,χ₂⟩ = ⟨φ|χ₁⟩⟨ζ|χ₂⟩ + η⟨φ|χ₂⟩⟨ζ|χ₁⟩` for `bra = (φ,ζ)`, `ket = (χ₁,χ₂)`.
pub fn symmetric_inner(
    bra: &ProductKet,
    ket: &ProductKet,
    statistics: Statistics,
) -> Result<Complex64> {
    let direct = bra.first.inner(&ket.first)? * bra.second.inner(&ket.second)?;
    let exchange = bra.first.inner(&ket.second)? * bra.second.inner(&ket.first)?;
    Ok(direct + statistics.eta_f64() * exchange)
}

/// A linear combination of product kets. It need not be normalized.
#[derive(Clone, Debug, PartialEq)]
pub struct LfcState {
    basis: ModeBasis,
    statistics: Statistics,
    terms: Vec<(Complex64, ProductKet)>,
}

impl LfcState {
    pub fn new(basis: ModeBasis, statistics: Statistics) -> Self {
        LfcState {
            basis,
            statistics,
            terms: Vec::new(),
        }
    }

    pub fn push(&mut self, coefficient: Complex64, ket: ProductKet) -> Result<()> {
        if ket.basis() != &self.basis {
            return Err(Error::BasisMismatch);
        }
        self.terms.push((coefficient, ket));
        Ok(())
    }

    pub fn with_term(
        mut self,
        coefficient: Complex64,
        first: SingleParticleVector,
        second: SingleParticleVector,
    ) -> Result<Self> {
        self.push(coefficient, ProductKet::new(first, second)?)?;
        Ok(self)
    }

    /// `Σ_{ij} C_{ij} |i, j⟩` over basis modes; zero entries are skipped.
    pub fn from_tensor(
        basis: ModeBasis,
        statistics: Statistics,
        tensor: &DMatrix<Complex64>,
    ) -> Result<Self> {
        let dim = basis.dim();
        if tensor.nrows() != dim || tensor.ncols() != dim {
            return Err(Error::InvalidBasis(
                "coefficient tensor shape differs from basis".into(),
            ));
        }
        let mut state = Self::new(basis.clone(), statistics);
        for i in 0..dim {
            for j in 0..dim {
                let c = tensor[(i, j)];
                if c != Complex64::default() {
                    let ket = ProductKet::new(
                        SingleParticleVector::mode(basis.clone(), i)?,
                        SingleParticleVector::mode(basis.clone(), j)?,
                    )?;
                    state.terms.push((c, ket));
                }
            }
        }
        Ok(state)
    }

    pub fn basis(&self) -> &ModeBasis {
        &self.basis
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn terms(&self) -> &[(Complex64, ProductKet)] {
        &self.terms
    }

    /// Ordered expansion coefficients `C_{ij}` with `|Ψ⟩ = Σ_{ij} C_{ij} |i, j⟩`.
    pub fn coefficient_tensor(&self) -> DMatrix<Complex64> {
        let dim = self.basis.dim();
        let mut tensor = DMatrix::zeros(dim, dim);
        for (c, ket) in &self.terms {
            let (u, v) = (ket.first.amplitudes(), ket.second.amplitudes());
            for i in 0..dim {
                if u[i] == Complex64::default() {
                    continue;
                }
                for j in 0..dim {
                    tensor[(i, j)] += c * u[i] * v[j];
                }
            }
        }
        tensor
    }

    /// `⟨self|other⟩` extended bilinearly from [`symmetric_inner`].
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        if self.statistics != other.statistics {
            return Err(Error::StatisticsMismatch);
        }
        let mut total = Complex64::default();
        for (a, bra) in &self.terms {
            for (b, ket) in &other.terms {
                total += a.conj() * b * symmetric_inner(bra, ket, self.statistics)?;
            }
        }
        Ok(total)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.inner(self).map(|z| z.re).unwrap_or(0.0)
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        for (c, _) in &mut out.terms {
            *c *= factor;
        }
        out
    }

    /// The state divided by `√⟨Ψ|Ψ⟩`.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_sqr().max(0.0).sqrt();
        if norm <= NORM_THRESHOLD {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scaled(Complex64::new(1.0 / norm, 0.0)))
    }

    fn check_nonzero(&self) -> Result<()> {
        if self.norm_sqr().max(0.0).sqrt() <= NORM_THRESHOLD {
            Err(Error::ZeroNorm)
        } else {
            Ok(())
        }
    }
}

/// A set of spatial tags; the localized trace runs over every mode carrying one of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpatialRegion {
    tags: BTreeSet<String>,
}

impl SpatialRegion {
    pub fn new<I>(basis: &ModeBasis, tags: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: Into<String>,
    {
        let tags: BTreeSet<String> = tags.into_iter().map(Into::into).collect();
        if tags.is_empty() {
            return Err(Error::EmptyRegion);
        }
        if let Some(bad) = tags.iter().find(|t| basis.spatial_index(t).is_none()) {
            return Err(Error::UnknownSpatialTag(bad.clone()));
        }
        Ok(SpatialRegion { tags })
    }

    /// Every spatial tag of `basis`.
    pub fn all(basis: &ModeBasis) -> Self {
        SpatialRegion {
            tags: basis.spatial_tags().iter().cloned().collect(),
        }
    }

    pub fn tags(&self) -> impl Iterator<Item = &str> {
        self.tags.iter().map(String::as_str)
    }

    /// Basis indices of the region's modes, ascending.
    pub fn mode_indices(&self, basis: &ModeBasis) -> Vec<usize> {
        basis.modes_in_spatial(self.tags())
    }
}

/// `⟨probe|·|Ψ⟩ = Σ c (⟨probe|χ₁⟩|χ₂⟩ + η⟨probe|χ₂⟩|χ₁⟩)`, a single-particle vector.
pub fn project_single(
    probe: &SingleParticleVector,
    state: &LfcState,
) -> Result<SingleParticleVector> {
    if probe.basis() != state.basis() {
        return Err(Error::BasisMismatch);
    }
    let eta = state.statistics.eta_f64();
    let mut out = SingleParticleVector::zero(state.basis.clone());
    for (c, ket) in &state.terms {
        out.axpy(c * probe.inner(&ket.first)?, &ket.second);
        out.axpy(c * eta * probe.inner(&ket.second)?, &ket.first);
    }
    Ok(out)
}

/// `Π·|Ψ⟩` for the one-particle projector `Π = |ψ⟩⟨ψ|` onto the normalized probe.
///
/// Each term maps as `|χ₁,χ₂⟩ ↦ ⟨ψ|χ₁⟩|ψ,χ₂⟩ + η⟨ψ|χ₂⟩|ψ,χ₁⟩`, i.e. the probe replaces the
/// factor it overlaps. This is the action of `a†_ψ a_ψ` on `a†_χ₁ a†_χ₂|0⟩`.
pub fn apply_projector(probe: &SingleParticleVector, state: &LfcState) -> Result<LfcState> {
    if probe.basis() != state.basis() {
        return Err(Error::BasisMismatch);
    }
    let norm = probe.norm_sqr().sqrt();
    if norm <= NORM_THRESHOLD {
        return Err(Error::ZeroProjection);
    }
    let psi = probe.scaled(Complex64::new(1.0 / norm, 0.0));
    let eta = state.statistics.eta_f64();
    let mut out = LfcState::new(state.basis.clone(), state.statistics);
    for (c, ket) in &state.terms {
        let direct = psi.inner(&ket.first)?;
        if direct != Complex64::default() {
            out.terms.push((
                c * direct,
                ProductKet::new(psi.clone(), ket.second.clone())?,
            ));
        }
        let exchange = psi.inner(&ket.second)?;
        if exchange != Complex64::default() {
            out.terms.push((
                c * eta * exchange,
                ProductKet::new(psi.clone(), ket.first.clone())?,
            ));
        }
    }
    Ok(out)
}

/// Conditional single-particle state after finding one particle in `probe`, and the
/// probability `p = ⟨Π⟩_Φ / 2` of that outcome on the normalized state `Φ`.
pub fn normalized_projection(
    probe: &SingleParticleVector,
    state: &LfcState,
) -> Result<(SingleParticleVector, f64)> {
    if probe.basis() != state.basis() {
        return Err(Error::BasisMismatch);
    }
    let phi = state.normalized()?;
    let probe_norm = probe.norm_sqr().sqrt();
    if probe_norm <= NORM_THRESHOLD {
        return Err(Error::ZeroProjection);
    }
    let psi = probe.scaled(Complex64::new(1.0 / probe_norm, 0.0));
    let expectation = phi.inner(&apply_projector(&psi, &phi)?)?.re;
    if expectation <= NORM_THRESHOLD * NORM_THRESHOLD {
        return Err(Error::ZeroProjection);
    }
    let conditional =
        project_single(&psi, &phi)?.scaled(Complex64::new(1.0 / expectation.sqrt(), 0.0));
    Ok((conditional, expectation / 2.0))
}

/// `Σ_k Π_k · |Ψ⟩` with `Π_k` running over the basis modes.
pub fn apply_identity(state: &LfcState) -> Result<LfcState> {
    let mut out = LfcState::new(state.basis.clone(), state.statistics);
    for k in 0..state.basis.dim() {
        let probe = SingleParticleVector::mode(state.basis.clone(), k)?;
        out.terms.extend(apply_projector(&probe, state)?.terms);
    }
    Ok(out)
}

/// The scalar `λ = ⟨Ψ|𝕀⁽¹⁾Ψ⟩ / ⟨Ψ|Ψ⟩`; two for every two-particle state.
pub fn one_particle_identity_check(state: &LfcState) -> Result<f64> {
    state.check_nonzero()?;
    let applied = apply_identity(state)?;
    Ok((state.inner(&applied)? / state.inner(state)?).re)
}

/// Sums `⟨ξm|ρ|ξm⟩` over the modes with spatial tag in `region`.
///
/// With `C` the coefficient tensor, the contribution of mode `m` is `|v_m⟩⟨v_m|` with
/// `v_m[γ] = C[m][γ] + η C[γ][m]`: the four-term expansion of the symmetric inner product.
pub fn localized_partial_trace(state: &LfcState, region: &SpatialRegion) -> Result<Reduced> {
    state.check_nonzero()?;
    let modes = region.mode_indices(state.basis());
    if modes.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let tensor = state.coefficient_tensor();
    let eta = state.statistics.eta_f64();
    let dim = state.basis.dim();
    let mut raw = DMatrix::<Complex64>::zeros(dim, dim);
    for &m in &modes {
        let v: Vec<Complex64> = (0..dim)
            .map(|g| tensor[(m, g)] + eta * tensor[(g, m)])
            .collect();
        for r in 0..dim {
            if v[r] == Complex64::default() {
                continue;
            }
            for col in 0..dim {
                raw[(r, col)] += v[r] * v[col].conj();
            }
        }
    }
    Reduced::from_raw(DensityMatrix::single_particle(state.basis.clone(), raw)?)
}

/// Partial trace over the complete single-particle basis.
pub fn full_partial_trace(state: &LfcState) -> Result<Reduced> {
    localized_partial_trace(state, &SpatialRegion::all(state.basis()))
}

/// Maps `Σ c|φ,ψ⟩` to `Σ c a†_φ a†_ψ |0⟩`.
pub fn to_fock(state: &LfcState) -> Result<ManyBodyVector> {
    let mut out = ManyBodyVector::zero(state.basis.clone(), state.statistics, 2);
    for (c, ket) in &state.terms {
        let pair = build_two_particle(&ket.first, &ket.second, state.statistics)?;
        out = out.add_scaled(*c, &pair)?;
    }
    Ok(out)
}
