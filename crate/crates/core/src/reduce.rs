//! Partial traces of Fock-space states over one or more particles.

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::fock::{apply_annihilation, sector, ManyBodyVector, ModeBasis, Occupation, Statistics};
use crate::{Error, Result, NORM_THRESHOLD};

/// Hermitian matrix over the occupation states of a fixed-particle sector.
///
/// For one-particle sectors the rows are the basis modes in [`ModeBasis`] order, so the matrix
/// is an ordinary `L × L` single-particle density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    basis: ModeBasis,
    rows: Arc<Vec<Occupation>>,
    entries: DMatrix<Complex64>,
    normalized: bool,
    trace: f64,
}

impl DensityMatrix {
    /// Unnormalized single-particle matrix indexed by the modes of `basis`.
    pub fn single_particle(basis: ModeBasis, entries: DMatrix<Complex64>) -> Result<Self> {
        let dim = basis.dim();
        let rows = (0..dim).map(|k| Occupation::single(dim, k)).collect();
        Self::over_sector(basis, rows, entries)
    }

    fn over_sector(
        basis: ModeBasis,
        rows: Vec<Occupation>,
        entries: DMatrix<Complex64>,
    ) -> Result<Self> {
        if entries.nrows() != rows.len() || entries.ncols() != rows.len() {
            return Err(Error::InvalidBasis(format!(
                "{}x{} matrix over a sector of {} states",
                entries.nrows(),
                entries.ncols(),
                rows.len()
            )));
        }
        let trace = entries.diagonal().iter().map(|z| z.re).sum();
        Ok(DensityMatrix {
            basis,
            rows: Arc::new(rows),
            entries,
            normalized: false,
            trace,
        })
    }

    /// Flags an already trace-normalized matrix, recording the trace it was divided by.
    pub(crate) fn mark_normalized(mut self, trace_value: f64) -> Self {
        self.normalized = true;
        self.trace = trace_value;
        self
    }

    pub fn basis(&self) -> &ModeBasis {
        &self.basis
    }

    /// Occupation state labelling each row and column.
    pub fn rows(&self) -> &[Occupation] {
        &self.rows
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Number of particles in the sector the matrix acts on.
    pub fn particles(&self) -> usize {
        self.rows.first().map_or(0, Occupation::particles)
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Trace of the unnormalized matrix this one was derived from.
    pub fn trace_value(&self) -> f64 {
        self.trace
    }

    /// Real part of the trace of the stored entries.
    pub fn trace(&self) -> f64 {
        self.entries.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        if self.trace.abs() <= NORM_THRESHOLD * NORM_THRESHOLD {
            return Err(Error::ZeroTrace);
        }
        Ok(DensityMatrix {
            basis: self.basis.clone(),
            rows: self.rows.clone(),
            entries: self.entries.map(|z| z / self.trace),
            normalized: true,
            trace: self.trace,
        })
    }

    /// `max |ρ − ρ†|` over all entries.
    pub fn hermiticity_deviation(&self) -> f64 {
        let adj = self.entries.adjoint();
        (&self.entries - adj)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest elementwise difference from another matrix over the same rows.
    pub fn max_deviation(&self, other: &Self) -> Result<f64> {
        if self.basis != other.basis || self.rows != other.rows {
            return Err(Error::BasisMismatch);
        }
        Ok((&self.entries - &other.entries)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }
}

/// An unnormalized reduced matrix together with its trace-normalized form.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduced {
    pub raw: DensityMatrix,
    pub normalized: DensityMatrix,
}

impl Reduced {
    pub fn from_raw(raw: DensityMatrix) -> Result<Self> {
        let normalized = raw.normalized()?;
        Ok(Reduced { raw, normalized })
    }
}

/// `Σ_k |v_k⟩⟨v_k|` over the full sector of the vectors' particle number.
fn mixture_matrix(
    basis: &ModeBasis,
    statistics: Statistics,
    particles: usize,
    vectors: &[ManyBodyVector],
) -> Result<DensityMatrix> {
    let rows = sector(basis.dim(), particles, statistics);
    let index: HashMap<&Occupation, usize> = rows.iter().enumerate().map(|(k, o)| (o, k)).collect();
    let mut entries = DMatrix::<Complex64>::zeros(rows.len(), rows.len());
    for v in vectors {
        let support: Vec<(usize, Complex64)> = v.terms().map(|(o, z)| (index[o], *z)).collect();
        for &(r, zr) in &support {
            for &(c, zc) in &support {
                entries[(r, c)] += zr * zc.conj();
            }
        }
    }
    DensityMatrix::over_sector(basis.clone(), rows, entries)
}

/// Traces one particle out of `state` using only the modes in `modes`:
/// `ρ̃ = Σ_{j ∈ modes} (a_j|ψ⟩)(a_j|ψ⟩)†`.
///
/// Passing every mode gives the trace over the complete single-particle basis; a subset of the
/// modes of one spatial region gives the localized partial trace. For two-particle input the
/// result is a single-particle matrix.
pub fn trace_one_particle(state: &ManyBodyVector, modes: &[usize]) -> Result<Reduced> {
    if state.particles() < 2 {
        return Err(Error::ParticleNumber {
            required: 2,
            found: state.particles(),
        });
    }
    if modes.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let vectors = modes
        .iter()
        .map(|&j| apply_annihilation(j, state))
        .collect::<Result<Vec<_>>>()?;
    let raw = mixture_matrix(
        state.basis(),
        state.statistics(),
        state.particles() - 1,
        &vectors,
    )?;
    Reduced::from_raw(raw)
}

/// Traces `m` particles out of `state` over the complete basis, normalizing only at the end.
pub fn trace_m_particles(state: &ManyBodyVector, m: usize) -> Result<Reduced> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "must trace at least one particle".into(),
        ));
    }
    if m >= state.particles() {
        return Err(Error::ParticleNumber {
            required: m + 1,
            found: state.particles(),
        });
    }
    let dim = state.basis().dim();
    let mut vectors = vec![state.clone()];
    for _ in 0..m {
        let mut next = Vec::with_capacity(vectors.len() * dim);
        for v in &vectors {
            for j in 0..dim {
                let w = apply_annihilation(j, v)?;
                if !w.is_zero() {
                    next.push(w);
                }
            }
        }
        vectors = next;
    }
    let raw = mixture_matrix(
        state.basis(),
        state.statistics(),
        state.particles() - m,
        &vectors,
    )?;
    Reduced::from_raw(raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{apply_creation, build_two_particle, SingleParticleVector};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn slater(basis: &ModeBasis, stats: Statistics, modes: &[usize]) -> ManyBodyVector {
        let mut v = ManyBodyVector::vacuum(basis.clone(), stats);
        for &m in modes.iter().rev() {
            v = apply_creation(m, &v).unwrap();
        }
        v
    }

    fn assert_matrix(m: &DensityMatrix, expected: &[f64]) {
        let n = m.dim();
        for (r, &diag) in expected.iter().enumerate().take(n) {
            for col in 0..n {
                let want = if r == col { diag } else { 0.0 };
                assert!(
                    (m.entries()[(r, col)] - c(want)).norm() < 1e-13,
                    "entry ({r},{col})"
                );
            }
        }
    }

    #[test]
    fn slater_full_trace_is_half_identity() {
        let b = ModeBasis::new(["x", "y", "z"], ["s"]).unwrap();
        let psi = slater(&b, Statistics::Fermion, &[0, 1]);
        let red = trace_one_particle(&psi, &[0, 1, 2]).unwrap();
        assert!((red.raw.trace_value() - 2.0).abs() < 1e-14);
        assert_matrix(&red.normalized, &[0.5, 0.5, 0.0]);
    }

    #[test]
    fn bosonic_double_occupancy_is_pure() {
        let b = ModeBasis::new(["x", "y"], ["s"]).unwrap();
        let psi = slater(&b, Statistics::Boson, &[0, 0]).scaled(c(1.0 / 2f64.sqrt()));
        let red = trace_one_particle(&psi, &[0, 1]).unwrap();
        assert_matrix(&red.normalized, &[1.0, 0.0]);
        let m1 = trace_m_particles(&psi, 1).unwrap();
        assert_eq!(m1, red);
    }

    #[test]
    fn triple_slater_double_trace() {
        let b = ModeBasis::new(["1", "2", "3"], ["s"]).unwrap();
        let psi = slater(&b, Statistics::Fermion, &[0, 1, 2]);
        let red = trace_m_particles(&psi, 2).unwrap();
        assert_eq!(red.normalized.particles(), 1);
        assert_matrix(&red.normalized, &[1.0 / 3.0; 3]);
        // one step leaves a two-particle operator on the 3-state sector
        let one = trace_one_particle(&psi, &[0, 1, 2]).unwrap();
        assert_eq!(one.raw.particles(), 2);
        assert_eq!(one.raw.dim(), 3);
        assert!((one.raw.trace_value() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn errors() {
        let b = ModeBasis::new(["x", "y"], ["s"]).unwrap();
        let one = slater(&b, Statistics::Fermion, &[0]);
        assert!(matches!(
            trace_one_particle(&one, &[0]),
            Err(Error::ParticleNumber { .. })
        ));
        let two = slater(&b, Statistics::Fermion, &[0, 1]);
        assert_eq!(trace_one_particle(&two, &[]), Err(Error::EmptyRegion));
        assert!(matches!(
            trace_m_particles(&two, 2),
            Err(Error::ParticleNumber { .. })
        ));
        let x = SingleParticleVector::mode(b.clone(), 0).unwrap();
        let zero = build_two_particle(&x, &x, Statistics::Fermion).unwrap();
        assert_eq!(trace_one_particle(&zero, &[0, 1]), Err(Error::ZeroTrace));
    }

    #[test]
    fn disjoint_subsets_add_up() {
        let b = ModeBasis::new(["L", "R"], ["up", "dn"]).unwrap();
        let amps = |v: [f64; 4]| v.iter().map(|&x| c(x)).collect::<Vec<_>>();
        let x = SingleParticleVector::new(b.clone(), amps([0.3, -0.2, 0.8, 0.1])).unwrap();
        let y = SingleParticleVector::new(b.clone(), amps([0.1, 0.5, -0.4, 0.6])).unwrap();
        for stats in [Statistics::Boson, Statistics::Fermion] {
            let psi = build_two_particle(&x, &y, stats).unwrap();
            let full = trace_one_particle(&psi, &[0, 1, 2, 3]).unwrap().raw;
            let left = trace_one_particle(&psi, &[0, 1]).unwrap().raw;
            let right = trace_one_particle(&psi, &[2, 3]).unwrap().raw;
            let sum = left.entries() + right.entries();
            let dev = (&sum - full.entries())
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            assert!(dev < 1e-14);
            assert!((left.trace_value() + right.trace_value() - full.trace_value()).abs() < 1e-14);
            assert!((full.trace_value() - 2.0 * psi.norm_sqr()).abs() < 1e-13);
        }
    }
}
