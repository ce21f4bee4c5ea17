//! Hermitian spectra, von Neumann entropy and the two entanglement measures.

use nalgebra::SymmetricEigen;

use crate::fock::ManyBodyVector;
use crate::lfc::{localized_partial_trace, LfcState, SpatialRegion};
use crate::reduce::{trace_m_particles, DensityMatrix};
use crate::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const CLAMP_TOL: f64 = 1e-12;

/// Real eigenvalues in descending order.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// Largest absolute difference to `expected`, padded with zeros to a common length.
    pub fn max_deviation(&self, expected: &[f64]) -> f64 {
        let mut want = expected.to_vec();
        want.sort_by(|a, b| b.total_cmp(a));
        let n = want.len().max(self.eigenvalues.len());
        (0..n)
            .map(|k| {
                let a = self.eigenvalues.get(k).copied().unwrap_or(0.0);
                let b = want.get(k).copied().unwrap_or(0.0);
                (a - b).abs()
            })
            .fold(0.0, f64::max)
    }
}

pub fn eigenvalues_hermitian(m: &DensityMatrix) -> Result<Spectrum> {
    let dev = m.hermiticity_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let a = m.entries();
    let sym = (a + a.adjoint()).map(|z| z * 0.5);
    let mut eigenvalues: Vec<f64> = SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .map(|&l| {
            if (-CLAMP_TOL..0.0).contains(&l) {
                0.0
            } else {
                l
            }
        })
        .collect();
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    Ok(Spectrum { eigenvalues })
}

/// `−Σ λ ln λ` with `0 ln 0 = 0`.
pub fn entropy_of(eigenvalues: &[f64]) -> f64 {
    -eigenvalues
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| l * l.ln())
        .sum::<f64>()
}

/// `S(ρ) = −Tr ρ ln ρ` in nats for a trace-one density matrix.
pub fn von_neumann(m: &DensityMatrix) -> Result<f64> {
    let trace = m.trace();
    if (trace - 1.0).abs() > TRACE_TOL {
        return Err(Error::NotNormalized(trace));
    }
    let spectrum = eigenvalues_hermitian(m)?;
    if let Some(&low) = spectrum.eigenvalues.last() {
        if low < 0.0 {
            return Err(Error::NotPositive(low));
        }
    }
    Ok(entropy_of(&spectrum.eigenvalues))
}

/// Entropy of the normalized localized partial trace over `region`.
pub fn entanglement_lt(state: &LfcState, region: &SpatialRegion) -> Result<f64> {
    von_neumann(&localized_partial_trace(state, region)?.normalized)
}

/// Entropy of the one-particle reduced matrix over the complete basis, minus `ln N`.
///
/// Bosonic states with a doubly occupied mode give negative values; they are returned as is.
pub fn entanglement_sq(state: &ManyBodyVector) -> Result<f64> {
    let n = state.particles();
    if n < 2 {
        return Err(Error::ParticleNumber {
            required: 2,
            found: n,
        });
    }
    let reduced = trace_m_particles(state, n - 1)?;
    Ok(von_neumann(&reduced.normalized)? - (n as f64).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{apply_creation, ModeBasis, Statistics};
    use nalgebra::DMatrix;
    use num_complex::Complex64;
    use std::f64::consts::LN_2;

    fn basis(n: usize) -> ModeBasis {
        ModeBasis::new((0..n).map(|k| format!("m{k}")), ["s"]).unwrap()
    }

    fn matrix(n: usize, f: impl Fn(usize, usize) -> Complex64) -> DensityMatrix {
        DensityMatrix::single_particle(basis(n), DMatrix::from_fn(n, n, f)).unwrap()
    }

    fn real(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn spectra() {
        let half = matrix(2, |r, c| real(if r == c { 0.5 } else { 0.0 }));
        assert!(
            eigenvalues_hermitian(&half)
                .unwrap()
                .max_deviation(&[0.5, 0.5])
                < 1e-15
        );

        // rank-1 projector onto (1, i, 1)/√3
        let v = [real(1.0), Complex64::new(0.0, 1.0), real(1.0)];
        let proj = matrix(3, |r, c| v[r] * v[c].conj() / 3.0);
        let spectrum = eigenvalues_hermitian(&proj).unwrap();
        assert!(spectrum.max_deviation(&[1.0, 0.0, 0.0]) < 1e-14);
        assert!(spectrum.eigenvalues.iter().all(|&l| l >= 0.0));
        assert!(von_neumann(&proj).unwrap().abs() < 1e-12);
    }

    #[test]
    fn entropies() {
        let mixed = matrix(4, |r, c| real(if r == c { 0.25 } else { 0.0 }));
        assert!((von_neumann(&mixed).unwrap() - 4f64.ln()).abs() < 1e-14);
        assert!((entropy_of(&[0.5, 0.5, 0.0, 0.0]) - LN_2).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        let skew = matrix(2, |r, c| {
            if r < c {
                real(0.1)
            } else if r == c {
                real(0.5)
            } else {
                real(0.0)
            }
        });
        assert!(matches!(
            eigenvalues_hermitian(&skew),
            Err(Error::NotHermitian(_))
        ));
        let unnormalized = matrix(2, |r, c| real(if r == c { 1.0 } else { 0.0 }));
        assert!(matches!(
            von_neumann(&unnormalized),
            Err(Error::NotNormalized(_))
        ));
        let negative = matrix(2, |r, c| {
            real(if r != c {
                0.0
            } else if r == 0 {
                1.5
            } else {
                -0.5
            })
        });
        assert!(matches!(von_neumann(&negative), Err(Error::NotPositive(_))));
    }

    #[test]
    fn sq_measure_examples() {
        let b = basis(3);
        let vac = crate::fock::ManyBodyVector::vacuum(b, Statistics::Fermion);
        let slater = apply_creation(0, &apply_creation(2, &vac).unwrap()).unwrap();
        assert!(entanglement_sq(&slater).unwrap().abs() < 1e-12);

        let vac = crate::fock::ManyBodyVector::vacuum(basis(2), Statistics::Boson);
        let doubled = apply_creation(0, &apply_creation(0, &vac).unwrap())
            .unwrap()
            .scaled(real(1.0 / 2f64.sqrt()));
        assert!((entanglement_sq(&doubled).unwrap() + LN_2).abs() < 1e-12);
    }
}
