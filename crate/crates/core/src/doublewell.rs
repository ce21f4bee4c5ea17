//! Two spin-½ particles in an asymmetric double well.
//!
//! One particle sits in the left well `L`; the other occupies the mode
//! `|B⟩ = √χ |L⟩ + √(1−χ) |R⟩`, so `χ = |⟨L|B⟩|²` is the squared spatial overlap:
//!
//! ```text
//! |ψ⟩ = a |L↑, B↓⟩ + b e^{iθ} |L↓, B↑⟩,   b = √(1 − a²)
//! ```
//!
//! The basis order is `(L↑, L↓, R↑, R↓)`. The closed forms below (reduced-matrix coefficients,
//! both spectra and both entropies) are evaluated directly; [`generic_check`] recomputes the
//! same quantities through the general unlabeled-ket and Fock-space pipelines.

use std::f64::consts::LN_2;
use std::io::{self, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::entropy::{eigenvalues_hermitian, entanglement_lt, entanglement_sq, entropy_of};
use crate::fock::{apply_creation, ManyBodyVector, ModeBasis, SingleParticleVector, Statistics};
use crate::format::g12;
use crate::lfc::{full_partial_trace, localized_partial_trace, LfcState, SpatialRegion};
use crate::reduce::{trace_one_particle, DensityMatrix};
use crate::{Error, Result, NORM_THRESHOLD};

const L_UP: usize = 0;
const L_DN: usize = 1;
const R_UP: usize = 2;
const R_DN: usize = 3;

/// Agreement required between the closed forms and the generic pipelines.
pub const CROSS_CHECK_TOL: f64 = 1e-10;

pub fn basis() -> ModeBasis {
    ModeBasis::new(["L", "R"], ["up", "dn"]).expect("static basis")
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoubleWellParams {
    pub a: f64,
    pub theta: f64,
    pub chi: f64,
    pub statistics: Statistics,
}

impl DoubleWellParams {
    pub fn new(a: f64, theta: f64, chi: f64, statistics: Statistics) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::InvalidParameter(format!("a = {a} outside [0, 1]")));
        }
        if !(0.0..=1.0).contains(&chi) {
            return Err(Error::InvalidParameter(format!(
                "chi = {chi} outside [0, 1]"
            )));
        }
        if !theta.is_finite() {
            return Err(Error::InvalidParameter("theta must be finite".into()));
        }
        Ok(DoubleWellParams {
            a,
            theta,
            chi,
            statistics,
        })
    }

    /// Parameters given by the population `a²` instead of the amplitude.
    pub fn from_a2(a2: f64, theta: f64, chi: f64, statistics: Statistics) -> Result<Self> {
        if !(0.0..=1.0).contains(&a2) {
            return Err(Error::InvalidParameter(format!(
                "a^2 = {a2} outside [0, 1]"
            )));
        }
        Self::new(a2.sqrt(), theta, chi, statistics)
    }

    pub fn b(&self) -> f64 {
        (1.0 - self.a * self.a).max(0.0).sqrt()
    }

    fn eta(&self) -> f64 {
        self.statistics.eta_f64()
    }

    /// `⟨ψ|ψ⟩ = 1 + 2ηabχ cos θ` of the unnormalized state.
    pub fn norm_sqr(&self) -> f64 {
        1.0 + 2.0 * self.eta() * self.a * self.b() * self.chi * self.theta.cos()
    }

    /// Zero only for fermions at `a = b`, `θ ≡ 0`, `χ = 1`.
    pub fn is_zero_norm(&self) -> bool {
        self.norm_sqr().max(0.0).sqrt() <= NORM_THRESHOLD
    }

    fn check_norm(&self) -> Result<()> {
        if self.is_zero_norm() {
            Err(Error::ZeroNorm)
        } else {
            Ok(())
        }
    }
}

/// The state in both representations over [`basis`]. Neither is normalized.
///
/// The Fock vector is assembled from its three occupation terms directly rather than by
/// mapping the unlabeled-ket state.
pub fn build_state(p: &DoubleWellParams) -> Result<(LfcState, ManyBodyVector)> {
    p.check_norm()?;
    let basis = basis();
    let (a, b, chi) = (p.a, p.b(), p.chi);
    let phase = Complex64::from_polar(1.0, p.theta);
    let real = |x: f64| Complex64::new(x, 0.0);

    let orbital = |internal: usize| -> Result<SingleParticleVector> {
        let mut amps = vec![Complex64::default(); 4];
        amps[internal] = real(chi.sqrt());
        amps[2 + internal] = real((1.0 - chi).sqrt());
        SingleParticleVector::new(basis.clone(), amps)
    };
    let mode = |k: usize| SingleParticleVector::mode(basis.clone(), k);
    let lfc = LfcState::new(basis.clone(), p.statistics)
        .with_term(real(a), mode(L_UP)?, orbital(1)?)?
        .with_term(b * phase, mode(L_DN)?, orbital(0)?)?;

    let eta = p.eta();
    let vac = ManyBodyVector::vacuum(basis.clone(), p.statistics);
    let pair = |i: usize, j: usize| -> Result<ManyBodyVector> {
        apply_creation(i, &apply_creation(j, &vac)?)
    };
    let terms = [
        ((a + eta * b * phase) * chi.sqrt(), pair(L_UP, L_DN)?),
        (real(a * (1.0 - chi).sqrt()), pair(L_UP, R_DN)?),
        (b * phase * (1.0 - chi).sqrt(), pair(L_DN, R_UP)?),
    ];
    let mut fock = ManyBodyVector::zero(basis, p.statistics, 2);
    for (c, v) in &terms {
        fock = fock.add_scaled(*c, v)?;
    }
    Ok((lfc, fock))
}

/// Coefficients of the unnormalized localized reduced matrix over the left well.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedFormCoefficients {
    pub c1: Complex64,
    pub c2: Complex64,
    pub c3: Complex64,
    pub c4: Complex64,
    pub c5: Complex64,
    pub n1: f64,
}

impl ClosedFormCoefficients {
    /// `[[c1,0,c4,0],[0,c1,0,c5],[c4*,0,c2,0],[0,c5*,0,c3]]`.
    pub fn localized_matrix(&self) -> DMatrix<Complex64> {
        let z = Complex64::default();
        DMatrix::from_row_slice(
            4,
            4,
            &[
                self.c1,
                z,
                self.c4,
                z, //
                z,
                self.c1,
                z,
                self.c5, //
                self.c4.conj(),
                z,
                self.c2,
                z, //
                z,
                self.c5.conj(),
                z,
                self.c3,
            ],
        )
    }
}

pub fn coefficients(p: &DoubleWellParams) -> ClosedFormCoefficients {
    let (a, b, chi, eta) = (p.a, p.b(), p.chi, p.eta());
    let phase = Complex64::from_polar(1.0, p.theta);
    let overlap = ((1.0 - chi) * chi).sqrt();
    let shifted = a + eta * b * phase;
    ClosedFormCoefficients {
        c1: Complex64::new(chi * (1.0 + 2.0 * a * b * eta * p.theta.cos()), 0.0),
        c2: Complex64::new(b * b * (1.0 - chi), 0.0),
        c3: Complex64::new(a * a * (1.0 - chi), 0.0),
        c4: eta * b * phase.conj() * shifted * overlap,
        c5: a * shifted * overlap,
        n1: 1.0 + chi * (1.0 + 4.0 * eta * a * b * p.theta.cos()),
    }
}

/// The two nonzero eigenvalues of the normalized localized reduced matrix.
pub fn lambda_closed(p: &DoubleWellParams) -> Result<(f64, f64)> {
    let (a, b, chi, eta) = (p.a, p.b(), p.chi, p.eta());
    let cos = p.theta.cos();
    let n1 = 1.0 + chi * (1.0 + 4.0 * eta * a * b * cos);
    if n1 <= NORM_THRESHOLD {
        return Err(Error::ZeroNorm);
    }
    let l1 = (a * a + chi * (b * b + 2.0 * eta * a * b * cos)) / n1;
    Ok((l1, 1.0 - l1))
}

/// Normalized one-particle reduced matrix over the complete basis.
pub fn rho_sq_closed(p: &DoubleWellParams) -> Result<DensityMatrix> {
    let c = coefficients(p);
    let denom = 2.0 * (c.n1 - c.c1.re);
    if denom <= NORM_THRESHOLD {
        return Err(Error::ZeroNorm);
    }
    let z = Complex64::default();
    let entries = DMatrix::from_row_slice(
        4,
        4,
        &[
            c.c1 + c.c3,
            z,
            c.c4,
            z, //
            z,
            c.c1 + c.c2,
            z,
            c.c5, //
            c.c4.conj(),
            z,
            c.c2,
            z, //
            z,
            c.c5.conj(),
            z,
            c.c3,
        ],
    )
    .map(|e| e / denom);
    Ok(DensityMatrix::single_particle(basis(), entries)?.mark_normalized(denom))
}

/// `(ω₁, ω₂, ω₃, ω₄)` with `ω₁ = ω₂ = ¼(1 + √R)` and `ω₃ = ω₄ = ¼(1 − √R)`.
pub fn omega_closed(p: &DoubleWellParams) -> Result<[f64; 4]> {
    let a2 = p.a * p.a;
    let ab = (a2 * (1.0 - a2)).max(0.0).sqrt();
    let denom = (2.0 * ab * p.chi * p.theta.cos() + p.eta()).powi(2);
    if denom <= 1e-24 {
        return Err(Error::ZeroNorm);
    }
    let r = 1.0 - 4.0 * a2 * (1.0 - a2) * (1.0 - p.chi).powi(2) / denom;
    if r < -1e-12 {
        return Err(Error::InvalidParameter(format!(
            "negative discriminant {r:e}"
        )));
    }
    let root = r.max(0.0).sqrt();
    let hi = 0.25 * (1.0 + root);
    let lo = 0.25 * (1.0 - root);
    Ok([hi, hi, lo, lo])
}

/// Localized-trace entanglement from the closed-form spectrum.
pub fn e_lt_closed(p: &DoubleWellParams) -> Result<f64> {
    let (l1, l2) = lambda_closed(p)?;
    Ok(entropy_of(&[l1, l2]))
}

/// Second-quantization entanglement from the closed-form spectrum, shifted by `−ln 2`.
pub fn e_sq_closed(p: &DoubleWellParams) -> Result<f64> {
    Ok(entropy_of(&omega_closed(p)?) - LN_2)
}

/// Quantities recomputed through the generic pipelines for one parameter point.
#[derive(Clone, Debug, PartialEq)]
pub struct GenericCheck {
    /// Spectrum of the normalized localized trace over the left well.
    pub lt_spectrum: Vec<f64>,
    /// Spectrum of the normalized Fock-space reduction over the complete basis.
    pub sq_spectrum: Vec<f64>,
    pub e_lt: f64,
    pub e_sq: f64,
    /// Largest entry difference between the localized traces of both representations.
    pub representation_deviation: f64,
    /// Largest entry difference between the closed-form and generic complete-basis matrices.
    pub rho_sq_deviation: f64,
}

pub fn generic_check(p: &DoubleWellParams) -> Result<GenericCheck> {
    let (lfc, fock) = build_state(p)?;
    let basis = lfc.basis().clone();
    let left = SpatialRegion::new(&basis, ["L"])?;
    let lt = localized_partial_trace(&lfc, &left)?;
    let lt_fock = trace_one_particle(&fock, &left.mode_indices(&basis))?;
    let full = trace_one_particle(&fock, &(0..basis.dim()).collect::<Vec<_>>())?;
    let full_lfc = full_partial_trace(&lfc)?;
    let closed = rho_sq_closed(p)?;
    Ok(GenericCheck {
        lt_spectrum: eigenvalues_hermitian(&lt.normalized)?.eigenvalues,
        sq_spectrum: eigenvalues_hermitian(&full.normalized)?.eigenvalues,
        e_lt: entanglement_lt(&lfc, &left)?,
        e_sq: entanglement_sq(&fock)?,
        representation_deviation: lt
            .raw
            .max_deviation(&lt_fock.raw)?
            .max(full.raw.max_deviation(&full_lfc.raw)?),
        rho_sq_deviation: closed.max_deviation(&full.normalized)?,
    })
}

/// `n` evenly spaced values of `a²` covering `[0, 1]`.
pub fn a2_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub a2: Vec<f64>,
    pub theta: Vec<f64>,
    pub chi: Vec<f64>,
    pub statistics: Vec<Statistics>,
    pub verify: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RowValues {
    pub e_lt: f64,
    pub e_sq: f64,
    pub lambda1: f64,
    pub omega1: f64,
    pub omega3: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub a2: f64,
    pub theta: f64,
    pub chi: f64,
    pub statistics: Statistics,
    /// `None` marks a zero-norm parameter point.
    pub values: Option<RowValues>,
}

impl SweepRow {
    pub fn flag(&self) -> &'static str {
        if self.values.is_some() {
            ""
        } else {
            "zero_norm"
        }
    }
}

fn evaluate(
    a2: f64,
    theta: f64,
    chi: f64,
    statistics: Statistics,
    verify: bool,
) -> Result<SweepRow> {
    let p = DoubleWellParams::from_a2(a2, theta, chi, statistics)?;
    let mut row = SweepRow {
        a2,
        theta,
        chi,
        statistics,
        values: None,
    };
    if p.is_zero_norm() {
        return Ok(row);
    }
    let (lambda1, lambda2) = lambda_closed(&p)?;
    let omega = omega_closed(&p)?;
    let values = RowValues {
        e_lt: entropy_of(&[lambda1, lambda2]),
        e_sq: entropy_of(&omega) - LN_2,
        lambda1,
        omega1: omega[0],
        omega3: omega[2],
    };
    if verify {
        let g = generic_check(&p)?;
        let worst = [
            crate::entropy::Spectrum {
                eigenvalues: g.lt_spectrum,
            }
            .max_deviation(&[lambda1, lambda2]),
            crate::entropy::Spectrum {
                eigenvalues: g.sq_spectrum,
            }
            .max_deviation(&omega),
            (g.e_lt - values.e_lt).abs(),
            (g.e_sq - values.e_sq).abs(),
            g.rho_sq_deviation,
            g.representation_deviation,
        ]
        .into_iter()
        .fold(0.0, f64::max);
        if worst > CROSS_CHECK_TOL {
            return Err(Error::CrossCheck(format!(
                "a2={a2} theta={theta} chi={chi} {statistics}: deviation {worst:e}"
            )));
        }
    }
    row.values = Some(values);
    Ok(row)
}

/// One row per `(statistics, χ, θ, a²)` tuple, in that nesting order.
pub fn sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    if config.a2.is_empty()
        || config.theta.is_empty()
        || config.chi.is_empty()
        || config.statistics.is_empty()
    {
        return Err(Error::InvalidParameter(
            "sweep grids must be nonempty".into(),
        ));
    }
    let mut points = Vec::new();
    for &s in &config.statistics {
        for &chi in &config.chi {
            for &theta in &config.theta {
                for &a2 in &config.a2 {
                    points.push((a2, theta, chi, s));
                }
            }
        }
    }
    points
        .into_par_iter()
        .map(|(a2, theta, chi, s)| evaluate(a2, theta, chi, s, config.verify))
        .collect()
}

pub const CSV_HEADER: &str = "a2,theta,chi,eta,E_LT,E_SQ,lambda1,omega1,omega3,flag";

pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        let values = match row.values {
            Some(v) => [v.e_lt, v.e_sq, v.lambda1, v.omega1, v.omega3]
                .map(g12)
                .join(","),
            None => ",,,,".to_string(),
        };
        writeln!(
            out,
            "{},{},{},{},{},{}",
            g12(row.a2),
            g12(row.theta),
            g12(row.chi),
            row.statistics.eta(),
            values,
            row.flag()
        )?;
    }
    Ok(())
}
