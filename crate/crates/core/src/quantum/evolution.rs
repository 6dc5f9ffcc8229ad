use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::hamiltonian::Hamiltonian;
use super::state::DensityMatrix;
use super::{hermiticity_deviation, hermitize, max_abs, CMatrix};
use crate::error::{Error, Result};

/// Evolution time `τ`, finite and non-negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub tau: f64,
}

impl EvolutionConfig {
    pub fn new(tau: f64) -> Result<Self> {
        if !tau.is_finite() {
            return Err(Error::NonFinite("tau"));
        }
        if tau < 0.0 {
            return Err(Error::OutOfRange {
                what: "tau",
                value: tau,
            });
        }
        Ok(Self { tau })
    }
}

fn is_real(a: &CMatrix) -> bool {
    a.iter().all(|z| z.im == 0.0)
}

/// Eigenvalues of a Hermitian matrix, ascending order not guaranteed.
pub(crate) fn hermitian_eigenvalues(a: &CMatrix) -> DVector<f64> {
    if is_real(a) {
        let re: DMatrix<f64> = a.map(|z| z.re);
        re.symmetric_eigenvalues()
    } else {
        a.clone().symmetric_eigenvalues()
    }
}

/// Eigendecomposition `H = V E V†` of a Hamiltonian.
///
/// Real symmetric Hamiltonians (every builder here produces one) are
/// decomposed in real arithmetic and keep a real `V`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    energies: DVector<f64>,
    vectors: CMatrix,
    real_vectors: Option<DMatrix<f64>>,
}

impl Spectrum {
    pub fn of(h: &Hamiltonian) -> Result<Self> {
        Self::of_matrix(h.matrix())
    }

    pub fn of_matrix(h: &CMatrix) -> Result<Self> {
        if h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("Hamiltonian"));
        }
        let dev = hermiticity_deviation(h);
        if dev > 1e-12 * max_abs(h).max(1.0) {
            return Err(Error::NotHermitian { deviation: dev });
        }
        if is_real(h) {
            let re: DMatrix<f64> = h.map(|z| z.re);
            let eig = SymmetricEigen::new(re);
            Ok(Self {
                energies: eig.eigenvalues,
                vectors: eig.eigenvectors.map(|v| Complex64::new(v, 0.0)),
                real_vectors: Some(eig.eigenvectors),
            })
        } else {
            let eig = SymmetricEigen::new(h.clone());
            Ok(Self {
                energies: eig.eigenvalues,
                vectors: eig.eigenvectors,
                real_vectors: None,
            })
        }
    }

    pub fn energies(&self) -> &DVector<f64> {
        &self.energies
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// Largest absolute eigenvalue, i.e. the operator norm.
    pub fn operator_norm(&self) -> f64 {
        self.energies.iter().fold(0.0, |m, e| m.max(e.abs()))
    }

    fn phases(&self, tau: f64) -> Vec<Complex64> {
        self.energies
            .iter()
            .map(|&e| {
                let (s, c) = libm::sincos(-e * tau);
                Complex64::new(c, s)
            })
            .collect()
    }

    /// `U(τ) = V exp(-iEτ) V†`.
    pub fn propagator(&self, tau: f64) -> CMatrix {
        let phases = self.phases(tau);
        let mut scaled = self.vectors.clone();
        for (mut col, ph) in scaled.column_iter_mut().zip(&phases) {
            col *= *ph;
        }
        scaled * self.vectors.adjoint()
    }

    /// Column `b` of `U(τ)`, i.e. `U(τ)|b⟩`.
    fn propagated_basis_state(&self, phases: &[Complex64], b: usize) -> DVector<Complex64> {
        let d = self.dim();
        match &self.real_vectors {
            Some(v) => {
                let mut re = DVector::<f64>::zeros(d);
                let mut im = DVector::<f64>::zeros(d);
                let coef_re = DVector::from_fn(d, |k, _| phases[k].re * v[(b, k)]);
                let coef_im = DVector::from_fn(d, |k, _| phases[k].im * v[(b, k)]);
                re.gemv(1.0, v, &coef_re, 0.0);
                im.gemv(1.0, v, &coef_im, 0.0);
                DVector::from_fn(d, |i, _| Complex64::new(re[i], im[i]))
            }
            None => {
                let coef = DVector::from_fn(d, |k, _| phases[k] * self.vectors[(b, k)].conj());
                &self.vectors * coef
            }
        }
    }

    /// `ρ(τ) = U(τ) ρ₀ U†(τ)`.
    ///
    /// Diagonal initial states with few populated levels (pure product
    /// states in particular) are propagated column by column.
    pub fn evolve(&self, rho0: &DensityMatrix, tau: f64) -> Result<DensityMatrix> {
        EvolutionConfig::new(tau)?;
        let d = self.dim();
        if rho0.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: rho0.dim(),
            });
        }
        let mut out = if rho0.is_diagonal() {
            let weights: Vec<(usize, f64)> = (0..d)
                .map(|b| (b, rho0.matrix()[(b, b)].re))
                .filter(|&(_, w)| w != 0.0)
                .collect();
            if weights.len() * 4 <= d {
                let phases = self.phases(tau);
                let mut acc = CMatrix::zeros(d, d);
                for (b, w) in weights {
                    let u = self.propagated_basis_state(&phases, b);
                    acc.gerc(Complex64::new(w, 0.0), &u, &u, Complex64::new(1.0, 0.0));
                }
                acc
            } else {
                self.conjugate(rho0, tau)
            }
        } else {
            self.conjugate(rho0, tau)
        };
        hermitize(&mut out);
        Ok(DensityMatrix::from_parts_unchecked(rho0.register_size(), out))
    }

    fn conjugate(&self, rho0: &DensityMatrix, tau: f64) -> CMatrix {
        let u = self.propagator(tau);
        &u * rho0.matrix() * u.adjoint()
    }
}

/// Evolves `rho0` under `h` for time `tau`.
pub fn evolve(rho0: &DensityMatrix, h: &Hamiltonian, tau: f64) -> Result<DensityMatrix> {
    if rho0.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: rho0.dim(),
        });
    }
    Spectrum::of(h)?.evolve(rho0, tau)
}
