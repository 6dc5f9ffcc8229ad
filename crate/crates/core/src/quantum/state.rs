use alloc::format;
use alloc::vec::Vec;

use nalgebra::DVector;
use num_complex::Complex64;

use super::evolution::hermitian_eigenvalues;
use super::{hermiticity_deviation, register_size_of, trace_product, CMatrix, MAX_SITES};
use crate::encoding::EncodedInput;
use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues down to this floor count as non-negative.
pub const PSD_FLOOR: f64 = -1e-10;

/// Hermitian, unit-trace, positive semidefinite operator on `m` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: usize,
    data: CMatrix,
}

impl DensityMatrix {
    /// Wraps a matrix after checking shape, Hermiticity and trace.
    /// Positivity is checked separately by [`DensityMatrix::check_psd`]
    /// because it needs a full eigendecomposition.
    pub fn from_matrix(data: CMatrix) -> Result<Self> {
        if data.nrows() != data.ncols() {
            return Err(Error::DimensionMismatch {
                expected: data.nrows(),
                found: data.ncols(),
            });
        }
        let m = register_size_of(data.nrows())
            .ok_or_else(|| Error::InvalidDensityMatrix(format!("dimension {} is not 2^m", data.nrows())))?;
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("density matrix"));
        }
        let dev = hermiticity_deviation(&data);
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr = data.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
        }
        Ok(Self { m, data })
    }

    pub(crate) fn from_parts_unchecked(m: usize, data: CMatrix) -> Self {
        Self { m, data }
    }

    /// `I / 2^m`.
    pub fn maximally_mixed(m: usize) -> Result<Self> {
        check_register(m)?;
        let d = 1usize << m;
        let v = Complex64::new(1.0 / d as f64, 0.0);
        Ok(Self {
            m,
            data: CMatrix::from_diagonal_element(d, d, v),
        })
    }

    pub fn register_size(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    /// `Tr[ρ²]`.
    pub fn purity(&self) -> f64 {
        trace_product(&self.data, &self.data).re
    }

    /// `Tr[ρ A]`.
    pub fn expectation_of(&self, a: &CMatrix) -> Result<Complex64> {
        if a.nrows() != self.dim() || a.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: a.nrows(),
            });
        }
        Ok(trace_product(&self.data, a))
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        hermiticity_deviation(&self.data)
    }

    pub fn is_diagonal(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| i == j || self.data[(i, j)] == Complex64::new(0.0, 0.0)))
    }

    pub fn eigenvalues(&self) -> DVector<f64> {
        hermitian_eigenvalues(&self.data)
    }

    /// Errors if any eigenvalue lies below [`PSD_FLOOR`].
    pub fn check_psd(&self) -> Result<()> {
        let min = self.eigenvalues().min();
        if min < PSD_FLOOR {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }
}

fn check_register(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::RegisterTooSmall { m, min: 1 });
    }
    if m > MAX_SITES {
        return Err(Error::RegisterTooLarge { m });
    }
    Ok(())
}

/// Maximum-entropy state with `Tr[ρ σ_z^(k)] = z_k`: the product
/// `⊗_k (I + z_k σ_z) / 2`, which is diagonal in the computational basis.
pub fn max_entropy_state(z: &[f64]) -> Result<DensityMatrix> {
    let m = z.len();
    check_register(m)?;
    for &zk in z {
        if !zk.is_finite() {
            return Err(Error::NonFinite("z"));
        }
        if zk.abs() > 1.0 {
            return Err(Error::OutOfRange { what: "z_k", value: zk });
        }
    }
    // Site k lives on bit m-k; bit value 0 is the σ_z = +1 eigenstate.
    let up: Vec<f64> = z.iter().map(|zk| 0.5 * (1.0 + zk)).collect();
    let down: Vec<f64> = z.iter().map(|zk| 0.5 * (1.0 - zk)).collect();
    let d = 1usize << m;
    let diag = DVector::from_fn(d, |x, _| {
        let mut p = 1.0;
        for k in 0..m {
            let bit = (x >> (m - 1 - k)) & 1;
            p *= if bit == 0 { up[k] } else { down[k] };
        }
        Complex64::new(p, 0.0)
    });
    Ok(DensityMatrix::from_parts_unchecked(m, CMatrix::from_diagonal(&diag)))
}

/// [`max_entropy_state`] of an encoded input.
pub fn init_state(z: &EncodedInput) -> Result<DensityMatrix> {
    max_entropy_state(&z.z)
}

/// `-Σ λ ln λ` over the spectrum, eigenvalues below zero clamped to zero.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let eig = if rho.is_diagonal() {
        DVector::from_iterator(rho.dim(), rho.data.diagonal().iter().map(|z| z.re))
    } else {
        rho.eigenvalues()
    };
    eig.iter()
        .map(|&l| l.max(0.0))
        .filter(|&l| l > 0.0)
        .map(|l| -l * libm::log(l))
        .sum()
}

/// Entropy in nats of a Bernoulli(p) variable.
pub fn binary_entropy(p: f64) -> f64 {
    let h = |q: f64| if q > 0.0 { -q * libm::log(q) } else { 0.0 };
    h(p) + h(1.0 - p)
}
