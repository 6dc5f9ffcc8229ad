//! Dense density-matrix simulation: state preparation, Hamiltonians and exact
//! unitary evolution through Hermitian eigendecomposition.

use nalgebra::DMatrix;
use num_complex::Complex64;

mod evolution;
mod hamiltonian;
pub mod pauli;
mod state;

pub use evolution::{evolve, EvolutionConfig, Spectrum};
pub use hamiltonian::{
    build_attention, build_goe, build_goe_with, build_ising, commutator, GoeDiagonal, Hamiltonian, HamiltonianKind,
    Topology,
};
pub use pauli::{pauli_string, Axis, PauliString};
pub use state::{binary_entropy, init_state, max_entropy_state, von_neumann_entropy, DensityMatrix};

/// Dense complex matrix.
pub type CMatrix = DMatrix<Complex64>;

/// Largest register simulated densely (4096 × 4096).
pub const MAX_SITES: usize = 12;

/// Largest absolute entry of `A - A†`.
pub fn hermiticity_deviation(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Largest absolute entry.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// `(A + A†) / 2`.
pub(crate) fn hermitize(a: &mut CMatrix) {
    let n = a.nrows();
    for i in 0..n {
        a[(i, i)].im = 0.0;
        for j in (i + 1)..n {
            let v = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = v;
            a[(j, i)] = v.conj();
        }
    }
}

/// `Tr[A B]` in `O(n²)`.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub(crate) fn register_size_of(dim: usize) -> Option<usize> {
    if dim.is_power_of_two() && dim >= 2 {
        Some(dim.trailing_zeros() as usize)
    } else {
        None
    }
}
