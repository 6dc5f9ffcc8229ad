//! Pauli strings on a register of `m` qubits.
//!
//! Sites are numbered from 1 to `m`. Site 1 is the leftmost Kronecker factor,
//! i.e. the most significant bit of a computational-basis index, and
//! `σ_z|0⟩ = +|0⟩`.
//!
//! A Pauli string is stored as a bit-flip mask plus a phase rule, so
//! `P|x⟩ = phase(x) |x ⊕ flip⟩`. Expectation values then cost `O(2^m)`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// 2×2 matrix of the single-qubit Pauli operator.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let r = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Axis::X => [[o, r], [r, o]],
            Axis::Y => [[o, -i], [i, o]],
            Axis::Z => [[r, o], [o, -r]],
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "X",
            Axis::Y => "Y",
            Axis::Z => "Z",
        })
    }
}

/// Tensor product of single-site Pauli operators, identity elsewhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliString {
    m: usize,
    terms: Vec<(Axis, usize)>,
    flip: usize,
    sign_mask: usize,
    n_y: u32,
}

/// Bit of the basis index that holds `site` (1-based) on an `m`-site register.
#[inline]
pub(crate) fn site_bit(site: usize, m: usize) -> usize {
    1usize << (m - site)
}

impl PauliString {
    pub fn new(terms: &[(Axis, usize)], m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::RegisterTooSmall { m, min: 1 });
        }
        if m > super::MAX_SITES {
            return Err(Error::RegisterTooLarge { m });
        }
        let mut sorted: Vec<(Axis, usize)> = terms.to_vec();
        sorted.sort_by_key(|&(_, s)| s);
        for w in sorted.windows(2) {
            if w[0].1 == w[1].1 {
                return Err(Error::DuplicateSite(w[0].1));
            }
        }
        let (mut flip, mut sign_mask, mut n_y) = (0usize, 0usize, 0u32);
        for &(axis, site) in &sorted {
            if site == 0 || site > m {
                return Err(Error::SiteOutOfRange { site, m });
            }
            let bit = site_bit(site, m);
            match axis {
                Axis::X => flip |= bit,
                Axis::Y => {
                    flip |= bit;
                    sign_mask |= bit;
                    n_y += 1;
                }
                Axis::Z => sign_mask |= bit,
            }
        }
        Ok(Self {
            m,
            terms: sorted,
            flip,
            sign_mask,
            n_y,
        })
    }

    pub fn identity(m: usize) -> Result<Self> {
        Self::new(&[], m)
    }

    pub fn register_size(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        1 << self.m
    }

    pub fn terms(&self) -> &[(Axis, usize)] {
        &self.terms
    }

    pub fn is_identity(&self) -> bool {
        self.terms.is_empty()
    }

    /// Label such as `Z3Z4Z5`, or `I` for the identity.
    pub fn label(&self) -> String {
        if self.terms.is_empty() {
            return "I".into();
        }
        let mut s = String::new();
        for (axis, site) in &self.terms {
            s.push_str(&alloc::format!("{axis}{site}"));
        }
        s
    }

    /// Coefficient `c` in `P|x⟩ = c |x ⊕ flip⟩`.
    #[inline]
    pub fn phase(&self, x: usize) -> Complex64 {
        let negative = (x & self.sign_mask).count_ones() % 2 == 1;
        let base = match self.n_y % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        if negative {
            -base
        } else {
            base
        }
    }

    #[inline]
    pub fn flip_mask(&self) -> usize {
        self.flip
    }

    /// `Tr[ρ P]` for a dense operator `ρ` of matching dimension.
    pub fn trace_with(&self, rho: &CMatrix) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for x in 0..self.dim() {
            acc += rho[(x, x ^ self.flip)] * self.phase(x);
        }
        acc
    }

    /// Dense `2^m × 2^m` matrix.
    pub fn to_dense(&self) -> CMatrix {
        let d = self.dim();
        let mut out = CMatrix::zeros(d, d);
        for x in 0..d {
            out[(x ^ self.flip, x)] = self.phase(x);
        }
        out
    }

    /// True when the operator is diagonal in the computational basis.
    pub fn is_diagonal(&self) -> bool {
        self.flip == 0
    }
}

/// Dense Pauli string built from a list of `(axis, site)` pairs.
pub fn pauli_string(axes_and_sites: &[(Axis, usize)], m: usize) -> Result<CMatrix> {
    Ok(PauliString::new(axes_and_sites, m)?.to_dense())
}
