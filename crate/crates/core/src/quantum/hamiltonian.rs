use alloc::vec::Vec;
use core::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::pauli::site_bit;
use super::{hermiticity_deviation, max_abs, CMatrix, MAX_SITES};
use crate::encoding::EncodedInput;
use crate::error::{Error, Result};

/// Variance convention for the diagonal of a GOE draw.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GoeDiagonal {
    /// Every independent entry, diagonal included, has variance `σ`.
    #[default]
    Literal,
    /// Diagonal entries have variance `2σ`.
    Textbook,
}

/// Pair set of the attention term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    /// All pairs `i > j`.
    AllPairs,
    /// Nearest neighbours `(i, i+1)` on an open chain.
    Chain,
}

impl Topology {
    pub fn pairs(self, m: usize) -> Vec<(usize, usize)> {
        match self {
            Topology::AllPairs => (0..m).flat_map(|j| ((j + 1)..m).map(move |i| (i, j))).collect(),
            Topology::Chain => (0..m.saturating_sub(1)).map(|i| (i + 1, i)).collect(),
        }
    }
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all_pairs" | "all-pairs" => Ok(Topology::AllPairs),
            "chain" => Ok(Topology::Chain),
            _ => Err(Error::UnknownLabel(s.into())),
        }
    }
}

/// How a Hamiltonian was generated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HamiltonianKind {
    Goe {
        sigma: f64,
        seed: u64,
        diagonal: GoeDiagonal,
    },
    Ising {
        j: f64,
        b_z: f64,
        b_x: f64,
    },
    Attention {
        z: Vec<f64>,
        g1: f64,
        g2: f64,
        topology: Topology,
    },
    Sum {
        parts: Vec<HamiltonianKind>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    m: usize,
    data: CMatrix,
    kind: HamiltonianKind,
}

impl Hamiltonian {
    /// Wraps an arbitrary Hermitian matrix.
    pub fn from_matrix(data: CMatrix, kind: HamiltonianKind) -> Result<Self> {
        let m = super::register_size_of(data.nrows()).ok_or(Error::DimensionMismatch {
            expected: data.nrows().next_power_of_two(),
            found: data.nrows(),
        })?;
        if data.ncols() != data.nrows() {
            return Err(Error::DimensionMismatch {
                expected: data.nrows(),
                found: data.ncols(),
            });
        }
        let dev = hermiticity_deviation(&data);
        if dev > 1e-12 * max_abs(&data).max(1.0) {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(Self { m, data, kind })
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

    pub fn kind(&self) -> &HamiltonianKind {
        &self.kind
    }

    pub fn is_diagonal(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| i == j || self.data[(i, j)] == Complex64::new(0.0, 0.0)))
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| *z == Complex64::new(0.0, 0.0))
    }

    /// `self + other`, with the provenance recorded as a flattened sum.
    pub fn add(&self, other: &Hamiltonian) -> Result<Hamiltonian> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let mut parts = Vec::new();
        for k in [&self.kind, &other.kind] {
            match k {
                HamiltonianKind::Sum { parts: p } => parts.extend(p.iter().cloned()),
                other => parts.push(other.clone()),
            }
        }
        Ok(Hamiltonian {
            m: self.m,
            data: &self.data + &other.data,
            kind: HamiltonianKind::Sum { parts },
        })
    }
}

fn check_sites(m: usize, min: usize) -> Result<()> {
    if m < min {
        return Err(Error::RegisterTooSmall { m, min });
    }
    if m > MAX_SITES {
        return Err(Error::RegisterTooLarge { m });
    }
    Ok(())
}

fn check_finite(v: f64, what: &'static str) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Real symmetric GOE draw with variance `sigma` per independent entry.
pub fn build_goe(m: usize, sigma: f64, seed: u64) -> Result<Hamiltonian> {
    build_goe_with(m, sigma, seed, GoeDiagonal::Literal)
}

/// GOE draw with an explicit diagonal-variance convention.
///
/// Entries are drawn from ChaCha20 seeded with `seed`, row by row over the
/// upper triangle (`i ≤ j`), and mirrored.
pub fn build_goe_with(m: usize, sigma: f64, seed: u64, diagonal: GoeDiagonal) -> Result<Hamiltonian> {
    check_sites(m, 1)?;
    check_finite(sigma, "sigma")?;
    if sigma < 0.0 {
        return Err(Error::OutOfRange {
            what: "sigma",
            value: sigma,
        });
    }
    let d = 1usize << m;
    let off_sd = libm::sqrt(sigma);
    let diag_sd = match diagonal {
        GoeDiagonal::Literal => off_sd,
        GoeDiagonal::Textbook => libm::sqrt(2.0 * sigma),
    };
    let std_normal = Normal::new(0.0, 1.0).expect("unit normal");
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut data = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let g: f64 = std_normal.sample(&mut rng);
            let v = g * if i == j { diag_sd } else { off_sd };
            data[(i, j)] = Complex64::new(v, 0.0);
            data[(j, i)] = Complex64::new(v, 0.0);
        }
    }
    Ok(Hamiltonian {
        m,
        data,
        kind: HamiltonianKind::Goe { sigma, seed, diagonal },
    })
}

/// `σ_z` eigenvalue (±1) of site `k` (0-based) in basis state `x`.
#[inline]
fn spin(x: usize, k: usize, m: usize) -> f64 {
    if x & site_bit(k + 1, m) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Open transverse- and longitudinal-field Ising chain
/// `J Σ σ_z σ_z + B_z Σ σ_z + B_x Σ σ_x`.
pub fn build_ising(m: usize, j: f64, b_z: f64, b_x: f64) -> Result<Hamiltonian> {
    check_sites(m, 2)?;
    check_finite(j, "J")?;
    check_finite(b_z, "B_z")?;
    check_finite(b_x, "B_x")?;
    let d = 1usize << m;
    let mut data = CMatrix::zeros(d, d);
    for x in 0..d {
        let mut e = 0.0;
        for k in 0..m {
            e += b_z * spin(x, k, m);
            if k + 1 < m {
                e += j * spin(x, k, m) * spin(x, k + 1, m);
            }
        }
        data[(x, x)] = Complex64::new(e, 0.0);
        if b_x != 0.0 {
            for k in 1..=m {
                data[(x ^ site_bit(k, m), x)] += Complex64::new(b_x, 0.0);
            }
        }
    }
    Ok(Hamiltonian {
        m,
        data,
        kind: HamiltonianKind::Ising { j, b_z, b_x },
    })
}

/// Input-dependent attention term
/// `-g₁ Σ_k z_k σ_z^(k) - g₂ Σ_(i,j) z_i z_j σ_z^(i) σ_z^(j)`,
/// diagonal in the computational basis.
pub fn build_attention(z: &EncodedInput, g1: f64, g2: f64, topology: Topology) -> Result<Hamiltonian> {
    let zs = &z.z;
    let m = zs.len();
    check_sites(m, 1)?;
    for (v, what) in [(g1, "g1"), (g2, "g2")] {
        check_finite(v, what)?;
        if v < 0.0 {
            return Err(Error::OutOfRange { what, value: v });
        }
    }
    if zs.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("z"));
    }
    let pairs = topology.pairs(m);
    let d = 1usize << m;
    let diag = DVector::from_fn(d, |x, _| {
        let mut e = 0.0;
        for (k, zk) in zs.iter().enumerate() {
            e -= g1 * zk * spin(x, k, m);
        }
        for &(i, j) in &pairs {
            e -= g2 * zs[i] * zs[j] * spin(x, i, m) * spin(x, j, m);
        }
        Complex64::new(e, 0.0)
    });
    Ok(Hamiltonian {
        m,
        data: CMatrix::from_diagonal(&diag),
        kind: HamiltonianKind::Attention {
            z: zs.clone(),
            g1,
            g2,
            topology,
        },
    })
}

/// `[A, B] = AB - BA`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}
