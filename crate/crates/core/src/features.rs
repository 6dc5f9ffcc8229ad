//! Observable families and expectation-value feature vectors.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::quantum::{Axis, DensityMatrix, PauliString};

/// Largest tolerated imaginary part of `Tr[ρ Q]`.
pub const IMAGINARY_TOL: f64 = 1e-10;

/// Stable 64-bit hash of an ordered list of observable labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Fingerprint([u8; 8]);

impl Fingerprint {
    /// First 8 bytes of SHA-256 over the labels joined by `\n`.
    pub fn of_labels<S: AsRef<str>>(labels: &[S]) -> Self {
        let mut h = Sha256::new();
        for (i, l) in labels.iter().enumerate() {
            if i > 0 {
                h.update(b"\n");
            }
            h.update(l.as_ref().as_bytes());
        }
        let digest = h.finalize();
        let mut out = [0u8; 8];
        out.copy_from_slice(&digest[..8]);
        Fingerprint(out)
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

impl From<Fingerprint> for String {
    fn from(fp: Fingerprint) -> Self {
        alloc::format!("{fp}")
    }
}

impl TryFrom<String> for Fingerprint {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        let bad = || Error::UnknownLabel(s.clone());
        if s.len() != 16 {
            return Err(bad());
        }
        let mut out = [0u8; 8];
        for (i, byte) in out.iter_mut().enumerate() {
            *byte = u8::from_str_radix(s.get(2 * i..2 * i + 2).ok_or_else(bad)?, 16).map_err(|_| bad())?;
        }
        Ok(Fingerprint(out))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// Single-site, nearest-neighbour and longitudinal z-string correlators.
    Full,
    /// Single-site and nearest-neighbour correlators only.
    Local,
}

/// One observable `Q_k`: a Pauli string, or the identity when `terms` is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservableSpec {
    pauli: PauliString,
    label: String,
}

impl ObservableSpec {
    pub fn new(terms: &[(Axis, usize)], m: usize) -> Result<Self> {
        let pauli = PauliString::new(terms, m)?;
        let label = pauli.label();
        Ok(Self { pauli, label })
    }

    pub fn identity(m: usize) -> Result<Self> {
        Self::new(&[], m)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn terms(&self) -> &[(Axis, usize)] {
        self.pauli.terms()
    }

    pub fn is_identity(&self) -> bool {
        self.pauli.is_identity()
    }

    pub fn pauli(&self) -> &PauliString {
        &self.pauli
    }
}

/// Fixed ordered list of observables; the identity is always last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservableFamily {
    kind: FamilyKind,
    m: usize,
    specs: Vec<ObservableSpec>,
    fingerprint: Fingerprint,
}

impl ObservableFamily {
    /// Builds the family in its canonical order:
    /// single-site `X1 Y1 Z1 X2 …`, then nearest-neighbour `X1X2 Y1Y2 Z1Z2 X2X3 …`,
    /// then (full family only) z-strings of length 3..=m by length and
    /// leftmost site, then the identity.
    pub fn new(kind: FamilyKind, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::RegisterTooSmall { m, min: 2 });
        }
        let mut specs = Vec::new();
        for site in 1..=m {
            for axis in Axis::ALL {
                specs.push(ObservableSpec::new(&[(axis, site)], m)?);
            }
        }
        for site in 1..m {
            for axis in Axis::ALL {
                specs.push(ObservableSpec::new(&[(axis, site), (axis, site + 1)], m)?);
            }
        }
        if kind == FamilyKind::Full {
            for len in 3..=m {
                for start in 1..=(m - len + 1) {
                    let terms: Vec<(Axis, usize)> = (start..start + len).map(|s| (Axis::Z, s)).collect();
                    specs.push(ObservableSpec::new(&terms, m)?);
                }
            }
        }
        specs.push(ObservableSpec::identity(m)?);
        let labels: Vec<&str> = specs.iter().map(|s| s.label()).collect();
        let fingerprint = Fingerprint::of_labels(&labels);
        Ok(Self {
            kind,
            m,
            specs,
            fingerprint,
        })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn register_size(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    pub fn specs(&self) -> &[ObservableSpec] {
        &self.specs
    }

    pub fn labels(&self) -> Vec<String> {
        self.specs.iter().map(|s| s.label.clone()).collect()
    }

    pub fn fingerprint(&self) -> Fingerprint {
        self.fingerprint
    }
}

/// Shorthand for [`ObservableFamily::new`].
pub fn observable_family(kind: FamilyKind, m: usize) -> Result<ObservableFamily> {
    ObservableFamily::new(kind, m)
}

/// Expectation values `x_k = Tr[ρ Q_k]` tagged with the family they belong to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub family_fingerprint: Fingerprint,
}

impl FeatureVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `Tr[ρ Q]`, after checking that its imaginary part is negligible.
pub fn expectation(rho: &DensityMatrix, obs: &ObservableSpec) -> Result<f64> {
    if obs.pauli.register_size() != rho.register_size() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: obs.pauli.dim(),
        });
    }
    // Bias term: exactly 1, not the rounded trace of ρ.
    if obs.is_identity() {
        return Ok(1.0);
    }
    let v = obs.pauli.trace_with(rho.matrix());
    if v.im.abs() >= IMAGINARY_TOL {
        return Err(Error::ImaginaryExpectation(v.im));
    }
    Ok(v.re)
}

pub fn extract_features(rho: &DensityMatrix, family: &ObservableFamily) -> Result<FeatureVector> {
    if family.m != rho.register_size() {
        return Err(Error::DimensionMismatch {
            expected: 1 << family.m,
            found: rho.dim(),
        });
    }
    let values = family
        .specs
        .iter()
        .map(|s| expectation(rho, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(FeatureVector {
        values,
        family_fingerprint: family.fingerprint,
    })
}
