//! Bigraded Tate twists and closed-form values of the functors `Φ^E`.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fieldmodel::{ExtensionId, ExtensionLattice};
use crate::qform::{prime, ProjectiveQuadric, QuadraticForm};

/// The twist `(x)[y]`, an element of `Z^2`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TateTwist {
    pub x: i64,
    pub y: i64,
}

impl TateTwist {
    pub const ZERO: TateTwist = TateTwist { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        TateTwist { x, y }
    }

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }
}

impl Add for TateTwist {
    type Output = TateTwist;
    fn add(self, o: TateTwist) -> TateTwist {
        TateTwist::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for TateTwist {
    fn add_assign(&mut self, o: TateTwist) {
        *self = *self + o;
    }
}

impl Sub for TateTwist {
    type Output = TateTwist;
    fn sub(self, o: TateTwist) -> TateTwist {
        TateTwist::new(self.x - o.x, self.y - o.y)
    }
}

impl SubAssign for TateTwist {
    fn sub_assign(&mut self, o: TateTwist) {
        *self = *self - o;
    }
}

impl Neg for TateTwist {
    type Output = TateTwist;
    fn neg(self) -> TateTwist {
        TateTwist::new(-self.x, -self.y)
    }
}

impl Mul<i64> for TateTwist {
    type Output = TateTwist;
    fn mul(self, k: i64) -> TateTwist {
        TateTwist::new(self.x * k, self.y * k)
    }
}

impl Sum for TateTwist {
    fn sum<I: Iterator<Item = TateTwist>>(iter: I) -> TateTwist {
        iter.fold(TateTwist::ZERO, Add::add)
    }
}

impl fmt::Display for TateTwist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})[{}]", self.x, self.y)
    }
}

impl FromStr for TateTwist {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::FormSyntax(s.to_string());
        let t = s.trim().strip_prefix('(').ok_or_else(bad)?;
        let (x, rest) = t.split_once(')').ok_or_else(bad)?;
        let y = rest.trim().strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
        Ok(TateTwist::new(x.trim().parse().map_err(|_| bad())?, y.trim().parse().map_err(|_| bad())?))
    }
}

/// `Σ_{i<j} (m-2i)[2m-4i+1]`, the contribution of `j` split hyperbolic
/// planes to a quadric of dimension `m`.
pub fn step_sum(m: i64, j: u32) -> TateTwist {
    (0..j as i64).map(|i| TateTwist::new(m - 2 * i, 2 * m - 4 * i + 1)).sum()
}

/// `Φ^E(e^q)` from the Witt indices of `q` and `q'` over `E`.
pub fn phi_affine(q: &QuadraticForm, e: &ExtensionId, model: &ExtensionLattice) -> Result<TateTwist> {
    let qp = prime(q, model)?;
    let n = q.dim() as i64;
    let j = model.witt_index(q, e)?;
    let jp = model.witt_index(&qp, e)?;
    Ok(step_sum(n - 1, jp) - step_sum(n - 2, j))
}

/// `Φ^E(det Q)`.
pub fn phi_det(q: &ProjectiveQuadric, e: &ExtensionId, model: &ExtensionLattice) -> Result<TateTwist> {
    if q.is_empty() {
        return Ok(TateTwist::ZERO);
    }
    Ok(step_sum(q.dim(), model.witt_index(q.form(), e)?))
}

/// Ratio of a summand from its split upper and lower Tate constituents:
/// `Σ_up (l)[2l] - Σ_low (l)[2l-1]`.
pub fn phi_ratio(upper: &[i64], lower: &[i64]) -> TateTwist {
    let up: TateTwist = upper.iter().map(|&l| TateTwist::new(l, 2 * l)).sum();
    let low: TateTwist = lower.iter().map(|&l| TateTwist::new(l, 2 * l - 1)).sum();
    up - low
}

/// Values of one element at every extension of a lattice, base first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PhiFingerprint {
    entries: Vec<FingerprintEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FingerprintEntry {
    pub extension: ExtensionId,
    pub twist: TateTwist,
}

impl PhiFingerprint {
    pub fn constant(model: &ExtensionLattice, t: TateTwist) -> Self {
        PhiFingerprint {
            entries: model.extensions().map(|e| FingerprintEntry { extension: e.clone(), twist: t }).collect(),
        }
    }

    pub fn from_fn(model: &ExtensionLattice, mut f: impl FnMut(&ExtensionId) -> Result<TateTwist>) -> Result<Self> {
        let mut entries = Vec::with_capacity(model.len());
        for e in model.extensions() {
            entries.push(FingerprintEntry { extension: e.clone(), twist: f(e)? });
        }
        Ok(PhiFingerprint { entries })
    }

    pub fn entries(&self) -> &[FingerprintEntry] {
        &self.entries
    }

    pub fn get(&self, e: &ExtensionId) -> Option<TateTwist> {
        self.entries.iter().find(|x| &x.extension == e).map(|x| x.twist)
    }

    pub fn base(&self) -> TateTwist {
        self.entries[0].twist
    }

    fn zip(&self, other: &Self, f: impl Fn(TateTwist, TateTwist) -> TateTwist) -> Self {
        assert_eq!(self.entries.len(), other.entries.len(), "fingerprints over different lattices");
        PhiFingerprint {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| {
                    debug_assert_eq!(a.extension, b.extension);
                    FingerprintEntry { extension: a.extension.clone(), twist: f(a.twist, b.twist) }
                })
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn scale(&self, k: i64) -> Self {
        PhiFingerprint {
            entries: self
                .entries
                .iter()
                .map(|x| FingerprintEntry { extension: x.extension.clone(), twist: x.twist * k })
                .collect(),
        }
    }

    pub fn shift(&self, t: TateTwist) -> Self {
        PhiFingerprint {
            entries: self
                .entries
                .iter()
                .map(|x| FingerprintEntry { extension: x.extension.clone(), twist: x.twist + t })
                .collect(),
        }
    }

    /// The common value if the fingerprint is constant.
    pub fn constant_value(&self) -> Option<TateTwist> {
        let first = self.entries.first()?.twist;
        self.entries.iter().all(|x| x.twist == first).then_some(first)
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }
}
