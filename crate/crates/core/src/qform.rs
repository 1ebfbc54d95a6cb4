//! Nondegenerate quadratic forms and their Grothendieck–Witt presentations.
//!
//! Over a real-closed base a form is an orthogonal sum of copies of `<1>` and
//! `<-1>`, so it is stored as its signature pair. Forms of a declared model
//! are opaque tokens carrying only a dimension; everything else about them
//! comes from the model's tables.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fieldmodel::{ExtensionId, ExtensionLattice};

/// Signature pair `(p,m)`: `p` copies of `<1>` and `m` copies of `<-1>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    plus: u32,
    minus: u32,
}

impl Signature {
    pub fn new(plus: u32, minus: u32) -> Result<Self> {
        if plus + minus == 0 {
            return Err(Error::InvalidSignature("dimension must be at least 1".into()));
        }
        Ok(Signature { plus, minus })
    }

    pub fn plus(self) -> u32 {
        self.plus
    }

    pub fn minus(self) -> u32 {
        self.minus
    }

    pub fn dim(self) -> u32 {
        self.plus + self.minus
    }

    /// `-q` swaps the two counts.
    pub fn negate(self) -> Self {
        Signature { plus: self.minus, minus: self.plus }
    }

    /// `<1> ⊥ -q`.
    pub fn prime(self) -> Self {
        Signature { plus: self.minus + 1, minus: self.plus }
    }

    pub fn orthogonal_sum(self, other: Signature) -> Self {
        Signature { plus: self.plus + other.plus, minus: self.minus + other.minus }
    }

    /// `q ⊥ rℍ`.
    pub fn add_hyperbolic(self, r: u32) -> Self {
        Signature { plus: self.plus + r, minus: self.minus + r }
    }

    /// Representative with `p >= m`; `q` and `-q` share a projective quadric.
    pub fn quadric_normalized(self) -> Self {
        if self.plus >= self.minus {
            self
        } else {
            self.negate()
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.plus, self.minus)
    }
}

impl FromStr for Signature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner =
            t.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(|| Error::FormSyntax(s.to_string()))?;
        let (a, b) = inner.split_once(',').ok_or_else(|| Error::FormSyntax(s.to_string()))?;
        let plus = a.trim().parse::<u32>().map_err(|_| Error::FormSyntax(s.to_string()))?;
        let minus = b.trim().parse::<u32>().map_err(|_| Error::FormSyntax(s.to_string()))?;
        Signature::new(plus, minus)
    }
}

/// A form of a declared model. Identity is the id alone.
#[derive(Debug, Clone)]
pub struct DeclaredForm {
    id: String,
    dim: u32,
}

impl DeclaredForm {
    pub fn new(id: impl Into<String>, dim: u32) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSignature("declared forms need dimension >= 1".into()));
        }
        Ok(DeclaredForm { id: id.into(), dim })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }
}

impl PartialEq for DeclaredForm {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for DeclaredForm {}

impl Hash for DeclaredForm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.id.hash(state);
    }
}

impl PartialOrd for DeclaredForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DeclaredForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.id.cmp(&other.id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuadraticForm {
    Real(Signature),
    Declared(DeclaredForm),
}

impl QuadraticForm {
    pub fn real(plus: u32, minus: u32) -> Result<Self> {
        Signature::new(plus, minus).map(QuadraticForm::Real)
    }

    pub fn declared(id: impl Into<String>, dim: u32) -> Result<Self> {
        DeclaredForm::new(id, dim).map(QuadraticForm::Declared)
    }

    pub fn dim(&self) -> u32 {
        match self {
            QuadraticForm::Real(s) => s.dim(),
            QuadraticForm::Declared(d) => d.dim,
        }
    }

    pub fn signature(&self) -> Option<Signature> {
        match self {
            QuadraticForm::Real(s) => Some(*s),
            QuadraticForm::Declared(_) => None,
        }
    }

    pub fn declared_id(&self) -> Option<&str> {
        match self {
            QuadraticForm::Real(_) => None,
            QuadraticForm::Declared(d) => Some(&d.id),
        }
    }

    /// Token used for this form in documents and word keys.
    pub fn token(&self) -> String {
        self.to_string()
    }

    pub fn quadric(&self) -> ProjectiveQuadric {
        ProjectiveQuadric::new(self.clone())
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadraticForm::Real(s) => s.fmt(f),
            QuadraticForm::Declared(d) => f.write_str(&d.id),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FormRepr {
    Real(String),
    Declared { id: String, dim: u32 },
}

impl Serialize for QuadraticForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            QuadraticForm::Real(s) => FormRepr::Real(s.to_string()),
            QuadraticForm::Declared(d) => FormRepr::Declared { id: d.id.clone(), dim: d.dim },
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuadraticForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match FormRepr::deserialize(deserializer)? {
            FormRepr::Real(s) => s.parse().map(QuadraticForm::Real).map_err(D::Error::custom),
            FormRepr::Declared { id, dim } => QuadraticForm::declared(id, dim).map_err(D::Error::custom),
        }
    }
}

/// Source of declared-form facts (sums, primes) for operations that would
/// otherwise be total on real forms.
pub trait FormAlgebra {
    fn declared_prime(&self, id: &str) -> Option<QuadraticForm>;
    fn declared_sum(&self, a: &str, b: &str) -> Option<QuadraticForm>;
}

/// Algebra with no declared forms.
#[derive(Debug, Clone, Copy, Default)]
pub struct RealOnly;

impl FormAlgebra for RealOnly {
    fn declared_prime(&self, _id: &str) -> Option<QuadraticForm> {
        None
    }

    fn declared_sum(&self, _a: &str, _b: &str) -> Option<QuadraticForm> {
        None
    }
}

pub fn orthogonal_sum(a: &QuadraticForm, b: &QuadraticForm, algebra: &impl FormAlgebra) -> Result<QuadraticForm> {
    match (a, b) {
        (QuadraticForm::Real(x), QuadraticForm::Real(y)) => Ok(QuadraticForm::Real(x.orthogonal_sum(*y))),
        (QuadraticForm::Declared(x), QuadraticForm::Declared(y)) => algebra
            .declared_sum(&x.id, &y.id)
            .or_else(|| algebra.declared_sum(&y.id, &x.id))
            .ok_or_else(|| Error::MissingSum(x.id.clone(), y.id.clone())),
        _ => Err(Error::MixedKinds(a.to_string(), b.to_string())),
    }
}

/// `q' = <1> ⊥ -q`. Total on real forms; declared forms need a `prime_of` link.
pub fn prime(q: &QuadraticForm, algebra: &impl FormAlgebra) -> Result<QuadraticForm> {
    match q {
        QuadraticForm::Real(s) => Ok(QuadraticForm::Real(s.prime())),
        QuadraticForm::Declared(d) => algebra.declared_prime(&d.id).ok_or_else(|| Error::MissingPrime(d.id.clone())),
    }
}

fn check_fold(r: i64) -> Result<u32> {
    if (1..=30).contains(&r) {
        Ok(r as u32)
    } else {
        Err(Error::PfisterFold(r))
    }
}

/// The r-fold Pfister form `<<-1,...,-1>> = 2^r <1>` over the real base.
pub fn pfister_real(r: i64) -> Result<QuadraticForm> {
    let r = check_fold(r)?;
    QuadraticForm::real(1 << r, 0)
}

/// Pure part `q~` of `<<-1>>^r`, so that the Pfister form is `<1> ⊥ -q~`.
pub fn pfister_pure_part(r: i64) -> Result<QuadraticForm> {
    let r = check_fold(r)?;
    QuadraticForm::real(0, (1 << r) - 1)
}

/// Projective quadric `{q = 0}`; its dimension is `dim(q) - 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectiveQuadric {
    form: QuadraticForm,
}

impl ProjectiveQuadric {
    pub fn new(form: QuadraticForm) -> Self {
        ProjectiveQuadric { form }
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn dim(&self) -> i64 {
        self.form.dim() as i64 - 2
    }

    /// Quadrics of one-dimensional forms have no points over any field.
    pub fn is_empty(&self) -> bool {
        self.dim() < 0
    }

    /// Rank of the motive over the closure (number of Tate motives).
    pub fn motive_rank(&self) -> u32 {
        let n = self.form.dim();
        if n.is_multiple_of(2) {
            n
        } else {
            n - 1
        }
    }

    /// Key identifying the quadric up to the sign of its form.
    pub fn canonical(&self) -> ProjectiveQuadric {
        match &self.form {
            QuadraticForm::Real(s) => ProjectiveQuadric::new(QuadraticForm::Real(s.quadric_normalized())),
            QuadraticForm::Declared(_) => self.clone(),
        }
    }
}

impl fmt::Display for ProjectiveQuadric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q{}", self.form)
    }
}

/// `anisotropic ⊥ r·ℍ` with `anisotropic` free of hyperbolic planes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GWClass {
    pub anisotropic: Option<QuadraticForm>,
    pub hyperbolic_rank: i64,
}

impl fmt::Display for GWClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.anisotropic {
            Some(q) => write!(f, "{q} ⊥ {}ℍ", self.hyperbolic_rank),
            None => write!(f, "{}ℍ", self.hyperbolic_rank),
        }
    }
}

/// Witt decomposition of `q` over `extension`.
///
/// For declared forms the anisotropic part has no identity of its own in the
/// model; it is returned as a fresh declared token `an(<id>@<extension>)`.
pub fn gw_normalize(q: &QuadraticForm, model: &ExtensionLattice, extension: &ExtensionId) -> Result<GWClass> {
    let witt = model.witt_index(q, extension)?;
    let anisotropic = match q {
        QuadraticForm::Real(s) => {
            let level =
                model.level(extension)?.ok_or_else(|| Error::RealBackendRequired(format!("level of {extension}")))?;
            let w = crate::fieldmodel::reduced_excess(*s, level);
            match w.cmp(&0) {
                Ordering::Greater => Some(QuadraticForm::real(w as u32, 0)?),
                Ordering::Less => Some(QuadraticForm::real(0, (-w) as u32)?),
                Ordering::Equal => None,
            }
        }
        QuadraticForm::Declared(d) => {
            let dim = d.dim - 2 * witt;
            if dim == 0 {
                None
            } else {
                Some(QuadraticForm::declared(format!("an({}@{})", d.id, extension), dim)?)
            }
        }
    };
    Ok(GWClass { anisotropic, hyperbolic_rank: witt as i64 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(p: u32, m: u32) -> Signature {
        Signature::new(p, m).unwrap()
    }

    #[test]
    fn orthogonal_sum_adds_componentwise() {
        let a = QuadraticForm::real(1, 0).unwrap();
        let b = QuadraticForm::real(0, 1).unwrap();
        assert_eq!(orthogonal_sum(&a, &b, &RealOnly).unwrap(), QuadraticForm::real(1, 1).unwrap());
        let a = QuadraticForm::real(2, 1).unwrap();
        let b = QuadraticForm::real(1, 1).unwrap();
        assert_eq!(orthogonal_sum(&a, &b, &RealOnly).unwrap(), QuadraticForm::real(3, 2).unwrap());
    }

    #[test]
    fn declared_sum_requires_declaration() {
        let a = QuadraticForm::declared("q", 2).unwrap();
        let b = QuadraticForm::declared("r", 3).unwrap();
        assert!(matches!(orthogonal_sum(&a, &b, &RealOnly), Err(Error::MissingSum(..))));
        let real = QuadraticForm::real(1, 0).unwrap();
        assert!(matches!(orthogonal_sum(&a, &real, &RealOnly), Err(Error::MixedKinds(..))));
    }

    #[test]
    fn prime_examples() {
        assert_eq!(sig(0, 2).prime(), sig(3, 0));
        assert_eq!(sig(1, 1).prime(), sig(2, 1));
        // q'' = ℍ ⊥ q
        assert_eq!(sig(4, 3).prime().prime(), sig(4, 3).add_hyperbolic(1));
    }

    #[test]
    fn pfister_forms() {
        assert_eq!(pfister_real(1).unwrap(), QuadraticForm::real(2, 0).unwrap());
        assert_eq!(pfister_real(3).unwrap(), QuadraticForm::real(8, 0).unwrap());
        assert!(pfister_real(0).is_err());
        assert!(pfister_real(-2).is_err());
        for r in 1..6 {
            let pure = pfister_pure_part(r).unwrap();
            assert_eq!(prime(&pure, &RealOnly).unwrap(), pfister_real(r).unwrap());
            assert_eq!(pure.signature().unwrap(), sig(0, (1 << r) - 1));
        }
    }

    #[test]
    fn signature_parsing() {
        assert_eq!("(3, 2)".parse::<Signature>().unwrap(), sig(3, 2));
        assert!("(0,0)".parse::<Signature>().is_err());
        assert!("3,2".parse::<Signature>().is_err());
        assert!("(a,2)".parse::<Signature>().is_err());
    }

    #[test]
    fn declared_identity_is_by_id() {
        let a = QuadraticForm::declared("q", 2).unwrap();
        let b = QuadraticForm::declared("q", 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn form_serde_shapes() {
        let r = QuadraticForm::real(3, 1).unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), "\"(3,1)\"");
        let d = QuadraticForm::declared("q1", 4).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"id":"q1","dim":4}"#);
        let back: QuadraticForm = serde_json::from_str(&s).unwrap();
        assert_eq!(back.dim(), 4);
    }

    #[test]
    fn empty_quadric_of_line() {
        let q = QuadraticForm::real(1, 0).unwrap().quadric();
        assert_eq!(q.dim(), -1);
        assert!(q.is_empty());
        assert_eq!(q.motive_rank(), 0);
        assert_eq!(QuadraticForm::real(3, 0).unwrap().quadric().motive_rank(), 2);
        assert_eq!(QuadraticForm::real(2, 2).unwrap().quadric().motive_rank(), 4);
    }
}
