//! Motivic decompositions of quadrics into Tate motives and shifted
//! indecomposable summands, with summand classes keyed by the stable
//! birational type of a quadratic Grassmannian.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fieldmodel::{ExtensionId, ExtensionLattice, Grassmannian};
use crate::phi::TateTwist;
use crate::qform::{pfister_real, ProjectiveQuadric, QuadraticForm, Signature};

/// Rank-2 indecomposable summand types.
///
/// `Rost(r)` is the Rost motive of the real `r`-fold symbol, with Tate
/// constituents `T` and `T(2^(r-1)-1)[2^r-2]` once split. `Binary(d)` is a
/// declared summand whose constituents sit `d` apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SummandKind {
    Rost(u32),
    Binary(u32),
}

impl SummandKind {
    /// Offset between lower and upper Tate constituent.
    pub fn span(self) -> i64 {
        match self {
            SummandKind::Rost(r) => (1i64 << (r - 1)) - 1,
            SummandKind::Binary(d) => d as i64,
        }
    }
}

impl fmt::Display for SummandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SummandKind::Rost(r) => write!(f, "rost({r})"),
            SummandKind::Binary(d) => write!(f, "binary({d})"),
        }
    }
}

impl FromStr for SummandKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Model(format!("unknown summand kind `{s}`"));
        let (name, rest) = s.trim().split_once('(').ok_or_else(bad)?;
        let arg: u32 = rest.strip_suffix(')').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        match name {
            "rost" if (1..=30).contains(&arg) => Ok(SummandKind::Rost(arg)),
            "binary" => Ok(SummandKind::Binary(arg)),
            _ => Err(bad()),
        }
    }
}

/// Key `G(form,n)` naming a Grassmannian by form token.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GrassmannianKey {
    pub form: String,
    pub plane_dim: u32,
}

impl GrassmannianKey {
    pub fn new(form: impl Into<String>, plane_dim: u32) -> Self {
        GrassmannianKey { form: form.into(), plane_dim }
    }

    /// Fixed key of the real Rost class `rost(r)`: `G((2^r,0),0)`.
    pub fn rost(r: u32) -> Self {
        GrassmannianKey::new(format!("({},0)", 1u64 << r), 0)
    }

    pub fn resolve(&self, model: &ExtensionLattice) -> Result<Grassmannian> {
        let form = if let Ok(s) = self.form.parse::<Signature>() {
            if !model.is_real() {
                return Err(Error::UnknownKey(self.to_string()));
            }
            QuadraticForm::Real(s)
        } else {
            model.declared_form(&self.form).cloned().ok_or_else(|| Error::UnknownKey(self.to_string()))?
        };
        Grassmannian::new(ProjectiveQuadric::new(form), self.plane_dim).map_err(|_| Error::UnknownKey(self.to_string()))
    }
}

impl fmt::Display for GrassmannianKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({},{})", self.form, self.plane_dim)
    }
}

impl FromStr for GrassmannianKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownKey(s.to_string());
        let inner = s.trim().strip_prefix("G(").and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let (form, n) = inner.rsplit_once(',').ok_or_else(bad)?;
        let form = form.trim();
        if form.is_empty() {
            return Err(bad());
        }
        Ok(GrassmannianKey::new(form, n.trim().parse().map_err(|_| bad())?))
    }
}

macro_rules! string_serde {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

/// Summand class up to Tate shift. Serialized as `kind:key`, e.g.
/// `rost(3):G((8,0),0)`, so it can key JSON maps.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndecomposableClass {
    pub key: GrassmannianKey,
    pub kind: SummandKind,
}

impl fmt::Display for IndecomposableClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind, self.key)
    }
}

impl FromStr for IndecomposableClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, key) = s.split_once(':').ok_or_else(|| Error::UnknownKey(s.to_string()))?;
        Ok(IndecomposableClass { key: key.parse()?, kind: kind.parse()? })
    }
}

string_serde!(SummandKind);
string_serde!(GrassmannianKey);
string_serde!(IndecomposableClass);

/// One summand `N(a)[2a]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Summand {
    pub class: GrassmannianKey,
    pub shift: i64,
    pub kind: SummandKind,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub tates: Vec<TateTwist>,
    pub summands: Vec<Summand>,
}

impl Decomposition {
    pub fn rank(&self) -> u32 {
        (self.tates.len() + 2 * self.summands.len()) as u32
    }
}

/// Rank of the motive of the quadric over the algebraic closure.
pub fn motive_rank(q: &QuadraticForm) -> u32 {
    q.quadric().motive_rank()
}

/// Decomposition of a real quadric: hyperbolic Tate pairs, then Rost
/// motives from the excellent recursion on the anisotropic part.
pub fn decompose_real(q: &QuadraticForm) -> Result<Decomposition> {
    let s = q.signature().ok_or_else(|| {
        Error::RealBackendRequired(format!("{q} has no canonical decomposition; declare one instead"))
    })?;
    if s.dim() < 2 {
        return Err(Error::EmptyQuadric(q.to_string()));
    }
    let m = s.dim() as i64 - 2;
    let iw = s.plus().min(s.minus()) as i64;
    let mut tates = Vec::with_capacity(2 * iw as usize);
    for i in 0..iw {
        tates.push(TateTwist::new(i, 2 * i));
        tates.push(TateTwist::new(m - i, 2 * m - 2 * i));
    }
    let mut summands = Vec::new();
    let mut n = s.plus().abs_diff(s.minus()) as u64;
    let mut base = iw;
    while n >= 2 {
        let top = n.next_power_of_two();
        let r = top.trailing_zeros();
        let i1 = n - top / 2;
        for k in 0..i1 as i64 {
            summands.push(Summand { class: GrassmannianKey::rost(r), shift: base + k, kind: SummandKind::Rost(r) });
        }
        base += i1 as i64;
        n = top - n;
    }
    Ok(Decomposition { tates, summands })
}

/// Split constituents `(upper, lower)` of a summand over `E`, as `l`-values.
pub fn tate_counts(n: &Summand, e: &ExtensionId, model: &ExtensionLattice) -> Result<(Vec<i64>, Vec<i64>)> {
    let split = match n.kind {
        SummandKind::Rost(r) => {
            let pf = pfister_real(r as i64)?;
            model.witt_index(&pf, e)? == 1 << (r - 1)
        }
        SummandKind::Binary(_) => model.has_rational_point(&n.class.resolve(model)?, e)?,
    };
    Ok(if split { (vec![n.shift + n.kind.span()], vec![n.shift]) } else { (Vec::new(), Vec::new()) })
}

/// Registry of decompositions with class canonicalization.
///
/// Classes are the connected components of declared Grassmannian keys under
/// stable birational equivalence; the least key represents its class.
#[derive(Debug, Clone, Default)]
pub struct DecompositionRegistry {
    declared: BTreeMap<String, Decomposition>,
    parent: BTreeMap<GrassmannianKey, GrassmannianKey>,
}

impl DecompositionRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registry preloaded with a declared model's `decompositions`.
    pub fn from_lattice(model: &ExtensionLattice) -> Result<Self> {
        let mut reg = Self::new();
        if let Some(doc) = model.document() {
            for d in &doc.decompositions {
                let q = model.declared_form(&d.form).ok_or_else(|| Error::UnknownForm(d.form.clone()))?.clone();
                reg.declare_decomposition(&q, d.decomposition.clone(), model)?;
            }
        }
        Ok(reg)
    }

    fn find(&self, k: &GrassmannianKey) -> GrassmannianKey {
        let mut cur = k;
        while let Some(p) = self.parent.get(cur) {
            if p == cur {
                break;
            }
            cur = p;
        }
        cur.clone()
    }

    fn roots(&self) -> Vec<GrassmannianKey> {
        self.parent.iter().filter(|(k, p)| k == p).map(|(k, _)| k.clone()).collect()
    }

    fn add_key(&mut self, k: &GrassmannianKey, model: &ExtensionLattice) -> Result<()> {
        if self.parent.contains_key(k) {
            return Ok(());
        }
        let g = k.resolve(model)?;
        let mut merged = vec![k.clone()];
        for root in self.roots() {
            if model.stably_birational(&g, &root.resolve(model)?)? {
                merged.push(root);
            }
        }
        let min = merged.iter().min().expect("nonempty").clone();
        self.parent.insert(k.clone(), k.clone());
        for r in merged {
            self.parent.insert(r, min.clone());
        }
        Ok(())
    }

    /// Canonical key of the class containing `k`.
    pub fn canonical_key(&self, k: &GrassmannianKey) -> GrassmannianKey {
        if self.parent.contains_key(k) {
            self.find(k)
        } else {
            k.clone()
        }
    }

    pub fn class_of(&self, s: &Summand) -> IndecomposableClass {
        IndecomposableClass { key: self.canonical_key(&s.class), kind: s.kind }
    }

    /// Register summand data for a declared form.
    pub fn declare_decomposition(
        &mut self,
        q: &QuadraticForm,
        data: Decomposition,
        model: &ExtensionLattice,
    ) -> Result<Decomposition> {
        let id = q
            .declared_id()
            .ok_or_else(|| Error::Model(format!("{q} is a real form; its decomposition is computed, not declared")))?;
        let expected = motive_rank(q);
        if data.rank() != expected {
            return Err(Error::RankMismatch { form: id.to_string(), expected, got: data.rank() });
        }
        for t in &data.tates {
            if t.y != 2 * t.x {
                return Err(Error::Model(format!("decomposition of {id}: Tate motive {t} is not of the form (l)[2l]")));
            }
        }
        let base = model.base().clone();
        for s in &data.summands {
            if let SummandKind::Rost(_) = s.kind {
                return Err(Error::Model(format!("decomposition of {id}: declared summands must be binary(d)")));
            }
            let g = s.class.resolve(model)?;
            if model.has_rational_point(&g, &base)? {
                return Err(Error::Model(format!(
                    "decomposition of {id}: summand keyed by {} is already split over the base",
                    s.class
                )));
            }
        }
        // Split Tate constituents must match the Witt table everywhere.
        for e in model.extensions() {
            let mut lower = data.tates.len() / 2;
            for s in &data.summands {
                lower += tate_counts(s, e, model)?.1.len();
            }
            let w = model.witt_index(q, e)? as usize;
            if lower != w {
                return Err(Error::Model(format!(
                    "decomposition of {id} predicts Witt index {lower} over {e}, table has {w}"
                )));
            }
        }
        if let Some(old) = self.declared.get(id) {
            return if *old == data { Ok(data) } else { Err(Error::ConflictingDecomposition(id.to_string())) };
        }
        for s in &data.summands {
            self.add_key(&s.class, model)?;
        }
        self.declared.insert(id.to_string(), data.clone());
        Ok(data)
    }

    pub fn has_decomposition(&self, q: &QuadraticForm) -> bool {
        match q {
            QuadraticForm::Real(_) => true,
            QuadraticForm::Declared(d) => d.dim() < 2 || self.declared.contains_key(d.id()),
        }
    }

    /// Decomposition of `M(Q)`; the empty quadric has the zero motive.
    pub fn decomposition(&self, q: &QuadraticForm) -> Result<Decomposition> {
        if q.dim() < 2 {
            return Ok(Decomposition::default());
        }
        match q {
            QuadraticForm::Real(_) => decompose_real(q),
            QuadraticForm::Declared(d) => {
                self.declared.get(d.id()).cloned().ok_or_else(|| Error::MissingDecomposition(d.id().to_string()))
            }
        }
    }

    /// Multiset of anisotropic summand classes, counted with multiplicity.
    pub fn class_counts(&self, d: &Decomposition) -> BTreeMap<IndecomposableClass, i64> {
        let mut out = BTreeMap::new();
        for s in &d.summands {
            *out.entry(self.class_of(s)).or_insert(0) += 1;
        }
        out
    }

    /// Same anisotropic summands up to Tate shift; Tate parts ignored.
    pub fn t_equivalent(&self, a: &[Decomposition], b: &[Decomposition]) -> bool {
        let collect = |ds: &[Decomposition]| {
            let mut out: BTreeMap<IndecomposableClass, i64> = BTreeMap::new();
            for d in ds {
                for (c, k) in self.class_counts(d) {
                    *out.entry(c).or_insert(0) += k;
                }
            }
            out
        };
        collect(a) == collect(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldmodel::Level;

    fn form(p: u32, m: u32) -> QuadraticForm {
        QuadraticForm::real(p, m).unwrap()
    }

    fn shifts(d: &Decomposition, r: u32) -> Vec<i64> {
        d.summands.iter().filter(|s| s.kind == SummandKind::Rost(r)).map(|s| s.shift).collect()
    }

    #[test]
    fn pfister_decomposition() {
        for r in 1..6u32 {
            let d = decompose_real(&form(1 << r, 0)).unwrap();
            assert!(d.tates.is_empty());
            assert_eq!(shifts(&d, r), (0..1i64 << (r - 1)).collect::<Vec<_>>());
            assert_eq!(d.summands.len(), 1 << (r - 1));
        }
    }

    #[test]
    fn small_examples() {
        let d = decompose_real(&form(3, 0)).unwrap();
        assert_eq!(d.summands, vec![Summand { class: GrassmannianKey::rost(2), shift: 0, kind: SummandKind::Rost(2) }]);
        let d = decompose_real(&form(1, 1)).unwrap();
        assert_eq!(d.tates, vec![TateTwist::ZERO, TateTwist::ZERO]);
        assert!(d.summands.is_empty());
        let d = decompose_real(&form(5, 0)).unwrap();
        assert_eq!(shifts(&d, 3), vec![0]);
        assert_eq!(shifts(&d, 2), vec![1]);
        assert!(decompose_real(&form(1, 0)).is_err());
    }

    #[test]
    fn rank_bookkeeping() {
        for p in 0..=17u32 {
            for m in 0..=17u32 {
                if p + m < 2 {
                    continue;
                }
                let q = form(p, m);
                assert_eq!(decompose_real(&q).unwrap().rank(), motive_rank(&q), "{q}");
            }
        }
    }

    #[test]
    fn tate_counts_examples() {
        let mut l = ExtensionLattice::real();
        let base = l.base().clone();
        let e = l.extend_by_function_field(&base, &form(2, 0).quadric()).unwrap();
        assert_eq!(l.level(&e).unwrap(), Some(Level::Finite(1)));
        let n = Summand { class: GrassmannianKey::rost(2), shift: 0, kind: SummandKind::Rost(2) };
        assert_eq!(tate_counts(&n, &base, &l).unwrap(), (vec![], vec![]));
        assert_eq!(tate_counts(&n, &e, &l).unwrap(), (vec![1], vec![0]));
        let n3 = Summand { shift: 3, ..n.clone() };
        assert_eq!(tate_counts(&n3, &e, &l).unwrap(), (vec![4], vec![3]));
        // rost(2) splits at level 2 as well.
        let e3 = l.extend_by_function_field(&base, &form(3, 0).quadric()).unwrap();
        assert_eq!(tate_counts(&n, &e3, &l).unwrap(), (vec![1], vec![0]));
    }

    #[test]
    fn t_equivalence_examples() {
        let reg = DecompositionRegistry::new();
        let a = decompose_real(&form(3, 1)).unwrap();
        let b = decompose_real(&form(2, 0)).unwrap();
        assert!(reg.t_equivalent(std::slice::from_ref(&a), &[b]));
        assert!(reg.t_equivalent(std::slice::from_ref(&a), std::slice::from_ref(&a)));
        let r2 = decompose_real(&form(3, 0)).unwrap();
        let r3 = decompose_real(&form(0, 7)).unwrap();
        assert!(!reg.t_equivalent(&[r2], &[r3]));
    }

    #[test]
    fn key_and_kind_strings() {
        let k: GrassmannianKey = "G((8,0),0)".parse().unwrap();
        assert_eq!(k, GrassmannianKey::rost(3));
        assert_eq!(k.to_string(), "G((8,0),0)");
        assert_eq!("binary(2)".parse::<SummandKind>().unwrap(), SummandKind::Binary(2));
        assert_eq!("rost(3)".parse::<SummandKind>().unwrap().to_string(), "rost(3)");
        assert!("rost(0)".parse::<SummandKind>().is_err());
        let d = decompose_real(&form(3, 1)).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(
            s,
            r#"{"tates":[{"x":0,"y":0},{"x":2,"y":4}],"summands":[{"class":"G((2,0),0)","shift":1,"kind":"rost(1)"}]}"#
        );
        assert_eq!(serde_json::from_str::<Decomposition>(&s).unwrap(), d);
    }

    fn twin_model() -> ExtensionLattice {
        ExtensionLattice::from_json(
            r#"{
              "forms": [
                {"id": "a", "dim": 3}, {"id": "b", "dim": 3}, {"id": "c", "dim": 2}
              ],
              "extensions": [
                {"id": "k", "parent": null, "construction": "base"},
                {"id": "ka", "parent": "k", "construction": {"function_field_of": "a"}},
                {"id": "kb", "parent": "k", "construction": {"function_field_of": "b"}},
                {"id": "kc", "parent": "k", "construction": {"function_field_of": "c"}}
              ],
              "witt": [
                {"form": "a", "extension": "k", "index": 0},
                {"form": "a", "extension": "ka", "index": 1},
                {"form": "a", "extension": "kb", "index": 1},
                {"form": "a", "extension": "kc", "index": 0},
                {"form": "b", "extension": "k", "index": 0},
                {"form": "b", "extension": "ka", "index": 1},
                {"form": "b", "extension": "kb", "index": 1},
                {"form": "b", "extension": "kc", "index": 0},
                {"form": "c", "extension": "k", "index": 0},
                {"form": "c", "extension": "ka", "index": 0},
                {"form": "c", "extension": "kb", "index": 0},
                {"form": "c", "extension": "kc", "index": 1}
              ]
            }"#,
        )
        .unwrap()
    }

    fn conic(key: &str) -> Decomposition {
        Decomposition {
            tates: vec![],
            summands: vec![Summand { class: key.parse().unwrap(), shift: 0, kind: SummandKind::Binary(1) }],
        }
    }

    #[test]
    fn declared_registration() {
        let l = twin_model();
        let mut reg = DecompositionRegistry::new();
        let a = l.declared_form("a").unwrap().clone();
        let b = l.declared_form("b").unwrap().clone();
        reg.declare_decomposition(&a, conic("G(a,0)"), &l).unwrap();
        reg.declare_decomposition(&b, conic("G(b,0)"), &l).unwrap();
        // Idempotent.
        reg.declare_decomposition(&a, conic("G(a,0)"), &l).unwrap();
        let da = reg.decomposition(&a).unwrap();
        let db = reg.decomposition(&b).unwrap();
        assert_eq!(reg.class_of(&db.summands[0]).key, GrassmannianKey::new("a", 0));
        assert!(reg.t_equivalent(&[da], &[db]));
        // Odd uncovered rank.
        let bad = Decomposition { tates: vec![TateTwist::ZERO], summands: conic("G(a,0)").summands };
        assert!(matches!(reg.declare_decomposition(&a, bad, &l), Err(Error::RankMismatch { .. })));
        assert!(matches!(reg.declare_decomposition(&a, conic("G(zz,0)"), &l), Err(Error::UnknownKey(_))));
        // A summand that splits nowhere on a's table contradicts it.
        assert!(reg.declare_decomposition(&a, conic("G(c,0)"), &l).is_err());
    }
}
