//! The subgroup of the Picard group generated by the `e^q` and Tate twists.
//!
//! An element is stored as a Tate part together with a formal word in the
//! generators. Equality is decided on the normal form
//! `(closure twist, summand-class vector)` when every generator involved has
//! a decomposition; otherwise by `Φ`-fingerprints over the lattice, which is
//! only sound for inequality and is reported as model-relative.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::cechtower::tower_phi;
use crate::error::{Error, Result};
use crate::fieldmodel::{Construction, ExtensionId, ExtensionLattice, Grassmannian};
use crate::motdecomp::{DecompositionRegistry, IndecomposableClass, SummandKind};
use crate::phi::{phi_affine, PhiFingerprint, TateTwist};
use crate::qform::{gw_normalize, pfister_real, prime, FormAlgebra, ProjectiveQuadric, QuadraticForm};

static NEXT_CONTEXT: AtomicU64 = AtomicU64::new(1);

/// Formal product `T(tate) · Π (e^q)^c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PicElement {
    context: u64,
    tate: TateTwist,
    word: BTreeMap<QuadraticForm, i64>,
}

impl PicElement {
    pub fn tate(&self) -> TateTwist {
        self.tate
    }

    pub fn word(&self) -> &BTreeMap<QuadraticForm, i64> {
        &self.word
    }

    pub fn is_identity(&self) -> bool {
        self.tate.is_zero() && self.word.is_empty()
    }

    pub fn mul(&self, other: &PicElement) -> Result<PicElement> {
        if self.context != other.context {
            return Err(Error::LatticeMismatch);
        }
        let mut word = self.word.clone();
        for (q, c) in &other.word {
            let e = word.entry(q.clone()).or_insert(0);
            *e += c;
            if *e == 0 {
                word.remove(q);
            }
        }
        Ok(PicElement { context: self.context, tate: self.tate + other.tate, word })
    }

    pub fn inv(&self) -> PicElement {
        self.pow(-1)
    }

    pub fn pow(&self, k: i64) -> PicElement {
        let word = if k == 0 { BTreeMap::new() } else { self.word.iter().map(|(q, c)| (q.clone(), c * k)).collect() };
        PicElement { context: self.context, tate: self.tate * k, word }
    }

    pub fn div(&self, other: &PicElement) -> Result<PicElement> {
        self.mul(&other.inv())
    }

    pub fn twist(&self, t: TateTwist) -> PicElement {
        PicElement { tate: self.tate + t, ..self.clone() }
    }

    pub fn to_repr(&self) -> ElementRepr {
        ElementRepr {
            tate: self.tate,
            word: self.word.iter().map(|(q, c)| WordEntry { form: q.clone(), power: *c }).collect(),
        }
    }
}

impl fmt::Display for PicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.tate.is_zero() || self.word.is_empty() {
            parts.push(format!("T{}", self.tate));
        }
        for (q, c) in &self.word {
            if *c == 1 {
                parts.push(format!("e^{q}"));
            } else {
                parts.push(format!("(e^{q})^{c}"));
            }
        }
        f.write_str(&parts.join(" * "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordEntry {
    pub form: QuadraticForm,
    pub power: i64,
}

/// Context-free serialized form of an element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementRepr {
    pub tate: TateTwist,
    pub word: Vec<WordEntry>,
}

/// Normal form: restriction to the algebraic closure plus the class vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalForm {
    pub closure: TateTwist,
    pub classes: Option<BTreeMap<IndecomposableClass, i64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equality {
    pub equal: bool,
    /// `false` when the verdict rests on fingerprints over the finite lattice.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InverseReport {
    pub form: QuadraticForm,
    pub expected: TateTwist,
    pub passed: bool,
    pub constant: Option<TateTwist>,
    pub first_failure: Option<(ExtensionId, TateTwist)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateStep {
    pub form: QuadraticForm,
    pub reduced: QuadraticForm,
    pub prime: QuadraticForm,
    pub witness: ExtensionId,
    pub twist: TateTwist,
}

/// Elimination order certifying linear independence modulo Tate twists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub steps: Vec<CertificateStep>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RefusalReason {
    TrivialModTate,
    PrimeIsotropic,
    StablyBirational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refusal {
    pub reason: RefusalReason,
    pub forms: Vec<QuadraticForm>,
}

impl fmt::Display for Refusal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.forms.iter().map(|q| q.to_string()).collect();
        match self.reason {
            RefusalReason::TrivialModTate => write!(f, "e^{} is a pure Tate twist", names[0]),
            RefusalReason::PrimeIsotropic => write!(f, "prime of {} is isotropic over the base", names[0]),
            RefusalReason::StablyBirational => {
                write!(f, "primes of {} and {} have stably birational quadrics", names[0], names[1])
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Independence {
    Certified(Certificate),
    Refused { refusals: Vec<Refusal> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationsVerdict {
    pub fingerprint_equal_mod_tate: bool,
    pub t_equivalent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisExpansion {
    pub tate: TateTwist,
    /// Coordinate of `e^{<<-1>>^r}` for each `r` with a nonzero entry.
    pub coords: BTreeMap<u32, i64>,
}

/// A lattice, its decomposition registry, and the elements built over them.
#[derive(Debug)]
pub struct PicContext {
    id: u64,
    lattice: ExtensionLattice,
    registry: DecompositionRegistry,
}

impl PicContext {
    pub fn new(lattice: ExtensionLattice) -> Result<Self> {
        let registry = DecompositionRegistry::from_lattice(&lattice)?;
        Ok(Self::with_registry(lattice, registry))
    }

    pub fn with_registry(lattice: ExtensionLattice, registry: DecompositionRegistry) -> Self {
        PicContext { id: NEXT_CONTEXT.fetch_add(1, Ordering::Relaxed), lattice, registry }
    }

    pub fn lattice(&self) -> &ExtensionLattice {
        &self.lattice
    }

    pub fn registry(&self) -> &DecompositionRegistry {
        &self.registry
    }

    pub fn registry_mut(&mut self) -> &mut DecompositionRegistry {
        &mut self.registry
    }

    pub fn identity(&self) -> PicElement {
        self.tate(TateTwist::ZERO)
    }

    pub fn tate(&self, t: TateTwist) -> PicElement {
        PicElement { context: self.id, tate: t, word: BTreeMap::new() }
    }

    fn check_form(&self, q: &QuadraticForm) -> Result<()> {
        match q {
            QuadraticForm::Real(_) if self.lattice.is_real() => Ok(()),
            QuadraticForm::Declared(d) if self.lattice.declared_form(d.id()).is_some() => {
                prime(q, &self.lattice).map(|_| ())
            }
            _ => Err(Error::UnknownForm(q.to_string())),
        }
    }

    pub fn generator_e(&self, q: &QuadraticForm) -> Result<PicElement> {
        self.check_form(q)?;
        let q = match q {
            // Normalize the argument to the registered instance (carries dim).
            QuadraticForm::Declared(d) => self.lattice.declared_form(d.id()).expect("checked").clone(),
            real => real.clone(),
        };
        Ok(PicElement { context: self.id, tate: TateTwist::ZERO, word: BTreeMap::from([(q, 1)]) })
    }

    pub fn from_repr(&self, repr: &ElementRepr) -> Result<PicElement> {
        let mut x = self.tate(repr.tate);
        for w in &repr.word {
            x = x.mul(&self.generator_e(&w.form)?.pow(w.power))?;
        }
        Ok(x)
    }

    fn check(&self, x: &PicElement) -> Result<()> {
        if x.context == self.id {
            Ok(())
        } else {
            Err(Error::LatticeMismatch)
        }
    }

    /// `E ↦ Φ^E(x)` over every extension of the lattice.
    pub fn fingerprint(&self, x: &PicElement) -> Result<PhiFingerprint> {
        self.check(x)?;
        PhiFingerprint::from_fn(&self.lattice, |e| {
            let mut t = x.tate;
            for (q, c) in &x.word {
                t += phi_affine(q, e, &self.lattice)? * *c;
            }
            Ok(t)
        })
    }

    /// Same values computed through the projector tower.
    pub fn fingerprint_tower(&self, x: &PicElement) -> Result<PhiFingerprint> {
        self.check(x)?;
        PhiFingerprint::from_fn(&self.lattice, |e| {
            let mut t = x.tate;
            for (q, c) in &x.word {
                t += tower_phi(q, e, &self.lattice)? * *c;
            }
            Ok(t)
        })
    }

    /// `Φ` over the algebraic closure, where `e^q = ([n/2])[n]`.
    pub fn closure_twist(&self, x: &PicElement) -> TateTwist {
        let mut t = x.tate;
        for (q, c) in &x.word {
            let n = q.dim() as i64;
            t += TateTwist::new(n / 2, n) * *c;
        }
        t
    }

    /// Class vector `Σ c·([M(Q')] - [M(Q)])`, if all decompositions are known.
    pub fn det_vector(&self, x: &PicElement) -> Result<Option<BTreeMap<IndecomposableClass, i64>>> {
        self.check(x)?;
        let mut out: BTreeMap<IndecomposableClass, i64> = BTreeMap::new();
        for (q, c) in &x.word {
            let qp = prime(q, &self.lattice)?;
            if !self.registry.has_decomposition(q) || !self.registry.has_decomposition(&qp) {
                return Ok(None);
            }
            for (cls, k) in self.registry.class_counts(&self.registry.decomposition(&qp)?) {
                *out.entry(cls).or_insert(0) += c * k;
            }
            for (cls, k) in self.registry.class_counts(&self.registry.decomposition(q)?) {
                *out.entry(cls).or_insert(0) -= c * k;
            }
        }
        out.retain(|_, v| *v != 0);
        Ok(Some(out))
    }

    pub fn normal_form(&self, x: &PicElement) -> Result<NormalForm> {
        Ok(NormalForm { closure: self.closure_twist(x), classes: self.det_vector(x)? })
    }

    pub fn equal(&self, a: &PicElement, b: &PicElement) -> Result<Equality> {
        self.check(a)?;
        self.check(b)?;
        let na = self.normal_form(a)?;
        let nb = self.normal_form(b)?;
        let fa = self.fingerprint(a)?;
        let fb = self.fingerprint(b)?;
        if let (Some(va), Some(vb)) = (&na.classes, &nb.classes) {
            let equal = na.closure == nb.closure && va == vb;
            if equal && fa != fb {
                return Err(Error::Inconsistent(format!("{a} and {b} share a normal form but not a fingerprint")));
            }
            return Ok(Equality { equal, exact: true });
        }
        Ok(Equality { equal: na.closure == nb.closure && fa == fb, exact: false })
    }

    pub fn inverse_identity_check(&self, q: &QuadraticForm) -> Result<InverseReport> {
        let qp = prime(q, &self.lattice)?;
        let x = self.generator_e(q)?.mul(&self.generator_e(&qp)?)?;
        let fp = self.fingerprint(&x)?;
        let n = q.dim() as i64;
        let expected = TateTwist::new(n, 2 * n + 1);
        let first_failure = fp.entries().iter().find(|e| e.twist != expected).map(|e| (e.extension.clone(), e.twist));
        Ok(InverseReport {
            form: q.clone(),
            expected,
            passed: first_failure.is_none(),
            constant: fp.constant_value(),
            first_failure,
        })
    }

    /// Flag `Q = Q_m ⊃ ... ⊃ Q_0 ⊃ Q_{-1}` given by forms of dimension
    /// `dim(q)` down to 1. Real flags drop `<1>` before `<-1>`; declared
    /// flags follow `prime_of` links downward.
    pub fn default_flag(&self, q: &ProjectiveQuadric) -> Result<Vec<QuadraticForm>> {
        let form = q.form().clone();
        let mut flag = vec![form.clone()];
        match &form {
            QuadraticForm::Real(s) => {
                let (mut p, mut m) = (s.plus(), s.minus());
                while p + m > 1 {
                    if p > 0 {
                        p -= 1;
                    } else {
                        m -= 1;
                    }
                    flag.push(QuadraticForm::real(p, m)?);
                }
            }
            QuadraticForm::Declared(_) => {
                let mut cur = form.clone();
                while cur.dim() > 1 {
                    let below = self
                        .lattice
                        .forms()
                        .iter()
                        .find(|f| self.lattice.declared_prime(f.declared_id().unwrap_or("")).as_ref() == Some(&cur))
                        .cloned()
                        .ok_or_else(|| Error::InvalidFlag(format!("no declared form has prime {cur}")))?;
                    flag.push(below.clone());
                    cur = below;
                }
            }
        }
        Ok(flag)
    }

    /// Generator of one flag step `Q_j ∖ Q_{j-1}`.
    fn flag_step(&self, upper: &QuadraticForm, lower: &QuadraticForm) -> Result<QuadraticForm> {
        match (upper, lower) {
            (QuadraticForm::Real(u), QuadraticForm::Real(l)) => {
                if u.plus() == l.plus() + 1 && u.minus() == l.minus() {
                    Ok(QuadraticForm::Real(l.negate()))
                } else if u.minus() == l.minus() + 1 && u.plus() == l.plus() {
                    Ok(QuadraticForm::Real(*l))
                } else {
                    Err(Error::InvalidFlag(format!("{lower} is not a codimension-1 subform of {upper}")))
                }
            }
            (QuadraticForm::Declared(_), QuadraticForm::Declared(_)) => {
                if prime(lower, &self.lattice).ok().as_ref() == Some(upper) {
                    Ok(lower.clone())
                } else {
                    Err(Error::InvalidFlag(format!("{upper} is not declared as the prime of {lower}")))
                }
            }
            _ => Err(Error::InvalidFlag(format!("{upper} and {lower} are of different kinds"))),
        }
    }

    /// `det(Q) = e^{Q_m∖Q_{m-1}} · ... · e^{Q_0}`.
    pub fn det(&self, q: &ProjectiveQuadric, flag: Option<&[QuadraticForm]>) -> Result<PicElement> {
        let flag = match flag {
            Some(f) => f.to_vec(),
            None => self.default_flag(q)?,
        };
        if flag.first() != Some(q.form()) {
            return Err(Error::InvalidFlag(format!("flag must start at {}", q.form())));
        }
        if flag.last().map(|f| f.dim()) != Some(1) {
            return Err(Error::InvalidFlag("flag must end at a one-dimensional form".into()));
        }
        let mut x = self.identity();
        for pair in flag.windows(2) {
            let g = self.flag_step(&pair[0], &pair[1])?;
            x = x.mul(&self.generator_e(&g)?)?;
        }
        Ok(x)
    }

    fn function_field_node(&self, lattice: &mut ExtensionLattice, q: &QuadraticForm) -> Result<ExtensionId> {
        if lattice.is_real() {
            let base = lattice.base().clone();
            return lattice.extend_by_function_field(&base, &q.quadric());
        }
        lattice
            .nodes()
            .iter()
            .find(|n| {
                n.parent.as_ref() == Some(lattice.base())
                    && matches!(&n.construction, Construction::FunctionField(p) if p.form() == q)
            })
            .map(|n| n.id.clone())
            .ok_or_else(|| Error::ExtensionAbsent { form: q.to_string(), parent: lattice.base().to_string() })
    }

    /// Linear independence of `{e^q}` modulo Tate twists, by sink
    /// elimination on the isotropy graph of the primes.
    pub fn independent(&self, qs: &[QuadraticForm]) -> Result<Independence> {
        let base = self.lattice.base().clone();
        let mut refusals = Vec::new();
        let mut items = Vec::new();
        for q in qs {
            self.check_form(q)?;
            // e^{q ⊥ rℍ} = e^q · T(r)[2r], so only the anisotropic part matters.
            let reduced = match q {
                QuadraticForm::Real(_) => match gw_normalize(q, &self.lattice, &base)?.anisotropic {
                    Some(a) => a,
                    None => {
                        refusals.push(Refusal { reason: RefusalReason::TrivialModTate, forms: vec![q.clone()] });
                        continue;
                    }
                },
                QuadraticForm::Declared(_) => q.clone(),
            };
            let qp = prime(&reduced, &self.lattice)?;
            if self.lattice.witt_index(&qp, &base)? > 0 {
                refusals.push(Refusal { reason: RefusalReason::PrimeIsotropic, forms: vec![q.clone()] });
                continue;
            }
            items.push((q.clone(), reduced, qp));
        }
        for i in 0..items.len() {
            for j in i + 1..items.len() {
                let gi = Grassmannian::new(items[i].2.quadric(), 0)?;
                let gj = Grassmannian::new(items[j].2.quadric(), 0)?;
                if self.lattice.stably_birational(&gi, &gj)? {
                    refusals.push(Refusal {
                        reason: RefusalReason::StablyBirational,
                        forms: vec![items[i].0.clone(), items[j].0.clone()],
                    });
                }
            }
        }
        if !refusals.is_empty() {
            return Ok(Independence::Refused { refusals });
        }

        let mut lattice = self.lattice.clone();
        let mut fields = Vec::with_capacity(items.len());
        for (_, _, qp) in &items {
            fields.push(self.function_field_node(&mut lattice, qp)?);
        }
        let n = items.len();
        let mut edges = vec![BTreeSet::new(); n];
        for (i, field) in fields.iter().enumerate() {
            for (j, (_, _, qp)) in items.iter().enumerate() {
                if i != j && lattice.witt_index(qp, field)? > 0 {
                    edges[i].insert(j);
                }
            }
        }
        let mut remaining: BTreeSet<usize> = (0..n).collect();
        let mut steps = Vec::with_capacity(n);
        while !remaining.is_empty() {
            let sink = remaining
                .iter()
                .copied()
                .filter(|&i| edges[i].iter().all(|j| !remaining.contains(j)))
                .min_by(|&a, &b| items[a].1.cmp(&items[b].1))
                .ok_or_else(|| Error::Inconsistent("isotropy graph of the primes has an oriented cycle".into()))?;
            remaining.remove(&sink);
            let (q, reduced, qp) = &items[sink];
            let twist = phi_affine(q, &fields[sink], &lattice)? - phi_affine(q, &base, &lattice)?;
            if twist.is_zero() {
                return Err(Error::Inconsistent(format!("witness twist of {q} vanishes")));
            }
            steps.push(CertificateStep {
                form: q.clone(),
                reduced: reduced.clone(),
                prime: qp.clone(),
                witness: fields[sink].clone(),
                twist,
            });
        }
        Ok(Independence::Certified(Certificate { steps }))
    }

    fn det_product(&self, qs: &[ProjectiveQuadric]) -> Result<PicElement> {
        let mut x = self.identity();
        for q in qs {
            x = x.mul(&self.det(q, None)?)?;
        }
        Ok(x)
    }

    /// Fingerprint verdict on `Π det(P_i)` versus `Π det(Q_j)` modulo a
    /// constant twist, against T-equivalence of the decompositions.
    pub fn relations_check(&self, ps: &[ProjectiveQuadric], qs: &[ProjectiveQuadric]) -> Result<RelationsVerdict> {
        let x = self.det_product(ps)?;
        let y = self.det_product(qs)?;
        let diff = self.fingerprint(&x)?.sub(&self.fingerprint(&y)?);
        let fingerprint_equal_mod_tate = diff.is_constant();
        let decomps = |v: &[ProjectiveQuadric]| -> Result<Vec<_>> {
            v.iter().map(|q| self.registry.decomposition(q.form())).collect()
        };
        let t_equivalent = self.registry.t_equivalent(&decomps(ps)?, &decomps(qs)?);
        if fingerprint_equal_mod_tate != t_equivalent {
            return Err(Error::Inconsistent(format!(
                "fingerprint verdict {fingerprint_equal_mod_tate} disagrees with T-equivalence {t_equivalent}"
            )));
        }
        Ok(RelationsVerdict { fingerprint_equal_mod_tate, t_equivalent })
    }

    /// Equal dimension and Witt profile, checked against `det(P) = det(Q)`.
    pub fn motivically_equivalent(&self, p: &ProjectiveQuadric, q: &ProjectiveQuadric) -> Result<bool> {
        let mut profile = p.dim() == q.dim();
        if profile {
            for e in self.lattice.extensions() {
                if self.lattice.witt_index(p.form(), e)? != self.lattice.witt_index(q.form(), e)? {
                    profile = false;
                    break;
                }
            }
        }
        let dets = self.equal(&self.det(p, None)?, &self.det(q, None)?)?;
        if dets.equal != profile {
            return Err(Error::Inconsistent(format!(
                "Witt profiles say {profile} but determinants say {} for {p} and {q}",
                dets.equal
            )));
        }
        Ok(profile)
    }

    /// Coordinates of `x` modulo Tate in the basis `e^{<<-1>>^r}`, `r <= maxr`.
    pub fn basis_real(&self, x: &PicElement, maxr: u32) -> Result<BasisExpansion> {
        if !self.lattice.is_real() {
            return Err(Error::RealBackendRequired("basis".into()));
        }
        let mut v =
            self.det_vector(x)?.ok_or_else(|| Error::Inconsistent("real element without a class vector".into()))?;
        let rost_degree = |c: &IndecomposableClass| match c.kind {
            SummandKind::Rost(r) => r,
            SummandKind::Binary(_) => 0,
        };
        if let Some(needed) = v.keys().map(rost_degree).max() {
            if needed > maxr {
                return Err(Error::InsufficientMaxR { needed, maxr });
            }
        }
        // Peel the largest Pfister degree first; e^{π_r} contributes -rost(r).
        let mut coords = BTreeMap::new();
        let mut y = self.identity();
        for r in (1..=maxr).rev() {
            let basis = self.generator_e(&pfister_real(r as i64)?)?;
            let bv = self.det_vector(&basis)?.expect("real");
            let (cls, unit) = bv.iter().next().map(|(c, k)| (c.clone(), *k)).expect("nonzero");
            let have = v.get(&cls).copied().unwrap_or(0);
            if have % unit != 0 {
                return Err(Error::Inconsistent(format!("class vector not divisible at rost({r})")));
            }
            let c = have / unit;
            if c != 0 {
                coords.insert(r, c);
                for (k, val) in &bv {
                    *v.entry(k.clone()).or_insert(0) -= c * val;
                }
                v.retain(|_, val| *val != 0);
                y = y.mul(&basis.pow(c))?;
            }
        }
        if !v.is_empty() {
            return Err(Error::Inconsistent("elimination left a nonzero class vector".into()));
        }
        let tate = self.closure_twist(x) - self.closure_twist(&y);
        let expansion = y.twist(tate);
        let eq = self.equal(x, &expansion)?;
        if !eq.equal || self.fingerprint(x)? != self.fingerprint(&expansion)? {
            return Err(Error::Inconsistent("basis expansion does not reproduce the element".into()));
        }
        Ok(BasisExpansion { tate, coords })
    }

    /// Re-expand a basis vector as an element.
    pub fn expand_basis(&self, b: &BasisExpansion) -> Result<PicElement> {
        let mut y = self.tate(b.tate);
        for (r, c) in &b.coords {
            y = y.mul(&self.generator_e(&pfister_real(*r as i64)?)?.pow(*c))?;
        }
        Ok(y)
    }
}
