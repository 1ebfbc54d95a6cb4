//! Finite lattices of field extensions with a Witt-index oracle.
//!
//! Two backends share one interface. The real backend tracks only the level
//! of each field (the least `s` with `-1` a sum of `s` squares) and derives
//! every Witt index of a diagonal `±1` form from it. The declared backend
//! reads Witt indices from a table supplied as a JSON document.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::motdecomp::Decomposition;
use crate::qform::{FormAlgebra, ProjectiveQuadric, QuadraticForm, Signature};

/// Level of a field: a power of two, or infinite for formally real fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Finite(u64),
    Infinite,
}

impl Level {
    pub fn finite(s: u64) -> Result<Self> {
        if s.is_power_of_two() {
            Ok(Level::Finite(s))
        } else {
            Err(Error::Model(format!("level {s} is not a power of two")))
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Finite(s) => write!(f, "{s}"),
            Level::Infinite => f.write_str("inf"),
        }
    }
}

/// Representative `w` of `p - m` modulo `2s` in `(-s, s]`.
///
/// Over a field of level `s` the form `(p,m)` is `|w|`-dimensional
/// anisotropic plus hyperbolic planes: `2s<1>` is hyperbolic, `s<1>` is
/// anisotropic and isometric to `s<-1>`.
pub fn reduced_excess(sig: Signature, level: Level) -> i64 {
    let diff = sig.plus() as i64 - sig.minus() as i64;
    match level {
        Level::Infinite => diff,
        Level::Finite(s) => {
            let s = s as i64;
            let r = diff.rem_euclid(2 * s);
            if r > s {
                r - 2 * s
            } else {
                r
            }
        }
    }
}

pub fn real_witt(sig: Signature, level: Level) -> u32 {
    let w = reduced_excess(sig, level).unsigned_abs() as u32;
    (sig.dim() - w) / 2
}

/// Level after adjoining the generic point of an anisotropic form of
/// dimension `d >= 2`: `2^(r-1)` for `2^(r-1) < d <= 2^r`.
fn function_field_level(d: u32) -> Level {
    Level::Finite((d as u64).next_power_of_two() / 2)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExtensionId(String);

impl ExtensionId {
    pub fn new(token: impl Into<String>) -> Self {
        ExtensionId(token.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ExtensionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ExtensionId {
    fn from(s: &str) -> Self {
        ExtensionId::new(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    Base,
    FunctionField(ProjectiveQuadric),
    Join(Vec<ExtensionId>),
}

#[derive(Debug, Clone)]
pub struct ExtensionNode {
    pub id: ExtensionId,
    pub parent: Option<ExtensionId>,
    pub construction: Construction,
}

/// Grassmannian `G(Q,n)` of projective `n`-planes on `Q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grassmannian {
    pub quadric: ProjectiveQuadric,
    pub plane_dim: u32,
}

impl Grassmannian {
    pub fn new(quadric: ProjectiveQuadric, plane_dim: u32) -> Result<Self> {
        let max = quadric.dim().div_euclid(2);
        if plane_dim as i64 > max {
            return Err(Error::PlaneOutOfRange { quadric: quadric.to_string(), n: plane_dim, max });
        }
        Ok(Grassmannian { quadric, plane_dim })
    }
}

impl fmt::Display for Grassmannian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({},{})", self.quadric.form(), self.plane_dim)
    }
}

// ---------------------------------------------------------------------------
// Declared model document

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormEntry {
    pub id: String,
    pub dim: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime_of: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sum_of: Option<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionEntry {
    Base,
    FunctionFieldOf(String),
    Join(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionEntry {
    pub id: String,
    pub parent: Option<String>,
    pub construction: ConstructionEntry,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WittEntry {
    pub form: String,
    pub extension: String,
    pub index: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionEntry {
    pub form: String,
    #[serde(flatten)]
    pub decomposition: Decomposition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub forms: Vec<FormEntry>,
    pub extensions: Vec<ExtensionEntry>,
    pub witt: Vec<WittEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub decompositions: Vec<DecompositionEntry>,
}

impl ModelDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model documents always serialize")
    }
}

// ---------------------------------------------------------------------------
// Lattice

#[derive(Debug, Clone)]
struct DeclaredTables {
    document: ModelDocument,
    forms: HashMap<String, QuadraticForm>,
    primes: HashMap<String, String>,
    sums: HashMap<(String, String), String>,
    /// Per form, the index at each node (by position).
    witt: HashMap<String, Vec<Option<u32>>>,
}

#[derive(Debug, Clone)]
enum Backend {
    Real { levels: Vec<Level> },
    Declared(Box<DeclaredTables>),
}

/// Position reached while walking towards a generic point.
#[derive(Debug, Clone, Copy)]
enum Point {
    Level(Level),
    Node(usize),
}

#[derive(Debug, Clone)]
pub struct ExtensionLattice {
    nodes: Vec<ExtensionNode>,
    index: HashMap<ExtensionId, usize>,
    children: HashMap<(usize, String), usize>,
    joins: HashMap<Vec<usize>, usize>,
    forms: Vec<QuadraticForm>,
    backend: Backend,
}

fn quadric_key(q: &ProjectiveQuadric) -> String {
    q.canonical().form().token()
}

impl ExtensionLattice {
    /// Real backend containing only the base field `R` (level infinite).
    pub fn real() -> Self {
        let base = ExtensionId::new("base");
        let mut index = HashMap::new();
        index.insert(base.clone(), 0);
        ExtensionLattice {
            nodes: vec![ExtensionNode { id: base, parent: None, construction: Construction::Base }],
            index,
            children: HashMap::new(),
            joins: HashMap::new(),
            forms: Vec::new(),
            backend: Backend::Real { levels: vec![Level::Infinite] },
        }
    }

    /// Joint generic-splitting lattice: every node gets one function-field
    /// child per distinct anisotropic quadric (dimension >= 2) among the
    /// registered forms and their primes, down to `depth` generations.
    pub fn real_generic_splitting(forms: &[QuadraticForm], depth: usize) -> Result<Self> {
        let mut lattice = ExtensionLattice::real();
        for q in forms {
            let s = q.signature().ok_or_else(|| Error::RealBackendRequired(format!("form {q}")))?;
            lattice.register_form(q.clone())?;
            lattice.register_form(QuadraticForm::Real(s.prime()))?;
        }
        let sigs: Vec<Signature> = lattice.forms.iter().filter_map(|f| f.signature()).collect();
        let mut queue = VecDeque::from([(0usize, 0usize)]);
        while let Some((node, d)) = queue.pop_front() {
            if d >= depth {
                continue;
            }
            let level = lattice.real_level_at(node);
            let mut dims: Vec<u32> =
                sigs.iter().map(|s| reduced_excess(*s, level).unsigned_abs() as u32).filter(|&a| a >= 2).collect();
            dims.sort_unstable();
            dims.dedup();
            let parent = lattice.nodes[node].id.clone();
            for a in dims {
                let quadric = QuadraticForm::real(a, 0)?.quadric();
                let child = lattice.extend_by_function_field(&parent, &quadric)?;
                queue.push_back((lattice.index[&child], d + 1));
            }
        }
        Ok(lattice)
    }

    pub fn from_document(document: ModelDocument) -> Result<Self> {
        let mut forms = HashMap::new();
        let mut form_order = Vec::new();
        for f in &document.forms {
            let q = QuadraticForm::declared(f.id.clone(), f.dim)
                .map_err(|_| Error::Model(format!("forms[{}]: dimension must be >= 1", f.id)))?;
            if forms.insert(f.id.clone(), q.clone()).is_some() {
                return Err(Error::Model(format!("forms: duplicate id {}", f.id)));
            }
            form_order.push(q);
        }
        let mut primes = HashMap::new();
        let mut sums = HashMap::new();
        for f in &document.forms {
            if let Some(of) = &f.prime_of {
                let base = forms
                    .get(of)
                    .ok_or_else(|| Error::Model(format!("forms[{}].prime_of: unknown form {of}", f.id)))?;
                if base.dim() + 1 != f.dim {
                    return Err(Error::Model(format!("forms[{}].prime_of: dimension must be dim({of}) + 1", f.id)));
                }
                if primes.insert(of.clone(), f.id.clone()).is_some() {
                    return Err(Error::Model(format!("forms: {of} has two primes")));
                }
            }
            if let Some([a, b]) = &f.sum_of {
                let da = forms
                    .get(a)
                    .ok_or_else(|| Error::Model(format!("forms[{}].sum_of: unknown form {a}", f.id)))?
                    .dim();
                let db = forms
                    .get(b)
                    .ok_or_else(|| Error::Model(format!("forms[{}].sum_of: unknown form {b}", f.id)))?
                    .dim();
                if da + db != f.dim {
                    return Err(Error::Model(format!("forms[{}].sum_of: dimension must be dim({a}) + dim({b})", f.id)));
                }
                sums.insert((a.clone(), b.clone()), f.id.clone());
            }
        }

        let mut nodes = Vec::new();
        let mut index = HashMap::new();
        for e in &document.extensions {
            let id = ExtensionId::new(e.id.clone());
            if index.insert(id.clone(), nodes.len()).is_some() {
                return Err(Error::Model(format!("extensions: duplicate id {}", e.id)));
            }
            let construction = match &e.construction {
                ConstructionEntry::Base => Construction::Base,
                ConstructionEntry::FunctionFieldOf(f) => {
                    let q = forms.get(f).ok_or_else(|| {
                        Error::Model(format!("extensions[{}].function_field_of: unknown form {f}", e.id))
                    })?;
                    Construction::FunctionField(q.quadric())
                }
                ConstructionEntry::Join(ids) => {
                    if ids.is_empty() {
                        return Err(Error::Model(format!("extensions[{}].join: empty", e.id)));
                    }
                    Construction::Join(ids.iter().map(|s| ExtensionId::new(s.clone())).collect())
                }
            };
            nodes.push(ExtensionNode { id, parent: e.parent.clone().map(ExtensionId::new), construction });
        }
        let bases: Vec<_> = nodes.iter().filter(|n| matches!(n.construction, Construction::Base)).collect();
        if bases.len() != 1 || bases[0].parent.is_some() {
            return Err(Error::Model("extensions: need exactly one base with null parent".into()));
        }
        for n in &nodes {
            match (&n.construction, &n.parent) {
                (Construction::Base, _) => {}
                (_, None) => {
                    return Err(Error::Model(format!("extensions[{}].parent: missing", n.id)));
                }
                (_, Some(p)) if !index.contains_key(p) => {
                    return Err(Error::Model(format!("extensions[{}].parent: unknown extension {p}", n.id)));
                }
                _ => {}
            }
            if let Construction::Join(ids) = &n.construction {
                for c in ids {
                    if !index.contains_key(c) {
                        return Err(Error::Model(format!("extensions[{}].join: unknown extension {c}", n.id)));
                    }
                }
                if n.parent.as_ref() != ids.first() {
                    return Err(Error::Model(format!(
                        "extensions[{}].parent: a join's parent must be its first constituent",
                        n.id
                    )));
                }
            }
        }

        let mut witt: HashMap<String, Vec<Option<u32>>> =
            forms.keys().map(|f| (f.clone(), vec![None; nodes.len()])).collect();
        for (i, w) in document.witt.iter().enumerate() {
            if !forms.contains_key(&w.form) {
                return Err(Error::Model(format!("witt[{i}].form: unknown form {}", w.form)));
            }
            let e = *index
                .get(&ExtensionId::new(w.extension.clone()))
                .ok_or_else(|| Error::Model(format!("witt[{i}].extension: unknown extension {}", w.extension)))?;
            let slot = &mut witt.get_mut(&w.form).expect("checked above")[e];
            if slot.replace(w.index).is_some() {
                return Err(Error::Model(format!("witt[{i}]: duplicate entry for ({}, {})", w.form, w.extension)));
            }
        }
        for (i, d) in document.decompositions.iter().enumerate() {
            if !forms.contains_key(&d.form) {
                return Err(Error::Model(format!("decompositions[{i}].form: unknown form {}", d.form)));
            }
        }

        let mut children = HashMap::new();
        let mut joins = HashMap::new();
        for (i, n) in nodes.iter().enumerate() {
            match &n.construction {
                Construction::FunctionField(q) => {
                    let p = index[n.parent.as_ref().expect("checked above")];
                    children.entry((p, quadric_key(q))).or_insert(i);
                }
                Construction::Join(ids) => {
                    let mut key: Vec<usize> = ids.iter().map(|c| index[c]).collect();
                    key.sort_unstable();
                    joins.entry(key).or_insert(i);
                }
                Construction::Base => {}
            }
        }

        let lattice = ExtensionLattice {
            nodes,
            index,
            children,
            joins,
            forms: form_order,
            backend: Backend::Declared(Box::new(DeclaredTables { document, forms, primes, sums, witt })),
        };
        lattice.check_acyclic()?;
        Ok(lattice)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_document(ModelDocument::from_json(text)?)
    }

    fn check_acyclic(&self) -> Result<()> {
        // Kahn's algorithm over the predecessor relation.
        let n = self.nodes.len();
        let mut indeg = vec![0usize; n];
        let mut succ = vec![Vec::new(); n];
        for (i, _) in self.nodes.iter().enumerate() {
            for p in self.predecessors(i) {
                indeg[i] += 1;
                succ[p].push(i);
            }
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(i) = queue.pop_front() {
            seen += 1;
            for &j in &succ[i] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    queue.push_back(j);
                }
            }
        }
        if seen == n {
            Ok(())
        } else {
            Err(Error::Model("extensions: parent graph has a cycle".into()))
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self.backend, Backend::Real { .. })
    }

    pub fn document(&self) -> Option<&ModelDocument> {
        match &self.backend {
            Backend::Declared(t) => Some(&t.document),
            Backend::Real { .. } => None,
        }
    }

    pub fn to_json(&self) -> String {
        match &self.backend {
            Backend::Declared(t) => t.document.to_json(),
            Backend::Real { .. } => self.to_declared_document().to_json(),
        }
    }

    /// Full Witt table of a real lattice, as a self-contained declared model.
    /// Forms are renamed `f<p>_<m>`, extensions `e<k>` in lattice order.
    pub fn to_declared_document(&self) -> ModelDocument {
        if let Backend::Declared(t) = &self.backend {
            return t.document.clone();
        }
        let mut sigs: Vec<Signature> = self.forms.iter().filter_map(|f| f.signature()).collect();
        for n in &self.nodes {
            if let Construction::FunctionField(q) = &n.construction {
                sigs.extend(q.form().signature());
            }
        }
        let mut seen = HashSet::new();
        sigs.retain(|s| seen.insert(*s));
        let name = |s: &Signature| format!("f{}_{}", s.plus(), s.minus());
        let set: HashSet<Signature> = sigs.iter().copied().collect();
        let mut forms = Vec::new();
        for s in &sigs {
            // Link each form to the form it is the prime of, when present.
            let prime_of = sigs.iter().find(|t| t.prime() == *s).filter(|t| set.contains(t)).map(name);
            forms.push(FormEntry { id: name(s), dim: s.dim(), prime_of, sum_of: None });
        }
        let ext_name = |i: usize| if i == 0 { "base".to_string() } else { format!("e{i}") };
        let extensions = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| ExtensionEntry {
                id: ext_name(i),
                parent: n.parent.as_ref().map(|p| ext_name(self.index[p])),
                construction: match &n.construction {
                    Construction::Base => ConstructionEntry::Base,
                    Construction::FunctionField(q) => {
                        ConstructionEntry::FunctionFieldOf(name(&q.form().signature().expect("real")))
                    }
                    Construction::Join(ids) => {
                        ConstructionEntry::Join(ids.iter().map(|c| ext_name(self.index[c])).collect())
                    }
                },
            })
            .collect();
        let mut witt = Vec::new();
        for s in &sigs {
            for i in 0..self.nodes.len() {
                witt.push(WittEntry {
                    form: name(s),
                    extension: ext_name(i),
                    index: real_witt(*s, self.real_level_at(i)),
                });
            }
        }
        ModelDocument { forms, extensions, witt, decompositions: Vec::new() }
    }

    pub fn base(&self) -> &ExtensionId {
        &self.nodes[0].id
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, e: &ExtensionId) -> Result<&ExtensionNode> {
        Ok(&self.nodes[self.idx(e)?])
    }

    pub fn extensions(&self) -> impl Iterator<Item = &ExtensionId> {
        self.nodes.iter().map(|n| &n.id)
    }

    pub fn nodes(&self) -> &[ExtensionNode] {
        &self.nodes
    }

    pub fn forms(&self) -> &[QuadraticForm] {
        &self.forms
    }

    /// Add a form to the registry. Declared models only accept their own forms.
    pub fn register_form(&mut self, q: QuadraticForm) -> Result<()> {
        match (&self.backend, &q) {
            (Backend::Real { .. }, QuadraticForm::Real(_)) => {}
            (Backend::Declared(t), QuadraticForm::Declared(d)) if t.forms.contains_key(d.id()) => {}
            _ => return Err(Error::UnknownForm(q.to_string())),
        }
        if !self.forms.contains(&q) {
            self.forms.push(q);
        }
        Ok(())
    }

    /// Resolve a declared id to its registered form.
    pub fn declared_form(&self, id: &str) -> Option<&QuadraticForm> {
        match &self.backend {
            Backend::Declared(t) => t.forms.get(id),
            Backend::Real { .. } => None,
        }
    }

    fn idx(&self, e: &ExtensionId) -> Result<usize> {
        self.index.get(e).copied().ok_or_else(|| Error::UnknownExtension(e.to_string()))
    }

    fn real_level_at(&self, i: usize) -> Level {
        match &self.backend {
            Backend::Real { levels } => levels[i],
            Backend::Declared(_) => unreachable!("level queried on declared backend"),
        }
    }

    /// Immediate predecessors: the parent, and every constituent of a join.
    fn predecessors(&self, i: usize) -> Vec<usize> {
        let n = &self.nodes[i];
        let mut out = Vec::new();
        if let Some(p) = &n.parent {
            out.push(self.index[p]);
        }
        if let Construction::Join(ids) = &n.construction {
            for c in ids {
                let j = self.index[c];
                if !out.contains(&j) {
                    out.push(j);
                }
            }
        }
        out
    }

    /// `E` lies below `F`: `F` is reachable from `E` by adjoining.
    pub fn is_below(&self, e: &ExtensionId, f: &ExtensionId) -> Result<bool> {
        let e = self.idx(e)?;
        let f = self.idx(f)?;
        let mut stack = vec![f];
        let mut seen = HashSet::new();
        while let Some(i) = stack.pop() {
            if i == e {
                return Ok(true);
            }
            if seen.insert(i) {
                stack.extend(self.predecessors(i));
            }
        }
        Ok(false)
    }

    /// Level of `E`; `None` on the declared backend.
    pub fn level(&self, e: &ExtensionId) -> Result<Option<Level>> {
        let i = self.idx(e)?;
        Ok(match &self.backend {
            Backend::Real { levels } => Some(levels[i]),
            Backend::Declared(_) => None,
        })
    }

    fn witt_at_node(&self, q: &QuadraticForm, i: usize) -> Result<u32> {
        match (&self.backend, q) {
            (Backend::Real { levels }, QuadraticForm::Real(s)) => Ok(real_witt(*s, levels[i])),
            (Backend::Declared(t), QuadraticForm::Declared(d)) => {
                let row = t.witt.get(d.id()).ok_or_else(|| Error::UnknownForm(d.id().to_string()))?;
                row[i].ok_or_else(|| Error::MissingWitt {
                    form: d.id().to_string(),
                    extension: self.nodes[i].id.to_string(),
                })
            }
            _ => Err(Error::UnknownForm(q.to_string())),
        }
    }

    fn witt_at(&self, q: &QuadraticForm, p: Point) -> Result<u32> {
        match (p, q) {
            (Point::Node(i), _) => self.witt_at_node(q, i),
            (Point::Level(l), QuadraticForm::Real(s)) => Ok(real_witt(*s, l)),
            (Point::Level(_), QuadraticForm::Declared(_)) => Err(Error::UnknownForm(q.to_string())),
        }
    }

    pub fn witt_index(&self, q: &QuadraticForm, e: &ExtensionId) -> Result<u32> {
        self.witt_at_node(q, self.idx(e)?)
    }

    /// Point-existence oracle for `G(Q,n)` over `E`.
    pub fn has_rational_point(&self, g: &Grassmannian, e: &ExtensionId) -> Result<bool> {
        Ok(self.witt_index(g.quadric.form(), e)? > g.plane_dim)
    }

    /// Adjoin the generic point of `Q` to `E`, reusing an existing child.
    pub fn extend_by_function_field(&mut self, e: &ExtensionId, q: &ProjectiveQuadric) -> Result<ExtensionId> {
        if q.form().dim() < 2 {
            return Err(Error::EmptyQuadric(q.form().to_string()));
        }
        let parent = self.idx(e)?;
        let key = (parent, quadric_key(q));
        if let Some(&i) = self.children.get(&key) {
            return Ok(self.nodes[i].id.clone());
        }
        let level = match &self.backend {
            Backend::Declared(_) => {
                return Err(Error::ExtensionAbsent { form: q.form().to_string(), parent: e.to_string() })
            }
            Backend::Real { levels } => {
                let lvl = levels[parent];
                let s = q.form().signature().ok_or_else(|| Error::UnknownForm(q.form().to_string()))?;
                if real_witt(s, lvl) > 0 {
                    lvl
                } else {
                    lvl.min(function_field_level(s.dim()))
                }
            }
        };
        let id = ExtensionId::new(format!("{}/{}", e, key.1));
        self.push_node(
            ExtensionNode {
                id: id.clone(),
                parent: Some(e.clone()),
                construction: Construction::FunctionField(q.canonical()),
            },
            level,
        );
        self.children.insert(key, self.nodes.len() - 1);
        Ok(id)
    }

    fn push_node(&mut self, node: ExtensionNode, level: Level) {
        self.index.insert(node.id.clone(), self.nodes.len());
        self.nodes.push(node);
        if let Backend::Real { levels } = &mut self.backend {
            levels.push(level);
        }
    }

    /// Compositum of function fields; level is the minimum of the constituents.
    pub fn join(&mut self, ids: &[ExtensionId]) -> Result<ExtensionId> {
        if ids.is_empty() {
            return Err(Error::Model("join of no extensions".into()));
        }
        let mut key = Vec::with_capacity(ids.len());
        for e in ids {
            key.push(self.idx(e)?);
        }
        key.sort_unstable();
        key.dedup();
        if let Some(&i) = self.joins.get(&key) {
            return Ok(self.nodes[i].id.clone());
        }
        let level = match &self.backend {
            Backend::Declared(_) => {
                return Err(Error::ExtensionAbsent {
                    form: "join".into(),
                    parent: ids.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("+"),
                })
            }
            Backend::Real { levels } => key.iter().map(|&i| levels[i]).min().expect("nonempty"),
        };
        let constituents: Vec<ExtensionId> = key.iter().map(|&i| self.nodes[i].id.clone()).collect();
        let id = ExtensionId::new(format!(
            "join({})",
            constituents.iter().map(|e| e.as_str()).collect::<Vec<_>>().join("+")
        ));
        self.push_node(
            ExtensionNode {
                id: id.clone(),
                parent: Some(constituents[0].clone()),
                construction: Construction::Join(constituents),
            },
            level,
        );
        self.joins.insert(key, self.nodes.len() - 1);
        Ok(id)
    }

    /// Walk from the base to a field over which `G(Q,n)` acquires a point,
    /// by iterated function fields. Declared models must contain the tower.
    fn generic_point(&self, g: &Grassmannian) -> Result<Point> {
        let form = g.quadric.form();
        match &self.backend {
            Backend::Real { .. } => {
                let s = form.signature().ok_or_else(|| Error::UnknownForm(form.to_string()))?;
                let mut level = Level::Infinite;
                while real_witt(s, level) <= g.plane_dim {
                    let a = reduced_excess(s, level).unsigned_abs() as u32;
                    level = level.min(function_field_level(a));
                }
                Ok(Point::Level(level))
            }
            Backend::Declared(_) => {
                let key = quadric_key(&g.quadric);
                let mut node = 0usize;
                for _ in 0..=form.dim() {
                    if self.witt_at_node(form, node)? > g.plane_dim {
                        return Ok(Point::Node(node));
                    }
                    node = *self.children.get(&(node, key.clone())).ok_or_else(|| Error::ExtensionAbsent {
                        form: form.to_string(),
                        parent: self.nodes[node].id.to_string(),
                    })?;
                }
                Err(Error::Model(format!("generic splitting tower of {form} does not reach {g}")))
            }
        }
    }

    /// Mutual rational points over each other's generic points.
    pub fn stably_birational(&self, x: &Grassmannian, y: &Grassmannian) -> Result<bool> {
        if x == y {
            return Ok(true);
        }
        let gx = self.generic_point(x)?;
        if self.witt_at(y.quadric.form(), gx)? <= y.plane_dim {
            return Ok(false);
        }
        let gy = self.generic_point(y)?;
        Ok(self.witt_at(x.quadric.form(), gy)? > x.plane_dim)
    }

    /// Forms checked by `validate`: the registry plus every quadric some
    /// function-field node was built from.
    fn validation_forms(&self) -> Vec<QuadraticForm> {
        let mut out = self.forms.clone();
        for n in &self.nodes {
            if let Construction::FunctionField(q) = &n.construction {
                if !out.contains(q.form()) {
                    out.push(q.form().clone());
                }
            }
        }
        out
    }

    fn prime_pairs(&self, forms: &[QuadraticForm]) -> Vec<(QuadraticForm, QuadraticForm)> {
        match &self.backend {
            Backend::Real { .. } => forms
                .iter()
                .filter_map(|q| q.signature().map(|s| (q.clone(), QuadraticForm::Real(s.prime()))))
                .collect(),
            Backend::Declared(t) => {
                let mut pairs: Vec<_> =
                    t.primes.iter().map(|(a, b)| (t.forms[a].clone(), t.forms[b].clone())).collect();
                pairs.sort();
                pairs
            }
        }
    }

    /// Check monotonicity, ceiling, codimension-1 step and self-isotropy at
    /// every (form, extension), plus table completeness for declared models.
    pub fn validate(&self) -> ValidationReport {
        let forms = self.validation_forms();
        let mut violations = Vec::new();
        let mut table: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for (fi, q) in forms.iter().enumerate() {
            for i in 0..self.nodes.len() {
                match self.witt_at_node(q, i) {
                    Ok(w) => {
                        table.insert((fi, i), w);
                    }
                    Err(_) => {
                        violations.push(Violation::Missing { form: q.to_string(), extension: self.nodes[i].id.clone() })
                    }
                }
            }
        }
        for (&(fi, i), &w) in &table {
            let q = &forms[fi];
            let ceiling = q.dim() / 2;
            if w > ceiling {
                violations.push(Violation::Ceiling {
                    form: q.to_string(),
                    extension: self.nodes[i].id.clone(),
                    index: w,
                    ceiling,
                });
            }
            for p in self.predecessors(i) {
                if let Some(&wp) = table.get(&(fi, p)) {
                    if wp > w {
                        violations.push(Violation::Monotonicity {
                            form: q.to_string(),
                            lower: self.nodes[p].id.clone(),
                            upper: self.nodes[i].id.clone(),
                            lower_index: wp,
                            upper_index: w,
                        });
                    }
                }
            }
        }
        for (q, qp) in self.prime_pairs(&forms) {
            for i in 0..self.nodes.len() {
                let (Ok(j), Ok(jp)) = (self.witt_at_node(&q, i), self.witt_at_node(&qp, i)) else {
                    continue;
                };
                if jp < j || jp > j + 1 {
                    violations.push(Violation::Step {
                        form: q.to_string(),
                        prime: qp.to_string(),
                        extension: self.nodes[i].id.clone(),
                        j,
                        j_prime: jp,
                    });
                }
            }
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if let Construction::FunctionField(q) = &n.construction {
                if q.form().dim() < 2 {
                    continue;
                }
                if let Ok(w) = self.witt_at_node(q.form(), i) {
                    if w == 0 {
                        violations
                            .push(Violation::SelfIsotropy { form: q.form().to_string(), extension: n.id.clone() });
                    }
                }
            }
        }
        ValidationReport { violations }
    }
}

impl FormAlgebra for ExtensionLattice {
    fn declared_prime(&self, id: &str) -> Option<QuadraticForm> {
        match &self.backend {
            Backend::Declared(t) => t.primes.get(id).map(|p| t.forms[p].clone()),
            Backend::Real { .. } => None,
        }
    }

    fn declared_sum(&self, a: &str, b: &str) -> Option<QuadraticForm> {
        match &self.backend {
            Backend::Declared(t) => t.sums.get(&(a.to_string(), b.to_string())).map(|s| t.forms[s].clone()),
            Backend::Real { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Monotonicity { form: String, lower: ExtensionId, upper: ExtensionId, lower_index: u32, upper_index: u32 },
    Ceiling { form: String, extension: ExtensionId, index: u32, ceiling: u32 },
    Step { form: String, prime: String, extension: ExtensionId, j: u32, j_prime: u32 },
    SelfIsotropy { form: String, extension: ExtensionId },
    Missing { form: String, extension: ExtensionId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Monotonicity { form, lower, upper, lower_index, upper_index } => {
                write!(f, "monotonicity: {form} has index {lower_index} over {lower} but {upper_index} over {upper}")
            }
            Violation::Ceiling { form, extension, index, ceiling } => {
                write!(f, "ceiling: {form} has index {index} > {ceiling} over {extension}")
            }
            Violation::Step { form, prime, extension, j, j_prime } => {
                write!(f, "step: j({form})={j}, j({prime})={j_prime} over {extension}")
            }
            Violation::SelfIsotropy { form, extension } => {
                write!(f, "self-isotropy: {form} anisotropic over its own function field {extension}")
            }
            Violation::Missing { form, extension } => {
                write!(f, "missing: no index for {form} over {extension}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}
