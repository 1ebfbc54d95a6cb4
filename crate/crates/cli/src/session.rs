use std::fmt;
use std::path::Path;

use quadpic::qform::pfister_real;
use quadpic::{ExtensionId, ExtensionLattice, PicContext, QuadraticForm, Signature};

use crate::expr::ParseError;

#[derive(Debug)]
pub enum CliError {
    Io(String, std::io::Error),
    Expr(ParseError),
    Core(quadpic::Error),
}

impl CliError {
    /// Internal disagreement between two computations is a property failure,
    /// everything else is bad input.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(quadpic::Error::Inconsistent(_)) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(path, e) => write!(f, "{path}: {e}"),
            CliError::Expr(e) => write!(f, "expression: {e}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<quadpic::Error> for CliError {
    fn from(e: quadpic::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Expr(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Where forms live: a declared model, or the real backend.
pub enum Backend {
    Real { depth: usize },
    Declared(Box<ExtensionLattice>),
}

impl Backend {
    pub fn load(model: Option<&Path>, depth: usize) -> CliResult<Self> {
        match model {
            None => Ok(Backend::Real { depth }),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
                Ok(Backend::Declared(Box::new(ExtensionLattice::from_json(&text)?)))
            }
        }
    }

    /// `(p,m)` on the real backend, a declared id otherwise.
    pub fn form(&self, lit: &str) -> CliResult<QuadraticForm> {
        let lit = lit.trim();
        match self {
            Backend::Real { .. } => Ok(QuadraticForm::Real(lit.parse::<Signature>()?)),
            Backend::Declared(l) => {
                l.declared_form(lit).cloned().ok_or_else(|| quadpic::Error::UnknownForm(lit.to_string()).into())
            }
        }
    }

    /// Lattice for a command. On the real backend this is the generic
    /// splitting lattice of `forms`, their subforms, and `<<-1>>^r` for
    /// `r <= pfister`, extended along `paths`.
    pub fn lattice(
        &self,
        forms: &[QuadraticForm],
        pfister: u32,
        paths: &[&str],
    ) -> CliResult<(ExtensionLattice, Vec<ExtensionId>)> {
        match self {
            Backend::Declared(l) => {
                let ids = paths
                    .iter()
                    .map(|p| {
                        let id = ExtensionId::new(*p);
                        l.node(&id).map(|_| id)
                    })
                    .collect::<quadpic::Result<Vec<_>>>()?;
                Ok((l.as_ref().clone(), ids))
            }
            Backend::Real { depth } => {
                let mut all = Vec::new();
                for q in forms {
                    let s = q.signature().expect("real form");
                    for p in 0..=s.plus() {
                        for m in 0..=s.minus() {
                            if p + m > 0 {
                                all.push(QuadraticForm::real(p, m)?);
                            }
                        }
                    }
                }
                for r in 1..=pfister {
                    all.push(pfister_real(r as i64)?);
                }
                all.sort();
                all.dedup();
                let mut lattice = ExtensionLattice::real_generic_splitting(&all, *depth)?;
                let ids = paths.iter().map(|p| real_path(&mut lattice, p)).collect::<CliResult<Vec<_>>>()?;
                Ok((lattice, ids))
            }
        }
    }

    pub fn context(&self, forms: &[QuadraticForm], pfister: u32) -> CliResult<PicContext> {
        let (lattice, _) = self.lattice(forms, pfister, &[])?;
        Ok(PicContext::new(lattice)?)
    }
}

/// Resolve `base/(a,b)/...`, adjoining function fields not already present.
fn real_path(lattice: &mut ExtensionLattice, path: &str) -> CliResult<ExtensionId> {
    let id = ExtensionId::new(path.trim());
    if lattice.node(&id).is_ok() {
        return Ok(id);
    }
    let mut rest = path
        .trim()
        .strip_prefix(lattice.base().as_str())
        .ok_or_else(|| quadpic::Error::UnknownExtension(path.into()))?;
    let mut cur = lattice.base().clone();
    while !rest.is_empty() {
        let seg = rest.strip_prefix('/').ok_or_else(|| quadpic::Error::UnknownExtension(path.into()))?;
        let end = seg.find(')').map(|i| i + 1).ok_or_else(|| quadpic::Error::UnknownExtension(path.into()))?;
        let q = QuadraticForm::Real(seg[..end].parse()?);
        cur = lattice.extend_by_function_field(&cur, &q.quadric())?;
        rest = &seg[end..];
    }
    Ok(cur)
}
