//! Tower of Grassmannians `G(Q',0), G(Q,0), G(Q',1), G(Q,1), ...` whose
//! last member with a rational point determines `Φ^E(e^q)`.

use crate::error::{Error, Result};
use crate::fieldmodel::{ExtensionId, ExtensionLattice, Grassmannian};
use crate::phi::TateTwist;
use crate::qform::{prime, QuadraticForm};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectorTower {
    form: QuadraticForm,
    members: Vec<Grassmannian>,
}

impl ProjectorTower {
    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn members(&self) -> &[Grassmannian] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `dim(Q')`, which equals `dim(q) - 1`.
    pub fn n_prime(&self) -> i64 {
        self.form.dim() as i64 - 1
    }
}

/// `X_{2t+1} = G(Q',t)`, `X_{2t+2} = G(Q,t)`, length `dim(q)`.
pub fn build_tower(q: &QuadraticForm, model: &ExtensionLattice) -> Result<ProjectorTower> {
    let qp = prime(q, model)?;
    let n = q.dim() as usize;
    let mut members = Vec::with_capacity(n);
    for i in 0..n {
        let t = (i / 2) as u32;
        let g = if i % 2 == 0 { Grassmannian::new(qp.quadric(), t)? } else { Grassmannian::new(q.quadric(), t)? };
        members.push(g);
    }
    Ok(ProjectorTower { form: q.clone(), members })
}

/// Number of leading members with a rational point over `E`.
///
/// Point existence must be downward closed along the tower; a pointed
/// member above an unpointed one means the model is inconsistent.
pub fn active_index(t: &ProjectorTower, e: &ExtensionId, model: &ExtensionLattice) -> Result<usize> {
    let mut active = 0;
    let mut gap = false;
    for (i, g) in t.members.iter().enumerate() {
        if model.has_rational_point(g, e)? {
            if gap {
                return Err(Error::DownwardClosure { form: t.form.to_string(), extension: e.to_string() });
            }
            active = i + 1;
        } else {
            gap = true;
        }
    }
    Ok(active)
}

/// Twist carried by the active slot `i` of a tower of length `n`.
pub fn twist_readoff(i: usize, n: usize, n_prime: i64) -> Result<TateTwist> {
    if i > n {
        return Err(Error::IndexOutOfRange { index: i, max: n });
    }
    let i = i as i64;
    Ok(if i % 2 == 0 { TateTwist::new(i / 2, i) } else { TateTwist::new(n_prime - (i - 1) / 2, 2 * n_prime - i + 2) })
}

/// Tower evaluation of `Φ^E(e^q)`.
pub fn tower_phi(q: &QuadraticForm, e: &ExtensionId, model: &ExtensionLattice) -> Result<TateTwist> {
    let t = build_tower(q, model)?;
    let i = active_index(&t, e, model)?;
    twist_readoff(i, t.len(), t.n_prime())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phi::phi_affine;

    fn form(p: u32, m: u32) -> QuadraticForm {
        QuadraticForm::real(p, m).unwrap()
    }

    #[test]
    fn tower_shapes() {
        let l = ExtensionLattice::real();
        let t = build_tower(&form(1, 1), &l).unwrap();
        let shown: Vec<String> = t.members().iter().map(|g| g.to_string()).collect();
        assert_eq!(shown, ["G((2,1),0)", "G((1,1),0)"]);
        let t = build_tower(&form(3, 1), &l).unwrap();
        let shown: Vec<String> = t.members().iter().map(|g| g.to_string()).collect();
        assert_eq!(shown, ["G((2,3),0)", "G((3,1),0)", "G((2,3),1)", "G((3,1),1)"]);
        let t = build_tower(&form(1, 0), &l).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.members()[0].to_string(), "G((1,1),0)");
    }

    #[test]
    fn readoff_formulas() {
        assert_eq!(twist_readoff(0, 4, 3).unwrap(), TateTwist::ZERO);
        assert_eq!(twist_readoff(4, 4, 3).unwrap(), TateTwist::new(2, 4));
        assert_eq!(twist_readoff(3, 4, 3).unwrap(), TateTwist::new(2, 5));
        assert!(matches!(twist_readoff(5, 4, 3), Err(Error::IndexOutOfRange { index: 5, max: 4 })));
    }

    #[test]
    fn active_index_cases() {
        let l = ExtensionLattice::real();
        let b = l.base().clone();
        // (0,4): q anisotropic, q' = (5,0) anisotropic.
        let t = build_tower(&form(0, 4), &l).unwrap();
        assert_eq!(active_index(&t, &b, &l).unwrap(), 0);
        // (2,2): j = 2, j' = 2.
        let t = build_tower(&form(2, 2), &l).unwrap();
        assert_eq!(active_index(&t, &b, &l).unwrap(), 4);
        // (3,1): j = 1, j' = (2,3) has 2.
        let t = build_tower(&form(3, 1), &l).unwrap();
        assert_eq!(active_index(&t, &b, &l).unwrap(), 3);
    }

    #[test]
    fn one_dimensional_forms() {
        let l = ExtensionLattice::real();
        for q in [form(1, 0), form(0, 1)] {
            assert_eq!(tower_phi(&q, l.base(), &l).unwrap(), phi_affine(&q, l.base(), &l).unwrap());
        }
    }
}
