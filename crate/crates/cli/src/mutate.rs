//! Seeded single-entry corruptions of a Witt table, one per invariant family.

use std::collections::{BTreeMap, HashMap};

use quadpic::fieldmodel::{ConstructionEntry, ModelDocument};
use rand::seq::IndexedRandom;
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutationKind {
    Ceiling,
    Monotonicity,
    Step,
    SelfIsotropy,
}

impl MutationKind {
    pub const ALL: [MutationKind; 4] =
        [MutationKind::Ceiling, MutationKind::Monotonicity, MutationKind::Step, MutationKind::SelfIsotropy];

    pub fn name(self) -> &'static str {
        match self {
            MutationKind::Ceiling => "ceiling",
            MutationKind::Monotonicity => "monotonicity",
            MutationKind::Step => "step",
            MutationKind::SelfIsotropy => "self_isotropy",
        }
    }
}

/// A corrupted copy of `doc`, or `None` if the table has nothing of this kind to corrupt.
pub fn mutate(doc: &ModelDocument, kind: MutationKind, rng: &mut impl Rng) -> Option<ModelDocument> {
    let dims: BTreeMap<&str, u32> = doc.forms.iter().map(|f| (f.id.as_str(), f.dim)).collect();
    let parent: BTreeMap<&str, Option<&str>> =
        doc.extensions.iter().map(|e| (e.id.as_str(), e.parent.as_deref())).collect();
    let slots: HashMap<(&str, &str), usize> =
        doc.witt.iter().enumerate().map(|(i, w)| ((w.form.as_str(), w.extension.as_str()), i)).collect();
    let position = |f: &str, e: &str| slots.get(&(f, e)).copied();

    let (slot, value) = match kind {
        MutationKind::Ceiling => {
            let i = rng.random_range(0..doc.witt.len().max(1));
            let w = doc.witt.get(i)?;
            (i, dims.get(w.form.as_str())? / 2 + 1)
        }
        MutationKind::Monotonicity => {
            // Raise the parent entry strictly above the child.
            let cands: Vec<(usize, u32)> = doc
                .witt
                .iter()
                .filter_map(|w| {
                    let p = (*parent.get(w.extension.as_str())?)?;
                    Some((position(&w.form, p)?, w.index + 1))
                })
                .collect();
            *cands.choose(rng)?
        }
        MutationKind::Step => {
            // Push the prime two above the form.
            let cands: Vec<(usize, u32)> = doc
                .forms
                .iter()
                .filter_map(|f| f.prime_of.as_ref().map(|of| (of.as_str(), f.id.as_str())))
                .flat_map(|(q, qp)| doc.extensions.iter().map(move |e| (q, qp, e.id.as_str())))
                .filter_map(|(q, qp, e)| Some((position(qp, e)?, doc.witt[position(q, e)?].index + 2)))
                .collect();
            *cands.choose(rng)?
        }
        MutationKind::SelfIsotropy => {
            let cands: Vec<usize> = doc
                .extensions
                .iter()
                .filter_map(|e| match &e.construction {
                    ConstructionEntry::FunctionFieldOf(f) => position(f, &e.id),
                    _ => None,
                })
                .collect();
            (*cands.choose(rng)?, 0)
        }
    };
    let mut doc = doc.clone();
    doc.witt[slot].index = value;
    Some(doc)
}
