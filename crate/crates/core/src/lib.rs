//! Exact computations in the subgroup of the motivic Picard group generated
//! by reduced motives of affine quadrics.
//!
//! Elements are evaluated through the functors `Φ^E` over a finite lattice
//! of field extensions. Two independent evaluators are provided: closed
//! Witt-index sums ([`phi`]) and the Grassmannian tower read-off
//! ([`cechtower`]).

pub mod cechtower;
pub mod error;
pub mod fieldmodel;
pub mod motdecomp;
pub mod phi;
pub mod picgroup;
pub mod qform;

pub use error::{Error, Result};
pub use fieldmodel::{ExtensionId, ExtensionLattice, Grassmannian, Level, ModelDocument, ValidationReport, Violation};
pub use motdecomp::{Decomposition, DecompositionRegistry, GrassmannianKey, IndecomposableClass, Summand, SummandKind};
pub use phi::{PhiFingerprint, TateTwist};
pub use picgroup::{PicContext, PicElement};
pub use qform::{ProjectiveQuadric, QuadraticForm, Signature};
