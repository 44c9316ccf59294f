//! Finite q-matroids over prime fields.
//!
//! Subspaces of `F_q^n` are stored in reduced row echelon form and indexed
//! by a [`lattice::SubspaceLattice`]. Families of subspaces are bitsets over
//! that index. On top of this sit the rank function, the four cryptomorphic
//! presentations, axiom checkers with witnesses, and an exhaustive or sampled
//! search harness for implications between axioms.

pub mod axioms;
pub mod crypto;
pub mod document;
pub mod family;
pub mod fixtures;
pub mod gf;
pub mod lattice;
pub mod qmatroid;
pub mod verify;

pub use axioms::{AxiomId, AxiomKind, AxiomReport, FamilyChecker, Mode, Witness};
pub use family::SubspaceFamily;
pub use gf::FieldOrder;
pub use lattice::{Subspace, SubspaceLattice};
pub use qmatroid::{QMatroid, RankFunction};
