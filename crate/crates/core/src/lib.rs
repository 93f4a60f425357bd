//! Computation and verification toolkit for Thompson's group F.
//!
//! * [`words`]: binary words, dyadic rationals and dyadic intervals.
//! * [`element`]: elements as reduced tree diagrams and their calculus.
//! * [`presentation`]: generator words, both presentations, normal forms.
//! * [`abelian`]: the abelianization `F -> Z²` and finite-index certificates.
//! * [`saturation`], [`subgroup`], [`relations`]: bounded saturation of
//!   branch-word equivalences, seeded by subgroup balls or relation schemas.
//! * [`verify`]: replay of the branch-table, slope, closure and index lemmas
//!   over concrete parameter ranges.

pub mod abelian;
pub mod element;
pub mod error;
pub mod io;
pub mod presentation;
pub mod relations;
pub mod saturation;
pub mod subgroup;
pub mod verify;
pub mod words;

pub use abelian::{abelianize, lattice_index, AbelianImage, Lattice2, LatticeIndex};
pub use element::{BranchPair, Element, Endpoint, Side, TreeDiagram};
pub use error::{Error, Result};
pub use presentation::{element_of, generator, normal_form, parse_expression, GroupWord};
pub use saturation::{saturate, WordPartition};
pub use words::{interval_of, Dyadic, DyadicInterval, Word};
