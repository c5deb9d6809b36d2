//! Profinite subgroups of S∞ presented as towers of finite permutation groups.

// a group acting on a single block really does have a one-range block list
#![allow(clippy::single_range_in_vec_init)]

pub mod checker;
pub mod constructions;
pub mod formula;
pub mod group;
pub mod groupfile;
pub mod perm;
pub mod presentation;

pub use checker::{Bindings, CheckError, Verdict};
pub use formula::{parse, Formula, Term};
pub use group::{direct_product, FinitePermGroup};
pub use perm::{PermError, Permutation};
pub use presentation::{ElementHandle, LevelGroup, PresentationError, ProfinitePresentation};
