//! Induced boundary actions `Γ/Λ × ∂Λ` built from finite-index subgroups of
//! free and finite groups, with replayable certificates that measures on them contract.

pub mod check;
pub mod coset;
pub mod error;
pub mod group;
pub mod measure;
pub mod perm;
pub mod poisson;
pub mod run;
pub mod scenario;
pub mod schreier;
pub mod space;
pub mod word;

pub use coset::{conjugate_subgroup, enumerate_cosets, CosetTable, SubgroupHandle};
pub use error::{Error, Result};
pub use group::{free_ball_size, GroupContext, DEFAULT_BALL_CAP};
pub use measure::{AtomRecord, AtomicMeasure, Weight};
pub use perm::Perm;
pub use schreier::{rewrite_in_basis, schreier_basis, SchreierBasis};
pub use word::{Letter, Word};
