//! Exact semi-Mackey and Tambara functors over small finite groups.
//!
//! The crate is layered bottom-up: [`group`] and [`gset`] give the category
//! of finite G-sets, [`mackey`] the monoid-valued functors with their
//! subfunctors and fractions, [`tambara`] the ring-valued ones (Burnside,
//! fixed points, fractions, ideals, quotients), and [`harness`] the
//! verification suites driven by the `tlab` binary.

pub mod decision;
pub mod error;
pub mod group;
pub mod gset;
pub mod harness;
pub mod lattice;
pub mod mackey;
pub mod ring;
pub mod tambara;

pub use decision::{Decision, Tally};
pub use error::{Error, Result};
pub use group::{FiniteGroup, GroupSpec, Subgroup, SubgroupId};
