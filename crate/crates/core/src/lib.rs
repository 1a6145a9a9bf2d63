//! Exact verification of Sunada constructions over finite matrix groups.

pub mod congruence;
pub mod error;
pub mod group;
pub mod modp;
pub mod orbifold;
pub mod psl168;
pub mod sunada;

pub use error::{Error, Result};
pub use group::{generate_group, GroupTable, Subgroup};
pub use modp::{ModMatrix, ProjMatrix, Residue};
