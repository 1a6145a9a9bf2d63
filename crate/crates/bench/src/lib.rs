//! Shared fixtures for the benchmarks.

use sunada_core::congruence::{build_s4_mod_p, S4Construction};
use sunada_core::group::{projective_special_linear, GroupTable, DEFAULT_MAX_GROUP_SIZE};
use sunada_core::ProjMatrix;

pub fn psl(p: u64) -> GroupTable<ProjMatrix> {
    projective_special_linear(p, DEFAULT_MAX_GROUP_SIZE).expect("small prime")
}

pub fn s4(p: u64) -> S4Construction {
    build_s4_mod_p(p).expect("p is 7 mod 8")
}
