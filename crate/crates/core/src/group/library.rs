//! All fifteen groups of order 24, realized as permutation groups.

use serde::Serialize;

use crate::error::Result;
use crate::modp::ModMatrix;

use super::perm::{Metacyclic, Perm};
use super::{
    generate_group, regular_representation, GroupTable, OrderStats, DEFAULT_MAX_GROUP_SIZE,
};

pub struct LibraryGroup {
    pub name: &'static str,
    pub table: GroupTable<Perm>,
}

/// Cheap isomorphism invariants.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Fingerprint {
    pub order: usize,
    pub center_size: usize,
    pub order_stats: Vec<(usize, usize)>,
    pub class_count: usize,
    pub derived_order: usize,
    pub abelian: bool,
}

impl Fingerprint {
    pub fn of<E: super::GroupElement>(g: &GroupTable<E>) -> Self {
        Fingerprint {
            order: g.order(),
            center_size: g.center().len(),
            order_stats: g.order_statistics().into_iter().collect(),
            class_count: g.conjugacy_classes().len(),
            derived_order: g.derived_subgroup().order(),
            abelian: g.is_abelian(),
        }
    }
}

/// The criterion used to recognize the symmetric group on four letters:
/// order 24, trivial center, and one identity, nine involutions, eight
/// elements of order 3 and six of order 4.
pub fn looks_like_s4(order: usize, center_size: usize, stats: &OrderStats) -> bool {
    order == 24 && center_size == 1 && *stats == OrderStats::from([(1, 1), (2, 9), (3, 8), (4, 6)])
}

fn cycle(n: usize) -> Vec<Perm> {
    let points: Vec<u32> = (0..n as u32).collect();
    vec![Perm::from_cycles(n, &[&points]).unwrap()]
}

fn perms(n: usize, gens: &[&[&[u32]]]) -> Vec<Perm> {
    gens.iter()
        .map(|cycles| Perm::from_cycles(n, cycles).unwrap())
        .collect()
}

fn degree(gens: &[Perm]) -> usize {
    gens[0].degree()
}

/// Generators of `A × B` acting on the disjoint union of the point sets.
fn direct(a: &[Perm], b: &[Perm]) -> Vec<Perm> {
    let (da, db) = (degree(a), degree(b));
    a.iter()
        .map(|p| Perm::direct_sum(p, &Perm::identity(db)))
        .chain(b.iter().map(|q| Perm::direct_sum(&Perm::identity(da), q)))
        .collect()
}

fn metacyclic(m: u32, n: u32, r: u32, s: u32) -> Result<Vec<Perm>> {
    let gens = [Metacyclic::a(m, n, r, s)?, Metacyclic::x(m, n, r, s)?];
    Ok(regular_representation(&generate_group(
        &gens,
        DEFAULT_MAX_GROUP_SIZE,
    )?))
}

fn sl23() -> Result<Vec<Perm>> {
    let gens = [
        ModMatrix::new(3, [[1, 1], [0, 1]]),
        ModMatrix::new(3, [[1, 0], [1, 1]]),
    ];
    Ok(regular_representation(&generate_group(
        &gens,
        DEFAULT_MAX_GROUP_SIZE,
    )?))
}

/// One representative of each isomorphism type of group of order 24.
pub fn order24_library() -> Result<Vec<LibraryGroup>> {
    let s3 = perms(3, &[&[&[0, 1, 2]], &[&[0, 1]]]);
    let d8 = perms(4, &[&[&[0, 1, 2, 3]], &[&[1, 3]]]);
    let a4 = perms(4, &[&[&[0, 1, 2]], &[&[0, 1], &[2, 3]]]);
    let s4 = perms(4, &[&[&[0, 1, 2, 3]], &[&[0, 1]]]);
    let q8 = metacyclic(4, 2, 3, 2)?;
    let reflections: Vec<u32> = (0..12).map(|i| (12 - i) % 12).collect();
    let d24 = vec![cycle(12).remove(0), Perm::from_images(reflections)?];
    // Z3 ⋊ D8 where the rotation inverts Z3 and the kernel is a Klein
    // four-group: a fibre product of S3 and D8 over their sign maps.
    let z3_d8 = perms(7, &[&[&[0, 1, 2]], &[&[0, 1], &[3, 4, 5, 6]], &[&[4, 6]]]);

    let specs: Vec<(&'static str, Vec<Perm>)> = vec![
        ("C3 : C8", metacyclic(3, 8, 2, 0)?),
        ("C24", cycle(24)),
        ("SL(2,3)", sl23()?),
        ("Dic6", metacyclic(12, 2, 11, 6)?),
        ("C4 x S3", direct(&cycle(4), &s3)),
        ("D24", d24),
        ("C2 x Dic3", direct(&cycle(2), &metacyclic(3, 4, 2, 0)?)),
        ("C3 : D8", z3_d8),
        ("C12 x C2", direct(&cycle(12), &cycle(2))),
        ("C3 x D8", direct(&cycle(3), &d8)),
        ("C3 x Q8", direct(&cycle(3), &q8)),
        ("S4", s4),
        ("C2 x A4", direct(&cycle(2), &a4)),
        ("C2 x C2 x S3", direct(&direct(&cycle(2), &cycle(2)), &s3)),
        (
            "C6 x C2 x C2",
            direct(&direct(&cycle(6), &cycle(2)), &cycle(2)),
        ),
    ];
    specs
        .into_iter()
        .map(|(name, gens)| {
            Ok(LibraryGroup {
                name,
                table: generate_group(&gens, DEFAULT_MAX_GROUP_SIZE)?,
            })
        })
        .collect()
}
