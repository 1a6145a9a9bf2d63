//! The group of invertible 3×3 matrices over `F2` (order 168), its two
//! classes of index-7 subgroups, and the automorphisms used with them.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::group::{
    generate_group, projective_special_linear, Classes, CosetSpace, GroupTable, OrderStats,
    Subgroup, DEFAULT_MAX_GROUP_SIZE,
};
use crate::modp::{inv_mod, ModMatrix, ProjMatrix};
use crate::sunada::{permutation_character, verify_sunada, SunadaReport};

/// Representatives of the non-identity classes: one of order 2, 3 and 4,
/// and two of order 7 with different characteristic polynomials.
pub fn class_representatives() -> [(&'static str, ModMatrix); 5] {
    [
        ("2", ModMatrix::new(2, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])),
        ("3", ModMatrix::new(2, [[0, 1, 0], [0, 0, 1], [1, 0, 0]])),
        ("4", ModMatrix::new(2, [[1, 1, 0], [0, 1, 1], [0, 0, 1]])),
        ("7a", ModMatrix::new(2, [[1, 1, 1], [1, 1, 0], [0, 1, 1]])),
        ("7b", ModMatrix::new(2, [[1, 0, 1], [1, 1, 1], [1, 1, 0]])),
    ]
}

fn proj(m: ModMatrix) -> ProjMatrix {
    ProjMatrix::new(m).expect("every invertible matrix over F2 has determinant 1")
}

/// `G = GL(3, F2)` with `H1` fixing the first standard column vector and
/// `H2` fixing the first standard row vector.
pub struct FanoTriple {
    pub g: GroupTable<ProjMatrix>,
    pub classes: Classes,
    pub h1: Subgroup,
    pub h2: Subgroup,
}

pub fn build_fano_triple() -> Result<FanoTriple> {
    let gens: Vec<ProjMatrix> = class_representatives()[..2]
        .iter()
        .map(|(_, m)| proj(*m))
        .collect();
    let g = generate_group(&gens, DEFAULT_MAX_GROUP_SIZE)?;
    let classes = g.conjugacy_classes();
    // first column (1,0,0)ᵗ
    let h1: Vec<usize> = (0..g.order())
        .filter(|&i| {
            let m = g.element(i).rep();
            m.get(1, 0) == 0 && m.get(2, 0) == 0
        })
        .collect();
    // first row (1,0,0)
    let h2: Vec<usize> = (0..g.order())
        .filter(|&i| {
            let m = g.element(i).rep();
            m.get(0, 1) == 0 && m.get(0, 2) == 0
        })
        .collect();
    let h1 = Subgroup::from_members(&g, &h1)?;
    let h2 = Subgroup::from_members(&g, &h2)?;
    Ok(FanoTriple { g, classes, h1, h2 })
}

impl FanoTriple {
    pub fn sunada(&self) -> SunadaReport {
        verify_sunada(&self.g, &self.classes, &self.h1, &self.h2)
    }

    pub fn index_of(&self, m: &ModMatrix) -> Option<usize> {
        ProjMatrix::new(*m).ok().and_then(|p| self.g.index_of(&p))
    }

    /// Permutation characters on `G/H1` and `G/H2`, class by class.
    pub fn permutation_characters(&self) -> (Vec<usize>, Vec<usize>) {
        (
            permutation_character(&self.g, &self.classes, &self.h1),
            permutation_character(&self.g, &self.classes, &self.h2),
        )
    }
}

/// `A ↦ (A⁻¹)ᵗ`
pub fn transpose_inverse(m: &ModMatrix) -> Result<ModMatrix> {
    Ok(m.inverse()?.transpose())
}

#[derive(Clone, Debug, Serialize)]
pub struct SwapReport {
    pub image_of_h1_is_h2: bool,
    pub image_of_h2_is_h1: bool,
    /// Every `h ∈ H1` is conjugate in `G` to its image.
    pub images_conjugate: bool,
}

impl SwapReport {
    pub fn holds(&self) -> bool {
        self.image_of_h1_is_h2 && self.image_of_h2_is_h1 && self.images_conjugate
    }
}

fn transpose_inverse_index(t: &FanoTriple, i: usize) -> usize {
    let m = transpose_inverse(t.g.element(i).rep()).expect("invertible");
    t.index_of(&m).expect("closed under transpose-inverse")
}

pub fn verify_swaps_subgroups(t: &FanoTriple) -> SwapReport {
    let image = |h: &Subgroup| {
        let mut v: Vec<usize> = h
            .members()
            .iter()
            .map(|&i| transpose_inverse_index(t, i))
            .collect();
        v.sort_unstable();
        v
    };
    SwapReport {
        image_of_h1_is_h2: image(&t.h1) == t.h2.members(),
        image_of_h2_is_h1: image(&t.h2) == t.h1.members(),
        images_conjugate: t
            .h1
            .members()
            .iter()
            .all(|&i| t.classes.class_of(i) == t.classes.class_of(transpose_inverse_index(t, i))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderClassification {
    pub order: usize,
    /// `det(g + I)` over `F2`.
    pub det_plus_identity: u64,
    /// Label of the listed representative in the same class (`"1"` for the
    /// identity).
    pub class_label: String,
}

pub fn classify_element(t: &FanoTriple, g: usize) -> Result<OrderClassification> {
    if g >= t.g.order() {
        return Err(invalid(format!("element index {g} out of range")));
    }
    let m = t.g.element(g).rep();
    let det_plus_identity = m
        .checked_add(&ModMatrix::identity(2, 3))
        .expect("same shape")
        .det();
    let class = t.classes.class_of(g);
    let class_label = if g == 0 {
        "1".to_string()
    } else {
        class_representatives()
            .iter()
            .find(|(_, r)| t.classes.class_of(t.index_of(r).expect("in G")) == class)
            .map(|(l, _)| l.to_string())
            .ok_or_else(|| invalid("element in no listed class"))?
    };
    Ok(OrderClassification {
        order: t.g.element_order(g),
        det_plus_identity,
        class_label,
    })
}

/// Cycle type of `v ↦ g v` on the seven nonzero column vectors.
pub fn column_vector_cycle_type(m: &ModMatrix) -> Vec<usize> {
    let vectors: Vec<[u64; 3]> = (1..8u64)
        .map(|b| [b & 1, (b >> 1) & 1, (b >> 2) & 1])
        .collect();
    let perm: Vec<u32> = vectors
        .iter()
        .map(|v| {
            let w: [u64; 3] =
                std::array::from_fn(|r| (0..3).map(|c| m.get(r, c) * v[c]).sum::<u64>() % 2);
            vectors.iter().position(|u| *u == w).unwrap() as u32
        })
        .collect();
    crate::group::cycle_type(&perm)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleRow {
    pub order: usize,
    pub elements: usize,
    pub on_h1: Vec<usize>,
    pub on_h2: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleTable {
    pub rows: Vec<CycleRow>,
    /// Every element of a given order has the same cycle type on each side.
    pub uniform_by_order: bool,
    /// Cycle type of `g` on `G/H1` equals that of `(g⁻¹)ᵗ` on `G/H2`, and
    /// the coset action on `G/H1` matches the action on column vectors.
    pub sides_agree: bool,
}

impl CycleTable {
    pub fn to_text(&self) -> String {
        let mut out = String::from("order  elements  on G/H1          on G/H2\n");
        for r in &self.rows {
            let fmt = |c: &[usize]| {
                format!(
                    "({})",
                    c.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
                )
            };
            let _ = writeln!(
                out,
                "{:<6} {:<9} {:<17} {}",
                r.order,
                r.elements,
                fmt(&r.on_h1),
                fmt(&r.on_h2)
            );
        }
        out
    }
}

pub fn cycle_structure_table(t: &FanoTriple) -> CycleTable {
    let c1 = CosetSpace::new(&t.g, &t.h1);
    let c2 = CosetSpace::new(&t.g, &t.h2);
    let mut by_order: BTreeMap<usize, (usize, Vec<usize>, Vec<usize>)> = BTreeMap::new();
    let mut uniform = true;
    let mut sides_agree = true;
    for g in 0..t.g.order() {
        let on1 = c1.action(&t.g, g).expect("in range").cycle_type();
        let on2 = c2.action(&t.g, g).expect("in range").cycle_type();
        let swapped = c2
            .action(&t.g, transpose_inverse_index(t, g))
            .expect("in range")
            .cycle_type();
        sides_agree &= on1 == swapped && on1 == column_vector_cycle_type(t.g.element(g).rep());
        let entry = by_order
            .entry(t.g.element_order(g))
            .or_insert_with(|| (0, on1.clone(), on2.clone()));
        entry.0 += 1;
        uniform &= entry.1 == on1 && entry.2 == on2;
    }
    CycleTable {
        rows: by_order
            .into_iter()
            .map(|(order, (elements, on_h1, on_h2))| CycleRow {
                order,
                elements,
                on_h1,
                on_h2,
            })
            .collect(),
        uniform_by_order: uniform,
        sides_agree,
    }
}

/// `(a b; c d) ↦ (a −b; −c d)`, i.e. conjugation by `diag(−1, 1)`.
pub fn tau(m: &ModMatrix) -> Result<ModMatrix> {
    tau_d(m, -1)
}

/// `(a b; c d) ↦ (a D·b; c/D d)`, i.e. conjugation by `diag(D, 1)`.
pub fn tau_d(m: &ModMatrix, d: i64) -> Result<ModMatrix> {
    if m.dim() != 2 {
        return Err(invalid("tau is defined on 2×2 matrices"));
    }
    let n = m.modulus();
    let dd = d.rem_euclid(n as i64) as u64;
    let d_inv = inv_mod(dd, n).ok_or_else(|| invalid(format!("{d} is not a unit mod {n}")))?;
    ModMatrix::from_entries(
        n,
        2,
        &[
            m.get(0, 0) as i64,
            (dd * m.get(0, 1) % n) as i64,
            (d_inv * m.get(1, 0) % n) as i64,
            m.get(1, 1) as i64,
        ],
    )
}

pub fn tau_proj(m: &ProjMatrix) -> ProjMatrix {
    ProjMatrix::new(tau(m.rep()).expect("2×2")).expect("tau preserves the determinant")
}

/// Smallest-index `z` in `PSL(2, Z/p)` with `z X z⁻¹ = τ(X)` for every `X`,
/// if `τ` is inner there.
pub fn tau_inner_witness(p: u64) -> Result<Option<ProjMatrix>> {
    let g = projective_special_linear(p, DEFAULT_MAX_GROUP_SIZE)?;
    let gens: Vec<usize> = g.generators().iter().map(|&x| x as usize).collect();
    let targets: Vec<usize> = gens
        .iter()
        .map(|&x| g.index_of(&tau_proj(g.element(x))).expect("automorphism"))
        .collect();
    Ok((0..g.order())
        .find(|&z| {
            gens.iter()
                .zip(&targets)
                .all(|(&x, &y)| g.conjugate(z, x) == y)
        })
        .map(|z| *g.element(z)))
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassStatistics {
    pub order: usize,
    pub class_sizes: Vec<usize>,
    pub order_stats: OrderStats,
    pub order7_classes: usize,
}

fn class_statistics(g: &GroupTable<ProjMatrix>, classes: &Classes) -> ClassStatistics {
    let mut class_sizes = classes.sizes();
    class_sizes.sort_unstable();
    ClassStatistics {
        order: g.order(),
        class_sizes,
        order_stats: g.order_statistics(),
        order7_classes: classes
            .classes
            .iter()
            .filter(|c| c.element_order == 7)
            .count(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassStatisticsComparison {
    pub gl32: ClassStatistics,
    pub psl27: ClassStatistics,
    pub matches: bool,
}

/// Compare class data of `GL(3,F2)` and `PSL(2,Z/7)`.
pub fn verify_class_statistics_match(t: &FanoTriple) -> Result<ClassStatisticsComparison> {
    let p = projective_special_linear(7, DEFAULT_MAX_GROUP_SIZE)?;
    let a = class_statistics(&t.g, &t.classes);
    let b = class_statistics(&p, &p.conjugacy_classes());
    let matches = a.order == b.order
        && a.class_sizes == b.class_sizes
        && a.order_stats == b.order_stats
        && a.order7_classes == b.order7_classes;
    Ok(ClassStatisticsComparison {
        gl32: a,
        psl27: b,
        matches,
    })
}
