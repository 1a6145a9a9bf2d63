//! Conjugacy classes of `P(A × B)` described through the classes of the
//! factors `A ⊂ SL(2, Z/a)` and `B ⊂ SL(2, Z/b)`.
//!
//! Conjugation in `A × B` is componentwise, and passing to the quotient by
//! `(−1, −1)` glues the class of `(x, y)` to that of `(−x, −y)`. A fused
//! class is therefore a pair of component classes up to simultaneous
//! negation.

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::group::{product_group, Classes, GroupTable, Subgroup};
use crate::modp::ModMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FusedClass {
    pub a_class: usize,
    pub b_class: usize,
    /// The pair is mapped to itself by simultaneous negation.
    pub self_paired: bool,
    /// Number of elements of `P(A × B)` in the class.
    pub size: usize,
}

pub struct FusionModel<'a> {
    a: &'a GroupTable<ModMatrix>,
    b: &'a GroupTable<ModMatrix>,
    a_classes: Classes,
    b_classes: Classes,
    a_neg: Vec<usize>,
    b_neg: Vec<usize>,
    fused: Vec<FusedClass>,
    lookup: FxHashMap<(usize, usize), usize>,
}

fn negation_on_classes(t: &GroupTable<ModMatrix>, c: &Classes) -> Vec<usize> {
    c.classes
        .iter()
        .map(|k| {
            let x = t.element(k.representative).negate();
            c.class_of(t.index_of(&x).expect("−1 lies in SL(2)"))
        })
        .collect()
}

impl<'a> FusionModel<'a> {
    pub fn new(a: &'a GroupTable<ModMatrix>, b: &'a GroupTable<ModMatrix>) -> Self {
        let a_classes = a.conjugacy_classes();
        let b_classes = b.conjugacy_classes();
        let a_neg = negation_on_classes(a, &a_classes);
        let b_neg = negation_on_classes(b, &b_classes);
        let mut fused = Vec::new();
        let mut lookup = FxHashMap::default();
        for (i, &ni) in a_neg.iter().enumerate() {
            for (j, &nj) in b_neg.iter().enumerate() {
                let partner = (ni, nj);
                if let Some(&k) = lookup.get(&partner) {
                    lookup.insert((i, j), k);
                    continue;
                }
                let self_paired = partner == (i, j);
                let raw = a_classes.classes[i].size() * b_classes.classes[j].size();
                lookup.insert((i, j), fused.len());
                fused.push(FusedClass {
                    a_class: i,
                    b_class: j,
                    self_paired,
                    size: if self_paired { raw / 2 } else { raw },
                });
            }
        }
        FusionModel {
            a,
            b,
            a_classes,
            b_classes,
            a_neg,
            b_neg,
            fused,
            lookup,
        }
    }

    pub fn classes(&self) -> &[FusedClass] {
        &self.fused
    }

    pub fn len(&self) -> usize {
        self.fused.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fused.is_empty()
    }

    /// `|A|·|B|/2`, or `|A|·|B|` when `−1 = 1` in both factors.
    pub fn group_order(&self) -> usize {
        self.fused.iter().map(|c| c.size).sum()
    }

    /// Fused class of the image of `(x, y)`, given element indices.
    pub fn class_of(&self, x: usize, y: usize) -> usize {
        self.lookup[&(self.a_classes.class_of(x), self.b_classes.class_of(y))]
    }

    /// Component representatives of fused class `k`.
    pub fn representative(&self, k: usize) -> (ModMatrix, ModMatrix) {
        let c = &self.fused[k];
        (
            *self
                .a
                .element(self.a_classes.classes[c.a_class].representative),
            *self
                .b
                .element(self.b_classes.classes[c.b_class].representative),
        )
    }

    pub fn element_order(&self, k: usize) -> usize {
        let c = &self.fused[k];
        let oa = self.a_classes.classes[c.a_class].element_order;
        let ob = self.b_classes.classes[c.b_class].element_order;
        let full = num_integer_lcm(oa, ob);
        // the order of ±(x, y) halves when (x, y)^(n/2) = (−1, −1)
        if full.is_multiple_of(2) {
            let (x, y) = self.representative(k);
            let half = (full / 2) as u64;
            if x.pow(half) == ModMatrix::identity(x.modulus(), 2).negate()
                && y.pow(half) == ModMatrix::identity(y.modulus(), 2).negate()
            {
                return full / 2;
            }
        }
        full
    }

    /// Elements of `P(HA × HB)` in fused class `k`, for subgroups that
    /// contain `−1` in each factor.
    pub fn intersection(&self, k: usize, ha: &Subgroup, hb: &Subgroup) -> Result<usize> {
        self.check_contains_minus_one(ha, hb)?;
        let c = &self.fused[k];
        let na = self.count_in(ha, c.a_class, true);
        let nb = self.count_in(hb, c.b_class, false);
        Ok(if c.self_paired { na * nb / 2 } else { na * nb })
    }

    fn count_in(&self, h: &Subgroup, class: usize, side_a: bool) -> usize {
        let classes = if side_a {
            &self.a_classes
        } else {
            &self.b_classes
        };
        h.members()
            .iter()
            .filter(|&&x| classes.class_of(x) == class)
            .count()
    }

    fn check_contains_minus_one(&self, ha: &Subgroup, hb: &Subgroup) -> Result<()> {
        for (t, h) in [(self.a, ha), (self.b, hb)] {
            let minus = ModMatrix::identity(t.element(0).modulus(), 2).negate();
            let idx = t.index_of(&minus).expect("−1 lies in SL(2)");
            if !h.contains(idx) {
                return Err(invalid("component subgroup must contain −1"));
            }
        }
        Ok(())
    }

    pub fn a_negation(&self) -> &[usize] {
        &self.a_neg
    }

    pub fn b_negation(&self) -> &[usize] {
        &self.b_neg
    }
}

fn num_integer_lcm(a: usize, b: usize) -> usize {
    let g = crate::modp::gcd(a as u64, b as u64) as usize;
    a / g * b
}

/// Comparison of the fused-class model with classes computed directly on
/// the enumerated product.
#[derive(Clone, Debug, Serialize)]
pub struct FusionValidation {
    pub moduli: (u64, u64),
    pub group_order: usize,
    pub brute_force_classes: usize,
    pub model_classes: usize,
    /// Every brute-force class is exactly one fused class.
    pub partition_matches: bool,
    pub sizes_match: bool,
    /// Intersection counts from the model agree with direct counts for the
    /// supplied component subgroups.
    pub intersections_match: bool,
}

impl FusionValidation {
    pub fn holds(&self) -> bool {
        self.brute_force_classes == self.model_classes
            && self.partition_matches
            && self.sizes_match
            && self.intersections_match
    }
}

/// Enumerate `P(A × B)`, compute its classes directly and compare with the
/// model. `ha`, `hb` are generator indices of component subgroups (with
/// `−1` added automatically) used to check intersection counts.
pub fn validate_fusion(
    a: &GroupTable<ModMatrix>,
    b: &GroupTable<ModMatrix>,
    ha: &[usize],
    hb: &[usize],
) -> Result<FusionValidation> {
    let (ma, mb) = (a.element(0).modulus(), b.element(0).modulus());
    let model = FusionModel::new(a, b);
    let product = product_group(&[a, b], 1_000_000)?;
    let classes = product.conjugacy_classes();
    let split = |i: usize| -> (usize, usize) {
        let x = product.element(i).rep();
        let xa = x.reduce_mod(ma).expect("divides");
        let xb = x.reduce_mod(mb).expect("divides");
        (
            a.index_of(&xa).expect("component of the product"),
            b.index_of(&xb).expect("component of the product"),
        )
    };
    let mut brute_to_model: Vec<Option<usize>> = vec![None; classes.len()];
    let mut model_to_brute: Vec<Option<usize>> = vec![None; model.len()];
    let mut partition_matches = true;
    for i in 0..product.order() {
        let (x, y) = split(i);
        let m = model.class_of(x, y);
        let c = classes.class_of(i);
        for (slot, val) in [(&mut brute_to_model[c], m), (&mut model_to_brute[m], c)] {
            match slot {
                None => *slot = Some(val),
                Some(v) if *v == val => {}
                Some(_) => partition_matches = false,
            }
        }
    }
    let sizes_match =
        partition_matches
            && classes.classes.iter().enumerate().all(|(c, k)| {
                brute_to_model[c].is_some_and(|m| model.classes()[m].size == k.size())
            });

    let with_minus = |t: &GroupTable<ModMatrix>, gens: &[usize]| {
        let minus = ModMatrix::identity(t.element(0).modulus(), 2).negate();
        let mut g = gens.to_vec();
        g.push(t.index_of(&minus).expect("−1 lies in SL(2)"));
        Subgroup::generated(t, &g)
    };
    let sa = with_minus(a, ha);
    let sb = with_minus(b, hb);
    let mut direct = vec![0usize; classes.len()];
    for i in 0..product.order() {
        let (x, y) = split(i);
        if sa.contains(x) && sb.contains(y) {
            direct[classes.class_of(i)] += 1;
        }
    }
    let intersections_match = partition_matches
        && (0..classes.len()).all(|c| {
            brute_to_model[c]
                .and_then(|m| model.intersection(m, &sa, &sb).ok())
                .is_some_and(|n| n == direct[c])
        });

    Ok(FusionValidation {
        moduli: (ma, mb),
        group_order: product.order(),
        brute_force_classes: classes.len(),
        model_classes: model.len(),
        partition_matches,
        sizes_match,
        intersections_match,
    })
}
