//! Explicitly enumerated finite groups.
//!
//! A [`GroupTable`] stores every element once, with the identity at index 0,
//! and answers products through a hash index. Tables of a few million
//! elements are practical; nothing here uses presentations.

mod library;
mod perm;
mod product;

pub use library::{looks_like_s4, order24_library, Fingerprint, LibraryGroup};
pub use perm::{Metacyclic, Perm};
pub(crate) use product::crt_combine;
pub use product::{
    crt_idempotents, product_group, projective_special_linear, special_linear, trivial_group,
};

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::modp::{ModMatrix, ProjMatrix};

/// Default cap on the number of elements produced by a closure.
pub const DEFAULT_MAX_GROUP_SIZE: usize = 5_000_000;

/// Anything that can be multiplied, inverted and hashed.
pub trait GroupElement: Clone + Eq + Hash + Ord + Debug + Send + Sync {
    fn op(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
    /// Identity of the group this element lives in.
    fn identity_like(&self) -> Self;
    /// Reject pairs that cannot be multiplied (different modulus, degree, ...).
    fn check_compatible(&self, other: &Self) -> Result<()>;
}

impl GroupElement for ModMatrix {
    fn op(&self, other: &Self) -> Self {
        self.mul_unchecked(other)
    }

    fn inverse(&self) -> Self {
        ModMatrix::inverse(self).expect("group elements are invertible")
    }

    fn identity_like(&self) -> Self {
        ModMatrix::identity(self.modulus(), self.dim())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        self.checked_mul(other).map(|_| ())
    }
}

impl GroupElement for ProjMatrix {
    fn op(&self, other: &Self) -> Self {
        ProjMatrix::canonical(self.rep().mul_unchecked(other.rep()))
    }

    fn inverse(&self) -> Self {
        ProjMatrix::inverse(self)
    }

    fn identity_like(&self) -> Self {
        ProjMatrix::canonical(ModMatrix::identity(self.modulus(), self.rep().dim()))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        self.rep().checked_mul(other.rep()).map(|_| ())
    }
}

/// Element count per element order.
pub type OrderStats = BTreeMap<usize, usize>;

#[derive(Clone, Debug)]
pub struct GroupTable<E> {
    elements: Vec<E>,
    index: FxHashMap<E, u32>,
    inverses: Vec<u32>,
    generators: Vec<u32>,
}

/// Closure of `gens` under multiplication, in breadth-first order.
///
/// Fails if the generators are mutually incompatible or the closure grows
/// beyond `limit` elements.
pub fn generate_group<E: GroupElement>(gens: &[E], limit: usize) -> Result<GroupTable<E>> {
    let first = gens
        .first()
        .ok_or_else(|| invalid("empty generator list"))?;
    for g in gens {
        first.check_compatible(g)?;
    }
    let identity = first.identity_like();
    let mut elements = vec![identity.clone()];
    let mut index = FxHashMap::default();
    index.insert(identity, 0u32);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in gens {
            let next = elements[i].op(g);
            if !index.contains_key(&next) {
                if elements.len() >= limit {
                    return Err(Error::SizeLimit { limit });
                }
                index.insert(next.clone(), elements.len() as u32);
                queue.push_back(elements.len());
                elements.push(next);
            }
        }
    }
    let mut table = GroupTable::assemble(elements, index);
    table.generators = gens
        .iter()
        .map(|g| table.index_of(g).unwrap() as u32)
        .collect();
    Ok(table)
}

impl<E: GroupElement> GroupTable<E> {
    /// Build from a complete element list. The identity must be present;
    /// it is moved to index 0. Closure is verified on the generators.
    pub fn from_elements(mut elements: Vec<E>, generators: &[E]) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| invalid("empty element list"))?
            .clone();
        let identity = first.identity_like();
        let pos = elements
            .iter()
            .position(|e| *e == identity)
            .ok_or_else(|| invalid("element list lacks the identity"))?;
        elements.swap(0, pos);
        let mut index = FxHashMap::default();
        index.reserve(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i as u32).is_some() {
                return Err(invalid(format!("duplicate element {e:?}")));
            }
        }
        let mut table = Self::assemble(elements, index);
        table.generators = generators
            .iter()
            .map(|g| {
                table
                    .index_of(g)
                    .map(|i| i as u32)
                    .ok_or_else(|| invalid(format!("generator {g:?} not in element list")))
            })
            .collect::<Result<_>>()?;
        let closed = (0..table.order()).into_par_iter().all(|i| {
            table.generators.iter().all(|&g| {
                table
                    .index_of(&table.elements[i].op(&table.elements[g as usize]))
                    .is_some()
            })
        });
        if !closed {
            return Err(invalid("element list is not closed under the generators"));
        }
        Ok(table)
    }

    fn assemble(elements: Vec<E>, index: FxHashMap<E, u32>) -> Self {
        let inverses = elements.par_iter().map(|e| index[&e.inverse()]).collect();
        GroupTable {
            elements,
            index,
            inverses,
            generators: Vec::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &E {
        &self.elements[i]
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn index_of(&self, e: &E) -> Option<usize> {
        self.index.get(e).map(|&i| i as usize)
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].op(&self.elements[b])] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    /// `g x g⁻¹`
    #[inline]
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn order_statistics(&self) -> OrderStats {
        let orders: Vec<usize> = (0..self.order())
            .into_par_iter()
            .map(|i| self.element_order(i))
            .collect();
        tally(orders)
    }

    /// Indices of elements commuting with every generator.
    pub fn center(&self) -> Vec<usize> {
        let gens = self.effective_generators();
        (0..self.order())
            .filter(|&x| gens.iter().all(|&g| self.mul(g, x) == self.mul(x, g)))
            .collect()
    }

    /// Stored generators, or every element when none were recorded.
    fn effective_generators(&self) -> Vec<usize> {
        if self.generators.is_empty() {
            (0..self.order()).collect()
        } else {
            self.generators.iter().map(|&g| g as usize).collect()
        }
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.effective_generators();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Subgroup generated by all commutators.
    pub fn derived_subgroup(&self) -> Subgroup {
        let n = self.order();
        let mut commutators: Vec<usize> = Vec::new();
        let mut seen = vec![false; n];
        for a in 0..n {
            for b in 0..n {
                let c = self.mul(self.mul(a, b), self.inv(self.mul(b, a)));
                if !seen[c] {
                    seen[c] = true;
                    commutators.push(c);
                }
            }
        }
        Subgroup::generated(self, &commutators)
    }

    /// Conjugacy classes, found by expanding each orbit under conjugation
    /// by the generators.
    pub fn conjugacy_classes(&self) -> Classes {
        let n = self.order();
        let gens = self.effective_generators();
        let mut class_of = vec![u32::MAX; n];
        let mut classes = Vec::new();
        for start in 0..n {
            if class_of[start] != u32::MAX {
                continue;
            }
            let id = classes.len() as u32;
            class_of[start] = id;
            let mut members = vec![start];
            let mut cursor = 0;
            while cursor < members.len() {
                let x = members[cursor];
                cursor += 1;
                for &g in &gens {
                    let y = self.conjugate(g, x);
                    if class_of[y] == u32::MAX {
                        class_of[y] = id;
                        members.push(y);
                    }
                }
            }
            members.sort_unstable();
            classes.push(ConjClass {
                representative: start,
                element_order: self.element_order(start),
                members,
            });
        }
        Classes { classes, class_of }
    }
}

/// Left regular representation on `0..|G|`, evaluated at the generators.
pub fn regular_representation<E: GroupElement>(table: &GroupTable<E>) -> Vec<Perm> {
    table
        .generators()
        .iter()
        .map(|&g| {
            let images = (0..table.order())
                .map(|x| table.mul(g as usize, x) as u32)
                .collect();
            Perm::from_images(images).expect("left multiplication is a bijection")
        })
        .collect()
}

pub(crate) fn tally(values: impl IntoIterator<Item = usize>) -> OrderStats {
    let mut out = OrderStats::new();
    for v in values {
        *out.entry(v).or_default() += 1;
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjClass {
    pub representative: usize,
    pub element_order: usize,
    pub members: Vec<usize>,
}

impl ConjClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

#[derive(Clone, Debug)]
pub struct Classes {
    pub classes: Vec<ConjClass>,
    /// Class id of each element.
    pub class_of: Vec<u32>,
}

impl Classes {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x] as usize
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(ConjClass::size).collect()
    }
}

/// A subgroup of a [`GroupTable`], stored as a sorted index set plus a
/// membership mask.
#[derive(Clone, Debug)]
pub struct Subgroup {
    members: Vec<usize>,
    mask: Vec<bool>,
    generators: Vec<usize>,
}

impl Subgroup {
    /// Smallest subgroup containing `gens`.
    pub fn generated<E: GroupElement>(g: &GroupTable<E>, gens: &[usize]) -> Self {
        let mut mask = vec![false; g.order()];
        mask[0] = true;
        let mut members = vec![0usize];
        let mut cursor = 0;
        while cursor < members.len() {
            let x = members[cursor];
            cursor += 1;
            for &s in gens {
                let y = g.mul(x, s);
                if !mask[y] {
                    mask[y] = true;
                    members.push(y);
                }
            }
        }
        members.sort_unstable();
        Subgroup {
            members,
            mask,
            generators: gens.to_vec(),
        }
    }

    /// Subgroup from an explicit member list; checks closure.
    pub fn from_members<E: GroupElement>(g: &GroupTable<E>, members: &[usize]) -> Result<Self> {
        let mut mask = vec![false; g.order()];
        for &m in members {
            if m >= g.order() {
                return Err(invalid(format!("index {m} out of range")));
            }
            mask[m] = true;
        }
        if !mask[0] {
            return Err(invalid("subset lacks the identity"));
        }
        let mut sorted: Vec<usize> = (0..g.order()).filter(|&i| mask[i]).collect();
        sorted.dedup();
        let closed = sorted
            .par_iter()
            .all(|&a| sorted.iter().all(|&b| mask[g.mul(a, b)]));
        if !closed {
            return Err(invalid("subset is not closed under multiplication"));
        }
        Ok(Subgroup {
            generators: sorted.clone(),
            members: sorted,
            mask,
        })
    }

    /// Subgroup from group elements rather than indices.
    pub fn from_elements<E: GroupElement>(g: &GroupTable<E>, elements: &[E]) -> Result<Self> {
        let idx = elements
            .iter()
            .map(|e| {
                g.index_of(e)
                    .ok_or_else(|| invalid(format!("{e:?} is not in the group")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::generated(g, &idx))
    }

    pub fn whole<E: GroupElement>(g: &GroupTable<E>) -> Self {
        Subgroup {
            members: (0..g.order()).collect(),
            mask: vec![true; g.order()],
            generators: g.generators().iter().map(|&x| x as usize).collect(),
        }
    }

    pub fn trivial<E: GroupElement>(g: &GroupTable<E>) -> Self {
        Self::generated(g, &[])
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.mask.get(x).copied().unwrap_or(false)
    }

    pub fn order_statistics<E: GroupElement>(&self, g: &GroupTable<E>) -> OrderStats {
        tally(self.members.iter().map(|&m| g.element_order(m)))
    }

    /// Members commuting with every member.
    pub fn center<E: GroupElement>(&self, g: &GroupTable<E>) -> Vec<usize> {
        let gens = if self.generators.is_empty() {
            &self.members
        } else {
            &self.generators
        };
        self.members
            .iter()
            .copied()
            .filter(|&x| gens.iter().all(|&s| g.mul(s, x) == g.mul(x, s)))
            .collect()
    }

    /// Image under an arbitrary map of indices (used for automorphisms).
    pub fn map<E: GroupElement>(
        &self,
        g: &GroupTable<E>,
        f: impl Fn(usize) -> usize,
    ) -> Result<Self> {
        let images: Vec<usize> = self.members.iter().map(|&m| f(m)).collect();
        let mut sub = Self::from_members(g, &images)?;
        sub.generators = self.generators.iter().map(|&s| f(s)).collect();
        Ok(sub)
    }

    /// `z H z⁻¹`
    pub fn conjugate_by<E: GroupElement>(&self, g: &GroupTable<E>, z: usize) -> Self {
        self.map(g, |x| g.conjugate(z, x))
            .expect("conjugate of a subgroup is a subgroup")
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }
}

/// Left cosets `gH`, numbered in order of their smallest element.
#[derive(Clone, Debug)]
pub struct CosetSpace {
    coset_of: Vec<u32>,
    reps: Vec<usize>,
    subgroup_order: usize,
}

impl CosetSpace {
    pub fn new<E: GroupElement>(g: &GroupTable<E>, h: &Subgroup) -> Self {
        let n = g.order();
        let mut coset_of = vec![u32::MAX; n];
        let mut reps = Vec::with_capacity(n / h.order().max(1));
        for x in 0..n {
            if coset_of[x] != u32::MAX {
                continue;
            }
            let label = reps.len() as u32;
            reps.push(x);
            for &m in h.members() {
                coset_of[g.mul(x, m)] = label;
            }
        }
        CosetSpace {
            coset_of,
            reps,
            subgroup_order: h.order(),
        }
    }

    pub fn index(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn coset_of(&self, x: usize) -> usize {
        self.coset_of[x] as usize
    }

    pub fn subgroup_order(&self) -> usize {
        self.subgroup_order
    }

    /// Block of group elements forming coset `label`.
    pub fn block(&self, label: usize) -> Vec<usize> {
        (0..self.coset_of.len())
            .filter(|&x| self.coset_of[x] as usize == label)
            .collect()
    }

    /// Left translation by `x` on the coset labels.
    pub fn action<E: GroupElement>(&self, g: &GroupTable<E>, x: usize) -> Result<CosetAction> {
        if x >= g.order() {
            return Err(invalid(format!(
                "element index {x} out of range for a group of order {}",
                g.order()
            )));
        }
        let perm = self
            .reps
            .iter()
            .map(|&r| self.coset_of(g.mul(x, r)) as u32)
            .collect();
        Ok(CosetAction { element: x, perm })
    }
}

/// Permutation of coset labels induced by one group element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetAction {
    pub element: usize,
    pub perm: Vec<u32>,
}

impl CosetAction {
    /// Cycle lengths in decreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        cycle_type(&self.perm)
    }

    pub fn fixed_points(&self) -> usize {
        self.perm
            .iter()
            .enumerate()
            .filter(|&(i, &p)| i == p as usize)
            .count()
    }

    pub fn cycle_count(&self) -> usize {
        self.cycle_type().len()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &CosetAction) -> Vec<u32> {
        other.perm.iter().map(|&j| self.perm[j as usize]).collect()
    }
}

/// Cycle lengths of a permutation of `0..n`, in decreasing order.
pub fn cycle_type(perm: &[u32]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut lengths = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x] as usize;
            len += 1;
        }
        lengths.push(len);
    }
    lengths.sort_unstable_by(|a, b| b.cmp(a));
    lengths
}

/// Outcome of a conjugator search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugacyScan {
    /// Smallest index `z` with `z K1 z⁻¹ = K2`, if any.
    pub witness: Option<usize>,
    /// Number of group elements examined.
    pub scanned: usize,
}

/// Search all of `G` for `z` with `z K1 z⁻¹ = K2`.
///
/// The scan is split across threads; the smallest witness index is
/// returned regardless of scheduling.
pub fn subgroups_conjugate<E: GroupElement>(
    g: &GroupTable<E>,
    k1: &Subgroup,
    k2: &Subgroup,
) -> ConjugacyScan {
    if k1.order() != k2.order() {
        return ConjugacyScan {
            witness: None,
            scanned: 0,
        };
    }
    let gens = if k1.generators().is_empty() {
        k1.members()
    } else {
        k1.generators()
    };
    let witness = (0..g.order())
        .into_par_iter()
        .find_first(|&z| gens.iter().all(|&k| k2.contains(g.conjugate(z, k))));
    ConjugacyScan {
        witness,
        scanned: witness.map_or(g.order(), |w| w + 1),
    }
}
