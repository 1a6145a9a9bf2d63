//! Subgroups of `PSL(2, Z/N)` given as sets of canonical matrices, their
//! coset graphs under `S` and `T`, and the Sunada triple
//! `P(id × SL(2,Z/7) × SL(2,Z/p)) ⊃ P(id × Ĥi × K̂)`.

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::group::crt_combine;
use crate::group::{
    crt_idempotents, cycle_type, special_linear, subgroups_conjugate, ConjugacyScan, GroupTable,
    Subgroup, DEFAULT_MAX_GROUP_SIZE,
};
use crate::modp::{is_prime, ModMatrix, ProjMatrix};
use crate::psl168::tau;

use super::fusion::FusionModel;

/// A finite subgroup of `PSL(2, Z/N)` stored as its set of elements.
#[derive(Clone, Debug)]
pub struct CongruenceSubgroup {
    modulus: u64,
    elements: Vec<ProjMatrix>,
    set: FxHashSet<ProjMatrix>,
}

impl CongruenceSubgroup {
    fn from_set(modulus: u64, set: FxHashSet<ProjMatrix>) -> Self {
        let mut elements: Vec<ProjMatrix> = set.iter().copied().collect();
        elements.sort();
        CongruenceSubgroup {
            modulus,
            elements,
            set,
        }
    }

    /// Closure of `gens` (2×2 determinant-one matrices modulo `modulus`).
    pub fn generated(modulus: u64, gens: &[ModMatrix], limit: usize) -> Result<Self> {
        let gens: Vec<ProjMatrix> = gens
            .iter()
            .map(|g| {
                if g.modulus() != modulus {
                    return Err(Error::ModulusMismatch(modulus, g.modulus()));
                }
                ProjMatrix::new(*g)
            })
            .collect::<Result<_>>()?;
        let identity = ProjMatrix::canonical(ModMatrix::identity(modulus, 2));
        let mut set = FxHashSet::default();
        set.insert(identity);
        let mut frontier = vec![identity];
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = ProjMatrix::canonical(*x.rep() * *g.rep());
                if set.insert(y) {
                    if set.len() > limit {
                        return Err(Error::SizeLimit { limit });
                    }
                    frontier.push(y);
                }
            }
        }
        Ok(Self::from_set(modulus, set))
    }

    /// Image of `H_1 × … × H_r` for subgroups `H_i ⊂ SL(2, Z/m_i)` with
    /// pairwise coprime `m_i`, each given by its full element list.
    pub fn from_components(components: &[&[ModMatrix]]) -> Result<Self> {
        let moduli: Vec<u64> = components
            .iter()
            .map(|c| {
                c.first()
                    .map(ModMatrix::modulus)
                    .ok_or_else(|| invalid("empty component"))
            })
            .collect::<Result<_>>()?;
        let idem = crt_idempotents(&moduli)?;
        let total: u64 = moduli.iter().product();
        let mut set = FxHashSet::default();
        let mut parts: Vec<&ModMatrix> = components.iter().map(|c| &c[0]).collect();
        let sizes: Vec<usize> = components.iter().map(|c| c.len()).collect();
        let count: usize = sizes.iter().product();
        for mut t in 0..count {
            for (i, c) in components.iter().enumerate().rev() {
                parts[i] = &c[t % sizes[i]];
                t /= sizes[i];
            }
            set.insert(ProjMatrix::new(crt_combine(&parts, &idem, total))?);
        }
        Ok(Self::from_set(total, set))
    }

    pub fn trivial(modulus: u64) -> Self {
        let mut set = FxHashSet::default();
        set.insert(ProjMatrix::canonical(ModMatrix::identity(modulus, 2)));
        Self::from_set(modulus, set)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[ProjMatrix] {
        &self.elements
    }

    pub fn contains(&self, x: &ProjMatrix) -> bool {
        self.set.contains(x)
    }

    /// Smallest element of the left coset `xH`.
    pub fn coset_label(&self, x: &ModMatrix) -> ProjMatrix {
        self.elements
            .iter()
            .map(|h| ProjMatrix::canonical(*x * *h.rep()))
            .min()
            .expect("subgroups are non-empty")
    }

    /// Every element reduces to `±1` modulo 2.
    pub fn trivial_mod_2(&self) -> bool {
        self.modulus.is_multiple_of(2)
            && self
                .elements
                .iter()
                .all(|x| x.rep().reduce_mod(2).is_ok_and(|r| r.is_identity()))
    }
}

/// `S = (0 1; −1 0)` and `T = (1 1; 0 1)` modulo `n`.
pub fn modular_generators(n: u64) -> [ModMatrix; 2] {
    [
        ModMatrix::new(n, [[0, 1], [-1, 0]]),
        ModMatrix::new(n, [[1, 1], [0, 1]]),
    ]
}

/// Left cosets `xH` reachable from `H` under left multiplication by the
/// generators, with the permutation each generator induces.
#[derive(Clone, Debug)]
pub struct CosetGraph {
    reps: Vec<ModMatrix>,
    actions: Vec<Vec<u32>>,
}

impl CosetGraph {
    pub fn build(h: &CongruenceSubgroup, gens: &[ModMatrix], limit: usize) -> Result<Self> {
        for g in gens {
            if g.modulus() != h.modulus() {
                return Err(Error::ModulusMismatch(h.modulus(), g.modulus()));
            }
        }
        let id = ModMatrix::identity(h.modulus(), 2);
        let mut labels: FxHashMap<ProjMatrix, u32> = FxHashMap::default();
        labels.insert(h.coset_label(&id), 0);
        let mut reps = vec![id];
        let mut actions = vec![Vec::<u32>::new(); gens.len()];
        let mut frontier = vec![0u32];
        while !frontier.is_empty() {
            let images: Vec<(u32, usize, ModMatrix, ProjMatrix)> = frontier
                .par_iter()
                .flat_map_iter(|&c| {
                    let x = reps[c as usize];
                    gens.iter().enumerate().map(move |(k, g)| {
                        let y = *g * x;
                        (c, k, y, h.coset_label(&y))
                    })
                })
                .collect();
            let mut next = Vec::new();
            for (c, k, y, label) in images {
                let target = *labels.entry(label).or_insert_with(|| {
                    reps.push(y);
                    next.push((reps.len() - 1) as u32);
                    (reps.len() - 1) as u32
                });
                let act = &mut actions[k];
                if act.len() <= c as usize {
                    act.resize(c as usize + 1, u32::MAX);
                }
                act[c as usize] = target;
            }
            if reps.len() > limit {
                return Err(Error::SizeLimit { limit });
            }
            frontier = next;
        }
        for act in &mut actions {
            act.resize(reps.len(), u32::MAX);
            debug_assert!(act.iter().all(|&v| v != u32::MAX));
        }
        Ok(CosetGraph { reps, actions })
    }

    pub fn index(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[ModMatrix] {
        &self.reps
    }

    pub fn action(&self, k: usize) -> &[u32] {
        &self.actions[k]
    }

    /// Cosets `yH` with `y⁻¹ r y ∈ H`, i.e. fixed by `r`.
    pub fn fixed_points(&self, h: &CongruenceSubgroup, r: &ModMatrix) -> usize {
        self.reps
            .par_iter()
            .filter(|y| {
                let yi = y.inverse().expect("determinant one");
                h.contains(&ProjMatrix::canonical(yi * *r * **y))
            })
            .count()
    }
}

fn compose(outer: &[u32], inner: &[u32]) -> Vec<u32> {
    inner.iter().map(|&i| outer[i as usize]).collect()
}

fn fixed(perm: &[u32]) -> usize {
    perm.iter()
        .enumerate()
        .filter(|&(i, &v)| i == v as usize)
        .count()
}

#[derive(Clone, Debug, Serialize)]
pub struct TorsionReport {
    pub modulus: u64,
    /// `H` is trivial modulo 2, while `S`, `ST` and `(ST)²` are not, so no
    /// conjugate of them lies in `H`.
    pub component_argument: bool,
    /// Cosets fixed by `S`, `ST` and `(ST)²`.
    pub fixed_points: [usize; 3],
    pub torsion_free: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SurfaceInvariants {
    pub index: usize,
    pub cusps: usize,
    pub genus: usize,
    /// Lengths of the `T`-cycles (cusp widths).
    pub cusp_widths: Vec<usize>,
}

fn torsion_from_graph(h: &CongruenceSubgroup, g: &CosetGraph) -> TorsionReport {
    let (s, t) = (g.action(0), g.action(1));
    let st = compose(s, t);
    let st2 = compose(&st, &st);
    let fixed_points = [fixed(s), fixed(&st), fixed(&st2)];
    let n = h.modulus();
    let [sm, tm] = modular_generators(n);
    let stm = sm * tm;
    let component_argument = h.trivial_mod_2()
        && [sm, stm, stm * stm]
            .iter()
            .all(|x| !x.reduce_mod(2).expect("even modulus").is_identity());
    TorsionReport {
        modulus: n,
        component_argument,
        fixed_points,
        torsion_free: fixed_points == [0, 0, 0],
    }
}

/// Whether the preimage of `H` in `PSL(2, Z)` is torsion free.
pub fn torsion_free_check(h: &CongruenceSubgroup, limit: usize) -> Result<TorsionReport> {
    let g = CosetGraph::build(h, &modular_generators(h.modulus()), limit)?;
    Ok(torsion_from_graph(h, &g))
}

/// Index, cusp count and genus of the surface attached to `H`; refuses
/// when the preimage of `H` has torsion.
pub fn congruence_surface_invariants(
    h: &CongruenceSubgroup,
    limit: usize,
) -> Result<(SurfaceInvariants, TorsionReport)> {
    let g = CosetGraph::build(h, &modular_generators(h.modulus()), limit)?;
    let torsion = torsion_from_graph(h, &g);
    if !torsion.torsion_free {
        return Err(Error::Precondition(format!(
            "the subgroup has torsion (S, ST, (ST)² fix {:?} cosets); the quotient is an orbifold",
            torsion.fixed_points
        )));
    }
    let n = g.index();
    let cusp_widths = cycle_type(g.action(1));
    let cusps = cusp_widths.len();
    // 2 − 2g − c = −n/6
    let twice_genus = (n / 6 + 2)
        .checked_sub(cusps)
        .filter(|_| n % 6 == 0)
        .ok_or_else(|| invalid("Euler characteristic is inconsistent with the cusp count"))?;
    if twice_genus % 2 != 0 {
        return Err(invalid(
            "Euler characteristic is inconsistent with the cusp count",
        ));
    }
    Ok((
        SurfaceInvariants {
            index: n,
            cusps,
            genus: twice_genus / 2,
            cusp_widths,
        },
        torsion,
    ))
}

/// Data for the triple: two subgroups of `PSL(2, Z/7)` and `K ⊂ PSL(2, Z/p)`.
#[derive(Clone, Debug)]
pub struct TripleInputs {
    pub p: u64,
    pub h1_mod7: Vec<ProjMatrix>,
    pub h2_mod7: Vec<ProjMatrix>,
    pub k: Vec<ProjMatrix>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassCheck {
    pub mod7_rep: ModMatrix,
    pub modp_rep: ModMatrix,
    pub element_order: usize,
    pub class_size: usize,
    /// Cosets of `H̃1`, `H̃2` fixed by the representative.
    pub fixed: (usize, usize),
    /// `|[r] ∩ H̃1|`, `|[r] ∩ H̃2|` from the component classes.
    pub intersection: (usize, usize),
    /// `fixed · |[r]| = index · |[r] ∩ H̃|` on both sides.
    pub counts_consistent: bool,
}

impl ClassCheck {
    pub fn holds(&self) -> bool {
        self.fixed.0 == self.fixed.1
            && self.intersection.0 == self.intersection.1
            && self.counts_consistent
    }
}

/// Componentwise certificate that no isometry (conjugation, `τ`, or both)
/// carries `H̃1` to `H̃2`.
#[derive(Clone, Debug, Serialize)]
pub struct NonIsometry {
    /// Conjugation: the mod-7 component would conjugate `H1` to `H2`.
    pub mod7_scan: ConjugacyScan,
    /// `τ` or `τ` composed with conjugation: the mod-`p` component would
    /// conjugate `τ(K)` to `K`.
    pub modp_tau_scan: ConjugacyScan,
}

impl NonIsometry {
    pub fn holds(&self) -> bool {
        self.mod7_scan.witness.is_none() && self.modp_tau_scan.witness.is_none()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CongruenceTriple {
    pub p: u64,
    pub modulus: u64,
    /// `|G|` as the sum of fused class sizes.
    pub group_order: usize,
    /// `[G : H̃i] · |H̃i|`, counted independently from the coset graph.
    pub group_order_by_cosets: (usize, usize),
    pub subgroup_order: (usize, usize),
    pub index: (usize, usize),
    pub classes: Vec<ClassCheck>,
    pub sunada: bool,
    pub non_isometry: NonIsometry,
    #[serde(skip)]
    pub h1: CongruenceSubgroup,
    #[serde(skip)]
    pub h2: CongruenceSubgroup,
}

fn preimage(t: &GroupTable<ModMatrix>, proj: &[ProjMatrix]) -> Result<(Subgroup, Vec<ModMatrix>)> {
    let lifts: Vec<ModMatrix> = proj
        .iter()
        .flat_map(|x| [*x.rep(), x.rep().negate()])
        .collect();
    Ok((Subgroup::from_elements(t, &lifts)?, lifts))
}

fn psl_subgroup(table: &GroupTable<ProjMatrix>, elems: &[ProjMatrix]) -> Result<Subgroup> {
    Subgroup::from_elements(table, elems)
}

pub fn assemble_from_inputs(inputs: &TripleInputs) -> Result<CongruenceTriple> {
    let p = inputs.p;
    if !is_prime(p) || p == 2 || p == 7 {
        return Err(invalid(format!(
            "p = {p} must be a prime other than 2 and 7"
        )));
    }
    for (m, set) in [(7, &inputs.h1_mod7), (7, &inputs.h2_mod7), (p, &inputs.k)] {
        if set.iter().any(|x| x.modulus() != m) {
            return Err(invalid(format!("component subgroup is not modulo {m}")));
        }
    }
    let n = 14 * p;
    let sl7 = special_linear(7)?;
    let slp = special_linear(p)?;
    let (hat1, lifts1) = preimage(&sl7, &inputs.h1_mod7)?;
    let (hat2, lifts2) = preimage(&sl7, &inputs.h2_mod7)?;
    let (hat_k, lifts_k) = preimage(&slp, &inputs.k)?;

    let id2 = [ModMatrix::identity(2, 2)];
    let h1 = CongruenceSubgroup::from_components(&[&id2, &lifts1, &lifts_k])?;
    let h2 = CongruenceSubgroup::from_components(&[&id2, &lifts2, &lifts_k])?;

    let idem = crt_idempotents(&[2, 7, p])?;
    let i2 = ModMatrix::identity(2, 2);
    let i7 = ModMatrix::identity(7, 2);
    let ip = ModMatrix::identity(p, 2);
    let lift = |a: &ModMatrix, b: &ModMatrix| crt_combine(&[&i2, a, b], &idem, n);
    let mut gens = Vec::new();
    for &g in sl7.generators() {
        gens.push(lift(sl7.element(g as usize), &ip));
    }
    for &g in slp.generators() {
        gens.push(lift(&i7, slp.element(g as usize)));
    }
    let g1 = CosetGraph::build(&h1, &gens, DEFAULT_MAX_GROUP_SIZE)?;
    let g2 = CosetGraph::build(&h2, &gens, DEFAULT_MAX_GROUP_SIZE)?;

    let fusion = FusionModel::new(&sl7, &slp);
    let group_order = fusion.group_order();
    let classes: Vec<ClassCheck> = (0..fusion.len())
        .map(|k| -> Result<ClassCheck> {
            let (a, b) = fusion.representative(k);
            let r = lift(&a, &b);
            let fixed = (g1.fixed_points(&h1, &r), g2.fixed_points(&h2, &r));
            let intersection = (
                fusion.intersection(k, &hat1, &hat_k)?,
                fusion.intersection(k, &hat2, &hat_k)?,
            );
            let size = fusion.classes()[k].size;
            let counts_consistent = fixed.0 * size == g1.index() * intersection.0
                && fixed.1 * size == g2.index() * intersection.1;
            Ok(ClassCheck {
                mod7_rep: a,
                modp_rep: b,
                element_order: fusion.element_order(k),
                class_size: size,
                fixed,
                intersection,
                counts_consistent,
            })
        })
        .collect::<Result<_>>()?;
    let sunada = classes.iter().all(ClassCheck::holds);

    let psl7 = crate::group::projective_special_linear(7, DEFAULT_MAX_GROUP_SIZE)?;
    let pslp = crate::group::projective_special_linear(p, DEFAULT_MAX_GROUP_SIZE)?;
    let mod7_scan = subgroups_conjugate(
        &psl7,
        &psl_subgroup(&psl7, &inputs.h1_mod7)?,
        &psl_subgroup(&psl7, &inputs.h2_mod7)?,
    );
    let tau_k: Vec<ProjMatrix> = inputs
        .k
        .iter()
        .map(|x| ProjMatrix::canonical(tau(x.rep()).expect("2×2")))
        .collect();
    let modp_tau_scan = subgroups_conjugate(
        &pslp,
        &psl_subgroup(&pslp, &tau_k)?,
        &psl_subgroup(&pslp, &inputs.k)?,
    );
    if modp_tau_scan.witness.is_some() {
        return Err(invalid(format!(
            "K and τ(K) are conjugate in PSL(2, Z/{p})"
        )));
    }

    Ok(CongruenceTriple {
        p,
        modulus: n,
        group_order,
        group_order_by_cosets: (g1.index() * h1.order(), g2.index() * h2.order()),
        subgroup_order: (h1.order(), h2.order()),
        index: (g1.index(), g2.index()),
        classes,
        sunada,
        non_isometry: NonIsometry {
            mod7_scan,
            modp_tau_scan,
        },
        h1,
        h2,
    })
}

impl CongruenceTriple {
    pub fn holds(&self) -> bool {
        self.sunada
            && self.group_order_by_cosets == (self.group_order, self.group_order)
            && self.non_isometry.holds()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_two_kernel_is_thrice_punctured_sphere() {
        let h = CongruenceSubgroup::trivial(2);
        let (inv, torsion) = congruence_surface_invariants(&h, 1000).unwrap();
        assert!(torsion.component_argument);
        assert_eq!((inv.index, inv.cusps, inv.genus), (6, 3, 0));
        assert_eq!(inv.cusp_widths, vec![2, 2, 2]);
    }

    #[test]
    fn full_group_is_refused() {
        let h = CongruenceSubgroup::generated(6, &modular_generators(6), 1000).unwrap();
        assert_eq!(h.order(), 72);
        let err = congruence_surface_invariants(&h, 1000).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        let t = torsion_free_check(&h, 1000).unwrap();
        assert!(!t.torsion_free);
        assert_eq!(t.fixed_points, [1, 1, 1]);
    }

    #[test]
    fn principal_level_seven() {
        // Γ(7): index 168, 24 cusps of width 7, genus 3
        let h = CongruenceSubgroup::trivial(7);
        let (inv, torsion) = congruence_surface_invariants(&h, 1000).unwrap();
        assert!(!torsion.component_argument);
        assert_eq!((inv.index, inv.cusps, inv.genus), (168, 24, 3));
    }

    #[test]
    fn components_glue_by_crt() {
        let i2 = [ModMatrix::identity(2, 2)];
        let sl3 = special_linear(3).unwrap();
        let h = CongruenceSubgroup::from_components(&[&i2, sl3.elements()]).unwrap();
        assert_eq!(h.modulus(), 6);
        assert_eq!(h.order(), 12);
        assert!(h.trivial_mod_2());
    }
}
