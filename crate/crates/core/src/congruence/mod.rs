//! Congruence constructions: explicit `S(4)` subgroups of `PSL(2, Z/p)`,
//! non-conjugacy of `K` and `τ(K)`, and the Sunada triple built from them
//! inside `PSL(2, Z/14p)`.

mod fp2;
mod fusion;
mod s4;
mod triple;

pub use fp2::Fp2;
pub use fusion::{validate_fusion, FusedClass, FusionModel, FusionValidation};
pub use s4::{
    build_s4_diagonal, build_s4_mod_p, centralizer_form_check, choose_beta_gamma,
    smallest_non_residue, verify_nonconjugate_tau, verify_nonconjugate_tau_d, CentralizerForm,
    DiagonalReplay, FixedPointCheck, NonConjugacyCertificate, Relation, S4Construction,
    S4DiagonalConstruction, SubgroupSummary, TwoSignReplay,
};
pub use triple::{
    assemble_from_inputs, congruence_surface_invariants, modular_generators, torsion_free_check,
    ClassCheck, CongruenceSubgroup, CongruenceTriple, CosetGraph, NonIsometry, SurfaceInvariants,
    TorsionReport, TripleInputs,
};

use crate::error::Result;
use crate::modp::ProjMatrix;
use crate::psl168::tau;

/// The `S(4)` subgroup `K7 ⊂ PSL(2, Z/7)` from the `p = 7` construction and
/// its image `τ(K7)`, as element lists.
pub fn k7_pair() -> Result<(Vec<ProjMatrix>, Vec<ProjMatrix>)> {
    let s = build_s4_mod_p(7)?;
    let image = s
        .k_elements
        .iter()
        .map(|x| ProjMatrix::canonical(tau(x.rep()).expect("2×2")))
        .collect();
    Ok((s.k_elements, image))
}

/// The triple for a prime `p ≡ 7 (mod 8)`, `p ≠ 7`: `H1 = K7`, `H2 = τ(K7)`
/// in the mod-7 factor and `K` from [`build_s4_mod_p`] in the mod-`p` factor.
pub fn assemble_congruence_triple(k: &S4Construction) -> Result<CongruenceTriple> {
    let (h1, h2) = k7_pair()?;
    assemble_from_inputs(&TripleInputs {
        p: k.p,
        h1_mod7: h1,
        h2_mod7: h2,
        k: k.k_elements.clone(),
    })
}

/// `P(SL(2,Z/2) × Ĥ1 × K̂)`: the triple's first subgroup without the
/// restriction to the level-2 kernel.
pub fn unrestricted_subgroup(triple: &CongruenceTriple) -> Result<CongruenceSubgroup> {
    let sl2 = crate::group::special_linear(2)?;
    let n = triple.modulus;
    let p = triple.p;
    let mut mod7 = Vec::new();
    let mut modp = Vec::new();
    for x in triple.h1.elements() {
        let r = x.rep();
        mod7.push(r.reduce_mod(7)?);
        modp.push(r.reduce_mod(p)?);
    }
    for v in [&mut mod7, &mut modp] {
        let neg: Vec<_> = v.iter().map(|m| m.negate()).collect();
        v.extend(neg);
        v.sort();
        v.dedup();
    }
    let out = CongruenceSubgroup::from_components(&[sl2.elements(), &mod7, &modp])?;
    debug_assert_eq!(out.modulus(), n);
    Ok(out)
}
