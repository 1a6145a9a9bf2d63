use proptest::prelude::*;

use sunada_core::group::{
    generate_group, projective_special_linear, CosetSpace, GroupTable, Subgroup,
    DEFAULT_MAX_GROUP_SIZE,
};
use sunada_core::modp::{
    euler_criterion, inv_mod, is_prime, is_quadratic_residue, pow_mod, sqrt_mod,
};
use sunada_core::orbifold::order_from_trace_mod7;
use sunada_core::psl168::build_fano_triple;
use sunada_core::{ModMatrix, ProjMatrix, Residue};

use std::sync::OnceLock;

fn psl27() -> &'static GroupTable<ProjMatrix> {
    static G: OnceLock<GroupTable<ProjMatrix>> = OnceLock::new();
    G.get_or_init(|| projective_special_linear(7, DEFAULT_MAX_GROUP_SIZE).unwrap())
}

fn primes_below(n: u64) -> Vec<u64> {
    (3..n).filter(|&p| is_prime(p)).collect()
}

/// A determinant-one 2×2 matrix mod `p` built from `a, b, c` with `a` a
/// unit: `d = (1 + bc) / a`.
fn sl2(p: u64, a: u64, b: u64, c: u64) -> ModMatrix {
    let a = 1 + a % (p - 1);
    let d = (1 + b * c) % p * inv_mod(a, p).unwrap() % p;
    ModMatrix::new(p, [[a as i64, b as i64], [c as i64, d as i64]])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn projective_canonical_form_ignores_sign(
        pi in 0usize..20, a in 0u64..1000, b in 0u64..1000, c in 0u64..1000,
    ) {
        let p = primes_below(80)[pi];
        let m = sl2(p, a, b % p, c % p);
        let x = ProjMatrix::new(m).unwrap();
        let y = ProjMatrix::new(m.negate()).unwrap();
        prop_assert_eq!(x, y);
        prop_assert!(x.rep() == &m || x.rep() == &m.negate());
        prop_assert!(*x.rep() <= m && *x.rep() <= m.negate());
        prop_assert!(x.checked_mul(&x.inverse()).unwrap().is_identity());
    }

    #[test]
    fn coset_action_is_a_homomorphism(x in 0usize..168, y in 0usize..168, which in 0usize..2) {
        let t = build_fano_triple().unwrap();
        let h = if which == 0 { &t.h1 } else { &t.h2 };
        let cosets = CosetSpace::new(&t.g, h);
        let ax = cosets.action(&t.g, x).unwrap().perm;
        let ay = cosets.action(&t.g, y).unwrap().perm;
        let axy = cosets.action(&t.g, t.g.mul(x, y)).unwrap().perm;
        for k in 0..cosets.index() {
            prop_assert_eq!(axy[k], ax[ay[k] as usize]);
        }
    }

    #[test]
    fn lagrange_for_generated_subgroups(x in 0usize..168, y in 0usize..168) {
        let g = psl27();
        let h = Subgroup::generated(g, &[x, y]);
        prop_assert_eq!(g.order() % h.order(), 0);
        prop_assert_eq!(CosetSpace::new(g, &h).index() * h.order(), g.order());
        prop_assert_eq!(g.order() % g.element_order(x), 0);
    }

    #[test]
    fn euler_criterion_is_multiplicative(pi in 0usize..45, a in 1u64..10_000, b in 1u64..10_000) {
        let p = primes_below(200)[pi];
        prop_assume!(a % p != 0 && b % p != 0);
        prop_assert_eq!(
            euler_criterion(a * b % p, p),
            euler_criterion(a, p) * euler_criterion(b, p)
        );
        let lhs = pow_mod(a % p, (p - 1) / 2, p);
        prop_assert_eq!(lhs == 1, is_quadratic_residue(a % p, p));
    }

    #[test]
    fn square_roots_square_back(pi in 0usize..45, a in 1u64..10_000) {
        let p = primes_below(200)[pi];
        let r = Residue::new(a as i64, p);
        prop_assume!(!r.is_zero());
        let roots = sqrt_mod(r, p).unwrap_or_default();
        if is_quadratic_residue(r.value(), p) {
            prop_assert_eq!(roots.len(), 2);
            for s in roots {
                prop_assert_eq!(s.pow(2), r);
            }
        } else {
            prop_assert!(roots.is_empty());
        }
    }

    #[test]
    fn quadratic_reciprocity(pi in 0usize..45, qi in 0usize..45) {
        let ps = primes_below(200);
        let (p, q) = (ps[pi], ps[qi]);
        prop_assume!(p != q);
        let sign = if p % 4 == 3 && q % 4 == 3 { -1 } else { 1 };
        prop_assert_eq!(euler_criterion(p % q, q) * euler_criterion(q % p, p), sign);
    }

    #[test]
    fn trace_determines_order_mod_7(x in 0usize..168) {
        let g = psl27();
        prop_assert_eq!(order_from_trace_mod7(g.element(x)), g.element_order(x));
    }
}

#[test]
fn trace_dictionary_is_exhaustive() {
    let g = psl27();
    for x in 0..g.order() {
        assert_eq!(order_from_trace_mod7(g.element(x)), g.element_order(x));
    }
}

#[test]
fn residues_fill_half_the_units() {
    for p in primes_below(200) {
        let count = (1..p).filter(|&a| is_quadratic_residue(a, p)).count() as u64;
        assert_eq!(count, (p - 1) / 2, "p = {p}");
        assert_eq!(is_quadratic_residue(p - 1, p), p % 4 == 1);
        assert_eq!(is_quadratic_residue(2, p), p % 8 == 1 || p % 8 == 7);
    }
}

#[test]
fn s4_fingerprint_is_unique_among_order_24() {
    let lib = sunada_core::group::order24_library().unwrap();
    assert_eq!(lib.len(), 15);
    let prints: Vec<_> = lib
        .iter()
        .map(|l| sunada_core::group::Fingerprint::of(&l.table))
        .collect();
    for (i, a) in prints.iter().enumerate() {
        for b in &prints[i + 1..] {
            assert_ne!(a, b);
        }
    }
    let hits: Vec<&str> = lib
        .iter()
        .filter(|l| {
            sunada_core::group::looks_like_s4(
                l.table.order(),
                l.table.center().len(),
                &l.table.order_statistics(),
            )
        })
        .map(|l| l.name)
        .collect();
    assert_eq!(hits, vec!["S4"]);
}

#[test]
fn closure_of_sl2_generators_mod_small_primes() {
    for p in [3u64, 5, 7, 11] {
        let g = generate_group(
            &[
                ProjMatrix::from_rows(p, [[1, 1], [0, 1]]),
                ProjMatrix::from_rows(p, [[1, 0], [1, 1]]),
            ],
            DEFAULT_MAX_GROUP_SIZE,
        )
        .unwrap();
        assert_eq!(g.order() as u64, p * (p * p - 1) / 2);
    }
}
