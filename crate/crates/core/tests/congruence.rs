use sunada_core::congruence::{
    assemble_congruence_triple, assemble_from_inputs, build_s4_mod_p,
    congruence_surface_invariants, k7_pair, torsion_free_check, unrestricted_subgroup,
    TripleInputs,
};
use sunada_core::group::DEFAULT_MAX_GROUP_SIZE;

#[test]
fn triple_at_23() {
    let k = build_s4_mod_p(23).unwrap();
    let t = assemble_congruence_triple(&k).unwrap();
    assert_eq!(t.group_order, 2_040_192);
    assert_eq!(t.subgroup_order, (1152, 1152));
    assert_eq!(t.index, (1771, 1771));
    assert!(t.sunada);
    assert!(t.holds(), "{:?}", t.non_isometry);
    assert_eq!(t.non_isometry.mod7_scan.scanned, 168);
    assert_eq!(t.non_isometry.modp_tau_scan.scanned, 6072);

    for h in [&t.h1, &t.h2] {
        let torsion = torsion_free_check(h, DEFAULT_MAX_GROUP_SIZE).unwrap();
        assert!(torsion.torsion_free && torsion.component_argument);
    }
    let (i1, _) = congruence_surface_invariants(&t.h1, DEFAULT_MAX_GROUP_SIZE).unwrap();
    let (i2, _) = congruence_surface_invariants(&t.h2, DEFAULT_MAX_GROUP_SIZE).unwrap();
    println!("{i1:?}");
    assert_eq!(
        (i1.index, i1.cusps, i1.genus),
        (i2.index, i2.cusps, i2.genus)
    );

    let loose = unrestricted_subgroup(&t).unwrap();
    assert_eq!(loose.order(), 6 * 1152);
    assert!(
        !torsion_free_check(&loose, DEFAULT_MAX_GROUP_SIZE)
            .unwrap()
            .torsion_free
    );
}

#[test]
fn equal_slots_are_conjugate() {
    let k = build_s4_mod_p(23).unwrap();
    let (h1, _) = k7_pair().unwrap();
    let t = assemble_from_inputs(&TripleInputs {
        p: 23,
        h1_mod7: h1.clone(),
        h2_mod7: h1,
        k: k.k_elements.clone(),
    })
    .unwrap();
    assert_eq!(t.non_isometry.mod7_scan.witness, Some(0));
    assert!(t.sunada);
    assert!(!t.holds());
}
