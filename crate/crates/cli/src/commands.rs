use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use sunada_core::congruence::{
    assemble_congruence_triple, build_s4_mod_p, congruence_surface_invariants, validate_fusion,
    verify_nonconjugate_tau,
};
use sunada_core::group::{
    projective_special_linear, special_linear, CosetSpace, GroupTable, Subgroup,
};
use sunada_core::orbifold::{psl27_model, theorem1_report, EndsConvention};
use sunada_core::psl168::{build_fano_triple, class_representatives, cycle_structure_table};
use sunada_core::sunada::{
    charpoly_isospectral, find_transplantation, permutation_character, random_multiset,
    verify_intertwining, verify_sunada, SchreierGraph,
};
use sunada_core::{Error, ModMatrix, ProjMatrix, Result};

use crate::report::Report;

fn check_size(order: usize, limit: usize, what: &str) -> Result<()> {
    if order > limit {
        return Err(Error::InvalidInput(format!(
            "{what} has {order} elements, above --max-group-size {limit}"
        )));
    }
    Ok(())
}

pub fn sunada_verify(corrupt: bool, limit: usize) -> Result<Report> {
    check_size(168, limit, "GL(3, F2)")?;
    let t = build_fano_triple()?;
    let h2 = if corrupt {
        let both: Vec<usize> =
            t.h1.members()
                .iter()
                .copied()
                .filter(|&x| t.h2.contains(x))
                .collect();
        Subgroup::from_members(&t.g, &both)?
    } else {
        t.h2.clone()
    };
    let report = verify_sunada(&t.g, &t.classes, &t.h1, &h2);
    let chi1 = permutation_character(&t.g, &t.classes, &t.h1);
    let chi2 = permutation_character(&t.g, &t.classes, &h2);
    let characters_agree = chi1 == chi2;

    let mut text = format!(
        "G = GL(3, F2), |G| = {}, |H1| = {}, |H2| = {}{}\n",
        t.g.order(),
        t.h1.order(),
        h2.order(),
        if corrupt {
            " (H2 replaced by H1 ∩ H2)"
        } else {
            ""
        }
    );
    text += "order  class size  |[g]∩H1|  |[g]∩H2|  fix(G/H1)  fix(G/H2)\n";
    let mut classes = Vec::new();
    for (k, c) in report.classes.iter().enumerate() {
        text += &format!(
            "{:<6} {:<11} {:<9} {:<9} {:<10} {}\n",
            c.element_order, c.class_size, c.in_h1, c.in_h2, chi1[k], chi2[k]
        );
        classes.push(json!({
            "representative": t.g.element(c.representative),
            "order": c.element_order,
            "size": c.class_size,
            "in_h1": c.in_h1,
            "in_h2": c.in_h2,
            "fixed_h1": chi1[k],
            "fixed_h2": chi2[k],
        }));
    }
    let violations: Vec<Value> = report
        .classes
        .iter()
        .filter(|c| c.in_h1 != c.in_h2)
        .map(|c| {
            json!({
                "representative": t.g.element(c.representative),
                "order": c.element_order,
                "in_h1": c.in_h1,
                "in_h2": c.in_h2,
            })
        })
        .collect();
    for v in &violations {
        text += &format!(
            "violation: class of order {} has {} elements in H1, {} in H2\n",
            v["order"], v["in_h1"], v["in_h2"]
        );
    }
    let witness = json!({
        "group_order": t.g.order(),
        "h1_order": t.h1.order(),
        "h2_order": h2.order(),
        "corrupted": corrupt,
        "classes": classes,
        "violations": violations,
        "permutation_characters_agree": characters_agree,
    });
    Ok(Report::new(
        "sunada-verify",
        "(GL(3,F2), point stabilizer, line stabilizer) is a Sunada triple",
        report.holds && characters_agree,
        witness,
        text,
    ))
}

pub fn cycle_table(limit: usize) -> Result<Report> {
    check_size(168, limit, "GL(3, F2)")?;
    let t = build_fano_triple()?;
    let table = cycle_structure_table(&t);
    let expected: [(usize, &[usize]); 4] = [
        (2, &[2, 2, 1, 1, 1]),
        (3, &[3, 3, 1]),
        (4, &[4, 2, 1]),
        (7, &[7]),
    ];
    let rows_match = expected.iter().all(|(order, ct)| {
        table
            .rows
            .iter()
            .find(|r| r.order == *order)
            .is_some_and(|r| r.on_h1 == *ct && r.on_h2 == *ct)
    });
    let ok = rows_match && table.uniform_by_order && table.sides_agree;
    let mut text = table.to_text();
    text += &format!(
        "uniform by order: {}\ntranspose-inverse swaps the sides: {}\n",
        table.uniform_by_order, table.sides_agree
    );
    Ok(Report::new(
        "cycle-table",
        "cycle types on G/H1 and G/H2 by element order",
        ok,
        serde_json::to_value(&table).expect("serializable"),
        text,
    ))
}

pub fn theorem1(convention: EndsConvention, limit: usize) -> Result<Report> {
    check_size(168, limit, "PSL(2, Z/7)")?;
    let r = theorem1_report(convention)?;
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|row| {
            let certificate: Vec<&ProjMatrix> = row
                .certificate
                .handles
                .iter()
                .flat_map(|(a, b)| [a, b])
                .chain(&row.certificate.cone)
                .collect();
            json!({
                "row": row.row,
                "base": {"genus": row.base.genus, "cone_orders": row.base.cone_orders},
                "source": row.source,
                "certificate": certificate,
                "check": row.check,
                "expected": {"genus": row.expected.0, "ends": row.expected.1},
                "cover": row.cover_h1.as_ref().map(|c| json!({
                    "genus": c.genus,
                    "ends": c.ends,
                    "euler": c.euler_char,
                    "points_over": c.points_over,
                })),
                "covers_agree": row.cover_h1 == row.cover_h2,
                "status": if row.passed() { "pass" } else { "fail" },
                "error": row.error,
            })
        })
        .collect();
    let mut text = r.to_text();
    let e = &r.explicit;
    text += &format!(
        "explicit matrices: A,B,C orders 2,3,7: {}; ABC = -I: {}; B'C' orders {:?}\n",
        e.abc_orders, e.abc_is_minus_identity, e.b_prime_c_prime_orders
    );
    text += &format!(
        "commutator formula: {}; k=2 commutator order {}; trace 2+kl: {}\n",
        e.commutator_formula, e.k2_commutator_order, e.unipotent_trace_formula
    );
    text += &format!(
        "B = {:?}: commutator {:?} of order {}, <A,B> has order {}, witness word = {:?} (expected [1 0; 2 1]: {})\n",
        e.b_listed, e.b_listed_commutator, e.b_listed_commutator_order, e.b_listed_generated_order,
        e.witness_value, e.witness_matches
    );
    if let Some(s) = &r.order2_search {
        text += &format!("exhaustive search, genus 1 with one order-2 point: {s}\n");
    }
    text += &format!(
        "trace dictionary: {} mismatches over {} elements\n",
        r.trace_dictionary.mismatches, r.trace_dictionary.elements
    );
    let ok = r.passed() && e.all() && r.trace_dictionary.mismatches == 0;
    let witness = json!({
        "convention": convention,
        "rows": rows,
        "explicit": e,
        "trace_dictionary": r.trace_dictionary,
        "order2_search": r.order2_search,
    });
    Ok(Report::new(
        "theorem1",
        "genus and ends of index-7 covers of orbifold bases",
        ok,
        witness,
        text,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum GenPreset {
    /// The explicit (2,3,7) generators A, B, C in PSL(2, Z/7)
    Triangle,
    /// The five class representatives of GL(3, F2)
    Classes,
    /// Four uniformly random elements of GL(3, F2)
    Random,
}

fn matrices(g: &GroupTable<ProjMatrix>, idx: &[usize]) -> Vec<ProjMatrix> {
    idx.iter().map(|&i| *g.element(i)).collect()
}

pub fn transplant(preset: GenPreset, seed: u64, bound: u32, limit: usize) -> Result<Report> {
    check_size(168, limit, "the group")?;
    let (group_id, g, h1, h2, gens) = match preset {
        GenPreset::Triangle => {
            let m = psl27_model()?;
            let gens: Vec<usize> = [[[0, 1], [-1, 0]], [[1, 1], [-1, 0]], [[1, 0], [-1, 1]]]
                .iter()
                .map(|r| {
                    m.group
                        .index_of(&ProjMatrix::from_rows(7, *r))
                        .expect("in PSL(2,7)")
                })
                .collect();
            ("PSL(2,7) with K7, tau(K7)", m.group, m.h1, m.h2, gens)
        }
        GenPreset::Classes | GenPreset::Random => {
            let t = build_fano_triple()?;
            let gens = if preset == GenPreset::Classes {
                class_representatives()
                    .iter()
                    .map(|(_, m)| t.index_of(m).expect("in GL(3,2)"))
                    .collect()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                random_multiset(&t.g, 4, &mut rng)
            };
            (
                "GL(3,2) with point and line stabilizers",
                t.g,
                t.h1,
                t.h2,
                gens,
            )
        }
    };
    let cert = find_transplantation(group_id, &g, &h1, &h2, bound)?;
    let x1 = SchreierGraph::new(&g, &CosetSpace::new(&g, &h1), &gens)?;
    let x2 = SchreierGraph::new(&g, &CosetSpace::new(&g, &h2), &gens)?;
    let inter = verify_intertwining(&cert.matrix(), &x1, &x2)?;
    let iso = charpoly_isospectral(&x1, &x2);
    let charpoly: Vec<String> = x1
        .laplacian_char_poly()
        .iter()
        .map(|c| c.to_string())
        .collect();

    let mut text = format!("group: {group_id}\ngenerators: {}\n", gens.len());
    text += &format!("c = {:?}\ndet T = {}\nT =\n", cert.c, cert.det_t);
    for row in &cert.t {
        text += &format!("  {row:?}\n");
    }
    text += &format!(
        "T L1 = L2 T: {}; T A1 = A2 T: {}; per generator: {}\n",
        inter.laplacian, inter.adjacency, inter.per_generator
    );
    text += &format!(
        "Laplacian characteristic polynomial (ascending): {charpoly:?}\nisospectral: {iso}\n"
    );
    let witness = json!({
        "preset": format!("{preset:?}").to_lowercase(),
        "seed": (preset == GenPreset::Random).then_some(seed),
        "generators": matrices(&g, &gens),
        "certificate": cert,
        "intertwining": {
            "laplacian": inter.laplacian,
            "adjacency": inter.adjacency,
            "per_generator": inter.per_generator,
        },
        "laplacian_char_poly": charpoly,
        "isospectral": iso,
    });
    Ok(Report::new(
        "transplant",
        "an invertible transplantation operator intertwines the Schreier Laplacians",
        inter.all() && iso,
        witness,
        text,
    ))
}

pub fn theorem2(p: u64, limit: usize) -> Result<Report> {
    if p == 2 || p == 7 {
        return Err(Error::InvalidInput("p must differ from 2 or 7".into()));
    }
    let s4 = build_s4_mod_p(p)?;
    let psl_order = (p * (p * p - 1) / 2) as usize;
    check_size(psl_order, limit, &format!("PSL(2, Z/{p})"))?;
    let pslp = projective_special_linear(p, limit)?;
    let nonconj = verify_nonconjugate_tau(&s4, &pslp)?;
    let triple = assemble_congruence_triple(&s4)?;
    let (inv1, tor1) = congruence_surface_invariants(&triple.h1, limit)?;
    let (inv2, tor2) = congruence_surface_invariants(&triple.h2, limit)?;
    let sl2 = special_linear(2)?;
    let sl3 = special_linear(3)?;
    let unipotent = |t: &GroupTable<ModMatrix>, m: u64| {
        t.index_of(&ModMatrix::new(m, [[1, 1], [0, 1]]))
            .expect("in SL(2)")
    };
    let fusion = validate_fusion(&sl2, &sl3, &[unipotent(&sl2, 2)], &[unipotent(&sl3, 3)])?;
    let torsion_free = tor1.torsion_free && tor2.torsion_free;
    let same_surface = (inv1.index, inv1.cusps, inv1.genus) == (inv2.index, inv2.cusps, inv2.genus);
    let ok = s4.is_valid()
        && nonconj.holds()
        && triple.holds()
        && torsion_free
        && fusion.holds()
        && same_surface;

    let mut text = format!(
        "S(4) in PSL(2,Z/{p}): alpha = {}, beta = {}, gamma = {}, E = {:?}\n",
        s4.alpha, s4.beta, s4.gamma, s4.e
    );
    for r in &s4.relations {
        text += &format!("  {}: {}\n", r.name, r.holds);
    }
    text += &format!(
        "  |K| = {}, center {}, S4 statistics: {}\n",
        s4.k.order, s4.k.center_size, s4.k.is_s4
    );
    text += &format!(
        "K vs tau(K): scanned {} elements, conjugator: {:?}\n",
        nonconj.scan.scanned, nonconj.scan.witness
    );
    text += &format!(
        "G = P(id x SL(2,7) x SL(2,{p})) mod {}: |G| = {}, |H1| = {}, index {}\n",
        triple.modulus, triple.group_order, triple.subgroup_order.0, triple.index.0
    );
    text += &format!(
        "Sunada over {} fused classes: {}\n",
        triple.classes.len(),
        triple.sunada
    );
    text += &format!(
        "non-isometry: mod-7 conjugator {:?}, mod-{p} tau conjugator {:?}\n",
        triple.non_isometry.mod7_scan.witness, triple.non_isometry.modp_tau_scan.witness
    );
    text += &format!(
        "torsion free: {torsion_free} (component argument {})\n",
        tor1.component_argument && tor2.component_argument
    );
    text += &format!(
        "surfaces: index {}, cusps {}, genus {}\n",
        inv1.index, inv1.cusps, inv1.genus
    );
    text += &format!(
        "class fusion on P(SL(2,2) x SL(2,3)): {} classes, matches brute force: {}\n",
        fusion.model_classes,
        fusion.holds()
    );
    let witness = json!({
        "p": p,
        "K_generators": s4.generators(),
        "tau_K_generators": s4.tau_generators(),
        "construction": &s4,
        "nonconjugacy": {
            "scanned": nonconj.scan.scanned,
            "witness": nonconj.scan.witness,
            "replay": nonconj.replay,
        },
        "triple": {
            "modulus": triple.modulus,
            "order": triple.group_order,
            "subgroup_order": triple.subgroup_order.0,
            "index": triple.index.0,
            "sunada": triple.sunada,
            "torsion_free": torsion_free,
            "classes": triple.classes,
            "non_isometry": triple.non_isometry,
        },
        "surfaces": [inv1, inv2],
        "fusion_validation": fusion,
    });
    Ok(Report::new(
        "theorem2",
        "congruence Sunada triple with non-conjugate S(4) factors",
        ok,
        witness,
        text,
    ))
}
