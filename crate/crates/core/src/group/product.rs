//! Special linear groups over `Z/k` and their products via the Chinese
//! remainder theorem.

use rayon::prelude::*;
use rustc_hash::FxHashSet;

use crate::error::{invalid, Error, Result};
use crate::modp::{gcd, inv_mod, ModMatrix, ProjMatrix};

use super::{generate_group, GroupTable, DEFAULT_MAX_GROUP_SIZE};

fn elementary_generators(k: u64) -> [ModMatrix; 2] {
    [
        ModMatrix::new(k, [[1, 1], [0, 1]]),
        ModMatrix::new(k, [[1, 0], [1, 1]]),
    ]
}

/// `SL(2, Z/k)`, generated by the two elementary unipotent matrices.
pub fn special_linear(k: u64) -> Result<GroupTable<ModMatrix>> {
    if k < 2 {
        return Err(invalid(format!("modulus {k} too small")));
    }
    generate_group(&elementary_generators(k), DEFAULT_MAX_GROUP_SIZE)
}

/// `PSL(2, Z/k)` with elements stored as canonical `±` representatives.
pub fn projective_special_linear(k: u64, limit: usize) -> Result<GroupTable<ProjMatrix>> {
    if k < 2 {
        return Err(invalid(format!("modulus {k} too small")));
    }
    let gens = elementary_generators(k).map(ProjMatrix::canonical);
    generate_group(&gens, limit)
}

/// The group containing only the 2×2 identity modulo `k`.
pub fn trivial_group(k: u64) -> GroupTable<ModMatrix> {
    generate_group(&[ModMatrix::identity(k, 2)], 1).expect("identity closure")
}

/// `e_i` with `e_i ≡ 1 (mod m_i)` and `e_i ≡ 0 (mod m_j)` for `j ≠ i`.
pub fn crt_idempotents(moduli: &[u64]) -> Result<Vec<u64>> {
    for (i, &a) in moduli.iter().enumerate() {
        for &b in &moduli[i + 1..] {
            if gcd(a, b) != 1 {
                return Err(invalid(format!("moduli {a} and {b} are not coprime")));
            }
        }
    }
    let total: u64 = moduli.iter().product();
    moduli
        .iter()
        .map(|&m| {
            let rest = total / m;
            let inv = inv_mod(rest % m, m).ok_or(Error::Singular(m))?;
            Ok(rest * inv % total)
        })
        .collect()
}

/// Combine one matrix per component into a matrix modulo the product.
pub(crate) fn crt_combine(parts: &[&ModMatrix], idem: &[u64], total: u64) -> ModMatrix {
    let mut entries = [0i64; 4];
    for (slot, e) in entries.iter_mut().enumerate() {
        let v: u64 = parts
            .iter()
            .zip(idem)
            .map(|(p, &w)| p.entries()[slot] as u64 * w % total)
            .sum();
        *e = (v % total) as i64;
    }
    ModMatrix::from_entries(total, 2, &entries).expect("valid CRT result")
}

/// `P(SL(2,Z/k_1) × … × SL(2,Z/k_r))` inside `PSL(2, Z/k_1⋯k_r)`.
///
/// Each component is a subgroup of `SL(2, Z/k_i)` given as a table; a
/// component containing only the identity realizes the `id` factor. Tuples
/// are glued by CRT and then identified with their negatives.
pub fn product_group(
    components: &[&GroupTable<ModMatrix>],
    limit: usize,
) -> Result<GroupTable<ProjMatrix>> {
    let moduli: Vec<u64> = components.iter().map(|c| c.element(0).modulus()).collect();
    if components.iter().any(|c| c.element(0).dim() != 2) {
        return Err(invalid("product components must be 2×2"));
    }
    let idem = crt_idempotents(&moduli)?;
    let total: u64 = moduli.iter().product();
    let sizes: Vec<usize> = components.iter().map(|c| c.order()).collect();
    let tuples: usize = sizes.iter().product();
    if tuples / 2 > limit {
        return Err(Error::SizeLimit { limit });
    }

    let decode = |mut t: usize| {
        let mut parts = Vec::with_capacity(components.len());
        for (c, &n) in components.iter().zip(&sizes).rev() {
            parts.push(c.element(t % n));
            t /= n;
        }
        parts.reverse();
        parts
    };
    let candidates: Vec<ProjMatrix> = (0..tuples)
        .into_par_iter()
        .map(|t| ProjMatrix::canonical(crt_combine(&decode(t), &idem, total)))
        .collect();
    let mut seen = FxHashSet::default();
    seen.reserve(tuples / 2 + 1);
    let elements: Vec<ProjMatrix> = candidates.into_iter().filter(|e| seen.insert(*e)).collect();
    drop(seen);
    if elements.len() > limit {
        return Err(Error::SizeLimit { limit });
    }

    let identities: Vec<ModMatrix> = moduli.iter().map(|&m| ModMatrix::identity(m, 2)).collect();
    let mut gens = Vec::new();
    for (ci, comp) in components.iter().enumerate() {
        for &g in comp.generators() {
            let mut parts: Vec<&ModMatrix> = identities.iter().collect();
            parts[ci] = comp.element(g as usize);
            gens.push(ProjMatrix::canonical(crt_combine(&parts, &idem, total)));
        }
    }
    GroupTable::from_elements(elements, &gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_MAX_GROUP_SIZE as LIMIT;

    #[test]
    fn sl_orders() {
        assert_eq!(special_linear(2).unwrap().order(), 6);
        assert_eq!(special_linear(3).unwrap().order(), 24);
        assert_eq!(special_linear(7).unwrap().order(), 336);
        assert_eq!(projective_special_linear(7, LIMIT).unwrap().order(), 168);
    }

    #[test]
    fn psl14_is_product() {
        let sl2 = special_linear(2).unwrap();
        let sl7 = special_linear(7).unwrap();
        let p = product_group(&[&sl2, &sl7], LIMIT).unwrap();
        assert_eq!(p.order(), 1008);
        let direct = projective_special_linear(14, LIMIT).unwrap();
        assert_eq!(direct.order(), 1008);
        assert!(p.elements().iter().all(|e| direct.index_of(e).is_some()));
    }

    #[test]
    fn single_factor_is_psl() {
        let sl7 = special_linear(7).unwrap();
        assert_eq!(product_group(&[&sl7], LIMIT).unwrap().order(), 168);
    }

    #[test]
    fn order_formula_matches_closure_for_2_and_3() {
        let sl2 = special_linear(2).unwrap();
        let sl3 = special_linear(3).unwrap();
        let p = product_group(&[&sl2, &sl3], LIMIT).unwrap();
        // −I is trivial modulo 2, so (x, y) is identified with (x, −y).
        assert_eq!(p.order(), 6 * 24 / 2);
        let closure = generate_group(
            &p.generators()
                .iter()
                .map(|&g| *p.element(g as usize))
                .collect::<Vec<_>>(),
            LIMIT,
        )
        .unwrap();
        assert_eq!(closure.order(), p.order());
        assert_eq!(projective_special_linear(6, LIMIT).unwrap().order(), 72);
    }

    #[test]
    fn id_factor_embeds_into_larger_modulus() {
        let id = trivial_group(2);
        let sl7 = special_linear(7).unwrap();
        let p = product_group(&[&id, &sl7], LIMIT).unwrap();
        assert_eq!(p.order(), 168);
        assert!(p.elements().iter().all(|e| e.modulus() == 14));
    }

    #[test]
    fn non_coprime_moduli_rejected() {
        let sl2 = special_linear(2).unwrap();
        let sl4 = special_linear(4).unwrap();
        assert!(product_group(&[&sl2, &sl4], LIMIT).is_err());
    }
}
