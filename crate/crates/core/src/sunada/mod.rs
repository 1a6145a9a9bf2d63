//! Sunada triples, transplantation operators and Schreier-graph models.

mod linalg;
mod transplant;

pub use linalg::IntMatrix;
pub use transplant::{
    certificate_from_coefficients, find_transplantation, transplant_matrix,
    TransplantationCertificate, CERTIFICATE_SCHEMA_VERSION,
};

use num_bigint::BigInt;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Classes, CosetSpace, GroupElement, GroupTable, Subgroup};

/// Per-class intersection counts for a candidate triple.
#[derive(Clone, Debug, Serialize)]
pub struct ClassIntersection {
    pub representative: usize,
    pub element_order: usize,
    pub class_size: usize,
    pub in_h1: usize,
    pub in_h2: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SunadaReport {
    pub holds: bool,
    pub classes: Vec<ClassIntersection>,
    /// Representatives of the classes where the counts differ.
    pub violations: Vec<usize>,
}

/// Compare `|[g] ∩ H1|` and `|[g] ∩ H2|` on every conjugacy class.
pub fn verify_sunada<E: GroupElement>(
    g: &GroupTable<E>,
    classes: &Classes,
    h1: &Subgroup,
    h2: &Subgroup,
) -> SunadaReport {
    let mut counts = vec![(0usize, 0usize); classes.len()];
    for &m in h1.members() {
        counts[classes.class_of(m)].0 += 1;
    }
    for &m in h2.members() {
        counts[classes.class_of(m)].1 += 1;
    }
    let rows: Vec<ClassIntersection> = classes
        .classes
        .iter()
        .zip(&counts)
        .map(|(c, &(a, b))| ClassIntersection {
            representative: c.representative,
            element_order: c.element_order,
            class_size: c.size(),
            in_h1: a,
            in_h2: b,
        })
        .collect();
    let violations: Vec<usize> = rows
        .iter()
        .filter(|r| r.in_h1 != r.in_h2)
        .map(|r| r.representative)
        .collect();
    debug_assert!(g.order() == classes.class_of.len());
    SunadaReport {
        holds: violations.is_empty(),
        classes: rows,
        violations,
    }
}

/// Number of cosets of `H` fixed by each class representative.
pub fn permutation_character<E: GroupElement>(
    g: &GroupTable<E>,
    classes: &Classes,
    h: &Subgroup,
) -> Vec<usize> {
    let cosets = CosetSpace::new(g, h);
    classes
        .classes
        .iter()
        .map(|c| {
            cosets
                .action(g, c.representative)
                .expect("class representatives lie in the group")
                .fixed_points()
        })
        .collect()
}

/// Graph on the cosets `G/H` with one edge `x → s·x` per generator `s`.
#[derive(Clone, Debug)]
pub struct SchreierGraph {
    /// Coset permutation for each generator, in the order given.
    pub generator_actions: Vec<Vec<u32>>,
    /// `D[x][y] = #{s : s·x = y}`
    pub directed: IntMatrix,
    /// Symmetrized adjacency `D + Dᵀ`.
    pub adjacency: IntMatrix,
    /// `2|S|·I − (D + Dᵀ)`.
    pub laplacian: IntMatrix,
}

impl SchreierGraph {
    pub fn new<E: GroupElement>(
        g: &GroupTable<E>,
        cosets: &CosetSpace,
        gens: &[usize],
    ) -> Result<Self> {
        let n = cosets.index();
        let generator_actions = gens
            .iter()
            .map(|&s| cosets.action(g, s).map(|a| a.perm))
            .collect::<Result<Vec<_>>>()?;
        let mut directed = IntMatrix::zeros(n, n);
        for perm in &generator_actions {
            for (x, &y) in perm.iter().enumerate() {
                directed[(x, y as usize)] += 1;
            }
        }
        let adjacency = &directed + &directed.transpose();
        let degree = 2 * gens.len() as i64;
        let laplacian = &IntMatrix::identity(n).scale(degree) - &adjacency;
        Ok(SchreierGraph {
            generator_actions,
            directed,
            adjacency,
            laplacian,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.rows()
    }

    /// Permutation matrix `P[x][y] = [s·x = y]` of one generator.
    pub fn generator_matrix(&self, k: usize) -> IntMatrix {
        let n = self.vertex_count();
        let mut p = IntMatrix::zeros(n, n);
        for (x, &y) in self.generator_actions[k].iter().enumerate() {
            p[(x, y as usize)] = 1;
        }
        p
    }

    pub fn laplacian_char_poly(&self) -> Vec<BigInt> {
        self.laplacian.char_poly().expect("square")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntertwiningReport {
    pub laplacian: bool,
    pub adjacency: bool,
    pub per_generator: bool,
}

impl IntertwiningReport {
    pub fn all(&self) -> bool {
        self.laplacian && self.adjacency && self.per_generator
    }
}

/// Check `T·M(X1) = M(X2)·T` for the Laplacian, the adjacency matrix and
/// each generator's permutation matrix.
pub fn verify_intertwining(
    t: &IntMatrix,
    x1: &SchreierGraph,
    x2: &SchreierGraph,
) -> Result<IntertwiningReport> {
    if t.cols() != x1.vertex_count() {
        return Err(Error::DimensionMismatch(t.cols(), x1.vertex_count()));
    }
    if t.rows() != x2.vertex_count() {
        return Err(Error::DimensionMismatch(t.rows(), x2.vertex_count()));
    }
    if x1.generator_actions.len() != x2.generator_actions.len() {
        return Err(Error::DimensionMismatch(
            x1.generator_actions.len(),
            x2.generator_actions.len(),
        ));
    }
    let commutes = |a: &IntMatrix, b: &IntMatrix| -> Result<bool> {
        Ok(t.checked_mul(a)? == b.checked_mul(t)?)
    };
    let laplacian = commutes(&x1.laplacian, &x2.laplacian)?;
    let adjacency = commutes(&x1.adjacency, &x2.adjacency)?;
    let mut per_generator = true;
    for k in 0..x1.generator_actions.len() {
        per_generator &= commutes(&x1.generator_matrix(k), &x2.generator_matrix(k))?;
    }
    Ok(IntertwiningReport {
        laplacian,
        adjacency,
        per_generator,
    })
}

/// Equality of the exact Laplacian characteristic polynomials.
pub fn charpoly_isospectral(x1: &SchreierGraph, x2: &SchreierGraph) -> bool {
    laplacians_isospectral(&x1.laplacian, &x2.laplacian)
}

/// Same comparison for arbitrary square integer matrices.
pub fn laplacians_isospectral(l1: &IntMatrix, l2: &IntMatrix) -> bool {
    match (l1.char_poly(), l2.char_poly()) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

/// Adjacency spectra; equivalent to the Laplacian comparison for regular
/// graphs of equal degree.
pub fn adjacency_isospectral(x1: &SchreierGraph, x2: &SchreierGraph) -> bool {
    laplacians_isospectral(&x1.adjacency, &x2.adjacency)
}

/// `size` group elements drawn uniformly with replacement, excluding none.
pub fn random_multiset<E: GroupElement, R: Rng>(
    g: &GroupTable<E>,
    size: usize,
    rng: &mut R,
) -> Vec<usize> {
    (0..size).map(|_| rng.gen_range(0..g.order())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{generate_group, DEFAULT_MAX_GROUP_SIZE};
    use crate::modp::ProjMatrix;

    fn psl27() -> GroupTable<ProjMatrix> {
        generate_group(
            &[
                ProjMatrix::from_rows(7, [[1, 1], [0, 1]]),
                ProjMatrix::from_rows(7, [[1, 0], [1, 1]]),
            ],
            DEFAULT_MAX_GROUP_SIZE,
        )
        .unwrap()
    }

    #[test]
    fn equal_subgroups_form_a_triple() {
        let g = psl27();
        let classes = g.conjugacy_classes();
        let h = Subgroup::generated(&g, &[1]);
        assert!(verify_sunada(&g, &classes, &h, &h).holds);
    }

    #[test]
    fn different_orders_violate_the_condition() {
        let g = psl27();
        let classes = g.conjugacy_classes();
        let two = g
            .index_of(&ProjMatrix::from_rows(7, [[0, 1], [-1, 0]]))
            .unwrap();
        let three = g
            .index_of(&ProjMatrix::from_rows(7, [[1, 1], [-1, 0]]))
            .unwrap();
        let report = verify_sunada(
            &g,
            &classes,
            &Subgroup::generated(&g, &[two]),
            &Subgroup::generated(&g, &[three]),
        );
        assert!(!report.holds);
        assert!(!report.violations.is_empty());
    }

    #[test]
    fn whole_group_gives_single_vertex_graph() {
        let g = psl27();
        let whole = Subgroup::whole(&g);
        let cosets = CosetSpace::new(&g, &whole);
        let x = SchreierGraph::new(&g, &cosets, &[1, 2, 3]).unwrap();
        assert_eq!(x.vertex_count(), 1);
        assert_eq!(x.adjacency[(0, 0)], 6);
        assert_eq!(x.laplacian[(0, 0)], 0);
    }

    #[test]
    fn cycle_and_star_differ() {
        let n = 7;
        let mut cycle = IntMatrix::identity(n).scale(2);
        let mut star = IntMatrix::zeros(n, n);
        for i in 0..n {
            cycle[(i, (i + 1) % n)] = -1;
            cycle[((i + 1) % n, i)] = -1;
        }
        star[(0, 0)] = (n - 1) as i64;
        for i in 1..n {
            star[(i, i)] = 1;
            star[(0, i)] = -1;
            star[(i, 0)] = -1;
        }
        assert!(laplacians_isospectral(&cycle, &cycle));
        assert!(!laplacians_isospectral(&cycle, &star));
    }

    #[test]
    fn identity_intertwines_a_graph_with_itself() {
        let g = psl27();
        let h = Subgroup::generated(&g, &[1]);
        let cosets = CosetSpace::new(&g, &h);
        let x = SchreierGraph::new(&g, &cosets, &[1, 2]).unwrap();
        let t = IntMatrix::identity(x.vertex_count());
        assert!(verify_intertwining(&t, &x, &x).unwrap().all());
        assert!(verify_intertwining(&IntMatrix::identity(3), &x, &x).is_err());
    }
}
