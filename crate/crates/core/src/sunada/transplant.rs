//! Search for a coefficient function `c` whose induced operator
//! `T f(x) = Σ_g c(g) f(g·x)` is an invertible equivariant map between
//! functions on `G/H1` and functions on `G/H2`.
//!
//! `c` is constant on the left cosets `gH2`, so it is stored as one integer
//! per coset of `H2`. In the indicator bases, the entry of `T` at
//! (`yH2`, `zH1`) is `Σ_{h ∈ H1} c(h z⁻¹ y)`.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::group::{CosetSpace, GroupElement, GroupTable, Subgroup};

use super::IntMatrix;

pub const CERTIFICATE_SCHEMA_VERSION: u32 = 1;

/// Upper bound on the number of coefficient vectors examined.
const SEARCH_LIMIT: u64 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransplantationCertificate {
    pub schema_version: u32,
    pub group_id: String,
    /// Member indices of `H1` and `H2` in the group table.
    pub h1: Vec<usize>,
    pub h2: Vec<usize>,
    /// Smallest element of each coset of `H2`, in label order.
    pub h2_coset_reps: Vec<usize>,
    /// Value of `c` on each coset of `H2`.
    pub c: Vec<i64>,
    /// Rows indexed by cosets of `H2`, columns by cosets of `H1`.
    #[serde(rename = "T")]
    pub t: Vec<Vec<i64>>,
    /// Determinant of `T`, as a decimal string.
    #[serde(rename = "detT")]
    pub det_t: String,
}

impl TransplantationCertificate {
    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.t).expect("certificate rows are rectangular")
    }

    /// `c` evaluated at a group element.
    pub fn c_value<E: GroupElement>(&self, g: &GroupTable<E>, h2: &Subgroup, x: usize) -> i64 {
        let cosets = CosetSpace::new(g, h2);
        self.c[cosets.coset_of(x)]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let cert: Self =
            serde_json::from_str(s).map_err(|e| invalid(format!("bad certificate: {e}")))?;
        if cert.schema_version != CERTIFICATE_SCHEMA_VERSION {
            return Err(invalid(format!(
                "unsupported certificate schema {}",
                cert.schema_version
            )));
        }
        Ok(cert)
    }
}

/// `counts[k]` is the matrix whose (`y`, `z`) entry counts `h ∈ H1` with
/// `h z⁻¹ y` in coset `k` of `H2`; `T` is then `Σ_k c_k · counts[k]`.
fn coset_hit_counts<E: GroupElement>(
    g: &GroupTable<E>,
    h1: &Subgroup,
    c1: &CosetSpace,
    c2: &CosetSpace,
) -> Vec<IntMatrix> {
    let (n1, n2) = (c1.index(), c2.index());
    let mut counts = vec![IntMatrix::zeros(n2, n1); n2];
    for (yi, &y) in c2.reps().iter().enumerate() {
        for (zi, &z) in c1.reps().iter().enumerate() {
            let zy = g.mul(g.inv(z), y);
            for &h in h1.members() {
                counts[c2.coset_of(g.mul(h, zy))][(yi, zi)] += 1;
            }
        }
    }
    counts
}

fn combine(counts: &[IntMatrix], c: &[i64]) -> IntMatrix {
    let mut t = IntMatrix::zeros(counts[0].rows(), counts[0].cols());
    for (m, &ck) in counts.iter().zip(c) {
        if ck != 0 {
            t = &t + &m.scale(ck);
        }
    }
    t
}

/// Matrix of the operator induced by `c` (one value per coset of `H2`).
pub fn transplant_matrix<E: GroupElement>(
    g: &GroupTable<E>,
    h1: &Subgroup,
    h2: &Subgroup,
    c: &[i64],
) -> Result<IntMatrix> {
    let c1 = CosetSpace::new(g, h1);
    let c2 = CosetSpace::new(g, h2);
    if c.len() != c2.index() {
        return Err(Error::DimensionMismatch(c.len(), c2.index()));
    }
    Ok(combine(&coset_hit_counts(g, h1, &c1, &c2), c))
}

fn certificate(
    group_id: &str,
    h1: &Subgroup,
    h2: &Subgroup,
    c2: &CosetSpace,
    c: Vec<i64>,
    t: IntMatrix,
    det: BigInt,
) -> TransplantationCertificate {
    TransplantationCertificate {
        schema_version: CERTIFICATE_SCHEMA_VERSION,
        group_id: group_id.to_string(),
        h1: h1.members().to_vec(),
        h2: h2.members().to_vec(),
        h2_coset_reps: c2.reps().to_vec(),
        c,
        t: t.to_rows(),
        det_t: det.to_string(),
    }
}

/// Certificate for a given `c`; fails if the induced `T` is singular.
pub fn certificate_from_coefficients<E: GroupElement>(
    group_id: &str,
    g: &GroupTable<E>,
    h1: &Subgroup,
    h2: &Subgroup,
    c: &[i64],
) -> Result<TransplantationCertificate> {
    let c1 = CosetSpace::new(g, h1);
    let c2 = CosetSpace::new(g, h2);
    if c1.index() != c2.index() {
        return Err(Error::DimensionMismatch(c1.index(), c2.index()));
    }
    if c.len() != c2.index() {
        return Err(Error::DimensionMismatch(c.len(), c2.index()));
    }
    let t = combine(&coset_hit_counts(g, h1, &c1, &c2), c);
    let det = t.det()?;
    if det.is_zero() {
        return Err(Error::Precondition(
            "the induced operator is not invertible".into(),
        ));
    }
    Ok(certificate(group_id, h1, h2, &c2, c.to_vec(), t, det))
}

/// Lexicographically first `c` with values in `0..=bound` (first coset most
/// significant) whose operator is invertible. The zero function is skipped.
pub fn find_transplantation<E: GroupElement>(
    group_id: &str,
    g: &GroupTable<E>,
    h1: &Subgroup,
    h2: &Subgroup,
    bound: u32,
) -> Result<TransplantationCertificate> {
    let c1 = CosetSpace::new(g, h1);
    let c2 = CosetSpace::new(g, h2);
    if c1.index() != c2.index() {
        return Err(Error::DimensionMismatch(c1.index(), c2.index()));
    }
    if bound == 0 {
        return Err(Error::NotFound(
            "coefficient bound 0 only allows c = 0, which gives T = 0".into(),
        ));
    }
    let n = c2.index();
    let base = bound as u64 + 1;
    let total = base
        .checked_pow(n as u32)
        .filter(|&t| t <= SEARCH_LIMIT)
        .ok_or_else(|| {
            invalid(format!(
                "{base}^{n} coefficient vectors is too many to scan"
            ))
        })?;
    let counts = coset_hit_counts(g, h1, &c1, &c2);
    let decode = |mut t: u64| {
        let mut c = vec![0i64; n];
        for slot in c.iter_mut().rev() {
            *slot = (t % base) as i64;
            t /= base;
        }
        c
    };
    let hit = (1..total).into_par_iter().find_map_first(|t| {
        let c = decode(t);
        let m = combine(&counts, &c);
        let det = m.det().ok()?;
        (!det.is_zero()).then_some((c, m, det))
    });
    let (c, t, det) = hit.ok_or_else(|| {
        Error::NotFound(format!(
            "no invertible transplantation with coefficients in 0..={bound}"
        ))
    })?;
    Ok(certificate(group_id, h1, h2, &c2, c, t, det))
}
