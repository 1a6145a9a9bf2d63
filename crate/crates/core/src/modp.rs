//! Exact arithmetic over `Z/n` and small (2×2, 3×3) matrices with entries
//! in `Z/n`, including the `±` identification used for projective groups.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};

/// Largest supported modulus. Entry products are reduced one at a time in
/// `u64`, so any modulus below 2³¹ is overflow free.
pub const MAX_MODULUS: u64 = 1 << 31;

/// Bound for the exhaustive square-root scan.
pub const SQRT_SCAN_LIMIT: u64 = 10_000;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[inline]
pub fn reduce(value: i64, modulus: u64) -> u64 {
    value.rem_euclid(modulus as i64) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % modulus;
        }
        b = b * b % modulus;
        exp >>= 1;
    }
    result
}

/// Inverse of `a` modulo `modulus`, if `a` is a unit.
pub fn inv_mod(a: u64, modulus: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % modulus as i128, modulus as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(modulus as i128) as u64)
}

/// Solve `x ≡ residues[i] (mod moduli[i])` for pairwise coprime moduli.
pub fn crt(residues: &[u64], moduli: &[u64]) -> Result<u64> {
    if residues.len() != moduli.len() {
        return Err(Error::DimensionMismatch(residues.len(), moduli.len()));
    }
    let total: u64 = moduli.iter().product();
    let mut acc = 0u128;
    for (&r, &m) in residues.iter().zip(moduli) {
        let rest = total / m;
        let inv = inv_mod(rest % m, m)
            .ok_or_else(|| invalid(format!("moduli are not pairwise coprime (at {m})")))?;
        acc += (r % m) as u128 * inv as u128 % m as u128 * rest as u128;
    }
    Ok((acc % total as u128) as u64)
}

/// Legendre symbol via Euler's criterion: `a^((p-1)/2) mod p` mapped to
/// `-1`, `0` or `1`.
pub fn euler_criterion(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if p == 2 {
        return 1;
    }
    match pow_mod(a, (p - 1) / 2, p) {
        1 => 1,
        _ => -1,
    }
}

/// An element of `Z/n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(value: i64, modulus: u64) -> Self {
        assert!(
            (1..MAX_MODULUS).contains(&modulus),
            "modulus {modulus} out of range"
        );
        Residue {
            value: reduce(value, modulus),
            modulus,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, exp: u64) -> Self {
        Residue {
            value: pow_mod(self.value, exp, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn inv(self) -> Result<Self> {
        inv_mod(self.value, self.modulus)
            .map(|value| Residue {
                value,
                modulus: self.modulus,
            })
            .ok_or(Error::Singular(self.modulus))
    }

    /// `self / other`, failing when `other` is not a unit.
    pub fn checked_div(self, other: Self) -> Result<Self> {
        Ok(self * other.inv()?)
    }

    fn same_ring(self, other: Self) {
        assert_eq!(
            self.modulus, other.modulus,
            "residues with different moduli"
        );
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.same_ring(rhs);
        Residue {
            value: (self.value + rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self.same_ring(rhs);
        Residue {
            value: (self.value + self.modulus - rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.same_ring(rhs);
        Residue {
            value: self.value * rhs.value % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// All square roots of `a` modulo the prime `p`, in increasing order.
///
/// The scan is exhaustive, which is plenty for the primes used here.
pub fn sqrt_mod(a: Residue, p: u64) -> Result<Vec<Residue>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p >= SQRT_SCAN_LIMIT {
        return Err(invalid(format!(
            "sqrt_mod scans exhaustively and needs p < {SQRT_SCAN_LIMIT}"
        )));
    }
    let target = a.value % p;
    Ok((0..p)
        .filter(|x| x * x % p == target)
        .map(|x| Residue::new(x as i64, p))
        .collect())
}

pub fn is_quadratic_residue(a: u64, p: u64) -> bool {
    euler_criterion(a, p) >= 0
}

/// Square matrix (dimension 2 or 3) over `Z/n`.
///
/// Entries are always stored reduced into `[0, n)`; unused slots are zero so
/// that derived equality, hashing and ordering are structural.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModMatrix {
    modulus: u32,
    dim: u8,
    entries: [u32; 9],
}

impl ModMatrix {
    /// Build from signed literals; entries are reduced mod `modulus`.
    ///
    /// Panics on unsupported dimension or modulus, which makes it suitable
    /// for literals. Use [`ModMatrix::from_entries`] for untrusted input.
    pub fn new<const N: usize>(modulus: u64, rows: [[i64; N]; N]) -> Self {
        let flat: Vec<i64> = rows.iter().flatten().copied().collect();
        Self::from_entries(modulus, N, &flat).expect("invalid matrix literal")
    }

    pub fn from_entries(modulus: u64, dim: usize, entries: &[i64]) -> Result<Self> {
        if !(2..MAX_MODULUS).contains(&modulus) {
            return Err(invalid(format!("unsupported modulus {modulus}")));
        }
        if dim != 2 && dim != 3 {
            return Err(invalid(format!("unsupported dimension {dim}")));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(entries.len(), dim * dim));
        }
        let mut out = [0u32; 9];
        for (slot, &v) in out.iter_mut().zip(entries) {
            *slot = reduce(v, modulus) as u32;
        }
        Ok(ModMatrix {
            modulus: modulus as u32,
            dim: dim as u8,
            entries: out,
        })
    }

    pub fn identity(modulus: u64, dim: usize) -> Self {
        let mut e = vec![0i64; dim * dim];
        for i in 0..dim {
            e[i * dim + i] = 1;
        }
        Self::from_entries(modulus, dim, &e).expect("identity")
    }

    pub fn diagonal(modulus: u64, diag: &[i64]) -> Result<Self> {
        let dim = diag.len();
        let mut e = vec![0i64; dim * dim];
        for (i, &d) in diag.iter().enumerate() {
            e[i * dim + i] = d;
        }
        Self::from_entries(modulus, dim, &e)
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus as u64
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.entries[row * self.dim as usize + col] as u64
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries[..self.dim() * self.dim()]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        let n = self.dim();
        (0..n)
            .map(|r| (0..n).map(|c| self.get(r, c)).collect())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.modulus(), self.dim())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus(), other.modulus()));
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }

    /// Exact product; fails on modulus or dimension mismatch.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    #[inline]
    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.dim();
        let m = self.modulus as u64;
        let mut out = [0u32; 9];
        for r in 0..n {
            for c in 0..n {
                let mut acc = 0u64;
                for k in 0..n {
                    acc += self.entries[r * n + k] as u64 * other.entries[k * n + c] as u64 % m;
                }
                out[r * n + c] = (acc % m) as u32;
            }
        }
        ModMatrix {
            modulus: self.modulus,
            dim: self.dim,
            entries: out,
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let m = self.modulus as u64;
        let mut out = self.entries;
        for (o, &b) in out.iter_mut().zip(&other.entries) {
            *o = ((*o as u64 + b as u64) % m) as u32;
        }
        Ok(ModMatrix {
            entries: out,
            ..*self
        })
    }

    pub fn scale(&self, s: i64) -> Self {
        let m = self.modulus as u64;
        let s = reduce(s, m);
        let mut out = self.entries;
        for o in out.iter_mut() {
            *o = (*o as u64 * s % m) as u32;
        }
        ModMatrix {
            entries: out,
            ..*self
        }
    }

    pub fn negate(&self) -> Self {
        self.scale(-1)
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim();
        let mut out = [0u32; 9];
        for r in 0..n {
            for c in 0..n {
                out[c * n + r] = self.entries[r * n + c];
            }
        }
        ModMatrix {
            entries: out,
            ..*self
        }
    }

    pub fn trace(&self) -> u64 {
        let m = self.modulus as u64;
        (0..self.dim()).map(|i| self.get(i, i)).sum::<u64>() % m
    }

    #[inline]
    fn minor2(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> u64 {
        let m = self.modulus as u64;
        let a = self.get(r0, c0) * self.get(r1, c1) % m;
        let b = self.get(r0, c1) * self.get(r1, c0) % m;
        (a + m - b) % m
    }

    pub fn det(&self) -> u64 {
        let m = self.modulus as u64;
        match self.dim() {
            2 => self.minor2(0, 1, 0, 1),
            _ => {
                let t0 = self.get(0, 0) * self.minor2(1, 2, 1, 2) % m;
                let t1 = self.get(0, 1) * self.minor2(1, 2, 0, 2) % m;
                let t2 = self.get(0, 2) * self.minor2(1, 2, 0, 1) % m;
                (t0 + m - t1 + t2) % m
            }
        }
    }

    /// Adjugate (transpose of the cofactor matrix).
    fn adjugate(&self) -> Self {
        let m = self.modulus as i64;
        let n = self.dim();
        let mut out = vec![0i64; n * n];
        if n == 2 {
            out[0] = self.get(1, 1) as i64;
            out[1] = -(self.get(0, 1) as i64);
            out[2] = -(self.get(1, 0) as i64);
            out[3] = self.get(0, 0) as i64;
        } else {
            for r in 0..3 {
                for c in 0..3 {
                    let rows: Vec<usize> = (0..3).filter(|&i| i != r).collect();
                    let cols: Vec<usize> = (0..3).filter(|&j| j != c).collect();
                    let minor = self.minor2(rows[0], rows[1], cols[0], cols[1]) as i64;
                    let sign = if (r + c) % 2 == 0 { 1 } else { -1 };
                    // cofactor (r, c) lands at (c, r)
                    out[c * 3 + r] = sign * minor % m;
                }
            }
        }
        Self::from_entries(self.modulus(), n, &out).expect("adjugate")
    }

    pub fn inverse(&self) -> Result<Self> {
        let det_inv = inv_mod(self.det(), self.modulus()).ok_or(Error::Singular(self.modulus()))?;
        Ok(self.adjugate().scale(det_inv as i64))
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut result = Self::identity(self.modulus(), self.dim());
        let mut base = *self;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            exp >>= 1;
        }
        result
    }

    /// `A B A⁻¹ B⁻¹`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        let ab = self.checked_mul(other)?;
        let inv = other.checked_mul(self)?.inverse()?;
        Ok(ab.mul_unchecked(&inv))
    }

    /// Monic characteristic polynomial `det(xI - A)`.
    pub fn char_poly(&self) -> CharPoly {
        let m = self.modulus as u64;
        let neg = |v: u64| (m - v % m) % m;
        let coeffs = match self.dim() {
            2 => vec![self.det(), neg(self.trace()), 1],
            _ => {
                let principal =
                    (self.minor2(0, 1, 0, 1) + self.minor2(0, 2, 0, 2) + self.minor2(1, 2, 1, 2))
                        % m;
                vec![neg(self.det()), principal, neg(self.trace()), 1]
            }
        };
        CharPoly { modulus: m, coeffs }
    }

    /// Reduce entries modulo a divisor of the current modulus.
    pub fn reduce_mod(&self, modulus: u64) -> Result<Self> {
        if modulus < 2 || !self.modulus().is_multiple_of(modulus) {
            return Err(invalid(format!(
                "{modulus} does not divide {}",
                self.modulus()
            )));
        }
        let e: Vec<i64> = self.entries().iter().map(|&v| v as i64).collect();
        Self::from_entries(modulus, self.dim(), &e)
    }

    /// Combine component matrices with pairwise coprime moduli into one
    /// matrix over the product modulus.
    pub fn crt(parts: &[ModMatrix]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| invalid("empty CRT input"))?;
        let dim = first.dim();
        if let Some(bad) = parts.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch(dim, bad.dim()));
        }
        let moduli: Vec<u64> = parts.iter().map(|p| p.modulus()).collect();
        for (i, &a) in moduli.iter().enumerate() {
            for &b in &moduli[i + 1..] {
                if gcd(a, b) != 1 {
                    return Err(invalid(format!("moduli {a} and {b} are not coprime")));
                }
            }
        }
        let total: u64 = moduli.iter().product();
        let mut out = Vec::with_capacity(dim * dim);
        for slot in 0..dim * dim {
            let residues: Vec<u64> = parts.iter().map(|p| p.entries[slot] as u64).collect();
            out.push(crt(&residues, &moduli)? as i64);
        }
        Self::from_entries(total, dim, &out)
    }
}

impl Mul for ModMatrix {
    type Output = ModMatrix;

    /// Panics on mismatched moduli or dimensions; see [`ModMatrix::checked_mul`].
    fn mul(self, rhs: ModMatrix) -> ModMatrix {
        self.checked_mul(&rhs).expect("incompatible matrices")
    }
}

impl Mul for &ModMatrix {
    type Output = ModMatrix;
    fn mul(self, rhs: &ModMatrix) -> ModMatrix {
        self.checked_mul(rhs).expect("incompatible matrices")
    }
}

impl fmt::Display for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        write!(f, "] mod {}", self.modulus)
    }
}

impl fmt::Debug for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixDoc {
    modulus: u64,
    rows: Vec<Vec<i64>>,
}

impl Serialize for ModMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixDoc {
            modulus: self.modulus(),
            rows: self
                .rows()
                .into_iter()
                .map(|r| r.into_iter().map(|v| v as i64).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ModMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = MatrixDoc::deserialize(d)?;
        let dim = doc.rows.len();
        if doc.rows.iter().any(|r| r.len() != dim) {
            return Err(serde::de::Error::custom("matrix rows must be square"));
        }
        let flat: Vec<i64> = doc.rows.into_iter().flatten().collect();
        ModMatrix::from_entries(doc.modulus, dim, &flat).map_err(serde::de::Error::custom)
    }
}

/// Monic polynomial over `Z/n`, coefficients in increasing degree.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharPoly {
    pub modulus: u64,
    pub coeffs: Vec<u64>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (deg, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coeff = if c == 1 && deg > 0 {
                String::new()
            } else {
                c.to_string()
            };
            terms.push(match deg {
                0 => coeff,
                1 => format!("{coeff}x"),
                _ => format!("{coeff}x^{deg}"),
            });
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self, self.modulus)
    }
}

/// Element of a projective group: a determinant-one matrix identified with
/// its negative. The stored representative is the smaller of `{M, -M}` in
/// row-major lexicographic order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ProjMatrix(ModMatrix);

impl ProjMatrix {
    pub fn new(m: ModMatrix) -> Result<Self> {
        if m.det() != 1 {
            return Err(invalid(format!("determinant of {m} is {}, not 1", m.det())));
        }
        Ok(Self::canonical(m))
    }

    /// Shorthand for literals; panics unless the determinant is 1.
    pub fn from_rows<const N: usize>(modulus: u64, rows: [[i64; N]; N]) -> Self {
        Self::new(ModMatrix::new(modulus, rows)).expect("determinant must be 1")
    }

    #[inline]
    pub(crate) fn canonical(m: ModMatrix) -> Self {
        let n = m.negate();
        match m.entries().cmp(n.entries()) {
            Ordering::Greater => ProjMatrix(n),
            _ => ProjMatrix(m),
        }
    }

    pub fn rep(&self) -> &ModMatrix {
        &self.0
    }

    pub fn modulus(&self) -> u64 {
        self.0.modulus()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::canonical(ModMatrix::identity(self.modulus(), self.0.dim()))
    }

    pub fn inverse(&self) -> Self {
        Self::canonical(self.0.inverse().expect("determinant one"))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        Ok(Self::canonical(self.0.checked_mul(&other.0)?))
    }

    /// Order in the projective group.
    pub fn order(&self) -> usize {
        psl_order(self)
    }

    /// `±` representatives are equal as projective elements.
    pub fn same_as(&self, m: &ModMatrix) -> bool {
        m.det() == 1 && *self == Self::canonical(*m)
    }
}

impl<'de> Deserialize<'de> for ProjMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        ProjMatrix::new(ModMatrix::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for ProjMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "±{}", self.0)
    }
}

impl fmt::Debug for ProjMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Smallest `k ≥ 1` with `a^k = ±I`.
pub fn psl_order(a: &ProjMatrix) -> usize {
    let id = ProjMatrix::canonical(ModMatrix::identity(a.modulus(), a.0.dim()));
    let mut x = *a;
    let mut k = 1;
    while x != id {
        x = ProjMatrix::canonical(x.0.mul_unchecked(&a.0));
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2(rows: [[i64; 2]; 2]) -> ModMatrix {
        ModMatrix::new(7, rows)
    }

    #[test]
    fn triangle_product_is_minus_identity() {
        let a = m2([[0, 1], [-1, 0]]);
        let b = m2([[1, 1], [-1, 0]]);
        let c = m2([[1, 0], [-1, 1]]);
        let abc = a * b * c;
        assert_eq!(abc, ModMatrix::identity(7, 2).negate());
        assert!(ProjMatrix::new(abc).unwrap().is_identity());
    }

    #[test]
    fn mul_examples() {
        let m = m2([[3, 4], [5, 6]]);
        assert_eq!(m * ModMatrix::identity(7, 2), m);
        let p = m2([[0, 1], [-1, 0]]) * m2([[0, 2], [3, 0]]);
        assert_eq!(p, m2([[3, 0], [0, 5]]));
        assert_eq!(p.trace(), 1);
    }

    #[test]
    fn mismatched_moduli_are_rejected() {
        let a = ModMatrix::identity(7, 2);
        let b = ModMatrix::identity(5, 2);
        assert_eq!(a.checked_mul(&b), Err(Error::ModulusMismatch(7, 5)));
        let c = ModMatrix::identity(7, 3);
        assert_eq!(a.checked_mul(&c), Err(Error::DimensionMismatch(2, 3)));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(
            m2([[0, 1], [-1, 0]]).inverse().unwrap(),
            m2([[0, -1], [1, 0]])
        );
        let id = ModMatrix::identity(7, 2);
        assert_eq!(id.inverse().unwrap(), id);
        let m = m2([[4, 1], [0, 2]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m * inv, id);
        assert_eq!(inv, m2([[2, 6], [0, 4]]));
    }

    #[test]
    fn inverse_3x3_over_f2() {
        let g = ModMatrix::new(2, [[1, 1, 1], [1, 1, 0], [0, 1, 1]]);
        let inv = g.inverse().unwrap();
        assert!((g * inv).is_identity());
        assert!((inv * g).is_identity());
    }

    #[test]
    fn singular_inverse_errors() {
        assert_eq!(m2([[1, 2], [2, 4]]).inverse(), Err(Error::Singular(7)));
    }

    #[test]
    fn char_poly_examples() {
        let a = ModMatrix::new(2, [[1, 1, 1], [1, 1, 0], [0, 1, 1]]);
        assert_eq!(a.char_poly().coeffs, vec![1, 0, 1, 1]);
        assert_eq!(a.char_poly().to_string(), "x^3 + x^2 + 1");
        let b = ModMatrix::new(2, [[1, 0, 1], [1, 1, 1], [1, 1, 0]]);
        assert_eq!(b.char_poly().coeffs, vec![1, 1, 0, 1]);
        assert_eq!(b.char_poly().to_string(), "x^3 + x + 1");
        // x² − 2x + 1 over Z/7
        assert_eq!(ModMatrix::identity(7, 2).char_poly().coeffs, vec![1, 5, 1]);
    }

    #[test]
    fn char_poly_annihilates_matrix() {
        // Cayley–Hamilton as a check of the cofactor formula.
        let a = ModMatrix::new(11, [[3, 4, 7], [1, 0, 5], [2, 9, 6]]);
        let cp = a.char_poly();
        let mut acc = ModMatrix::from_entries(11, 3, &[0; 9]).unwrap();
        for (deg, &c) in cp.coeffs.iter().enumerate() {
            acc = acc.checked_add(&a.pow(deg as u64).scale(c as i64)).unwrap();
        }
        assert!(acc.entries().iter().all(|&v| v == 0));
    }

    #[test]
    fn psl_order_examples() {
        assert_eq!(ProjMatrix::from_rows(7, [[1, 1], [0, 1]]).order(), 7);
        assert_eq!(ProjMatrix::from_rows(7, [[0, 1], [-1, 0]]).order(), 2);
        assert_eq!(ProjMatrix::from_rows(7, [[2, 1], [1, 1]]).order(), 4);
        assert_eq!(ProjMatrix::from_rows(7, [[1, 1], [-1, 0]]).order(), 3);
    }

    #[test]
    fn canonical_sign_is_lexicographic_minimum() {
        let m = m2([[6, 0], [0, 6]]);
        let p = ProjMatrix::new(m).unwrap();
        assert_eq!(*p.rep(), ModMatrix::identity(7, 2));
        let q = ProjMatrix::new(m2([[0, 6], [1, 0]])).unwrap();
        assert_eq!(*q.rep(), m2([[0, 1], [6, 0]]));
    }

    #[test]
    fn sqrt_examples() {
        let half = Residue::new(1, 7).checked_div(Residue::new(2, 7)).unwrap();
        assert_eq!(half.value(), 4);
        let roots: Vec<u64> = sqrt_mod(half, 7)
            .unwrap()
            .iter()
            .map(|r| r.value())
            .collect();
        assert_eq!(roots, vec![2, 5]);
        assert!(sqrt_mod(Residue::new(-1, 7), 7).unwrap().is_empty());
        let zero: Vec<u64> = sqrt_mod(Residue::new(0, 13), 13)
            .unwrap()
            .iter()
            .map(|r| r.value())
            .collect();
        assert_eq!(zero, vec![0]);
        assert_eq!(sqrt_mod(Residue::new(1, 15), 15), Err(Error::NotPrime(15)));
    }

    #[test]
    fn crt_round_trip() {
        let a = m2([[2, 1], [1, 1]]);
        let b = ModMatrix::new(23, [[5, 3], [7, 9]]);
        let c = ModMatrix::crt(&[a, b]).unwrap();
        assert_eq!(c.modulus(), 161);
        assert_eq!(c.reduce_mod(7).unwrap(), a);
        assert_eq!(c.reduce_mod(23).unwrap(), b);
        assert!(ModMatrix::crt(&[a, ModMatrix::identity(14, 2)]).is_err());
    }

    #[test]
    fn residue_field_ops() {
        let a = Residue::new(-3, 7);
        assert_eq!(a.value(), 4);
        assert_eq!((a * a.inv().unwrap()).value(), 1);
        assert_eq!((-a).value(), 3);
        assert_eq!((a - Residue::new(5, 7)).value(), 6);
        assert_eq!(Residue::new(6, 14).inv(), Err(Error::Singular(14)));
    }

    #[test]
    fn serde_round_trip() {
        let m = ModMatrix::new(2, [[1, 1, 0], [0, 1, 1], [0, 0, 1]]);
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"{"modulus":2,"rows":[[1,1,0],[0,1,1],[0,0,1]]}"#);
        let back: ModMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }
}
