use std::fmt;

use crate::error::{invalid, Error, Result};

use super::GroupElement;

/// Permutation of `0..n`, composed so that `(a.op(b))(x) = a(b(x))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let slot = seen
                .get_mut(i as usize)
                .ok_or_else(|| invalid(format!("image {i} out of range")))?;
            if *slot {
                return Err(invalid(format!("image {i} repeated")));
            }
            *slot = true;
        }
        Ok(Perm { images })
    }

    /// Build from disjoint cycles on `0..n`.
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                let next = cycle[(k + 1) % cycle.len()];
                if x as usize >= n || next as usize >= n {
                    return Err(invalid(format!("point {x} outside 0..{n}")));
                }
                images[x as usize] = next;
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    /// Act on `0..a+b` with `a` on the first block and `b` on the second.
    pub fn direct_sum(a: &Perm, b: &Perm) -> Perm {
        let shift = a.degree() as u32;
        let mut images = a.images.clone();
        images.extend(b.images.iter().map(|&x| x + shift));
        Perm { images }
    }

    /// Pad with fixed points up to degree `n`.
    pub fn extend(&self, n: usize) -> Perm {
        let mut images = self.images.clone();
        images.extend(self.degree() as u32..n as u32);
        Perm { images }
    }
}

impl GroupElement for Perm {
    fn op(&self, other: &Self) -> Self {
        Perm {
            images: other
                .images
                .iter()
                .map(|&x| self.images[x as usize])
                .collect(),
        }
    }

    fn inverse(&self) -> Self {
        let mut images = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Perm { images }
    }

    fn identity_like(&self) -> Self {
        Perm::identity(self.degree())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.degree() != other.degree() {
            return Err(Error::DimensionMismatch(self.degree(), other.degree()));
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

/// Element `a^i x^j` of the metacyclic group
/// `⟨a, x | a^m = 1, x^n = a^s, x a x⁻¹ = a^r⟩`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Metacyclic {
    m: u32,
    n: u32,
    r: u32,
    s: u32,
    i: u32,
    j: u32,
}

impl Metacyclic {
    /// Parameters must satisfy `r^n ≡ 1` and `r·s ≡ s (mod m)`.
    pub fn new(m: u32, n: u32, r: u32, s: u32, i: u32, j: u32) -> Result<Self> {
        let r_pow_n = (0..n).fold(1u64, |acc, _| acc * r as u64 % m as u64);
        if m == 0
            || n == 0
            || r_pow_n != 1 % m as u64
            || (r as u64 * s as u64) % m as u64 != s as u64 % m as u64
        {
            return Err(invalid(format!(
                "inconsistent metacyclic parameters m={m} n={n} r={r} s={s}"
            )));
        }
        Ok(Metacyclic {
            m,
            n,
            r: r % m,
            s: s % m,
            i: i % m,
            j: j % n,
        })
    }

    pub fn a(m: u32, n: u32, r: u32, s: u32) -> Result<Self> {
        Self::new(m, n, r, s, 1, 0)
    }

    pub fn x(m: u32, n: u32, r: u32, s: u32) -> Result<Self> {
        Self::new(m, n, r, s, 0, 1)
    }

    fn r_pow(&self, e: u32) -> u64 {
        (0..e).fold(1u64, |acc, _| acc * self.r as u64 % self.m as u64)
    }
}

impl GroupElement for Metacyclic {
    fn op(&self, o: &Self) -> Self {
        let m = self.m as u64;
        // a^i x^j a^k x^l = a^(i + r^j k) x^(j + l)
        let mut i = (self.i as u64 + self.r_pow(self.j) * o.i as u64) % m;
        let mut j = self.j + o.j;
        if j >= self.n {
            j -= self.n;
            i = (i + self.s as u64) % m;
        }
        Metacyclic {
            i: i as u32,
            j,
            ..*self
        }
    }

    fn inverse(&self) -> Self {
        let order = (self.m * self.n) as usize;
        let mut x = *self;
        let mut prev = self.identity_like();
        for _ in 0..order {
            if x == self.identity_like() {
                return prev;
            }
            prev = x;
            x = x.op(self);
        }
        unreachable!("element order exceeds group order")
    }

    fn identity_like(&self) -> Self {
        Metacyclic {
            i: 0,
            j: 0,
            ..*self
        }
    }

    fn check_compatible(&self, o: &Self) -> Result<()> {
        if (self.m, self.n, self.r, self.s) != (o.m, o.n, o.r, o.s) {
            return Err(invalid("metacyclic elements from different groups"));
        }
        Ok(())
    }
}
