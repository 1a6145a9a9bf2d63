//! `F_p[i]` with `i² = −1`, for primes where `−1` is not a square.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{invalid, Error, Result};
use crate::modp::{euler_criterion, inv_mod, is_prime};

/// `u + v·i`
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp2 {
    p: u64,
    pub u: u64,
    pub v: u64,
}

impl Fp2 {
    pub fn new(p: u64, u: i64, v: i64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if euler_criterion(p - 1, p) != -1 {
            return Err(invalid(format!(
                "-1 is a square mod {p}; the extension would split"
            )));
        }
        Ok(Self::raw(p, u, v))
    }

    fn raw(p: u64, u: i64, v: i64) -> Self {
        Fp2 {
            p,
            u: u.rem_euclid(p as i64) as u64,
            v: v.rem_euclid(p as i64) as u64,
        }
    }

    pub fn scalar(&self, a: u64) -> Self {
        Self::raw(self.p, a as i64, 0)
    }

    pub fn i(&self) -> Self {
        Self::raw(self.p, 0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.u == 0 && self.v == 0
    }

    /// `(u − v i)/(u² + v²)`
    pub fn inv(&self) -> Result<Self> {
        let p = self.p;
        let norm = (self.u * self.u + self.v * self.v) % p;
        let n_inv = inv_mod(norm, p).ok_or(Error::Singular(p))?;
        Ok(Fp2 {
            p,
            u: self.u * n_inv % p,
            v: (p - self.v) % p * n_inv % p,
        })
    }

    /// Image under the fractional linear map `z ↦ (az + b)/(cz + d)`.
    pub fn mobius(&self, m: [u64; 4]) -> Result<Self> {
        let [a, b, c, d] = m.map(|x| self.scalar(x));
        let den = (c * *self + d).inv()?;
        Ok((a * *self + b) * den)
    }
}

impl Add for Fp2 {
    type Output = Fp2;
    fn add(self, o: Fp2) -> Fp2 {
        Fp2 {
            u: (self.u + o.u) % self.p,
            v: (self.v + o.v) % self.p,
            ..self
        }
    }
}

impl Sub for Fp2 {
    type Output = Fp2;
    fn sub(self, o: Fp2) -> Fp2 {
        self + (-o)
    }
}

impl Neg for Fp2 {
    type Output = Fp2;
    fn neg(self) -> Fp2 {
        Fp2 {
            u: (self.p - self.u) % self.p,
            v: (self.p - self.v) % self.p,
            ..self
        }
    }
}

impl Mul for Fp2 {
    type Output = Fp2;
    fn mul(self, o: Fp2) -> Fp2 {
        let p = self.p;
        // (u + vi)(s + ti) = (us − vt) + (ut + vs) i
        Fp2 {
            u: (self.u * o.u % p + p - self.v * o.v % p) % p,
            v: (self.u * o.v + self.v * o.u) % p,
            ..self
        }
    }
}
