//! Coefficient rings for binary cubic forms: `Z` and `Z/NZ`.
//!
//! Two concrete rings behind one trait, which is all the paper-level
//! computations need. Integer elements are `i128`; modular elements are
//! canonically reduced `u64` with `N <= 2^31`, so products never overflow.

use std::fmt::Debug;
use std::hash::Hash;

use num::BigInt;

/// Commutative ring with enough structure to run form algebra.
pub trait Ring: Clone + PartialEq {
    type El: Clone + Eq + Hash + Debug;

    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn from_i64(&self, n: i64) -> Self::El;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool;
    fn is_unit(&self, a: &Self::El) -> bool;
    /// Multiplicative inverse, if `a` is a unit.
    fn inv(&self, a: &Self::El) -> Option<Self::El>;
}

/// The ring of rational integers, `i128`-backed.
///
/// Intermediates in the quartic invariant fit `i128` for coefficients up to
/// ~10^9; the enumeration paths stay far below that. Callers needing larger
/// inputs go through [`crate::forms::disc_big`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Zi;

impl Ring for Zi {
    type El = i128;

    fn zero(&self) -> i128 {
        0
    }
    fn one(&self) -> i128 {
        1
    }
    fn from_i64(&self, n: i64) -> i128 {
        n as i128
    }
    fn add(&self, a: &i128, b: &i128) -> i128 {
        a + b
    }
    fn sub(&self, a: &i128, b: &i128) -> i128 {
        a - b
    }
    fn mul(&self, a: &i128, b: &i128) -> i128 {
        a * b
    }
    fn neg(&self, a: &i128) -> i128 {
        -a
    }
    fn is_zero(&self, a: &i128) -> bool {
        *a == 0
    }
    fn is_unit(&self, a: &i128) -> bool {
        *a == 1 || *a == -1
    }
    fn inv(&self, a: &i128) -> Option<i128> {
        if self.is_unit(a) {
            Some(*a)
        } else {
            None
        }
    }
}

/// The residue ring `Z/NZ`, elements reduced to `0..N`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Zn {
    pub n: u64,
}

impl Zn {
    pub fn new(n: u64) -> Self {
        assert!(n >= 2 && n <= 1 << 31, "modulus out of supported range");
        Zn { n }
    }

    pub fn reduce_i64(&self, a: i64) -> u64 {
        a.rem_euclid(self.n as i64) as u64
    }

    pub fn reduce_i128(&self, a: i128) -> u64 {
        a.rem_euclid(self.n as i128) as u64
    }

    pub fn reduce_big(&self, a: &BigInt) -> u64 {
        use num::ToPrimitive;
        let m = BigInt::from(self.n);
        let r = ((a % &m) + &m) % &m;
        r.to_u64().unwrap()
    }
}

impl Ring for Zn {
    type El = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.n
    }
    fn from_i64(&self, a: i64) -> u64 {
        self.reduce_i64(a)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.n
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.n - b) % self.n
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.n
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.n - a) % self.n
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_unit(&self, a: &u64) -> bool {
        gcd_u64(*a, self.n) == 1
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        inv_mod(*a, self.n)
    }
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of `a` modulo `n` by the extended Euclidean algorithm.
pub fn inv_mod(a: u64, n: u64) -> Option<u64> {
    let (mut r0, mut r1) = (n as i128, (a % n) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(n as i128) as u64)
}

pub fn pow_mod(mut b: u64, mut e: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    b %= n;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % n;
        }
        b = b * b % n;
        e >>= 1;
    }
    acc
}

/// Prime factorization by trial division; moduli here are tiny.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_mod_prime_power() {
        let r = Zn::new(25);
        for a in 1..25u64 {
            if r.is_unit(&a) {
                let ai = r.inv(&a).unwrap();
                assert_eq!(r.mul(&a, &ai), 1);
            } else {
                assert!(r.inv(&a).is_none());
            }
        }
    }

    #[test]
    fn phi_and_factorization() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(9), 6);
        assert_eq!(euler_phi(15), 8);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
    }
}
