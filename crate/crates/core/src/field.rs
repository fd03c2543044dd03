//! Arithmetic in the prime field F_p for odd primes p < 2^63.
//!
//! Residues are stored as `u64` in `[0, p)`; products go through `u128`.
//! [`PrimeModulus`] carries the raw residue operations used by the polynomial
//! layer, [`FieldElement`] is the checked, modulus-tagged value type.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not an odd prime below 2^63")]
    InvalidModulus(u64),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
}

const MAX_MODULUS: u64 = 1 << 63;

/// An odd prime `p` with `3 <= p < 2^63`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p < 3 || p.is_multiple_of(2) || p >= MAX_MODULUS || !is_prime(p) {
            return Err(FieldError::InvalidModulus(p));
        }
        Ok(PrimeModulus(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// Whether `-1` is a square, i.e. `p = 1 (mod 4)`.
    pub fn has_sqrt_minus_one(self) -> bool {
        self.0 % 4 == 1
    }

    pub fn element(self, value: u64) -> FieldElement {
        FieldElement {
            value: value % self.0,
            modulus: self,
        }
    }

    pub fn element_signed(self, value: i64) -> FieldElement {
        self.element(self.reduce_signed(value))
    }

    #[inline]
    pub fn reduce_signed(self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.0 as i128) as u64
    }

    /// Representative of `a` in `(-p/2, p/2]`.
    pub fn signed(self, a: u64) -> i64 {
        if a > self.0 / 2 {
            a as i64 - self.0 as i64
        } else {
            a as i64
        }
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u64) -> Option<u64> {
        if a.is_multiple_of(self.0) {
            None
        } else {
            Some(self.pow(a, self.0 - 2))
        }
    }

    /// Euler's criterion: `a^((p-1)/2)` is 0 or 1 exactly for squares.
    pub fn is_square(self, a: u64) -> bool {
        a == 0 || self.pow(a, (self.0 - 1) / 2) == 1
    }

    /// Tonelli-Shanks. Returns the smaller of the two roots.
    pub fn sqrt(self, a: u64) -> Option<u64> {
        let p = self.0;
        let a = a % p;
        if a == 0 {
            return Some(0);
        }
        if !self.is_square(a) {
            return None;
        }
        let root = if p % 4 == 3 {
            self.pow(a, (p + 1) / 4)
        } else {
            let mut q = p - 1;
            let mut s = 0u32;
            while q.is_multiple_of(2) {
                q /= 2;
                s += 1;
            }
            let mut z = 2u64;
            while self.is_square(z) {
                z += 1;
            }
            let mut m = s;
            let mut c = self.pow(z, q);
            let mut t = self.pow(a, q);
            let mut r = self.pow(a, q.div_ceil(2));
            while t != 1 {
                let mut i = 0u32;
                let mut t2 = t;
                while t2 != 1 {
                    t2 = self.mul(t2, t2);
                    i += 1;
                }
                let mut b = c;
                for _ in 0..(m - i - 1) {
                    b = self.mul(b, b);
                }
                m = i;
                c = self.mul(b, b);
                t = self.mul(t, c);
                r = self.mul(r, b);
            }
            r
        };
        Some(root.min(p - root))
    }

    /// The canonical square root of `-1`, present iff `p = 1 (mod 4)`.
    pub fn sqrt_minus_one(self) -> Option<FieldElement> {
        if !self.has_sqrt_minus_one() {
            return None;
        }
        self.sqrt(self.0 - 1).map(|v| self.element(v))
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Deterministic Miller-Rabin; the first twelve prime bases cover all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'bases: for &a in &BASES {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// An element of F_p tagged with its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    modulus: PrimeModulus,
}

impl FieldElement {
    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn check(self, other: FieldElement) -> Result<PrimeModulus, FieldError> {
        if self.modulus != other.modulus {
            Err(FieldError::ModulusMismatch(
                self.modulus.get(),
                other.modulus.get(),
            ))
        } else {
            Ok(self.modulus)
        }
    }

    pub fn try_add(self, other: FieldElement) -> Result<FieldElement, FieldError> {
        let m = self.check(other)?;
        Ok(m.element(m.add(self.value, other.value)))
    }

    pub fn try_sub(self, other: FieldElement) -> Result<FieldElement, FieldError> {
        let m = self.check(other)?;
        Ok(m.element(m.sub(self.value, other.value)))
    }

    pub fn try_mul(self, other: FieldElement) -> Result<FieldElement, FieldError> {
        let m = self.check(other)?;
        Ok(m.element(m.mul(self.value, other.value)))
    }

    pub fn try_div(self, other: FieldElement) -> Result<FieldElement, FieldError> {
        let m = self.check(other)?;
        let inv = m.inv(other.value).ok_or(FieldError::DivisionByZero)?;
        Ok(m.element(m.mul(self.value, inv)))
    }

    pub fn inv(self) -> Result<FieldElement, FieldError> {
        self.modulus
            .inv(self.value)
            .map(|v| self.modulus.element(v))
            .ok_or(FieldError::DivisionByZero)
    }

    pub fn pow(self, exp: u64) -> FieldElement {
        self.modulus.element(self.modulus.pow(self.value, exp))
    }

    /// Canonical (smaller) square root, if `self` is a square.
    pub fn sqrt(self) -> Option<FieldElement> {
        self.modulus
            .sqrt(self.value)
            .map(|v| self.modulus.element(v))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// The operator impls panic on mismatched moduli; use the `try_*` methods
// when the operands come from different sources.
impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.try_add(rhs)
            .expect("field elements with different moduli")
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self.try_sub(rhs)
            .expect("field elements with different moduli")
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.try_mul(rhs)
            .expect("field elements with different moduli")
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.modulus.element(self.modulus.neg(self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn rejects_bad_moduli() {
        for p in [0, 1, 2, 4, 9, 15, 561, 1 << 63, u64::MAX] {
            assert_eq!(PrimeModulus::new(p), Err(FieldError::InvalidModulus(p)));
        }
        assert!(PrimeModulus::new(9_223_372_036_854_775_783).is_ok());
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        let trial = |n: u64| {
            n >= 2
                && (2..)
                    .take_while(|d| d * d <= n)
                    .all(|d| !n.is_multiple_of(d))
        };
        for n in 0..5000u64 {
            assert_eq!(is_prime(n), trial(n), "n = {n}");
        }
        // strong pseudoprime to bases 2..=11
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn basic_arithmetic() {
        let m = fp(5);
        assert_eq!((m.element(2) * m.element(3)).value(), 1);
        assert_eq!((-m.element(0)).value(), 0);
        assert_eq!(fp(13).element(2).inv().unwrap().value(), 7);
        assert_eq!(m.element(0).inv(), Err(FieldError::DivisionByZero));
        assert_eq!(
            m.element(3).try_div(m.element(0)),
            Err(FieldError::DivisionByZero)
        );
        assert_eq!(
            m.element(1).try_add(fp(7).element(1)),
            Err(FieldError::ModulusMismatch(5, 7))
        );
    }

    #[test]
    fn square_roots() {
        assert_eq!(fp(13).element(12).sqrt().unwrap().value(), 5);
        assert_eq!(fp(5).element(0).sqrt().unwrap().value(), 0);
        assert_eq!(fp(7).element(3).sqrt(), None);
    }

    #[test]
    fn sqrt_minus_one_by_residue_class() {
        assert_eq!(fp(5).sqrt_minus_one().unwrap().value(), 2);
        assert_eq!(fp(13).sqrt_minus_one().unwrap().value(), 5);
        assert_eq!(fp(7).sqrt_minus_one(), None);
        for p in (3..2000).filter(|&p| is_prime(p)) {
            let m = fp(p);
            match m.sqrt_minus_one() {
                Some(i) => {
                    assert_eq!(p % 4, 1);
                    assert_eq!((i * i).value(), p - 1);
                    assert!(i.value() <= p / 2);
                }
                None => assert_eq!(p % 4, 3),
            }
        }
    }

    #[test]
    fn sqrt_agrees_with_exhaustive_squares() {
        for p in [3u64, 5, 7, 13, 17, 41, 97, 257] {
            let m = fp(p);
            let squares: std::collections::BTreeSet<u64> = (0..p).map(|r| m.mul(r, r)).collect();
            for a in 0..p {
                assert_eq!(m.sqrt(a).is_some(), squares.contains(&a), "p={p} a={a}");
            }
        }
    }

    const PRIMES: [u64; 6] = [3, 5, 13, 65_537, 1_000_000_007, 9_223_372_036_854_775_783];

    proptest! {
        #[test]
        fn inverse_and_fermat(pi in 0..PRIMES.len(), a in any::<u64>()) {
            let m = fp(PRIMES[pi]);
            let a = m.element(a);
            if !a.is_zero() {
                prop_assert_eq!((a * a.inv().unwrap()).value(), 1);
                prop_assert_eq!(a.pow(m.get() - 1).value(), 1);
            }
        }

        #[test]
        fn sqrt_roundtrip(pi in 0..PRIMES.len(), a in any::<u64>()) {
            let m = fp(PRIMES[pi]);
            let a = m.element(a);
            let euler = a.pow((m.get() - 1) / 2).value();
            match a.sqrt() {
                Some(r) => {
                    prop_assert_eq!(r * r, a);
                    prop_assert!(r.value() <= m.get() - r.value());
                    prop_assert!(euler <= 1);
                }
                None => prop_assert_eq!(euler, m.get() - 1),
            }
        }
    }
}
