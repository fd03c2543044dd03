//! Dense univariate polynomials over F_p.
//!
//! Coefficients are stored in ascending power order with no trailing zeros,
//! so the zero polynomial is the empty vector and has degree
//! [`ExtDegree::NegInfinity`].

mod parse;
mod render;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::field::{FieldElement, FieldError, PrimeModulus};

pub use parse::{parse_poly, ParseError, ParseErrorKind};
pub use render::RenderStyle;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("sqrt(-1) does not exist modulo {0}")]
    IUnavailable(u64),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Degree in `Z>=0 ∪ {-inf}`. `NegInfinity` sorts below every finite degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtDegree {
    NegInfinity,
    Finite(usize),
}

impl ExtDegree {
    pub fn finite(self) -> Option<usize> {
        match self {
            ExtDegree::NegInfinity => None,
            ExtDegree::Finite(d) => Some(d),
        }
    }

    pub fn is_positive(self) -> bool {
        self > ExtDegree::Finite(0)
    }
}

impl Add for ExtDegree {
    type Output = ExtDegree;
    fn add(self, rhs: ExtDegree) -> ExtDegree {
        match (self, rhs) {
            (ExtDegree::Finite(a), ExtDegree::Finite(b)) => ExtDegree::Finite(a + b),
            _ => ExtDegree::NegInfinity,
        }
    }
}

impl fmt::Display for ExtDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtDegree::NegInfinity => write!(f, "-inf"),
            ExtDegree::Finite(d) => write!(f, "{d}"),
        }
    }
}

impl Serialize for ExtDegree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtDegree::NegInfinity => s.serialize_none(),
            ExtDegree::Finite(d) => s.serialize_u64(*d as u64),
        }
    }
}

impl<'de> Deserialize<'de> for ExtDegree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(match Option::<usize>::deserialize(d)? {
            None => ExtDegree::NegInfinity,
            Some(n) => ExtDegree::Finite(n),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    modulus: PrimeModulus,
    coeffs: Vec<u64>,
}

impl Polynomial {
    pub fn zero(modulus: PrimeModulus) -> Self {
        Polynomial {
            modulus,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(modulus: PrimeModulus, c: u64) -> Self {
        Self::from_coeffs(modulus, vec![c])
    }

    pub fn one(modulus: PrimeModulus) -> Self {
        Self::constant(modulus, 1)
    }

    /// The indeterminate `t`.
    pub fn t(modulus: PrimeModulus) -> Self {
        Self::monomial(modulus, 1, 1)
    }

    pub fn monomial(modulus: PrimeModulus, coeff: u64, power: usize) -> Self {
        let mut coeffs = vec![0; power + 1];
        coeffs[power] = coeff;
        Self::from_coeffs(modulus, coeffs)
    }

    /// Builds a polynomial from ascending coefficients, reducing them mod p
    /// and trimming trailing zeros.
    pub fn from_coeffs(modulus: PrimeModulus, mut coeffs: Vec<u64>) -> Self {
        let p = modulus.get();
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        let mut poly = Polynomial { modulus, coeffs };
        poly.trim();
        poly
    }

    pub fn from_signed(modulus: PrimeModulus, coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            modulus,
            coeffs.iter().map(|&c| modulus.reduce_signed(c)).collect(),
        )
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    #[inline]
    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    /// Ascending coefficients as residues in `[0, p)`.
    #[inline]
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> FieldElement {
        self.modulus
            .element(self.coeffs.get(power).copied().unwrap_or(0))
    }

    pub fn degree(&self) -> ExtDegree {
        match self.coeffs.len() {
            0 => ExtDegree::NegInfinity,
            n => ExtDegree::Finite(n - 1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True for the zero polynomial and nonzero constants.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> Option<FieldElement> {
        self.coeffs.last().map(|&c| self.modulus.element(c))
    }

    /// The constant term as a residue, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<u64> {
        match self.coeffs.len() {
            0 => Some(0),
            1 => Some(self.coeffs[0]),
            _ => None,
        }
    }

    fn check(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.modulus != other.modulus {
            Err(PolyError::ModulusMismatch(
                self.modulus.get(),
                other.modulus.get(),
            ))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        let m = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).copied().unwrap_or(0);
                let b = other.coeffs.get(k).copied().unwrap_or(0);
                m.add(a, b)
            })
            .collect();
        let mut out = Polynomial { modulus: m, coeffs };
        out.trim();
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        self.try_add(&other.negate())
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(self.modulus));
        }
        let m = self.modulus;
        let p = m.get() as u128;
        // Accumulate in u128; reduce whenever the next product could overflow.
        let mut acc = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let slot = &mut acc[i + j];
                *slot += a as u128 * b as u128;
                if *slot >= 1 << 126 {
                    *slot %= p;
                }
            }
        }
        let coeffs = acc.into_iter().map(|c| (c % p) as u64).collect();
        // Product of nonzero polynomials over a field has no trailing zeros.
        Ok(Polynomial { modulus: m, coeffs })
    }

    pub fn negate(&self) -> Polynomial {
        let m = self.modulus;
        Polynomial {
            modulus: m,
            coeffs: self.coeffs.iter().map(|&c| m.neg(c)).collect(),
        }
    }

    pub fn scale(&self, c: u64) -> Polynomial {
        let m = self.modulus;
        let c = c % m.get();
        if c == 0 {
            return Polynomial::zero(m);
        }
        Polynomial {
            modulus: m,
            coeffs: self.coeffs.iter().map(|&a| m.mul(a, c)).collect(),
        }
    }

    pub fn try_scale(&self, c: FieldElement) -> Result<Polynomial, PolyError> {
        if c.modulus() != self.modulus {
            return Err(PolyError::ModulusMismatch(
                self.modulus.get(),
                c.modulus().get(),
            ));
        }
        Ok(self.scale(c.value()))
    }

    pub fn square(&self) -> Polynomial {
        self * self
    }

    /// Long division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn divrem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial), PolyError> {
        self.check(divisor)?;
        let m = self.modulus;
        let lead = *divisor.coeffs.last().ok_or(PolyError::DivisionByZero)?;
        let lead_inv = m.inv(lead).ok_or(PolyError::DivisionByZero)?;
        let dlen = divisor.coeffs.len();
        if self.coeffs.len() < dlen {
            return Ok((Polynomial::zero(m), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dlen + 1];
        for k in (0..quot.len()).rev() {
            let c = m.mul(rem[k + dlen - 1], lead_inv);
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = m.sub(rem[k + j], m.mul(c, d));
            }
        }
        rem.truncate(dlen - 1);
        Ok((
            Polynomial::from_coeffs(m, quot),
            Polynomial::from_coeffs(m, rem),
        ))
    }

    /// Square root with canonical leading coefficient, if `self` is a square.
    ///
    /// Coefficients of the root are fixed top-down by matching the upper half
    /// of `g^2` against `self`; the full square is checked at the end.
    pub fn sqrt(&self) -> Option<Polynomial> {
        let m = self.modulus;
        if self.is_zero() {
            return Some(self.clone());
        }
        let deg = self.coeffs.len() - 1;
        if !deg.is_multiple_of(2) {
            return None;
        }
        let half = deg / 2;
        let lead = m.sqrt(self.coeffs[deg])?;
        let two_lead_inv = m.inv(m.add(lead, lead))?;
        let mut g = vec![0u64; half + 1];
        g[half] = lead;
        for k in (0..half).rev() {
            // coefficient of t^(half + k) in g^2 is 2 g_half g_k + sum_{j=k+1}^{half-1} g_j g_{half+k-j}
            let mut partial = 0u64;
            for j in (k + 1)..half {
                partial = m.add(partial, m.mul(g[j], g[half + k - j]));
            }
            let target = m.sub(self.coeffs[half + k], partial);
            g[k] = m.mul(target, two_lead_inv);
        }
        let root = Polynomial::from_coeffs(m, g);
        (root.square() == *self).then_some(root)
    }

    pub fn render(&self, style: RenderStyle) -> Result<String, PolyError> {
        render::render(self, style)
    }

    /// Renders with `i` when the field has one, plainly otherwise.
    pub fn render_auto(&self) -> String {
        let style = if self.modulus.has_sqrt_minus_one() {
            RenderStyle::WithI
        } else {
            RenderStyle::Plain
        };
        render::render(self, style).expect("style chosen from modulus")
    }
}

impl PartialOrd for Polynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: modulus, then lexicographic on ascending coefficients.
impl Ord for Polynomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.modulus
            .cmp(&other.modulus)
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render::render(self, RenderStyle::Plain).expect("plain render"))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs)
                    .expect("polynomials with different moduli")
            }
        }

        impl $trait for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.negate()
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.negate()
    }
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    p: u64,
    coeffs: Vec<u64>,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyJson {
            p: self.modulus.get(),
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = PolyJson::deserialize(d)?;
        let modulus = PrimeModulus::new(raw.p).map_err(D::Error::custom)?;
        if let Some(&c) = raw.coeffs.iter().find(|&&c| c >= raw.p) {
            return Err(D::Error::custom(format!(
                "coefficient {c} not reduced modulo {}",
                raw.p
            )));
        }
        if raw.coeffs.last() == Some(&0) {
            return Err(D::Error::custom("trailing zero coefficient"));
        }
        Ok(Polynomial {
            modulus,
            coeffs: raw.coeffs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn poly(p: u64, c: &[i64]) -> Polynomial {
        Polynomial::from_signed(fp(p), c)
    }

    #[test]
    fn degree_conventions() {
        let z = Polynomial::zero(fp(13));
        assert_eq!(z.degree(), ExtDegree::NegInfinity);
        assert!(ExtDegree::NegInfinity < ExtDegree::Finite(0));
        assert_eq!(poly(13, &[0, 0, 0]), z);
        assert_eq!(poly(13, &[3, 0, 2, 0]).degree(), ExtDegree::Finite(2));
        assert_eq!(z.leading_coeff(), None);
        assert_eq!(
            ExtDegree::Finite(2) + ExtDegree::NegInfinity,
            ExtDegree::NegInfinity
        );
    }

    #[test]
    fn small_arithmetic() {
        let f = poly(5, &[1, 1]);
        assert_eq!(&f * &f, poly(5, &[1, 2, 1]));
        let (q, r) = poly(5, &[1, 2, 1]).divrem(&f).unwrap();
        assert_eq!(q, f);
        assert!(r.is_zero());
        assert_eq!(
            f.divrem(&Polynomial::zero(fp(5))),
            Err(PolyError::DivisionByZero)
        );
        assert_eq!(
            f.try_add(&poly(7, &[1])),
            Err(PolyError::ModulusMismatch(5, 7))
        );
        // cancellation of the leading term
        assert_eq!(&poly(5, &[1, 1]) - &poly(5, &[0, 1]), poly(5, &[1]));
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(poly(5, &[1, 2, 1]).sqrt(), Some(poly(5, &[1, 1])));
        assert_eq!(poly(5, &[0, 0, 4]).sqrt(), Some(poly(5, &[0, 2])));
        assert_eq!(poly(5, &[1, 0, 1]).sqrt(), None);
        assert_eq!(poly(5, &[0, 1]).sqrt(), None);
        assert_eq!(poly(7, &[3]).sqrt(), None);
    }

    #[test]
    fn t_squared_plus_one_is_not_a_square_mod_5() {
        // exhaustive over all polynomials of degree <= 1
        let m = fp(5);
        let target = poly(5, &[1, 0, 1]);
        for a in 0..5 {
            for b in 0..5 {
                let g = Polynomial::from_coeffs(m, vec![b, a]);
                assert_ne!(g.square(), target);
            }
        }
    }

    #[test]
    fn json_shape() {
        let f = poly(13, &[11, 10, 1]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"p":13,"coeffs":[11,10,1]}"#);
        assert_eq!(serde_json::from_str::<Polynomial>(&s).unwrap(), f);
        assert_eq!(
            serde_json::to_string(&Polynomial::zero(fp(5))).unwrap(),
            r#"{"p":5,"coeffs":[]}"#
        );
        assert!(serde_json::from_str::<Polynomial>(r#"{"p":5,"coeffs":[1,0]}"#).is_err());
        assert!(serde_json::from_str::<Polynomial>(r#"{"p":5,"coeffs":[7]}"#).is_err());
        assert!(serde_json::from_str::<Polynomial>(r#"{"p":6,"coeffs":[1]}"#).is_err());
    }

    const PRIMES: [u64; 4] = [3, 5, 13, 1_000_000_007];

    fn arb_poly(p: u64, max_len: usize) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(0..p, 0..max_len)
            .prop_map(move |c| Polynomial::from_coeffs(PrimeModulus::new(p).unwrap(), c))
    }

    fn arb_triple() -> impl Strategy<Value = (Polynomial, Polynomial, Polynomial)> {
        (0..PRIMES.len()).prop_flat_map(|i| {
            let p = PRIMES[i];
            (arb_poly(p, 7), arb_poly(p, 7), arb_poly(p, 7))
        })
    }

    proptest! {
        #[test]
        fn ring_axioms((f, g, h) in arb_triple()) {
            prop_assert_eq!(&f * &g, &g * &f);
            prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
            prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
            prop_assert_eq!(&(&f + &g) - &g, f.clone());
            prop_assert_eq!((&f * &g).degree(), f.degree() + g.degree());
        }

        #[test]
        fn divrem_roundtrip((f, g, _h) in arb_triple()) {
            prop_assume!(!g.is_zero());
            let (q, r) = f.divrem(&g).unwrap();
            prop_assert_eq!(&(&q * &g) + &r, f);
            prop_assert!(r.degree() < g.degree());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn sqrt_of_square((f, _g, _h) in arb_triple()) {
            let root = f.square().sqrt().expect("a square has a root");
            prop_assert!(root == f || root == -&f);
            if let Some(lc) = root.leading_coeff() {
                prop_assert!(lc.value() <= f.modulus().get() - lc.value());
            }
        }
    }
}
