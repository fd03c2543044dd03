//! Closed-form signature and solution counts.
//!
//! ```text
//! E(n)    = sum_{d | n} mu(d) (floor(n/2d) + 1),   E(1) = 1
//! C_b(n)  = sum_{d | n+b, b d < n+b} E(d)
//! C_A(n)  = C_0(n) + 1 if A is constant, C_b(n) otherwise
//! #M_A(n) = 4(q-1) sum_{d | n+b, b d < n+b} q^((n+b)/d - b) E(d)
//! ```

use num_rational::Ratio;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::field::is_prime;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("n must be positive")]
    ZeroN,
    #[error("the sandwich bounds are only stated for constant A")]
    NonConstantA,
    #[error("no closed form is available for constant A; use the brute-force census")]
    ConstantANotSupported,
    #[error("{0} is not an odd prime")]
    InvalidModulus(u64),
    #[error("count overflows 128 bits")]
    Overflow,
}

/// Trial-division factorization as `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
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

pub fn mobius(n: u64) -> i8 {
    assert!(n >= 1, "mobius is defined for n >= 1");
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors are defined for n >= 1");
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let base = out.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            out.extend(base.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

/// Number of (1,0)-Euclid tree triples with maximum `n` (and `E(1) = 1`).
pub fn count_e(n: u64) -> u64 {
    assert!(n >= 1, "E is defined for n >= 1");
    let total: i64 = divisors(n)
        .into_iter()
        .map(|d| mobius(d) as i64 * ((n / (2 * d)) as i64 + 1))
        .sum();
    u64::try_from(total).expect("E(n) is non-negative")
}

pub fn count_c0(n: u64) -> u64 {
    n / 2 + 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CountTerm {
    pub d: u64,
    #[serde(rename = "E")]
    pub e: u64,
    pub multiplier: u128,
}

impl CountTerm {
    pub fn contribution(&self) -> u128 {
        self.e as u128 * self.multiplier
    }
}

/// A divisor sum together with its individual terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub value: u128,
    pub terms: Vec<CountTerm>,
}

impl CountReport {
    fn from_terms(terms: Vec<CountTerm>) -> Result<Self, CountError> {
        let value = terms
            .iter()
            .try_fold(0u128, |acc, t| {
                (t.e as u128)
                    .checked_mul(t.multiplier)
                    .and_then(|c| acc.checked_add(c))
            })
            .ok_or(CountError::Overflow)?;
        Ok(CountReport { value, terms })
    }

    pub fn term(&self, d: u64) -> Option<&CountTerm> {
        self.terms.iter().find(|t| t.d == d)
    }
}

/// Divisors `d` of `n + beta` with `beta d < n + beta`.
fn admissible_divisors(beta: u64, n: u64) -> impl Iterator<Item = u64> {
    let m = n + beta;
    divisors(m).into_iter().filter(move |&d| beta * d < m)
}

pub fn count_c_beta(beta: u64, n: u64) -> Result<CountReport, CountError> {
    if n == 0 {
        return Err(CountError::ZeroN);
    }
    let terms = admissible_divisors(beta, n)
        .map(|d| CountTerm {
            d,
            e: count_e(d),
            multiplier: 1,
        })
        .collect();
    CountReport::from_terms(terms)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CountQuery {
    /// `deg A`; zero exactly when `A` is constant.
    pub beta: u64,
    pub n: u64,
}

impl CountQuery {
    pub fn constant_a(&self) -> bool {
        self.beta == 0
    }
}

/// Number of distinct signatures of Markoff triples of height exactly `n`.
pub fn count_c_a(query: CountQuery) -> Result<u64, CountError> {
    if query.n == 0 {
        return Err(CountError::ZeroN);
    }
    if query.constant_a() {
        Ok(count_c0(query.n) + 1)
    } else {
        let r = count_c_beta(query.beta, query.n)?;
        Ok(u64::try_from(r.value).map_err(|_| CountError::Overflow)?)
    }
}

fn ratio_text<S: Serializer>(r: &Ratio<u64>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CumulativeCount {
    pub h: u64,
    pub total: u64,
    /// Strict lower bound `(H^2 + 5H)/4`.
    #[serde(serialize_with = "ratio_text")]
    pub lower: Ratio<u64>,
    /// Inclusive upper bound `(H^2 + 9H)/4`.
    #[serde(serialize_with = "ratio_text")]
    pub upper: Ratio<u64>,
}

impl CumulativeCount {
    pub fn within_bounds(&self) -> bool {
        let t = Ratio::from_integer(self.total);
        self.lower < t && t <= self.upper
    }

    /// `total / H^2`.
    pub fn density(&self) -> Ratio<u64> {
        Ratio::new(self.total, self.h * self.h)
    }
}

/// `sum_{n=1}^{H} C_A(n)` for constant `A`, with its sandwich bounds.
pub fn cumulative_signatures(beta: u64, h: u64) -> Result<CumulativeCount, CountError> {
    if beta != 0 {
        return Err(CountError::NonConstantA);
    }
    if h == 0 {
        return Err(CountError::ZeroN);
    }
    let total = (1..=h).map(|n| count_c0(n) + 1).sum();
    Ok(CumulativeCount {
        h,
        total,
        lower: Ratio::new(h * h + 5 * h, 4),
        upper: Ratio::new(h * h + 9 * h, 4),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteFieldCount {
    pub q: u64,
    pub beta: u64,
    pub n: u64,
    /// Set when `q = 3 (mod 4)`: there is no square root of -1 and no solution.
    pub empty: bool,
    #[serde(flatten)]
    pub report: CountReport,
}

/// Number of Markoff triples of height `n` over `F_q[t]` for `deg A = beta >= 1`,
/// evaluated term by term as written.
pub fn count_finite_field(q: u64, beta: u64, n: u64) -> Result<FiniteFieldCount, CountError> {
    if q == 2 || !is_prime(q) {
        return Err(CountError::InvalidModulus(q));
    }
    if beta == 0 {
        return Err(CountError::ConstantANotSupported);
    }
    if n == 0 {
        return Err(CountError::ZeroN);
    }
    if q % 4 == 3 {
        return Ok(FiniteFieldCount {
            q,
            beta,
            n,
            empty: true,
            report: CountReport {
                value: 0,
                terms: Vec::new(),
            },
        });
    }
    let m = n + beta;
    let terms = admissible_divisors(beta, n)
        .map(|d| {
            let exp = u32::try_from(m / d - beta).map_err(|_| CountError::Overflow)?;
            let multiplier = (q as u128)
                .checked_pow(exp)
                .and_then(|v| v.checked_mul(4 * (q as u128 - 1)))
                .ok_or(CountError::Overflow)?;
            Ok(CountTerm {
                d,
                e: count_e(d),
                multiplier,
            })
        })
        .collect::<Result<Vec<_>, CountError>>()?;
    Ok(FiniteFieldCount {
        q,
        beta,
        n,
        empty: false,
        report: CountReport::from_terms(terms)?,
    })
}
