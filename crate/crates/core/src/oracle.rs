//! Brute-force ground truth for the closed forms in [`crate::counting`].
//!
//! Solutions are enumerated by running over all pairs `(x, y)` of bounded
//! degree and solving `z^2 - (Axy) z + (x^2 + y^2) = 0` with a polynomial
//! square root of the discriminant.

use num_rational::Ratio;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::counting::{count_finite_field, CountError};
use crate::euclid::{euclid_branch, gcd, EuclidTriple, TreeId};
use crate::field::PrimeModulus;
use crate::markoff::{
    descend_to_terminal, is_fundamental, is_solution, sort_triple, MarkoffContext, MarkoffError,
    MarkoffTriple, Terminal,
};
use crate::poly::{ExtDegree, Polynomial};
use crate::Branch;

/// Default cap on candidate `(x, y)` pairs.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1_000_000_000;
pub const MAX_ORACLE_E: u64 = 10_000;
pub const MAX_ORACLE_C_BETA: u64 = 500;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{needed} candidates exceed the budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error(transparent)]
    Markoff(#[from] MarkoffError),
    #[error(transparent)]
    Count(#[from] CountError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnumerationConvention {
    /// Every coordinate order.
    Ordered,
    /// Only `deg x <= deg y <= deg z`.
    DegreeSorted,
}

impl EnumerationConvention {
    pub const BOTH: [EnumerationConvention; 2] = [
        EnumerationConvention::Ordered,
        EnumerationConvention::DegreeSorted,
    ];

    fn admits(self, p: &MarkoffTriple) -> bool {
        match self {
            EnumerationConvention::Ordered => true,
            EnumerationConvention::DegreeSorted => p.is_degree_sorted(),
        }
    }
}

/// All polynomials of degree at most `max_degree` (zero included), indexed by
/// their base-`q` coefficient digits.
pub fn all_polynomials(m: PrimeModulus, max_degree: usize) -> Vec<Polynomial> {
    let q = m.get();
    let len = max_degree + 1;
    let count = q.pow(len as u32);
    (0..count)
        .map(|mut k| {
            let mut coeffs = Vec::with_capacity(len);
            for _ in 0..len {
                coeffs.push(k % q);
                k /= q;
            }
            Polynomial::from_coeffs(m, coeffs)
        })
        .collect()
}

fn check_budget(q: u64, exponent: usize, budget: u64) -> Result<(), OracleError> {
    let needed = (q as u128)
        .checked_pow(exponent as u32)
        .unwrap_or(u128::MAX);
    if needed > budget as u128 {
        return Err(OracleError::BudgetExceeded { needed, budget });
    }
    Ok(())
}

struct Solver<'a> {
    ctx: &'a MarkoffContext,
    polys: Vec<Polynomial>,
    max_height: ExtDegree,
    half: u64,
    convention: EnumerationConvention,
}

impl Solver<'_> {
    fn new(
        ctx: &MarkoffContext,
        max_height: usize,
        convention: EnumerationConvention,
        budget: u64,
    ) -> Result<Solver<'_>, OracleError> {
        let m = ctx.modulus();
        check_budget(m.get(), 2 * (max_height + 1), budget)?;
        Ok(Solver {
            ctx,
            polys: all_polynomials(m, max_height),
            max_height: ExtDegree::Finite(max_height),
            half: m.inv(2).expect("p is odd"),
            convention,
        })
    }

    /// Solutions with first coordinate `polys[xi]`.
    fn solve_row(&self, xi: u64) -> Vec<MarkoffTriple> {
        let x = &self.polys[xi as usize];
        let x2 = x.square();
        let ax = self.ctx.a() * x;
        let mut out = Vec::new();
        for y in &self.polys {
            let b = &ax * y;
            let disc = &b.square() - &(&x2 + &y.square()).scale(4);
            let Some(s) = disc.sqrt() else { continue };
            let mut push = |z: Polynomial| {
                if z.degree() > self.max_height {
                    return;
                }
                let p = MarkoffTriple::new(x.clone(), y.clone(), z);
                if p.height().is_positive() && self.convention.admits(&p) {
                    out.push(p);
                }
            };
            push((&b + &s).scale(self.half));
            if !s.is_zero() {
                push((&b - &s).scale(self.half));
            }
        }
        out
    }

    fn rows(&self) -> u64 {
        self.polys.len() as u64
    }
}

/// Every solution with all degrees at most `max_height` and positive height,
/// in canonical (lexicographic) order.
pub fn enumerate_solutions(
    ctx: &MarkoffContext,
    max_height: usize,
    convention: EnumerationConvention,
    budget: u64,
) -> Result<Vec<MarkoffTriple>, OracleError> {
    let solver = Solver::new(ctx, max_height, convention, budget)?;
    let mut out = crate::par::flat_map_range(solver.rows(), |xi| solver.solve_row(xi));
    out.sort_unstable();
    Ok(out)
}

/// [`enumerate_solutions`] on the calling thread regardless of features.
pub fn enumerate_solutions_seq(
    ctx: &MarkoffContext,
    max_height: usize,
    convention: EnumerationConvention,
    budget: u64,
) -> Result<Vec<MarkoffTriple>, OracleError> {
    let solver = Solver::new(ctx, max_height, convention, budget)?;
    let mut out = crate::par::flat_map_range_seq(solver.rows(), |xi| solver.solve_row(xi));
    out.sort_unstable();
    Ok(out)
}

/// Full scan over all `q^(3(H+1))` triples; validation only.
pub fn enumerate_solutions_cubic(
    ctx: &MarkoffContext,
    max_height: usize,
    convention: EnumerationConvention,
    budget: u64,
) -> Result<Vec<MarkoffTriple>, OracleError> {
    let m = ctx.modulus();
    check_budget(m.get(), 3 * (max_height + 1), budget)?;
    let polys = all_polynomials(m, max_height);
    let mut out = crate::par::flat_map_range(polys.len() as u64, |xi| {
        let x = &polys[xi as usize];
        let mut row = Vec::new();
        for y in &polys {
            for z in &polys {
                let p = MarkoffTriple::new(x.clone(), y.clone(), z.clone());
                if p.height().is_positive()
                    && convention.admits(&p)
                    && is_solution(ctx, &p).expect("same modulus")
                {
                    row.push(p);
                }
            }
        }
        row
    });
    out.sort_unstable();
    Ok(out)
}

fn ratio_opt<S: Serializer>(r: &Option<Ratio<u128>>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.collect_str(r),
        None => s.serialize_none(),
    }
}

/// Brute-force counts at one height split by class, next to the closed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub q: u64,
    #[serde(rename = "A")]
    pub a: String,
    pub n: usize,
    pub convention: EnumerationConvention,
    pub total: u64,
    pub fundamental_count: u64,
    pub nonfundamental_count: u64,
    /// Non-fundamental triples whose descent ends at an all-constant
    /// solution `(c, +-ic, 0)` instead of a fundamental triple.
    pub constant_rooted_count: u64,
    /// Closed form for non-constant `A`; `None` for constant `A`.
    pub formula_value: Option<u128>,
    /// The `d = 1` term.
    pub fundamental_term: Option<u128>,
    /// Sum of the `d > 1` terms.
    pub nonfundamental_term: Option<u128>,
    pub per_class_ratios: ClassRatios,
}

/// `count / term` per class; `None` when the term is zero or unavailable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassRatios {
    #[serde(serialize_with = "ratio_opt")]
    pub fundamental: Option<Ratio<u128>>,
    /// Tree-rooted non-fundamental triples over the `d > 1` terms.
    #[serde(serialize_with = "ratio_opt")]
    pub nonfundamental: Option<Ratio<u128>>,
    #[serde(serialize_with = "ratio_opt")]
    pub total: Option<Ratio<u128>>,
}

impl CensusReport {
    pub fn tree_rooted_count(&self) -> u64 {
        self.nonfundamental_count - self.constant_rooted_count
    }
}

fn ratio(count: u64, term: Option<u128>) -> Option<Ratio<u128>> {
    term.filter(|&t| t > 0)
        .map(|t| Ratio::new(count as u128, t))
}

/// Census of the solutions of height exactly `n` among `solutions`.
pub fn census_of(
    ctx: &MarkoffContext,
    n: usize,
    convention: EnumerationConvention,
    solutions: &[MarkoffTriple],
) -> Result<CensusReport, OracleError> {
    let mut fundamental = 0u64;
    let mut nonfundamental = 0u64;
    let mut constant_rooted = 0u64;
    for p in solutions {
        if p.height() != ExtDegree::Finite(n) || !convention.admits(p) {
            continue;
        }
        let (sorted, _) = sort_triple(p)?;
        if is_fundamental(&sorted) {
            fundamental += 1;
        } else {
            nonfundamental += 1;
            if let (Terminal::Constant(_), _, _) = descend_to_terminal(ctx, &sorted)? {
                constant_rooted += 1;
            }
        }
    }
    let q = ctx.modulus().get();
    let formula = if ctx.is_constant_a() {
        None
    } else {
        Some(count_finite_field(q, ctx.beta() as u64, n as u64)?)
    };
    let formula_value = formula.as_ref().map(|f| f.report.value);
    let fundamental_term = formula
        .as_ref()
        .map(|f| f.report.term(1).map_or(0, |t| t.contribution()));
    let nonfundamental_term = formula.as_ref().map(|f| {
        f.report
            .terms
            .iter()
            .filter(|t| t.d > 1)
            .map(|t| t.contribution())
            .sum()
    });
    let total = fundamental + nonfundamental;
    Ok(CensusReport {
        q,
        a: ctx.a().render_auto(),
        n,
        convention,
        total,
        fundamental_count: fundamental,
        nonfundamental_count: nonfundamental,
        constant_rooted_count: constant_rooted,
        formula_value,
        fundamental_term,
        nonfundamental_term,
        per_class_ratios: ClassRatios {
            fundamental: ratio(fundamental, fundamental_term),
            nonfundamental: ratio(nonfundamental - constant_rooted, nonfundamental_term),
            total: ratio(total, formula_value),
        },
    })
}

/// Census of the solutions of height exactly `n` under one convention.
pub fn census(
    ctx: &MarkoffContext,
    n: usize,
    convention: EnumerationConvention,
    budget: u64,
) -> Result<CensusReport, OracleError> {
    let solutions = enumerate_solutions(ctx, n, convention, budget)?;
    census_of(ctx, n, convention, &solutions)
}

/// Censuses under both conventions from a single enumeration.
pub fn census_both(
    ctx: &MarkoffContext,
    n: usize,
    budget: u64,
) -> Result<[CensusReport; 2], OracleError> {
    let solutions = enumerate_solutions(ctx, n, EnumerationConvention::Ordered, budget)?;
    Ok([
        census_of(ctx, n, EnumerationConvention::Ordered, &solutions)?,
        census_of(ctx, n, EnumerationConvention::DegreeSorted, &solutions)?,
    ])
}

/// Number of triples with maximum exactly `n` on the `id` tree, by pruned search.
fn count_tree_max(id: TreeId, n: u64) -> u64 {
    let Ok(root) = id.root() else { return 0 };
    if root.2 > n {
        return 0;
    }
    let mut count = 0;
    let mut stack = vec![root];
    while let Some(t) = stack.pop() {
        if t.2 == n {
            count += 1;
        }
        // the minimal child has maximum t1 + t3 + beta
        if t.0 + t.2 + id.beta() > n {
            continue;
        }
        for b in Branch::BOTH {
            let c = euclid_branch(t, id.beta(), b).expect("bounded by n");
            if c.2 <= n {
                stack.push(c);
            }
            if t.0 == t.1 {
                // both branches agree at the root
                break;
            }
        }
    }
    count
}

/// `E(n)` by searching the (1,0)-Euclid tree.
pub fn oracle_e(n: u64) -> Result<u64, OracleError> {
    if n > MAX_ORACLE_E {
        return Err(OracleError::BudgetExceeded {
            needed: n as u128,
            budget: MAX_ORACLE_E,
        });
    }
    if n <= 1 {
        return Ok(n);
    }
    Ok(count_tree_max(TreeId::UNIT, n))
}

/// `E(n)` as `#{b : 1 <= b <= n/2, gcd(b, n) = 1}`.
pub fn oracle_e_coprime(n: u64) -> u64 {
    if n <= 1 {
        return n;
    }
    (1..=n / 2).filter(|&b| gcd(b, n) == 1).count() as u64
}

/// `C_beta(n)`: triples with maximum `n` over every `(alpha, beta)` tree, plus one.
pub fn oracle_c_beta(beta: u64, n: u64) -> Result<u64, OracleError> {
    if n > MAX_ORACLE_C_BETA {
        return Err(OracleError::BudgetExceeded {
            needed: n as u128,
            budget: MAX_ORACLE_C_BETA,
        });
    }
    let trees: u64 = (1..=n)
        .map(|alpha| count_tree_max(TreeId::new(alpha, beta).expect("alpha >= 1"), n))
        .sum();
    Ok(trees + 1)
}

/// Triples on the `id` tree with maximum at most `n`.
pub fn tree_triples_up_to(id: TreeId, n: u64) -> Vec<EuclidTriple> {
    let mut out = Vec::new();
    let Ok(root) = id.root() else { return out };
    let mut stack = vec![root];
    while let Some(t) = stack.pop() {
        if t.2 > n {
            continue;
        }
        out.push(t);
        for b in Branch::BOTH {
            stack.push(euclid_branch(t, id.beta(), b).expect("bounded by n"));
            if t.0 == t.1 {
                break;
            }
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{count_c_beta, count_e};
    use crate::markoff::tests::{ctx, triple};

    const B: u64 = DEFAULT_ENUMERATION_BUDGET;

    #[test]
    fn polynomial_space() {
        let m = PrimeModulus::new(5).unwrap();
        let all = all_polynomials(m, 1);
        assert_eq!(all.len(), 25);
        assert!(all[0].is_zero());
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 25);
    }

    #[test]
    fn q5_linear_a_height_one() {
        let c = ctx(5, "t");
        let ordered = enumerate_solutions(&c, 1, EnumerationConvention::Ordered, B).unwrap();
        let sorted = enumerate_solutions(&c, 1, EnumerationConvention::DegreeSorted, B).unwrap();
        for p in ordered.iter().chain(&sorted) {
            assert!(is_solution(&c, p).unwrap());
        }
        // (0, +-if, f) in every order, plus the orbits of (c, +-ic, 0)
        let zero_rooted = ordered
            .iter()
            .filter(|p| p.coords().iter().any(|x| x.is_zero()))
            .count();
        assert_eq!(zero_rooted, 120);
        assert_eq!(ordered.len(), 144);
        assert_eq!(sorted.len(), 48);
        assert!(ordered.contains(&triple(&c, "1", "2", "2*t")));
    }

    #[test]
    fn empty_when_no_square_root_of_minus_one() {
        let c = ctx(7, "t");
        assert!(
            enumerate_solutions(&c, 2, EnumerationConvention::Ordered, B)
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn quadratic_matches_cubic_scan() {
        for a in ["1", "t", "2*t+1"] {
            let c = ctx(5, a);
            for conv in EnumerationConvention::BOTH {
                assert_eq!(
                    enumerate_solutions(&c, 1, conv, B).unwrap(),
                    enumerate_solutions_cubic(&c, 1, conv, B).unwrap(),
                    "A = {a}, {conv:?}"
                );
            }
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let c = ctx(13, "1");
        assert_eq!(
            enumerate_solutions(&c, 1, EnumerationConvention::Ordered, B).unwrap(),
            enumerate_solutions_seq(&c, 1, EnumerationConvention::Ordered, B).unwrap()
        );
    }

    #[test]
    fn budget_is_enforced() {
        let c = ctx(5, "t");
        assert_eq!(
            enumerate_solutions(&c, 1, EnumerationConvention::Ordered, 100),
            Err(OracleError::BudgetExceeded {
                needed: 625,
                budget: 100
            })
        );
    }

    #[test]
    fn census_height_one_and_two() {
        let c = ctx(5, "t");
        let r = census(&c, 1, EnumerationConvention::DegreeSorted, B).unwrap();
        assert_eq!(r.fundamental_count, 40);
        assert_eq!(r.fundamental_term, Some(80));
        assert_eq!(r.formula_value, Some(80));
        assert_eq!(r.per_class_ratios.fundamental, Some(Ratio::new(1, 2)));
        assert_eq!(r.total, r.fundamental_count + r.nonfundamental_count);
        assert_eq!(r.tree_rooted_count(), 0);
        let r = census(&c, 2, EnumerationConvention::DegreeSorted, B).unwrap();
        assert_eq!(r.tree_rooted_count(), 0);
        assert_eq!(r.per_class_ratios.fundamental, Some(Ratio::new(1, 2)));
    }

    #[test]
    fn e_oracles() {
        assert_eq!(oracle_e(1).unwrap(), 1);
        assert_eq!(oracle_e(2).unwrap(), 1);
        assert_eq!(oracle_e(5).unwrap(), 2);
        for n in 1..=200 {
            assert_eq!(oracle_e(n).unwrap(), count_e(n), "n = {n}");
            assert_eq!(oracle_e_coprime(n), count_e(n), "n = {n}");
        }
        assert!(oracle_e(MAX_ORACLE_E + 1).is_err());
    }

    #[test]
    fn c_beta_oracle() {
        assert_eq!(oracle_c_beta(1, 3).unwrap(), 2);
        for beta in 0..=3 {
            for n in 1..=60 {
                assert_eq!(
                    oracle_c_beta(beta, n).unwrap() as u128,
                    count_c_beta(beta, n).unwrap().value,
                    "beta = {beta}, n = {n}"
                );
            }
        }
    }

    #[test]
    fn tree_listing() {
        let t = tree_triples_up_to(TreeId::UNIT, 5);
        assert_eq!(
            t,
            vec![
                EuclidTriple(1, 1, 2),
                EuclidTriple(1, 2, 3),
                EuclidTriple(1, 3, 4),
                EuclidTriple(1, 4, 5),
                EuclidTriple(2, 3, 5),
            ]
        );
    }
}
