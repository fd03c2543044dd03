//! Solutions of `x^2 + y^2 + z^2 = A x y z` over F_p[t].

mod descent;
mod group;
mod tree;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::field::{FieldElement, PrimeModulus};
use crate::poly::{ExtDegree, PolyError, Polynomial};
use crate::Branch;

pub use descent::{
    classify_fundamental, descend, descend_to_terminal, is_fundamental, make_fundamental,
    make_root, predecessor, sort_triple, Descent, Family, FundamentalForm, Sign, Terminal,
};
pub use group::{Coord, Generator, GroupWord};
pub use tree::{generate_tree, MarkoffTree, DEFAULT_TREE_DEPTH_BUDGET};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MarkoffError {
    #[error("A must be a nonzero polynomial")]
    ZeroA,
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("triple is not a solution of the Markoff equation")]
    NotSolution,
    #[error("all coordinates are constant (height <= 0)")]
    AllConstant,
    #[error("triple is not sorted by degree")]
    NotSorted,
    #[error("triple is fundamental")]
    IsFundamental,
    #[error("triple is not fundamental")]
    NotFundamental,
    #[error("descent reached the all-constant solution {terminal}")]
    ConstantTerminal {
        terminal: Box<MarkoffTriple>,
        word: GroupWord,
    },
    #[error("fundamental triple does not match any known form: {0}")]
    Unclassifiable(String),
    #[error("sqrt(-1) does not exist modulo {0}")]
    IUnavailable(u64),
    #[error("constant-form triples require a constant A")]
    ConstantFormNeedsConstantA,
    #[error("f must be non-constant")]
    ConstantF,
    #[error("tree depth {depth} exceeds the budget {budget}")]
    BudgetExceeded { depth: usize, budget: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The fixed parameter `A` of the equation, with `beta = deg A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkoffContext {
    a: Polynomial,
    beta: usize,
}

impl MarkoffContext {
    pub fn new(a: Polynomial) -> Result<Self, MarkoffError> {
        let beta = a.degree().finite().ok_or(MarkoffError::ZeroA)?;
        Ok(MarkoffContext { a, beta })
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.a.modulus()
    }

    pub fn a(&self) -> &Polynomial {
        &self.a
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    pub fn is_constant_a(&self) -> bool {
        self.beta == 0
    }

    pub fn i(&self) -> Result<FieldElement, MarkoffError> {
        self.modulus()
            .sqrt_minus_one()
            .ok_or(MarkoffError::IUnavailable(self.modulus().get()))
    }

    fn check(&self, p: &MarkoffTriple) -> Result<(), MarkoffError> {
        let m = self.modulus();
        for c in p.coords() {
            if c.modulus() != m {
                return Err(MarkoffError::ModulusMismatch(m.get(), c.modulus().get()));
            }
        }
        Ok(())
    }
}

/// Degrees of the three coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature(pub [ExtDegree; 3]);

impl Signature {
    pub fn height(&self) -> ExtDegree {
        self.0.iter().copied().max().expect("three entries")
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkoffTriple {
    coords: [Polynomial; 3],
}

impl MarkoffTriple {
    pub fn new(x: Polynomial, y: Polynomial, z: Polynomial) -> Self {
        MarkoffTriple { coords: [x, y, z] }
    }

    pub fn x(&self) -> &Polynomial {
        &self.coords[0]
    }

    pub fn y(&self) -> &Polynomial {
        &self.coords[1]
    }

    pub fn z(&self) -> &Polynomial {
        &self.coords[2]
    }

    pub fn coords(&self) -> &[Polynomial; 3] {
        &self.coords
    }

    pub fn into_coords(self) -> [Polynomial; 3] {
        self.coords
    }

    pub fn get(&self, c: Coord) -> &Polynomial {
        &self.coords[c.index()]
    }

    pub fn signature(&self) -> Signature {
        Signature(self.coords.each_ref().map(Polynomial::degree))
    }

    pub fn height(&self) -> ExtDegree {
        self.signature().height()
    }

    /// `deg x <= deg y <= deg z`.
    pub fn is_degree_sorted(&self) -> bool {
        let [a, b, c] = self.signature().0;
        a <= b && b <= c
    }

    /// Same coordinates up to order.
    pub fn same_set(&self, other: &MarkoffTriple) -> bool {
        let mut a = self.coords.clone();
        let mut b = other.coords.clone();
        a.sort();
        b.sort();
        a == b
    }

    pub fn render_auto(&self) -> String {
        let [x, y, z] = self.coords.each_ref().map(Polynomial::render_auto);
        format!("({x}, {y}, {z})")
    }
}

impl fmt::Display for MarkoffTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            self.coords[0], self.coords[1], self.coords[2]
        )
    }
}

#[derive(Serialize, Deserialize)]
struct TripleJson {
    x: Polynomial,
    y: Polynomial,
    z: Polynomial,
}

impl Serialize for MarkoffTriple {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let [x, y, z] = self.coords.clone();
        TripleJson { x, y, z }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MarkoffTriple {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let t = TripleJson::deserialize(d)?;
        Ok(MarkoffTriple::new(t.x, t.y, t.z))
    }
}

/// `x^2 + y^2 + z^2 - A x y z == 0`.
pub fn is_solution(ctx: &MarkoffContext, p: &MarkoffTriple) -> Result<bool, MarkoffError> {
    ctx.check(p)?;
    let [x, y, z] = p.coords();
    let lhs = &(&x.square() + &y.square()) + &z.square();
    let rhs = &(&(ctx.a() * x) * y) * z;
    Ok(lhs == rhs)
}

/// `sigma_1(P) = (Azy - x, y, z)`, `sigma_2(P) = (x, Axz - y, z)`.
pub fn apply_sigma(ctx: &MarkoffContext, p: &MarkoffTriple, branch: Branch) -> MarkoffTriple {
    let [x, y, z] = p.coords().clone();
    match branch {
        Branch::One => {
            let nx = &(&(ctx.a() * &z) * &y) - &x;
            MarkoffTriple::new(nx, y, z)
        }
        Branch::Two => {
            let ny = &(&(ctx.a() * &x) * &z) - &y;
            MarkoffTriple::new(x, ny, z)
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::poly::parse_poly;

    pub(crate) fn ctx(p: u64, a: &str) -> MarkoffContext {
        let m = PrimeModulus::new(p).unwrap();
        MarkoffContext::new(parse_poly(a, m).unwrap()).unwrap()
    }

    pub(crate) fn triple(ctx: &MarkoffContext, x: &str, y: &str, z: &str) -> MarkoffTriple {
        let m = ctx.modulus();
        MarkoffTriple::new(
            parse_poly(x, m).unwrap(),
            parse_poly(y, m).unwrap(),
            parse_poly(z, m).unwrap(),
        )
    }

    #[test]
    fn zero_a_rejected() {
        let m = PrimeModulus::new(5).unwrap();
        assert_eq!(
            MarkoffContext::new(Polynomial::zero(m)),
            Err(MarkoffError::ZeroA)
        );
    }

    #[test]
    fn solution_checks() {
        let c = ctx(13, "1");
        assert!(is_solution(&c, &triple(&c, "t", "t+2*i", "t^2+2*i*t-2")).unwrap());
        assert!(!is_solution(&c, &triple(&c, "1", "1", "1")).unwrap());
        let c5 = ctx(5, "t");
        assert!(is_solution(&c5, &triple(&c5, "0", "2*t", "t")).unwrap());
        let foreign = triple(&ctx(7, "1"), "t", "t", "t");
        assert_eq!(
            is_solution(&c, &foreign),
            Err(MarkoffError::ModulusMismatch(13, 7))
        );
    }

    #[test]
    fn sigma_on_quadratic_root() {
        let c = ctx(13, "1");
        let root = triple(&c, "t", "t+2*i", "t^2+2*i*t-2");
        assert_eq!(
            apply_sigma(&c, &root, Branch::One),
            triple(&c, "t^3+4*i*t^2-7*t-4*i", "t+2*i", "t^2+2*i*t-2")
        );
        assert_eq!(
            apply_sigma(&c, &root, Branch::Two),
            triple(&c, "t", "t^3+2*i*t^2-3*t-2*i", "t^2+2*i*t-2")
        );
    }

    #[test]
    fn signature_json_uses_null_for_neg_infinity() {
        let c = ctx(5, "t");
        let s = triple(&c, "0", "2*t", "t").signature();
        assert_eq!(serde_json::to_string(&s).unwrap(), "[null,1,1]");
        assert_eq!(s.height(), ExtDegree::Finite(1));
    }

    #[test]
    fn triple_json_shape() {
        let c = ctx(5, "t");
        let t = triple(&c, "0", "2*t", "t");
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(
            s,
            r#"{"x":{"p":5,"coeffs":[]},"y":{"p":5,"coeffs":[0,2]},"z":{"p":5,"coeffs":[0,1]}}"#
        );
        assert_eq!(serde_json::from_str::<MarkoffTriple>(&s).unwrap(), t);
    }
}
