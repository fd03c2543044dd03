//! Sorting, predecessors, descent to fundamental triples, and the
//! fundamental/root constructors.

use std::fmt;

use serde::Serialize;

use super::{
    apply_sigma, is_solution, Coord, Generator, GroupWord, MarkoffContext, MarkoffError,
    MarkoffTriple,
};
use crate::poly::Polynomial;
use crate::Branch;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    fn apply(self, p: &Polynomial) -> Polynomial {
        match self {
            Sign::Plus => p.clone(),
            Sign::Minus => p.negate(),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i8(self.as_i8())
    }
}

/// Shape of a fundamental triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FundamentalForm {
    /// `(0, sign*i*f, f)`
    Zero { f: Polynomial, sign: Sign },
    /// `(2a/A, a*f + sign*2ai/A, f)`, only for constant `A`.
    Constant { f: Polynomial, a: Sign, sign: Sign },
}

impl FundamentalForm {
    pub fn f(&self) -> &Polynomial {
        match self {
            FundamentalForm::Zero { f, .. } | FundamentalForm::Constant { f, .. } => f,
        }
    }
}

impl fmt::Display for FundamentalForm {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FundamentalForm::Zero { f, sign } => {
                write!(fm, "ZeroForm{{f={}, sign={sign}}}", f.render_auto())
            }
            FundamentalForm::Constant { f, a, sign } => write!(
                fm,
                "ConstantForm{{f={}, a={a}, sign={sign}}}",
                f.render_auto()
            ),
        }
    }
}

/// Which family of tree roots to build in [`make_root`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Zero,
    Constant,
}

/// Stable degree sort by adjacent transpositions.
///
/// The returned word takes the input to the sorted triple.
pub fn sort_triple(p: &MarkoffTriple) -> Result<(MarkoffTriple, GroupWord), MarkoffError> {
    if !p.height().is_positive() {
        return Err(MarkoffError::AllConstant);
    }
    let mut coords = p.coords().clone();
    let mut word = GroupWord::new();
    let pairs = [(Coord::X, Coord::Y), (Coord::Y, Coord::Z)];
    loop {
        let mut swapped = false;
        for (a, b) in pairs {
            if coords[a.index()].degree() > coords[b.index()].degree() {
                coords.swap(a.index(), b.index());
                word.push(Generator::Swap(a, b));
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    let [x, y, z] = coords;
    Ok((MarkoffTriple::new(x, y, z), word))
}

/// `deg y == deg z` on a degree-sorted triple.
pub fn is_fundamental(p: &MarkoffTriple) -> bool {
    p.y().degree() == p.z().degree()
}

fn check_sorted(p: &MarkoffTriple) -> Result<(), MarkoffError> {
    if !p.height().is_positive() {
        return Err(MarkoffError::AllConstant);
    }
    if !p.is_degree_sorted() {
        return Err(MarkoffError::NotSorted);
    }
    Ok(())
}

/// Sorted `rho(P)` for a sorted non-fundamental solution, with the word `[rho, swaps..]`.
///
/// For `A` non-constant, `rho(P)` may be an all-constant solution
/// `(c, +-ic, 0)`; that is reported as [`MarkoffError::ConstantTerminal`].
pub fn predecessor(
    ctx: &MarkoffContext,
    p: &MarkoffTriple,
) -> Result<(MarkoffTriple, GroupWord), MarkoffError> {
    check_sorted(p)?;
    if !is_solution(ctx, p)? {
        return Err(MarkoffError::NotSolution);
    }
    if is_fundamental(p) {
        return Err(MarkoffError::IsFundamental);
    }
    let rho = Generator::Rho.apply(ctx, p);
    let mut word = GroupWord(vec![Generator::Rho]);
    match sort_triple(&rho) {
        Ok((sorted, swaps)) => {
            word.extend(swaps);
            debug_assert!(sorted.height() < p.height());
            Ok((sorted, word))
        }
        Err(MarkoffError::AllConstant) => Err(MarkoffError::ConstantTerminal {
            terminal: Box::new(rho),
            word,
        }),
        Err(e) => Err(e),
    }
}

/// Where a descent stops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Terminal {
    /// A sorted fundamental triple.
    Fundamental(MarkoffTriple),
    /// An all-constant solution `(c, +-ic, 0)`; only possible for non-constant `A`.
    Constant(MarkoffTriple),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Descent {
    pub fundamental: MarkoffTriple,
    /// Forward moves from the input to `fundamental`; `word.replay(fundamental)` is the input.
    pub word: GroupWord,
    /// Number of predecessor steps.
    pub steps: usize,
}

/// Iterates [`predecessor`] from the sorted input until it stops.
pub fn descend_to_terminal(
    ctx: &MarkoffContext,
    p: &MarkoffTriple,
) -> Result<(Terminal, GroupWord, usize), MarkoffError> {
    if !is_solution(ctx, p)? {
        return Err(MarkoffError::NotSolution);
    }
    let (mut current, mut word) = sort_triple(p)?;
    let mut steps = 0;
    while !is_fundamental(&current) {
        match predecessor(ctx, &current) {
            Ok((next, w)) => {
                word.extend(w);
                current = next;
                steps += 1;
            }
            Err(MarkoffError::ConstantTerminal { terminal, word: w }) => {
                word.extend(w);
                return Ok((Terminal::Constant(*terminal), word, steps + 1));
            }
            Err(e) => return Err(e),
        }
    }
    Ok((Terminal::Fundamental(current), word, steps))
}

/// Descends a solution of positive height to a fundamental triple.
pub fn descend(ctx: &MarkoffContext, p: &MarkoffTriple) -> Result<Descent, MarkoffError> {
    match descend_to_terminal(ctx, p)? {
        (Terminal::Fundamental(fundamental), word, steps) => Ok(Descent {
            fundamental,
            word,
            steps,
        }),
        (Terminal::Constant(terminal), word, _) => Err(MarkoffError::ConstantTerminal {
            terminal: Box::new(terminal),
            word,
        }),
    }
}

fn sign_of(value: &Polynomial, unit: &Polynomial) -> Option<Sign> {
    if *value == *unit {
        Some(Sign::Plus)
    } else if *value == unit.negate() {
        Some(Sign::Minus)
    } else {
        None
    }
}

/// Identifies which fundamental form a sorted fundamental solution has.
pub fn classify_fundamental(
    ctx: &MarkoffContext,
    p: &MarkoffTriple,
) -> Result<FundamentalForm, MarkoffError> {
    check_sorted(p)?;
    if !is_fundamental(p) {
        return Err(MarkoffError::NotFundamental);
    }
    if !is_solution(ctx, p)? {
        return Err(MarkoffError::NotSolution);
    }
    let m = ctx.modulus();
    let i = ctx.i()?;
    let [x, y, z] = p.coords();
    let unclassifiable = |why: &str| MarkoffError::Unclassifiable(format!("{p}: {why}"));

    if x.is_zero() {
        let iz = z.scale(i.value());
        let sign = sign_of(y, &iz).ok_or_else(|| unclassifiable("y != +-i z"))?;
        return Ok(FundamentalForm::Zero { f: z.clone(), sign });
    }

    let a_const = ctx
        .a()
        .as_constant()
        .ok_or_else(|| unclassifiable("x != 0 with non-constant A"))?;
    let x_const = x
        .as_constant()
        .ok_or_else(|| unclassifiable("x != 0 is not constant"))?;
    // Long division y = lead * z + b, deg b < deg z.
    let (q, b) = y.divrem(z)?;
    let lead = q
        .as_constant()
        .ok_or_else(|| unclassifiable("deg y != deg z"))?;
    let a = Sign::from_i64(m.signed(lead)).ok_or_else(|| unclassifiable("y/z is not +-1"))?;
    let a_val = m.reduce_signed(a.as_i8() as i64);
    // a^2 + 1 = A a x
    if m.add(m.mul(a_val, a_val), 1) != m.mul(m.mul(a_const, a_val), x_const) {
        return Err(unclassifiable("a^2 + 1 != A a x"));
    }
    // b = sign * i * x
    let ix = Polynomial::constant(m, m.mul(i.value(), x_const));
    let sign = sign_of(&b, &ix).ok_or_else(|| unclassifiable("b != +-i x"))?;
    Ok(FundamentalForm::Constant {
        f: z.clone(),
        a,
        sign,
    })
}

fn check_f(ctx: &MarkoffContext, f: &Polynomial) -> Result<(), MarkoffError> {
    if f.modulus() != ctx.modulus() {
        return Err(MarkoffError::ModulusMismatch(
            ctx.modulus().get(),
            f.modulus().get(),
        ));
    }
    if f.is_constant() {
        return Err(MarkoffError::ConstantF);
    }
    Ok(())
}

/// `2/A` for constant `A`.
fn two_over_a(ctx: &MarkoffContext) -> Result<u64, MarkoffError> {
    let m = ctx.modulus();
    let a = ctx
        .a()
        .as_constant()
        .ok_or(MarkoffError::ConstantFormNeedsConstantA)?;
    Ok(m.mul(2, m.inv(a).expect("A is nonzero")))
}

/// Builds the sorted fundamental triple of the given form.
pub fn make_fundamental(
    ctx: &MarkoffContext,
    form: &FundamentalForm,
) -> Result<MarkoffTriple, MarkoffError> {
    let i = ctx.i()?;
    let m = ctx.modulus();
    match form {
        FundamentalForm::Zero { f, sign } => {
            check_f(ctx, f)?;
            let y = sign.apply(&f.scale(i.value()));
            Ok(MarkoffTriple::new(Polynomial::zero(m), y, f.clone()))
        }
        FundamentalForm::Constant { f, a, sign } => {
            check_f(ctx, f)?;
            let two_a = m.mul(two_over_a(ctx)?, m.reduce_signed(a.as_i8() as i64));
            let x = Polynomial::constant(m, two_a);
            let shift = sign.apply(&Polynomial::constant(m, m.mul(two_a, i.value())));
            let y = &a.apply(f) + &shift;
            Ok(MarkoffTriple::new(x, y, f.clone()))
        }
    }
}

/// The non-fundamental triple of least height on the Markoff tree over a
/// fundamental triple, in the order `(f, ..., ...)`.
///
/// * zero family: `(f, i a f, i a A f^2)`; `sign` is unused.
/// * constant family: `(f, a f + sign 2ai/A, A a f^2 + sign 2aif - 2a/A)`.
pub fn make_root(
    ctx: &MarkoffContext,
    f: &Polynomial,
    a: Sign,
    sign: Sign,
    family: Family,
) -> Result<MarkoffTriple, MarkoffError> {
    let i = ctx.i()?;
    check_f(ctx, f)?;
    let m = ctx.modulus();
    let af = a.apply(f);
    match family {
        Family::Zero => {
            let iaf = af.scale(i.value());
            let z = &(ctx.a() * &iaf) * f;
            Ok(MarkoffTriple::new(f.clone(), iaf, z))
        }
        Family::Constant => {
            let two_a = m.mul(two_over_a(ctx)?, m.reduce_signed(a.as_i8() as i64));
            let shift = sign.apply(&Polynomial::constant(m, m.mul(two_a, i.value())));
            let y = &af + &shift;
            // A a f^2 + sign 2ai f - 2a/A
            let z = &(&(ctx.a() * &af) * f) + &(&(&shift * f) - &Polynomial::constant(m, two_a));
            Ok(MarkoffTriple::new(f.clone(), y, z))
        }
    }
}

/// Degree-sorted `sigma_i(P)`.
pub(crate) fn sigma_sorted(
    ctx: &MarkoffContext,
    p: &MarkoffTriple,
    branch: Branch,
) -> Result<MarkoffTriple, MarkoffError> {
    sort_triple(&apply_sigma(ctx, p, branch)).map(|(s, _)| s)
}
