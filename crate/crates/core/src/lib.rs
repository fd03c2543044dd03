//! Non-constant polynomial solutions of the Markoff equation
//! `x^2 + y^2 + z^2 = A x y z` over F_p[t].
//!
//! * [`field`] and [`poly`]: exact arithmetic in F_p and F_p[t], with a parser
//!   and renderer for expressions such as `t^2+2*i*t-2`.
//! * [`markoff`]: the automorphism group, descent to fundamental triples,
//!   classification of fundamental triples, and Markoff trees.
//! * [`euclid`]: the integer trees that carry the degree signatures.
//! * [`counting`]: closed-form signature and solution counts.
//! * [`oracle`]: brute-force enumeration used to check the closed forms.
//! * [`cli`]: the `markoff` command-line front end.
//!
//! With the default `parallel` feature, enumeration and tree building run on
//! rayon; without it everything runs on the calling thread.

pub mod cli;
pub mod counting;
pub mod euclid;
pub mod field;
pub mod markoff;
pub mod oracle;
pub mod poly;

mod par;

use serde::Serialize;

/// Which of the two branching maps produced a child.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Branch {
    One,
    Two,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::One, Branch::Two];

    pub fn edge_label(self) -> &'static str {
        match self {
            Branch::One => "s1",
            Branch::Two => "s2",
        }
    }
}

pub use field::{FieldElement, PrimeModulus};
pub use markoff::{MarkoffContext, MarkoffTriple};
pub use poly::{parse_poly, ExtDegree, Polynomial, RenderStyle};
