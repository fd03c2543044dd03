//! (alpha, beta)-Euclid trees: the integer trees traced out by the degree
//! signatures of non-fundamental Markoff triples.
//!
//! The tree with id `(alpha, beta)` has root `(alpha, alpha, 2 alpha + beta)`
//! and branches
//!
//! ```text
//! branch 1: (t1, t2, t3) -> (t2, t3, t2 + t3 + beta)
//! branch 2: (t1, t2, t3) -> (t1, t3, t1 + t3 + beta)
//! ```
//!
//! Every triple on the `(alpha, beta)` tree is the image of a triple on the
//! `(1, 0)` tree under `u -> u alpha + (u - 1) beta` applied coordinatewise,
//! layer by layer ([`map_unit`]).

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Branch;

pub const DEFAULT_LAYER_BUDGET: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EuclidError {
    #[error("alpha must be at least 1")]
    ZeroAlpha,
    #[error("integer overflow while branching")]
    Overflow,
    #[error("layer {layer} exceeds the budget {budget}")]
    BudgetExceeded { layer: usize, budget: usize },
    #[error("{0} is not on the (1,0)-Euclid tree")]
    NotOnUnitTree(EuclidTriple),
    #[error("{0} does not satisfy t3 = t1 + t2 with t1, t2 >= 1")]
    NotEuclidSum(EuclidTriple),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EuclidTriple(pub u64, pub u64, pub u64);

impl EuclidTriple {
    pub fn max(self) -> u64 {
        self.0.max(self.1).max(self.2)
    }
}

impl fmt::Display for EuclidTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0, self.1, self.2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TreeId {
    alpha: u64,
    beta: u64,
}

impl TreeId {
    pub fn new(alpha: u64, beta: u64) -> Result<Self, EuclidError> {
        if alpha == 0 {
            return Err(EuclidError::ZeroAlpha);
        }
        Ok(TreeId { alpha, beta })
    }

    pub const UNIT: TreeId = TreeId { alpha: 1, beta: 0 };

    pub fn alpha(self) -> u64 {
        self.alpha
    }

    pub fn beta(self) -> u64 {
        self.beta
    }

    pub fn root(self) -> Result<EuclidTriple, EuclidError> {
        let third = self
            .alpha
            .checked_mul(2)
            .and_then(|v| v.checked_add(self.beta))
            .ok_or(EuclidError::Overflow)?;
        Ok(EuclidTriple(self.alpha, self.alpha, third))
    }
}

pub fn euclid_branch(
    t: EuclidTriple,
    beta: u64,
    branch: Branch,
) -> Result<EuclidTriple, EuclidError> {
    let EuclidTriple(t1, t2, t3) = t;
    let keep = match branch {
        Branch::One => t2,
        Branch::Two => t1,
    };
    let next = keep
        .checked_add(t3)
        .and_then(|v| v.checked_add(beta))
        .ok_or(EuclidError::Overflow)?;
    Ok(EuclidTriple(keep, t3, next))
}

/// `L_j`: the deduplicated set of triples after `j` branchings from the root.
pub fn layer(id: TreeId, j: usize, budget: usize) -> Result<BTreeSet<EuclidTriple>, EuclidError> {
    if j > budget {
        return Err(EuclidError::BudgetExceeded { layer: j, budget });
    }
    let mut current = BTreeSet::from([id.root()?]);
    for _ in 0..j {
        let mut next = BTreeSet::new();
        for &t in &current {
            for b in Branch::BOTH {
                next.insert(euclid_branch(t, id.beta, b)?);
            }
        }
        current = next;
    }
    Ok(current)
}

/// Layers `L_0 ..= L_depth`.
pub fn layers(
    id: TreeId,
    depth: usize,
    budget: usize,
) -> Result<Vec<BTreeSet<EuclidTriple>>, EuclidError> {
    if depth > budget {
        return Err(EuclidError::BudgetExceeded {
            layer: depth,
            budget,
        });
    }
    let mut out = vec![BTreeSet::from([id.root()?])];
    for _ in 0..depth {
        let prev = out.last().expect("non-empty");
        let mut next = BTreeSet::new();
        for &t in prev {
            for b in Branch::BOTH {
                next.insert(euclid_branch(t, id.beta, b)?);
            }
        }
        out.push(next);
    }
    Ok(out)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `(b, c, d)` lies on the (1,0)-tree iff `1 <= b <= c`, `d = b + c`, `gcd(b, c) = 1`.
pub fn on_unit_tree(t: EuclidTriple) -> bool {
    let EuclidTriple(b, c, d) = t;
    b >= 1 && b <= c && c.checked_add(b) == Some(d) && gcd(b, c) == 1
}

/// Image of a (1,0)-tree triple on the `(alpha, beta)` tree.
pub fn map_unit(t: EuclidTriple, id: TreeId) -> Result<EuclidTriple, EuclidError> {
    if !on_unit_tree(t) {
        return Err(EuclidError::NotOnUnitTree(t));
    }
    let f = |u: u64| -> Result<u64, EuclidError> {
        u.checked_mul(id.alpha)
            .and_then(|v| (u - 1).checked_mul(id.beta).and_then(|w| v.checked_add(w)))
            .ok_or(EuclidError::Overflow)
    };
    Ok(EuclidTriple(f(t.0)?, f(t.1)?, f(t.2)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GammaReduction {
    pub root: EuclidTriple,
    pub steps: usize,
}

/// Subtractive Euclid on `(t1, t2, t1 + t2)` until `t1 = t2`.
pub fn gamma_reduce(t: EuclidTriple) -> Result<GammaReduction, EuclidError> {
    let EuclidTriple(t1, t2, t3) = t;
    if t1 == 0 || t2 == 0 || t1.checked_add(t2) != Some(t3) {
        return Err(EuclidError::NotEuclidSum(t));
    }
    let mut cur = t;
    let mut steps = 0;
    while cur.0 != cur.1 {
        cur = gamma(cur);
        steps += 1;
    }
    Ok(GammaReduction { root: cur, steps })
}

/// One step of the reduction; requires `t1 != t2` to stay positive.
pub fn gamma(t: EuclidTriple) -> EuclidTriple {
    let EuclidTriple(t1, t2, _) = t;
    if t2 >= t1 {
        EuclidTriple(t1, t2 - t1, t2)
    } else {
        EuclidTriple(t2, t1 - t2, t1)
    }
}

/// The `(alpha, beta)` tree containing `t`, if any.
///
/// `t` is on the `(alpha, beta)` tree iff `(t + beta) = (alpha + beta) u`
/// coordinatewise for some `u` on the (1,0)-tree. Coprimality of `u.0, u.1`
/// pins `alpha + beta` to `gcd(t1 + beta, t2 + beta)`.
pub fn membership(t: EuclidTriple, beta: u64) -> Option<TreeId> {
    let shifted = [t.0, t.1, t.2].map(|v| v.checked_add(beta));
    let [Some(s1), Some(s2), Some(s3)] = shifted else {
        return None;
    };
    if t.0 == 0 || t.1 == 0 {
        return None;
    }
    let scale = gcd(s1, s2);
    if scale <= beta || s3 % scale != 0 {
        return None;
    }
    let unit = EuclidTriple(s1 / scale, s2 / scale, s3 / scale);
    if !on_unit_tree(unit) {
        return None;
    }
    TreeId::new(scale - beta, beta).ok()
}

/// Node of the (non-deduplicated) binary Euclid tree, for rendering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EuclidTree {
    pub triple: EuclidTriple,
    pub children: Vec<EuclidTree>,
}

pub fn euclid_tree(id: TreeId, depth: usize, budget: usize) -> Result<EuclidTree, EuclidError> {
    if depth > budget {
        return Err(EuclidError::BudgetExceeded {
            layer: depth,
            budget,
        });
    }
    fn build(t: EuclidTriple, beta: u64, depth: usize) -> Result<EuclidTree, EuclidError> {
        let children = if depth == 0 {
            Vec::new()
        } else {
            Branch::BOTH
                .iter()
                .map(|&b| build(euclid_branch(t, beta, b)?, beta, depth - 1))
                .collect::<Result<_, _>>()?
        };
        Ok(EuclidTree {
            triple: t,
            children,
        })
    }
    build(id.root()?, id.beta, depth)
}

impl EuclidTree {
    pub fn to_dot(&self) -> String {
        use std::fmt::Write as _;
        fn walk(node: &EuclidTree, next: &mut usize, out: &mut String) -> usize {
            let id = *next;
            *next += 1;
            let _ = writeln!(out, "  n{id} [label=\"{}\"];", node.triple);
            for (child, b) in node.children.iter().zip(Branch::BOTH) {
                let cid = walk(child, next, out);
                let _ = writeln!(out, "  n{id} -> n{cid} [label=\"{}\"];", b.edge_label());
            }
            id
        }
        let mut out = String::from("digraph euclid {\n");
        walk(self, &mut 0, &mut out);
        out.push_str("}\n");
        out
    }
}
