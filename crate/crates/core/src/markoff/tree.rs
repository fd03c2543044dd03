//! Binary Markoff trees generated by the two branching maps.

use std::fmt::Write as _;

use serde::Serialize;

use super::descent::sigma_sorted;
use super::{is_solution, sort_triple, MarkoffContext, MarkoffError, MarkoffTriple};
use crate::Branch;

pub const DEFAULT_TREE_DEPTH_BUDGET: usize = 16;

/// Subtrees at least this deep are built with `par::join`.
const PARALLEL_CUTOFF: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MarkoffTree {
    /// Degree-sorted triple.
    pub triple: MarkoffTriple,
    /// Branch that produced this node; `None` at the root.
    #[serde(skip)]
    pub branch: Option<Branch>,
    /// Either empty or `[sigma_1 child, sigma_2 child]`.
    pub children: Vec<MarkoffTree>,
}

/// Builds the depth-`depth` tree below the sorted `root`.
pub fn generate_tree(
    ctx: &MarkoffContext,
    root: &MarkoffTriple,
    depth: usize,
    budget: usize,
) -> Result<MarkoffTree, MarkoffError> {
    if depth > budget {
        return Err(MarkoffError::BudgetExceeded { depth, budget });
    }
    if !is_solution(ctx, root)? {
        return Err(MarkoffError::NotSolution);
    }
    let (sorted, _) = sort_triple(root)?;
    build(ctx, sorted, None, depth)
}

fn build(
    ctx: &MarkoffContext,
    triple: MarkoffTriple,
    branch: Option<Branch>,
    depth: usize,
) -> Result<MarkoffTree, MarkoffError> {
    if depth == 0 {
        return Ok(MarkoffTree {
            triple,
            branch,
            children: Vec::new(),
        });
    }
    let child = |b: Branch| -> Result<MarkoffTree, MarkoffError> {
        let next = sigma_sorted(ctx, &triple, b)?;
        build(ctx, next, Some(b), depth - 1)
    };
    let (one, two) = if depth >= PARALLEL_CUTOFF {
        crate::par::join(|| child(Branch::One), || child(Branch::Two))
    } else {
        (child(Branch::One), child(Branch::Two))
    };
    Ok(MarkoffTree {
        children: vec![one?, two?],
        triple,
        branch,
    })
}

impl MarkoffTree {
    /// Nodes in pre-order.
    pub fn nodes(&self) -> Vec<&MarkoffTree> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            out.push(node);
            stack.extend(node.children.iter().rev());
        }
        out
    }

    pub fn node_count(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(MarkoffTree::node_count)
            .sum::<usize>()
    }

    /// One node per line, indented by depth, prefixed with `s1:`/`s2:`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(0, &mut out);
        out
    }

    fn write_text(&self, level: usize, out: &mut String) {
        let tag = match self.branch {
            None => String::new(),
            Some(b) => format!("{}: ", b.edge_label()),
        };
        let _ = writeln!(
            out,
            "{}{tag}{}",
            "  ".repeat(level),
            self.triple.render_auto()
        );
        for c in &self.children {
            c.write_text(level + 1, out);
        }
    }

    /// Graphviz rendering with edges labelled `s1`/`s2`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph markoff {\n  node [shape=box];\n");
        let mut next_id = 0usize;
        self.write_dot(&mut next_id, &mut out);
        out.push_str("}\n");
        out
    }

    fn write_dot(&self, next_id: &mut usize, out: &mut String) -> usize {
        let id = *next_id;
        *next_id += 1;
        let label = self.triple.render_auto().replace('"', "\\\"");
        let _ = writeln!(out, "  n{id} [label=\"{label}\"];");
        for c in &self.children {
            let cid = c.write_dot(next_id, out);
            let edge = c.branch.map(Branch::edge_label).unwrap_or("");
            let _ = writeln!(out, "  n{id} -> n{cid} [label=\"{edge}\"];");
        }
        id
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markoff::tests::{ctx, triple};
    use crate::markoff::{is_fundamental, predecessor};

    #[test]
    fn depth_zero_is_root() {
        let c = ctx(13, "1");
        let root = triple(&c, "t", "t+2*i", "t^2+2*i*t-2");
        let tree = generate_tree(&c, &root, 0, 4).unwrap();
        assert_eq!(tree.node_count(), 1);
        assert_eq!(tree.triple, root);
    }

    #[test]
    fn quadratic_root_children() {
        let c = ctx(13, "1");
        let root = triple(&c, "t", "t+2*i", "t^2+2*i*t-2");
        let tree = generate_tree(&c, &root, 1, 4).unwrap();
        assert_eq!(
            tree.children[0].triple,
            triple(&c, "t+2*i", "t^2+2*i*t-2", "t^3+4*i*t^2-7*t-4*i")
        );
        assert_eq!(
            tree.children[1].triple,
            triple(&c, "t", "t^2+2*i*t-2", "t^3+2*i*t^2-3*t-2*i")
        );
    }

    #[test]
    fn all_nodes_are_solutions_and_grow() {
        let c = ctx(13, "t");
        let root = triple(&c, "t", "5*t", "5*t^3");
        let tree = generate_tree(&c, &root, 4, 8).unwrap();
        assert_eq!(tree.node_count(), (1 << 5) - 1);
        for node in tree.nodes() {
            assert!(is_solution(&c, &node.triple).unwrap());
            assert!(!is_fundamental(&node.triple));
            for child in &node.children {
                assert!(child.triple.height() > node.triple.height());
                // each child's predecessor is its parent, up to equal-degree order
                let (back, _) = predecessor(&c, &child.triple).unwrap();
                assert!(back.same_set(&node.triple));
            }
        }
    }

    #[test]
    fn budget_and_validation() {
        let c = ctx(13, "1");
        let root = triple(&c, "t", "t+2*i", "t^2+2*i*t-2");
        assert_eq!(
            generate_tree(&c, &root, 5, 4),
            Err(MarkoffError::BudgetExceeded {
                depth: 5,
                budget: 4
            })
        );
        assert_eq!(
            generate_tree(&c, &triple(&c, "t", "t", "t"), 1, 4),
            Err(MarkoffError::NotSolution)
        );
    }

    #[test]
    fn dot_export_shape() {
        let c = ctx(13, "1");
        let root = triple(&c, "t", "t+2*i", "t^2+2*i*t-2");
        let dot = generate_tree(&c, &root, 1, 4).unwrap().to_dot();
        assert!(dot.starts_with("digraph markoff {"));
        assert!(dot.contains("n0 [label=\"(t, t+2*i, t^2+2*i*t-2)\"];"));
        assert!(dot.contains("n0 -> n1 [label=\"s1\"];"));
        assert!(dot.contains("n0 -> n2 [label=\"s2\"];"));
    }
}
