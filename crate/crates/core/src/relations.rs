//! Node tables: flattened forests and contexts with the strict ancestor
//! order, the horizontal (sibling) order, the depth-first order and the
//! closest common ancestor.
//!
//! Nodes are indexed by depth-first preorder position; the hole of a
//! context participates as a distinguished leaf with no label. Trees of a
//! forest count as mutual siblings at the root level.

use crate::forest::{
    context_to_h, forest_to_h, h_to_context, h_to_forest, Context, Forest, HTree, Label, NodeId,
};

#[derive(Debug, Clone)]
pub struct NodeTable {
    labels: Vec<Option<Label>>,
    parent: Vec<Option<usize>>,
    end: Vec<usize>, // node i's subtree occupies dfs positions [i, end[i])
    ids: Vec<NodeId>,
    hole: Option<usize>,
}

impl NodeTable {
    pub fn from_forest(f: &Forest) -> Self {
        Self::from_h(&forest_to_h(f))
    }

    pub fn from_context(c: &Context) -> Self {
        Self::from_h(&context_to_h(c))
    }

    pub(crate) fn from_h(h: &[HTree]) -> Self {
        let mut t = NodeTable {
            labels: Vec::new(),
            parent: Vec::new(),
            end: Vec::new(),
            ids: Vec::new(),
            hole: None,
        };
        fn walk(t: &mut NodeTable, nodes: &[HTree], parent: Option<usize>, path: &[usize]) {
            for (i, n) in nodes.iter().enumerate() {
                let idx = t.labels.len();
                let mut p = path.to_vec();
                p.push(i);
                t.labels.push(n.label);
                t.parent.push(parent);
                t.end.push(0);
                t.ids.push(NodeId(p.clone()));
                if n.label.is_none() {
                    t.hole = Some(idx);
                }
                walk(t, &n.children, Some(idx), &p);
                t.end[idx] = t.labels.len();
            }
        }
        walk(&mut t, h, None, &[]);
        t
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> Option<Label> {
        self.labels[i]
    }

    pub fn id(&self, i: usize) -> &NodeId {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &NodeId) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn hole(&self) -> Option<usize> {
        self.hole
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    /// Strict ancestor order `<`.
    pub fn is_ancestor(&self, i: usize, j: usize) -> bool {
        i != j && i < j && j < self.end[i]
    }

    pub fn is_ancestor_or_eq(&self, i: usize, j: usize) -> bool {
        i == j || self.is_ancestor(i, j)
    }

    /// Same parent, or both at root level.
    pub fn are_siblings(&self, i: usize, j: usize) -> bool {
        i != j && self.parent[i] == self.parent[j]
    }

    /// Horizontal order `<_h`: siblings with `i` strictly earlier.
    pub fn horizontal_lt(&self, i: usize, j: usize) -> bool {
        self.are_siblings(i, j) && i < j
    }

    /// Depth-first order `<_dfs` is the index order.
    pub fn dfs_lt(&self, i: usize, j: usize) -> bool {
        i < j
    }

    /// Closest common ancestor: the deepest node that is an
    /// ancestor-or-equal of both arguments, when one exists.
    pub fn cca(&self, i: usize, j: usize) -> Option<usize> {
        if self.is_ancestor_or_eq(i, j) {
            return Some(i);
        }
        if self.is_ancestor_or_eq(j, i) {
            return Some(j);
        }
        let mut cur = self.parent[i];
        while let Some(p) = cur {
            if self.is_ancestor(p, j) {
                return Some(p);
            }
            cur = self.parent[p];
        }
        None
    }

    /// Restriction to a subset of nodes (sorted, depth-first): keeps the
    /// ancestor and depth-first structure of the kept nodes.
    pub(crate) fn restrict_h(&self, keep: &[usize]) -> Vec<HTree> {
        let mut result: Vec<HTree> = Vec::new();
        let mut stack: Vec<(usize, HTree)> = Vec::new();
        fn finish(result: &mut Vec<HTree>, stack: &mut Vec<(usize, HTree)>) {
            let (_, node) = stack.pop().expect("nonempty stack");
            match stack.last_mut() {
                Some((_, parent)) => parent.children.push(node),
                None => result.push(node),
            }
        }
        for &k in keep {
            while let Some(&(top, _)) = stack.last() {
                if self.is_ancestor(top, k) {
                    break;
                }
                finish(&mut result, &mut stack);
            }
            stack.push((
                k,
                HTree {
                    label: self.labels[k],
                    children: Vec::new(),
                },
            ));
        }
        while !stack.is_empty() {
            finish(&mut result, &mut stack);
        }
        result
    }

    /// Restriction yielding a forest; `keep` must not contain the hole.
    pub fn restrict_forest(&self, keep: &[usize]) -> Forest {
        h_to_forest(&self.restrict_h(keep)).expect("no hole in restriction")
    }

    /// Restriction yielding a context; `keep` must contain the hole.
    pub fn restrict_context(&self, keep: &[usize]) -> Context {
        h_to_context(&self.restrict_h(keep)).expect("exactly one hole in restriction")
    }
}
