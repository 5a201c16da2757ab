//! Labeled unranked ordered forests, trees, and one-hole contexts.
//!
//! All values are immutable; every operation returns a fresh value. The
//! empty forest is the additive unit and never appears as a child entry,
//! so `a(0) = a` and `0 + t = t + 0 = t` hold by construction.

use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("alphabet must not be empty")]
    Empty,
    #[error("duplicate label `{0}`")]
    Duplicate(String),
    #[error("invalid label `{0}`: labels are nonempty alphanumeric tokens")]
    BadToken(String),
}

/// Index of a letter in an [`Alphabet`].
#[derive(Debug, Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub u32);

/// A declared finite set of node labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    labels: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(labels: I) -> Result<Self, AlphabetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(AlphabetError::Empty);
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if l.is_empty() || !l.chars().all(|c| c.is_ascii_alphanumeric()) {
                return Err(AlphabetError::BadToken(l.clone()));
            }
            if !seen.insert(l.clone()) {
                return Err(AlphabetError::Duplicate(l.clone()));
            }
        }
        Ok(Alphabet { labels })
    }

    /// Convenience constructor for single-character alphabets like `"abc"`.
    pub fn of_chars(chars: &str) -> Self {
        Alphabet::new(chars.chars().map(|c| c.to_string())).expect("valid alphabet")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, name: &str) -> Option<Label> {
        self.labels
            .iter()
            .position(|l| l == name)
            .map(|i| Label(i as u32))
    }

    pub fn name(&self, l: Label) -> &str {
        &self.labels[l.0 as usize]
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        (0..self.labels.len()).map(|i| Label(i as u32))
    }

    pub fn names(&self) -> &[String] {
        &self.labels
    }

    pub fn contains(&self, l: Label) -> bool {
        (l.0 as usize) < self.labels.len()
    }

    pub fn all_single_char(&self) -> bool {
        self.labels.iter().all(|l| l.chars().count() == 1)
    }
}

/// A node path: sibling indices from the root list down to the node.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub Vec<usize>);

impl NodeId {
    pub fn root(i: usize) -> Self {
        NodeId(vec![i])
    }
    pub fn child(&self, i: usize) -> Self {
        let mut p = self.0.clone();
        p.push(i);
        NodeId(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tree {
    pub label: Label,
    pub children: Forest,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Forest {
    pub trees: Vec<Tree>,
}

impl Tree {
    pub fn new(label: Label, children: Forest) -> Self {
        Tree { label, children }
    }

    pub fn leaf(label: Label) -> Self {
        Tree {
            label,
            children: Forest::empty(),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children.size()
    }
}

impl Forest {
    pub fn empty() -> Self {
        Forest { trees: Vec::new() }
    }

    pub fn single(t: Tree) -> Self {
        Forest { trees: vec![t] }
    }

    pub fn from_trees(trees: Vec<Tree>) -> Self {
        Forest { trees }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        self.trees.iter().map(Tree::size).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn is_tree(&self) -> bool {
        self.trees.len() == 1
    }

    /// Horizontal concatenation `self + other`.
    pub fn concat(&self, other: &Forest) -> Forest {
        let mut trees = self.trees.clone();
        trees.extend(other.trees.iter().cloned());
        Forest { trees }
    }

    pub fn node(&self, id: &NodeId) -> Option<&Tree> {
        let mut trees = &self.trees;
        let mut cur: Option<&Tree> = None;
        for &i in &id.0 {
            cur = trees.get(i);
            trees = &cur?.children.trees;
        }
        cur
    }

    /// Removes a single node, splicing its children into its place.
    pub fn delete_node(&self, id: &NodeId) -> Option<Forest> {
        fn go(trees: &[Tree], path: &[usize]) -> Option<Vec<Tree>> {
            let (&i, rest) = path.split_first()?;
            if i >= trees.len() {
                return None;
            }
            let mut out: Vec<Tree> = trees[..i].to_vec();
            if rest.is_empty() {
                out.extend(trees[i].children.trees.iter().cloned());
            } else {
                let mut t = trees[i].clone();
                t.children = Forest {
                    trees: go(&t.children.trees, rest)?,
                };
                out.push(t);
            }
            out.extend(trees[i + 1..].iter().cloned());
            Some(out)
        }
        go(&self.trees, &id.0).map(|trees| Forest { trees })
    }

    /// Canonical representative of the sibling-reordering class: children
    /// lists are recursively sorted.
    pub fn canonical_reorder(&self) -> Forest {
        let mut trees: Vec<Tree> = self
            .trees
            .iter()
            .map(|t| Tree {
                label: t.label,
                children: t.children.canonical_reorder(),
            })
            .collect();
        trees.sort();
        Forest { trees }
    }

    pub fn render(&self, ab: &Alphabet) -> String {
        let mut out = String::new();
        for (i, t) in self.trees.iter().enumerate() {
            if i > 0 {
                out.push('+');
            }
            t.render_into(ab, &mut out);
        }
        out
    }
}

impl Tree {
    fn render_into(&self, ab: &Alphabet, out: &mut String) {
        out.push_str(ab.name(self.label));
        if !self.children.is_empty() {
            out.push('(');
            out.push_str(&self.children.render(ab));
            out.push(')');
        }
    }
}

/// The part of a [`Context`] holding the hole: either the hole itself or a
/// node whose children contain it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Spine {
    Hole,
    Node(Label, Box<Context>),
}

/// A forest with exactly one leaf replaced by a hole. The invariant "exactly
/// one hole" holds by construction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Context {
    pub left: Vec<Tree>,
    pub spine: Spine,
    pub right: Vec<Tree>,
}

impl Context {
    /// The empty context, the unit of composition.
    pub fn hole() -> Self {
        Context {
            left: Vec::new(),
            spine: Spine::Hole,
            right: Vec::new(),
        }
    }

    /// The generator context `a(_)`.
    pub fn letter(l: Label) -> Self {
        Context {
            left: Vec::new(),
            spine: Spine::Node(l, Box::new(Context::hole())),
            right: Vec::new(),
        }
    }

    /// The insertion context `g + _`.
    pub fn insert_left(g: &Forest) -> Self {
        Context {
            left: g.trees.clone(),
            spine: Spine::Hole,
            right: Vec::new(),
        }
    }

    /// The insertion context `_ + g`.
    pub fn insert_right(g: &Forest) -> Self {
        Context {
            left: Vec::new(),
            spine: Spine::Hole,
            right: g.trees.clone(),
        }
    }

    pub fn is_hole(&self) -> bool {
        self.left.is_empty() && self.right.is_empty() && matches!(self.spine, Spine::Hole)
    }

    /// A tree-context is nonempty and has a single root node that is an
    /// ancestor of every other node, including the hole.
    pub fn is_tree_context(&self) -> bool {
        self.left.is_empty() && self.right.is_empty() && matches!(self.spine, Spine::Node(..))
    }

    /// Number of nodes; the hole is not counted.
    pub fn size(&self) -> usize {
        let spine = match &self.spine {
            Spine::Hole => 0,
            Spine::Node(_, inner) => 1 + inner.size(),
        };
        self.left.iter().map(Tree::size).sum::<usize>()
            + spine
            + self.right.iter().map(Tree::size).sum::<usize>()
    }

    /// Replaces the hole with a forest.
    pub fn substitute(&self, s: &Forest) -> Forest {
        let mut trees = self.left.clone();
        match &self.spine {
            Spine::Hole => trees.extend(s.trees.iter().cloned()),
            Spine::Node(l, inner) => trees.push(Tree::new(*l, inner.substitute(s))),
        }
        trees.extend(self.right.iter().cloned());
        Forest { trees }
    }

    /// Replaces the hole of `self` with `inner`.
    pub fn compose(&self, inner: &Context) -> Context {
        match &self.spine {
            Spine::Hole => {
                let mut left = self.left.clone();
                left.extend(inner.left.iter().cloned());
                let mut right = inner.right.clone();
                right.extend(self.right.iter().cloned());
                Context {
                    left,
                    spine: inner.spine.clone(),
                    right,
                }
            }
            Spine::Node(l, mid) => Context {
                left: self.left.clone(),
                spine: Spine::Node(*l, Box::new(mid.compose(inner))),
                right: self.right.clone(),
            },
        }
    }

    pub fn render(&self, ab: &Alphabet) -> String {
        let mut out = String::new();
        for t in &self.left {
            t.render_into(ab, &mut out);
            out.push('+');
        }
        match &self.spine {
            Spine::Hole => out.push('_'),
            Spine::Node(l, inner) => {
                out.push_str(ab.name(*l));
                out.push('(');
                out.push_str(&inner.render(ab));
                out.push(')');
            }
        }
        for t in &self.right {
            out.push('+');
            t.render_into(ab, &mut out);
        }
        out
    }
}

/// Internal representation shared by the parser, the node tables and the
/// restriction operations: a forest whose leaves may include holes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct HTree {
    pub label: Option<Label>, // None marks the hole
    pub children: Vec<HTree>,
}

pub(crate) fn forest_to_h(f: &Forest) -> Vec<HTree> {
    f.trees.iter().map(tree_to_h).collect()
}

fn tree_to_h(t: &Tree) -> HTree {
    HTree {
        label: Some(t.label),
        children: forest_to_h(&t.children),
    }
}

pub(crate) fn context_to_h(c: &Context) -> Vec<HTree> {
    let mut out: Vec<HTree> = c.left.iter().map(tree_to_h).collect();
    match &c.spine {
        Spine::Hole => out.push(HTree {
            label: None,
            children: Vec::new(),
        }),
        Spine::Node(l, inner) => out.push(HTree {
            label: Some(*l),
            children: context_to_h(inner),
        }),
    }
    out.extend(c.right.iter().map(tree_to_h));
    out
}

pub(crate) fn count_holes(h: &[HTree]) -> usize {
    h.iter()
        .map(|t| {
            if t.label.is_none() {
                1
            } else {
                count_holes(&t.children)
            }
        })
        .sum()
}

/// Fails when a hole is present.
pub(crate) fn h_to_forest(h: &[HTree]) -> Option<Forest> {
    let mut trees = Vec::with_capacity(h.len());
    for t in h {
        let label = t.label?;
        trees.push(Tree {
            label,
            children: h_to_forest(&t.children)?,
        });
    }
    Some(Forest { trees })
}

/// Requires exactly one hole.
pub(crate) fn h_to_context(h: &[HTree]) -> Option<Context> {
    let pos = h
        .iter()
        .position(|t| t.label.is_none() || count_holes(&t.children) > 0)?;
    let left = h_to_forest(&h[..pos])?.trees;
    let right = h_to_forest(&h[pos + 1..])?.trees;
    let spine = match h[pos].label {
        None => {
            if !h[pos].children.is_empty() {
                return None;
            }
            Spine::Hole
        }
        Some(l) => Spine::Node(l, Box::new(h_to_context(&h[pos].children)?)),
    };
    Some(Context { left, spine, right })
}

/// Enumerates the distinct sibling reorderings of a forest, calling `found`
/// on each. Stops early when `found` returns `true`; errors out when more
/// than `cap` candidates would be produced.
pub fn for_each_reordering<F>(f: &Forest, cap: usize, found: &mut F) -> Result<bool, ReorderingCap>
where
    F: FnMut(&Forest) -> bool,
{
    let all = all_reorderings(f, cap)?;
    for g in &all {
        if found(g) {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("sibling reordering candidates exceeded the cap of {0}")]
pub struct ReorderingCap(pub usize);

/// All distinct sibling reorderings of a forest, order unspecified but
/// deterministic.
pub fn all_reorderings(f: &Forest, cap: usize) -> Result<Vec<Forest>, ReorderingCap> {
    let mut budget = cap;
    reorderings_rec(f, &mut budget).ok_or(ReorderingCap(cap))
}

fn reorderings_rec(f: &Forest, budget: &mut usize) -> Option<Vec<Forest>> {
    // Variants for each tree, then distinct permutations of the list.
    let mut per_tree: Vec<Vec<Tree>> = Vec::with_capacity(f.trees.len());
    for t in &f.trees {
        let subs = reorderings_rec(&t.children, budget)?;
        per_tree.push(
            subs.into_iter()
                .map(|c| Tree {
                    label: t.label,
                    children: c,
                })
                .collect(),
        );
    }
    let mut lists: Vec<Vec<Tree>> = vec![Vec::new()];
    for variants in &per_tree {
        let mut next = Vec::new();
        for prefix in &lists {
            for v in variants {
                if *budget == 0 {
                    return None;
                }
                *budget -= 1;
                let mut p = prefix.clone();
                p.push(v.clone());
                next.push(p);
            }
        }
        lists = next;
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for list in lists {
        let mut perm_out = Vec::new();
        permute_distinct(
            &list,
            &mut Vec::new(),
            &mut vec![false; list.len()],
            budget,
            &mut perm_out,
        )?;
        for p in perm_out {
            let forest = Forest { trees: p };
            if seen.insert(forest.clone()) {
                out.push(forest);
            }
        }
    }
    Some(out)
}

fn permute_distinct(
    items: &[Tree],
    cur: &mut Vec<Tree>,
    used: &mut Vec<bool>,
    budget: &mut usize,
    out: &mut Vec<Vec<Tree>>,
) -> Option<()> {
    if cur.len() == items.len() {
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        out.push(cur.clone());
        return Some(());
    }
    let mut tried: Vec<&Tree> = Vec::new();
    for i in 0..items.len() {
        if used[i] || tried.iter().any(|t| **t == items[i]) {
            continue;
        }
        tried.push(&items[i]);
        used[i] = true;
        cur.push(items[i].clone());
        permute_distinct(items, cur, used, budget, out)?;
        cur.pop();
        used[i] = false;
    }
    Some(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_context, parse_forest};

    fn ab() -> Alphabet {
        Alphabet::of_chars("abcd")
    }

    #[test]
    fn unit_laws_hold_by_construction() {
        let ab = ab();
        let a = parse_forest("a", &ab).unwrap();
        assert_eq!(Forest::empty().concat(&a), a);
        assert_eq!(a.concat(&Forest::empty()), a);
        let ctx = parse_context("a(_)", &ab).unwrap();
        assert_eq!(ctx.substitute(&Forest::empty()), a);
    }

    #[test]
    fn substitute_replaces_hole() {
        let ab = ab();
        let p = parse_context("a(a+b(c))+b+c(_+b)", &ab).unwrap();
        let s = parse_forest("b+c(a)", &ab).unwrap();
        let expect = parse_forest("a(a+b(c))+b+c(b+c(a)+b)", &ab).unwrap();
        assert_eq!(p.substitute(&s), expect);
    }

    #[test]
    fn compose_chains_contexts() {
        let ab = ab();
        let p = parse_context("a(_)", &ab).unwrap();
        let q = parse_context("b(_)", &ab).unwrap();
        let expect = parse_context("a(b(_))", &ab).unwrap();
        assert_eq!(p.compose(&q), expect);
        assert_eq!(Context::hole().compose(&p), p);
        assert_eq!(p.compose(&Context::hole()), p);
    }

    #[test]
    fn sizes_ignore_the_hole() {
        let ab = ab();
        let p = parse_context("a(a+b(c))+b+c(_+b)", &ab).unwrap();
        assert_eq!(p.size(), 7);
        assert_eq!(Context::hole().size(), 0);
    }

    #[test]
    fn delete_node_splices_children() {
        let ab = ab();
        let t = parse_forest("d(c(a+b))", &ab).unwrap();
        let got = t.delete_node(&NodeId(vec![0, 0])).unwrap();
        assert_eq!(got, parse_forest("d(a+b)", &ab).unwrap());
        let gone_root = t.delete_node(&NodeId(vec![0])).unwrap();
        assert_eq!(gone_root, parse_forest("c(a+b)", &ab).unwrap());
    }

    #[test]
    fn reorderings_are_distinct_and_complete() {
        let ab = ab();
        let t = parse_forest("a(b+c)+d", &ab).unwrap();
        let all = all_reorderings(&t, 1000).unwrap();
        assert_eq!(all.len(), 4);
        let t2 = parse_forest("a+a", &ab).unwrap();
        assert_eq!(all_reorderings(&t2, 1000).unwrap().len(), 1);
    }

    #[test]
    fn canonical_reorder_is_idempotent() {
        let ab = ab();
        let t = parse_forest("c(b+a)+a(d+c)", &ab).unwrap();
        let c = t.canonical_reorder();
        assert_eq!(c.canonical_reorder(), c);
        assert_eq!(
            all_reorderings(&t, 1000)
                .unwrap()
                .iter()
                .map(Forest::canonical_reorder)
                .collect::<HashSet<_>>()
                .len(),
            1
        );
    }

    #[test]
    fn tree_context_shape() {
        let ab = ab();
        assert!(parse_context("a(b+_)", &ab).unwrap().is_tree_context());
        assert!(!parse_context("a+_", &ab).unwrap().is_tree_context());
        assert!(!Context::hole().is_tree_context());
    }
}
