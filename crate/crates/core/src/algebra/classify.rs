//! Element classification: tree-types, tree-context-types, sum-form
//! elements and forest values.

use super::morphism::Morphism;

/// Per-element flags, relative to a morphism.
#[derive(Debug, Clone)]
pub struct ElementClass {
    /// `H` elements that are images of trees. An element that is the image
    /// of both a tree and a non-tree still counts.
    pub tree_type: Vec<bool>,
    /// `H` elements that are images of forests; on a reachable algebra
    /// this is everything.
    pub forest_value: Vec<bool>,
    /// `V` elements that are images of tree-contexts: exactly the products
    /// of a letter image with anything.
    pub tree_context_type: Vec<bool>,
    /// `V` elements of the shape `(g + _ + h)`.
    pub sum_form: Vec<bool>,
}

/// Least-fixpoint classification. Tree values and forest values grow
/// together: a tree is a letter applied to a forest value, a forest value
/// is a (possibly empty) sum of tree values.
pub fn classify_elements(m: &Morphism) -> ElementClass {
    let a = &m.algebra;
    let h_len = a.h_len();
    let v_len = a.v_len();

    let mut tree_type = vec![false; h_len];
    let mut forest_value = vec![false; h_len];
    forest_value[a.zero()] = true;
    loop {
        let mut changed = false;
        for &l in &m.letter_image {
            for f in 0..h_len {
                if forest_value[f] {
                    let t = a.act(l, f);
                    if !tree_type[t] {
                        tree_type[t] = true;
                        changed = true;
                    }
                }
            }
        }
        for g in 0..h_len {
            if !forest_value[g] {
                continue;
            }
            for t in 0..h_len {
                if tree_type[t] {
                    let s = a.plus(g, t);
                    if !forest_value[s] {
                        forest_value[s] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }

    let mut tree_context_type = vec![false; v_len];
    for &l in &m.letter_image {
        for v in 0..v_len {
            tree_context_type[a.mul(l, v)] = true;
        }
    }

    let mut sum_form = vec![false; v_len];
    for g in 0..h_len {
        for h in 0..h_len {
            sum_form[a.mul(a.ins_l(g), a.ins_r(h))] = true;
        }
    }

    ElementClass {
        tree_type,
        forest_value,
        tree_context_type,
        sum_form,
    }
}

/// Independent route to the tree-types: stratified by depth (at most
/// `|V|`) and by the number of summands per level (at most `|H|`),
/// mirroring an enumeration of concrete trees evaluated through the
/// morphism.
pub fn tree_types_depth_bounded(m: &Morphism) -> Vec<bool> {
    let a = &m.algebra;
    let h_len = a.h_len();
    let mut trees = vec![false; h_len];
    let mut forests = vec![false; h_len];
    forests[a.zero()] = true;
    for _depth in 0..a.v_len() {
        let mut new_trees = trees.clone();
        for &l in &m.letter_image {
            for f in 0..h_len {
                if forests[f] {
                    new_trees[a.act(l, f)] = true;
                }
            }
        }
        // Sums of at most |H| tree values.
        let mut new_forests = vec![false; h_len];
        new_forests[a.zero()] = true;
        for _arity in 0..h_len {
            let snapshot: Vec<usize> = (0..h_len).filter(|&x| new_forests[x]).collect();
            for g in snapshot {
                for t in 0..h_len {
                    if new_trees[t] {
                        new_forests[a.plus(g, t)] = true;
                    }
                }
            }
        }
        trees = new_trees;
        forests = new_forests;
    }
    trees
}
