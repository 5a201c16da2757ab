//! Reachability, the syntactic quotient, and the tree reduction.

use super::classify::classify_elements;
use super::morphism::{Morphism, Recognizer};
use super::{AlgebraError, ForestAlgebra};
use std::collections::{BTreeSet, HashMap};

/// Reachable part of a recognizer: the least sets containing `0` and `box`
/// and closed under products, letter images, insertions of reachable
/// horizontal elements, and action on `0`.
#[derive(Debug, Clone)]
pub struct Reachability {
    pub h: Vec<bool>,
    pub v: Vec<bool>,
}

pub fn reachable(r: &Recognizer) -> Reachability {
    let a = r.algebra();
    let mut h = vec![false; a.h_len()];
    let mut v = vec![false; a.v_len()];
    h[a.zero()] = true;
    v[a.one()] = true;
    for &l in &r.morphism.letter_image {
        v[l] = true;
    }
    loop {
        let mut changed = false;
        let vs: Vec<usize> = (0..a.v_len()).filter(|&x| v[x]).collect();
        let hs: Vec<usize> = (0..a.h_len()).filter(|&x| h[x]).collect();
        for &x in &vs {
            for &y in &vs {
                let p = a.mul(x, y);
                if !v[p] {
                    v[p] = true;
                    changed = true;
                }
            }
            let img = a.act(x, a.zero());
            if !h[img] {
                h[img] = true;
                changed = true;
            }
        }
        for &g in &hs {
            for ins in [a.ins_l(g), a.ins_r(g)] {
                if !v[ins] {
                    v[ins] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return Reachability { h, v };
        }
    }
}

/// Restriction of a recognizer to its reachable part.
pub fn restrict_reachable(r: &Recognizer) -> Recognizer {
    let a = r.algebra();
    let reach = reachable(r);
    if reach.h.iter().all(|&b| b) && reach.v.iter().all(|&b| b) {
        return r.clone();
    }
    let hs: Vec<usize> = (0..a.h_len()).filter(|&x| reach.h[x]).collect();
    let vs: Vec<usize> = (0..a.v_len()).filter(|&x| reach.v[x]).collect();
    let h_idx: HashMap<usize, usize> = hs.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let v_idx: HashMap<usize, usize> = vs.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let h_names = hs.iter().map(|&x| a.h_name(x).to_string()).collect();
    let v_names = vs.iter().map(|&x| a.v_name(x).to_string()).collect();
    let plus = hs
        .iter()
        .flat_map(|&x| hs.iter().map(move |&y| (x, y)))
        .map(|(x, y)| h_idx[&a.plus(x, y)] as u32)
        .collect();
    let mul = vs
        .iter()
        .flat_map(|&x| vs.iter().map(move |&y| (x, y)))
        .map(|(x, y)| v_idx[&a.mul(x, y)] as u32)
        .collect();
    let act = vs
        .iter()
        .flat_map(|&x| hs.iter().map(move |&y| (x, y)))
        .map(|(x, y)| h_idx[&a.act(x, y)] as u32)
        .collect();
    let ins_l = hs.iter().map(|&x| v_idx[&a.ins_l(x)] as u32).collect();
    let ins_r = hs.iter().map(|&x| v_idx[&a.ins_r(x)] as u32).collect();
    let algebra = ForestAlgebra::from_tables(
        h_names,
        v_names,
        plus,
        mul,
        act,
        ins_l,
        ins_r,
        h_idx[&a.zero()],
        v_idx[&a.one()],
    );
    Recognizer {
        morphism: Morphism {
            alphabet: r.alphabet().clone(),
            algebra,
            letter_image: r.morphism.letter_image.iter().map(|l| v_idx[l]).collect(),
        },
        accept: r
            .accept
            .iter()
            .filter_map(|x| h_idx.get(x).copied())
            .collect(),
    }
}

/// The syntactic quotient: horizontal elements are identified when no
/// vertical element separates them through the accepting set, vertical
/// elements when they act alike on the quotient. The input is restricted
/// to its reachable part first.
pub fn syntactic_quotient(r: &Recognizer) -> Recognizer {
    let r = restrict_reachable(r);
    let a = r.algebra();
    let h_len = a.h_len();
    let v_len = a.v_len();

    // h ~ h' iff for all v: vh ∈ X ⇔ vh' ∈ X.
    let mut h_sig: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut h_class = vec![0usize; h_len];
    for x in 0..h_len {
        let sig: Vec<bool> = (0..v_len)
            .map(|v| r.accept.contains(&a.act(v, x)))
            .collect();
        let len = h_sig.len();
        h_class[x] = *h_sig.entry(sig).or_insert(len);
    }
    let n_h = h_sig.len();

    // v ~ v' iff they act alike on the h-classes.
    let mut v_sig: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut v_class = vec![0usize; v_len];
    for v in 0..v_len {
        let sig: Vec<usize> = (0..h_len).map(|x| h_class[a.act(v, x)]).collect();
        let len = v_sig.len();
        v_class[v] = *v_sig.entry(sig).or_insert(len);
    }
    let n_v = v_sig.len();

    let mut h_rep = vec![usize::MAX; n_h];
    for x in 0..h_len {
        if h_rep[h_class[x]] == usize::MAX {
            h_rep[h_class[x]] = x;
        }
    }
    let mut v_rep = vec![usize::MAX; n_v];
    for v in 0..v_len {
        if v_rep[v_class[v]] == usize::MAX {
            v_rep[v_class[v]] = v;
        }
    }

    let h_names = h_rep.iter().map(|&x| a.h_name(x).to_string()).collect();
    let v_names = v_rep.iter().map(|&v| a.v_name(v).to_string()).collect();
    let plus = h_rep
        .iter()
        .flat_map(|&x| h_rep.iter().map(move |&y| (x, y)))
        .map(|(x, y)| h_class[a.plus(x, y)] as u32)
        .collect();
    let mul = v_rep
        .iter()
        .flat_map(|&x| v_rep.iter().map(move |&y| (x, y)))
        .map(|(x, y)| v_class[a.mul(x, y)] as u32)
        .collect();
    let act = v_rep
        .iter()
        .flat_map(|&v| h_rep.iter().map(move |&x| (v, x)))
        .map(|(v, x)| h_class[a.act(v, x)] as u32)
        .collect();
    let ins_l = h_rep.iter().map(|&x| v_class[a.ins_l(x)] as u32).collect();
    let ins_r = h_rep.iter().map(|&x| v_class[a.ins_r(x)] as u32).collect();
    let algebra = ForestAlgebra::from_tables(
        h_names,
        v_names,
        plus,
        mul,
        act,
        ins_l,
        ins_r,
        h_class[a.zero()],
        v_class[a.one()],
    );
    Recognizer {
        morphism: Morphism {
            alphabet: r.alphabet().clone(),
            algebra,
            letter_image: r
                .morphism
                .letter_image
                .iter()
                .map(|&l| v_class[l])
                .collect(),
        },
        accept: r.accept.iter().map(|&x| h_class[x]).collect(),
    }
}

/// The tree reduction of a recognizer of a tree language.
///
/// Horizontal elements are identified when every tree-context-type acts
/// alike on them, except that distinct tree-types are never identified.
/// The relation is verified to be an equivalence and a congruence before
/// quotienting; failures are reported with witnesses rather than assumed
/// away.
pub fn tree_reduction(r: &Recognizer) -> Result<Recognizer, AlgebraError> {
    let a = r.algebra();
    let classes = classify_elements(&r.morphism);
    for &x in &r.accept {
        if !classes.tree_type[x] {
            return Err(AlgebraError::AcceptNotTreeType(a.h_name(x).to_string()));
        }
    }
    let h_len = a.h_len();
    let v_len = a.v_len();
    let tct: Vec<usize> = (0..v_len)
        .filter(|&v| classes.tree_context_type[v])
        .collect();

    let related = |x: usize, y: usize| -> bool {
        if classes.tree_type[x] && classes.tree_type[y] && x != y {
            return false;
        }
        tct.iter().all(|&v| a.act(v, x) == a.act(v, y))
    };

    // The relation is reflexive and symmetric by shape; verify transitivity.
    let mut rel = vec![false; h_len * h_len];
    for x in 0..h_len {
        for y in 0..h_len {
            rel[x * h_len + y] = related(x, y);
        }
    }
    for x in 0..h_len {
        for y in 0..h_len {
            if !rel[x * h_len + y] {
                continue;
            }
            for z in 0..h_len {
                if rel[y * h_len + z] && !rel[x * h_len + z] {
                    return Err(AlgebraError::NotEquivalence(format!(
                        "transitivity fails at ({}, {}, {})",
                        a.h_name(x),
                        a.h_name(y),
                        a.h_name(z)
                    )));
                }
            }
        }
    }

    // Class assignment.
    let mut h_class = vec![usize::MAX; h_len];
    let mut n_h = 0;
    for x in 0..h_len {
        if h_class[x] != usize::MAX {
            continue;
        }
        for y in x..h_len {
            if rel[x * h_len + y] {
                h_class[y] = n_h;
            }
        }
        n_h += 1;
    }

    // Congruence checks: compatibility with + on both sides and with the
    // action of every vertical element.
    for x in 0..h_len {
        for y in 0..h_len {
            if h_class[x] != h_class[y] {
                continue;
            }
            for g in 0..h_len {
                if h_class[a.plus(g, x)] != h_class[a.plus(g, y)] {
                    return Err(AlgebraError::NotCongruence(format!(
                        "left addition of {} separates {} and {}",
                        a.h_name(g),
                        a.h_name(x),
                        a.h_name(y)
                    )));
                }
                if h_class[a.plus(x, g)] != h_class[a.plus(y, g)] {
                    return Err(AlgebraError::NotCongruence(format!(
                        "right addition of {} separates {} and {}",
                        a.h_name(g),
                        a.h_name(x),
                        a.h_name(y)
                    )));
                }
            }
            for v in 0..v_len {
                if h_class[a.act(v, x)] != h_class[a.act(v, y)] {
                    return Err(AlgebraError::NotCongruence(format!(
                        "action of {} separates {} and {}",
                        a.v_name(v),
                        a.h_name(x),
                        a.h_name(y)
                    )));
                }
            }
        }
    }

    // Vertical elements collapse to their action on the quotient.
    let mut v_sig: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut v_class = vec![0usize; v_len];
    for v in 0..v_len {
        let sig: Vec<usize> = (0..h_len).map(|x| h_class[a.act(v, x)]).collect();
        let len = v_sig.len();
        v_class[v] = *v_sig.entry(sig).or_insert(len);
    }
    let n_v = v_sig.len();

    let mut h_rep = vec![usize::MAX; n_h];
    for x in 0..h_len {
        if h_rep[h_class[x]] == usize::MAX {
            h_rep[h_class[x]] = x;
        }
    }
    let mut v_rep = vec![usize::MAX; n_v];
    for v in 0..v_len {
        if v_rep[v_class[v]] == usize::MAX {
            v_rep[v_class[v]] = v;
        }
    }
    let plus = h_rep
        .iter()
        .flat_map(|&x| h_rep.iter().map(move |&y| (x, y)))
        .map(|(x, y)| h_class[a.plus(x, y)] as u32)
        .collect();
    let mul = v_rep
        .iter()
        .flat_map(|&x| v_rep.iter().map(move |&y| (x, y)))
        .map(|(x, y)| v_class[a.mul(x, y)] as u32)
        .collect();
    let act = v_rep
        .iter()
        .flat_map(|&v| h_rep.iter().map(move |&x| (v, x)))
        .map(|(v, x)| h_class[a.act(v, x)] as u32)
        .collect();
    let ins_l = h_rep.iter().map(|&x| v_class[a.ins_l(x)] as u32).collect();
    let ins_r = h_rep.iter().map(|&x| v_class[a.ins_r(x)] as u32).collect();
    let h_names = h_rep.iter().map(|&x| a.h_name(x).to_string()).collect();
    let v_names = v_rep.iter().map(|&v| a.v_name(v).to_string()).collect();
    let algebra = ForestAlgebra::from_tables(
        h_names,
        v_names,
        plus,
        mul,
        act,
        ins_l,
        ins_r,
        h_class[a.zero()],
        v_class[a.one()],
    );
    let accept: BTreeSet<usize> = r.accept.iter().map(|&x| h_class[x]).collect();
    Ok(Recognizer {
        morphism: Morphism {
            alphabet: r.alphabet().clone(),
            algebra,
            letter_image: r
                .morphism
                .letter_image
                .iter()
                .map(|&l| v_class[l])
                .collect(),
        },
        accept,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;
    use crate::corpus;

    #[test]
    fn syntactic_quotient_is_idempotent() {
        for entry in corpus::entries(&Caps::default()).unwrap() {
            let syn = entry.automaton.to_syntactic(&Caps::default()).unwrap();
            let again = syntactic_quotient(&syn);
            assert_eq!(
                syn.algebra().h_len(),
                again.algebra().h_len(),
                "{}",
                entry.name
            );
            assert_eq!(
                syn.algebra().v_len(),
                again.algebra().v_len(),
                "{}",
                entry.name
            );
        }
    }

    #[test]
    fn accept_all_collapses_to_one_point() {
        let entry = corpus::accept_all_entry();
        let syn = entry.automaton.to_syntactic(&Caps::default()).unwrap();
        assert_eq!(syn.algebra().h_len(), 1);
        assert_eq!(syn.algebra().v_len(), 1);
    }

    #[test]
    fn construction_from_reachable_automata_is_fully_reachable() {
        for entry in corpus::entries(&Caps::default()).unwrap() {
            if entry.automaton.n_states() > 8 {
                continue;
            }
            let full = entry
                .automaton
                .algebra_from_automaton(&Caps::default())
                .unwrap();
            let reach = reachable(&full);
            assert!(reach.h.iter().all(|&b| b), "{}", entry.name);
            assert!(reach.v.iter().all(|&b| b), "{}", entry.name);
        }
    }

    #[test]
    fn unreachable_junk_is_flagged_and_dropped() {
        // Extend the one-state automaton with an unreachable state.
        let ab = crate::forest::Alphabet::of_chars("a");
        let auto = crate::algebra::automaton::ForestAutomaton::new(
            ab,
            vec!["q".into(), "junk".into()],
            vec![0, 1, 1, 1],
            0,
            vec![vec![0, 1]],
            [0].into(),
        )
        .unwrap();
        let rec = auto.algebra_from_automaton(&Caps::default()).unwrap();
        let reach = reachable(&rec);
        assert!(
            reach.h.iter().any(|&b| !b),
            "junk state must be unreachable"
        );
        let small = restrict_reachable(&rec);
        assert!(small.algebra().h_len() < rec.algebra().h_len());
        assert!(small.algebra().check_axioms().is_empty());
    }

    #[test]
    fn tree_reduction_is_identity_on_separated_algebras() {
        let entry = corpus::abcd_entry();
        let syn = entry.automaton.to_syntactic(&Caps::default()).unwrap();
        let red = tree_reduction(&syn).unwrap();
        assert_eq!(red.algebra().h_len(), syn.algebra().h_len());
        assert_eq!(red.algebra().v_len(), syn.algebra().v_len());
        // Reducing twice changes nothing further.
        let red2 = tree_reduction(&red).unwrap();
        assert_eq!(red2.algebra().h_len(), red.algebra().h_len());
        assert_eq!(red2.algebra().v_len(), red.algebra().v_len());
    }

    #[test]
    fn tree_reduction_merges_forest_only_distinctions() {
        let caps = Caps::default();
        let entry = corpus::tree_piece_ab_entry();
        let syn = entry.automaton.to_syntactic(&caps).unwrap();
        let red = tree_reduction(&syn).unwrap();
        assert!(
            red.algebra().h_len() < syn.algebra().h_len(),
            "the reduction must merge something: {} vs {}",
            red.algebra().h_len(),
            syn.algebra().h_len()
        );
        // The reduced recognizer still recognizes the same trees.
        let mut en = crate::oracle::ForestEnum::new(syn.alphabet().clone());
        for t in en.all_upto(6) {
            if t.is_tree() {
                assert_eq!(
                    red.accepts(&t).unwrap(),
                    syn.accepts(&t).unwrap(),
                    "{}",
                    t.render(syn.alphabet())
                );
            }
        }
    }

    #[test]
    fn tree_reduction_rejects_forest_languages() {
        let entry = corpus::all_trees_aa_entry();
        let syn = entry.automaton.to_syntactic(&Caps::default()).unwrap();
        assert!(matches!(
            tree_reduction(&syn),
            Err(AlgebraError::AcceptNotTreeType(_))
        ));
    }
}
