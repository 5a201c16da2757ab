//! Piece relations on the elements of a finite forest algebra.
//!
//! The plain relation is the least relation on `V` containing `(box, v)`
//! and `(v, v)` and closed under componentwise products and under the two
//! insertion rules `(v, v') -> ((v0+_), (v'0+_))` and
//! `(v, v') -> ((_+v0), (_+v'0))`.
//!
//! The cca relation replaces unrestricted products by three guarded
//! rules: prefixing both sides with the same letter image, products whose
//! right factors are tree-context-types, and products whose left factors
//! have the shape `(g+_+h)`.
//!
//! The horizontal relation has no known rule system; it is computed by
//! semantic enumeration of context pieces up to a size bound and is an
//! under-approximation carrying that bound.

use crate::algebra::classify::ElementClass;
use crate::algebra::morphism::Recognizer;
use crate::caps::Caps;
use crate::forest::Label;
use crate::oracle::{contexts_of_size, ForestEnum};
use crate::pieces::{subset_ok, PieceVariant, PiecesError};
use crate::relations::NodeTable;
use std::collections::HashSet;

/// How a pair entered the relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Derivation {
    SeedBox,
    SeedRefl,
    /// Componentwise product of two earlier pairs.
    Compose {
        left: usize,
        right: usize,
    },
    /// Both sides prefixed with a letter image.
    LetterPrefix {
        letter: Label,
        from: usize,
    },
    /// Left insertion of both sides' values at the empty forest.
    InsertLeft {
        from: usize,
    },
    /// Right insertion.
    InsertRight {
        from: usize,
    },
    /// Found by embedding concrete contexts.
    Semantic {
        piece: String,
        whole: String,
    },
}

#[derive(Debug, Clone)]
pub struct PieceRelation {
    pub variant: PieceVariant,
    v_len: usize,
    h_len: usize,
    v_bits: Vec<u64>,
    h_bits: Vec<u64>,
    /// Pairs `(small, large)` in discovery order.
    pub pairs: Vec<(u32, u32)>,
    pub derivations: Vec<Derivation>,
    /// For under-approximations, the context size bound used.
    pub bound: Option<usize>,
    pub under_approximation: bool,
}

impl PieceRelation {
    fn new(variant: PieceVariant, v_len: usize, h_len: usize) -> Self {
        PieceRelation {
            variant,
            v_len,
            h_len,
            v_bits: vec![0; (v_len * v_len).div_ceil(64)],
            h_bits: vec![0; (h_len * h_len).div_ceil(64)],
            pairs: Vec::new(),
            derivations: Vec::new(),
            bound: None,
            under_approximation: false,
        }
    }

    /// `v` is a piece of `w`.
    #[inline]
    pub fn on_v(&self, v: usize, w: usize) -> bool {
        let i = v * self.v_len + w;
        self.v_bits[i / 64] >> (i % 64) & 1 == 1
    }

    /// `g` is a piece of `h`, derived through the action on the empty
    /// forest.
    #[inline]
    pub fn on_h(&self, g: usize, h: usize) -> bool {
        let i = g * self.h_len + h;
        self.h_bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    fn insert(&mut self, v: usize, w: usize, d: Derivation) -> Option<usize> {
        let i = v * self.v_len + w;
        if self.v_bits[i / 64] >> (i % 64) & 1 == 1 {
            return None;
        }
        self.v_bits[i / 64] |= 1 << (i % 64);
        self.pairs.push((v as u32, w as u32));
        self.derivations.push(d);
        Some(self.pairs.len() - 1)
    }

    fn derive_h(&mut self, algebra: &crate::algebra::ForestAlgebra) {
        for &(v, w) in &self.pairs {
            let g = algebra.act(v as usize, algebra.zero());
            let h = algebra.act(w as usize, algebra.zero());
            let i = g * self.h_len + h;
            self.h_bits[i / 64] |= 1 << (i % 64);
        }
    }

    /// The pairs readable as element names, for reports.
    pub fn dump(&self, algebra: &crate::algebra::ForestAlgebra) -> Vec<(String, String)> {
        self.pairs
            .iter()
            .map(|&(v, w)| {
                (
                    algebra.v_name(v as usize).to_string(),
                    algebra.v_name(w as usize).to_string(),
                )
            })
            .collect()
    }

    /// Rule trace for one pair, outermost step first.
    pub fn trace(&self, pair: usize) -> Vec<String> {
        let mut out = Vec::new();
        let mut stack = vec![pair];
        while let Some(i) = stack.pop() {
            match &self.derivations[i] {
                Derivation::SeedBox => out.push(format!("pair {i}: box seed")),
                Derivation::SeedRefl => out.push(format!("pair {i}: reflexive seed")),
                Derivation::Compose { left, right } => {
                    out.push(format!("pair {i}: product of pairs {left} and {right}"));
                    stack.push(*left);
                    stack.push(*right);
                }
                Derivation::LetterPrefix { letter, from } => {
                    out.push(format!(
                        "pair {i}: letter #{} prefixed to pair {from}",
                        letter.0
                    ));
                    stack.push(*from);
                }
                Derivation::InsertLeft { from } => {
                    out.push(format!("pair {i}: left insertion of pair {from}"));
                    stack.push(*from);
                }
                Derivation::InsertRight { from } => {
                    out.push(format!("pair {i}: right insertion of pair {from}"));
                    stack.push(*from);
                }
                Derivation::Semantic { piece, whole } => {
                    out.push(format!("pair {i}: contexts \"{piece}\" into \"{whole}\""));
                }
            }
        }
        out
    }
}

/// Least fixpoint of the unrestricted rule system. The closure works with
/// a generator set (seeds plus insertion-derived pairs); products of
/// arbitrary pairs are words over the generators, built by right
/// extension.
pub fn piece_relation_plain(r: &Recognizer) -> PieceRelation {
    piece_relation_plain_with_order(r, false)
}

/// Same fixpoint with the seed order reversed; used to check confluence.
pub fn piece_relation_plain_with_order(r: &Recognizer, reversed: bool) -> PieceRelation {
    let a = r.algebra();
    let v_len = a.v_len();
    let mut rel = PieceRelation::new(PieceVariant::Plain, v_len, a.h_len());
    let mut gens: Vec<usize> = Vec::new();
    let mut seen_h: HashSet<(usize, usize)> = HashSet::new();

    let order: Vec<usize> = if reversed {
        (0..v_len).rev().collect()
    } else {
        (0..v_len).collect()
    };
    let mut pending: Vec<usize> = Vec::new();
    for &v in &order {
        if let Some(i) = rel.insert(a.one(), v, Derivation::SeedBox) {
            pending.push(i);
        }
    }
    for &v in &order {
        if let Some(i) = rel.insert(v, v, Derivation::SeedRefl) {
            pending.push(i);
        }
    }
    // Seeds and insertion-derived pairs are generators.
    let mut register: Vec<usize> = pending.clone();

    let mut e_done = 0usize;
    let mut g_done = 0usize;
    loop {
        // Insertion rules for any pair not yet inspected.
        while let Some(i) = register.pop() {
            gens.push(i);
            let (x, y) = rel.pairs[i];
            let hx = a.act(x as usize, a.zero());
            let hy = a.act(y as usize, a.zero());
            if seen_h.insert((hx, hy)) {
                if let Some(j) =
                    rel.insert(a.ins_l(hx), a.ins_l(hy), Derivation::InsertLeft { from: i })
                {
                    register.push(j);
                }
                if let Some(j) = rel.insert(
                    a.ins_r(hx),
                    a.ins_r(hy),
                    Derivation::InsertRight { from: i },
                ) {
                    register.push(j);
                }
            }
        }
        if g_done < gens.len() {
            let g = gens[g_done];
            g_done += 1;
            let (gx, gy) = rel.pairs[g];
            for e in 0..rel.pairs.len() {
                let (ex, ey) = rel.pairs[e];
                let px = a.mul(ex as usize, gx as usize);
                let py = a.mul(ey as usize, gy as usize);
                if let Some(j) = rel.insert(px, py, Derivation::Compose { left: e, right: g }) {
                    nongen_insertion(a, &mut rel, &mut seen_h, &mut register, j);
                }
            }
        } else if e_done < rel.pairs.len() {
            let e = e_done;
            e_done += 1;
            let (ex, ey) = rel.pairs[e];
            for gi in 0..g_done {
                let g = gens[gi];
                let (gx, gy) = rel.pairs[g];
                let px = a.mul(ex as usize, gx as usize);
                let py = a.mul(ey as usize, gy as usize);
                if let Some(j) = rel.insert(px, py, Derivation::Compose { left: e, right: g }) {
                    nongen_insertion(a, &mut rel, &mut seen_h, &mut register, j);
                }
            }
        } else if register.is_empty() {
            break;
        }
    }
    rel.derive_h(a);
    rel
}

/// Applies the insertion rules to a freshly added non-generator pair.
fn nongen_insertion(
    a: &crate::algebra::ForestAlgebra,
    rel: &mut PieceRelation,
    seen_h: &mut HashSet<(usize, usize)>,
    register: &mut Vec<usize>,
    i: usize,
) {
    let (x, y) = rel.pairs[i];
    let hx = a.act(x as usize, a.zero());
    let hy = a.act(y as usize, a.zero());
    if seen_h.insert((hx, hy)) {
        if let Some(j) = rel.insert(a.ins_l(hx), a.ins_l(hy), Derivation::InsertLeft { from: i }) {
            register.push(j);
        }
        if let Some(j) = rel.insert(
            a.ins_r(hx),
            a.ins_r(hy),
            Derivation::InsertRight { from: i },
        ) {
            register.push(j);
        }
    }
}

/// Least fixpoint of the guarded rule system for the cca variant. The
/// relation is morphism-relative: letter images and the element
/// classification enter the rules.
pub fn piece_relation_cca(r: &Recognizer, classes: &ElementClass) -> PieceRelation {
    piece_relation_cca_with_order(r, classes, false)
}

pub fn piece_relation_cca_with_order(
    r: &Recognizer,
    classes: &ElementClass,
    reversed: bool,
) -> PieceRelation {
    let a = r.algebra();
    let v_len = a.v_len();
    let mut rel = PieceRelation::new(PieceVariant::Cca, v_len, a.h_len());
    let letters: Vec<usize> = {
        let mut ls: Vec<usize> = r.morphism.letter_image.clone();
        ls.sort_unstable();
        ls.dedup();
        ls
    };

    let mut tt: Vec<usize> = Vec::new(); // pair indices with both sides tree-context-types
    let mut ss: Vec<usize> = Vec::new(); // both sides of sum form
    let mut seen_h: HashSet<(usize, usize)> = HashSet::new();
    let mut register: Vec<usize> = Vec::new();

    let classify_pair =
        |rel: &PieceRelation, i: usize, tt: &mut Vec<usize>, ss: &mut Vec<usize>| {
            let (x, y) = rel.pairs[i];
            if classes.tree_context_type[x as usize] && classes.tree_context_type[y as usize] {
                tt.push(i);
            }
            if classes.sum_form[x as usize] && classes.sum_form[y as usize] {
                ss.push(i);
            }
        };

    let order: Vec<usize> = if reversed {
        (0..v_len).rev().collect()
    } else {
        (0..v_len).collect()
    };
    for &v in &order {
        if let Some(i) = rel.insert(a.one(), v, Derivation::SeedBox) {
            classify_pair(&rel, i, &mut tt, &mut ss);
            register.push(i);
        }
    }
    for &v in &order {
        if let Some(i) = rel.insert(v, v, Derivation::SeedRefl) {
            classify_pair(&rel, i, &mut tt, &mut ss);
            register.push(i);
        }
    }

    let mut e_done = 0usize;
    let mut t_done = 0usize;
    let mut s_done = 0usize;
    loop {
        // Insertion rules first; they only depend on the value pair.
        while let Some(i) = register.pop() {
            let (x, y) = rel.pairs[i];
            let hx = a.act(x as usize, a.zero());
            let hy = a.act(y as usize, a.zero());
            if seen_h.insert((hx, hy)) {
                for (vl, vr, d) in [
                    (a.ins_l(hx), a.ins_l(hy), Derivation::InsertLeft { from: i }),
                    (
                        a.ins_r(hx),
                        a.ins_r(hy),
                        Derivation::InsertRight { from: i },
                    ),
                ] {
                    if let Some(j) = rel.insert(vl, vr, d) {
                        classify_pair(&rel, j, &mut tt, &mut ss);
                        register.push(j);
                    }
                }
            }
        }
        if t_done < tt.len() {
            // Right factor with both sides tree-context-types.
            let t = tt[t_done];
            t_done += 1;
            let (tx, ty) = rel.pairs[t];
            for e in 0..rel.pairs.len() {
                let (ex, ey) = rel.pairs[e];
                let px = a.mul(ex as usize, tx as usize);
                let py = a.mul(ey as usize, ty as usize);
                if let Some(j) = rel.insert(px, py, Derivation::Compose { left: e, right: t }) {
                    classify_pair(&rel, j, &mut tt, &mut ss);
                    register.push(j);
                }
            }
        } else if s_done < ss.len() {
            // Left factor with both sides of sum form.
            let s = ss[s_done];
            s_done += 1;
            let (sx, sy) = rel.pairs[s];
            for e in 0..rel.pairs.len() {
                let (ex, ey) = rel.pairs[e];
                let px = a.mul(sx as usize, ex as usize);
                let py = a.mul(sy as usize, ey as usize);
                if let Some(j) = rel.insert(px, py, Derivation::Compose { left: s, right: e }) {
                    classify_pair(&rel, j, &mut tt, &mut ss);
                    register.push(j);
                }
            }
        } else if e_done < rel.pairs.len() {
            let e = e_done;
            e_done += 1;
            let (ex, ey) = rel.pairs[e];
            for &l in &letters {
                let px = a.mul(l, ex as usize);
                let py = a.mul(l, ey as usize);
                let letter = Label(
                    r.morphism
                        .letter_image
                        .iter()
                        .position(|&li| li == l)
                        .expect("letter image present") as u32,
                );
                if let Some(j) = rel.insert(px, py, Derivation::LetterPrefix { letter, from: e }) {
                    classify_pair(&rel, j, &mut tt, &mut ss);
                    register.push(j);
                }
            }
            for ti in 0..t_done {
                let t = tt[ti];
                let (tx, ty) = rel.pairs[t];
                let px = a.mul(ex as usize, tx as usize);
                let py = a.mul(ey as usize, ty as usize);
                if let Some(j) = rel.insert(px, py, Derivation::Compose { left: e, right: t }) {
                    classify_pair(&rel, j, &mut tt, &mut ss);
                    register.push(j);
                }
            }
            for si in 0..s_done {
                let s = ss[si];
                let (sx, sy) = rel.pairs[s];
                let px = a.mul(sx as usize, ex as usize);
                let py = a.mul(sy as usize, ey as usize);
                if let Some(j) = rel.insert(px, py, Derivation::Compose { left: s, right: e }) {
                    classify_pair(&rel, j, &mut tt, &mut ss);
                    register.push(j);
                }
            }
        } else if register.is_empty() {
            break;
        }
    }
    rel.derive_h(a);
    rel
}

/// Pairs of images of concrete context pieces up to a size bound: the
/// semantic route, used for the horizontal variant (which has no rule
/// system) and as a soundness check for the others.
pub fn piece_relation_semantic(
    r: &Recognizer,
    variant: PieceVariant,
    bound: usize,
    caps: &Caps,
) -> Result<PieceRelation, PiecesError> {
    let a = r.algebra();
    let mut rel = PieceRelation::new(variant, a.v_len(), a.h_len());
    rel.bound = Some(bound);
    rel.under_approximation = true;
    let mut en = ForestEnum::new(r.alphabet().clone());
    let ab = r.alphabet().clone();
    for size in 0..=bound {
        for q in contexts_of_size(&mut en, size) {
            let wq = r
                .morphism
                .eval_context(&q)
                .expect("context over own alphabet");
            let table = NodeTable::from_context(&q);
            let hole = table.hole().expect("hole");
            let real: Vec<usize> = (0..table.len()).filter(|&i| i != hole).collect();
            if real.len() >= usize::BITS as usize - 1 {
                return Err(PiecesError::CapExceeded {
                    what: "piece subsets",
                    cap: caps.max_subsets,
                });
            }
            let mut member = vec![false; table.len()];
            for mask in 0u64..(1u64 << real.len()) {
                let mut keep: Vec<usize> = real
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| mask >> bit & 1 == 1)
                    .map(|(_, &i)| i)
                    .collect();
                keep.push(hole);
                keep.sort_unstable();
                for m in member.iter_mut() {
                    *m = false;
                }
                for &i in &keep {
                    member[i] = true;
                }
                if !subset_ok(&table, &keep, &member, variant) {
                    continue;
                }
                let p = table.restrict_context(&keep);
                let wp = r
                    .morphism
                    .eval_context(&p)
                    .expect("context over own alphabet");
                rel.insert(
                    wp,
                    wq,
                    Derivation::Semantic {
                        piece: p.render(&ab),
                        whole: q.render(&ab),
                    },
                );
            }
        }
    }
    rel.derive_h(a);
    Ok(rel)
}

/// The horizontal relation: semantic enumeration only, explicitly marked
/// as an under-approximation at the recorded bound.
pub fn piece_relation_horizontal(
    r: &Recognizer,
    bound: usize,
    caps: &Caps,
) -> Result<PieceRelation, PiecesError> {
    piece_relation_semantic(r, PieceVariant::Horizontal, bound, caps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::classify::classify_elements;
    use crate::caps::Caps;
    use crate::corpus;

    fn syn(entry: &corpus::CorpusEntry) -> Recognizer {
        entry.automaton.to_syntactic(&Caps::default()).unwrap()
    }

    #[test]
    fn box_is_below_everything() {
        let r = syn(&corpus::abcd_entry());
        let rel = piece_relation_plain(&r);
        for v in 0..r.algebra().v_len() {
            assert!(rel.on_v(r.algebra().one(), v));
            assert!(rel.on_v(v, v));
        }
    }

    #[test]
    fn cca_relation_contains_box_and_diagonal() {
        let r = syn(&corpus::abcd_entry());
        let classes = classify_elements(&r.morphism);
        let rel = piece_relation_cca(&r, &classes);
        for v in 0..r.algebra().v_len() {
            assert!(rel.on_v(r.algebra().one(), v));
            assert!(rel.on_v(v, v));
        }
    }

    #[test]
    fn chain_language_reproduces_nontransitivity() {
        let r = syn(&corpus::abcd_entry());
        let a = r.algebra();
        let m = &r.morphism;
        let ab = r.alphabet().clone();
        let la = m.letter(ab.label("a").unwrap());
        let lb = m.letter(ab.label("b").unwrap());
        let lc = m.letter(ab.label("c").unwrap());
        let ld = m.letter(ab.label("d").unwrap());
        let aa = a.mul(la, la);
        let bd = a.mul(lb, ld);
        let bcd = a.mul(lb, a.mul(lc, ld));
        assert_eq!(aa, bd, "both collapse to the error element");
        let rel = piece_relation_plain(&r);
        assert!(rel.on_v(la, aa));
        assert!(rel.on_v(bd, bcd));
        assert!(!rel.on_v(la, bcd), "the relation is not transitive here");
    }

    #[test]
    fn fixpoint_is_order_independent() {
        for entry in corpus::entries(&Caps::default()).unwrap() {
            let r = syn(&entry);
            let classes = classify_elements(&r.morphism);
            let plain_a = piece_relation_plain_with_order(&r, false);
            let plain_b = piece_relation_plain_with_order(&r, true);
            let v = r.algebra().v_len();
            for x in 0..v {
                for y in 0..v {
                    assert_eq!(plain_a.on_v(x, y), plain_b.on_v(x, y), "{}", entry.name);
                }
            }
            let cca_a = piece_relation_cca_with_order(&r, &classes, false);
            let cca_b = piece_relation_cca_with_order(&r, &classes, true);
            for x in 0..v {
                for y in 0..v {
                    assert_eq!(cca_a.on_v(x, y), cca_b.on_v(x, y), "{}", entry.name);
                }
            }
        }
    }

    #[test]
    fn cca_relation_is_contained_in_plain() {
        for entry in corpus::entries(&Caps::default()).unwrap() {
            let r = syn(&entry);
            let classes = classify_elements(&r.morphism);
            let plain = piece_relation_plain(&r);
            let cca = piece_relation_cca(&r, &classes);
            for &(x, y) in &cca.pairs {
                assert!(plain.on_v(x as usize, y as usize), "{}", entry.name);
            }
        }
    }

    #[test]
    fn semantic_pairs_land_in_the_computed_relations() {
        for entry in [corpus::abcd_entry(), corpus::all_trees_aa_entry()] {
            let r = syn(&entry);
            let classes = classify_elements(&r.morphism);
            let plain = piece_relation_plain(&r);
            let plain_sem =
                piece_relation_semantic(&r, PieceVariant::Plain, 3, &Caps::default()).unwrap();
            for &(x, y) in &plain_sem.pairs {
                assert!(plain.on_v(x as usize, y as usize), "{}", entry.name);
            }
            let cca = piece_relation_cca(&r, &classes);
            let cca_sem =
                piece_relation_semantic(&r, PieceVariant::Cca, 3, &Caps::default()).unwrap();
            for &(x, y) in &cca_sem.pairs {
                assert!(cca.on_v(x as usize, y as usize), "{}", entry.name);
            }
        }
    }

    #[test]
    fn horizontal_relation_grows_with_the_bound() {
        let r = syn(&corpus::all_trees_aa_entry());
        let small = piece_relation_horizontal(&r, 2, &Caps::default()).unwrap();
        let large = piece_relation_horizontal(&r, 4, &Caps::default()).unwrap();
        for &(x, y) in &small.pairs {
            assert!(large.on_v(x as usize, y as usize));
        }
        assert!(large.len() >= small.len());
        assert!(large.under_approximation);
        assert_eq!(large.bound, Some(4));
    }

    #[test]
    fn traces_reach_seeds() {
        let r = syn(&corpus::abcd_entry());
        let rel = piece_relation_plain(&r);
        let last = rel.len() - 1;
        let trace = rel.trace(last);
        assert!(!trace.is_empty());
        assert!(trace.iter().any(|l| l.contains("seed")));
    }
}
