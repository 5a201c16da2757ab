//! Morphisms from the free algebra of forests and contexts into a finite
//! forest algebra, and recognizers (a morphism plus an accepting set).

use super::{AlgebraError, ForestAlgebra};
use crate::forest::{Alphabet, Context, Forest, Spine, Tree};
use std::collections::BTreeSet;

/// The unique extension of a letter assignment to all forests and
/// contexts.
#[derive(Debug, Clone)]
pub struct Morphism {
    pub alphabet: Alphabet,
    pub algebra: ForestAlgebra,
    /// Image of the generator context `a(_)` per letter.
    pub letter_image: Vec<usize>,
}

impl Morphism {
    pub fn letter(&self, l: crate::forest::Label) -> usize {
        self.letter_image[l.0 as usize]
    }

    pub fn eval_forest(&self, f: &Forest) -> Result<usize, AlgebraError> {
        let mut acc = self.algebra.zero();
        for t in &f.trees {
            let v = self.eval_tree(t)?;
            acc = self.algebra.plus(acc, v);
        }
        Ok(acc)
    }

    fn eval_tree(&self, t: &Tree) -> Result<usize, AlgebraError> {
        if !self.alphabet.contains(t.label) || (t.label.0 as usize) >= self.letter_image.len() {
            return Err(AlgebraError::UnknownLabel(format!("#{}", t.label.0)));
        }
        let child = self.eval_forest(&t.children)?;
        Ok(self.algebra.act(self.letter(t.label), child))
    }

    pub fn eval_context(&self, c: &Context) -> Result<usize, AlgebraError> {
        let left = self.eval_forest(&Forest {
            trees: c.left.clone(),
        })?;
        let right = self.eval_forest(&Forest {
            trees: c.right.clone(),
        })?;
        let spine = match &c.spine {
            Spine::Hole => self.algebra.one(),
            Spine::Node(l, inner) => {
                if !self.alphabet.contains(*l) {
                    return Err(AlgebraError::UnknownLabel(format!("#{}", l.0)));
                }
                let v = self.eval_context(inner)?;
                self.algebra.mul(self.letter(*l), v)
            }
        };
        Ok(self.algebra.mul(
            self.algebra.ins_l(left),
            self.algebra.mul(self.algebra.ins_r(right), spine),
        ))
    }
}

/// A morphism together with an accepting subset of `H`.
#[derive(Debug, Clone)]
pub struct Recognizer {
    pub morphism: Morphism,
    pub accept: BTreeSet<usize>,
}

impl Recognizer {
    pub fn alphabet(&self) -> &Alphabet {
        &self.morphism.alphabet
    }

    pub fn algebra(&self) -> &ForestAlgebra {
        &self.morphism.algebra
    }

    pub fn accepts(&self, f: &Forest) -> Result<bool, AlgebraError> {
        Ok(self.accept.contains(&self.morphism.eval_forest(f)?))
    }
}

/// First concrete realizations of algebra elements, found by enumerating
/// forests and contexts by size.
#[derive(Debug, Clone)]
pub struct Realizations {
    pub h: Vec<Option<Forest>>,
    pub v: Vec<Option<Context>>,
}

/// Searches realizing forests and contexts for every element, up to the
/// given size.
pub fn realize_elements(r: &Recognizer, max_size: usize) -> Realizations {
    let algebra = r.algebra();
    let mut h: Vec<Option<Forest>> = vec![None; algebra.h_len()];
    let mut v: Vec<Option<Context>> = vec![None; algebra.v_len()];
    let mut en = crate::oracle::ForestEnum::new(r.alphabet().clone());
    for size in 0..=max_size {
        for f in en.forests_of_size(size).to_vec() {
            if let Ok(x) = r.morphism.eval_forest(&f) {
                h[x].get_or_insert(f);
            }
        }
        for c in crate::oracle::contexts_of_size(&mut en, size) {
            if let Ok(x) = r.morphism.eval_context(&c) {
                v[x].get_or_insert(c);
            }
        }
    }
    Realizations { h, v }
}
