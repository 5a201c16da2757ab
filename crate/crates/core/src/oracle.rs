//! Brute-force semantic ground truth at desk scale: exhaustive forest and
//! context enumeration, refuters for piecewise-testability and existential
//! definability verdicts, and the piece-set automaton generator.
//!
//! Refuters are one-sided: a found refutation is re-verifiable evidence,
//! while absence of one at a bound proves nothing. All results carry the
//! bounds used.

use crate::algebra::automaton::ForestAutomaton;
use crate::algebra::morphism::Recognizer;
use crate::algebra::AlgebraError;
use crate::caps::Caps;
use crate::forest::{Alphabet, Context, Forest, Label, Spine, Tree};
use crate::pieces::{enumerate_pieces, sim_n, PieceVariant, PiecesError};
use crate::relations::NodeTable;
use rand::rngs::StdRng;
use rand::Rng;
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Pieces(#[from] PiecesError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{what} exceeded the cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },
    #[error("target piece has {size} nodes, larger than the bound {bound}")]
    TargetTooLarge { size: usize, bound: usize },
}

/// Memoized exhaustive enumeration of forests by size, each size class in
/// lexicographic order of the canonical rendering.
pub struct ForestEnum {
    pub alphabet: Alphabet,
    trees: Vec<Vec<Tree>>,
    forests: Vec<Vec<Forest>>,
}

impl ForestEnum {
    pub fn new(alphabet: Alphabet) -> Self {
        ForestEnum {
            alphabet,
            trees: vec![Vec::new()],
            forests: vec![vec![Forest::empty()]],
        }
    }

    fn grow_to(&mut self, size: usize) {
        while self.forests.len() <= size {
            let k = self.forests.len();
            let mut trees: Vec<Tree> = Vec::new();
            for l in self.alphabet.labels() {
                for f in &self.forests[k - 1] {
                    trees.push(Tree::new(l, f.clone()));
                }
            }
            self.trees.push(trees);
            // A forest of size k splits uniquely into its first tree and
            // the rest, so no deduplication is needed.
            let mut forests: Vec<Forest> = Vec::new();
            for first_size in 1..=k {
                for t in &self.trees[first_size] {
                    for rest in &self.forests[k - first_size] {
                        let mut trees_v = vec![t.clone()];
                        trees_v.extend(rest.trees.iter().cloned());
                        forests.push(Forest { trees: trees_v });
                    }
                }
            }
            forests.sort_by_cached_key(|f| f.render(&self.alphabet));
            self.forests.push(forests);
        }
    }

    /// All forests with exactly `size` nodes.
    pub fn forests_of_size(&mut self, size: usize) -> &[Forest] {
        self.grow_to(size);
        &self.forests[size]
    }

    /// All forests with at most `max_size` nodes, smaller sizes first.
    pub fn all_upto(&mut self, max_size: usize) -> Vec<Forest> {
        self.grow_to(max_size);
        self.forests[..=max_size]
            .iter()
            .flatten()
            .cloned()
            .collect()
    }
}

/// Independent counting recurrence: number of forests with exactly `size`
/// nodes over an alphabet with `letters` letters.
pub fn count_forests(letters: u64, size: usize) -> u64 {
    let mut f = vec![0u64; size + 1];
    let mut t = vec![0u64; size + 1];
    f[0] = 1;
    for k in 1..=size {
        t[k] = letters * f[k - 1];
        let mut total = 0u64;
        for first in 1..=k {
            total += t[first] * f[k - first];
        }
        f[k] = total;
    }
    f[size]
}

/// Every placement of a hole replacing a (possibly empty) consecutive span
/// of some sibling list of `f`: pairs of the surrounding context and the
/// replaced span. Substituting the span back yields `f`.
pub fn subforest_occurrences(f: &Forest) -> Vec<(Context, Forest)> {
    let mut out = Vec::new();
    let n = f.trees.len();
    for i in 0..=n {
        for j in i..=n {
            out.push((
                Context {
                    left: f.trees[..i].to_vec(),
                    spine: Spine::Hole,
                    right: f.trees[j..].to_vec(),
                },
                Forest {
                    trees: f.trees[i..j].to_vec(),
                },
            ));
        }
    }
    for (k, tree) in f.trees.iter().enumerate() {
        for (inner, span) in subforest_occurrences(&tree.children) {
            out.push((
                Context {
                    left: f.trees[..k].to_vec(),
                    spine: Spine::Node(tree.label, Box::new(inner)),
                    right: f.trees[k + 1..].to_vec(),
                },
                span,
            ));
        }
    }
    out
}

/// All contexts with exactly `size` real nodes: forests of that size with
/// a hole inserted at each gap.
pub fn contexts_of_size(en: &mut ForestEnum, size: usize) -> Vec<Context> {
    let mut out = Vec::new();
    for f in en.forests_of_size(size).to_vec() {
        for (ctx, span) in subforest_occurrences(&f) {
            if span.is_empty() {
                out.push(ctx);
            }
        }
    }
    out
}

/// A re-verifiable counterexample.
#[derive(Debug, Clone)]
pub enum Refutation {
    /// `s` and `t` share all pieces up to size `n` yet only `s` is in the
    /// language.
    SimN {
        s: Forest,
        t: Forest,
        n: usize,
        variant: PieceVariant,
        max_size: usize,
    },
    /// `p(t)` is in the language but `p(q(t))` is not: the language is not
    /// closed under inserting nodes.
    Insertion {
        p: Context,
        q: Context,
        t: Forest,
        max_size: usize,
    },
}

impl Refutation {
    /// Recomputes the claim from scratch against a recognizer.
    pub fn verify(&self, r: &Recognizer, caps: &Caps) -> Result<bool, OracleError> {
        match self {
            Refutation::SimN {
                s, t, n, variant, ..
            } => Ok(sim_n(s, t, *n, *variant, caps)? && r.accepts(s)? && !r.accepts(t)?),
            Refutation::Insertion { p, q, t, .. } => {
                let small = p.substitute(t);
                let big = p.substitute(&q.substitute(t));
                Ok(r.accepts(&small)? && !r.accepts(&big)?)
            }
        }
    }

    pub fn describe(&self, ab: &Alphabet) -> String {
        match self {
            Refutation::SimN { s, t, n, variant, .. } => format!(
                "forests \"{}\" and \"{}\" have the same {} pieces of size <= {} but differ on membership",
                s.render(ab),
                t.render(ab),
                variant.name(),
                n
            ),
            Refutation::Insertion { p, q, t, .. } => format!(
                "inserting \"{}\" at the hole of \"{}\" above \"{}\" leaves the language",
                q.render(ab),
                p.render(ab),
                t.render(ab)
            ),
        }
    }
}

/// Searches all forest pairs up to `max_size` for two forests that agree
/// on every piece of size at most `n` but disagree on membership. Returns
/// the first hit in enumeration order.
pub fn refute_pt(
    r: &Recognizer,
    n: usize,
    max_size: usize,
    variant: PieceVariant,
    caps: &Caps,
) -> Result<Option<Refutation>, OracleError> {
    let mut en = ForestEnum::new(r.alphabet().clone());
    let mut buckets: HashMap<Vec<Forest>, (Option<Forest>, Option<Forest>)> = HashMap::new();
    for f in en.all_upto(max_size) {
        let key: Vec<Forest> = enumerate_pieces(&f, n, variant, caps)?
            .into_iter()
            .collect();
        let member = r.accepts(&f)?;
        let slot = buckets.entry(key).or_default();
        if member {
            if let Some(t) = &slot.1 {
                return Ok(Some(Refutation::SimN {
                    s: f,
                    t: t.clone(),
                    n,
                    variant,
                    max_size,
                }));
            }
            slot.0.get_or_insert(f);
        } else {
            if let Some(s) = &slot.0 {
                return Ok(Some(Refutation::SimN {
                    s: s.clone(),
                    t: f,
                    n,
                    variant,
                    max_size,
                }));
            }
            slot.1.get_or_insert(f);
        }
    }
    Ok(None)
}

/// Searches for a membership-breaking single-node insertion: a context
/// `p`, a one-node context `q` and a forest `t` with `p(t)` accepted but
/// `p(q(t))` rejected.
pub fn refute_sigma1(
    r: &Recognizer,
    max_size: usize,
    caps: &Caps,
) -> Result<Option<Refutation>, OracleError> {
    let _ = caps;
    let mut en = ForestEnum::new(r.alphabet().clone());
    let letters: Vec<Label> = r.alphabet().labels().collect();
    for f in en.all_upto(max_size) {
        if !r.accepts(&f)? {
            continue;
        }
        for (p, span) in subforest_occurrences(&f) {
            for &l in &letters {
                let grown = p.substitute(&Forest::single(Tree::new(l, span.clone())));
                if !r.accepts(&grown)? {
                    return Ok(Some(Refutation::Insertion {
                        p,
                        q: Context::letter(l),
                        t: span,
                        max_size,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Builds the recognizer of `{ t : target is a variant-piece of t }` whose
/// states are the reachable piece sets of the input, restricted to the
/// pieces of the target. Addition composes two piece sets directly (a
/// piece of a concatenation splits into pieces of the parts at the root
/// list), so the transition structure is a function of the states
/// themselves.
///
/// Tracking all pieces of size `<= n` instead would blow up: the number of
/// distinct such piece sets over a two-letter alphabet already exceeds
/// 190000 at `n = 3`. Restricting to the target's own pieces keeps the
/// state space bounded by the downsets of that small universe and leaves
/// the recognized language unchanged.
pub fn piece_algebra(
    alphabet: &Alphabet,
    n: usize,
    variant: PieceVariant,
    target: &Forest,
    caps: &Caps,
) -> Result<ForestAutomaton, OracleError> {
    let cca = match variant {
        PieceVariant::Plain => false,
        PieceVariant::Cca => true,
        other => return Err(PiecesError::UnsupportedVariant(other.name()).into()),
    };
    if target.size() > n {
        return Err(OracleError::TargetTooLarge {
            size: target.size(),
            bound: n,
        });
    }
    // The universe must be closed under plain pieces (the cca carry-over
    // rule needs the plain sub-pieces available), so both variants run
    // over the plain pieces of the target.
    let universe: Vec<Forest> =
        crate::pieces::enumerate_pieces(target, target.size(), PieceVariant::Plain, caps)?
            .into_iter()
            .collect();
    piece_set_automaton(alphabet, universe, target, cca, caps)
}

/// Shared engine for piece-set automata. `universe` must contain the empty
/// forest and be closed under root-list splits and under taking plain
/// pieces; states are the reachable intersections of piece sets with the
/// universe.
pub fn piece_set_automaton(
    alphabet: &Alphabet,
    universe: Vec<Forest>,
    target: &Forest,
    cca: bool,
    caps: &Caps,
) -> Result<ForestAutomaton, OracleError> {
    let id_of: HashMap<Forest, usize> = universe
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, f)| (f, i))
        .collect();
    let u_len = universe.len();
    let words = u_len.div_ceil(64);

    // Root-list splits of every piece.
    let splits: Vec<Vec<(usize, usize)>> = universe
        .iter()
        .map(|w| {
            (0..=w.trees.len())
                .map(|c| {
                    (
                        id_of[&Forest {
                            trees: w.trees[..c].to_vec(),
                        }],
                        id_of[&Forest {
                            trees: w.trees[c..].to_vec(),
                        }],
                    )
                })
                .collect()
        })
        .collect();
    // Decomposition of single-tree pieces as letter(children).
    let decompose: Vec<Option<(Label, usize)>> = universe
        .iter()
        .map(|w| {
            if w.trees.len() == 1 {
                Some((w.trees[0].label, id_of[&w.trees[0].children]))
            } else {
                None
            }
        })
        .collect();
    let tree_or_empty: Vec<bool> = universe.iter().map(|w| w.trees.len() <= 1).collect();
    let empty_id = id_of[&Forest::empty()];
    let target_id = id_of[target];

    let get = |bits: &[u64], i: usize| bits[i / 64] >> (i % 64) & 1 == 1;
    let set = |bits: &mut [u64], i: usize| bits[i / 64] |= 1 << (i % 64);

    let plus_sets = |a: &[u64], b: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; words];
        for w in 0..u_len {
            for &(u, v) in &splits[w] {
                if get(a, u) && get(b, v) {
                    set(&mut out, w);
                    break;
                }
            }
        }
        out
    };
    let delta_set = |l: Label, p: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; words];
        for w in 0..u_len {
            if let Some((wl, inner)) = decompose[w] {
                if wl == l && get(p, inner) {
                    set(&mut out, w);
                    continue;
                }
            }
            if get(p, w) && (!cca || tree_or_empty[w]) {
                set(&mut out, w);
            }
        }
        out
    };

    let mut zero_state = vec![0u64; words];
    set(&mut zero_state, empty_id);
    let mut states: Vec<Vec<u64>> = vec![zero_state.clone()];
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    index.insert(zero_state, 0);
    let mut i = 0;
    while i < states.len() {
        let mut discovered: Vec<Vec<u64>> = Vec::new();
        for l in alphabet.labels() {
            discovered.push(delta_set(l, &states[i]));
        }
        for j in 0..states.len() {
            discovered.push(plus_sets(&states[i], &states[j]));
            discovered.push(plus_sets(&states[j], &states[i]));
        }
        for s in discovered {
            if !index.contains_key(&s) {
                if states.len() >= caps.max_states {
                    return Err(OracleError::CapExceeded {
                        what: "piece-set automaton states",
                        cap: caps.max_states,
                    });
                }
                index.insert(s.clone(), states.len());
                states.push(s);
            }
        }
        i += 1;
    }

    let q = states.len();
    let plus_table: Vec<u32> = (0..q)
        .flat_map(|a| (0..q).map(move |b| (a, b)))
        .map(|(a, b)| index[&plus_sets(&states[a], &states[b])] as u32)
        .collect();
    let delta: Vec<Vec<u32>> = alphabet
        .labels()
        .map(|l| {
            (0..q)
                .map(|a| index[&delta_set(l, &states[a])] as u32)
                .collect()
        })
        .collect();
    let accept: BTreeSet<usize> = (0..q).filter(|&a| get(&states[a], target_id)).collect();
    let names: Vec<String> = (0..q).map(|s| format!("s{s}")).collect();
    Ok(ForestAutomaton::new(
        alphabet.clone(),
        names,
        plus_table,
        0,
        delta,
        accept,
    )?)
}

/// A uniformly random forest of size up to `max_size` (sizes weighted by
/// their population), drawn from the exhaustive enumeration.
pub fn random_forest(rng: &mut StdRng, en: &mut ForestEnum, max_size: usize) -> Forest {
    let all = en.all_upto(max_size);
    all[rng.random_range(0..all.len())].clone()
}

/// A random context with at most `max_size` real nodes.
pub fn random_context(rng: &mut StdRng, en: &mut ForestEnum, max_size: usize) -> Context {
    let f = random_forest(rng, en, max_size);
    let gaps: Vec<Context> = subforest_occurrences(&f)
        .into_iter()
        .filter(|(_, span)| span.is_empty())
        .map(|(c, _)| c)
        .collect();
    gaps[rng.random_range(0..gaps.len())].clone()
}

/// A random context piece of `q` under the plain or cca variant, obtained
/// by restricting `q` to a random node subset (closed under closest
/// common ancestors for the cca variant) that keeps the hole.
pub fn random_context_piece(rng: &mut StdRng, q: &Context, variant: PieceVariant) -> Context {
    let table = NodeTable::from_context(q);
    let hole = table.hole().expect("context has a hole");
    let mut keep: BTreeSet<usize> = [hole].into();
    for i in 0..table.len() {
        if i != hole && rng.random_bool(0.5) {
            keep.insert(i);
        }
    }
    if variant == PieceVariant::Cca {
        loop {
            let items: Vec<usize> = keep.iter().copied().collect();
            let mut grew = false;
            for (a, &x) in items.iter().enumerate() {
                for &y in &items[a + 1..] {
                    if let Some(z) = table.cca(x, y) {
                        if keep.insert(z) {
                            grew = true;
                        }
                    }
                }
            }
            if !grew {
                break;
            }
        }
    }
    let keep: Vec<usize> = keep.into_iter().collect();
    table.restrict_context(&keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_forest;
    use std::collections::HashSet;

    #[test]
    fn enumeration_matches_hand_lists() {
        let ab = Alphabet::of_chars("a");
        let mut en = ForestEnum::new(ab.clone());
        let upto1: Vec<String> = en.all_upto(1).iter().map(|f| f.render(&ab)).collect();
        assert_eq!(upto1, vec!["", "a"]);
        let upto2: Vec<String> = en.all_upto(2).iter().map(|f| f.render(&ab)).collect();
        assert_eq!(upto2, vec!["", "a", "a(a)", "a+a"]);
    }

    #[test]
    fn enumeration_matches_counting_formula_and_is_duplicate_free() {
        for letters in 1..=2u64 {
            let ab = if letters == 1 {
                Alphabet::of_chars("a")
            } else {
                Alphabet::of_chars("ab")
            };
            let mut en = ForestEnum::new(ab);
            for size in 0..=5 {
                let forests = en.forests_of_size(size).to_vec();
                assert_eq!(
                    forests.len() as u64,
                    count_forests(letters, size),
                    "letters={letters} size={size}"
                );
                let distinct: HashSet<_> = forests.iter().collect();
                assert_eq!(distinct.len(), forests.len());
                assert!(forests.iter().all(|f| f.size() == size));
            }
        }
    }

    #[test]
    fn context_enumeration_counts_gaps() {
        let ab = Alphabet::of_chars("a");
        let mut en = ForestEnum::new(ab);
        // 2k+1 gaps per forest of size k.
        for size in 0..=4 {
            let forests = en.forests_of_size(size).len();
            let contexts = contexts_of_size(&mut en, size).len();
            assert_eq!(contexts, forests * (2 * size + 1));
        }
    }

    #[test]
    fn piece_algebra_tiny_target() {
        let ab = Alphabet::of_chars("ab");
        let target = parse_forest("a", &ab).unwrap();
        let auto = piece_algebra(&ab, 1, PieceVariant::Plain, &target, &Caps::default()).unwrap();
        // States: "a not seen" and "a seen".
        assert_eq!(auto.n_states(), 2);
        assert!(auto.check().ok());
        assert!(auto.accepts(&parse_forest("b(a+b)", &ab).unwrap()));
        assert!(!auto.accepts(&parse_forest("b(b)", &ab).unwrap()));
    }

    #[test]
    fn piece_algebra_agrees_with_is_piece() {
        let ab = Alphabet::of_chars("ab");
        let caps = Caps::default();
        for (target_text, variant) in [("a(b)", PieceVariant::Plain), ("a(b)", PieceVariant::Cca)] {
            let target = parse_forest(target_text, &ab).unwrap();
            let auto = piece_algebra(&ab, 2, variant, &target, &caps).unwrap();
            let mut en = ForestEnum::new(ab.clone());
            for t in en.all_upto(6) {
                let direct = crate::pieces::is_piece(&target, &t, variant, &caps).unwrap();
                assert_eq!(
                    auto.accepts(&t),
                    direct,
                    "target={target_text} t={}",
                    t.render(&ab)
                );
            }
        }
    }

    #[test]
    fn refuters_find_nothing_on_accept_all() {
        let entry = crate::corpus::accept_all_entry();
        let rec = entry.automaton.to_syntactic(&Caps::default()).unwrap();
        assert!(refute_pt(&rec, 2, 4, PieceVariant::Plain, &Caps::default())
            .unwrap()
            .is_none());
        assert!(refute_sigma1(&rec, 4, &Caps::default()).unwrap().is_none());
    }

    #[test]
    fn insertion_refutation_for_the_exact_chain_language() {
        let entry = crate::corpus::abcd_entry();
        let rec = entry.automaton.to_syntactic(&Caps::default()).unwrap();
        let found = refute_sigma1(&rec, 4, &Caps::default())
            .unwrap()
            .expect("refutation");
        assert!(found.verify(&rec, &Caps::default()).unwrap());
    }
}
