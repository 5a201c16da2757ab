//! Bundled example languages: each entry carries a recognizer, a direct
//! membership predicate for cross-checks, and the expected verdicts the
//! decision engine must reproduce.

use crate::algebra::automaton::ForestAutomaton;
use crate::caps::Caps;
use crate::decide::{Holds, Property};
use crate::forest::{Alphabet, Forest, Label};
use crate::oracle::OracleError;
use crate::parse::parse_forest;
use crate::pieces::{is_piece, PieceVariant};
use rand::rngs::StdRng;
use rand::Rng;
use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;

/// Direct semantic definition of a corpus language, independent of any
/// algebra machinery beyond the pieces module.
#[derive(Debug, Clone)]
pub enum Predicate {
    AcceptAll,
    /// The language containing exactly this forest.
    ExactForest(Forest),
    /// Every root tree equals the given tree.
    AllTreesEqual(Forest),
    /// The target is a variant-piece of the forest.
    ContainsPiece {
        target: Forest,
        variant: PieceVariant,
    },
    /// Nonempty and the first root carries this label.
    FirstRootIs(Label),
    /// A single tree with an even number of nodes.
    EvenSizeTree,
    /// A single tree.
    AllTrees,
    /// A single tree satisfying the inner predicate.
    TreeAnd(Box<Predicate>),
}

impl Predicate {
    pub fn eval(&self, f: &Forest, caps: &Caps) -> bool {
        match self {
            Predicate::AcceptAll => true,
            Predicate::ExactForest(t) => f == t,
            Predicate::AllTreesEqual(tree) => {
                f.trees.iter().all(|t| Forest::single(t.clone()) == *tree)
            }
            Predicate::ContainsPiece { target, variant } => {
                is_piece(target, f, *variant, caps).expect("oracle-scale inputs")
            }
            Predicate::FirstRootIs(l) => f.trees.first().map(|t| t.label == *l).unwrap_or(false),
            Predicate::EvenSizeTree => f.is_tree() && f.size().is_multiple_of(2),
            Predicate::AllTrees => f.is_tree(),
            Predicate::TreeAnd(inner) => f.is_tree() && inner.eval(f, caps),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub automaton: ForestAutomaton,
    pub predicate: Predicate,
    /// Verdicts the decision engine must reproduce.
    pub expected: Vec<(Property, Holds)>,
    /// Whether every member is a single tree (enables the tree variants).
    pub tree_language: bool,
}

/// Builds an automaton from a semantic state machine by worklist closure
/// over the reachable states.
pub fn build_automaton<S, FP, FD, FA, FN>(
    alphabet: Alphabet,
    init: S,
    plus: FP,
    delta: FD,
    accept: FA,
    name: FN,
) -> ForestAutomaton
where
    S: Clone + Eq + Hash,
    FP: Fn(&S, &S) -> S,
    FD: Fn(Label, &S) -> S,
    FA: Fn(&S) -> bool,
    FN: Fn(&S) -> String,
{
    let mut states: Vec<S> = vec![init.clone()];
    let mut index: HashMap<S, usize> = HashMap::new();
    index.insert(init, 0);
    let mut i = 0;
    while i < states.len() {
        let mut found: Vec<S> = Vec::new();
        for l in alphabet.labels() {
            found.push(delta(l, &states[i]));
        }
        for j in 0..states.len() {
            found.push(plus(&states[i], &states[j]));
            found.push(plus(&states[j], &states[i]));
        }
        for s in found {
            if !index.contains_key(&s) {
                index.insert(s.clone(), states.len());
                states.push(s);
            }
        }
        i += 1;
    }
    let n = states.len();
    let plus_table: Vec<u32> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .map(|(a, b)| index[&plus(&states[a], &states[b])] as u32)
        .collect();
    let delta_table: Vec<Vec<u32>> = alphabet
        .labels()
        .map(|l| {
            (0..n)
                .map(|q| index[&delta(l, &states[q])] as u32)
                .collect()
        })
        .collect();
    let accept_set: BTreeSet<usize> = (0..n).filter(|&q| accept(&states[q])).collect();
    let names: Vec<String> = states.iter().map(&name).collect();
    ForestAutomaton::new(alphabet, names, plus_table, 0, delta_table, accept_set)
        .expect("well-formed tables")
}

/// The one-forest language over `{a,b,c,d}` containing just the chain
/// `a(b(c(d)))`. Its states are the chain suffixes plus an absorbing
/// error state.
pub fn abcd_entry() -> CorpusEntry {
    #[derive(Copy, Clone, PartialEq, Eq, Hash)]
    enum S {
        Empty,
        D,
        Cd,
        Bcd,
        Abcd,
        Junk,
    }
    let ab = Alphabet::of_chars("abcd");
    let suffix = |s: &S| -> Option<&'static str> {
        match s {
            S::Empty => Some(""),
            S::D => Some("d"),
            S::Cd => Some("cd"),
            S::Bcd => Some("bcd"),
            S::Abcd => Some("abcd"),
            S::Junk => None,
        }
    };
    let automaton = build_automaton(
        ab.clone(),
        S::Empty,
        |a, b| match (a, b) {
            (S::Empty, x) => *x,
            (x, S::Empty) => *x,
            _ => S::Junk,
        },
        |l, s| {
            let name = ["a", "b", "c", "d"][l.0 as usize];
            match (name, s) {
                ("d", S::Empty) => S::D,
                ("c", S::D) => S::Cd,
                ("b", S::Cd) => S::Bcd,
                ("a", S::Bcd) => S::Abcd,
                _ => S::Junk,
            }
        },
        |s| matches!(s, S::Abcd),
        |s| {
            suffix(s)
                .map(|x| {
                    if x.is_empty() {
                        "0".to_string()
                    } else {
                        x.to_string()
                    }
                })
                .unwrap_or("junk".into())
        },
    );
    CorpusEntry {
        name: "abcd",
        automaton,
        predicate: Predicate::ExactForest(parse_forest("abcd", &ab).unwrap()),
        expected: vec![
            (Property::Pt, Holds::True),
            (Property::PtAlt, Holds::True),
            (Property::CcaPt, Holds::True),
            (Property::CcaPtAlt, Holds::True),
            (Property::Sigma1, Holds::False),
            (Property::Commutative, Holds::True),
            (Property::CommPt, Holds::True),
            (Property::TreePt, Holds::True),
            (Property::TreeCcaPt, Holds::True),
        ],
        tree_language: true,
    }
}

/// Forests over `{a}` whose root trees all equal `a(a)`.
pub fn all_trees_aa_entry() -> CorpusEntry {
    #[derive(Copy, Clone, PartialEq, Eq, Hash)]
    enum S {
        Zero,
        A,
        Aa,
        Bad,
    }
    let ab = Alphabet::of_chars("a");
    let automaton = build_automaton(
        ab.clone(),
        S::Zero,
        |x, y| match (x, y) {
            (S::Zero, z) | (z, S::Zero) => *z,
            (S::Aa, S::Aa) => S::Aa,
            _ => S::Bad,
        },
        |_l, s| match s {
            S::Zero => S::A,
            S::A => S::Aa,
            _ => S::Bad,
        },
        |s| matches!(s, S::Zero | S::Aa),
        |s| match s {
            S::Zero => "0".into(),
            S::A => "a".into(),
            S::Aa => "aa".into(),
            S::Bad => "bad".into(),
        },
    );
    CorpusEntry {
        name: "all-trees-aa",
        automaton,
        predicate: Predicate::AllTreesEqual(parse_forest("a(a)", &ab).unwrap()),
        expected: vec![
            (Property::Pt, Holds::False),
            (Property::PtAlt, Holds::False),
            (Property::CcaPt, Holds::False),
            (Property::CcaPtAlt, Holds::False),
            (Property::Sigma1, Holds::False),
            (Property::Commutative, Holds::True),
            (Property::CommPt, Holds::False),
            (Property::CommCcaPt, Holds::False),
            (Property::HorizontalPt, Holds::False),
        ],
        tree_language: false,
    }
}

/// Forests over `{a,b,c}` with the cca-piece `a(b+c)`: some `a` is the
/// closest common ancestor of some `b` before some `c`.
pub fn cca_abc_entry(caps: &Caps) -> Result<CorpusEntry, OracleError> {
    let ab = Alphabet::of_chars("abc");
    let target = parse_forest("a(b+c)", &ab).unwrap();
    let automaton = crate::oracle::piece_algebra(&ab, 3, PieceVariant::Cca, &target, caps)?;
    Ok(CorpusEntry {
        name: "cca-abc",
        automaton,
        predicate: Predicate::ContainsPiece {
            target,
            variant: PieceVariant::Cca,
        },
        expected: vec![
            (Property::Pt, Holds::False),
            (Property::PtAlt, Holds::False),
            (Property::CcaPt, Holds::True),
            (Property::CcaPtAlt, Holds::True),
            (Property::Sigma1, Holds::False),
            (Property::Commutative, Holds::False),
        ],
        tree_language: false,
    })
}

/// Forests over `{a,b}` containing the plain piece `a(b)`: an `a` above a
/// `b`. Built through the full piece-set construction.
pub fn piece_ab_entry(caps: &Caps) -> Result<CorpusEntry, OracleError> {
    let ab = Alphabet::of_chars("ab");
    let target = parse_forest("a(b)", &ab).unwrap();
    let automaton = crate::oracle::piece_algebra(&ab, 2, PieceVariant::Plain, &target, caps)?;
    Ok(CorpusEntry {
        name: "piece-ab",
        automaton,
        predicate: Predicate::ContainsPiece {
            target,
            variant: PieceVariant::Plain,
        },
        expected: vec![
            (Property::Pt, Holds::True),
            (Property::PtAlt, Holds::True),
            (Property::CcaPt, Holds::True),
            (Property::CcaPtAlt, Holds::True),
            (Property::Sigma1, Holds::True),
            (Property::Commutative, Holds::True),
            (Property::CommPt, Holds::True),
            (Property::CommCcaPt, Holds::True),
        ],
        tree_language: false,
    })
}

/// Forests over `{a,b,c}` containing the plain piece `a(a+b)+c`.
pub fn sigma1_aabc_entry(caps: &Caps) -> Result<CorpusEntry, OracleError> {
    let ab = Alphabet::of_chars("abc");
    let target = parse_forest("a(a+b)+c", &ab).unwrap();
    let automaton = crate::oracle::piece_algebra(&ab, 4, PieceVariant::Plain, &target, caps)?;
    Ok(CorpusEntry {
        name: "sigma1-aabc",
        automaton,
        predicate: Predicate::ContainsPiece {
            target,
            variant: PieceVariant::Plain,
        },
        expected: vec![
            (Property::Pt, Holds::True),
            (Property::PtAlt, Holds::True),
            (Property::Sigma1, Holds::True),
            (Property::Commutative, Holds::False),
        ],
        tree_language: false,
    })
}

/// Every forest over `{a}`.
pub fn accept_all_entry() -> CorpusEntry {
    let ab = Alphabet::of_chars("a");
    let automaton = build_automaton(ab, (), |_, _| (), |_, _| (), |_| true, |_| "q".into());
    CorpusEntry {
        name: "accept-all",
        automaton,
        predicate: Predicate::AcceptAll,
        expected: vec![
            (Property::Pt, Holds::True),
            (Property::PtAlt, Holds::True),
            (Property::CcaPt, Holds::True),
            (Property::CcaPtAlt, Holds::True),
            (Property::Sigma1, Holds::True),
            (Property::Commutative, Holds::True),
            (Property::CommPt, Holds::True),
            (Property::CommCcaPt, Holds::True),
        ],
        tree_language: false,
    }
}

/// Nonempty forests over `{a,b}` whose first root is labeled `a`.
pub fn first_root_a_entry() -> CorpusEntry {
    #[derive(Copy, Clone, PartialEq, Eq, Hash)]
    enum S {
        Empty,
        FirstA,
        FirstB,
    }
    let ab = Alphabet::of_chars("ab");
    let a_label = ab.label("a").unwrap();
    let automaton = build_automaton(
        ab,
        S::Empty,
        |x, y| match x {
            S::Empty => *y,
            _ => *x,
        },
        move |l, _| if l == a_label { S::FirstA } else { S::FirstB },
        |s| matches!(s, S::FirstA),
        |s| match s {
            S::Empty => "0".into(),
            S::FirstA => "first-a".into(),
            S::FirstB => "first-b".into(),
        },
    );
    CorpusEntry {
        name: "first-root-a",
        automaton,
        predicate: Predicate::FirstRootIs(Label(0)),
        expected: vec![
            (Property::Pt, Holds::False),
            (Property::PtAlt, Holds::False),
            (Property::Sigma1, Holds::False),
            (Property::Commutative, Holds::False),
            (Property::CommPt, Holds::False),
        ],
        tree_language: false,
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Hash)]
enum Shape {
    Empty,
    Tree,
    Multi,
}

fn shape_plus(x: Shape, y: Shape) -> Shape {
    match (x, y) {
        (Shape::Empty, z) | (z, Shape::Empty) => z,
        _ => Shape::Multi,
    }
}

/// Trees over `{a}` with an even number of nodes: a mod-2 counter.
pub fn even_trees_entry() -> CorpusEntry {
    let ab = Alphabet::of_chars("a");
    let automaton = build_automaton(
        ab,
        (Shape::Empty, false),
        |&(s1, p1), &(s2, p2)| (shape_plus(s1, s2), p1 ^ p2),
        |_, &(_, p)| (Shape::Tree, !p),
        |&(s, p)| s == Shape::Tree && !p,
        |&(s, p)| {
            format!(
                "{}{}",
                match s {
                    Shape::Empty => "empty",
                    Shape::Tree => "tree",
                    Shape::Multi => "multi",
                },
                if p { "-odd" } else { "-even" }
            )
        },
    );
    CorpusEntry {
        name: "even-trees-a",
        automaton,
        predicate: Predicate::EvenSizeTree,
        expected: vec![
            (Property::Pt, Holds::False),
            (Property::TreePt, Holds::False),
            (Property::TreeCcaPt, Holds::False),
            (Property::Commutative, Holds::True),
            (Property::Sigma1, Holds::False),
        ],
        tree_language: true,
    }
}

/// Trees over `{a,b}` containing the plain piece `a(b)`.
pub fn tree_piece_ab_entry() -> CorpusEntry {
    let ab = Alphabet::of_chars("ab");
    let a_label = ab.label("a").unwrap();
    let b_label = ab.label("b").unwrap();
    let automaton = build_automaton(
        ab.clone(),
        (Shape::Empty, false, false), // shape, has-b, found
        |&(s1, b1, f1), &(s2, b2, f2)| (shape_plus(s1, s2), b1 || b2, f1 || f2),
        move |l, &(_, has_b, found)| {
            (
                Shape::Tree,
                has_b || l == b_label,
                found || (l == a_label && has_b),
            )
        },
        |&(s, _, found)| s == Shape::Tree && found,
        |&(s, has_b, found)| {
            format!(
                "{}{}{}",
                match s {
                    Shape::Empty => "empty",
                    Shape::Tree => "tree",
                    Shape::Multi => "multi",
                },
                if has_b { "+b" } else { "" },
                if found { "+ab" } else { "" }
            )
        },
    );
    CorpusEntry {
        name: "tree-piece-ab",
        automaton,
        predicate: Predicate::TreeAnd(Box::new(Predicate::ContainsPiece {
            target: parse_forest("a(b)", &ab).unwrap(),
            variant: PieceVariant::Plain,
        })),
        expected: vec![
            (Property::TreePt, Holds::True),
            (Property::TreeCcaPt, Holds::True),
        ],
        tree_language: true,
    }
}

/// Every tree over `{a}`.
pub fn all_trees_entry() -> CorpusEntry {
    let ab = Alphabet::of_chars("a");
    let automaton = build_automaton(
        ab,
        Shape::Empty,
        |&x, &y| shape_plus(x, y),
        |_, _| Shape::Tree,
        |&s| s == Shape::Tree,
        |&s| {
            match s {
                Shape::Empty => "empty",
                Shape::Tree => "tree",
                Shape::Multi => "multi",
            }
            .into()
        },
    );
    CorpusEntry {
        name: "all-trees-a",
        automaton,
        predicate: Predicate::AllTrees,
        expected: vec![
            (Property::TreePt, Holds::True),
            (Property::TreeCcaPt, Holds::True),
        ],
        tree_language: true,
    }
}

/// The full corpus in a fixed order.
pub fn entries(caps: &Caps) -> Result<Vec<CorpusEntry>, OracleError> {
    Ok(vec![
        abcd_entry(),
        all_trees_aa_entry(),
        cca_abc_entry(caps)?,
        piece_ab_entry(caps)?,
        sigma1_aabc_entry(caps)?,
        accept_all_entry(),
        first_root_a_entry(),
        even_trees_entry(),
        tree_piece_ab_entry(),
        all_trees_entry(),
    ])
}

/// A random forest automaton: a random additive monoid drawn from a fixed
/// library of small valid tables, random letter maps, and a random accept
/// set.
pub fn random_automaton(rng: &mut StdRng) -> ForestAutomaton {
    type PlusFn = fn(usize, usize) -> usize;
    const BASES: &[(&str, usize, PlusFn)] = &[
        ("trivial", 1, |_, _| 0),
        ("z2", 2, |a, b| (a + b) % 2),
        ("or2", 2, |a, b| a | b),
        ("z3", 3, |a, b| (a + b) % 3),
        ("sat2", 3, |a, b| (a + b).min(2)),
        ("left3", 3, |a, b| if a == 0 { b } else { a }),
        ("right3", 3, |a, b| if b == 0 { a } else { b }),
        ("z4", 4, |a, b| (a + b) % 4),
        ("sat3", 4, |a, b| (a + b).min(3)),
        ("max4", 4, |a, b| a.max(b)),
        ("bits2", 4, |a, b| a | b),
        ("left4", 4, |a, b| if a == 0 { b } else { a }),
    ];
    let (base_name, n, plus) = BASES[rng.random_range(0..BASES.len())];
    let n_letters = rng.random_range(1..=2usize);
    let alphabet = Alphabet::of_chars(&"ab"[..n_letters]);
    let plus_table: Vec<u32> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .map(|(a, b)| plus(a, b) as u32)
        .collect();
    let delta: Vec<Vec<u32>> = (0..n_letters)
        .map(|_| (0..n).map(|_| rng.random_range(0..n) as u32).collect())
        .collect();
    let accept: BTreeSet<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
    let names: Vec<String> = (0..n).map(|q| format!("{base_name}{q}")).collect();
    ForestAutomaton::new(alphabet, names, plus_table, 0, delta, accept).expect("valid tables")
}
