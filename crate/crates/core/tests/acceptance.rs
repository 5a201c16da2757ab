//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line with its runtime. Bounds and tolerances are pinned here.

use forestalg::algebra::quotient::tree_reduction;
use forestalg::caps::Caps;
use forestalg::corpus;
use forestalg::decide::{
    decide_cca, decide_cca_alt, decide_comm_cca, decide_comm_pt, decide_commutative, decide_pt,
    decide_pt_alt, decide_sigma1, decide_tree_cca, decide_tree_pt, Holds, Prepared,
};
use forestalg::forest::{Alphabet, Context, Forest};
use forestalg::oracle::{self, ForestEnum};
use forestalg::parse::parse_forest;
use forestalg::pieces::{self, PieceVariant};
use forestalg::relations::NodeTable;
use rand::rngs::StdRng;
use rand::SeedableRng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

fn criterion<F: FnOnce()>(number: usize, what: &str, limit: Duration, body: F) {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let status = if outcome.is_ok() && elapsed <= limit {
        "PASS"
    } else {
        "FAIL"
    };
    println!("acceptance {number:2} [{status}] {what} ({elapsed:.2?}, limit {limit:.0?})");
    if let Err(cause) = outcome {
        std::panic::resume_unwind(cause);
    }
    assert!(
        elapsed <= limit,
        "criterion {number} exceeded its runtime limit: {elapsed:.2?} > {limit:.2?}"
    );
}

fn prepared(entry: &corpus::CorpusEntry) -> Prepared {
    Prepared::from_automaton(&entry.automaton, &Caps::default()).unwrap()
}

#[test]
fn criterion_01_chain_example() {
    criterion(
        1,
        "chain language: 12 context elements, non-transitive relation",
        Duration::from_secs(1),
        || {
            let p = prepared(&corpus::abcd_entry());
            let a = p.syn.algebra();
            assert_eq!(a.v_len(), 12, "syntactic V must have exactly 12 elements");
            let ab = p.syn.alphabet().clone();
            let m = &p.syn.morphism;
            let la = m.letter(ab.label("a").unwrap());
            let lb = m.letter(ab.label("b").unwrap());
            let lc = m.letter(ab.label("c").unwrap());
            let ld = m.letter(ab.label("d").unwrap());
            let aa = a.mul(la, la);
            let bd = a.mul(lb, ld);
            let bcd = a.mul(lb, a.mul(lc, ld));
            assert_eq!(aa, bd, "a·a and b·d both collapse to the error element");
            let rel = p.rel_plain();
            assert!(rel.on_v(la, aa), "(a, aa) must be in the relation");
            assert!(rel.on_v(bd, bcd), "(bd, bcd) must be in the relation");
            assert!(!rel.on_v(la, bcd), "(a, bcd) must not be in the relation");
        },
    );
}

#[test]
fn criterion_02_sum_shape_counterexample() {
    criterion(
        2,
        "J-trivial language that is not piecewise testable",
        Duration::from_secs(10),
        || {
            let entry = corpus::all_trees_aa_entry();
            let p = prepared(&entry);
            assert!(
                p.syn.algebra().j_report().j_trivial,
                "vertical monoid must be J-trivial"
            );
            let verdict = decide_pt(&p).unwrap();
            assert_eq!(verdict.holds, Holds::False);
            let witness = verdict.witness.expect("a witness for the failure");
            assert!(
                witness.replay(&p.syn),
                "witness must replay to an inequality"
            );
            let refutation = oracle::refute_pt(&p.syn, 2, 5, PieceVariant::Plain, &Caps::default())
                .unwrap()
                .expect("a semantic refutation with n=2, max_size=5");
            assert!(refutation.verify(&p.syn, &Caps::default()).unwrap());
        },
    );
}

#[test]
fn criterion_03_cca_example() {
    criterion(
        3,
        "meet-witness language: cca-testable but not piecewise testable",
        Duration::from_secs(30),
        || {
            let entry = corpus::cca_abc_entry(&Caps::default()).unwrap();
            let p = prepared(&entry);
            let pt = decide_pt(&p).unwrap();
            assert_eq!(pt.holds, Holds::False);
            assert!(pt.witness.expect("witness").replay(&p.syn));
            assert!(
                !p.syn.algebra().j_report().j_trivial,
                "vertical monoid is not J-trivial here"
            );
            let cca = decide_cca(&p).unwrap();
            assert_eq!(cca.holds, Holds::True);
            let refutation =
                oracle::refute_pt(&p.syn, 3, 6, PieceVariant::Cca, &Caps::default()).unwrap();
            assert!(
                refutation.is_none(),
                "no cca refutation up to size 6, got {refutation:?}"
            );
        },
    );
}

#[test]
fn criterion_04_differential_identities() {
    criterion(
        4,
        "equivalent identity sets agree on corpus and 200 random automata",
        Duration::from_secs(300),
        || {
            let caps = Caps::default();
            let mut checked = 0usize;
            let mut check = |p: &Prepared, name: &str| {
                let pt = decide_pt(p).unwrap().holds;
                let pt_alt = decide_pt_alt(p).unwrap().holds;
                assert_eq!(pt, pt_alt, "PT routes disagree on {name}");
                let cca = decide_cca(p).unwrap().holds;
                let cca_alt = decide_cca_alt(p).unwrap().holds;
                assert_eq!(cca, cca_alt, "cca routes disagree on {name}");
                checked += 1;
            };
            for entry in corpus::entries(&caps).unwrap() {
                check(&prepared(&entry), entry.name);
            }
            let mut rng = StdRng::seed_from_u64(0x5eed);
            for i in 0..200 {
                let auto = corpus::random_automaton(&mut rng);
                assert!(auto.check().ok(), "random automaton {i} must be a monoid");
                let p = Prepared::from_automaton(&auto, &caps).unwrap();
                check(&p, &format!("random automaton {i}"));
            }
            assert!(checked >= 210);
        },
    );
}

#[test]
fn criterion_05_piece_language_soundness() {
    criterion(
        5,
        "generated piece recognizers are sound and testable",
        Duration::from_secs(300),
        || {
            let caps = Caps::default();
            let ab = Alphabet::of_chars("ab");
            let mut en = ForestEnum::new(ab.clone());
            let targets: Vec<Forest> = en
                .all_upto(3)
                .into_iter()
                .filter(|f| !f.is_empty())
                .collect();
            assert_eq!(targets.len(), 50);
            let probe: Vec<Forest> = en.all_upto(6);
            for target in &targets {
                for variant in [PieceVariant::Plain, PieceVariant::Cca] {
                    let n = target.size();
                    let auto = oracle::piece_algebra(&ab, n, variant, target, &caps).unwrap();
                    for t in &probe {
                        assert_eq!(
                            auto.accepts(t),
                            pieces::is_piece(target, t, variant, &caps).unwrap(),
                            "language mismatch for target {} ({}) on {}",
                            target.render(&ab),
                            variant.name(),
                            t.render(&ab)
                        );
                    }
                    let p = Prepared::from_automaton(&auto, &caps).unwrap();
                    let verdict = match variant {
                        PieceVariant::Plain => decide_pt(&p).unwrap(),
                        PieceVariant::Cca => decide_cca(&p).unwrap(),
                        _ => unreachable!(),
                    };
                    assert_eq!(
                        verdict.holds,
                        Holds::True,
                        "piece language for {} must satisfy the {} identities",
                        target.render(&ab),
                        variant.name()
                    );
                }
            }
        },
    );
}

#[test]
fn criterion_06_sigma1() {
    criterion(
        6,
        "existential definability decisions and insertion refutation",
        Duration::from_secs(10),
        || {
            let caps = Caps::default();
            let piece = prepared(&corpus::sigma1_aabc_entry(&caps).unwrap());
            assert_eq!(decide_sigma1(&piece).unwrap().holds, Holds::True);
            let exact = prepared(&corpus::abcd_entry());
            let verdict = decide_sigma1(&exact).unwrap();
            assert_eq!(verdict.holds, Holds::False);
            assert!(verdict.witness.expect("witness").replay(&exact.syn));
            let refutation = oracle::refute_sigma1(&exact.syn, 4, &caps)
                .unwrap()
                .expect("insertion refutation");
            assert!(refutation.verify(&exact.syn, &caps).unwrap());
            // The language orders are antisymmetric on every syntactic algebra:
            // the internal assertion must never fire.
            for entry in corpus::entries(&caps).unwrap() {
                decide_sigma1(&prepared(&entry)).unwrap();
            }
        },
    );
}

#[test]
fn criterion_07_definition_equivalence() {
    criterion(
        7,
        "embedding and deletion-closure definitions agree exhaustively",
        Duration::from_secs(120),
        || {
            let ab = Alphabet::of_chars("ab");
            let caps = Caps::default();
            let mut en = ForestEnum::new(ab.clone());
            // Piece sets of every forest with at most 7 nodes, both routes.
            // Equality of the sets covers every pair (s, t) with |s|+|t| <= 8
            // and |s| >= 1; the empty piece is in both sets by construction.
            for t in en.all_upto(7) {
                if t.is_empty() {
                    continue;
                }
                for variant in [
                    PieceVariant::Plain,
                    PieceVariant::Cca,
                    PieceVariant::Horizontal,
                ] {
                    let by_embedding =
                        pieces::enumerate_pieces(&t, t.size(), variant, &caps).unwrap();
                    let by_deletion = pieces::deletion_piece_set(&t, variant).unwrap();
                    assert_eq!(
                        by_embedding,
                        by_deletion,
                        "piece sets disagree for {} under {}",
                        t.render(&ab),
                        variant.name()
                    );
                }
            }
        },
    );
}

#[test]
fn criterion_08_relation_soundness_and_completeness() {
    criterion(
        8,
        "semantic pairs land in the relations; relation pairs are realizable",
        Duration::from_secs(120),
        || {
            let caps = Caps::default();
            // Soundness: 500 sampled concrete context pieces per variant land
            // in the computed algebraic relation.
            let samples: Vec<corpus::CorpusEntry> = vec![
                corpus::abcd_entry(),
                corpus::all_trees_aa_entry(),
                corpus::cca_abc_entry(&caps).unwrap(),
            ];
            let mut rng = StdRng::seed_from_u64(0xfacade);
            for entry in &samples {
                let p = prepared(entry);
                let plain = p.rel_plain();
                let cca = p.rel_cca();
                let mut en = ForestEnum::new(p.syn.alphabet().clone());
                for _ in 0..500 {
                    let q = oracle::random_context(&mut rng, &mut en, 5);
                    let wq = p.syn.morphism.eval_context(&q).unwrap();
                    let pp = oracle::random_context_piece(&mut rng, &q, PieceVariant::Plain);
                    let wp = p.syn.morphism.eval_context(&pp).unwrap();
                    assert!(
                        plain.on_v(wp, wq),
                        "{}: sampled plain pair escaped the relation",
                        entry.name
                    );
                    let pc = oracle::random_context_piece(&mut rng, &q, PieceVariant::Cca);
                    let wc = p.syn.morphism.eval_context(&pc).unwrap();
                    assert!(
                        cca.on_v(wc, wq),
                        "{}: sampled cca pair escaped the relation",
                        entry.name
                    );
                }
            }
            // Completeness spot check on piece-set recognizers with bound 2:
            // every relation pair admits realizing contexts of size <= 6.
            let ab = Alphabet::of_chars("ab");
            for target_text in ["a", "a(b)", "a+b"] {
                let target = parse_forest(target_text, &ab).unwrap();
                let auto =
                    oracle::piece_algebra(&ab, 2, PieceVariant::Plain, &target, &caps).unwrap();
                let p = Prepared::from_automaton(&auto, &caps).unwrap();
                let rel = p.rel_plain();
                let v_len = p.syn.algebra().v_len();
                let mut covered = vec![false; v_len * v_len];
                let mut en = ForestEnum::new(ab.clone());
                for size in 0..=6usize {
                    for q in oracle::contexts_of_size(&mut en, size) {
                        let wq = p.syn.morphism.eval_context(&q).unwrap();
                        let table = NodeTable::from_context(&q);
                        let hole = table.hole().unwrap();
                        let real: Vec<usize> = (0..table.len()).filter(|&i| i != hole).collect();
                        for mask in 0u32..(1u32 << real.len()) {
                            let mut keep: Vec<usize> = real
                                .iter()
                                .enumerate()
                                .filter(|(bit, _)| mask >> bit & 1 == 1)
                                .map(|(_, &i)| i)
                                .collect();
                            keep.push(hole);
                            keep.sort_unstable();
                            let piece = table.restrict_context(&keep);
                            let wp = p.syn.morphism.eval_context(&piece).unwrap();
                            covered[wp * v_len + wq] = true;
                        }
                    }
                }
                for &(v, w) in &rel.pairs {
                    assert!(
                    covered[v as usize * v_len + w as usize],
                    "target {target_text}: relation pair ({}, {}) has no realizing contexts of size <= 6",
                    p.syn.algebra().v_name(v as usize),
                    p.syn.algebra().v_name(w as usize)
                );
                }
            }
        },
    );
}

#[test]
fn criterion_09_tree_variants() {
    criterion(
        9,
        "tree reduction verified; tree verdicts with semantic backing",
        Duration::from_secs(60),
        || {
            let caps = Caps::default();
            // The reduction's equivalence and congruence checks must pass on
            // every tree language in the corpus.
            for entry in corpus::entries(&caps).unwrap() {
                if !entry.tree_language {
                    continue;
                }
                let p = prepared(&entry);
                tree_reduction(&p.syn).unwrap_or_else(|e| panic!("{}: {e}", entry.name));
            }
            let trees_of_piece = prepared(&corpus::tree_piece_ab_entry());
            assert_eq!(decide_tree_pt(&trees_of_piece).unwrap().holds, Holds::True);
            assert_eq!(decide_tree_cca(&trees_of_piece).unwrap().holds, Holds::True);
            let counter = prepared(&corpus::even_trees_entry());
            let verdict = decide_tree_pt(&counter).unwrap();
            assert_eq!(verdict.holds, Holds::False);
            assert_eq!(decide_tree_cca(&counter).unwrap().holds, Holds::False);
            // Corroborated semantically: two trees with the same small pieces
            // but different parity.
            let refutation = oracle::refute_pt(&counter.syn, 2, 5, PieceVariant::Plain, &caps)
                .unwrap()
                .expect("semantic refutation for the parity counter");
            assert!(refutation.verify(&counter.syn, &caps).unwrap());
            let degenerate = prepared(&corpus::all_trees_entry());
            assert_eq!(decide_tree_pt(&degenerate).unwrap().holds, Holds::True);
        },
    );
}

#[test]
fn criterion_10_commutative_variants() {
    criterion(
        10,
        "commutative conjunctions and corpus expectations",
        Duration::from_secs(10),
        || {
            let caps = Caps::default();
            for entry in corpus::entries(&caps).unwrap() {
                let p = prepared(&entry);
                let comm = decide_commutative(&p).unwrap().holds;
                let pt = decide_pt(&p).unwrap().holds;
                let cca = decide_cca(&p).unwrap().holds;
                let conj_pt = if comm == Holds::True && pt == Holds::True {
                    Holds::True
                } else {
                    Holds::False
                };
                let conj_cca = if comm == Holds::True && cca == Holds::True {
                    Holds::True
                } else {
                    Holds::False
                };
                assert_eq!(decide_comm_pt(&p).unwrap().holds, conj_pt, "{}", entry.name);
                assert_eq!(
                    decide_comm_cca(&p).unwrap().holds,
                    conj_cca,
                    "{}",
                    entry.name
                );
            }
            let piece = prepared(&corpus::piece_ab_entry(&caps).unwrap());
            assert_eq!(decide_comm_pt(&piece).unwrap().holds, Holds::True);
            let first = prepared(&corpus::first_root_a_entry());
            assert_eq!(decide_commutative(&first).unwrap().holds, Holds::False);
            assert_eq!(decide_comm_pt(&first).unwrap().holds, Holds::False);
        },
    );
}

/// Not a numbered criterion: the expected verdict table of every corpus
/// entry must reproduce, including the sampled horizontal refutations.
#[test]
fn corpus_expected_verdicts_reproduce() {
    let caps = Caps::default();
    for entry in corpus::entries(&caps).unwrap() {
        let p = prepared(&entry);
        for &(property, expected) in &entry.expected {
            let verdict = forestalg::decide::decide(&p, property, 4, &caps).unwrap();
            assert_eq!(
                verdict.holds,
                expected,
                "{}: {}",
                entry.name,
                property.name()
            );
            if verdict.holds == Holds::False {
                let w = verdict.witness.expect("false verdicts carry witnesses");
                if !matches!(
                    property,
                    forestalg::decide::Property::TreePt | forestalg::decide::Property::TreeCcaPt
                ) {
                    assert!(
                        w.replay(&p.syn),
                        "{}: {} witness must replay",
                        entry.name,
                        property.name()
                    );
                }
            }
        }
    }
}

/// Not a numbered criterion: verdicts are consistent with the semantic
/// oracle at its default bounds.
#[test]
fn verdicts_consistent_with_oracle() {
    let caps = Caps::default();
    for entry in corpus::entries(&caps).unwrap() {
        let p = prepared(&entry);
        if p.syn.alphabet().len() > 2 {
            continue; // bounded sweep kept to two-letter alphabets
        }
        let pt = decide_pt(&p).unwrap().holds;
        if pt == Holds::True {
            assert!(
                oracle::refute_pt(&p.syn, 2, 5, PieceVariant::Plain, &caps)
                    .unwrap()
                    .is_none(),
                "{}: piecewise testable language refuted semantically",
                entry.name
            );
        }
        let s1 = decide_sigma1(&p).unwrap().holds;
        if s1 == Holds::True {
            assert!(
                oracle::refute_sigma1(&p.syn, 5, &caps).unwrap().is_none(),
                "{}: insertion-closed language refuted semantically",
                entry.name
            );
        }
        let cca = decide_cca(&p).unwrap().holds;
        if cca == Holds::True {
            assert!(
                oracle::refute_pt(&p.syn, 2, 5, PieceVariant::Cca, &caps)
                    .unwrap()
                    .is_none(),
                "{}: cca-testable language refuted semantically",
                entry.name
            );
        }
    }
    // A negative case is corroborated too: the sum-shape language fails
    // the cca identities and the oracle agrees.
    let aa = prepared(&corpus::all_trees_aa_entry());
    assert_eq!(decide_cca(&aa).unwrap().holds, Holds::False);
    let refutation = oracle::refute_pt(&aa.syn, 2, 5, PieceVariant::Cca, &caps)
        .unwrap()
        .expect("cca refutation for the sum-shape language");
    assert!(refutation.verify(&aa.syn, &caps).unwrap());
}

/// Not a numbered criterion: `compose` and `substitute` satisfy the action
/// law on a deterministic sample, anchoring the free-algebra structure the
/// acceptance suite builds on.
#[test]
fn free_algebra_action_law_sampled() {
    let ab = Alphabet::of_chars("ab");
    let mut en = ForestEnum::new(ab.clone());
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..200 {
        let p = oracle::random_context(&mut rng, &mut en, 4);
        let q = oracle::random_context(&mut rng, &mut en, 4);
        let s = oracle::random_forest(&mut rng, &mut en, 4);
        assert_eq!(
            p.compose(&q).substitute(&s),
            p.substitute(&q.substitute(&s))
        );
        let r = oracle::random_context(&mut rng, &mut en, 3);
        assert_eq!(p.compose(&q).compose(&r), p.compose(&q.compose(&r)));
        let _ = Context::hole();
    }
}
