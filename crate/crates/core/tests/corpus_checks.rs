//! Recognition correctness: every corpus recognizer agrees with its
//! direct semantic predicate on every forest up to size 7, through both
//! the automaton evaluation and the syntactic morphism.

use forestalg::caps::Caps;
use forestalg::oracle::ForestEnum;

#[test]
fn recognizers_match_predicates_up_to_size_7() {
    let caps = Caps::default();
    for entry in forestalg::corpus::entries(&caps).unwrap() {
        let syn = entry.automaton.to_syntactic(&caps).unwrap();
        let mut en = ForestEnum::new(entry.automaton.alphabet.clone());
        let mut count = 0usize;
        for f in en.all_upto(7) {
            let expected = entry.predicate.eval(&f, &caps);
            assert_eq!(
                entry.automaton.accepts(&f),
                expected,
                "{}: automaton disagrees on {}",
                entry.name,
                f.render(&entry.automaton.alphabet)
            );
            assert_eq!(
                syn.accepts(&f).unwrap(),
                expected,
                "{}: syntactic recognizer disagrees on {}",
                entry.name,
                f.render(&entry.automaton.alphabet)
            );
            count += 1;
        }
        assert!(count > 8, "{}: the sweep must cover something", entry.name);
    }
}
