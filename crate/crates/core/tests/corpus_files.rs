//! The bundled corpus files must stay in sync with the programmatic
//! definitions, and loading them must reproduce the automata byte for
//! byte.

use forestalg::algebra::io::{automaton_to_file, parse_recognizer, to_json_string, RecognizerFile};
use forestalg::caps::Caps;
use std::path::PathBuf;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// Regenerates the bundled corpus. Run explicitly after changing corpus
/// definitions: `cargo test -p forestalg --test corpus_files -- --ignored`
#[test]
#[ignore]
fn regenerate_corpus_files() {
    let dir = corpus_dir();
    std::fs::create_dir_all(&dir).unwrap();
    for entry in forestalg::corpus::entries(&Caps::default()).unwrap() {
        let path = dir.join(format!("{}.json", entry.name));
        forestalg::algebra::io::save_automaton(&entry.automaton, &path).unwrap();
        println!("wrote {}", path.display());
    }
}

#[test]
fn bundled_files_match_programmatic_corpus() {
    for entry in forestalg::corpus::entries(&Caps::default()).unwrap() {
        let path = corpus_dir().join(format!("{}.json", entry.name));
        let on_disk = std::fs::read_to_string(&path).unwrap_or_else(|_| {
            panic!(
                "missing corpus file {}; run the ignored regenerate test",
                path.display()
            )
        });
        let expected = to_json_string(&RecognizerFile::Automaton(automaton_to_file(
            &entry.automaton,
        )));
        assert_eq!(on_disk, expected, "{} out of date", entry.name);
        // Byte-exact round trip through the parser.
        let parsed = parse_recognizer(&on_disk).unwrap();
        assert_eq!(to_json_string(&parsed), on_disk);
    }
}
