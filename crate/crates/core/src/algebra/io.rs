//! Recognizer files.
//!
//! Two JSON shapes are accepted. An automaton file lists the additive
//! state monoid with per-letter maps:
//!
//! ```json
//! { "alphabet": ["a"], "states": ["q0"], "zero": 0,
//!   "plus": [[0]], "delta": {"a": [0]}, "accept": [0] }
//! ```
//!
//! A raw algebra file lists a forest algebra directly; the horizontal
//! addition, the vertical product and the units are derived from `act`,
//! `insL` and `insR`, and every axiom is checked:
//!
//! ```json
//! { "H": [...], "V": [...], "act": [[...]],
//!   "insL": [...], "insR": [...], "letters": {"a": 1}, "accept": [...] }
//! ```
//!
//! Tables are dense arrays indexed by declared element order; writing a
//! loaded file reproduces it byte for byte.

use super::automaton::ForestAutomaton;
use super::morphism::{Morphism, Recognizer};
use super::{AlgebraError, ForestAlgebra};
use crate::forest::Alphabet;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonFile {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub zero: usize,
    pub plus: Vec<Vec<usize>>,
    pub delta: BTreeMap<String, Vec<usize>>,
    pub accept: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAlgebraFile {
    #[serde(rename = "H")]
    pub h: Vec<String>,
    #[serde(rename = "V")]
    pub v: Vec<String>,
    pub act: Vec<Vec<usize>>,
    #[serde(rename = "insL")]
    pub ins_l: Vec<usize>,
    #[serde(rename = "insR")]
    pub ins_r: Vec<usize>,
    pub letters: BTreeMap<String, usize>,
    pub accept: Vec<usize>,
}

/// Either file shape, as parsed.
#[derive(Debug, Clone)]
pub enum RecognizerFile {
    Automaton(AutomatonFile),
    Raw(RawAlgebraFile),
}

/// A loaded recognizer: the original shape plus the means to evaluate it.
#[derive(Debug, Clone)]
pub enum RecognizerSource {
    Automaton(ForestAutomaton),
    Algebra(Recognizer),
}

impl RecognizerSource {
    pub fn alphabet(&self) -> &Alphabet {
        match self {
            RecognizerSource::Automaton(a) => &a.alphabet,
            RecognizerSource::Algebra(r) => r.alphabet(),
        }
    }

    /// Sizes of the input, before any quotient: `(|H|, |V| when known)`.
    pub fn input_sizes(&self) -> (usize, Option<usize>) {
        match self {
            RecognizerSource::Automaton(a) => (a.n_states(), None),
            RecognizerSource::Algebra(r) => (r.algebra().h_len(), Some(r.algebra().v_len())),
        }
    }

    /// The syntactic recognizer for this input.
    pub fn to_syntactic(&self, caps: &crate::caps::Caps) -> Result<Recognizer, AlgebraError> {
        match self {
            RecognizerSource::Automaton(a) => a.to_syntactic(caps),
            RecognizerSource::Algebra(r) => Ok(super::quotient::syntactic_quotient(r)),
        }
    }
}

pub fn parse_recognizer(text: &str) -> Result<RecognizerFile, AlgebraError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let obj = value
        .as_object()
        .ok_or_else(|| AlgebraError::BadFile("expected a JSON object".into()))?;
    if obj.contains_key("states") {
        Ok(RecognizerFile::Automaton(serde_json::from_value(value)?))
    } else if obj.contains_key("H") {
        Ok(RecognizerFile::Raw(serde_json::from_value(value)?))
    } else {
        Err(AlgebraError::BadFile(
            "expected either an automaton file (key `states`) or a raw algebra file (key `H`)"
                .into(),
        ))
    }
}

pub fn load_recognizer(path: &Path) -> Result<RecognizerSource, AlgebraError> {
    let text = std::fs::read_to_string(path)?;
    let file = parse_recognizer(&text)?;
    realize(file)
}

pub fn realize(file: RecognizerFile) -> Result<RecognizerSource, AlgebraError> {
    match file {
        RecognizerFile::Automaton(f) => Ok(RecognizerSource::Automaton(automaton_from_file(&f)?)),
        RecognizerFile::Raw(f) => Ok(RecognizerSource::Algebra(recognizer_from_raw(&f)?)),
    }
}

pub fn automaton_from_file(f: &AutomatonFile) -> Result<ForestAutomaton, AlgebraError> {
    let alphabet =
        Alphabet::new(f.alphabet.clone()).map_err(|e| AlgebraError::BadFile(e.to_string()))?;
    let n = f.states.len();
    if f.plus.len() != n || f.plus.iter().any(|row| row.len() != n) {
        return Err(AlgebraError::BadFile(
            "plus table must be a dense n×n array".into(),
        ));
    }
    let keys: BTreeSet<&String> = f.delta.keys().collect();
    let declared: BTreeSet<&String> = f.alphabet.iter().collect();
    if keys != declared {
        return Err(AlgebraError::BadFile(
            "delta keys must match the alphabet exactly".into(),
        ));
    }
    let plus: Vec<u32> = f.plus.iter().flatten().map(|&q| q as u32).collect();
    let delta: Vec<Vec<u32>> = alphabet
        .labels()
        .map(|l| {
            f.delta[alphabet.name(l)]
                .iter()
                .map(|&q| q as u32)
                .collect()
        })
        .collect();
    for row in &delta {
        if row.len() != n {
            return Err(AlgebraError::BadFile(
                "delta rows must have one entry per state".into(),
            ));
        }
    }
    let auto = ForestAutomaton::new(
        alphabet,
        f.states.clone(),
        plus,
        f.zero,
        delta,
        f.accept.iter().copied().collect(),
    )?;
    let report = auto.check();
    if !report.ok() {
        return Err(AlgebraError::AxiomViolation(report.violations.join("; ")));
    }
    Ok(auto)
}

pub fn automaton_to_file(a: &ForestAutomaton) -> AutomatonFile {
    let n = a.n_states();
    AutomatonFile {
        alphabet: a.alphabet.names().to_vec(),
        states: a.state_names.clone(),
        zero: a.zero,
        plus: (0..n)
            .map(|i| (0..n).map(|j| a.plus(i, j)).collect())
            .collect(),
        delta: a
            .alphabet
            .labels()
            .map(|l| {
                (
                    a.alphabet.name(l).to_string(),
                    (0..n).map(|q| a.delta(l, q)).collect(),
                )
            })
            .collect(),
        accept: a.accept.iter().copied().collect(),
    }
}

/// Rebuilds a forest algebra from a raw file: derives `+` from the left
/// insertions, the product from faithfulness, locates the units, and
/// rejects anything that fails the axioms.
pub fn recognizer_from_raw(f: &RawAlgebraFile) -> Result<Recognizer, AlgebraError> {
    let h_len = f.h.len();
    let v_len = f.v.len();
    if h_len == 0 || v_len == 0 {
        return Err(AlgebraError::BadFile("H and V must be nonempty".into()));
    }
    if f.act.len() != v_len || f.act.iter().any(|r| r.len() != h_len) {
        return Err(AlgebraError::BadFile(
            "act must be a dense |V|×|H| array".into(),
        ));
    }
    if f.ins_l.len() != h_len || f.ins_r.len() != h_len {
        return Err(AlgebraError::BadFile(
            "insL and insR need one entry per H element".into(),
        ));
    }
    if f.act.iter().flatten().any(|&x| x >= h_len)
        || f.ins_l.iter().chain(&f.ins_r).any(|&v| v >= v_len)
    {
        return Err(AlgebraError::BadFile("element index out of range".into()));
    }
    let act = |v: usize, h: usize| f.act[v][h];

    // box acts as the identity.
    let one = (0..v_len)
        .find(|&v| (0..h_len).all(|x| act(v, x) == x))
        .ok_or_else(|| AlgebraError::BadFile("no identity element in V".into()))?;
    // zero: both insertions of it are the identity context.
    let zero = (0..h_len)
        .find(|&x| f.ins_l[x] == one && f.ins_r[x] == one)
        .ok_or_else(|| {
            AlgebraError::BadFile("no zero element in H (insertions of it must be box)".into())
        })?;
    // plus from left insertion.
    let mut plus = vec![0u32; h_len * h_len];
    for g in 0..h_len {
        for x in 0..h_len {
            plus[g * h_len + x] = act(f.ins_l[g], x) as u32;
        }
    }
    // product from faithfulness: v·w is the unique element acting like the
    // composite.
    let mut row_index: HashMap<Vec<usize>, usize> = HashMap::new();
    for v in 0..v_len {
        let row: Vec<usize> = (0..h_len).map(|x| act(v, x)).collect();
        if row_index.insert(row, v).is_some() {
            return Err(AlgebraError::AxiomViolation(
                "action not faithful: duplicate act rows".into(),
            ));
        }
    }
    let mut mul = vec![0u32; v_len * v_len];
    for v in 0..v_len {
        for w in 0..v_len {
            let row: Vec<usize> = (0..h_len).map(|x| act(v, act(w, x))).collect();
            match row_index.get(&row) {
                Some(&p) => mul[v * v_len + w] = p as u32,
                None => {
                    return Err(AlgebraError::AxiomViolation(format!(
                        "V is not closed under composition at ({}, {})",
                        f.v[v], f.v[w]
                    )))
                }
            }
        }
    }
    let act_flat: Vec<u32> = f.act.iter().flatten().map(|&x| x as u32).collect();
    let algebra = ForestAlgebra::from_tables(
        f.h.clone(),
        f.v.clone(),
        plus,
        mul,
        act_flat,
        f.ins_l.iter().map(|&v| v as u32).collect(),
        f.ins_r.iter().map(|&v| v as u32).collect(),
        zero,
        one,
    );
    let violations = algebra.check_axioms();
    if !violations.is_empty() {
        return Err(AlgebraError::AxiomViolation(violations.join("; ")));
    }
    let alphabet = Alphabet::new(f.letters.keys().cloned())
        .map_err(|e| AlgebraError::BadFile(e.to_string()))?;
    let mut letter_image = vec![0usize; alphabet.len()];
    for (name, &v) in &f.letters {
        if v >= v_len {
            return Err(AlgebraError::BadFile(format!(
                "letter `{name}` maps outside V"
            )));
        }
        letter_image[alphabet.label(name).expect("declared letter").0 as usize] = v;
    }
    let accept: BTreeSet<usize> = f.accept.iter().copied().collect();
    if accept.iter().any(|&x| x >= h_len) {
        return Err(AlgebraError::BadFile(
            "accepted element out of range".into(),
        ));
    }
    Ok(Recognizer {
        morphism: Morphism {
            alphabet,
            algebra,
            letter_image,
        },
        accept,
    })
}

pub fn recognizer_to_raw(r: &Recognizer) -> RawAlgebraFile {
    let a = r.algebra();
    RawAlgebraFile {
        h: a.h_names().to_vec(),
        v: a.v_names().to_vec(),
        act: (0..a.v_len())
            .map(|v| (0..a.h_len()).map(|x| a.act(v, x)).collect())
            .collect(),
        ins_l: (0..a.h_len()).map(|x| a.ins_l(x)).collect(),
        ins_r: (0..a.h_len()).map(|x| a.ins_r(x)).collect(),
        letters: r
            .alphabet()
            .labels()
            .map(|l| (r.alphabet().name(l).to_string(), r.morphism.letter(l)))
            .collect(),
        accept: r.accept.iter().copied().collect(),
    }
}

pub fn to_json_string(file: &RecognizerFile) -> String {
    let mut s = match file {
        RecognizerFile::Automaton(f) => serde_json::to_string_pretty(f).expect("serializable"),
        RecognizerFile::Raw(f) => serde_json::to_string_pretty(f).expect("serializable"),
    };
    s.push('\n');
    s
}

pub fn save_automaton(a: &ForestAutomaton, path: &Path) -> Result<(), AlgebraError> {
    std::fs::write(
        path,
        to_json_string(&RecognizerFile::Automaton(automaton_to_file(a))),
    )?;
    Ok(())
}
