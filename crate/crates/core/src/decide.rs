//! Classification procedures: each class of languages is characterized by
//! identities over the syntactic algebra, checked exhaustively over the
//! relevant element tuples. Every failed check yields a witness that can
//! be replayed against the algebra.

use crate::algebra::classify::{classify_elements, ElementClass};
use crate::algebra::io::RecognizerSource;
use crate::algebra::morphism::{realize_elements, Recognizer};
use crate::algebra::quotient::tree_reduction;
use crate::algebra::AlgebraError;
use crate::caps::Caps;
use crate::piecerel::{
    piece_relation_cca, piece_relation_horizontal, piece_relation_plain, PieceRelation,
};
use crate::pieces::PiecesError;
use serde_json::json;
use std::cell::OnceCell;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DecideError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Pieces(#[from] PiecesError),
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Debug, Copy, Clone, PartialEq, Eq, Hash)]
pub enum Property {
    Pt,
    PtAlt,
    CcaPt,
    CcaPtAlt,
    Sigma1,
    Commutative,
    CommPt,
    CommCcaPt,
    TreePt,
    TreeCcaPt,
    HorizontalPt,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::Pt => "PT",
            Property::PtAlt => "PT_alt",
            Property::CcaPt => "ccaPT",
            Property::CcaPtAlt => "ccaPT_alt",
            Property::Sigma1 => "Sigma1",
            Property::Commutative => "Commutative",
            Property::CommPt => "CommPT",
            Property::CommCcaPt => "CommCcaPT",
            Property::TreePt => "TreePT",
            Property::TreeCcaPt => "TreeCcaPT",
            Property::HorizontalPt => "HorizontalPT_experimental",
        }
    }
}

#[derive(Debug, Copy, Clone, PartialEq, Eq)]
pub enum Holds {
    True,
    False,
    Unknown,
}

impl Holds {
    pub fn as_str(self) -> &'static str {
        match self {
            Holds::True => "true",
            Holds::False => "false",
            Holds::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Copy, Clone, PartialEq, Eq)]
pub enum ElemRef {
    H(usize),
    V(usize),
}

/// The identity instance a witness violates.
#[derive(Debug, Copy, Clone, PartialEq, Eq)]
pub enum IdentityKind {
    /// `u^ω·v = u^ω` for `v` a piece of `u`.
    PtAbsorbRight,
    /// `v·u^ω = u^ω` for `v` a piece of `u`.
    PtAbsorbLeft,
    /// `(n·m)^ω·n = (n·m)^ω = m·(n·m)^ω` (J-triviality).
    JTriviality,
    /// `v·h + ω(v·u·h) = ω(v·u·h)`.
    OmegaAbsorbLeft,
    /// `ω(v·u·h) + v·h = ω(v·u·h)`.
    OmegaAbsorbRight,
    /// `u^ω·v·h = u^ω·h` for tree-context-type pieces and tree-type-or-empty `h`.
    CcaAbsorbMid,
    /// `v·u^ω·h = u^ω·h`.
    CcaAbsorbLeft,
    /// `ω(h) + g = ω(h)` for `g` a piece of `h`.
    CcaOmegaRight,
    /// `g + ω(h) = ω(h)`.
    CcaOmegaLeft,
    /// `(u·v)^ω·u·h = (u·v)^ω·h` for tree-type-or-empty `h`.
    AltTreeAbsorb,
    /// `v·(u·v)^ω = (u·v)^ω` for tree-context-types `u`, `v`.
    AltTctAbsorb,
    /// `A^ω·u·(_+y)·g = A^ω·g` with `A = u·(_+x)`, `x = v·w·h`, `y = v·h`.
    AltInsAbsorbRight,
    /// `u·(_+y)·A^ω·g = A^ω·g`.
    AltInsAbsorbLeft,
    /// `g + h = h + g`.
    Commutativity,
    /// `w·h` accepted but `w·v·h` rejected: not closed under insertion.
    Sigma1Insertion,
    /// `u^ω·v = u^ω` over the horizontal relation.
    HorizontalAbsorbRight,
    /// `v·u^ω = u^ω` over the horizontal relation.
    HorizontalAbsorbLeft,
}

impl IdentityKind {
    pub fn equation(self) -> &'static str {
        match self {
            IdentityKind::PtAbsorbRight => "u^w·v = u^w",
            IdentityKind::PtAbsorbLeft => "v·u^w = u^w",
            IdentityKind::JTriviality => "(n·m)^w·n = (n·m)^w = m·(n·m)^w",
            IdentityKind::OmegaAbsorbLeft => "v·h + w(v·u·h) = w(v·u·h)",
            IdentityKind::OmegaAbsorbRight => "w(v·u·h) + v·h = w(v·u·h)",
            IdentityKind::CcaAbsorbMid => "u^w·v·h = u^w·h",
            IdentityKind::CcaAbsorbLeft => "v·u^w·h = u^w·h",
            IdentityKind::CcaOmegaRight => "w(h) + g = w(h)",
            IdentityKind::CcaOmegaLeft => "g + w(h) = w(h)",
            IdentityKind::AltTreeAbsorb => "(u·v)^w·u·h = (u·v)^w·h",
            IdentityKind::AltTctAbsorb => "v·(u·v)^w = (u·v)^w",
            IdentityKind::AltInsAbsorbRight => "(u(_+vwh))^w·u(_+vh)·g = (u(_+vwh))^w·g",
            IdentityKind::AltInsAbsorbLeft => "u(_+vh)·(u(_+vwh))^w·g = (u(_+vwh))^w·g",
            IdentityKind::Commutativity => "g+h = h+g",
            IdentityKind::Sigma1Insertion => "w·h in X implies w·v·h in X",
            IdentityKind::HorizontalAbsorbRight => "u^w·v = u^w (horizontal)",
            IdentityKind::HorizontalAbsorbLeft => "v·u^w = u^w (horizontal)",
        }
    }
}

/// A concrete violating instance: the named elements, the evaluated sides
/// of the identity, and (when searched for) realizing expressions.
#[derive(Debug, Clone)]
pub struct Witness {
    pub identity: IdentityKind,
    pub bindings: Vec<(&'static str, ElemRef, String)>,
    pub lhs: (ElemRef, String),
    pub rhs: (ElemRef, String),
    pub realizations: Vec<(&'static str, String)>,
}

impl Witness {
    fn get(&self, name: &str) -> ElemRef {
        self.bindings
            .iter()
            .find(|(n, _, _)| *n == name)
            .map(|(_, e, _)| *e)
            .unwrap_or_else(|| panic!("witness binding {name} missing"))
    }

    fn get_v(&self, name: &str) -> usize {
        match self.get(name) {
            ElemRef::V(v) => v,
            ElemRef::H(_) => panic!("witness binding {name} is horizontal"),
        }
    }

    fn get_h(&self, name: &str) -> usize {
        match self.get(name) {
            ElemRef::H(h) => h,
            ElemRef::V(_) => panic!("witness binding {name} is vertical"),
        }
    }

    /// Recomputes the violated instance on the algebra the witness was
    /// produced from; true when the violation is still exhibited.
    pub fn replay(&self, r: &Recognizer) -> bool {
        let a = r.algebra();
        match self.identity {
            IdentityKind::PtAbsorbRight | IdentityKind::HorizontalAbsorbRight => {
                let (u, v) = (self.get_v("u"), self.get_v("v"));
                let e = a.idempotent_power_v(u);
                a.mul(e, v) != e
            }
            IdentityKind::PtAbsorbLeft | IdentityKind::HorizontalAbsorbLeft => {
                let (u, v) = (self.get_v("u"), self.get_v("v"));
                let e = a.idempotent_power_v(u);
                a.mul(v, e) != e
            }
            IdentityKind::JTriviality => {
                let (m, n) = (self.get_v("m"), self.get_v("n"));
                let e = a.idempotent_power_v(a.mul(n, m));
                a.mul(e, n) != e || a.mul(m, e) != e
            }
            IdentityKind::OmegaAbsorbLeft => {
                let (u, v, h) = (self.get_v("u"), self.get_v("v"), self.get_h("h"));
                let w = a.idempotent_power_h(a.act(v, a.act(u, h)));
                a.plus(a.act(v, h), w) != w
            }
            IdentityKind::OmegaAbsorbRight => {
                let (u, v, h) = (self.get_v("u"), self.get_v("v"), self.get_h("h"));
                let w = a.idempotent_power_h(a.act(v, a.act(u, h)));
                a.plus(w, a.act(v, h)) != w
            }
            IdentityKind::CcaAbsorbMid => {
                let (u, v, h) = (self.get_v("u"), self.get_v("v"), self.get_h("h"));
                let e = a.idempotent_power_v(u);
                a.act(a.mul(e, v), h) != a.act(e, h)
            }
            IdentityKind::CcaAbsorbLeft => {
                let (u, v, h) = (self.get_v("u"), self.get_v("v"), self.get_h("h"));
                let e = a.idempotent_power_v(u);
                a.act(a.mul(v, e), h) != a.act(e, h)
            }
            IdentityKind::CcaOmegaRight => {
                let (g, h) = (self.get_h("g"), self.get_h("h"));
                let w = a.idempotent_power_h(h);
                a.plus(w, g) != w
            }
            IdentityKind::CcaOmegaLeft => {
                let (g, h) = (self.get_h("g"), self.get_h("h"));
                let w = a.idempotent_power_h(h);
                a.plus(g, w) != w
            }
            IdentityKind::AltTreeAbsorb => {
                let (u, v, h) = (self.get_v("u"), self.get_v("v"), self.get_h("h"));
                let e = a.idempotent_power_v(a.mul(u, v));
                a.act(a.mul(e, u), h) != a.act(e, h)
            }
            IdentityKind::AltTctAbsorb => {
                let (u, v) = (self.get_v("u"), self.get_v("v"));
                let e = a.idempotent_power_v(a.mul(u, v));
                a.mul(v, e) != e
            }
            IdentityKind::AltInsAbsorbRight => {
                let (u, x, y, g) = (
                    self.get_v("u"),
                    self.get_h("vwh"),
                    self.get_h("vh"),
                    self.get_h("g"),
                );
                let big = a.mul(u, a.ins_r(x));
                let small = a.mul(u, a.ins_r(y));
                let e = a.idempotent_power_v(big);
                a.act(a.mul(e, small), g) != a.act(e, g)
            }
            IdentityKind::AltInsAbsorbLeft => {
                let (u, x, y, g) = (
                    self.get_v("u"),
                    self.get_h("vwh"),
                    self.get_h("vh"),
                    self.get_h("g"),
                );
                let big = a.mul(u, a.ins_r(x));
                let small = a.mul(u, a.ins_r(y));
                let e = a.idempotent_power_v(big);
                a.act(a.mul(small, e), g) != a.act(e, g)
            }
            IdentityKind::Commutativity => {
                let (g, h) = (self.get_h("g"), self.get_h("h"));
                a.plus(g, h) != a.plus(h, g)
            }
            IdentityKind::Sigma1Insertion => {
                let (v, h, w) = (self.get_v("v"), self.get_h("h"), self.get_v("w"));
                r.accept.contains(&a.act(w, h)) && !r.accept.contains(&a.act(w, a.act(v, h)))
            }
        }
    }

    /// Searches small realizing forests and contexts for every bound
    /// element.
    pub fn with_realizations(mut self, r: &Recognizer, max_size: usize) -> Self {
        let real = realize_elements(r, max_size);
        let ab = r.alphabet();
        let mut out = Vec::new();
        for (name, elem, _) in &self.bindings {
            let text = match elem {
                ElemRef::H(h) => real.h[*h].as_ref().map(|f| format!("\"{}\"", f.render(ab))),
                ElemRef::V(v) => real.v[*v].as_ref().map(|c| format!("\"{}\"", c.render(ab))),
            };
            if let Some(text) = text {
                out.push((*name, text));
            }
        }
        self.realizations = out;
        self
    }
}

#[derive(Debug, Clone)]
pub struct Provenance {
    pub input_h: usize,
    pub input_v: Option<usize>,
    pub syntactic_h: usize,
    pub syntactic_v: usize,
    pub reduced_h: Option<usize>,
    pub reduced_v: Option<usize>,
    pub relation: Option<&'static str>,
    pub relation_pairs: Option<usize>,
    pub bound: Option<usize>,
    pub under_approximation: bool,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub property: Property,
    pub holds: Holds,
    pub witness: Option<Witness>,
    pub provenance: Provenance,
}

impl Verdict {
    pub fn to_json(&self) -> serde_json::Value {
        let witness = self.witness.as_ref().map(|w| {
            json!({
                "identity": w.identity.equation(),
                "bindings": w.bindings.iter().map(|(n, _, name)| json!({"var": n, "element": name})).collect::<Vec<_>>(),
                "lhs": w.lhs.1,
                "rhs": w.rhs.1,
                "realizations": w.realizations.iter().map(|(n, t)| json!({"var": n, "expr": t})).collect::<Vec<_>>(),
            })
        });
        json!({
            "property": self.property.name(),
            "holds": self.holds.as_str(),
            "witness": witness,
            "provenance": {
                "input_h": self.provenance.input_h,
                "input_v": self.provenance.input_v,
                "syntactic_h": self.provenance.syntactic_h,
                "syntactic_v": self.provenance.syntactic_v,
                "reduced_h": self.provenance.reduced_h,
                "reduced_v": self.provenance.reduced_v,
                "relation": self.provenance.relation,
                "relation_pairs": self.provenance.relation_pairs,
                "bound": self.provenance.bound,
                "under_approximation": self.provenance.under_approximation,
                "notes": self.provenance.notes,
            },
        })
    }
}

/// A recognizer prepared for classification: quotiented to its syntactic
/// algebra, with the element classification and idempotent powers cached
/// and the piece relations computed on demand.
pub struct Prepared {
    pub syn: Recognizer,
    pub classes: ElementClass,
    pub input_h: usize,
    pub input_v: Option<usize>,
    omega_v: Vec<usize>,
    omega_h: Vec<usize>,
    rel_plain: OnceCell<PieceRelation>,
    rel_cca: OnceCell<PieceRelation>,
}

impl Prepared {
    pub fn from_source(src: &RecognizerSource, caps: &Caps) -> Result<Self, DecideError> {
        let (input_h, input_v) = src.input_sizes();
        let syn = src.to_syntactic(caps)?;
        Ok(Self::new(syn, input_h, input_v))
    }

    pub fn from_automaton(
        a: &crate::algebra::automaton::ForestAutomaton,
        caps: &Caps,
    ) -> Result<Self, DecideError> {
        let syn = a.to_syntactic(caps)?;
        Ok(Self::new(syn, a.n_states(), None))
    }

    pub fn from_recognizer(r: &Recognizer) -> Self {
        let syn = crate::algebra::quotient::syntactic_quotient(r);
        Self::new(syn, r.algebra().h_len(), Some(r.algebra().v_len()))
    }

    fn new(syn: Recognizer, input_h: usize, input_v: Option<usize>) -> Self {
        let classes = classify_elements(&syn.morphism);
        let a = syn.algebra();
        let omega_v = (0..a.v_len()).map(|v| a.idempotent_power_v(v)).collect();
        let omega_h = (0..a.h_len()).map(|h| a.idempotent_power_h(h)).collect();
        Prepared {
            syn,
            classes,
            input_h,
            input_v,
            omega_v,
            omega_h,
            rel_plain: OnceCell::new(),
            rel_cca: OnceCell::new(),
        }
    }

    pub fn rel_plain(&self) -> &PieceRelation {
        self.rel_plain
            .get_or_init(|| piece_relation_plain(&self.syn))
    }

    pub fn rel_cca(&self) -> &PieceRelation {
        self.rel_cca
            .get_or_init(|| piece_relation_cca(&self.syn, &self.classes))
    }

    fn provenance(&self) -> Provenance {
        Provenance {
            input_h: self.input_h,
            input_v: self.input_v,
            syntactic_h: self.syn.algebra().h_len(),
            syntactic_v: self.syn.algebra().v_len(),
            reduced_h: None,
            reduced_v: None,
            relation: None,
            relation_pairs: None,
            bound: None,
            under_approximation: false,
            notes: Vec::new(),
        }
    }

    fn treeish(&self) -> Vec<usize> {
        let a = self.syn.algebra();
        (0..a.h_len())
            .filter(|&h| self.classes.tree_type[h] || h == a.zero())
            .collect()
    }
}

fn bind_v(
    a: &crate::algebra::ForestAlgebra,
    name: &'static str,
    v: usize,
) -> (&'static str, ElemRef, String) {
    (name, ElemRef::V(v), a.v_name(v).to_string())
}

fn bind_h(
    a: &crate::algebra::ForestAlgebra,
    name: &'static str,
    h: usize,
) -> (&'static str, ElemRef, String) {
    (name, ElemRef::H(h), a.h_name(h).to_string())
}

fn side_v(a: &crate::algebra::ForestAlgebra, v: usize) -> (ElemRef, String) {
    (ElemRef::V(v), a.v_name(v).to_string())
}

fn side_h(a: &crate::algebra::ForestAlgebra, h: usize) -> (ElemRef, String) {
    (ElemRef::H(h), a.h_name(h).to_string())
}

/// Absorption identities over a piece relation; shared by the plain,
/// horizontal and tree checks.
fn check_absorption(
    r: &Recognizer,
    rel: &PieceRelation,
    omega_v: &[usize],
    kinds: (IdentityKind, IdentityKind),
) -> Option<Witness> {
    let a = r.algebra();
    for u in 0..a.v_len() {
        let e = omega_v[u];
        for v in 0..a.v_len() {
            if !rel.on_v(v, u) {
                continue;
            }
            let right = a.mul(e, v);
            if right != e {
                return Some(Witness {
                    identity: kinds.0,
                    bindings: vec![bind_v(a, "u", u), bind_v(a, "v", v)],
                    lhs: side_v(a, right),
                    rhs: side_v(a, e),
                    realizations: Vec::new(),
                });
            }
            let left = a.mul(v, e);
            if left != e {
                return Some(Witness {
                    identity: kinds.1,
                    bindings: vec![bind_v(a, "u", u), bind_v(a, "v", v)],
                    lhs: side_v(a, left),
                    rhs: side_v(a, e),
                    realizations: Vec::new(),
                });
            }
        }
    }
    None
}

/// Piecewise testability: the absorption identities over the plain piece
/// relation of the syntactic algebra.
pub fn decide_pt(p: &Prepared) -> Result<Verdict, DecideError> {
    let rel = p.rel_plain();
    let witness = check_absorption(
        &p.syn,
        rel,
        &p.omega_v,
        (IdentityKind::PtAbsorbRight, IdentityKind::PtAbsorbLeft),
    );
    let mut prov = p.provenance();
    prov.relation = Some("plain");
    prov.relation_pairs = Some(rel.len());
    Ok(Verdict {
        property: Property::Pt,
        holds: if witness.is_none() {
            Holds::True
        } else {
            Holds::False
        },
        witness,
        provenance: prov,
    })
}

/// Equivalent route: J-triviality of `V` plus the omega absorption
/// identity, avoiding the piece relation entirely.
pub fn decide_pt_alt(p: &Prepared) -> Result<Verdict, DecideError> {
    let a = p.syn.algebra();
    let mut witness = None;
    let j = a.j_report();
    if !j.j_trivial {
        'search: for n in 0..a.v_len() {
            for m in 0..a.v_len() {
                let e = a.idempotent_power_v(a.mul(n, m));
                if a.mul(e, n) != e || a.mul(m, e) != e {
                    let lhs = if a.mul(e, n) != e {
                        a.mul(e, n)
                    } else {
                        a.mul(m, e)
                    };
                    witness = Some(Witness {
                        identity: IdentityKind::JTriviality,
                        bindings: vec![bind_v(a, "n", n), bind_v(a, "m", m)],
                        lhs: side_v(a, lhs),
                        rhs: side_v(a, e),
                        realizations: Vec::new(),
                    });
                    break 'search;
                }
            }
        }
    }
    if witness.is_none() {
        'outer: for u in 0..a.v_len() {
            for v in 0..a.v_len() {
                for h in 0..a.h_len() {
                    let x = a.act(v, a.act(u, h));
                    let w = p.omega_h[x];
                    let vh = a.act(v, h);
                    if a.plus(vh, w) != w {
                        witness = Some(Witness {
                            identity: IdentityKind::OmegaAbsorbLeft,
                            bindings: vec![bind_v(a, "u", u), bind_v(a, "v", v), bind_h(a, "h", h)],
                            lhs: side_h(a, a.plus(vh, w)),
                            rhs: side_h(a, w),
                            realizations: Vec::new(),
                        });
                        break 'outer;
                    }
                    if a.plus(w, vh) != w {
                        witness = Some(Witness {
                            identity: IdentityKind::OmegaAbsorbRight,
                            bindings: vec![bind_v(a, "u", u), bind_v(a, "v", v), bind_h(a, "h", h)],
                            lhs: side_h(a, a.plus(w, vh)),
                            rhs: side_h(a, w),
                            realizations: Vec::new(),
                        });
                        break 'outer;
                    }
                }
            }
        }
    }
    let mut prov = p.provenance();
    prov.notes.push(format!("J-trivial: {}", j.j_trivial));
    Ok(Verdict {
        property: Property::PtAlt,
        holds: if witness.is_none() {
            Holds::True
        } else {
            Holds::False
        },
        witness,
        provenance: prov,
    })
}

/// cca piecewise testability over the guarded relation: absorption for
/// tree-context-type pieces applied to tree-type-or-empty elements, and
/// omega absorption on the derived horizontal relation.
pub fn decide_cca(p: &Prepared) -> Result<Verdict, DecideError> {
    let a = p.syn.algebra();
    let rel = p.rel_cca();
    let treeish = p.treeish();
    let mut witness = None;
    'outer: for u in 0..a.v_len() {
        if !p.classes.tree_context_type[u] {
            continue;
        }
        let e = p.omega_v[u];
        for v in 0..a.v_len() {
            if !p.classes.tree_context_type[v] || !rel.on_v(v, u) {
                continue;
            }
            for &h in &treeish {
                let base = a.act(e, h);
                let mid = a.act(a.mul(e, v), h);
                if mid != base {
                    witness = Some(Witness {
                        identity: IdentityKind::CcaAbsorbMid,
                        bindings: vec![bind_v(a, "u", u), bind_v(a, "v", v), bind_h(a, "h", h)],
                        lhs: side_h(a, mid),
                        rhs: side_h(a, base),
                        realizations: Vec::new(),
                    });
                    break 'outer;
                }
                let left = a.act(a.mul(v, e), h);
                if left != base {
                    witness = Some(Witness {
                        identity: IdentityKind::CcaAbsorbLeft,
                        bindings: vec![bind_v(a, "u", u), bind_v(a, "v", v), bind_h(a, "h", h)],
                        lhs: side_h(a, left),
                        rhs: side_h(a, base),
                        realizations: Vec::new(),
                    });
                    break 'outer;
                }
            }
        }
    }
    if witness.is_none() {
        'outer2: for h in 0..a.h_len() {
            let w = p.omega_h[h];
            for g in 0..a.h_len() {
                if !rel.on_h(g, h) {
                    continue;
                }
                if a.plus(w, g) != w {
                    witness = Some(Witness {
                        identity: IdentityKind::CcaOmegaRight,
                        bindings: vec![bind_h(a, "g", g), bind_h(a, "h", h)],
                        lhs: side_h(a, a.plus(w, g)),
                        rhs: side_h(a, w),
                        realizations: Vec::new(),
                    });
                    break 'outer2;
                }
                if a.plus(g, w) != w {
                    witness = Some(Witness {
                        identity: IdentityKind::CcaOmegaLeft,
                        bindings: vec![bind_h(a, "g", g), bind_h(a, "h", h)],
                        lhs: side_h(a, a.plus(g, w)),
                        rhs: side_h(a, w),
                        realizations: Vec::new(),
                    });
                    break 'outer2;
                }
            }
        }
    }
    let mut prov = p.provenance();
    prov.relation = Some("cca");
    prov.relation_pairs = Some(rel.len());
    prov.notes
        .push("empty quantifier realized as the zero element".into());
    Ok(Verdict {
        property: Property::CcaPt,
        holds: if witness.is_none() {
            Holds::True
        } else {
            Holds::False
        },
        witness,
        provenance: prov,
    })
}

/// Equivalent identity set for the cca case, with no piece relation.
pub fn decide_cca_alt(p: &Prepared) -> Result<Verdict, DecideError> {
    let a = p.syn.algebra();
    let treeish = p.treeish();
    let mut witness = None;

    // (u·v)^ω·u·h = (u·v)^ω·h over all u, v and tree-type-or-empty h.
    'a: for u in 0..a.v_len() {
        for v in 0..a.v_len() {
            let e = p.omega_v[a.mul(u, v)];
            for &h in &treeish {
                let lhs = a.act(a.mul(e, u), h);
                let rhs = a.act(e, h);
                if lhs != rhs {
                    witness = Some(Witness {
                        identity: IdentityKind::AltTreeAbsorb,
                        bindings: vec![bind_v(a, "u", u), bind_v(a, "v", v), bind_h(a, "h", h)],
                        lhs: side_h(a, lhs),
                        rhs: side_h(a, rhs),
                        realizations: Vec::new(),
                    });
                    break 'a;
                }
            }
        }
    }

    // v·(u·v)^ω = (u·v)^ω over tree-context-types.
    if witness.is_none() {
        'b: for u in 0..a.v_len() {
            if !p.classes.tree_context_type[u] {
                continue;
            }
            for v in 0..a.v_len() {
                if !p.classes.tree_context_type[v] {
                    continue;
                }
                let e = p.omega_v[a.mul(u, v)];
                if a.mul(v, e) != e {
                    witness = Some(Witness {
                        identity: IdentityKind::AltTctAbsorb,
                        bindings: vec![bind_v(a, "u", u), bind_v(a, "v", v)],
                        lhs: side_v(a, a.mul(v, e)),
                        rhs: side_v(a, e),
                        realizations: Vec::new(),
                    });
                    break 'b;
                }
            }
        }
    }

    // Insertion absorption. The pair (v·w·h, v·h) is what the identity
    // depends on, so enumerate those value pairs instead of (v, w).
    if witness.is_none() {
        let tct_or_box: Vec<usize> = (0..a.v_len())
            .filter(|&v| p.classes.tree_context_type[v] || v == a.one())
            .collect();
        'c: for &h in &treeish {
            let mut pairs: Vec<(usize, usize, usize, usize)> = Vec::new(); // (x=vwh, y=vh, v, w)
            let mut seen = std::collections::HashSet::new();
            for v in 0..a.v_len() {
                let y = a.act(v, h);
                for w in 0..a.v_len() {
                    let x = a.act(v, a.act(w, h));
                    if seen.insert((x, y)) {
                        pairs.push((x, y, v, w));
                    }
                }
            }
            for &(x, y, v, w) in &pairs {
                for &u in &tct_or_box {
                    let big = a.mul(u, a.ins_r(x));
                    let small = a.mul(u, a.ins_r(y));
                    let e = p.omega_v[big];
                    for &g in &treeish {
                        let base = a.act(e, g);
                        let right = a.act(a.mul(e, small), g);
                        if right != base {
                            witness = Some(Witness {
                                identity: IdentityKind::AltInsAbsorbRight,
                                bindings: vec![
                                    bind_v(a, "u", u),
                                    bind_v(a, "v", v),
                                    bind_v(a, "w", w),
                                    bind_h(a, "g", g),
                                    bind_h(a, "h", h),
                                    bind_h(a, "vwh", x),
                                    bind_h(a, "vh", y),
                                ],
                                lhs: side_h(a, right),
                                rhs: side_h(a, base),
                                realizations: Vec::new(),
                            });
                            break 'c;
                        }
                        let left = a.act(a.mul(small, e), g);
                        if left != base {
                            witness = Some(Witness {
                                identity: IdentityKind::AltInsAbsorbLeft,
                                bindings: vec![
                                    bind_v(a, "u", u),
                                    bind_v(a, "v", v),
                                    bind_v(a, "w", w),
                                    bind_h(a, "g", g),
                                    bind_h(a, "h", h),
                                    bind_h(a, "vwh", x),
                                    bind_h(a, "vh", y),
                                ],
                                lhs: side_h(a, left),
                                rhs: side_h(a, base),
                                realizations: Vec::new(),
                            });
                            break 'c;
                        }
                    }
                }
            }
        }
    }

    let mut prov = p.provenance();
    prov.notes
        .push("quantifiers for v, w range over all of V".into());
    Ok(Verdict {
        property: Property::CcaPtAlt,
        holds: if witness.is_none() {
            Holds::True
        } else {
            Holds::False
        },
        witness,
        provenance: prov,
    })
}

/// Definability by a purely existential sentence: every vertical element
/// must sit below the empty context in the language order.
pub fn decide_sigma1(p: &Prepared) -> Result<Verdict, DecideError> {
    let a = p.syn.algebra();
    let h_len = a.h_len();
    let v_len = a.v_len();
    let member: Vec<bool> = (0..h_len).map(|h| p.syn.accept.contains(&h)).collect();
    // h1 <= h2 iff for all v: v·h2 in X implies v·h1 in X.
    let mut leq_h = vec![true; h_len * h_len];
    for h1 in 0..h_len {
        for h2 in 0..h_len {
            for v in 0..v_len {
                if member[a.act(v, h2)] && !member[a.act(v, h1)] {
                    leq_h[h1 * h_len + h2] = false;
                    break;
                }
            }
        }
    }
    for h1 in 0..h_len {
        for h2 in h1 + 1..h_len {
            if leq_h[h1 * h_len + h2] && leq_h[h2 * h_len + h1] {
                return Err(DecideError::Internal(format!(
                    "language order on H not antisymmetric at ({}, {}); input was not syntactic",
                    a.h_name(h1),
                    a.h_name(h2)
                )));
            }
        }
    }
    let leq_v =
        |v1: usize, v2: usize| (0..h_len).all(|h| leq_h[a.act(v1, h) * h_len + a.act(v2, h)]);
    for v1 in 0..v_len {
        for v2 in v1 + 1..v_len {
            if leq_v(v1, v2) && leq_v(v2, v1) {
                return Err(DecideError::Internal(format!(
                    "language order on V not antisymmetric at ({}, {}); input was not syntactic",
                    a.v_name(v1),
                    a.v_name(v2)
                )));
            }
        }
    }
    let mut witness = None;
    'outer: for v in 0..v_len {
        if leq_v(v, a.one()) {
            continue;
        }
        for h in 0..h_len {
            if leq_h[a.act(v, h) * h_len + h] {
                continue;
            }
            for w in 0..v_len {
                if member[a.act(w, h)] && !member[a.act(w, a.act(v, h))] {
                    witness = Some(Witness {
                        identity: IdentityKind::Sigma1Insertion,
                        bindings: vec![bind_v(a, "v", v), bind_h(a, "h", h), bind_v(a, "w", w)],
                        lhs: side_h(a, a.act(w, a.act(v, h))),
                        rhs: side_h(a, a.act(w, h)),
                        realizations: Vec::new(),
                    });
                    break 'outer;
                }
            }
        }
    }
    Ok(Verdict {
        property: Property::Sigma1,
        holds: if witness.is_none() {
            Holds::True
        } else {
            Holds::False
        },
        witness,
        provenance: p.provenance(),
    })
}

pub fn decide_commutative(p: &Prepared) -> Result<Verdict, DecideError> {
    let a = p.syn.algebra();
    let mut witness = None;
    'outer: for g in 0..a.h_len() {
        for h in 0..a.h_len() {
            if a.plus(g, h) != a.plus(h, g) {
                witness = Some(Witness {
                    identity: IdentityKind::Commutativity,
                    bindings: vec![bind_h(a, "g", g), bind_h(a, "h", h)],
                    lhs: side_h(a, a.plus(g, h)),
                    rhs: side_h(a, a.plus(h, g)),
                    realizations: Vec::new(),
                });
                break 'outer;
            }
        }
    }
    Ok(Verdict {
        property: Property::Commutative,
        holds: if witness.is_none() {
            Holds::True
        } else {
            Holds::False
        },
        witness,
        provenance: p.provenance(),
    })
}

fn conjunction(property: Property, first: Verdict, second: Verdict) -> Verdict {
    let holds = match (first.holds, second.holds) {
        (Holds::False, _) | (_, Holds::False) => Holds::False,
        (Holds::True, Holds::True) => Holds::True,
        _ => Holds::Unknown,
    };
    let witness = match first.holds {
        Holds::False => first.witness,
        _ => second.witness,
    };
    let mut provenance = second.provenance;
    provenance.notes.push(format!(
        "conjunction of {} and {}",
        first.property.name(),
        second.property.name()
    ));
    Verdict {
        property,
        holds,
        witness,
        provenance,
    }
}

/// Commutative piecewise testability coincides with commutativity plus
/// piecewise testability; the verdict is their conjunction.
pub fn decide_comm_pt(p: &Prepared) -> Result<Verdict, DecideError> {
    Ok(conjunction(
        Property::CommPt,
        decide_commutative(p)?,
        decide_pt(p)?,
    ))
}

pub fn decide_comm_cca(p: &Prepared) -> Result<Verdict, DecideError> {
    Ok(conjunction(
        Property::CommCcaPt,
        decide_commutative(p)?,
        decide_cca(p)?,
    ))
}

fn tree_variant(p: &Prepared, property: Property, cca: bool) -> Result<Verdict, DecideError> {
    let reduced = tree_reduction(&p.syn)?;
    let a = reduced.algebra();
    let classes = classify_elements(&reduced.morphism);
    let omega_v: Vec<usize> = (0..a.v_len()).map(|v| a.idempotent_power_v(v)).collect();
    let omega_h: Vec<usize> = (0..a.h_len()).map(|h| a.idempotent_power_h(h)).collect();
    let witness = if cca {
        let rel = piece_relation_cca(&reduced, &classes);
        let treeish: Vec<usize> = (0..a.h_len())
            .filter(|&h| classes.tree_type[h] || h == a.zero())
            .collect();
        let mut w = None;
        'outer: for u in 0..a.v_len() {
            if !classes.tree_context_type[u] {
                continue;
            }
            let e = omega_v[u];
            for v in 0..a.v_len() {
                if !classes.tree_context_type[v] || !rel.on_v(v, u) {
                    continue;
                }
                for &h in &treeish {
                    let base = a.act(e, h);
                    if a.act(a.mul(e, v), h) != base {
                        w = Some(Witness {
                            identity: IdentityKind::CcaAbsorbMid,
                            bindings: vec![bind_v(a, "u", u), bind_v(a, "v", v), bind_h(a, "h", h)],
                            lhs: side_h(a, a.act(a.mul(e, v), h)),
                            rhs: side_h(a, base),
                            realizations: Vec::new(),
                        });
                        break 'outer;
                    }
                    if a.act(a.mul(v, e), h) != base {
                        w = Some(Witness {
                            identity: IdentityKind::CcaAbsorbLeft,
                            bindings: vec![bind_v(a, "u", u), bind_v(a, "v", v), bind_h(a, "h", h)],
                            lhs: side_h(a, a.act(a.mul(v, e), h)),
                            rhs: side_h(a, base),
                            realizations: Vec::new(),
                        });
                        break 'outer;
                    }
                }
            }
        }
        if w.is_none() {
            'outer2: for h in 0..a.h_len() {
                let om = omega_h[h];
                for g in 0..a.h_len() {
                    if !rel.on_h(g, h) {
                        continue;
                    }
                    if a.plus(om, g) != om || a.plus(g, om) != om {
                        let lhs = if a.plus(om, g) != om {
                            a.plus(om, g)
                        } else {
                            a.plus(g, om)
                        };
                        w = Some(Witness {
                            identity: if a.plus(om, g) != om {
                                IdentityKind::CcaOmegaRight
                            } else {
                                IdentityKind::CcaOmegaLeft
                            },
                            bindings: vec![bind_h(a, "g", g), bind_h(a, "h", h)],
                            lhs: side_h(a, lhs),
                            rhs: side_h(a, om),
                            realizations: Vec::new(),
                        });
                        break 'outer2;
                    }
                }
            }
        }
        w
    } else {
        let rel = piece_relation_plain(&reduced);
        check_absorption(
            &reduced,
            &rel,
            &omega_v,
            (IdentityKind::PtAbsorbRight, IdentityKind::PtAbsorbLeft),
        )
    };
    let mut prov = p.provenance();
    prov.reduced_h = Some(a.h_len());
    prov.reduced_v = Some(a.v_len());
    prov.relation = Some(if cca { "cca" } else { "plain" });
    prov.notes
        .push("identities checked on the tree reduction".into());
    Ok(Verdict {
        property,
        holds: if witness.is_none() {
            Holds::True
        } else {
            Holds::False
        },
        witness,
        provenance: prov,
    })
}

/// Tree piecewise testability: the identities hold on the tree reduction
/// of the syntactic morphism. The input must recognize a tree language.
pub fn decide_tree_pt(p: &Prepared) -> Result<Verdict, DecideError> {
    tree_variant(p, Property::TreePt, false)
}

pub fn decide_tree_cca(p: &Prepared) -> Result<Verdict, DecideError> {
    tree_variant(p, Property::TreeCcaPt, true)
}

/// Experimental: absorption identities over the semantically enumerated
/// horizontal relation. A violation is a sound refutation; absence of one
/// only reports `unknown` at the bound.
pub fn decide_horizontal(p: &Prepared, bound: usize, caps: &Caps) -> Result<Verdict, DecideError> {
    let rel = piece_relation_horizontal(&p.syn, bound, caps)?;
    let witness = check_absorption(
        &p.syn,
        &rel,
        &p.omega_v,
        (
            IdentityKind::HorizontalAbsorbRight,
            IdentityKind::HorizontalAbsorbLeft,
        ),
    );
    let mut prov = p.provenance();
    prov.relation = Some("horizontal");
    prov.relation_pairs = Some(rel.len());
    prov.bound = Some(bound);
    prov.under_approximation = true;
    Ok(Verdict {
        property: Property::HorizontalPt,
        holds: if witness.is_none() {
            Holds::Unknown
        } else {
            Holds::False
        },
        witness,
        provenance: prov,
    })
}

/// Runs one property by name; the entry point used by the command line.
pub fn decide(
    p: &Prepared,
    property: Property,
    bound: usize,
    caps: &Caps,
) -> Result<Verdict, DecideError> {
    match property {
        Property::Pt => decide_pt(p),
        Property::PtAlt => decide_pt_alt(p),
        Property::CcaPt => decide_cca(p),
        Property::CcaPtAlt => decide_cca_alt(p),
        Property::Sigma1 => decide_sigma1(p),
        Property::Commutative => decide_commutative(p),
        Property::CommPt => decide_comm_pt(p),
        Property::CommCcaPt => decide_comm_cca(p),
        Property::TreePt => decide_tree_pt(p),
        Property::TreeCcaPt => decide_tree_cca(p),
        Property::HorizontalPt => decide_horizontal(p, bound, caps),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn prepared(entry: &corpus::CorpusEntry) -> Prepared {
        Prepared::from_automaton(&entry.automaton, &Caps::default()).unwrap()
    }

    #[test]
    fn accept_all_satisfies_everything() {
        let p = prepared(&corpus::accept_all_entry());
        assert_eq!(decide_pt(&p).unwrap().holds, Holds::True);
        assert_eq!(decide_pt_alt(&p).unwrap().holds, Holds::True);
        assert_eq!(decide_cca(&p).unwrap().holds, Holds::True);
        assert_eq!(decide_cca_alt(&p).unwrap().holds, Holds::True);
        assert_eq!(decide_sigma1(&p).unwrap().holds, Holds::True);
        assert_eq!(decide_commutative(&p).unwrap().holds, Holds::True);
        let h = decide_horizontal(&p, 3, &Caps::default()).unwrap();
        assert_eq!(h.holds, Holds::Unknown);
        assert!(h.witness.is_none());
    }

    #[test]
    fn sum_shape_language_fails_pt_with_replayable_witness() {
        let p = prepared(&corpus::all_trees_aa_entry());
        let verdict = decide_pt(&p).unwrap();
        assert_eq!(verdict.holds, Holds::False);
        let w = verdict.witness.expect("witness");
        assert!(w.replay(&p.syn), "witness must replay");
        // J-triviality holds, so the alternate route must fail on the
        // omega identity rather than on J-triviality.
        let alt = decide_pt_alt(&p).unwrap();
        assert_eq!(alt.holds, Holds::False);
        let aw = alt.witness.expect("witness");
        assert!(matches!(
            aw.identity,
            IdentityKind::OmegaAbsorbLeft | IdentityKind::OmegaAbsorbRight
        ));
        assert!(aw.replay(&p.syn));
        assert!(p.syn.algebra().j_report().j_trivial);
    }

    #[test]
    fn horizontal_refutes_the_sum_shape_language() {
        let p = prepared(&corpus::all_trees_aa_entry());
        let verdict = decide_horizontal(&p, 4, &Caps::default()).unwrap();
        assert_eq!(verdict.holds, Holds::False);
        assert!(verdict.witness.unwrap().replay(&p.syn));
    }

    #[test]
    fn horizontal_false_never_flips_back_at_larger_bounds() {
        let p = prepared(&corpus::all_trees_aa_entry());
        assert_eq!(
            decide_horizontal(&p, 4, &Caps::default()).unwrap().holds,
            Holds::False
        );
        assert_eq!(
            decide_horizontal(&p, 5, &Caps::default()).unwrap().holds,
            Holds::False
        );
    }

    #[test]
    fn witness_realizations_render() {
        let p = prepared(&corpus::all_trees_aa_entry());
        let verdict = decide_pt(&p).unwrap();
        let w = verdict.witness.unwrap().with_realizations(&p.syn, 5);
        assert!(!w.realizations.is_empty());
    }
}
