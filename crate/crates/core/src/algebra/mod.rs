//! Finite forest algebras.
//!
//! A forest algebra is a pair of finite monoids: a horizontal monoid `H`
//! (written additively, unit `0`) and a vertical monoid `V` (written
//! multiplicatively, unit `box`), with a faithful monoidal left action of
//! `V` on `H` and insertion elements `(g+_)` and `(_+g)` for every `g`.
//! Tables are stored flat and indexed by element position.

pub mod automaton;
pub mod classify;
pub mod io;
pub mod morphism;
pub mod quotient;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("{what} exceeded the cap of {cap}")]
    CapExceeded { what: String, cap: usize },
    #[error("invalid recognizer file: {0}")]
    BadFile(String),
    #[error("algebra axioms violated: {0}")]
    AxiomViolation(String),
    #[error("label `{0}` is not in the alphabet")]
    UnknownLabel(String),
    #[error("accepted element `{0}` is not a tree-type; not a tree language")]
    AcceptNotTreeType(String),
    #[error("tree reduction relation is not an equivalence: {0}")]
    NotEquivalence(String),
    #[error("tree reduction relation is not a congruence: {0}")]
    NotCongruence(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// A finite forest algebra with named elements and dense operation tables.
#[derive(Debug, Clone)]
pub struct ForestAlgebra {
    h_names: Vec<String>,
    v_names: Vec<String>,
    plus: Vec<u32>,  // h_len × h_len
    mul: Vec<u32>,   // v_len × v_len, (v·w)h = v(wh)
    act: Vec<u32>,   // v_len × h_len
    ins_l: Vec<u32>, // (g+_) per g
    ins_r: Vec<u32>, // (_+g) per g
    zero: u32,
    one: u32,
}

impl ForestAlgebra {
    #[allow(clippy::too_many_arguments)]
    pub fn from_tables(
        h_names: Vec<String>,
        v_names: Vec<String>,
        plus: Vec<u32>,
        mul: Vec<u32>,
        act: Vec<u32>,
        ins_l: Vec<u32>,
        ins_r: Vec<u32>,
        zero: usize,
        one: usize,
    ) -> Self {
        let h = h_names.len();
        let v = v_names.len();
        assert_eq!(plus.len(), h * h);
        assert_eq!(mul.len(), v * v);
        assert_eq!(act.len(), v * h);
        assert_eq!(ins_l.len(), h);
        assert_eq!(ins_r.len(), h);
        ForestAlgebra {
            h_names,
            v_names,
            plus,
            mul,
            act,
            ins_l,
            ins_r,
            zero: zero as u32,
            one: one as u32,
        }
    }

    #[inline]
    pub fn h_len(&self) -> usize {
        self.h_names.len()
    }

    #[inline]
    pub fn v_len(&self) -> usize {
        self.v_names.len()
    }

    #[inline]
    pub fn plus(&self, g: usize, h: usize) -> usize {
        self.plus[g * self.h_len() + h] as usize
    }

    #[inline]
    pub fn mul(&self, v: usize, w: usize) -> usize {
        self.mul[v * self.v_len() + w] as usize
    }

    #[inline]
    pub fn act(&self, v: usize, h: usize) -> usize {
        self.act[v * self.h_len() + h] as usize
    }

    #[inline]
    pub fn ins_l(&self, g: usize) -> usize {
        self.ins_l[g] as usize
    }

    #[inline]
    pub fn ins_r(&self, g: usize) -> usize {
        self.ins_r[g] as usize
    }

    #[inline]
    pub fn zero(&self) -> usize {
        self.zero as usize
    }

    #[inline]
    pub fn one(&self) -> usize {
        self.one as usize
    }

    pub fn h_name(&self, i: usize) -> &str {
        &self.h_names[i]
    }

    pub fn v_name(&self, i: usize) -> &str {
        &self.v_names[i]
    }

    pub fn h_names(&self) -> &[String] {
        &self.h_names
    }

    pub fn v_names(&self) -> &[String] {
        &self.v_names
    }

    /// The unique idempotent in the cyclic subsemigroup generated by `v`.
    pub fn idempotent_power_v(&self, v: usize) -> usize {
        let mut p = v;
        loop {
            if self.mul(p, p) == p {
                return p;
            }
            p = self.mul(p, v);
        }
    }

    /// Additive counterpart: the idempotent among the multiples of `h`.
    pub fn idempotent_power_h(&self, h: usize) -> usize {
        let mut p = h;
        loop {
            if self.plus(p, p) == p {
                return p;
            }
            p = self.plus(p, h);
        }
    }

    /// Checks every algebra axiom; returns a list of violations, empty when
    /// the tables form a forest algebra.
    pub fn check_axioms(&self) -> Vec<String> {
        let mut out = Vec::new();
        let h = self.h_len();
        let v = self.v_len();
        // H monoid laws.
        for a in 0..h {
            if self.plus(self.zero(), a) != a || self.plus(a, self.zero()) != a {
                out.push(format!("0 is not a unit at H element {}", self.h_name(a)));
            }
            for b in 0..h {
                for c in 0..h {
                    if self.plus(self.plus(a, b), c) != self.plus(a, self.plus(b, c)) {
                        out.push(format!(
                            "+ not associative at ({}, {}, {})",
                            self.h_name(a),
                            self.h_name(b),
                            self.h_name(c)
                        ));
                    }
                }
            }
        }
        // V monoid laws.
        for a in 0..v {
            if self.mul(self.one(), a) != a || self.mul(a, self.one()) != a {
                out.push(format!("box is not a unit at V element {}", self.v_name(a)));
            }
            for b in 0..v {
                for c in 0..v {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        out.push(format!(
                            "· not associative at ({}, {}, {})",
                            self.v_name(a),
                            self.v_name(b),
                            self.v_name(c)
                        ));
                    }
                }
            }
        }
        // Monoidal action compatible with composition.
        for x in 0..h {
            if self.act(self.one(), x) != x {
                out.push(format!(
                    "box does not act as identity on {}",
                    self.h_name(x)
                ));
            }
        }
        for a in 0..v {
            for b in 0..v {
                for x in 0..h {
                    if self.act(a, self.act(b, x)) != self.act(self.mul(a, b), x) {
                        out.push(format!(
                            "action law fails at ({}, {}, {})",
                            self.v_name(a),
                            self.v_name(b),
                            self.h_name(x)
                        ));
                    }
                }
            }
        }
        // Faithfulness.
        for a in 0..v {
            for b in a + 1..v {
                if (0..h).all(|x| self.act(a, x) == self.act(b, x)) {
                    out.push(format!(
                        "action not faithful: {} and {} act alike",
                        self.v_name(a),
                        self.v_name(b)
                    ));
                }
            }
        }
        // Insertion elements.
        for g in 0..h {
            for x in 0..h {
                if self.act(self.ins_l(g), x) != self.plus(g, x) {
                    out.push(format!(
                        "(g+_) wrong at g={}, h={}",
                        self.h_name(g),
                        self.h_name(x)
                    ));
                }
                if self.act(self.ins_r(g), x) != self.plus(x, g) {
                    out.push(format!(
                        "(_+g) wrong at g={}, h={}",
                        self.h_name(g),
                        self.h_name(x)
                    ));
                }
            }
        }
        // h -> (h+_) embeds H into V.
        for g in 0..h {
            for x in 0..h {
                if self.mul(self.ins_l(g), self.ins_l(x)) != self.ins_l(self.plus(g, x)) {
                    out.push(format!(
                        "insertion is not a morphism at ({}, {})",
                        self.h_name(g),
                        self.h_name(x)
                    ));
                }
            }
        }
        out
    }

    /// The two-sided ideal order on `V` and derived J-triviality.
    pub fn j_report(&self) -> JReport {
        let v = self.v_len();
        let mut below = vec![false; v * v]; // below[m*v+n]: m ∈ VnV
        for n in 0..v {
            for a in 0..v {
                let an = self.mul(a, n);
                for b in 0..v {
                    below[self.mul(an, b) * v + n] = true;
                }
            }
        }
        let mut j_trivial = true;
        'outer: for m in 0..v {
            for n in m + 1..v {
                if below[m * v + n] && below[n * v + m] {
                    j_trivial = false;
                    break 'outer;
                }
            }
        }
        let mut identity_holds = true;
        'outer2: for n in 0..v {
            for m in 0..v {
                let e = self.idempotent_power_v(self.mul(n, m));
                if self.mul(e, n) != e || self.mul(m, e) != e {
                    identity_holds = false;
                    break 'outer2;
                }
            }
        }
        assert_eq!(
            j_trivial, identity_holds,
            "internal error: ideal order and absorption identity disagree on J-triviality"
        );
        JReport {
            below,
            v_len: v,
            j_trivial,
            identity_holds,
        }
    }
}

/// Result of the J-order computation.
#[derive(Debug, Clone)]
pub struct JReport {
    below: Vec<bool>,
    v_len: usize,
    pub j_trivial: bool,
    /// Whether `(nm)^ω n = (nm)^ω = m (nm)^ω` holds for all m, n. Coincides
    /// with J-triviality; the constructor asserts this.
    pub identity_holds: bool,
}

impl JReport {
    /// `m ≤_J n`, i.e. `m ∈ V·n·V`.
    pub fn below(&self, m: usize, n: usize) -> bool {
        self.below[m * self.v_len + n]
    }

    /// Number of J-classes.
    pub fn class_count(&self) -> usize {
        let v = self.v_len;
        let mut seen: Vec<usize> = Vec::new();
        for m in 0..v {
            if !seen.iter().any(|&r| self.below(m, r) && self.below(r, m)) {
                seen.push(m);
            }
        }
        seen.len()
    }
}
