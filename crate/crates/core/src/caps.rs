//! Resource caps. Every bounded search either finishes or fails with an
//! explicit error; nothing is silently truncated.

use std::env;

#[derive(Debug, Clone)]
pub struct Caps {
    /// Cap on generated transformation-monoid elements.
    pub max_v_elements: usize,
    /// Cap on reachable automaton states during generation.
    pub max_states: usize,
    /// Cap on node subsets examined while enumerating pieces.
    pub max_subsets: usize,
    /// Cap on sibling-reordering candidates for commutative variants.
    pub max_reorderings: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_v_elements: 20_000,
            max_states: 20_000,
            max_subsets: 1_000_000,
            max_reorderings: 1_000_000,
        }
    }
}

impl Caps {
    /// Default caps, with `FORESTALG_MAX_STATES` overriding the element and
    /// state caps when set.
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Ok(v) = env::var("FORESTALG_MAX_STATES") {
            if let Ok(n) = v.trim().parse::<usize>() {
                caps.max_v_elements = n;
                caps.max_states = n;
            }
        }
        caps
    }
}
