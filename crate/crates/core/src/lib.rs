//! Finite forest algebras and decision procedures for piecewise testable
//! forest and tree languages.
//!
//! The crate is organized around three layers:
//!
//! * concrete syntax: [`forest`] (forests, trees, one-hole contexts),
//!   [`parse`] (text grammar) and [`relations`] (node orders and closest
//!   common ancestors);
//! * semantics at desk scale: [`pieces`] (embedding and deletion-closure
//!   piece relations in all variants) and [`oracle`] (bounded enumeration,
//!   refuters, piece-set automata);
//! * algebra: [`algebra`] (finite forest algebras, recognizers, syntactic
//!   quotients), [`piecerel`] (piece relations on algebra elements computed
//!   as rule fixpoints) and [`decide`] (identity-based classification with
//!   witnesses).
//!
//! [`corpus`] bundles the example languages used by the test suite and the
//! command line tool.

// Indexed loops over parallel dense tables are the prevailing style here.
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod caps;
pub mod corpus;
pub mod decide;
pub mod forest;
pub mod oracle;
pub mod parse;
pub mod piecerel;
pub mod pieces;
pub mod relations;

pub use caps::Caps;
pub use forest::{Alphabet, AlphabetError, Context, Forest, Label, NodeId, Spine, Tree};
pub use parse::{parse_context, parse_forest, ParseError};
pub use pieces::{Embedding, PieceVariant};
pub use relations::NodeTable;

pub use algebra::automaton::ForestAutomaton;
pub use algebra::morphism::{Morphism, Recognizer};
pub use algebra::ForestAlgebra;
pub use decide::{Holds, Property, Verdict, Witness};
pub use piecerel::PieceRelation;
