//! Text grammar for forests and contexts.
//!
//! ```text
//! forest := ε | item ('+' item)*
//! item   := '_' | labels [ '(' forest ')' ]
//! ```
//!
//! A `labels` token is a maximal alphanumeric word. It must either match a
//! declared label exactly, or — when every declared label is a single
//! character — it abbreviates a chain: `bc` stands for `b(c)` and
//! `ca(a+b)` for `c(a(a+b))`. `□` is accepted as an alias for the hole
//! token `_`. Rendering always emits explicit parentheses, so parsing a
//! rendered value gives the value back.

use crate::forest::{
    count_holes, h_to_context, h_to_forest, Alphabet, Context, Forest, HTree, Label,
};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("unbalanced parentheses")]
    Unbalanced,
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("empty item in forest expression")]
    EmptyItem,
    #[error("the hole `_` is only allowed in contexts")]
    HoleInForest,
    #[error("a context must contain exactly one hole, found {0}")]
    HoleCount(usize),
    #[error("the hole is a leaf and cannot have children")]
    HoleWithChildren,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Plus,
    Open,
    Close,
    Hole,
    Word(String),
}

fn lex(text: &str) -> Result<Vec<Tok>, ParseError> {
    let mut toks = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '+' => {
                chars.next();
                toks.push(Tok::Plus);
            }
            '(' => {
                chars.next();
                toks.push(Tok::Open);
            }
            ')' => {
                chars.next();
                toks.push(Tok::Close);
            }
            '_' | '\u{25A1}' => {
                chars.next();
                toks.push(Tok::Hole);
            }
            c if c.is_ascii_alphanumeric() => {
                let mut w = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() {
                        w.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Word(w));
            }
            other => return Err(ParseError::UnexpectedChar(other)),
        }
    }
    Ok(toks)
}

/// Resolves a word into a chain of labels.
fn resolve(word: &str, ab: &Alphabet) -> Result<Vec<Label>, ParseError> {
    if let Some(l) = ab.label(word) {
        return Ok(vec![l]);
    }
    if ab.all_single_char() {
        let mut out = Vec::new();
        for c in word.chars() {
            match ab.label(&c.to_string()) {
                Some(l) => out.push(l),
                None => return Err(ParseError::UnknownLabel(word.to_string())),
            }
        }
        return Ok(out);
    }
    Err(ParseError::UnknownLabel(word.to_string()))
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    ab: &'a Alphabet,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn forest(&mut self) -> Result<Vec<HTree>, ParseError> {
        let mut items = vec![self.item()?];
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            items.push(self.item()?);
        }
        Ok(items)
    }

    fn item(&mut self) -> Result<HTree, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Hole) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::Open) {
                    return Err(ParseError::HoleWithChildren);
                }
                Ok(HTree {
                    label: None,
                    children: Vec::new(),
                })
            }
            Some(Tok::Word(w)) => {
                self.pos += 1;
                let chain = resolve(&w, self.ab)?;
                let arg = if self.peek() == Some(&Tok::Open) {
                    self.pos += 1;
                    let inner = self.forest()?;
                    if self.peek() != Some(&Tok::Close) {
                        return Err(ParseError::Unbalanced);
                    }
                    self.pos += 1;
                    inner
                } else {
                    Vec::new()
                };
                let mut node = arg;
                for &l in chain.iter().rev() {
                    node = vec![HTree {
                        label: Some(l),
                        children: node,
                    }];
                }
                Ok(node.into_iter().next().expect("nonempty chain"))
            }
            Some(Tok::Plus) | Some(Tok::Close) => Err(ParseError::EmptyItem),
            Some(Tok::Open) => Err(ParseError::EmptyItem),
            None => Err(ParseError::UnexpectedEnd),
        }
    }
}

fn parse_h(text: &str, ab: &Alphabet) -> Result<Vec<HTree>, ParseError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Ok(Vec::new());
    }
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        ab,
    };
    let h = p.forest()?;
    match p.peek() {
        None => Ok(h),
        Some(Tok::Close) => Err(ParseError::Unbalanced),
        Some(_) => Err(ParseError::EmptyItem),
    }
}

pub fn parse_forest(text: &str, ab: &Alphabet) -> Result<Forest, ParseError> {
    let h = parse_h(text, ab)?;
    h_to_forest(&h).ok_or(ParseError::HoleInForest)
}

pub fn parse_context(text: &str, ab: &Alphabet) -> Result<Context, ParseError> {
    let h = parse_h(text, ab)?;
    match count_holes(&h) {
        1 => h_to_context(&h).ok_or(ParseError::HoleWithChildren),
        n => Err(ParseError::HoleCount(n)),
    }
}
