//! Finitely generated monoids given behaviorally.
//!
//! A [`Monoid`] exposes its generators, a product on canonical encodings and
//! optional structural shortcuts (right quotients, word lengths, inverse
//! neighbours). Universal properties such as cancellativity are only ever
//! checked on word-length balls; see [`checks`].

pub mod checks;
pub mod config;
mod finite;
mod free;
mod free_group;
mod free_product;
mod rewriting;
mod submonoid;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use finite::FiniteMonoid;
pub use free::FreeMonoid;
pub use free_group::FreeGroup;
pub use free_product::{free_product_normal_form, FreeProduct, FreeProductElem};
pub use rewriting::{rewrite_normal_form, RewritingMonoid, RewritingSystem, DEFAULT_STEP_CAP};
pub use submonoid::SubmonoidSpec;

/// Index of a generator in a monoid's ordered alphabet.
pub type Letter = usize;

/// Canonical encoding of a monoid element.
///
/// For word-based monoids this is the normal-form word over the generators;
/// for table monoids it is the single table index.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Element(pub Vec<u32>);

impl Element {
    pub fn from_letters(letters: &[Letter]) -> Self {
        Element(letters.iter().map(|&l| l as u32).collect())
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.0.iter().map(|&l| l as Letter)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonoidError {
    #[error("invalid element encoding {0}")]
    InvalidElement(String),
    #[error("invalid letter `{0}`")]
    InvalidLetter(String),
    #[error("rewriting did not terminate within {0} steps")]
    NonTerminating(usize),
    #[error("{0}")]
    Validation(String),
}

/// Answer of a structural right-division query `x·u = y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Quotient {
    /// `u` is the unique solution.
    Unique(Element),
    /// Certified: no `u` satisfies `x·u = y`.
    None,
    /// The monoid has no shortcut for this pair.
    Unknown,
}

pub trait Monoid: Send + Sync + fmt::Debug {
    fn generator_names(&self) -> &[String];

    fn identity(&self) -> Element;

    fn generator(&self, s: Letter) -> Element;

    /// Product of two valid encodings.
    fn product(&self, u: &Element, v: &Element) -> Element;

    fn validate(&self, e: &Element) -> Result<(), MonoidError>;

    /// Value of a word over the generators.
    fn evaluate(&self, word: &[Letter]) -> Result<Element, MonoidError> {
        let mut acc = self.identity();
        for &s in word {
            if s >= self.generator_names().len() {
                return Err(MonoidError::InvalidLetter(s.to_string()));
            }
            acc = self.mul_generator(&acc, s);
        }
        Ok(acc)
    }

    /// Some word over the generators whose value is `e`.
    fn to_word(&self, e: &Element) -> Vec<Letter>;

    fn multiply(&self, u: &Element, v: &Element) -> Result<Element, MonoidError> {
        self.validate(u)?;
        self.validate(v)?;
        Ok(self.product(u, v))
    }

    fn mul_generator(&self, u: &Element, s: Letter) -> Element {
        self.product(u, &self.generator(s))
    }

    /// Structural solution of `x·u = y`, when the monoid knows one.
    fn right_quotient(&self, _x: &Element, _y: &Element) -> Quotient {
        Quotient::Unknown
    }

    /// Length of a shortest generator word for `e`, when structurally known.
    fn word_length(&self, _e: &Element) -> Option<usize> {
        None
    }

    /// All elements, for monoids that are finite and enumerated.
    fn finite_elements(&self) -> Option<Vec<Element>> {
        None
    }

    /// All `x` with `x·s = y`, when computable.
    fn predecessors(&self, _y: &Element, _s: Letter) -> Option<Vec<Element>> {
        None
    }

    fn format(&self, e: &Element) -> String {
        format_word(self.generator_names(), &self.to_word(e))
    }

    fn parse(&self, text: &str) -> Result<Element, MonoidError> {
        let word = parse_word(self.generator_names(), text)?;
        self.evaluate(&word)
    }
}

pub const IDENTITY_SYMBOL: &str = "ε";

/// Prints a word by juxtaposing generator names, separating them with `.`
/// when some name is longer than one character.
pub fn format_word(names: &[String], word: &[Letter]) -> String {
    if word.is_empty() {
        return IDENTITY_SYMBOL.to_string();
    }
    let sep = if names.iter().all(|n| n.chars().count() == 1) {
        ""
    } else {
        "."
    };
    word.iter()
        .map(|&l| names[l].as_str())
        .collect::<Vec<_>>()
        .join(sep)
}

/// Reads a word: `ε` or the empty string is the empty word; tokens may be
/// separated by whitespace, `.`, `*` or `·`; unseparated text is split by
/// greedy longest match against the generator names.
pub fn parse_word(names: &[String], text: &str) -> Result<Vec<Letter>, MonoidError> {
    let text = text.trim();
    if text.is_empty() || text == IDENTITY_SYMBOL {
        return Ok(Vec::new());
    }
    let mut word = Vec::new();
    for chunk in text.split(|c: char| c.is_whitespace() || c == '.' || c == '*' || c == '·') {
        if chunk.is_empty() || chunk == IDENTITY_SYMBOL {
            continue;
        }
        let mut rest = chunk;
        while !rest.is_empty() {
            let best = names
                .iter()
                .enumerate()
                .filter(|(_, n)| !n.is_empty() && rest.starts_with(n.as_str()))
                .max_by_key(|(i, n)| (n.len(), std::cmp::Reverse(*i)));
            match best {
                Some((i, n)) => {
                    word.push(i);
                    rest = &rest[n.len()..];
                }
                None => return Err(MonoidError::InvalidLetter(rest.to_string())),
            }
        }
    }
    Ok(word)
}

/// Elements of the out-ball of radius `radius` around the identity, in
/// breadth-first discovery order, each with its word length.
pub fn identity_ball(monoid: &dyn Monoid, radius: u32) -> Vec<(Element, u32)> {
    ball_from(monoid, &monoid.identity(), radius)
}

/// Elements `x·w` with `|w| ≤ radius`, breadth-first, with distances from `x`.
pub fn ball_from(monoid: &dyn Monoid, x: &Element, radius: u32) -> Vec<(Element, u32)> {
    let mut seen: HashMap<Element, u32> = HashMap::new();
    let mut order = vec![(x.clone(), 0)];
    seen.insert(x.clone(), 0);
    let mut queue = VecDeque::from([(x.clone(), 0u32)]);
    let gens = monoid.generator_names().len();
    while let Some((u, depth)) = queue.pop_front() {
        if depth == radius {
            continue;
        }
        for s in 0..gens {
            let v = monoid.mul_generator(&u, s);
            if !seen.contains_key(&v) {
                seen.insert(v.clone(), depth + 1);
                order.push((v.clone(), depth + 1));
                queue.push_back((v, depth + 1));
            }
        }
    }
    order
}

/// Status of a property checked exhaustively on a finite search space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    HoldsAtHorizon,
    Fails,
}

impl Status {
    pub fn holds(self) -> bool {
        self == Status::HoldsAtHorizon
    }

    pub fn from_failures(failed: bool) -> Self {
        if failed {
            Status::Fails
        } else {
            Status::HoldsAtHorizon
        }
    }
}

/// A violated equation among concrete elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraWitness {
    /// Human-readable form of the violated law, e.g. `m·a = m·b with a ≠ b`.
    pub law: String,
    /// Named elements participating in the witness, in a law-specific order.
    pub elements: Vec<(String, Element)>,
}

impl AlgebraWitness {
    pub fn get(&self, name: &str) -> Option<&Element> {
        self.elements.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }
}

/// Result of a ball-restricted algebraic check.
#[derive(Debug, Clone)]
pub struct AlgebraVerdict {
    pub property: &'static str,
    pub status: Status,
    pub horizon: u32,
    pub witnesses: Vec<AlgebraWitness>,
    /// Number of elements in the searched ball.
    pub searched: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_parsing() {
        let names: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        assert_eq!(parse_word(&names, "ab").unwrap(), vec![0, 1]);
        assert_eq!(parse_word(&names, "ε").unwrap(), Vec::<Letter>::new());
        assert_eq!(parse_word(&names, "a b.a").unwrap(), vec![0, 1, 0]);
        assert!(parse_word(&names, "ac").is_err());
        let names: Vec<String> = ["f1", "f2", "f"].iter().map(|s| s.to_string()).collect();
        assert_eq!(parse_word(&names, "f1f2f").unwrap(), vec![0, 1, 2]);
        assert_eq!(format_word(&names, &[0, 2]), "f1.f");
    }
}
