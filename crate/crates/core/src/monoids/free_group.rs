use super::free::check_names;
use super::{Element, Letter, Monoid, MonoidError, Quotient};

/// Free group of rank `k`, generated as a monoid by `x1…xk` and their
/// inverses `X1…Xk`. Elements are freely reduced words.
#[derive(Debug, Clone)]
pub struct FreeGroup {
    rank: usize,
    names: Vec<String>,
}

impl FreeGroup {
    /// Positive generators are the given names; inverse names are the
    /// upper-cased names, or `name⁻` when upper-casing changes nothing.
    pub fn new<S: Into<String>>(positive: impl IntoIterator<Item = S>) -> Result<Self, MonoidError> {
        let mut names: Vec<String> = positive.into_iter().map(Into::into).collect();
        let rank = names.len();
        for i in 0..rank {
            let upper = names[i].to_uppercase();
            names.push(if upper == names[i] { format!("{}⁻", names[i]) } else { upper });
        }
        check_names(&names)?;
        Ok(FreeGroup { rank, names })
    }

    pub fn inverse_letter(&self, l: Letter) -> Letter {
        (l + self.rank) % (2 * self.rank)
    }

    pub fn inverse(&self, e: &Element) -> Element {
        Element(e.0.iter().rev().map(|&l| self.inverse_letter(l as usize) as u32).collect())
    }

    /// Embeds a positive word, e.g. an element of the free monoid on the
    /// same alphabet.
    pub fn positive_word(&self, word: &[Letter]) -> Element {
        debug_assert!(word.iter().all(|&l| l < self.rank));
        Element::from_letters(word)
    }
}

impl Monoid for FreeGroup {
    fn generator_names(&self) -> &[String] {
        &self.names
    }

    fn identity(&self) -> Element {
        Element::default()
    }

    fn generator(&self, s: Letter) -> Element {
        Element(vec![s as u32])
    }

    fn product(&self, u: &Element, v: &Element) -> Element {
        let mut w = u.0.clone();
        for &l in &v.0 {
            match w.last() {
                Some(&last) if self.inverse_letter(last as usize) == l as usize => {
                    w.pop();
                }
                _ => w.push(l),
            }
        }
        Element(w)
    }

    fn validate(&self, e: &Element) -> Result<(), MonoidError> {
        let bad = e.letters().any(|l| l >= self.names.len())
            || e.0.windows(2).any(|p| self.inverse_letter(p[0] as usize) == p[1] as usize);
        if bad {
            Err(MonoidError::InvalidElement(format!("{e:?}")))
        } else {
            Ok(())
        }
    }

    fn to_word(&self, e: &Element) -> Vec<Letter> {
        e.letters().collect()
    }

    fn right_quotient(&self, x: &Element, y: &Element) -> Quotient {
        Quotient::Unique(self.product(&self.inverse(x), y))
    }

    fn word_length(&self, e: &Element) -> Option<usize> {
        Some(e.len())
    }

    fn predecessors(&self, y: &Element, s: Letter) -> Option<Vec<Element>> {
        Some(vec![self.product(y, &self.generator(self.inverse_letter(s)))])
    }
}
