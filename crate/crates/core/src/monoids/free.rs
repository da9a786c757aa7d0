use super::{Element, Letter, Monoid, MonoidError, Quotient};

/// Free monoid on an ordered alphabet; elements are words.
#[derive(Debug, Clone)]
pub struct FreeMonoid {
    names: Vec<String>,
}

impl FreeMonoid {
    /// Rank-`r` free monoid on `f1…fr` (or `f` when `r = 1`).
    pub fn new(rank: usize) -> Self {
        let names = match rank {
            1 => vec!["f".to_string()],
            _ => (1..=rank).map(|i| format!("f{i}")).collect(),
        };
        FreeMonoid { names }
    }

    pub fn with_names<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, MonoidError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        check_names(&names)?;
        Ok(FreeMonoid { names })
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }
}

pub(super) fn check_names(names: &[String]) -> Result<(), MonoidError> {
    for (i, n) in names.iter().enumerate() {
        if n.is_empty() || n == super::IDENTITY_SYMBOL {
            return Err(MonoidError::Validation(format!("invalid generator name `{n}`")));
        }
        if names[..i].contains(n) {
            return Err(MonoidError::Validation(format!("duplicate generator name `{n}`")));
        }
    }
    Ok(())
}

impl Monoid for FreeMonoid {
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
        w.extend_from_slice(&v.0);
        Element(w)
    }

    fn mul_generator(&self, u: &Element, s: Letter) -> Element {
        let mut w = u.0.clone();
        w.push(s as u32);
        Element(w)
    }

    fn validate(&self, e: &Element) -> Result<(), MonoidError> {
        match e.letters().find(|&l| l >= self.names.len()) {
            Some(_) => Err(MonoidError::InvalidElement(format!("{e:?}"))),
            None => Ok(()),
        }
    }

    fn evaluate(&self, word: &[Letter]) -> Result<Element, MonoidError> {
        let e = Element::from_letters(word);
        self.validate(&e).map_err(|_| MonoidError::InvalidLetter(format!("{word:?}")))?;
        Ok(e)
    }

    fn to_word(&self, e: &Element) -> Vec<Letter> {
        e.letters().collect()
    }

    /// `x·u = y` iff `x` is a prefix of `y`.
    fn right_quotient(&self, x: &Element, y: &Element) -> Quotient {
        if y.0.starts_with(&x.0) {
            Quotient::Unique(Element(y.0[x.len()..].to_vec()))
        } else {
            Quotient::None
        }
    }

    fn word_length(&self, e: &Element) -> Option<usize> {
        Some(e.len())
    }

    fn predecessors(&self, y: &Element, s: Letter) -> Option<Vec<Element>> {
        Some(match y.0.last() {
            Some(&l) if l as usize == s => vec![Element(y.0[..y.len() - 1].to_vec())],
            _ => Vec::new(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_quotients() {
        let f2 = FreeMonoid::with_names(["a", "b"]).unwrap();
        let a = f2.parse("a").unwrap();
        let ab = f2.parse("ab").unwrap();
        let b = f2.parse("b").unwrap();
        assert_eq!(f2.right_quotient(&a, &ab), Quotient::Unique(b.clone()));
        assert_eq!(f2.right_quotient(&a, &b), Quotient::None);
        assert_eq!(f2.format(&ab), "ab");
        assert_eq!(f2.format(&f2.identity()), "ε");
    }

    #[test]
    fn default_names() {
        assert_eq!(FreeMonoid::new(2).generator_names(), &["f1", "f2"]);
        assert_eq!(FreeMonoid::new(1).generator_names(), &["f"]);
        assert!(FreeMonoid::new(0).generator_names().is_empty());
    }
}
