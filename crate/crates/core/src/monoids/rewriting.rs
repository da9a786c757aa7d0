use super::free::check_names;
use super::{parse_word, Element, Letter, Monoid, MonoidError, Quotient};

pub const DEFAULT_STEP_CAP: usize = 100_000;

/// A finite string rewriting system with non-length-increasing rules.
#[derive(Debug, Clone)]
pub struct RewritingSystem {
    rules: Vec<(Vec<Letter>, Vec<Letter>)>,
    step_cap: usize,
    max_lhs: usize,
}

impl RewritingSystem {
    pub fn new(rules: Vec<(Vec<Letter>, Vec<Letter>)>) -> Result<Self, MonoidError> {
        for (lhs, rhs) in &rules {
            if lhs.is_empty() {
                return Err(MonoidError::Validation("rule with empty left-hand side".into()));
            }
            if rhs.len() > lhs.len() {
                return Err(MonoidError::Validation(format!(
                    "rule {lhs:?} -> {rhs:?} increases length"
                )));
            }
        }
        let max_lhs = rules.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
        Ok(RewritingSystem { rules, step_cap: DEFAULT_STEP_CAP, max_lhs })
    }

    pub fn with_step_cap(mut self, cap: usize) -> Self {
        self.step_cap = cap;
        self
    }

    pub fn rules(&self) -> &[(Vec<Letter>, Vec<Letter>)] {
        &self.rules
    }

    /// Leftmost match: smallest start position, ties broken by rule order.
    fn find_match(&self, word: &[Letter], from: usize) -> Option<(usize, usize)> {
        (from..word.len()).find_map(|pos| {
            self.rules
                .iter()
                .position(|(lhs, _)| word[pos..].starts_with(lhs))
                .map(|r| (pos, r))
        })
    }

    pub fn normal_form(&self, word: &[Letter]) -> Result<Vec<Letter>, MonoidError> {
        let mut w = word.to_vec();
        let mut from = 0;
        let mut steps = 0;
        while let Some((pos, r)) = self.find_match(&w, from) {
            steps += 1;
            if steps > self.step_cap {
                return Err(MonoidError::NonTerminating(self.step_cap));
            }
            let (lhs, rhs) = &self.rules[r];
            w.splice(pos..pos + lhs.len(), rhs.iter().copied());
            // no match started before `pos` previously
            from = pos.saturating_sub(self.max_lhs.saturating_sub(1));
        }
        Ok(w)
    }

    pub fn is_irreducible(&self, word: &[Letter]) -> bool {
        self.find_match(word, 0).is_none()
    }

    /// Longest prefix of `word` that no rewrite of `word·v` can ever touch:
    /// none of its non-empty suffixes is a proper prefix of a left-hand side.
    fn protected_prefix_len(&self, word: &[Letter]) -> usize {
        (0..=word.len())
            .rev()
            .find(|&n| {
                let u = &word[..n];
                (1..=n).all(|k| {
                    let suffix = &u[n - k..];
                    self.rules
                        .iter()
                        .all(|(lhs, _)| !(lhs.len() > k && lhs.starts_with(suffix)))
                })
            })
            .unwrap_or(0)
    }

    fn erases(&self) -> bool {
        self.rules.iter().any(|(_, rhs)| rhs.is_empty())
    }
}

/// Fixpoint of leftmost rewriting under `rules`.
pub fn rewrite_normal_form(rules: &RewritingSystem, word: &[Letter]) -> Result<Vec<Letter>, MonoidError> {
    rules.normal_form(word)
}

/// Monoid presented by generators and a rewriting system asserted to be
/// confluent; elements are irreducible words.
#[derive(Debug, Clone)]
pub struct RewritingMonoid {
    names: Vec<String>,
    system: RewritingSystem,
}

impl RewritingMonoid {
    pub fn new(names: Vec<String>, system: RewritingSystem) -> Result<Self, MonoidError> {
        check_names(&names)?;
        if let Some(bad) = system
            .rules
            .iter()
            .flat_map(|(l, r)| l.iter().chain(r))
            .find(|&&l| l >= names.len())
        {
            return Err(MonoidError::InvalidLetter(bad.to_string()));
        }
        Ok(RewritingMonoid { names, system })
    }

    /// Builds the system from rules written as strings over the generator names.
    pub fn from_strings<S: AsRef<str>>(names: &[S], rules: &[(S, S)]) -> Result<Self, MonoidError> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let rules = rules
            .iter()
            .map(|(l, r)| Ok((parse_word(&names, l.as_ref())?, parse_word(&names, r.as_ref())?)))
            .collect::<Result<Vec<_>, MonoidError>>()?;
        Self::new(names, RewritingSystem::new(rules)?)
    }

    /// Bicyclic monoid `⟨p, q | pq = 1⟩`.
    pub fn bicyclic() -> Self {
        Self::from_strings(&["p", "q"], &[("pq", "")]).expect("valid presentation")
    }

    /// `⟨a, z | az = z, za = z, zz = z⟩`: free on `a` with an adjoined zero `z`.
    pub fn zero_monoid() -> Self {
        Self::from_strings(&["a", "z"], &[("az", "z"), ("za", "z"), ("zz", "z")]).expect("valid presentation")
    }

    pub fn system(&self) -> &RewritingSystem {
        &self.system
    }

    fn reduce(&self, word: Vec<Letter>) -> Element {
        Element::from_letters(&self.system.normal_form(&word).expect("rewriting terminates"))
    }
}

impl Monoid for RewritingMonoid {
    fn generator_names(&self) -> &[String] {
        &self.names
    }

    fn identity(&self) -> Element {
        Element::default()
    }

    fn generator(&self, s: Letter) -> Element {
        self.reduce(vec![s])
    }

    fn product(&self, u: &Element, v: &Element) -> Element {
        self.reduce(u.letters().chain(v.letters()).collect())
    }

    fn validate(&self, e: &Element) -> Result<(), MonoidError> {
        let word: Vec<Letter> = e.letters().collect();
        if word.iter().any(|&l| l >= self.names.len()) || !self.system.is_irreducible(&word) {
            return Err(MonoidError::InvalidElement(format!("{e:?}")));
        }
        Ok(())
    }

    fn evaluate(&self, word: &[Letter]) -> Result<Element, MonoidError> {
        if let Some(&bad) = word.iter().find(|&&l| l >= self.names.len()) {
            return Err(MonoidError::InvalidLetter(bad.to_string()));
        }
        Ok(Element::from_letters(&self.system.normal_form(word)?))
    }

    fn to_word(&self, e: &Element) -> Vec<Letter> {
        e.letters().collect()
    }

    fn right_quotient(&self, x: &Element, y: &Element) -> Quotient {
        let xw: Vec<Letter> = x.letters().collect();
        let keep = self.system.protected_prefix_len(&xw);
        let yw: Vec<Letter> = y.letters().collect();
        if !yw.starts_with(&xw[..keep]) {
            return Quotient::None;
        }
        if !xw.is_empty() && yw.is_empty() && !self.system.erases() {
            return Quotient::None;
        }
        Quotient::Unknown
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nf(m: &RewritingMonoid, w: &str) -> String {
        m.format(&m.parse(w).unwrap())
    }

    #[test]
    fn bicyclic_examples() {
        let b = RewritingMonoid::bicyclic();
        assert_eq!(nf(&b, "pqp"), "p");
        assert_eq!(nf(&b, ""), "ε");
        assert_eq!(nf(&b, "ppqq"), "ε");
        assert_eq!(nf(&b, "qpqp"), "qp");
    }

    #[test]
    fn zero_monoid_examples() {
        let z = RewritingMonoid::zero_monoid();
        assert_eq!(nf(&z, "aza"), "z");
        assert_eq!(nf(&z, "aaa"), "aaa");
    }

    #[test]
    fn step_cap_is_enforced() {
        // a -> b, b -> a never terminates
        let sys = RewritingSystem::new(vec![(vec![0], vec![1]), (vec![1], vec![0])])
            .unwrap()
            .with_step_cap(50);
        assert_eq!(rewrite_normal_form(&sys, &[0]), Err(MonoidError::NonTerminating(50)));
    }

    #[test]
    fn rejects_length_increasing_rules() {
        assert!(RewritingSystem::new(vec![(vec![0], vec![0, 0])]).is_err());
    }

    #[test]
    fn protected_prefix_certificates() {
        let b = RewritingMonoid::bicyclic();
        let p = |s: &str| b.parse(s).unwrap();
        // q^a p^b · w always starts with q^a
        assert_eq!(b.right_quotient(&p("qp"), &p("")), Quotient::None);
        assert_eq!(b.right_quotient(&p("qqp"), &p("qp")), Quotient::None);
        assert_eq!(b.right_quotient(&p("qp"), &p("q")), Quotient::Unknown);
        let z = RewritingMonoid::zero_monoid();
        let a = z.parse("a").unwrap();
        assert_eq!(z.right_quotient(&a, &z.identity()), Quotient::None);
    }
}
