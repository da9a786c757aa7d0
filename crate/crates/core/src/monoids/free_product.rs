use std::fmt;

use super::free::check_names;
use super::{Element, FiniteMonoid, Letter, Monoid, MonoidError, Quotient, SubmonoidSpec};

/// Free product `F * G` of a free monoid of rank `r` and a finite group.
///
/// Generators are `f1…fr` followed by the non-identity elements of `G` in
/// table order. An element is stored as its alternating normal form written
/// as a word over these generators: identity group factors are omitted, so
/// no two group letters are ever adjacent.
#[derive(Debug, Clone)]
pub struct FreeProduct {
    rank: usize,
    group: FiniteMonoid,
    names: Vec<String>,
    /// Group index of each group letter, indexed by `letter - rank`.
    letter_group: Vec<usize>,
    /// Letter of each group index; `None` for the identity.
    group_letter: Vec<Option<Letter>>,
}

/// Alternating decomposition `g0 x1 g1 … xn gn`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FreeProductElem {
    /// Group factors `g0…gn` as group table indices.
    pub group_parts: Vec<usize>,
    /// Free letters `x1…xn` as indices `0..r`.
    pub free_letters: Vec<usize>,
}

impl fmt::Debug for FreeProductElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.group_parts[0])?;
        for (x, g) in self.free_letters.iter().zip(&self.group_parts[1..]) {
            write!(f, "; f{x}; {g}")?;
        }
        write!(f, ")")
    }
}

/// A letter of a word over `{f1…fr} ∪ G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FpLetter {
    Free(usize),
    Group(usize),
}

impl FreeProduct {
    pub fn new(rank: usize, group: FiniteMonoid) -> Result<Self, MonoidError> {
        let free_names: Vec<String> = match rank {
            1 => vec!["f".to_string()],
            _ => (1..=rank).map(|i| format!("f{i}")).collect(),
        };
        Self::with_free_names(free_names, group)
    }

    pub fn with_free_names(free_names: Vec<String>, group: FiniteMonoid) -> Result<Self, MonoidError> {
        if !group.is_group() {
            return Err(MonoidError::Validation("free product factor must be a group".into()));
        }
        let rank = free_names.len();
        let mut names = free_names;
        let mut letter_group = Vec::new();
        let mut group_letter = vec![None; group.order()];
        for g in 0..group.order() {
            if g != group.identity_index() {
                group_letter[g] = Some(rank + letter_group.len());
                letter_group.push(g);
                names.push(group.element_names()[g].clone());
            }
        }
        check_names(&names)?;
        Ok(FreeProduct { rank, group, names, letter_group, group_letter })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn group(&self) -> &FiniteMonoid {
        &self.group
    }

    fn group_of(&self, letter: u32) -> Option<usize> {
        (letter as usize).checked_sub(self.rank).map(|i| self.letter_group[i])
    }

    /// The element `g ∈ G` viewed inside `F * G`.
    pub fn group_element(&self, g: usize) -> Element {
        match self.group_letter[g] {
            Some(l) => Element(vec![l as u32]),
            None => Element::default(),
        }
    }

    pub fn free_letter(&self, i: usize) -> Element {
        Element(vec![i as u32])
    }

    /// Unique alternating form of a word over `{f1…fr} ∪ G`.
    pub fn normal_form(&self, word: &[FpLetter]) -> Result<FreeProductElem, MonoidError> {
        let e = self.group.identity_index();
        let mut group_parts = vec![e];
        let mut free_letters = Vec::new();
        for &letter in word {
            match letter {
                FpLetter::Free(i) if i < self.rank => {
                    free_letters.push(i);
                    group_parts.push(e);
                }
                FpLetter::Group(g) if g < self.group.order() => {
                    let last = group_parts.last_mut().expect("nonempty");
                    *last = self.group.mul_index(*last, g);
                }
                other => return Err(MonoidError::InvalidLetter(format!("{other:?}"))),
            }
        }
        Ok(FreeProductElem { group_parts, free_letters })
    }

    pub fn decompose(&self, e: &Element) -> FreeProductElem {
        let word: Vec<FpLetter> = e
            .0
            .iter()
            .map(|&l| match self.group_of(l) {
                Some(g) => FpLetter::Group(g),
                None => FpLetter::Free(l as usize),
            })
            .collect();
        self.normal_form(&word).expect("encoded elements are valid")
    }

    pub fn compose(&self, form: &FreeProductElem) -> Element {
        let mut w = Vec::new();
        let push_group = |w: &mut Vec<u32>, g: usize| {
            if let Some(l) = self.group_letter[g] {
                w.push(l as u32);
            }
        };
        push_group(&mut w, form.group_parts[0]);
        for (x, &g) in form.free_letters.iter().zip(&form.group_parts[1..]) {
            w.push(*x as u32);
            push_group(&mut w, g);
        }
        Element(w)
    }

    /// Elements whose alternating form ends with the group identity.
    pub fn identity_ending_submonoid(&self) -> SubmonoidSpec {
        let rank = self.rank as u32;
        SubmonoidSpec::from_predicate("ends_in_identity", move |e: &Element| {
            e.0.last().is_none_or(|&l| l < rank)
        })
    }

    /// `{ g·f_i : g ∈ G, 1 ≤ i ≤ r }`, ordered by free letter then group index.
    pub fn alternating_basis(&self) -> Vec<Element> {
        let mut basis = Vec::new();
        for i in 0..self.rank {
            for g in 0..self.group.order() {
                basis.push(self.product(&self.group_element(g), &self.free_letter(i)));
            }
        }
        basis
    }
}

/// Unique alternating form of a word over `{f1…fr} ∪ G`.
pub fn free_product_normal_form(fp: &FreeProduct, word: &[FpLetter]) -> Result<FreeProductElem, MonoidError> {
    fp.normal_form(word)
}

impl Monoid for FreeProduct {
    fn generator_names(&self) -> &[String] {
        &self.names
    }

    fn identity(&self) -> Element {
        Element::default()
    }

    fn generator(&self, s: Letter) -> Element {
        Element(vec![s as u32])
    }

    /// Concatenation, re-normalized at the single junction.
    fn product(&self, u: &Element, v: &Element) -> Element {
        let (Some(&last), Some(&first)) = (u.0.last(), v.0.first()) else {
            let mut w = u.0.clone();
            w.extend_from_slice(&v.0);
            return Element(w);
        };
        let mut w = u.0.clone();
        match (self.group_of(last), self.group_of(first)) {
            (Some(g), Some(h)) => {
                w.pop();
                if let Some(l) = self.group_letter[self.group.mul_index(g, h)] {
                    w.push(l as u32);
                }
                w.extend_from_slice(&v.0[1..]);
            }
            _ => w.extend_from_slice(&v.0),
        }
        Element(w)
    }

    fn validate(&self, e: &Element) -> Result<(), MonoidError> {
        let bad = || MonoidError::InvalidElement(format!("{e:?}"));
        let mut prev_group = false;
        for &l in &e.0 {
            if l as usize >= self.names.len() {
                return Err(bad());
            }
            let is_group = self.group_of(l).is_some();
            if is_group && prev_group {
                return Err(bad());
            }
            prev_group = is_group;
        }
        Ok(())
    }

    fn to_word(&self, e: &Element) -> Vec<Letter> {
        e.letters().collect()
    }

    /// `x·u = y` iff `x` with its trailing group factor removed is a prefix
    /// of `y`; then `u = g⁻¹·rest`.
    fn right_quotient(&self, x: &Element, y: &Element) -> Quotient {
        let (stem, tail) = match x.0.last() {
            Some(&l) if self.group_of(l).is_some() => (&x.0[..x.len() - 1], self.group_of(l)),
            _ => (&x.0[..], None),
        };
        if !y.0.starts_with(stem) {
            return Quotient::None;
        }
        let rest = Element(y.0[stem.len()..].to_vec());
        let u = match tail {
            Some(g) => {
                let inv = self.group.inverse_index(g).expect("group");
                self.product(&self.group_element(inv), &rest)
            }
            None => rest,
        };
        Quotient::Unique(u)
    }

    fn word_length(&self, e: &Element) -> Option<usize> {
        Some(e.len())
    }

    fn predecessors(&self, y: &Element, s: Letter) -> Option<Vec<Element>> {
        if s < self.rank {
            return Some(match y.0.last() {
                Some(&l) if l as usize == s => vec![Element(y.0[..y.len() - 1].to_vec())],
                _ => Vec::new(),
            });
        }
        let g = self.letter_group[s - self.rank];
        let inv = self.group.inverse_index(g).expect("group");
        Some(vec![self.product(y, &self.group_element(inv))])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f1_z2() -> FreeProduct {
        FreeProduct::new(1, FiniteMonoid::cyclic(2)).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        let fp = f1_z2();
        let (f, g) = (FpLetter::Free(0), FpLetter::Group(1));
        let nf = fp.normal_form(&[g, f, g, g, f]).unwrap();
        assert_eq!(nf.group_parts, vec![1, 0, 0]);
        assert_eq!(nf.free_letters, vec![0, 0]);
        let nf = fp.normal_form(&[]).unwrap();
        assert_eq!(nf.group_parts, vec![0]);
        assert!(nf.free_letters.is_empty());
        let nf = fp.normal_form(&[f, g]).unwrap();
        assert_eq!(nf.group_parts, vec![0, 1]);
        assert_eq!(nf.free_letters, vec![0]);
        assert!(fp.normal_form(&[FpLetter::Free(3)]).is_err());
    }

    #[test]
    fn junction_normalization() {
        let fp = f1_z2();
        let g = fp.parse("g").unwrap();
        assert_eq!(fp.multiply(&g, &g).unwrap(), fp.identity());
        let gf = fp.parse("gf").unwrap();
        assert_eq!(fp.format(&fp.product(&gf, &gf)), "gfgf");
        let fg = fp.parse("fg").unwrap();
        assert_eq!(fp.format(&fp.product(&fg, &gf)), "ff");
    }

    #[test]
    fn quotient_examples() {
        let fp = f1_z2();
        let p = |s: &str| fp.parse(s).unwrap();
        assert_eq!(fp.right_quotient(&p("fg"), &p("f")), Quotient::Unique(p("g")));
        assert_eq!(fp.right_quotient(&p("g"), &p("f")), Quotient::Unique(p("gf")));
        assert_eq!(fp.right_quotient(&p("f"), &p("g")), Quotient::None);
        assert_eq!(fp.right_quotient(&p("gf"), &p("gfgf")), Quotient::Unique(p("gf")));
    }

    #[test]
    fn basis_has_rank_times_order_elements() {
        let fp = FreeProduct::new(2, FiniteMonoid::cyclic(2)).unwrap();
        let names: Vec<String> = fp.alternating_basis().iter().map(|b| fp.format(b)).collect();
        assert_eq!(names, ["f1", "g.f1", "f2", "g.f2"]);
    }

    fn arb_word() -> impl Strategy<Value = Vec<FpLetter>> {
        prop::collection::vec(
            prop_oneof![Just(FpLetter::Free(0)), (0usize..3).prop_map(FpLetter::Group)],
            0..=6,
        )
    }

    proptest! {
        // product of normal forms equals the letter-by-letter normal form
        #[test]
        fn multiplication_matches_letterwise_normal_form(u in arb_word(), v in arb_word()) {
            let fp = FreeProduct::new(1, FiniteMonoid::cyclic(3)).unwrap();
            let eu = fp.compose(&fp.normal_form(&u).unwrap());
            let ev = fp.compose(&fp.normal_form(&v).unwrap());
            let joined: Vec<FpLetter> = u.iter().chain(&v).copied().collect();
            let expected = fp.compose(&fp.normal_form(&joined).unwrap());
            prop_assert_eq!(fp.product(&eu, &ev), expected);
        }

        #[test]
        fn compose_decompose_round_trip(u in arb_word()) {
            let fp = FreeProduct::new(1, FiniteMonoid::cyclic(3)).unwrap();
            let form = fp.normal_form(&u).unwrap();
            let e = fp.compose(&form);
            prop_assert!(fp.validate(&e).is_ok());
            prop_assert_eq!(fp.decompose(&e), form);
        }
    }
}
