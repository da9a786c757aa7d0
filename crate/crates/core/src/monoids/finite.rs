use std::collections::VecDeque;

use super::free::check_names;
use super::{Element, Letter, Monoid, MonoidError, Quotient};

/// A finite monoid given by its multiplication table.
///
/// Elements are encoded by table index. The generating set is a list of
/// element indices; when not supplied, non-identity elements are added in
/// table order until they generate everything.
#[derive(Debug, Clone)]
pub struct FiniteMonoid {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    generators: Vec<usize>,
    generator_names: Vec<String>,
    /// Shortest generator word for each element, found breadth-first.
    words: Vec<Vec<Letter>>,
    inverses: Option<Vec<usize>>,
}

impl FiniteMonoid {
    pub fn from_table(
        names: Vec<String>,
        table: Vec<Vec<usize>>,
        generators: Option<Vec<usize>>,
    ) -> Result<Self, MonoidError> {
        let n = names.len();
        if n == 0 {
            return Err(MonoidError::Validation("table has no elements".into()));
        }
        check_names(&names)?;
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(MonoidError::Validation(format!("table must be {n}×{n}")));
        }
        if let Some((i, j)) = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| table[i][j] >= n)
        {
            return Err(MonoidError::Validation(format!(
                "entry [{i}][{j}] = {} is out of range",
                table[i][j]
            )));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let left = table[table[a][b]][c];
                    let right = table[a][table[b][c]];
                    if left != right {
                        return Err(MonoidError::Validation(format!(
                            "associativity fails: ({}·{})·{} = {} but {}·({}·{}) = {}",
                            names[a], names[b], names[c], names[left], names[a], names[b], names[c], names[right]
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| MonoidError::Validation("table has no two-sided identity".into()))?;

        let generators = match generators {
            Some(g) => {
                if let Some(&bad) = g.iter().find(|&&i| i >= n) {
                    return Err(MonoidError::Validation(format!("generator index {bad} out of range")));
                }
                g
            }
            None => greedy_generators(&table, identity),
        };
        let words = shortest_words(&table, identity, &generators);
        if let Some(missing) = words.iter().position(Option::is_none) {
            return Err(MonoidError::Validation(format!(
                "generators do not generate element `{}`",
                names[missing]
            )));
        }
        let generator_names = generators.iter().map(|&i| names[i].clone()).collect();
        Ok(FiniteMonoid {
            names,
            table,
            identity,
            generators,
            generator_names,
            words: words.into_iter().map(Option::unwrap).collect(),
            inverses: None,
        })
    }

    /// A finite group: the table must be a monoid in which every element has
    /// a two-sided inverse.
    pub fn group(
        names: Vec<String>,
        table: Vec<Vec<usize>>,
        generators: Option<Vec<usize>>,
    ) -> Result<Self, MonoidError> {
        let mut m = Self::from_table(names, table, generators)?;
        let n = m.names.len();
        let mut inverses = Vec::with_capacity(n);
        for x in 0..n {
            let inv = (0..n).find(|&y| m.table[x][y] == m.identity && m.table[y][x] == m.identity);
            match inv {
                Some(y) => inverses.push(y),
                None => {
                    return Err(MonoidError::Validation(format!(
                        "element `{}` has no inverse",
                        m.names[x]
                    )))
                }
            }
        }
        m.inverses = Some(inverses);
        Ok(m)
    }

    /// Cyclic group `Z/n` on elements `e, g, g2, …` generated by `g`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let names = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g{k}"),
            })
            .collect();
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::group(names, table, None).expect("cyclic group table is valid")
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn element_names(&self) -> &[String] {
        &self.names
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    pub fn mul_index(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn is_group(&self) -> bool {
        self.inverses.is_some()
    }

    pub fn inverse_index(&self, a: usize) -> Option<usize> {
        self.inverses.as_ref().map(|inv| inv[a])
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generators
    }

    pub fn element(&self, index: usize) -> Element {
        Element(vec![index as u32])
    }

    pub fn index_of(&self, e: &Element) -> usize {
        e.0[0] as usize
    }
}

fn closure(table: &[Vec<usize>], identity: usize, gens: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; table.len()];
    seen[identity] = true;
    let mut queue = VecDeque::from([identity]);
    while let Some(x) = queue.pop_front() {
        for &g in gens {
            let y = table[x][g];
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    seen
}

fn greedy_generators(table: &[Vec<usize>], identity: usize) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut reached = closure(table, identity, &gens);
    for x in 0..table.len() {
        if reached.iter().all(|&r| r) {
            break;
        }
        if !reached[x] {
            gens.push(x);
            reached = closure(table, identity, &gens);
        }
    }
    gens
}

fn shortest_words(table: &[Vec<usize>], identity: usize, gens: &[usize]) -> Vec<Option<Vec<Letter>>> {
    let mut words: Vec<Option<Vec<Letter>>> = vec![None; table.len()];
    words[identity] = Some(Vec::new());
    let mut queue = VecDeque::from([identity]);
    while let Some(x) = queue.pop_front() {
        for (s, &g) in gens.iter().enumerate() {
            let y = table[x][g];
            if words[y].is_none() {
                let mut w = words[x].clone().expect("visited");
                w.push(s);
                words[y] = Some(w);
                queue.push_back(y);
            }
        }
    }
    words
}

impl Monoid for FiniteMonoid {
    fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    fn identity(&self) -> Element {
        self.element(self.identity)
    }

    fn generator(&self, s: Letter) -> Element {
        self.element(self.generators[s])
    }

    fn product(&self, u: &Element, v: &Element) -> Element {
        self.element(self.table[self.index_of(u)][self.index_of(v)])
    }

    fn validate(&self, e: &Element) -> Result<(), MonoidError> {
        if e.len() == 1 && (e.0[0] as usize) < self.names.len() {
            Ok(())
        } else {
            Err(MonoidError::InvalidElement(format!("{e:?}")))
        }
    }

    fn to_word(&self, e: &Element) -> Vec<Letter> {
        self.words[self.index_of(e)].clone()
    }

    fn right_quotient(&self, x: &Element, y: &Element) -> Quotient {
        let (x, y) = (self.index_of(x), self.index_of(y));
        let mut solutions = (0..self.order()).filter(|&u| self.table[x][u] == y);
        match (solutions.next(), solutions.next()) {
            (None, _) => Quotient::None,
            (Some(u), None) => Quotient::Unique(self.element(u)),
            _ => Quotient::Unknown,
        }
    }

    fn word_length(&self, e: &Element) -> Option<usize> {
        Some(self.words[self.index_of(e)].len())
    }

    fn finite_elements(&self) -> Option<Vec<Element>> {
        Some((0..self.order()).map(|i| self.element(i)).collect())
    }

    fn predecessors(&self, y: &Element, s: Letter) -> Option<Vec<Element>> {
        let (y, g) = (self.index_of(y), self.generators[s]);
        Some(
            (0..self.order())
                .filter(|&x| self.table[x][g] == y)
                .map(|x| self.element(x))
                .collect(),
        )
    }

    fn format(&self, e: &Element) -> String {
        self.names[self.index_of(e)].clone()
    }

    fn parse(&self, text: &str) -> Result<Element, MonoidError> {
        let text = text.trim();
        if let Some(i) = self.names.iter().position(|n| n == text) {
            return Ok(self.element(i));
        }
        let word = super::parse_word(&self.generator_names, text)?;
        self.evaluate(&word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_group_defaults_to_single_generator() {
        let z3 = FiniteMonoid::cyclic(3);
        assert_eq!(z3.generator_names(), &["g"]);
        let g2 = z3.parse("g2").unwrap();
        assert_eq!(z3.parse("gg").unwrap(), g2);
        assert_eq!(z3.word_length(&g2), Some(2));
        assert_eq!(z3.format(&z3.identity()), "e");
    }

    #[test]
    fn rejects_non_group_tables() {
        let names = vec!["e".to_string(), "z".to_string()];
        let table = vec![vec![0, 1], vec![1, 1]];
        assert!(FiniteMonoid::from_table(names.clone(), table.clone(), None).is_ok());
        let err = FiniteMonoid::group(names, table, None).unwrap_err();
        assert!(err.to_string().contains("no inverse"), "{err}");
    }

    #[test]
    fn rejects_non_associative_tables() {
        let names = vec!["e".to_string(), "a".to_string(), "b".to_string()];
        // a·a = b, a·b = a, b·a = b, b·b = a: (a·a)·a = b·a = b, a·(a·a) = a·b = a
        let table = vec![vec![0, 1, 2], vec![1, 2, 1], vec![2, 2, 1]];
        let err = FiniteMonoid::from_table(names, table, None).unwrap_err();
        assert!(err.to_string().contains("associativity"), "{err}");
    }

    #[test]
    fn table_lookup() {
        let z2 = FiniteMonoid::cyclic(2);
        let g = z2.parse("g").unwrap();
        assert_eq!(z2.multiply(&g, &g).unwrap(), z2.identity());
        assert!(z2.multiply(&Element(vec![7]), &g).is_err());
    }
}
