//! Word semimetrics and continuous Cayley graphs.
//!
//! [`WordMetric`] computes `d_S(x, y)` by breadth-first search along right
//! multiplication, bounded by a horizon. [`Gamma`] extends it to the
//! continuous Cayley graph, and [`CellSet`] represents finite unions of
//! vertices and edge segments with exact set distances.

mod cells;
mod gamma;

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex};

use num_traits::ToPrimitive;

use crate::monoids::{Element, Monoid, Quotient};
use crate::numerics::{Rational, TruncatedDistance};
use crate::spaces::{SemimetricSpace, SpaceError};

pub use cells::{gamma_set_distance, CellSet, Segment};
pub use gamma::{check_inclusion_qi, geodesic_witness, parse_point, CayleyPoint, Gamma};

/// Breadth-first search tree from one source.
#[derive(Debug)]
struct Tree {
    /// Depth and the (parent, generator) that first reached each element.
    nodes: HashMap<Element, (u32, Option<(Element, usize)>)>,
    /// The frontier emptied before the horizon: every reachable element is in
    /// `nodes`.
    exhausted: bool,
}

/// The word semimetric `d_S` of a monoid with respect to a finite generating
/// list, searched up to a horizon.
pub struct WordMetric {
    monoid: Arc<dyn Monoid>,
    generators: Vec<Element>,
    names: Vec<String>,
    /// `generators` are the monoid's own generators, so its structural word
    /// lengths apply.
    own: bool,
    horizon: u32,
    trees: Mutex<HashMap<Element, Arc<Tree>>>,
}

impl std::fmt::Debug for WordMetric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WordMetric")
            .field("monoid", &self.monoid)
            .field("generators", &self.names)
            .field("horizon", &self.horizon)
            .finish()
    }
}

impl WordMetric {
    /// Metric for the monoid's own generating set.
    pub fn new(monoid: Arc<dyn Monoid>, horizon: u32) -> Self {
        let generators = (0..monoid.generator_names().len()).map(|s| monoid.generator(s)).collect();
        let names = monoid.generator_names().to_vec();
        Self::with_generators(monoid, generators, names, horizon)
    }

    /// Metric for an arbitrary finite list of generating elements.
    pub fn with_generators(monoid: Arc<dyn Monoid>, generators: Vec<Element>, names: Vec<String>, horizon: u32) -> Self {
        let own = generators.len() == monoid.generator_names().len()
            && generators.iter().enumerate().all(|(s, g)| *g == monoid.generator(s));
        WordMetric { monoid, generators, names, own, horizon, trees: Mutex::new(HashMap::new()) }
    }

    /// Same monoid and generators with a fresh cache at another horizon.
    pub fn with_horizon(&self, horizon: u32) -> Self {
        Self::with_generators(self.monoid.clone(), self.generators.clone(), self.names.clone(), horizon)
    }

    pub fn monoid(&self) -> &Arc<dyn Monoid> {
        &self.monoid
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    pub fn mul_gen(&self, x: &Element, s: usize) -> Element {
        self.monoid.product(x, &self.generators[s])
    }

    pub fn format(&self, e: &Element) -> String {
        self.monoid.format(e)
    }

    fn tree(&self, x: &Element) -> Arc<Tree> {
        if let Some(t) = self.trees.lock().expect("cache lock").get(x) {
            return t.clone();
        }
        let tree = Arc::new(self.search(x));
        self.trees.lock().expect("cache lock").entry(x.clone()).or_insert(tree).clone()
    }

    fn search(&self, x: &Element) -> Tree {
        let mut nodes = HashMap::from([(x.clone(), (0, None))]);
        let mut frontier = vec![x.clone()];
        let mut depth = 0;
        while !frontier.is_empty() && depth < self.horizon {
            depth += 1;
            let mut next = Vec::new();
            for u in &frontier {
                for s in 0..self.generators.len() {
                    let v = self.mul_gen(u, s);
                    if !nodes.contains_key(&v) {
                        nodes.insert(v.clone(), (depth, Some((u.clone(), s))));
                        next.push(v);
                    }
                }
            }
            frontier = next;
        }
        Tree { nodes, exhausted: frontier.is_empty() }
    }

    /// Structural answer, when the monoid certifies one.
    fn fast_distance(&self, x: &Element, y: &Element) -> Option<TruncatedDistance> {
        match self.monoid.right_quotient(x, y) {
            Quotient::None => Some(TruncatedDistance::infinite()),
            Quotient::Unique(u) if self.own => {
                self.monoid.word_length(&u).map(|n| TruncatedDistance::from_int(n as u64))
            }
            _ => None,
        }
    }

    /// `d_S(x, y)`: exact when found within the horizon or certified
    /// structurally, infinite when the reachable set is exhausted or a
    /// structural certificate rules `y` out, and otherwise only known to
    /// exceed the horizon.
    pub fn word_distance(&self, x: &Element, y: &Element) -> TruncatedDistance {
        if x == y {
            return TruncatedDistance::zero();
        }
        if let Some(d) = self.fast_distance(x, y) {
            return d;
        }
        let tree = self.tree(x);
        match tree.nodes.get(y) {
            Some((d, _)) => TruncatedDistance::from_int(*d as u64),
            None if tree.exhausted => TruncatedDistance::infinite(),
            None => TruncatedDistance::UnknownAbove(Rational::from_integer(self.horizon.into())),
        }
    }

    /// A shortest word `w` (generator indices) with `x·w = y`, when the
    /// distance is finite and known.
    pub fn shortest_word(&self, x: &Element, y: &Element) -> Option<Vec<usize>> {
        if x == y {
            return Some(Vec::new());
        }
        if let (true, Quotient::Unique(u)) = (self.own, self.monoid.right_quotient(x, y)) {
            let w = self.monoid.to_word(&u);
            if self.monoid.word_length(&u) == Some(w.len()) {
                return Some(w);
            }
        }
        let tree = self.tree(x);
        tree.nodes.get(y)?;
        let mut word = Vec::new();
        let mut cur = y.clone();
        while let Some((_, Some((parent, s)))) = tree.nodes.get(&cur) {
            word.push(*s);
            cur = parent.clone();
        }
        word.reverse();
        Some(word)
    }

    /// Evaluates a generator word from `x`.
    pub fn walk(&self, x: &Element, word: &[usize]) -> Vec<Element> {
        let mut out = vec![x.clone()];
        for &s in word {
            let next = self.mul_gen(out.last().expect("nonempty"), s);
            out.push(next);
        }
        out
    }

    /// Elements `x·w` with `|w| ≤ radius`, breadth-first, with distances.
    pub fn out_ball_from(&self, x: &Element, radius: u32) -> Vec<(Element, u32)> {
        let mut seen = HashMap::from([(x.clone(), 0u32)]);
        let mut order = vec![(x.clone(), 0)];
        let mut queue = VecDeque::from([(x.clone(), 0u32)]);
        while let Some((u, d)) = queue.pop_front() {
            if d == radius {
                continue;
            }
            for s in 0..self.generators.len() {
                let v = self.mul_gen(&u, s);
                if !seen.contains_key(&v) {
                    seen.insert(v.clone(), d + 1);
                    order.push((v.clone(), d + 1));
                    queue.push_back((v, d + 1));
                }
            }
        }
        order
    }

    /// Elements `n` with `d_S(n, x) ≤ radius`, with distances.
    pub fn in_ball_to(&self, x: &Element, radius: u32) -> Result<Vec<(Element, u32)>, SpaceError> {
        if let Some(all) = self.monoid.finite_elements() {
            let mut out = Vec::new();
            for n in all {
                match self.word_distance(&n, x) {
                    TruncatedDistance::Known(d) => {
                        if let Some(d) = d.as_finite().and_then(|d| d.to_integer().to_u32()) {
                            if d <= radius {
                                out.push((n, d));
                            }
                        }
                    }
                    TruncatedDistance::UnknownAbove(b) if b >= Rational::from_integer(radius.into()) => {}
                    TruncatedDistance::UnknownAbove(_) => {
                        return Err(SpaceError::HorizonTooSmall(format!("d({}, {})", self.format(&n), self.format(x))))
                    }
                }
            }
            out.sort_by_key(|(_, d)| *d);
            return Ok(out);
        }
        if !self.own {
            return Err(SpaceError::Unsupported("in-balls for a non-standard generating set"));
        }
        let mut seen = HashMap::from([(x.clone(), 0u32)]);
        let mut order = vec![(x.clone(), 0)];
        let mut queue = VecDeque::from([(x.clone(), 0u32)]);
        while let Some((u, d)) = queue.pop_front() {
            if d == radius {
                continue;
            }
            for s in 0..self.generators.len() {
                let preds = self
                    .monoid
                    .predecessors(&u, s)
                    .ok_or(SpaceError::Unsupported("in-balls without predecessor enumeration"))?;
                for v in preds {
                    if !seen.contains_key(&v) {
                        seen.insert(v.clone(), d + 1);
                        order.push((v.clone(), d + 1));
                        queue.push_back((v, d + 1));
                    }
                }
            }
        }
        Ok(order)
    }
}

pub(crate) fn floor_radius(radius: &Rational) -> u32 {
    radius.to_integer().to_u32().unwrap_or(u32::MAX)
}

impl SemimetricSpace for WordMetric {
    type Point = Element;

    fn distance(&self, p: &Element, q: &Element) -> TruncatedDistance {
        self.word_distance(p, q)
    }

    fn out_ball(&self, center: &Element, radius: &Rational) -> Result<Vec<Element>, SpaceError> {
        Ok(self.out_ball_from(center, floor_radius(radius)).into_iter().map(|(e, _)| e).collect())
    }

    fn in_ball(&self, center: &Element, radius: &Rational) -> Result<Vec<Element>, SpaceError> {
        Ok(self.in_ball_to(center, floor_radius(radius))?.into_iter().map(|(e, _)| e).collect())
    }

    fn format_point(&self, p: &Element) -> String {
        self.format(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoids::{FiniteMonoid, FreeMonoid, RewritingMonoid};
    use crate::numerics::int;
    use crate::spaces::{ball, BallKind};

    fn free(names: &[&str]) -> WordMetric {
        WordMetric::new(Arc::new(FreeMonoid::with_names(names.iter().copied()).unwrap()), 8)
    }

    #[test]
    fn free_monoid_distances() {
        let m = free(&["a", "b"]);
        let p = |s: &str| m.monoid().parse(s).unwrap();
        assert_eq!(m.word_distance(&p("ε"), &p("ab")), TruncatedDistance::from_int(2));
        assert_eq!(m.word_distance(&p("a"), &p("b")), TruncatedDistance::infinite());
        assert_eq!(m.shortest_word(&p("a"), &p("abba")), Some(vec![1, 1, 0]));
    }

    #[test]
    fn cyclic_group_distances() {
        let z3 = FiniteMonoid::cyclic(3);
        let m = WordMetric::new(Arc::new(z3), 8);
        let p = |s: &str| m.monoid().parse(s).unwrap();
        assert_eq!(m.word_distance(&p("e"), &p("g2")), TruncatedDistance::from_int(2));
        assert_eq!(m.word_distance(&p("g2"), &p("e")), TruncatedDistance::from_int(1));
        assert_eq!(m.shortest_word(&p("g2"), &p("g")), Some(vec![0, 0]));
    }

    #[test]
    fn horizon_truncation_and_exhaustion() {
        let bicyclic = Arc::new(RewritingMonoid::bicyclic());
        let m = WordMetric::new(bicyclic.clone(), 3);
        let p = |s: &str| bicyclic.parse(s).unwrap();
        assert_eq!(m.word_distance(&p("pppp"), &p("qqqq")), TruncatedDistance::UnknownAbove(int(3)));
        assert_eq!(m.with_horizon(10).word_distance(&p("pppp"), &p("qqqq")), TruncatedDistance::from_int(8));
        assert_eq!(m.word_distance(&p("qp"), &p("ε")), TruncatedDistance::infinite());

        let zero = Arc::new(RewritingMonoid::zero_monoid());
        let m = WordMetric::new(zero.clone(), 4);
        let z = zero.parse("z").unwrap();
        assert_eq!(m.word_distance(&z, &zero.parse("a").unwrap()), TruncatedDistance::infinite());
    }

    #[test]
    fn balls_on_small_fixtures() {
        let f1 = free(&["a"]);
        let p = |s: &str| f1.monoid().parse(s).unwrap();
        assert_eq!(ball(&f1, &p("ε"), &int(2), BallKind::Out).unwrap(), vec![p("ε"), p("a"), p("aa")]);
        assert_eq!(ball(&f1, &p("a"), &int(1), BallKind::In).unwrap(), vec![p("a"), p("ε")]);
        let z3 = WordMetric::new(Arc::new(FiniteMonoid::cyclic(3)), 8);
        let e = z3.monoid().identity();
        assert_eq!(ball(&z3, &e, &int(2), BallKind::Strong).unwrap().len(), 3);
        assert_eq!(ball(&z3, &e, &int(1), BallKind::Strong).unwrap(), vec![e]);
    }

    #[test]
    fn radius_rounding() {
        use crate::numerics::ratio;
        assert_eq!((floor_radius(&ratio(5, 2)), floor_radius(&int(2))), (2, 2));
    }
}
