use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Zero};

use super::{floor_radius, CayleyPoint, Gamma};
use crate::monoids::{Element, Monoid};
use crate::numerics::{format_rational, parse_rational, Decision, ExtNonNeg, Rational, TruncatedDistance};
use crate::spaces::SpaceError;

/// The closure of the open-edge points `(base, gen, μ)` with
/// `lo ≤ μ ≤ hi`. An endpoint at 0 or 1 stands for the limit of edge points,
/// not for the adjacent vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub base: Element,
    pub gen: usize,
    pub lo: Rational,
    pub hi: Rational,
}

impl Segment {
    pub fn new(base: Element, gen: usize, lo: Rational, hi: Rational) -> Result<Self, SpaceError> {
        if lo < Rational::zero() || hi > Rational::one() || lo > hi {
            return Err(SpaceError::InvalidParams(format!(
                "segment [{}, {}] is not inside [0, 1]",
                format_rational(&lo),
                format_rational(&hi)
            )));
        }
        if lo == hi && (lo.is_zero() || lo.is_one()) {
            return Err(SpaceError::InvalidParams("degenerate segment at an edge end".into()));
        }
        Ok(Segment { base, gen, lo, hi })
    }

    pub fn whole(base: Element, gen: usize) -> Self {
        Segment { base, gen, lo: Rational::zero(), hi: Rational::one() }
    }

    fn same_edge(&self, other: &Segment) -> bool {
        self.base == other.base && self.gen == other.gen
    }

    fn gap(&self, other: &Segment) -> Rational {
        let a = &other.lo - &self.hi;
        let b = &self.lo - &other.hi;
        std::cmp::max(std::cmp::max(a, b), Rational::zero())
    }
}

/// A finite union of vertices and closed edge segments of `Γ_S(M)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CellSet {
    vertices: BTreeSet<Element>,
    /// Sorted, with segments on one edge disjoint.
    segments: Vec<Segment>,
}

impl CellSet {
    pub fn new(vertices: impl IntoIterator<Item = Element>, segments: Vec<Segment>) -> Self {
        let mut by_edge: BTreeMap<(Element, usize), Vec<(Rational, Rational)>> = BTreeMap::new();
        for s in segments {
            by_edge.entry((s.base, s.gen)).or_default().push((s.lo, s.hi));
        }
        let mut merged = Vec::new();
        for ((base, gen), mut ivs) in by_edge {
            ivs.sort();
            let mut cur: Option<(Rational, Rational)> = None;
            for (lo, hi) in ivs {
                cur = match cur {
                    Some((clo, chi)) if lo <= chi => Some((clo, std::cmp::max(chi, hi))),
                    Some((clo, chi)) => {
                        merged.push(Segment { base: base.clone(), gen, lo: clo, hi: chi });
                        Some((lo, hi))
                    }
                    None => Some((lo, hi)),
                };
            }
            if let Some((lo, hi)) = cur {
                merged.push(Segment { base: base.clone(), gen, lo, hi });
            }
        }
        CellSet { vertices: vertices.into_iter().collect(), segments: merged }
    }

    pub fn vertex(m: Element) -> Self {
        CellSet::new([m], Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.segments.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Element> {
        self.vertices.iter()
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn union(&self, other: &CellSet) -> CellSet {
        CellSet::new(
            self.vertices.iter().chain(&other.vertices).cloned(),
            self.segments.iter().chain(&other.segments).cloned().collect(),
        )
    }

    /// The left translate `m·A`.
    pub fn translate(&self, monoid: &dyn Monoid, m: &Element) -> CellSet {
        CellSet::new(
            self.vertices.iter().map(|v| monoid.product(m, v)),
            self.segments
                .iter()
                .map(|s| Segment { base: monoid.product(m, &s.base), gen: s.gen, lo: s.lo.clone(), hi: s.hi.clone() })
                .collect(),
        )
    }

    /// Membership of a point in the closure.
    pub fn contains(&self, p: &CayleyPoint) -> bool {
        match p {
            CayleyPoint::Vertex(m) => self.vertices.contains(m),
            CayleyPoint::Edge { base, gen, mu } => self
                .segments
                .iter()
                .any(|s| s.base == *base && s.gen == *gen && s.lo <= *mu && *mu <= s.hi),
        }
    }

    /// Whether `d(self, other) = 0`, decided without computing distances:
    /// every zero candidate of the set distance identifies two vertices or
    /// vertex-limits, or overlaps two segments of one edge.
    pub fn touches(&self, gamma: &Gamma, other: &CellSet) -> bool {
        let mut starts: HashMap<&Element, Vec<usize>> = HashMap::new();
        let mut edges: HashMap<(&Element, usize), Vec<&Segment>> = HashMap::new();
        for t in &other.segments {
            if t.lo.is_zero() {
                starts.entry(&t.base).or_default().push(t.gen);
            }
            edges.entry((&t.base, t.gen)).or_default().push(t);
        }
        let hits = |a: &Element, except: Option<(&Element, usize)>| {
            other.vertices.contains(a)
                || starts
                    .get(a)
                    .is_some_and(|gens| gens.iter().any(|&y| except != Some((a, y))))
        };
        if self.vertices.iter().any(|u| hits(u, None)) {
            return true;
        }
        self.segments.iter().any(|s| {
            let edge = Some((&s.base, s.gen));
            (s.lo.is_zero() && hits(&s.base, edge))
                || (s.hi.is_one() && hits(&gamma.metric().mul_gen(&s.base, s.gen), edge))
                || edges
                    .get(&(&s.base, s.gen))
                    .is_some_and(|ts| ts.iter().any(|t| s.gap(t).is_zero()))
        })
    }

    /// Strong ball of `radius` around the vertex `x0`.
    pub fn strong_ball(gamma: &Gamma, x0: &Element, radius: &Rational) -> Result<CellSet, SpaceError> {
        let metric = gamma.metric();
        let r_dist = TruncatedDistance::Known(ExtNonNeg::finite(radius.clone()).map_err(|e| SpaceError::InvalidParams(e.to_string()))?);
        let undecided = |what: String| SpaceError::HorizonTooSmall(format!("strong ball membership: {what}"));
        // Some(d) when d < radius, None when certainly d ≥ radius
        let below = |d: TruncatedDistance, what: &dyn Fn() -> String| -> Result<Option<Rational>, SpaceError> {
            match r_dist.le(&d) {
                Decision::Holds => Ok(None),
                Decision::Violated => Ok(Some(d.known().and_then(ExtNonNeg::as_finite).cloned().expect("finite"))),
                Decision::Undecided => Err(undecided(what())),
            }
        };
        let mut vertices = Vec::new();
        let mut segments = Vec::new();
        for (n, dout) in metric.out_ball_from(x0, floor_radius(radius)) {
            let back = metric.word_distance(&n, x0);
            match back.le(&r_dist) {
                Decision::Holds => vertices.push(n.clone()),
                Decision::Violated => {}
                Decision::Undecided => return Err(undecided(format!("d({}, x0) = {back}", metric.format(&n)))),
            }
            let dout = Rational::from_integer(dout.into());
            if dout >= *radius {
                continue;
            }
            let out_hi = std::cmp::min(Rational::one(), radius - &dout);
            let stay = below(back.clone(), &|| format!("d({}, x0) = {back}", metric.format(&n)))?;
            for y in 0..metric.generators().len() {
                if let Some(b) = &stay {
                    // ν ≤ R − d(n, x0)
                    let hi = std::cmp::min(out_hi.clone(), radius - b);
                    segments.push(Segment { base: n.clone(), gen: y, lo: Rational::zero(), hi });
                }
                let ny = metric.mul_gen(&n, y);
                let through = metric.word_distance(&ny, x0);
                // ν ≥ 1 + d(ny, x0) − R
                if let Some(c) = below(through.clone(), &|| format!("d({}, x0) = {through}", metric.format(&ny)))? {
                    let lo = std::cmp::max(Rational::zero(), Rational::one() + c - radius);
                    let nonempty = if lo.is_zero() { true } else { lo <= out_hi && lo < Rational::one() };
                    if nonempty {
                        segments.push(Segment { base: n.clone(), gen: y, lo, hi: out_hi.clone() });
                    }
                }
            }
        }
        Ok(CellSet::new(vertices, segments))
    }

    /// Out-ball of `radius` around the vertex `x0`. Needs no horizon: the
    /// breadth-first search runs to depth `⌊radius⌋`.
    pub fn out_ball(gamma: &Gamma, x0: &Element, radius: &Rational) -> CellSet {
        let metric = gamma.metric();
        let mut vertices = Vec::new();
        let mut segments = Vec::new();
        for (n, d) in metric.out_ball_from(x0, floor_radius(radius)) {
            let d = Rational::from_integer(d.into());
            if d < *radius {
                let hi = std::cmp::min(Rational::one(), radius - &d);
                for y in 0..metric.generators().len() {
                    segments.push(Segment { base: n.clone(), gen: y, lo: Rational::zero(), hi: hi.clone() });
                }
            }
            vertices.push(n);
        }
        CellSet::new(vertices, segments)
    }

    /// Vertices as `v:<word>`, segments as `s:<word>:<gen>:<lo>:<hi>`.
    pub fn to_strings(&self, gamma: &Gamma) -> Vec<String> {
        let metric = gamma.metric();
        self.vertices
            .iter()
            .map(|v| format!("v:{}", metric.format(v)))
            .chain(self.segments.iter().map(|s| {
                format!(
                    "s:{}:{}:{}:{}",
                    metric.format(&s.base),
                    metric.generator_names()[s.gen],
                    format_rational(&s.lo),
                    format_rational(&s.hi)
                )
            }))
            .collect()
    }

    /// Inverse of [`CellSet::to_strings`]; `v:` and `s:` items only.
    pub fn parse(gamma: &Gamma, items: &[&str]) -> Result<CellSet, SpaceError> {
        let metric = gamma.metric();
        let bad = |t: &str, why: String| SpaceError::InvalidParams(format!("cell `{t}`: {why}"));
        let mut vertices = Vec::new();
        let mut segments = Vec::new();
        for &item in items {
            if let Some(w) = item.strip_prefix("v:") {
                vertices.push(metric.monoid().parse(w).map_err(|e| bad(item, e.to_string()))?);
            } else if let Some(rest) = item.strip_prefix("s:") {
                let parts: Vec<&str> = rest.rsplitn(4, ':').collect();
                let [hi, lo, gen, word] = parts[..] else {
                    return Err(bad(item, "expected s:<word>:<gen>:<lo>:<hi>".into()));
                };
                let gen = metric
                    .generator_names()
                    .iter()
                    .position(|g| g == gen)
                    .ok_or_else(|| bad(item, "unknown generator".into()))?;
                let base = metric.monoid().parse(word).map_err(|e| bad(item, e.to_string()))?;
                let lo = parse_rational(lo).map_err(|e| bad(item, e.to_string()))?;
                let hi = parse_rational(hi).map_err(|e| bad(item, e.to_string()))?;
                segments.push(Segment::new(base, gen, lo, hi)?);
            } else {
                return Err(bad(item, "expected `v:` or `s:` prefix".into()));
            }
        }
        Ok(CellSet::new(vertices, segments))
    }
}

fn seg_to_vertex(gamma: &Gamma, s: &Segment, n: &Element) -> TruncatedDistance {
    let via_base = gamma.vertex_distance(&s.base, n).add_rational(&s.lo);
    let end = gamma.metric().mul_gen(&s.base, s.gen);
    let via_end = gamma.vertex_distance(&end, n).add_rational(&(Rational::one() - &s.hi));
    via_base.min(&via_end)
}

/// `inf { d(a,b) | a ∈ A, b ∈ B }` over the closures, exact: the distance
/// is affine in each edge offset, so the infimum is attained at one of
/// finitely many endpoint or overlap configurations.
pub fn gamma_set_distance(gamma: &Gamma, a: &CellSet, b: &CellSet) -> TruncatedDistance {
    if a.is_empty() || b.is_empty() {
        return TruncatedDistance::infinite();
    }
    if a.touches(gamma, b) {
        return TruncatedDistance::zero();
    }
    let mut best = TruncatedDistance::infinite();
    for u in &a.vertices {
        for v in &b.vertices {
            best = best.min(&gamma.vertex_distance(u, v));
        }
        for t in &b.segments {
            best = best.min(&gamma.vertex_distance(u, &t.base).add_rational(&t.lo));
        }
    }
    for s in &a.segments {
        let mut to_vertex: HashMap<&Element, TruncatedDistance> = HashMap::new();
        for v in &b.vertices {
            let d = to_vertex.entry(v).or_insert_with(|| seg_to_vertex(gamma, s, v));
            best = best.min(d);
        }
        for t in &b.segments {
            if s.same_edge(t) {
                best = best.min(&TruncatedDistance::Known(ExtNonNeg::finite(s.gap(t)).expect("nonnegative")));
            } else {
                let d = to_vertex.entry(&t.base).or_insert_with(|| seg_to_vertex(gamma, s, &t.base));
                best = best.min(&d.add_rational(&t.lo));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::cayley::WordMetric;
    use crate::monoids::{FiniteMonoid, FreeMonoid};
    use crate::numerics::{int, ratio};

    fn f1() -> Gamma {
        Gamma::new(WordMetric::new(Arc::new(FreeMonoid::with_names(["a"]).unwrap()), 8))
    }

    #[test]
    fn strong_unit_ball_in_free_monoid() {
        let g = f1();
        let e = g.monoid().identity();
        let b = CellSet::strong_ball(&g, &e, &int(1)).unwrap();
        assert_eq!(b.to_strings(&g), ["v:ε", "s:ε:a:0:1"]);
        let a = g.monoid().parse("a").unwrap();
        let aa = g.monoid().parse("aa").unwrap();
        assert_eq!(gamma_set_distance(&g, &b, &b.translate(g.monoid(), &a)), TruncatedDistance::zero());
        assert_eq!(gamma_set_distance(&g, &b, &b.translate(g.monoid(), &aa)), TruncatedDistance::from_int(1));
        assert_eq!(gamma_set_distance(&g, &b, &b), TruncatedDistance::zero());
    }

    #[test]
    fn strong_unit_ball_in_cyclic_group() {
        let g = Gamma::new(WordMetric::new(Arc::new(FiniteMonoid::cyclic(3)), 8));
        let e = g.monoid().identity();
        let b = CellSet::strong_ball(&g, &e, &int(1)).unwrap();
        assert_eq!(b.to_strings(&g), ["v:e", "s:e:g:0:1"]);
        let g2 = g.monoid().parse("g2").unwrap();
        assert_eq!(gamma_set_distance(&g, &b, &b.translate(g.monoid(), &g2)), TruncatedDistance::from_int(1));
        let b2 = CellSet::strong_ball(&g, &e, &int(2)).unwrap();
        assert_eq!(b2.vertices().count(), 3);
    }

    #[test]
    fn fractional_radius_ball() {
        let g = f1();
        let e = g.monoid().identity();
        let b = CellSet::strong_ball(&g, &e, &ratio(1, 2)).unwrap();
        assert_eq!(b.to_strings(&g), ["v:ε", "s:ε:a:0:1/2"]);
        let c = CellSet::out_ball(&g, &e, &ratio(5, 2));
        assert_eq!(c.to_strings(&g), ["v:ε", "v:a", "v:aa", "s:ε:a:0:1", "s:a:a:0:1", "s:aa:a:0:1/2"]);
    }

    #[test]
    fn normalization_merges_overlaps() {
        let e = Element::default();
        let c = CellSet::new(
            [],
            vec![
                Segment::new(e.clone(), 0, ratio(1, 2), int(1)).unwrap(),
                Segment::new(e.clone(), 0, int(0), ratio(1, 2)).unwrap(),
                Segment::new(e.clone(), 1, int(0), ratio(1, 4)).unwrap(),
            ],
        );
        assert_eq!(c.segments().len(), 2);
        assert_eq!(c.segments()[0], Segment::whole(e, 0));
        assert!(Segment::new(Element::default(), 0, int(1), int(1)).is_err());
    }

    #[test]
    fn loop_edges_do_not_fake_contact() {
        // on a loop edge both ends are the same vertex, but two segments of
        // the edge are still compared by offset
        let m: Arc<dyn Monoid> = Arc::new(FiniteMonoid::cyclic(1));
        let metric = WordMetric::with_generators(m.clone(), vec![m.identity()], vec!["e".into()], 4);
        let g = Gamma::new(metric);
        let e = m.identity();
        let a = CellSet::new([], vec![Segment::new(e.clone(), 0, ratio(9, 10), int(1)).unwrap()]);
        let b = CellSet::new([], vec![Segment::new(e, 0, int(0), ratio(1, 10)).unwrap()]);
        assert!(!a.touches(&g, &b));
        assert_eq!(
            gamma_set_distance(&g, &a, &b),
            TruncatedDistance::Known(ExtNonNeg::finite(ratio(4, 5)).unwrap())
        );
    }
}
