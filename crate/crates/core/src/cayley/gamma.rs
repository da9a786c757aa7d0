use std::fmt;

use num_traits::{One, Signed, Zero};

use super::WordMetric;
use crate::monoids::{Element, Monoid};
use crate::numerics::{format_rational, parse_rational, ExtNonNeg, Rational, TruncatedDistance};
use crate::spaces::{
    check_qi_embedding, check_strong_cover, EmbeddingParams, PathWitness, SemimetricSpace, SpaceError,
    ViolationReport,
};

/// A point of the continuous Cayley graph: a vertex, or the point at offset
/// `mu ∈ (0,1)` on the edge from `base` to `base·s`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CayleyPoint {
    Vertex(Element),
    Edge { base: Element, gen: usize, mu: Rational },
}

impl CayleyPoint {
    pub fn edge(base: Element, gen: usize, mu: Rational) -> Result<Self, SpaceError> {
        if !mu.is_positive() || mu >= Rational::one() {
            return Err(SpaceError::InvalidParams(format!(
                "edge offset {} is not strictly between 0 and 1",
                format_rational(&mu)
            )));
        }
        Ok(CayleyPoint::Edge { base, gen, mu })
    }

    /// The vertex of a vertex, or the base of an edge point.
    pub fn base(&self) -> &Element {
        match self {
            CayleyPoint::Vertex(m) | CayleyPoint::Edge { base: m, .. } => m,
        }
    }

    /// Left translation `p·(m,x,μ) = (pm,x,μ)`.
    pub fn translate(&self, monoid: &dyn Monoid, by: &Element) -> CayleyPoint {
        match self {
            CayleyPoint::Vertex(n) => CayleyPoint::Vertex(monoid.product(by, n)),
            CayleyPoint::Edge { base, gen, mu } => {
                CayleyPoint::Edge { base: monoid.product(by, base), gen: *gen, mu: mu.clone() }
            }
        }
    }
}

impl fmt::Debug for CayleyPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CayleyPoint::Vertex(m) => write!(f, "v:{m:?}"),
            CayleyPoint::Edge { base, gen, mu } => write!(f, "e:{base:?}:{gen}:{}", format_rational(mu)),
        }
    }
}

/// The continuous Cayley graph `Γ_S(M)` over a word metric.
#[derive(Debug)]
pub struct Gamma {
    metric: WordMetric,
}

impl Gamma {
    pub fn new(metric: WordMetric) -> Self {
        Gamma { metric }
    }

    pub fn metric(&self) -> &WordMetric {
        &self.metric
    }

    pub fn monoid(&self) -> &dyn Monoid {
        self.metric.monoid().as_ref()
    }

    pub fn vertex_distance(&self, m: &Element, n: &Element) -> TruncatedDistance {
        self.metric.word_distance(m, n)
    }

    /// `d((m,x,μ), n) = min(μ + d(m,n), (1−μ) + d(mx,n))`.
    pub(crate) fn edge_to_vertex(&self, m: &Element, x: usize, mu: &Rational, n: &Element) -> TruncatedDistance {
        let via_base = self.vertex_distance(m, n).add_rational(mu);
        let via_end = self.vertex_distance(&self.metric.mul_gen(m, x), n).add_rational(&(Rational::one() - mu));
        via_base.min(&via_end)
    }

    /// The five-case distance.
    pub fn gamma_distance(&self, p: &CayleyPoint, q: &CayleyPoint) -> TruncatedDistance {
        use CayleyPoint::*;
        match (p, q) {
            (Vertex(m), Vertex(n)) => self.vertex_distance(m, n),
            (Vertex(m), Edge { base: n, mu: nu, .. }) => self.vertex_distance(m, n).add_rational(nu),
            (Edge { base: m, gen: x, mu }, Vertex(n)) => self.edge_to_vertex(m, *x, mu, n),
            (Edge { base: m, gen: x, mu }, Edge { base: n, gen: y, mu: nu }) => {
                if m == n && x == y {
                    TruncatedDistance::Known(ExtNonNeg::finite((mu - nu).abs()).expect("absolute value"))
                } else {
                    self.edge_to_vertex(m, *x, mu, n).add_rational(nu)
                }
            }
        }
    }

    /// Vertices of the out-ball of `radius` around the identity, plus the
    /// edge points at each offset in `offsets` on every edge leaving them.
    pub fn sample(&self, radius: u32, offsets: &[Rational]) -> Result<Vec<CayleyPoint>, SpaceError> {
        let e = self.monoid().identity();
        let vertices: Vec<Element> = self.metric.out_ball_from(&e, radius).into_iter().map(|(m, _)| m).collect();
        let mut points: Vec<CayleyPoint> = vertices.iter().cloned().map(CayleyPoint::Vertex).collect();
        for m in &vertices {
            for s in 0..self.metric.generators().len() {
                for mu in offsets {
                    points.push(CayleyPoint::edge(m.clone(), s, mu.clone())?);
                }
            }
        }
        Ok(points)
    }

    pub fn format_point(&self, p: &CayleyPoint) -> String {
        match p {
            CayleyPoint::Vertex(m) => format!("v:{}", self.metric.format(m)),
            CayleyPoint::Edge { base, gen, mu } => format!(
                "e:{}:{}:{}/{}",
                self.metric.format(base),
                self.metric.generator_names()[*gen],
                mu.numer(),
                mu.denom()
            ),
        }
    }
}

impl SemimetricSpace for Gamma {
    type Point = CayleyPoint;

    fn distance(&self, p: &CayleyPoint, q: &CayleyPoint) -> TruncatedDistance {
        self.gamma_distance(p, q)
    }

    fn format_point(&self, p: &CayleyPoint) -> String {
        Gamma::format_point(self, p)
    }
}

/// Reads `v:<word>` or `e:<word>:<gen>:<num>/<den>`.
pub fn parse_point(gamma: &Gamma, text: &str) -> Result<CayleyPoint, SpaceError> {
    let bad = |why: &str| SpaceError::InvalidParams(format!("point `{text}`: {why}"));
    let parse_elem = |w: &str| gamma.monoid().parse(w).map_err(|e| bad(&e.to_string()));
    if let Some(w) = text.strip_prefix("v:") {
        return Ok(CayleyPoint::Vertex(parse_elem(w)?));
    }
    let rest = text.strip_prefix("e:").ok_or_else(|| bad("expected `v:` or `e:` prefix"))?;
    let mut parts = rest.rsplitn(3, ':');
    let (mu, gen, word) = match (parts.next(), parts.next(), parts.next()) {
        (Some(mu), Some(gen), Some(word)) => (mu, gen, word),
        _ => return Err(bad("expected e:<word>:<gen>:<num>/<den>")),
    };
    let gen = gamma
        .metric()
        .generator_names()
        .iter()
        .position(|g| g == gen)
        .ok_or_else(|| bad("unknown generator"))?;
    let mu = parse_rational(mu).map_err(|e| bad(&e.to_string()))?;
    CayleyPoint::edge(parse_elem(word)?, gen, mu)
}

/// Checks that `M → Γ_S(M)` preserves all vertex distances on the out-ball
/// of `radius` around the identity, and that every sampled edge point lies
/// in the strong 1-ball of its base vertex.
pub fn check_inclusion_qi(
    gamma: &Gamma,
    radius: u32,
    offsets: &[Rational],
) -> Result<ViolationReport<CayleyPoint>, SpaceError> {
    let e = gamma.monoid().identity();
    let ball: Vec<Element> = gamma.metric().out_ball_from(&e, radius).into_iter().map(|(m, _)| m).collect();
    let pairs: Vec<(Element, CayleyPoint)> = ball.iter().map(|m| (m.clone(), CayleyPoint::Vertex(m.clone()))).collect();
    let isometric = EmbeddingParams::tight(Rational::one(), Rational::zero())?;
    let mut report = check_qi_embedding(&pairs, gamma.metric(), gamma, &isometric)?.map_points(|(_, p)| p.clone());
    for m in &ball {
        let base = [CayleyPoint::Vertex(m.clone())];
        let edges: Vec<CayleyPoint> = (0..gamma.metric().generators().len())
            .flat_map(|s| offsets.iter().map(move |mu| CayleyPoint::edge(m.clone(), s, mu.clone())))
            .collect::<Result<_, _>>()?;
        report = report.combine(check_strong_cover(gamma, &base, &edges, &Rational::one())?);
    }
    Ok(report)
}

/// The path through the vertices of a shortest word from `x` to `y`, at
/// integer times.
pub fn geodesic_witness(gamma: &Gamma, x: &Element, y: &Element) -> Result<PathWitness<CayleyPoint>, SpaceError> {
    let metric = gamma.metric();
    let word = metric.shortest_word(x, y).ok_or_else(|| {
        SpaceError::NoPath(format!(
            "d({}, {}) = {}",
            metric.format(x),
            metric.format(y),
            metric.word_distance(x, y)
        ))
    })?;
    let steps = metric
        .walk(x, &word)
        .into_iter()
        .enumerate()
        .map(|(t, v)| (Rational::from_integer((t as i64).into()), CayleyPoint::Vertex(v)))
        .collect();
    PathWitness::new(steps)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::monoids::{FiniteMonoid, FreeMonoid};
    use crate::numerics::{int, ratio, Decision};
    use crate::spaces::validate_path_witness;

    fn gamma(m: impl Monoid + 'static) -> Gamma {
        Gamma::new(WordMetric::new(Arc::new(m), 8))
    }

    fn known(p: i64, q: i64) -> TruncatedDistance {
        TruncatedDistance::Known(ExtNonNeg::finite(ratio(p, q)).unwrap())
    }

    #[test]
    fn five_cases() {
        let g = gamma(FreeMonoid::with_names(["a"]).unwrap());
        let e = g.monoid().identity();
        let a = g.monoid().parse("a").unwrap();
        let v = |m: &Element| CayleyPoint::Vertex(m.clone());
        let pt = |m: &Element, mu| CayleyPoint::edge(m.clone(), 0, mu).unwrap();
        assert_eq!(g.gamma_distance(&v(&e), &pt(&e, ratio(1, 3))), known(1, 3));
        assert_eq!(g.gamma_distance(&pt(&e, ratio(1, 3)), &v(&a)), known(2, 3));
        assert_eq!(g.gamma_distance(&pt(&e, ratio(1, 4)), &pt(&e, ratio(3, 4))), known(1, 2));
        assert_eq!(g.gamma_distance(&pt(&e, ratio(3, 4)), &pt(&e, ratio(1, 4))), known(1, 2));
        assert_eq!(g.gamma_distance(&pt(&a, ratio(1, 2)), &pt(&e, ratio(1, 2))), TruncatedDistance::infinite());
        assert_eq!(g.gamma_distance(&pt(&e, ratio(1, 2)), &pt(&a, ratio(1, 4))), known(3, 4));
    }

    #[test]
    fn point_text_form() {
        let g = gamma(FreeMonoid::with_names(["a", "b"]).unwrap());
        for text in ["v:ab", "v:ε", "e:ab:b:1/3", "e:ε:a:1/2"] {
            let p = parse_point(&g, text).unwrap();
            assert_eq!(g.format_point(&p), text);
        }
        assert!(parse_point(&g, "e:a:b:1/1").is_err());
        assert!(parse_point(&g, "x:a").is_err());
    }

    #[test]
    fn geodesics() {
        let g = gamma(FreeMonoid::with_names(["a", "b"]).unwrap());
        let p = |s: &str| g.monoid().parse(s).unwrap();
        let w = geodesic_witness(&g, &p("ε"), &p("ab")).unwrap();
        let texts: Vec<String> = w.points().map(|q| g.format_point(q)).collect();
        assert_eq!(texts, ["v:ε", "v:a", "v:ab"]);
        let r = validate_path_witness(&g, &w).unwrap();
        assert!(r.report.passed());
        assert_eq!(r.geodesic, Decision::Holds);
        assert!(matches!(geodesic_witness(&g, &p("a"), &p("b")), Err(SpaceError::NoPath(_))));

        let z3 = gamma(FiniteMonoid::cyclic(3));
        let p = |s: &str| z3.monoid().parse(s).unwrap();
        let w = geodesic_witness(&z3, &p("g2"), &p("g")).unwrap();
        let texts: Vec<String> = w.points().map(|q| z3.format_point(q)).collect();
        assert_eq!(texts, ["v:g2", "v:e", "v:g"]);
        assert_eq!(w.length(), &int(2));
    }

    #[test]
    fn edge_path_is_valid() {
        let g = gamma(FreeMonoid::with_names(["a"]).unwrap());
        let e = g.monoid().identity();
        let a = g.monoid().parse("a").unwrap();
        let w = PathWitness::new(vec![
            (int(0), CayleyPoint::Vertex(e.clone())),
            (ratio(1, 2), CayleyPoint::edge(e, 0, ratio(1, 2)).unwrap()),
            (int(1), CayleyPoint::Vertex(a)),
        ])
        .unwrap();
        assert!(validate_path_witness(&g, &w).unwrap().report.passed());
    }

    #[test]
    fn inclusion_is_isometric_and_dense() {
        let offsets = [ratio(1, 3), ratio(1, 2), ratio(5, 6)];
        let g = gamma(FreeMonoid::with_names(["a", "b"]).unwrap());
        assert!(check_inclusion_qi(&g, 4, &offsets).unwrap().passed());
        let z3 = gamma(FiniteMonoid::cyclic(3));
        assert!(check_inclusion_qi(&z3, 3, &offsets).unwrap().passed());
        let trivial = gamma(FiniteMonoid::cyclic(1));
        assert!(check_inclusion_qi(&trivial, 3, &offsets).unwrap().passed());
    }

    #[test]
    fn loop_edge_offsets_break_the_triangle_inequality() {
        let m: Arc<dyn Monoid> = Arc::new(FiniteMonoid::cyclic(1));
        let g = Gamma::new(WordMetric::with_generators(m.clone(), vec![m.identity()], vec!["e".into()], 4));
        let e = m.identity();
        let p = CayleyPoint::edge(e.clone(), 0, ratio(9, 10)).unwrap();
        let q = CayleyPoint::edge(e.clone(), 0, ratio(1, 10)).unwrap();
        let direct = g.gamma_distance(&p, &q);
        let via = g.gamma_distance(&p, &CayleyPoint::Vertex(e.clone())).add(&g.gamma_distance(&CayleyPoint::Vertex(e), &q));
        assert_eq!(direct, TruncatedDistance::Known(ExtNonNeg::finite(ratio(4, 5)).unwrap()));
        assert_eq!(direct.le(&via), Decision::Violated);
    }
}
