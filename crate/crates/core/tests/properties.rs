use std::sync::Arc;

use coarse_monoid::actions::{check_isometric_embedding_action, TranslationAction};
use coarse_monoid::cayley::{gamma_set_distance, CayleyPoint, CellSet, Gamma, Segment, WordMetric};
use coarse_monoid::monoids::checks::{check_cancellative, Side};
use coarse_monoid::monoids::{Element, FiniteMonoid, FreeMonoid, FreeProduct, Monoid, RewritingMonoid};
use coarse_monoid::numerics::{format_rational, parse_rational, ratio, Decision, ExtNonNeg, Rational, TruncatedDistance};
use proptest::prelude::*;

const H: u32 = 16;

fn free2() -> Gamma {
    Gamma::new(WordMetric::new(Arc::new(FreeMonoid::new(2)), H))
}

fn word() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..2, 0..5)
}

fn point() -> impl Strategy<Value = (Vec<usize>, Option<(usize, i64)>)> {
    (word(), prop::option::of((0usize..2, 1i64..8)))
}

fn build(g: &Gamma, (w, edge): &(Vec<usize>, Option<(usize, i64)>)) -> CayleyPoint {
    let base = g.monoid().evaluate(w).unwrap();
    match edge {
        None => CayleyPoint::Vertex(base),
        Some((s, k)) => CayleyPoint::edge(base, *s, ratio(*k, 8)).unwrap(),
    }
}

fn is_prefix(a: &[usize], b: &[usize]) -> bool {
    a.len() <= b.len() && b[..a.len()] == *a
}

/// Vertex distance in the free monoid: forward paths only, so the target
/// must extend the source.
fn vertex_oracle(a: &[usize], b: &[usize]) -> Option<Rational> {
    is_prefix(a, b).then(|| ratio((b.len() - a.len()) as i64, 1))
}

fn oracle(p: &(Vec<usize>, Option<(usize, i64)>), q: &(Vec<usize>, Option<(usize, i64)>)) -> Option<Rational> {
    let to_vertex = |n: &[usize]| match p {
        (w, None) => vertex_oracle(w, n),
        (w, Some((s, k))) => {
            let mut end = w.clone();
            end.push(*s);
            let back = vertex_oracle(w, n).map(|d| d + ratio(*k, 8));
            let forward = vertex_oracle(&end, n).map(|d| d + ratio(8 - k, 8));
            back.into_iter().chain(forward).min()
        }
    };
    match (p, q) {
        ((w, Some((s, k))), (v, Some((t, j)))) if w == v && s == t => Some(ratio((j - k).abs(), 8)),
        (_, (v, None)) => to_vertex(v),
        (_, (v, Some((_, j)))) => to_vertex(v).map(|d| d + ratio(*j, 8)),
    }
}

fn known(d: &TruncatedDistance) -> Option<Rational> {
    d.known().expect("free monoid distances are decided").as_finite().cloned()
}

proptest! {
    #[test]
    fn gamma_distance_matches_closed_form(p in point(), q in point()) {
        let g = free2();
        let d = g.gamma_distance(&build(&g, &p), &build(&g, &q));
        prop_assert_eq!(known(&d), oracle(&p, &q));
    }

    #[test]
    fn gamma_triangle_inequality(p in point(), q in point(), r in point()) {
        let g = free2();
        let (x, y, z) = (build(&g, &p), build(&g, &q), build(&g, &r));
        let lhs = g.gamma_distance(&x, &z);
        let rhs = g.gamma_distance(&x, &y).add(&g.gamma_distance(&y, &z));
        prop_assert_eq!(lhs.le(&rhs), Decision::Holds);
    }

    #[test]
    fn left_translation_is_isometric(p in point(), q in point(), m in word()) {
        let g = free2();
        let m = g.monoid().evaluate(&m).unwrap();
        let (x, y) = (build(&g, &p), build(&g, &q));
        let before = g.gamma_distance(&x, &y);
        let after = g.gamma_distance(&x.translate(g.monoid(), &m), &y.translate(g.monoid(), &m));
        prop_assert_eq!(before, after);
    }

    #[test]
    fn singleton_set_distance_is_point_distance(a in word(), b in word()) {
        let g = free2();
        let (u, v) = (g.monoid().evaluate(&a).unwrap(), g.monoid().evaluate(&b).unwrap());
        let d = gamma_set_distance(&g, &CellSet::vertex(u.clone()), &CellSet::vertex(v.clone()));
        prop_assert_eq!(d, g.vertex_distance(&u, &v));
    }

    #[test]
    fn touching_sets_are_at_distance_zero(
        a in word(), s in 0usize..2, lo in 0i64..8, len in 1i64..8,
        b in word(), t in 0usize..2, lo2 in 0i64..8, len2 in 1i64..8,
    ) {
        let g = free2();
        let seg = |w: &[usize], gen, l: i64, n: i64| {
            let base = g.monoid().evaluate(w).unwrap();
            Segment::new(base, gen, ratio(l, 8), ratio((l + n).min(8), 8)).unwrap()
        };
        let x = CellSet::new([], vec![seg(&a, s, lo, len)]);
        let y = CellSet::new([], vec![seg(&b, t, lo2, len2)]);
        let touches = x.touches(&g, &y);
        prop_assert_eq!(touches, gamma_set_distance(&g, &x, &y).is_zero());
        // distances along an edge only run forward to its far vertex, so
        // approaching a vertex makes contact only in one direction
        let (sa, sb) = (lo == 0 || lo + len >= 8, lo2 == 0 || lo2 + len2 >= 8);
        if a == b && s == t {
            prop_assert_eq!(touches, lo2 <= lo + len && lo <= lo2 + len2);
        } else if !sa || !sb {
            prop_assert!(!touches);
        }
    }

    #[test]
    fn rational_text_round_trips(num in -500i64..500, den in 1i64..60) {
        let r = ratio(num, den);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn truncated_order_is_consistent(a in 0u64..20, b in 0u64..20, bound in 0i64..20) {
        let (x, y) = (TruncatedDistance::from_int(a), TruncatedDistance::from_int(b));
        let expected = if a <= b { Decision::Holds } else { Decision::Violated };
        prop_assert_eq!(x.le(&y), expected);
        let unknown = TruncatedDistance::UnknownAbove(ratio(bound, 1));
        let above = if (a as i64) <= bound { Decision::Holds } else { Decision::Undecided };
        prop_assert_eq!(x.le(&unknown), above);
        prop_assert_eq!(ExtNonNeg::from_int(a).add_rational(&ratio(1, 2)).is_infinite(), false);
    }

    #[test]
    fn free_product_normal_forms(u in prop::collection::vec(0usize..3, 0..6), v in prop::collection::vec(0usize..3, 0..6), w in prop::collection::vec(0usize..3, 0..6)) {
        let fp = FreeProduct::new(1, FiniteMonoid::cyclic(2)).unwrap();
        let names = fp.generator_names().len();
        let ev = |x: &[usize]| fp.evaluate(&x.iter().map(|i| i % names).collect::<Vec<_>>()).unwrap();
        let (a, b, c) = (ev(&u), ev(&v), ev(&w));
        prop_assert_eq!(fp.compose(&fp.decompose(&a)), a.clone());
        prop_assert_eq!(fp.product(&fp.product(&a, &b), &c), fp.product(&a, &fp.product(&b, &c)));
        prop_assert_eq!(fp.parse(&fp.format(&a)).unwrap(), a);
    }
}

#[test]
fn isometric_translations_track_left_cancellativity() {
    let cases: Vec<(Arc<dyn Monoid>, bool)> = vec![
        (Arc::new(FreeMonoid::new(2)), true),
        (Arc::new(FiniteMonoid::cyclic(3)), true),
        (Arc::new(RewritingMonoid::zero_monoid()), false),
    ];
    for (monoid, expected) in cases {
        let cancellative = check_cancellative(monoid.as_ref(), Side::Left, 4).status.holds();
        let gamma = Arc::new(Gamma::new(WordMetric::new(monoid, 8)));
        let sample = gamma.sample(2, &[ratio(1, 2)]).unwrap();
        let action = TranslationAction::regular(gamma);
        let report = check_isometric_embedding_action(&action, &sample, 3).unwrap();
        assert_eq!((cancellative, report.passed()), (expected, expected));
    }
}

#[test]
fn finite_group_contact_set_generates_group() {
    use coarse_monoid::svarcmilnor::{run_svarc_milnor, SmInput};
    let z5 = Arc::new(FiniteMonoid::cyclic(5));
    let gamma = Arc::new(Gamma::new(WordMetric::new(z5.clone(), 8)));
    let action = Arc::new(TranslationAction::regular(gamma));
    let outcome = run_svarc_milnor(&SmInput::new(action.clone(), ratio(1, 1), 8).unwrap()).unwrap();
    assert!(outcome.passed());
    let s_metric = outcome.extraction.s_metric(&action, 8);
    let elements: Vec<Element> = z5.finite_elements().unwrap();
    for x in &elements {
        for y in &elements {
            assert!(s_metric.word_distance(x, y).is_finite_known());
        }
    }
}
