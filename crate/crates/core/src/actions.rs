//! Monoid actions on continuous Cayley graphs by left translation, and the
//! action properties used as Švarc-Milnor hypotheses.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::cayley::{gamma_set_distance, CayleyPoint, CellSet, Gamma, WordMetric};
use crate::monoids::{identity_ball, Element, Monoid, Quotient, SubmonoidSpec};
use crate::numerics::{Decision, Rational, TruncatedDistance};
use crate::spaces::{SpaceError, Verdict, ViolationReport, Witness, MAX_WITNESSES};

/// Left translation `m·(n,x,μ) = (mn,x,μ)`.
pub fn apply_translation(monoid: &dyn Monoid, m: &Element, p: &CayleyPoint) -> CayleyPoint {
    p.translate(monoid, m)
}

/// A monoid acting on `Γ_S(N)` by left translation through a homomorphism
/// into `N`, optionally restricted to a submonoid of the acting monoid.
#[derive(Debug)]
pub struct TranslationAction {
    acting: Arc<dyn Monoid>,
    gamma: Arc<Gamma>,
    /// Images of the acting monoid's generators in `N`; `None` for `N`
    /// acting on itself.
    images: Option<Vec<Element>>,
    restrict: Option<SubmonoidSpec>,
    acting_metric: WordMetric,
}

impl TranslationAction {
    /// `N` acting on its own Cayley graph.
    pub fn regular(gamma: Arc<Gamma>) -> Self {
        let acting = gamma.metric().monoid().clone();
        let acting_metric = WordMetric::new(acting.clone(), gamma.metric().horizon());
        TranslationAction { acting, gamma, images: None, restrict: None, acting_metric }
    }

    /// A submonoid `M ⊆ N` acting on `Γ_S(N)`.
    pub fn restricted(gamma: Arc<Gamma>, sub: SubmonoidSpec) -> Self {
        TranslationAction { restrict: Some(sub), ..Self::regular(gamma) }
    }

    /// A monoid acting through the homomorphism sending its `i`-th generator
    /// to `images[i]`.
    pub fn via_hom(acting: Arc<dyn Monoid>, gamma: Arc<Gamma>, images: Vec<Element>) -> Result<Self, SpaceError> {
        if images.len() != acting.generator_names().len() {
            return Err(SpaceError::InvalidParams(format!(
                "{} generator images for {} generators",
                images.len(),
                acting.generator_names().len()
            )));
        }
        let acting_metric = WordMetric::new(acting.clone(), gamma.metric().horizon());
        Ok(TranslationAction { acting, gamma, images: Some(images), restrict: None, acting_metric })
    }

    pub fn acting(&self) -> &Arc<dyn Monoid> {
        &self.acting
    }

    pub fn gamma(&self) -> &Arc<Gamma> {
        &self.gamma
    }

    pub fn submonoid(&self) -> Option<&SubmonoidSpec> {
        self.restrict.as_ref()
    }

    fn target(&self) -> &dyn Monoid {
        self.gamma.monoid()
    }

    /// The translating element of `N` for an acting element.
    pub fn image(&self, m: &Element) -> Element {
        match &self.images {
            None => m.clone(),
            Some(images) => self
                .acting
                .to_word(m)
                .iter()
                .fold(self.target().identity(), |acc, &s| self.target().product(&acc, &images[s])),
        }
    }

    pub fn apply(&self, m: &Element, p: &CayleyPoint) -> CayleyPoint {
        apply_translation(self.target(), &self.image(m), p)
    }

    pub fn apply_set(&self, m: &Element, set: &CellSet) -> CellSet {
        set.translate(self.target(), &self.image(m))
    }

    pub fn format_acting(&self, m: &Element) -> String {
        self.acting.format(m)
    }

    /// Acting elements of word length at most `radius`, breadth-first.
    pub fn acting_ball(&self, radius: u32) -> Vec<Element> {
        identity_ball(self.acting.as_ref(), radius)
            .into_iter()
            .map(|(m, _)| m)
            .filter(|m| self.restrict.as_ref().is_none_or(|s| s.contains(m)))
            .collect()
    }

    /// Acting elements with their word lengths.
    pub fn acting_ball_with_lengths(&self, radius: u32) -> Vec<(Element, u32)> {
        identity_ball(self.acting.as_ref(), radius)
            .into_iter()
            .filter(|(m, _)| self.restrict.as_ref().is_none_or(|s| s.contains(m)))
            .collect()
    }

    /// Whether some acting `u` satisfies `m·u = n`: decided structurally or
    /// by search, and `Undecided` when the search is inconclusive.
    pub fn divides(&self, m: &Element, n: &Element) -> Decision {
        match &self.restrict {
            None => match self.acting_metric.word_distance(m, n) {
                TruncatedDistance::Known(d) if d.is_infinite() => Decision::Violated,
                TruncatedDistance::Known(_) => Decision::Holds,
                TruncatedDistance::UnknownAbove(_) => Decision::Undecided,
            },
            Some(sub) => match self.acting.right_quotient(m, n) {
                Quotient::None => Decision::Violated,
                Quotient::Unique(u) if sub.contains(&u) => Decision::Holds,
                Quotient::Unique(_) => Decision::Violated,
                Quotient::Unknown => match self.acting_metric.shortest_word(m, n) {
                    Some(w) => {
                        let u = self.acting.evaluate(&w).expect("generator word");
                        if sub.contains(&u) {
                            Decision::Holds
                        } else {
                            Decision::Undecided
                        }
                    }
                    None => Decision::Undecided,
                },
            },
        }
    }
}

/// One entry of a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    /// An element of the acting monoid.
    Acting(Element),
    /// An element of the monoid whose Cayley graph is acted on.
    Element(Element),
    Point(CayleyPoint),
    Distance(TruncatedDistance),
    Rational(Rational),
    /// A product of acting elements.
    Factors(Vec<Element>),
    Count(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyWitness {
    pub relation: String,
    pub items: Vec<(String, Item)>,
}

impl PropertyWitness {
    pub fn new(relation: impl Into<String>, items: Vec<(&str, Item)>) -> Self {
        PropertyWitness {
            relation: relation.into(),
            items: items.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        }
    }

    pub fn get(&self, key: &str) -> Option<&Item> {
        self.items.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn from_space_witness(w: Witness<CayleyPoint>) -> Self {
        let mut items: Vec<(String, Item)> = w.points.into_iter().map(|(r, p)| (r, Item::Point(p))).collect();
        items.push(("lhs".into(), Item::Distance(w.lhs)));
        items.push(("rhs".into(), Item::Distance(w.rhs)));
        PropertyWitness { relation: w.relation, items }
    }
}

/// Outcome of an action-property check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub property: String,
    pub verdict: Verdict,
    pub horizon: u32,
    pub checked: usize,
    pub violations: usize,
    /// Instances the horizon could not decide.
    pub unresolved: usize,
    pub witnesses: Vec<PropertyWitness>,
}

impl PropertyReport {
    pub fn new(property: impl Into<String>, horizon: u32) -> Self {
        PropertyReport {
            property: property.into(),
            verdict: Verdict::Pass,
            horizon,
            checked: 0,
            violations: 0,
            unresolved: 0,
            witnesses: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn record(&mut self, decision: Decision, witness: impl FnOnce() -> PropertyWitness) {
        self.checked += 1;
        match decision {
            Decision::Holds => {}
            Decision::Violated => {
                self.violations += 1;
                self.verdict = Verdict::Fail;
                if self.witnesses.len() < MAX_WITNESSES {
                    self.witnesses.push(witness());
                }
            }
            Decision::Undecided => self.unresolved += 1,
        }
    }

    pub fn absorb(&mut self, other: PropertyReport) {
        self.checked += other.checked;
        self.violations += other.violations;
        self.unresolved += other.unresolved;
        if other.verdict == Verdict::Fail {
            self.verdict = Verdict::Fail;
        }
        let room = MAX_WITNESSES.saturating_sub(self.witnesses.len());
        self.witnesses.extend(other.witnesses.into_iter().take(room));
    }

    pub fn from_violations(property: impl Into<String>, horizon: u32, r: ViolationReport<CayleyPoint>) -> Self {
        PropertyReport {
            property: property.into(),
            verdict: r.verdict,
            horizon,
            checked: r.checked,
            violations: r.violations,
            unresolved: 0,
            witnesses: r.witnesses.into_iter().map(PropertyWitness::from_space_witness).collect(),
        }
    }

    /// Undecided instances without any violation make the answer
    /// unavailable at this horizon.
    pub fn require_decided(self) -> Result<Self, SpaceError> {
        if self.violations == 0 && self.unresolved > 0 {
            return Err(SpaceError::HorizonTooSmall(format!(
                "{}: {} instances undecided",
                self.property, self.unresolved
            )));
        }
        Ok(self)
    }
}

/// `d(mp, mq) = d(p, q)` for every acting `m` of length at most
/// `acting_radius` and all sample points `p, q`.
pub fn check_isometric_embedding_action(
    action: &TranslationAction,
    sample: &[CayleyPoint],
    acting_radius: u32,
) -> Result<PropertyReport, SpaceError> {
    let gamma = action.gamma();
    let base: Vec<Vec<TruncatedDistance>> = crate::spaces::distance_table(gamma.as_ref(), sample);
    let parts: Vec<PropertyReport> = action
        .acting_ball(acting_radius)
        .par_iter()
        .map(|m| {
            let moved: Vec<CayleyPoint> = sample.iter().map(|p| action.apply(m, p)).collect();
            let mut rep = PropertyReport::new("isometric_embedding", acting_radius);
            for (i, p) in sample.iter().enumerate() {
                for (j, q) in sample.iter().enumerate() {
                    let after = gamma.gamma_distance(&moved[i], &moved[j]);
                    rep.record(after.eq_decision(&base[i][j]), || {
                        PropertyWitness::new(
                            "d(mp, mq) = d(p, q)",
                            vec![
                                ("m", Item::Acting(m.clone())),
                                ("p", Item::Point(p.clone())),
                                ("q", Item::Point(q.clone())),
                                ("d(mp,mq)", Item::Distance(after.clone())),
                                ("d(p,q)", Item::Distance(base[i][j].clone())),
                            ],
                        )
                    });
                }
            }
            rep
        })
        .collect();
    let mut report = PropertyReport::new("isometric_embedding", acting_radius);
    parts.into_iter().for_each(|p| report.absorb(p));
    report.require_decided()
}

/// Every sample point lies in `mB` for some acting `m` of length at most
/// `acting_radius`.
pub fn check_cobounded(
    action: &TranslationAction,
    b: &CellSet,
    ambient: &[CayleyPoint],
    acting_radius: u32,
) -> PropertyReport {
    let translates: Vec<(Element, CellSet)> = action
        .acting_ball(acting_radius)
        .into_iter()
        .map(|m| {
            let mb = action.apply_set(&m, b);
            (m, mb)
        })
        .collect();
    let mut index: HashMap<&Element, Vec<usize>> = HashMap::new();
    for (k, (_, mb)) in translates.iter().enumerate() {
        for v in mb.vertices().chain(mb.segments().iter().map(|s| &s.base)) {
            let slot = index.entry(v).or_default();
            if slot.last() != Some(&k) {
                slot.push(k);
            }
        }
    }
    let mut report = PropertyReport::new("cobounded", acting_radius);
    for x in ambient {
        let covered = index
            .get(x.base())
            .is_some_and(|ks| ks.iter().any(|&k| translates[k].1.contains(x)));
        report.record(if covered { Decision::Holds } else { Decision::Violated }, || {
            PropertyWitness::new("x ∈ mB for some m", vec![("x", Item::Point(x.clone()))])
        });
    }
    report
}

/// The contact set `{m : d(B, mB) = 0}` among acting elements of length at
/// most `acting_radius`, with the separations of all other translates.
#[derive(Debug, Clone)]
pub struct ContactSet {
    pub members: Vec<Element>,
    /// `d(B, mB)` for every non-member, in ball order.
    pub separations: Vec<(Element, TruncatedDistance)>,
    /// Smallest positive separation seen, when decided.
    pub min_positive: Option<TruncatedDistance>,
    /// Some member has the maximal searched length, so the set may still
    /// grow beyond the horizon.
    pub suspect: bool,
    pub horizon: u32,
    pub report: PropertyReport,
}

pub fn compute_contact_set(action: &TranslationAction, b: &CellSet, acting_radius: u32) -> ContactSet {
    let gamma = action.gamma();
    let ball = action.acting_ball_with_lengths(acting_radius);
    let rows: Vec<(Element, u32, TruncatedDistance)> = ball
        .par_iter()
        .map(|(m, len)| {
            let mb = action.apply_set(m, b);
            let d = if b.touches(gamma, &mb) { TruncatedDistance::zero() } else { gamma_set_distance(gamma, b, &mb) };
            (m.clone(), *len, d)
        })
        .collect();
    let mut members = Vec::new();
    let mut separations = Vec::new();
    let mut suspect = false;
    let mut min_positive: Option<TruncatedDistance> = None;
    for (m, len, d) in rows {
        if d.is_zero() {
            suspect |= len == acting_radius && acting_radius > 0;
            members.push(m);
        } else {
            min_positive = Some(match min_positive {
                None => d.clone(),
                Some(cur) => cur.min(&d),
            });
            separations.push((m, d));
        }
    }
    let mut report = PropertyReport::new("contact_set", acting_radius);
    let e = action.acting().identity();
    report.record(if members.contains(&e) { Decision::Holds } else { Decision::Violated }, || {
        PropertyWitness::new("e ∈ S", vec![("e", Item::Acting(e.clone()))])
    });
    ContactSet { members, separations, min_positive, suspect, horizon: acting_radius, report }
}

/// For acting `m, n` of length at most `acting_radius` with
/// `d(m·x0, n·x0)` finite, some acting `u` has `m·u = n`. Pairs the
/// horizon cannot decide are counted as unresolved.
pub fn check_idealistic(action: &TranslationAction, x0: &CayleyPoint, acting_radius: u32) -> PropertyReport {
    let gamma = action.gamma();
    let ball = action.acting_ball(acting_radius);
    let orbit: Vec<CayleyPoint> = ball.iter().map(|m| action.apply(m, x0)).collect();
    let parts: Vec<PropertyReport> = (0..ball.len())
        .into_par_iter()
        .map(|i| {
            let mut rep = PropertyReport::new("idealistic", acting_radius);
            for j in 0..ball.len() {
                let d = gamma.gamma_distance(&orbit[i], &orbit[j]);
                if !d.is_finite_known() {
                    continue;
                }
                let (m, n) = (&ball[i], &ball[j]);
                rep.record(action.divides(m, n), || {
                    PropertyWitness::new(
                        "d(m·x0, n·x0) < ∞ implies n ∈ mM",
                        vec![
                            ("m", Item::Acting(m.clone())),
                            ("n", Item::Acting(n.clone())),
                            ("d(m·x0,n·x0)", Item::Distance(d.clone())),
                        ],
                    )
                });
            }
            rep
        })
        .collect();
    let mut report = PropertyReport::new("idealistic", acting_radius);
    parts.into_iter().for_each(|p| report.absorb(p));
    report
}

/// `apply(e, p) = p` and `apply(mn, p) = apply(m, apply(n, p))` on samples.
pub fn check_action_laws(action: &TranslationAction, sample: &[CayleyPoint], acting_radius: u32) -> PropertyReport {
    let acting = action.acting();
    let ball = action.acting_ball(acting_radius);
    let e = acting.identity();
    let mut report = PropertyReport::new("action_laws", acting_radius);
    for p in sample {
        report.record(if action.apply(&e, p) == *p { Decision::Holds } else { Decision::Violated }, || {
            PropertyWitness::new("e·p = p", vec![("p", Item::Point(p.clone()))])
        });
        for m in &ball {
            for n in &ball {
                let lhs = action.apply(&acting.product(m, n), p);
                let rhs = action.apply(m, &action.apply(n, p));
                report.record(if lhs == rhs { Decision::Holds } else { Decision::Violated }, || {
                    PropertyWitness::new(
                        "(mn)·p = m·(n·p)",
                        vec![("m", Item::Acting(m.clone())), ("n", Item::Acting(n.clone())), ("p", Item::Point(p.clone()))],
                    )
                });
            }
        }
    }
    report
}

/// Whether the recorded decision in a witness of
/// [`check_isometric_embedding_action`] still holds when recomputed.
pub fn recheck_isometry_witness(action: &TranslationAction, w: &PropertyWitness) -> bool {
    match (w.get("m"), w.get("p"), w.get("q")) {
        (Some(Item::Acting(m)), Some(Item::Point(p)), Some(Item::Point(q))) => {
            let g = action.gamma();
            let before = g.gamma_distance(p, q);
            let after = g.gamma_distance(&action.apply(m, p), &action.apply(m, q));
            after.eq_decision(&before) == Decision::Violated
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoids::{FiniteMonoid, FreeGroup, FreeMonoid, RewritingMonoid};
    use crate::numerics::{int, ratio};

    fn regular(m: impl Monoid + 'static, horizon: u32) -> TranslationAction {
        TranslationAction::regular(Arc::new(Gamma::new(WordMetric::new(Arc::new(m), horizon))))
    }

    fn midpoints(action: &TranslationAction, radius: u32) -> Vec<CayleyPoint> {
        action.gamma().sample(radius, &[ratio(1, 2)]).unwrap()
    }

    #[test]
    fn translation_examples() {
        let f2 = FreeMonoid::with_names(["a", "b"]).unwrap();
        let a = f2.parse("a").unwrap();
        let b = f2.parse("b").unwrap();
        let p = CayleyPoint::edge(f2.identity(), 1, ratio(1, 2)).unwrap();
        assert_eq!(
            apply_translation(&f2, &a, &p),
            CayleyPoint::edge(a.clone(), 1, ratio(1, 2)).unwrap()
        );
        assert_eq!(apply_translation(&f2, &f2.identity(), &p), p);
        assert_eq!(
            apply_translation(&f2, &a, &CayleyPoint::Vertex(b)),
            CayleyPoint::Vertex(f2.parse("ab").unwrap())
        );
    }

    #[test]
    fn isometric_actions() {
        let f2 = regular(FreeMonoid::with_names(["a", "b"]).unwrap(), 8);
        let sample = midpoints(&f2, 2);
        assert!(check_isometric_embedding_action(&f2, &sample, 3).unwrap().passed());
        let z3 = regular(FiniteMonoid::cyclic(3), 8);
        let sample = midpoints(&z3, 3);
        assert!(check_isometric_embedding_action(&z3, &sample, 3).unwrap().passed());
    }

    #[test]
    fn zero_monoid_action_is_not_isometric() {
        let zero = regular(RewritingMonoid::zero_monoid(), 6);
        let sample = midpoints(&zero, 2);
        let r = check_isometric_embedding_action(&zero, &sample, 2).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.witnesses.iter().all(|w| recheck_isometry_witness(&zero, w)));
    }

    #[test]
    fn coboundedness() {
        let f1 = regular(FreeMonoid::with_names(["a"]).unwrap(), 8);
        let g = f1.gamma().clone();
        let e = g.monoid().identity();
        let b = CellSet::strong_ball(&g, &e, &int(1)).unwrap();
        let ambient = g.sample(4, &[ratio(1, 3), ratio(1, 2)]).unwrap();
        assert!(check_cobounded(&f1, &b, &ambient, 4).passed());
        let r = check_cobounded(&f1, &CellSet::vertex(e.clone()), &ambient, 4);
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(
            r.witnesses[0].get("x"),
            Some(&Item::Point(CayleyPoint::edge(e, 0, ratio(1, 3)).unwrap()))
        );
    }

    #[test]
    fn contact_sets() {
        let f1 = regular(FreeMonoid::with_names(["a"]).unwrap(), 8);
        let g = f1.gamma().clone();
        let e = g.monoid().identity();
        let b = CellSet::strong_ball(&g, &e, &int(1)).unwrap();
        let c = compute_contact_set(&f1, &b, 8);
        let names: Vec<String> = c.members.iter().map(|m| g.metric().format(m)).collect();
        assert_eq!(names, ["ε", "a"]);
        assert_eq!(c.min_positive, Some(TruncatedDistance::from_int(1)));
        assert!(!c.suspect);

        let z3 = regular(FiniteMonoid::cyclic(3), 8);
        let g = z3.gamma().clone();
        let b = CellSet::strong_ball(&g, &g.monoid().identity(), &int(1)).unwrap();
        let c = compute_contact_set(&z3, &b, 8);
        let names: Vec<String> = c.members.iter().map(|m| g.metric().format(m)).collect();
        assert_eq!(names, ["e", "g"]);

        let trivial = regular(FiniteMonoid::cyclic(1), 8);
        let g = trivial.gamma().clone();
        let b = CellSet::strong_ball(&g, &g.monoid().identity(), &int(1)).unwrap();
        assert_eq!(compute_contact_set(&trivial, &b, 8).members.len(), 1);
    }

    #[test]
    fn idealistic_examples() {
        let f1 = regular(FreeMonoid::with_names(["a"]).unwrap(), 8);
        let x0 = CayleyPoint::Vertex(f1.acting().identity());
        let r = check_idealistic(&f1, &x0, 6);
        assert!(r.passed() && r.unresolved == 0);

        let z3 = regular(FiniteMonoid::cyclic(3), 8);
        let x0 = CayleyPoint::Vertex(z3.acting().identity());
        assert!(check_idealistic(&z3, &x0, 4).passed());

        // F2 acting on the Cayley graph of the free group on a, b
        let fg = Arc::new(FreeGroup::new(["a", "b"]).unwrap());
        let gamma = Arc::new(Gamma::new(WordMetric::new(fg.clone(), 8)));
        let f2: Arc<dyn Monoid> = Arc::new(FreeMonoid::with_names(["a", "b"]).unwrap());
        let images = vec![fg.generator(0), fg.generator(1)];
        let action = TranslationAction::via_hom(f2.clone(), gamma, images).unwrap();
        let x0 = CayleyPoint::Vertex(fg.identity());
        let r = check_idealistic(&action, &x0, 2);
        assert_eq!(r.verdict, Verdict::Fail);
        let (a, b) = (f2.parse("a").unwrap(), f2.parse("b").unwrap());
        assert!(r.witnesses.iter().any(|w| w.get("m") == Some(&Item::Acting(a.clone()))
            && w.get("n") == Some(&Item::Acting(b.clone()))
            && w.get("d(m·x0,n·x0)") == Some(&Item::Distance(TruncatedDistance::from_int(2)))));
    }

    #[test]
    fn action_laws_hold() {
        let fp = regular(
            crate::monoids::FreeProduct::new(1, FiniteMonoid::cyclic(2)).unwrap(),
            6,
        );
        let sample = midpoints(&fp, 2);
        assert!(check_action_laws(&fp, &sample, 2).passed());
    }
}
