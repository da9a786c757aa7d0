//! Generating sets and quasi-isometry constants extracted from an action by
//! isometric embeddings, with instance checks of each step of the argument.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::actions::{
    check_cobounded, check_idealistic, check_isometric_embedding_action, compute_contact_set, Item, PropertyReport,
    PropertyWitness, TranslationAction,
};
use crate::cayley::{gamma_set_distance, CayleyPoint, CellSet, Gamma, WordMetric};
use crate::monoids::checks::check_left_unitary;
use crate::monoids::{identity_ball, AlgebraVerdict, Element, FiniteMonoid, FreeProduct, Monoid, SubmonoidSpec};
use crate::numerics::{int, ratio, Decision, ExtNonNeg, Rational, TruncatedDistance};
use crate::spaces::{
    check_qi_embedding, check_strong_cover, EmbeddingParams, SpaceError, Verdict, ViolationReport,
};

#[derive(Debug, Error)]
pub enum SmError {
    #[error("hypothesis `{hypothesis}` failed")]
    HypothesisFailed { hypothesis: String, report: Box<PropertyReport> },
    #[error("factorization of {element} failed at step {step}: {reason}")]
    FactorizationFailed { element: String, step: usize, reason: String },
    #[error(transparent)]
    Space(#[from] SpaceError),
}

impl SmError {
    fn hypothesis(name: &str, report: PropertyReport) -> Self {
        SmError::HypothesisFailed { hypothesis: name.to_string(), report: Box::new(report) }
    }
}

fn finite(q: Rational) -> TruncatedDistance {
    TruncatedDistance::Known(ExtNonNeg::finite(q).expect("nonnegative"))
}

fn exact(d: &TruncatedDistance) -> Option<Rational> {
    d.known().and_then(|v| v.as_finite()).cloned()
}

#[derive(Debug, Clone)]
pub struct SmInput {
    pub action: Arc<TranslationAction>,
    /// Center of the strong ball `B`, an element of the acted-on monoid.
    pub x0: Element,
    pub radius: Rational,
    /// Word-length bound on acting elements.
    pub horizon: u32,
    /// Word-length bound for pairwise checks; defaults to `horizon`.
    pub pair_radius: Option<u32>,
}

impl SmInput {
    pub fn new(action: Arc<TranslationAction>, radius: Rational, horizon: u32) -> Result<Self, SpaceError> {
        if radius <= Rational::zero() {
            return Err(SpaceError::InvalidParams("ball radius must be positive".into()));
        }
        if horizon == 0 {
            return Err(SpaceError::InvalidParams("horizon must be at least 1".into()));
        }
        let x0 = action.gamma().monoid().identity();
        Ok(SmInput { action, x0, radius, horizon, pair_radius: None })
    }

    pub fn with_pair_radius(mut self, radius: u32) -> Self {
        self.pair_radius = Some(radius.min(self.horizon));
        self
    }

    fn pairs(&self) -> u32 {
        self.pair_radius.unwrap_or(self.horizon)
    }

    fn gamma(&self) -> &Gamma {
        self.action.gamma()
    }

    fn basepoint(&self) -> CayleyPoint {
        CayleyPoint::Vertex(self.x0.clone())
    }

    /// `m·x0` as an element of the acted-on monoid.
    fn orbit(&self, m: &Element) -> Element {
        self.gamma().monoid().product(&self.action.image(m), &self.x0)
    }
}

/// Output of [`extract_generators`].
#[derive(Debug, Clone)]
pub struct SmReport {
    pub radius: Rational,
    pub horizon: u32,
    pub b: CellSet,
    /// The contact set `{m : d(B, mB) = 0}`.
    pub s: Vec<Element>,
    pub contact_suspect: bool,
    /// Out-ball of radius `5R` around `x0`.
    pub c: CellSet,
    /// Translates touching `C` but not `B`, with `d(B, mB)`.
    pub q: Vec<(Element, Rational)>,
    pub r: Rational,
    pub l: Rational,
    pub lambda: Rational,
    pub prechecks: Vec<PropertyReport>,
    pub claim1: PropertyReport,
    pub claim2: PropertyReport,
}

impl SmReport {
    pub fn passed(&self) -> bool {
        self.claim1.passed() && self.claim2.passed()
    }

    /// Word metric on the acting monoid over the non-identity members of `S`.
    pub fn s_metric(&self, action: &TranslationAction, horizon: u32) -> WordMetric {
        let acting = action.acting();
        let e = acting.identity();
        let gens: Vec<Element> = self.s.iter().filter(|s| **s != e).cloned().collect();
        let names = gens.iter().map(|g| acting.format(g)).collect();
        WordMetric::with_generators(acting.clone(), gens, names, horizon)
    }
}

/// Computes `S`, `C`, `Q`, `r`, `l` and `λ` after checking the action
/// hypotheses, then checks both claims on the horizon ball.
pub fn extract_generators(input: &SmInput) -> Result<SmReport, SmError> {
    let action = input.action.as_ref();
    let gamma = input.gamma();
    let h = input.horizon;
    let b = CellSet::strong_ball(gamma, &input.x0, &input.radius)?;

    let sample = gamma.sample((h / 2).min(2), &[ratio(1, 2)])?;
    let iso = check_isometric_embedding_action(action, &sample, (h / 2).min(3))?;
    if !iso.passed() {
        return Err(SmError::hypothesis("isometric_embedding", iso));
    }
    let ambient = gamma.sample(h / 2, &[ratio(1, 4), ratio(1, 2), ratio(3, 4)])?;
    let cob = check_cobounded(action, &b, &ambient, h);
    if !cob.passed() {
        return Err(SmError::hypothesis("cobounded", cob));
    }
    let ideal = check_idealistic(action, &input.basepoint(), input.pairs());
    if !ideal.passed() {
        return Err(SmError::hypothesis("idealistic", ideal));
    }

    let contact = compute_contact_set(action, &b, h);
    let c = CellSet::out_ball(gamma, &input.x0, &(int(5) * &input.radius));
    let mut q = Vec::new();
    for (m, d) in &contact.separations {
        if c.touches(gamma, &action.apply_set(m, &b)) {
            let d = exact(d).ok_or_else(|| {
                SpaceError::HorizonTooSmall(format!("d(B, {}B) = {d}", action.format_acting(m)))
            })?;
            q.push((m.clone(), d));
        }
    }
    let min_q = q.iter().map(|(_, d)| d).min().cloned();
    let r = min_q.map_or(input.radius.clone(), |d| d.min(input.radius.clone())) / int(2);
    let l = &r / int(2);

    let x0 = input.basepoint();
    let mut lambda = Rational::zero();
    for s in &contact.members {
        let d = gamma.gamma_distance(&x0, &action.apply(s, &x0));
        let d = exact(&d).ok_or_else(|| {
            SpaceError::HorizonTooSmall(format!("d(x0, {}·x0) = {d}", action.format_acting(s)))
        })?;
        lambda = lambda.max(d);
    }

    let r_bound = finite(r.clone());
    let mut claim1 = PropertyReport::new("claim1", h);
    for (m, d) in &contact.separations {
        claim1.record(not_below(d, &r_bound), || {
            PropertyWitness::new(
                "d(B, hB) < r implies d(B, hB) = 0",
                vec![("h", Item::Acting(m.clone())), ("d(B,hB)", Item::Distance(d.clone()))],
            )
        });
    }
    let claim2 = check_claim2(input, &b, &contact.members, &r_bound);

    Ok(SmReport {
        radius: input.radius.clone(),
        horizon: h,
        b,
        s: contact.members,
        contact_suspect: contact.suspect,
        c,
        q,
        r,
        l,
        lambda,
        prechecks: vec![iso, cob, ideal, contact.report],
        claim1,
        claim2,
    })
}

/// `Holds` when `d ≥ bound`.
fn not_below(d: &TruncatedDistance, bound: &TruncatedDistance) -> Decision {
    match d.lt(bound) {
        Decision::Holds => Decision::Violated,
        Decision::Violated => Decision::Holds,
        Decision::Undecided => Decision::Undecided,
    }
}

fn check_claim2(input: &SmInput, b: &CellSet, s: &[Element], r: &TruncatedDistance) -> PropertyReport {
    let action = input.action.as_ref();
    let gamma = input.gamma();
    let acting = action.acting();
    let ball = action.acting_ball(input.pairs());
    let translates: Vec<CellSet> = ball.par_iter().map(|m| action.apply_set(m, b)).collect();
    let parts: Vec<PropertyReport> = (0..ball.len())
        .into_par_iter()
        .map(|i| {
            let mut rep = PropertyReport::new("claim2", input.pairs());
            for j in 0..ball.len() {
                let close = if translates[i].touches(gamma, &translates[j]) {
                    Decision::Holds
                } else {
                    gamma_set_distance(gamma, &translates[i], &translates[j]).lt(r)
                };
                match close {
                    Decision::Violated => continue,
                    Decision::Undecided => {
                        rep.unresolved += 1;
                        continue;
                    }
                    Decision::Holds => {}
                }
                let (m, n) = (&ball[i], &ball[j]);
                let found = s.iter().any(|u| acting.product(m, u) == *n);
                rep.record(if found { Decision::Holds } else { Decision::Violated }, || {
                    PropertyWitness::new(
                        "d(mB, nB) < r implies n = m·u with u ∈ S",
                        vec![("m", Item::Acting(m.clone())), ("n", Item::Acting(n.clone()))],
                    )
                });
            }
            rep
        })
        .collect();
    let mut report = PropertyReport::new("claim2", input.pairs());
    parts.into_iter().for_each(|p| report.absorb(p));
    report
}

/// A factorization `m = s_0 s_1 … s_k` read off a subdivided geodesic.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub element: Element,
    pub distance: Rational,
    /// `k + 1` with `k = ⌊d(x0, m·x0) / l⌋`.
    pub bound: u64,
    pub factors: Vec<Element>,
    pub d_s: TruncatedDistance,
}

#[derive(Debug, Clone)]
pub struct GenerationReport {
    pub report: PropertyReport,
    pub factorizations: Vec<Factorization>,
}

/// Point at time `t` along the vertex path spelled by `word` from `start`.
fn path_point(vertices: &[Element], word: &[usize], t: &Rational) -> CayleyPoint {
    let j = t.floor();
    let mu = t - &j;
    let j: usize = num_traits::ToPrimitive::to_usize(&j.to_integer()).expect("small time");
    if mu.is_zero() || j >= word.len() {
        CayleyPoint::Vertex(vertices[j.min(vertices.len() - 1)].clone())
    } else {
        CayleyPoint::Edge { base: vertices[j].clone(), gen: word[j], mu }
    }
}

/// Translates `mB` for every acting `m` up to the horizon, indexed by the
/// vertices they meet.
struct CoverIndex {
    translates: Vec<(Element, CellSet)>,
    by_vertex: HashMap<Element, Vec<usize>>,
}

impl CoverIndex {
    fn new(action: &TranslationAction, b: &CellSet, radius: u32) -> Self {
        let translates: Vec<(Element, CellSet)> = action
            .acting_ball(radius)
            .into_par_iter()
            .map(|m| {
                let mb = action.apply_set(&m, b);
                (m, mb)
            })
            .collect();
        let mut by_vertex: HashMap<Element, Vec<usize>> = HashMap::new();
        for (k, (_, mb)) in translates.iter().enumerate() {
            for v in mb.vertices().chain(mb.segments().iter().map(|s| &s.base)) {
                let slot = by_vertex.entry(v.clone()).or_default();
                if slot.last() != Some(&k) {
                    slot.push(k);
                }
            }
        }
        CoverIndex { translates, by_vertex }
    }

    /// First acting element in ball order whose translate contains `p`.
    fn cover(&self, p: &CayleyPoint) -> Option<&Element> {
        self.by_vertex
            .get(p.base())?
            .iter()
            .find(|&&k| self.translates[k].1.contains(p))
            .map(|&k| &self.translates[k].0)
    }
}

/// For every acting `m` up to the horizon, factors `m` over `S` along a
/// geodesic from `x0` to `m·x0` sampled at spacing `l`, and checks
/// `d_S(e, m) ≤ k + 1`.
pub fn verify_generation_bound(report: &SmReport, input: &SmInput) -> Result<GenerationReport, SmError> {
    let action = input.action.as_ref();
    let gamma = input.gamma();
    let acting = action.acting();
    let e = acting.identity();
    let index = CoverIndex::new(action, &report.b, input.horizon);
    let s_metric = report.s_metric(action, input.horizon);
    let ball = action.acting_ball(input.horizon);
    let results: Vec<Result<(PropertyReport, Option<Factorization>), SmError>> = ball
        .par_iter()
        .map(|m| {
            let mut rep = PropertyReport::new("generation_bound", input.horizon);
            let target = input.orbit(m);
            let d = gamma.vertex_distance(&input.x0, &target);
            let Some(dist) = exact(&d) else {
                rep.record(if d.is_known() { Decision::Violated } else { Decision::Undecided }, || {
                    PropertyWitness::new(
                        "d(x0, m·x0) < ∞",
                        vec![("m", Item::Acting(m.clone())), ("d(x0,m·x0)", Item::Distance(d.clone()))],
                    )
                });
                return Ok((rep, None));
            };
            let fail = |step: usize, reason: String| SmError::FactorizationFailed {
                element: action.format_acting(m),
                step,
                reason,
            };
            let word = gamma.metric().shortest_word(&input.x0, &target).ok_or_else(|| fail(0, "no geodesic".into()))?;
            let vertices = gamma.metric().walk(&input.x0, &word);
            let k = (&dist / &report.l).floor().to_integer();
            let k: usize = num_traits::ToPrimitive::to_usize(&k).expect("small bound");
            let mut chain = vec![e.clone()];
            for i in 1..=k {
                let x = path_point(&vertices, &word, &(&report.l * int(i as i64)));
                let cover = index.cover(&x).ok_or_else(|| fail(i, format!("no covering translate of {}", gamma.format_point(&x))))?;
                chain.push(cover.clone());
            }
            chain.push(m.clone());
            let mut factors = Vec::with_capacity(k + 1);
            for i in 0..=k {
                let s = report
                    .s
                    .iter()
                    .find(|s| acting.product(&chain[i], s) == chain[i + 1])
                    .ok_or_else(|| {
                        fail(
                            i,
                            format!(
                                "no s ∈ S with {}·s = {}",
                                action.format_acting(&chain[i]),
                                action.format_acting(&chain[i + 1])
                            ),
                        )
                    })?;
                factors.push(s.clone());
            }
            let product = factors.iter().fold(e.clone(), |acc, s| acting.product(&acc, s));
            rep.record(if product == *m { Decision::Holds } else { Decision::Violated }, || {
                PropertyWitness::new(
                    "s_0 s_1 … s_k = m",
                    vec![("m", Item::Acting(m.clone())), ("factors", Item::Factors(factors.clone()))],
                )
            });
            let bound = (k + 1) as u64;
            let d_s = s_metric.word_distance(&e, m);
            let decision = match d_s.le(&TruncatedDistance::from_int(bound)) {
                // the factorization itself is a word of length at most k + 1
                Decision::Undecided if product == *m => Decision::Holds,
                other => other,
            };
            rep.record(decision, || {
                PropertyWitness::new(
                    "d_S(e, m) ≤ k + 1",
                    vec![
                        ("m", Item::Acting(m.clone())),
                        ("d_S(e,m)", Item::Distance(d_s.clone())),
                        ("k+1", Item::Count(k + 1)),
                    ],
                )
            });
            Ok((rep, Some(Factorization { element: m.clone(), distance: dist, bound, factors, d_s })))
        })
        .collect();
    let mut report_out = PropertyReport::new("generation_bound", input.horizon);
    let mut factorizations = Vec::new();
    for r in results {
        let (rep, f) = r?;
        report_out.absorb(rep);
        factorizations.extend(f);
    }
    Ok(GenerationReport { report: report_out, factorizations })
}

#[derive(Debug, Clone)]
pub struct QiReport {
    /// `d_S(m1, m2) ≤ (1/l)·d(m1·x0, m2·x0) + 1`.
    pub upper: PropertyReport,
    /// `d(m1·x0, m2·x0) ≤ λ·d_S(m1, m2)`.
    pub lower: PropertyReport,
    /// Every sampled point lies in the strong `R`-ball of an orbit point.
    pub coverage: ViolationReport<CayleyPoint>,
}

impl QiReport {
    pub fn passed(&self) -> bool {
        self.upper.passed() && self.lower.passed() && self.coverage.passed()
    }
}

/// Both inequalities of the quasi-isometry `m ↦ m·x0` on all pairs of the
/// pair ball, and coverage of a space sample by the orbit.
pub fn verify_qi_bounds(report: &SmReport, input: &SmInput) -> Result<QiReport, SmError> {
    let action = input.action.as_ref();
    let gamma = input.gamma();
    let s_metric = report.s_metric(action, input.horizon);
    let ball = action.acting_ball(input.pairs());
    let orbit: Vec<Element> = ball.iter().map(|m| input.orbit(m)).collect();
    let inv_l = report.l.recip();
    let lambda = report.lambda.clone();
    let parts: Vec<(PropertyReport, PropertyReport)> = (0..ball.len())
        .into_par_iter()
        .map(|i| {
            let mut upper = PropertyReport::new("qi_upper", input.pairs());
            let mut lower = PropertyReport::new("qi_lower", input.pairs());
            for j in 0..ball.len() {
                let (m1, m2) = (&ball[i], &ball[j]);
                let dx = gamma.vertex_distance(&orbit[i], &orbit[j]);
                let mut ds = s_metric.word_distance(m1, m2);
                if !ds.is_known() && action.divides(m1, m2) == Decision::Violated {
                    // no u with m1·u = m2, so no word over S either
                    ds = TruncatedDistance::infinite();
                }
                let bound = dx.scale(&inv_l).add_rational(&Rational::one());
                upper.record(ds.le(&bound), || {
                    PropertyWitness::new(
                        "d_S(m1, m2) ≤ (1/l)·d(m1·x0, m2·x0) + 1",
                        vec![
                            ("m1", Item::Acting(m1.clone())),
                            ("m2", Item::Acting(m2.clone())),
                            ("lhs", Item::Distance(ds.clone())),
                            ("rhs", Item::Distance(bound.clone())),
                        ],
                    )
                });
                let scaled = match &ds {
                    _ if !lambda.is_zero() => ds.scale(&lambda),
                    TruncatedDistance::Known(v) if v.is_infinite() => ds.clone(),
                    _ => TruncatedDistance::zero(),
                };
                lower.record(dx.le(&scaled), || {
                    PropertyWitness::new(
                        "d(m1·x0, m2·x0) ≤ λ·d_S(m1, m2)",
                        vec![
                            ("m1", Item::Acting(m1.clone())),
                            ("m2", Item::Acting(m2.clone())),
                            ("lhs", Item::Distance(dx.clone())),
                            ("rhs", Item::Distance(scaled.clone())),
                        ],
                    )
                });
            }
            (upper, lower)
        })
        .collect();
    let mut upper = PropertyReport::new("qi_upper", input.pairs());
    let mut lower = PropertyReport::new("qi_lower", input.pairs());
    for (u, l) in parts {
        upper.absorb(u);
        lower.absorb(l);
    }
    let cover_orbit: Vec<CayleyPoint> =
        action.acting_ball(input.horizon).iter().map(|m| CayleyPoint::Vertex(input.orbit(m))).collect();
    let ambient = gamma.sample(input.horizon / 2, &[ratio(1, 2)])?;
    let coverage = check_strong_cover(gamma, &cover_orbit, &ambient, &input.radius)?;
    Ok(QiReport { upper: upper.require_decided()?, lower: lower.require_decided()?, coverage })
}

/// Extraction followed by both verifiers.
#[derive(Debug, Clone)]
pub struct SmOutcome {
    pub extraction: SmReport,
    pub generation: GenerationReport,
    pub qi: QiReport,
}

impl SmOutcome {
    pub fn passed(&self) -> bool {
        self.extraction.passed() && self.generation.report.passed() && self.qi.passed()
    }
}

pub fn run_svarc_milnor(input: &SmInput) -> Result<SmOutcome, SmError> {
    let extraction = extract_generators(input)?;
    let generation = verify_generation_bound(&extraction, input)?;
    let qi = verify_qi_bounds(&extraction, input)?;
    Ok(SmOutcome { extraction, generation, qi })
}

#[derive(Debug, Clone)]
pub struct SubmonoidInput {
    pub n: Arc<dyn Monoid>,
    pub m: SubmonoidSpec,
    pub p: Vec<Element>,
    pub horizon: u32,
    /// Radius `R` of the covering ball for `N` acting on itself.
    pub radius: Rational,
}

/// Quasi-isometry constants of the inclusion `(M, d_S) → (N, d)` realized
/// on the horizon ball.
#[derive(Debug, Clone)]
pub struct RealizedConstants {
    pub lambda: Rational,
    pub epsilon: Rational,
    pub mu: Rational,
    pub embedding: ViolationReport<(Element, Element)>,
    pub density: ViolationReport<Element>,
    /// Pairs whose distances the horizon left undecided.
    pub unresolved: usize,
}

impl RealizedConstants {
    pub fn passed(&self) -> bool {
        self.embedding.passed() && self.density.passed()
    }
}

#[derive(Debug, Clone)]
pub struct SubmonoidReport {
    /// Each `p` with a right inverse `q`, `p·q = e`.
    pub right_inverses: Vec<(Element, Element)>,
    pub mp_equals_n: PropertyReport,
    pub left_unitary: AlgebraVerdict,
    /// `R + max over p of max(d(e,p), d(p,e))`.
    pub radius_m: Rational,
    pub outcome: SmOutcome,
    pub realized: RealizedConstants,
}

impl SubmonoidReport {
    pub fn passed(&self) -> bool {
        self.mp_equals_n.passed() && self.left_unitary.status.holds() && self.outcome.passed() && self.realized.passed()
    }
}

fn algebra_to_property(v: &AlgebraVerdict) -> PropertyReport {
    let mut rep = PropertyReport::new(v.property, v.horizon);
    rep.checked = v.searched;
    if !v.status.holds() {
        rep.verdict = Verdict::Fail;
        rep.violations = v.witnesses.len();
        rep.witnesses = v
            .witnesses
            .iter()
            .map(|w| PropertyWitness {
                relation: w.law.clone(),
                items: w.elements.iter().map(|(k, e)| (k.clone(), Item::Element(e.clone()))).collect(),
            })
            .collect();
    }
    rep
}

/// Checks that `P` consists of right units with `MP = N` and `M` is left
/// unitary on the horizon ball, then runs the pipeline for `M` acting on
/// `Γ_S(N)` with the enlarged ball radius.
pub fn run_submonoid_theorem(input: &SubmonoidInput) -> Result<SubmonoidReport, SmError> {
    let n = input.n.as_ref();
    let h = input.horizon;
    let e = n.identity();
    let ball: Vec<Element> = identity_ball(n, h).into_iter().map(|(x, _)| x).collect();

    let mut units = PropertyReport::new("right_units", h);
    let mut right_inverses = Vec::new();
    for p in &input.p {
        let q = ball.iter().find(|q| n.product(p, q) == e);
        units.record(if q.is_some() { Decision::Holds } else { Decision::Undecided }, || {
            PropertyWitness::new("p·q = e for some q", vec![("p", Item::Element(p.clone()))])
        });
        match q {
            Some(q) => right_inverses.push((p.clone(), q.clone())),
            None => {
                units.verdict = Verdict::Fail;
                units.witnesses.push(PropertyWitness::new(
                    "p·q = e for some q",
                    vec![("p", Item::Element(p.clone()))],
                ));
                return Err(SmError::hypothesis("right_units", units));
            }
        }
    }

    let mut mp = PropertyReport::new("mp_equals_n", h);
    for x in &ball {
        // x = m·p forces m = x·q for the right inverse q of p
        let found = right_inverses.iter().any(|(p, q)| {
            let m = n.product(x, q);
            input.m.contains(&m) && n.product(&m, p) == *x
        });
        mp.record(if found { Decision::Holds } else { Decision::Violated }, || {
            PropertyWitness::new("n = m·p with m ∈ M, p ∈ P", vec![("n", Item::Element(x.clone()))])
        });
    }
    if !mp.passed() {
        return Err(SmError::hypothesis("mp_equals_n", mp));
    }

    let left_unitary = check_left_unitary(n, &input.m, h);
    if !left_unitary.status.holds() {
        return Err(SmError::hypothesis("left_unitary", algebra_to_property(&left_unitary)));
    }

    let metric = WordMetric::new(input.n.clone(), h);
    let mut spread = Rational::zero();
    for p in &input.p {
        for d in [metric.word_distance(&e, p), metric.word_distance(p, &e)] {
            let d = exact(&d).ok_or_else(|| SpaceError::HorizonTooSmall(format!("d(e, {}) = {d}", n.format(p))))?;
            spread = spread.max(d);
        }
    }
    let radius_m = &input.radius + spread;

    let gamma = Arc::new(Gamma::new(metric));
    let action = Arc::new(TranslationAction::restricted(gamma.clone(), input.m.clone()));
    let sm_input = SmInput::new(action.clone(), radius_m.clone(), h)?;
    let outcome = run_svarc_milnor(&sm_input)?;
    let realized = realized_constants(&outcome.extraction, &action, n, &input.m, h)?;
    Ok(SubmonoidReport { right_inverses, mp_equals_n: mp, left_unitary, radius_m, outcome, realized })
}

fn realized_constants(
    sm: &SmReport,
    action: &TranslationAction,
    n: &dyn Monoid,
    sub: &SubmonoidSpec,
    h: u32,
) -> Result<RealizedConstants, SmError> {
    let s_metric = sm.s_metric(action, h);
    let n_metric = action.gamma().metric();
    let members = action.acting_ball(h);
    let mut lambda = Rational::one();
    let mut unresolved = 0;
    for m1 in &members {
        for m2 in &members {
            let (ds, dn) = (s_metric.word_distance(m1, m2), n_metric.word_distance(m1, m2));
            match (exact(&ds), exact(&dn)) {
                (Some(a), Some(b)) if !a.is_zero() && !b.is_zero() => {
                    lambda = lambda.max(&a / &b).max(&b / &a);
                }
                _ if ds.is_known() && dn.is_known() => {}
                _ => unresolved += 1,
            }
        }
    }
    let pairs: Vec<(Element, Element)> = members.iter().map(|m| (m.clone(), m.clone())).collect();
    let params = EmbeddingParams::tight(lambda.clone(), Rational::zero())?;
    let embedding = match check_qi_embedding(&pairs, &s_metric, n_metric, &params) {
        Ok(r) => r,
        Err(SpaceError::HorizonTooSmall(_)) => {
            check_qi_embedding(&pairs, &s_metric.with_horizon(2 * h), n_metric, &params)?
        }
        Err(e) => return Err(e.into()),
    };

    let ambient: Vec<Element> = identity_ball(n, h.saturating_sub(1)).into_iter().map(|(x, _)| x).collect();
    let mut mu = Rational::zero();
    for x in &ambient {
        let nearest = members
            .iter()
            .filter_map(|m| {
                let a = exact(&n_metric.word_distance(m, x))?;
                let b = exact(&n_metric.word_distance(x, m))?;
                Some(a.max(b))
            })
            .min()
            .ok_or_else(|| SpaceError::HorizonTooSmall(format!("no member of {} near {}", sub.name(), n.format(x))))?;
        mu = mu.max(nearest);
    }
    let density = check_strong_cover(n_metric, &members, &ambient, &mu)?;
    Ok(RealizedConstants { lambda, epsilon: Rational::zero(), mu, embedding, density, unresolved })
}

#[derive(Debug, Clone)]
pub struct FreeProductInput {
    pub rank: usize,
    pub group: FiniteMonoid,
    pub horizon: u32,
    pub radius: Rational,
}

#[derive(Debug, Clone)]
pub struct FreeProductReport {
    pub product: Arc<FreeProduct>,
    pub basis: Vec<Element>,
    /// Every element of `M` up to the horizon is a unique basis word whose
    /// length equals its number of free letters.
    pub factorization: PropertyReport,
    pub words_enumerated: usize,
    pub submonoid: SubmonoidReport,
}

impl FreeProductReport {
    pub fn passed(&self) -> bool {
        self.factorization.passed() && self.submonoid.passed()
    }
}

/// Builds `F_r * G`, the submonoid of forms ending in the group identity and
/// its basis `{g·f_i}`, checks unique factorization over the basis up to the
/// horizon, then runs the submonoid pipeline with `P = G`.
pub fn run_free_product(input: &FreeProductInput) -> Result<FreeProductReport, SmError> {
    if input.rank == 0 {
        return Err(SpaceError::InvalidParams("free rank must be at least 1".into()).into());
    }
    let fp = Arc::new(
        FreeProduct::new(input.rank, input.group.clone())
            .map_err(|e| SpaceError::InvalidParams(e.to_string()))?,
    );
    let h = input.horizon;
    let sub = fp.identity_ending_submonoid();
    let basis = fp.alternating_basis();

    let mut words: HashMap<Element, usize> = HashMap::new();
    let mut factorization = PropertyReport::new("unique_factorization", h);
    let mut frontier = vec![(fp.identity(), 0usize)];
    words.insert(fp.identity(), 0);
    let mut enumerated = 1;
    while let Some((x, len)) = frontier.pop() {
        for b in &basis {
            let y = fp.product(&x, b);
            if y.len() > h as usize {
                continue;
            }
            enumerated += 1;
            let dup = words.insert(y.clone(), len + 1).is_some();
            factorization.record(if dup { Decision::Violated } else { Decision::Holds }, || {
                PropertyWitness::new("distinct basis words give distinct elements", vec![("m", Item::Element(y.clone()))])
            });
            frontier.push((y, len + 1));
        }
    }
    let rank = input.rank as u32;
    for (x, _) in identity_ball(fp.as_ref(), h) {
        if !sub.contains(&x) {
            continue;
        }
        let free_letters = x.0.iter().filter(|&&l| l < rank).count();
        let decision = match words.get(&x) {
            Some(&len) if len == free_letters => Decision::Holds,
            _ => Decision::Violated,
        };
        factorization.record(decision, || {
            PropertyWitness::new(
                "m is a basis word of length equal to its free letters",
                vec![("m", Item::Element(x.clone())), ("free_letters", Item::Count(free_letters))],
            )
        });
    }

    let p: Vec<Element> = (0..input.group.order()).map(|g| fp.group_element(g)).collect();
    let n: Arc<dyn Monoid> = fp.clone();
    let submonoid = run_submonoid_theorem(&SubmonoidInput { n, m: sub, p, horizon: h, radius: input.radius.clone() })?;
    Ok(FreeProductReport { product: fp, basis, factorization, words_enumerated: enumerated, submonoid })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoids::FreeMonoid;

    fn regular(m: impl Monoid + 'static, horizon: u32) -> Arc<TranslationAction> {
        Arc::new(TranslationAction::regular(Arc::new(Gamma::new(WordMetric::new(Arc::new(m), horizon)))))
    }

    fn names(action: &TranslationAction, xs: &[Element]) -> Vec<String> {
        xs.iter().map(|x| action.format_acting(x)).collect()
    }

    #[test]
    fn free_rank_one_constants() {
        let action = regular(FreeMonoid::with_names(["a"]).unwrap(), 8);
        let input = SmInput::new(action.clone(), int(1), 8).unwrap();
        let rep = extract_generators(&input).unwrap();
        assert_eq!(names(&action, &rep.s), ["ε", "a"]);
        let q: Vec<(String, Rational)> =
            rep.q.iter().map(|(m, d)| (action.format_acting(m), d.clone())).collect();
        assert_eq!(
            q,
            [("aa".into(), int(1)), ("aaa".into(), int(2)), ("aaaa".into(), int(3)), ("aaaaa".into(), int(4))]
        );
        assert_eq!((rep.r.clone(), rep.l.clone(), rep.lambda.clone()), (ratio(1, 2), ratio(1, 4), int(1)));
        assert!(rep.passed());
        assert_eq!(rep.claim1.violations + rep.claim2.violations, 0);

        let generation = verify_generation_bound(&rep, &input).unwrap();
        assert!(generation.report.passed());
        let a3 = action.acting().parse("aaa").unwrap();
        let f = generation.factorizations.iter().find(|f| f.element == a3).unwrap();
        assert_eq!(f.bound, 13);
        assert_eq!(f.d_s, TruncatedDistance::from_int(3));
        let product = f.factors.iter().fold(action.acting().identity(), |acc, s| action.acting().product(&acc, s));
        assert_eq!(product, a3);
        let e = generation.factorizations.iter().find(|f| f.element.is_empty()).unwrap();
        assert_eq!((e.bound, e.d_s.clone()), (1, TruncatedDistance::zero()));

        let qi = verify_qi_bounds(&rep, &input).unwrap();
        assert!(qi.passed());
        assert_eq!(qi.upper.unresolved + qi.lower.unresolved, 0);
    }

    #[test]
    fn cyclic_group_constants() {
        let action = regular(FiniteMonoid::cyclic(3), 8);
        let input = SmInput::new(action.clone(), int(1), 8).unwrap();
        let out = run_svarc_milnor(&input).unwrap();
        assert_eq!(names(&action, &out.extraction.s), ["e", "g"]);
        assert_eq!(out.extraction.lambda, int(1));
        assert!(out.passed());
        let g2 = action.acting().parse("g2").unwrap();
        let f = out.generation.factorizations.iter().find(|f| f.element == g2).unwrap();
        assert_eq!(f.d_s, TruncatedDistance::from_int(2));
    }

    #[test]
    fn trivial_monoid() {
        let action = regular(FiniteMonoid::cyclic(1), 4);
        let input = SmInput::new(action.clone(), int(1), 4).unwrap();
        let out = run_svarc_milnor(&input).unwrap();
        assert_eq!(out.extraction.s.len(), 1);
        assert!(out.extraction.q.is_empty());
        assert_eq!(out.extraction.r, ratio(1, 2));
    }

    #[test]
    fn free_product_rank_one() {
        let rep = run_free_product(&FreeProductInput {
            rank: 1,
            group: FiniteMonoid::cyclic(2),
            horizon: 6,
            radius: int(1),
        })
        .unwrap();
        assert_eq!(rep.basis.len(), 2);
        assert!(rep.factorization.passed());
        let sub = &rep.submonoid;
        assert_eq!(sub.radius_m, int(2));
        let s: Vec<String> = sub.outcome.extraction.s.iter().map(|x| rep.product.format(x)).collect();
        assert_eq!(s, ["ε", "f", "gf"]);
        assert_eq!(sub.realized.lambda, int(2));
        assert_eq!(sub.realized.mu, int(1));
        assert!(rep.passed());
    }

    #[test]
    fn missing_right_inverse() {
        let f1: Arc<dyn Monoid> = Arc::new(FreeMonoid::with_names(["a"]).unwrap());
        let a = f1.parse("a").unwrap();
        let err = run_submonoid_theorem(&SubmonoidInput {
            n: f1.clone(),
            m: SubmonoidSpec::whole(),
            p: vec![a],
            horizon: 4,
            radius: int(1),
        })
        .unwrap_err();
        assert!(matches!(err, SmError::HypothesisFailed { ref hypothesis, .. } if hypothesis == "right_units"));
    }

    #[test]
    fn mp_not_n() {
        let f1: Arc<dyn Monoid> = Arc::new(FreeMonoid::with_names(["a"]).unwrap());
        let trivial = SubmonoidSpec::from_predicate("trivial", |x: &Element| x.is_empty());
        let err = run_submonoid_theorem(&SubmonoidInput {
            n: f1.clone(),
            m: trivial,
            p: vec![f1.identity()],
            horizon: 4,
            radius: int(1),
        })
        .unwrap_err();
        match err {
            SmError::HypothesisFailed { hypothesis, report } => {
                assert_eq!(hypothesis, "mp_equals_n");
                assert_eq!(report.witnesses[0].get("n"), Some(&Item::Element(f1.parse("a").unwrap())));
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn zero_monoid_fails_isometry_hypothesis() {
        let action = regular(crate::monoids::RewritingMonoid::zero_monoid(), 6);
        let input = SmInput::new(action, int(1), 6).unwrap();
        let err = extract_generators(&input).unwrap_err();
        assert!(matches!(err, SmError::HypothesisFailed { ref hypothesis, .. } if hypothesis == "isometric_embedding"));
    }
}
