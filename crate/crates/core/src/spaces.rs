//! Semimetric spaces and checkable coarse-geometric definitions.
//!
//! Distances are [`TruncatedDistance`]s: a check either decides every
//! inequality it needs, or reports [`SpaceError::HorizonTooSmall`] unless a
//! definite violation was already found.

use std::collections::HashSet;
use std::fmt;
use std::hash::Hash;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::numerics::{format_rational, Decision, ExtNonNeg, Rational, TruncatedDistance};

pub const MAX_WITNESSES: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("horizon too small: {0}")]
    HorizonTooSmall(String),
    #[error("operation not supported: {0}")]
    Unsupported(&'static str),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no path: {0}")]
    NoPath(String),
}

/// A semimetric space queried pointwise.
pub trait SemimetricSpace: Sync {
    type Point: Clone + Eq + Hash + fmt::Debug + Send + Sync;

    fn distance(&self, p: &Self::Point, q: &Self::Point) -> TruncatedDistance;

    /// All points at out-distance at most `radius` from `center`.
    fn out_ball(&self, _center: &Self::Point, _radius: &Rational) -> Result<Vec<Self::Point>, SpaceError> {
        Err(SpaceError::Unsupported("out-ball enumeration"))
    }

    /// All points at distance at most `radius` towards `center`.
    fn in_ball(&self, _center: &Self::Point, _radius: &Rational) -> Result<Vec<Self::Point>, SpaceError> {
        Err(SpaceError::Unsupported("in-ball enumeration"))
    }

    fn format_point(&self, p: &Self::Point) -> String {
        format!("{p:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

/// The inequality a witness violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Requirement {
    /// `lhs ≤ rhs`
    Le,
    /// `lhs = rhs`
    Eq,
    /// `lhs > 0`; `rhs` is zero
    Positive,
}

impl Requirement {
    /// Whether the sides, as stored, violate the requirement.
    pub fn violated_by(self, lhs: &TruncatedDistance, rhs: &TruncatedDistance) -> bool {
        match self {
            Requirement::Le => lhs.le(rhs) == Decision::Violated,
            Requirement::Eq => lhs.eq_decision(rhs) == Decision::Violated,
            Requirement::Positive => lhs.is_zero(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness<P> {
    pub relation: String,
    pub requirement: Requirement,
    pub points: Vec<(String, P)>,
    pub lhs: TruncatedDistance,
    pub rhs: TruncatedDistance,
}

impl<P> Witness<P> {
    pub fn new(
        relation: impl Into<String>,
        requirement: Requirement,
        points: Vec<(&str, P)>,
        lhs: TruncatedDistance,
        rhs: TruncatedDistance,
    ) -> Self {
        Witness {
            relation: relation.into(),
            requirement,
            points: points.into_iter().map(|(n, p)| (n.to_string(), p)).collect(),
            lhs,
            rhs,
        }
    }

    pub fn point(&self, role: &str) -> Option<&P> {
        self.points.iter().find(|(r, _)| r == role).map(|(_, p)| p)
    }

    /// Both stored sides still violate the stated requirement.
    pub fn sides_violate(&self) -> bool {
        self.requirement.violated_by(&self.lhs, &self.rhs)
    }

    pub fn map_points<Q>(self, f: impl Fn(&P) -> Q) -> Witness<Q> {
        Witness {
            relation: self.relation,
            requirement: self.requirement,
            points: self.points.iter().map(|(r, p)| (r.clone(), f(p))).collect(),
            lhs: self.lhs,
            rhs: self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolationReport<P> {
    pub verdict: Verdict,
    pub witnesses: Vec<Witness<P>>,
    /// Total number of violations found (witnesses are capped).
    pub violations: usize,
    /// Number of inequalities checked.
    pub checked: usize,
}

impl<P> ViolationReport<P> {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Conjunction of two reports over the same kind of points.
    pub fn combine(mut self, other: ViolationReport<P>) -> ViolationReport<P> {
        self.checked += other.checked;
        self.violations += other.violations;
        let room = MAX_WITNESSES.saturating_sub(self.witnesses.len());
        self.witnesses.extend(other.witnesses.into_iter().take(room));
        if self.violations > 0 {
            self.verdict = Verdict::Fail;
        }
        self
    }

    pub fn map_points<Q>(self, f: impl Fn(&P) -> Q) -> ViolationReport<Q> {
        ViolationReport {
            verdict: self.verdict,
            witnesses: self.witnesses.into_iter().map(|w| w.map_points(&f)).collect(),
            violations: self.violations,
            checked: self.checked,
        }
    }
}

impl<P: Serialize> Serialize for Witness<P> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Role<'a, P> {
            role: &'a str,
            point: &'a P,
        }
        #[derive(Serialize)]
        struct Wire<'a, P> {
            relation: &'a str,
            requirement: Requirement,
            points: Vec<Role<'a, P>>,
            lhs: &'a TruncatedDistance,
            rhs: &'a TruncatedDistance,
        }
        Wire {
            relation: &self.relation,
            requirement: self.requirement,
            points: self.points.iter().map(|(role, point)| Role { role, point }).collect(),
            lhs: &self.lhs,
            rhs: &self.rhs,
        }
        .serialize(s)
    }
}

impl<P: Serialize> Serialize for ViolationReport<P> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a, P: Serialize> {
            verdict: Verdict,
            checked: usize,
            violations: usize,
            witnesses: &'a [Witness<P>],
        }
        Wire { verdict: self.verdict, checked: self.checked, violations: self.violations, witnesses: &self.witnesses }
            .serialize(s)
    }
}

/// Accumulates decided inequalities into a report.
pub(crate) struct Tally<P> {
    witnesses: Vec<Witness<P>>,
    violations: usize,
    undecided: usize,
    checked: usize,
    first_undecided: Option<String>,
}

impl<P> Tally<P> {
    pub(crate) fn new() -> Self {
        Tally { witnesses: Vec::new(), violations: 0, undecided: 0, checked: 0, first_undecided: None }
    }

    pub(crate) fn record(&mut self, decision: Decision, witness: impl FnOnce() -> Witness<P>) {
        self.checked += 1;
        match decision {
            Decision::Holds => {}
            Decision::Violated => {
                self.violations += 1;
                if self.witnesses.len() < MAX_WITNESSES {
                    self.witnesses.push(witness());
                }
            }
            Decision::Undecided => {
                self.undecided += 1;
                if self.first_undecided.is_none() {
                    self.first_undecided = Some(witness().relation);
                }
            }
        }
    }

    pub(crate) fn merge(mut self, other: Tally<P>) -> Self {
        self.checked += other.checked;
        self.violations += other.violations;
        self.undecided += other.undecided;
        self.first_undecided = self.first_undecided.or(other.first_undecided);
        let room = MAX_WITNESSES.saturating_sub(self.witnesses.len());
        self.witnesses.extend(other.witnesses.into_iter().take(room));
        self
    }

    /// A definite violation fails the check; otherwise undecided
    /// inequalities make the answer unavailable at this horizon.
    pub(crate) fn finish(self) -> Result<ViolationReport<P>, SpaceError> {
        if self.violations == 0 && self.undecided > 0 {
            return Err(SpaceError::HorizonTooSmall(format!(
                "{} inequalities undecided, first: {}",
                self.undecided,
                self.first_undecided.unwrap_or_default()
            )));
        }
        Ok(ViolationReport {
            verdict: if self.violations > 0 { Verdict::Fail } else { Verdict::Pass },
            witnesses: self.witnesses,
            violations: self.violations,
            checked: self.checked,
        })
    }
}

/// All ordered distances among `points`, computed in parallel.
pub fn distance_table<X: SemimetricSpace>(space: &X, points: &[X::Point]) -> Vec<Vec<TruncatedDistance>> {
    points
        .par_iter()
        .map(|p| points.iter().map(|q| space.distance(p, q)).collect())
        .collect()
}

fn known_table(table: &[Vec<TruncatedDistance>]) -> Result<Vec<Vec<ExtNonNeg>>, String> {
    table
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, d)| d.known().cloned().ok_or_else(|| format!("d(#{i}, #{j}) {d}")))
                .collect()
        })
        .collect()
}

/// Axiom (i), `d(x,y) = 0 ⇔ x = y`, on all pairs and the triangle
/// inequality on all triples of `sample`.
pub fn check_axioms<X: SemimetricSpace>(space: &X, sample: &[X::Point]) -> Result<ViolationReport<X::Point>, SpaceError> {
    let table = distance_table(space, sample);
    let d = known_table(&table).map_err(SpaceError::HorizonTooSmall)?;
    let n = sample.len();
    let mut tally = Tally::new();
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (&sample[i], &sample[j]);
            if i == j || x == y {
                tally.record(if d[i][j].is_zero() { Decision::Holds } else { Decision::Violated }, || {
                    Witness::new(
                        "d(x,x) = 0",
                        Requirement::Eq,
                        vec![("x", x.clone())],
                        d[i][j].clone().into(),
                        TruncatedDistance::zero(),
                    )
                });
            } else {
                tally.record(if d[i][j].is_zero() { Decision::Violated } else { Decision::Holds }, || {
                    Witness::new(
                        "d(x,y) > 0 for x ≠ y",
                        Requirement::Positive,
                        vec![("x", x.clone()), ("y", y.clone())],
                        d[i][j].clone().into(),
                        TruncatedDistance::zero(),
                    )
                });
            }
        }
    }
    let triangles = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut t = Tally::new();
            for j in 0..n {
                for k in 0..n {
                    let lhs = &d[i][k];
                    let rhs = &d[i][j] + &d[j][k];
                    let decision = if *lhs <= rhs { Decision::Holds } else { Decision::Violated };
                    t.record(decision, || {
                        Witness::new(
                            "d(x,z) ≤ d(x,y) + d(y,z)",
                            Requirement::Le,
                            vec![("x", sample[i].clone()), ("y", sample[j].clone()), ("z", sample[k].clone())],
                            lhs.clone().into(),
                            rhs.clone().into(),
                        )
                    });
                }
            }
            t
        })
        .collect::<Vec<_>>();
    triangles.into_iter().fold(tally, Tally::merge).finish()
}

/// `inf { d(a,b) | a ∈ A, b ∈ B }`, with `inf ∅ = ∞`.
pub fn set_distance<X: SemimetricSpace>(space: &X, a: &[X::Point], b: &[X::Point]) -> Result<ExtNonNeg, SpaceError> {
    if a.iter().any(|x| b.contains(x)) {
        return Ok(ExtNonNeg::zero());
    }
    let mut best = TruncatedDistance::infinite();
    for x in a {
        for y in b {
            best = best.min(&space.distance(x, y));
        }
    }
    best.known()
        .cloned()
        .ok_or_else(|| SpaceError::HorizonTooSmall(format!("set distance only known to be {best}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BallKind {
    Out,
    In,
    Strong,
}

impl std::str::FromStr for BallKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "out" => Ok(BallKind::Out),
            "in" => Ok(BallKind::In),
            "strong" => Ok(BallKind::Strong),
            _ => Err(format!("unknown ball kind `{s}` (expected out, in or strong)")),
        }
    }
}

/// Points within `radius` of `center` in the given direction; the strong
/// ball is the intersection of the out- and in-balls.
pub fn ball<X: SemimetricSpace>(
    space: &X,
    center: &X::Point,
    radius: &Rational,
    kind: BallKind,
) -> Result<Vec<X::Point>, SpaceError> {
    if radius.is_negative() {
        return Err(SpaceError::InvalidParams(format!("negative radius {}", format_rational(radius))));
    }
    match kind {
        BallKind::Out => space.out_ball(center, radius),
        BallKind::In => space.in_ball(center, radius),
        BallKind::Strong => {
            let inb: HashSet<X::Point> = space.in_ball(center, radius)?.into_iter().collect();
            Ok(space.out_ball(center, radius)?.into_iter().filter(|p| inb.contains(p)).collect())
        }
    }
}

/// Constants `(λ, ε)` of a quasi-isometric embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingParams {
    pub lambda: Rational,
    pub epsilon: Rational,
}

impl EmbeddingParams {
    /// `λ ≥ 1`, `ε > 0`.
    pub fn new(lambda: Rational, epsilon: Rational) -> Result<Self, SpaceError> {
        if !epsilon.is_positive() {
            return Err(SpaceError::InvalidParams(format!("ε = {} must be positive", format_rational(&epsilon))));
        }
        Self::tight(lambda, epsilon)
    }

    /// `λ ≥ 1`, `ε ≥ 0`: admits exact realized constants such as `ε = 0`.
    pub fn tight(lambda: Rational, epsilon: Rational) -> Result<Self, SpaceError> {
        if lambda < Rational::one() {
            return Err(SpaceError::InvalidParams(format!("λ = {} must be at least 1", format_rational(&lambda))));
        }
        if epsilon.is_negative() {
            return Err(SpaceError::InvalidParams(format!("ε = {} is negative", format_rational(&epsilon))));
        }
        Ok(EmbeddingParams { lambda, epsilon })
    }
}

/// Constants `(λ, ε, μ)` of a quasi-isometry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QiParams {
    pub embedding: EmbeddingParams,
    pub mu: Rational,
}

impl QiParams {
    pub fn new(lambda: Rational, epsilon: Rational, mu: Rational) -> Result<Self, SpaceError> {
        check_mu(&mu)?;
        Ok(QiParams { embedding: EmbeddingParams::new(lambda, epsilon)?, mu })
    }
}

fn check_mu(mu: &Rational) -> Result<(), SpaceError> {
    if *mu < Rational::one() {
        return Err(SpaceError::InvalidParams(format!("μ = {} must be at least 1", format_rational(mu))));
    }
    Ok(())
}

/// Both inequalities `(1/λ)d(x,y) − ε ≤ d(fx,fy) ≤ λd(x,y) + ε` on every
/// ordered pair of listed points. The lower bound is checked in the form
/// `(1/λ)d(x,y) ≤ d(fx,fy) + ε`.
pub fn check_qi_embedding<X: SemimetricSpace, Y: SemimetricSpace>(
    pairs: &[(X::Point, Y::Point)],
    domain: &X,
    codomain: &Y,
    params: &EmbeddingParams,
) -> Result<ViolationReport<(X::Point, Y::Point)>, SpaceError> {
    let inv = params.lambda.recip();
    let tallies: Vec<Tally<(X::Point, Y::Point)>> = pairs
        .par_iter()
        .map(|(x, fx)| {
            let mut t = Tally::new();
            for (y, fy) in pairs {
                let d = domain.distance(x, y);
                let fd = codomain.distance(fx, fy);
                let upper = d.scale(&params.lambda).add_rational(&params.epsilon);
                t.record(fd.le(&upper), || {
                    Witness::new(
                        "d(f(x),f(y)) ≤ λ·d(x,y) + ε",
                        Requirement::Le,
                        vec![("x", (x.clone(), fx.clone())), ("y", (y.clone(), fy.clone()))],
                        fd.clone(),
                        upper.clone(),
                    )
                });
                let lower = d.scale(&inv);
                let slack = fd.add_rational(&params.epsilon);
                t.record(lower.le(&slack), || {
                    Witness::new(
                        "(1/λ)·d(x,y) ≤ d(f(x),f(y)) + ε",
                        Requirement::Le,
                        vec![("x", (x.clone(), fx.clone())), ("y", (y.clone(), fy.clone()))],
                        lower.clone(),
                        slack.clone(),
                    )
                });
            }
            t
        })
        .collect();
    tallies.into_iter().fold(Tally::new(), Tally::merge).finish()
}

/// Every ambient point lies in the strong `μ`-ball of some subset point.
pub fn check_quasi_dense<X: SemimetricSpace>(
    space: &X,
    subset: &[X::Point],
    ambient: &[X::Point],
    mu: &Rational,
) -> Result<ViolationReport<X::Point>, SpaceError> {
    check_mu(mu)?;
    check_strong_cover(space, subset, ambient, mu)
}

/// Strong-ball cover test without the `μ ≥ 1` restriction.
pub(crate) fn check_strong_cover<X: SemimetricSpace>(
    space: &X,
    subset: &[X::Point],
    ambient: &[X::Point],
    mu: &Rational,
) -> Result<ViolationReport<X::Point>, SpaceError> {
    let bound = TruncatedDistance::Known(ExtNonNeg::finite(mu.clone()).expect("nonnegative"));
    let tallies: Vec<Tally<X::Point>> = ambient
        .par_iter()
        .map(|x| {
            let mut t = Tally::new();
            let mut nearest = TruncatedDistance::infinite();
            let mut decision = Decision::Violated;
            for s in subset {
                let out = space.distance(s, x);
                let back = space.distance(x, s);
                let both = match (out.le(&bound), back.le(&bound)) {
                    (Decision::Holds, Decision::Holds) => Decision::Holds,
                    (Decision::Violated, _) | (_, Decision::Violated) => Decision::Violated,
                    _ => Decision::Undecided,
                };
                let worse = match out.le(&back) {
                    Decision::Holds => back,
                    _ => out,
                };
                nearest = nearest.min(&worse);
                decision = match (decision, both) {
                    (Decision::Holds, _) | (_, Decision::Holds) => Decision::Holds,
                    (Decision::Undecided, _) | (_, Decision::Undecided) => Decision::Undecided,
                    _ => Decision::Violated,
                };
            }
            t.record(decision, || {
                Witness::new(
                    "min over s of max(d(s,x), d(x,s)) ≤ μ",
                    Requirement::Le,
                    vec![("x", x.clone())],
                    nearest.clone(),
                    bound.clone(),
                )
            });
            t
        })
        .collect();
    tallies.into_iter().fold(Tally::new(), Tally::merge).finish()
}

/// `d(x,y) ≤ λ·d(y,x) + μ` on all ordered pairs of `sample`.
pub fn check_quasi_metric<X: SemimetricSpace>(
    space: &X,
    sample: &[X::Point],
    lambda: &Rational,
    mu: &Rational,
) -> Result<ViolationReport<X::Point>, SpaceError> {
    if !lambda.is_positive() || mu.is_negative() {
        return Err(SpaceError::InvalidParams("need λ > 0 and μ ≥ 0".into()));
    }
    let table = distance_table(space, sample);
    let mut t = Tally::new();
    for (i, x) in sample.iter().enumerate() {
        for (j, y) in sample.iter().enumerate() {
            let rhs = table[j][i].scale(lambda).add_rational(mu);
            t.record(table[i][j].le(&rhs), || {
                Witness::new(
                    "d(x,y) ≤ λ·d(y,x) + μ",
                    Requirement::Le,
                    vec![("x", x.clone()), ("y", y.clone())],
                    table[i][j].clone(),
                    rhs.clone(),
                )
            });
        }
    }
    t.finish()
}

/// A finite sample of a path: strictly increasing times starting at 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathWitness<P> {
    steps: Vec<(Rational, P)>,
}

impl<P> PathWitness<P> {
    pub fn new(steps: Vec<(Rational, P)>) -> Result<Self, SpaceError> {
        match steps.first() {
            None => return Err(SpaceError::InvalidParams("empty path".into())),
            Some((t, _)) if !t.is_zero() => {
                return Err(SpaceError::InvalidParams("path must start at time 0".into()))
            }
            _ => {}
        }
        if steps.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(SpaceError::InvalidParams("times must increase strictly".into()));
        }
        Ok(PathWitness { steps })
    }

    pub fn steps(&self) -> &[(Rational, P)] {
        &self.steps
    }

    pub fn length(&self) -> &Rational {
        &self.steps.last().expect("nonempty").0
    }

    pub fn first(&self) -> &P {
        &self.steps[0].1
    }

    pub fn last(&self) -> &P {
        &self.steps.last().expect("nonempty").1
    }

    pub fn points(&self) -> impl Iterator<Item = &P> {
        self.steps.iter().map(|(_, p)| p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathReport<P> {
    pub report: ViolationReport<P>,
    /// Whether the length equals `d(first, last)`.
    pub geodesic: Decision,
}

/// `d(p_i, p_j) ≤ t_j − t_i` for all `i < j`.
pub fn validate_path_witness<X: SemimetricSpace>(
    space: &X,
    w: &PathWitness<X::Point>,
) -> Result<PathReport<X::Point>, SpaceError> {
    let steps = w.steps();
    let mut t = Tally::new();
    for (i, (ti, pi)) in steps.iter().enumerate() {
        for (tj, pj) in &steps[i + 1..] {
            let d = space.distance(pi, pj);
            let gap = TruncatedDistance::Known(ExtNonNeg::finite(tj - ti).expect("increasing"));
            t.record(d.le(&gap), || {
                Witness::new(
                    "d(p(s), p(t)) ≤ t − s",
                    Requirement::Le,
                    vec![("p(s)", pi.clone()), ("p(t)", pj.clone())],
                    d.clone(),
                    gap.clone(),
                )
            });
        }
    }
    let length = TruncatedDistance::Known(ExtNonNeg::finite(w.length().clone()).expect("nonnegative"));
    let geodesic = length.eq_decision(&space.distance(w.first(), w.last()));
    Ok(PathReport { report: t.finish()?, geodesic })
}

/// A finite space given by an explicit distance matrix.
#[derive(Debug, Clone)]
pub struct FiniteSpace {
    names: Vec<String>,
    table: Vec<Vec<ExtNonNeg>>,
}

impl FiniteSpace {
    /// Takes the matrix as given, without checking any axiom.
    pub fn new(names: Vec<String>, table: Vec<Vec<ExtNonNeg>>) -> Result<Self, SpaceError> {
        let n = names.len();
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(SpaceError::InvalidParams(format!("distance matrix must be {n}×{n}")));
        }
        Ok(FiniteSpace { names, table })
    }

    pub fn points(&self) -> Vec<usize> {
        (0..self.names.len()).collect()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

impl SemimetricSpace for FiniteSpace {
    type Point = usize;

    fn distance(&self, p: &usize, q: &usize) -> TruncatedDistance {
        TruncatedDistance::Known(self.table[*p][*q].clone())
    }

    fn out_ball(&self, center: &usize, radius: &Rational) -> Result<Vec<usize>, SpaceError> {
        let r = ExtNonNeg::finite(radius.clone()).map_err(|e| SpaceError::InvalidParams(e.to_string()))?;
        Ok(self.points().into_iter().filter(|&q| self.table[*center][q] <= r).collect())
    }

    fn in_ball(&self, center: &usize, radius: &Rational) -> Result<Vec<usize>, SpaceError> {
        let r = ExtNonNeg::finite(radius.clone()).map_err(|e| SpaceError::InvalidParams(e.to_string()))?;
        Ok(self.points().into_iter().filter(|&q| self.table[q][*center] <= r).collect())
    }

    fn format_point(&self, p: &usize) -> String {
        self.names[*p].clone()
    }
}
