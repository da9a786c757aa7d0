//! Ball-restricted checks of algebraic side conditions.
//!
//! Each check searches the out-ball of word length at most `horizon` around
//! the identity exhaustively. A failure carries a witness that re-multiplies
//! to a violated equation; success only means no counterexample exists in
//! the ball.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use super::{identity_ball, AlgebraVerdict, AlgebraWitness, Element, Letter, Monoid, RewritingMonoid, Status, SubmonoidSpec};

/// Witnesses kept per check; the search itself is always exhaustive.
pub const MAX_WITNESSES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

fn ball_elements(monoid: &dyn Monoid, horizon: u32) -> Vec<Element> {
    identity_ball(monoid, horizon).into_iter().map(|(e, _)| e).collect()
}

fn verdict(property: &'static str, horizon: u32, searched: usize, mut witnesses: Vec<AlgebraWitness>) -> AlgebraVerdict {
    witnesses.truncate(MAX_WITNESSES);
    AlgebraVerdict { property, status: Status::from_failures(!witnesses.is_empty()), horizon, witnesses, searched }
}

/// Searches `m·a = m·b` (left) or `a·m = b·m` (right) with `a ≠ b`.
pub fn check_cancellative(monoid: &dyn Monoid, side: Side, horizon: u32) -> AlgebraVerdict {
    let ball = ball_elements(monoid, horizon);
    let witnesses: Vec<AlgebraWitness> = ball
        .par_iter()
        .flat_map_iter(|m| {
            let mut seen: HashMap<Element, &Element> = HashMap::new();
            let mut found = Vec::new();
            for a in &ball {
                let p = match side {
                    Side::Left => monoid.product(m, a),
                    Side::Right => monoid.product(a, m),
                };
                match seen.get(&p) {
                    Some(&b) => found.push(cancellation_witness(side, m, b, a, &p)),
                    None => {
                        seen.insert(p, a);
                    }
                }
            }
            found
        })
        .collect();
    let property = match side {
        Side::Left => "left_cancellative",
        Side::Right => "right_cancellative",
    };
    verdict(property, horizon, ball.len(), witnesses)
}

fn cancellation_witness(side: Side, m: &Element, a: &Element, b: &Element, p: &Element) -> AlgebraWitness {
    let law = match side {
        Side::Left => "m·a = m·b with a ≠ b",
        Side::Right => "a·m = b·m with a ≠ b",
    };
    AlgebraWitness {
        law: law.to_string(),
        elements: vec![
            ("m".into(), m.clone()),
            ("a".into(), a.clone()),
            ("b".into(), b.clone()),
            ("product".into(), p.clone()),
        ],
    }
}

/// Counts, for every `b, c` in the ball, the solutions `a` in the ball of
/// `a·b = c`, failing when some count reaches `threshold`.
pub fn check_finite_geometric_type(monoid: &dyn Monoid, horizon: u32, threshold: usize) -> AlgebraVerdict {
    let ball = ball_elements(monoid, horizon);
    let in_ball: HashSet<&Element> = ball.iter().collect();
    let witnesses: Vec<AlgebraWitness> = ball
        .par_iter()
        .flat_map_iter(|b| {
            let mut solutions: HashMap<Element, Vec<&Element>> = HashMap::new();
            let mut order = Vec::new();
            for a in &ball {
                let c = monoid.product(a, b);
                if in_ball.contains(&c) {
                    let entry = solutions.entry(c.clone()).or_default();
                    if entry.is_empty() {
                        order.push(c);
                    }
                    entry.push(a);
                }
            }
            order
                .into_iter()
                .filter_map(|c| {
                    let sols = &solutions[&c];
                    (sols.len() >= threshold).then(|| {
                        let mut elements = vec![("b".to_string(), b.clone()), ("c".to_string(), c.clone())];
                        elements.extend(sols.iter().map(|&a| ("a".to_string(), a.clone())));
                        AlgebraWitness {
                            law: format!("{} solutions of a·b = c (threshold {threshold})", sols.len()),
                            elements,
                        }
                    })
                })
                .collect::<Vec<_>>()
        })
        .collect();
    verdict("finite_geometric_type", horizon, ball.len(), witnesses)
}

/// Searches `s ∈ sub`, `t ∉ sub` with `s·t ∈ sub`.
pub fn check_left_unitary(monoid: &dyn Monoid, sub: &SubmonoidSpec, horizon: u32) -> AlgebraVerdict {
    let ball = ball_elements(monoid, horizon);
    let (members, others): (Vec<&Element>, Vec<&Element>) = ball.iter().partition(|e| sub.contains(e));
    let witnesses: Vec<AlgebraWitness> = members
        .par_iter()
        .flat_map_iter(|&s| {
            others.iter().filter_map(move |&t| {
                let st = monoid.product(s, t);
                sub.contains(&st).then(|| AlgebraWitness {
                    law: "s ∈ M, t ∉ M, s·t ∈ M".to_string(),
                    elements: vec![("s".into(), s.clone()), ("t".into(), t.clone()), ("st".into(), st)],
                })
            })
        })
        .collect();
    verdict("left_unitary", horizon, ball.len(), witnesses)
}

/// Associativity on all triples and two-sided neutrality of the identity.
pub fn check_monoid_laws(monoid: &dyn Monoid, horizon: u32) -> AlgebraVerdict {
    let ball = ball_elements(monoid, horizon);
    let e = monoid.identity();
    let mut witnesses: Vec<AlgebraWitness> = ball
        .iter()
        .filter(|x| monoid.product(&e, x) != **x || monoid.product(x, &e) != **x)
        .map(|x| AlgebraWitness {
            law: "e·x = x = x·e".into(),
            elements: vec![("x".into(), x.clone())],
        })
        .collect();
    witnesses.extend(ball.par_iter().flat_map_iter(|a| {
        let ball = &ball;
        ball.iter().flat_map(move |b| {
            let ab = monoid.product(a, b);
            ball.iter().filter_map(move |c| {
                let left = monoid.product(&ab, c);
                let right = monoid.product(a, &monoid.product(b, c));
                (left != right).then(|| AlgebraWitness {
                    law: "(a·b)·c = a·(b·c)".into(),
                    elements: vec![("a".into(), a.clone()), ("b".into(), b.clone()), ("c".into(), c.clone())],
                })
            })
        })
    }).collect::<Vec<_>>());
    verdict("monoid_laws", horizon, ball.len(), witnesses)
}

/// Checks `nf(nf(w)·v) = nf(w·v)` for all words `w, v` of length at most
/// `max_len`; a failure exposes a non-confluent system.
pub fn check_rewriting_consistency(monoid: &RewritingMonoid, max_len: usize) -> AlgebraVerdict {
    let k = monoid.generator_names().len();
    let mut words: Vec<Vec<Letter>> = vec![Vec::new()];
    let mut layer = words.clone();
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| (0..k).map(move |s| [w.as_slice(), &[s]].concat()))
            .collect();
        words.extend(layer.iter().cloned());
    }
    let sys = monoid.system();
    let witnesses: Vec<AlgebraWitness> = words
        .par_iter()
        .flat_map_iter(|w| {
            let nw = sys.normal_form(w).expect("terminating");
            words.iter().filter_map(move |v| {
                let lhs = sys.normal_form(&[nw.as_slice(), v].concat()).expect("terminating");
                let rhs = sys.normal_form(&[w.as_slice(), v].concat()).expect("terminating");
                (lhs != rhs).then(|| AlgebraWitness {
                    law: "nf(nf(w)·v) = nf(w·v)".into(),
                    elements: vec![("w".into(), Element::from_letters(w)), ("v".into(), Element::from_letters(v))],
                })
            })
        })
        .collect();
    verdict("rewriting_consistency", max_len as u32, words.len(), witnesses)
}
