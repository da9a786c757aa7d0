use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use coarse_monoid::actions::{
    check_action_laws, check_cobounded, check_idealistic, check_isometric_embedding_action, compute_contact_set,
    TranslationAction,
};
use coarse_monoid::cayley::{check_inclusion_qi, parse_point, CayleyPoint, CellSet, Gamma, WordMetric};
use coarse_monoid::monoids::checks::{check_cancellative, check_finite_geometric_type, check_left_unitary, Side};
use coarse_monoid::monoids::config::{parse_monoid_spec, MonoidConfig};
use coarse_monoid::monoids::{Element, Monoid, SubmonoidSpec};
use coarse_monoid::numerics::{parse_rational, ratio, Rational};
use coarse_monoid::spaces::{ball, check_axioms, check_quasi_metric, BallKind};
use coarse_monoid::svarcmilnor::{
    run_free_product, run_submonoid_theorem, run_svarc_milnor, FreeProductInput, FreeProductReport, SmError, SmInput,
    SmOutcome, SubmonoidInput, SubmonoidReport,
};
use serde_json::{json, Value};

use crate::render::{algebra, distance, rational, violations, Ctx};
use crate::{CheckArgs, CheckKind, Cli, Command, SideArg, SpaceArg, SubmonoidArgs};

pub struct Outcome {
    pub passed: bool,
    pub result: Value,
}

struct Env {
    config: MonoidConfig,
    monoid: Arc<dyn Monoid>,
    gamma: Arc<Gamma>,
    horizon: u32,
    radius: Rational,
    sample: u32,
}

impl Env {
    fn load(cli: &Cli) -> Result<Self> {
        let c = &cli.common;
        let path = c.monoid.as_ref().ok_or_else(|| anyhow!("--monoid <path> is required"))?;
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let config = parse_monoid_spec(&text).with_context(|| format!("in {}", path.display()))?;
        let monoid = config.monoid();
        let gamma = Arc::new(Gamma::new(WordMetric::new(monoid.clone(), c.horizon)));
        let radius = rat("radius", &c.radius)?;
        if radius <= Rational::from_integer(0.into()) {
            bail!("--radius must be positive");
        }
        Ok(Env { config, monoid, gamma, horizon: c.horizon, radius, sample: c.sample.unwrap_or(c.horizon / 2) })
    }

    fn ctx(&self) -> Ctx<'_> {
        Ctx { gamma: &self.gamma, acting: self.monoid.as_ref() }
    }

    fn element(&self, text: &str) -> Result<Element> {
        self.monoid.parse(text).map_err(|e| anyhow!("element `{text}`: {e}"))
    }

    fn point(&self, text: &str) -> Result<CayleyPoint> {
        if text.starts_with("v:") || text.starts_with("e:") {
            Ok(parse_point(&self.gamma, text)?)
        } else {
            Ok(CayleyPoint::Vertex(self.element(text)?))
        }
    }

    fn format_point(&self, p: &CayleyPoint) -> String {
        self.gamma.format_point(p)
    }

    fn submonoid(&self, args: &SubmonoidArgs) -> Result<SubmonoidSpec> {
        match (args.submonoid.as_deref(), args.generators.is_empty()) {
            (Some("ends-in-identity"), true) => match &self.config {
                MonoidConfig::FreeProduct(fp) => Ok(fp.identity_ending_submonoid()),
                _ => bail!("`ends-in-identity` needs a free_product monoid"),
            },
            (Some("whole"), true) => Ok(SubmonoidSpec::whole()),
            (Some(other), true) => bail!("unknown submonoid `{other}` (expected ends-in-identity or whole)"),
            (None, false) => {
                let gens = args.generators.iter().map(|g| self.element(g)).collect::<Result<Vec<_>>>()?;
                Ok(SubmonoidSpec::generated(self.monoid.as_ref(), gens, self.horizon as usize))
            }
            (Some(_), false) => bail!("give either --submonoid or --generators, not both"),
            (None, true) => bail!("a submonoid is required (--submonoid or --generators)"),
        }
    }
}

fn rat(name: &str, text: &str) -> Result<Rational> {
    parse_rational(text).map_err(|e| anyhow!("--{name} `{text}`: {e}"))
}

fn opt_rat(name: &str, text: &Option<String>, default: &str) -> Result<Rational> {
    rat(name, text.as_deref().unwrap_or(default))
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let env = Env::load(cli)?;
    match &cli.command {
        Command::Dist { x, y } => dist(&env, x, y),
        Command::Ball { center, radius, kind } => ball_cmd(&env, center, radius, kind),
        Command::Check(args) => check(&env, cli, args),
        Command::SvarcMilnor { pair_radius } => svarc_milnor(&env, *pair_radius),
        Command::Submonoid { sub, units } => submonoid(&env, sub, units),
        Command::FreeProduct => free_product(&env),
    }
}

fn dist(env: &Env, x: &str, y: &str) -> Result<Outcome> {
    let (p, q) = (env.point(x)?, env.point(y)?);
    let d = env.gamma.gamma_distance(&p, &q);
    Ok(Outcome {
        passed: true,
        result: json!({ "x": env.format_point(&p), "y": env.format_point(&q), "distance": distance(&d) }),
    })
}

fn ball_cmd(env: &Env, center: &str, radius: &str, kind: &str) -> Result<Outcome> {
    let c = env.element(center)?;
    let r = rat("radius", radius)?;
    let kind: BallKind = kind.parse().map_err(|e: String| anyhow!(e))?;
    let vertices = ball(env.gamma.metric(), &c, &r, kind)?;
    let ctx = env.ctx();
    let cells = match kind {
        BallKind::Strong => Some(CellSet::strong_ball(&env.gamma, &c, &r)?),
        BallKind::Out => Some(CellSet::out_ball(&env.gamma, &c, &r)),
        BallKind::In => None,
    };
    Ok(Outcome {
        passed: true,
        result: json!({
            "center": ctx.element(&c),
            "radius": rational(&r),
            "kind": kind,
            "vertices": vertices.iter().map(|v| ctx.element(v)).collect::<Vec<_>>(),
            "cells": cells.map(|c| ctx.cells(&c)),
        }),
    })
}

fn check(env: &Env, cli: &Cli, args: &CheckArgs) -> Result<Outcome> {
    let monoid = env.monoid.as_ref();
    let h = env.horizon;
    let fmt_point = |p: &CayleyPoint| env.format_point(p);
    match args.which {
        CheckKind::Axioms => {
            let vertices: Vec<Element> =
                env.gamma.metric().out_ball_from(&monoid.identity(), env.sample).into_iter().map(|(m, _)| m).collect();
            let word = check_axioms(env.gamma.metric(), &vertices)?;
            let sample = env.gamma.sample(env.sample, &[ratio(1, 2)])?;
            let gamma = check_axioms(env.gamma.as_ref(), &sample)?;
            Ok(Outcome {
                passed: word.passed() && gamma.passed(),
                result: json!({
                    "word_metric": violations(&word, |m| monoid.format(m)),
                    "gamma": violations(&gamma, fmt_point),
                    "sample_size": sample.len(),
                }),
            })
        }
        CheckKind::Qi => {
            let r = check_inclusion_qi(&env.gamma, env.sample, &[ratio(1, 4), ratio(1, 2), ratio(3, 4)])?;
            Ok(Outcome { passed: r.passed(), result: json!({ "inclusion": violations(&r, fmt_point) }) })
        }
        CheckKind::Quasimetric => {
            let lambda = opt_rat("lambda", &cli.common.lambda, "1")?;
            let mu = opt_rat("mu", &cli.common.mu, "0")?;
            let (passed, report) = match args.space {
                SpaceArg::Word => {
                    let sample: Vec<Element> = env
                        .gamma
                        .metric()
                        .out_ball_from(&monoid.identity(), env.sample)
                        .into_iter()
                        .map(|(m, _)| m)
                        .collect();
                    let r = check_quasi_metric(env.gamma.metric(), &sample, &lambda, &mu)?;
                    (r.passed(), violations(&r, |m| format!("v:{}", monoid.format(m))))
                }
                SpaceArg::Gamma => {
                    let sample = env.gamma.sample(env.sample, &[ratio(1, 2)])?;
                    let r = check_quasi_metric(env.gamma.as_ref(), &sample, &lambda, &mu)?;
                    (r.passed(), violations(&r, fmt_point))
                }
            };
            Ok(Outcome {
                passed,
                result: json!({
                    "lambda": rational(&lambda),
                    "mu": rational(&mu),
                    "space": format!("{:?}", args.space).to_lowercase(),
                    "quasi_metric": report,
                }),
            })
        }
        CheckKind::Cancellative => {
            let side = match args.side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            let v = check_cancellative(monoid, side, h);
            Ok(Outcome { passed: v.status.holds(), result: algebra(monoid, &v) })
        }
        CheckKind::Fgt => {
            let v = check_finite_geometric_type(monoid, h, args.threshold);
            Ok(Outcome { passed: v.status.holds(), result: algebra(monoid, &v) })
        }
        CheckKind::Unitary => {
            let sub = env.submonoid(&args.sub)?;
            let v = check_left_unitary(monoid, &sub, h);
            Ok(Outcome { passed: v.status.holds(), result: algebra(monoid, &v) })
        }
        CheckKind::Action => action(env),
    }
}

fn action(env: &Env) -> Result<Outcome> {
    let action = TranslationAction::regular(env.gamma.clone());
    let ctx = env.ctx();
    let half = env.horizon / 2;
    let x0 = CayleyPoint::Vertex(env.monoid.identity());
    let sample = env.gamma.sample(env.sample, &[ratio(1, 2)])?;
    let laws = check_action_laws(&action, &sample, half);
    let iso = check_isometric_embedding_action(&action, &sample, half)?;
    let ideal = check_idealistic(&action, &x0, half);
    let b = CellSet::strong_ball(&env.gamma, &env.monoid.identity(), &env.radius)?;
    let ambient = env.gamma.sample(half, &[ratio(1, 4), ratio(1, 2), ratio(3, 4)])?;
    let cob = check_cobounded(&action, &b, &ambient, env.horizon);
    let contact = compute_contact_set(&action, &b, env.horizon);
    let passed = laws.passed() && iso.passed() && ideal.passed() && cob.passed();
    Ok(Outcome {
        passed,
        result: json!({
            "action_laws": ctx.property(&laws),
            "isometric_embedding": ctx.property(&iso),
            "idealistic": ctx.property(&ideal),
            "ball": ctx.cells(&b),
            "cobounded": ctx.property(&cob),
            "contact_set": {
                "members": contact.members.iter().map(|m| ctx.acting(m)).collect::<Vec<_>>(),
                "min_positive_separation": contact.min_positive.as_ref().map(distance),
                "suspect": contact.suspect,
            },
        }),
    })
}

fn sm_failure(ctx: &Ctx, err: SmError) -> Result<Outcome> {
    match err {
        SmError::HypothesisFailed { hypothesis, report } => Ok(Outcome {
            passed: false,
            result: json!({ "hypothesis_failed": hypothesis, "report": ctx.property(&report) }),
        }),
        SmError::FactorizationFailed { element, step, reason } => Ok(Outcome {
            passed: false,
            result: json!({ "factorization_failed": { "element": element, "step": step, "reason": reason } }),
        }),
        SmError::Space(e) => Err(e.into()),
    }
}

fn render_outcome(ctx: &Ctx, out: &SmOutcome) -> Value {
    let x = &out.extraction;
    let factorizations: Vec<Value> = out
        .generation
        .factorizations
        .iter()
        .map(|f| {
            json!({
                "element": ctx.acting(&f.element),
                "distance": rational(&f.distance),
                "bound": f.bound,
                "factors": f.factors.iter().map(|s| ctx.acting(s)).collect::<Vec<_>>(),
                "d_s": distance(&f.d_s),
            })
        })
        .collect();
    json!({
        "radius": rational(&x.radius),
        "horizon": x.horizon,
        "B": ctx.cells(&x.b),
        "S": x.s.iter().map(|s| ctx.acting(s)).collect::<Vec<_>>(),
        "S_suspect": x.contact_suspect,
        "C": ctx.cells(&x.c),
        "Q": x.q.iter().map(|(m, d)| json!({ "element": ctx.acting(m), "separation": rational(d) })).collect::<Vec<_>>(),
        "r": rational(&x.r),
        "l": rational(&x.l),
        "lambda": rational(&x.lambda),
        "prechecks": x.prechecks.iter().map(|p| ctx.property(p)).collect::<Vec<_>>(),
        "claim1": ctx.property(&x.claim1),
        "claim2": ctx.property(&x.claim2),
        "generation_bound": ctx.property(&out.generation.report),
        "factorizations": factorizations,
        "qi_upper": ctx.property(&out.qi.upper),
        "qi_lower": ctx.property(&out.qi.lower),
        "coverage": violations(&out.qi.coverage, |p| ctx.gamma.format_point(p)),
    })
}

fn svarc_milnor(env: &Env, pair_radius: Option<u32>) -> Result<Outcome> {
    let action = Arc::new(TranslationAction::regular(env.gamma.clone()));
    let mut input = SmInput::new(action, env.radius.clone(), env.horizon)?;
    if let Some(p) = pair_radius {
        input = input.with_pair_radius(p);
    }
    let ctx = env.ctx();
    match run_svarc_milnor(&input) {
        Ok(out) => Ok(Outcome { passed: out.passed(), result: render_outcome(&ctx, &out) }),
        Err(e) => sm_failure(&ctx, e),
    }
}

fn submonoid(env: &Env, sub: &SubmonoidArgs, units: &[String]) -> Result<Outcome> {
    let m = env.submonoid(sub)?;
    let p = units.iter().map(|u| env.element(u)).collect::<Result<Vec<_>>>()?;
    let input = SubmonoidInput { n: env.monoid.clone(), m, p, horizon: env.horizon, radius: env.radius.clone() };
    match run_submonoid_theorem(&input) {
        Ok(rep) => Ok(Outcome {
            passed: rep.passed(),
            result: render_submonoid(&env.ctx(), env.monoid.as_ref(), &rep),
        }),
        Err(e) => sm_failure(&env.ctx(), e),
    }
}

fn render_free_product(env: &Env, rep: &FreeProductReport) -> Value {
    let gamma = Gamma::new(WordMetric::new(rep.product.clone(), env.horizon));
    let ctx = Ctx { gamma: &gamma, acting: rep.product.as_ref() };
    let sub = &rep.submonoid;
    json!({
        "rank": rep.product.rank(),
        "group_order": rep.product.group().order(),
        "basis": rep.basis.iter().map(|b| ctx.element(b)).collect::<Vec<_>>(),
        "basis_size": rep.basis.len(),
        "words_enumerated": rep.words_enumerated,
        "unique_factorization": ctx.property(&rep.factorization),
        "submonoid": render_submonoid(&ctx, rep.product.as_ref(), sub),
    })
}

fn render_submonoid(ctx: &Ctx, monoid: &dyn Monoid, rep: &SubmonoidReport) -> Value {
    let fmt = |m: &Element| monoid.format(m);
    json!({
        "right_inverses": rep.right_inverses.iter().map(|(p, q)| json!({ "p": fmt(p), "q": fmt(q) })).collect::<Vec<_>>(),
        "mp_equals_n": ctx.property(&rep.mp_equals_n),
        "left_unitary": algebra(monoid, &rep.left_unitary),
        "radius_m": rational(&rep.radius_m),
        "pipeline": render_outcome(ctx, &rep.outcome),
        "realized": {
            "lambda": rational(&rep.realized.lambda),
            "epsilon": rational(&rep.realized.epsilon),
            "mu": rational(&rep.realized.mu),
            "unresolved": rep.realized.unresolved,
            "embedding": violations(&rep.realized.embedding, |(a, b)| format!("{} ↦ {}", fmt(a), fmt(b))),
            "density": violations(&rep.realized.density, |m| fmt(m)),
        },
    })
}

fn free_product(env: &Env) -> Result<Outcome> {
    let MonoidConfig::FreeProduct(fp) = &env.config else {
        bail!("free-product needs a free_product monoid, got `{}`", env.config.kind());
    };
    let input = FreeProductInput {
        rank: fp.rank(),
        group: fp.group().clone(),
        horizon: env.horizon,
        radius: env.radius.clone(),
    };
    match run_free_product(&input) {
        Ok(rep) => Ok(Outcome { passed: rep.passed(), result: render_free_product(env, &rep) }),
        Err(e) => sm_failure(&env.ctx(), e),
    }
}
