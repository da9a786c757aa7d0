use std::time::Duration;

use coarse_monoid::actions::{Item, PropertyReport, PropertyWitness};
use coarse_monoid::cayley::{CayleyPoint, CellSet, Gamma};
use coarse_monoid::monoids::{AlgebraVerdict, Element, Monoid};
use coarse_monoid::numerics::{format_rational, Rational, TruncatedDistance};
use coarse_monoid::spaces::{Verdict, ViolationReport};
use serde_json::{json, Value};

use crate::commands::Outcome;
use crate::{Cli, Command};

pub fn distance(d: &TruncatedDistance) -> Value {
    json!({ "value": serde_json::to_value(d).expect("wire format"), "text": d.to_string() })
}

pub fn rational(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn verdict(v: Verdict) -> Value {
    serde_json::to_value(v).expect("verdict")
}

/// Formats elements of the acting monoid and of the monoid whose Cayley
/// graph is acted on.
pub struct Ctx<'a> {
    pub gamma: &'a Gamma,
    pub acting: &'a dyn Monoid,
}

impl Ctx<'_> {
    pub fn element(&self, e: &Element) -> Value {
        Value::String(self.gamma.metric().format(e))
    }

    pub fn acting(&self, e: &Element) -> Value {
        Value::String(self.acting.format(e))
    }

    pub fn point(&self, p: &CayleyPoint) -> Value {
        Value::String(self.gamma.format_point(p))
    }

    fn item(&self, item: &Item) -> Value {
        match item {
            Item::Acting(e) => self.acting(e),
            Item::Element(e) => self.element(e),
            Item::Point(p) => self.point(p),
            Item::Distance(d) => distance(d),
            Item::Rational(r) => rational(r),
            Item::Factors(fs) => Value::Array(fs.iter().map(|f| self.acting(f)).collect()),
            Item::Count(n) => json!(n),
        }
    }

    fn witness(&self, w: &PropertyWitness) -> Value {
        let items: Vec<Value> = w.items.iter().map(|(k, v)| json!({ "role": k, "value": self.item(v) })).collect();
        json!({ "relation": w.relation, "items": items })
    }

    pub fn property(&self, r: &PropertyReport) -> Value {
        json!({
            "property": r.property,
            "verdict": verdict(r.verdict),
            "horizon": r.horizon,
            "checked": r.checked,
            "violations": r.violations,
            "unresolved": r.unresolved,
            "witnesses": r.witnesses.iter().map(|w| self.witness(w)).collect::<Vec<_>>(),
        })
    }

    pub fn cells(&self, c: &CellSet) -> Value {
        json!(c.to_strings(self.gamma))
    }
}

pub fn violations<P: Clone>(r: &ViolationReport<P>, fmt: impl Fn(&P) -> String) -> Value {
    serde_json::to_value(r.clone().map_points(fmt)).expect("report")
}

pub fn algebra(monoid: &dyn Monoid, v: &AlgebraVerdict) -> Value {
    let witnesses: Vec<Value> = v
        .witnesses
        .iter()
        .map(|w| {
            let elements: Vec<Value> =
                w.elements.iter().map(|(k, e)| json!({ "role": k, "element": monoid.format(e) })).collect();
            json!({ "law": w.law, "elements": elements })
        })
        .collect();
    json!({
        "property": v.property,
        "status": serde_json::to_value(v.status).expect("status"),
        "horizon": v.horizon,
        "searched": v.searched,
        "witnesses": witnesses,
    })
}

fn command_echo(cmd: &Command) -> Value {
    match cmd {
        Command::Dist { x, y } => json!({ "name": "dist", "x": x, "y": y }),
        Command::Ball { center, radius, kind } => {
            json!({ "name": "ball", "center": center, "radius": radius, "kind": kind })
        }
        Command::Check(c) => json!({
            "name": "check",
            "check": format!("{:?}", c.which).to_lowercase(),
            "side": format!("{:?}", c.side).to_lowercase(),
            "threshold": c.threshold,
            "space": format!("{:?}", c.space).to_lowercase(),
            "submonoid": c.sub.submonoid,
            "generators": c.sub.generators,
        }),
        Command::SvarcMilnor { pair_radius } => json!({ "name": "svarc-milnor", "pair_radius": pair_radius }),
        Command::Submonoid { sub, units } => json!({
            "name": "submonoid",
            "submonoid": sub.submonoid,
            "generators": sub.generators,
            "units": units,
        }),
        Command::FreeProduct => json!({ "name": "free-product" }),
    }
}

/// The full report and the process exit code.
pub fn document(cli: &Cli, outcome: anyhow::Result<Outcome>, elapsed: Option<Duration>) -> (Value, u8) {
    let c = &cli.common;
    let mut doc = json!({
        "tool": "coarse-monoid",
        "version": env!("CARGO_PKG_VERSION"),
        "input": {
            "command": command_echo(&cli.command),
            "monoid": c.monoid.as_ref().map(|p| p.display().to_string()),
            "horizon": c.horizon,
            "radius": c.radius,
            "lambda": c.lambda,
            "epsilon": c.epsilon,
            "mu": c.mu,
            "sample": c.sample,
            "seed": c.seed,
        },
    });
    let code = match outcome {
        Ok(o) => {
            doc["verdict"] = json!(if o.passed { "pass" } else { "fail" });
            doc["result"] = o.result;
            if o.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            doc["verdict"] = json!("error");
            doc["error"] = json!(format!("{e:#}"));
            eprintln!("error: {e:#}");
            2
        }
    };
    if let Some(d) = elapsed {
        doc["duration_ms"] = json!(d.as_millis() as u64);
    }
    (doc, code)
}
