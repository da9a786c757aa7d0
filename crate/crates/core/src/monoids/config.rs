//! JSON monoid spec documents.
//!
//! ```json
//! {"type":"free","rank":2}
//! {"type":"finite_group","elements":["e","g"],"table":[[0,1],[1,0]]}
//! {"type":"free_product","free_rank":1,"group":{"type":"finite_group", ...}}
//! {"type":"rewriting","generators":["p","q"],"rules":[["pq",""]],"confluent":true}
//! ```

use std::sync::Arc;

use serde::Deserialize;
use thiserror::Error;

use super::{FiniteMonoid, FreeMonoid, FreeProduct, Monoid, MonoidError, RewritingMonoid};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("validation error: {0}")]
    Validation(String),
}

impl From<MonoidError> for ConfigError {
    fn from(e: MonoidError) -> Self {
        ConfigError::Validation(e.to_string())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum SpecDoc {
    Free(FreeDoc),
    FiniteGroup(TableDoc),
    Table(TableDoc),
    FreeProduct(FreeProductDoc),
    Rewriting(RewritingDoc),
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Kind {
    Free,
    FiniteGroup,
    Table,
    FreeProduct,
    Rewriting,
}

#[derive(Deserialize)]
struct Probe {
    #[serde(rename = "type")]
    kind: Kind,
}

// The flat structs repeat the `type` field so the top level can be read
// straight from text, keeping line and column information in errors.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct FreeDoc {
    #[serde(rename = "type", default)]
    _kind: Option<String>,
    rank: usize,
    generators: Option<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableDoc {
    #[serde(rename = "type", default)]
    _kind: Option<String>,
    elements: Vec<String>,
    table: Vec<Vec<usize>>,
    generators: Option<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct FreeProductDoc {
    #[serde(rename = "type", default)]
    _kind: Option<String>,
    free_rank: usize,
    group: Box<SpecDoc>,
    free_generators: Option<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RewritingDoc {
    #[serde(rename = "type", default)]
    _kind: Option<String>,
    generators: Vec<String>,
    rules: Vec<(String, String)>,
    confluent: bool,
    step_cap: Option<usize>,
}

/// A monoid built from a spec document, keeping its concrete flavor.
#[derive(Debug, Clone)]
pub enum MonoidConfig {
    Free(FreeMonoid),
    FiniteGroup(FiniteMonoid),
    Table(FiniteMonoid),
    FreeProduct(FreeProduct),
    Rewriting(RewritingMonoid),
}

impl MonoidConfig {
    pub fn kind(&self) -> &'static str {
        match self {
            MonoidConfig::Free(_) => "free",
            MonoidConfig::FiniteGroup(_) => "finite_group",
            MonoidConfig::Table(_) => "table",
            MonoidConfig::FreeProduct(_) => "free_product",
            MonoidConfig::Rewriting(_) => "rewriting",
        }
    }

    pub fn monoid(&self) -> Arc<dyn Monoid> {
        match self {
            MonoidConfig::Free(m) => Arc::new(m.clone()),
            MonoidConfig::FiniteGroup(m) | MonoidConfig::Table(m) => Arc::new(m.clone()),
            MonoidConfig::FreeProduct(m) => Arc::new(m.clone()),
            MonoidConfig::Rewriting(m) => Arc::new(m.clone()),
        }
    }
}

/// Parses and validates a monoid spec document.
pub fn parse_monoid_spec(text: &str) -> Result<MonoidConfig, ConfigError> {
    let probe: Probe = from_text(text)?;
    let doc = match probe.kind {
        Kind::Free => SpecDoc::Free(from_text(text)?),
        Kind::FiniteGroup => SpecDoc::FiniteGroup(from_text(text)?),
        Kind::Table => SpecDoc::Table(from_text(text)?),
        Kind::FreeProduct => SpecDoc::FreeProduct(from_text(text)?),
        Kind::Rewriting => SpecDoc::Rewriting(from_text(text)?),
    };
    build(doc)
}

fn from_text<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn index_generators(elements: &[String], generators: Option<Vec<String>>) -> Result<Option<Vec<usize>>, ConfigError> {
    generators
        .map(|gens| {
            gens.iter()
                .map(|g| {
                    elements
                        .iter()
                        .position(|e| e == g)
                        .ok_or_else(|| ConfigError::Validation(format!("generator `{g}` is not an element")))
                })
                .collect()
        })
        .transpose()
}

fn build(doc: SpecDoc) -> Result<MonoidConfig, ConfigError> {
    Ok(match doc {
        SpecDoc::Free(FreeDoc { rank, generators, .. }) => {
            let m = match generators {
                Some(names) if names.len() != rank => {
                    return Err(ConfigError::Validation(format!(
                        "rank {rank} but {} generator names",
                        names.len()
                    )))
                }
                Some(names) => FreeMonoid::with_names(names)?,
                None => FreeMonoid::new(rank),
            };
            MonoidConfig::Free(m)
        }
        SpecDoc::FiniteGroup(TableDoc { elements, table, generators, .. }) => {
            let gens = index_generators(&elements, generators)?;
            MonoidConfig::FiniteGroup(FiniteMonoid::group(elements, table, gens)?)
        }
        SpecDoc::Table(TableDoc { elements, table, generators, .. }) => {
            let gens = index_generators(&elements, generators)?;
            MonoidConfig::Table(FiniteMonoid::from_table(elements, table, gens)?)
        }
        SpecDoc::FreeProduct(FreeProductDoc { free_rank, group, free_generators, .. }) => {
            if free_rank == 0 {
                return Err(ConfigError::Validation("free_rank must be at least 1".into()));
            }
            let group = match build(*group)? {
                MonoidConfig::FiniteGroup(g) => g,
                MonoidConfig::Table(t) if t.is_group() => t,
                MonoidConfig::Table(t) => {
                    let names = t.element_names().to_vec();
                    let table = (0..t.order()).map(|i| (0..t.order()).map(|j| t.mul_index(i, j)).collect()).collect();
                    FiniteMonoid::group(names, table, Some(t.generator_indices().to_vec()))?
                }
                other => {
                    return Err(ConfigError::Validation(format!(
                        "free product factor must be a finite group, got `{}`",
                        other.kind()
                    )))
                }
            };
            let fp = match free_generators {
                Some(names) if names.len() != free_rank => {
                    return Err(ConfigError::Validation(format!(
                        "free_rank {free_rank} but {} free generator names",
                        names.len()
                    )))
                }
                Some(names) => FreeProduct::with_free_names(names, group)?,
                None => FreeProduct::new(free_rank, group)?,
            };
            MonoidConfig::FreeProduct(fp)
        }
        SpecDoc::Rewriting(RewritingDoc { generators, rules, confluent, step_cap, .. }) => {
            if !confluent {
                return Err(ConfigError::Validation(
                    "rewriting systems must be asserted confluent (\"confluent\": true)".into(),
                ));
            }
            let m = RewritingMonoid::from_strings(&generators, &rules)?;
            match step_cap {
                Some(cap) => {
                    let system = m.system().clone().with_step_cap(cap);
                    MonoidConfig::Rewriting(RewritingMonoid::new(generators, system)?)
                }
                None => MonoidConfig::Rewriting(m),
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_rank_two() {
        let c = parse_monoid_spec(r#"{"type":"free","rank":2}"#).unwrap();
        assert_eq!(c.kind(), "free");
        assert_eq!(c.monoid().generator_names(), &["f1", "f2"]);
        let c = parse_monoid_spec(r#"{"type":"free","rank":2,"generators":["a","b"]}"#).unwrap();
        assert_eq!(c.monoid().generator_names(), &["a", "b"]);
    }

    #[test]
    fn free_product_with_group() {
        let text = r#"{"type":"free_product","free_rank":1,"group":{"type":"finite_group","elements":["e","g"],"table":[[0,1],[1,0]]}}"#;
        let c = parse_monoid_spec(text).unwrap();
        let m = c.monoid();
        assert_eq!(m.generator_names(), &["f", "g"]);
        let gf = m.parse("gf").unwrap();
        assert_eq!(m.format(&m.product(&gf, &gf)), "gfgf");
    }

    #[test]
    fn unknown_type_is_a_parse_error() {
        assert!(matches!(parse_monoid_spec(r#"{"type":"unknown"}"#), Err(ConfigError::Parse { .. })));
        let err = parse_monoid_spec("{\n  \"type\": \"free\",\n  \"rank\": -1\n}").unwrap_err();
        assert!(matches!(err, ConfigError::Parse { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn non_group_table_names_the_failing_law() {
        let text = r#"{"type":"finite_group","elements":["e","z"],"table":[[0,1],[1,1]]}"#;
        match parse_monoid_spec(text) {
            Err(ConfigError::Validation(msg)) => assert!(msg.contains("`z` has no inverse"), "{msg}"),
            other => panic!("{other:?}"),
        }
        let text = r#"{"type":"table","elements":["e","a","b"],"table":[[0,1,2],[1,2,0],[2,2,2]]}"#;
        match parse_monoid_spec(text) {
            Err(ConfigError::Validation(msg)) => assert!(msg.contains("associativity"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rewriting_requires_confluence_assertion() {
        let ok = r#"{"type":"rewriting","generators":["p","q"],"rules":[["pq",""]],"confluent":true}"#;
        let m = parse_monoid_spec(ok).unwrap().monoid();
        assert_eq!(m.format(&m.parse("qpqp").unwrap()), "qp");
        let bad = r#"{"type":"rewriting","generators":["p","q"],"rules":[["pq",""]],"confluent":false}"#;
        assert!(matches!(parse_monoid_spec(bad), Err(ConfigError::Validation(_))));
    }
}
