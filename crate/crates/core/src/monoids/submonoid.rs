use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use super::{Element, Monoid};

type Membership = dyn Fn(&Element) -> bool + Send + Sync;

/// A submonoid given by a membership test, optionally with generators.
#[derive(Clone)]
pub struct SubmonoidSpec {
    name: String,
    membership: Arc<Membership>,
    generators: Option<Vec<Element>>,
}

impl SubmonoidSpec {
    pub fn from_predicate(name: impl Into<String>, member: impl Fn(&Element) -> bool + Send + Sync + 'static) -> Self {
        SubmonoidSpec { name: name.into(), membership: Arc::new(member), generators: None }
    }

    pub fn whole() -> Self {
        Self::from_predicate("whole", |_| true)
    }

    /// Submonoid generated by `generators`, enumerated up to encoding length
    /// `length_cap`. Membership is exact for elements of length at most the
    /// cap whenever lengths never shrink under multiplication (free monoids).
    pub fn generated(monoid: &dyn Monoid, generators: Vec<Element>, length_cap: usize) -> Self {
        let mut members = HashSet::from([monoid.identity()]);
        let mut queue = VecDeque::from([monoid.identity()]);
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = monoid.product(&x, g);
                if y.len() <= length_cap && members.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        let names: Vec<String> = generators.iter().map(|g| monoid.format(g)).collect();
        SubmonoidSpec {
            name: format!("⟨{}⟩", names.join(", ")),
            membership: Arc::new(move |e| members.contains(e)),
            generators: Some(generators),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn contains(&self, e: &Element) -> bool {
        (self.membership)(e)
    }

    pub fn generators(&self) -> Option<&[Element]> {
        self.generators.as_deref()
    }
}

impl fmt::Debug for SubmonoidSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubmonoidSpec").field("name", &self.name).finish_non_exhaustive()
    }
}
