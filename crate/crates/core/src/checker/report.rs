use alloc::string::String;
use alloc::vec::Vec;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    /// No violation, but some cases could only be decided inside the
    /// bounded window or were undefined there.
    #[serde(rename = "RESTRICTED")]
    Restricted,
}

/// Which structure a property quantifies over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Bitrop,
    Space,
}

impl Group {
    pub fn as_str(self) -> &'static str {
        match self {
            Group::Bitrop => "bitrop",
            Group::Space => "space",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// A defining property of the structure.
    Axiom,
    /// A consequence of the axioms.
    Theorem,
    /// Closure of the enumerated window under an operation.
    Closure,
    /// Agreement of a model-specific shortcut with the generic scan.
    Contract,
    /// Agreement with an independent closed form for one model.
    Oracle,
    /// Reported for information; never affects the verdict.
    Measurement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Binding {
    pub var: String,
    pub value: String,
}

/// A violating assignment. `lhs` and `rhs` are the two sides that should
/// have agreed; for existential properties `lhs` is the value no witness
/// maps onto `rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub model: String,
    pub property: String,
    pub bindings: Vec<Binding>,
    pub lhs: String,
    pub rhs: String,
}

impl Counterexample {
    pub fn value(&self, var: &str) -> Option<&str> {
        self.bindings
            .iter()
            .find(|b| b.var == var)
            .map(|b| b.value.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyEntry {
    pub label: &'static str,
    pub group: Group,
    pub kind: Kind,
    pub status: Status,
    pub cases: u64,
    pub restricted: u64,
    pub violations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Parameters {
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub universe: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range: Option<[i64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cases: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub cap: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub model: String,
    pub parameters: Parameters,
    pub properties: Vec<PropertyEntry>,
}

impl AxiomReport {
    pub fn entry(&self, label: &str) -> Option<&PropertyEntry> {
        self.properties.iter().find(|p| p.label == label)
    }

    pub fn status(&self, label: &str) -> Option<Status> {
        self.entry(label).map(|p| p.status)
    }

    /// Failed properties, measurements excluded.
    pub fn failures(&self) -> impl Iterator<Item = &PropertyEntry> {
        self.properties
            .iter()
            .filter(|p| p.status == Status::Fail && p.kind != Kind::Measurement)
    }

    pub fn has_failures(&self) -> bool {
        self.failures().next().is_some()
    }

    pub fn group(&self, group: Group) -> impl Iterator<Item = &PropertyEntry> {
        self.properties.iter().filter(move |p| p.group == group)
    }
}
