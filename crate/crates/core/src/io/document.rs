use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{Diagram, DiagramParts, Variable, VariableKind};

/// On-disk form of a diagram. Fields are declared in key order so the
/// serialized text is canonical.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDocument {
    #[serde(default)]
    pub arcs: Vec<(String, String)>,
    #[serde(default)]
    pub cpts: BTreeMap<String, Vec<f64>>,
    #[serde(default = "default_strict")]
    pub strict_normalization: bool,
    #[serde(default)]
    pub utilities: BTreeMap<String, Vec<f64>>,
    pub variables: Vec<VariableDocument>,
}

fn default_strict() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableDocument {
    pub id: String,
    pub kind: KindDocument,
    #[serde(default)]
    pub states: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindDocument {
    Chance,
    Decision,
    Value,
}

impl From<VariableKind> for KindDocument {
    fn from(kind: VariableKind) -> Self {
        match kind {
            VariableKind::Chance => KindDocument::Chance,
            VariableKind::Decision => KindDocument::Decision,
            VariableKind::Value => KindDocument::Value,
        }
    }
}

impl From<KindDocument> for VariableKind {
    fn from(kind: KindDocument) -> Self {
        match kind {
            KindDocument::Chance => VariableKind::Chance,
            KindDocument::Decision => VariableKind::Decision,
            KindDocument::Value => VariableKind::Value,
        }
    }
}

impl DiagramDocument {
    pub fn from_diagram(diagram: &Diagram) -> Self {
        let parts = diagram.to_parts();
        DiagramDocument {
            arcs: parts.arcs,
            cpts: parts.cpts,
            strict_normalization: parts.strict_normalization,
            utilities: parts.utilities,
            variables: parts
                .variables
                .into_iter()
                .map(|v| VariableDocument {
                    id: v.id,
                    kind: v.kind.into(),
                    states: v.states,
                })
                .collect(),
        }
    }

    pub fn into_diagram(self) -> Result<Diagram> {
        Diagram::from_parts(DiagramParts {
            variables: self
                .variables
                .into_iter()
                .map(|v| Variable {
                    id: v.id,
                    kind: v.kind.into(),
                    states: v.states,
                })
                .collect(),
            arcs: self.arcs,
            cpts: self.cpts,
            utilities: self.utilities,
            strict_normalization: self.strict_normalization,
        })
    }
}

pub fn parse_diagram(text: &str) -> Result<Diagram> {
    let doc: DiagramDocument = serde_json::from_str(text)?;
    doc.into_diagram()
}

/// Canonical text: two-space indentation, sorted keys, arcs grouped by child
/// in declaration order, shortest round-tripping numbers, trailing newline.
pub fn serialize_diagram(diagram: &Diagram) -> String {
    let mut text = serde_json::to_string_pretty(&DiagramDocument::from_diagram(diagram))
        .expect("documents always serialize");
    text.push('\n');
    text
}
