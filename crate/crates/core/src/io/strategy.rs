use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{LimidError, Result};
use crate::model::{Diagram, Policy, Strategy};

/// Policies keyed by decision, then by the comma-joined parent state labels
/// (the empty string when the decision has no parents).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyDocument {
    pub policies: BTreeMap<String, BTreeMap<String, String>>,
}

impl StrategyDocument {
    pub fn from_strategy(diagram: &Diagram, strategy: &Strategy) -> Result<Self> {
        strategy.validate(diagram)?;
        let mut policies = BTreeMap::new();
        for d in diagram.decision_vars() {
            let policy = &strategy.policies[diagram.name(d)];
            let scope = diagram.parent_scope(d);
            let states = &diagram.variable(d).states;
            let table = policy
                .choices
                .iter()
                .enumerate()
                .map(|(config, &choice)| {
                    (diagram.configuration_label(&scope, config), states[choice].clone())
                })
                .collect();
            policies.insert(diagram.name(d).to_string(), table);
        }
        Ok(StrategyDocument { policies })
    }

    pub fn to_strategy(&self, diagram: &Diagram) -> Result<Strategy> {
        let mut strategy = Strategy::new();
        for (name, table) in &self.policies {
            let d = diagram
                .lookup(name)
                .ok_or_else(|| LimidError::InvalidPolicy {
                    decision: name.clone(),
                    message: "no such decision in the diagram".into(),
                })?;
            let scope = diagram.parent_scope(d);
            let fail = |message: String| LimidError::InvalidPolicy {
                decision: name.clone(),
                message,
            };
            let labels: HashMap<String, usize> = (0..scope.size())
                .map(|config| (diagram.configuration_label(&scope, config), config))
                .collect();
            let mut choices = vec![None; scope.size()];
            for (key, state) in table {
                let config = *labels
                    .get(key)
                    .ok_or_else(|| fail(format!("unknown parent configuration `{key}`")))?;
                let choice = diagram
                    .variable(d)
                    .states
                    .iter()
                    .position(|s| s == state)
                    .ok_or_else(|| fail(format!("unknown state `{state}`")))?;
                choices[config] = Some(choice);
            }
            let choices = choices
                .into_iter()
                .enumerate()
                .map(|(config, c)| {
                    c.ok_or_else(|| {
                        fail(format!(
                            "no action for parent configuration `{}`",
                            diagram.configuration_label(&scope, config)
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            strategy.insert(Policy::new(name.clone(), choices));
        }
        strategy.validate(diagram)?;
        Ok(strategy)
    }
}

pub fn parse_strategy(diagram: &Diagram, text: &str) -> Result<Strategy> {
    let doc: StrategyDocument = serde_json::from_str(text)?;
    doc.to_strategy(diagram)
}

pub fn serialize_strategy(diagram: &Diagram, strategy: &Strategy) -> Result<String> {
    let doc = StrategyDocument::from_strategy(diagram, strategy)?;
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    Ok(text)
}
