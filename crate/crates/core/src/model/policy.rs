use std::collections::BTreeMap;

use super::diagram::{Diagram, VariableKind};
use super::factor::{Factor, VarId};
use crate::error::{LimidError, Result};

/// A deterministic decision rule: the chosen state index of the decision for
/// every parent configuration, in flat index order of the parent scope.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Policy {
    pub decision: String,
    pub choices: Vec<usize>,
}

impl Policy {
    pub fn new(decision: impl Into<String>, choices: Vec<usize>) -> Self {
        Policy {
            decision: decision.into(),
            choices,
        }
    }

    /// The rule as a 0/1 table over the decision's family.
    pub fn to_factor(&self, diagram: &Diagram) -> Result<Factor> {
        let id = diagram.require(&self.decision)?;
        self.validate(diagram, id)?;
        let card = diagram.card(id);
        let scope = diagram.family_scope(id);
        let mut values = vec![0.0; scope.size()];
        for (config, &choice) in self.choices.iter().enumerate() {
            values[config * card + choice] = 1.0;
        }
        Factor::new(scope, values)
    }

    pub fn validate(&self, diagram: &Diagram, id: VarId) -> Result<()> {
        let fail = |message: String| LimidError::InvalidPolicy {
            decision: self.decision.clone(),
            message,
        };
        if diagram.kind(id) != VariableKind::Decision {
            return Err(fail("not a decision variable".into()));
        }
        let configs = diagram.parent_scope(id).size();
        if self.choices.len() != configs {
            return Err(fail(format!(
                "expected {configs} parent configurations, found {}",
                self.choices.len()
            )));
        }
        let card = diagram.card(id);
        if let Some(&bad) = self.choices.iter().find(|&&c| c >= card) {
            return Err(fail(format!("state index {bad} out of range (|domain| = {card})")));
        }
        Ok(())
    }
}

/// One policy per decision, keyed by decision id.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Strategy {
    pub policies: BTreeMap<String, Policy>,
}

impl Strategy {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_policies(policies: impl IntoIterator<Item = Policy>) -> Self {
        Strategy {
            policies: policies
                .into_iter()
                .map(|p| (p.decision.clone(), p))
                .collect(),
        }
    }

    pub fn insert(&mut self, policy: Policy) {
        self.policies.insert(policy.decision.clone(), policy);
    }

    pub fn get(&self, decision: &str) -> Option<&Policy> {
        self.policies.get(decision)
    }

    pub fn len(&self) -> usize {
        self.policies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.policies.is_empty()
    }

    /// The strategy choosing state 0 everywhere.
    pub fn first(diagram: &Diagram) -> Self {
        Strategy::from_policies(diagram.decision_vars().into_iter().map(|d| {
            Policy::new(
                diagram.name(d),
                vec![0; diagram.parent_scope(d).size()],
            )
        }))
    }

    /// Checks that every decision has exactly one well-formed policy.
    pub fn validate(&self, diagram: &Diagram) -> Result<()> {
        for d in diagram.decision_vars() {
            let policy = self
                .get(diagram.name(d))
                .ok_or_else(|| LimidError::MissingPolicy(diagram.name(d).to_string()))?;
            policy.validate(diagram, d)?;
        }
        for name in self.policies.keys() {
            match diagram.lookup(name) {
                Some(id) if diagram.kind(id) == VariableKind::Decision => {}
                _ => {
                    return Err(LimidError::InvalidPolicy {
                        decision: name.clone(),
                        message: "no such decision in the diagram".into(),
                    })
                }
            }
        }
        Ok(())
    }

    /// Policy tables for all decisions, in declaration order.
    pub fn factors(&self, diagram: &Diagram) -> Result<Vec<Factor>> {
        self.validate(diagram)?;
        diagram
            .decision_vars()
            .into_iter()
            .map(|d| self.policies[diagram.name(d)].to_factor(diagram))
            .collect()
    }
}
