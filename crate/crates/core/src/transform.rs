//! Replacing decisions that have parents by gadgets of parentless decisions.
//!
//! A decision `D` with `m` parent configurations `π_1 < … < π_m` (flat index
//! order) becomes decisions `D_1 … D_m` and deterministic chance nodes
//! `X_1 … X_m`. `X_i` copies `X_{i−1}` except under `π_i`, where it also has to
//! agree with `D_i`; `X_m` then takes the place of `D` for its children. The
//! gadget occupies `D`'s declaration slot, so the children's tables keep their
//! layout.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{LimidError, Result};
use crate::model::{Diagram, Policy, Scope, Strategy, VarId, Variable, VariableKind};

/// The gadget that replaced one decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    pub decision: String,
    /// Parents of the original decision, in declaration order.
    pub parents: Vec<String>,
    /// `D_1 … D_m`, where `D_i` picks the action under the i-th parent configuration.
    pub decisions: Vec<String>,
    /// `X_1 … X_m`.
    pub chain: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransformMap {
    pub gadgets: Vec<Gadget>,
}

impl TransformMap {
    pub fn is_empty(&self) -> bool {
        self.gadgets.is_empty()
    }
}

/// Applies the transformation to every decision with parents.
pub fn make_decisions_parentless(diagram: &Diagram) -> Result<(Diagram, TransformMap)> {
    transform_where(diagram, |_| true)
}

/// Applies the transformation to the decisions with parents accepted by `select`.
pub fn transform_where(
    diagram: &Diagram,
    mut select: impl FnMut(VarId) -> bool,
) -> Result<(Diagram, TransformMap)> {
    let targets: Vec<VarId> = diagram
        .decision_vars()
        .into_iter()
        .filter(|&d| !diagram.parents(d).is_empty() && select(d))
        .collect();
    if targets.is_empty() {
        return Ok((diagram.clone(), TransformMap::default()));
    }

    let mut taken: HashSet<String> = diagram.variables().iter().map(|v| v.id.clone()).collect();
    let mut fresh = |base: String| {
        let mut name = base;
        while !taken.insert(name.clone()) {
            name.push('_');
        }
        name
    };
    let mut gadgets: HashMap<VarId, Gadget> = HashMap::new();
    for &d in &targets {
        let m = diagram.parent_scope(d).size();
        let name = diagram.name(d);
        gadgets.insert(
            d,
            Gadget {
                decision: name.to_string(),
                parents: diagram
                    .parents(d)
                    .iter()
                    .map(|&p| diagram.name(p).to_string())
                    .collect(),
                decisions: (1..=m).map(|i| fresh(format!("{name}__d{i}"))).collect(),
                chain: (1..=m).map(|i| fresh(format!("{name}__x{i}"))).collect(),
            },
        );
    }
    // Name that stands in for `v` as a parent.
    let stand_in = |v: VarId| -> String {
        match gadgets.get(&v) {
            Some(g) => g.chain.last().expect("m ≥ 1").clone(),
            None => diagram.name(v).to_string(),
        }
    };

    let mut parts = diagram.to_parts();
    parts.strict_normalization = false;
    parts.variables.clear();
    for v in diagram.ids() {
        let var = diagram.variable(v);
        match gadgets.get(&v) {
            None => parts.variables.push(var.clone()),
            Some(g) => {
                for (di, xi) in g.decisions.iter().zip(&g.chain) {
                    parts.variables.push(Variable {
                        id: di.clone(),
                        kind: VariableKind::Decision,
                        states: var.states.clone(),
                    });
                    parts.variables.push(Variable {
                        id: xi.clone(),
                        kind: VariableKind::Chance,
                        states: var.states.clone(),
                    });
                }
            }
        }
    }
    let position: HashMap<&str, usize> = parts
        .variables
        .iter()
        .enumerate()
        .map(|(i, v)| (v.id.as_str(), i))
        .collect();

    let mut arcs = Vec::new();
    for (p, c) in diagram.arcs() {
        if gadgets.contains_key(&c) {
            continue;
        }
        arcs.push((stand_in(p), diagram.name(c).to_string()));
    }
    let mut cpts = BTreeMap::new();
    for &d in &targets {
        let g = &gadgets[&d];
        let card = diagram.card(d);
        let parent_names: Vec<String> = diagram.parents(d).iter().map(|&p| stand_in(p)).collect();
        let parent_cards: Vec<usize> = diagram.parents(d).iter().map(|&p| diagram.card(p)).collect();
        for i in 0..g.chain.len() {
            let xi = &g.chain[i];
            let di = &g.decisions[i];
            let prev = i.checked_sub(1).map(|j| g.chain[j].clone());
            let mut family: Vec<(String, usize)> = parent_names
                .iter()
                .cloned()
                .zip(parent_cards.iter().copied())
                .collect();
            family.extend(prev.clone().map(|x| (x, card)));
            family.push((di.clone(), card));
            for (p, _) in &family {
                arcs.push((p.clone(), xi.clone()));
            }
            family.sort_by_key(|(n, _)| position[n.as_str()]);
            family.push((xi.clone(), card));
            cpts.insert(xi.clone(), chain_table(&family, &parent_names, prev.as_deref(), di, i));
        }
    }
    parts.arcs = arcs;
    parts.cpts.extend(cpts);
    let transformed = Diagram::from_parts(parts)?;

    let map = TransformMap {
        gadgets: targets.iter().map(|d| gadgets[d].clone()).collect(),
    };
    Ok((transformed, map))
}

/// Table of `X_{i+1}` (0-based `i`) over `family` (parents in declaration
/// order, then the node itself).
fn chain_table(
    family: &[(String, usize)],
    pa_d: &[String],
    prev: Option<&str>,
    di: &str,
    i: usize,
) -> Vec<f64> {
    let scope = Scope::new(
        family
            .iter()
            .enumerate()
            .map(|(k, (_, c))| (VarId(k as u32), *c)),
    )
    .expect("gadget families are distinct");
    let slot = |name: &str| family.iter().position(|(n, _)| n == name).expect("in family");
    let pa_slots: Vec<usize> = pa_d.iter().map(|n| slot(n)).collect();
    let pa_cards: Vec<usize> = pa_slots.iter().map(|&s| family[s].1).collect();
    let prev_slot = prev.map(&slot);
    let d_slot = slot(di);
    let x_slot = family.len() - 1;
    let mut assignment = vec![0; family.len()];
    (0..scope.size())
        .map(|k| {
            scope.decode(k, &mut assignment);
            let config = pa_slots
                .iter()
                .zip(&pa_cards)
                .fold(0, |acc, (&s, &c)| acc * c + assignment[s]);
            let x = assignment[x_slot];
            let copies = prev_slot.is_none_or(|s| assignment[s] == x);
            let hit = if config == i {
                copies && assignment[d_slot] == x
            } else {
                copies
            };
            if hit {
                1.0
            } else {
                0.0
            }
        })
        .collect()
}

/// Strategy for the original diagram: `δ_D(π_i)` is the action of `D_i`.
pub fn lift_strategy(transformed: &Strategy, map: &TransformMap) -> Result<Strategy> {
    let mut out = transformed.clone();
    for g in &map.gadgets {
        let mut choices = Vec::with_capacity(g.decisions.len());
        for di in &g.decisions {
            let policy = out
                .policies
                .remove(di)
                .ok_or_else(|| LimidError::MissingPolicy(di.clone()))?;
            match policy.choices.as_slice() {
                [c] => choices.push(*c),
                _ => {
                    return Err(LimidError::InvalidPolicy {
                        decision: di.clone(),
                        message: "gadget decisions are parentless".into(),
                    })
                }
            }
        }
        out.insert(Policy::new(g.decision.clone(), choices));
    }
    Ok(out)
}

/// Strategy for the transformed diagram that mirrors `original`.
pub fn lower_strategy(original: &Strategy, map: &TransformMap) -> Result<Strategy> {
    let mut out = original.clone();
    for g in &map.gadgets {
        let policy = out
            .policies
            .remove(&g.decision)
            .ok_or_else(|| LimidError::MissingPolicy(g.decision.clone()))?;
        if policy.choices.len() != g.decisions.len() {
            return Err(LimidError::InvalidPolicy {
                decision: g.decision.clone(),
                message: format!(
                    "expected {} parent configurations, found {}",
                    g.decisions.len(),
                    policy.choices.len()
                ),
            });
        }
        for (di, &c) in g.decisions.iter().zip(&policy.choices) {
            out.insert(Policy::new(di.clone(), vec![c]));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{expected_utility, DiagramParts};

    /// X → D → V with a ternary X and binary D.
    fn small() -> Diagram {
        let mut parts = DiagramParts::default();
        parts
            .add_variable(Variable::chance("X", &["a", "b", "c"]))
            .add_variable(Variable::decision("D", &["add", "remove"]))
            .add_variable(Variable::value("V"))
            .add_arc("X", "D")
            .add_arc("D", "V")
            .add_arc("X", "V")
            .set_cpt("X", vec![0.2, 0.3, 0.5])
            .set_utility("V", vec![0.1, 0.9, 0.8, 0.2, 0.4, 0.6]);
        parts.build().unwrap()
    }

    #[test]
    fn parentless_decisions_are_left_alone() {
        let mut parts = DiagramParts::default();
        parts
            .add_variable(Variable::decision("D", &["0", "1"]))
            .add_variable(Variable::value("V"))
            .add_arc("D", "V")
            .set_utility("V", vec![0.0, 1.0]);
        let d = parts.build().unwrap();
        let (t, map) = make_decisions_parentless(&d).unwrap();
        assert!(map.is_empty());
        assert_eq!(t, d);
    }

    #[test]
    fn gadget_shape() {
        let (t, map) = make_decisions_parentless(&small()).unwrap();
        assert_eq!(map.gadgets.len(), 1);
        let g = &map.gadgets[0];
        assert_eq!(g.decisions, ["D__d1", "D__d2", "D__d3"]);
        assert_eq!(g.chain, ["D__x1", "D__x2", "D__x3"]);
        assert!(!t.strict_normalization());
        for d in t.decision_vars() {
            assert!(t.parents(d).is_empty());
        }
        let v = t.require("V").unwrap();
        let names: Vec<&str> = t.parents(v).iter().map(|&p| t.name(p)).collect();
        assert_eq!(names, ["X", "D__x3"]);
        assert_eq!(t.utility(v).unwrap().values(), small().utility(VarId(2)).unwrap().values());
    }

    #[test]
    fn chain_tables_follow_the_case_split() {
        let (t, _) = make_decisions_parentless(&small()).unwrap();
        for i in 1..=3usize {
            let x = t.require(&format!("D__x{i}")).unwrap();
            let table = t.cpt(x).unwrap();
            assert_eq!(table.values().len(), t.family_scope(x).size());
            let scope = table.scope().clone();
            let names: Vec<&str> = scope.vars().iter().map(|&v| t.name(v)).collect();
            let mut a = vec![0; scope.len()];
            for k in 0..scope.size() {
                scope.decode(k, &mut a);
                let get = |n: &str| a[names.iter().position(|m| *m == n).unwrap()];
                let pa = get("X");
                let xi = get(&format!("D__x{i}"));
                let di = get(&format!("D__d{i}"));
                let copies = i == 1 || get(&format!("D__x{}", i - 1)) == xi;
                let want = if pa + 1 != i { copies } else { copies && xi == di };
                assert_eq!(table.values()[k], if want { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn lifted_strategies_keep_their_value() {
        let d = small();
        let (t, map) = make_decisions_parentless(&d).unwrap();
        for bits in 0..8usize {
            let choices = vec![bits & 1, (bits >> 1) & 1, (bits >> 2) & 1];
            let s = Strategy::from_policies([Policy::new("D", choices.clone())]);
            let lowered = lower_strategy(&s, &map).unwrap();
            assert_eq!(lift_strategy(&lowered, &map).unwrap(), s);
            let a = expected_utility(&d, &s).unwrap();
            let b = expected_utility(&t, &lowered).unwrap();
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }
}
