//! MEU-preserving reductions and utility scaling.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::model::{Diagram, VarId, VariableKind};

/// Affine map taking the utilities of a diagram into `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingInfo {
    /// Smallest utility entry.
    pub k: f64,
    /// Largest utility entry.
    pub big_k: f64,
    pub value_count: usize,
}

impl ScalingInfo {
    /// All utilities equal (or there are none): every strategy is optimal.
    pub fn trivial(&self) -> bool {
        self.k == self.big_k
    }

    pub fn identity(value_count: usize) -> Self {
        ScalingInfo {
            k: 0.0,
            big_k: 1.0,
            value_count,
        }
    }
}

/// Chance and decision variables without children.
pub fn find_barren(diagram: &Diagram) -> BTreeSet<VarId> {
    diagram
        .ids()
        .filter(|&v| diagram.kind(v) != VariableKind::Value && diagram.children(v).is_empty())
        .collect()
}

/// Whether every trail between `x` and `y` is blocked by `w`.
pub fn is_d_separated(
    diagram: &Diagram,
    x: &BTreeSet<VarId>,
    y: &BTreeSet<VarId>,
    w: &BTreeSet<VarId>,
) -> bool {
    let reachable = active_reachable(diagram, x, w);
    !y.iter().any(|v| reachable[v.index()])
}

/// Nodes connected to `sources` by a trail that is active given `w`.
fn active_reachable(diagram: &Diagram, sources: &BTreeSet<VarId>, w: &BTreeSet<VarId>) -> Vec<bool> {
    let n = diagram.len();
    let observed: Vec<bool> = (0..n).map(|i| w.contains(&VarId(i as u32))).collect();
    // A collider is open iff it or one of its descendants is observed,
    // i.e. iff it is an ancestor of (or in) `w`.
    let mut opens_collider = observed.clone();
    let mut stack: Vec<VarId> = w.iter().copied().collect();
    while let Some(v) = stack.pop() {
        for &p in diagram.parents(v) {
            if !opens_collider[p.index()] {
                opens_collider[p.index()] = true;
                stack.push(p);
            }
        }
    }

    // Direction of arrival: `up` when coming from a child, `down` from a parent.
    let mut visited = vec![[false; 2]; n];
    let mut reachable = vec![false; n];
    let mut queue: Vec<(VarId, bool)> = sources.iter().map(|&s| (s, true)).collect();
    while let Some((v, up)) = queue.pop() {
        let slot = &mut visited[v.index()][up as usize];
        if std::mem::replace(slot, true) {
            continue;
        }
        let seen = observed[v.index()];
        if !seen {
            reachable[v.index()] = true;
        }
        if up {
            if !seen {
                queue.extend(diagram.parents(v).iter().map(|&p| (p, true)));
                queue.extend(diagram.children(v).iter().map(|&c| (c, false)));
            }
        } else {
            if !seen {
                queue.extend(diagram.children(v).iter().map(|&c| (c, false)));
            }
            if opens_collider[v.index()] {
                queue.extend(diagram.parents(v).iter().map(|&p| (p, true)));
            }
        }
    }
    reachable
}

/// Arcs `X → D` into decisions such that `X` is d-separated from the value
/// descendants of `D` given the other parents of `D` and `D` itself.
pub fn nonrequisite_arcs(diagram: &Diagram) -> Vec<(VarId, VarId)> {
    let mut out = Vec::new();
    for d in diagram.decision_vars() {
        let values: BTreeSet<VarId> = diagram
            .descendants(d)
            .into_iter()
            .filter(|&v| diagram.kind(v) == VariableKind::Value)
            .collect();
        for &x in diagram.parents(d) {
            let mut w: BTreeSet<VarId> = diagram.parents(d).iter().copied().collect();
            w.remove(&x);
            w.insert(d);
            if values.is_empty() || is_d_separated(diagram, &BTreeSet::from([x]), &values, &w) {
                out.push((x, d));
            }
        }
    }
    out
}

/// Removes nonrequisite arcs and barren nodes until neither remains.
pub fn minimize(diagram: &Diagram) -> Result<Diagram> {
    let mut current = diagram.clone();
    loop {
        let arcs = nonrequisite_arcs(&current);
        if !arcs.is_empty() {
            current = remove_arcs(&current, &arcs)?;
            continue;
        }
        let barren = find_barren(&current);
        if barren.is_empty() {
            return Ok(current);
        }
        current = remove_nodes(&current, &barren)?;
    }
}

/// Drops arcs into decisions; decision tables are implicit so nothing else changes.
fn remove_arcs(diagram: &Diagram, arcs: &[(VarId, VarId)]) -> Result<Diagram> {
    let names: BTreeSet<(String, String)> = arcs
        .iter()
        .map(|&(p, c)| (diagram.name(p).to_string(), diagram.name(c).to_string()))
        .collect();
    let mut parts = diagram.to_parts();
    parts.arcs.retain(|arc| !names.contains(arc));
    Diagram::from_parts(parts)
}

fn remove_nodes(diagram: &Diagram, nodes: &BTreeSet<VarId>) -> Result<Diagram> {
    let names: BTreeSet<String> = nodes.iter().map(|&v| diagram.name(v).to_string()).collect();
    let mut parts = diagram.to_parts();
    parts.variables.retain(|v| !names.contains(&v.id));
    parts.arcs.retain(|(_, c)| !names.contains(c));
    parts.cpts.retain(|id, _| !names.contains(id));
    Diagram::from_parts(parts)
}

/// Maps every utility entry `u` to `(u − k)/(K − k)`.
///
/// A trivial diagram (all entries equal, or no value nodes) gets all-zero
/// utilities.
pub fn scale_utilities(diagram: &Diagram) -> Result<(Diagram, ScalingInfo)> {
    let values = diagram.value_vars();
    let entries = values
        .iter()
        .flat_map(|&v| diagram.utility(v).expect("value node").values().iter().copied());
    let (k, big_k) = entries.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
        (lo.min(x), hi.max(x))
    });
    let info = if values.is_empty() {
        ScalingInfo {
            k: 0.0,
            big_k: 0.0,
            value_count: 0,
        }
    } else {
        ScalingInfo {
            k,
            big_k,
            value_count: values.len(),
        }
    };
    if !info.trivial() && info.k == 0.0 && info.big_k == 1.0 {
        return Ok((diagram.clone(), info));
    }
    let range = info.big_k - info.k;
    let mut parts = diagram.to_parts();
    for table in parts.utilities.values_mut() {
        for x in table.iter_mut() {
            *x = if info.trivial() { 0.0 } else { (*x - info.k) / range };
        }
    }
    Ok((Diagram::from_parts(parts)?, info))
}

/// Expected utility in original units from a scaled one.
pub fn unscale_meu(v: f64, info: &ScalingInfo) -> f64 {
    (info.big_k - info.k) * v + info.k * info.value_count as f64
}
