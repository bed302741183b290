use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigUint;

use super::factor::{Factor, Scope, VarId};
use crate::error::{LimidError, Result};

/// Tolerance for the per-column normalization check of chance tables.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VariableKind {
    Chance,
    Decision,
    Value,
}

impl VariableKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VariableKind::Chance => "chance",
            VariableKind::Decision => "decision",
            VariableKind::Value => "value",
        }
    }
}

impl fmt::Display for VariableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for VariableKind {
    type Err = LimidError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chance" => Ok(VariableKind::Chance),
            "decision" => Ok(VariableKind::Decision),
            "value" => Ok(VariableKind::Value),
            other => Err(LimidError::Parse(format!("unknown variable kind `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub id: String,
    pub kind: VariableKind,
    /// Empty exactly for value variables.
    pub states: Vec<String>,
}

impl Variable {
    pub fn chance(id: impl Into<String>, states: &[&str]) -> Self {
        Self::with_kind(id, VariableKind::Chance, states)
    }

    pub fn decision(id: impl Into<String>, states: &[&str]) -> Self {
        Self::with_kind(id, VariableKind::Decision, states)
    }

    pub fn value(id: impl Into<String>) -> Self {
        Self::with_kind(id, VariableKind::Value, &[])
    }

    fn with_kind(id: impl Into<String>, kind: VariableKind, states: &[&str]) -> Self {
        Variable {
            id: id.into(),
            kind,
            states: states.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn card(&self) -> usize {
        self.states.len()
    }
}

/// Everything needed to build a [`Diagram`], keyed by variable id.
///
/// Tables are flat lists over the variable's family (chance) or parent set
/// (value), with parents in declaration order, the child last, last fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagramParts {
    pub variables: Vec<Variable>,
    pub arcs: Vec<(String, String)>,
    pub cpts: BTreeMap<String, Vec<f64>>,
    pub utilities: BTreeMap<String, Vec<f64>>,
    pub strict_normalization: bool,
}

impl Default for DiagramParts {
    fn default() -> Self {
        DiagramParts {
            variables: Vec::new(),
            arcs: Vec::new(),
            cpts: BTreeMap::new(),
            utilities: BTreeMap::new(),
            strict_normalization: true,
        }
    }
}

impl DiagramParts {
    pub fn add_variable(&mut self, variable: Variable) -> &mut Self {
        self.variables.push(variable);
        self
    }

    pub fn add_arc(&mut self, parent: impl Into<String>, child: impl Into<String>) -> &mut Self {
        self.arcs.push((parent.into(), child.into()));
        self
    }

    pub fn set_cpt(&mut self, id: impl Into<String>, values: Vec<f64>) -> &mut Self {
        self.cpts.insert(id.into(), values);
        self
    }

    pub fn set_utility(&mut self, id: impl Into<String>, values: Vec<f64>) -> &mut Self {
        self.utilities.insert(id.into(), values);
        self
    }

    pub fn build(self) -> Result<Diagram> {
        Diagram::from_parts(self)
    }
}

/// A limited memory influence diagram: the DAG plus chance and utility tables.
///
/// Immutable once built; every transformation returns a new diagram.
#[derive(Clone, Debug)]
pub struct Diagram {
    variables: Vec<Variable>,
    index: HashMap<String, VarId>,
    parents: Vec<Vec<VarId>>,
    children: Vec<Vec<VarId>>,
    /// CPT for chance variables, utility table for value variables.
    tables: Vec<Option<Factor>>,
    strict_normalization: bool,
}

impl PartialEq for Diagram {
    fn eq(&self, other: &Self) -> bool {
        self.variables == other.variables
            && self.parents == other.parents
            && self.tables == other.tables
            && self.strict_normalization == other.strict_normalization
    }
}

impl Diagram {
    pub fn from_parts(parts: DiagramParts) -> Result<Diagram> {
        let DiagramParts {
            variables,
            arcs,
            mut cpts,
            mut utilities,
            strict_normalization,
        } = parts;

        let mut index = HashMap::new();
        for (i, var) in variables.iter().enumerate() {
            let path = format!("variables[{i}]");
            if var.id.is_empty() {
                return Err(LimidError::invalid(path, "empty variable id"));
            }
            if index.insert(var.id.clone(), VarId(i as u32)).is_some() {
                return Err(LimidError::invalid(
                    path,
                    format!("duplicate variable id `{}`", var.id),
                ));
            }
            match var.kind {
                VariableKind::Value if !var.states.is_empty() => {
                    return Err(LimidError::invalid(
                        format!("{path}.states"),
                        "value variables have no states",
                    ))
                }
                VariableKind::Decision if var.states.len() < 2 => {
                    return Err(LimidError::invalid(
                        format!("{path}.states"),
                        "decision variables need at least two states",
                    ))
                }
                VariableKind::Chance if var.states.is_empty() => {
                    return Err(LimidError::invalid(
                        format!("{path}.states"),
                        "chance variables need at least one state",
                    ))
                }
                _ => {}
            }
            let mut seen = std::collections::HashSet::new();
            for state in &var.states {
                if !seen.insert(state) {
                    return Err(LimidError::invalid(
                        format!("{path}.states"),
                        format!("duplicate state label `{state}`"),
                    ));
                }
            }
        }

        let n = variables.len();
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        for (k, (p, c)) in arcs.iter().enumerate() {
            let path = format!("arcs[{k}]");
            let pid = *index
                .get(p)
                .ok_or_else(|| LimidError::invalid(&path, format!("unknown variable `{p}`")))?;
            let cid = *index
                .get(c)
                .ok_or_else(|| LimidError::invalid(&path, format!("unknown variable `{c}`")))?;
            if pid == cid {
                return Err(LimidError::invalid(path, format!("self loop on `{p}`")));
            }
            if variables[pid.index()].kind == VariableKind::Value {
                return Err(LimidError::invalid(
                    path,
                    format!("value variable `{p}` cannot have children"),
                ));
            }
            if parents[cid.index()].contains(&pid) {
                return Err(LimidError::invalid(path, format!("duplicate arc {p} -> {c}")));
            }
            parents[cid.index()].push(pid);
            children[pid.index()].push(cid);
        }
        for list in parents.iter_mut().chain(children.iter_mut()) {
            list.sort();
        }
        if let Some(cycle_at) = find_cycle(&children) {
            return Err(LimidError::invalid(
                "arcs",
                format!("the arcs form a cycle through `{}`", variables[cycle_at].id),
            ));
        }

        let mut tables = Vec::with_capacity(n);
        for (i, var) in variables.iter().enumerate() {
            let cards = |ids: &[VarId]| -> Vec<(VarId, usize)> {
                ids.iter().map(|&p| (p, variables[p.index()].card())).collect()
            };
            match var.kind {
                VariableKind::Chance => {
                    let values = cpts.remove(&var.id).ok_or_else(|| {
                        LimidError::invalid(format!("cpts.{}", var.id), "missing table")
                    })?;
                    let mut pairs = cards(&parents[i]);
                    pairs.push((VarId(i as u32), var.card()));
                    let scope = Scope::new(pairs)?;
                    let table = checked_table(&format!("cpts.{}", var.id), scope, values)?;
                    if strict_normalization {
                        check_normalized(&variables, &var.id, &table)?;
                    }
                    tables.push(Some(table));
                }
                VariableKind::Value => {
                    let values = utilities.remove(&var.id).ok_or_else(|| {
                        LimidError::invalid(format!("utilities.{}", var.id), "missing table")
                    })?;
                    let scope = Scope::new(cards(&parents[i]))?;
                    tables.push(Some(checked_table(
                        &format!("utilities.{}", var.id),
                        scope,
                        values,
                    )?));
                }
                VariableKind::Decision => tables.push(None),
            }
        }
        if let Some(id) = cpts.keys().next() {
            return Err(LimidError::invalid(
                format!("cpts.{id}"),
                "table given for a variable that is not a chance variable",
            ));
        }
        if let Some(id) = utilities.keys().next() {
            return Err(LimidError::invalid(
                format!("utilities.{id}"),
                "table given for a variable that is not a value variable",
            ));
        }

        Ok(Diagram {
            variables,
            index,
            parents,
            children,
            tables,
            strict_normalization,
        })
    }

    /// Inverse of [`Diagram::from_parts`]; arcs are listed child by child in
    /// declaration order.
    pub fn to_parts(&self) -> DiagramParts {
        let mut parts = DiagramParts {
            variables: self.variables.clone(),
            strict_normalization: self.strict_normalization,
            ..DiagramParts::default()
        };
        for (i, var) in self.variables.iter().enumerate() {
            for &p in &self.parents[i] {
                parts.arcs.push((self.name(p).to_string(), var.id.clone()));
            }
            if let Some(table) = &self.tables[i] {
                let values = table.values().to_vec();
                match var.kind {
                    VariableKind::Chance => parts.cpts.insert(var.id.clone(), values),
                    _ => parts.utilities.insert(var.id.clone(), values),
                };
            }
        }
        parts
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn ids(&self) -> impl Iterator<Item = VarId> {
        (0..self.variables.len() as u32).map(VarId)
    }

    pub fn variable(&self, id: VarId) -> &Variable {
        &self.variables[id.index()]
    }

    pub fn name(&self, id: VarId) -> &str {
        &self.variables[id.index()].id
    }

    pub fn kind(&self, id: VarId) -> VariableKind {
        self.variables[id.index()].kind
    }

    pub fn card(&self, id: VarId) -> usize {
        self.variables[id.index()].card()
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<VarId> {
        self.lookup(name)
            .ok_or_else(|| LimidError::Structural(format!("unknown variable `{name}`")))
    }

    pub fn parents(&self, id: VarId) -> &[VarId] {
        &self.parents[id.index()]
    }

    pub fn children(&self, id: VarId) -> &[VarId] {
        &self.children[id.index()]
    }

    pub fn has_arc(&self, parent: VarId, child: VarId) -> bool {
        self.parents[child.index()].contains(&parent)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (VarId, VarId)> + '_ {
        self.ids()
            .flat_map(move |c| self.parents(c).iter().map(move |&p| (p, c)))
    }

    pub fn cpt(&self, id: VarId) -> Option<&Factor> {
        match self.kind(id) {
            VariableKind::Chance => self.tables[id.index()].as_ref(),
            _ => None,
        }
    }

    pub fn utility(&self, id: VarId) -> Option<&Factor> {
        match self.kind(id) {
            VariableKind::Value => self.tables[id.index()].as_ref(),
            _ => None,
        }
    }

    pub fn strict_normalization(&self) -> bool {
        self.strict_normalization
    }

    pub fn ids_of_kind(&self, kind: VariableKind) -> Vec<VarId> {
        self.ids().filter(|&v| self.kind(v) == kind).collect()
    }

    pub fn chance_vars(&self) -> Vec<VarId> {
        self.ids_of_kind(VariableKind::Chance)
    }

    pub fn decision_vars(&self) -> Vec<VarId> {
        self.ids_of_kind(VariableKind::Decision)
    }

    pub fn value_vars(&self) -> Vec<VarId> {
        self.ids_of_kind(VariableKind::Value)
    }

    /// Chance and decision variables, in declaration order.
    pub fn eliminable_vars(&self) -> Vec<VarId> {
        self.ids()
            .filter(|&v| self.kind(v) != VariableKind::Value)
            .collect()
    }

    pub fn scope_of(&self, ids: &[VarId]) -> Scope {
        Scope::new(ids.iter().map(|&v| (v, self.card(v))))
            .expect("diagram variables are distinct with nonempty domains")
    }

    pub fn parent_scope(&self, id: VarId) -> Scope {
        self.scope_of(self.parents(id))
    }

    /// Parents in declaration order followed by the variable itself; just the
    /// parents for value variables.
    pub fn family_scope(&self, id: VarId) -> Scope {
        let mut ids = self.parents(id).to_vec();
        if self.kind(id) != VariableKind::Value {
            ids.push(id);
        }
        self.scope_of(&ids)
    }

    /// Number of policies of a decision, `|Ω_D|^{|Ω_pa|}`.
    pub fn policy_count(&self, decision: VarId) -> BigUint {
        let configs = self.parent_scope(decision).size();
        BigUint::from(self.card(decision)).pow(configs as u32)
    }

    /// Size of the strategy space.
    pub fn strategy_count(&self) -> BigUint {
        self.decision_vars()
            .into_iter()
            .map(|d| self.policy_count(d))
            .fold(BigUint::from(1u32), |acc, c| acc * c)
    }

    /// Labels of a parent configuration, comma-joined; empty for no parents.
    pub fn configuration_label(&self, scope: &Scope, index: usize) -> String {
        let mut assignment = vec![0; scope.len()];
        scope.decode(index, &mut assignment);
        scope
            .vars()
            .iter()
            .zip(&assignment)
            .map(|(&v, &s)| self.variable(v).states[s].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// All descendants of `id`, excluding `id` itself.
    pub fn descendants(&self, id: VarId) -> Vec<VarId> {
        let mut seen = vec![false; self.len()];
        let mut stack = self.children(id).to_vec();
        while let Some(v) = stack.pop() {
            if !std::mem::replace(&mut seen[v.index()], true) {
                stack.extend_from_slice(self.children(v));
            }
        }
        self.ids().filter(|v| seen[v.index()]).collect()
    }

    /// Variables in an order where every parent precedes its children.
    pub fn topological_order(&self) -> Vec<VarId> {
        let mut indegree: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut ready: std::collections::BTreeSet<VarId> =
            self.ids().filter(|v| indegree[v.index()] == 0).collect();
        let mut out = Vec::with_capacity(self.len());
        while let Some(v) = ready.pop_first() {
            out.push(v);
            for &c in self.children(v) {
                indegree[c.index()] -= 1;
                if indegree[c.index()] == 0 {
                    ready.insert(c);
                }
            }
        }
        out
    }
}

fn checked_table(path: &str, scope: Scope, values: Vec<f64>) -> Result<Factor> {
    if values.len() != scope.size() {
        return Err(LimidError::invalid(
            path,
            format!(
                "expected {} entries, found {}",
                scope.size(),
                values.len()
            ),
        ));
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(LimidError::invalid(
            format!("{path}[{i}]"),
            "entries must be finite",
        ));
    }
    Factor::new(scope, values)
}

fn check_normalized(variables: &[Variable], id: &str, table: &Factor) -> Result<()> {
    let scope = table.scope();
    let child_card = *scope.cards().last().expect("family includes the child");
    for (column, chunk) in table.values().chunks(child_card).enumerate() {
        let negative = chunk.iter().any(|&p| p < 0.0);
        let sum: f64 = chunk.iter().sum();
        if negative || (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            let parents = Scope::new(
                scope.vars()[..scope.len() - 1]
                    .iter()
                    .zip(scope.cards())
                    .map(|(&v, &c)| (v, c)),
            )?;
            let mut assignment = vec![0; parents.len()];
            parents.decode(column, &mut assignment);
            let configuration = parents
                .vars()
                .iter()
                .zip(&assignment)
                .map(|(&v, &s)| {
                    let var = &variables[v.index()];
                    format!("{}={}", var.id, var.states[s])
                })
                .collect::<Vec<_>>()
                .join(", ");
            if negative {
                return Err(LimidError::invalid(
                    format!("cpts.{id}"),
                    format!("negative probability for parent configuration ({configuration})"),
                ));
            }
            return Err(LimidError::Normalization {
                variable: id.to_string(),
                configuration,
                sum,
            });
        }
    }
    Ok(())
}

fn find_cycle(children: &[Vec<VarId>]) -> Option<usize> {
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; children.len()];
    for start in 0..children.len() {
        if state[start] != 0 {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        state[start] = 1;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if let Some(&child) = children[node].get(*next) {
                *next += 1;
                match state[child.index()] {
                    0 => {
                        state[child.index()] = 1;
                        stack.push((child.index(), 0));
                    }
                    1 => return Some(child.index()),
                    _ => {}
                }
            } else {
                state[node] = 2;
                stack.pop();
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_node() -> DiagramParts {
        let mut parts = DiagramParts::default();
        parts
            .add_variable(Variable::chance("X", &["a", "b"]))
            .add_variable(Variable::value("V"))
            .add_arc("X", "V")
            .set_cpt("X", vec![0.4, 0.6])
            .set_utility("V", vec![1.0, 0.0]);
        parts
    }

    #[test]
    fn builds_and_roundtrips_parts() {
        let d = two_node().build().unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.children(VarId(0)), &[VarId(1)]);
        let again = Diagram::from_parts(d.to_parts()).unwrap();
        assert_eq!(again, d);
    }

    #[test]
    fn value_nodes_have_no_children() {
        let mut parts = two_node();
        parts
            .add_variable(Variable::chance("Y", &["a", "b"]))
            .add_arc("V", "Y")
            .set_cpt("Y", vec![0.5, 0.5, 0.5, 0.5]);
        let err = parts.build().unwrap_err();
        assert!(err.to_string().contains("cannot have children"), "{err}");
    }

    #[test]
    fn cycles_are_rejected() {
        let mut parts = DiagramParts::default();
        parts
            .add_variable(Variable::chance("A", &["0", "1"]))
            .add_variable(Variable::chance("B", &["0", "1"]))
            .add_arc("A", "B")
            .add_arc("B", "A")
            .set_cpt("A", vec![0.5; 4])
            .set_cpt("B", vec![0.5; 4]);
        assert!(parts.build().unwrap_err().to_string().contains("cycle"));
    }

    #[test]
    fn normalization_error_names_variable_and_configuration() {
        let mut parts = DiagramParts::default();
        parts
            .add_variable(Variable::chance("P", &["lo", "hi"]))
            .add_variable(Variable::chance("X", &["a", "b"]))
            .add_arc("P", "X")
            .set_cpt("P", vec![0.5, 0.5])
            .set_cpt("X", vec![0.5, 0.5, 0.5, 0.4]);
        match parts.clone().build().unwrap_err() {
            LimidError::Normalization {
                variable,
                configuration,
                ..
            } => {
                assert_eq!(variable, "X");
                assert_eq!(configuration, "P=hi");
            }
            other => panic!("unexpected {other}"),
        }
        parts.strict_normalization = false;
        assert!(parts.build().is_ok());
    }

    #[test]
    fn table_length_mismatch_has_path() {
        let mut parts = two_node();
        parts.set_utility("V", vec![1.0]);
        let err = parts.build().unwrap_err().to_string();
        assert!(err.contains("utilities.V"), "{err}");
    }

    #[test]
    fn policy_and_strategy_counts() {
        let mut parts = DiagramParts::default();
        parts
            .add_variable(Variable::chance("X", &["0", "1", "2"]))
            .add_variable(Variable::decision("D", &["a", "b"]))
            .add_variable(Variable::decision("E", &["a", "b"]))
            .add_arc("X", "D")
            .add_arc("D", "E")
            .set_cpt("X", vec![1.0 / 3.0; 3]);
        let d = parts.build().unwrap();
        assert_eq!(d.policy_count(VarId(1)), BigUint::from(8u32));
        assert_eq!(d.policy_count(VarId(2)), BigUint::from(4u32));
        assert_eq!(d.strategy_count(), BigUint::from(32u32));
    }
}
