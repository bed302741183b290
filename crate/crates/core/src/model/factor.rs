//! Tabular functions over finite domains.
//!
//! A [`Scope`] is an ordered list of variables with their cardinalities. Tables
//! are laid out row-major with the last scope variable varying fastest.

use std::fmt;

use crate::error::{LimidError, Result};

/// Index of a variable inside its diagram's declaration list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Scope {
    vars: Vec<VarId>,
    cards: Vec<usize>,
}

impl Scope {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(pairs: impl IntoIterator<Item = (VarId, usize)>) -> Result<Self> {
        let mut scope = Scope::empty();
        for (var, card) in pairs {
            if scope.contains(var) {
                return Err(LimidError::Structural(format!(
                    "variable {var} appears twice in a scope"
                )));
            }
            if card == 0 {
                return Err(LimidError::Structural(format!(
                    "variable {var} has an empty domain"
                )));
            }
            scope.vars.push(var);
            scope.cards.push(card);
        }
        Ok(scope)
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    /// Number of joint configurations; 1 for the empty scope.
    pub fn size(&self) -> usize {
        self.cards.iter().product()
    }

    pub fn position(&self, var: VarId) -> Option<usize> {
        self.vars.iter().position(|&v| v == var)
    }

    pub fn contains(&self, var: VarId) -> bool {
        self.vars.contains(&var)
    }

    pub fn card_of(&self, var: VarId) -> Option<usize> {
        self.position(var).map(|i| self.cards[i])
    }

    /// `self` followed by the variables of `other` not already present.
    pub fn union(&self, other: &Scope) -> Result<Scope> {
        let mut out = self.clone();
        for (&var, &card) in other.vars.iter().zip(&other.cards) {
            match self.card_of(var) {
                Some(c) if c != card => {
                    return Err(LimidError::Structural(format!(
                        "variable {var} has {c} states in one table and {card} in another"
                    )))
                }
                Some(_) => {}
                None => {
                    out.vars.push(var);
                    out.cards.push(card);
                }
            }
        }
        Ok(out)
    }

    pub fn without(&self, removed: &[VarId]) -> Scope {
        let mut out = Scope::empty();
        for (&var, &card) in self.vars.iter().zip(&self.cards) {
            if !removed.contains(&var) {
                out.vars.push(var);
                out.cards.push(card);
            }
        }
        out
    }

    /// Same variables with the same cardinalities, in any order.
    pub fn same_vars(&self, other: &Scope) -> bool {
        self.len() == other.len()
            && self
                .vars
                .iter()
                .zip(&self.cards)
                .all(|(&v, &c)| other.card_of(v) == Some(c))
    }

    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.len()];
        for i in (0..self.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.cards[i + 1];
        }
        strides
    }

    pub fn decode(&self, mut index: usize, out: &mut [usize]) {
        for i in (0..self.len()).rev() {
            out[i] = index % self.cards[i];
            index /= self.cards[i];
        }
    }

    pub fn encode(&self, assignment: &[usize]) -> usize {
        assignment
            .iter()
            .zip(&self.cards)
            .fold(0, |acc, (&a, &c)| acc * c + a)
    }

    /// For every configuration of `self`, the index of its projection onto `sub`.
    ///
    /// Variables of `sub` missing from `self` are pinned to state 0.
    pub fn projection_map(&self, sub: &Scope) -> Vec<usize> {
        let sub_strides = sub.strides();
        let step: Vec<usize> = self
            .vars
            .iter()
            .map(|&v| sub.position(v).map_or(0, |j| sub_strides[j]))
            .collect();
        let total = self.size();
        let mut map = Vec::with_capacity(total);
        let mut digits = vec![0usize; self.len()];
        let mut idx = 0usize;
        for _ in 0..total {
            map.push(idx);
            for i in (0..self.len()).rev() {
                digits[i] += 1;
                idx += step[i];
                if digits[i] < self.cards[i] {
                    break;
                }
                idx -= step[i] * self.cards[i];
                digits[i] = 0;
            }
        }
        map
    }
}

/// A real-valued table over a scope.
#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    scope: Scope,
    values: Vec<f64>,
}

impl Factor {
    pub fn new(scope: Scope, values: Vec<f64>) -> Result<Self> {
        if values.len() != scope.size() {
            return Err(LimidError::Structural(format!(
                "table has {} entries but its scope has {} configurations",
                values.len(),
                scope.size()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(LimidError::Numeric(format!("non-finite table entry {v}")));
        }
        Ok(Factor { scope, values })
    }

    /// Skips validation; callers guarantee the length and finiteness.
    pub(crate) fn from_raw(scope: Scope, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), scope.size());
        Factor { scope, values }
    }

    pub fn constant(value: f64) -> Self {
        Factor {
            scope: Scope::empty(),
            values: vec![value],
        }
    }

    pub fn filled(scope: Scope, value: f64) -> Self {
        let values = vec![value; scope.size()];
        Factor { scope, values }
    }

    /// Tabulates `f` over every configuration of `scope`.
    pub fn from_fn(scope: Scope, mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let mut assignment = vec![0; scope.len()];
        let values = (0..scope.size())
            .map(|i| {
                scope.decode(i, &mut assignment);
                f(&assignment)
            })
            .collect();
        Factor { scope, values }
    }

    pub fn scope(&self) -> &Scope {
        &self.scope
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn value_at(&self, assignment: &[usize]) -> f64 {
        self.values[self.scope.encode(assignment)]
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    fn pointwise(&self, other: &Factor, op: impl Fn(f64, f64) -> f64) -> Result<Factor> {
        let scope = self.scope.union(&other.scope)?;
        let left = scope.projection_map(&self.scope);
        let right = scope.projection_map(&other.scope);
        let values = left
            .iter()
            .zip(&right)
            .map(|(&i, &j)| op(self.values[i], other.values[j]))
            .collect();
        Ok(Factor { scope, values })
    }

    pub fn product(&self, other: &Factor) -> Result<Factor> {
        self.pointwise(other, |a, b| a * b)
    }

    pub fn sum(&self, other: &Factor) -> Result<Factor> {
        self.pointwise(other, |a, b| a + b)
    }

    /// Sums out every variable of `removed` that appears in the scope.
    pub fn sum_marginal(&self, removed: &[VarId]) -> Factor {
        if !removed.iter().any(|&v| self.scope.contains(v)) {
            return self.clone();
        }
        let scope = self.scope.without(removed);
        let map = self.scope.projection_map(&scope);
        let mut values = vec![0.0; scope.size()];
        for (i, &j) in map.iter().enumerate() {
            values[j] += self.values[i];
        }
        Factor { scope, values }
    }

    /// The same function laid out over `target`, which must hold the same variables.
    pub fn reorder(&self, target: &Scope) -> Result<Factor> {
        if !self.scope.same_vars(target) {
            return Err(LimidError::Structural(
                "cannot reorder a table onto a different set of variables".into(),
            ));
        }
        let map = target.projection_map(&self.scope);
        let values = map.iter().map(|&i| self.values[i]).collect();
        Ok(Factor {
            scope: target.clone(),
            values,
        })
    }
}
