//! Valuations `(p, u)` and sets of them.
//!
//! Combination is `(p, u) ⊗ (q, v) = (pq, pv + qu)`, elimination sums both
//! parts, and `φ ≤ ψ` holds when both tables of `φ` are entrywise below those
//! of `ψ`.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::error::{LimidError, Result};
use crate::model::{Factor, Policy, Scope, VarId};

/// Policies that produced a valuation, kept as a shared binary tree so that
/// combining is O(1).
#[derive(Clone, Debug, Default)]
pub struct Trace(Option<Arc<TraceNode>>);

#[derive(Debug)]
enum TraceNode {
    Leaf(Policy),
    Join(Trace, Trace),
}

impl Trace {
    pub fn empty() -> Self {
        Trace(None)
    }

    pub fn leaf(policy: Policy) -> Self {
        Trace(Some(Arc::new(TraceNode::Leaf(policy))))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_none()
    }

    pub fn join(&self, other: &Trace) -> Trace {
        match (&self.0, &other.0) {
            (None, _) => other.clone(),
            (_, None) => self.clone(),
            _ => Trace(Some(Arc::new(TraceNode::Join(self.clone(), other.clone())))),
        }
    }

    /// Leaves from left to right.
    pub fn policies(&self) -> Vec<Policy> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(Trace(node)) = stack.pop() {
            match node.as_deref() {
                None => {}
                Some(TraceNode::Leaf(p)) => out.push(p.clone()),
                Some(TraceNode::Join(l, r)) => {
                    stack.push(r);
                    stack.push(l);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Valuation {
    p: Factor,
    u: Factor,
    trace: Trace,
}

impl PartialEq for Valuation {
    /// Compares tables only; traces are bookkeeping.
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.u == other.u
    }
}

impl Valuation {
    pub fn new(p: Factor, u: Factor) -> Result<Self> {
        if p.scope() != u.scope() {
            return Err(LimidError::Structural(
                "probability and utility parts must share a scope".into(),
            ));
        }
        if p.values().iter().chain(u.values()).any(|&x| x < 0.0) {
            return Err(LimidError::Numeric(
                "valuation entries must be nonnegative".into(),
            ));
        }
        Ok(Valuation {
            p,
            u,
            trace: Trace::empty(),
        })
    }

    /// `(p, 0)` for a probability-like table.
    pub fn probability(p: Factor) -> Result<Self> {
        let u = Factor::filled(p.scope().clone(), 0.0);
        Self::new(p, u)
    }

    /// `(1, u)` for a utility table.
    pub fn utility(u: Factor) -> Result<Self> {
        let p = Factor::filled(u.scope().clone(), 1.0);
        Self::new(p, u)
    }

    /// The neutral element `(1, 0)` over the empty scope.
    pub fn identity() -> Self {
        Valuation {
            p: Factor::constant(1.0),
            u: Factor::constant(0.0),
            trace: Trace::empty(),
        }
    }

    pub fn scalar(p: f64, u: f64) -> Result<Self> {
        Self::new(Factor::constant(p), Factor::constant(u))
    }

    pub fn with_trace(mut self, trace: Trace) -> Self {
        self.trace = trace;
        self
    }

    pub fn scope(&self) -> &Scope {
        self.p.scope()
    }

    pub fn p(&self) -> &Factor {
        &self.p
    }

    pub fn u(&self) -> &Factor {
        &self.u
    }

    pub fn trace(&self) -> &Trace {
        &self.trace
    }

    pub fn combine(&self, other: &Valuation) -> Result<Valuation> {
        let scope = self.scope().union(other.scope())?;
        let left = scope.projection_map(self.scope());
        let right = scope.projection_map(other.scope());
        combine_mapped(self, other, &scope, &left, &right)
    }

    /// Sums out `vars` from both parts.
    pub fn eliminate(&self, vars: &[VarId]) -> Valuation {
        Valuation {
            p: self.p.sum_marginal(vars),
            u: self.u.sum_marginal(vars),
            trace: self.trace.clone(),
        }
    }

    /// The same valuation laid out over `target` (same variables, any order).
    pub fn reorder(&self, target: &Scope) -> Result<Valuation> {
        Ok(Valuation {
            p: self.p.reorder(target)?,
            u: self.u.reorder(target)?,
            trace: self.trace.clone(),
        })
    }

    /// `self ≤ other` entrywise on both parts.
    pub fn is_dominated_by(&self, other: &Valuation) -> Result<bool> {
        if self.scope() == other.scope() {
            return Ok(dominated_raw(self, other));
        }
        let aligned = other.reorder(self.scope())?;
        Ok(dominated_raw(self, &aligned))
    }
}

fn dominated_raw(lo: &Valuation, hi: &Valuation) -> bool {
    lo.p.values()
        .iter()
        .zip(hi.p.values())
        .all(|(a, b)| a <= b)
        && lo.u.values().iter().zip(hi.u.values()).all(|(a, b)| a <= b)
}

/// True when `phi ≤ psi`.
pub fn dominates(psi: &Valuation, phi: &Valuation) -> Result<bool> {
    phi.is_dominated_by(psi)
}

/// Lexicographic order on the probability table, then the utility table.
pub fn canonical_cmp(a: &Valuation, b: &Valuation) -> Ordering {
    lex(a.p.values(), b.p.values()).then_with(|| lex(a.u.values(), b.u.values()))
}

fn lex(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or_else(|| a.len().cmp(&b.len()))
}

fn combine_mapped(
    a: &Valuation,
    b: &Valuation,
    scope: &Scope,
    left: &[usize],
    right: &[usize],
) -> Result<Valuation> {
    let (ap, au, bp, bu) = (a.p.values(), a.u.values(), b.p.values(), b.u.values());
    let mut p = Vec::with_capacity(left.len());
    let mut u = Vec::with_capacity(left.len());
    for (&i, &j) in left.iter().zip(right) {
        p.push(ap[i] * bp[j]);
        u.push(ap[i] * bu[j] + bp[j] * au[i]);
    }
    if p.iter().chain(&u).any(|x| !x.is_finite()) {
        return Err(LimidError::Numeric(
            "combination produced a non-finite entry".into(),
        ));
    }
    Ok(Valuation {
        p: Factor::from_raw(scope.clone(), p),
        u: Factor::from_raw(scope.clone(), u),
        trace: a.trace.join(&b.trace),
    })
}

/// A finite set of valuations sharing one scope (with one variable order).
#[derive(Clone, Debug)]
pub struct ValuationSet {
    scope: Scope,
    members: Vec<Valuation>,
}

impl ValuationSet {
    /// Members are reordered onto the scope of the first one when needed.
    pub fn new(members: Vec<Valuation>) -> Result<Self> {
        let scope = members
            .first()
            .map(|m| m.scope().clone())
            .unwrap_or_default();
        let members = members
            .into_iter()
            .map(|m| {
                if m.scope() == &scope {
                    Ok(m)
                } else {
                    m.reorder(&scope)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ValuationSet { scope, members })
    }

    pub fn singleton(valuation: Valuation) -> Self {
        ValuationSet {
            scope: valuation.scope().clone(),
            members: vec![valuation],
        }
    }

    /// `{(1, 0)}` over the empty scope.
    pub fn identity() -> Self {
        Self::singleton(Valuation::identity())
    }

    pub fn scope(&self) -> &Scope {
        &self.scope
    }

    pub fn members(&self) -> &[Valuation] {
        &self.members
    }

    pub fn into_members(self) -> Vec<Valuation> {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Every combination of a member of `self` with a member of `other`.
    pub fn combine(&self, other: &ValuationSet) -> Result<ValuationSet> {
        let scope = self.scope.union(&other.scope)?;
        let left = scope.projection_map(&self.scope);
        let right = scope.projection_map(&other.scope);
        let mut members = Vec::with_capacity(self.len() * other.len());
        for a in &self.members {
            for b in &other.members {
                members.push(combine_mapped(a, b, &scope, &left, &right)?);
            }
        }
        Ok(ValuationSet { scope, members })
    }

    pub fn eliminate(&self, vars: &[VarId]) -> ValuationSet {
        ValuationSet {
            scope: self.scope.without(vars),
            members: self.members.iter().map(|m| m.eliminate(vars)).collect(),
        }
    }

    /// The maximal members in canonical order. Of several members with equal
    /// tables, the one earliest in the input is kept.
    pub fn maximal(self) -> ValuationSet {
        let ValuationSet { scope, members } = self;
        if members.len() <= 1 {
            return ValuationSet { scope, members };
        }
        let mut keyed: Vec<(f64, usize)> = members
            .iter()
            .enumerate()
            .map(|(i, m)| (m.p.values().iter().chain(m.u.values()).sum(), i))
            .collect();
        // Larger sums first: a dominated member never has the larger sum, so
        // most candidates are rejected by a frontier member already present,
        // and a candidate can only dominate frontier members of equal sum.
        keyed.sort_by(|a, b| {
            b.0.total_cmp(&a.0)
                .then_with(|| canonical_cmp(&members[a.1], &members[b.1]))
                .then(a.1.cmp(&b.1))
        });
        // Utility then probability entries of every member, contiguous and in
        // sorted order. Utilities come first since they usually differ first.
        let width = scope.size();
        let mut rows = Vec::with_capacity(members.len() * 2 * width);
        for &(_, i) in &keyed {
            rows.extend_from_slice(members[i].u.values());
            rows.extend_from_slice(members[i].p.values());
        }
        let row = |k: usize| &rows[k * 2 * width..(k + 1) * 2 * width];
        let below = |lo: usize, hi: usize| row(lo).iter().zip(row(hi)).all(|(a, b)| a <= b);
        let mut frontier: Vec<usize> = Vec::new();
        for (k, &(key, _)) in keyed.iter().enumerate() {
            if frontier.iter().any(|&f| below(k, f)) {
                continue;
            }
            if frontier.last().is_some_and(|&f| keyed[f].0 == key) {
                frontier.retain(|&f| keyed[f].0 != key || !below(f, k));
            }
            frontier.push(k);
        }
        let frontier: Vec<usize> = frontier.into_iter().map(|k| keyed[k].1).collect();
        let mut slots: Vec<Option<Valuation>> = members.into_iter().map(Some).collect();
        let mut kept: Vec<Valuation> = frontier
            .into_iter()
            .map(|i| slots[i].take().expect("frontier indices are distinct"))
            .collect();
        kept.sort_by(canonical_cmp);
        ValuationSet {
            scope,
            members: kept,
        }
    }

    /// Sorts members into canonical order.
    pub fn canonicalize(mut self) -> ValuationSet {
        self.members.sort_by(canonical_cmp);
        self
    }

    /// Largest deviation of any probability entry from 1.
    pub fn max_probability_deviation(&self) -> f64 {
        self.members
            .iter()
            .flat_map(|m| m.p.values())
            .map(|&p| (p - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

pub fn set_combine(a: &ValuationSet, b: &ValuationSet) -> Result<ValuationSet> {
    a.combine(b)
}

pub fn set_eliminate(set: &ValuationSet, vars: &[VarId]) -> ValuationSet {
    set.eliminate(vars)
}

pub fn maximal_set(set: ValuationSet) -> ValuationSet {
    set.maximal()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: f64, u: f64) -> Valuation {
        Valuation::scalar(p, u).unwrap()
    }

    fn tables(set: &ValuationSet) -> Vec<(f64, f64)> {
        set.members()
            .iter()
            .map(|m| (m.p().values()[0], m.u().values()[0]))
            .collect()
    }

    #[test]
    fn identity_is_neutral() {
        let x = Scope::new([(VarId(0), 2)]).unwrap();
        let phi = Valuation::new(
            Factor::new(x.clone(), vec![0.3, 0.7]).unwrap(),
            Factor::new(x, vec![0.1, 0.2]).unwrap(),
        )
        .unwrap();
        assert_eq!(Valuation::identity().combine(&phi).unwrap(), phi);
    }

    #[test]
    fn scalar_combination() {
        let c = s(0.3, 0.0).combine(&s(0.5, 0.0)).unwrap();
        assert_eq!(c, s(0.15, 0.0));
    }

    #[test]
    fn scalar_dominance() {
        assert!(dominates(&s(0.3, 0.6), &s(0.2, 0.5)).unwrap());
        assert!(!dominates(&s(0.2, 0.5), &s(0.3, 0.6)).unwrap());
        assert!(!dominates(&s(0.2, 0.9), &s(0.3, 0.6)).unwrap());
        assert!(!dominates(&s(0.3, 0.6), &s(0.2, 0.9)).unwrap());
        assert!(dominates(&s(0.2, 0.9), &s(0.2, 0.9)).unwrap());
    }

    #[test]
    fn maximal_of_a_chain() {
        let set = ValuationSet::new(vec![s(0.2, 0.5), s(0.3, 0.6), s(0.1, 0.1)]).unwrap();
        assert_eq!(tables(&set.maximal()), vec![(0.3, 0.6)]);
    }

    #[test]
    fn maximal_keeps_first_of_equal_members() {
        let a = s(0.5, 0.5).with_trace(Trace::leaf(Policy::new("D", vec![0])));
        let b = s(0.5, 0.5).with_trace(Trace::leaf(Policy::new("D", vec![1])));
        let out = ValuationSet::new(vec![a, b]).unwrap().maximal();
        assert_eq!(out.len(), 1);
        assert_eq!(out.members()[0].trace().policies()[0].choices, vec![0]);
    }

    #[test]
    fn set_combination_cross_product() {
        let a = ValuationSet::new(vec![s(0.1, 0.0), s(0.03, 0.0)]).unwrap();
        let b = ValuationSet::new(vec![s(0.05, 0.0), s(0.4, 0.0)]).unwrap();
        let c = a.combine(&b).unwrap();
        let got = tables(&c);
        let want = [0.005, 0.04, 0.0015, 0.012];
        assert_eq!(got.len(), 4);
        for (g, w) in got.iter().zip(want) {
            assert!((g.0 - w).abs() < 1e-15 && g.1 == 0.0);
        }
    }

    #[test]
    fn trace_order_is_left_to_right() {
        let t = Trace::leaf(Policy::new("A", vec![0]))
            .join(&Trace::empty())
            .join(&Trace::leaf(Policy::new("B", vec![1])));
        let names: Vec<_> = t.policies().into_iter().map(|p| p.decision).collect();
        assert_eq!(names, ["A", "B"]);
    }
}
