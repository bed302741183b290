//! Expected utility of a fixed strategy.

use super::diagram::Diagram;
use super::factor::{Factor, VarId};
use super::policy::Strategy;
use crate::error::Result;

/// Product of every chance table and policy table, a factor over C ∪ D.
///
/// Materializes the full joint; meant for small diagrams and tests.
pub fn joint_distribution(diagram: &Diagram, strategy: &Strategy) -> Result<Factor> {
    let mut joint = Factor::constant(1.0);
    for c in diagram.chance_vars() {
        if let Some(cpt) = diagram.cpt(c) {
            joint = joint.product(cpt)?;
        }
    }
    for f in strategy.factors(diagram)? {
        joint = joint.product(&f)?;
    }
    Ok(joint)
}

/// Expected utility of `strategy`: for every value node, the sum over all
/// configurations of the chance tables, the policy tables and its utility.
pub fn expected_utility(diagram: &Diagram, strategy: &Strategy) -> Result<f64> {
    let mut base: Vec<Factor> = diagram
        .chance_vars()
        .into_iter()
        .filter_map(|c| diagram.cpt(c).cloned())
        .collect();
    base.extend(strategy.factors(diagram)?);
    let mut total = 0.0;
    for v in diagram.value_vars() {
        let mut factors = base.clone();
        factors.extend(diagram.utility(v).cloned());
        total += sum_product(factors)?;
    }
    Ok(total)
}

/// Sums every variable out of the product of `factors`, eliminating greedily
/// by smallest intermediate table.
pub fn sum_product(mut factors: Vec<Factor>) -> Result<f64> {
    loop {
        let mut best: Option<(usize, VarId)> = None;
        let mut candidates: Vec<VarId> = factors
            .iter()
            .flat_map(|f| f.scope().vars().iter().copied())
            .collect();
        candidates.sort();
        candidates.dedup();
        if candidates.is_empty() {
            break;
        }
        for &var in &candidates {
            let mut size = 1usize;
            let mut seen: Vec<VarId> = Vec::new();
            for f in factors.iter().filter(|f| f.scope().contains(var)) {
                for (&v, &c) in f.scope().vars().iter().zip(f.scope().cards()) {
                    if !seen.contains(&v) {
                        seen.push(v);
                        size = size.saturating_mul(c);
                    }
                }
            }
            if best.is_none_or(|(s, _)| size < s) {
                best = Some((size, var));
            }
        }
        let (_, var) = best.expect("candidates is nonempty");
        let (touching, rest): (Vec<Factor>, Vec<Factor>) =
            factors.into_iter().partition(|f| f.scope().contains(var));
        let mut iter = touching.into_iter();
        let mut acc = iter.next().expect("var came from some factor");
        for f in iter {
            acc = acc.product(&f)?;
        }
        factors = rest;
        factors.push(acc.sum_marginal(&[var]));
    }
    Ok(factors.iter().map(|f| f.values()[0]).product())
}
