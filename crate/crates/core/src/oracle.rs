//! Brute force over the strategy space, for checking the solvers.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::clock::Stopwatch;
use crate::error::{LimidError, Result};
use crate::lve::{enumerate_policies, SolveResult, SolveStats};
use crate::model::{expected_utility, Diagram, Factor, Policy, Strategy};

pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// Iterator over all strategies, lexicographic with the first decision (in
/// declaration order) most significant.
pub struct Strategies {
    policies: Vec<Vec<Policy>>,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for Strategies {
    type Item = Strategy;

    fn next(&mut self) -> Option<Strategy> {
        if self.done {
            return None;
        }
        let current = Strategy::from_policies(
            self.digits
                .iter()
                .zip(&self.policies)
                .map(|(&i, options)| options[i].clone()),
        );
        self.done = true;
        for k in (0..self.digits.len()).rev() {
            self.digits[k] += 1;
            if self.digits[k] < self.policies[k].len() {
                self.done = false;
                break;
            }
            self.digits[k] = 0;
        }
        Some(current)
    }
}

pub fn check_cap(diagram: &Diagram, cap: u64) -> Result<BigUint> {
    let count = diagram.strategy_count();
    if count.to_u64().is_none_or(|c| c > cap) {
        return Err(LimidError::EnumerationCap {
            count: count.to_string(),
            cap,
        });
    }
    Ok(count)
}

pub fn enumerate_strategies(diagram: &Diagram, cap: u64) -> Result<Strategies> {
    check_cap(diagram, cap)?;
    let policies: Vec<Vec<Policy>> = diagram
        .decision_vars()
        .into_iter()
        .map(|d| enumerate_policies(diagram, d))
        .collect();
    Ok(Strategies {
        digits: vec![0; policies.len()],
        policies,
        done: false,
    })
}

/// Best strategy by exhaustive evaluation; the first of equally good ones wins.
pub fn brute_force_meu(diagram: &Diagram, cap: u64) -> Result<SolveResult> {
    let watch = Stopwatch::start();
    let count = check_cap(diagram, cap)?;
    let mut best: Option<(f64, Strategy)> = None;
    for s in enumerate_strategies(diagram, cap)? {
        let eu = expected_utility(diagram, &s)?;
        if best.as_ref().is_none_or(|(b, _)| eu > *b) {
            best = Some((eu, s));
        }
    }
    let (meu, strategy) = best.expect("the strategy space is never empty");
    Ok(SolveResult {
        meu,
        strategy,
        stats: SolveStats {
            strategy_count: count,
            wall_time: watch.elapsed(),
            ..SolveStats::default()
        },
    })
}

/// Expected utility by summing over the materialized joint distribution.
pub fn naive_expected_utility(diagram: &Diagram, strategy: &Strategy) -> Result<f64> {
    let joint = crate::model::joint_distribution(diagram, strategy)?;
    let mut total = Factor::filled(joint.scope().clone(), 0.0);
    for v in diagram.value_vars() {
        total = total.sum(diagram.utility(v).expect("value table"))?;
    }
    let total = total.reorder(joint.scope())?;
    Ok(joint
        .values()
        .iter()
        .zip(total.values())
        .map(|(p, u)| p * u)
        .sum())
}
