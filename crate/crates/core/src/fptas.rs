//! The ε-approximation: sets are coarsened to one representative per class
//! of valuations whose entries fall in the same powers-of-α buckets.

use std::collections::HashMap;

use crate::error::{LimidError, Result};
use crate::lve::{solve_scaled, Combination, Limits, SolveResult};
use crate::model::Diagram;
use crate::ordering::EliminationOrder;
use crate::preprocess::scale_utilities;
use crate::valuation::{canonical_cmp, Valuation, ValuationSet};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproxConfig {
    pub epsilon: f64,
    /// `1 + ε / (2|U|)`.
    pub alpha: f64,
}

impl ApproxConfig {
    /// `variable_count` is `|U|`, every variable of the diagram being solved.
    pub fn new(epsilon: f64, variable_count: usize) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(LimidError::Parse(format!(
                "epsilon must be a positive number, got {epsilon}"
            )));
        }
        let alpha = 1.0 + epsilon / (2.0 * variable_count.max(1) as f64);
        if alpha <= 1.0 {
            return Err(LimidError::Numeric(format!(
                "epsilon {epsilon} is too small to separate buckets"
            )));
        }
        Ok(ApproxConfig { epsilon, alpha })
    }
}

/// Bucket of a zero entry; every positive bucket index is larger.
const ZERO_BUCKET: i64 = i64::MIN;

/// `⌊log_α v⌋` for `v > 0`, with values within a few ulps of an exact power
/// of α assigned to that power's bucket.
pub fn bucket(v: f64, alpha: f64) -> i64 {
    if v <= 0.0 {
        return ZERO_BUCKET;
    }
    let r = v.ln() / alpha.ln();
    let nearest = r.round();
    let power = alpha.powf(nearest);
    let ulp = f64::EPSILON * v.abs();
    if (v - power).abs() <= 4.0 * ulp {
        return nearest as i64;
    }
    r.floor() as i64
}

fn signature(v: &Valuation, alpha: f64) -> Vec<i64> {
    v.p()
        .values()
        .iter()
        .chain(v.u().values())
        .map(|&x| bucket(x, alpha))
        .collect()
}

/// Entrywise, both parts either agree exactly or share a bucket.
pub fn alpha_equivalent(phi: &Valuation, psi: &Valuation, alpha: f64) -> Result<bool> {
    let psi = if phi.scope() == psi.scope() {
        psi.clone()
    } else {
        psi.reorder(phi.scope())?
    };
    let same = |a: &[f64], b: &[f64]| {
        a.iter().zip(b).all(|(&x, &y)| {
            x == y || (x > 0.0 && y > 0.0 && bucket(x, alpha) == bucket(y, alpha))
        })
    };
    Ok(same(phi.p().values(), psi.p().values()) && same(phi.u().values(), psi.u().values()))
}

/// `φ ≤_α ψ`: `p ≤ α q` and `u ≤ α v` entrywise.
pub fn alpha_le(phi: &Valuation, psi: &Valuation, alpha: f64) -> Result<bool> {
    let psi = if phi.scope() == psi.scope() {
        psi.clone()
    } else {
        psi.reorder(phi.scope())?
    };
    let le = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(&x, &y)| x <= alpha * y);
    Ok(le(phi.p().values(), psi.p().values()) && le(phi.u().values(), psi.u().values()))
}

/// One member per α-equivalence class: the one with the lexicographically
/// smallest probability table (then utility table). Output is canonical.
pub fn coarsen(set: ValuationSet, alpha: f64) -> ValuationSet {
    let members = set.into_members();
    let mut classes: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut reps: Vec<Valuation> = Vec::new();
    for m in members {
        let key = signature(&m, alpha);
        match classes.get(&key) {
            Some(&i) => {
                if canonical_cmp(&m, &reps[i]).is_lt() {
                    reps[i] = m;
                }
            }
            None => {
                classes.insert(key, reps.len());
                reps.push(m);
            }
        }
    }
    ValuationSet::new(reps)
        .expect("members share a scope")
        .canonicalize()
}

/// `G_α(Ψ_x ⊗ Ψ_y)`.
pub fn alpha_combine(a: &ValuationSet, b: &ValuationSet, alpha: f64) -> Result<ValuationSet> {
    Ok(coarsen(a.combine(b)?, alpha))
}

/// Approximate MEU `u` with `u ≤ MEU ≤ (1 + ε) u` (for nonnegative
/// utilities), along `order`, with no transformation.
pub fn solve_approx(diagram: &Diagram, order: &EliminationOrder, epsilon: f64) -> Result<SolveResult> {
    let (scaled, info) = scale_utilities(diagram)?;
    let config = ApproxConfig::new(epsilon, scaled.len())?;
    let mut result = solve_scaled(
        &scaled,
        &info,
        order,
        Combination::Alpha(config.alpha),
        Limits::default(),
        u64::MAX,
    )?;
    result.stats.epsilon = Some(epsilon);
    Ok(result)
}
