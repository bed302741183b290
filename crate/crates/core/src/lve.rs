//! Exact solving by variable elimination over sets of valuations.

use std::time::Duration;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::clock::{Deadline, Stopwatch};
use crate::error::{LimidError, Result};
use crate::fptas::{coarsen, ApproxConfig};
use crate::model::{Diagram, Policy, Strategy, VarId, VariableKind};
use crate::ordering::{validate_order, EliminationOrder, OrderHeuristic};
use crate::preprocess::{scale_utilities, unscale_meu, ScalingInfo};
use crate::transform::{lift_strategy, transform_where, TransformMap};
use crate::valuation::{Trace, Valuation, ValuationSet};

/// Default bound on `|Ω_D|^{|Ω_pa|}` before a decision is transformed.
pub const DEFAULT_TRANSFORM_THRESHOLD: u64 = 1024;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolveStats {
    /// Largest propagated set `Ψ_i`.
    pub max_set_cardinality: usize,
    /// `|Ψ_i|` for every elimination step, in order.
    pub per_step_cardinalities: Vec<usize>,
    /// Largest set produced inside a step, before elimination.
    pub max_intermediate_cardinality: usize,
    pub width: usize,
    /// Eliminated variables by name.
    pub order: Vec<String>,
    pub wall_time: Duration,
    /// Largest `|p − 1|` over members of every propagated set.
    pub max_probability_deviation: f64,
    /// Strategy count of the diagram as given (before any transformation).
    pub strategy_count: BigUint,
    pub epsilon: Option<f64>,
    /// Number of decisions replaced by gadgets.
    pub transformed_decisions: usize,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub meu: f64,
    pub strategy: Strategy,
    pub stats: SolveStats,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub order: OrderHeuristic,
    /// `Some(ε)` runs the approximation scheme.
    pub epsilon: Option<f64>,
    /// Replace decisions whose policy count exceeds `transform_threshold`.
    pub transform: bool,
    pub transform_threshold: u64,
    pub deadline: Deadline,
    /// Abort when a set inside a step grows beyond this many members.
    pub max_set_size: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            order: OrderHeuristic::ReverseTopological,
            epsilon: None,
            transform: true,
            transform_threshold: DEFAULT_TRANSFORM_THRESHOLD,
            deadline: Deadline::none(),
            max_set_size: None,
        }
    }
}

/// How sets inside a bucket are combined.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Combination {
    Exact,
    Alpha(f64),
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Limits {
    pub deadline: Deadline,
    pub max_set_size: Option<usize>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            deadline: Deadline::none(),
            max_set_size: None,
        }
    }
}

/// All policies of `decision`, lexicographic with the first parent
/// configuration most significant.
pub fn enumerate_policies(diagram: &Diagram, decision: VarId) -> Vec<Policy> {
    let configs = diagram.parent_scope(decision).size();
    let card = diagram.card(decision);
    let name = diagram.name(decision);
    let mut out = Vec::new();
    let mut choices = vec![0usize; configs];
    loop {
        out.push(Policy::new(name, choices.clone()));
        let mut k = configs;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            choices[k] += 1;
            if choices[k] < card {
                break;
            }
            choices[k] = 0;
        }
    }
}

/// The initial sets: `{(p_C, 0)}` per chance node, `{(δ, 0) : δ}` per
/// decision, `{(1, u_V)}` per value node. Decisions with more than `limit`
/// policies are refused.
pub fn initialize(diagram: &Diagram, limit: u64) -> Result<Vec<ValuationSet>> {
    let mut sets = Vec::with_capacity(diagram.len());
    for v in diagram.ids() {
        let set = match diagram.kind(v) {
            VariableKind::Chance => ValuationSet::singleton(Valuation::probability(
                diagram.cpt(v).expect("chance table").clone(),
            )?),
            VariableKind::Value => ValuationSet::singleton(Valuation::utility(
                diagram.utility(v).expect("utility table").clone(),
            )?),
            VariableKind::Decision => {
                let count = diagram.policy_count(v);
                if count.to_u64().is_none_or(|c| c > limit) {
                    return Err(LimidError::PolicyCount {
                        decision: diagram.name(v).to_string(),
                        count: count.to_string(),
                        limit,
                    });
                }
                let members = enumerate_policies(diagram, v)
                    .into_iter()
                    .map(|policy| {
                        Ok(Valuation::probability(policy.to_factor(diagram)?)?
                            .with_trace(Trace::leaf(policy)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                ValuationSet::new(members)?
            }
        };
        sets.push(set);
    }
    Ok(sets)
}

pub(crate) struct Propagated {
    pub best: Valuation,
    pub stats: SolveStats,
}

/// Runs the elimination loop and the final combination on `sets`.
pub(crate) fn propagate(
    diagram: &Diagram,
    order: &[VarId],
    sets: Vec<ValuationSet>,
    mode: Combination,
    limits: Limits,
) -> Result<Propagated> {
    let mut stats = SolveStats::default();
    let mut pool: Vec<ValuationSet> = sets;
    for &x in order {
        if limits.deadline.expired() {
            return Err(LimidError::ResourceLimit {
                reason: "deadline exceeded".into(),
                stats: Box::new(stats),
            });
        }
        let (mut bucket, rest): (Vec<_>, Vec<_>) =
            pool.into_iter().partition(|s| s.scope().contains(x));
        pool = rest;
        bucket.sort_by_key(ValuationSet::len);
        let mut iter = bucket.into_iter();
        let mut acc = iter.next().unwrap_or_else(ValuationSet::identity);
        for next in iter {
            let combined = acc.combine(&next)?;
            stats.max_intermediate_cardinality =
                stats.max_intermediate_cardinality.max(combined.len());
            if let Some(cap) = limits.max_set_size {
                if combined.len() > cap {
                    return Err(LimidError::ResourceLimit {
                        reason: format!(
                            "a set of {} valuations exceeds the limit of {cap}",
                            combined.len()
                        ),
                        stats: Box::new(stats),
                    });
                }
            }
            acc = match mode {
                Combination::Exact => combined.maximal(),
                Combination::Alpha(alpha) => coarsen(combined, alpha).maximal(),
            };
        }
        let psi = acc.eliminate(&[x]).maximal();
        stats.max_probability_deviation = stats
            .max_probability_deviation
            .max(psi.max_probability_deviation());
        stats.max_set_cardinality = stats.max_set_cardinality.max(psi.len());
        stats.per_step_cardinalities.push(psi.len());
        stats.order.push(diagram.name(x).to_string());
        pool.push(psi);
    }

    let mut acc = ValuationSet::identity();
    pool.sort_by_key(ValuationSet::len);
    for set in pool {
        if !set.scope().is_empty() {
            return Err(LimidError::Structural(
                "elimination order left variables uneliminated".into(),
            ));
        }
        acc = acc.combine(&set)?.maximal();
    }
    // In exact arithmetic every final valuation has p = 1 and the maximal
    // set is a single point; rounding can leave several, so take the best u.
    let best = acc
        .into_members()
        .into_iter()
        .reduce(|a, b| if b.u().values()[0] > a.u().values()[0] { b } else { a })
        .unwrap_or_else(Valuation::identity);
    Ok(Propagated { best, stats })
}

/// Reads the strategy off a trace, filling gaps with each decision's first policy.
pub(crate) fn strategy_from_trace(diagram: &Diagram, trace: &Trace) -> Strategy {
    let mut strategy = Strategy::first(diagram);
    for policy in trace.policies() {
        strategy.insert(policy);
    }
    strategy
}

/// Solves an already scaled, untransformed diagram along `order`.
pub(crate) fn solve_scaled(
    scaled: &Diagram,
    info: &ScalingInfo,
    order: &EliminationOrder,
    mode: Combination,
    limits: Limits,
    limit: u64,
) -> Result<SolveResult> {
    let watch = Stopwatch::start();
    validate_order(scaled, &order.vars)?;
    if info.trivial() {
        let mut stats = SolveStats {
            width: order.width,
            strategy_count: scaled.strategy_count(),
            ..SolveStats::default()
        };
        stats.wall_time = watch.elapsed();
        return Ok(SolveResult {
            meu: unscale_meu(0.0, info),
            strategy: Strategy::first(scaled),
            stats,
        });
    }
    let sets = initialize(scaled, limit)?;
    let Propagated { best, mut stats } = propagate(scaled, &order.vars, sets, mode, limits)?;
    let meu = unscale_meu(best.u().values()[0], info);
    if !meu.is_finite() {
        return Err(LimidError::Numeric("maximum expected utility is not finite".into()));
    }
    stats.width = order.width;
    stats.strategy_count = scaled.strategy_count();
    stats.wall_time = watch.elapsed();
    Ok(SolveResult {
        meu,
        strategy: strategy_from_trace(scaled, best.trace()),
        stats,
    })
}

/// Exact MEU and an optimal strategy along `order`, with no transformation
/// and no policy-count limit.
pub fn solve(diagram: &Diagram, order: &EliminationOrder) -> Result<SolveResult> {
    let (scaled, info) = scale_utilities(diagram)?;
    solve_scaled(&scaled, &info, order, Combination::Exact, Limits::default(), u64::MAX)
}

/// Full pipeline: optional transformation, scaling, ordering, exact or
/// approximate propagation, and lifting the strategy back.
pub fn solve_with(diagram: &Diagram, options: &SolveOptions) -> Result<SolveResult> {
    let watch = Stopwatch::start();
    let threshold = options.transform_threshold;
    let (working, map) = if options.transform {
        transform_where(diagram, |d| {
            diagram.policy_count(d).to_u64().is_none_or(|c| c > threshold)
        })?
    } else {
        (diagram.clone(), TransformMap::default())
    };
    let (scaled, info) = scale_utilities(&working)?;
    let order = options.order.order(&scaled);
    let mode = match options.epsilon {
        None => Combination::Exact,
        Some(eps) => Combination::Alpha(ApproxConfig::new(eps, scaled.len())?.alpha),
    };
    let limits = Limits {
        deadline: options.deadline,
        max_set_size: options.max_set_size,
    };
    let limit = if options.transform { u64::MAX } else { threshold };
    let mut result = solve_scaled(&scaled, &info, &order, mode, limits, limit)?;
    result.strategy = lift_strategy(&result.strategy, &map)?;
    result.stats.strategy_count = diagram.strategy_count();
    result.stats.transformed_decisions = map.gadgets.len();
    result.stats.epsilon = options.epsilon;
    result.stats.wall_time = watch.elapsed();
    Ok(result)
}
