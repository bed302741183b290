//! Reference computations that only read raw tables off a diagram: no factor
//! algebra, no valuations, no library enumeration.

#![allow(dead_code)]

use limid::generators::{gen_random, RandomParams};
use limid::model::{Diagram, Policy, Strategy, VarId, VariableKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Decision tables: one chosen state per parent configuration, indexed by
/// declaration position.
pub type Choices = Vec<Vec<usize>>;

/// Row-major index of the parents' states, last parent fastest.
fn config_index(diagram: &Diagram, v: VarId, assignment: &[usize]) -> usize {
    diagram
        .parents(v)
        .iter()
        .fold(0, |acc, &p| acc * diagram.card(p) + assignment[p.index()])
}

/// Expected utility by walking every positive-probability path through the
/// chance nodes in topological order.
pub fn expected_utility(diagram: &Diagram, choices: &Choices) -> f64 {
    let order: Vec<VarId> = diagram
        .topological_order()
        .into_iter()
        .filter(|&v| diagram.kind(v) != VariableKind::Value)
        .collect();
    let values = diagram.value_vars();
    let mut assignment = vec![0usize; diagram.len()];
    walk(diagram, choices, &order, &values, &mut assignment, 0, 1.0)
}

fn walk(
    diagram: &Diagram,
    choices: &Choices,
    order: &[VarId],
    values: &[VarId],
    assignment: &mut [usize],
    depth: usize,
    weight: f64,
) -> f64 {
    let Some(&v) = order.get(depth) else {
        let utility: f64 = values
            .iter()
            .map(|&u| diagram.utility(u).unwrap().values()[config_index(diagram, u, assignment)])
            .sum();
        return weight * utility;
    };
    let config = config_index(diagram, v, assignment);
    match diagram.kind(v) {
        VariableKind::Decision => {
            assignment[v.index()] = choices[v.index()][config];
            walk(diagram, choices, order, values, assignment, depth + 1, weight)
        }
        _ => {
            let card = diagram.card(v);
            let table = diagram.cpt(v).unwrap().values();
            let mut total = 0.0;
            for s in 0..card {
                let p = table[config * card + s];
                if p > 0.0 {
                    assignment[v.index()] = s;
                    total += walk(diagram, choices, order, values, assignment, depth + 1, weight * p);
                }
            }
            total
        }
    }
}

/// Number of strategies, or `None` past `cap`.
pub fn strategy_space(diagram: &Diagram, cap: u128) -> Option<u128> {
    let mut total: u128 = 1;
    for d in diagram.decision_vars() {
        let configs: u128 = diagram.parents(d).iter().map(|&p| diagram.card(p) as u128).product();
        let policies = (diagram.card(d) as u128).checked_pow(configs as u32)?;
        total = total.checked_mul(policies)?;
        if total > cap {
            return None;
        }
    }
    Some(total)
}

/// Every strategy, odometer style over all decision table entries.
pub fn for_each_strategy(diagram: &Diagram, mut visit: impl FnMut(&Choices)) {
    let mut choices: Choices = vec![Vec::new(); diagram.len()];
    let mut digits = Vec::new();
    for d in diagram.decision_vars() {
        let configs: usize = diagram.parents(d).iter().map(|&p| diagram.card(p)).product();
        choices[d.index()] = vec![0; configs];
        for c in 0..configs {
            digits.push((d.index(), c, diagram.card(d)));
        }
    }
    loop {
        visit(&choices);
        let mut k = digits.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            let (d, c, card) = digits[k];
            choices[d][c] += 1;
            if choices[d][c] < card {
                break;
            }
            choices[d][c] = 0;
        }
    }
}

/// Maximum expected utility over all strategies with the first maximizer.
pub fn brute_force(diagram: &Diagram) -> (f64, Choices) {
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for_each_strategy(diagram, |choices| {
        let eu = expected_utility(diagram, choices);
        if eu > best.0 {
            best = (eu, choices.clone());
        }
    });
    best
}

pub fn to_strategy(diagram: &Diagram, choices: &Choices) -> Strategy {
    Strategy::from_policies(
        diagram
            .decision_vars()
            .into_iter()
            .map(|d| Policy::new(diagram.name(d), choices[d.index()].clone())),
    )
}

pub fn from_strategy(diagram: &Diagram, strategy: &Strategy) -> Choices {
    let mut choices: Choices = vec![Vec::new(); diagram.len()];
    for d in diagram.decision_vars() {
        choices[d.index()] = strategy.get(diagram.name(d)).unwrap().choices.clone();
    }
    choices
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Seeded random diagrams with up to 5 decisions, up to 6 chance nodes,
/// 2–3 states and at most `max_strategies` strategies.
pub fn random_suite(count: usize, max_strategies: u128) -> Vec<(u64, Diagram)> {
    let mut out = Vec::with_capacity(count);
    let mut seed = 0u64;
    while out.len() < count {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let d = rng.gen_range(1..=5);
        let c = rng.gen_range(1..=6);
        let omega_d = [3, 4, 6, 8, 9, 12][rng.gen_range(0..6)];
        let omega_c = rng.gen_range(3..=18);
        let params = RandomParams::new(d, c, omega_d, omega_c, seed).with_states(2, 3);
        seed += 1;
        let diagram = gen_random(&params).expect("valid generator parameters");
        if strategy_space(&diagram, max_strategies).is_some() {
            out.push((seed - 1, diagram));
        }
    }
    out
}
