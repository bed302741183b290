//! Browser bindings for the solver. Every export takes and returns JSON text
//! so the page needs no generated type glue beyond strings and numbers.

use limid::generators::{gen_partition, gen_urn, partition_closed_form, partition_weights, UrnVariant};
use limid::io::{parse_diagram, serialize_diagram, serialize_strategy, StatsDocument};
use limid::{solve_with, LimidError, OrderHeuristic, Result, SolveOptions};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest instance the partition explorer enumerates subsets for.
pub const MAX_PARTITION_NUMBERS: usize = 12;

/// Propagated sets larger than this abort instead of freezing the tab.
pub const MAX_SET_SIZE: usize = 200_000;

fn invalid(path: &str, message: String) -> LimidError {
    LimidError::Invalid {
        path: path.to_string(),
        message,
    }
}

fn options(order: &str, epsilon: Option<f64>) -> Result<SolveOptions> {
    Ok(SolveOptions {
        order: order.parse::<OrderHeuristic>()?,
        epsilon,
        max_set_size: Some(MAX_SET_SIZE),
        ..SolveOptions::default()
    })
}

pub fn solve_json(diagram: &str, order: &str, epsilon: Option<f64>) -> Result<Value> {
    let d = parse_diagram(diagram)?;
    let r = solve_with(&d, &options(order, epsilon)?)?;
    let strategy: Value = serde_json::from_str(&serialize_strategy(&d, &r.strategy)?).expect("strategy is JSON");
    Ok(json!({
        "meu": r.meu,
        "stats": StatsDocument::new(r.meu, &r.stats),
        "strategy": strategy,
    }))
}

/// Exact value followed by one approximate solve per entry of `epsilons`.
pub fn sweep_json(diagram: &str, order: &str, epsilons: &[f64]) -> Result<Value> {
    let d = parse_diagram(diagram)?;
    let exact = solve_with(&d, &options(order, None)?)?;
    let mut rows = vec![json!({
        "epsilon": null,
        "meu": exact.meu,
        "max_set_cardinality": exact.stats.max_set_cardinality,
        "ratio": 1.0,
    })];
    for &eps in epsilons {
        let r = solve_with(&d, &options(order, Some(eps))?)?;
        rows.push(json!({
            "epsilon": eps,
            "meu": r.meu,
            "max_set_cardinality": r.stats.max_set_cardinality,
            "ratio": if exact.meu > 0.0 { r.meu / exact.meu } else { 1.0 },
        }));
    }
    Ok(Value::Array(rows))
}

/// Every subset of a partition instance with its closed-form value, best
/// first, next to the solver's answer on the generated diagram.
pub fn partition_json(numbers: &[u64]) -> Result<Value> {
    if numbers.len() > MAX_PARTITION_NUMBERS {
        return Err(invalid("numbers", format!("at most {MAX_PARTITION_NUMBERS} are supported here")));
    }
    let weights = partition_weights(numbers, true)?;
    let n = numbers.len();
    let mut subsets: Vec<(Vec<bool>, f64)> = (0..1usize << n)
        .map(|mask| {
            let chosen: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            let value = partition_closed_form(&weights, &chosen);
            (chosen, value)
        })
        .collect();
    subsets.sort_by(|a, b| b.1.total_cmp(&a.1));
    let d = gen_partition(numbers, true)?;
    let meu = solve_with(&d, &SolveOptions::default())?.meu;
    let total: u64 = numbers.iter().sum();
    let rows: Vec<Value> = subsets
        .iter()
        .take(16)
        .map(|(chosen, value)| {
            let left: u64 = numbers.iter().zip(chosen).filter(|(_, &c)| c).map(|(x, _)| x).sum();
            json!({ "chosen": chosen, "left": left, "right": total - left, "value": value })
        })
        .collect();
    Ok(json!({ "meu": meu, "subsets": rows, "threshold": 2.0 / 3.0 }))
}

pub fn urn_diagram(n: usize, variant: u8) -> Result<String> {
    let variant = match variant {
        1 => UrnVariant::Blind,
        2 => UrnVariant::PreviousDecision,
        5 => UrnVariant::Observed,
        other => return Err(invalid("variant", format!("unknown urn variant {other}"))),
    };
    Ok(serialize_diagram(&gen_urn(n, variant)?))
}

fn to_js(result: Result<Value>) -> std::result::Result<String, JsError> {
    result.map(|v| v.to_string()).map_err(|e| JsError::new(&e.to_string()))
}

/// Solve a diagram document. A non-positive `epsilon` means exact.
#[wasm_bindgen]
pub fn solve(diagram: &str, order: &str, epsilon: f64) -> std::result::Result<String, JsError> {
    to_js(solve_json(diagram, order, (epsilon > 0.0).then_some(epsilon)))
}

#[wasm_bindgen]
pub fn epsilon_sweep(diagram: &str, order: &str, epsilons: &[f64]) -> std::result::Result<String, JsError> {
    to_js(sweep_json(diagram, order, epsilons))
}

#[wasm_bindgen]
pub fn partition_landscape(numbers: &[u32]) -> std::result::Result<String, JsError> {
    let numbers: Vec<u64> = numbers.iter().map(|&x| x.into()).collect();
    to_js(partition_json(&numbers))
}

#[wasm_bindgen]
pub fn urn_preset(n: usize, variant: u8) -> std::result::Result<String, JsError> {
    urn_diagram(n, variant).map_err(|e| JsError::new(&e.to_string()))
}
