use serde::{Deserialize, Serialize};

use crate::lve::SolveStats;

/// Run statistics as written by `solve --stats-out`. `strategy_count` is a
/// decimal string because it routinely exceeds 64 bits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    pub max_set_cardinality: usize,
    pub meu: f64,
    pub order: Vec<String>,
    pub per_step_cardinalities: Vec<usize>,
    pub strategy_count: String,
    pub wall_time_ms: f64,
    pub width: usize,
}

impl StatsDocument {
    pub fn new(meu: f64, stats: &SolveStats) -> Self {
        StatsDocument {
            epsilon: stats.epsilon,
            max_set_cardinality: stats.max_set_cardinality,
            meu,
            order: stats.order.clone(),
            per_step_cardinalities: stats.per_step_cardinalities.clone(),
            strategy_count: stats.strategy_count.to_string(),
            wall_time_ms: stats.wall_time.as_secs_f64() * 1000.0,
            width: stats.width,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("stats always serialize");
        text.push('\n');
        text
    }
}
