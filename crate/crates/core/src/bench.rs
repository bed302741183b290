//! Benchmark suites: rows of instances solved under one or more solver
//! configurations, summarized per row.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use num_bigint::BigUint;
use serde::Deserialize;

use crate::clock::Deadline;
use crate::error::{ErrorKind, LimidError, Result};
use crate::generators::{gen_random, RandomParams};
use crate::io::parse_diagram;
use crate::lve::{solve_with, SolveOptions, DEFAULT_TRANSFORM_THRESHOLD};
use crate::model::Diagram;
use crate::ordering::OrderHeuristic;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Suite {
    pub rows: Vec<SuiteRow>,
    /// Solver configurations; the first is the baseline for ΔT and ΔC.
    #[serde(default = "default_configs")]
    pub configs: Vec<SolverConfig>,
    #[serde(default)]
    pub order: Option<String>,
    /// Policy count above which a decision is transformed; 1 transforms
    /// every decision that has parents.
    #[serde(default)]
    pub transform_threshold: Option<u64>,
}

fn default_configs() -> Vec<SolverConfig> {
    vec![SolverConfig {
        name: "lve".into(),
        epsilon: None,
    }]
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteRow {
    pub id: String,
    /// Random instances to generate (ignored for file rows).
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub random: Option<RandomSpec>,
    /// Diagram files, relative to the suite file.
    #[serde(default)]
    pub files: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomSpec {
    pub d: usize,
    pub c: usize,
    pub omega_d: usize,
    pub omega_c: usize,
    #[serde(default)]
    pub width_cap: Option<usize>,
    #[serde(default)]
    pub min_states: Option<usize>,
    #[serde(default)]
    pub max_states: Option<usize>,
}

impl RandomSpec {
    pub fn params(&self, seed: u64) -> RandomParams {
        let mut p = RandomParams::new(self.d, self.c, self.omega_d, self.omega_c, seed);
        if let Some(w) = self.width_cap {
            p.width_cap = w;
        }
        if let Some(s) = self.min_states {
            p.min_states = s;
        }
        if let Some(s) = self.max_states {
            p.max_states = s;
        }
        p
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub name: String,
    #[serde(default)]
    pub epsilon: Option<f64>,
}

/// Outcome of one instance under one configuration.
#[derive(Clone, Debug)]
pub struct Run {
    pub solved: bool,
    pub time: Duration,
    pub max_set_cardinality: usize,
    pub meu: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct RowReport {
    pub id: String,
    pub config: String,
    pub instances: usize,
    pub solved_pct: f64,
    pub mean_time_ms: f64,
    pub std_time_ms: f64,
    pub max_set_card: usize,
    pub max_strategy_count: BigUint,
    /// Relative time and set size against the baseline configuration.
    pub delta_t: Option<(f64, f64)>,
    pub delta_c: Option<(f64, f64)>,
    /// Instances where some solved run had more set members than strategies.
    pub telemetry_violations: usize,
    pub runs: Vec<Run>,
}

pub fn load_suite(path: &Path) -> Result<(Suite, PathBuf)> {
    let text = std::fs::read_to_string(path)?;
    let suite: Suite = serde_json::from_str(&text)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((suite, base))
}

fn instances(row: &SuiteRow, base: &Path) -> Result<Vec<Diagram>> {
    let mut out = Vec::new();
    if let Some(spec) = &row.random {
        let n = row.n.unwrap_or(1);
        for k in 0..n {
            out.push(gen_random(&spec.params(row.seed.wrapping_add(k as u64)))?);
        }
    }
    for file in &row.files {
        let text = std::fs::read_to_string(base.join(file))?;
        out.push(parse_diagram(&text)?);
    }
    if out.is_empty() {
        return Err(LimidError::Parse(format!(
            "suite row `{}` lists neither random parameters nor files",
            row.id
        )));
    }
    Ok(out)
}

/// Mean and population standard deviation, `sqrt(E[x²] − E[x]²)`.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let sq = xs.iter().map(|x| x * x).sum::<f64>() / n;
    (mean, (sq - mean * mean).max(0.0).sqrt())
}

/// Mean ± spread of `(new − base) / base` over pairs solved by both, skipping
/// pairs with a zero baseline.
pub fn relative_delta(base: &[Option<f64>], new: &[Option<f64>]) -> Option<(f64, f64)> {
    let ratios: Vec<f64> = base
        .iter()
        .zip(new)
        .filter_map(|(b, n)| match (b, n) {
            (Some(b), Some(n)) if *b > 0.0 => Some((n - b) / b),
            _ => None,
        })
        .collect();
    if ratios.is_empty() {
        None
    } else {
        Some(mean_std(&ratios))
    }
}

pub fn run_bench(suite: &Suite, base: &Path, timeout: Duration) -> Result<Vec<RowReport>> {
    let order: OrderHeuristic = match &suite.order {
        Some(o) => o.parse()?,
        None => OrderHeuristic::default(),
    };
    if suite.configs.is_empty() {
        return Err(LimidError::Parse("suite lists no solver configurations".into()));
    }
    let mut reports = Vec::new();
    for row in &suite.rows {
        let diagrams = instances(row, base)?;
        let strategy_counts: Vec<BigUint> = diagrams.iter().map(Diagram::strategy_count).collect();
        let mut per_config: Vec<Vec<Run>> = Vec::new();
        for config in &suite.configs {
            let mut runs = Vec::new();
            for diagram in &diagrams {
                let options = SolveOptions {
                    order,
                    epsilon: config.epsilon,
                    deadline: Deadline::after(timeout),
                    transform_threshold: suite.transform_threshold.unwrap_or(DEFAULT_TRANSFORM_THRESHOLD),
                    ..SolveOptions::default()
                };
                match solve_with(diagram, &options) {
                    Ok(r) => runs.push(Run {
                        solved: true,
                        time: r.stats.wall_time,
                        max_set_cardinality: r.stats.max_set_cardinality,
                        meu: Some(r.meu),
                    }),
                    Err(e) if e.kind() == ErrorKind::Resource => runs.push(Run {
                        solved: false,
                        time: timeout,
                        max_set_cardinality: 0,
                        meu: None,
                    }),
                    Err(e) => return Err(e),
                }
            }
            per_config.push(runs);
        }
        let baseline = &per_config[0];
        for (config, runs) in suite.configs.iter().zip(&per_config) {
            let solved: Vec<&Run> = runs.iter().filter(|r| r.solved).collect();
            let times: Vec<f64> = solved.iter().map(|r| r.time.as_secs_f64() * 1e3).collect();
            let (mean, std) = mean_std(&times);
            let time_of = |rs: &[Run]| -> Vec<Option<f64>> {
                rs.iter()
                    .map(|r| r.solved.then_some(r.time.as_secs_f64()))
                    .collect()
            };
            let card_of = |rs: &[Run]| -> Vec<Option<f64>> {
                rs.iter()
                    .map(|r| r.solved.then_some(r.max_set_cardinality as f64))
                    .collect()
            };
            let is_baseline = std::ptr::eq(runs, baseline);
            let telemetry_violations = runs
                .iter()
                .zip(&strategy_counts)
                .filter(|(r, count)| r.solved && BigUint::from(r.max_set_cardinality) > **count)
                .count();
            reports.push(RowReport {
                id: row.id.clone(),
                config: config.name.clone(),
                instances: runs.len(),
                solved_pct: 100.0 * solved.len() as f64 / runs.len() as f64,
                mean_time_ms: mean,
                std_time_ms: std,
                max_set_card: solved.iter().map(|r| r.max_set_cardinality).max().unwrap_or(0),
                max_strategy_count: strategy_counts.iter().max().cloned().unwrap_or_default(),
                delta_t: (!is_baseline)
                    .then(|| relative_delta(&time_of(baseline), &time_of(runs)))
                    .flatten(),
                delta_c: (!is_baseline)
                    .then(|| relative_delta(&card_of(baseline), &card_of(runs)))
                    .flatten(),
                telemetry_violations,
                runs: runs.clone(),
            });
        }
    }
    Ok(reports)
}

/// CSV with the columns `id,N,solved_pct,mean_time_ms,std_time_ms,max_set_card`
/// followed by the configuration name, the largest strategy count and the
/// relative columns (empty for the baseline).
pub fn report_csv(reports: &[RowReport]) -> String {
    let mut out = String::from(
        "id,N,solved_pct,mean_time_ms,std_time_ms,max_set_card,config,max_strategy_count,delta_t,delta_t_std,delta_c,delta_c_std\n",
    );
    let pair = |d: Option<(f64, f64)>| match d {
        Some((m, s)) => (format!("{m:.6}"), format!("{s:.6}")),
        None => (String::new(), String::new()),
    };
    for r in reports {
        let (dt, dts) = pair(r.delta_t);
        let (dc, dcs) = pair(r.delta_c);
        let _ = writeln!(
            out,
            "{},{},{:.1},{:.3},{:.3},{},{},{},{},{},{},{}",
            r.id,
            r.instances,
            r.solved_pct,
            r.mean_time_ms,
            r.std_time_ms,
            r.max_set_card,
            r.config,
            r.max_strategy_count,
            dt,
            dts,
            dc,
            dcs
        );
    }
    out
}
