//! JSON documents for diagrams, strategies and statistics.

mod document;
mod stats;
mod strategy;

pub use document::{parse_diagram, serialize_diagram, DiagramDocument, KindDocument, VariableDocument};
pub use stats::StatsDocument;
pub use strategy::{parse_strategy, serialize_strategy, StrategyDocument};

/// `%.12g`: twelve significant digits, trailing zeros trimmed, exponent form
/// for very large or small magnitudes.
pub fn format_g12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), sign, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
