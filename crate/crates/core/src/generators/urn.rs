use std::fmt;
use std::str::FromStr;

use crate::error::{LimidError, Result};
use crate::model::{Diagram, DiagramParts, Variable};

/// Which information each participant of the urn game receives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UrnVariant {
    /// Nobody observes anything.
    Blind = 1,
    /// Each participant hears the previous decision; the first one sees the urn.
    PreviousDecision = 2,
    /// Each participant also sees the current urn.
    Observed = 5,
}

impl FromStr for UrnVariant {
    type Err = LimidError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(UrnVariant::Blind),
            "2" => Ok(UrnVariant::PreviousDecision),
            "5" => Ok(UrnVariant::Observed),
            other => Err(LimidError::Parse(format!(
                "unknown urn variant `{other}` (expected 1, 2 or 5)"
            ))),
        }
    }
}

impl fmt::Display for UrnVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", *self as u8)
    }
}

pub const ADD: usize = 0;
pub const REMOVE: usize = 1;

/// Balls in the urn after applying `action` to `balls`.
pub fn urn_step(balls: usize, action: usize) -> usize {
    match (action, balls) {
        (ADD, b) => (b + 1).min(2),
        (_, 0) => 2,
        (_, b) => b - 1,
    }
}

/// The urn game with `n` participants: `X_0` uniform over 0–2 balls, `X_i`
/// determined by `X_{i−1}` and `D_i`, reward 1 when `X_n` is empty.
pub fn gen_urn(n: usize, variant: UrnVariant) -> Result<Diagram> {
    if n == 0 {
        return Err(LimidError::Parse("urn game needs at least one participant".into()));
    }
    let balls = ["0", "1", "2"];
    let mut parts = DiagramParts::default();
    parts
        .add_variable(Variable::chance("X0", &balls))
        .set_cpt("X0", vec![1.0 / 3.0; 3]);
    for i in 1..=n {
        let (d, x, prev) = (format!("D{i}"), format!("X{i}"), format!("X{}", i - 1));
        parts
            .add_variable(Variable::decision(&d, &["add", "remove"]))
            .add_variable(Variable::chance(&x, &balls))
            .add_arc(&prev, &x)
            .add_arc(&d, &x);
        let mut table = Vec::with_capacity(18);
        for b in 0..3 {
            for action in [ADD, REMOVE] {
                let next = urn_step(b, action);
                table.extend((0..3).map(|s| if s == next { 1.0 } else { 0.0 }));
            }
        }
        parts.set_cpt(&x, table);
        match variant {
            UrnVariant::Blind => {}
            UrnVariant::PreviousDecision => {
                if i == 1 {
                    parts.add_arc("X0", &d);
                } else {
                    parts.add_arc(format!("D{}", i - 1), &d);
                }
            }
            UrnVariant::Observed => {
                parts.add_arc(&prev, &d);
                if i > 1 {
                    parts.add_arc(format!("D{}", i - 1), &d);
                }
            }
        }
    }
    parts
        .add_variable(Variable::value("R"))
        .add_arc(format!("X{n}"), "R")
        .set_utility("R", vec![1.0, 0.0, 0.0]);
    parts.build()
}
