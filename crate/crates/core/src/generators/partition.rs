use crate::error::{LimidError, Result};
use crate::model::{Diagram, DiagramParts, Variable};

/// The numbers `t_i = 2^{−a_i/a}` with `a` half the total.
///
/// Unless `idealized`, each is rounded up to a multiple of `2^{−(6b+3)}`,
/// where `b` is the total bit length of the input; when that grid is finer
/// than double precision the next representable value is taken instead.
pub fn partition_weights(numbers: &[u64], idealized: bool) -> Result<Vec<f64>> {
    if numbers.is_empty() || numbers.contains(&0) {
        return Err(LimidError::Parse(
            "partition instance needs at least one positive integer".into(),
        ));
    }
    let total: u128 = numbers.iter().map(|&x| x as u128).sum();
    let a = total as f64 / 2.0;
    let bits: u64 = numbers.iter().map(|&x| 64 - u64::from(x.leading_zeros())).sum();
    let precision = 6 * bits + 3;
    Ok(numbers
        .iter()
        .map(|&x| {
            let t = (-(x as f64) / a).exp2();
            if idealized {
                t
            } else if precision < 53 {
                let scale = (precision as f64).exp2();
                (t * scale).ceil() / scale
            } else {
                t.next_up()
            }
        })
        .collect())
}

/// Expected utility of the strategy choosing `d1` exactly at the indices in
/// `chosen`: `1 − (∏_{i∈I} t_i + ∏_{i∉I} t_i) / 3`.
pub fn partition_closed_form(weights: &[f64], chosen: &[bool]) -> f64 {
    let (mut inside, mut outside) = (1.0, 1.0);
    for (&t, &c) in weights.iter().zip(chosen) {
        if c {
            inside *= t;
        } else {
            outside *= t;
        }
    }
    1.0 - (inside + outside) / 3.0
}

/// Chain `X_0 → X_1 → … → X_n → R` over states `x, y, z` with parentless
/// binary decisions `D_i → X_i`. Under `d1` a chain at `x` stays there with
/// probability `t_i`, under `d2` a chain at `y` does; every other move from
/// `x` or `y` is certain to stay, or falls to `z`, the only rewarded state.
pub fn gen_partition(numbers: &[u64], idealized: bool) -> Result<Diagram> {
    let weights = partition_weights(numbers, idealized)?;
    let states = ["x", "y", "z"];
    let mut parts = DiagramParts::default();
    parts
        .add_variable(Variable::chance("X0", &states))
        .set_cpt("X0", vec![1.0 / 3.0; 3]);
    for (i, &t) in weights.iter().enumerate() {
        let (d, x, prev) = (format!("D{}", i + 1), format!("X{}", i + 1), format!("X{i}"));
        parts
            .add_variable(Variable::decision(&d, &["d1", "d2"]))
            .add_variable(Variable::chance(&x, &states))
            .add_arc(&prev, &x)
            .add_arc(&d, &x);
        // Columns by (previous state, decision).
        #[rustfmt::skip]
        let table = vec![
            t, 0.0, 1.0 - t,   // x, d1
            1.0, 0.0, 0.0,     // x, d2
            0.0, 1.0, 0.0,     // y, d1
            0.0, t, 1.0 - t,   // y, d2
            0.0, 0.0, 1.0,     // z, d1
            0.0, 0.0, 1.0,     // z, d2
        ];
        parts.set_cpt(&x, table);
    }
    parts
        .add_variable(Variable::value("R"))
        .add_arc(format!("X{}", numbers.len()), "R")
        .set_utility("R", vec![0.0, 0.0, 1.0]);
    parts.build()
}
