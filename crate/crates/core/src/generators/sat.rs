use crate::error::{LimidError, Result};
use crate::model::{Diagram, DiagramParts, Variable};

/// A formula in conjunctive normal form. Literals are nonzero integers:
/// `k` is variable `k` (1-based), `−k` its negation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i64>>,
}

impl Cnf {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i64>>) -> Result<Self> {
        if num_vars == 0 {
            return Err(LimidError::Parse("formula has no variables".into()));
        }
        if clauses.is_empty() {
            return Err(LimidError::Parse("formula has no clauses".into()));
        }
        for (k, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(LimidError::Parse(format!("clause {} is empty", k + 1)));
            }
            if let Some(&lit) = clause
                .iter()
                .find(|&&l| l == 0 || l.unsigned_abs() as usize > num_vars)
            {
                return Err(LimidError::Parse(format!(
                    "clause {} has literal {lit} outside 1..={num_vars}",
                    k + 1
                )));
            }
        }
        Ok(Cnf { num_vars, clauses })
    }

    /// Whether `value` for variable `var` (1-based) makes clause `k` true.
    pub fn literal_satisfies(&self, k: usize, var: usize, value: bool) -> bool {
        self.clauses[k]
            .iter()
            .any(|&l| l.unsigned_abs() as usize == var && (l > 0) == value)
    }
}

/// Reads the DIMACS clause-list layout: `c` comment lines, a `p cnf VARS
/// CLAUSES` header, then zero-terminated clauses.
pub fn parse_dimacs(text: &str) -> Result<Cnf> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["p", "cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or_else(|| {
                LimidError::Parse(format!("line {}: malformed header `{line}`", lineno + 1))
            })?);
            continue;
        }
        if header.is_none() {
            return Err(LimidError::Parse(format!(
                "line {}: clause before the `p cnf` header",
                lineno + 1
            )));
        }
        for token in line.split_whitespace() {
            let lit: i64 = token.parse().map_err(|_| {
                LimidError::Parse(format!("line {}: bad literal `{token}`", lineno + 1))
            })?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(lit);
            }
        }
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    let (vars, declared) =
        header.ok_or_else(|| LimidError::Parse("missing `p cnf` header".into()))?;
    if declared != clauses.len() {
        return Err(LimidError::Parse(format!(
            "header declares {declared} clauses, found {}",
            clauses.len()
        )));
    }
    Cnf::new(vars, clauses)
}

/// Name of a variable of replica `j` (1-based).
pub fn sat_name(j: usize, base: &str) -> String {
    format!("r{j}.{base}")
}

/// `q` replicas of a chain that, for a clause picked uniformly by `S_0`,
/// drops to 0 at the first decision satisfying it. `B^j` stays 1 while every
/// replica so far has reached 0, and the utility is 1 when `B^q` is 1, so a
/// strategy is worth `∏_j (satisfied clauses of replica j / m)`.
pub fn gen_sat(cnf: &Cnf, q: usize) -> Result<Diagram> {
    if q == 0 {
        return Err(LimidError::Parse("need at least one replica".into()));
    }
    let (n, m) = (cnf.num_vars, cnf.clauses.len());
    let selector: Vec<String> = (1..=m).map(|k| k.to_string()).collect();
    let tracker: Vec<String> = (0..=m).map(|k| k.to_string()).collect();
    let mut parts = DiagramParts::default();
    for j in 1..=q {
        for i in 1..=n {
            parts.add_variable(Variable::decision(
                sat_name(j, &format!("D{i}")),
                &["false", "true"],
            ));
        }
        let s0 = sat_name(j, "S0");
        parts
            .add_variable(Variable::chance(&s0, &as_refs(&selector)))
            .set_cpt(&s0, vec![1.0 / m as f64; m]);
        for i in 1..=n {
            let (s, prev, d) = (
                sat_name(j, &format!("S{i}")),
                sat_name(j, &format!("S{}", i - 1)),
                sat_name(j, &format!("D{i}")),
            );
            parts
                .add_variable(Variable::chance(&s, &as_refs(&tracker)))
                .add_arc(&d, &s)
                .add_arc(&prev, &s);
            // Parents in declaration order: D_i, then S_{i−1}.
            let prev_states: Vec<usize> = if i == 1 { (1..=m).collect() } else { (0..=m).collect() };
            let mut table = Vec::new();
            for value in [false, true] {
                for &k in &prev_states {
                    let next = if k == 0 || cnf.literal_satisfies(k - 1, i, value) {
                        0
                    } else {
                        k
                    };
                    table.extend((0..=m).map(|s| if s == next { 1.0 } else { 0.0 }));
                }
            }
            parts.set_cpt(&s, table);
        }
        let b = sat_name(j, "B");
        let sn = sat_name(j, &format!("S{n}"));
        parts
            .add_variable(Variable::chance(&b, &["0", "1"]))
            .add_arc(&sn, &b);
        let mut table = Vec::new();
        let previous: &[usize] = if j == 1 { &[1] } else { &[0, 1] };
        if j > 1 {
            parts.add_arc(sat_name(j - 1, "B"), &b);
        }
        // Parents in declaration order: B^{j−1}, then S_n^j.
        for &before in previous {
            for s in 0..=m {
                let next = if s == 0 { before } else { 0 };
                table.extend((0..2).map(|x| if x == next { 1.0 } else { 0.0 }));
            }
        }
        parts.set_cpt(&b, table);
    }
    parts
        .add_variable(Variable::value("U"))
        .add_arc(sat_name(q, "B"), "U")
        .set_utility("U", vec![0.0, 1.0]);
    parts.build()
}

fn as_refs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}
