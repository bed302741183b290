use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{LimidError, Result};
use crate::model::{Diagram, DiagramParts, Variable, VariableKind};
use crate::ordering::InteractionGraph;

/// Parameters of the random protocol: `d` decisions, `c` chance nodes and
/// `d + 2` value nodes, with bounds on family domain sizes and on the greedy
/// width estimate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomParams {
    pub d: usize,
    pub c: usize,
    /// Largest `|Ω_fa|` of a decision.
    pub omega_d: usize,
    /// Largest `|Ω_fa|` of a chance node, and largest `|Ω_pa|` of a value node.
    pub omega_c: usize,
    pub width_cap: usize,
    pub seed: u64,
    pub min_states: usize,
    pub max_states: usize,
}

impl RandomParams {
    pub fn new(d: usize, c: usize, omega_d: usize, omega_c: usize, seed: u64) -> Self {
        RandomParams {
            d,
            c,
            omega_d,
            omega_c,
            width_cap: 10,
            seed,
            min_states: 2,
            max_states: 4,
        }
    }

    pub fn with_states(mut self, min: usize, max: usize) -> Self {
        self.min_states = min;
        self.max_states = max;
        self
    }

    pub fn value_count(&self) -> usize {
        self.d + 2
    }

    fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(LimidError::Parse(format!("random generator: {msg}")));
        if self.d == 0 || self.c == 0 {
            return fail("d and c must be at least 1");
        }
        if self.min_states < 2 || self.min_states > self.max_states {
            return fail("state counts must satisfy 2 <= min <= max");
        }
        if self.omega_d < self.max_states || self.omega_c < self.max_states {
            return fail("family bounds must admit a variable with the largest state count");
        }
        Ok(())
    }
}

struct Draft {
    kinds: Vec<VariableKind>,
    cards: Vec<usize>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
}

impl Draft {
    fn family_domain(&self, v: usize, extra: usize) -> usize {
        let own = match self.kinds[v] {
            VariableKind::Value => 1,
            _ => self.cards[v],
        };
        self.parents[v]
            .iter()
            .fold(own.saturating_mul(self.cards[extra]), |acc, &p| {
                acc.saturating_mul(self.cards[p])
            })
    }

    fn reaches(&self, from: usize, to: usize) -> bool {
        let mut seen = vec![false; self.cards.len()];
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            if v == to {
                return true;
            }
            if !std::mem::replace(&mut seen[v], true) {
                stack.extend_from_slice(&self.children[v]);
            }
        }
        false
    }

    fn add(&mut self, p: usize, c: usize) {
        self.parents[c].push(p);
        self.parents[c].sort();
        self.children[p].push(c);
    }

    fn width_with(&self, p: usize, c: usize) -> usize {
        let cards: Vec<usize> = self
            .kinds
            .iter()
            .zip(&self.cards)
            .map(|(k, &n)| if *k == VariableKind::Value { 0 } else { n })
            .collect();
        let families: Vec<Vec<usize>> = (0..cards.len())
            .map(|v| {
                let mut fam = self.parents[v].clone();
                if v == c {
                    fam.push(p);
                }
                fam.push(v);
                fam
            })
            .collect();
        InteractionGraph::from_families(cards, &families).min_fill_width()
    }
}

/// A random diagram: state counts drawn uniformly from the configured range,
/// one parentless value node attached to every childless decision, then
/// arcs drawn uniformly among the feasible ones until none is left.
pub fn gen_random(params: &RandomParams) -> Result<Diagram> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let (d, c, v) = (params.d, params.c, params.value_count());
    let n = d + c + v;
    let mut kinds = Vec::with_capacity(n);
    let mut names = Vec::with_capacity(n);
    for i in 0..d {
        kinds.push(VariableKind::Decision);
        names.push(format!("D{i}"));
    }
    for i in 0..c {
        kinds.push(VariableKind::Chance);
        names.push(format!("C{i}"));
    }
    for i in 0..v {
        kinds.push(VariableKind::Value);
        names.push(format!("V{i}"));
    }
    let cards: Vec<usize> = kinds
        .iter()
        .map(|k| match k {
            VariableKind::Value => 1,
            _ => rng.gen_range(params.min_states..=params.max_states),
        })
        .collect();
    let mut draft = Draft {
        kinds,
        cards,
        parents: vec![Vec::new(); n],
        children: vec![Vec::new(); n],
    };

    // Every decision starts with a value child of its own.
    for (dec, value) in (0..d).zip(d + c..n) {
        draft.add(dec, value);
    }

    let bound = |kind: VariableKind| match kind {
        VariableKind::Decision => params.omega_d,
        _ => params.omega_c,
    };
    loop {
        let mut candidates: Vec<(usize, usize)> = Vec::new();
        for p in 0..d + c {
            for ch in 0..n {
                if p == ch
                    || draft.parents[ch].contains(&p)
                    || draft.family_domain(ch, p) > bound(draft.kinds[ch])
                    || draft.reaches(ch, p)
                {
                    continue;
                }
                candidates.push((p, ch));
            }
        }
        candidates.shuffle(&mut rng);
        let pick = candidates
            .into_iter()
            .find(|&(p, ch)| draft.width_with(p, ch) <= params.width_cap);
        match pick {
            Some((p, ch)) => draft.add(p, ch),
            None => break,
        }
    }

    let mut parts = DiagramParts::default();
    for (i, name) in names.iter().enumerate() {
        let states: Vec<String> = match draft.kinds[i] {
            VariableKind::Value => Vec::new(),
            _ => (0..draft.cards[i]).map(|s| format!("s{s}")).collect(),
        };
        parts.variables.push(Variable {
            id: name.clone(),
            kind: draft.kinds[i],
            states,
        });
        for &p in &draft.parents[i] {
            parts.arcs.push((names[p].clone(), name.clone()));
        }
    }
    for (i, name) in names.iter().enumerate() {
        let configs: usize = draft.parents[i].iter().map(|&p| draft.cards[p]).product();
        match draft.kinds[i] {
            VariableKind::Chance => {
                let card = draft.cards[i];
                let mut table = Vec::with_capacity(configs * card);
                for _ in 0..configs {
                    let column: Vec<f64> = (0..card).map(|_| 1.0 - rng.gen::<f64>()).collect();
                    let total: f64 = column.iter().sum();
                    table.extend(column.iter().map(|x| x / total));
                }
                parts.cpts.insert(name.clone(), table);
            }
            VariableKind::Value => {
                let table = (0..configs).map(|_| rng.gen::<f64>()).collect();
                parts.utilities.insert(name.clone(), table);
            }
            VariableKind::Decision => {}
        }
    }
    Diagram::from_parts(parts)
}
