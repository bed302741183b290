//! Elimination orders over chance and decision variables.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{LimidError, Result};
use crate::model::{Diagram, VarId, VariableKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationOrder {
    pub vars: Vec<VarId>,
    /// Induced width: largest number of neighbors at elimination time.
    pub width: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OrderHeuristic {
    MinFill,
    #[default]
    ReverseTopological,
    /// Declaration order.
    Given,
}

impl OrderHeuristic {
    pub fn as_str(self) -> &'static str {
        match self {
            OrderHeuristic::MinFill => "min-fill",
            OrderHeuristic::ReverseTopological => "rev-topo",
            OrderHeuristic::Given => "given",
        }
    }

    pub fn order(self, diagram: &Diagram) -> EliminationOrder {
        match self {
            OrderHeuristic::MinFill => min_fill_order(diagram),
            OrderHeuristic::ReverseTopological => reverse_topological_order(diagram),
            OrderHeuristic::Given => declaration_order(diagram),
        }
    }
}

impl fmt::Display for OrderHeuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OrderHeuristic {
    type Err = LimidError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min-fill" => Ok(OrderHeuristic::MinFill),
            "rev-topo" => Ok(OrderHeuristic::ReverseTopological),
            "given" => Ok(OrderHeuristic::Given),
            other => Err(LimidError::Parse(format!(
                "unknown order `{other}` (expected min-fill, rev-topo or given)"
            ))),
        }
    }
}

/// Undirected graph over the eliminable variables with one clique per table
/// scope: chance and decision families, and value-node parent sets.
#[derive(Clone, Debug)]
pub struct InteractionGraph {
    cards: Vec<usize>,
    adjacency: Vec<BTreeSet<usize>>,
    active: Vec<bool>,
}

impl InteractionGraph {
    /// `cards[i] == 0` marks a node that is not eliminable (a value node).
    pub fn from_families(cards: Vec<usize>, families: &[Vec<usize>]) -> Self {
        let n = cards.len();
        let mut adjacency = vec![BTreeSet::new(); n];
        for family in families {
            let members: Vec<usize> = family.iter().copied().filter(|&v| cards[v] > 0).collect();
            for &a in &members {
                for &b in &members {
                    if a != b {
                        adjacency[a].insert(b);
                    }
                }
            }
        }
        let active = cards.iter().map(|&c| c > 0).collect();
        InteractionGraph {
            cards,
            adjacency,
            active,
        }
    }

    pub fn from_diagram(diagram: &Diagram) -> Self {
        let cards = diagram
            .ids()
            .map(|v| match diagram.kind(v) {
                VariableKind::Value => 0,
                _ => diagram.card(v),
            })
            .collect();
        let families: Vec<Vec<usize>> = diagram
            .ids()
            .map(|v| {
                let mut fam: Vec<usize> = diagram.parents(v).iter().map(|p| p.index()).collect();
                fam.push(v.index());
                fam
            })
            .collect();
        Self::from_families(cards, &families)
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adjacency[v]
    }

    fn fill_in(&self, v: usize) -> usize {
        let nbrs: Vec<usize> = self.adjacency[v].iter().copied().collect();
        let mut fill = 0;
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                if !self.adjacency[a].contains(&b) {
                    fill += 1;
                }
            }
        }
        fill
    }

    fn domain_product(&self, v: usize) -> usize {
        self.adjacency[v]
            .iter()
            .fold(self.cards[v], |acc, &n| acc.saturating_mul(self.cards[n]))
    }

    /// Removes `v`, connecting its neighbors; returns its neighbor count.
    fn eliminate(&mut self, v: usize) -> usize {
        let nbrs: Vec<usize> = std::mem::take(&mut self.adjacency[v]).into_iter().collect();
        for &a in &nbrs {
            self.adjacency[a].remove(&v);
            for &b in &nbrs {
                if a != b {
                    self.adjacency[a].insert(b);
                }
            }
        }
        self.active[v] = false;
        nbrs.len()
    }

    /// Greedy min-fill among the nodes accepted by `eligible`; ties go to the
    /// smaller neighborhood domain, then the smaller index.
    pub fn greedy_order(mut self, mut eligible: impl FnMut(usize, &[bool]) -> bool) -> (Vec<usize>, usize) {
        let mut order = Vec::new();
        let mut width = 0;
        loop {
            let best = (0..self.cards.len())
                .filter(|&v| self.active[v] && eligible(v, &self.active))
                .min_by_key(|&v| (self.fill_in(v), self.domain_product(v), v));
            match best {
                Some(v) => {
                    width = width.max(self.eliminate(v));
                    order.push(v);
                }
                None => break,
            }
        }
        (order, width)
    }

    /// Width of the min-fill order.
    pub fn min_fill_width(self) -> usize {
        self.greedy_order(|_, _| true).1
    }

    /// Width of eliminating in exactly `order`.
    pub fn width_of(mut self, order: &[usize]) -> usize {
        order.iter().fold(0, |w, &v| w.max(self.eliminate(v)))
    }
}

pub fn min_fill_order(diagram: &Diagram) -> EliminationOrder {
    let (order, width) = InteractionGraph::from_diagram(diagram).greedy_order(|_, _| true);
    EliminationOrder {
        vars: order.into_iter().map(|v| VarId(v as u32)).collect(),
        width,
    }
}

/// Every variable is eliminated after all of its chance and decision
/// children; the min-fill score picks among the eligible ones.
pub fn reverse_topological_order(diagram: &Diagram) -> EliminationOrder {
    let children: Vec<Vec<usize>> = diagram
        .ids()
        .map(|v| {
            diagram
                .children(v)
                .iter()
                .filter(|c| diagram.kind(**c) != VariableKind::Value)
                .map(|c| c.index())
                .collect()
        })
        .collect();
    let (order, width) = InteractionGraph::from_diagram(diagram)
        .greedy_order(|v, active| children[v].iter().all(|&c| !active[c]));
    EliminationOrder {
        vars: order.into_iter().map(|v| VarId(v as u32)).collect(),
        width,
    }
}

pub fn declaration_order(diagram: &Diagram) -> EliminationOrder {
    let vars = diagram.eliminable_vars();
    let width = InteractionGraph::from_diagram(diagram)
        .width_of(&vars.iter().map(|v| v.index()).collect::<Vec<_>>());
    EliminationOrder { vars, width }
}

/// Checks that `order` is a permutation of the chance and decision variables.
pub fn validate_order(diagram: &Diagram, order: &[VarId]) -> Result<()> {
    let mut expected = diagram.eliminable_vars();
    let mut got = order.to_vec();
    expected.sort();
    got.sort();
    if expected != got {
        return Err(LimidError::Structural(
            "elimination order must list every chance and decision variable exactly once".into(),
        ));
    }
    Ok(())
}

pub fn induced_width(diagram: &Diagram, order: &[VarId]) -> Result<usize> {
    validate_order(diagram, order)?;
    Ok(InteractionGraph::from_diagram(diagram)
        .width_of(&order.iter().map(|v| v.index()).collect::<Vec<_>>()))
}
