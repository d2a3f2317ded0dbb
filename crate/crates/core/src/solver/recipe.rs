//! Extension recipes: how a maximal matching of the reduced graph is turned
//! into one of the graph before the step.

use serde::Serialize;

use crate::graph::Edge;
use crate::matching::Matching;

/// Guard of a [`Branch`], evaluated against the sub-matching as it was before
/// the step's own edits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Always,
    Contains(Edge),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Branch {
    pub when: Condition,
    pub remove: Vec<Edge>,
    pub add: Vec<Edge>,
}

impl Branch {
    pub fn always(add: &[Edge]) -> Self {
        Branch {
            when: Condition::Always,
            remove: Vec::new(),
            add: add.to_vec(),
        }
    }

    /// Branch taken when `e` is in the sub-matching: `e` is swapped out for `add`.
    pub fn swap(e: Edge, add: &[Edge]) -> Self {
        Branch {
            when: Condition::Contains(e),
            remove: vec![e],
            add: add.to_vec(),
        }
    }

    pub fn when_contains(e: Edge, add: &[Edge]) -> Self {
        Branch {
            when: Condition::Contains(e),
            remove: Vec::new(),
            add: add.to_vec(),
        }
    }

    fn growth(&self) -> i64 {
        self.add.len() as i64 - self.remove.len() as i64
    }
}

/// Independent pieces of an extension; in each clause the first branch whose
/// guard holds is applied. Every clause should end with an `Always` branch.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Recipe {
    pub clauses: Vec<Vec<Branch>>,
}

impl Recipe {
    pub fn fixed(add: &[Edge]) -> Self {
        Recipe {
            clauses: vec![vec![Branch::always(add)]],
        }
    }

    pub fn single(branches: Vec<Branch>) -> Self {
        Recipe {
            clauses: vec![branches],
        }
    }

    /// Largest possible size increase.
    pub fn budget(&self) -> usize {
        self.clauses
            .iter()
            .map(|c| c.iter().map(Branch::growth).max().unwrap_or(0))
            .sum::<i64>()
            .max(0) as usize
    }

    /// True if the recipe always adds the same edges.
    pub fn is_unconditional(&self) -> bool {
        self.clauses
            .iter()
            .all(|c| c.first().is_some_and(|b| b.when == Condition::Always && b.remove.is_empty()))
    }

    /// Edges added by an unconditional recipe.
    pub fn fixed_edges(&self) -> Vec<Edge> {
        self.clauses
            .iter()
            .filter_map(|c| c.first())
            .flat_map(|b| b.add.iter().copied())
            .collect()
    }

    /// Every edge the recipe mentions, with its role.
    pub(crate) fn edges(&self) -> impl Iterator<Item = (Edge, EdgeRole)> + '_ {
        self.clauses.iter().flatten().flat_map(|b| {
            let cond = match b.when {
                Condition::Contains(e) => Some((e, EdgeRole::Reduced)),
                Condition::Always => None,
            };
            cond.into_iter()
                .chain(b.remove.iter().map(|&e| (e, EdgeRole::Reduced)))
                .chain(b.add.iter().map(|&e| (e, EdgeRole::Original)))
        })
    }

    pub fn apply(&self, sub: &Matching) -> Matching {
        let mut out = sub.clone();
        for clause in &self.clauses {
            let chosen = clause.iter().find(|b| match b.when {
                Condition::Always => true,
                Condition::Contains(e) => sub.contains(e),
            });
            if let Some(b) = chosen {
                for &e in &b.remove {
                    out.remove(e);
                }
                for &e in &b.add {
                    out.insert(e);
                }
            }
        }
        out
    }
}

/// Which graph an edge mentioned by a recipe must belong to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum EdgeRole {
    /// Guards and removals refer to the reduced graph.
    Reduced,
    /// Added matching edges belong to the graph before the step.
    Original,
}
