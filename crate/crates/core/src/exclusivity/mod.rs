//! Exclusive events and the exclusivity principle.
//!
//! Two events are exclusive when some input is assigned different outputs
//! by each. Pairwise-exclusive events form cliques of the exclusivity
//! graph, and the exclusivity principle bounds the probability mass of
//! any such clique by 1.

mod bitset;
mod clique;
mod copies;
mod level_one;
mod two_copy;

pub use clique::{heaviest_clique_above, max_weight_clique, maximal_cliques};
pub use copies::{lo_k_check, product_box, LoOutcome};
pub use level_one::{
    e1_check, level_one_inequalities, noise_threshold, E1Report, E1ViolationCertificate,
    SymbolicInequality,
};

use alloc::vec::Vec;

use bitset::BitSet;

use crate::error::Error;
use crate::scenario::{Event, Scenario};

/// True iff some input is assigned by both events with different outputs.
pub fn exclusive(a: &Event, b: &Event) -> bool {
    let (x, y) = (a.assignment(), b.assignment());
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        match x[i].0.cmp(&y[j].0) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                if x[i].1 != y[j].1 {
                    return true;
                }
                i += 1;
                j += 1;
            }
        }
    }
    false
}

/// Events as nodes, exclusivity as edges.
#[derive(Debug, Clone)]
pub struct ExclusivityGraph {
    nodes: Vec<Event>,
    adj: Vec<BitSet>,
}

impl ExclusivityGraph {
    pub fn nodes(&self) -> &[Event] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    pub fn degree(&self, a: usize) -> usize {
        self.adj[a].len()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|a| self.adj[a].iter().filter(move |b| *b > a).map(move |b| (a, b)))
            .collect()
    }

    /// Whether `nodes` are pairwise adjacent.
    pub fn is_clique(&self, nodes: &[usize]) -> bool {
        nodes
            .iter()
            .enumerate()
            .all(|(k, a)| nodes[k + 1..].iter().all(|b| self.adjacent(*a, *b)))
    }
}

/// Builds the graph over `universe`, or over every full-context event of
/// the scenario when `None`. Nodes keep the order given (canonical for the
/// default universe).
pub fn build_exclusivity_graph(
    scenario: &Scenario,
    universe: Option<Vec<Event>>,
) -> Result<ExclusivityGraph, Error> {
    let nodes = match universe {
        Some(events) => {
            for e in &events {
                scenario.validate_event(e)?;
            }
            events
        }
        None => scenario.full_context_events(),
    };
    let n = nodes.len();
    let mut adj = alloc::vec![BitSet::new(n); n];
    for a in 0..n {
        for b in (a + 1)..n {
            if exclusive(&nodes[a], &nodes[b]) {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
    }
    Ok(ExclusivityGraph { nodes, adj })
}

#[cfg(test)]
mod tests;
