use alloc::vec::Vec;

use super::{build_exclusivity_graph, exclusive, maximal_cliques};
use crate::error::Error;
use crate::pbox::ProbabilityBox;
use crate::polytope::{self, NdParameterization, PAIRS};
use crate::rational::Rational;
use crate::scenario::Event;

/// Pairwise-exclusive events whose probabilities sum past 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct E1ViolationCertificate {
    pub events: Vec<Event>,
    pub probabilities: Vec<Rational>,
    pub total: Rational,
}

impl E1ViolationCertificate {
    /// Rechecks the certificate against `pbox` by direct arithmetic.
    pub fn verify(&self, pbox: &ProbabilityBox) -> bool {
        if self.events.len() != self.probabilities.len() {
            return false;
        }
        let pairwise = self
            .events
            .iter()
            .enumerate()
            .all(|(k, a)| self.events[k + 1..].iter().all(|b| exclusive(a, b)));
        let probs_match = self
            .events
            .iter()
            .zip(&self.probabilities)
            .all(|(e, p)| pbox.event_probability(e).is_ok_and(|v| v == *p));
        let sum: Rational = self.probabilities.iter().sum();
        pairwise && probs_match && sum == self.total && self.total > 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct E1Report {
    pub certificates: Vec<E1ViolationCertificate>,
}

impl E1Report {
    pub fn passes(&self) -> bool {
        self.certificates.is_empty()
    }

    /// The certificate with the largest total (first on ties).
    pub fn worst(&self) -> Option<&E1ViolationCertificate> {
        self.certificates
            .iter()
            .reduce(|a, b| if b.total > a.total { b } else { a })
    }
}

/// Single-copy exclusivity check over the full-context events. Every
/// maximal clique whose probabilities sum above 1 is reported, in
/// canonical clique order. Assumes the box is no-disturbing.
pub fn e1_check(pbox: &ProbabilityBox) -> E1Report {
    let g = build_exclusivity_graph(pbox.scenario(), None).expect("default universe is valid");
    let probs: Vec<Rational> = g
        .nodes()
        .iter()
        .map(|e| pbox.event_probability(e).expect("full-context event"))
        .collect();
    let certificates = maximal_cliques(&g)
        .into_iter()
        .filter_map(|clique| {
            let probabilities: Vec<Rational> = clique.iter().map(|&i| probs[i].clone()).collect();
            let total: Rational = probabilities.iter().sum();
            (total > 1).then(|| E1ViolationCertificate {
                events: clique.iter().map(|&i| g.nodes()[i].clone()).collect(),
                probabilities,
                total,
            })
        })
        .collect();
    E1Report { certificates }
}

/// `constant + coeffs · (m1, m2, m3, c12, c23, c13) <= 1`, the clique sum of
/// `events` written through the six-parameter form of the table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicInequality {
    pub events: Vec<Event>,
    pub constant: i64,
    pub coeffs: [i64; 6],
}

impl SymbolicInequality {
    pub fn lhs(&self, p: &NdParameterization) -> Rational {
        p.to_array()
            .iter()
            .zip(self.coeffs)
            .fold(Rational::from(self.constant), |acc, (v, c)| acc + v * &Rational::from(c))
    }
}

/// The non-trivial single-copy constraints on the three-input polytope:
/// one per maximal clique that meets all three pair contexts.
pub fn level_one_inequalities() -> Vec<SymbolicInequality> {
    let s = polytope::three_input_scenario();
    let g = build_exclusivity_graph(&s, None).expect("default universe is valid");
    let facets = polytope::facets();
    maximal_cliques(&g)
        .into_iter()
        .filter_map(|clique| {
            let events: Vec<Event> = clique.iter().map(|&i| g.nodes()[i].clone()).collect();
            let mut seen = [false; 3];
            let mut constant = 0;
            let mut coeffs = [0i64; 6];
            for e in &events {
                let ins = e.inputs();
                let pair = PAIRS.iter().position(|p| [p.0, p.1] == ins.as_slice())?;
                seen[pair] = true;
                let (a, b) = (e.assignment()[0].1, e.assignment()[1].1);
                let f = &facets[pair * 4 + (2 * a + b) as usize];
                constant += f.constant;
                for (c, d) in coeffs.iter_mut().zip(f.coeffs) {
                    *c += d;
                }
            }
            seen.iter().all(|x| *x).then_some(SymbolicInequality {
                events,
                constant,
                coeffs,
            })
        })
        .collect()
}

/// For an indeterministic vertex `v`, the critical weight `p` such that
/// `p·v + (1−p)·W` (with `W` uniform) violates a single-copy constraint iff
/// `p` exceeds it. Clique sums are affine in `p`, so each violated clique
/// crosses 1 at `(1 − t_W)/(t_v − t_W)`; the smallest crossing wins.
pub fn noise_threshold(vertex: &ProbabilityBox) -> Result<Rational, Error> {
    let params = polytope::to_parameterization(vertex).map_err(|_| Error::NotIndeterministicVertex)?;
    if !polytope::enumerate_vertices()
        .iter()
        .any(|v| !v.deterministic && v.params == params)
    {
        return Err(Error::NotIndeterministicVertex);
    }
    let uniform = ProbabilityBox::uniform(vertex.scenario().clone());
    let g = build_exclusivity_graph(vertex.scenario(), None)?;
    let total = |b: &ProbabilityBox, clique: &[usize]| -> Rational {
        clique
            .iter()
            .map(|&i| b.event_probability(&g.nodes()[i]).expect("full-context event"))
            .sum()
    };
    maximal_cliques(&g)
        .iter()
        .filter_map(|clique| {
            let tv = total(vertex, clique);
            let tw = total(&uniform, clique);
            (tv > 1 && tw <= 1).then(|| (Rational::one() - &tw) / (tv - tw))
        })
        .reduce(Rational::min)
        .ok_or(Error::NotIndeterministicVertex)
}
