use alloc::vec::Vec;

use crate::pbox::ProbabilityBox;
use crate::rational::Rational;
use crate::scenario::{Event, InputId};

/// Two contexts disagreeing on the marginal of an event over their shared inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NdViolation {
    pub event: Event,
    pub contexts: (usize, usize),
    pub values: (Rational, Rational),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NdReport {
    pub violations: Vec<NdViolation>,
}

impl NdReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares, for every pair of overlapping contexts, the marginals each
/// one induces on their shared inputs. For contexts that share a single
/// input this is exactly `P(o|x)` consistency.
pub fn check_no_disturbance(pbox: &ProbabilityBox) -> NdReport {
    let s = pbox.scenario();
    let mut violations = Vec::new();
    let n = s.contexts().len();
    for k in 0..n {
        for l in (k + 1)..n {
            let shared: Vec<InputId> = s
                .context(k)
                .inputs()
                .iter()
                .copied()
                .filter(|i| s.context(l).contains(*i))
                .collect();
            if shared.is_empty() {
                continue;
            }
            let total: usize = shared.iter().map(|i| s.input(*i).outputs as usize).product();
            for mut idx in 0..total {
                let mut outs = alloc::vec![0u32; shared.len()];
                for slot in (0..shared.len()).rev() {
                    let card = s.input(shared[slot]).outputs as usize;
                    outs[slot] = (idx % card) as u32;
                    idx /= card;
                }
                let e = Event::new(shared.iter().copied().zip(outs).collect());
                let a = pbox.marginal_in(k, &e);
                let b = pbox.marginal_in(l, &e);
                if a != b {
                    violations.push(NdViolation {
                        event: e,
                        contexts: (k, l),
                        values: (a, b),
                    });
                }
            }
        }
    }
    NdReport { violations }
}
