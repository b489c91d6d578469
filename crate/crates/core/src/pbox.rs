//! Probability boxes: one exact outcome distribution per maximal context.

use alloc::vec::Vec;

use crate::error::Error;
use crate::rational::Rational;
use crate::scenario::{Context, Event, InputId, Scenario};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProbabilityBox {
    scenario: Scenario,
    tables: Vec<Vec<Rational>>,
}

impl ProbabilityBox {
    /// `tables[k]` is the distribution of context `k` of the scenario,
    /// indexed by [`Scenario::outcome_index`].
    pub fn new(scenario: Scenario, tables: Vec<Vec<Rational>>) -> Result<Self, Error> {
        if tables.len() != scenario.contexts().len() {
            return Err(Error::DimensionMismatch {
                expected: scenario.contexts().len(),
                found: tables.len(),
            });
        }
        for (k, table) in tables.iter().enumerate() {
            let expected = scenario.outcome_count(k);
            if table.len() != expected {
                return Err(Error::TableShape {
                    context: scenario.context_key(k),
                    expected,
                    found: table.len(),
                });
            }
            for (idx, p) in table.iter().enumerate() {
                if p.is_negative() {
                    return Err(Error::NegativeEntry {
                        context: scenario.context_key(k),
                        outcome: Scenario::outcome_string(&scenario.outcome_at(k, idx)),
                        value: p.clone(),
                    });
                }
            }
            let sum: Rational = table.iter().sum();
            if !sum.is_one() {
                return Err(Error::NotNormalized {
                    context: scenario.context_key(k),
                    sum,
                });
            }
        }
        Ok(ProbabilityBox { scenario, tables })
    }

    /// Builds each table by evaluating `f(context index, outputs)`.
    pub fn from_fn<F>(scenario: Scenario, mut f: F) -> Result<Self, Error>
    where
        F: FnMut(usize, &[u32]) -> Rational,
    {
        let tables = (0..scenario.contexts().len())
            .map(|k| {
                (0..scenario.outcome_count(k))
                    .map(|idx| f(k, &scenario.outcome_at(k, idx)))
                    .collect()
            })
            .collect();
        ProbabilityBox::new(scenario, tables)
    }

    /// Uniform distribution on every context.
    pub fn uniform(scenario: Scenario) -> Self {
        let tables = (0..scenario.contexts().len())
            .map(|k| {
                let n = scenario.outcome_count(k);
                alloc::vec![Rational::new(1, n as i64); n]
            })
            .collect();
        ProbabilityBox { scenario, tables }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn tables(&self) -> &[Vec<Rational>] {
        &self.tables
    }

    pub fn table(&self, context: usize) -> &[Rational] {
        &self.tables[context]
    }

    pub fn entry(&self, context: usize, outputs: &[u32]) -> &Rational {
        &self.tables[context][self.scenario.outcome_index(context, outputs)]
    }

    /// Sum of the entries of `context` consistent with `e`. The event's
    /// inputs must all lie in the context.
    pub fn marginal_in(&self, context: usize, e: &Event) -> Rational {
        let ctx: &Context = self.scenario.context(context);
        let slots: Vec<(usize, u32)> = e
            .assignment()
            .iter()
            .map(|(i, o)| (ctx.position(*i).expect("event input in context"), *o))
            .collect();
        let mut total = Rational::zero();
        for (idx, p) in self.tables[context].iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let outs = self.scenario.outcome_at(context, idx);
            if slots.iter().all(|(s, o)| outs[*s] == *o) {
                total += p;
            }
        }
        total
    }

    /// Probability of `e`, read from the smallest containing context.
    pub fn event_probability(&self, e: &Event) -> Result<Rational, Error> {
        self.scenario.validate_event(e)?;
        let k = self
            .scenario
            .containing_context(&e.inputs())
            .expect("validated event has a context");
        Ok(self.marginal_in(k, e))
    }

    /// `p·self + (1−p)·other`; both boxes must share a scenario.
    pub fn mix(&self, p: &Rational, other: &ProbabilityBox) -> Result<ProbabilityBox, Error> {
        if self.scenario != other.scenario {
            return Err(Error::DimensionMismatch {
                expected: self.tables.len(),
                found: other.tables.len(),
            });
        }
        if p.is_negative() || *p > 1 {
            return Err(Error::ParameterOutOfRange {
                name: "p",
                value: p.clone(),
                range: "0 <= p <= 1",
            });
        }
        let q = Rational::one() - p;
        let tables = self
            .tables
            .iter()
            .zip(&other.tables)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| p * x + &q * y).collect())
            .collect();
        Ok(ProbabilityBox {
            scenario: self.scenario.clone(),
            tables,
        })
    }

    /// Sub-box on the inputs in `keep`, keeping only contexts inside it.
    pub fn restrict(&self, keep: &[InputId]) -> Result<ProbabilityBox, Error> {
        let sub = self.scenario.restrict(keep)?;
        let tables = sub
            .contexts()
            .iter()
            .map(|ctx| {
                let labels: Vec<InputId> = ctx
                    .inputs()
                    .iter()
                    .map(|i| self.scenario.input_id(&sub.input(*i).label).expect("kept input"))
                    .collect();
                let k = self
                    .scenario
                    .contexts()
                    .iter()
                    .position(|c| c.inputs() == labels.as_slice())
                    .expect("context kept verbatim");
                self.tables[k].clone()
            })
            .collect();
        ProbabilityBox::new(sub, tables)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use alloc::vec;

    fn pair_box() -> ProbabilityBox {
        let s = Scenario::binary(&[("P", &["a", "b", "c"])], &[&["a", "b"], &["b", "c"]]).unwrap();
        ProbabilityBox::new(
            s,
            vec![
                vec![q(1, 2), q(0, 1), q(1, 4), q(1, 4)],
                vec![q(3, 4), q(0, 1), q(0, 1), q(1, 4)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn full_context_event_reads_entry() {
        let b = pair_box();
        let s = b.scenario();
        for k in 0..s.contexts().len() {
            for e in s.full_context_events() {
                if s.context(k).inputs() == e.inputs().as_slice() {
                    let outs: Vec<u32> = e.assignment().iter().map(|(_, o)| *o).collect();
                    assert_eq!(&b.event_probability(&e).unwrap(), b.entry(k, &outs));
                }
            }
        }
    }

    #[test]
    fn marginal_sum() {
        let b = pair_box();
        let e = b.scenario().event(&[("a", 0)]).unwrap();
        assert_eq!(b.event_probability(&e).unwrap(), q(1, 2));
        let e = b.scenario().event(&[("b", 0)]).unwrap();
        // from context a,b: 1/2 + 1/4
        assert_eq!(b.event_probability(&e).unwrap(), q(3, 4));
    }

    #[test]
    fn rejects_unnormalized_with_label() {
        let s = Scenario::binary(&[("P", &["a", "b"])], &[&["a", "b"]]).unwrap();
        let err = ProbabilityBox::new(s, vec![vec![q(1, 2), q(1, 3), q(0, 1), q(0, 1)]]).unwrap_err();
        assert_eq!(
            err,
            Error::NotNormalized {
                context: "a,b".into(),
                sum: q(5, 6)
            }
        );
    }

    #[test]
    fn rejects_negative() {
        let s = Scenario::binary(&[("P", &["a"])], &[&["a"]]).unwrap();
        let err = ProbabilityBox::new(s, vec![vec![q(3, 2), q(-1, 2)]]).unwrap_err();
        assert!(matches!(err, Error::NegativeEntry { .. }));
    }

    #[test]
    fn event_outside_contexts() {
        let b = pair_box();
        let e = Event::new(vec![(0, 0), (2, 0)]);
        assert!(matches!(b.event_probability(&e), Err(Error::EventOutsideContexts(_))));
    }

    #[test]
    fn mixing() {
        let b = pair_box();
        let w = ProbabilityBox::uniform(b.scenario().clone());
        let m = b.mix(&q(1, 2), &w).unwrap();
        assert_eq!(m.table(0)[0], q(3, 8));
        assert_eq!(b.mix(&Rational::one(), &w).unwrap(), b);
    }

    proptest::proptest! {
        #[test]
        fn probability_is_additive(w in proptest::collection::vec(1u32..20, 4), x in 0u32..2) {
            let s = Scenario::binary(&[("P", &["a", "b"])], &[&["a", "b"]]).unwrap();
            let total: u32 = w.iter().sum();
            let t: Vec<Rational> = w.iter().map(|v| q(*v as i64, total as i64)).collect();
            let b = ProbabilityBox::new(s.clone(), vec![t]).unwrap();
            let single = b.event_probability(&s.event(&[("a", x)]).unwrap()).unwrap();
            let ext: Rational = (0..2)
                .map(|y| b.event_probability(&s.event(&[("a", x), ("b", y)]).unwrap()).unwrap())
                .sum();
            proptest::prop_assert_eq!(single, ext);
        }
    }
}
