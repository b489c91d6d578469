//! Measurement scenarios: parties, labelled inputs with finite output
//! alphabets, and the explicitly declared jointly-measurable contexts.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::Error;

/// Index of an input within its scenario's canonical (label-sorted) input list.
pub type InputId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Input {
    pub label: String,
    /// Index into [`Scenario::parties`].
    pub party: usize,
    pub outputs: u32,
}

/// A set of jointly measurable inputs, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Context(Vec<InputId>);

impl Context {
    pub fn inputs(&self) -> &[InputId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, input: InputId) -> bool {
        self.0.binary_search(&input).is_ok()
    }

    pub fn position(&self, input: InputId) -> Option<usize> {
        self.0.binary_search(&input).ok()
    }

    pub fn is_superset_of(&self, inputs: &[InputId]) -> bool {
        inputs.iter().all(|i| self.contains(*i))
    }
}

/// Outputs assigned to a nonempty set of inputs, sorted by input.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event(Vec<(InputId, u32)>);

impl Event {
    /// Builds an event from raw pairs. Validity against a scenario is
    /// checked by [`Scenario::validate_event`].
    pub fn new(mut assignment: Vec<(InputId, u32)>) -> Self {
        assignment.sort_unstable();
        Event(assignment)
    }

    pub fn assignment(&self) -> &[(InputId, u32)] {
        &self.0
    }

    pub fn inputs(&self) -> Vec<InputId> {
        self.0.iter().map(|(i, _)| *i).collect()
    }

    pub fn output_of(&self, input: InputId) -> Option<u32> {
        self.0
            .binary_search_by_key(&input, |(i, _)| *i)
            .ok()
            .map(|k| self.0[k].1)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scenario {
    parties: Vec<String>,
    inputs: Vec<Input>,
    contexts: Vec<Context>,
}

/// A party together with its `(input label, output cardinality)` list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartySpec {
    pub name: String,
    pub inputs: Vec<(String, u32)>,
}

impl PartySpec {
    pub fn new(name: &str, inputs: &[(&str, u32)]) -> Self {
        PartySpec {
            name: name.to_string(),
            inputs: inputs.iter().map(|(l, n)| (l.to_string(), *n)).collect(),
        }
    }
}

impl Scenario {
    /// Validates and canonicalizes: parties and inputs are sorted by label,
    /// each context is sorted, duplicates and non-maximal contexts dropped,
    /// and contexts ordered lexicographically.
    pub fn new(parties: Vec<PartySpec>, contexts: Vec<Vec<String>>) -> Result<Self, Error> {
        let mut party_names: Vec<String> = parties.iter().map(|p| p.name.clone()).collect();
        party_names.sort();
        for w in party_names.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateParty(w[0].clone()));
            }
        }

        let mut inputs = Vec::new();
        for p in &parties {
            let party = party_names.binary_search(&p.name).expect("party present");
            for (label, outputs) in &p.inputs {
                if *outputs == 0 {
                    return Err(Error::InvalidCardinality {
                        input: label.clone(),
                        outputs: *outputs,
                    });
                }
                inputs.push(Input {
                    label: label.clone(),
                    party,
                    outputs: *outputs,
                });
            }
        }
        inputs.sort_by(|a, b| a.label.cmp(&b.label));
        for w in inputs.windows(2) {
            if w[0].label == w[1].label {
                return Err(Error::DuplicateInput(w[0].label.clone()));
            }
        }

        let lookup = |label: &str| -> Result<InputId, Error> {
            inputs
                .binary_search_by(|i| i.label.as_str().cmp(label))
                .map_err(|_| Error::UnknownInput(label.to_string()))
        };

        let mut declared = BTreeSet::new();
        for ctx in &contexts {
            if ctx.is_empty() {
                return Err(Error::EmptyContext);
            }
            let mut ids = ctx.iter().map(|l| lookup(l)).collect::<Result<Vec<_>, _>>()?;
            ids.sort_unstable();
            for w in ids.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::RepeatedInput(inputs[w[0]].label.clone()));
                }
            }
            declared.insert(Context(ids));
        }
        let maximal: Vec<Context> = declared
            .iter()
            .filter(|c| {
                !declared
                    .iter()
                    .any(|d| d.len() > c.len() && d.is_superset_of(c.inputs()))
            })
            .cloned()
            .collect();

        for (id, input) in inputs.iter().enumerate() {
            if !maximal.iter().any(|c| c.contains(id)) {
                return Err(Error::UncoveredInput(input.label.clone()));
            }
        }

        Ok(Scenario {
            parties: party_names,
            inputs,
            contexts: maximal,
        })
    }

    /// Binary-output convenience constructor.
    pub fn binary(parties: &[(&str, &[&str])], contexts: &[&[&str]]) -> Result<Self, Error> {
        let specs = parties
            .iter()
            .map(|(name, labels)| PartySpec {
                name: name.to_string(),
                inputs: labels.iter().map(|l| (l.to_string(), 2)).collect(),
            })
            .collect();
        let ctxs = contexts
            .iter()
            .map(|c| c.iter().map(|l| l.to_string()).collect())
            .collect();
        Scenario::new(specs, ctxs)
    }

    pub fn parties(&self) -> &[String] {
        &self.parties
    }

    pub fn inputs(&self) -> &[Input] {
        &self.inputs
    }

    pub fn input(&self, id: InputId) -> &Input {
        &self.inputs[id]
    }

    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    pub fn context(&self, idx: usize) -> &Context {
        &self.contexts[idx]
    }

    pub fn input_id(&self, label: &str) -> Result<InputId, Error> {
        self.inputs
            .binary_search_by(|i| i.label.as_str().cmp(label))
            .map_err(|_| Error::UnknownInput(label.to_string()))
    }

    /// Inputs belonging to `party`, in canonical order.
    pub fn party_inputs(&self, party: usize) -> Vec<InputId> {
        (0..self.inputs.len())
            .filter(|i| self.inputs[*i].party == party)
            .collect()
    }

    pub fn party_id(&self, name: &str) -> Option<usize> {
        self.parties.binary_search_by(|p| p.as_str().cmp(name)).ok()
    }

    /// Comma-joined labels of the context, e.g. `"A1,B2"`.
    pub fn context_key(&self, idx: usize) -> String {
        self.join_labels(self.contexts[idx].inputs())
    }

    pub fn join_labels(&self, ids: &[InputId]) -> String {
        let mut s = String::new();
        for (k, id) in ids.iter().enumerate() {
            if k > 0 {
                s.push(',');
            }
            s.push_str(&self.inputs[*id].label);
        }
        s
    }

    /// Number of joint outcomes of a context.
    pub fn outcome_count(&self, idx: usize) -> usize {
        self.contexts[idx]
            .inputs()
            .iter()
            .map(|i| self.inputs[*i].outputs as usize)
            .product()
    }

    /// Mixed-radix index of `outputs` in the context's table; the first
    /// input is the most significant digit.
    pub fn outcome_index(&self, idx: usize, outputs: &[u32]) -> usize {
        let ctx = &self.contexts[idx];
        debug_assert_eq!(outputs.len(), ctx.len());
        ctx.inputs()
            .iter()
            .zip(outputs)
            .fold(0, |acc, (i, o)| acc * self.inputs[*i].outputs as usize + *o as usize)
    }

    pub fn outcome_at(&self, idx: usize, mut index: usize) -> Vec<u32> {
        let ctx = &self.contexts[idx];
        let mut out = alloc::vec![0; ctx.len()];
        for (slot, i) in ctx.inputs().iter().enumerate().rev() {
            let n = self.inputs[*i].outputs as usize;
            out[slot] = (index % n) as u32;
            index /= n;
        }
        out
    }

    /// The smallest context containing every input of `inputs`; ties go to
    /// the first in canonical order.
    pub fn containing_context(&self, inputs: &[InputId]) -> Option<usize> {
        self.contexts
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_superset_of(inputs))
            .min_by_key(|(k, c)| (c.len(), *k))
            .map(|(k, _)| k)
    }

    pub fn validate_event(&self, e: &Event) -> Result<(), Error> {
        if e.is_empty() {
            return Err(Error::EmptyEvent);
        }
        for w in e.assignment().windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::RepeatedInput(self.inputs[w[0].0].label.clone()));
            }
        }
        for (i, o) in e.assignment() {
            let input = self
                .inputs
                .get(*i)
                .ok_or_else(|| Error::UnknownInput(alloc::format!("#{i}")))?;
            if *o >= input.outputs {
                return Err(Error::OutputOutOfRange {
                    input: input.label.clone(),
                    output: *o,
                    cardinality: input.outputs,
                });
            }
        }
        if self.containing_context(&e.inputs()).is_none() {
            return Err(Error::EventOutsideContexts(self.format_event(e)));
        }
        Ok(())
    }

    /// Event from labelled outputs, validated.
    pub fn event(&self, assignment: &[(&str, u32)]) -> Result<Event, Error> {
        let pairs = assignment
            .iter()
            .map(|(l, o)| self.input_id(l).map(|id| (id, *o)))
            .collect::<Result<Vec<_>, _>>()?;
        let e = Event::new(pairs);
        self.validate_event(&e)?;
        Ok(e)
    }

    /// Parses the compact notation `"11|A1,B1"`; outputs are single digits
    /// matched positionally against the listed inputs.
    pub fn parse_event(&self, text: &str) -> Result<Event, Error> {
        let bad = || Error::EventOutsideContexts(text.to_string());
        let body = text.trim().trim_start_matches('(').trim_end_matches(')');
        let (outs, ins) = body.split_once('|').ok_or_else(bad)?;
        let labels: Vec<&str> = ins.split(',').map(str::trim).collect();
        let digits: Vec<u32> = outs
            .trim()
            .chars()
            .map(|c| c.to_digit(10).ok_or_else(bad))
            .collect::<Result<_, _>>()?;
        if digits.len() != labels.len() {
            return Err(bad());
        }
        let pairs: Vec<(&str, u32)> = labels.into_iter().zip(digits).collect();
        self.event(&pairs)
    }

    /// `(o1o2|x1,x2)` with outputs listed in canonical input order.
    pub fn format_event(&self, e: &Event) -> String {
        let mut s = String::from("(");
        for (_, o) in e.assignment() {
            let _ = write!(s, "{o}");
        }
        s.push('|');
        s.push_str(&self.join_labels(&e.inputs()));
        s.push(')');
        s
    }

    /// One character per output; digits for cardinality up to 10.
    pub fn outcome_string(outputs: &[u32]) -> String {
        outputs
            .iter()
            .map(|o| char::from_digit(*o, 36).unwrap_or('?'))
            .collect()
    }

    /// Every outcome of every context, in canonical (context, outcome) order.
    pub fn full_context_events(&self) -> Vec<Event> {
        let mut out = Vec::new();
        for (k, ctx) in self.contexts.iter().enumerate() {
            for idx in 0..self.outcome_count(k) {
                let outs = self.outcome_at(k, idx);
                out.push(Event::new(ctx.inputs().iter().copied().zip(outs).collect()));
            }
        }
        out
    }

    /// Every valid event: all outcomes on every nonempty subset of every
    /// context, deduplicated and sorted.
    pub fn all_events(&self) -> Vec<Event> {
        let mut set = BTreeSet::new();
        for ctx in &self.contexts {
            let n = ctx.len();
            for mask in 1u64..(1u64 << n) {
                let subset: Vec<InputId> = (0..n)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| ctx.inputs()[b])
                    .collect();
                let total: usize = subset
                    .iter()
                    .map(|i| self.inputs[*i].outputs as usize)
                    .product();
                for mut idx in 0..total {
                    let mut outs = alloc::vec![0u32; subset.len()];
                    for slot in (0..subset.len()).rev() {
                        let n = self.inputs[subset[slot]].outputs as usize;
                        outs[slot] = (idx % n) as u32;
                        idx /= n;
                    }
                    set.insert(Event::new(subset.iter().copied().zip(outs).collect()));
                }
            }
        }
        set.into_iter().collect()
    }

    /// Keeps only the inputs in `keep` and the contexts lying entirely
    /// inside it. Parties left without inputs are dropped.
    pub fn restrict(&self, keep: &[InputId]) -> Result<Scenario, Error> {
        let keep: BTreeSet<InputId> = keep.iter().copied().collect();
        let mut parties = Vec::new();
        for (p, name) in self.parties.iter().enumerate() {
            let inputs: Vec<(String, u32)> = self
                .party_inputs(p)
                .into_iter()
                .filter(|i| keep.contains(i))
                .map(|i| (self.inputs[i].label.clone(), self.inputs[i].outputs))
                .collect();
            if !inputs.is_empty() {
                parties.push(PartySpec {
                    name: name.clone(),
                    inputs,
                });
            }
        }
        let contexts = self
            .contexts
            .iter()
            .filter(|c| c.inputs().iter().all(|i| keep.contains(i)))
            .map(|c| c.inputs().iter().map(|i| self.inputs[*i].label.clone()).collect())
            .collect();
        Scenario::new(parties, contexts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn tri() -> Scenario {
        Scenario::binary(
            &[("P", &["x3", "x1", "x2"])],
            &[&["x2", "x1"], &["x2", "x3"], &["x1", "x3"]],
        )
        .unwrap()
    }

    #[test]
    fn canonical_order() {
        let s = tri();
        let labels: Vec<_> = s.inputs().iter().map(|i| i.label.as_str()).collect();
        assert_eq!(labels, ["x1", "x2", "x3"]);
        let keys: Vec<_> = (0..3).map(|k| s.context_key(k)).collect();
        assert_eq!(keys, ["x1,x2", "x1,x3", "x2,x3"]);
    }

    #[test]
    fn non_maximal_contexts_absorbed() {
        let s = Scenario::binary(&[("P", &["a", "b"])], &[&["a"], &["a", "b"], &["b", "a"]]).unwrap();
        assert_eq!(s.contexts().len(), 1);
    }

    #[test]
    fn rejects_bad_scenarios() {
        assert_eq!(
            Scenario::binary(&[("P", &["a", "b"])], &[&["a"]]),
            Err(Error::UncoveredInput("b".into()))
        );
        assert_eq!(
            Scenario::binary(&[("P", &["a"])], &[&["a", "z"]]),
            Err(Error::UnknownInput("z".into()))
        );
        assert_eq!(
            Scenario::binary(&[("P", &["a"]), ("Q", &["a"])], &[&["a"]]),
            Err(Error::DuplicateInput("a".into()))
        );
        assert_eq!(
            Scenario::binary(&[("P", &["a"])], &[&["a", "a"]]),
            Err(Error::RepeatedInput("a".into()))
        );
    }

    #[test]
    fn outcome_indexing_round_trips() {
        let s = Scenario::new(
            vec![PartySpec::new("P", &[("a", 3), ("b", 2)])],
            vec![vec!["a".into(), "b".into()]],
        )
        .unwrap();
        assert_eq!(s.outcome_count(0), 6);
        for idx in 0..6 {
            let o = s.outcome_at(0, idx);
            assert_eq!(s.outcome_index(0, &o), idx);
        }
        assert_eq!(s.outcome_at(0, 5), vec![2, 1]);
    }

    #[test]
    fn events_validated() {
        let s = tri();
        assert!(s.event(&[("x1", 0), ("x2", 1)]).is_ok());
        assert!(matches!(s.event(&[("x1", 2)]), Err(Error::OutputOutOfRange { .. })));
        assert!(matches!(s.event(&[("x9", 0)]), Err(Error::UnknownInput(_))));
        assert_eq!(s.parse_event("(01|x1,x3)").unwrap(), s.event(&[("x1", 0), ("x3", 1)]).unwrap());
        let s2 = Scenario::binary(&[("A", &["a"]), ("B", &["b"])], &[&["a"], &["b"]]).unwrap();
        assert!(matches!(s2.event(&[("a", 0), ("b", 0)]), Err(Error::EventOutsideContexts(_))));
    }

    #[test]
    fn event_universe_sizes() {
        let s = tri();
        assert_eq!(s.full_context_events().len(), 12);
        // 6 single-input events + 12 pair events
        assert_eq!(s.all_events().len(), 18);
    }

    #[test]
    fn restrict_to_subset() {
        let s = Scenario::binary(
            &[("A", &["A1", "A2"]), ("B", &["B1"])],
            &[&["A1", "A2"], &["A1", "B1"], &["A2", "B1"]],
        )
        .unwrap();
        let ids = s.party_inputs(0);
        let r = s.restrict(&ids).unwrap();
        assert_eq!(r.parties(), ["A"]);
        assert_eq!(r.contexts().len(), 1);
    }
}
