//! JSON box files.
//!
//! ```json
//! {
//!   "parties": ["A", "B"],
//!   "inputs": { "A": ["a0", "a1"], "B": ["b0", "b1"] },
//!   "outputs": { "a0": 2, "a1": 2, "b0": 2, "b1": 2 },
//!   "contexts": [["a0", "b0"], ["a0", "b1"], ["a1", "b0"], ["a1", "b1"]],
//!   "tables": { "a0,b0": { "00": "1/2", "01": "0", "10": "0", "11": "1/2" }, ... }
//! }
//! ```
//!
//! Outcome strings hold one digit per context input, in context order.
//! Probabilities are integer or `p/q` strings.

use std::collections::BTreeMap;

use exbox_core::{PartySpec, ProbabilityBox, Rational, Scenario};
use serde::{Deserialize, Serialize};

use crate::Error;

/// Outcome strings use one decimal digit per input.
pub const MAX_OUTPUTS: u32 = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxFile {
    pub parties: Vec<String>,
    pub inputs: BTreeMap<String, Vec<String>>,
    pub outputs: BTreeMap<String, u32>,
    pub contexts: Vec<Vec<String>>,
    pub tables: BTreeMap<String, BTreeMap<String, String>>,
}

impl BoxFile {
    pub fn from_box(pbox: &ProbabilityBox) -> BoxFile {
        let s = pbox.scenario();
        let mut inputs = BTreeMap::new();
        for (p, name) in s.parties().iter().enumerate() {
            let labels = s.party_inputs(p).into_iter().map(|i| s.input(i).label.clone()).collect();
            inputs.insert(name.clone(), labels);
        }
        let outputs = s.inputs().iter().map(|i| (i.label.clone(), i.outputs)).collect();
        let contexts = s
            .contexts()
            .iter()
            .map(|c| c.inputs().iter().map(|i| s.input(*i).label.clone()).collect())
            .collect();
        let tables = (0..s.contexts().len())
            .map(|k| {
                let rows = pbox
                    .table(k)
                    .iter()
                    .enumerate()
                    .map(|(idx, p)| (Scenario::outcome_string(&s.outcome_at(k, idx)), p.to_string()))
                    .collect();
                (s.context_key(k), rows)
            })
            .collect();
        BoxFile { parties: s.parties().to_vec(), inputs, outputs, contexts, tables }
    }

    pub fn to_box(&self) -> Result<ProbabilityBox, Error> {
        let mut parties = Vec::new();
        for name in &self.parties {
            let labels = self
                .inputs
                .get(name)
                .ok_or_else(|| Error::Format(format!("party {name} has no input list")))?;
            let mut spec = Vec::new();
            for label in labels {
                let n = *self
                    .outputs
                    .get(label)
                    .ok_or_else(|| Error::Format(format!("input {label} has no output count")))?;
                if n > MAX_OUTPUTS {
                    return Err(Error::Format(format!("input {label}: at most {MAX_OUTPUTS} outputs supported")));
                }
                spec.push((label.clone(), n));
            }
            parties.push(PartySpec { name: name.clone(), inputs: spec });
        }
        if let Some(p) = self.inputs.keys().find(|p| !self.parties.contains(p)) {
            return Err(Error::Format(format!("inputs listed for undeclared party {p}")));
        }
        if let Some(label) = self.outputs.keys().find(|l| !parties.iter().any(|p| p.inputs.iter().any(|i| &i.0 == *l))) {
            return Err(Error::Core(exbox_core::Error::UnknownInput(label.clone())));
        }
        let s = Scenario::new(parties, self.contexts.clone())?;

        if let Some(key) = self.tables.keys().find(|k| !(0..s.contexts().len()).any(|c| s.context_key(c) == **k)) {
            return Err(Error::Format(format!("table for undeclared context {key}")));
        }
        let mut tables = Vec::new();
        for k in 0..s.contexts().len() {
            let key = s.context_key(k);
            let rows = self.tables.get(&key).ok_or_else(|| Error::Format(format!("missing table for context {key}")))?;
            let n = s.outcome_count(k);
            if rows.len() != n {
                return Err(Error::Core(exbox_core::Error::TableShape { context: key, expected: n, found: rows.len() }));
            }
            let mut table = Vec::with_capacity(n);
            for idx in 0..n {
                let outcome = Scenario::outcome_string(&s.outcome_at(k, idx));
                let text = rows
                    .get(&outcome)
                    .ok_or_else(|| Error::Format(format!("context {key}: missing outcome {outcome}")))?;
                let value: Rational = text
                    .parse()
                    .map_err(|e| Error::Format(format!("context {key}, outcome {outcome}: {e}")))?;
                table.push(value);
            }
            tables.push(table);
        }
        Ok(ProbabilityBox::new(s, tables)?)
    }
}

pub fn parse_box(text: &str) -> Result<ProbabilityBox, Error> {
    let file: BoxFile = serde_json::from_str(text)?;
    file.to_box()
}

/// Pretty-printed JSON with a trailing newline.
pub fn serialize_box(pbox: &ProbabilityBox) -> String {
    let mut text = serde_json::to_string_pretty(&BoxFile::from_box(pbox)).expect("string maps serialize");
    text.push('\n');
    text
}

pub fn read_box(path: &std::path::Path) -> Result<ProbabilityBox, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_box(&text)
}
