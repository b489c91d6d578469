use alloc::string::String;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("malformed rational {0:?}; expected \"p/q\" or an integer")]
    MalformedRational(String),
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("duplicate party {0:?}")]
    DuplicateParty(String),
    #[error("duplicate input label {0:?}")]
    DuplicateInput(String),
    #[error("unknown input {0:?}")]
    UnknownInput(String),
    #[error("input {input:?} must have at least one output, got {outputs}")]
    InvalidCardinality { input: String, outputs: u32 },
    #[error("empty context")]
    EmptyContext,
    #[error("input {0:?} repeated within one context")]
    RepeatedInput(String),
    #[error("input {0:?} belongs to no context")]
    UncoveredInput(String),

    #[error("event must assign at least one input")]
    EmptyEvent,
    #[error("event {0} is not contained in any declared context")]
    EventOutsideContexts(String),
    #[error("output {output} out of range for input {input:?} with {cardinality} outputs")]
    OutputOutOfRange { input: String, output: u32, cardinality: u32 },

    #[error("context {context}: expected {expected} entries, found {found}")]
    TableShape { context: String, expected: usize, found: usize },
    #[error("context {context}: negative entry {value} at outcome {outcome}")]
    NegativeEntry { context: String, outcome: String, value: Rational },
    #[error("context {context}: entries sum to {sum}, not 1")]
    NotNormalized { context: String, sum: Rational },
    #[error("box violates no-disturbance")]
    NotNoDisturbance,
    #[error("expected a single-party scenario with three binary inputs and its three pair contexts")]
    NotThreeInputScenario,
    #[error("expected a bipartite scenario")]
    NotBipartite,
    #[error("{0}")]
    FacetViolated(String),

    #[error("copies must be 1 or 2, got {0}")]
    CopiesOutOfRange(usize),
    #[error("two-copy search needs {events} positive product events, limit is {limit}")]
    SearchTooLarge { events: usize, limit: usize },
    #[error("box is not one of the indeterministic vertices")]
    NotIndeterministicVertex,

    #[error("variable set lacks input {0:?} referenced by a context")]
    VariableSetMissing(String),
    #[error("{name} = {value} is out of range: {range}")]
    ParameterOutOfRange { name: &'static str, value: Rational, range: &'static str },
    #[error("setting {0} out of range or repeated")]
    SettingsOutOfRange(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}
