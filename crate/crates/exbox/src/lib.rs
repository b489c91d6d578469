//! File formats, structured reports and the command-line front end for
//! `exbox-core`.

pub mod cli;
pub mod encode;
pub mod format;
pub mod report;

pub use exbox_core as core;
pub use format::{parse_box, read_box, serialize_box, BoxFile};
pub use report::{Report, Verdict};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] exbox_core::Error),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Format(String),
    #[error("{0}")]
    Io(String),
}
