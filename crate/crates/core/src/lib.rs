//! Exact-rational analysis of black-box measurement scenarios.
//!
//! Boxes assign an exact distribution to every declared context. On top
//! of that model the crate decides no-disturbance, the exclusivity
//! principle (single copy and two-copy product boxes), and joint
//! extension of context marginals, always returning a certificate that
//! can be checked by plain arithmetic. The `gm` module chains these into
//! a proof that the GM(c) family admits no physical realization.
//!
//! The crate is `no_std` and needs only `alloc`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bell;
pub mod error;
pub mod exclusivity;
pub mod gm;
pub mod linalg;
pub mod lp;
pub mod marginal;
pub mod pbox;
pub mod polytope;
pub mod rational;
pub mod scenario;

pub use error::Error;
pub use pbox::ProbabilityBox;
pub use rational::{q, Rational};
pub use scenario::{Context, Event, Input, InputId, PartySpec, Scenario};
