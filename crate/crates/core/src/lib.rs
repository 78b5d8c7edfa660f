//! Discrete-time simulation of relay hysterons and their feedforward
//! composition into *proteretic* devices.
//!
//! A proteretic device reverses the orientation of the familiar hysteresis
//! loop: it switches on at the lower threshold of its band and off at the
//! upper one, so its transitions precede those of a memoryless mid-band
//! comparator by `(b - a) / (2|R|)` for an input moving at rate `R`.
//!
//! The crate is organised bottom-up:
//!
//! - [`hysteron`]: the bi-stable relay operator, in both polarities.
//! - [`network`]: the two-relay feedforward cell, a closed-form reference
//!   machine for it, the M-level stacks and a small acyclic block evaluator.
//! - [`signals`]: seeded input generators and noise injection.
//! - [`analysis`]: transitions, lead times, cross-correlation delay and
//!   loop orientation.
//! - [`harness`]: configuration parsing, the reproducible experiments and
//!   CSV/SVG emission used by the `proteresis` binary.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod harness;
pub mod hysteron;
pub mod network;
pub mod signals;

pub use error::{Error, Result};
pub use hysteron::{Polarity, RelaySpec, RelayUnit};
pub use network::{
    BlockNetwork, CellState, HystereticStack, MultinaryStack, ProtereticCell, Quantizer,
};
pub use signals::Signal;
