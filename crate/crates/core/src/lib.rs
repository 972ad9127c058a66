//! Simulation of qubits labeled by clock cycle, relativistic time dilation as
//! cycle relabeling, and the nonlinear single-qubit channel that follows from
//! displacing one half of an entangled pair.
//!
//! Module layout:
//!
//! - [`registers`]: slots, registers, pure states and density operators.
//! - [`dynamics`]: cycle-aligned gates, multi-cycle expansions, measurement.
//! - [`channel`]: closed-form output maps of the displaced circuit.
//! - [`analytics`]: entropy, trace distance, purity, figure curves.
//! - [`scenarios`]: end-to-end experiments by full simulation.
//! - [`circuit`]: the line-oriented circuit language and its interpreter.
//! - [`report`]: JSON encodings of states and reports.

pub mod analytics;
pub mod channel;
pub mod circuit;
pub mod dynamics;
pub mod error;
pub mod registers;
pub mod report;
pub mod scenarios;

pub use error::{Error, Result};
pub use registers::{BasisLevel, DensityOperator, PureState, QuantumState, Register, SlotId, C64};
