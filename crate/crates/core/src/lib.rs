//! Two periodically quenched, coupled harmonic oscillators.
//!
//! The frequencies and the coupling switch sign every half period
//! (`Θ(t) = ±1`). The crate classifies the classical stability of the
//! normal modes, builds the Ermakov dilatations that carry the exact
//! vacuum, and evaluates its excitations and entanglement.
//!
//! ```
//! use meissner_lab::{hill, OscillatorParams};
//!
//! let p = OscillatorParams::new(1.01, 0.1, 0.0).unwrap();
//! let s = hill::stability(&p).unwrap();
//! assert!(!s.is_stable());
//! ```

// `!(x > 0.0)` is used on purpose: it rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod ermakov;
pub mod error;
pub mod hill;
pub mod model;
pub mod observables;

pub use error::{Error, Result};
pub use model::{Mode, OscillatorParams};
pub use observables::{LogBase, ObservableRecord, VacuumEvolution};
