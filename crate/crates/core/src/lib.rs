// Copyright 2026 The gedoublet Authors
// SPDX-License-Identifier: Apache-2.0

//! Strong-field photoionization of an atom followed by resonant Rabi dressing
//! of the residual ion.
//!
//! The crate computes channel-resolved photoelectron spectra (the doublet
//! formed by the two dressed ionic states), ionic populations and the
//! photoelectron-ion entanglement entropy for even and odd pulse envelopes.
//! Everything internal is in atomic units; [`units`] converts at the edges.
//!
//! Pipeline for one simulation:
//!
//! 1. [`envelope`] describes the pulse shape and its time symmetry.
//! 2. [`twolevel`] integrates the ionic two-level amplitudes on a symmetric
//!    time grid and reflects them into propagators from `t` to `+inf`.
//! 3. [`channel`] folds those with the ionization amplitude and the atomic
//!    depletion into the final amplitudes `alpha(eps)`, `beta(eps)`.
//! 4. [`entanglement`] reduces the post-measurement state to the ion and
//!    evaluates its von Neumann entropy.
//!
//! [`analytic`] holds closed-form and stationary-phase oracles, [`sweep`] runs
//! parameter scans in parallel, and [`cli`] is the command-line front end.

// Validation writes `!(x >= 0.0)` on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod channel;
pub mod cli;
pub mod config;
pub mod entanglement;
pub mod envelope;
pub mod error;
pub mod grid;
pub mod output;
pub mod quadrature;
pub mod svg;
pub mod sweep;
pub mod twolevel;
pub mod units;
pub mod validate;

pub use channel::{ChannelAmplitudes, SimulationParams};
pub use envelope::{EnvelopeKind, EnvelopeSpec, Parity, SymmetryClass};
pub use error::{Error, Result};
pub use grid::{EnergyGrid, TimeGrid};

/// Complex amplitude type used throughout.
pub type C64 = num_complex::Complex64;
