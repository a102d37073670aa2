// SPDX-License-Identifier: Apache-2.0

//! Coherent and squeezed states of a quantum particle on a circle.
//!
//! States live in the integer angular-momentum basis ([`state`]). The
//! [`expect`] module evaluates exponential moments of `Ĵ`, powers of the
//! ladder operator `U = e^{iφ̂}`, and cumulants, both by direct summation and
//! through Jacobi theta closed forms ([`special`]). [`uncertainty`] builds the
//! logarithmic uncertainty measures on top of those, and [`experiments`]
//! drives the parameter scans and verification tables exposed by the CLI.

pub mod error;
pub mod expect;
pub mod experiments;
pub mod format;
pub mod optimize;
pub mod special;
pub mod state;
pub mod uncertainty;

pub use error::{Error, Result};
pub use state::{
    circular_squeezed_state, coherent_state, momentum_eigenstate, squeezed_state, Basis,
    CircleState, PhasePoint, Shifted, SqueezeParams, Truncation,
};
