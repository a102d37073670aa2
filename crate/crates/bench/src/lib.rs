// SPDX-License-Identifier: Apache-2.0

//! Benchmark fixtures shared by the criterion targets in `benches/`.

use circsq_core::{squeezed_state, CircleState, PhasePoint, Truncation};

/// Squeezings spanning the scan range used by the figure experiments.
pub const SQUEEZINGS: [f64; 4] = [0.1, 0.5, 1.0, 4.0];

pub fn squeezed_fixture(l: f64, s: f64) -> CircleState {
    let p = PhasePoint::new(l, 0.3).expect("finite phase point");
    squeezed_state(p, s, Truncation::Auto).expect("fixture state")
}
