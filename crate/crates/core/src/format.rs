// SPDX-License-Identifier: Apache-2.0

//! Number formatting shared by every CSV writer in the crate.

/// Full double precision (17 significant digits), with infinities spelled
/// `inf` / `-inf` so that they read back through `str::parse::<f64>`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_owned()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_owned()
    } else {
        format!("{x:.16e}")
    }
}
