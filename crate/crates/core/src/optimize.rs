// SPDX-License-Identifier: Apache-2.0

//! Golden-section search for the minimum of a unimodal function on a bracket.

/// `1/φ` where `φ` is the golden ratio.
const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Location and value of a bracketed minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub fx: f64,
}

/// Shrinks `[a, b]` by the golden ratio until it is narrower than `xtol`,
/// reusing one interior evaluation per step. `f` must be unimodal on the
/// bracket; errors from `f` abort the search.
pub fn golden_section<E>(
    mut f: impl FnMut(f64) -> Result<f64, E>,
    a: f64,
    b: f64,
    xtol: f64,
) -> Result<Minimum, E> {
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > xtol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    let x = 0.5 * (lo + hi);
    let fx = f(x)?;
    // keep the best point seen in the final bracket
    Ok([(x, fx), (x1, f1), (x2, f2)]
        .into_iter()
        .fold(Minimum { x, fx }, |best, (x, fx)| {
            if fx < best.fx {
                Minimum { x, fx }
            } else {
                best
            }
        }))
}
