//! One-dimensional search primitives shared by the solvers.

use crate::error::{Error, Result};

/// Cells whose objective values differ by less than this are ties.
pub(crate) const TIE_TOL: f64 = 1e-12;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Minimum {
    pub x: f64,
    pub value: f64,
}

pub(crate) fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    debug_assert!(lo > 0.0 && hi > lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

pub(crate) fn lin_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Index of the smallest value; the first index wins among ties.
pub(crate) fn argmin_first(values: &[f64]) -> usize {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    values.iter().position(|&v| v <= min + TIE_TOL).unwrap_or(0)
}

/// Golden-section search on `[lo, hi]`, stopping once the bracket is no wider
/// than `tol(x)` at the current best point. The best evaluated point is
/// returned, including `seed` when it is supplied.
pub(crate) fn golden_section<F>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    seed: Option<Minimum>,
    tol: impl Fn(f64) -> f64,
) -> Result<Minimum>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut best = seed.unwrap_or(Minimum {
        x: c,
        value: f64::INFINITY,
    });
    for (x, v) in [(c, fc), (d, fd)] {
        if v < best.value {
            best = Minimum { x, value: v };
        }
    }
    for _ in 0..500 {
        if hi - lo <= tol(best.x) {
            return Ok(best);
        }
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c)?;
            if fc < best.value {
                best = Minimum { x: c, value: fc };
            }
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d)?;
            if fd < best.value {
                best = Minimum { x: d, value: fd };
            }
        }
    }
    if hi - lo <= tol(best.x) * 1e3 {
        Ok(best)
    } else {
        Err(Error::Internal(format!(
            "golden-section search stalled on [{lo}, {hi}]"
        )))
    }
}

/// Root of an increasing function `f` inside `(lo, hi)` given
/// `f(lo) < 0 < f(hi)` (the sign at `lo` is asserted by the caller, which
/// allows `lo` to be a limit point where `f` is not evaluated).
///
/// Newton steps from `fdf` are taken while they stay inside the bracket;
/// otherwise the bracket is bisected.
pub(crate) fn increasing_root<F>(mut fdf: F, mut lo: f64, mut hi: f64, ftol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let mut x = 0.5 * (lo + hi);
    for _ in 0..400 {
        let (fx, dfx) = fdf(x)?;
        if fx.abs() <= ftol {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(f64::MIN_POSITIVE) {
            return Ok(x);
        }
        let newton = x - fx / dfx;
        x = if dfx > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::Internal(format!(
        "root search did not converge on [{lo}, {hi}]"
    )))
}
