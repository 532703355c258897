use crate::error::{Error, Result};
use crate::measure::Staircase;

use super::integrate::integrate_axis;
use super::{QuadratureOptions, SupportSemantics};

/// ∫ₐᵇ h(S(x)) d_F^α x = H(S(b)) − H(S(a)) for an antiderivative H of h.
pub fn conjugate_integral<H>(antiderivative: H, stair: &Staircase, a: f64, b: f64) -> f64
where
    H: Fn(f64) -> f64,
{
    antiderivative(stair.eval(b)) - antiderivative(stair.eval(a))
}

/// Solves D_F^α y = h(S(x)) with y(a₀) = `y0`, where a₀ is the staircase
/// origin, by accumulating fractal integrals between consecutive grid points.
///
/// Each segment gets `opts.tol / segments` so the accumulated brackets stay
/// within `opts.tol`. Returns `(x, y(x))` for every grid point.
pub fn solve_fode<H>(
    h: H,
    stair: &Staircase,
    y0: f64,
    x_grid: &[f64],
    opts: &QuadratureOptions,
) -> Result<Vec<(f64, f64)>>
where
    H: Fn(f64) -> f64,
{
    let base = stair.spec().base();
    if x_grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::Argument("grid must be sorted".into()));
    }
    if let Some(x) = x_grid.iter().find(|&&x| !base.contains(x)) {
        return Err(Error::Argument(format!(
            "grid point {x} is outside the base interval"
        )));
    }
    let origin = stair.origin();
    let segments = x_grid.len().max(1) as f64;
    let seg_opts = QuadratureOptions {
        tol: opts.tol / segments,
        ..*opts
    };
    let f = |_: f64, s: f64| h(s);
    let piece = |lo: f64, hi: f64| -> Result<f64> {
        integrate_axis(
            &f,
            SupportSemantics::OnSupportOnly,
            stair,
            lo,
            hi,
            &seg_opts,
        )
        .map(|b| b.midpoint)
    };

    let split = x_grid.partition_point(|&x| x < origin);
    let mut out = vec![(0.0, 0.0); x_grid.len()];

    let (mut prev, mut acc) = (origin, y0);
    for (i, &x) in x_grid.iter().enumerate().skip(split) {
        acc += piece(prev, x)?;
        prev = x;
        out[i] = (x, acc);
    }
    let (mut prev, mut acc) = (origin, y0);
    for (i, &x) in x_grid[..split].iter().enumerate().rev() {
        acc -= piece(x, prev)?;
        prev = x;
        out[i] = (x, acc);
    }
    Ok(out)
}
