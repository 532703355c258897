use crate::cantor::IntervalSet;
use crate::error::{Error, Result};
use crate::measure::Staircase2D;

use super::{Coords, Integrand};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// F^α-partial derivative of `f` along `axis` at `point`.
///
/// Off the axis support the derivative is 0. On it, the difference quotient
/// against the axis staircase is formed toward the nearest support endpoints
/// of `set` on each side; the available one-sided quotients are averaged.
/// Sides where the staircase does not move (across a gap) are skipped.
pub fn partial_derivative(
    f: &Integrand,
    s2: &Staircase2D,
    axis: Axis,
    point: (f64, f64),
    set: &IntervalSet,
) -> Result<f64> {
    let (x, y) = point;
    let stair = match axis {
        Axis::X => &s2.sx,
        Axis::Y => &s2.sy,
    };
    let coord = match axis {
        Axis::X => x,
        Axis::Y => y,
    };
    if !set.contains(coord) {
        return Ok(0.0);
    }
    let here = Coords {
        x,
        y,
        sx: s2.sx.eval(x),
        sy: s2.sy.eval(y),
    };
    let s0 = stair.eval(coord);
    let f0 = f.eval(&here);

    let nb = set.neighbors_on_support(coord)?;
    let mut total = 0.0;
    let mut count = 0;
    for moved in [nb.pred, nb.succ].into_iter().flatten() {
        let s1 = stair.eval(moved);
        let ds = s1 - s0;
        if ds == 0.0 {
            continue;
        }
        let there = match axis {
            Axis::X => Coords {
                x: moved,
                sx: s1,
                ..here
            },
            Axis::Y => Coords {
                y: moved,
                sy: s1,
                ..here
            },
        };
        total += (f.eval(&there) - f0) / ds;
        count += 1;
    }
    if count == 0 {
        return Err(Error::Resolution(coord));
    }
    Ok(total / count as f64)
}
