//! Mass function, staircase functions and ζ-dimension estimation.

use crate::cantor::{CantorSpec, Interval, Slot};
use crate::error::{Error, Result};
use crate::gamma::gamma;

/// Bisection stops once the trial-order bracket is narrower than this.
pub const DIMENSION_BISECTION_WIDTH: f64 = 1e-3;

/// Scale applied to the self-similar probability measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// S(hi) − S(lo) = Γ(1+α).
    #[default]
    Gamma,
    /// S(hi) − S(lo) = 1/Γ(1+α), the literal limit of the mass sums.
    Raw,
}

/// Which preimage to take when a staircase value sits on a plateau.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Integral staircase S_F^α of a Cantor set.
///
/// Evaluates as κ·μ([a₀, x]) (negated to the left of the origin), where μ
/// gives each child mass 1/m and is uniform inside each depth-n interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Staircase {
    spec: CantorSpec,
    alpha: f64,
    normalization: Normalization,
    origin: f64,
    scale: f64,
    origin_mass: f64,
}

impl Staircase {
    pub fn new(spec: CantorSpec, alpha: f64, normalization: Normalization) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Argument(format!(
                "staircase order {alpha} outside (0, 1]"
            )));
        }
        let g = gamma(1.0 + alpha);
        let scale = match normalization {
            Normalization::Gamma => g,
            Normalization::Raw => 1.0 / g,
        };
        let mut s = Staircase {
            spec,
            alpha,
            normalization,
            origin: 0.0,
            scale,
            origin_mass: 0.0,
        };
        s.origin_mass = s.mass_below(0.0);
        Ok(s)
    }

    /// Staircase of order `alpha` on the two-child set of dimension `alpha`.
    pub fn for_dimension(alpha: f64, depth: u32) -> Result<Self> {
        Staircase::new(
            CantorSpec::with_dimension(alpha, depth)?,
            alpha,
            Normalization::Gamma,
        )
    }

    pub fn with_origin(mut self, origin: f64) -> Self {
        self.origin = origin;
        self.origin_mass = self.mass_below(origin);
        self
    }

    pub fn spec(&self) -> &CantorSpec {
        &self.spec
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    /// κ, the staircase rise across the whole base interval.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// μ([lo, x]) for the depth-n measure; 0 below the base, 1 above it.
    pub fn mass_below(&self, x: f64) -> f64 {
        let base = self.spec.base();
        if x <= base.lo {
            return 0.0;
        }
        if x >= base.hi {
            return 1.0;
        }
        let m = self.spec.keep() as f64;
        let mut acc = 0.0;
        let mut weight = 1.0;
        let mut cur = base;
        for _ in 0..self.spec.depth() {
            match self.spec.locate(cur, x) {
                Slot::Child(k, child) => {
                    acc += k as f64 * weight / m;
                    weight /= m;
                    cur = child;
                }
                Slot::Gap(before) => return acc + before as f64 * weight / m,
            }
        }
        acc + weight * ((x - cur.lo) / cur.len()).clamp(0.0, 1.0)
    }

    /// S(x).
    pub fn eval(&self, x: f64) -> f64 {
        self.scale * (self.mass_below(x) - self.origin_mass)
    }

    /// Support point with μ([lo, x]) = `t`. On plateaus `Left` returns the
    /// right end of the interval below the gap and `Right` the left end of the
    /// interval above it.
    pub fn mass_quantile(&self, t: f64, side: Side) -> f64 {
        let t = t.clamp(0.0, 1.0);
        let m = self.spec.keep();
        let mut cur = self.spec.base();
        let mut t = t;
        for _ in 0..self.spec.depth() {
            let u = t * m as f64;
            let mut k = (u.floor() as i64).clamp(0, m as i64 - 1) as u32;
            let mut frac = u - k as f64;
            if side == Side::Left && frac == 0.0 && k > 0 {
                k -= 1;
                frac = 1.0;
            }
            cur = self.spec.child(cur, k);
            t = frac.clamp(0.0, 1.0);
        }
        if t == 1.0 {
            cur.hi
        } else {
            cur.lo + t * cur.len()
        }
    }

    /// `(Left, Right)` quantiles of `t` from a single descent when no digit
    /// lands exactly on a child boundary.
    pub(crate) fn preimages(&self, t: f64) -> (f64, f64) {
        let t0 = t.clamp(0.0, 1.0);
        let m = self.spec.keep();
        let mut cur = self.spec.base();
        let mut t = t0;
        for _ in 0..self.spec.depth() {
            let u = t * m as f64;
            let k = (u.floor() as i64).clamp(0, m as i64 - 1) as u32;
            let frac = u - k as f64;
            if frac == 0.0 && k > 0 {
                return (
                    self.mass_quantile(t0, Side::Left),
                    self.mass_quantile(t0, Side::Right),
                );
            }
            cur = self.spec.child(cur, k);
            t = frac.clamp(0.0, 1.0);
        }
        let x = if t == 1.0 {
            cur.hi
        } else {
            cur.lo + t * cur.len()
        };
        (x, x)
    }

    /// S at any point of mass `t`.
    pub(crate) fn value_at_mass(&self, t: f64) -> f64 {
        self.scale * (t - self.origin_mass)
    }

    /// Support point x with S(x) = `value`.
    pub fn inverse(&self, value: f64, side: Side) -> f64 {
        self.mass_quantile(value / self.scale + self.origin_mass, side)
    }

    /// Membership of `x` in the depth-n support.
    pub fn on_support(&self, x: f64) -> bool {
        self.spec.contains(x)
    }
}

/// Product staircase S(x, y) = S_x(x)·S_y(y).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Staircase2D {
    pub sx: Staircase,
    pub sy: Staircase,
}

impl Staircase2D {
    pub fn new(sx: Staircase, sy: Staircase) -> Self {
        Staircase2D { sx, sy }
    }

    pub fn for_dimensions(alpha: f64, beta: f64, depth: u32) -> Result<Self> {
        Ok(Staircase2D::new(
            Staircase::for_dimension(alpha, depth)?,
            Staircase::for_dimension(beta, depth)?,
        ))
    }

    /// ζ = α + β.
    pub fn zeta(&self) -> f64 {
        self.sx.alpha() + self.sy.alpha()
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.sx.eval(x) * self.sy.eval(y)
    }
}

/// Strictly increasing points of a one-axis subdivision.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    points: Vec<f64>,
}

impl Partition {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Argument(
                "a partition needs at least two points".into(),
            ));
        }
        if points.iter().any(|p| !p.is_finite()) || points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Argument(
                "partition points must be finite and strictly increasing".into(),
            ));
        }
        Ok(Partition { points })
    }

    pub fn uniform(a: f64, b: f64, cells: usize) -> Result<Self> {
        if cells == 0 {
            return Err(Error::Argument(
                "a partition needs at least one cell".into(),
            ));
        }
        let h = (b - a) / cells as f64;
        let mut points: Vec<f64> = (0..cells).map(|i| a + i as f64 * h).collect();
        points.push(b);
        Partition::new(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn cells(&self) -> usize {
        self.points.len() - 1
    }

    pub fn span(&self) -> Interval {
        Interval::new(self.points[0], *self.points.last().unwrap())
    }

    /// Largest cell width.
    pub fn mesh(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }
}

/// Product subdivision of [a, b] × [c, d].
#[derive(Debug, Clone, PartialEq)]
pub struct Subdivision {
    pub x: Partition,
    pub y: Partition,
}

impl Subdivision {
    pub fn new(x: Partition, y: Partition) -> Self {
        Subdivision { x, y }
    }

    /// Mesh norm: the largest cell area.
    pub fn mesh_norm(&self) -> f64 {
        self.x.mesh() * self.y.mesh()
    }
}

/// Level-`depth` mass Σ lenᵢ^order / Γ(order+1) over the kept intervals
/// clipped to [a, b].
///
/// Orders above 1 are accepted so that dimension estimation can probe them.
pub fn mass(spec: &CantorSpec, a: f64, b: f64, order: f64, depth: u32) -> Result<f64> {
    if !(a <= b) {
        return Err(Error::Argument(format!(
            "mass interval [{a}, {b}] is reversed"
        )));
    }
    if !(order > 0.0 && order.is_finite()) {
        return Err(Error::Argument(format!(
            "mass order {order} must be positive"
        )));
    }
    Ok(raw_mass(spec, spec.base(), a, b, order, depth) / gamma(order + 1.0))
}

fn raw_mass(spec: &CantorSpec, iv: Interval, a: f64, b: f64, order: f64, levels: u32) -> f64 {
    let lo = iv.lo.max(a);
    let hi = iv.hi.min(b);
    if hi <= lo {
        return 0.0;
    }
    if levels == 0 {
        return (hi - lo).powf(order);
    }
    if a <= iv.lo && iv.hi <= b {
        // m^L intervals of length len·r^L, summed in log space.
        let per_level = (spec.keep() as f64).ln() + order * spec.ratio().ln();
        return (levels as f64 * per_level + order * iv.len().ln()).exp();
    }
    (0..spec.keep())
        .map(|k| raw_mass(spec, spec.child(iv, k), a, b, order, levels - 1))
        .sum()
}

fn log_mass_slope(spec: &CantorSpec, order: f64, depths: &[u32]) -> Result<f64> {
    let base = spec.base();
    let pts = depths
        .iter()
        .map(|&n| Ok((n as f64, mass(spec, base.lo, base.hi, order, n)?.ln())))
        .collect::<Result<Vec<_>>>()?;
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// ζ-dimension: the trial order where the mass stops diverging with depth and
/// starts vanishing, located by bisection on the sign of the log-mass slope.
pub fn estimate_dimension(spec: &CantorSpec, s_lo: f64, s_hi: f64, depths: &[u32]) -> Result<f64> {
    if !(s_lo > 0.0 && s_lo < s_hi) {
        return Err(Error::Argument(format!(
            "order bracket [{s_lo}, {s_hi}] is invalid"
        )));
    }
    if depths.len() < 2 || depths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Argument(
            "need at least two strictly increasing depths".into(),
        ));
    }
    const FLAT: f64 = 1e-10;
    let (mut lo, mut hi) = (s_lo, s_hi);
    let slope_lo = log_mass_slope(spec, lo, depths)?;
    let slope_hi = log_mass_slope(spec, hi, depths)?;
    if slope_lo.abs() < FLAT && slope_hi.abs() < FLAT {
        return Err(Error::Inconclusive(
            "log-mass slope is flat across the bracket".into(),
        ));
    }
    if slope_lo.abs() < FLAT {
        return Ok(lo);
    }
    if slope_hi.abs() < FLAT {
        return Ok(hi);
    }
    if slope_lo.signum() == slope_hi.signum() {
        return Err(Error::Inconclusive(format!(
            "no sign change of the log-mass slope in [{s_lo}, {s_hi}]"
        )));
    }
    while hi - lo >= DIMENSION_BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        let s = log_mass_slope(spec, mid, depths)?;
        if s.abs() < FLAT {
            return Ok(mid);
        }
        if s > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
