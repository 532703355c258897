use std::collections::HashMap;

use crate::cantor::TartanSpec;
use crate::error::{Error, Result};
use crate::measure::{Partition, Staircase, Staircase2D, Subdivision};

use super::grid::{pairwise_sum, AxisGrid, Scratch};
use super::{BracketedValue, Coords, Integrand, Integrand1d, QuadratureOptions, SupportSemantics};

/// Lower and upper Darboux sums over one subdivision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DarbouxSums {
    pub lower: f64,
    pub upper: f64,
}

/// L and U sums of `f` against the staircase increments of `partition`.
pub fn darboux_sums(
    f: &Integrand1d,
    stair: &Staircase,
    partition: &Partition,
    samples_per_cell: usize,
) -> Result<DarbouxSums> {
    if samples_per_cell < 2 {
        return Err(Error::Argument(
            "samples_per_cell must be at least 2".into(),
        ));
    }
    let grid = AxisGrid::from_partition(stair, partition.points(), samples_per_cell, f.semantics());
    let vals: Vec<f64> = grid
        .xs
        .iter()
        .zip(&grid.ss)
        .map(|(&x, &s)| f.eval(x, s))
        .collect();
    let (lower, upper) = grid.sums(&vals, &vals, &mut Scratch::default());
    Ok(DarbouxSums { lower, upper })
}

/// Genuine two-dimensional sums over a product subdivision, with cell weights
/// ΔS_x·ΔS_y. Quadratic in the cell count; meant for coarse meshes.
pub fn darboux_sums_2d(
    f: &Integrand,
    s2: &Staircase2D,
    sub: &Subdivision,
    samples_per_cell: usize,
) -> Result<DarbouxSums> {
    if samples_per_cell < 2 {
        return Err(Error::Argument(
            "samples_per_cell must be at least 2".into(),
        ));
    }
    let gx = AxisGrid::from_partition(&s2.sx, sub.x.points(), samples_per_cell, f.semantics());
    let gy = AxisGrid::from_partition(&s2.sy, sub.y.points(), samples_per_cell, f.semantics());
    let ny = gy.xs.len();
    let mut vals = vec![0.0; gx.xs.len() * ny];
    for (i, (&x, &sx)) in gx.xs.iter().zip(&gx.ss).enumerate() {
        for (j, (&y, &sy)) in gy.xs.iter().zip(&gy.ss).enumerate() {
            vals[i * ny + j] = f.eval(&Coords { x, y, sx, sy });
        }
    }
    let mut lo = Vec::with_capacity(gx.cells() * gy.cells());
    let mut hi = Vec::with_capacity(gx.cells() * gy.cells());
    for (ci, wx) in gx.bounds.windows(2).enumerate() {
        for (cj, wy) in gy.bounds.windows(2).enumerate() {
            let mut m = f64::INFINITY;
            let mut big_m = f64::NEG_INFINITY;
            for i in wx[0]..=wx[1] {
                for j in wy[0]..=wy[1] {
                    if gx.active[i] && gy.active[j] {
                        let v = vals[i * ny + j];
                        m = m.min(v);
                        big_m = big_m.max(v);
                    }
                }
            }
            if m > big_m {
                m = 0.0;
                big_m = 0.0;
            }
            let w = gx.ds[ci] * gy.ds[cj];
            lo.push(m * w);
            hi.push(big_m * w);
        }
    }
    Ok(DarbouxSums {
        lower: pairwise_sum(&lo),
        upper: pairwise_sum(&hi),
    })
}

/// Running sup of lower sums and inf of upper sums.
#[derive(Debug, Clone, Copy)]
struct Envelope {
    lower: f64,
    upper: f64,
}

impl Envelope {
    fn new() -> Self {
        Envelope {
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
        }
    }

    fn absorb(&mut self, lower: f64, upper: f64) {
        self.lower = self.lower.max(lower);
        self.upper = self.upper.min(upper);
    }

    fn bracket(&self, mesh: f64) -> BracketedValue {
        BracketedValue::new(self.lower, self.upper, mesh)
    }
}

pub(crate) fn integrate_axis(
    f: &dyn Fn(f64, f64) -> f64,
    semantics: SupportSemantics,
    stair: &Staircase,
    a: f64,
    b: f64,
    opts: &QuadratureOptions,
) -> Result<BracketedValue> {
    if !(a <= b) {
        return Err(Error::Argument(format!(
            "integration limits [{a}, {b}] are reversed"
        )));
    }
    opts.validate()?;
    if stair.mass_below(a) == stair.mass_below(b) {
        return Ok(BracketedValue::exact(0.0));
    }
    let mut env = Envelope::new();
    let mut scratch = Scratch::default();
    let mut best = None;
    for level in opts.min_level..=opts.max_level {
        let grid = AxisGrid::aligned(stair, a, b, 1 << level, opts.samples_per_cell, semantics);
        let vals: Vec<f64> = grid
            .xs
            .iter()
            .zip(&grid.ss)
            .map(|(&x, &s)| f(x, s))
            .collect();
        let (l, u) = grid.sums(&vals, &vals, &mut scratch);
        env.absorb(l, u);
        let br = env.bracket(grid.mesh);
        if br.width() < opts.tol {
            return Ok(br);
        }
        best = Some(br);
    }
    Err(Error::NotConverged {
        best: best.expect("at least one level"),
        tol: opts.tol,
    })
}

/// F^α-integral of `f` over [a, b], refined by doubling the number of
/// equal-mass cells until the bracket is narrower than `opts.tol`.
pub fn integrate1d(
    f: &Integrand1d,
    stair: &Staircase,
    a: f64,
    b: f64,
    opts: &QuadratureOptions,
) -> Result<BracketedValue> {
    integrate_axis(&|x, s| f.eval(x, s), f.semantics(), stair, a, b, opts)
}

/// Inner-axis grids, built on first use and shared by every outer node.
struct InnerGrids<'a> {
    stair: &'a Staircase,
    c: f64,
    d: f64,
    samples: usize,
    semantics: SupportSemantics,
    grids: Vec<Option<AxisGrid>>,
}

impl<'a> InnerGrids<'a> {
    fn get(&mut self, level: u32) -> &AxisGrid {
        let i = level as usize;
        if self.grids.len() <= i {
            self.grids.resize_with(i + 1, || None);
        }
        let (stair, c, d, samples, semantics) =
            (self.stair, self.c, self.d, self.samples, self.semantics);
        self.grids[i]
            .get_or_insert_with(|| AxisGrid::aligned(stair, c, d, 1 << level, samples, semantics))
    }
}

#[derive(Debug, Clone, Copy)]
struct InnerResult {
    lower: f64,
    upper: f64,
    converged: bool,
}

/// Iterated F^ζ-integral over the tartan's region: an inner y-integral at
/// every outer x-sample, then an outer x-integral of the inner brackets.
///
/// Each level gets half the tolerance. The outer lower (upper) sum uses the
/// inner lower (upper) bounds, so the returned bracket covers both levels.
pub fn integrate2d(
    f: &Integrand,
    tartan: &TartanSpec,
    s2: &Staircase2D,
    opts: &QuadratureOptions,
) -> Result<BracketedValue> {
    opts.validate()?;
    if s2.sx.spec() != &tartan.x_spec || s2.sy.spec() != &tartan.y_spec {
        return Err(Error::Argument(
            "staircases were not built on the tartan's Cantor sets".into(),
        ));
    }
    let (a, b) = (tartan.region.x.lo, tartan.region.x.hi);
    let (c, d) = (tartan.region.y.lo, tartan.region.y.hi);
    let inner_tol = 0.5 * opts.tol;
    let semantics = f.semantics();

    if s2.sy.mass_below(c) == s2.sy.mass_below(d) || s2.sx.mass_below(a) == s2.sx.mass_below(b) {
        return Ok(BracketedValue::exact(0.0));
    }

    let mut inner = InnerGrids {
        stair: &s2.sy,
        c,
        d,
        samples: opts.samples_per_cell,
        semantics,
        grids: Vec::new(),
    };
    let mut cache: HashMap<u64, InnerResult> = HashMap::new();
    let mut hint = opts.min_level;
    let mut vals: Vec<f64> = Vec::new();
    let mut scratch = Scratch::default();
    let mut outer_scratch = Scratch::default();
    let mut env = Envelope::new();
    let mut best = None;

    for level in opts.min_level..=opts.max_level {
        let og = AxisGrid::aligned(&s2.sx, a, b, 1 << level, opts.samples_per_cell, semantics);
        let mut lows = Vec::with_capacity(og.xs.len());
        let mut highs = Vec::with_capacity(og.xs.len());
        let mut all_converged = true;

        for (&x, &sx) in og.xs.iter().zip(&og.ss) {
            let res = match cache.get(&x.to_bits()) {
                Some(r) => *r,
                None => {
                    let mut ienv = Envelope::new();
                    let mut converged = false;
                    let start = hint;
                    for ilevel in start..=opts.max_level {
                        let grid = inner.get(ilevel);
                        vals.clear();
                        vals.extend(
                            grid.xs
                                .iter()
                                .zip(&grid.ss)
                                .map(|(&y, &sy)| f.eval(&Coords { x, y, sx, sy })),
                        );
                        let (l, u) = grid.sums(&vals, &vals, &mut scratch);
                        ienv.absorb(l, u);
                        if ienv.upper - ienv.lower < inner_tol {
                            hint = ilevel;
                            converged = true;
                            break;
                        }
                    }
                    let br = ienv.bracket(0.0);
                    let r = InnerResult {
                        lower: br.lower,
                        upper: br.upper,
                        converged,
                    };
                    cache.insert(x.to_bits(), r);
                    r
                }
            };
            all_converged &= res.converged;
            lows.push(res.lower);
            highs.push(res.upper);
        }

        let (l, u) = og.sums(&lows, &highs, &mut outer_scratch);
        env.absorb(l, u);
        let br = env.bracket(og.mesh * inner.get(hint).mesh);
        if !all_converged {
            return Err(Error::NotConverged {
                best: br,
                tol: opts.tol,
            });
        }
        if br.width() < opts.tol {
            return Ok(br);
        }
        best = Some(br);
    }
    Err(Error::NotConverged {
        best: best.expect("at least one level"),
        tol: opts.tol,
    })
}
