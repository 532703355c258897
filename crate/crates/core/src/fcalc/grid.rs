use crate::measure::{Side, Staircase};

use super::SupportSemantics;

/// Pairwise (tree) summation; the reduction order depends only on the length.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Sample points of one axis, grouped into cells.
///
/// Cell `i` owns the samples `bounds[i]..=bounds[i + 1]`; neighbouring cells
/// share their boundary sample.
#[derive(Debug, Clone)]
pub(crate) struct AxisGrid {
    pub xs: Vec<f64>,
    pub ss: Vec<f64>,
    pub active: Vec<bool>,
    pub bounds: Vec<usize>,
    pub ds: Vec<f64>,
    pub mesh: f64,
}

struct Builder<'a> {
    stair: &'a Staircase,
    semantics: SupportSemantics,
    xs: Vec<f64>,
    ss: Vec<f64>,
    active: Vec<bool>,
    bounds: Vec<usize>,
}

impl<'a> Builder<'a> {
    fn new(stair: &'a Staircase, semantics: SupportSemantics, capacity: usize) -> Self {
        Builder {
            stair,
            semantics,
            xs: Vec::with_capacity(capacity),
            ss: Vec::with_capacity(capacity),
            active: Vec::with_capacity(capacity),
            bounds: Vec::new(),
        }
    }

    /// Cell boundary that may lie off the support (the integration limits).
    fn limit(&mut self, x: f64) {
        let on = self.semantics == SupportSemantics::Everywhere || self.stair.on_support(x);
        self.bounds.push(self.xs.len());
        self.xs.push(x);
        self.ss.push(self.stair.eval(x));
        self.active.push(on);
    }

    fn push(&mut self, x: f64, s: f64) {
        if self.xs.last().is_some_and(|&last| x <= last) {
            return;
        }
        self.xs.push(x);
        self.ss.push(s);
        self.active.push(true);
    }

    fn push_point(&mut self, x: f64) {
        self.push(x, self.stair.eval(x));
    }

    /// Interior boundary at mass `t`: the left preimage closes the cell, the
    /// right preimage (if a gap separates them) opens the next one.
    fn boundary(&mut self, t: f64) {
        let (left, right) = self.stair.preimages(t);
        let s = self.stair.value_at_mass(t);
        self.bounds.push(self.xs.len());
        self.xs.push(left);
        self.ss.push(s);
        self.active.push(true);
        if right > left {
            self.push(right, s);
        }
    }

    fn interior(&mut self, t: f64) {
        let (left, right) = self.stair.preimages(t);
        let s = self.stair.value_at_mass(t);
        self.push(left, s);
        self.push(right, s);
    }

    fn finish(self) -> AxisGrid {
        let ss = self.ss;
        let ds = self
            .bounds
            .windows(2)
            .map(|w| ss[w[1]] - ss[w[0]])
            .collect();
        let mesh = self
            .bounds
            .windows(2)
            .map(|w| self.xs[w[1]] - self.xs[w[0]])
            .fold(0.0, f64::max);
        AxisGrid {
            xs: self.xs,
            ss,
            active: self.active,
            bounds: self.bounds,
            ds,
            mesh,
        }
    }
}

impl AxisGrid {
    /// `cells` cells of equal staircase mass on [a, b], each sampled at
    /// `samples` equally spaced interior mass levels.
    ///
    /// Mass levels are computed as `ta + (g / denom) * span` for a global
    /// index `g`, so refining by doubling `cells` reproduces every earlier
    /// sample bit for bit.
    pub fn aligned(
        stair: &Staircase,
        a: f64,
        b: f64,
        cells: usize,
        samples: usize,
        semantics: SupportSemantics,
    ) -> Self {
        let ta = stair.mass_below(a);
        let span = stair.mass_below(b) - ta;
        let per = samples + 1;
        let denom = (cells * per) as f64;
        let mut bld = Builder::new(stair, semantics, cells * (per + 1) + 1);
        bld.limit(a);
        for g in 1..cells * per {
            let t = ta + (g as f64 / denom) * span;
            if g % per == 0 {
                bld.boundary(t);
            } else {
                bld.interior(t);
            }
        }
        // b is a boundary even if a quantile coincides with it.
        while bld.xs.last().is_some_and(|&last| last >= b) && bld.xs.len() > 1 {
            if bld.bounds.last() == Some(&(bld.xs.len() - 1)) {
                bld.bounds.pop();
            }
            bld.xs.pop();
            bld.ss.pop();
            bld.active.pop();
        }
        bld.limit(b);
        bld.finish()
    }

    /// Samples for an arbitrary partition of points.
    pub fn from_partition(
        stair: &Staircase,
        points: &[f64],
        samples: usize,
        semantics: SupportSemantics,
    ) -> Self {
        let per = samples + 1;
        let mut bld = Builder::new(stair, semantics, points.len() * (per + 1));
        for (i, w) in points.windows(2).enumerate() {
            if i == 0 {
                bld.limit(w[0]);
            }
            let t0 = stair.mass_below(w[0]);
            let t1 = stair.mass_below(w[1]);
            // The right preimage of the left end can sit inside this cell.
            let r = stair.mass_quantile(t0, Side::Right);
            if r > w[0] && r < w[1] {
                bld.push_point(r);
            }
            for k in 1..per {
                let t = t0 + (k as f64 / per as f64) * (t1 - t0);
                let left = stair.mass_quantile(t, Side::Left);
                let right = stair.mass_quantile(t, Side::Right);
                for x in [left, right] {
                    if x > w[0] && x < w[1] {
                        bld.push_point(x);
                    }
                }
            }
            let l = stair.mass_quantile(t1, Side::Left);
            if l > w[0] && l < w[1] {
                bld.push_point(l);
            }
            bld.limit(w[1]);
        }
        bld.finish()
    }

    pub fn cells(&self) -> usize {
        self.ds.len()
    }

    /// Lower and upper sums for per-sample values `lo_vals` / `hi_vals`
    /// (equal slices for a plain integrand). Cells without an active sample
    /// contribute 0.
    pub fn sums(&self, lo_vals: &[f64], hi_vals: &[f64], scratch: &mut Scratch) -> (f64, f64) {
        scratch.lo.clear();
        scratch.hi.clear();
        for (i, w) in self.bounds.windows(2).enumerate() {
            let mut m = f64::INFINITY;
            let mut big_m = f64::NEG_INFINITY;
            for k in w[0]..=w[1] {
                if self.active[k] {
                    m = m.min(lo_vals[k]);
                    big_m = big_m.max(hi_vals[k]);
                }
            }
            if m > big_m {
                m = 0.0;
                big_m = 0.0;
            }
            scratch.lo.push(m * self.ds[i]);
            scratch.hi.push(big_m * self.ds[i]);
        }
        (pairwise_sum(&scratch.lo), pairwise_sum(&scratch.hi))
    }
}

#[derive(Debug, Default)]
pub(crate) struct Scratch {
    lo: Vec<f64>,
    hi: Vec<f64>,
}
