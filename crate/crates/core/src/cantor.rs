//! Finite-iteration generalized Cantor sets and the Cantor-Tartan built from them.
//!
//! A [`CantorSpec`] keeps `m` end-anchored, evenly gapped copies of its base
//! interval scaled by `r` at every level. Depth `n` is always explicit; nothing
//! in this module deepens on its own.

use crate::error::{Error, Result};

/// Refuse to materialize more intervals than this.
pub const MAX_INTERVALS: usize = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn unit() -> Self {
        Interval { lo: 0.0, hi: 1.0 }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Generative description of a self-similar Cantor set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CantorSpec {
    keep: u32,
    ratio: f64,
    depth: u32,
    base: Interval,
}

impl CantorSpec {
    pub fn new(keep: u32, ratio: f64, depth: u32, base: Interval) -> Result<Self> {
        if keep == 0 {
            return Err(Error::InvalidSpec("keep count must be at least 1".into()));
        }
        if !(ratio > 0.0 && ratio <= 1.0) {
            return Err(Error::InvalidSpec(format!("ratio {ratio} outside (0, 1]")));
        }
        // Small slack so that m * (1/m) computed in floating point still passes.
        if keep as f64 * ratio > 1.0 + 1e-12 {
            return Err(Error::InvalidSpec(format!(
                "{keep} children of ratio {ratio} do not fit in the parent"
            )));
        }
        if !(base.lo.is_finite() && base.hi.is_finite() && base.lo < base.hi) {
            return Err(Error::InvalidSpec(format!(
                "base interval [{}, {}] is empty or not finite",
                base.lo, base.hi
            )));
        }
        Ok(CantorSpec {
            keep,
            ratio,
            depth,
            base,
        })
    }

    /// Middle-thirds set on [0, 1].
    pub fn triadic(depth: u32) -> Self {
        CantorSpec::new(2, 1.0 / 3.0, depth, Interval::unit()).expect("triadic spec is valid")
    }

    /// Two end-anchored children with ratio 2^(-1/alpha), so the similarity
    /// dimension is `alpha`. `alpha = 1` gives the whole unit interval.
    pub fn with_dimension(alpha: f64, depth: u32) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidSpec(format!(
                "dimension {alpha} outside (0, 1]"
            )));
        }
        CantorSpec::new(2, 2f64.powf(-1.0 / alpha), depth, Interval::unit())
    }

    /// The whole unit interval viewed as a one-child set (m = 1, r = 1).
    pub fn full(depth: u32) -> Self {
        CantorSpec::new(1, 1.0, depth, Interval::unit()).expect("full spec is valid")
    }

    pub fn keep(&self) -> u32 {
        self.keep
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn base(&self) -> Interval {
        self.base
    }

    pub fn at_depth(&self, depth: u32) -> Self {
        CantorSpec { depth, ..*self }
    }

    /// True when the children tile the parent with no gaps.
    pub fn is_gapless(&self) -> bool {
        (self.keep as f64 * self.ratio - 1.0).abs() <= 1e-12
    }

    /// ln m / ln(1/r); 1 for gapless specs.
    pub fn similarity_dimension(&self) -> f64 {
        if self.is_gapless() {
            1.0
        } else if self.keep == 1 {
            0.0
        } else {
            (self.keep as f64).ln() / (1.0 / self.ratio).ln()
        }
    }

    /// Offset between consecutive children's left ends, as a fraction of the parent.
    fn stride(&self) -> f64 {
        if self.keep == 1 {
            1.0
        } else if self.is_gapless() {
            self.ratio
        } else {
            (1.0 - self.ratio) / (self.keep - 1) as f64
        }
    }

    fn child_lo(&self, parent: Interval, k: u32) -> f64 {
        let len = parent.len();
        if k == 0 {
            parent.lo
        } else if k == self.keep - 1 {
            parent.hi - self.ratio * len
        } else {
            parent.lo + k as f64 * self.stride() * len
        }
    }

    /// Bounds of child `k` of `parent`. The first child shares the parent's
    /// left end and the last child its right end exactly.
    pub(crate) fn child(&self, parent: Interval, k: u32) -> Interval {
        debug_assert!(k < self.keep);
        if self.keep == 1 {
            let hi = if self.ratio == 1.0 {
                parent.hi
            } else {
                parent.lo + self.ratio * parent.len()
            };
            return Interval::new(parent.lo, hi);
        }
        let lo = self.child_lo(parent, k);
        let hi = if k == self.keep - 1 {
            parent.hi
        } else if self.is_gapless() {
            self.child_lo(parent, k + 1)
        } else {
            lo + self.ratio * parent.len()
        };
        Interval::new(lo, hi)
    }

    /// Where `x` sits among the children of `parent`.
    pub(crate) fn locate(&self, parent: Interval, x: f64) -> Slot {
        let len = parent.len();
        let rel = (x - parent.lo) / len;
        let guess = if self.keep == 1 {
            0
        } else {
            ((rel / self.stride()).floor().max(0.0) as u64).min(self.keep as u64 - 1) as u32
        };
        // The guess can be off by one near child boundaries; check neighbours.
        let lo_k = guess.saturating_sub(1);
        let hi_k = (guess + 1).min(self.keep - 1);
        for k in lo_k..=hi_k {
            let c = self.child(parent, k);
            if c.contains(x) {
                return Slot::Child(k, c);
            }
        }
        let mut gap_after = 0;
        for k in 0..self.keep {
            if self.child(parent, k).hi < x {
                gap_after = k + 1;
            }
        }
        Slot::Gap(gap_after)
    }

    /// Membership in the depth-n set by descending the construction.
    pub fn contains(&self, x: f64) -> bool {
        if !self.base.contains(x) {
            return false;
        }
        let mut cur = self.base;
        for _ in 0..self.depth {
            match self.locate(cur, x) {
                Slot::Child(_, c) => cur = c,
                Slot::Gap(_) => return false,
            }
        }
        true
    }

    /// Number of intervals at depth n, if it fits in memory limits.
    pub fn interval_count(&self) -> Option<usize> {
        (self.keep as usize)
            .checked_pow(self.depth)
            .filter(|&n| n <= MAX_INTERVALS)
    }

    /// The depth-n image of the base interval under the construction.
    pub fn build_intervals(&self) -> Result<IntervalSet> {
        let count = self.interval_count().ok_or_else(|| {
            Error::Argument(format!(
                "{}^{} intervals exceed the limit of {MAX_INTERVALS}",
                self.keep, self.depth
            ))
        })?;
        let mut cur = vec![self.base];
        for _ in 0..self.depth {
            let mut next = Vec::with_capacity(cur.len() * self.keep as usize);
            for parent in &cur {
                next.extend((0..self.keep).map(|k| self.child(*parent, k)));
            }
            cur = next;
        }
        debug_assert_eq!(cur.len(), count);
        Ok(IntervalSet { intervals: cur })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Slot {
    Child(u32, Interval),
    /// In the gap preceded by this many children.
    Gap(u32),
}

/// Sorted closed intervals approximating a Cantor set at finite depth.
///
/// Consecutive intervals never overlap; they only touch when built from a
/// gapless spec.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

/// Nearest support endpoints on either side of a point. `None` marks a
/// one-sided result at a global extreme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbors {
    pub pred: Option<f64>,
    pub succ: Option<f64>,
}

impl Neighbors {
    pub fn is_one_sided(&self) -> bool {
        self.pred.is_none() || self.succ.is_none()
    }
}

impl IntervalSet {
    pub fn new(intervals: Vec<Interval>) -> Result<Self> {
        for iv in &intervals {
            if !(iv.lo <= iv.hi) {
                return Err(Error::Argument(format!(
                    "interval [{}, {}] is reversed",
                    iv.lo, iv.hi
                )));
            }
        }
        if intervals.windows(2).any(|w| w[0].hi > w[1].lo) {
            return Err(Error::Argument(
                "intervals must be sorted and disjoint".into(),
            ));
        }
        Ok(IntervalSet { intervals })
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        self.intervals.iter().map(Interval::len).sum()
    }

    /// Open gaps between consecutive intervals, as `(left end, right end)`.
    pub fn gaps(&self) -> impl Iterator<Item = Interval> + '_ {
        self.intervals
            .windows(2)
            .filter(|w| w[0].hi < w[1].lo)
            .map(|w| Interval::new(w[0].hi, w[1].lo))
    }

    /// Index of the first interval whose right end is at or beyond `x`.
    fn first_reaching(&self, x: f64) -> usize {
        self.intervals.partition_point(|iv| iv.hi < x)
    }

    pub fn contains(&self, x: f64) -> bool {
        let i = self.first_reaching(x);
        i < self.intervals.len() && self.intervals[i].lo <= x
    }

    /// Θ: whether the closed interval [p, q] meets the set.
    pub fn flag(&self, p: f64, q: f64) -> Result<bool> {
        if !(p <= q) {
            return Err(Error::Argument(format!(
                "flag interval [{p}, {q}] is reversed"
            )));
        }
        let i = self.first_reaching(p);
        Ok(i < self.intervals.len() && self.intervals[i].lo <= q)
    }

    /// Nearest interval endpoints strictly below and above a support point.
    pub fn neighbors_on_support(&self, x: f64) -> Result<Neighbors> {
        if !self.contains(x) {
            return Err(Error::NotOnSupport(x));
        }
        let i = self.first_reaching(x);
        let iv = self.intervals[i];

        let pred = if iv.lo < x {
            Some(iv.lo)
        } else {
            // x is a left end; walk back past touching or degenerate intervals.
            self.intervals[..i]
                .iter()
                .rev()
                .flat_map(|p| [p.hi, p.lo])
                .find(|&e| e < x)
        };
        let succ = if x < iv.hi {
            Some(iv.hi)
        } else {
            self.intervals[i + 1..]
                .iter()
                .flat_map(|s| [s.lo, s.hi])
                .find(|&e| e > x)
        };
        Ok(Neighbors { pred, succ })
    }
}

/// Axis-aligned rectangle [a, b] × [c, d].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x: Interval,
    pub y: Interval,
}

impl Rect {
    pub fn unit() -> Self {
        Rect {
            x: Interval::unit(),
            y: Interval::unit(),
        }
    }
}

/// Cantor-Tartan: (C_x × [c, d]) ∪ ([a, b] × C_y) inside `region`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TartanSpec {
    pub x_spec: CantorSpec,
    pub y_spec: CantorSpec,
    pub region: Rect,
}

impl TartanSpec {
    pub fn new(x_spec: CantorSpec, y_spec: CantorSpec, region: Rect) -> Result<Self> {
        if !(region.x.lo < region.x.hi && region.y.lo < region.y.hi) {
            return Err(Error::Argument(
                "tartan region must have positive extent".into(),
            ));
        }
        Ok(TartanSpec {
            x_spec,
            y_spec,
            region,
        })
    }

    /// Tartan on the unit square with per-axis dimensions `alpha` and `beta`.
    pub fn with_dimensions(alpha: f64, beta: f64, depth: u32) -> Result<Self> {
        TartanSpec::new(
            CantorSpec::with_dimension(alpha, depth)?,
            CantorSpec::with_dimension(beta, depth)?,
            Rect::unit(),
        )
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        if !(self.region.x.contains(x) && self.region.y.contains(y)) {
            return false;
        }
        self.x_spec.contains(x) || self.y_spec.contains(y)
    }
}
