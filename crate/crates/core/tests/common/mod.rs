//! Property checks shared by the `properties` suite and the acceptance run.
//! Each check returns `Err(description)` on the first counterexample.

#![allow(dead_code, clippy::neg_cmp_op_on_partial_ord)]

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tartan::cantor::{CantorSpec, Interval};
use tartan::cli::{parse_expr, Vars};
use tartan::fcalc::{
    darboux_sums, integrate1d, partial_derivative, Axis, Coords, Integrand, Integrand1d,
    QuadratureOptions, SupportSemantics,
};
use tartan::gamma::gamma;
use tartan::measure::{mass, Normalization, Partition, Side, Staircase, Staircase2D};

pub type Check = Result<(), String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

// ---------------------------------------------------------------- cantor

pub fn total_length_scaling() -> Check {
    for (m, r) in [
        (2u32, 1.0 / 3.0),
        (2, 2f64.powf(-1.0 / 0.6)),
        (3, 0.2),
        (4, 0.2),
    ] {
        let mut prev = f64::INFINITY;
        for n in 0..=10 {
            let spec =
                CantorSpec::new(m, r, n, Interval::new(-1.0, 2.0)).map_err(|e| e.to_string())?;
            let set = spec.build_intervals().map_err(|e| e.to_string())?;
            let len = set.total_length();
            let want = 3.0 * (m as f64 * r).powi(n as i32);
            // Each length is a difference of O(1) coordinates.
            let bound = 8.0 * f64::EPSILON * 3.0 * set.len() as f64;
            ensure!(
                (len - want).abs() <= bound,
                "m={m} r={r} n={n}: {len} vs {want}"
            );
            ensure!(
                len < prev,
                "m={m} r={r}: length did not decrease at depth {n}"
            );
            prev = len;
        }
    }
    Ok(())
}

pub fn nesting() -> Check {
    for spec in [
        CantorSpec::triadic(0),
        CantorSpec::with_dimension(0.6, 0).unwrap(),
        CantorSpec::new(3, 0.25, 0, Interval::unit()).unwrap(),
    ] {
        for n in 0..9 {
            let coarse = spec.at_depth(n).build_intervals().unwrap();
            let fine = spec.at_depth(n + 1).build_intervals().unwrap();
            for iv in fine.intervals() {
                let holder = coarse
                    .intervals()
                    .iter()
                    .any(|c| c.lo <= iv.lo && iv.hi <= c.hi);
                ensure!(holder, "depth {} interval {iv:?} escapes depth {n}", n + 1);
            }
        }
    }
    Ok(())
}

pub fn flag_monotone(seed: u64) -> Check {
    let set = CantorSpec::with_dimension(0.7, 7)
        .unwrap()
        .build_intervals()
        .unwrap();
    let mut rng = rng(seed);
    for _ in 0..2000 {
        let mut pts: [f64; 4] = std::array::from_fn(|_| rng.gen::<f64>());
        pts.sort_by(f64::total_cmp);
        let [p0, p, q, q0] = pts;
        let inner = set.flag(p, q).unwrap();
        let outer = set.flag(p0, q0).unwrap();
        ensure!(
            !inner || outer,
            "flag([{p},{q}]) = 1 but flag([{p0},{q0}]) = 0"
        );
    }
    Ok(())
}

/// Depth-n triadic membership of p/q from its base-3 digits, in exact
/// integer arithmetic.
pub fn triadic_digit_oracle(p: u128, q: u128, depth: u32) -> bool {
    let mut p = p;
    for _ in 0..depth {
        let num = 3 * p;
        let digit = num / q;
        let rem = num % q;
        match digit {
            // x = 1 at this scale, or x = 1/3 exactly (0.0222... in base 3).
            3 => return true,
            1 if rem == 0 => return true,
            1 => return false,
            _ => p = rem,
        }
    }
    true
}

pub fn contains_matches_digit_oracle(seed: u64) -> Check {
    let depth = 9;
    let spec = CantorSpec::triadic(depth);
    let set = spec.build_intervals().unwrap();
    let mut rng = rng(seed);
    let mut checked = 0;
    for i in 0..5000 {
        if checked == 1000 {
            break;
        }
        // Every other denominator is a power of 3, landing on or near endpoints.
        let q: u64 = if i % 2 == 0 {
            3u64.pow(rng.gen_range(1..=depth + 2))
        } else {
            rng.gen_range(1..=1_000_000)
        };
        let x = rng.gen_range(0..=q) as f64 / q as f64;
        if x != 0.0 && x < 1e-8 {
            continue;
        }
        // Float endpoints carry a few ulps of rounding; within that window the
        // exact answer is not meaningful.
        if set
            .intervals()
            .iter()
            .any(|iv| (iv.lo - x).abs() < 4e-15 || (iv.hi - x).abs() < 4e-15)
        {
            continue;
        }
        // The float is exactly p / 2^80.
        let p = (x * 2f64.powi(80)) as u128;
        let want = triadic_digit_oracle(p, 1u128 << 80, depth);
        ensure!(
            spec.contains(x) == want,
            "{x}: descent says {}, digits say {want}",
            spec.contains(x)
        );
        ensure!(
            set.contains(x) == want,
            "{x}: interval set says {}, digits say {want}",
            set.contains(x)
        );
        checked += 1;
    }
    ensure!(
        checked == 1000,
        "only {checked} rationals were away from endpoints"
    );
    for iv in set.intervals() {
        ensure!(
            spec.contains(iv.lo) && spec.contains(iv.hi),
            "endpoint of {iv:?} is not a member"
        );
    }
    Ok(())
}

// ---------------------------------------------------------------- measure

pub fn staircase_monotone(seed: u64) -> Check {
    let mut rng = rng(seed);
    for alpha in [0.3, 0.6, 0.8, 1.0] {
        let s = Staircase::for_dimension(alpha, 18).unwrap();
        for _ in 0..10_000 / 4 {
            let (a, b): (f64, f64) = (rng.gen(), rng.gen());
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            ensure!(s.eval(lo) <= s.eval(hi), "alpha={alpha}: S({lo}) > S({hi})");
        }
    }
    Ok(())
}

pub fn gap_constancy(seed: u64) -> Check {
    let mut rng = rng(seed);
    for alpha in [0.5, 0.6, 0.8] {
        let spec = CantorSpec::with_dimension(alpha, 8).unwrap();
        let s = Staircase::new(spec, alpha, Normalization::Gamma).unwrap();
        for g in spec.build_intervals().unwrap().gaps() {
            let v = s.eval(g.lo);
            ensure!(s.eval(g.hi) == v, "alpha={alpha}: S jumps across gap {g:?}");
            for _ in 0..3 {
                let t = g.lo + rng.gen::<f64>() * g.len();
                ensure!(
                    s.eval(t) == v,
                    "alpha={alpha}: S({t}) != S({}) inside gap",
                    g.lo
                );
            }
        }
    }
    Ok(())
}

/// S_n(r·x) = S_{n-1}(x)/m: one extra level of descent through the first
/// child reproduces the whole staircase at a smaller scale.
pub fn self_similarity(seed: u64) -> Check {
    let mut rng = rng(seed);
    for alpha in [0.4, 0.6, 0.8] {
        let fine = Staircase::for_dimension(alpha, 16).unwrap();
        let coarse = Staircase::for_dimension(alpha, 15).unwrap();
        let r = fine.spec().ratio();
        let m = fine.spec().keep() as f64;
        for _ in 0..100 {
            let x: f64 = rng.gen();
            let (lhs, rhs) = (fine.eval(r * x), coarse.eval(x) / m);
            ensure!(
                (lhs - rhs).abs() < 1e-12,
                "alpha={alpha} x={x}: {lhs} vs {rhs}"
            );
        }
    }
    Ok(())
}

pub fn degeneration_identity(seed: u64) -> Check {
    let mut rng = rng(seed);
    let full = Staircase::new(CantorSpec::full(12), 1.0, Normalization::Gamma).unwrap();
    let halves = Staircase::for_dimension(1.0, 30).unwrap();
    for _ in 0..1000 {
        let x: f64 = rng.gen();
        ensure!(
            (full.eval(x) - x).abs() < 1e-12,
            "m=1 staircase: S({x}) = {}",
            full.eval(x)
        );
        ensure!(
            (halves.eval(x) - x).abs() < 1e-12,
            "m=2 staircase: S({x}) = {}",
            halves.eval(x)
        );
    }
    Ok(())
}

pub fn mass_monotone_in_depth() -> Check {
    for alpha in [0.4, 0.6, 0.8] {
        let spec = CantorSpec::with_dimension(alpha, 0).unwrap();
        for (order, grows) in [(alpha - 0.1, true), (alpha + 0.1, false)] {
            let mut prev = mass(&spec, 0.0, 1.0, order, 0).unwrap();
            for n in 1..=16 {
                let cur = mass(&spec, 0.0, 1.0, order, n).unwrap();
                ensure!(
                    if grows { cur > prev } else { cur < prev },
                    "alpha={alpha} order={order} depth={n}: {prev} -> {cur}"
                );
                prev = cur;
            }
        }
    }
    Ok(())
}

/// Refining the aligned subdivision never lowers the flagged sum.
pub fn aligned_subdivision_is_minimal(seed: u64) -> Check {
    let mut rng = rng(seed);
    let (alpha, depth) = (0.6, 6);
    let spec = CantorSpec::with_dimension(alpha, depth).unwrap();
    let set = spec.build_intervals().unwrap();
    let g = gamma(1.0 + alpha);
    let aligned: f64 = set
        .intervals()
        .iter()
        .map(|iv| iv.len().powf(alpha))
        .sum::<f64>()
        / g;
    let reference = mass(&spec, 0.0, 1.0, alpha, depth).unwrap();
    ensure!(
        (aligned - reference).abs() < 1e-12 * reference,
        "aligned sum {aligned} vs mass {reference}"
    );
    for trial in 0..1000 {
        let mut total = 0.0;
        for iv in set.intervals() {
            let pieces = rng.gen_range(1..=4);
            let mut cuts: Vec<f64> = (0..pieces - 1)
                .map(|_| iv.lo + rng.gen::<f64>() * iv.len())
                .collect();
            cuts.push(iv.lo);
            cuts.push(iv.hi);
            cuts.sort_by(f64::total_cmp);
            total += cuts
                .windows(2)
                .map(|w| (w[1] - w[0]).powf(alpha))
                .sum::<f64>();
        }
        total /= g;
        ensure!(
            total >= aligned * (1.0 - 1e-12),
            "trial {trial}: refinement sum {total} < aligned {aligned}"
        );
    }
    Ok(())
}

// ---------------------------------------------------------------- fcalc

/// h(s) = c0 + c1·s + c2·s² + c3·sin(w·s) + c4·cos(w·s) and its antiderivative.
#[derive(Debug, Clone, Copy)]
pub struct TrigPoly {
    c: [f64; 5],
    w: f64,
}

impl TrigPoly {
    pub fn random(rng: &mut ChaCha8Rng) -> Self {
        TrigPoly {
            c: std::array::from_fn(|_| rng.gen_range(-2.0..2.0)),
            w: rng.gen_range(0.5..4.0),
        }
    }

    pub fn h(&self, s: f64) -> f64 {
        let [c0, c1, c2, c3, c4] = self.c;
        c0 + c1 * s + c2 * s * s + c3 * (self.w * s).sin() + c4 * (self.w * s).cos()
    }

    pub fn antiderivative(&self, s: f64) -> f64 {
        let [c0, c1, c2, c3, c4] = self.c;
        c0 * s + c1 * s * s / 2.0 + c2 * s.powi(3) / 3.0 - c3 * (self.w * s).cos() / self.w
            + c4 * (self.w * s).sin() / self.w
    }
}

/// Monotone increasing in s ≥ 0: positive combination of s, s³, exp(s), atan(s).
fn monotone_h(rng: &mut ChaCha8Rng) -> impl Fn(f64) -> f64 + Send + Sync + Copy + 'static {
    let c: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.1..2.0));
    move |s: f64| c[0] * s + c[1] * s.powi(3) + c[2] * s.exp() + c[3] * s.atan()
}

pub fn bracket_soundness(seed: u64) -> Check {
    let mut rng = rng(seed);
    for i in 0..20 {
        let alpha = rng.gen_range(0.4..1.0);
        let s = Staircase::for_dimension(alpha, 14).unwrap();
        let hp = TrigPoly::random(&mut rng);
        let f = Integrand1d::of_staircase("trig-poly", move |t| hp.h(t));
        let (a, b) = {
            let (u, v): (f64, f64) = (rng.gen(), rng.gen());
            (u.min(v), u.max(v))
        };
        let exact = hp.antiderivative(s.eval(b)) - hp.antiderivative(s.eval(a));
        let slack = 1e-12 * (1.0 + exact.abs());
        for cells in [1usize, 3, 16, 100] {
            let mut pts: Vec<f64> = (1..cells).map(|_| a + rng.gen::<f64>() * (b - a)).collect();
            pts.push(a);
            pts.push(b);
            pts.sort_by(f64::total_cmp);
            pts.dedup();
            let Ok(part) = Partition::new(pts) else {
                continue;
            };
            let d = darboux_sums(&f, &s, &part, 5).map_err(|e| e.to_string())?;
            ensure!(
                d.lower <= exact + slack && exact - slack <= d.upper,
                "h #{i} ({hp:?}) on [{a},{b}], {cells} cells: [{}, {}] misses {exact}",
                d.lower,
                d.upper
            );
        }
        let r = integrate1d(&f, &s, a, b, &QuadratureOptions::with_tol(1e-3))
            .map_err(|e| e.to_string())?;
        ensure!(
            r.lower <= exact + slack && exact - slack <= r.upper,
            "h #{i}: integrate1d {r:?} misses {exact}"
        );
    }
    Ok(())
}

pub fn refinement_monotone(seed: u64) -> Check {
    let mut rng = rng(seed);
    for _ in 0..5 {
        let alpha = rng.gen_range(0.4..1.0);
        let s = Staircase::for_dimension(alpha, 14).unwrap();
        let h = monotone_h(&mut rng);
        let f = Integrand1d::of_staircase("monotone", h);
        let mut prev: Option<(f64, f64)> = None;
        for level in 1..=6 {
            let part = Partition::uniform(0.0, 1.0, 1 << level).unwrap();
            let d = darboux_sums(&f, &s, &part, 5).map_err(|e| e.to_string())?;
            if let Some((l, u)) = prev {
                ensure!(
                    d.lower >= l && d.upper <= u,
                    "alpha={alpha} level {level}: [{l},{u}] -> [{}, {}]",
                    d.lower,
                    d.upper
                );
            }
            prev = Some((d.lower, d.upper));
        }
    }
    Ok(())
}

pub fn off_support_independence(seed: u64) -> Check {
    let mut rng = rng(seed);
    let spec = CantorSpec::with_dimension(0.6, 10).unwrap();
    let s = Staircase::new(spec, 0.6, Normalization::Gamma).unwrap();
    let gaps: Vec<Interval> = spec.build_intervals().unwrap().gaps().collect();
    let spikes: Vec<f64> = (0..100)
        .map(|_| {
            let g = gaps[rng.gen_range(0..gaps.len())];
            g.lo + (0.05 + 0.9 * rng.gen::<f64>()) * g.len()
        })
        .collect();
    let opts = QuadratureOptions::with_tol(1e-4);
    let base = Integrand1d::of_staircase("sin", f64::sin);
    let spiked = Integrand1d::new(
        "sin with spikes",
        SupportSemantics::OnSupportOnly,
        move |x, t| {
            if spikes.contains(&x) {
                1e9
            } else {
                t.sin()
            }
        },
    );
    let wild = Integrand1d::new(
        "sin, wild off support",
        SupportSemantics::OnSupportOnly,
        move |x, t| {
            if spec.contains(x) {
                t.sin()
            } else {
                -1e9 * (1.0 + x)
            }
        },
    );
    for (a, b) in [(0.0, 1.0), (0.05, 0.93), (0.3, 0.7)] {
        let want = integrate1d(&base, &s, a, b, &opts).map_err(|e| e.to_string())?;
        for f in [&spiked, &wild] {
            let got = integrate1d(f, &s, a, b, &opts).map_err(|e| e.to_string())?;
            ensure!(
                got == want,
                "[{a},{b}] {}: {got:?} vs {want:?}",
                f.description()
            );
        }
    }
    Ok(())
}

pub fn scaled_sampling(seed: u64) -> Check {
    let mut rng = rng(seed);
    for _ in 0..5 {
        let alpha = rng.gen_range(0.4..1.0);
        let s = Staircase::for_dimension(alpha, 14).unwrap();
        let f = Integrand1d::of_staircase("monotone", monotone_h(&mut rng));
        let part = Partition::uniform(0.0, 1.0, 37).unwrap();
        let mut prev = f64::INFINITY;
        for spc in 2..=9 {
            let d = darboux_sums(&f, &s, &part, spc).map_err(|e| e.to_string())?;
            let w = d.upper - d.lower;
            ensure!(
                w <= prev,
                "alpha={alpha}: width grew to {w} at {spc} samples (was {prev})"
            );
            prev = w;
        }
    }
    Ok(())
}

/// D(∫ h∘S) = h∘S at support points, with the integral accumulated by
/// integrate1d between consecutive evaluation points.
pub fn derivative_inverts_integral(seed: u64) -> Check {
    let mut rng = rng(seed);
    let (alpha, depth) = (0.6, 8);
    let spec = CantorSpec::with_dimension(alpha, depth).unwrap();
    let set = spec.build_intervals().unwrap();
    let s = Staircase::new(spec, alpha, Normalization::Gamma).unwrap();
    let s2 = Staircase2D::new(s, s);
    let h = |t: f64| 2.0 + (1.5 * t).sin();
    let probes: Vec<f64> = (0..50)
        .map(|_| s.mass_quantile(rng.gen_range(0.01..0.99), Side::Left))
        .collect();

    let mut nodes: Vec<f64> = set
        .intervals()
        .iter()
        .flat_map(|iv| [iv.lo, iv.hi])
        .chain(probes.iter().copied())
        .collect();
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    let f = Integrand1d::of_staircase("h", h);
    let opts = QuadratureOptions::with_tol(1e-8).samples(3);
    let mut table = vec![(nodes[0], 0.0)];
    let mut acc = 0.0;
    for w in nodes.windows(2) {
        acc += integrate1d(&f, &s, w[0], w[1], &opts)
            .map_err(|e| e.to_string())?
            .midpoint;
        table.push((w[1], acc));
    }
    let lookup = move |x: f64| {
        let i = table.partition_point(|p| p.0 < x);
        assert!(
            table[i].0 == x,
            "integral requested off the node table at {x}"
        );
        table[i].1
    };
    let big_f = Integrand::new(
        "int h",
        SupportSemantics::OnSupportOnly,
        move |c: &Coords| lookup(c.x),
    );
    for &x in &probes {
        let d =
            partial_derivative(&big_f, &s2, Axis::X, (x, 0.5), &set).map_err(|e| e.to_string())?;
        let want = h(s.eval(x));
        ensure!(
            (d - want).abs() <= 0.02 * want.abs(),
            "x={x}: derivative {d} vs h(S(x)) = {want}"
        );
    }
    Ok(())
}

fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|i| f(a + i as f64 * h)).sum();
    h * (0.5 * (f(a) + f(b)) + inner)
}

/// With α = 1 the staircase is the identity, so the fractal integral and
/// derivative must reduce to ordinary calculus.
pub fn degenerate_calculus() -> Check {
    let coarse = Staircase::for_dimension(1.0, 8).unwrap();
    let depth = 20;
    let fine = Staircase::for_dimension(1.0, depth).unwrap();
    let s2 = Staircase2D::new(fine, fine);
    let set = fine.spec().build_intervals().unwrap();
    type Real = fn(f64) -> f64;
    let funcs: [(&str, Real, Real); 4] = [
        ("sin", f64::sin, f64::cos),
        ("cos", f64::cos, |x| -x.sin()),
        (
            "cubic",
            |x| x * x * x - 2.0 * x + 0.5,
            |x| 3.0 * x * x - 2.0,
        ),
        (
            "quartic",
            |x| 0.3 * x.powi(4) + x * x,
            |x| 1.2 * x.powi(3) + 2.0 * x,
        ),
    ];
    let opts = QuadratureOptions::with_tol(1e-6);
    let step = 0.5f64.powi(depth as i32);
    for (name, f, df) in funcs {
        let g = Integrand1d::new(name, SupportSemantics::OnSupportOnly, move |x, _| f(x));
        let (a, b) = if name == "sin" {
            (0.25, 0.75)
        } else {
            (0.0, 1.0)
        };
        let r = integrate1d(&g, &coarse, a, b, &opts).map_err(|e| e.to_string())?;
        let trap = trapezoid(f, a, b, 200_000);
        ensure!(
            (r.midpoint - trap).abs() < 1e-6,
            "{name} on [{a},{b}]: {} vs trapezoid {trap}",
            r.midpoint
        );

        let g2 = Integrand::new(name, SupportSemantics::OnSupportOnly, move |c: &Coords| {
            f(c.x)
        });
        for k in 1..20 {
            let x = k as f64 / 20.0;
            let d =
                partial_derivative(&g2, &s2, Axis::X, (x, 0.5), &set).map_err(|e| e.to_string())?;
            let central = (f(x + step) - f(x - step)) / (2.0 * step);
            ensure!(
                (d - central).abs() < 1e-6,
                "{name}'({x}): {d} vs central difference {central}"
            );
            ensure!(
                (d - df(x)).abs() < 1e-6,
                "{name}'({x}): {d} vs exact {}",
                df(x)
            );
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- parser

/// Expression tree generated independently of the library's parser.
#[derive(Debug, Clone)]
pub enum Gen {
    Num(f64),
    Var(&'static str),
    Neg(Box<Gen>),
    Bin(char, Box<Gen>, Box<Gen>),
    Call(&'static str, Box<Gen>),
}

impl Gen {
    /// Infix text with every operand parenthesized.
    pub fn text(&self) -> String {
        match self {
            Gen::Num(v) => format!("{v:?}"),
            Gen::Var(v) => v.to_string(),
            Gen::Neg(e) => format!("-({})", e.text()),
            Gen::Bin(op, l, r) => format!("({}) {op} ({})", l.text(), r.text()),
            Gen::Call(f, e) => format!("{f}({})", e.text()),
        }
    }

    pub fn eval(&self, v: &Vars) -> Option<f64> {
        Some(match self {
            Gen::Num(c) => *c,
            Gen::Var("Sx") => v.sx,
            Gen::Var("Sy") => v.sy,
            Gen::Var("x") => v.x,
            Gen::Var(_) => v.y,
            Gen::Neg(e) => -e.eval(v)?,
            Gen::Bin(op, l, r) => {
                let (a, b) = (l.eval(v)?, r.eval(v)?);
                match op {
                    '+' => a + b,
                    '-' => a - b,
                    '*' => a * b,
                    '/' if b == 0.0 => return None,
                    '/' => a / b,
                    _ => a.powf(b),
                }
            }
            Gen::Call(f, e) => {
                let a = e.eval(v)?;
                match *f {
                    "sin" => a.sin(),
                    "cos" => a.cos(),
                    "exp" => a.exp(),
                    _ if a < 0.0 => return None,
                    _ => a.sqrt(),
                }
            }
        })
    }
}

pub fn gen_strategy() -> impl Strategy<Value = Gen> {
    let leaf = prop_oneof![
        (0.0f64..100.0).prop_map(Gen::Num),
        prop_oneof![Just(1.0), Just(0.5), Just(2.0), Just(1e-3)].prop_map(Gen::Num),
        prop_oneof![Just("Sx"), Just("Sy"), Just("x"), Just("y")].prop_map(Gen::Var),
    ];
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Gen::Neg(Box::new(e))),
            (
                prop_oneof![Just('+'), Just('-'), Just('*'), Just('/'), Just('^')],
                inner.clone(),
                inner.clone()
            )
                .prop_map(|(op, l, r)| Gen::Bin(op, Box::new(l), Box::new(r))),
            (
                prop_oneof![Just("sin"), Just("cos"), Just("exp"), Just("sqrt")],
                inner
            )
                .prop_map(|(f, e)| Gen::Call(f, Box::new(e))),
        ]
    })
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

pub fn parser_round_trip(cases: u32) -> Check {
    runner(cases)
        .run(&gen_strategy(), |g| {
            let text = g.text();
            let tree =
                parse_expr(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
            let printed = tree.to_string();
            let again =
                parse_expr(&printed).map_err(|e| TestCaseError::fail(format!("{printed}: {e}")))?;
            prop_assert_eq!(&tree, &again, "{} printed as {}", text, printed);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn parser_eval_agrees(cases: u32) -> Check {
    let vars = (-2.0f64..2.0, -2.0f64..2.0, 0.0f64..1.0, 0.0f64..1.0)
        .prop_map(|(sx, sy, x, y)| Vars { x, y, sx, sy });
    runner(cases)
        .run(&(gen_strategy(), vars), |(g, v)| {
            let text = g.text();
            let tree =
                parse_expr(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
            match (tree.eval(&v), g.eval(&v)) {
                (Ok(a), Some(b)) => {
                    prop_assert!(
                        a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan()),
                        "{}: {} vs {}",
                        text,
                        a,
                        b
                    )
                }
                (Err(_), None) => {}
                (a, b) => prop_assert!(false, "{}: parser eval {:?}, oracle {:?}", text, a, b),
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}
