//! F^ζ-integration with certified brackets, F^α-partial derivatives and the
//! conjugacy engine.
//!
//! Integrals are Riemann-Stieltjes sums against staircase increments. The
//! supremum and infimum of the integrand over a cell are taken over a finite
//! set of support points (cell ends on the support plus quantile samples), so
//! a bracket is certified relative to that sampling rule. For integrands of
//! the form h∘S with h monotone on each cell the sampled extremes are exact.

mod conjugate;
mod derivative;
mod grid;
mod integrate;

use std::fmt;
use std::sync::Arc;

pub use conjugate::{conjugate_integral, solve_fode};
pub use derivative::{partial_derivative, Axis};
pub use grid::pairwise_sum;
pub use integrate::{darboux_sums, darboux_sums_2d, integrate1d, integrate2d, DarbouxSums};

/// Where an integrand's values are allowed to matter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SupportSemantics {
    /// Only points of the fractal support are sampled.
    #[default]
    OnSupportOnly,
    /// Integration limits off the support are sampled as well.
    Everywhere,
}

/// Raw coordinates together with the staircase values at them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coords {
    pub x: f64,
    pub y: f64,
    pub sx: f64,
    pub sy: f64,
}

type Eval2 = Arc<dyn Fn(&Coords) -> f64 + Send + Sync>;
type Eval1 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Two-variable integrand. Evaluators must be pure.
#[derive(Clone)]
pub struct Integrand {
    eval: Eval2,
    semantics: SupportSemantics,
    description: String,
}

impl Integrand {
    pub fn new<F>(description: impl Into<String>, semantics: SupportSemantics, f: F) -> Self
    where
        F: Fn(&Coords) -> f64 + Send + Sync + 'static,
    {
        Integrand {
            eval: Arc::new(f),
            semantics,
            description: description.into(),
        }
    }

    /// Integrand written in terms of the staircase values only.
    pub fn of_staircases<F>(description: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Integrand::new(
            description,
            SupportSemantics::OnSupportOnly,
            move |c: &Coords| f(c.sx, c.sy),
        )
    }

    #[inline]
    pub fn eval(&self, c: &Coords) -> f64 {
        (self.eval)(c)
    }

    pub fn semantics(&self) -> SupportSemantics {
        self.semantics
    }

    pub fn description(&self) -> &str {
        &self.description
    }
}

impl fmt::Debug for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Integrand")
            .field("description", &self.description)
            .field("semantics", &self.semantics)
            .finish()
    }
}

/// One-axis integrand f(x, S(x)).
#[derive(Clone)]
pub struct Integrand1d {
    eval: Eval1,
    semantics: SupportSemantics,
    description: String,
}

impl Integrand1d {
    pub fn new<F>(description: impl Into<String>, semantics: SupportSemantics, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Integrand1d {
            eval: Arc::new(f),
            semantics,
            description: description.into(),
        }
    }

    /// h∘S.
    pub fn of_staircase<F>(description: impl Into<String>, h: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Integrand1d::new(description, SupportSemantics::OnSupportOnly, move |_, s| {
            h(s)
        })
    }

    #[inline]
    pub fn eval(&self, x: f64, s: f64) -> f64 {
        (self.eval)(x, s)
    }

    pub fn semantics(&self) -> SupportSemantics {
        self.semantics
    }

    pub fn description(&self) -> &str {
        &self.description
    }
}

impl fmt::Debug for Integrand1d {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Integrand1d")
            .field("description", &self.description)
            .field("semantics", &self.semantics)
            .finish()
    }
}

/// An integral value with its lower/upper Darboux bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketedValue {
    pub lower: f64,
    pub upper: f64,
    pub midpoint: f64,
    /// Mesh of the subdivision that produced the bracket.
    pub mesh: f64,
}

impl BracketedValue {
    pub fn new(lower: f64, upper: f64, mesh: f64) -> Self {
        let (lower, upper) = if lower <= upper {
            (lower, upper)
        } else {
            (upper, lower)
        };
        BracketedValue {
            lower,
            upper,
            midpoint: 0.5 * (lower + upper),
            mesh,
        }
    }

    pub fn exact(value: f64) -> Self {
        BracketedValue::new(value, value, 0.0)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lower <= v && v <= self.upper
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    /// Target bracket width.
    pub tol: f64,
    pub samples_per_cell: usize,
    /// Refinement starts with 2^min_level cells per axis...
    pub min_level: u32,
    /// ...and gives up after 2^max_level.
    pub max_level: u32,
}

impl QuadratureOptions {
    pub const DEFAULT_SAMPLES: usize = 5;

    pub fn with_tol(tol: f64) -> Self {
        QuadratureOptions {
            tol,
            samples_per_cell: Self::DEFAULT_SAMPLES,
            min_level: 3,
            max_level: 22,
        }
    }

    pub fn samples(mut self, samples_per_cell: usize) -> Self {
        self.samples_per_cell = samples_per_cell;
        self
    }

    pub fn max_level(mut self, max_level: u32) -> Self {
        self.max_level = max_level;
        self
    }

    pub(crate) fn validate(&self) -> crate::Result<()> {
        if !(self.tol > 0.0) {
            return Err(crate::Error::Argument(format!(
                "tolerance {} must be positive",
                self.tol
            )));
        }
        if self.samples_per_cell < 2 {
            return Err(crate::Error::Argument(
                "samples_per_cell must be at least 2".into(),
            ));
        }
        if self.min_level > self.max_level || self.max_level > 30 {
            return Err(crate::Error::Argument(format!(
                "refinement levels {}..={} are invalid",
                self.min_level, self.max_level
            )));
        }
        Ok(())
    }
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions::with_tol(1e-6)
    }
}
