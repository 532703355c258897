//! F^α-calculus on Cantor-Tartan supports.
//!
//! - [`cantor`]: finite-depth generalized Cantor sets and the Cantor-Tartan.
//! - [`measure`]: mass function, staircases S_F^α, ζ-dimension estimation.
//! - [`fcalc`]: bracketed fractal integrals, partial derivatives, the
//!   conjugacy identity and a fractal ODE solver.
//! - [`cli`]: expression parser and the `tartan` command-line front end.
//!
//! ```
//! use tartan::fcalc::{integrate1d, Integrand1d, QuadratureOptions};
//! use tartan::measure::Staircase;
//!
//! let stair = Staircase::for_dimension(0.6, 20).unwrap();
//! let f = Integrand1d::of_staircase("sin(S)", f64::sin);
//! let r = integrate1d(&f, &stair, 0.0, 1.0, &QuadratureOptions::with_tol(1e-6)).unwrap();
//! assert!((r.midpoint - (1.0 - stair.scale().cos())).abs() < 1e-6);
//! ```

// Negated comparisons double as NaN rejection.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cantor;
pub mod cli;
pub mod error;
pub mod fcalc;
pub mod gamma;
pub mod measure;

pub use error::{Error, Result};
