//! Numerical laboratory for weighted norm inequalities on the line:
//! maximal operators, Muckenhoupt/Fujii-Wilson weight constants, weighted
//! Lorentz quasi-norms, closed-form bound formulas, and delta-sweep
//! experiments that measure the scaling exponents of all of the above.

// `!(x > 0.0)`-style guards are deliberate: they reject NaN along with the
// out-of-range values, which `x <= 0.0` would silently let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod funcspace;
pub mod lab;
pub mod lorentz;
pub mod maximal;
pub mod theory;
pub mod weights;

pub use error::{Error, Result};
pub use funcspace::{Interval, Piece, PiecewisePower, StepFunction};
