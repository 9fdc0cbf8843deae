//! Constrained 1/2-elasticae in the hyperbolic plane.

// `!(x > 0.0)` rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curvegen;
pub mod dynamics;
pub mod ellint;
pub mod error;
pub mod moduli;
pub mod numeric;
pub mod ode;
pub mod periodmap;

pub use error::{Error, Result};
pub use moduli::{ModulusPoint, QuarticData, Region};
