//! Linear set differential equations `D_H X = A X` on planar convex bodies.
//!
//! Bodies are stored by support function: a trigonometric polynomial plus an
//! exact convex polygon summand. On top of that sit mixed areas, the
//! Brunn–Minkowski deficit, a translation- and scale-invariant shape metric,
//! three integrators, the linear comparison system for mixed areas under a
//! periodic rotation, and an experiment harness.
//!
//! ```
//! use setflow::body2d::{Body2D, LinearOp2};
//! use setflow::geomfun::area;
//! use setflow::sde::solve_spectral;
//!
//! let disk = Body2D::disk(1.0).unwrap();
//! let x = solve_spectral(&disk, &LinearOp2::rotation_order(4), 1.0).unwrap();
//! let expected = std::f64::consts::PI * 2f64.exp();
//! assert!((area(&x) - expected).abs() < 1e-12 * expected);
//! ```

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod body2d;
pub mod compsys;
pub mod error;
pub mod geomfun;
pub mod lab;
pub mod sde;

pub use body2d::{Body2D, ConvexPolygon, Interval1D, LinearOp2, Resolution};
pub use error::{Error, Result};
