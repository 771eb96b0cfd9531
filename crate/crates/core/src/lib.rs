//! Favard length and Favard curve length of planar sets.
//!
//! The crate computes `Fav(E) = ∫ |proj_ω(E)| dω` and its curved analogue
//! `Fav_C(E) = ∫ |Φ_α(E)| dα` exactly per parameter value (projections of
//! finite square unions are finite interval unions), integrates them with
//! composite Simpson, cross-checks against Buffon-curve Monte Carlo, and
//! exposes the multiscale objects used to study their decay on the
//! four-corner Cantor generations.
//!
//! ```
//! use favard_lab::{fractal, estimators::{favard_length, QuadratureSpec}};
//!
//! let k1 = fractal::cantor_generation(1).unwrap();
//! let fav = favard_length(&k1, &QuadratureSpec::default());
//! assert!(fav.value < 8.0);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::should_implement_trait)]

pub mod cli;
pub mod curves;
pub mod error;
pub mod estimators;
pub mod fractal;
pub mod geom;
pub mod interval;
pub mod multiscale;
pub mod plot;
pub mod projection;
pub mod quadrature;
pub mod roots;

pub use curves::{extend_curve, frame_at, make_circle_arc, make_parabola, ExtendedGraphCurve, GraphCurve, DELTA};
pub use error::{Error, Result};
pub use geom::{Point, Rect};
pub use interval::{Interval, IntervalUnion};
