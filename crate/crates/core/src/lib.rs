//! Closed-form fitting of the optimal root-mean-square plane, the optimal
//! algebraic circle and, for degenerate data, the optimal straight line to a
//! set of points in 3D.
//!
//! ```
//! use geomfit::{fit_circle, CircleOptions, Vec3};
//!
//! let pts: Vec<Vec3> = (0..8)
//!     .map(|k| {
//!         let t = k as f64 * std::f64::consts::TAU / 8.0;
//!         Vec3::new(1.0 + 2.0 * t.cos(), 1.0 + 2.0 * t.sin(), 1.0)
//!     })
//!     .collect();
//! let fit = fit_circle(&pts, &CircleOptions::default()).unwrap();
//! let circle = fit.circle().unwrap();
//! assert!((circle.radius - 2.0).abs() < 1e-12);
//! ```

pub mod circle_fit;
pub mod error;
pub mod linalg3;
pub mod pipeline;
pub mod plane_fit;

pub use circle_fit::{
    fit_circle, fit_line, CircleFit, CircleOptions, CircleOrLine, Decision, LineFit, Shape,
};
pub use error::{FitError, Result};
pub use linalg3::{eigen_sym3, EigenDecomp3, Point3, SymForm2, SymForm3, Vec2, Vec3};
pub use plane_fit::{fit_plane, PlaneFit, PlaneOptions};
