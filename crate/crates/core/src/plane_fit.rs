//! Optimal root-mean-square plane of a point set.
//!
//! The mean squared point-to-plane distance, minimized over the offset for a
//! fixed unit normal `n`, equals `Q(n, n)` where `Q` is the covariance form of
//! the points about their centroid. The optimal plane therefore passes through
//! the centroid and its normal is the eigenvector of `Q` for the smallest
//! eigenvalue. The plane is unique exactly when that eigenvalue is simple.

use crate::error::{FitError, Result};
use crate::linalg3::{eigen_sym3, EigenDecomp3, Point3, SymForm3, Vec3, EPS_RANK};

/// Relative eigen-gap below which the plane is reported as non-unique.
pub const DEFAULT_TAU_UNIQUE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneOptions {
    pub tau_unique: f64,
}

impl Default for PlaneOptions {
    fn default() -> Self {
        PlaneOptions { tau_unique: DEFAULT_TAU_UNIQUE }
    }
}

impl PlaneOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau_unique.is_finite() && self.tau_unique > 0.0) {
            return Err(FitError::InvalidOptions(format!(
                "tau_unique must be positive and finite, got {}",
                self.tau_unique
            )));
        }
        Ok(())
    }
}

/// The plane `{r : r·normal = offset}` minimizing the mean squared distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneFit {
    pub normal: Vec3,
    pub offset: f64,
    /// Mean squared distance of the points to the plane (the smallest eigenvalue).
    pub rms_sq: f64,
    pub centroid: Point3,
    /// Whether the smallest eigenvalue is separated from the other two.
    pub unique: bool,
    /// Eigen-decomposition of the non-flatness form; `eigen.vectors[0] == normal`.
    pub eigen: EigenDecomp3,
}

impl PlaneFit {
    pub fn eigenvalues(&self) -> [f64; 3] {
        self.eigen.values
    }

    /// Signed distance of `p` from the plane.
    pub fn signed_distance(&self, p: Point3) -> f64 {
        p.dot(self.normal) - self.offset
    }
}

pub(crate) fn check_points(points: &[Point3]) -> Result<()> {
    if points.is_empty() {
        return Err(FitError::EmptyInput);
    }
    if let Some(index) = points.iter().position(|p| !p.is_finite()) {
        return Err(FitError::NonFinite { index });
    }
    Ok(())
}

/// Arithmetic mean of the points.
pub fn centroid(points: &[Point3]) -> Result<Point3> {
    check_points(points)?;
    let sum = points.iter().fold(Vec3::ZERO, |acc, &p| acc + p);
    Ok(sum / points.len() as f64)
}

/// `(1/N) Σ (r − r_cm)(r − r_cm)ᵀ`.
///
/// Its value at `n` is the variance of the projections `r·n`. Accumulated over
/// centered points so distant clouds do not lose precision.
pub fn nonflatness_form(points: &[Point3]) -> Result<SymForm3> {
    let c = centroid(points)?;
    let sum = points
        .iter()
        .fold(SymForm3::ZERO, |acc, &p| acc + SymForm3::outer(p - c));
    Ok(sum * (1.0 / points.len() as f64))
}

/// Inertia tensor of unit masses at the points, about their centroid:
/// `I(n, n) = Σ|r − r_cm|²|n|² − Σ((r − r_cm)·n)²`.
pub fn inertia_form(points: &[Point3]) -> Result<SymForm3> {
    let c = centroid(points)?;
    let mut second = SymForm3::ZERO;
    let mut spread = 0.0;
    for &p in points {
        let d = p - c;
        second += SymForm3::outer(d);
        spread += d.norm_sq();
    }
    Ok(SymForm3::IDENTITY * spread - second)
}

/// Mean squared distance `(1/N) Σ (r·n − D)²` of the points to a plane.
pub fn plane_objective(points: &[Point3], normal: Vec3, offset: f64) -> Result<f64> {
    check_points(points)?;
    let sum: f64 = points
        .iter()
        .map(|&p| {
            let d = p.dot(normal) - offset;
            d * d
        })
        .sum();
    Ok(sum / points.len() as f64)
}

/// True when the centered spread is indistinguishable from rounding noise
/// at the magnitude of the coordinates.
pub(crate) fn is_coincident(points: &[Point3], form: &SymForm3) -> bool {
    let magnitude = points.iter().map(|p| p.norm()).fold(0.0, f64::max);
    form.trace().max(0.0).sqrt() <= EPS_RANK * magnitude
}

/// Fits the optimal root-mean-square plane.
///
/// Returns the deterministic eigenvector choice (flagged `unique = false`)
/// when the smallest eigenvalue is repeated.
pub fn fit_plane(points: &[Point3], options: &PlaneOptions) -> Result<PlaneFit> {
    options.validate()?;
    check_points(points)?;
    if points.len() < 3 {
        return Err(FitError::TooFewPoints { needed: 3, got: points.len() });
    }
    let centroid = centroid(points)?;
    let q = nonflatness_form(points)?;
    if is_coincident(points, &q) {
        return Err(FitError::DegenerateCloud);
    }
    let eigen = eigen_sym3(&q)?;
    let [l1, l2, l3] = eigen.values;
    let normal = eigen.vectors[0];
    // max(λ₃, tr Q) is tr Q for a semidefinite form; kept explicit.
    let spread = q.trace();
    let unique = l2 - l1 > options.tau_unique * l3.max(spread);
    Ok(PlaneFit {
        normal,
        offset: centroid.dot(normal),
        rms_sq: l1.max(0.0),
        centroid,
        unique,
        eigen,
    })
}
