//! Optimal algebraic circle through a point set, with a straight-line
//! fallback for (near-)collinear data.
//!
//! Points are first laid onto their optimal plane and expressed in an
//! in-plane frame. The mean squared deflection `(|r − R|² − ρ²)²`, minimized
//! over `ρ²`, is the quadratic `4Q(R,R) − 4(L,R) + M` in the center `R`, so
//! the center solves the 2×2 system `2 Q R = L`. A singular `Q` means the
//! points are collinear, in which case the line through the centroid along
//! the dominant axis is returned instead.

use crate::error::{FitError, Result};
use crate::linalg3::{
    plane_basis, solve_sym2, EigenDecomp3, Point3, SymForm2, SymForm3, Vec2, Vec3, EPS_RANK,
};
use crate::plane_fit::{
    centroid, check_points, fit_plane, nonflatness_form, PlaneFit, PlaneOptions,
    DEFAULT_TAU_UNIQUE,
};

/// `λ₂/λ₃` at or below which the line branch is taken.
pub const DEFAULT_TAU_LINE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleOptions {
    pub tau_line: f64,
    pub tau_unique: f64,
}

impl Default for CircleOptions {
    fn default() -> Self {
        CircleOptions { tau_line: DEFAULT_TAU_LINE, tau_unique: DEFAULT_TAU_UNIQUE }
    }
}

impl CircleOptions {
    pub fn plane_options(&self) -> PlaneOptions {
        PlaneOptions { tau_unique: self.tau_unique }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau_line.is_finite() && self.tau_line > 0.0) {
            return Err(FitError::InvalidOptions(format!(
                "tau_line must be positive and finite, got {}",
                self.tau_line
            )));
        }
        self.plane_options().validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleFit {
    pub center: Point3,
    pub radius: f64,
    /// Mean squared algebraic deflection, in length⁴.
    pub rms_sq: f64,
    pub plane: PlaneFit,
    /// In-plane frame; 2D coordinates are taken relative to `plane.centroid`.
    pub basis: (Vec3, Vec3),
}

impl CircleFit {
    /// In-plane coordinates of `p` (its projection, really) in the fit's frame.
    pub fn plane_coords(&self, p: Point3) -> Vec2 {
        to_plane_coords(p, self.plane.centroid, self.basis)
    }

    pub fn lift(&self, q: Vec2) -> Point3 {
        lift(q, self.plane.centroid, self.basis)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub anchor: Point3,
    pub direction: Vec3,
    /// `(λ₁, λ₂)`: mean squared spread off the line along the two plane normals.
    pub rms_sq_plane_pair: [f64; 2],
    /// Normals of the two planes whose intersection is the line.
    pub normals: [Vec3; 2],
    pub offsets: [f64; 2],
}

/// Why a given shape was returned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Circle,
    /// `λ₂/λ₃` of the 3D form was at or below `tau_line`.
    LineEigenRatio,
    /// The in-plane 2×2 form was singular.
    LineSingularForm,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Circle => "circle",
            Decision::LineEigenRatio => "line_eigen_ratio",
            Decision::LineSingularForm => "line_singular_form",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub tau_line: f64,
    pub tau_unique: f64,
    pub lambda1_over_lambda3: f64,
    pub lambda2_over_lambda3: f64,
    /// `|det Q₂| / ‖Q₂‖²_F`, when the in-plane form was built.
    pub planar_det_ratio: Option<f64>,
    pub decision: Decision,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Circle(CircleFit),
    Line(LineFit),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleOrLine {
    pub shape: Shape,
    pub plane: PlaneFit,
    pub diagnostics: Diagnostics,
}

impl CircleOrLine {
    pub fn circle(&self) -> Option<&CircleFit> {
        match &self.shape {
            Shape::Circle(c) => Some(c),
            Shape::Line(_) => None,
        }
    }

    pub fn line(&self) -> Option<&LineFit> {
        match &self.shape {
            Shape::Line(l) => Some(l),
            Shape::Circle(_) => None,
        }
    }
}

/// Second-order data of a planar point set for the circle fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleMoments {
    pub q: SymForm2,
    pub l: Vec2,
    pub m: f64,
    /// Origin of the coordinates the moments were taken in; add it to a
    /// solved center to get back to the caller's coordinates.
    pub shift: Vec2,
}

/// `r ↦ r − ((r·n) − D) n`
pub fn project_to_plane(points: &[Point3], plane: &PlaneFit) -> Vec<Point3> {
    points
        .iter()
        .map(|&p| p - plane.normal * plane.signed_distance(p))
        .collect()
}

fn to_plane_coords(p: Point3, origin: Point3, (e1, e2): (Vec3, Vec3)) -> Vec2 {
    let d = p - origin;
    Vec2::new(d.dot(e1), d.dot(e2))
}

fn lift(q: Vec2, origin: Point3, (e1, e2): (Vec3, Vec3)) -> Point3 {
    origin + e1 * q.x + e2 * q.y
}

/// `(Q, L, M)` of 2D points in the coordinates given, without re-centering:
/// `L = (1/N) Σ |r|² (r − r_cm)` and `M = (1/N) Σ |r|⁴ − ((1/N) Σ |r|²)²`.
pub fn raw_circle_moments(points: &[Vec2]) -> Result<(SymForm2, Vec2, f64)> {
    if points.is_empty() {
        return Err(FitError::EmptyInput);
    }
    let inv_n = 1.0 / points.len() as f64;
    let mean = points.iter().fold(Vec2::ZERO, |a, &p| a + p) * inv_n;
    let mut q = SymForm2::ZERO;
    let mut l = Vec2::ZERO;
    let (mut s2, mut s4) = (0.0, 0.0);
    for &p in points {
        let d = p - mean;
        let r2 = p.norm_sq();
        q += SymForm2::outer(d);
        l = l + d * r2;
        s2 += r2;
        s4 += r2 * r2;
    }
    let mean2 = s2 * inv_n;
    Ok((q * inv_n, l * inv_n, s4 * inv_n - mean2 * mean2))
}

/// Same as [`raw_circle_moments`] but for 3D points, where `Q` is the
/// non-flatness form.
pub fn raw_circle_moments_3d(points: &[Point3]) -> Result<(SymForm3, Vec3, f64)> {
    let q = nonflatness_form(points)?;
    let c = centroid(points)?;
    let inv_n = 1.0 / points.len() as f64;
    let mut l = Vec3::ZERO;
    let (mut s2, mut s4) = (0.0, 0.0);
    for &p in points {
        let r2 = p.norm_sq();
        l += (p - c) * r2;
        s2 += r2;
        s4 += r2 * r2;
    }
    let mean2 = s2 * inv_n;
    Ok((q, l * inv_n, s4 * inv_n - mean2 * mean2))
}

/// Circle moments taken about the 2D centroid of the points.
pub fn circle_moments(points: &[Vec2]) -> Result<CircleMoments> {
    if points.len() < 3 {
        return Err(FitError::TooFewPoints { needed: 3, got: points.len() });
    }
    let shift = points.iter().fold(Vec2::ZERO, |a, &p| a + p) / points.len() as f64;
    let centered: Vec<Vec2> = points.iter().map(|&p| p - shift).collect();
    let (q, l, m) = raw_circle_moments(&centered)?;
    Ok(CircleMoments { q, l, m, shift })
}

/// Solves `2 Q R = L` for the center.
pub fn solve_center(q: &SymForm2, l: Vec2) -> Result<Vec2> {
    solve_sym2(&(*q * 2.0), l)
}

/// `ρ = sqrt((1/N) Σ |r − R|²)`
pub fn radius_from_center(points: &[Vec2], center: Vec2) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let sum: f64 = points.iter().map(|&p| (p - center).norm_sq()).sum();
    (sum / points.len() as f64).sqrt()
}

/// Mean squared algebraic deflection `(1/N) Σ (|r − R|² − ρ²)²`.
pub fn circle_objective(points: &[Vec2], center: Vec2, radius: f64) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let rho2 = radius * radius;
    let sum: f64 = points
        .iter()
        .map(|&p| {
            let d = (p - center).norm_sq() - rho2;
            d * d
        })
        .sum();
    sum / points.len() as f64
}

/// `4 Q(R,R) − 4 (L,R) + M`: the circle objective with `ρ²` already optimized.
pub fn reduced_objective(q: &SymForm2, l: Vec2, m: f64, center: Vec2) -> f64 {
    4.0 * q.value(center) - 4.0 * l.dot(center) + m
}

/// Line through the centroid along the dominant axis, i.e. the intersection
/// of the two planes through the centroid whose normals are the eigenvectors
/// of the two smallest eigenvalues.
// Negated comparisons below are deliberate: NaN must take the error path.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn fit_line(points: &[Point3], decomp: &EigenDecomp3) -> Result<LineFit> {
    check_points(points)?;
    if points.len() < 2 {
        return Err(FitError::TooFewPoints { needed: 2, got: points.len() });
    }
    let magnitude = points.iter().map(|p| p.norm()).fold(0.0, f64::max);
    let spread: f64 = decomp.values.iter().sum();
    if !(decomp.values[2] > 0.0) || spread.max(0.0).sqrt() <= EPS_RANK * magnitude {
        return Err(FitError::DegenerateCloud);
    }
    let anchor = centroid(points)?;
    let [n1, n2, _] = decomp.vectors;
    Ok(LineFit {
        anchor,
        direction: n1.cross(n2).normalized(),
        rms_sq_plane_pair: [decomp.values[0].max(0.0), decomp.values[1].max(0.0)],
        normals: [n1, n2],
        offsets: [anchor.dot(n1), anchor.dot(n2)],
    })
}

/// Circle fit on the projections of `points` onto `plane`, skipping the
/// collinearity pre-check. Fails with [`FitError::DegenerateSystem`] when the
/// in-plane form is singular.
pub fn circle_on_plane(points: &[Point3], plane: &PlaneFit) -> Result<CircleFit> {
    let (circle, _) = circle_on_plane_inner(points, plane)?;
    Ok(circle)
}

fn planar_det_ratio(q: &SymForm2) -> f64 {
    let f = q.frobenius_norm();
    if f > 0.0 {
        q.det().abs() / (f * f)
    } else {
        0.0
    }
}

fn circle_on_plane_inner(points: &[Point3], plane: &PlaneFit) -> Result<(CircleFit, f64)> {
    if points.len() < 3 {
        return Err(FitError::TooFewPoints { needed: 3, got: points.len() });
    }
    let basis = plane_basis(plane.normal);
    let projected = project_to_plane(points, plane);
    let coords: Vec<Vec2> = projected
        .iter()
        .map(|&p| to_plane_coords(p, plane.centroid, basis))
        .collect();
    let moments = circle_moments(&coords)?;
    let det_ratio = planar_det_ratio(&moments.q);
    let local = solve_center(&moments.q, moments.l)?;
    let centered: Vec<Vec2> = coords.iter().map(|&p| p - moments.shift).collect();
    let radius = radius_from_center(&centered, local);
    let rms_sq = circle_objective(&centered, local, radius);
    let center = lift(local + moments.shift, plane.centroid, basis);
    Ok((CircleFit { center, radius, rms_sq, plane: *plane, basis }, det_ratio))
}

/// Full pipeline: plane, projection, collinearity decision, then either the
/// circle or the line.
pub fn fit_circle(points: &[Point3], options: &CircleOptions) -> Result<CircleOrLine> {
    options.validate()?;
    check_points(points)?;
    if points.len() < 3 {
        return Err(FitError::TooFewPoints { needed: 3, got: points.len() });
    }
    let plane = fit_plane(points, &options.plane_options())?;
    let [l1, l2, l3] = plane.eigen.values;
    let mut diagnostics = Diagnostics {
        tau_line: options.tau_line,
        tau_unique: options.tau_unique,
        lambda1_over_lambda3: l1.max(0.0) / l3,
        lambda2_over_lambda3: l2.max(0.0) / l3,
        planar_det_ratio: None,
        decision: Decision::Circle,
    };

    if l2 <= options.tau_line * l3 {
        diagnostics.decision = Decision::LineEigenRatio;
        let line = fit_line(points, &plane.eigen)?;
        return Ok(CircleOrLine { shape: Shape::Line(line), plane, diagnostics });
    }

    match circle_on_plane_inner(points, &plane) {
        Ok((circle, det_ratio)) => {
            diagnostics.planar_det_ratio = Some(det_ratio);
            Ok(CircleOrLine { shape: Shape::Circle(circle), plane, diagnostics })
        }
        Err(FitError::DegenerateSystem { .. }) => {
            diagnostics.decision = Decision::LineSingularForm;
            let line = fit_line(points, &plane.eigen)?;
            Ok(CircleOrLine { shape: Shape::Line(line), plane, diagnostics })
        }
        Err(e) => Err(e),
    }
}
