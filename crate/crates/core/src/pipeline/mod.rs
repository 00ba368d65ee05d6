//! End-to-end fitting: options, report assembly and the oracle runners used
//! by the command-line tool.

pub mod io;
pub mod oracle;
pub mod report;
pub mod synth;

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circle_fit::{circle_on_plane, fit_circle, fit_line, CircleOptions, Decision, Shape};
use crate::error::{FitError, Result};
use crate::linalg3::{plane_basis, Point3, Vec2};
use crate::plane_fit::{fit_plane, PlaneFit};
use report::{
    reals, DiagnosticsSection, FitReport, InputSummary, PlaneSection, Real, ResultSection,
    SCHEMA_VERSION,
};

/// Environment variable overriding the circle oracle's restart seed.
pub const SEED_ENV: &str = "GEOMFIT_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Circle, or line when the data are (near-)collinear.
    #[default]
    Auto,
    Plane,
    /// Circle even if the eigenvalue ratio suggests a line.
    Circle,
    Line,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Auto => "auto",
            Mode::Plane => "plane",
            Mode::Circle => "circle",
            Mode::Line => "line",
        }
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "auto" => Ok(Mode::Auto),
            "plane" => Ok(Mode::Plane),
            "circle" => Ok(Mode::Circle),
            "line" => Ok(Mode::Line),
            other => Err(format!("unknown mode `{other}` (expected auto, plane, circle or line)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FitOptions {
    #[serde(default)]
    pub mode: Mode,
    #[serde(flatten)]
    pub thresholds: CircleOptionsDef,
}

/// Serializable mirror of [`CircleOptions`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleOptionsDef {
    #[serde(default = "default_tau_line")]
    pub tau_line: f64,
    #[serde(default = "default_tau_unique")]
    pub tau_unique: f64,
}

fn default_tau_line() -> f64 {
    crate::circle_fit::DEFAULT_TAU_LINE
}

fn default_tau_unique() -> f64 {
    crate::plane_fit::DEFAULT_TAU_UNIQUE
}

impl Default for CircleOptionsDef {
    fn default() -> Self {
        let o = CircleOptions::default();
        CircleOptionsDef { tau_line: o.tau_line, tau_unique: o.tau_unique }
    }
}

impl FitOptions {
    pub fn new(mode: Mode, tau_line: f64, tau_unique: f64) -> Self {
        FitOptions { mode, thresholds: CircleOptionsDef { tau_line, tau_unique } }
    }

    pub fn circle_options(&self) -> CircleOptions {
        CircleOptions { tau_line: self.thresholds.tau_line, tau_unique: self.thresholds.tau_unique }
    }
}

fn input_summary(points: &[Point3], plane: &PlaneFit) -> InputSummary {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in points {
        for (k, v) in p.to_array().into_iter().enumerate() {
            lo[k] = lo[k].min(v);
            hi[k] = hi[k].max(v);
        }
    }
    InputSummary {
        n: points.len(),
        bbox_min: reals(lo),
        bbox_max: reals(hi),
        centroid: reals(plane.centroid.to_array()),
    }
}

fn plane_section(plane: &PlaneFit) -> PlaneSection {
    PlaneSection {
        normal: reals(plane.normal.to_array()),
        offset: Real(plane.offset),
        rms_sq: Real(plane.rms_sq),
        eigenvalues: reals(plane.eigenvalues()),
        unique: plane.unique,
    }
}

fn diagnostics(
    options: &FitOptions,
    plane: &PlaneFit,
    decision: &str,
    line_branch: bool,
    planar_det_ratio: Option<f64>,
) -> DiagnosticsSection {
    let [l1, l2, l3] = plane.eigenvalues();
    let spread: f64 = plane.eigenvalues().iter().sum();
    DiagnosticsSection {
        mode: options.mode.as_str().to_string(),
        decision: decision.to_string(),
        tau_line: Real(options.thresholds.tau_line),
        tau_unique: Real(options.thresholds.tau_unique),
        lambda1_over_lambda3: Real(l1.max(0.0) / l3),
        lambda2_over_lambda3: Real(l2.max(0.0) / l3),
        eigen_gap_ratio: Real((l2 - l1) / l3.max(spread)),
        line_branch,
        planar_det_ratio: planar_det_ratio.map(Real),
    }
}

fn circle_section(c: &crate::CircleFit) -> ResultSection {
    ResultSection::Circle {
        center: reals(c.center.to_array()),
        radius: Real(c.radius),
        rms_sq: Real(c.rms_sq),
        basis: [reals(c.basis.0.to_array()), reals(c.basis.1.to_array())],
    }
}

fn line_section(l: &crate::LineFit) -> ResultSection {
    ResultSection::Line {
        anchor: reals(l.anchor.to_array()),
        direction: reals(l.direction.to_array()),
        lambda_pair: reals(l.rms_sq_plane_pair),
    }
}

fn det_ratio_of(points: &[Point3], plane: &PlaneFit) -> f64 {
    let basis = plane_basis(plane.normal);
    let coords: Vec<Vec2> = points
        .iter()
        .map(|&p| {
            let d = p - plane.centroid;
            Vec2::new(d.dot(basis.0), d.dot(basis.1))
        })
        .collect();
    match crate::circle_fit::circle_moments(&coords) {
        Ok(m) => {
            let f = m.q.frobenius_norm();
            if f > 0.0 {
                m.q.det().abs() / (f * f)
            } else {
                0.0
            }
        }
        Err(_) => 0.0,
    }
}

/// Fits `points` according to `options.mode` and assembles the report.
pub fn run_fit(points: &[Point3], options: &FitOptions) -> Result<FitReport> {
    let circle_opts = options.circle_options();
    circle_opts.validate()?;
    if points.len() < 3 {
        if points.is_empty() {
            return Err(FitError::EmptyInput);
        }
        return Err(FitError::TooFewPoints { needed: 3, got: points.len() });
    }

    let (plane, result, diag) = match options.mode {
        Mode::Auto => {
            let out = fit_circle(points, &circle_opts)?;
            let line_branch = out.diagnostics.decision != Decision::Circle;
            let result = match &out.shape {
                Shape::Circle(c) => circle_section(c),
                Shape::Line(l) => line_section(l),
            };
            let diag = diagnostics(
                options,
                &out.plane,
                out.diagnostics.decision.as_str(),
                line_branch,
                out.diagnostics.planar_det_ratio,
            );
            (out.plane, Some(result), diag)
        }
        Mode::Plane => {
            let plane = fit_plane(points, &circle_opts.plane_options())?;
            let diag = diagnostics(options, &plane, "plane_only", false, None);
            (plane, None, diag)
        }
        Mode::Circle => {
            let plane = fit_plane(points, &circle_opts.plane_options())?;
            let circle = circle_on_plane(points, &plane)?;
            let ratio = det_ratio_of(points, &plane);
            let diag = diagnostics(options, &plane, "forced_circle", false, Some(ratio));
            (plane, Some(circle_section(&circle)), diag)
        }
        Mode::Line => {
            let plane = fit_plane(points, &circle_opts.plane_options())?;
            let line = fit_line(points, &plane.eigen)?;
            let diag = diagnostics(options, &plane, "forced_line", true, None);
            (plane, Some(line_section(&line)), diag)
        }
    };

    Ok(FitReport {
        schema_version: SCHEMA_VERSION.to_string(),
        input: input_summary(points, &plane),
        plane: plane_section(&plane),
        result,
        diagnostics: diag,
    })
}

/// Output of the `oracle` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "target", rename_all = "lowercase")]
pub enum OracleReport {
    Plane {
        normal: [Real; 3],
        offset: Real,
        objective: Real,
        closed_form_rms_sq: Real,
    },
    Circle {
        center: [Real; 3],
        radius: Real,
        objective: Real,
        closed_form_rms_sq: Real,
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleTarget {
    Plane,
    Circle,
}

impl FromStr for OracleTarget {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "plane" => Ok(OracleTarget::Plane),
            "circle" => Ok(OracleTarget::Circle),
            other => Err(format!("unknown target `{other}` (expected plane or circle)")),
        }
    }
}

/// Seed for the circle oracle: `GEOMFIT_SEED` if set, else 0.
pub fn oracle_seed_from_env() -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| FitError::InvalidOptions(format!("{SEED_ENV} must be an unsigned integer, got `{s}`"))),
        Err(_) => Ok(0),
    }
}

/// Runs a brute-force oracle next to the closed-form fit.
///
/// The circle oracle works on the in-plane coordinates of the closed-form
/// plane, so it checks the circle stage in isolation.
pub fn run_oracle(points: &[Point3], target: OracleTarget, seed: u64) -> Result<OracleReport> {
    let plane = fit_plane(points, &Default::default())?;
    match target {
        OracleTarget::Plane => {
            let o = oracle::oracle_plane(points)?;
            Ok(OracleReport::Plane {
                normal: reals(o.normal.to_array()),
                offset: Real(o.offset),
                objective: Real(o.objective),
                closed_form_rms_sq: Real(plane.rms_sq),
            })
        }
        OracleTarget::Circle => {
            let circle = circle_on_plane(points, &plane)?;
            let coords: Vec<Vec2> = points.iter().map(|&p| circle.plane_coords(p)).collect();
            let o = oracle::oracle_circle(&coords, seed)?;
            Ok(OracleReport::Circle {
                center: reals(circle.lift(o.center).to_array()),
                radius: Real(o.radius),
                objective: Real(o.objective),
                closed_form_rms_sq: Real(circle.rms_sq),
                seed,
            })
        }
    }
}
