//! The versioned JSON fit report.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::{FitError, Result};

pub const SCHEMA_VERSION: &str = "1";

/// A real serialized with 17 significant digits, which round-trips any `f64`.
/// Non-finite values are written as `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Real(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN)))
    }
}

impl From<f64> for Real {
    fn from(x: f64) -> Self {
        Real(x)
    }
}

pub fn reals<const N: usize>(a: [f64; N]) -> [Real; N] {
    a.map(Real)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSummary {
    pub n: usize,
    pub bbox_min: [Real; 3],
    pub bbox_max: [Real; 3],
    pub centroid: [Real; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneSection {
    pub normal: [Real; 3],
    pub offset: Real,
    pub rms_sq: Real,
    pub eigenvalues: [Real; 3],
    pub unique: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "lowercase")]
pub enum ResultSection {
    Circle {
        center: [Real; 3],
        radius: Real,
        rms_sq: Real,
        basis: [[Real; 3]; 2],
    },
    Line {
        anchor: [Real; 3],
        direction: [Real; 3],
        lambda_pair: [Real; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsSection {
    pub mode: String,
    pub decision: String,
    pub tau_line: Real,
    pub tau_unique: Real,
    pub lambda1_over_lambda3: Real,
    pub lambda2_over_lambda3: Real,
    /// `(λ₂ − λ₁) / max(λ₃, tr Q)`, compared against `tau_unique`.
    pub eigen_gap_ratio: Real,
    pub line_branch: bool,
    pub planar_det_ratio: Option<Real>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub schema_version: String,
    pub input: InputSummary,
    pub plane: PlaneSection,
    pub result: Option<ResultSection>,
    pub diagnostics: DiagnosticsSection,
}

impl FitReport {
    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| FitError::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<FitReport> {
        serde_json::from_str(s).map_err(|e| FitError::Parse {
            row: e.line(),
            column: e.column(),
            reason: e.to_string(),
        })
    }
}
