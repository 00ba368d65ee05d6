//! Small fixed-size linear algebra: 2/3-vectors, symmetric 2×2 and 3×3
//! forms, a cyclic Jacobi eigen-solver and a guarded 2×2 solve.
//!
//! Nothing here allocates. All routines are deterministic for identical
//! input, which the golden-report tests rely on.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use crate::error::{FitError, Result};

/// Relative determinant threshold below which a 2×2 form counts as singular.
pub const EPS_RANK: f64 = 1e-10;

/// Jacobi stops once the off-diagonal Frobenius norm drops below this
/// fraction of the input Frobenius norm.
pub const JACOBI_TOL: f64 = 1e-14;

/// Sweep budget for [`eigen_sym3`].
pub const JACOBI_MAX_SWEEPS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// A radius-vector of an input point.
pub type Point3 = Vec3;

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };
    pub const X: Vec3 = Vec3 { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: Vec3 = Vec3 { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 1.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Unit vector in the same direction. The zero vector is returned unchanged.
    pub fn normalized(self) -> Vec3 {
        let n = self.norm();
        if n > 0.0 {
            self / n
        } else {
            self
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn component(self, axis: usize) -> f64 {
        match axis {
            0 => self.x,
            1 => self.y,
            _ => self.z,
        }
    }

    pub fn axis(axis: usize) -> Vec3 {
        match axis {
            0 => Vec3::X,
            1 => Vec3::Y,
            _ => Vec3::Z,
        }
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, k: f64) -> Vec3 {
        Vec3::new(self.x / k, self.y / k, self.z / k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn to_array(self) -> [f64; 2] {
        [self.x, self.y]
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from(a: [f64; 2]) -> Self {
        Vec2::new(a[0], a[1])
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    fn div(self, k: f64) -> Vec2 {
        Vec2::new(self.x / k, self.y / k)
    }
}

/// Symmetric 3×3 matrix stored by its six independent entries.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SymForm3 {
    pub xx: f64,
    pub xy: f64,
    pub xz: f64,
    pub yy: f64,
    pub yz: f64,
    pub zz: f64,
}

impl SymForm3 {
    pub const ZERO: SymForm3 = SymForm3 { xx: 0.0, xy: 0.0, xz: 0.0, yy: 0.0, yz: 0.0, zz: 0.0 };

    pub const IDENTITY: SymForm3 = SymForm3 { xx: 1.0, xy: 0.0, xz: 0.0, yy: 1.0, yz: 0.0, zz: 1.0 };

    pub fn diag(a: f64, b: f64, c: f64) -> Self {
        SymForm3 { xx: a, yy: b, zz: c, ..Self::ZERO }
    }

    /// `v vᵀ`
    pub fn outer(v: Vec3) -> Self {
        SymForm3 {
            xx: v.x * v.x,
            xy: v.x * v.y,
            xz: v.x * v.z,
            yy: v.y * v.y,
            yz: v.y * v.z,
            zz: v.z * v.z,
        }
    }

    /// Builds the form from a full matrix, reading only the upper triangle.
    pub fn from_rows(m: [[f64; 3]; 3]) -> Self {
        SymForm3 { xx: m[0][0], xy: m[0][1], xz: m[0][2], yy: m[1][1], yz: m[1][2], zz: m[2][2] }
    }

    pub fn to_rows(self) -> [[f64; 3]; 3] {
        [
            [self.xx, self.xy, self.xz],
            [self.xy, self.yy, self.yz],
            [self.xz, self.yz, self.zz],
        ]
    }

    /// `A v`
    pub fn apply(self, v: Vec3) -> Vec3 {
        Vec3::new(
            self.xx * v.x + self.xy * v.y + self.xz * v.z,
            self.xy * v.x + self.yy * v.y + self.yz * v.z,
            self.xz * v.x + self.yz * v.y + self.zz * v.z,
        )
    }

    /// The quadratic form `vᵀ A v`.
    pub fn value(self, v: Vec3) -> f64 {
        v.dot(self.apply(v))
    }

    /// The bilinear form `uᵀ A v`.
    pub fn bilinear(self, u: Vec3, v: Vec3) -> f64 {
        u.dot(self.apply(v))
    }

    pub fn trace(self) -> f64 {
        self.xx + self.yy + self.zz
    }

    pub fn det(self) -> f64 {
        self.xx * (self.yy * self.zz - self.yz * self.yz)
            - self.xy * (self.xy * self.zz - self.yz * self.xz)
            + self.xz * (self.xy * self.yz - self.yy * self.xz)
    }

    pub fn frobenius_norm(self) -> f64 {
        (self.xx * self.xx
            + self.yy * self.yy
            + self.zz * self.zz
            + 2.0 * (self.xy * self.xy + self.xz * self.xz + self.yz * self.yz))
            .sqrt()
    }

    pub fn is_finite(self) -> bool {
        [self.xx, self.xy, self.xz, self.yy, self.yz, self.zz].iter().all(|v| v.is_finite())
    }
}

impl Add for SymForm3 {
    type Output = SymForm3;
    fn add(self, o: SymForm3) -> SymForm3 {
        SymForm3 {
            xx: self.xx + o.xx,
            xy: self.xy + o.xy,
            xz: self.xz + o.xz,
            yy: self.yy + o.yy,
            yz: self.yz + o.yz,
            zz: self.zz + o.zz,
        }
    }
}

impl AddAssign for SymForm3 {
    fn add_assign(&mut self, o: SymForm3) {
        *self = *self + o;
    }
}

impl Sub for SymForm3 {
    type Output = SymForm3;
    fn sub(self, o: SymForm3) -> SymForm3 {
        self + o * -1.0
    }
}

impl Mul<f64> for SymForm3 {
    type Output = SymForm3;
    fn mul(self, k: f64) -> SymForm3 {
        SymForm3 {
            xx: self.xx * k,
            xy: self.xy * k,
            xz: self.xz * k,
            yy: self.yy * k,
            yz: self.yz * k,
            zz: self.zz * k,
        }
    }
}

/// Symmetric 2×2 matrix `[[xx, xy], [xy, yy]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SymForm2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl SymForm2 {
    pub const ZERO: SymForm2 = SymForm2 { xx: 0.0, xy: 0.0, yy: 0.0 };

    pub const IDENTITY: SymForm2 = SymForm2 { xx: 1.0, xy: 0.0, yy: 1.0 };

    pub fn new(xx: f64, xy: f64, yy: f64) -> Self {
        SymForm2 { xx, xy, yy }
    }

    pub fn diag(a: f64, b: f64) -> Self {
        SymForm2 { xx: a, xy: 0.0, yy: b }
    }

    pub fn outer(v: Vec2) -> Self {
        SymForm2 { xx: v.x * v.x, xy: v.x * v.y, yy: v.y * v.y }
    }

    pub fn apply(self, v: Vec2) -> Vec2 {
        Vec2::new(self.xx * v.x + self.xy * v.y, self.xy * v.x + self.yy * v.y)
    }

    pub fn value(self, v: Vec2) -> f64 {
        v.dot(self.apply(v))
    }

    pub fn trace(self) -> f64 {
        self.xx + self.yy
    }

    pub fn det(self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    pub fn frobenius_norm(self) -> f64 {
        (self.xx * self.xx + self.yy * self.yy + 2.0 * self.xy * self.xy).sqrt()
    }
}

impl Add for SymForm2 {
    type Output = SymForm2;
    fn add(self, o: SymForm2) -> SymForm2 {
        SymForm2::new(self.xx + o.xx, self.xy + o.xy, self.yy + o.yy)
    }
}

impl AddAssign for SymForm2 {
    fn add_assign(&mut self, o: SymForm2) {
        *self = *self + o;
    }
}

impl Mul<f64> for SymForm2 {
    type Output = SymForm2;
    fn mul(self, k: f64) -> SymForm2 {
        SymForm2::new(self.xx * k, self.xy * k, self.yy * k)
    }
}

/// Eigen-decomposition of a symmetric 3×3 form.
///
/// `values` are ascending; `vectors[k]` belongs to `values[k]`. The frame is
/// orthonormal and right-handed: `vectors[2] == vectors[0] × vectors[1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenDecomp3 {
    pub values: [f64; 3],
    pub vectors: [Vec3; 3],
}

impl EigenDecomp3 {
    pub fn min_value(&self) -> f64 {
        self.values[0]
    }

    pub fn max_value(&self) -> f64 {
        self.values[2]
    }
}

fn off_diagonal_norm(a: &[[f64; 3]; 3]) -> f64 {
    (2.0 * (a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2])).sqrt()
}

/// Flips `v` so that its component of largest magnitude is positive.
/// Ties go to the lowest axis index.
fn canonical_sign(v: Vec3) -> Vec3 {
    let mut best = 0;
    for axis in 1..3 {
        if v.component(axis).abs() > v.component(best).abs() {
            best = axis;
        }
    }
    if v.component(best) < 0.0 {
        -v
    } else {
        v
    }
}

/// Cyclic Jacobi eigen-decomposition of a symmetric 3×3 form.
///
/// Rotations are applied in the fixed order (0,1), (0,2), (1,2). Eigenvalues
/// are sorted ascending with a stable sort, so equal eigenvalues keep their
/// diagonal order. The first two eigenvectors get the canonical sign (largest
/// component positive); the third is their cross product.
pub fn eigen_sym3(form: &SymForm3) -> Result<EigenDecomp3> {
    let mut a = form.to_rows();
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let target = JACOBI_TOL * form.frobenius_norm();

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let apq = a[p][q];
            if apq == 0.0 {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
            let t = if theta.abs() > 1e150 {
                0.5 / theta
            } else {
                theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
            };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            for row in a.iter_mut() {
                let (akp, akq) = (row[p], row[q]);
                row[p] = c * akp - s * akq;
                row[q] = s * akp + c * akq;
            }
            let (rp, rq) = (a[p], a[q]);
            for k in 0..3 {
                a[p][k] = c * rp[k] - s * rq[k];
                a[q][k] = s * rp[k] + c * rq[k];
            }
            a[p][q] = 0.0;
            a[q][p] = 0.0;
            for row in v.iter_mut() {
                let (vkp, vkq) = (row[p], row[q]);
                row[p] = c * vkp - s * vkq;
                row[q] = s * vkp + c * vkq;
            }
        }
    }
    if !converged {
        let off_norm = off_diagonal_norm(&a);
        if off_norm > target {
            return Err(FitError::EigenNotConverged { off_norm });
        }
    }

    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let column = |j: usize| Vec3::new(v[0][j], v[1][j], v[2][j]);

    let v1 = canonical_sign(column(order[0]));
    let v2 = canonical_sign(column(order[1]));
    let v3 = v1.cross(v2).normalized();
    Ok(EigenDecomp3 {
        values: [a[order[0]][order[0]], a[order[1]][order[1]], a[order[2]][order[2]]],
        vectors: [v1, v2, v3],
    })
}

/// Solves `A x = b` for a symmetric 2×2 `A` by Cramer's rule.
///
/// Fails with [`FitError::DegenerateSystem`] when
/// `|det A| <= EPS_RANK * ‖A‖²_F`.
#[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN determinants are singular
pub fn solve_sym2(a: &SymForm2, b: Vec2) -> Result<Vec2> {
    let det = a.det();
    let norm = a.frobenius_norm();
    let threshold = EPS_RANK * norm * norm;
    if !(det.abs() > threshold) {
        return Err(FitError::DegenerateSystem { det, threshold });
    }
    Ok(Vec2::new((a.yy * b.x - a.xy * b.y) / det, (a.xx * b.y - a.xy * b.x) / det))
}

/// Orthonormal in-plane frame `(e1, e2)` for a unit normal `n`, with
/// `e1 × e2 = n`.
///
/// `e1` is the projection onto the plane of the global axis least aligned
/// with `n` (lowest index on ties), normalized.
pub fn plane_basis(n: Vec3) -> (Vec3, Vec3) {
    let mut axis = 0;
    for k in 1..3 {
        if n.component(k).abs() < n.component(axis).abs() {
            axis = k;
        }
    }
    let a = Vec3::axis(axis);
    let e1 = (a - n * n.dot(a)).normalized();
    let e2 = n.cross(e1);
    (e1, e2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_vec_close(a: Vec3, b: Vec3, tol: f64) {
        assert!((a - b).norm() <= tol, "{a:?} vs {b:?}");
    }

    /// Rotation matrix from a (not necessarily unit) quaternion.
    fn rotation(w: f64, x: f64, y: f64, z: f64) -> [[f64; 3]; 3] {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        let (w, x, y, z) = (w / n, x / n, y / n, z / n);
        [
            [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
            [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
            [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
        ]
    }

    #[test]
    fn identity_decomposes_to_standard_basis() {
        let e = eigen_sym3(&SymForm3::IDENTITY).unwrap();
        assert_eq!(e.values, [1.0, 1.0, 1.0]);
        assert_eq!(e.vectors, [Vec3::X, Vec3::Y, Vec3::Z]);
    }

    #[test]
    fn diagonal_is_sorted() {
        let e = eigen_sym3(&SymForm3::diag(3.0, 1.0, 2.0)).unwrap();
        assert_eq!(e.values, [1.0, 2.0, 3.0]);
        assert_eq!(e.vectors, [Vec3::Y, Vec3::Z, Vec3::X]);
    }

    #[test]
    fn rotated_diagonal_round_trips() {
        // A = R D Rᵀ has eigenvectors equal to the columns of R.
        let r = rotation(0.9, 0.3, -0.2, 0.4);
        let d = [0.0, 1.0, 4.0];
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = (0..3).map(|k| r[i][k] * d[k] * r[j][k]).sum();
            }
        }
        let e = eigen_sym3(&SymForm3::from_rows(m)).unwrap();
        for k in 0..3 {
            assert!((e.values[k] - d[k]).abs() <= 1e-12, "{:?}", e.values);
            let axis = Vec3::new(r[0][k], r[1][k], r[2][k]);
            assert!((e.vectors[k].dot(axis).abs() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn zero_form_is_fine() {
        let e = eigen_sym3(&SymForm3::ZERO).unwrap();
        assert_eq!(e.values, [0.0; 3]);
    }

    #[test]
    fn frame_is_right_handed() {
        let f = SymForm3 { xx: 2.0, xy: -1.0, xz: 0.5, yy: 3.0, yz: 0.25, zz: -1.0 };
        let e = eigen_sym3(&f).unwrap();
        assert_vec_close(e.vectors[0].cross(e.vectors[1]), e.vectors[2], 1e-14);
    }

    #[test]
    fn solve_sym2_examples() {
        assert_eq!(solve_sym2(&SymForm2::IDENTITY, Vec2::new(3.0, 4.0)).unwrap(), Vec2::new(3.0, 4.0));
        assert_eq!(solve_sym2(&SymForm2::diag(2.0, 4.0), Vec2::new(2.0, 4.0)).unwrap(), Vec2::new(1.0, 1.0));
        let x = solve_sym2(&SymForm2::new(2.0, 1.0, 2.0), Vec2::new(3.0, 3.0)).unwrap();
        assert!((x - Vec2::new(1.0, 1.0)).norm() <= 1e-15);
    }

    #[test]
    fn solve_sym2_rejects_singular() {
        let err = solve_sym2(&SymForm2::new(1.0, 1.0, 1.0), Vec2::new(1.0, 0.0)).unwrap_err();
        assert!(matches!(err, FitError::DegenerateSystem { .. }));
        assert!(solve_sym2(&SymForm2::ZERO, Vec2::ZERO).is_err());
    }

    #[test]
    fn plane_basis_axis_aligned() {
        assert_eq!(plane_basis(Vec3::Z), (Vec3::X, Vec3::Y));
        assert_eq!(plane_basis(Vec3::X), (Vec3::Y, Vec3::Z));
    }

    #[test]
    fn plane_basis_diagonal_normal() {
        let n = Vec3::new(1.0, 1.0, 1.0).normalized();
        let (e1, e2) = plane_basis(n);
        assert!(e1.dot(n).abs() <= 1e-12);
        assert!(e2.dot(n).abs() <= 1e-12);
        assert!((e1.norm() - 1.0).abs() <= 1e-12);
        assert!((e2.norm() - 1.0).abs() <= 1e-12);
        assert_vec_close(e1.cross(e2), n, 1e-12);
    }

    #[test]
    fn form_identities() {
        let f = SymForm3 { xx: 1.0, xy: 2.0, xz: 3.0, yy: 4.0, yz: 5.0, zz: 6.0 };
        assert_eq!(f.trace(), 11.0);
        // det [[1,2,3],[2,4,5],[3,5,6]] = -1
        assert!((f.det() + 1.0).abs() < 1e-12);
        let v = Vec3::new(1.0, -1.0, 2.0);
        assert_eq!(f.value(v), f.bilinear(v, v));
    }
}
