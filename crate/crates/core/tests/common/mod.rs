#![allow(dead_code)]

use geomfit::{Point3, Vec2, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rotation matrix (rows) from a uniformly random unit quaternion.
pub fn random_rotation(rng: &mut impl Rng) -> [[f64; 3]; 3] {
    let (u1, u2, u3): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
    let tau = std::f64::consts::TAU;
    let w = (1.0 - u1).sqrt() * (tau * u2).sin();
    let x = (1.0 - u1).sqrt() * (tau * u2).cos();
    let y = u1.sqrt() * (tau * u3).sin();
    let z = u1.sqrt() * (tau * u3).cos();
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

pub fn rotate(r: &[[f64; 3]; 3], v: Vec3) -> Vec3 {
    Vec3::new(
        r[0][0] * v.x + r[0][1] * v.y + r[0][2] * v.z,
        r[1][0] * v.x + r[1][1] * v.y + r[1][2] * v.z,
        r[2][0] * v.x + r[2][1] * v.y + r[2][2] * v.z,
    )
}

pub fn random_unit(rng: &mut impl Rng) -> Vec3 {
    loop {
        let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

pub fn random_cloud(rng: &mut impl Rng, n: usize, half_width: f64) -> Vec<Point3> {
    (0..n)
        .map(|_| {
            Vec3::new(
                rng.gen_range(-half_width..half_width),
                rng.gen_range(-half_width..half_width),
                rng.gen_range(-half_width..half_width),
            )
        })
        .collect()
}

pub fn random_cloud2(rng: &mut impl Rng, n: usize, half_width: f64) -> Vec<Vec2> {
    (0..n)
        .map(|_| Vec2::new(rng.gen_range(-half_width..half_width), rng.gen_range(-half_width..half_width)))
        .collect()
}

/// RMS distance of the points from their centroid.
pub fn scale(points: &[Point3]) -> f64 {
    let n = points.len() as f64;
    let c = points.iter().fold(Vec3::ZERO, |a, &p| a + p) / n;
    (points.iter().map(|&p| (p - c).norm_sq()).sum::<f64>() / n).sqrt()
}

pub fn scale2(points: &[Vec2]) -> f64 {
    let n = points.len() as f64;
    let c = points.iter().fold(Vec2::ZERO, |a, &p| a + p) / n;
    (points.iter().map(|&p| (p - c).norm_sq()).sum::<f64>() / n).sqrt()
}

/// Circumcenter of a triangle in 3D by the standard barycentric formula.
pub fn circumcenter(a: Vec3, b: Vec3, c: Vec3) -> Vec3 {
    let (ab, ac) = (b - a, c - a);
    let n = ab.cross(ac);
    let num = (n.cross(ab) * ac.norm_sq() + ac.cross(n) * ab.norm_sq()) / (2.0 * n.norm_sq());
    a + num
}

/// Points on a circle with the given frame, equally spaced from `phase`,
/// with optional radial noise drawn from `rng`.
pub fn circle_points(
    center: Vec3,
    normal: Vec3,
    radius: f64,
    n: usize,
    phase: f64,
    sigma: f64,
    rng: &mut impl Rng,
) -> Vec<Point3> {
    let helper = if normal.x.abs() < 0.9 { Vec3::X } else { Vec3::Y };
    let u = normal.cross(helper).normalized();
    let v = normal.cross(u);
    (0..n)
        .map(|k| {
            let t = phase + std::f64::consts::TAU * k as f64 / n as f64;
            let g: f64 = rng.sample(rand_distr::StandardNormal);
            center + (u * t.cos() + v * t.sin()) * (radius + sigma * g)
        })
        .collect()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    let m = a.abs().max(b.abs());
    if m == 0.0 {
        0.0
    } else {
        d / m
    }
}
