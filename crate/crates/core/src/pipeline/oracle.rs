//! Brute-force reference minimizers for the plane and circle objectives.
//!
//! These deliberately share no code with the closed-form fits: the plane
//! oracle grid-searches normal directions and the circle oracle runs a
//! derivative-free simplex search. They exist so that anyone can re-check a
//! fit from the command line.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{FitError, Result};
use crate::linalg3::{Point3, Vec2, Vec3};

/// Directions in the coarse hemisphere grid.
pub const PLANE_GRID_DIRECTIONS: usize = 10_000;
/// Refinement rounds; each shrinks the search window by 10×.
pub const PLANE_REFINE_ROUNDS: usize = 6;
const PLANE_REFINE_STEPS: i32 = 10;
const PLANE_INITIAL_WINDOW: f64 = 0.05;

/// Nelder–Mead restarts for the circle oracle.
pub const CIRCLE_RESTARTS: usize = 20;
const SIMPLEX_MAX_ITERS: usize = 5_000;
const SIMPLEX_POLISH_ROUNDS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneOracle {
    pub normal: Vec3,
    pub offset: f64,
    pub objective: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleOracle {
    pub center: Vec2,
    pub radius: f64,
    pub objective: f64,
}

/// Mean squared distance to the plane with normal `n` through the mean
/// projection (the best offset for that normal).
fn plane_cost(points: &[Point3], n: Vec3) -> (f64, f64) {
    let inv = 1.0 / points.len() as f64;
    let offset = points.iter().map(|p| p.dot(n)).sum::<f64>() * inv;
    let cost = points
        .iter()
        .map(|p| {
            let d = p.dot(n) - offset;
            d * d
        })
        .sum::<f64>()
        * inv;
    (cost, offset)
}

fn tangent_frame(n: Vec3) -> (Vec3, Vec3) {
    let helper = if n.x.abs() < 0.9 { Vec3::X } else { Vec3::Y };
    let t1 = n.cross(helper).normalized();
    (t1, n.cross(t1))
}

/// Grid search over unit normals on the upper hemisphere, then repeated
/// local grids around the incumbent.
pub fn oracle_plane(points: &[Point3]) -> Result<PlaneOracle> {
    if points.len() < 3 {
        return Err(FitError::TooFewPoints { needed: 3, got: points.len() });
    }
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut best_n = Vec3::Z;
    let (mut best, mut best_offset) = plane_cost(points, best_n);
    for i in 0..PLANE_GRID_DIRECTIONS {
        let z = 1.0 - (i as f64 + 0.5) / PLANE_GRID_DIRECTIONS as f64;
        let r = (1.0 - z * z).sqrt();
        let phi = golden * i as f64;
        let n = Vec3::new(r * phi.cos(), r * phi.sin(), z);
        let (cost, offset) = plane_cost(points, n);
        if cost < best {
            (best, best_offset, best_n) = (cost, offset, n);
        }
    }

    let mut window = PLANE_INITIAL_WINDOW;
    for _ in 0..PLANE_REFINE_ROUNDS {
        let (t1, t2) = tangent_frame(best_n);
        let center = best_n;
        let step = window / PLANE_REFINE_STEPS as f64;
        for i in -PLANE_REFINE_STEPS..=PLANE_REFINE_STEPS {
            for j in -PLANE_REFINE_STEPS..=PLANE_REFINE_STEPS {
                let n = (center + t1 * (i as f64 * step) + t2 * (j as f64 * step)).normalized();
                let (cost, offset) = plane_cost(points, n);
                if cost < best {
                    (best, best_offset, best_n) = (cost, offset, n);
                }
            }
        }
        window *= 0.1;
    }
    Ok(PlaneOracle { normal: best_n, offset: best_offset, objective: best })
}

fn circle_cost(points: &[Vec2], x: &[f64; 3]) -> f64 {
    let rho2 = x[2].max(0.0);
    points
        .iter()
        .map(|p| {
            let (dx, dy) = (p.x - x[0], p.y - x[1]);
            let d = dx * dx + dy * dy - rho2;
            d * d
        })
        .sum::<f64>()
        / points.len() as f64
}

/// Plain Nelder–Mead (reflection 1, expansion 2, contraction ½, shrink ½).
fn nelder_mead<F: Fn(&[f64; 3]) -> f64>(f: F, start: [f64; 3], steps: [f64; 3]) -> ([f64; 3], f64) {
    let mut simplex: Vec<([f64; 3], f64)> = Vec::with_capacity(4);
    simplex.push((start, f(&start)));
    for k in 0..3 {
        let mut x = start;
        x[k] += steps[k];
        simplex.push((x, f(&x)));
    }
    let lerp = |a: &[f64; 3], b: &[f64; 3], t: f64| -> [f64; 3] {
        [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])]
    };

    for _ in 0..SIMPLEX_MAX_ITERS {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (lo, hi) = (simplex[0].1, simplex[3].1);
        if hi - lo <= 1e-300 + 1e-15 * lo.abs() {
            break;
        }
        let mut centroid = [0.0; 3];
        for (x, _) in &simplex[..3] {
            for k in 0..3 {
                centroid[k] += x[k] / 3.0;
            }
        }
        let worst = simplex[3].0;
        let reflected = lerp(&centroid, &worst, -1.0);
        let fr = f(&reflected);
        if fr < simplex[0].1 {
            let expanded = lerp(&centroid, &worst, -2.0);
            let fe = f(&expanded);
            simplex[3] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[2].1 {
            simplex[3] = (reflected, fr);
        } else {
            let contracted = if fr < simplex[3].1 {
                lerp(&centroid, &reflected, 0.5)
            } else {
                lerp(&centroid, &worst, 0.5)
            };
            let fc = f(&contracted);
            if fc < fr.min(simplex[3].1) {
                simplex[3] = (contracted, fc);
            } else {
                let best = simplex[0].0;
                for entry in simplex.iter_mut().skip(1) {
                    let x = lerp(&best, &entry.0, 0.5);
                    *entry = (x, f(&x));
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex[0]
}

/// Derivative-free minimization of the mean squared algebraic deflection
/// over `(center, ρ²)`, from [`CIRCLE_RESTARTS`] seeded starts around the
/// centroid. The best result by `(objective, restart index)` wins.
pub fn oracle_circle(points: &[Vec2], seed: u64) -> Result<CircleOracle> {
    if points.len() < 3 {
        return Err(FitError::TooFewPoints { needed: 3, got: points.len() });
    }
    let inv = 1.0 / points.len() as f64;
    let (mut cx, mut cy) = (0.0, 0.0);
    for p in points {
        cx += p.x * inv;
        cy += p.y * inv;
    }
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in points {
        let (dx, dy) = (p.x - cx, p.y - cy);
        sxx += dx * dx * inv;
        sxy += dx * dy * inv;
        syy += dy * dy * inv;
    }
    let frob2 = sxx * sxx + syy * syy + 2.0 * sxy * sxy;
    if (sxx * syy - sxy * sxy).abs() <= 1e-10 * frob2 {
        return Err(FitError::DegenerateInput("points are collinear".into()));
    }
    let scale = (sxx + syy).sqrt();

    let cost = |x: &[f64; 3]| circle_cost(points, x);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<([f64; 3], f64)> = None;
    for _ in 0..CIRCLE_RESTARTS {
        let x0 = cx + scale * rng.gen_range(-1.0..1.0);
        let y0 = cy + scale * rng.gen_range(-1.0..1.0);
        let mean_d2 = points.iter().map(|p| (p.x - x0).powi(2) + (p.y - y0).powi(2)).sum::<f64>() * inv;
        let r0 = mean_d2 * rng.gen_range(0.5..1.5);
        let mut x = [x0, y0, r0];
        let mut step = [0.5 * scale, 0.5 * scale, 0.5 * r0.max(scale * scale)];
        let mut fx = cost(&x);
        for _ in 0..SIMPLEX_POLISH_ROUNDS {
            let (nx, nf) = nelder_mead(cost, x, step);
            let moved = ((nx[0] - x[0]).powi(2) + (nx[1] - x[1]).powi(2)).sqrt();
            if nf <= fx {
                (x, fx) = (nx, nf);
            }
            // Restart the simplex around the incumbent at the scale it moved.
            let s = moved.max(1e-6 * scale);
            step = [s, s, 2.0 * s * scale];
        }
        if best.is_none_or(|(_, bf)| fx < bf) {
            best = Some((x, fx));
        }
    }
    let (x, objective) = best.expect("at least one restart");
    Ok(CircleOracle { center: Vec2::new(x[0], x[1]), radius: x[2].max(0.0).sqrt(), objective })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_data_has_zero_objective() {
        let pts: Vec<_> = (0..10)
            .map(|k| {
                let t = k as f64;
                Vec3::new(t.cos() * 3.0, t.sin() * 2.0, 0.25 * t.cos() * 3.0 - 1.0)
            })
            .collect();
        let o = oracle_plane(&pts).unwrap();
        assert!(o.objective <= 1e-10, "{}", o.objective);
    }

    #[test]
    fn cube_corners() {
        let pts: Vec<_> = (0..8)
            .map(|i| Vec3::new((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64))
            .collect();
        let o = oracle_plane(&pts).unwrap();
        assert!((o.objective - 0.25).abs() <= 1e-6);
    }

    #[test]
    fn exact_circle() {
        let pts: Vec<_> = (0..12)
            .map(|k| {
                let t = k as f64 * 0.5;
                Vec2::new(2.0 + 1.5 * t.cos(), -1.0 + 1.5 * t.sin())
            })
            .collect();
        let o = oracle_circle(&pts, 0).unwrap();
        assert!(o.objective <= 1e-16 * 1.5f64.powi(4), "{}", o.objective);
        assert!((o.radius - 1.5).abs() < 1e-6);
    }

    #[test]
    fn circumcircle_of_triangle() {
        let pts = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        let o = oracle_circle(&pts, 3).unwrap();
        assert!((o.center - Vec2::new(0.5, 0.5)).norm() <= 1e-6, "{:?}", o.center);
    }

    #[test]
    fn errors() {
        let line = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(2.0, 2.0)];
        assert!(matches!(oracle_circle(&line, 0), Err(FitError::DegenerateInput(_))));
        assert!(matches!(oracle_circle(&line[..2], 0), Err(FitError::TooFewPoints { .. })));
        assert!(matches!(oracle_plane(&[Vec3::ZERO]), Err(FitError::TooFewPoints { .. })));
    }
}
