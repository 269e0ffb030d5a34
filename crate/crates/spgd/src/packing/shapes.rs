//! Deterministic sphere decompositions for box-like parts.
//!
//! The lattice rule: a box of dimensions `(lx, ly, lz)` is filled with an
//! `nx × ny × nz` grid of equal-radius spheres. The radius is half the
//! smallest lattice pitch, `r = min(l_a / n_a) / 2`, and along every axis the
//! outermost centers sit at `±(l_a/2 − r)`, so the sphere set's axis-aligned
//! bounding box reproduces the box exactly. Axes with a coarser pitch leave
//! gaps between spheres (the AABB, which the loss uses, is unaffected).

use crate::error::{Error, Result};
use crate::packing::geometry::Sphere;

/// Factor `count` into the most-cubic `(nx, ny, nz)` with `nx·ny·nz = count`:
/// among all ordered factorizations, the one minimizing `max/min` ratio,
/// ties broken toward lexicographically largest (keeps nx ≥ ny ≥ nz stable).
fn most_cubic_factors(count: u32) -> (u32, u32, u32) {
    let mut best = (count, 1, 1);
    let mut best_ratio = f64::INFINITY;
    let mut a = 1u32;
    while a * a * a <= count {
        if count % a == 0 {
            let rest = count / a;
            let mut b = a;
            while b * b <= rest {
                if rest % b == 0 {
                    let c = rest / b;
                    // a ≤ b ≤ c by construction.
                    let ratio = c as f64 / a as f64;
                    if ratio < best_ratio {
                        best_ratio = ratio;
                        best = (c, b, a);
                    }
                }
                b += 1;
            }
        }
        a += 1;
    }
    best
}

/// Centers of `n` lattice sites spanning `[−(half − r), +(half − r)]`.
fn axis_centers(half: f64, r: f64, n: u32) -> Vec<f64> {
    if n == 1 {
        return vec![0.0];
    }
    let lo = -(half - r);
    let hi = half - r;
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// `nx × ny × nz` lattice of equal spheres filling a `(lx, ly, lz)` box
/// centered at the body-frame origin. Radius = half the smallest pitch;
/// the sphere set's AABB equals the box exactly.
pub fn generate_box_spheres(dims: [f64; 3], counts: [u32; 3]) -> Result<Vec<Sphere>> {
    if dims.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
        return Err(Error::InvalidConfig(format!(
            "box dimensions must be positive, got {dims:?}"
        )));
    }
    if counts.iter().any(|&n| n == 0) {
        return Err(Error::InvalidConfig(format!(
            "lattice counts must be ≥ 1, got {counts:?}"
        )));
    }
    let r = (0..3)
        .map(|a| dims[a] / (2.0 * counts[a] as f64))
        .fold(f64::INFINITY, f64::min);
    let axes: Vec<Vec<f64>> = (0..3)
        .map(|a| axis_centers(dims[a] / 2.0, r, counts[a]))
        .collect();
    let mut spheres = Vec::with_capacity((counts[0] * counts[1] * counts[2]) as usize);
    for &x in &axes[0] {
        for &y in &axes[1] {
            for &z in &axes[2] {
                spheres.push(Sphere { c: [x, y, z], r });
            }
        }
    }
    Ok(spheres)
}

/// Cube decomposition: `count` is factored into the most-cubic lattice
/// (perfect cubes give the regular n×n×n grid), then filled as a box.
pub fn generate_cube_spheres(side: f64, count: u32) -> Result<Vec<Sphere>> {
    if count == 0 {
        return Err(Error::InvalidConfig("sphere count must be ≥ 1".into()));
    }
    let (nx, ny, nz) = most_cubic_factors(count);
    generate_box_spheres([side; 3], [nx, ny, nz])
}

/// AABB of a body-frame sphere set as (lo, hi) corners.
pub fn sphere_set_aabb(spheres: &[Sphere]) -> ([f64; 3], [f64; 3]) {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for s in spheres {
        for a in 0..3 {
            lo[a] = lo[a].min(s.c[a] - s.r);
            hi[a] = hi[a].max(s.c[a] + s.r);
        }
    }
    (lo, hi)
}
