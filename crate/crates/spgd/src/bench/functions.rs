//! Classic non-convex 2D test surfaces plus a 1D double-well quartic, each
//! with an analytic gradient. Reference minima below are frozen to the
//! digits produced by Newton-polishing the stationary equations; unit tests
//! pin them and cross-check every gradient against central differences.

use std::f64::consts::PI;

use crate::objective::Objective;

/// Three-hump/three-dip Gaussian mixture surface
/// 3(1−x)²e^(−x²−(y+1)²) − 10(x/5−x³−y⁵)e^(−x²−y²) − ⅓e^(−(x+1)²−y²),
/// global minimum f* ≈ −6.5511 near (0.228, −1.626).
pub struct Peaks;

/// Coordinates and value of the global minimum (Newton-polished).
pub const PEAKS_MIN_X: [f64; 2] = [0.228_278_920_556_369_14, -1.625_534_957_499_996_7];
pub const PEAKS_MIN_F: f64 = -6.551_133_332_835_834;

impl Objective for Peaks {
    fn name(&self) -> &str {
        "peaks"
    }
    fn dimension(&self) -> usize {
        2
    }
    fn value(&self, p: &[f64]) -> f64 {
        let (x, y) = (p[0], p[1]);
        let a = (-x * x - (y + 1.0) * (y + 1.0)).exp();
        let b = (-x * x - y * y).exp();
        let c = (-(x + 1.0) * (x + 1.0) - y * y).exp();
        let g = x / 5.0 - x.powi(3) - y.powi(5);
        3.0 * (1.0 - x) * (1.0 - x) * a - 10.0 * g * b - c / 3.0
    }
    fn gradient(&self, p: &[f64], out: &mut [f64]) {
        let (x, y) = (p[0], p[1]);
        let a = (-x * x - (y + 1.0) * (y + 1.0)).exp();
        let b = (-x * x - y * y).exp();
        let c = (-(x + 1.0) * (x + 1.0) - y * y).exp();
        let g = x / 5.0 - x.powi(3) - y.powi(5);
        let one_mx = 1.0 - x;
        out[0] = (-6.0 * one_mx - 6.0 * x * one_mx * one_mx) * a - 10.0 * (0.2 - 3.0 * x * x) * b
            + 20.0 * x * g * b
            + 2.0 / 3.0 * (x + 1.0) * c;
        out[1] = -6.0 * (y + 1.0) * one_mx * one_mx * a
            + 50.0 * y.powi(4) * b
            + 20.0 * y * g * b
            + 2.0 / 3.0 * y * c;
    }
    fn bounds(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        Some((vec![-4.0; 2], vec![4.0; 2]))
    }
    fn known_optimum(&self) -> Option<(Vec<f64>, f64)> {
        Some((PEAKS_MIN_X.to_vec(), PEAKS_MIN_F))
    }
}

/// Exponentially flat bowl carpeted with cosine ripples; global minimum
/// f(0,0) = 0, local minima on an integer-ish grid.
pub struct Ackley;

impl Objective for Ackley {
    fn name(&self) -> &str {
        "ackley"
    }
    fn dimension(&self) -> usize {
        2
    }
    fn value(&self, p: &[f64]) -> f64 {
        let (x, y) = (p[0], p[1]);
        let s = ((x * x + y * y) / 2.0).sqrt();
        let q = ((2.0 * PI * x).cos() + (2.0 * PI * y).cos()) / 2.0;
        -20.0 * (-0.2 * s).exp() - q.exp() + 20.0 + std::f64::consts::E
    }
    fn gradient(&self, p: &[f64], out: &mut [f64]) {
        let (x, y) = (p[0], p[1]);
        let s = ((x * x + y * y) / 2.0).sqrt();
        let q = (((2.0 * PI * x).cos() + (2.0 * PI * y).cos()) / 2.0).exp();
        // Radial term has a cone apex at the origin; use the zero subgradient.
        let radial = if s > 0.0 {
            2.0 * (-0.2 * s).exp() / s
        } else {
            0.0
        };
        out[0] = radial * x + PI * (2.0 * PI * x).sin() * q;
        out[1] = radial * y + PI * (2.0 * PI * y).sin() * q;
    }
    fn bounds(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        Some((vec![-5.0; 2], vec![5.0; 2]))
    }
    fn known_optimum(&self) -> Option<(Vec<f64>, f64)> {
        Some((vec![0.0; 2], 0.0))
    }
}

/// Near-flat plane with a single narrow Gaussian pit of depth 1 at (π, π).
/// Far from the pit the surface and its gradient underflow to exactly zero.
pub struct Easom;

impl Objective for Easom {
    fn name(&self) -> &str {
        "easom"
    }
    fn dimension(&self) -> usize {
        2
    }
    fn value(&self, p: &[f64]) -> f64 {
        let (x, y) = (p[0], p[1]);
        let e = (-(x - PI) * (x - PI) - (y - PI) * (y - PI)).exp();
        -x.cos() * y.cos() * e
    }
    fn gradient(&self, p: &[f64], out: &mut [f64]) {
        let (x, y) = (p[0], p[1]);
        let e = (-(x - PI) * (x - PI) - (y - PI) * (y - PI)).exp();
        out[0] = e * y.cos() * (x.sin() + 2.0 * (x - PI) * x.cos());
        out[1] = e * x.cos() * (y.sin() + 2.0 * (y - PI) * y.cos());
    }
    fn bounds(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        Some((vec![-100.0; 2], vec![100.0; 2]))
    }
    fn known_optimum(&self) -> Option<(Vec<f64>, f64)> {
        Some((vec![PI, PI], -1.0))
    }
}

/// sin²(3πx) + (x−1)²(1+sin²(3πy)) + (y−1)²(1+sin²(2πy)): a rippled
/// paraboloid with the global minimum f(1,1) = 0.
pub struct Levy13;

impl Objective for Levy13 {
    fn name(&self) -> &str {
        "levy13"
    }
    fn dimension(&self) -> usize {
        2
    }
    fn value(&self, p: &[f64]) -> f64 {
        let (x, y) = (p[0], p[1]);
        let s3x = (3.0 * PI * x).sin();
        let s3y = (3.0 * PI * y).sin();
        let s2y = (2.0 * PI * y).sin();
        s3x * s3x
            + (x - 1.0) * (x - 1.0) * (1.0 + s3y * s3y)
            + (y - 1.0) * (y - 1.0) * (1.0 + s2y * s2y)
    }
    fn gradient(&self, p: &[f64], out: &mut [f64]) {
        let (x, y) = (p[0], p[1]);
        let s3y = (3.0 * PI * y).sin();
        let s2y = (2.0 * PI * y).sin();
        out[0] = 3.0 * PI * (6.0 * PI * x).sin() + 2.0 * (x - 1.0) * (1.0 + s3y * s3y);
        out[1] = (x - 1.0) * (x - 1.0) * 3.0 * PI * (6.0 * PI * y).sin()
            + 2.0 * (y - 1.0) * (1.0 + s2y * s2y)
            + (y - 1.0) * (y - 1.0) * 2.0 * PI * (4.0 * PI * y).sin();
    }
    fn bounds(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        Some((vec![-10.0; 2], vec![10.0; 2]))
    }
    fn known_optimum(&self) -> Option<(Vec<f64>, f64)> {
        Some((vec![1.0; 2], 0.0))
    }
}

/// Asymmetric 1D double well x⁴ − 3x² + x: shallow minimum near x ≈ 1.131,
/// global minimum near x ≈ −1.301, separated by a barrier near x ≈ 0.17.
pub struct Quartic1d;

/// Stationary points of 4x³ − 6x + 1 = 0 (Newton-polished).
pub const QUARTIC_GLOBAL_MIN_X: f64 = -1.300_839_565_941_577_2;
pub const QUARTIC_GLOBAL_MIN_F: f64 = -3.513_905_038_934_79;
pub const QUARTIC_LOCAL_MIN_X: f64 = 1.130_901_122_629_985_9;
pub const QUARTIC_LOCAL_MIN_F: f64 = -1.070_230_181_776_154_1;
pub const QUARTIC_BARRIER_X: f64 = 0.169_938_443_311_591_28;

impl Objective for Quartic1d {
    fn name(&self) -> &str {
        "quartic1d"
    }
    fn dimension(&self) -> usize {
        1
    }
    fn value(&self, p: &[f64]) -> f64 {
        let x = p[0];
        x * x * x * x - 3.0 * x * x + x
    }
    fn gradient(&self, p: &[f64], out: &mut [f64]) {
        let x = p[0];
        out[0] = 4.0 * x * x * x - 6.0 * x + 1.0;
    }
    fn bounds(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        Some((vec![-3.0], vec![3.0]))
    }
    fn known_optimum(&self) -> Option<(Vec<f64>, f64)> {
        Some((vec![QUARTIC_GLOBAL_MIN_X], QUARTIC_GLOBAL_MIN_F))
    }
}
