//! Rigid-body geometry for the packing problem: spheres in a body frame, a
//! six-parameter pose (displacement + X-Y-Z intrinsic Euler angles), and the
//! rotation-matrix derivatives the analytic loss gradient needs.
//!
//! Conventions frozen here:
//! - A pose maps a body-frame point `c` to the world frame as
//!   `R(euler)·c + d`, with `R = Rx(e0)·Ry(e1)·Rz(e2)` (intrinsic X-Y-Z).
//! - Angles are stored unwrapped; the rotation matrix is periodic, so the
//!   optimizer never normalizes them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];

/// Row-major 3×3 matrix; `m[r][c]`.
pub type Mat3 = [[f64; 3]; 3];

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c] + a[r][2] * b[2][c];
        }
    }
    out
}

pub fn mat_apply(m: &Mat3, v: &Vec3) -> Vec3 {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

fn rot_x(a: f64) -> Mat3 {
    let (s, c) = a.sin_cos();
    [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]]
}

fn rot_y(a: f64) -> Mat3 {
    let (s, c) = a.sin_cos();
    [[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]]
}

fn rot_z(a: f64) -> Mat3 {
    let (s, c) = a.sin_cos();
    [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
}

fn drot_x(a: f64) -> Mat3 {
    let (s, c) = a.sin_cos();
    [[0.0, 0.0, 0.0], [0.0, -s, -c], [0.0, c, -s]]
}

fn drot_y(a: f64) -> Mat3 {
    let (s, c) = a.sin_cos();
    [[-s, 0.0, c], [0.0, 0.0, 0.0], [-c, 0.0, -s]]
}

fn drot_z(a: f64) -> Mat3 {
    let (s, c) = a.sin_cos();
    [[-s, -c, 0.0], [c, -s, 0.0], [0.0, 0.0, 0.0]]
}

/// `R(euler) = Rx(e0)·Ry(e1)·Rz(e2)`.
pub fn rotation(euler: &Vec3) -> Mat3 {
    mat_mul(
        &rot_x(euler[0]),
        &mat_mul(&rot_y(euler[1]), &rot_z(euler[2])),
    )
}

/// The three partial derivatives `∂R/∂e_k`, in angle order.
pub fn rotation_derivatives(euler: &Vec3) -> [Mat3; 3] {
    let rx = rot_x(euler[0]);
    let ry = rot_y(euler[1]);
    let rz = rot_z(euler[2]);
    [
        mat_mul(&drot_x(euler[0]), &mat_mul(&ry, &rz)),
        mat_mul(&rx, &mat_mul(&drot_y(euler[1]), &rz)),
        mat_mul(&rx, &mat_mul(&ry, &drot_z(euler[2]))),
    ]
}

/// One sphere of a component's decomposition, in the component body frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sphere {
    /// Body-frame center.
    pub c: Vec3,
    /// Radius; strictly positive.
    pub r: f64,
}

/// Six-parameter rigid placement: world displacement plus X-Y-Z intrinsic
/// Euler angles in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pose {
    pub d: Vec3,
    pub euler: Vec3,
}

impl Default for Pose {
    fn default() -> Self {
        Pose::identity()
    }
}

impl Pose {
    pub fn identity() -> Self {
        Pose {
            d: [0.0; 3],
            euler: [0.0; 3],
        }
    }

    pub fn rotation(&self) -> Mat3 {
        rotation(&self.euler)
    }

    pub fn apply(&self, body_point: &Vec3) -> Vec3 {
        let r = self.rotation();
        let p = mat_apply(&r, body_point);
        [p[0] + self.d[0], p[1] + self.d[1], p[2] + self.d[2]]
    }
}

/// A rigid part: an immutable sphere decomposition plus its current pose.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RigidComponent {
    pub name: String,
    pub spheres: Vec<Sphere>,
    pub pose: Pose,
}

impl RigidComponent {
    pub fn validate(&self) -> Result<()> {
        if self.spheres.is_empty() {
            return Err(Error::InvalidConfig(format!(
                "component {:?} has no spheres",
                self.name
            )));
        }
        for (k, s) in self.spheres.iter().enumerate() {
            if !(s.r > 0.0 && s.r.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "component {:?} sphere {k}: radius must be positive, got {}",
                    self.name, s.r
                )));
            }
            if s.c.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "component {:?} sphere {k}: non-finite center",
                    self.name
                )));
            }
        }
        Ok(())
    }
}

/// World-frame spheres of one component under a pose:
/// `center = R·c + d`, radii unchanged.
pub fn world_spheres(comp: &RigidComponent) -> Vec<(Vec3, f64)> {
    let rot = comp.pose.rotation();
    comp.spheres
        .iter()
        .map(|s| {
            let p = mat_apply(&rot, &s.c);
            (
                [
                    p[0] + comp.pose.d[0],
                    p[1] + comp.pose.d[1],
                    p[2] + comp.pose.d[2],
                ],
                s.r,
            )
        })
        .collect()
}
