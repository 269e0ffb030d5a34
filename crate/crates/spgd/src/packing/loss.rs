//! The packing objective: bounding-box volume plus a log-barrier clearance
//! penalty, with an analytic gradient over all component poses.
//!
//! ```text
//! loss = w_b · V_b − w_c · ln(max(eps + min_clearance, clearance_floor))
//! ```
//!
//! `V_b` is the volume of the axis-aligned box spanning every world sphere;
//! `min_clearance` is the smallest surface-to-surface distance over all
//! cross-component sphere pairs (negative = penetration). The floor keeps the
//! log finite when candidates penetrate deeper than `eps`, at the cost of a
//! zero gradient in that regime. With fewer than two components there are no
//! pairs and the penalty term is omitted entirely.
//!
//! Non-smooth points (which sphere achieves a box face, which pair achieves
//! the min) use the subgradient of the lowest-index achiever: scans run in
//! index order and replace only on strict improvement, so ties resolve to the
//! first achiever deterministically.
//!
//! The pair scan is exact but lazy: each component pair carries either its
//! exact minimum (with achiever indices) or a lower bound from the distance
//! between the components' sphere-inflated AABBs. Only pairs whose bound
//! could reach the current minimum are refined with the O(S²) sphere scan,
//! which keeps far-apart pairs O(1) per evaluation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::packing::geometry::{mat_apply, rotation_derivatives, Pose, RigidComponent, Vec3};

/// The packing instance: rigid components plus the loss weights.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PackingProblem {
    pub components: Vec<RigidComponent>,
    /// Bounding-box volume weight.
    #[serde(default = "default_w_b")]
    pub w_b: f64,
    /// Clearance-penalty weight.
    #[serde(default = "default_w_c")]
    pub w_c: f64,
    /// Log-argument offset: the penalty reads ln(eps + min_clearance).
    #[serde(default = "default_eps")]
    pub eps: f64,
    /// Floor for the log argument; keeps penetrating states finite.
    #[serde(default = "default_clearance_floor")]
    pub clearance_floor: f64,
}

fn default_w_b() -> f64 {
    20.0
}
fn default_w_c() -> f64 {
    1e-4
}
fn default_eps() -> f64 {
    1e-5
}
fn default_clearance_floor() -> f64 {
    1e-12
}

impl PackingProblem {
    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::InvalidConfig(
                "packing problem has no components".into(),
            ));
        }
        for c in &self.components {
            c.validate()?;
        }
        for (name, v) in [
            ("w_b", self.w_b),
            ("w_c", self.w_c),
            ("eps", self.eps),
            ("clearance_floor", self.clearance_floor),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Initial poses as stored on the components.
    pub fn initial_poses(&self) -> Vec<Pose> {
        self.components.iter().map(|c| c.pose.clone()).collect()
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }
}

/// Flatten poses into the 6N optimization vector
/// `[d0x, d0y, d0z, e0x, e0y, e0z, d1x, …]`.
pub fn poses_to_params(poses: &[Pose]) -> Vec<f64> {
    let mut out = Vec::with_capacity(6 * poses.len());
    for p in poses {
        out.extend_from_slice(&p.d);
        out.extend_from_slice(&p.euler);
    }
    out
}

/// Inverse of [`poses_to_params`]; panics on a length that is not 6N.
pub fn params_to_poses(params: &[f64]) -> Vec<Pose> {
    assert!(
        params.len() % 6 == 0,
        "pose parameter vector must have 6 entries per component"
    );
    params
        .chunks_exact(6)
        .map(|c| Pose {
            d: [c[0], c[1], c[2]],
            euler: [c[3], c[4], c[5]],
        })
        .collect()
}

/// Volume of the axis-aligned box spanning `[min(c−r), max(c+r)]` per axis.
pub fn bounding_box_volume(world: &[(Vec3, f64)]) -> f64 {
    assert!(!world.is_empty(), "bounding box of an empty sphere set");
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for (c, r) in world {
        for a in 0..3 {
            lo[a] = lo[a].min(c[a] - r);
            hi[a] = hi[a].max(c[a] + r);
        }
    }
    (hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2])
}

/// Exact minimum over cross-component sphere pairs of
/// `‖c_a − c_b‖ − r_a − r_b`; `None` with fewer than two components.
pub fn min_clearance(components: &[RigidComponent]) -> Option<f64> {
    let poses: Vec<Pose> = components.iter().map(|c| c.pose.clone()).collect();
    let spheres: Vec<&[crate::packing::geometry::Sphere]> =
        components.iter().map(|c| c.spheres.as_slice()).collect();
    let mut ws = Workspace::from_parts(&spheres);
    ws.set_poses(&poses);
    ws.min_clearance().map(|(m, _)| m)
}

/// Loss at explicit poses (overriding the poses stored on the components).
pub fn packing_loss(problem: &PackingProblem, poses: &[Pose]) -> f64 {
    let mut ws = Workspace::new(problem);
    ws.set_poses(poses);
    ws.loss(problem)
}

/// Assemble the loss from an already-computed volume and minimum clearance
/// (`None` = no cross-component pairs, penalty omitted).
pub fn loss_from_parts(problem: &PackingProblem, volume: f64, min_clearance: Option<f64>) -> f64 {
    let penalty = match min_clearance {
        Some(m) => -problem.w_c * (problem.eps + m).max(problem.clearance_floor).ln(),
        None => 0.0,
    };
    problem.w_b * volume + penalty
}

/// Analytic gradient of [`packing_loss`] with respect to the flattened
/// 6N pose vector, using lowest-index-achiever subgradients.
pub fn packing_gradient(problem: &PackingProblem, poses: &[Pose]) -> Vec<f64> {
    let mut ws = Workspace::new(problem);
    ws.set_poses(poses);
    ws.gradient(problem, poses)
}

/// One cross-component pair's cached state.
#[derive(Debug, Clone, Copy)]
enum PairState {
    /// Lower bound from AABB separation; the exact scan has not run.
    Bound(f64),
    /// Exact minimum and its achieving sphere indices (first in scan order).
    Exact(f64, u32, u32),
}

/// Evaluation workspace: world-frame spheres, per-component AABBs, and the
/// lazily refined pair table. Owns no problem data beyond sphere geometry.
pub struct Workspace {
    /// Per component: world spheres as (center, radius).
    world: Vec<Vec<(Vec3, f64)>>,
    /// Per component: body-frame spheres (borrow-free copy).
    body: Vec<Vec<(Vec3, f64)>>,
    lo: Vec<Vec3>,
    hi: Vec<Vec3>,
    /// Upper-triangle pair table, index via [`Workspace::pair_index`].
    pairs: Vec<PairState>,
    n: usize,
}

impl Workspace {
    pub fn new(problem: &PackingProblem) -> Self {
        let spheres: Vec<&[crate::packing::geometry::Sphere]> = problem
            .components
            .iter()
            .map(|c| c.spheres.as_slice())
            .collect();
        Self::from_parts(&spheres)
    }

    fn from_parts(spheres: &[&[crate::packing::geometry::Sphere]]) -> Self {
        let n = spheres.len();
        let body: Vec<Vec<(Vec3, f64)>> = spheres
            .iter()
            .map(|ss| ss.iter().map(|s| (s.c, s.r)).collect())
            .collect();
        Workspace {
            world: body.clone(),
            body,
            lo: vec![[0.0; 3]; n],
            hi: vec![[0.0; 3]; n],
            pairs: vec![PairState::Bound(0.0); n * (n.saturating_sub(1)) / 2],
            n,
        }
    }

    fn pair_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n);
        // Row-major upper triangle: offset of row i plus column within row.
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    /// Re-pose every component (full refresh).
    pub fn set_poses(&mut self, poses: &[Pose]) {
        assert_eq!(poses.len(), self.n, "pose count must match component count");
        for i in 0..self.n {
            self.apply_pose(i, &poses[i]);
        }
        self.reset_all_pairs();
    }

    /// Re-pose a single component, invalidating only the pairs that touch it.
    pub fn move_component(&mut self, idx: usize, pose: &Pose) {
        self.apply_pose(idx, pose);
        for other in 0..self.n {
            if other != idx {
                let (i, j) = if other < idx {
                    (other, idx)
                } else {
                    (idx, other)
                };
                let k = self.pair_index(i, j);
                self.pairs[k] = PairState::Bound(self.aabb_gap(i, j));
            }
        }
    }

    fn apply_pose(&mut self, i: usize, pose: &Pose) {
        let rot = pose.rotation();
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for (slot, (c, r)) in self.world[i].iter_mut().zip(&self.body[i]) {
            let p = mat_apply(&rot, c);
            let w = [p[0] + pose.d[0], p[1] + pose.d[1], p[2] + pose.d[2]];
            for a in 0..3 {
                lo[a] = lo[a].min(w[a] - r);
                hi[a] = hi[a].max(w[a] + r);
            }
            *slot = (w, *r);
        }
        self.lo[i] = lo;
        self.hi[i] = hi;
    }

    fn reset_all_pairs(&mut self) {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let k = self.pair_index(i, j);
                self.pairs[k] = PairState::Bound(self.aabb_gap(i, j));
            }
        }
    }

    /// Distance between the two components' sphere-inflated AABBs: a lower
    /// bound on every cross sphere-surface distance of the pair.
    fn aabb_gap(&self, i: usize, j: usize) -> f64 {
        let mut s = 0.0;
        for a in 0..3 {
            let g = (self.lo[i][a] - self.hi[j][a])
                .max(self.lo[j][a] - self.hi[i][a])
                .max(0.0);
            s += g * g;
        }
        s.sqrt()
    }

    /// Exact sphere-level scan of one pair; first achiever in (k, l) scan
    /// order on strict improvement.
    fn refine_pair(&mut self, i: usize, j: usize) -> (f64, u32, u32) {
        let k = self.pair_index(i, j);
        if let PairState::Exact(m, a, b) = self.pairs[k] {
            return (m, a, b);
        }
        let (mut best, mut bk, mut bl) = (f64::INFINITY, 0u32, 0u32);
        for (ka, (ca, ra)) in self.world[i].iter().enumerate() {
            for (lb, (cb, rb)) in self.world[j].iter().enumerate() {
                // Squared-distance prescreen: beats `best` iff
                // dist < best + ra + rb (threshold negative ⇒ impossible).
                let t = best + ra + rb;
                if t <= 0.0 {
                    continue;
                }
                let dx = ca[0] - cb[0];
                let dy = ca[1] - cb[1];
                let dz = ca[2] - cb[2];
                let d2 = dx * dx + dy * dy + dz * dz;
                if d2 < t * t {
                    let m = d2.sqrt() - ra - rb;
                    if m < best {
                        best = m;
                        bk = ka as u32;
                        bl = lb as u32;
                    }
                }
            }
        }
        self.pairs[k] = PairState::Exact(best, bk, bl);
        (best, bk, bl)
    }

    /// Global minimum clearance and its achieving (comp_i, comp_j, sph_k,
    /// sph_l), refining only pairs whose bound could reach the minimum.
    /// `None` with fewer than two components.
    pub fn min_clearance(&mut self) -> Option<(f64, (usize, usize, u32, u32))> {
        if self.n < 2 {
            return None;
        }
        // Pass 1: the running minimum over exact entries and refined pairs
        // whose bound is not already above it.
        let mut min = f64::INFINITY;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let k = self.pair_index(i, j);
                let value = match self.pairs[k] {
                    PairState::Exact(m, ..) => m,
                    PairState::Bound(lb) => {
                        if lb <= min {
                            self.refine_pair(i, j).0
                        } else {
                            continue;
                        }
                    }
                };
                min = min.min(value);
            }
        }
        // Pass 2: with the true minimum known, the achiever is the first pair
        // (index order) whose exact value equals it; any surviving bound is
        // strictly above the minimum and cannot tie.
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let k = self.pair_index(i, j);
                if let PairState::Exact(m, a, b) = self.pairs[k] {
                    if m == min {
                        return Some((min, (i, j, a, b)));
                    }
                }
            }
        }
        unreachable!("minimum over a non-empty refined pair set must have an achiever");
    }

    /// Scene AABB as (lo, hi) corners, from the per-component boxes.
    pub fn scene_aabb(&self) -> (Vec3, Vec3) {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for i in 0..self.n {
            for a in 0..3 {
                lo[a] = lo[a].min(self.lo[i][a]);
                hi[a] = hi[a].max(self.hi[i][a]);
            }
        }
        (lo, hi)
    }

    pub fn volume(&self) -> f64 {
        let (lo, hi) = self.scene_aabb();
        (hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2])
    }

    /// Loss with the workspace's current poses.
    pub fn loss(&mut self, problem: &PackingProblem) -> f64 {
        let volume = self.volume();
        let clearance = self.min_clearance().map(|(m, _)| m);
        loss_from_parts(problem, volume, clearance)
    }

    /// Analytic gradient at the current poses (also passed explicitly for the
    /// rotation derivatives). Layout matches [`poses_to_params`].
    pub fn gradient(&mut self, problem: &PackingProblem, poses: &[Pose]) -> Vec<f64> {
        assert_eq!(poses.len(), self.n);
        let mut grad = vec![0.0; 6 * self.n];
        let drots: Vec<_> = poses
            .iter()
            .map(|p| rotation_derivatives(&p.euler))
            .collect();

        // Volume term: for each box face, the achieving sphere (lowest
        // (component, sphere) index on ties) carries the subgradient.
        let (lo, hi) = self.scene_aabb();
        let ext = [hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]];
        for a in 0..3 {
            let face_weight = problem.w_b * ext[(a + 1) % 3] * ext[(a + 2) % 3];
            for (bound, sign) in [(lo[a], -1.0), (hi[a], 1.0)] {
                let (ci, si) = self.face_achiever(a, bound, sign);
                let body_c = self.body[ci][si].0;
                grad[6 * ci + a] += sign * face_weight;
                for (jj, drot) in drots[ci].iter().enumerate() {
                    grad[6 * ci + 3 + jj] += sign * face_weight * mat_apply(drot, &body_c)[a];
                }
            }
        }

        // Penalty term: the achieving pair's subgradient, zero on the floor
        // plateau and at coincident centers (undefined direction).
        if let Some((m, (i, j, k, l))) = self.min_clearance() {
            if problem.eps + m > problem.clearance_floor {
                let scale = -problem.w_c / (problem.eps + m);
                let (ca, _) = self.world[i][k as usize];
                let (cb, _) = self.world[j][l as usize];
                let diff = [ca[0] - cb[0], ca[1] - cb[1], ca[2] - cb[2]];
                let dist = (diff[0] * diff[0] + diff[1] * diff[1] + diff[2] * diff[2]).sqrt();
                if dist > 0.0 {
                    let u = [diff[0] / dist, diff[1] / dist, diff[2] / dist];
                    let body_a = self.body[i][k as usize].0;
                    let body_b = self.body[j][l as usize].0;
                    for a in 0..3 {
                        grad[6 * i + a] += scale * u[a];
                        grad[6 * j + a] -= scale * u[a];
                    }
                    for jj in 0..3 {
                        let da = mat_apply(&drots[i][jj], &body_a);
                        let db = mat_apply(&drots[j][jj], &body_b);
                        grad[6 * i + 3 + jj] +=
                            scale * (u[0] * da[0] + u[1] * da[1] + u[2] * da[2]);
                        grad[6 * j + 3 + jj] -=
                            scale * (u[0] * db[0] + u[1] * db[1] + u[2] * db[2]);
                    }
                }
            }
        }
        grad
    }

    /// First (component, sphere) whose `center[a] ± r` equals the face bound,
    /// in scan order.
    fn face_achiever(&self, a: usize, bound: f64, sign: f64) -> (usize, usize) {
        for (ci, spheres) in self.world.iter().enumerate() {
            // Skip components whose own box does not touch the face.
            let comp_bound = if sign > 0.0 {
                self.hi[ci][a]
            } else {
                self.lo[ci][a]
            };
            if comp_bound != bound {
                continue;
            }
            for (si, (c, r)) in spheres.iter().enumerate() {
                if c[a] + sign * r == bound {
                    return (ci, si);
                }
            }
        }
        unreachable!("a face bound must be achieved by some sphere");
    }
}
