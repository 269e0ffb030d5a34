//! 3D component packing with sphere-decomposed rigid parts.
//!
//! Each part is a rigid set of spheres controlled by six pose variables
//! (three displacement, three Euler angles). The objective trades the volume
//! of the axis-aligned box containing every sphere against a log-barrier on
//! the minimum surface clearance between different parts:
//!
//! ```text
//! loss = w_b · V_b − w_c · ln(max(eps + min_clearance, clearance_floor))
//! ```
//!
//! [`run_packing_gd`] descends this loss directly; [`run_packing_spgd`]
//! additionally runs scheduled perturbation phases that hop single pose
//! variables and accept candidates that stay collision-free within a
//! shrinking volume-growth factor. On tightly blocked scenes the plain
//! descent stalls against the barrier while the perturbed variant keeps
//! finding feasible rearrangements — see the `pack_cubes` example.
//!
//! # File formats
//!
//! Component geometry (shared by inputs and outputs):
//!
//! ```json
//! {"components":[{"name":"part","spheres":[{"c":[0,0,0],"r":0.5}],
//!                 "pose":{"d":[0,0,0],"euler":[0,0,0]}}]}
//! ```
//!
//! Scenario files bundle loss weights, component specs (explicit spheres, or
//! generated cube/box lattices), and the optimizer config — see
//! [`Scenario`]. Runs emit `history.csv`
//! (`iter,loss,volume,min_clearance,event`) and `final_scene.json`
//! (world-frame spheres for external rendering).

pub mod geometry;
pub mod loss;
pub mod optimizer;
pub mod schedule;
pub mod shapes;

pub use geometry::{world_spheres, Pose, RigidComponent, Sphere, Vec3};
pub use loss::{
    bounding_box_volume, loss_from_parts, min_clearance, packing_gradient, packing_loss,
    params_to_poses, poses_to_params, PackingProblem, Workspace,
};
pub use optimizer::{
    accept_candidate, perturb_variable, run_packing_gd, run_packing_spgd, write_history_csv,
    HistoryEvent, HistoryRow, PackingResult, PackingSpgdConfig, PackingTermination,
};
pub use schedule::LinearSchedule;
pub use shapes::{generate_box_spheres, generate_cube_spheres, sphere_set_aabb};

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentFile {
    components: Vec<RigidComponent>,
}

/// Read a component-geometry JSON file, validating every component.
pub fn load_components(path: impl AsRef<Path>) -> Result<Vec<RigidComponent>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let file: ComponentFile = serde_json::from_str(&text).map_err(|e| Error::parse(path, e))?;
    for c in &file.components {
        c.validate()?;
    }
    Ok(file.components)
}

/// Write components (body-frame spheres plus poses) as component-geometry
/// JSON; inverse of [`load_components`].
pub fn save_components(path: impl AsRef<Path>, components: &[RigidComponent]) -> Result<()> {
    let path = path.as_ref();
    let file = ComponentFile {
        components: components.to_vec(),
    };
    let text = serde_json::to_string_pretty(&file).expect("component serialization cannot fail");
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Loss weights block of a scenario file; every field defaults.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Weights {
    pub w_b: f64,
    pub w_c: f64,
    pub eps: f64,
    pub clearance_floor: f64,
}

impl Default for Weights {
    fn default() -> Self {
        Weights {
            w_b: 20.0,
            w_c: 1e-4,
            eps: 1e-5,
            clearance_floor: 1e-12,
        }
    }
}

/// How one scenario component gets its spheres: an explicit list, or a
/// generated cube/box lattice.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeSpec {
    Cube { side: f64, count: u32 },
    Box { dims: [f64; 3], counts: [u32; 3] },
    Spheres(Vec<Sphere>),
}

impl ShapeSpec {
    pub fn build(&self) -> Result<Vec<Sphere>> {
        match self {
            ShapeSpec::Cube { side, count } => generate_cube_spheres(*side, *count),
            ShapeSpec::Box { dims, counts } => generate_box_spheres(*dims, *counts),
            ShapeSpec::Spheres(list) => Ok(list.clone()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub name: String,
    #[serde(flatten)]
    pub shape: ShapeSpec,
    #[serde(default)]
    pub pose: Pose,
}

/// A packing scenario file: weights, component specs, optimizer config.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub weights: Weights,
    pub components: Vec<ComponentSpec>,
    pub config: PackingSpgdConfig,
}

impl Scenario {
    /// Instantiate the problem (generating lattice spheres) and the config.
    pub fn build(&self) -> Result<(PackingProblem, PackingSpgdConfig)> {
        let components = self
            .components
            .iter()
            .map(|spec| {
                Ok(RigidComponent {
                    name: spec.name.clone(),
                    spheres: spec.shape.build()?,
                    pose: spec.pose.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let problem = PackingProblem {
            components,
            w_b: self.weights.w_b,
            w_c: self.weights.w_c,
            eps: self.weights.eps,
            clearance_floor: self.weights.clearance_floor,
        };
        problem.validate()?;
        self.config.validate()?;
        Ok((problem, self.config.clone()))
    }
}

/// Read and parse a scenario JSON file (without building it).
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::parse(path, e))
}

#[derive(Serialize)]
struct SceneComponent {
    name: String,
    spheres: Vec<SceneSphere>,
}

#[derive(Serialize)]
struct SceneSphere {
    c: Vec3,
    r: f64,
}

#[derive(Serialize)]
struct FinalScene {
    components: Vec<SceneComponent>,
    volume: f64,
    min_clearance: Option<f64>,
    loss: f64,
}

/// Write the world-frame scene at the given poses as `final_scene.json`
/// content (sphere centers already posed, ready for rendering).
pub fn write_final_scene<W: std::io::Write>(
    mut w: W,
    problem: &PackingProblem,
    poses: &[Pose],
) -> Result<()> {
    assert_eq!(poses.len(), problem.components.len());
    let mut ws = Workspace::new(problem);
    ws.set_poses(poses);
    let volume = ws.volume();
    let clearance = ws.min_clearance().map(|(m, _)| m);
    let components = problem
        .components
        .iter()
        .zip(poses)
        .map(|(comp, pose)| {
            let posed = RigidComponent {
                name: comp.name.clone(),
                spheres: comp.spheres.clone(),
                pose: pose.clone(),
            };
            SceneComponent {
                name: comp.name.clone(),
                spheres: world_spheres(&posed)
                    .into_iter()
                    .map(|(c, r)| SceneSphere { c, r })
                    .collect(),
            }
        })
        .collect();
    let scene = FinalScene {
        components,
        volume,
        min_clearance: clearance,
        loss: loss_from_parts(problem, volume, clearance),
    };
    let text = serde_json::to_string_pretty(&scene).expect("scene serialization cannot fail");
    w.write_all(text.as_bytes())
        .map_err(|e| Error::io("final_scene.json", e))?;
    w.write_all(b"\n")
        .map_err(|e| Error::io("final_scene.json", e))
}
