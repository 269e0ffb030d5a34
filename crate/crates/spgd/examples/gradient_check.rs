//! Analytic gradients against the central-difference oracle.
//!
//! Every benchmark gradient is hand-derived; this example samples random
//! points in each function's search box and prints the worst relative
//! disagreement with finite differences. It then does the same for the
//! packing loss, whose gradient is a *subgradient* — exact between the
//! min/max kinks of the bounding box and the closest-pair clearance — by
//! sampling random collision-free layouts away from ties.
//!
//! Run with: `cargo run --example gradient_check`

use spgd::bench::fixture;
use spgd::objective::{finite_difference_gradient, max_rel_err, EvalContext, DEFAULT_FD_STEP};
use spgd::packing::{
    generate_cube_spheres, packing_gradient, packing_loss, PackingProblem, Pose, RigidComponent,
};
use spgd::rng::RngStream;

fn main() -> spgd::Result<()> {
    println!("benchmark gradients vs central differences (100 random points each):");
    let mut rng = RngStream::new(20_260_814);
    for function in ["peaks", "ackley", "easom", "levy13", "quartic1d"] {
        let fx = fixture(function)?;
        let obj = fx.objective.as_ref();
        let (lo, hi) = obj.bounds().expect("benchmarks define search boxes");
        let mut worst = 0.0_f64;
        let mut ctx = EvalContext::default();
        for _ in 0..100 {
            let x: Vec<f64> = lo
                .iter()
                .zip(&hi)
                .map(|(&l, &h)| rng.uniform_in(l, h))
                .collect();
            let mut analytic = vec![0.0; x.len()];
            obj.gradient(&x, &mut analytic);
            let fd = finite_difference_gradient(obj, &x, DEFAULT_FD_STEP, &mut ctx)?;
            worst = worst.max(max_rel_err(&analytic, &fd));
        }
        println!("  {function:<10} worst rel err {worst:.3e}");
    }

    println!("\npacking loss gradient vs central differences (random 2-component layouts):");
    let mut worst = 0.0_f64;
    let mut checked = 0;
    while checked < 20 {
        // Two small sphere-lattice cubes with random poses, kept separated so
        // the layout is collision-free and away from clearance/face ties.
        let problem = PackingProblem {
            components: (0..2)
                .map(|i| RigidComponent {
                    name: format!("c{i}"),
                    spheres: generate_cube_spheres(0.5, 8).expect("valid lattice"),
                    pose: Pose {
                        d: [
                            i as f64 * (1.1 + rng.uniform() * 0.5) + rng.symmetric(0.05),
                            rng.symmetric(0.2),
                            rng.symmetric(0.2),
                        ],
                        euler: [rng.symmetric(0.5), rng.symmetric(0.5), rng.symmetric(0.5)],
                    },
                })
                .collect(),
            w_b: 20.0,
            w_c: 1e-3,
            eps: 1e-5,
            clearance_floor: 1e-12,
        };
        let poses = problem.initial_poses();
        let analytic = packing_gradient(&problem, &poses);

        let mut params: Vec<f64> = poses
            .iter()
            .flat_map(|p| p.d.iter().chain(&p.euler).copied())
            .collect();
        let h = 1e-6;
        let mut fd = vec![0.0; params.len()];
        for k in 0..params.len() {
            let x0 = params[k];
            params[k] = x0 + h;
            let fp = loss_at(&problem, &params);
            params[k] = x0 - h;
            let fm = loss_at(&problem, &params);
            params[k] = x0;
            fd[k] = (fp - fm) / (2.0 * h);
        }
        worst = worst.max(max_rel_err(&analytic, &fd));
        checked += 1;
    }
    println!("  {checked} layouts, worst rel err {worst:.3e}");
    Ok(())
}

fn loss_at(problem: &PackingProblem, params: &[f64]) -> f64 {
    let poses = spgd::packing::params_to_poses(params);
    packing_loss(problem, &poses)
}
