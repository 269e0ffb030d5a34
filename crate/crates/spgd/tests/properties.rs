//! Property tests for the suite's load-bearing invariants: perturbation
//! containment and draw accounting, the candidate selection rule, schedule
//! clamping, rotation-matrix orthogonality, bounding-volume and clearance
//! invariances, the packing acceptance rule, and parameter round-trips.

use proptest::prelude::*;

use spgd::optim::{sample_perturbations, spgd_select};
use spgd::packing::{
    accept_candidate, bounding_box_volume, generate_cube_spheres, min_clearance, params_to_poses,
    poses_to_params, world_spheres, LinearSchedule, Pose, RigidComponent,
};
use spgd::rng::RngStream;

fn small_reals(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0..10.0f64, n)
}

proptest! {
    /// Criterion-8d as a law: every candidate stays inside the ±amp box
    /// around x, exactly n_p candidates are produced, and exactly n_p·dim
    /// uniforms are consumed (the draw-order contract).
    #[test]
    fn perturbations_stay_inside_the_amp_box(
        x in prop::collection::vec(-100.0..100.0f64, 1..4),
        amp in 1e-3..10.0f64,
        n_p in 0u64..50,
        seed in any::<u64>(),
    ) {
        let mut rng = RngStream::new(seed);
        let candidates = sample_perturbations(&x, amp, n_p, &mut rng);
        prop_assert_eq!(candidates.len(), n_p as usize);
        prop_assert_eq!(rng.draws(), n_p * x.len() as u64);
        for c in &candidates {
            prop_assert_eq!(c.len(), x.len());
            for (ci, xi) in c.iter().zip(&x) {
                prop_assert!((ci - xi).abs() <= amp, "offset {} beyond amp {}", ci - xi, amp);
            }
        }
    }

    /// The selection rule: accepted index is the lowest-index minimum and
    /// its value never exceeds the current value; rejection means every
    /// candidate is strictly worse.
    #[test]
    fn selection_takes_the_lowest_index_minimum_or_nothing(
        fs in prop::collection::vec(-100.0..100.0f64, 0..20),
        f_current in -100.0..100.0f64,
    ) {
        match spgd_select(&fs, f_current) {
            Some(i) => {
                prop_assert!(fs[i] <= f_current);
                for (j, &fj) in fs.iter().enumerate() {
                    prop_assert!(fs[i] <= fj);
                    if fj == fs[i] {
                        prop_assert!(i <= j, "tie must go to the lowest index");
                    }
                }
            }
            None => {
                for &fj in &fs {
                    prop_assert!(fj > f_current);
                }
            }
        }
    }

    /// Linear schedules interpolate inside [0, end_iter) and return the end
    /// value *exactly* from end_iter on (the acceptance factor must reach
    /// exactly 1.0).
    #[test]
    fn schedules_interpolate_then_clamp_exactly(
        start in -5.0..5.0f64,
        end in -5.0..5.0f64,
        end_iter in 1u64..1000,
        iter in 0u64..2000,
    ) {
        let s = LinearSchedule::new(start, end, end_iter);
        let v = s.value(iter);
        if iter >= end_iter {
            prop_assert_eq!(v, end);
        } else {
            prop_assert!(v >= start.min(end) && v <= start.max(end));
            if iter == 0 {
                prop_assert_eq!(v, start);
            }
        }
    }

    /// Pose rotation matrices are orthogonal with determinant +1.
    #[test]
    fn rotations_are_orthonormal(euler in small_reals(3)) {
        let pose = Pose { d: [0.0; 3], euler: [euler[0], euler[1], euler[2]] };
        let r = pose.rotation();
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| r[k][i] * r[k][j]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                prop_assert!((dot - expect).abs() < 1e-12, "RᵀR[{i}][{j}] = {dot}");
            }
        }
        let det = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
            - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
            + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
        prop_assert!((det - 1.0).abs() < 1e-12, "det = {det}");
    }

    /// Translating every component rigidly changes neither the bounding-box
    /// volume nor the minimum clearance.
    #[test]
    fn volume_and_clearance_are_translation_invariant(
        d1 in small_reals(3),
        e1 in small_reals(3),
        d2 in small_reals(3),
        e2 in small_reals(3),
        shift in small_reals(3),
    ) {
        let build = |offset: &[f64]| -> Vec<RigidComponent> {
            [(&d1, &e1), (&d2, &e2)]
                .iter()
                .enumerate()
                .map(|(i, (d, e))| RigidComponent {
                    name: format!("c{i}"),
                    spheres: generate_cube_spheres(0.5, 8).expect("valid lattice"),
                    pose: Pose {
                        d: [d[0] + offset[0], d[1] + offset[1], d[2] + offset[2]],
                        euler: [e[0], e[1], e[2]],
                    },
                })
                .collect()
        };
        let base = build(&[0.0; 3]);
        let moved = build(&shift);

        let vol = |comps: &[RigidComponent]| {
            let world: Vec<_> = comps.iter().flat_map(world_spheres).collect();
            bounding_box_volume(&world)
        };
        let dv = (vol(&base) - vol(&moved)).abs();
        prop_assert!(dv <= 1e-9 * vol(&base).max(1.0), "volume drifted by {dv}");

        let m0 = min_clearance(&base).expect("two components");
        let m1 = min_clearance(&moved).expect("two components");
        prop_assert!((m0 - m1).abs() < 1e-9, "clearance drifted from {m0} to {m1}");
    }

    /// Clearance is symmetric in component order.
    #[test]
    fn clearance_is_symmetric_in_component_order(
        d in small_reals(3),
        e1 in small_reals(3),
        e2 in small_reals(3),
    ) {
        let comp = |i: usize, d: [f64; 3], e: &[f64]| RigidComponent {
            name: format!("c{i}"),
            spheres: generate_cube_spheres(0.5, 8).expect("valid lattice"),
            pose: Pose { d, euler: [e[0], e[1], e[2]] },
        };
        let a = comp(0, [0.0; 3], &e1);
        let b = comp(1, [d[0], d[1], d[2]], &e2);
        let fwd = min_clearance(&[a.clone(), b.clone()]).expect("two components");
        let rev = min_clearance(&[b, a]).expect("two components");
        prop_assert_eq!(fwd.to_bits(), rev.to_bits());
    }

    /// The hop acceptance rule: collisions always reject; at factor 1.0 an
    /// accepted candidate's volume never exceeds the reference (so the
    /// best-volume record is monotone); larger factors accept exactly up to
    /// factor × reference.
    #[test]
    fn acceptance_respects_collision_and_volume_budget(
        cand in 0.0..100.0f64,
        reference in 1e-6..100.0f64,
        factor in 1.0..2.0f64,
        clearance in -1.0..1.0f64,
    ) {
        let accepted = accept_candidate(cand, reference, factor, Some(clearance));
        if clearance <= 0.0 {
            prop_assert!(!accepted, "overlapping candidate accepted");
        } else {
            prop_assert_eq!(accepted, cand <= factor * reference);
        }
        // A single-component problem has no clearance; only the volume rule.
        prop_assert_eq!(
            accept_candidate(cand, reference, factor, None),
            cand <= factor * reference
        );
    }

    /// Pose vector layout round-trips bitwise through the flat parameter
    /// form used by the descent step.
    #[test]
    fn pose_params_round_trip(values in prop::collection::vec(-10.0..10.0f64, 6 * 3)) {
        let poses = params_to_poses(&values);
        prop_assert_eq!(poses.len(), 3);
        let back = poses_to_params(&poses);
        for (a, b) in values.iter().zip(&back) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
