//! The shipped packing scenario fixtures must parse, build, and start from
//! collision-free layouts. (Full solver runs over scenarios 1–3 happen in
//! the acceptance gate; this suite keeps the files themselves honest.)

use std::path::{Path, PathBuf};

use spgd::packing::{load_scenario, min_clearance, packing_loss};

fn scenario_path(file: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(file)
}

#[test]
fn all_shipped_scenarios_build_and_start_collision_free() {
    let expected_components = [4, 8, 6, 4];
    for (i, &n) in expected_components.iter().enumerate() {
        let file = format!("scenario{}.json", i + 1);
        let scenario = load_scenario(scenario_path(&file)).expect("fixture parses");
        let (problem, cfg) = scenario.build().expect("fixture builds and validates");

        assert_eq!(problem.components.len(), n, "{file}: component count");
        let clearance = min_clearance(&problem.components).expect("multi-component scenario");
        assert!(
            clearance > 0.0,
            "{file}: initial overlap, clearance {clearance}"
        );
        let loss = packing_loss(&problem, &problem.initial_poses());
        assert!(loss.is_finite(), "{file}: non-finite initial loss");
        assert!(
            cfg.max_iter >= 1000,
            "{file}: implausibly small iteration budget"
        );
        assert_eq!(
            cfg.acceptance_factor.value(cfg.max_iter),
            1.0,
            "{file}: acceptance factor must decay to exactly 1.0"
        );
    }
}

#[test]
fn scenarios_one_to_three_share_the_identical_cube_recipe() {
    // Criterion fixture contract: scenario 1 is four *identical* cubes; the
    // larger scenes reuse the same lattice so results stay comparable.
    let s1 = load_scenario(scenario_path("scenario1.json")).expect("fixture parses");
    let (p1, _) = s1.build().expect("fixture builds");
    let reference = &p1.components[0].spheres;
    assert_eq!(
        reference.len(),
        100,
        "scenario 1 cubes decompose into 100 spheres"
    );
    for c in &p1.components[1..] {
        assert_eq!(&c.spheres, reference, "scenario 1 cubes must be identical");
    }

    let s2 = load_scenario(scenario_path("scenario2.json")).expect("fixture parses");
    let (p2, _) = s2.build().expect("fixture builds");
    for c in &p2.components {
        assert_eq!(
            &c.spheres, reference,
            "scenario 2 reuses the scenario 1 cube"
        );
    }
}
