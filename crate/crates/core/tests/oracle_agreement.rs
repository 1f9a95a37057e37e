use linecollect::instance_io::{generate_random, normalize_instance};
use linecollect::oracles::{
    brute_force, build_explicit_dag, dag_longest_path, residual_shortest, ssp_dense,
    successive_shortest_paths,
};
use linecollect::residual::ResidualNetwork;
use linecollect::solver::{shortest_path, solve_points};
use linecollect::validate::certify;
use linecollect::{solve, PointSet, SolverConfig};

#[test]
fn small_random_match_brute_force() {
    let mut failures = Vec::new();
    for seed in 0..300u64 {
        let n = 1 + (seed % 12) as usize;
        let k = 1 + (seed % 4) as usize;
        let inst = normalize_instance(&generate_random(seed, n, 6, 9, k));
        let sol = match solve(&inst, SolverConfig::default()) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        let pts = PointSet::from_instance(&inst).unwrap();
        for i in 1..=k {
            let want = brute_force(&pts, i).unwrap();
            if sol.round_weights()[i - 1] != want {
                failures.push(format!(
                    "seed {seed} round {i}: {} vs {want}",
                    sol.round_weights()[i - 1]
                ));
            }
        }
        if let Err(e) = certify(&inst, &sol) {
            failures.push(format!("seed {seed}: {e:?}"));
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn medium_random_match_ssp() {
    for seed in 0..9u64 {
        let k = 2 + (seed % 3) as usize;
        let n = if k == 4 { 100 } else { 200 };
        let inst = normalize_instance(&generate_random(seed, n, 60, 20, k));
        let sol = solve(&inst, SolverConfig::default()).unwrap();
        let pts = PointSet::from_instance(&inst).unwrap();
        let ssp = successive_shortest_paths(&build_explicit_dag(&pts), k);
        assert_eq!(sol.round_weights(), ssp.weights, "seed {seed}");
        assert_eq!(ssp_dense(&pts, k), ssp.weights, "seed {seed}");
        certify(&inst, &sol).unwrap();
    }
}

#[test]
fn residual_shortest_matches_bellman_ford() {
    for seed in 0..500u64 {
        let n = 1 + (seed % 12) as usize;
        let k = 2 + (seed % 3) as usize;
        let inst = normalize_instance(&generate_random(seed, n, 6, 9, k));
        let pts = PointSet::from_instance(&inst).unwrap();
        let red = solve_points(pts.clone(), k - 1, SolverConfig::default())
            .unwrap()
            .paths;
        let net = ResidualNetwork::new(&pts, red).unwrap();
        let want = residual_shortest(&net).unwrap();
        for threshold in [1, 3] {
            let cfg = SolverConfig {
                base_case_threshold: threshold,
                trace: false,
            };
            assert_eq!(
                shortest_path(&net, cfg).unwrap().weight,
                want,
                "seed {seed} threshold {threshold}"
            );
        }
    }
}

#[test]
fn one_robot_matches_longest_path() {
    for seed in 0..50u64 {
        let inst = normalize_instance(&generate_random(seed, 300, 40, 20, 1));
        let pts = PointSet::from_instance(&inst).unwrap();
        let (w, _) = dag_longest_path(&pts, &build_explicit_dag(&pts));
        assert_eq!(
            solve(&inst, SolverConfig::default()).unwrap().weight,
            w,
            "seed {seed}"
        );
    }
}
