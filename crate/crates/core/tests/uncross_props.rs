mod common;

use common::*;
use linecollect::instance_io::{generate_random, normalize_instance, Instance, Request};
use linecollect::oracles::{build_explicit_dag, successive_shortest_paths};
use linecollect::uncross::{algorithm_utilde, selection_s};
use linecollect::{PointId, PointSet, Q};

#[test]
fn flow_outputs_uncross_cleanly() {
    let mut failures = Vec::new();
    for seed in 0..500u64 {
        let n = 20 + (seed as usize * 37) % 181;
        let k = 1 + (seed % 4) as usize;
        let horizon = if seed % 2 == 0 { 15 } else { 60 };
        let inst = normalize_instance(&generate_random(seed, n, horizon, 9, k));
        let pts = PointSet::from_instance(&inst).unwrap();
        let flow = successive_shortest_paths(&build_explicit_dag(&pts), k);
        if let Err(e) = certified_utilde(&inst, &pts, &flow.paths.concat(), k) {
            failures.push(format!("seed {seed}: {e}"));
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn permutation_grids_uncross_cleanly() {
    for seed in 0..3000u64 {
        let n = 2 + (seed % 11) as usize;
        let pts = permutation_points(&mut rng(seed), n);
        let all: Vec<PointId> = (1..=n as PointId).collect();
        let k = (1..=n)
            .find(|&j| selection_s(&pts, &all, j).is_ok())
            .unwrap();
        let coll = algorithm_utilde(&pts, &all, k).unwrap();
        assert!(coll.find_crossing(&pts).is_none(), "seed {seed}");
        assert_eq!(coll.covered(), all, "seed {seed}");
    }
}

#[test]
fn already_noncrossing_input_is_kept_covered() {
    let req = |x: i64, t: i64| Request {
        x: Q::from_integer(x),
        t: Q::from_integer(t),
        w: 1,
    };
    let inst = normalize_instance(&Instance {
        requests: vec![req(-1, 1), req(-2, 2), req(1, 1), req(2, 2)],
        k: 2,
        v: Q::from_integer(1),
    });
    let pts = PointSet::from_instance(&inst).unwrap();
    assert_eq!(certified_utilde(&inst, &pts, &[1, 2, 3, 4], 2), Ok(0));
}

#[test]
fn crossing_pair_is_repaired() {
    // Two chains through a shared crossing point region: (-2,2) → (2,6) and (2,2) → (-2,6).
    let req = |x: i64, t: i64| Request {
        x: Q::from_integer(x),
        t: Q::from_integer(t),
        w: 1,
    };
    let inst = normalize_instance(&Instance {
        requests: vec![req(-2, 2), req(2, 6), req(2, 2), req(-2, 6)],
        k: 2,
        v: Q::from_integer(1),
    });
    let pts = PointSet::from_instance(&inst).unwrap();
    let crossing = linecollect::PathCollection {
        paths: vec![vec![1, 2], vec![3, 4]],
    };
    assert!(crossing.find_crossing(&pts).is_some());
    assert!(certified_utilde(&inst, &pts, &[1, 2, 3, 4], 2).is_ok());
}
