use linecollect::geometry::{alpha_beta_inverse, alpha_beta_transform};
use linecollect::instance_io::{
    normalize_instance, parse_instance, serialize_instance, Instance, Request,
};
use linecollect::oracles::brute_force;
use linecollect::validate::certify;
use linecollect::{solve, PointSet, SolverConfig, Q};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Q> {
    (-40i64..40, 1i64..6).prop_map(|(n, d)| Q::new(n, d))
}

fn instance(max_n: usize, max_k: usize) -> impl Strategy<Value = Instance> {
    let req = (-6i64..=6, 0i64..=6, 0i64..10).prop_map(|(x, t, w)| Request {
        x: Q::from_integer(x),
        t: Q::from_integer(t),
        w,
    });
    (prop::collection::vec(req, 0..=max_n), 1..=max_k, 1i64..3).prop_map(|(requests, k, v)| {
        Instance {
            requests,
            k,
            v: Q::from_integer(v),
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn transform_round_trips(x in rational(), t in rational()) {
        let (a, b) = alpha_beta_transform(x, t);
        prop_assert_eq!(alpha_beta_inverse(a, b), (x, t));
    }

    #[test]
    fn instance_text_round_trips(inst in instance(10, 4)) {
        let back = parse_instance(&serialize_instance(&inst)).unwrap();
        prop_assert_eq!(back, inst);
    }

    #[test]
    fn solve_is_optimal_and_certified(inst in instance(10, 4)) {
        let norm = normalize_instance(&inst);
        let sol = solve(&norm, SolverConfig::default()).unwrap();
        let pts = PointSet::from_instance(&norm).unwrap();
        for i in 1..=norm.k {
            prop_assert_eq!(sol.round_weights()[i - 1], brute_force(&pts, i).unwrap());
        }
        prop_assert!(certify(&norm, &sol).is_ok());
    }

    #[test]
    fn small_thresholds_agree(inst in instance(10, 3), threshold in 1usize..5) {
        let norm = normalize_instance(&inst);
        let cfg = SolverConfig { base_case_threshold: threshold, trace: false };
        let a = solve(&norm, cfg).unwrap().round_weights();
        let b = solve(&norm, SolverConfig::default()).unwrap().round_weights();
        prop_assert_eq!(a, b);
    }
}
