//! Oracle pairing for the valley machinery: the constructive search must
//! produce valleys that the independent exhaustive checker accepts, and the
//! low-barrier interval must match per-site brute force.

use sinai_core::env::{Environment, EnvironmentSpec};
use sinai_core::landscape::{
    find_basic_valley, is_valid_basic_valley, low_barrier_interval, search_radius, side_condition,
    validate_triple,
};
use sinai_core::scale::barrier_bound;

const N: u64 = 10_000;
const GAMMA: f64 = 2.0;

fn sampled(seed: u64) -> Environment {
    let spec = EnvironmentSpec::two_point(0.3, seed).unwrap();
    Environment::sample(spec, (-64, 64)).unwrap()
}

#[test]
fn search_output_passes_checker_on_random_environments() {
    let mut found = 0u32;
    let mut absent = 0u32;
    for seed in 0..200u64 {
        let mut env = sampled(seed);
        let radius = search_radius(N, 4.0, env.sigma2()).min(2400);
        let outcome = find_basic_valley(&mut env, N, GAMMA, radius);
        match outcome.valley {
            None => {
                absent += 1;
                assert!(outcome.window_capped, "absence must carry the cap flag");
            }
            Some(bv) => {
                found += 1;
                let pot = env.potential();
                validate_triple(&pot, &bv.triple).expect("structural equalities");
                assert!(bv.side_condition_ok);
                assert!(side_condition(&pot, &bv.triple, N, GAMMA));
                let check = is_valid_basic_valley(&pot, &bv, N, GAMMA);
                assert!(
                    check.minimality_checked,
                    "seed {seed}: window too large for the exhaustive check"
                );
                assert!(check.valid, "seed {seed}: checker rejected {:?}", bv.triple);
            }
        }
    }
    // The search succeeds on the overwhelming majority of environments at
    // this scale; a few capped searches are expected.
    assert!(found >= 180, "found {found}, absent {absent}");
}

#[test]
fn low_barrier_interval_matches_brute_force() {
    for seed in 0..60u64 {
        let mut env = sampled(seed + 1000);
        let radius = search_radius(N, 4.0, env.sigma2()).min(2400);
        let Some(bv) = find_basic_valley(&mut env, N, GAMMA, radius).valley else {
            continue;
        };
        let pot = env.potential();
        let (lo, hi) = low_barrier_interval(&pot, &bv, N, GAMMA);
        let v = bv.triple;
        assert!(lo <= v.bottom && v.bottom <= hi);
        assert!(lo >= v.left && hi <= v.right);
        let bound = barrier_bound(N, GAMMA);
        for k in v.left..=v.right {
            let (a, b) = if k <= v.bottom {
                (k, v.bottom)
            } else {
                (v.bottom, k)
            };
            let mut barrier = f64::NEG_INFINITY;
            for j in a..=b {
                barrier = barrier.max(pot.s(j) - pot.s(v.bottom));
            }
            assert_eq!(k >= lo && k <= hi, barrier < bound, "seed {seed} site {k}");
        }
    }
}

#[test]
fn good_environment_defaults_hold() {
    use sinai_core::landscape::good_environment_check;
    use sinai_core::seed::mix;

    let mut passed = 0;
    let total = 30;
    for i in 0..total {
        let spec = EnvironmentSpec::two_point(0.3, mix(&[0x6E, i])).unwrap();
        let mut env = Environment::sample(spec, (-64, 64)).unwrap();
        let rep = good_environment_check(&mut env, 500_000, 2.2, 4.0, 16.0);
        assert_eq!(rep.d0, 4.0);
        assert_eq!(rep.d1, 16.0);
        if !rep.basic_valley_exists {
            // An absent valley zeroes the dependent flags.
            assert!(!rep.window_bound_ok && !rep.weight_ok);
            continue;
        }
        assert!(rep.excursion_weight >= 1.0, "bottom contributes one visit");
        if rep.window_bound_ok && rep.weight_ok {
            passed += 1;
        }
    }
    // The d0 = 4, d1 = 16 defaults were chosen so the vast majority of
    // environments pass at this horizon.
    assert!(passed * 100 >= total * 90, "only {passed}/{total} passed");
}

#[test]
fn depth_threshold_is_met_with_margin_semantics() {
    for seed in 0..60u64 {
        let mut env = sampled(seed + 5000);
        let radius = search_radius(N, 4.0, env.sigma2()).min(2400);
        let Some(bv) = find_basic_valley(&mut env, N, GAMMA, radius).valley else {
            continue;
        };
        let pot = env.potential();
        let d = sinai_core::landscape::depth(&pot, &bv.triple).unwrap();
        assert!(d >= bv.depth_threshold, "seed {seed}: depth {d}");
        assert!(bv.triple.contains(0));
    }
}
