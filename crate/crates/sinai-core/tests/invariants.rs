//! Property tests for the structural invariants of environments, runs, and
//! the estimator pipeline.

use proptest::prelude::*;
use sinai_core::env::{Environment, EnvironmentSpec};
use sinai_core::estimator::well_visited_sites;
use sinai_core::walk::WalkRun;

fn two_point(seed: u64) -> EnvironmentSpec {
    EnvironmentSpec::two_point(0.3, seed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ellipticity_holds_for_every_site(seed in 0u64..1_000_000, half in 1i64..200) {
        let env = Environment::sample(two_point(seed), (-half, half)).unwrap();
        let eta0 = env.eta0();
        for &a in env.alpha_slice() {
            prop_assert!(a >= eta0 && a <= 1.0 - eta0);
        }
    }

    #[test]
    fn extension_orders_agree(seed in 0u64..1_000_000, a in 1i64..40, b in 1i64..40) {
        let env = Environment::sample(two_point(seed), (-a, a)).unwrap();
        let big = a + b;
        let one_shot = Environment::sample(two_point(seed), (-big, big)).unwrap();
        let stepped = env.extended((-a - b, a)).unwrap().extended((-big, big)).unwrap();
        prop_assert_eq!(one_shot, stepped);
    }

    #[test]
    fn potential_shift_consistency(seed in 0u64..1_000_000) {
        let env = Environment::sample(two_point(seed), (-60, 60)).unwrap();
        let pot = env.potential();
        for (j, k) in [(-50i64, -10i64), (-25, 25), (5, 55)] {
            let sum: f64 = ((j + 1)..=k).map(|i| env.epsilon(i)).sum();
            prop_assert!((pot.s(k) - pot.s(j) - sum).abs() < 1e-10);
        }
    }

    #[test]
    fn ledger_conservation_and_replay(seed in 0u64..100_000, n in 1u64..5_000) {
        let mut env = Environment::sample(two_point(seed), (-16, 16)).unwrap();
        let run = WalkRun::simulate(&mut env, n, seed ^ 0xabcd);
        prop_assert_eq!(run.ledger().total(), n);
        let rebuilt = WalkRun::from_steps(run.steps().clone(), run.walk_seed());
        prop_assert_eq!(&rebuilt, &run);
        // Position after replay equals the recorded final position.
        let last = run.steps().positions().last().unwrap();
        prop_assert_eq!(last, run.final_position());
    }

    #[test]
    fn pivot_minimizes_absolute_value(seed in 0u64..100_000, n in 10u64..3_000) {
        let mut env = Environment::sample(two_point(seed), (-16, 16)).unwrap();
        let run = WalkRun::simulate(&mut env, n, seed.wrapping_mul(31));
        let fav = run.favorite_sites();
        prop_assert!(fav.sites.contains(&fav.pivot));
        for &k in &fav.sites {
            prop_assert!(fav.pivot.abs() <= k.abs());
        }
        // Every favorite attains the max count.
        for &k in &fav.sites {
            prop_assert_eq!(run.ledger().count(k), fav.max_visits);
        }
    }

    #[test]
    fn post_hit_telescopes(seed in 0u64..100_000, n in 50u64..2_000, t0_frac in 0.0f64..1.0) {
        let mut env = Environment::sample(two_point(seed), (-16, 16)).unwrap();
        let run = WalkRun::simulate(&mut env, n, seed ^ 0x77);
        let t0 = 1 + ((n - 1) as f64 * t0_frac) as u64;
        let post = run.post_hit_counts(t0).unwrap();
        let (lo, hi) = run.ledger().range();
        for k in lo..=hi {
            let expect = run.ledger().count(k) - run.local_time(k, t0 - 1).unwrap();
            prop_assert_eq!(post.count(k), expect);
        }
    }

    #[test]
    fn well_visited_shrinks_with_gamma(seed in 0u64..100_000, n in 2_000u64..20_000) {
        let mut env = Environment::sample(two_point(seed), (-16, 16)).unwrap();
        let run = WalkRun::simulate(&mut env, n, seed ^ 0x3333);
        let lo_set = well_visited_sites(&run, 0.8, None);
        let hi_set = well_visited_sites(&run, 1.6, None);
        for k in &hi_set.sites {
            prop_assert!(lo_set.contains(*k));
        }
        // The pivot is in the set whenever its count clears the threshold.
        if run.favorite_sites().max_visits as f64 >= lo_set.threshold {
            prop_assert!(lo_set.contains(lo_set.pivot));
        }
    }
}
