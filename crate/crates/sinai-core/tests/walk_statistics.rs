//! Distributional sanity checks of the simulator against classical values.

use sinai_core::env::Environment;
use sinai_core::walk::WalkRun;

#[test]
fn symmetric_walk_clt() {
    // alpha = 1/2 everywhere: 200 runs of 1e6 steps; the mean endpoint is
    // within 3·sqrt(n)/sqrt(200) of 0.
    let reps = 200;
    let n = 1_000_000u64;
    let base = Environment::from_alphas(-10_000, vec![0.5; 20_001]).unwrap();
    let mut sum = 0.0f64;
    for w in 0..reps {
        let mut env = base.clone();
        let run = WalkRun::simulate(&mut env, n, 0xC17 + w);
        sum += run.final_position() as f64;
    }
    let mean = sum / reps as f64;
    let bound = 3.0 * (n as f64).sqrt() / (reps as f64).sqrt();
    assert!(mean.abs() < bound, "mean {mean} vs bound {bound}");
}

#[test]
fn quenched_walk_stays_near_origin() {
    // A strongly trapping two-point environment keeps the walk within a
    // polylog range; this exercises window growth bookkeeping.
    let spec = sinai_core::env::EnvironmentSpec::two_point(0.3, 2024).unwrap();
    let mut env = Environment::sample(spec, (-16, 16)).unwrap();
    let run = WalkRun::simulate(&mut env, 500_000, 99);
    let (lo, hi) = run.ledger().range();
    assert!(lo > -3_000 && hi < 3_000, "range [{lo}, {hi}]");
    let (wlo, whi) = env.window();
    assert!(wlo <= lo && whi >= hi);
}
