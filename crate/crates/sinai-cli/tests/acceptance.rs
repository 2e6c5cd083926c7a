//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Criteria 7-10 and 12 run the predefined campaigns at the calibrated
//! configuration (uniform-elliptic eta0 = 0.12, gamma = 0.5, count threshold
//! (ln n)^1.8, visited-argmin anchor, master seed 0, 500 replications); the
//! pilot behind those constants is committed under `calibration/` at the
//! repository root. Oracle criteria 1-5 run at the two-point p = 0.3 family.
//!
//! Run with `cargo test -p sinai-cli --test acceptance -- --nocapture` to
//! see every line.

use std::sync::LazyLock;
use std::time::Instant;

use sinai_cli::calibration::calibrated_config_at;
use sinai_cli::config::{ExperimentConfig, ExperimentKind};
use sinai_cli::experiments::{run_experiment, run_walk_records, Aggregate, RepRecord};
use sinai_cli::formats;
use sinai_core::bd;
use sinai_core::env::{Environment, EnvironmentSpec};
use sinai_core::scale::{error_band_half_width, log_log, powf};
use sinai_core::seed::mix;

const HORIZONS: [u64; 3] = [10_000, 100_000, 500_000];

/// The walk campaigns at the three horizons, shared across criteria.
static CAMPAIGNS: LazyLock<Vec<(u64, Vec<RepRecord>)>> = LazyLock::new(|| {
    HORIZONS
        .iter()
        .map(|&n| {
            let cfg = calibrated_config_at(ExperimentKind::Theorem1, n);
            let (records, _) = run_walk_records(&cfg);
            (n, records)
        })
        .collect()
});

fn records_at(n: u64) -> &'static [RepRecord] {
    &CAMPAIGNS.iter().find(|(m, _)| *m == n).expect("horizon").1
}

/// The oracle campaign with one million excursions per pair, shared by
/// criteria 2, 3 and 5.
static ORACLE: LazyLock<sinai_cli::experiments::ExperimentOutput> = LazyLock::new(|| {
    let mut cfg = ExperimentConfig::defaults(ExperimentKind::Oracle);
    cfg.replications = 1_000_000;
    run_experiment(&cfg).expect("oracle experiment runs")
});

fn oracle_aggregate() -> &'static sinai_cli::experiments::OracleAggregate {
    match &ORACLE.aggregate {
        Aggregate::Oracle(agg) => agg,
        _ => unreachable!("oracle aggregate"),
    }
}

fn verdict(criterion: u32, pass: bool, detail: &str) {
    println!(
        "acceptance {criterion}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "acceptance {criterion} failed: {detail}");
}

#[test]
fn criterion_01_solver_exactness() {
    let start = Instant::now();
    let mut max_err = 0.0f64;
    for i in 0..1000u64 {
        let spec = EnvironmentSpec::two_point(0.3, mix(&[0xACC1, i])).unwrap();
        let env = Environment::sample(spec, (-16, 16)).unwrap();
        let m = (mix(&[i, 1]) % 11) as i64 - 5;
        let up = bd::excursion_visits_green(&env, m, m + 1, 8).unwrap();
        let down = bd::excursion_visits_green(&env, m, m - 1, 8).unwrap();
        let expect_up = env.alpha(m) / (1.0 - env.alpha(m + 1));
        let expect_down = (1.0 - env.alpha(m)) / env.alpha(m - 1);
        max_err = max_err
            .max((up - expect_up).abs())
            .max((down - expect_down).abs());
    }
    let flat = Environment::from_alphas(-16, vec![0.5; 33]).unwrap();
    let mut sym_err = 0.0f64;
    for k in -10i64..=10 {
        sym_err = sym_err.max((bd::excursion_visits_green(&flat, 0, k, 12).unwrap() - 1.0).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        1,
        max_err < 1e-12 && sym_err < 1e-12 && elapsed < 1.0,
        &format!(
            "neighbor error {max_err:.2e}, symmetric error {sym_err:.2e}, {elapsed:.3} s over 1000 environments"
        ),
    );
}

#[test]
fn criterion_02_monte_carlo_arbitration() {
    let agg = oracle_aggregate();
    let discrepancy_ok = (agg.discrepancy_green - 5.25).abs() < 1e-12
        && (agg.discrepancy_formula - 10.5).abs() < 1e-12
        && (agg.discrepancy_mc_mean - agg.discrepancy_green).abs()
            <= 4.0 * agg.discrepancy_mc_stderr;
    verdict(
        2,
        agg.mc_mismatches == 0 && discrepancy_ok,
        &format!(
            "{} of {} pairs within 4 stderr at {} excursions; divergence case solver {} vs closed form {} (mc {:.4} ± {:.4})",
            agg.mc_pairs - agg.mc_mismatches,
            agg.mc_pairs,
            agg.excursions_per_pair,
            agg.discrepancy_green,
            agg.discrepancy_formula,
            agg.discrepancy_mc_mean,
            agg.discrepancy_mc_stderr,
        ),
    );
}

#[test]
fn criterion_03_variance_bound() {
    let agg = oracle_aggregate();
    verdict(
        3,
        agg.variance_violations == 0,
        &format!(
            "{} violations of the variance bound over {} pairs (4-stderr guard)",
            agg.variance_violations, agg.mc_pairs
        ),
    );
}

#[test]
fn criterion_04_ellipticity_band() {
    let agg = oracle_aggregate();
    verdict(
        4,
        agg.band_violations == 0,
        &format!(
            "{} violations over {} random (env, m, k) triples",
            agg.band_violations, agg.band_triples
        ),
    );
}

#[test]
fn criterion_05_center_expectation() {
    let agg = oracle_aggregate();
    verdict(
        5,
        (agg.center_mean - 1.0).abs() <= 0.01,
        &format!(
            "mean visits at the excursion center {:.6} over {} excursions",
            agg.center_mean, agg.excursions_per_pair
        ),
    );
}

#[test]
fn criterion_06_band_arithmetic() {
    let u = error_band_half_width(500_000, 10.0);
    verdict(
        6,
        (u - 0.7206).abs() <= 1e-4,
        &format!("band half-width at n = 5e5, c0 = 10: {u:.6}"),
    );
}

fn band_success_fraction(records: &[RepRecord]) -> f64 {
    let eval = records.iter().filter(|r| r.anchor_bottom.is_some()).count();
    let ok = records
        .iter()
        .filter(|r| r.within_band == Some(true))
        .count();
    ok as f64 / eval as f64
}

#[test]
fn criterion_07_reconstruction_band() {
    let fractions: Vec<(u64, f64)> = HORIZONS
        .iter()
        .map(|&n| (n, band_success_fraction(records_at(n))))
        .collect();
    let at_half_million = fractions.last().unwrap().1;
    let non_decreasing = fractions.windows(2).all(|w| w[0].1 <= w[1].1);
    verdict(
        7,
        at_half_million >= 0.9 && non_decreasing,
        &format!(
            "success fractions {:?} (≥ 0.9 at n = 5e5 and non-decreasing required)",
            fractions
        ),
    );
}

#[test]
fn criterion_08_localization_bounds() {
    let records = records_at(500_000);
    let eval = records.iter().filter(|r| r.anchor_bottom.is_some()).count();
    let both = records
        .iter()
        .filter(|r| r.spread_ok == Some(true) && r.gap_ok == Some(true))
        .count();
    let fraction = both as f64 / eval as f64;
    let spread_bound = log_log(500_000) * log_log(500_000);
    let gap_bound = powf((500_000f64).ln(), 3.0);
    verdict(
        8,
        fraction >= 0.9,
        &format!(
            "{both}/{eval} replications meet both bounds ({spread_bound:.3} sites, {gap_bound:.1} steps); fraction {fraction:.3}"
        ),
    );
}

#[test]
fn criterion_09_coverage_and_size() {
    let medians: Vec<(u64, f64)> = HORIZONS
        .iter()
        .map(|&n| {
            let mut covs: Vec<f64> = records_at(n).iter().map(|r| r.coverage).collect();
            covs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            (n, covs[covs.len() / 2])
        })
        .collect();
    let records = records_at(500_000);
    let ratio_ok = records
        .iter()
        .filter(|r| r.size_ratio >= 0.1 && r.size_ratio <= 10.0)
        .count();
    let ratio_fraction = ratio_ok as f64 / records.len() as f64;
    let cov_median = medians.last().unwrap().1;
    let non_decreasing = medians.windows(2).all(|w| w[0].1 <= w[1].1);
    verdict(
        9,
        cov_median >= 0.8 && ratio_fraction >= 0.8 && non_decreasing,
        &format!(
            "coverage medians {medians:?}, size ratio in [0.1, 10] for {ratio_fraction:.3} of replications"
        ),
    );
}

#[test]
fn criterion_10_containment() {
    let records = records_at(500_000);
    let eval = records.iter().filter(|r| r.anchor_bottom.is_some()).count();
    let contained = records
        .iter()
        .filter(|r| r.containment == Some(true))
        .count();
    let fraction = contained as f64 / eval as f64;
    verdict(
        10,
        fraction >= 0.9,
        &format!("{contained}/{eval} replications keep the well-visited set inside the low-barrier interval"),
    );
}

#[test]
fn criterion_11_valley_checker() {
    let mut found = 0u32;
    let mut checked = 0u32;
    for i in 0..200u64 {
        let spec = if i % 2 == 0 {
            EnvironmentSpec::two_point(0.3, mix(&[0x11AC, i])).unwrap()
        } else {
            EnvironmentSpec::uniform_elliptic(0.12, mix(&[0x11AC, i])).unwrap()
        };
        let mut env = Environment::sample(spec, (-64, 64)).unwrap();
        let n = 10_000;
        let radius = sinai_core::landscape::search_radius(n, 4.0, env.sigma2()).min(2400);
        let outcome = sinai_core::landscape::find_basic_valley(&mut env, n, 2.0, radius);
        if let Some(bv) = outcome.valley {
            found += 1;
            let pot = env.potential();
            let check = sinai_core::landscape::is_valid_basic_valley(&pot, &bv, n, 2.0);
            assert!(
                check.minimality_checked,
                "window exceeded the exhaustive-check size"
            );
            if check.valid {
                checked += 1;
            }
        }
    }
    verdict(
        11,
        found >= 150 && checked == found,
        &format!("{checked}/{found} located valleys accepted by the independent checker"),
    );
}

#[test]
fn criterion_12_regression_slope() {
    let records = records_at(500_000);
    let mut slopes: Vec<f64> = records
        .iter()
        .filter_map(|r| r.slope.map(f64::abs))
        .collect();
    slopes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = slopes[slopes.len() / 2];
    verdict(
        12,
        median <= 1e-3,
        &format!("median |OLS slope| {median:.3e} over {} replications", slopes.len()),
    );
}

#[test]
fn criterion_13_determinism() {
    // Moderate config so two full runs stay cheap.
    let mut cfg = calibrated_config_at(ExperimentKind::Theorem1, 20_000);
    cfg.replications = 40;

    let out_a = run_experiment(&cfg).unwrap();
    let out_b = run_experiment(&cfg).unwrap();
    let json_a = serde_json::to_string_pretty(&out_a).unwrap();
    let json_b = serde_json::to_string_pretty(&out_b).unwrap();
    let reps_a = formats::replications_csv(&out_a.records).unwrap();
    let reps_b = formats::replications_csv(&out_b.records).unwrap();

    // Serial vs parallel aggregation.
    let mut serial_cfg = cfg.clone();
    serial_cfg.parallel = false;
    let out_serial = run_experiment(&serial_cfg).unwrap();
    let serial_matches = out_serial.records == out_a.records
        && out_serial.aggregate == out_a.aggregate;

    // Figure CSVs written twice.
    let dir = tempfile::tempdir().unwrap();
    let (dir_a, dir_b) = (dir.path().join("a"), dir.path().join("b"));
    formats::write_experiment_output(&out_a, &dir_a).unwrap();
    formats::write_experiment_output(&out_b, &dir_b).unwrap();
    let mut figures_match = true;
    for name in ["reconstruction.csv", "difference.csv", "replications.csv"] {
        let a = std::fs::read(dir_a.join(name)).ok();
        let b = std::fs::read(dir_b.join(name)).ok();
        figures_match &= a == b && a.is_some();
    }

    verdict(
        13,
        json_a == json_b && reps_a == reps_b && serial_matches && figures_match,
        &format!(
            "report bytes equal: {}, replication CSV equal: {}, serial == parallel: {serial_matches}, figure files equal: {figures_match}",
            json_a == json_b,
            reps_a == reps_b,
        ),
    );
}
