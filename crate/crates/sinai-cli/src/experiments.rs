//! The five predefined experiments and their replication pipeline.
//!
//! One replication = sample environment, simulate the walk, locate the
//! trapping valley, reconstruct, compare. Every experiment aggregates a
//! different slice of the same per-replication record, so a single pipeline
//! serves them all; the oracle experiment is the exception and sweeps the
//! excursion analytics instead.
//!
//! Seeds derive hierarchically: replication `r` of a campaign with master
//! seed `s` uses `mix(s, REP_ENV, r)` for its environment and
//! `mix(s, REP_WALK, r)` for its walk, so any replication can be re-run in
//! isolation.

use anyhow::Result;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use sinai_core::bd;
use sinai_core::env::Environment;
use sinai_core::estimator::{
    estimate_table, localize_bottom, reconstruction_error, target_profile, visited_bottom,
    EstimateTable, TargetProfile,
};
use sinai_core::landscape::{
    find_basic_valley, low_barrier_interval_around, search_radius,
};
use sinai_core::scale::{error_band_half_width, ln};
use sinai_core::seed::{domain, mix};
use sinai_core::walk::WalkRun;
use sinai_core::Site;

use crate::calibration;
use crate::config::{AnchorKind, ExperimentConfig, ExperimentKind};

/// Everything one replication produces, flattened for CSV and JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepRecord {
    pub rep: u64,
    pub env_seed: u64,
    pub walk_seed: u64,
    pub final_position: Site,
    // Valley.
    pub valley_found: bool,
    pub window_capped: bool,
    pub valley_bottom: Option<Site>,
    pub barrier_left: Option<Site>,
    pub barrier_right: Option<Site>,
    pub valley_depth: Option<f64>,
    // Truth-side anchor actually used for the comparisons below.
    pub anchor_bottom: Option<Site>,
    /// Valley bottom equals the visited-range argmin (the two anchors
    /// agree); a finite-size health indicator of the valley machinery.
    pub anchors_agree: Option<bool>,
    // Trajectory-side quantities.
    pub pivot: Site,
    pub pivot_time: u64,
    pub set_size: usize,
    pub set_lo: Option<Site>,
    pub set_hi: Option<Site>,
    pub empty_set: bool,
    pub connected: bool,
    pub coverage: f64,
    pub size_ratio: f64,
    pub favorites_in_set: bool,
    // Reconstruction vs truth (valley needed).
    pub sup_error: Option<f64>,
    pub within_band: Option<bool>,
    pub band: f64,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub containment: Option<bool>,
    pub v_lo: Option<Site>,
    pub v_hi: Option<Site>,
    // Localization vs truth (valley needed).
    pub favorite_spread: Option<Site>,
    pub spread_ok: Option<bool>,
    pub time_gap: Option<u64>,
    pub gap_ok: Option<bool>,
}

/// Intermediate artifacts of one replication, for figure emission.
pub struct RepArtifacts {
    pub record: RepRecord,
    pub table: EstimateTable,
    pub profile: Option<TargetProfile>,
}

/// Run the full pipeline for one replication.
pub fn run_replication(cfg: &ExperimentConfig, rep: u64) -> RepArtifacts {
    let env_seed = mix(&[cfg.master_seed, domain::REP_ENV, rep]);
    let walk_seed = mix(&[cfg.master_seed, domain::REP_WALK, rep]);
    let spec = cfg
        .env
        .to_spec(env_seed)
        .expect("config validated before running");
    let mut env = Environment::sample(spec, (-64, 64)).expect("window contains 0");
    let run = WalkRun::simulate(&mut env, cfg.n, walk_seed);

    let radius = search_radius(cfg.n, cfg.d0, env.sigma2());
    let outcome = find_basic_valley(&mut env, cfg.n, cfg.gamma, radius);
    let table = estimate_table(&run, cfg.gamma, cfg.c0, cfg.threshold_override);
    let set = table.well_visited();
    let fav = run.favorite_sites();

    let mut record = RepRecord {
        rep,
        env_seed,
        walk_seed,
        final_position: run.final_position(),
        valley_found: outcome.valley.is_some(),
        window_capped: outcome.window_capped,
        valley_bottom: None,
        barrier_left: None,
        barrier_right: None,
        valley_depth: None,
        anchor_bottom: None,
        anchors_agree: None,
        pivot: set.pivot,
        pivot_time: set.pivot_time,
        set_size: set.sites.len(),
        set_lo: set.sites.first().copied(),
        set_hi: set.sites.last().copied(),
        empty_set: set.is_empty(),
        connected: set.is_interval(),
        coverage: 0.0,
        size_ratio: {
            let l = ln(cfg.n as f64);
            set.sites.len() as f64 / (l * l)
        },
        favorites_in_set: fav.sites.iter().all(|&k| set.contains(k)),
        sup_error: None,
        within_band: None,
        band: error_band_half_width(cfg.n, cfg.c0),
        slope: None,
        intercept: None,
        containment: None,
        v_lo: None,
        v_hi: None,
        favorite_spread: None,
        spread_ok: None,
        time_gap: None,
        gap_ok: None,
    };
    // Coverage is trajectory-only.
    let covered: u64 = set
        .sites
        .iter()
        .map(|&k| run.ledger().count(k))
        .sum();
    record.coverage = covered as f64 / cfg.n as f64;

    // The potential must cover both the valley and every visited site.
    let (llo, lhi) = run.ledger().range();
    let (mut wlo, mut whi) = (llo, lhi);
    if let Some(bv) = &outcome.valley {
        wlo = wlo.min(bv.triple.left);
        whi = whi.max(bv.triple.right);
    }
    env.ensure_window(wlo, whi);
    let pot = env.potential();

    let seat = visited_bottom(&pot, &run);
    if let Some(bv) = &outcome.valley {
        let v = bv.triple;
        record.valley_bottom = Some(v.bottom);
        record.barrier_left = Some(v.left);
        record.barrier_right = Some(v.right);
        record.valley_depth = sinai_core::landscape::depth(&pot, &v).ok();
        record.anchors_agree = Some(v.bottom == seat);
    }

    // Truth-side anchor: the valley bottom (definitional; absent when the
    // search fails) or the visited-range argmin (always defined).
    let anchor = match cfg.anchor {
        AnchorKind::Valley => outcome.valley.as_ref().map(|bv| bv.triple.bottom),
        AnchorKind::VisitedArgmin => Some(seat),
    };
    record.anchor_bottom = anchor;

    let mut profile = None;
    if let Some(bottom) = anchor {
        let span = match (cfg.anchor, &outcome.valley) {
            (AnchorKind::Valley, Some(bv)) => bv.triple.span(),
            _ => pot.window(),
        };
        let prof = target_profile(&pot, bottom, cfg.n).expect("anchor inside window");
        let recon = reconstruction_error(&table, &prof);
        record.sup_error = recon.sup_error;
        record.within_band = Some(recon.within_band || recon.empty);
        record.slope = if recon.empty { None } else { Some(recon.slope) };
        record.intercept = if recon.empty {
            None
        } else {
            Some(recon.intercept)
        };

        let (v_lo, v_hi) = low_barrier_interval_around(&pot, bottom, span, cfg.n, cfg.gamma);
        record.v_lo = Some(v_lo);
        record.v_hi = Some(v_hi);
        record.containment = Some(set.sites.iter().all(|&k| k >= v_lo && k <= v_hi));

        let loc = localize_bottom(&run, Some(bottom));
        record.favorite_spread = loc.favorite_spread;
        record.spread_ok = loc.spread_ok;
        record.time_gap = loc.time_gap;
        record.gap_ok = loc.gap_ok;

        profile = Some(prof);
    }
    RepArtifacts {
        record,
        table,
        profile,
    }
}

fn median_f64(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(|a, b| a.partial_cmp(b).expect("no NaN in medians"));
    let n = values.len();
    Some(if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    })
}

fn fraction(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Aggregate statistics; one variant per experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Aggregate {
    Theorem1 {
        replications: u64,
        valley_found: u64,
        window_capped: u64,
        /// Replications where the valley bottom equals the visited argmin.
        anchors_agree: u64,
        evaluated: u64,
        band_successes: u64,
        empty_sets: u64,
        success_fraction: f64,
        median_sup_error: Option<f64>,
        median_abs_slope: Option<f64>,
        band: f64,
    },
    Prop1 {
        replications: u64,
        evaluated: u64,
        spread_ok: u64,
        gap_ok: u64,
        both_ok: u64,
        both_fraction: f64,
        spread_bound: f64,
        gap_bound: f64,
        median_spread: Option<f64>,
        median_gap: Option<f64>,
    },
    Prop2 {
        replications: u64,
        median_coverage: Option<f64>,
        size_ratio_in_range: u64,
        size_ratio_fraction: f64,
        favorites_in_set: u64,
        favorites_fraction: f64,
        connected: u64,
        connected_fraction: f64,
        empty_sets: u64,
    },
    Containment {
        replications: u64,
        evaluated: u64,
        contained: u64,
        containment_fraction: f64,
    },
    Oracle(Box<OracleAggregate>),
}

/// A single record of the oracle sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRecord {
    pub env_seed: u64,
    pub center: Site,
    pub target: Site,
    pub expected_formula: f64,
    pub expected_green: f64,
    pub mc_mean: f64,
    pub mc_stderr: f64,
    pub mc_variance: f64,
    pub variance_bound: f64,
    pub variance_guard: f64,
    pub band_value: f64,
    pub band_ok: bool,
    pub capped: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleAggregate {
    pub excursions_per_pair: u64,
    // Neighbor identity sweep.
    pub neighbor_pairs: u64,
    pub neighbor_max_error: f64,
    // Symmetric environment sweep.
    pub symmetric_max_error: f64,
    // Monte Carlo arbitration sweep.
    pub mc_pairs: u64,
    pub mc_mismatches: u64,
    pub variance_violations: u64,
    pub capped_excursions: u64,
    // Ellipticity sweep.
    pub band_triples: u64,
    pub band_violations: u64,
    // Center value (one excursion always scores exactly one visit).
    pub center_mean: f64,
    // The case where the printed closed form and the solver part ways.
    pub discrepancy_green: f64,
    pub discrepancy_formula: f64,
    pub discrepancy_mc_mean: f64,
    pub discrepancy_mc_stderr: f64,
}

/// A finished experiment: records, aggregate, and the pass verdict against
/// the pinned thresholds.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentOutput {
    pub experiment: String,
    pub config: ExperimentConfig,
    pub config_hash: String,
    pub version: String,
    pub aggregate: Aggregate,
    pub pass: bool,
    #[serde(skip)]
    pub records: Vec<RepRecord>,
    #[serde(skip)]
    pub oracle_records: Vec<OracleRecord>,
    #[serde(skip)]
    pub first_rep: Option<(EstimateTable, Option<TargetProfile>)>,
}

/// Run all replications of the configured walk pipeline, in order.
pub fn run_walk_records(cfg: &ExperimentConfig) -> (Vec<RepRecord>, Option<(EstimateTable, Option<TargetProfile>)>) {
    let reps: Vec<u64> = (0..cfg.replications).collect();
    let artifacts: Vec<RepArtifacts> = if cfg.parallel {
        reps.par_iter().map(|&r| run_replication(cfg, r)).collect()
    } else {
        reps.iter().map(|&r| run_replication(cfg, r)).collect()
    };
    let first = artifacts
        .first()
        .map(|a| (a.table.clone(), a.profile.clone()));
    (artifacts.into_iter().map(|a| a.record).collect(), first)
}

/// Run the configured experiment end to end.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let (aggregate, records, oracle_records, first_rep) = match cfg.experiment {
        ExperimentKind::Oracle => {
            let (agg, recs) = run_oracle(cfg);
            (Aggregate::Oracle(Box::new(agg)), Vec::new(), recs, None)
        }
        _ => {
            let (records, first) = run_walk_records(cfg);
            let agg = aggregate_walk(cfg, &records);
            (agg, records, Vec::new(), first)
        }
    };
    let pass = verdict(&aggregate);
    Ok(ExperimentOutput {
        experiment: cfg.experiment.name().to_string(),
        config: cfg.clone(),
        config_hash: cfg.hash(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        aggregate,
        pass,
        records,
        oracle_records,
        first_rep,
    })
}

fn aggregate_walk(cfg: &ExperimentConfig, records: &[RepRecord]) -> Aggregate {
    match cfg.experiment {
        ExperimentKind::Theorem1 => {
            let valley_found = records.iter().filter(|r| r.valley_found).count();
            let capped = records.iter().filter(|r| r.window_capped).count();
            let agree = records
                .iter()
                .filter(|r| r.anchors_agree == Some(true))
                .count();
            let evaluated = records.iter().filter(|r| r.anchor_bottom.is_some()).count();
            let successes = records
                .iter()
                .filter(|r| r.within_band == Some(true))
                .count();
            let empty = records
                .iter()
                .filter(|r| r.anchor_bottom.is_some() && r.empty_set)
                .count();
            let mut sups: Vec<f64> = records.iter().filter_map(|r| r.sup_error).collect();
            let mut slopes: Vec<f64> =
                records.iter().filter_map(|r| r.slope.map(f64::abs)).collect();
            Aggregate::Theorem1 {
                replications: cfg.replications,
                valley_found: valley_found as u64,
                window_capped: capped as u64,
                anchors_agree: agree as u64,
                evaluated: evaluated as u64,
                band_successes: successes as u64,
                empty_sets: empty as u64,
                success_fraction: fraction(successes, evaluated),
                median_sup_error: median_f64(&mut sups),
                median_abs_slope: median_f64(&mut slopes),
                band: error_band_half_width(cfg.n, cfg.c0),
            }
        }
        ExperimentKind::Prop1 => {
            let eval: Vec<&RepRecord> =
                records.iter().filter(|r| r.anchor_bottom.is_some()).collect();
            let spread_ok = eval.iter().filter(|r| r.spread_ok == Some(true)).count();
            let gap_ok = eval.iter().filter(|r| r.gap_ok == Some(true)).count();
            let both = eval
                .iter()
                .filter(|r| r.spread_ok == Some(true) && r.gap_ok == Some(true))
                .count();
            let mut spreads: Vec<f64> = eval
                .iter()
                .filter_map(|r| r.favorite_spread.map(|s| s as f64))
                .collect();
            let mut gaps: Vec<f64> =
                eval.iter().filter_map(|r| r.time_gap.map(|g| g as f64)).collect();
            Aggregate::Prop1 {
                replications: cfg.replications,
                evaluated: eval.len() as u64,
                spread_ok: spread_ok as u64,
                gap_ok: gap_ok as u64,
                both_ok: both as u64,
                both_fraction: fraction(both, eval.len()),
                spread_bound: {
                    let l = sinai_core::scale::log_log(cfg.n);
                    l * l
                },
                gap_bound: {
                    let l = ln(cfg.n as f64);
                    l * l * l
                },
                median_spread: median_f64(&mut spreads),
                median_gap: median_f64(&mut gaps),
            }
        }
        ExperimentKind::Prop2 => {
            let mut coverages: Vec<f64> = records.iter().map(|r| r.coverage).collect();
            let in_range = records
                .iter()
                .filter(|r| {
                    r.size_ratio >= calibration::SIZE_RATIO_RANGE.0
                        && r.size_ratio <= calibration::SIZE_RATIO_RANGE.1
                })
                .count();
            let favored = records.iter().filter(|r| r.favorites_in_set).count();
            let connected = records.iter().filter(|r| r.connected).count();
            let empty = records.iter().filter(|r| r.empty_set).count();
            Aggregate::Prop2 {
                replications: cfg.replications,
                median_coverage: median_f64(&mut coverages),
                size_ratio_in_range: in_range as u64,
                size_ratio_fraction: fraction(in_range, records.len()),
                favorites_in_set: favored as u64,
                favorites_fraction: fraction(favored, records.len()),
                connected: connected as u64,
                connected_fraction: fraction(connected, records.len()),
                empty_sets: empty as u64,
            }
        }
        ExperimentKind::Containment => {
            let eval: Vec<&RepRecord> =
                records.iter().filter(|r| r.anchor_bottom.is_some()).collect();
            let contained = eval.iter().filter(|r| r.containment == Some(true)).count();
            Aggregate::Containment {
                replications: cfg.replications,
                evaluated: eval.len() as u64,
                contained: contained as u64,
                containment_fraction: fraction(contained, eval.len()),
            }
        }
        ExperimentKind::Oracle => unreachable!("oracle handled separately"),
    }
}

fn verdict(aggregate: &Aggregate) -> bool {
    match aggregate {
        Aggregate::Theorem1 {
            success_fraction,
            median_abs_slope,
            ..
        } => {
            *success_fraction >= calibration::BAND_SUCCESS_MIN
                && median_abs_slope.is_none_or(|s| s <= calibration::REGRESSION_MEDIAN_SLOPE_MAX)
        }
        Aggregate::Prop1 { both_fraction, .. } => {
            *both_fraction >= calibration::LOCALIZATION_SUCCESS_MIN
        }
        Aggregate::Prop2 {
            median_coverage,
            size_ratio_fraction,
            ..
        } => {
            median_coverage.is_some_and(|c| c >= calibration::COVERAGE_MEDIAN_MIN)
                && *size_ratio_fraction >= calibration::SIZE_RATIO_FRACTION_MIN
        }
        Aggregate::Containment {
            containment_fraction,
            ..
        } => *containment_fraction >= calibration::CONTAINMENT_MIN,
        Aggregate::Oracle(agg) => {
            agg.neighbor_max_error < 1e-12
                && agg.symmetric_max_error < 1e-12
                && agg.mc_mismatches == 0
                && agg.variance_violations == 0
                && agg.band_violations == 0
                && (agg.center_mean - 1.0).abs() <= 0.01
                && (agg.discrepancy_green - 5.25).abs() < 1e-12
                && (agg.discrepancy_formula - 10.5).abs() < 1e-12
                && (agg.discrepancy_mc_mean - agg.discrepancy_green).abs()
                    <= 4.0 * agg.discrepancy_mc_stderr
        }
    }
}

/// The excursion-analytics sweep.
fn run_oracle(cfg: &ExperimentConfig) -> (OracleAggregate, Vec<OracleRecord>) {
    let excursions = cfg.replications.max(1);

    // Neighbor identity on random environments: solver vs first-step value.
    let neighbor_pairs = 1000u64;
    let neighbor_max_error = (0..neighbor_pairs)
        .into_par_iter()
        .map(|i| {
            let seed = mix(&[cfg.master_seed, domain::REP_ENV, i]);
            let spec = cfg.env.to_spec(seed).expect("validated");
            let env = Environment::sample(spec, (-16, 16)).expect("window");
            let m = (mix(&[seed, 1]) % 11) as i64 - 5;
            let up = bd::excursion_visits_green(&env, m, m + 1, 8).expect("in window");
            let expect_up = env.alpha(m) / (1.0 - env.alpha(m + 1));
            let down = bd::excursion_visits_green(&env, m, m - 1, 8).expect("in window");
            let expect_down = (1.0 - env.alpha(m)) / env.alpha(m - 1);
            (up - expect_up).abs().max((down - expect_down).abs())
        })
        .reduce(|| 0.0, f64::max);

    // Symmetric environment: the solver returns 1 everywhere.
    let flat = Environment::from_alphas(-16, vec![0.5; 33]).expect("valid alphas");
    let symmetric_max_error = (-10i64..=10)
        .map(|k| {
            (bd::excursion_visits_green(&flat, 0, k, 12).expect("in window") - 1.0).abs()
        })
        .fold(0.0, f64::max);

    // Ellipticity band sweep.
    let band_triples = 1000u64;
    let band_violations = (0..band_triples)
        .into_par_iter()
        .filter(|&i| {
            let seed = mix(&[cfg.master_seed, domain::REP_WALK, i]);
            let spec = cfg.env.to_spec(seed).expect("validated");
            let env = Environment::sample(spec, (-24, 24)).expect("window");
            let m = (mix(&[seed, 2]) % 9) as i64 - 4;
            let off = 1 + (mix(&[seed, 3]) % 8) as i64;
            let k = if mix(&[seed, 4]).is_multiple_of(2) { m + off } else { m - off };
            !bd::ellipticity_band(&env, m, k).expect("k != m").ok
        })
        .count() as u64;

    // Monte Carlo arbitration and variance-bound sweep.
    let mc_pairs = 20u64;
    let records: Vec<OracleRecord> = (0..mc_pairs)
        .into_par_iter()
        .map(|i| {
            let seed = mix(&[cfg.master_seed, domain::EXCURSION, i]);
            let spec = cfg.env.to_spec(seed).expect("validated");
            let env = Environment::sample(spec, (-24, 24)).expect("window");
            let m = 0i64;
            let off = 2 + (mix(&[seed, 5]) % 5) as i64;
            let k = if mix(&[seed, 6]).is_multiple_of(2) { m + off } else { m - off };
            let hw = 10;
            let green = bd::excursion_visits_green(&env, m, k, hw).expect("in window");
            let formula = bd::excursion_visits_formula(&env, m, k).expect("in window");
            let mc = bd::mc_excursion_visits(
                &env,
                m,
                k,
                hw,
                excursions,
                mix(&[seed, 7]),
                bd::EXCURSION_STEP_CAP,
            )
            .expect("valid");
            let vb = bd::variance_bound(&env, m, k, hw).expect("k != m");
            let band = bd::ellipticity_band(&env, m, k).expect("k != m");
            OracleRecord {
                env_seed: seed,
                center: m,
                target: k,
                expected_formula: formula,
                expected_green: green,
                mc_mean: mc.mean,
                mc_stderr: mc.stderr,
                mc_variance: mc.variance,
                variance_bound: vb,
                variance_guard: mc.variance_stderr,
                band_value: band.value,
                band_ok: band.ok,
                capped: mc.capped,
            }
        })
        .collect();

    let mc_mismatches = records
        .iter()
        .filter(|r| (r.mc_mean - r.expected_green).abs() > 4.0 * r.mc_stderr)
        .count() as u64;
    let variance_violations = records
        .iter()
        .filter(|r| r.mc_variance > r.variance_bound + 4.0 * r.variance_guard)
        .count() as u64;
    let capped_excursions = records.iter().map(|r| r.capped).sum();

    // Center value: every excursion scores exactly one visit at the center.
    let spec = cfg
        .env
        .to_spec(mix(&[cfg.master_seed, 11]))
        .expect("validated");
    let env = Environment::sample(spec, (-16, 16)).expect("window");
    let center = bd::mc_excursion_visits(
        &env,
        0,
        0,
        8,
        excursions,
        mix(&[cfg.master_seed, 12]),
        bd::EXCURSION_STEP_CAP,
    )
    .expect("valid");

    // The divergence case between the printed closed form and the solver.
    let mut alphas = vec![0.5; 21];
    alphas[10] = 0.7;
    alphas[11] = 0.6;
    alphas[12] = 0.8;
    let env = Environment::from_alphas(-10, alphas).expect("valid alphas");
    let discrepancy_green = bd::excursion_visits_green(&env, 0, 2, 8).expect("in window");
    let discrepancy_formula = bd::excursion_visits_formula(&env, 0, 2).expect("in window");
    let dmc = bd::mc_excursion_visits(
        &env,
        0,
        2,
        8,
        excursions,
        mix(&[cfg.master_seed, 13]),
        bd::EXCURSION_STEP_CAP,
    )
    .expect("valid");

    (
        OracleAggregate {
            excursions_per_pair: excursions,
            neighbor_pairs,
            neighbor_max_error,
            symmetric_max_error,
            mc_pairs,
            mc_mismatches,
            variance_violations,
            capped_excursions,
            band_triples,
            band_violations,
            center_mean: center.mean,
            discrepancy_green,
            discrepancy_formula,
            discrepancy_mc_mean: dmc.mean,
            discrepancy_mc_stderr: dmc.stderr,
        },
        records,
    )
}
