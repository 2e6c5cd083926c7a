//! `sinai`: simulate random walks in random environments, analyse the
//! potential landscape, reconstruct the potential from local times, and run
//! the predefined Monte Carlo experiments.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 when an experiment's
//! verdict fails its pinned threshold.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use sinai_cli::calibration;
use sinai_cli::config::{AnchorKind, EnvConfig, ExperimentConfig, ExperimentKind};
use sinai_cli::experiments::{run_experiment, run_walk_records};
use sinai_cli::formats;
use sinai_core::env::Environment;
use sinai_core::estimator::{estimate_table, reconstruction_error, target_profile};
use sinai_core::landscape::{depth, find_basic_valley, low_barrier_interval, search_radius};
use sinai_core::walk::WalkRun;

#[derive(Parser)]
#[command(name = "sinai", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct EnvFlags {
    /// Environment family: two_point or uniform_elliptic.
    #[arg(long, default_value = "two_point")]
    env_family: String,
    /// Family parameter: p for two_point, eta0 for uniform_elliptic.
    #[arg(long, default_value_t = 0.3)]
    env_param: f64,
    /// Master seed for the environment draws.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl EnvFlags {
    fn config(&self) -> EnvConfig {
        EnvConfig {
            family: self.env_family.clone(),
            param: self.env_param,
        }
    }

    fn sample(&self, window: (i64, i64)) -> Result<Environment> {
        let spec = self.config().to_spec(self.seed)?;
        Ok(Environment::sample(spec, window)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sample an environment and dump it as CSV.
    Env {
        #[command(flatten)]
        env: EnvFlags,
        /// Inclusive window, written lo:hi.
        #[arg(long, default_value = "-64:64", value_parser = parse_window, allow_hyphen_values = true)]
        window: (i64, i64),
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulate a walk and store the packed run artifact.
    Walk {
        #[command(flatten)]
        env: EnvFlags,
        /// Number of steps.
        #[arg(long)]
        n: u64,
        /// Seed of the walk's step stream.
        #[arg(long, default_value_t = 1)]
        walk_seed: u64,
        /// Output artifact path.
        #[arg(long)]
        out: PathBuf,
        /// Optional local-time ledger CSV.
        #[arg(long)]
        ledger_out: Option<PathBuf>,
    },
    /// Reconstruct the potential profile from a stored run.
    Estimate {
        /// Run artifact produced by `walk`.
        #[arg(long)]
        run: PathBuf,
        #[arg(long, default_value_t = 4.0)]
        gamma: f64,
        #[arg(long, default_value_t = 10.0)]
        c0: f64,
        #[arg(long, default_value_t = 4.0)]
        d0: f64,
        /// Absolute visit-count threshold replacing (ln n)^gamma.
        #[arg(long)]
        threshold_override: Option<f64>,
        /// Per-site table CSV.
        #[arg(long)]
        out: PathBuf,
        /// Scalar report JSON.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Directory for figure CSVs (reconstruction and difference curves).
        #[arg(long)]
        figures: Option<PathBuf>,
    },
    /// Locate the trapping valley of an environment.
    Valley {
        #[command(flatten)]
        env: EnvFlags,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 4.0)]
        gamma: f64,
        #[arg(long, default_value_t = 4.0)]
        d0: f64,
        /// Report JSON path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Excursion analytics for one (m, k) pair.
    Oracle {
        #[command(flatten)]
        env: EnvFlags,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long, default_value_t = 12)]
        half_width: i64,
        /// Monte Carlo excursions (0 skips the Monte Carlo route).
        #[arg(long, default_value_t = 100_000)]
        reps: u64,
        /// Report JSON path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a predefined experiment campaign.
    Experiment {
        /// theorem1 | prop1 | prop2 | containment | oracle
        name: ExperimentKind,
        #[command(flatten)]
        env: EnvFlags,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        c0: Option<f64>,
        #[arg(long)]
        d0: Option<f64>,
        #[arg(long)]
        d1: Option<f64>,
        #[arg(long)]
        reps: Option<u64>,
        #[arg(long)]
        threshold_override: Option<f64>,
        /// Truth-side anchor: valley (definitional) or visited_argmin (the
        /// calibrated campaigns' choice).
        #[arg(long)]
        anchor: Option<AnchorKind>,
        /// Run replications serially (results are identical either way).
        #[arg(long)]
        serial: bool,
        /// JSON config file; explicit flags win over its values.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory for report.json and CSVs.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The documented pilot behind the calibrated constants: 200
    /// replications at n = 500000, seed 0, over a gamma sweep.
    Calibrate {
        /// Gammas to sweep (valley depth margin and default threshold).
        #[arg(long, value_delimiter = ',', default_value = "0.5,0.8,1.0,1.5,2.2")]
        gammas: Vec<f64>,
        /// Family to pilot: two_point or uniform_elliptic.
        #[arg(long, default_value = "two_point")]
        family: String,
        /// Family parameters to sweep.
        #[arg(long, value_delimiter = ',', default_value = "0.3")]
        params: Vec<f64>,
        /// Exponent for an absolute count override `(ln n)^count_gamma`
        /// applied at every swept gamma; 0 disables the override.
        #[arg(long, default_value_t = 0.0)]
        count_gamma: f64,
        /// Truth-side anchor to pilot with.
        #[arg(long, default_value = "visited_argmin")]
        anchor: AnchorKind,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| "window must be written lo:hi".to_string())?;
    let lo: i64 = lo.parse().map_err(|e| format!("bad window lo: {e}"))?;
    let hi: i64 = hi.parse().map_err(|e| format!("bad window hi: {e}"))?;
    if lo > 0 || hi < 0 {
        return Err("window must contain 0".into());
    }
    Ok((lo, hi))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successes; everything else is usage.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Env { env, window, out } => {
            let sampled = env.sample(window)?;
            formats::write_env_csv(&sampled, &out)?;
            println!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Walk {
            env,
            n,
            walk_seed,
            out,
            ledger_out,
        } => {
            anyhow::ensure!(n >= 1, "n must be at least 1");
            let mut sampled = env.sample((-64, 64))?;
            let run = WalkRun::simulate(&mut sampled, n, walk_seed);
            formats::write_run_artifact(&run, &sampled, &out)?;
            if let Some(ledger) = ledger_out {
                formats::write_ledger_csv(&run, &ledger)?;
            }
            println!(
                "wrote {} (final position {}, range {:?})",
                out.display(),
                run.final_position(),
                run.ledger().range()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Estimate {
            run,
            gamma,
            c0,
            d0,
            threshold_override,
            out,
            report,
            figures,
        } => {
            let (walk, mut env, _header) = formats::load_run_artifact(&run)?;
            let table = estimate_table(&walk, gamma, c0, threshold_override);
            // Truth columns come from the stored environment spec; the
            // estimate itself never reads them.
            let radius = search_radius(walk.n(), d0, env.sigma2());
            let outcome = find_basic_valley(&mut env, walk.n(), gamma, radius);
            let profile = outcome.valley.as_ref().map(|bv| {
                let (llo, lhi) = walk.ledger().range();
                env.ensure_window(llo.min(bv.triple.left), lhi.max(bv.triple.right));
                target_profile(&env.potential(), bv.triple.bottom, walk.n())
                    .expect("bottom inside window")
            });
            formats::write_estimate_csv(&table, profile.as_ref(), &out)?;
            if let Some(report_path) = report {
                let recon = profile.as_ref().map(|p| reconstruction_error(&table, p));
                let json = serde_json::json!({
                    "n": walk.n(),
                    "gamma": gamma,
                    "c0": c0,
                    "threshold": table.threshold,
                    "band": table.band,
                    "pivot": table.pivot,
                    "pivot_time": table.pivot_time,
                    "set_size": table.set_sites.len(),
                    "valley_found": outcome.valley.is_some(),
                    "bottom": outcome.valley.as_ref().map(|b| b.triple.bottom),
                    "sup_error": recon.as_ref().and_then(|r| r.sup_error),
                    "within_band": recon.as_ref().map(|r| r.within_band),
                    "slope": recon.as_ref().map(|r| r.slope),
                    "intercept": recon.as_ref().map(|r| r.intercept),
                    "coverage": recon.as_ref().map(|r| r.coverage),
                    "connected": recon.as_ref().map(|r| r.connected),
                });
                std::fs::write(&report_path, serde_json::to_string_pretty(&json)? + "\n")?;
            }
            if let (Some(dir), Some(profile)) = (figures, profile.as_ref()) {
                std::fs::create_dir_all(&dir)?;
                formats::write_figure_reconstruction(
                    &table,
                    profile,
                    &dir.join("reconstruction.csv"),
                )?;
                formats::write_figure_difference(&table, profile, &dir.join("difference.csv"))?;
            }
            println!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Valley {
            env,
            n,
            gamma,
            d0,
            out,
        } => {
            anyhow::ensure!(n >= 10_000, "n must be at least 10^4");
            let mut sampled = env.sample((-64, 64))?;
            let radius = search_radius(n, d0, sampled.sigma2());
            let outcome = find_basic_valley(&mut sampled, n, gamma, radius);
            let pot = sampled.potential();
            let d = outcome
                .valley
                .as_ref()
                .and_then(|bv| depth(&pot, &bv.triple).ok());
            let v = outcome
                .valley
                .as_ref()
                .map(|bv| low_barrier_interval(&pot, bv, n, gamma));
            let report = formats::valley_report(&outcome, d, v, n, gamma);
            emit_json(&report, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle {
            env,
            m,
            k,
            half_width,
            reps,
            out,
        } => {
            let need = half_width.max((k - m).abs()) + 2;
            let sampled = env.sample((-(need.max(64)), need.max(64)))?;
            let green = sinai_core::bd::excursion_visits_green(&sampled, m, k, half_width)?;
            let formula = sinai_core::bd::excursion_visits_formula(&sampled, m, k)?;
            let mc = if reps > 0 {
                Some(sinai_core::bd::mc_excursion_visits(
                    &sampled,
                    m,
                    k,
                    half_width,
                    reps,
                    env.seed ^ 0x4d43,
                    sinai_core::bd::EXCURSION_STEP_CAP,
                )?)
            } else {
                None
            };
            let (vb, band) = if k != m {
                let vb = sinai_core::bd::variance_bound(&sampled, m, k, half_width)?;
                let band = sinai_core::bd::ellipticity_band(&sampled, m, k)?;
                (Some(vb), Some(band))
            } else {
                (None, None)
            };
            let json = serde_json::json!({
                "m": m,
                "k": k,
                "half_width": half_width,
                "expected_green": green,
                "expected_formula": formula,
                "mc_mean": mc.map(|s| s.mean),
                "mc_stderr": mc.map(|s| s.stderr),
                "mc_variance": mc.map(|s| s.variance),
                "mc_capped": mc.map(|s| s.capped),
                "variance_bound": vb,
                "band_value": band.map(|b| b.value),
                "band_printed_value": band.map(|b| b.printed_value),
                "band_lower": band.map(|b| b.lower),
                "band_upper": band.map(|b| b.upper),
                "band_ok": band.map(|b| b.ok),
            });
            emit_json(&json, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Experiment {
            name,
            env,
            n,
            gamma,
            c0,
            d0,
            d1,
            reps,
            threshold_override,
            anchor,
            serial,
            config,
            out,
        } => {
            let mut cfg = match config {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .with_context(|| format!("read {}", path.display()))?;
                    let mut file_cfg: ExperimentConfig = serde_json::from_str(&text)?;
                    file_cfg.experiment = name;
                    file_cfg
                }
                None => ExperimentConfig::defaults(name),
            };
            // Flags win over the config file.
            if let Some(v) = n {
                cfg.n = v;
            }
            if let Some(v) = gamma {
                cfg.gamma = v;
            }
            if let Some(v) = c0 {
                cfg.c0 = v;
            }
            if let Some(v) = d0 {
                cfg.d0 = v;
            }
            if let Some(v) = d1 {
                cfg.d1 = v;
            }
            if let Some(v) = reps {
                cfg.replications = v;
            }
            if threshold_override.is_some() {
                cfg.threshold_override = threshold_override;
            }
            if let Some(a) = anchor {
                cfg.anchor = a;
            }
            if env.env_family != "two_point" || env.env_param != 0.3 {
                cfg.env = env.config();
            }
            if env.seed != 0 {
                cfg.master_seed = env.seed;
            }
            if serial {
                cfg.parallel = false;
            }
            cfg.validate()?;
            let output = run_experiment(&cfg)?;
            if let Some(dir) = out {
                formats::write_experiment_output(&output, &dir)?;
                println!("wrote {}", dir.join("report.json").display());
            } else {
                println!("{}", serde_json::to_string_pretty(&output)?);
            }
            println!(
                "experiment {}: {}",
                output.experiment,
                if output.pass { "PASS" } else { "FAIL" }
            );
            Ok(if output.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::Calibrate {
            gammas,
            family,
            params,
            count_gamma,
            anchor,
            out,
        } => {
            std::fs::create_dir_all(&out)?;
            let mut summaries = Vec::new();
            for &p in &params {
                for &gamma in &gammas {
                    let over = if count_gamma > 0.0 {
                        Some(sinai_core::scale::visit_threshold(
                            calibration::CALIBRATED_N,
                            count_gamma,
                        ))
                    } else {
                        None
                    };
                    let env = EnvConfig {
                        family: family.clone(),
                        param: p,
                    };
                    let cfg = calibration::pilot_config(gamma, env, over, anchor);
                    let (records, _) = run_walk_records(&cfg);
                    let summary = pilot_summary(gamma, &cfg, &records);
                    println!("{}", serde_json::to_string(&summary)?);
                    summaries.push(summary);
                }
            }
            let path = out.join("pilot_n500000_seed0.json");
            std::fs::write(&path, serde_json::to_string_pretty(&summaries)? + "\n")?;
            println!("wrote {}", path.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn emit_json<T: serde::Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(path) => {
            std::fs::write(path, text)?;
            println!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

/// Quantiles of everything the threshold choice depends on.
fn pilot_summary(
    gamma: f64,
    cfg: &ExperimentConfig,
    records: &[sinai_cli::experiments::RepRecord],
) -> serde_json::Value {
    let mut sizes: Vec<f64> = records.iter().map(|r| r.set_size as f64).collect();
    sizes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let q = |v: &[f64], p: f64| -> f64 {
        if v.is_empty() {
            return f64::NAN;
        }
        v[((v.len() - 1) as f64 * p).round() as usize]
    };
    let mut coverages: Vec<f64> = records.iter().map(|r| r.coverage).collect();
    coverages.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let valley = records.iter().filter(|r| r.valley_found).count();
    let agree = records
        .iter()
        .filter(|r| r.anchors_agree == Some(true))
        .count();
    let within = records
        .iter()
        .filter(|r| r.within_band == Some(true))
        .count();
    let contained = records
        .iter()
        .filter(|r| r.containment == Some(true))
        .count();
    let both_loc = records
        .iter()
        .filter(|r| r.spread_ok == Some(true) && r.gap_ok == Some(true))
        .count();
    let spread_ok = records.iter().filter(|r| r.spread_ok == Some(true)).count();
    let gap_ok = records.iter().filter(|r| r.gap_ok == Some(true)).count();
    // Conditional on the valley bottom agreeing with the visited argmin
    // (the computable face of the good-environment event).
    let agree_recs: Vec<_> = records
        .iter()
        .filter(|r| r.anchors_agree == Some(true))
        .collect();
    let loc_given_agree = agree_recs
        .iter()
        .filter(|r| r.spread_ok == Some(true) && r.gap_ok == Some(true))
        .count();
    let cont_given_agree = agree_recs
        .iter()
        .filter(|r| r.containment == Some(true))
        .count();
    let band_given_agree = agree_recs
        .iter()
        .filter(|r| r.within_band == Some(true))
        .count();
    let ratio_ok = records
        .iter()
        .filter(|r| r.size_ratio >= 0.1 && r.size_ratio <= 10.0)
        .count();
    let favored = records.iter().filter(|r| r.favorites_in_set).count();
    let connected = records.iter().filter(|r| r.connected).count();
    let empty = records.iter().filter(|r| r.empty_set).count();
    let mut slopes: Vec<f64> = records
        .iter()
        .filter_map(|r| r.slope.map(f64::abs))
        .collect();
    slopes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    serde_json::json!({
        "gamma": gamma,
        "p": cfg.env.param,
        "n": cfg.n,
        "replications": records.len(),
        "threshold": cfg
            .threshold_override
            .unwrap_or_else(|| sinai_core::scale::visit_threshold(cfg.n, gamma)),
        "anchor": format!("{:?}", cfg.anchor),
        "valley_found": valley,
        "anchors_agree": agree,
        "within_band": within,
        "containment": contained,
        "both_localization_bounds": both_loc,
        "spread_ok": spread_ok,
        "gap_ok": gap_ok,
        "agree_count": agree_recs.len(),
        "loc_given_agree": loc_given_agree,
        "cont_given_agree": cont_given_agree,
        "band_given_agree": band_given_agree,
        "size_ratio_in_range": ratio_ok,
        "favorites_in_set": favored,
        "connected": connected,
        "empty_sets": empty,
        "set_size_q10": q(&sizes, 0.1),
        "set_size_median": q(&sizes, 0.5),
        "set_size_q90": q(&sizes, 0.9),
        "coverage_q10": q(&coverages, 0.1),
        "coverage_median": q(&coverages, 0.5),
        "coverage_q90": q(&coverages, 0.9),
        "median_abs_slope": q(&slopes, 0.5),
    })
}
