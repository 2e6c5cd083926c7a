//! File formats: environment CSV, run artifacts, estimate and figure CSVs,
//! report JSON. All writers are deterministic (stable field order, shortest
//! round-trip float formatting, `alpha` at 17 significant digits).

use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use sinai_core::env::{EnvFamily, Environment, EnvironmentSpec};
use sinai_core::estimator::{EstimateTable, TargetProfile};
use sinai_core::landscape::{BasicValley, ValleyOutcome};
use sinai_core::walk::{StepStream, WalkRun};
use sinai_core::Site;

use crate::config::{fnv1a64, EnvConfig};
use crate::experiments::{ExperimentOutput, OracleRecord, RepRecord};

/// 17 significant digits: enough to reproduce any f64 bit-exactly.
fn f17(x: f64) -> String {
    format!("{:.16e}", x)
}

pub fn env_config_of(spec: &EnvironmentSpec) -> EnvConfig {
    match spec.family() {
        EnvFamily::TwoPoint { p } => EnvConfig {
            family: "two_point".into(),
            param: p,
        },
        EnvFamily::UniformElliptic { eta0 } => EnvConfig {
            family: "uniform_elliptic".into(),
            param: eta0,
        },
    }
}

/// JSON header line written before tabular environment data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnvHeader {
    pub family: String,
    pub param: f64,
    pub master_seed: u64,
    pub window: (Site, Site),
}

/// Environment dump: `# {json}` header, then one row per site.
pub fn write_env_csv(env: &Environment, path: &Path) -> Result<()> {
    let spec = env
        .spec()
        .context("only sampled environments are serialized")?;
    let header = EnvHeader {
        family: env_config_of(spec).family,
        param: env_config_of(spec).param,
        master_seed: spec.master_seed(),
        window: env.window(),
    };
    let pot = env.potential();
    let mut out = String::new();
    writeln!(out, "# {}", serde_json::to_string(&header)?)?;
    writeln!(out, "site,alpha,epsilon,S")?;
    let (lo, hi) = env.window();
    for k in lo..=hi {
        writeln!(
            out,
            "{},{},{},{}",
            k,
            f17(env.alpha(k)),
            env.epsilon(k),
            pot.s(k)
        )?;
    }
    fs::write(path, out)?;
    Ok(())
}

/// Ledger dump: site, visit count, first hit time.
pub fn write_ledger_csv(run: &WalkRun, path: &Path) -> Result<()> {
    let mut out = String::new();
    writeln!(out, "site,count,first_hit_time")?;
    let (lo, hi) = run.ledger().range();
    for k in lo..=hi {
        let c = run.ledger().count(k);
        match run.hitting_time(k) {
            Some(t) => writeln!(out, "{k},{c},{t}")?,
            None => writeln!(out, "{k},{c},")?,
        }
    }
    fs::write(path, out)?;
    Ok(())
}

/// Header of a run artifact; the packed step bytes follow the newline.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunHeader {
    pub format: String,
    pub env: EnvHeader,
    pub env_spec_hash: String,
    pub n: u64,
    pub walk_seed: u64,
    pub final_position: Site,
    pub step_bytes: usize,
}

/// Serialize a run: one JSON header line + raw packed step stream.
pub fn write_run_artifact(run: &WalkRun, env: &Environment, path: &Path) -> Result<()> {
    let spec = env
        .spec()
        .context("only sampled environments are serialized")?;
    let env_header = EnvHeader {
        family: env_config_of(spec).family,
        param: env_config_of(spec).param,
        master_seed: spec.master_seed(),
        window: env.window(),
    };
    let spec_json = serde_json::to_string(&env_header)?;
    let bytes = run.steps().to_bytes();
    let header = RunHeader {
        format: "sinai-run-v1".into(),
        env: env_header,
        env_spec_hash: format!("{:016x}", fnv1a64(spec_json.as_bytes())),
        n: run.n(),
        walk_seed: run.walk_seed(),
        final_position: run.final_position(),
        step_bytes: bytes.len(),
    };
    let mut blob = serde_json::to_string(&header)?.into_bytes();
    blob.push(b'\n');
    blob.extend_from_slice(&bytes);
    fs::write(path, blob)?;
    Ok(())
}

/// Load a run artifact; the run is rebuilt by replaying the step stream and
/// the environment is resampled from the recorded spec.
pub fn load_run_artifact(path: &Path) -> Result<(WalkRun, Environment, RunHeader)> {
    let file = fs::File::open(path).with_context(|| format!("open {}", path.display()))?;
    let mut reader = BufReader::new(file);
    let mut header_line = String::new();
    reader.read_line(&mut header_line)?;
    let header: RunHeader = serde_json::from_str(header_line.trim_end())?;
    if header.format != "sinai-run-v1" {
        bail!("unsupported run format '{}'", header.format);
    }
    let mut bytes = Vec::with_capacity(header.step_bytes);
    reader.read_to_end(&mut bytes)?;
    if bytes.len() != header.step_bytes {
        bail!(
            "truncated step stream: got {} bytes, expected {}",
            bytes.len(),
            header.step_bytes
        );
    }
    let steps = StepStream::from_bytes(&bytes, header.n)?;
    let run = WalkRun::from_steps(steps, header.walk_seed);
    if run.final_position() != header.final_position {
        bail!("replayed final position disagrees with the artifact header");
    }
    let cfg = EnvConfig {
        family: header.env.family.clone(),
        param: header.env.param,
    };
    let spec = cfg.to_spec(header.env.master_seed)?;
    let env = Environment::sample(spec, header.env.window)?;
    Ok((run, env, header))
}

/// Estimate table dump; target/diff columns are filled when the true
/// profile is available, left empty otherwise.
pub fn write_estimate_csv(
    table: &EstimateTable,
    profile: Option<&TargetProfile>,
    path: &Path,
) -> Result<()> {
    let mut out = String::new();
    writeln!(out, "k,L_kn,post_count,in_L_gamma,s_hat,target,diff")?;
    for row in &table.rows {
        let (target, diff) = match profile {
            Some(p) if p.contains(row.site) => {
                let t = p.value(row.site);
                (t.to_string(), (row.estimate - t).to_string())
            }
            _ => (String::new(), String::new()),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.site, row.visits, row.post_visits, row.in_set, row.estimate, target, diff
        )?;
    }
    fs::write(path, out)?;
    Ok(())
}

/// Figure data: the reconstruction curves over the well-visited set.
pub fn write_figure_reconstruction(
    table: &EstimateTable,
    profile: &TargetProfile,
    path: &Path,
) -> Result<()> {
    let mut out = String::new();
    writeln!(out, "k,target,s_hat_minus_un,s_hat_plus_un")?;
    for &k in &table.set_sites {
        let row = table.row(k).expect("set sites are visited");
        if profile.contains(k) {
            writeln!(
                out,
                "{},{},{},{}",
                k,
                profile.value(k),
                row.estimate - table.band,
                row.estimate + table.band
            )?;
        }
    }
    fs::write(path, out)?;
    Ok(())
}

/// Figure data: the difference curve and its least-squares fit.
pub fn write_figure_difference(
    table: &EstimateTable,
    profile: &TargetProfile,
    path: &Path,
) -> Result<()> {
    let recon = sinai_core::estimator::reconstruction_error(table, profile);
    let mut out = String::new();
    writeln!(out, "k,diff,fitted")?;
    for &(k, d) in &recon.differences {
        let fitted = recon.slope * k as f64 + recon.intercept;
        writeln!(out, "{k},{d},{fitted}")?;
    }
    fs::write(path, out)?;
    Ok(())
}

/// Valley report with the interface's field names.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValleyReportJson {
    pub found: bool,
    pub window_capped: bool,
    pub sign_ties: u32,
    #[serde(rename = "M_n_prime", skip_serializing_if = "Option::is_none")]
    pub m_n_prime: Option<Site>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_n: Option<Site>,
    #[serde(rename = "M_n", skip_serializing_if = "Option::is_none")]
    pub m_n_right: Option<Site>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<f64>,
    #[serde(rename = "Gamma_n")]
    pub gamma_n: f64,
    pub gamma: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side_condition: Option<bool>,
    #[serde(rename = "V_gamma", skip_serializing_if = "Option::is_none")]
    pub v_gamma: Option<(Site, Site)>,
}

pub fn valley_report(
    outcome: &ValleyOutcome,
    depth: Option<f64>,
    v_gamma: Option<(Site, Site)>,
    n: u64,
    gamma: f64,
) -> ValleyReportJson {
    let bv: Option<&BasicValley> = outcome.valley.as_ref();
    ValleyReportJson {
        found: bv.is_some(),
        window_capped: outcome.window_capped,
        sign_ties: outcome.sign_ties,
        m_n_prime: bv.map(|b| b.triple.left),
        m_n: bv.map(|b| b.triple.bottom),
        m_n_right: bv.map(|b| b.triple.right),
        depth,
        gamma_n: sinai_core::scale::valley_depth_threshold(n, gamma),
        gamma,
        side_condition: bv.map(|b| b.side_condition_ok),
        v_gamma,
    }
}

/// Write `report.json`, `replications.csv` (or `oracle.csv`), and rep-0
/// figure data into `dir`.
pub fn write_experiment_output(out: &ExperimentOutput, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(
        dir.join("report.json"),
        serde_json::to_string_pretty(out)? + "\n",
    )?;
    if !out.records.is_empty() {
        fs::write(dir.join("replications.csv"), replications_csv(&out.records)?)?;
    }
    if !out.oracle_records.is_empty() {
        fs::write(dir.join("oracle.csv"), oracle_csv(&out.oracle_records)?)?;
    }
    if let Some((table, Some(profile))) = &out.first_rep {
        write_figure_reconstruction(table, profile, &dir.join("reconstruction.csv"))?;
        write_figure_difference(table, profile, &dir.join("difference.csv"))?;
    }
    Ok(())
}

fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

pub fn replications_csv(records: &[RepRecord]) -> Result<String> {
    let mut out = String::new();
    writeln!(
        out,
        "rep,env_seed,walk_seed,final_position,valley_found,window_capped,valley_bottom,\
         barrier_left,barrier_right,valley_depth,anchor_bottom,anchors_agree,pivot,pivot_time,\
         set_size,set_lo,set_hi,empty_set,connected,coverage,size_ratio,favorites_in_set,\
         sup_error,within_band,band,slope,intercept,containment,v_lo,v_hi,favorite_spread,\
         spread_ok,time_gap,gap_ok"
    )?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.rep,
            r.env_seed,
            r.walk_seed,
            r.final_position,
            r.valley_found,
            r.window_capped,
            opt(&r.valley_bottom),
            opt(&r.barrier_left),
            opt(&r.barrier_right),
            opt(&r.valley_depth),
            opt(&r.anchor_bottom),
            opt(&r.anchors_agree),
            r.pivot,
            r.pivot_time,
            r.set_size,
            opt(&r.set_lo),
            opt(&r.set_hi),
            r.empty_set,
            r.connected,
            r.coverage,
            r.size_ratio,
            r.favorites_in_set,
            opt(&r.sup_error),
            opt(&r.within_band),
            r.band,
            opt(&r.slope),
            opt(&r.intercept),
            opt(&r.containment),
            opt(&r.v_lo),
            opt(&r.v_hi),
            opt(&r.favorite_spread),
            opt(&r.spread_ok),
            opt(&r.time_gap),
            opt(&r.gap_ok),
        )?;
    }
    Ok(out)
}

pub fn oracle_csv(records: &[OracleRecord]) -> Result<String> {
    let mut out = String::new();
    writeln!(
        out,
        "env_seed,m,k,expected_formula,expected_green,mc_mean,mc_stderr,mc_variance,\
         variance_bound,variance_guard,band_value,band_ok,capped"
    )?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.env_seed,
            r.center,
            r.target,
            r.expected_formula,
            r.expected_green,
            r.mc_mean,
            r.mc_stderr,
            r.mc_variance,
            r.variance_bound,
            r.variance_guard,
            r.band_value,
            r.band_ok,
            r.capped,
        )?;
    }
    Ok(out)
}
