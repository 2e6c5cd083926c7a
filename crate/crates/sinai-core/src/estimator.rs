//! Potential reconstruction from a single trajectory.
//!
//! The estimator never reads the environment: everything is derived from the
//! packed step stream in two passes. Pass one yields the ledger, the
//! favorite sites and the pivot's first-hit time (which is not a stopping
//! time, hence the second pass); pass two counts visits after that time and
//! thresholds them to get the set of sites where the profile estimate
//! `ln L(k,n) / ln n` is trustworthy.
//!
//! The true potential enters only through [`TargetProfile`], which
//! experiment code builds for comparison; the estimator itself stays
//! trajectory-only.

use alloc::vec::Vec;

use crate::env::PotentialPath;
use crate::error::CoreError;
use crate::scale::{error_band_half_width, ln, log_log, powf, visit_threshold};
use crate::walk::WalkRun;
use crate::{Site, Time};

/// The thresholded post-pivot visit set and its bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct WellVisited {
    /// Favorite site of minimal absolute value.
    pub pivot: Site,
    /// First time the walk hits the pivot.
    pub pivot_time: Time,
    /// Effective count threshold actually applied.
    pub threshold: f64,
    /// Sites whose visit count during `[pivot_time, n]` reaches the
    /// threshold, ascending.
    pub sites: Vec<Site>,
}

impl WellVisited {
    pub fn contains(&self, k: Site) -> bool {
        self.sites.binary_search(&k).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Whether the set is a contiguous integer interval.
    pub fn is_interval(&self) -> bool {
        match (self.sites.first(), self.sites.last()) {
            (Some(&a), Some(&b)) => b - a + 1 == self.sites.len() as Site,
            _ => true,
        }
    }
}

/// Per-site reconstruction record; rows exist only for visited sites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateRow {
    pub site: Site,
    /// Total visits during `[1, n]`.
    pub visits: u64,
    /// Visits during `[pivot_time, n]`.
    pub post_visits: u64,
    /// Member of the well-visited set.
    pub in_set: bool,
    /// `ln(visits) / ln n`.
    pub estimate: f64,
}

/// The full per-site reconstruction table.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateTable {
    pub n: u64,
    pub gamma: f64,
    pub c0: f64,
    /// Error band half-width `c0·ln ln ln n / ln n`.
    pub band: f64,
    pub pivot: Site,
    pub pivot_time: Time,
    pub threshold: f64,
    pub rows: Vec<EstimateRow>,
    /// Sites of the well-visited set, ascending.
    pub set_sites: Vec<Site>,
}

impl EstimateTable {
    pub fn row(&self, site: Site) -> Option<&EstimateRow> {
        self.rows
            .binary_search_by_key(&site, |r| r.site)
            .ok()
            .map(|i| &self.rows[i])
    }

    pub fn well_visited(&self) -> WellVisited {
        WellVisited {
            pivot: self.pivot,
            pivot_time: self.pivot_time,
            threshold: self.threshold,
            sites: self.set_sites.clone(),
        }
    }
}

/// Shifted, rescaled potential profile the estimator is compared against:
/// `1 - (S_k - S_bottom)/ln n`, equal to 1 at the bottom.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetProfile {
    pub bottom: Site,
    lo: Site,
    values: Vec<f64>,
}

impl TargetProfile {
    pub fn window(&self) -> (Site, Site) {
        (self.lo, self.lo + self.values.len() as Site - 1)
    }

    pub fn contains(&self, k: Site) -> bool {
        let (lo, hi) = self.window();
        k >= lo && k <= hi
    }

    pub fn value(&self, k: Site) -> f64 {
        self.values[(k - self.lo) as usize]
    }
}

/// Comparison of estimate vs target over the well-visited set.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionReport {
    /// The set was empty; sup-norm and regression are absent.
    pub empty: bool,
    /// `max |estimate - target|` over the set.
    pub sup_error: Option<f64>,
    /// Ordinary least squares of (difference vs site) over the set.
    pub slope: f64,
    pub intercept: f64,
    /// Fraction of total time spent on set sites.
    pub coverage: f64,
    /// Number of sites in the set.
    pub set_size: usize,
    /// `set_size / (ln n)^2`.
    pub size_ratio: f64,
    /// `|bottom - pivot|`.
    pub bottom_to_pivot: Site,
    /// Whether `sup_error < band`.
    pub within_band: bool,
    /// Whether the set is an integer interval.
    pub connected: bool,
    /// Per-site `(site, estimate - target)` pairs over the set.
    pub differences: Vec<(Site, f64)>,
}

/// Localization summary: pivot vs the true bottom when known.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationReport {
    pub pivot: Site,
    pub pivot_time: Time,
    /// `max |bottom - x|` over favorite sites (needs the true bottom).
    pub favorite_spread: Option<Site>,
    /// `|T_bottom - T_pivot|`; absent when the bottom was never visited.
    pub time_gap: Option<u64>,
    /// Bound `(ln ln n)^2` the spread is compared against.
    pub spread_bound: f64,
    /// Bound `(ln n)^3` the gap is compared against.
    pub gap_bound: f64,
    pub spread_ok: Option<bool>,
    pub gap_ok: Option<bool>,
}

/// Effective threshold: `(ln n)^gamma`, unless an absolute override is given.
pub fn effective_threshold(n: u64, gamma: f64, override_count: Option<f64>) -> f64 {
    override_count.unwrap_or_else(|| visit_threshold(n, gamma))
}

/// The potential argmin over the range the walk has visited (ties resolved
/// toward the smallest absolute site, nonnegative preferred).
///
/// On environments where the trapping-valley machinery applies, the walk's
/// range covers that valley and nothing deeper, so this coincides with the
/// valley bottom in the large-`n` regime; at small scales it is the honest
/// environment-side anchor for the walk's seat.
pub fn visited_bottom(pot: &PotentialPath, run: &WalkRun) -> Site {
    let (lo, hi) = run.ledger().range();
    let mut best = lo;
    for k in (lo + 1)..=hi {
        let (sk, sb) = (pot.s(k), pot.s(best));
        let better_abs = k.abs() < best.abs() || (k.abs() == best.abs() && k > best);
        if sk < sb || (sk == sb && better_abs) {
            best = k;
        }
    }
    best
}

/// Two-pass computation of the well-visited set.
pub fn well_visited_sites(
    run: &WalkRun,
    gamma: f64,
    override_count: Option<f64>,
) -> WellVisited {
    let fav = run.favorite_sites();
    let pivot = fav.pivot;
    let pivot_time = run
        .hitting_time(pivot)
        .expect("a favorite site is visited by definition");
    let threshold = effective_threshold(run.n(), gamma, override_count);
    let post = run
        .post_hit_counts(pivot_time)
        .expect("pivot time is within the run");
    let sites = post
        .visited_sites()
        .filter(|&(_, c)| c as f64 >= threshold)
        .map(|(k, _)| k)
        .collect();
    WellVisited {
        pivot,
        pivot_time,
        threshold,
        sites,
    }
}

/// Build the per-site table: estimates for every visited site, membership
/// flags from the two-pass threshold.
pub fn estimate_table(
    run: &WalkRun,
    gamma: f64,
    c0: f64,
    override_count: Option<f64>,
) -> EstimateTable {
    let n = run.n();
    let set = well_visited_sites(run, gamma, override_count);
    let post = run
        .post_hit_counts(set.pivot_time)
        .expect("pivot time is within the run");
    let log_n = ln(n as f64);
    let rows: Vec<EstimateRow> = run
        .ledger()
        .visited_sites()
        .map(|(site, visits)| {
            let post_visits = post.count(site);
            EstimateRow {
                site,
                visits,
                post_visits,
                in_set: post_visits as f64 >= set.threshold,
                estimate: ln(visits as f64) / log_n,
            }
        })
        .collect();
    EstimateTable {
        n,
        gamma,
        c0,
        band: error_band_half_width(n, c0),
        pivot: set.pivot,
        pivot_time: set.pivot_time,
        threshold: set.threshold,
        rows,
        set_sites: set.sites,
    }
}

/// Rescaled potential profile anchored at `bottom` for horizon `n`.
pub fn target_profile(pot: &PotentialPath, bottom: Site, n: u64) -> Result<TargetProfile, CoreError> {
    if !pot.contains(bottom) {
        let (lo, hi) = pot.window();
        return Err(CoreError::OutOfWindow {
            site: bottom,
            lo,
            hi,
        });
    }
    let (lo, _) = pot.window();
    let log_n = ln(n as f64);
    let s_bottom = pot.s(bottom);
    let values = pot
        .values()
        .iter()
        .map(|&s| 1.0 - (s - s_bottom) / log_n)
        .collect();
    Ok(TargetProfile {
        bottom,
        lo,
        values,
    })
}

/// Ordinary least squares for (x, y) pairs; a single point or a degenerate
/// x-spread gets slope 0 and the mean as intercept.
fn ols(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    if points.is_empty() {
        return (0.0, 0.0);
    }
    let mean_x: f64 = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y: f64 = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    if sxx == 0.0 {
        return (0.0, mean_y);
    }
    let sxy: f64 = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    let slope = sxy / sxx;
    (slope, mean_y - slope * mean_x)
}

/// Compare the table against the true profile over the well-visited set.
pub fn reconstruction_error(table: &EstimateTable, profile: &TargetProfile) -> ReconstructionReport {
    let mut differences = Vec::with_capacity(table.set_sites.len());
    let mut sup: Option<f64> = None;
    let mut covered: u64 = 0;
    for &k in &table.set_sites {
        let row = table.row(k).expect("set sites are visited");
        covered += row.visits;
        if profile.contains(k) {
            let d = row.estimate - profile.value(k);
            sup = Some(sup.map_or(d.abs(), |s: f64| s.max(d.abs())));
            differences.push((k, d));
        }
    }
    let empty = table.set_sites.is_empty();
    let pts: Vec<(f64, f64)> = differences
        .iter()
        .map(|&(k, d)| (k as f64, d))
        .collect();
    let (slope, intercept) = ols(&pts);
    let log_n = ln(table.n as f64);
    let set = table.well_visited();
    ReconstructionReport {
        empty,
        sup_error: sup,
        slope,
        intercept,
        coverage: covered as f64 / table.n as f64,
        set_size: table.set_sites.len(),
        size_ratio: table.set_sites.len() as f64 / (log_n * log_n),
        bottom_to_pivot: (profile.bottom - table.pivot).abs(),
        within_band: sup.map(|s| s < table.band).unwrap_or(false),
        connected: set.is_interval(),
        differences,
    }
}

/// Localize the valley bottom from the trajectory; compare against the true
/// bottom when it is known (experiment side only).
pub fn localize_bottom(run: &WalkRun, true_bottom: Option<Site>) -> LocalizationReport {
    let fav = run.favorite_sites();
    let pivot_time = run
        .hitting_time(fav.pivot)
        .expect("a favorite site is visited by definition");
    let n = run.n();
    let spread_bound = log_log(n) * log_log(n);
    let gap_bound = powf(ln(n as f64), 3.0);
    let (favorite_spread, time_gap) = match true_bottom {
        None => (None, None),
        Some(b) => {
            let spread = fav.sites.iter().map(|&x| (b - x).abs()).max();
            let gap = run
                .hitting_time(b)
                .map(|t| t.abs_diff(pivot_time));
            (spread, gap)
        }
    };
    LocalizationReport {
        pivot: fav.pivot,
        pivot_time,
        favorite_spread,
        time_gap,
        spread_bound,
        gap_bound,
        spread_ok: favorite_spread.map(|s| (s as f64) <= spread_bound),
        gap_ok: time_gap.map(|g| (g as f64) <= gap_bound),
    }
}
