//! Exact birth–death excursion analytics.
//!
//! The central quantity is the expected number of visits to a site `k`
//! during one excursion of the chain from `m` back to `m` (visits counted at
//! times `1..=T_m`, so `k = m` always gives exactly 1). Three routes are
//! provided and kept deliberately independent:
//!
//! - [`excursion_visits_formula`]: literal evaluation of the closed-form
//!   `(alpha_m/beta_k)·e^{-(S_k-S_m)}·a_{k,m}` (and its mirror for `k < m`).
//! - [`excursion_visits_green`]: a tridiagonal first-step system solved by
//!   forward elimination on a reflecting truncation of the lattice.
//! - [`mc_excursion_visits`]: direct Monte Carlo over excursions, which
//!   arbitrates whenever the two differ.
//!
//! The reflecting truncation is not an approximation for interior sites: the
//! chain restricted to a finite reflecting interval has the same invariant
//! measure ratios as the infinite recurrent chain, so the solver value is
//! exact there regardless of the half-width.

use alloc::vec::Vec;

use rand_chacha::rand_core::RngCore;

use crate::env::Environment;
use crate::error::CoreError;
use crate::scale::exp;
use crate::seed::{self, domain, unit_f64};
use crate::Site;

/// Default per-excursion step cap for the Monte Carlo route.
pub const EXCURSION_STEP_CAP: u64 = 1_000_000_000;

/// Monte Carlo summary over excursions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McSummary {
    pub reps: u64,
    pub mean: f64,
    /// Standard error of the mean.
    pub stderr: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// Standard error of the variance estimate (fourth-moment based).
    pub variance_stderr: f64,
    /// Excursions stopped by the step cap (counted with partial visits).
    pub capped: u64,
}

/// Ellipticity check of the excursion prefactor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandReport {
    /// Solver-backed prefactor `E·e^{S_k - S_m}`, the factor left of the
    /// expected visits once the pure potential exponential is taken out.
    pub value: f64,
    /// The same factor as printed in the closed form, `(alpha_m/beta_k)·a`
    /// (mirrored for `k < m`). Reported for comparison; it leaves the band
    /// on paths with interior peaks, like the closed form itself.
    pub printed_value: f64,
    pub lower: f64,
    pub upper: f64,
    /// Whether `value` lies in `[eta0/(1-eta0), 1/eta0]`.
    pub ok: bool,
}

/// Full oracle record for one `(m, k)` pair, assembled by sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExcursionStats {
    pub center: Site,
    pub target: Site,
    pub expected_formula: f64,
    pub expected_green: f64,
    pub variance_bound: f64,
    pub band: BandReport,
    pub mc: Option<McSummary>,
}

/// Potential differences `S_{m+j} - S_m` walked directly from epsilon, for
/// `j = 1..=steps`, in the direction of `k` relative to `m`. For `k < m` the
/// chain is mirrored (`alpha <-> beta`), under which the increment at the
/// `t`-th mirrored site is `-epsilon[m - t]`, giving `S_{m-t-1} - S_{m-1}`.
fn relative_potential(env: &Environment, m: Site, k: Site) -> Vec<f64> {
    let mut out = Vec::with_capacity((k - m).unsigned_abs() as usize);
    let mut s = 0.0;
    if k > m {
        for i in (m + 1)..=k {
            s += env.epsilon(i);
            out.push(s);
        }
    } else {
        for t in 1..=(m - k) {
            s -= env.epsilon(m - t);
            out.push(s);
        }
    }
    out
}

/// The prefactor `(alpha_m/beta_k)·a_{k,m}` of the closed form; mirrored to
/// `(beta_m/alpha_k)·a'` for `k < m`.
pub fn formula_factor(env: &Environment, m: Site, k: Site) -> Result<f64, CoreError> {
    if k == m {
        return Err(CoreError::InvalidArgument("factor undefined at k = m"));
    }
    require_window(env, m.min(k), m.max(k))?;
    let rel = relative_potential(env, m, k);
    let interior: f64 = rel[..rel.len() - 1].iter().map(|&s| exp(s)).sum();
    let last = exp(*rel.last().expect("k != m"));
    let a = (interior + last) / (interior + 1.0);
    let pre = if k > m {
        env.alpha(m) / (1.0 - env.alpha(k))
    } else {
        (1.0 - env.alpha(m)) / env.alpha(k)
    };
    Ok(pre * a)
}

/// Literal closed-form for the expected excursion visits; `k = m` gives 1.
pub fn excursion_visits_formula(env: &Environment, m: Site, k: Site) -> Result<f64, CoreError> {
    if k == m {
        return Ok(1.0);
    }
    let rel = relative_potential(env, m, k);
    let last = *rel.last().expect("k != m");
    Ok(formula_factor(env, m, k)? * exp(-last))
}

fn require_window(env: &Environment, lo: Site, hi: Site) -> Result<(), CoreError> {
    let (wlo, whi) = env.window();
    if lo < wlo || hi > whi {
        return Err(CoreError::OutOfWindow {
            site: if lo < wlo { lo } else { hi },
            lo: wlo,
            hi: whi,
        });
    }
    Ok(())
}

/// Expected excursion visits by solving the first-step system
/// `h(x) = 1_{x=k} + alpha_x·h(x+1) + beta_x·h(x-1)` with `h(m) = 0` on the
/// reflecting interval `[m - half_width, m + half_width]`, returning
/// `alpha_m·h(m+1)` (or the mirror). Only the block on `k`'s side of `m` is
/// nonzero, so one tridiagonal solve by forward elimination suffices.
pub fn excursion_visits_green(
    env: &Environment,
    m: Site,
    k: Site,
    half_width: Site,
) -> Result<f64, CoreError> {
    if half_width < 1 {
        return Err(CoreError::InvalidArgument("half_width must be positive"));
    }
    if (k - m).abs() > half_width {
        return Err(CoreError::InvalidArgument(
            "target outside the truncation interval",
        ));
    }
    if k == m {
        return Ok(1.0);
    }

    // Work on a sampled clone when the window is too small; extension is
    // deterministic so this stays a pure function of (env identity, m, k).
    let (lo, hi) = (m - half_width, m + half_width);
    let (wlo, whi) = env.window();
    let grown;
    let env = if lo < wlo || hi > whi {
        grown = env.extended((lo.min(wlo), hi.max(whi)))?;
        &grown
    } else {
        env
    };

    // Unknowns h(x) for x strictly between m and the reflecting edge on k's
    // side. Orient so that index j = 0 is next to m and j = len-1 is at the
    // edge; `toward(j)` maps back to the lattice.
    let sign: Site = if k > m { 1 } else { -1 };
    let len = half_width as usize;
    let toward = |j: usize| m + sign * (j as Site + 1);
    // Step probability away from m at site x (toward the edge) and back.
    let away = |x: Site| -> f64 {
        if sign > 0 {
            env.alpha(x)
        } else {
            1.0 - env.alpha(x)
        }
    };
    let target_j = ((k - m).abs() - 1) as usize;

    // Tridiagonal rows: -back_j·h_{j-1} + h_j - away_j·h_{j+1} = 1_{j=k},
    // with h_{-1} = h(m) = 0 and a forced step inward at the edge:
    // h_edge - h_{edge-1} = 1_{edge=k}.
    let mut diag = alloc::vec![1.0f64; len];
    let mut upper = alloc::vec![0.0f64; len];
    let mut lower = alloc::vec![0.0f64; len];
    let mut rhs = alloc::vec![0.0f64; len];
    rhs[target_j] = 1.0;
    for j in 0..len - 1 {
        let x = toward(j);
        upper[j] = -away(x);
        if j > 0 {
            lower[j] = -(1.0 - away(x));
        }
    }
    lower[len - 1] = -1.0;

    // Thomas: forward elimination, then back substitution; we only need h_0,
    // but the full sweep keeps the code obvious.
    for j in 1..len {
        let w = lower[j] / diag[j - 1];
        diag[j] -= w * upper[j - 1];
        rhs[j] -= w * rhs[j - 1];
    }
    let mut h = alloc::vec![0.0f64; len];
    h[len - 1] = rhs[len - 1] / diag[len - 1];
    for j in (0..len - 1).rev() {
        h[j] = (rhs[j] - upper[j] * h[j + 1]) / diag[j];
    }

    let first_step = if sign > 0 {
        env.alpha(m)
    } else {
        1.0 - env.alpha(m)
    };
    Ok(first_step * h[0])
}

/// Upper bound on the excursion-visit variance:
/// `2·E²·e^{S_peak - S_anchor}·|k-m| / start_prob`.
///
/// Derivation: the visit count is 0 unless the first step (probability
/// `start_prob`, toward `k`) is followed by reaching `k` before `m`
/// (first-passage probability `q/start_prob`), and is then geometric, so
/// `Var <= 2·E²/q`; the ruin formula bounds `1/q` by
/// `|k-m|·e^{peak}/start_prob` with the peak over the ruin range, which
/// includes the anchor next to `m` and is therefore nonnegative (for
/// `|k-m| = 1` the range is just the anchor, giving `e^0`). The `E` factor
/// uses the solver value.
pub fn variance_bound(
    env: &Environment,
    m: Site,
    k: Site,
    half_width: Site,
) -> Result<f64, CoreError> {
    if k == m {
        return Err(CoreError::InvalidArgument("variance bound needs k != m"));
    }
    let expected = excursion_visits_green(env, m, k, half_width)?;
    // Peak of the potential over the ruin range, relative to the anchor:
    // sites m..k-1 relative to S_m for k > m, and the mirror image
    // k..m-1 relative to S_{m-1} for k < m. The anchor itself is in the
    // range, so the peak is never negative.
    let mut peak = 0.0f64;
    let mut s = 0.0f64;
    let start_prob;
    if k > m {
        start_prob = env.alpha(m);
        for j in (m + 1)..k {
            s += env.epsilon(j);
            peak = peak.max(s);
        }
    } else {
        start_prob = 1.0 - env.alpha(m);
        for j in ((k + 1)..m).rev() {
            s -= env.epsilon(j);
            peak = peak.max(s);
        }
    }
    Ok(2.0 * expected * expected * exp(peak) * (k - m).abs() as f64 / start_prob)
}

/// Ellipticity band check for the excursion prefactor.
pub fn ellipticity_band(env: &Environment, m: Site, k: Site) -> Result<BandReport, CoreError> {
    let printed_value = formula_factor(env, m, k)?;
    // Signed potential gap S_k - S_m.
    let mut gap = 0.0;
    if k > m {
        for i in (m + 1)..=k {
            gap += env.epsilon(i);
        }
    } else {
        for i in (k + 1)..=m {
            gap -= env.epsilon(i);
        }
    }
    let expected = excursion_visits_green(env, m, k, (k - m).abs() + 2)?;
    let value = expected * exp(gap);
    let eta0 = env.eta0();
    let lower = eta0 / (1.0 - eta0);
    let upper = 1.0 / eta0;
    // The value sits exactly on a band edge for extreme alpha pairs; allow
    // solver roundoff there.
    let slack = 1e-9;
    Ok(BandReport {
        value,
        printed_value,
        lower,
        upper,
        ok: value >= lower * (1.0 - slack) && value <= upper * (1.0 + slack),
    })
}

/// Sum of solver values over a set of sites: the expected time one
/// excursion from `m` spends in `sites`.
pub fn excursion_weight(env: &Environment, m: Site, sites: &[Site]) -> f64 {
    let mut hw: Site = 2;
    for &s in sites {
        hw = hw.max((s - m).abs() + 2);
    }
    sites
        .iter()
        .map(|&s| excursion_visits_green(env, m, s, hw).expect("window grown to fit"))
        .sum()
}

/// Monte Carlo estimate of the excursion visits on the same reflecting
/// interval as the solver. Each excursion draws its own derived stream, so
/// the estimate is independent of evaluation order.
pub fn mc_excursion_visits(
    env: &Environment,
    m: Site,
    k: Site,
    half_width: Site,
    reps: u64,
    seed: u64,
    step_cap: u64,
) -> Result<McSummary, CoreError> {
    if reps < 1 {
        return Err(CoreError::InvalidArgument("reps must be positive"));
    }
    if (k - m).abs() > half_width {
        return Err(CoreError::InvalidArgument(
            "target outside the truncation interval",
        ));
    }
    let (lo, hi) = (m - half_width, m + half_width);
    let (wlo, whi) = env.window();
    let grown;
    let env = if lo < wlo || hi > whi {
        grown = env.extended((lo.min(wlo), hi.max(whi)))?;
        &grown
    } else {
        env
    };

    let mut sum = 0.0f64;
    let mut sum2 = 0.0f64;
    let mut sum3 = 0.0f64;
    let mut sum4 = 0.0f64;
    let mut capped = 0u64;
    for rep in 0..reps {
        let mut rng = seed::stream(&[seed, domain::EXCURSION, rep]);
        let mut pos = m;
        let mut visits = 0u64;
        let mut t = 0u64;
        loop {
            let up = if pos <= lo {
                true
            } else if pos >= hi {
                false
            } else {
                unit_f64(rng.next_u64()) < env.alpha(pos)
            };
            pos += if up { 1 } else { -1 };
            t += 1;
            if pos == k {
                visits += 1;
            }
            if pos == m {
                break;
            }
            if t >= step_cap {
                capped += 1;
                break;
            }
        }
        let v = visits as f64;
        sum += v;
        sum2 += v * v;
        sum3 += v * v * v;
        sum4 += v * v * v * v;
    }
    let n = reps as f64;
    let mean = sum / n;
    let m2 = (sum2 / n - mean * mean).max(0.0);
    let m4 = (sum4 / n - 4.0 * mean * sum3 / n + 6.0 * mean * mean * sum2 / n
        - 3.0 * mean * mean * mean * mean)
        .max(0.0);
    let variance = if reps > 1 { m2 * n / (n - 1.0) } else { 0.0 };
    let variance_stderr = if reps > 1 {
        crate::scale::sqrt(((m4 - m2 * m2).max(0.0)) / n)
    } else {
        0.0
    };
    Ok(McSummary {
        reps,
        mean,
        stderr: crate::scale::sqrt(variance / n),
        variance,
        variance_stderr,
        capped,
    })
}
