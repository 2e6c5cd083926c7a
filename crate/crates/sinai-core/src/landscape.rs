//! Valley analysis of the potential.
//!
//! A valley `{left, bottom, right}` is a triple of sites where the potential
//! attains its flank maxima at the endpoints and its minimum at the bottom.
//! The walk at horizon `n` is trapped by the minimal valley around the origin
//! whose depth exceeds `ln n + gamma·ln ln n`; finding that valley, checking
//! it, and deriving the low-barrier interval inside it is what this module
//! does.
//!
//! Ties in potential values are real events (two-point environments produce
//! exactly equal sums), so all comparisons are exact and every arg-min/max
//! resolves ties toward the smallest absolute site, preferring the
//! nonnegative one between `+k` and `-k`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::bd;
use crate::env::{Environment, PotentialPath};
use crate::error::CoreError;
use crate::scale::{ln, log_log, powf, sqrt, valley_depth_threshold};
use crate::Site;

/// A valley: flank maxima at `left` and `right`, minimum at `bottom`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValleyTriple {
    pub left: Site,
    pub bottom: Site,
    pub right: Site,
}

impl ValleyTriple {
    pub fn span(&self) -> (Site, Site) {
        (self.left, self.right)
    }

    pub fn width(&self) -> Site {
        self.right - self.left
    }

    pub fn contains(&self, site: Site) -> bool {
        site >= self.left && site <= self.right
    }
}

/// Result of a refinement: the steepest descent (right flank) or ascent
/// (left flank) strictly inside a valley flank.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refinement {
    /// High end of the extracted sub-barrier.
    pub peak: Site,
    /// Low end of the extracted sub-valley bottom.
    pub dip: Site,
    /// `S[peak] - S[dip]`, always nonnegative.
    pub drop: f64,
    /// No interior structure: the flank is monotone (drop = 0).
    pub degenerate: bool,
}

/// The minimal trapping valley around the origin, with its certificates.
#[derive(Debug, Clone, PartialEq)]
pub struct BasicValley {
    pub triple: ValleyTriple,
    pub gamma: f64,
    /// Depth requirement `ln n + gamma·ln ln n` the valley satisfies.
    pub depth_threshold: f64,
    /// Whether the origin-side barrier margin holds for the bottom's sign.
    pub side_condition_ok: bool,
}

/// Outcome of the basic-valley search, including diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ValleyOutcome {
    pub valley: Option<BasicValley>,
    /// The search hit the configured window cap before succeeding.
    pub window_capped: bool,
    /// Number of `+k`/`-k` tie-breaks taken during the search.
    pub sign_ties: u32,
}

/// Good-environment diagnostics for a given horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct GoodEnvReport {
    pub basic_valley_exists: bool,
    /// Both barriers within `d0·(ln ln n · ln n / sigma)^2` of the origin.
    pub window_bound_ok: bool,
    /// Expected visits per bottom-excursion summed over the valley.
    pub excursion_weight: f64,
    /// The bound `d1·(ln ln n)^2` the weight is compared against.
    pub weight_bound: f64,
    pub weight_ok: bool,
    pub d0: f64,
    pub d1: f64,
}

/// Validity report for a proposed basic valley.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValleyCheck {
    /// All structural and threshold conditions hold.
    pub valid: bool,
    /// The exhaustive minimality search actually ran (small windows only).
    pub minimality_checked: bool,
}

// Tie rule shared by every arg-min/max below: smaller absolute site wins,
// and between +k and -k the nonnegative one does.
#[inline]
fn abs_better(a: Site, b: Site) -> bool {
    let (aa, ab) = (a.abs(), b.abs());
    aa < ab || (aa == ab && a > b)
}

fn argmin_tie(pot: &PotentialPath, lo: Site, hi: Site) -> Site {
    debug_assert!(lo <= hi);
    let mut best = lo;
    for k in (lo + 1)..=hi {
        let (sk, sb) = (pot.s(k), pot.s(best));
        if sk < sb || (sk == sb && abs_better(k, best)) {
            best = k;
        }
    }
    best
}

fn argmax_tie(pot: &PotentialPath, lo: Site, hi: Site) -> Site {
    debug_assert!(lo <= hi);
    let mut best = lo;
    for k in (lo + 1)..=hi {
        let (sk, sb) = (pot.s(k), pot.s(best));
        if sk > sb || (sk == sb && abs_better(k, best)) {
            best = k;
        }
    }
    best
}

fn max_on(pot: &PotentialPath, lo: Site, hi: Site) -> f64 {
    let mut m = pot.s(lo);
    for k in (lo + 1)..=hi {
        m = m.max(pot.s(k));
    }
    m
}

fn min_on(pot: &PotentialPath, lo: Site, hi: Site) -> f64 {
    let mut m = pot.s(lo);
    for k in (lo + 1)..=hi {
        m = m.min(pot.s(k));
    }
    m
}

/// Check the three defining equalities of a valley, exactly.
pub fn validate_triple(pot: &PotentialPath, v: &ValleyTriple) -> Result<(), CoreError> {
    if !(pot.contains(v.left) && pot.contains(v.right)) {
        return Err(CoreError::InvalidValley("triple outside potential window"));
    }
    if !(v.left <= v.bottom && v.bottom <= v.right) {
        return Err(CoreError::InvalidValley("sites out of order"));
    }
    if pot.s(v.left) != max_on(pot, v.left, v.bottom) {
        return Err(CoreError::InvalidValley("left end is not the flank maximum"));
    }
    if pot.s(v.right) != max_on(pot, v.bottom, v.right) {
        return Err(CoreError::InvalidValley("right end is not the flank maximum"));
    }
    if pot.s(v.bottom) != min_on(pot, v.left, v.right) {
        return Err(CoreError::InvalidValley("bottom is not the minimum"));
    }
    Ok(())
}

/// Depth: the smaller barrier height above the bottom.
pub fn depth(pot: &PotentialPath, v: &ValleyTriple) -> Result<f64, CoreError> {
    validate_triple(pot, v)?;
    let d_left = pot.s(v.left) - pot.s(v.bottom);
    let d_right = pot.s(v.right) - pot.s(v.bottom);
    Ok(d_left.min(d_right))
}

// Candidate ordering for refinements: maximal drop first, then smallest
// |dip|, then smallest |peak|.
fn better_refinement(a: (Site, Site, f64), b: (Site, Site, f64)) -> bool {
    if a.2 != b.2 {
        return a.2 > b.2;
    }
    if a.1 != b.1 {
        return abs_better(a.1, b.1);
    }
    a.0 != b.0 && abs_better(a.0, b.0)
}

/// Steepest descent inside the right flank `[bottom, right]`: the pair
/// `peak <= dip` maximizing `S[peak] - S[dip]`.
pub fn refine_right(pot: &PotentialPath, v: &ValleyTriple) -> Result<Refinement, CoreError> {
    validate_triple(pot, v)?;
    // Running tie-ruled argmax of the prefix; for each candidate dip the
    // best peak is the prefix argmax.
    let mut peak = v.bottom;
    let mut best: Option<(Site, Site, f64)> = None;
    for t in v.bottom..=v.right {
        let st = pot.s(t);
        if st > pot.s(peak) || (st == pot.s(peak) && abs_better(t, peak)) {
            peak = t;
        }
        let cand = (peak, t, pot.s(peak) - st);
        if best.is_none() || better_refinement(cand, best.unwrap()) {
            best = Some(cand);
        }
    }
    let (peak, dip, drop) = best.expect("flank is nonempty");
    Ok(Refinement {
        peak,
        dip,
        drop,
        degenerate: drop == 0.0,
    })
}

/// Mirror of [`refine_right`] on the left flank `[left, bottom]`: the pair
/// `dip <= peak` maximizing `S[peak] - S[dip]`.
pub fn refine_left(pot: &PotentialPath, v: &ValleyTriple) -> Result<Refinement, CoreError> {
    validate_triple(pot, v)?;
    let mut dip = v.left;
    let mut best: Option<(Site, Site, f64)> = None;
    for t in v.left..=v.bottom {
        let st = pot.s(t);
        if st < pot.s(dip) || (st == pot.s(dip) && abs_better(t, dip)) {
            dip = t;
        }
        let cand = (t, dip, st - pot.s(dip));
        if best.is_none() || better_refinement(cand, best.unwrap()) {
            best = Some(cand);
        }
    }
    let (peak, dip, drop) = best.expect("flank is nonempty");
    Ok(Refinement {
        peak,
        dip,
        drop,
        degenerate: drop == 0.0,
    })
}

/// The origin-side margin condition for a candidate valley: the barrier on
/// the far side of 0 must clear the ridge between the bottom and 0 by
/// `gamma·ln ln n`.
pub fn side_condition(pot: &PotentialPath, v: &ValleyTriple, n: u64, gamma: f64) -> bool {
    let margin = gamma * log_log(n);
    if v.bottom > 0 {
        pot.s(v.left) - max_on(pot, 0, v.bottom) >= margin
    } else if v.bottom < 0 {
        pot.s(v.right) - max_on(pot, v.bottom, 0) >= margin
    } else {
        true
    }
}

fn qualifies(pot: &PotentialPath, v: &ValleyTriple, n: u64, gamma: f64) -> bool {
    let threshold = valley_depth_threshold(n, gamma);
    v.contains(0)
        && depth(pot, v).map(|d| d >= threshold).unwrap_or(false)
        && side_condition(pot, v, n, gamma)
}

/// Children of `v` under one left or right refinement that still contain 0
/// and are strictly smaller. Both splits of a valid valley are valid valleys.
fn zero_children(pot: &PotentialPath, v: &ValleyTriple) -> Vec<ValleyTriple> {
    let mut out = Vec::new();
    if let Ok(r) = refine_right(pot, v) {
        if !r.degenerate {
            out.push(ValleyTriple {
                left: v.left,
                bottom: v.bottom,
                right: r.peak,
            });
            out.push(ValleyTriple {
                left: r.peak,
                bottom: r.dip,
                right: v.right,
            });
        }
    }
    if let Ok(r) = refine_left(pot, v) {
        if !r.degenerate {
            out.push(ValleyTriple {
                left: v.left,
                bottom: r.dip,
                right: r.peak,
            });
            out.push(ValleyTriple {
                left: r.peak,
                bottom: v.bottom,
                right: v.right,
            });
        }
    }
    out.retain(|c| {
        c.contains(0)
            && (c.right - c.left) < (v.right - v.left)
            && validate_triple(pot, c).is_ok()
    });
    out
}

// Candidate ordering for qualifying valleys: smaller span first, then
// smaller |bottom| (nonnegative preferred).
fn better_valley(a: &ValleyTriple, b: &ValleyTriple) -> bool {
    let (wa, wb) = (a.width(), b.width());
    if wa != wb {
        return wa < wb;
    }
    if a.bottom != b.bottom {
        return abs_better(a.bottom, b.bottom);
    }
    (a.left, a.right) < (b.left, b.right)
}

/// Walk the refinement tree below `root` (through every 0-containing child,
/// qualifying or not) and return the minimal fully-qualifying valley.
fn minimal_qualifying(
    pot: &PotentialPath,
    root: &ValleyTriple,
    n: u64,
    gamma: f64,
) -> Option<ValleyTriple> {
    let mut best: Option<ValleyTriple> = None;
    let mut seen: BTreeSet<(Site, Site, Site)> = BTreeSet::new();
    let mut stack = alloc::vec![*root];
    while let Some(v) = stack.pop() {
        if !seen.insert((v.left, v.bottom, v.right)) {
            continue;
        }
        if qualifies(pot, &v, n, gamma) && best.is_none_or(|b| better_valley(&v, &b)) {
            best = Some(v);
        }
        stack.extend(zero_children(pot, &v));
    }
    best
}

/// Re-derive the innermost barriers for a given bottom: the nearest site on
/// each side with a full-depth rise, where the barrier on the far side of 0
/// must additionally clear the origin-side ridge by the margin.
///
/// Returns `None` when a scan runs out of window.
fn shrink_to_bottom(
    pot: &PotentialPath,
    bottom: Site,
    n: u64,
    gamma: f64,
) -> Option<ValleyTriple> {
    let threshold = valley_depth_threshold(n, gamma);
    let margin = gamma * log_log(n);
    let (lo, hi) = pot.window();
    let s_bottom = pot.s(bottom);

    // Scans start just inside the admissible set: the far-side barrier may
    // sit at 0 itself, the near-side one starts next to the bottom.
    let scan = |dir: i64, needs_margin: bool, ridge: f64| -> Option<Site> {
        let mut l = if dir > 0 {
            if bottom < 0 {
                -1 // right barrier of a negative bottom may be 0
            } else {
                bottom
            }
        } else if bottom > 0 {
            1 // left barrier of a positive bottom may be 0
        } else {
            bottom
        };
        loop {
            l += dir;
            if l < lo || l > hi {
                return None;
            }
            let rise = pot.s(l) - s_bottom;
            if rise >= threshold && (!needs_margin || pot.s(l) - ridge >= margin) {
                return Some(l);
            }
        }
    };

    let (left, right) = if bottom > 0 {
        let ridge = max_on(pot, 0, bottom);
        (scan(-1, true, ridge)?, scan(1, false, 0.0)?)
    } else if bottom < 0 {
        let ridge = max_on(pot, bottom, 0);
        (scan(-1, false, 0.0)?, scan(1, true, ridge)?)
    } else {
        (scan(-1, false, 0.0)?, scan(1, false, 0.0)?)
    };
    Some(ValleyTriple {
        left,
        bottom,
        right,
    })
}

enum BracketStep {
    Ready(ValleyTriple),
    NeedLeft,
    NeedRight,
}

/// One attempt at the initial bracket valley on the current window: extend
/// the failing side until both barriers outside `[min(0,m), max(0,m)]` rise
/// a full depth above the running minimum and dominate the inner ridge.
fn bracket_on(
    pot: &PotentialPath,
    l: Site,
    r: Site,
    threshold: f64,
    ties: &mut u32,
) -> BracketStep {
    let m = argmin_tie(pot, l, r);
    if m != 0 && l <= -m && -m <= r && pot.s(m) == pot.s(-m) {
        *ties += 1;
    }
    let s_m = pot.s(m);
    let left_edge = m.min(0);
    let right_edge = m.max(0);
    let left_bar = argmax_tie(pot, l, left_edge);
    if pot.s(left_bar) - s_m < threshold {
        return BracketStep::NeedLeft;
    }
    let right_bar = argmax_tie(pot, right_edge, r);
    if pot.s(right_bar) - s_m < threshold {
        return BracketStep::NeedRight;
    }
    // The bracket must also be a genuine valley: the ridge between 0 and the
    // bottom may not exceed the far barrier.
    if m > 0 && max_on(pot, 0, m) > pot.s(left_bar) {
        return BracketStep::NeedLeft;
    }
    if m < 0 && max_on(pot, m, 0) > pot.s(right_bar) {
        return BracketStep::NeedRight;
    }
    BracketStep::Ready(ValleyTriple {
        left: left_bar,
        bottom: m,
        right: right_bar,
    })
}

/// Default search radius: `d0·(ln ln n · ln n / sigma)^2` sites each side.
pub fn search_radius(n: u64, d0: f64, sigma2: f64) -> Site {
    let sigma = sqrt(sigma2);
    let r = d0 * powf(log_log(n) * ln(n as f64) / sigma, 2.0);
    r as Site + 1
}

/// Find the minimal trapping valley around the origin, growing the
/// environment window as needed up to `radius_cap` sites on each side.
pub fn find_basic_valley(
    env: &mut Environment,
    n: u64,
    gamma: f64,
    radius_cap: Site,
) -> ValleyOutcome {
    let threshold = valley_depth_threshold(n, gamma);
    let mut ties = 0u32;
    let chunk: Site = 256;
    let (mut l, mut r) = (-chunk.min(radius_cap), chunk.min(radius_cap));

    let root = loop {
        env.ensure_window(l, r);
        let pot = env.potential();
        match bracket_on(&pot, l, r, threshold, &mut ties) {
            BracketStep::Ready(v) => {
                // A bracket alone is not enough: the tree below it must hold
                // a qualifying valley, otherwise keep widening (a taller
                // far-side barrier can restore the margin condition).
                if minimal_qualifying(&pot, &v, n, gamma).is_some() {
                    break v;
                }
                if l == -radius_cap && r == radius_cap {
                    return ValleyOutcome {
                        valley: None,
                        window_capped: true,
                        sign_ties: ties,
                    };
                }
                l = (l - chunk).max(-radius_cap);
                r = (r + chunk).min(radius_cap);
            }
            BracketStep::NeedLeft => {
                if l == -radius_cap {
                    return ValleyOutcome {
                        valley: None,
                        window_capped: true,
                        sign_ties: ties,
                    };
                }
                l = (l - chunk).max(-radius_cap);
            }
            BracketStep::NeedRight => {
                if r == radius_cap {
                    return ValleyOutcome {
                        valley: None,
                        window_capped: true,
                        sign_ties: ties,
                    };
                }
                r = (r + chunk).min(radius_cap);
            }
        }
    };

    let pot = env.potential();
    // Iterate: pick the minimal qualifying valley, tighten its barriers to
    // the innermost qualifying sites, and repeat inside the result until the
    // tightened valley is itself minimal.
    let mut current = minimal_qualifying(&pot, &root, n, gamma).expect("checked above");
    let triple = loop {
        let Some(tight) = shrink_to_bottom(&pot, current.bottom, n, gamma) else {
            return ValleyOutcome {
                valley: None,
                window_capped: true,
                sign_ties: ties,
            };
        };
        debug_assert!(validate_triple(&pot, &tight).is_ok());
        debug_assert!(qualifies(&pot, &tight, n, gamma));
        let inner = minimal_qualifying(&pot, &tight, n, gamma).expect("tight qualifies");
        if inner == tight {
            break tight;
        }
        current = inner;
    };

    ValleyOutcome {
        valley: Some(BasicValley {
            triple,
            gamma,
            depth_threshold: threshold,
            side_condition_ok: side_condition(&pot, &triple, n, gamma),
        }),
        window_capped: false,
        sign_ties: ties,
    }
}

/// Search a fixed potential window without extension; `None` means the
/// window was insufficient (treated like a capped search).
pub fn find_basic_valley_in(pot: &PotentialPath, n: u64, gamma: f64) -> Option<BasicValley> {
    let threshold = valley_depth_threshold(n, gamma);
    let (lo, hi) = pot.window();
    let mut ties = 0u32;
    let root = match bracket_on(pot, lo, hi, threshold, &mut ties) {
        BracketStep::Ready(v) => v,
        _ => return None,
    };
    let mut current = minimal_qualifying(pot, &root, n, gamma)?;
    let triple = loop {
        let tight = shrink_to_bottom(pot, current.bottom, n, gamma)?;
        let inner = minimal_qualifying(pot, &tight, n, gamma).expect("tight qualifies");
        if inner == tight {
            break tight;
        }
        current = inner;
    };
    Some(BasicValley {
        triple,
        gamma,
        depth_threshold: threshold,
        side_condition_ok: side_condition(pot, &triple, n, gamma),
    })
}

/// Independent validity check for a proposed basic valley: structural
/// equalities, the three qualifying conditions, barrier tightness, and (on
/// windows of at most `MINIMALITY_WINDOW` sites) exhaustive minimality over
/// the refinement tree.
pub fn is_valid_basic_valley(
    pot: &PotentialPath,
    bv: &BasicValley,
    n: u64,
    gamma: f64,
) -> ValleyCheck {
    let (lo, hi) = pot.window();
    const MINIMALITY_WINDOW: Site = 5000;

    let v = &bv.triple;
    let threshold = valley_depth_threshold(n, gamma);
    let margin = gamma * log_log(n);

    // Structural equalities, brute force.
    let mut valid = v.left <= v.bottom
        && v.bottom <= v.right
        && pot.contains(v.left)
        && pot.contains(v.right)
        && v.contains(0);
    if valid {
        let mut mx = f64::NEG_INFINITY;
        for k in v.left..=v.bottom {
            mx = mx.max(pot.s(k));
        }
        valid &= pot.s(v.left) == mx;
        mx = f64::NEG_INFINITY;
        for k in v.bottom..=v.right {
            mx = mx.max(pot.s(k));
        }
        valid &= pot.s(v.right) == mx;
        let mut mn = f64::INFINITY;
        for k in v.left..=v.right {
            mn = mn.min(pot.s(k));
        }
        valid &= pot.s(v.bottom) == mn;
    }

    // Depth and margin conditions.
    if valid {
        let d = (pot.s(v.left) - pot.s(v.bottom)).min(pot.s(v.right) - pot.s(v.bottom));
        valid &= d >= threshold;
        if v.bottom > 0 {
            let mut ridge = f64::NEG_INFINITY;
            for k in 0..=v.bottom {
                ridge = ridge.max(pot.s(k));
            }
            valid &= pot.s(v.left) - ridge >= margin;
        } else if v.bottom < 0 {
            let mut ridge = f64::NEG_INFINITY;
            for k in v.bottom..=0 {
                ridge = ridge.max(pot.s(k));
            }
            valid &= pot.s(v.right) - ridge >= margin;
        }
    }

    // Barrier tightness: no site strictly between a barrier and the bottom
    // may satisfy that barrier's conditions.
    if valid {
        let rise_ok = |k: Site| pot.s(k) - pot.s(v.bottom) >= threshold;
        let far_margin_ok = |k: Site, ridge: f64| pot.s(k) - ridge >= margin;
        if v.bottom > 0 {
            let mut ridge = f64::NEG_INFINITY;
            for k in 0..=v.bottom {
                ridge = ridge.max(pot.s(k));
            }
            for k in (v.left + 1)..=0 {
                valid &= !(rise_ok(k) && far_margin_ok(k, ridge));
            }
            for k in (v.bottom + 1)..v.right {
                valid &= !rise_ok(k);
            }
        } else if v.bottom < 0 {
            let mut ridge = f64::NEG_INFINITY;
            for k in v.bottom..=0 {
                ridge = ridge.max(pot.s(k));
            }
            for k in (v.left + 1)..v.bottom {
                valid &= !rise_ok(k);
            }
            for k in 0..v.right {
                if k > v.bottom {
                    valid &= !(rise_ok(k) && far_margin_ok(k, ridge));
                }
            }
        } else {
            for k in (v.left + 1)..0 {
                valid &= !rise_ok(k);
            }
            for k in 1..v.right {
                valid &= !rise_ok(k);
            }
        }
    }

    // Exhaustive minimality: no qualifying valley strictly below this one in
    // the refinement tree.
    let small_enough = hi - lo < MINIMALITY_WINDOW;
    if valid && small_enough {
        let mut seen: BTreeSet<(Site, Site, Site)> = BTreeSet::new();
        let mut stack = zero_children(pot, v);
        while let Some(w) = stack.pop() {
            if !seen.insert((w.left, w.bottom, w.right)) {
                continue;
            }
            if qualifies(pot, &w, n, gamma) {
                valid = false;
                break;
            }
            stack.extend(zero_children(pot, &w));
        }
    }

    ValleyCheck {
        valid,
        minimality_checked: small_enough,
    }
}

/// The interval of sites inside the valley whose running barrier toward the
/// bottom stays below `ln n − (gamma/2)·ln ln n`. Always contains the
/// bottom; monotone barriers make it an interval, returned as `(lo, hi)`.
pub fn low_barrier_interval(
    pot: &PotentialPath,
    bv: &BasicValley,
    n: u64,
    gamma: f64,
) -> (Site, Site) {
    low_barrier_interval_around(pot, bv.triple.bottom, bv.triple.span(), n, gamma)
}

/// Same barrier rule around an arbitrary bottom, clipped to `span`.
pub fn low_barrier_interval_around(
    pot: &PotentialPath,
    bottom: Site,
    span: (Site, Site),
    n: u64,
    gamma: f64,
) -> (Site, Site) {
    let bound = crate::scale::barrier_bound(n, gamma);
    let (left, right) = span;
    let s_bottom = pot.s(bottom);

    let mut lo = bottom;
    let mut barrier = f64::NEG_INFINITY;
    for k in (left..bottom).rev() {
        barrier = barrier.max(pot.s(k) - s_bottom);
        if barrier < bound {
            lo = k;
        } else {
            break;
        }
    }
    let mut hi = bottom;
    barrier = f64::NEG_INFINITY;
    for k in (bottom + 1)..=right {
        barrier = barrier.max(pot.s(k) - s_bottom);
        if barrier < bound {
            hi = k;
        } else {
            break;
        }
    }
    (lo, hi)
}

/// Evaluate the good-environment properties at horizon `n`.
pub fn good_environment_check(
    env: &mut Environment,
    n: u64,
    gamma: f64,
    d0: f64,
    d1: f64,
) -> GoodEnvReport {
    let radius = search_radius(n, d0, env.sigma2());
    let outcome = find_basic_valley(env, n, gamma, radius);
    let weight_bound = d1 * log_log(n) * log_log(n);
    match outcome.valley {
        None => GoodEnvReport {
            basic_valley_exists: false,
            window_bound_ok: false,
            excursion_weight: 0.0,
            weight_bound,
            weight_ok: false,
            d0,
            d1,
        },
        Some(bv) => {
            let v = bv.triple;
            let window_bound_ok = v.left >= -radius && v.right <= radius;
            let sites: Vec<Site> = (v.left..=v.right).collect();
            // Pre-grow once so the per-site solves below never clone.
            let hw = (v.left - v.bottom).abs().max((v.right - v.bottom).abs()) + 2;
            env.ensure_window(v.bottom - hw, v.bottom + hw);
            let excursion_weight = bd::excursion_weight(env, v.bottom, &sites);
            GoodEnvReport {
                basic_valley_exists: true,
                window_bound_ok,
                excursion_weight,
                weight_bound,
                weight_ok: excursion_weight <= weight_bound,
                d0,
                d1,
            }
        }
    }
}
