//! Random environments and the associated potential.
//!
//! An environment is an i.i.d. field `alpha[i]` of right-step probabilities
//! over a lattice window containing 0. Both provided families are symmetric
//! under `alpha -> 1 - alpha`, so the centering hypothesis
//! `E[ln((1-alpha)/alpha)] = 0` holds exactly, and both are uniformly
//! elliptic: `eta0 <= alpha[i] <= 1 - eta0`.
//!
//! Draws are positional: site `i` always consumes the same words of the same
//! ChaCha sub-stream (one stream per half-lattice), so growing the window
//! never changes previously generated values and the result is independent
//! of the order in which extensions happen.

use alloc::vec::Vec;

use rand_chacha::rand_core::RngCore;

use crate::error::CoreError;
use crate::scale::{exp, ln, sqrt};
use crate::seed::{self, domain, unit_f64};
use crate::Site;

/// Distribution family for the right-step probability at a single site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnvFamily {
    /// `alpha ∈ {p, 1-p}` with probability 1/2 each. Requires `p != 1/2`,
    /// otherwise the log-ratio variance is zero and the walk degenerates to
    /// the simple random walk.
    TwoPoint { p: f64 },
    /// `alpha` uniform on `[eta0, 1-eta0]` with `0 < eta0 < 1/2`.
    UniformElliptic { eta0: f64 },
}

/// A validated family plus the master seed that drives all site draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvironmentSpec {
    family: EnvFamily,
    master_seed: u64,
}

/// Exact moments of `eps = ln((1-alpha)/alpha)` under the spec's family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypothesisDiagnostics {
    /// Mean of the log-ratio; zero for both families by symmetry.
    pub mean_eps: f64,
    /// Variance of the log-ratio; must be positive.
    pub sigma2: f64,
    /// Ellipticity margin: `alpha` stays in `[eta0, 1-eta0]` almost surely.
    pub eta0: f64,
}

impl EnvironmentSpec {
    /// Two-point family; rejects `p = 1/2` (zero variance) and `p ∉ (0,1)`.
    pub fn two_point(p: f64, master_seed: u64) -> Result<Self, CoreError> {
        if !(p > 0.0 && p < 1.0) {
            return Err(CoreError::InvalidSpec("two-point p must lie in (0, 1)"));
        }
        if p == 0.5 {
            return Err(CoreError::InvalidSpec(
                "two-point p = 1/2 has zero log-ratio variance",
            ));
        }
        Ok(Self {
            family: EnvFamily::TwoPoint { p },
            master_seed,
        })
    }

    /// Uniform family on `[eta0, 1-eta0]`; rejects `eta0 ∉ (0, 1/2)`.
    pub fn uniform_elliptic(eta0: f64, master_seed: u64) -> Result<Self, CoreError> {
        if !(eta0 > 0.0 && eta0 < 0.5) {
            return Err(CoreError::InvalidSpec(
                "uniform-elliptic eta0 must lie in (0, 1/2)",
            ));
        }
        Ok(Self {
            family: EnvFamily::UniformElliptic { eta0 },
            master_seed,
        })
    }

    pub fn family(&self) -> EnvFamily {
        self.family
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    /// Ellipticity margin of the family.
    pub fn eta0(&self) -> f64 {
        match self.family {
            EnvFamily::TwoPoint { p } => if p < 0.5 { p } else { 1.0 - p },
            EnvFamily::UniformElliptic { eta0 } => eta0,
        }
    }

    /// Analytic moments of the log-ratio (no sampling involved).
    pub fn diagnostics(&self) -> HypothesisDiagnostics {
        let sigma2 = match self.family {
            EnvFamily::TwoPoint { p } => {
                let e = ln((1.0 - p) / p);
                e * e
            }
            EnvFamily::UniformElliptic { eta0 } => uniform_log_ratio_variance(eta0),
        };
        HypothesisDiagnostics {
            mean_eps: 0.0,
            sigma2,
            eta0: self.eta0(),
        }
    }

    /// Standard deviation of the log-ratio.
    pub fn sigma(&self) -> f64 {
        sqrt(self.diagnostics().sigma2)
    }

    /// Map the positional draw for `site` to a right-step probability.
    fn alpha_at(&self, u: f64) -> f64 {
        match self.family {
            EnvFamily::TwoPoint { p } => {
                if u < 0.5 {
                    p
                } else {
                    1.0 - p
                }
            }
            EnvFamily::UniformElliptic { eta0 } => eta0 + u * (1.0 - 2.0 * eta0),
        }
    }
}

/// Variance of `ln((1-a)/a)` for `a` uniform on `[eta0, 1-eta0]`.
///
/// The mean is zero by symmetry, so this is the second moment
/// `(2/(1-2·eta0)) ∫_{eta0}^{1/2} ln²((1-a)/a) da`, evaluated by composite
/// Simpson refinement to machine accuracy (the integrand is smooth away
/// from the endpoints, which `eta0 > 0` guarantees).
fn uniform_log_ratio_variance(eta0: f64) -> f64 {
    let f = |a: f64| {
        let e = ln((1.0 - a) / a);
        e * e
    };
    let (lo, hi) = (eta0, 0.5);
    let mut n = 64usize;
    let mut prev = simpson(&f, lo, hi, n);
    loop {
        n *= 2;
        let cur = simpson(&f, lo, hi, n);
        if (cur - prev).abs() <= 1e-14 * (1.0 + cur.abs()) || n >= 1 << 20 {
            return 2.0 * cur / (1.0 - 2.0 * eta0);
        }
        prev = cur;
    }
}

fn simpson(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / n as f64;
    let mut acc = f(lo) + f(hi);
    for i in 1..n {
        let x = lo + h * i as f64;
        acc += f(x) * if i % 2 == 0 { 2.0 } else { 4.0 };
    }
    acc * h / 3.0
}

/// Where an environment's values came from.
#[derive(Debug, Clone, PartialEq)]
enum EnvSource {
    /// Drawn from a family; the window can grow deterministically.
    Sampled(EnvironmentSpec),
    /// Explicit per-site probabilities (oracles, tests); fixed window.
    Explicit { eta0: f64 },
}

/// A realized transition-probability field over `[lo, hi]`.
///
/// Immutable for all practical purposes: the only mutation is window growth,
/// which never changes existing values.
#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    source: EnvSource,
    lo: Site,
    alpha: Vec<f64>,
    epsilon: Vec<f64>,
}

impl Environment {
    /// Draw one `alpha` per site of `window` (inclusive). The window must
    /// contain the origin.
    pub fn sample(spec: EnvironmentSpec, window: (Site, Site)) -> Result<Self, CoreError> {
        let (lo, hi) = window;
        if lo > 0 || hi < 0 {
            return Err(CoreError::WindowWithoutOrigin { lo, hi });
        }
        let mut env = Self {
            source: EnvSource::Sampled(spec),
            lo,
            alpha: Vec::new(),
            epsilon: Vec::new(),
        };
        env.fill(lo, hi);
        Ok(env)
    }

    /// Assemble an environment from explicit probabilities; `alpha[i]` is the
    /// right-step probability at site `lo + i`. The window must contain 0 and
    /// every probability must lie strictly inside `(0, 1)`. The window of an
    /// explicit environment cannot grow: a simulation that leaves it panics.
    pub fn from_alphas(lo: Site, alpha: Vec<f64>) -> Result<Self, CoreError> {
        let hi = lo + alpha.len() as Site - 1;
        if lo > 0 || hi < 0 {
            return Err(CoreError::WindowWithoutOrigin { lo, hi });
        }
        if alpha.iter().any(|&a| !(a > 0.0 && a < 1.0)) {
            return Err(CoreError::InvalidArgument(
                "explicit alpha values must lie in (0, 1)",
            ));
        }
        let eta0 = alpha
            .iter()
            .map(|&a| if a < 1.0 - a { a } else { 1.0 - a })
            .fold(f64::INFINITY, f64::min);
        let epsilon = alpha.iter().map(|&a| ln((1.0 - a) / a)).collect();
        Ok(Self {
            source: EnvSource::Explicit { eta0 },
            lo,
            alpha,
            epsilon,
        })
    }

    /// Inclusive window of generated sites.
    pub fn window(&self) -> (Site, Site) {
        (self.lo, self.lo + self.alpha.len() as Site - 1)
    }

    /// The sampling spec, when this environment was drawn from a family.
    pub fn spec(&self) -> Option<&EnvironmentSpec> {
        match &self.source {
            EnvSource::Sampled(spec) => Some(spec),
            EnvSource::Explicit { .. } => None,
        }
    }

    pub fn contains(&self, site: Site) -> bool {
        let (lo, hi) = self.window();
        site >= lo && site <= hi
    }

    #[inline]
    fn index(&self, site: Site) -> usize {
        (site - self.lo) as usize
    }

    /// Right-step probability at `site`. Panics outside the window; use
    /// [`Environment::contains`] or grow the window first.
    #[inline]
    pub fn alpha(&self, site: Site) -> f64 {
        self.alpha[self.index(site)]
    }

    /// `ln((1-alpha)/alpha)` at `site`.
    #[inline]
    pub fn epsilon(&self, site: Site) -> f64 {
        self.epsilon[self.index(site)]
    }

    pub fn alpha_slice(&self) -> &[f64] {
        &self.alpha
    }

    /// Ellipticity margin: family value for sampled environments, the
    /// realized margin for explicit ones.
    pub fn eta0(&self) -> f64 {
        match &self.source {
            EnvSource::Sampled(spec) => spec.eta0(),
            EnvSource::Explicit { eta0 } => *eta0,
        }
    }

    /// Variance of the log-ratio: analytic for sampled environments,
    /// empirical for explicit ones.
    pub fn sigma2(&self) -> f64 {
        match &self.source {
            EnvSource::Sampled(spec) => spec.diagnostics().sigma2,
            EnvSource::Explicit { .. } => {
                let m = self.epsilon.len() as f64;
                let mean: f64 = self.epsilon.iter().sum::<f64>() / m;
                self.epsilon.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / m
            }
        }
    }

    /// A copy of `self` grown to `new_window`; existing values are reused
    /// verbatim. Shrinking is a usage error.
    pub fn extended(&self, new_window: (Site, Site)) -> Result<Self, CoreError> {
        let (lo, hi) = self.window();
        let (new_lo, new_hi) = new_window;
        if new_lo > lo || new_hi < hi {
            return Err(CoreError::WindowShrink {
                lo,
                hi,
                new_lo,
                new_hi,
            });
        }
        let mut out = self.clone();
        out.grow(new_lo, new_hi);
        Ok(out)
    }

    /// Grow in place so that `[lo, hi]` is covered. Used by the walk when a
    /// trajectory leaves the current window; existing values never change.
    pub fn ensure_window(&mut self, lo: Site, hi: Site) {
        let (cur_lo, cur_hi) = self.window();
        self.grow(lo.min(cur_lo), hi.max(cur_hi));
    }

    fn grow(&mut self, new_lo: Site, new_hi: Site) {
        let (cur_lo, cur_hi) = self.window();
        if new_lo >= cur_lo && new_hi <= cur_hi {
            return;
        }
        assert!(
            matches!(self.source, EnvSource::Sampled(_)),
            "explicit environments have a fixed window"
        );
        if new_lo < cur_lo {
            let mut left = Self {
                source: self.source.clone(),
                lo: new_lo,
                alpha: Vec::new(),
                epsilon: Vec::new(),
            };
            left.fill(new_lo, cur_lo - 1);
            left.alpha.extend_from_slice(&self.alpha);
            left.epsilon.extend_from_slice(&self.epsilon);
            self.alpha = left.alpha;
            self.epsilon = left.epsilon;
            self.lo = new_lo;
        }
        if new_hi > cur_hi {
            self.fill(cur_hi + 1, new_hi);
        }
    }

    /// Append draws for the contiguous site range `[from, to]` (inclusive)
    /// to the vectors. Sites must extend the current storage contiguously.
    ///
    /// Draws are positional: site `i >= 0` reads words `[2i, 2i+2)` of the
    /// right stream, site `i <= -1` reads words `[2(-i-1), 2(-i-1)+2)` of the
    /// left stream.
    fn fill(&mut self, from: Site, to: Site) {
        debug_assert_eq!(self.lo + self.alpha.len() as Site, from);
        let spec = match &self.source {
            EnvSource::Sampled(spec) => *spec,
            EnvSource::Explicit { .. } => unreachable!("explicit windows never fill"),
        };
        let count = (to - from + 1) as usize;
        self.alpha.reserve(count);
        self.epsilon.reserve(count);

        if from < 0 {
            // Negative flank: word positions ascend as sites approach 0, so
            // generate from the site nearest 0 outward and emit reversed.
            let neg_hi = to.min(-1);
            let mut rng = seed::stream(&[spec.master_seed, domain::ENV_LEFT]);
            rng.set_word_pos(2 * ((-neg_hi - 1) as u128));
            let n_neg = (neg_hi - from + 1) as usize;
            let mut tmp: Vec<f64> = Vec::with_capacity(n_neg);
            for _ in 0..n_neg {
                tmp.push(spec.alpha_at(unit_f64(rng.next_u64())));
            }
            for &a in tmp.iter().rev() {
                self.push_site(a);
            }
        }
        if to >= 0 {
            let pos_lo = from.max(0);
            let mut rng = seed::stream(&[spec.master_seed, domain::ENV_RIGHT]);
            rng.set_word_pos(2 * (pos_lo as u128));
            for _ in pos_lo..=to {
                let a = spec.alpha_at(unit_f64(rng.next_u64()));
                self.push_site(a);
            }
        }
    }

    #[inline]
    fn push_site(&mut self, alpha: f64) {
        self.alpha.push(alpha);
        self.epsilon.push(ln((1.0 - alpha) / alpha));
    }

    /// Cumulative potential over the window, anchored at `S_0 = 0`.
    pub fn potential(&self) -> PotentialPath {
        let (lo, hi) = self.window();
        let len = (hi - lo + 1) as usize;
        let origin = (-lo) as usize;
        let mut s = alloc::vec![0.0f64; len];
        // Rightward: S_k = S_{k-1} + eps_k.
        for k in 1..=hi {
            s[origin + k as usize] = s[origin + k as usize - 1] + self.epsilon(k);
        }
        // Leftward: S_{k} = S_{k+1} - eps_{k+1}.
        let mut k = -1;
        while k >= lo {
            let idx = (k - lo) as usize;
            s[idx] = s[idx + 1] - self.epsilon(k + 1);
            k -= 1;
        }
        PotentialPath { lo, s }
    }
}

/// The random potential: `S_0 = 0` and `S_k - S_{k-1} = eps_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialPath {
    lo: Site,
    s: Vec<f64>,
}

impl PotentialPath {
    /// Build directly from increments; `values[i]` is `S_{lo+i}` and the
    /// window must contain 0 with `S_0 = 0`.
    pub fn from_values(lo: Site, values: Vec<f64>) -> Result<Self, CoreError> {
        let hi = lo + values.len() as Site - 1;
        if lo > 0 || hi < 0 {
            return Err(CoreError::WindowWithoutOrigin { lo, hi });
        }
        if values[(-lo) as usize] != 0.0 {
            return Err(CoreError::InvalidArgument("potential must vanish at 0"));
        }
        Ok(Self { lo, s: values })
    }

    pub fn window(&self) -> (Site, Site) {
        (self.lo, self.lo + self.s.len() as Site - 1)
    }

    pub fn contains(&self, site: Site) -> bool {
        let (lo, hi) = self.window();
        site >= lo && site <= hi
    }

    /// Potential value at `site`; panics outside the window.
    #[inline]
    pub fn s(&self, site: Site) -> f64 {
        self.s[(site - self.lo) as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.s
    }

    /// `e^{S_k}` convenience used by the excursion formulas.
    #[inline]
    pub fn exp_s(&self, site: Site) -> f64 {
        exp(self.s(site))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tp(p: f64, seed: u64) -> EnvironmentSpec {
        EnvironmentSpec::two_point(p, seed).unwrap()
    }

    #[test]
    fn rejects_degenerate_params() {
        assert!(EnvironmentSpec::two_point(0.5, 1).is_err());
        assert!(EnvironmentSpec::two_point(0.0, 1).is_err());
        assert!(EnvironmentSpec::two_point(1.0, 1).is_err());
        assert!(EnvironmentSpec::uniform_elliptic(0.0, 1).is_err());
        assert!(EnvironmentSpec::uniform_elliptic(0.5, 1).is_err());
    }

    #[test]
    fn two_point_support_and_ellipticity() {
        let env = Environment::sample(tp(0.3, 7), (-200, 200)).unwrap();
        for &a in env.alpha_slice() {
            assert!(a == 0.3 || a == 0.7, "alpha {a} outside support");
        }
        let eta0 = env.eta0();
        assert_eq!(eta0, 0.3);
        for &a in env.alpha_slice() {
            assert!(a >= eta0 && a <= 1.0 - eta0);
        }
    }

    #[test]
    fn uniform_support() {
        let spec = EnvironmentSpec::uniform_elliptic(0.1, 7).unwrap();
        let env = Environment::sample(spec, (-500, 500)).unwrap();
        for &a in env.alpha_slice() {
            assert!((0.1..=0.9).contains(&a), "alpha {a} outside support");
        }
    }

    #[test]
    fn diagnostics_two_point() {
        let d = tp(0.3, 0).diagnostics();
        assert_eq!(d.mean_eps, 0.0);
        let expect = ln(7.0 / 3.0) * ln(7.0 / 3.0);
        assert!((d.sigma2 - expect).abs() < 1e-15);
        assert!((d.sigma2 - 0.7179).abs() < 1e-4);
        assert_eq!(d.eta0, 0.3);
    }

    #[test]
    fn diagnostics_uniform_matches_sampling() {
        let spec = EnvironmentSpec::uniform_elliptic(0.1, 3).unwrap();
        let d = spec.diagnostics();
        assert_eq!(d.mean_eps, 0.0);
        // Monte Carlo cross-check of the quadrature.
        let env = Environment::sample(spec, (-50_000, 50_000)).unwrap();
        let m = env.epsilon.len() as f64;
        let mean: f64 = env.epsilon.iter().sum::<f64>() / m;
        let var: f64 = env.epsilon.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / m;
        assert!(
            (var - d.sigma2).abs() / d.sigma2 < 0.05,
            "sampled {var} vs analytic {}",
            d.sigma2
        );
    }

    #[test]
    fn epsilon_consistent_with_alpha() {
        let env = Environment::sample(tp(0.3, 11), (-64, 64)).unwrap();
        let (lo, hi) = env.window();
        for k in lo..=hi {
            let expect = ln((1.0 - env.alpha(k)) / env.alpha(k));
            assert!((env.epsilon(k) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn sample_moments_match_two_point_law() {
        // 1e6 sites: mean within 3 sigma / 1e3, variance within 2%.
        let env = Environment::sample(tp(0.3, 99), (-500_000, 499_999)).unwrap();
        let d = env.spec().unwrap().diagnostics();
        let m = env.epsilon.len() as f64;
        let mean: f64 = env.epsilon.iter().sum::<f64>() / m;
        let var: f64 = env.epsilon.iter().map(|e| e * e).sum::<f64>() / m;
        let sigma = sqrt(d.sigma2);
        assert!(mean.abs() < 3.0 * sigma / 1e3, "mean {mean}");
        assert!((var - d.sigma2).abs() / d.sigma2 < 0.02, "var {var}");
    }

    #[test]
    fn extension_is_stable_and_order_independent() {
        let env = Environment::sample(tp(0.3, 5), (-10, 10)).unwrap();
        let same = env.extended((-10, 10)).unwrap();
        assert_eq!(env, same);

        let once = env.extended((-20, 20)).unwrap();
        assert_eq!(once.alpha(5), env.alpha(5));

        let twice = env
            .extended((-15, 17))
            .unwrap()
            .extended((-20, 20))
            .unwrap();
        assert_eq!(once, twice);

        let fresh = Environment::sample(tp(0.3, 5), (-20, 20)).unwrap();
        assert_eq!(once, fresh);
    }

    #[test]
    fn extension_rejects_shrink() {
        let env = Environment::sample(tp(0.3, 5), (-10, 10)).unwrap();
        assert!(matches!(
            env.extended((-5, 10)),
            Err(CoreError::WindowShrink { .. })
        ));
    }

    #[test]
    fn window_must_contain_origin() {
        assert!(Environment::sample(tp(0.3, 5), (1, 10)).is_err());
        assert!(Environment::sample(tp(0.3, 5), (-10, -1)).is_err());
    }

    #[test]
    fn potential_anchored_and_increments_match() {
        let env = Environment::sample(tp(0.3, 13), (-40, 40)).unwrap();
        let pot = env.potential();
        assert_eq!(pot.s(0), 0.0);
        let (lo, hi) = pot.window();
        for k in (lo + 1)..=hi {
            assert!(
                (pot.s(k) - pot.s(k - 1) - env.epsilon(k)).abs() < 1e-12,
                "increment mismatch at {k}"
            );
        }
        // Shift consistency on a few pairs.
        for (j, k) in [(-30i64, -3i64), (-7, 22), (3, 39)] {
            let sum: f64 = ((j + 1)..=k).map(|i| env.epsilon(i)).sum();
            assert!((pot.s(k) - pot.s(j) - sum).abs() < 1e-10);
        }
    }

    #[test]
    fn potential_single_step_value() {
        // alpha_1 = 0.3 -> S_1 = ln(7/3).
        let mut found = None;
        for seed in 0..64 {
            let env = Environment::sample(tp(0.3, seed), (-2, 2)).unwrap();
            if env.alpha(1) == 0.3 {
                found = Some(env);
                break;
            }
        }
        let env = found.expect("some seed draws alpha_1 = 0.3");
        let pot = env.potential();
        assert!((pot.s(1) - 0.847_298).abs() < 1e-6);
    }

    #[test]
    fn flat_potential_for_half_alpha() {
        let env = Environment::from_alphas(-10, alloc::vec![0.5; 21]).unwrap();
        let pot = env.potential();
        assert!(pot.values().iter().all(|&s| s == 0.0));
        assert_eq!(env.eta0(), 0.5);
    }

    #[test]
    fn explicit_env_rejects_bad_values() {
        assert!(Environment::from_alphas(0, alloc::vec![1.0]).is_err());
        assert!(Environment::from_alphas(1, alloc::vec![0.5, 0.5]).is_err());
    }
}
