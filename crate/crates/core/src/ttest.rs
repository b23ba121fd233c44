//! One-sample t-test with an inverse-gamma prior on `σ²`.
//!
//! Rejection regions are bounded intervals `(a(θ), b(θ))` whose endpoints
//! cannot be optimized by a single `θ`, so the regions are not nested and
//! the most powerful alternative depends on the data-generating mean. This
//! module simulates that dependence.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::optimize::{golden_section, lin_space, Minimum};
use crate::special::log_normal_cdf;

/// Grid resolution and golden-section bracket width for the argmax search;
/// argmaxes further apart than this are reported as distinct.
pub const REFINE_TOL: f64 = 1e-4;
const GRID_POINTS: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TTestSetting {
    pub n: usize,
    pub theta0: f64,
    /// Inverse-gamma shape `α`.
    pub alpha_prior: f64,
    /// Inverse-gamma scale `β`.
    pub beta_prior: f64,
    pub gamma: f64,
    /// Standard deviation used to simulate data.
    pub sigma_true: f64,
}

impl TTestSetting {
    /// `θ0 = 0`, `α = β = 0`, `σ = 1`.
    pub fn new(n: usize, gamma: f64) -> Result<Self> {
        let s = TTestSetting {
            n,
            theta0: 0.0,
            alpha_prior: 0.0,
            beta_prior: 0.0,
            gamma,
            sigma_true: 1.0,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::validation(format!(
                "t-test needs at least 2 observations, got {}",
                self.n
            )));
        }
        if !(self.alpha_prior >= 0.0 && self.beta_prior >= 0.0)
            || !self.alpha_prior.is_finite()
            || !self.beta_prior.is_finite()
        {
            return Err(Error::validation(
                "inverse-gamma parameters must be finite and nonnegative",
            ));
        }
        if !(self.sigma_true > 0.0 && self.sigma_true.is_finite()) {
            return Err(Error::validation("sigma_true must be positive and finite"));
        }
        if !self.theta0.is_finite() {
            return Err(Error::validation("theta0 must be finite"));
        }
        if !self.gamma.is_finite() || self.gamma_n().is_nan() || self.gamma_n() <= 1.0 {
            return Err(Error::validation(format!(
                "evidence threshold must be finite and > 1, got {}",
                self.gamma
            )));
        }
        Ok(())
    }

    /// `n/2 + α`.
    pub fn exponent(&self) -> f64 {
        0.5 * self.n as f64 + self.alpha_prior
    }

    /// `γ_n = γ^{2/(n + 2α)}`.
    pub fn gamma_n(&self) -> f64 {
        self.gamma.powf(1.0 / self.exponent())
    }
}

/// The rejection interval `(lower, upper)`, or the empty set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticRegion {
    pub lower: f64,
    pub upper: f64,
    pub empty: bool,
}

impl QuadraticRegion {
    pub fn contains(&self, y: f64) -> bool {
        !self.empty && y > self.lower && y < self.upper
    }
}

fn check_u(u: f64) -> Result<()> {
    if u > 0.0 && u.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "U must be positive and finite, got {u}"
        )))
    }
}

/// `log g = (n/2 + α)·[log(U + n(y-θ0)²) - log(U + n(y-θ)²)]`, `y = x̄`.
pub fn t_log_bf(y: f64, theta: f64, u: f64, setting: &TTestSetting) -> Result<f64> {
    check_u(u)?;
    let n = setting.n as f64;
    let d0 = y - setting.theta0;
    let d1 = y - theta;
    Ok(setting.exponent() * ((u + n * d0 * d0).ln() - (u + n * d1 * d1).ln()))
}

/// Roots of the quadratic whose negative set is `{y : g(y, θ) > γ}`.
pub fn t_region(theta: f64, u: f64, setting: &TTestSetting) -> Result<QuadraticRegion> {
    check_u(u)?;
    if theta == setting.theta0 {
        return Err(Error::domain("t_region needs theta != theta0"));
    }
    Ok(region_unchecked(
        theta,
        u,
        setting.theta0,
        setting.gamma_n(),
        setting.n as f64,
    ))
}

#[inline]
fn region_unchecked(theta: f64, u: f64, theta0: f64, gamma_n: f64, n: f64) -> QuadraticRegion {
    let gm1 = gamma_n - 1.0;
    let center = (gamma_n * theta - theta0) / gm1;
    let dt = theta - theta0;
    let disc = gamma_n * dt * dt / (gm1 * gm1) - u / n;
    if disc < 0.0 {
        QuadraticRegion {
            lower: center,
            upper: center,
            empty: true,
        }
    } else {
        let half = disc.sqrt();
        QuadraticRegion {
            lower: center - half,
            upper: center + half,
            empty: false,
        }
    }
}

/// Standardized summaries of simulated datasets, reused across alternatives
/// and data-generating means (common random numbers).
///
/// For `x_i = θ_t + σ z_i`: `x̄ = θ_t + σ z̄` and `U = σ² Σ(z_i - z̄)² + 2β`.
#[derive(Debug, Clone)]
pub struct SimulatedDatasets {
    mean_z: Vec<f64>,
    spread_z: Vec<f64>,
}

impl SimulatedDatasets {
    pub fn simulate(n: usize, n_draws: usize, seed: u64) -> Result<Self> {
        if n_draws == 0 {
            return Err(Error::domain(
                "number of simulated datasets must be at least 1",
            ));
        }
        if n < 2 {
            return Err(Error::domain("datasets need at least 2 observations"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut mean_z = Vec::with_capacity(n_draws);
        let mut spread_z = Vec::with_capacity(n_draws);
        let mut buf = vec![0.0; n];
        for _ in 0..n_draws {
            for z in buf.iter_mut() {
                *z = StandardNormal.sample(&mut rng);
            }
            let mean = buf.iter().sum::<f64>() / n as f64;
            let spread = buf.iter().map(|z| (z - mean) * (z - mean)).sum::<f64>();
            mean_z.push(mean);
            spread_z.push(spread);
        }
        Ok(SimulatedDatasets { mean_z, spread_z })
    }

    pub fn len(&self) -> usize {
        self.mean_z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mean_z.is_empty()
    }

    /// `(x̄, U)` for every dataset under data-generating mean `θ_t`.
    pub fn statistics<'a>(
        &'a self,
        theta_t: f64,
        setting: &'a TTestSetting,
    ) -> impl Iterator<Item = (f64, f64)> + 'a {
        let s = setting.sigma_true;
        let extra = 2.0 * setting.beta_prior;
        self.mean_z
            .iter()
            .zip(&self.spread_z)
            .map(move |(&m, &sp)| (theta_t + s * m, s * s * sp + extra))
    }

    /// Fraction of datasets whose Bayes factor for `θ` exceeds `γ`.
    pub fn rejection_rate(&self, theta: f64, theta_t: f64, setting: &TTestSetting) -> f64 {
        let log_gamma = setting.gamma.ln();
        let n = setting.n as f64;
        let k = setting.exponent();
        let hits = self
            .statistics(theta_t, setting)
            .filter(|&(y, u)| {
                let d0 = y - setting.theta0;
                let d1 = y - theta;
                k * ((u + n * d0 * d0).ln() - (u + n * d1 * d1).ln()) > log_gamma
            })
            .count();
        hits as f64 / self.len() as f64
    }

    /// `log(1 - H)` averaged over the simulated `U` values, integrating `x̄`
    /// exactly: given `U`, `x̄ ~ N(θ_t, σ²/n)` independently, so the
    /// conditional miss probability is `Φ(l) + Φ(-u)` with standardized
    /// endpoints `l`, `u`.
    pub fn log_miss(&self, theta: f64, theta_t: f64, setting: &TTestSetting) -> f64 {
        let n = setting.n as f64;
        let gamma_n = setting.gamma_n();
        let scale = n.sqrt() / setting.sigma_true;
        let extra = 2.0 * setting.beta_prior;
        let s2 = setting.sigma_true * setting.sigma_true;
        let terms: Vec<f64> = self
            .spread_z
            .iter()
            .map(|&sp| {
                let u = s2 * sp + extra;
                let region = region_unchecked(theta, u, setting.theta0, gamma_n, n);
                if region.empty {
                    0.0
                } else {
                    let below = log_normal_cdf((region.lower - theta_t) * scale);
                    let above = log_normal_cdf(-(region.upper - theta_t) * scale);
                    log_add_exp(below, above)
                }
            })
            .collect();
        log_mean_exp(&terms)
    }
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

fn log_mean_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    let s: f64 = xs.iter().map(|x| (x - m).exp()).sum();
    m + (s / xs.len() as f64).ln()
}

/// Monte Carlo `H_γ(θ; θ_t)` over `n_draws` full datasets of size `n` drawn
/// from `N(θ_t, σ²)`.
pub fn t_rejection_prob(
    theta: f64,
    theta_t: f64,
    setting: &TTestSetting,
    n_draws: usize,
    seed: u64,
) -> Result<f64> {
    setting.validate()?;
    if !theta.is_finite() || !theta_t.is_finite() {
        return Err(Error::domain("theta and theta_t must be finite"));
    }
    let data = SimulatedDatasets::simulate(setting.n, n_draws, seed)?;
    Ok(data.rejection_rate(theta, theta_t, setting))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonexistenceRow {
    pub theta_t: f64,
    pub argmax_theta: f64,
    /// Counting estimate of `H` at the argmax.
    pub max_prob: f64,
    /// `log(1 - H)` at the argmax from the smoothed surface.
    pub log_miss: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonexistenceReport {
    pub setting: TTestSetting,
    pub n_draws: usize,
    pub seed: u64,
    pub rows: Vec<NonexistenceRow>,
    /// Largest distance between two argmaxes.
    pub argmax_spread: f64,
    pub tolerance: f64,
    /// Set when the most powerful alternative depends on `θ_t`.
    pub nonexistent: bool,
}

/// For each `θ_t`, the alternative maximizing the rejection probability.
///
/// The argmax is searched on a 300-point grid over
/// `θ0 + s·(0, 3|θ_t - θ0|]` (`s` the side of `θ_t`) and refined by golden
/// section. All datasets are shared across `θ` and `θ_t`. The surface being
/// maximized is the smoothed one of [`SimulatedDatasets::log_miss`]: with
/// `n = 10` the counting estimate equals 1 on a whole interval of `θ` and
/// has no unique maximizer.
pub fn nonexistence_demo(
    setting: &TTestSetting,
    theta_t_list: &[f64],
    n_draws: usize,
    seed: u64,
) -> Result<NonexistenceReport> {
    setting.validate()?;
    if theta_t_list.len() < 2 {
        return Err(Error::validation(
            "at least two data-generating means are needed",
        ));
    }
    if theta_t_list.iter().any(|t| !t.is_finite()) {
        return Err(Error::domain("data-generating means must be finite"));
    }
    let data = SimulatedDatasets::simulate(setting.n, n_draws, seed)?;
    let mut rows = Vec::with_capacity(theta_t_list.len());
    for &theta_t in theta_t_list {
        let offset = theta_t - setting.theta0;
        let (side, span) = if offset == 0.0 {
            (1.0, 1.0)
        } else {
            (offset.signum(), offset.abs())
        };
        let dists = lin_space(span * 3.0 / GRID_POINTS as f64, 3.0 * span, GRID_POINTS);
        let surface = |d: f64| data.log_miss(setting.theta0 + side * d, theta_t, setting);
        let values: Vec<f64> = dists.par_iter().map(|&d| surface(d)).collect();
        let i = crate::optimize::argmin_first(&values);
        let lo = if i == 0 { dists[0] } else { dists[i - 1] };
        let hi = if i + 1 == dists.len() {
            dists[i]
        } else {
            dists[i + 1]
        };
        let best = golden_section(
            |d| Ok(surface(d)),
            lo,
            hi,
            Some(Minimum {
                x: dists[i],
                value: values[i],
            }),
            |_| REFINE_TOL,
        )?;
        let argmax_theta = setting.theta0 + side * best.x;
        rows.push(NonexistenceRow {
            theta_t,
            argmax_theta,
            max_prob: data.rejection_rate(argmax_theta, theta_t, setting),
            log_miss: best.value,
        });
    }
    let mut spread: f64 = 0.0;
    for a in &rows {
        for b in &rows {
            spread = spread.max((a.argmax_theta - b.argmax_theta).abs());
        }
    }
    Ok(NonexistenceReport {
        setting: *setting,
        n_draws,
        seed,
        rows,
        argmax_spread: spread,
        tolerance: REFINE_TOL,
        nonexistent: spread > REFINE_TOL,
    })
}
