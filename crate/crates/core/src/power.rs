//! Rejection probabilities `H_γ(θ; θ_t)` and grid checks of power dominance.

use rayon::prelude::*;

use crate::bayes::{log_bf_ncchisq, ChiSqTestSpec};
use crate::error::{Error, Result};
use crate::optimize::log_space;
use crate::solver::{rejection_boundary, solve_umpbt_chisq, UmpbtSolution};
use crate::special::{noncentral_chisq_sf, sample_noncentral_chisq, NoncentralChiSq};

/// Largest `H(θ; θ_t) - H(θ*; θ_t)` tolerated by [`dominance_check`].
pub const DOMINANCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerEntry {
    pub theta: f64,
    pub theta_t: f64,
    pub h: f64,
    /// Optional Monte Carlo estimate of `h`.
    pub h_mc: Option<f64>,
}

/// `H_γ(θ; θ_t)` over a grid, sorted by `(θ_t, θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerCurve {
    pub df: f64,
    pub gamma: f64,
    pub entries: Vec<PowerEntry>,
}

/// Outcome of a grid dominance check. Passing is evidence on the recorded
/// grids only.
#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport {
    pub solution: UmpbtSolution,
    pub theta_grid: Vec<f64>,
    pub theta_t_grid: Vec<f64>,
    /// `max H(θ; θ_t) - H(θ*; θ_t)` over the grid.
    pub max_margin: f64,
    /// Grid cell `(θ, θ_t)` attaining `max_margin`.
    pub worst: (f64, f64),
    pub passed: bool,
    pub curve: PowerCurve,
}

fn check_theta_t(theta_t: f64) -> Result<()> {
    if theta_t >= 0.0 && theta_t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "data-generating noncentrality must be finite and nonnegative, got {theta_t}"
        )))
    }
}

/// `H_γ(θ; θ_t) = P_{θ_t}(y > r(θ))`.
pub fn rejection_probability(theta: f64, theta_t: f64, gamma: f64, df: f64) -> Result<f64> {
    check_theta_t(theta_t)?;
    let boundary = rejection_boundary(theta, gamma, df)?;
    noncentral_chisq_sf(boundary, NoncentralChiSq::new(df, theta_t)?)
}

/// 50 log-spaced alternatives over `[θ*/100, 100·θ*]`.
pub fn default_theta_grid(theta_star: f64) -> Vec<f64> {
    log_space(theta_star / 100.0, theta_star * 100.0, 50)
}

/// `{0, θ*/2, θ*, 2θ*, 5θ*}`.
pub fn default_theta_t_grid(theta_star: f64) -> Vec<f64> {
    vec![
        0.0,
        0.5 * theta_star,
        theta_star,
        2.0 * theta_star,
        5.0 * theta_star,
    ]
}

/// Compares every `H(θ; θ_t)` on the grid with `H(θ*; θ_t)`.
pub fn dominance_check(
    gamma: f64,
    df: f64,
    theta_grid: &[f64],
    theta_t_grid: &[f64],
) -> Result<DominanceReport> {
    if theta_grid.is_empty() || theta_t_grid.is_empty() {
        return Err(Error::validation("dominance grids must be nonempty"));
    }
    let solution = solve_umpbt_chisq(&ChiSqTestSpec::with_gamma(df, gamma)?)?;
    let boundaries = theta_grid
        .par_iter()
        .map(|&t| rejection_boundary(t, gamma, df))
        .collect::<Result<Vec<_>>>()?;

    let mut entries = Vec::with_capacity(theta_grid.len() * theta_t_grid.len());
    let mut max_margin = f64::NEG_INFINITY;
    let mut worst = (solution.theta_star, theta_t_grid[0]);
    for &theta_t in theta_t_grid {
        let dist = NoncentralChiSq::new(df, theta_t)?;
        let best = noncentral_chisq_sf(solution.boundary, dist)?;
        let hs = boundaries
            .par_iter()
            .map(|&b| noncentral_chisq_sf(b, dist))
            .collect::<Result<Vec<_>>>()?;
        for (&theta, h) in theta_grid.iter().zip(hs) {
            let margin = h - best;
            if margin > max_margin {
                max_margin = margin;
                worst = (theta, theta_t);
            }
            entries.push(PowerEntry {
                theta,
                theta_t,
                h,
                h_mc: None,
            });
        }
    }
    sort_entries(&mut entries);
    Ok(DominanceReport {
        solution,
        theta_grid: theta_grid.to_vec(),
        theta_t_grid: theta_t_grid.to_vec(),
        max_margin,
        worst,
        passed: max_margin <= DOMINANCE_TOL,
        curve: PowerCurve { df, gamma, entries },
    })
}

fn sort_entries(entries: &mut [PowerEntry]) {
    entries.sort_by(|a, b| {
        a.theta_t
            .total_cmp(&b.theta_t)
            .then(a.theta.total_cmp(&b.theta))
    });
}

/// Fraction of `n_draws` seeded `χ²_ν(θ_t)` draws whose Bayes factor for
/// alternative `θ` exceeds `γ`.
pub fn mc_rejection_rate(
    theta: f64,
    theta_t: f64,
    gamma: f64,
    df: f64,
    n_draws: usize,
    seed: u64,
) -> Result<f64> {
    check_theta_t(theta_t)?;
    if !(gamma > 1.0 && gamma.is_finite()) {
        return Err(Error::validation(format!(
            "evidence threshold must be finite and > 1, got {gamma}"
        )));
    }
    // validates θ and df before sampling
    log_bf_ncchisq(1.0, theta, df)?;
    let draws = sample_noncentral_chisq(NoncentralChiSq::new(df, theta_t)?, n_draws, seed)?;
    let log_gamma = gamma.ln();
    let hits = draws
        .par_iter()
        .map(|&y| -> Result<usize> {
            if y <= 0.0 {
                return Ok(0);
            }
            Ok(usize::from(log_bf_ncchisq(y, theta, df)? > log_gamma))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(hits as f64 / n_draws as f64)
}

impl PowerCurve {
    /// Fills `h_mc` for every entry; the same seed is used in every cell.
    pub fn attach_monte_carlo(&mut self, n_draws: usize, seed: u64) -> Result<()> {
        for e in &mut self.entries {
            e.h_mc = Some(mc_rejection_rate(
                e.theta, e.theta_t, self.gamma, self.df, n_draws, seed,
            )?);
        }
        Ok(())
    }
}
