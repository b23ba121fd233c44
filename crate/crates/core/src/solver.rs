//! UMPBT construction.
//!
//! When the Bayes factor is strictly monotone in the sufficient statistic,
//! every alternative `θ` rejects on a one-sided interval bounded by the root
//! `r(θ)` of `g(y, θ) = γ`. The alternative whose region covers all others
//! minimizes `v·r(θ)`, with `v` the sign of `∂g/∂y`. For the noncentral
//! chi-squared test `v = +1` and regions are upper intervals `(r(θ), ∞)`.

use std::fmt;

use rayon::prelude::*;

use crate::bayes::{
    dlogbf_dy, expfam_log_bf, log_bf_ncchisq, ChiSqTestSpec, ExpFamilyKind, ExpFamilyModel, Side,
};
use crate::error::{Error, Result};
use crate::optimize::{argmin_first, golden_section, increasing_root, log_space, Minimum};
use crate::special::chisq_quantile;

const SCAN_POINTS: usize = 200;
const SCAN_LOWER: f64 = 1e-4;
const MAX_DOUBLINGS: usize = 64;
/// Allowed `|log g(r, θ) - log γ|` at a returned boundary.
const ROOT_FTOL: f64 = 1e-13;
/// Target accuracy of the matched boundary against the classical critical value.
const MATCH_TOL: f64 = 1e-8;
/// Distance from `θ0`, in model scale units, where exponential-family scans start.
const NEAR_NULL: f64 = 1e-6;

fn refine_tol(x: f64) -> f64 {
    1e-8 * (1.0 + x.abs())
}

/// Sign of `∂g/∂y`: whether the rejection region lies above or below `r(θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Positive,
    Negative,
}

impl Direction {
    pub fn sign(self) -> i32 {
        match self {
            Direction::Positive => 1,
            Direction::Negative => -1,
        }
    }

    fn of(v: f64) -> Self {
        if v >= 0.0 {
            Direction::Positive
        } else {
            Direction::Negative
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.sign())
    }
}

/// The UMPBT alternative and its rejection boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UmpbtSolution {
    pub theta_star: f64,
    /// Critical value `r(θ*)` of the sufficient statistic.
    pub boundary: f64,
    pub gamma: f64,
    pub direction: Direction,
    /// Degrees of freedom; `None` for exponential-family solutions.
    pub df: Option<f64>,
}

/// One point of the evidence-threshold curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub df: u32,
    pub alpha: f64,
    pub gamma: f64,
    pub theta_star: f64,
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 1.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::NoRoot(format!(
            "evidence threshold {gamma} must exceed 1: g(y, θ) approaches 1 from below only as θ·y → 0, \
             so no upper-interval rejection region exists"
        )))
    }
}

/// `r(θ)`: the unique `y` with `g(y, θ) = γ`. The rejection region is
/// `(r(θ), ∞)`.
pub fn rejection_boundary(theta: f64, gamma: f64, df: f64) -> Result<f64> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::domain(format!(
            "noncentrality must be positive and finite, got {theta}"
        )));
    }
    if !(df > 0.0 && df.is_finite()) {
        return Err(Error::domain(format!(
            "degrees of freedom must be positive and finite, got {df}"
        )));
    }
    check_gamma(gamma)?;
    let target = gamma.ln();
    // log g(0⁺, θ) = -θ/2 < 0 < log γ, so 0 is a valid lower bracket end.
    let mut lo = 0.0;
    let mut hi = (df + theta).max(1.0);
    loop {
        let v = log_bf_ncchisq(hi, theta, df)?;
        if v >= target {
            break;
        }
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::NoRoot(format!(
                "log Bayes factor never reaches log {gamma} for theta = {theta}, df = {df}"
            )));
        }
    }
    increasing_root(
        |y| {
            Ok((
                log_bf_ncchisq(y, theta, df)? - target,
                dlogbf_dy(y, theta, df)?,
            ))
        },
        lo,
        hi,
        ROOT_FTOL,
    )
}

/// `θ* = argmin_{θ > 0} r(θ)` for the noncentral chi-squared test.
///
/// A 200-point log-spaced scan over `[1e-4, θ_hi]` locates the best cell
/// (`θ_hi` starts at `10(ν + 2 log γ)` and doubles while the minimum sits
/// on the upper edge). Golden-section search refines that cell, and the
/// scanned points are checked against the refined value.
pub fn solve_umpbt_chisq(spec: &ChiSqTestSpec) -> Result<UmpbtSolution> {
    spec.validate()?;
    let gamma = spec
        .gamma
        .ok_or_else(|| Error::validation("solve_umpbt_chisq needs an evidence threshold"))?;
    let df = spec.df;
    let r = |theta: f64| rejection_boundary(theta, gamma, df);

    let mut hi = 10.0 * (df + 2.0 * gamma.ln());
    for _ in 0..MAX_DOUBLINGS {
        let grid = log_space(SCAN_LOWER, hi, SCAN_POINTS);
        let values = grid.iter().map(|&t| r(t)).collect::<Result<Vec<_>>>()?;
        let i = argmin_first(&values);
        if i == grid.len() - 1 {
            hi *= 2.0;
            continue;
        }
        let lo_edge = if i == 0 { grid[0] } else { grid[i - 1] };
        let seed = Minimum {
            x: grid[i],
            value: values[i],
        };
        let best = golden_section(r, lo_edge, grid[i + 1], Some(seed), refine_tol)?;
        let scanned_min = values.iter().copied().fold(f64::INFINITY, f64::min);
        if scanned_min < best.value - 1e-12 {
            return Err(Error::Internal(format!(
                "refined boundary {} is beaten by a scanned value {scanned_min}",
                best.value
            )));
        }
        let theta_star = best.x;
        return Ok(UmpbtSolution {
            theta_star,
            boundary: r(theta_star)?,
            gamma,
            direction: Direction::Positive,
            df: Some(df),
        });
    }
    Err(Error::Bracketing(format!(
        "could not bracket the minimum of r(θ) for df = {df}, gamma = {gamma}"
    )))
}

/// Finds the evidence threshold whose UMPBT rejection region equals the
/// upper `α` tail of the central `χ²_ν`.
///
/// Bisection on `log γ`, starting from `(log 1.0001, log 100)` and widening
/// upward as needed; `min_θ r(θ; γ)` is increasing in `γ`.
pub fn match_gamma_to_alpha(spec: &ChiSqTestSpec) -> Result<UmpbtSolution> {
    spec.validate()?;
    let alpha = spec
        .alpha
        .ok_or_else(|| Error::validation("match_gamma_to_alpha needs a significance level"))?;
    let df = spec.df;
    let critical = chisq_quantile(1.0 - alpha, df)?;
    let solve = |log_gamma: f64| {
        solve_umpbt_chisq(&ChiSqTestSpec {
            df,
            gamma: Some(log_gamma.exp()),
            alpha: None,
        })
    };

    let mut lo = 1.0001f64.ln();
    let lo_sol = solve(lo)?;
    if lo_sol.boundary > critical {
        return Err(Error::Bracketing(format!(
            "critical value {critical} (alpha = {alpha}, df = {df}) lies below the smallest \
             attainable boundary {}",
            lo_sol.boundary
        )));
    }
    if (lo_sol.boundary - critical).abs() <= MATCH_TOL {
        return Ok(lo_sol);
    }
    let mut hi = 100f64.ln();
    let mut hi_sol = solve(hi)?;
    while hi_sol.boundary < critical {
        lo = hi;
        hi *= 2.0;
        if hi > 700.0 {
            return Err(Error::Bracketing(format!(
                "critical value {critical} (alpha = {alpha}, df = {df}) needs gamma beyond exp(700)"
            )));
        }
        hi_sol = solve(hi)?;
    }
    let mut best = hi_sol;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let sol = solve(mid)?;
        if (sol.boundary - critical).abs() < (best.boundary - critical).abs() {
            best = sol;
        }
        if (sol.boundary - critical).abs() <= MATCH_TOL || mid <= lo || mid >= hi {
            return Ok(sol);
        }
        if sol.boundary < critical {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(best)
}

/// Dispatches on whichever threshold the spec carries.
pub fn solve_chisq(spec: &ChiSqTestSpec) -> Result<UmpbtSolution> {
    spec.validate()?;
    if spec.gamma.is_some() {
        solve_umpbt_chisq(spec)
    } else {
        match_gamma_to_alpha(spec)
    }
}

/// Root of `g(y, θ) = γ` in an exponential family:
/// `y = [log γ + n(A(θ) - A(θ0))] / [η(θ) - η(θ0)]`.
pub fn expfam_boundary(theta: f64, gamma: f64, model: &ExpFamilyModel) -> Result<f64> {
    model.validate()?;
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::domain(format!(
            "evidence threshold must be positive and finite, got {gamma}"
        )));
    }
    if !model.on_alternative(theta) {
        return Err(Error::domain(format!(
            "theta = {theta} is not strictly on the '{}' side of theta0 = {}",
            model.side, model.theta0
        )));
    }
    let d_eta = model.eta(theta) - model.eta(model.theta0);
    if d_eta == 0.0 {
        return Err(Error::domain(format!(
            "eta(theta) equals eta(theta0) at theta = {theta}; the boundary is undefined"
        )));
    }
    let n = model.n as f64;
    Ok((gamma.ln() + n * (model.log_partition(theta) - model.log_partition(model.theta0))) / d_eta)
}

/// Extent of the alternative side measured as distance from `θ0`.
struct SideGeometry {
    /// Natural length scale for the scan's lower end.
    scale: f64,
    /// Upper limit of the distance, if the side is bounded.
    limit: Option<f64>,
}

fn side_geometry(model: &ExpFamilyModel) -> SideGeometry {
    let n = model.n as f64;
    match (model.kind, model.side) {
        (ExpFamilyKind::BinomialProportion, Side::Greater) => SideGeometry {
            scale: 1.0 - model.theta0,
            limit: Some(1.0 - model.theta0),
        },
        (ExpFamilyKind::BinomialProportion, Side::Less) => SideGeometry {
            scale: model.theta0,
            limit: Some(model.theta0),
        },
        (ExpFamilyKind::NormalMeanKnownVariance, _) => SideGeometry {
            scale: (model.nuisance / n).sqrt(),
            limit: None,
        },
        (ExpFamilyKind::NormalVarianceKnownMean, Side::Greater) => SideGeometry {
            scale: model.theta0,
            limit: None,
        },
        (ExpFamilyKind::NormalVarianceKnownMean, Side::Less) => SideGeometry {
            scale: model.theta0,
            limit: Some(model.theta0),
        },
    }
}

/// `θ* = argmin_{θ ∈ Θ1} v·y(θ)` with `v = sign(η(θ) - η(θ0))` on the
/// alternative side.
pub fn solve_umpbt_expfam(model: &ExpFamilyModel, gamma: f64) -> Result<UmpbtSolution> {
    model.validate()?;
    if !(gamma > 1.0 && gamma.is_finite()) {
        return Err(Error::validation(format!(
            "evidence threshold must be finite and > 1, got {gamma}"
        )));
    }
    let s = model.side.sign();
    let geom = side_geometry(model);
    let start = NEAR_NULL * geom.scale;
    let probe = model.theta0 + s * start;
    let v = (model.eta(probe) - model.eta(model.theta0)).signum();
    let objective = |dist: f64| -> Result<f64> {
        Ok(v * expfam_boundary(model.theta0 + s * dist, gamma, model)?)
    };

    let mut hi = match geom.limit {
        Some(limit) => limit * (1.0 - 1e-9),
        None => geom.scale * 10.0 * (1.0 + (2.0 * gamma.ln()).sqrt()),
    };
    for _ in 0..MAX_DOUBLINGS * 4 {
        let grid = log_space(start, hi, SCAN_POINTS);
        let values = grid
            .iter()
            .map(|&d| objective(d))
            .collect::<Result<Vec<_>>>()?;
        let i = argmin_first(&values);
        if i == grid.len() - 1 && geom.limit.is_none() {
            hi *= 2.0;
            continue;
        }
        let best = if i == grid.len() - 1 {
            Minimum {
                x: grid[i],
                value: values[i],
            }
        } else {
            let lo_edge = if i == 0 { grid[0] } else { grid[i - 1] };
            let seed = Minimum {
                x: grid[i],
                value: values[i],
            };
            golden_section(objective, lo_edge, grid[i + 1], Some(seed), |d| {
                refine_tol(model.theta0 + s * d) * 1e-2
            })?
        };
        let theta_star = model.theta0 + s * best.x;
        return Ok(UmpbtSolution {
            theta_star,
            boundary: expfam_boundary(theta_star, gamma, model)?,
            gamma,
            direction: Direction::of(v),
            df: None,
        });
    }
    Err(Error::Bracketing(format!(
        "could not bracket the minimum of the boundary for {} (theta0 = {}, side = {})",
        model.kind, model.theta0, model.side
    )))
}

/// Matched `(γ, θ*)` for every `df` in `1..=df_max` and every `α`, ordered by
/// `df` then by the order of `alphas`.
pub fn gamma_vs_df_curve(alphas: &[f64], df_max: u32) -> Result<Vec<CurvePoint>> {
    if alphas.is_empty() {
        return Err(Error::validation(
            "at least one significance level is required",
        ));
    }
    if let Some(bad) = alphas.iter().find(|&&a| !(a > 0.0 && a < 1.0)) {
        return Err(Error::validation(format!(
            "significance levels must lie in (0, 1), got {bad}"
        )));
    }
    if df_max < 1 {
        return Err(Error::validation("df_max must be at least 1"));
    }
    let cells: Vec<(u32, f64)> = (1..=df_max)
        .flat_map(|df| alphas.iter().map(move |&a| (df, a)))
        .collect();
    cells
        .par_iter()
        .map(|&(df, alpha)| {
            let spec = ChiSqTestSpec {
                df: df as f64,
                gamma: None,
                alpha: Some(alpha),
            };
            match_gamma_to_alpha(&spec)
                .map(|sol| CurvePoint {
                    df,
                    alpha,
                    gamma: sol.gamma,
                    theta_star: sol.theta_star,
                })
                .map_err(|e| Error::Curve {
                    df,
                    alpha,
                    source: Box::new(e),
                })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Default significance levels of the threshold curve.
pub const DEFAULT_CURVE_ALPHAS: [f64; 4] = [0.05, 0.01, 0.005, 0.001];

/// Residual `log g(r(θ), θ) - log γ`, exposed for diagnostics.
pub fn boundary_residual(theta: f64, gamma: f64, df: f64) -> Result<f64> {
    let r = rejection_boundary(theta, gamma, df)?;
    Ok(log_bf_ncchisq(r, theta, df)? - gamma.ln())
}

/// Residual of an exponential-family boundary.
pub fn expfam_boundary_residual(theta: f64, gamma: f64, model: &ExpFamilyModel) -> Result<f64> {
    let y = expfam_boundary(theta, gamma, model)?;
    Ok(expfam_log_bf(y, theta, model)? - gamma.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{noncentral_chisq_sf, NoncentralChiSq};

    fn one_df_boundary(theta: f64, gamma: f64) -> f64 {
        let a = (gamma * (0.5 * theta).exp()).acosh();
        a * a / theta
    }

    #[test]
    fn one_df_boundary_example() {
        let r = rejection_boundary(2.0, 3.0, 1.0).unwrap();
        assert!((r - 3.887).abs() < 1e-3);
        assert!((r - one_df_boundary(2.0, 3.0)).abs() < 1e-10);
    }

    #[test]
    fn boundary_matches_classical_critical_value() {
        let r = rejection_boundary(7.31, 3.46, 6.0).unwrap();
        assert!((r - 12.59).abs() < 0.01, "{r}");
    }

    #[test]
    fn boundary_residual_is_tiny() {
        for &df in &[0.5, 1.0, 2.0, 6.0, 30.0, 120.0] {
            for &theta in &[1e-3, 0.5, 7.0, 60.0, 900.0] {
                for &gamma in &[1.01, 3.0, 100.0] {
                    let res = boundary_residual(theta, gamma, df).unwrap();
                    assert!(
                        res.abs() <= 1e-9,
                        "df={df} theta={theta} gamma={gamma}: {res}"
                    );
                }
            }
        }
    }

    #[test]
    fn gamma_at_most_one_has_no_root() {
        assert!(matches!(
            rejection_boundary(1.0, 1.0, 3.0),
            Err(Error::NoRoot(_))
        ));
        assert!(matches!(
            rejection_boundary(1.0, 0.5, 3.0),
            Err(Error::NoRoot(_))
        ));
        assert!(matches!(
            rejection_boundary(0.0, 3.0, 3.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn paper_six_df_solution() {
        let sol = solve_umpbt_chisq(&ChiSqTestSpec::with_gamma(6.0, 3.46).unwrap()).unwrap();
        assert!((sol.theta_star - 7.31).abs() < 0.01, "{sol:?}");
        assert_eq!(sol.direction, Direction::Positive);
        assert_eq!(sol.df, Some(6.0));
    }

    #[test]
    fn matched_six_df() {
        let sol = match_gamma_to_alpha(&ChiSqTestSpec::with_alpha(6.0, 0.05).unwrap()).unwrap();
        assert!((sol.gamma - 3.46).abs() < 0.01, "{sol:?}");
        assert!((sol.theta_star - 7.31).abs() < 0.01, "{sol:?}");
        let size =
            noncentral_chisq_sf(sol.boundary, NoncentralChiSq::central(6.0).unwrap()).unwrap();
        assert!((size - 0.05).abs() < 1e-6);
    }

    #[test]
    fn solve_dispatches_on_threshold() {
        let g = solve_chisq(&ChiSqTestSpec::with_gamma(2.0, 3.0).unwrap()).unwrap();
        let a = solve_chisq(&ChiSqTestSpec::with_alpha(2.0, 0.05).unwrap()).unwrap();
        assert_eq!(g.gamma, 3.0);
        assert!(a.gamma > 1.0);
    }

    #[test]
    fn expfam_normal_mean_boundary() {
        let m = ExpFamilyModel::new(
            ExpFamilyKind::NormalMeanKnownVariance,
            0.0,
            1,
            Side::Greater,
            Some(1.0),
        )
        .unwrap();
        let y = expfam_boundary(2.0, 2f64.exp(), &m).unwrap();
        assert!((y - 2.0).abs() < 1e-14);
        assert!(expfam_boundary(0.0, 3.0, &m).is_err());
        assert!(expfam_boundary(-1.0, 3.0, &m).is_err());
    }

    #[test]
    fn expfam_normal_mean_closed_form() {
        for &(n, gamma) in &[(1u64, 3.0f64), (10, 10.0), (250, 1.5)] {
            for side in [Side::Greater, Side::Less] {
                let m = ExpFamilyModel::new(
                    ExpFamilyKind::NormalMeanKnownVariance,
                    0.0,
                    n,
                    side,
                    Some(1.0),
                )
                .unwrap();
                let sol = solve_umpbt_expfam(&m, gamma).unwrap();
                let expected = side.sign() * (2.0 * gamma.ln() / n as f64).sqrt();
                assert!(
                    (sol.theta_star - expected).abs() < 1e-6,
                    "{n} {gamma} {side}"
                );
                assert_eq!(sol.direction.sign() as f64, side.sign());
                assert!(sol.df.is_none());
            }
        }
    }

    #[test]
    fn curve_rejects_bad_input() {
        assert!(gamma_vs_df_curve(&[], 3).is_err());
        assert!(gamma_vs_df_curve(&[1.5], 3).is_err());
        assert!(gamma_vs_df_curve(&[0.05], 0).is_err());
    }

    #[test]
    fn curve_order_is_df_major() {
        let pts = gamma_vs_df_curve(&[0.05, 0.01], 3).unwrap();
        let keys: Vec<(u32, f64)> = pts.iter().map(|p| (p.df, p.alpha)).collect();
        assert_eq!(
            keys,
            vec![
                (1, 0.05),
                (1, 0.01),
                (2, 0.05),
                (2, 0.01),
                (3, 0.05),
                (3, 0.01)
            ]
        );
    }
}
