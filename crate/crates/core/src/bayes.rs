//! Bayes factors for simple alternatives.
//!
//! For `y ~ χ²_ν(θ)` and `H0: θ = 0` the Bayes factor in favor of a point
//! alternative `θ > 0` is
//!
//! ```text
//! g(y, θ) = Γ(ν/2) e^{-θ/2} 2^{ν/2-1} (√(θy))^{1-ν/2} I_{ν/2-1}(√(θy))
//! ```
//!
//! and for a one-parameter exponential family with natural parameter `η`,
//! log-partition `A` and sufficient statistic `y = Σ T(x_i)`,
//!
//! ```text
//! log g(y, θ) = n (A(θ0) - A(θ)) + y (η(θ) - η(θ0)).
//! ```

use std::fmt;
use std::str::FromStr;

use libm::lgamma as ln_gamma;

use crate::error::{Error, Result};
use crate::special::log_bessel_i;

/// Largest log Bayes factor that still exponentiates to a finite `f64`.
const LN_F64_MAX: f64 = 709.782_712_893_384;

/// A noncentral chi-squared test, thresholded either by evidence (`gamma`) or
/// by the classical size to be matched (`alpha`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSqTestSpec {
    pub df: f64,
    pub gamma: Option<f64>,
    pub alpha: Option<f64>,
}

impl ChiSqTestSpec {
    pub fn with_gamma(df: f64, gamma: f64) -> Result<Self> {
        let spec = ChiSqTestSpec {
            df,
            gamma: Some(gamma),
            alpha: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_alpha(df: f64, alpha: f64) -> Result<Self> {
        let spec = ChiSqTestSpec {
            df,
            gamma: None,
            alpha: Some(alpha),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.df > 0.0 && self.df.is_finite()) {
            return Err(Error::validation(format!(
                "degrees of freedom must be positive, got {}",
                self.df
            )));
        }
        match (self.gamma, self.alpha) {
            (Some(g), None) if g > 1.0 && g.is_finite() => Ok(()),
            (Some(g), None) => Err(Error::validation(format!(
                "evidence threshold must be finite and > 1, got {g}"
            ))),
            (None, Some(a)) if a > 0.0 && a < 1.0 => Ok(()),
            (None, Some(a)) => Err(Error::validation(format!(
                "significance level must lie in (0, 1), got {a}"
            ))),
            _ => Err(Error::validation(
                "exactly one of gamma and alpha must be set",
            )),
        }
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

/// `log g(y, θ)` for the noncentral chi-squared test.
///
/// `θ = 0` is excluded; the limiting Bayes factor there is 1.
pub fn log_bf_ncchisq(y: f64, theta: f64, df: f64) -> Result<f64> {
    check_positive("statistic", y)?;
    check_positive("noncentrality", theta)?;
    check_positive("degrees of freedom", df)?;
    let half = 0.5 * df;
    let z = (theta * y).sqrt();
    let bessel = log_bessel_i(half - 1.0, z)?;
    Ok(ln_gamma(half) - 0.5 * theta
        + (half - 1.0) * std::f64::consts::LN_2
        + (1.0 - half) * z.ln()
        + bessel.ln())
}

/// Linear-scale [`log_bf_ncchisq`]; fails instead of returning `inf`.
pub fn bf_ncchisq(y: f64, theta: f64, df: f64) -> Result<f64> {
    exp_checked(log_bf_ncchisq(y, theta, df)?)
}

pub(crate) fn exp_checked(log_bf: f64) -> Result<f64> {
    if log_bf > LN_F64_MAX {
        Err(Error::Overflow(format!(
            "Bayes factor exp({log_bf}) exceeds the f64 range"
        )))
    } else {
        Ok(log_bf.exp())
    }
}

/// `∂ log g / ∂y = ½ √(θ/y) · I_{ν/2}(√(θy)) / I_{ν/2-1}(√(θy))`, which is
/// strictly positive.
pub fn dlogbf_dy(y: f64, theta: f64, df: f64) -> Result<f64> {
    check_positive("statistic", y)?;
    check_positive("noncentrality", theta)?;
    check_positive("degrees of freedom", df)?;
    let half = 0.5 * df;
    let z = (theta * y).sqrt();
    let ratio = (log_bessel_i(half, z)?.ln() - log_bessel_i(half - 1.0, z)?.ln()).exp();
    Ok(0.5 * (theta / y).sqrt() * ratio)
}

/// The canned one-parameter exponential families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExpFamilyKind {
    /// `x_i ~ Binomial(m, θ)`, `m` = nuisance (trials per observation).
    BinomialProportion,
    /// `x_i ~ N(θ, σ²)`, `σ²` = nuisance.
    NormalMeanKnownVariance,
    /// `x_i ~ N(μ, θ)`, `μ` = nuisance.
    NormalVarianceKnownMean,
}

impl ExpFamilyKind {
    pub const ALL: [ExpFamilyKind; 3] = [
        ExpFamilyKind::BinomialProportion,
        ExpFamilyKind::NormalMeanKnownVariance,
        ExpFamilyKind::NormalVarianceKnownMean,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExpFamilyKind::BinomialProportion => "binomial-proportion",
            ExpFamilyKind::NormalMeanKnownVariance => "normal-mean-known-variance",
            ExpFamilyKind::NormalVarianceKnownMean => "normal-variance-known-mean",
        }
    }

    pub fn default_nuisance(self) -> f64 {
        match self {
            ExpFamilyKind::BinomialProportion => 1.0,
            ExpFamilyKind::NormalMeanKnownVariance => 1.0,
            ExpFamilyKind::NormalVarianceKnownMean => 0.0,
        }
    }
}

impl fmt::Display for ExpFamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExpFamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binomial-proportion" | "binomial" => Ok(ExpFamilyKind::BinomialProportion),
            "normal-mean-known-variance" | "normal-mean" => {
                Ok(ExpFamilyKind::NormalMeanKnownVariance)
            }
            "normal-variance-known-mean" | "normal-variance" => {
                Ok(ExpFamilyKind::NormalVarianceKnownMean)
            }
            other => Err(Error::validation(format!("unknown model kind '{other}'"))),
        }
    }
}

/// Which side of `θ0` the alternative lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Greater,
    Less,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Greater => 1.0,
            Side::Less => -1.0,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Greater => "greater",
            Side::Less => "less",
        })
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greater" => Ok(Side::Greater),
            "less" => Ok(Side::Less),
            other => Err(Error::validation(format!(
                "side must be 'greater' or 'less', got '{other}'"
            ))),
        }
    }
}

/// A one-sided test of `H0: θ = θ0` on `n` observations from a canned family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpFamilyModel {
    pub kind: ExpFamilyKind,
    pub theta0: f64,
    pub n: u64,
    pub side: Side,
    pub nuisance: f64,
}

impl ExpFamilyModel {
    pub fn new(
        kind: ExpFamilyKind,
        theta0: f64,
        n: u64,
        side: Side,
        nuisance: Option<f64>,
    ) -> Result<Self> {
        let model = ExpFamilyModel {
            kind,
            theta0,
            n,
            side,
            nuisance: nuisance.unwrap_or_else(|| kind.default_nuisance()),
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::validation("sample size must be at least 1"));
        }
        if !self.nuisance.is_finite() {
            return Err(Error::validation("nuisance parameter must be finite"));
        }
        match self.kind {
            ExpFamilyKind::BinomialProportion => {
                if self.nuisance < 1.0 || self.nuisance.fract() != 0.0 {
                    return Err(Error::validation(format!(
                        "binomial trial count must be a positive integer, got {}",
                        self.nuisance
                    )));
                }
            }
            ExpFamilyKind::NormalMeanKnownVariance => {
                if self.nuisance <= 0.0 {
                    return Err(Error::validation(format!(
                        "known variance must be positive, got {}",
                        self.nuisance
                    )));
                }
            }
            ExpFamilyKind::NormalVarianceKnownMean => {}
        }
        if !self.in_parameter_space(self.theta0) {
            return Err(Error::validation(format!(
                "null value {} is outside the {} parameter space",
                self.theta0, self.kind
            )));
        }
        Ok(())
    }

    pub fn in_parameter_space(&self, theta: f64) -> bool {
        if !theta.is_finite() {
            return false;
        }
        match self.kind {
            ExpFamilyKind::BinomialProportion => theta > 0.0 && theta < 1.0,
            ExpFamilyKind::NormalMeanKnownVariance => true,
            ExpFamilyKind::NormalVarianceKnownMean => theta > 0.0,
        }
    }

    /// True when `θ` is a valid parameter strictly on the alternative side.
    pub fn on_alternative(&self, theta: f64) -> bool {
        self.in_parameter_space(theta) && (theta - self.theta0) * self.side.sign() > 0.0
    }

    /// Natural parameter `η(θ)`.
    pub fn eta(&self, theta: f64) -> f64 {
        match self.kind {
            ExpFamilyKind::BinomialProportion => (theta / (1.0 - theta)).ln(),
            ExpFamilyKind::NormalMeanKnownVariance => theta / self.nuisance,
            ExpFamilyKind::NormalVarianceKnownMean => -0.5 / theta,
        }
    }

    /// Per-observation log-partition `A(θ)`.
    pub fn log_partition(&self, theta: f64) -> f64 {
        match self.kind {
            ExpFamilyKind::BinomialProportion => -self.nuisance * (-theta).ln_1p(),
            ExpFamilyKind::NormalMeanKnownVariance => 0.5 * theta * theta / self.nuisance,
            ExpFamilyKind::NormalVarianceKnownMean => 0.5 * theta.ln(),
        }
    }

    /// Sufficient statistic `T(x)` of one observation.
    pub fn sufficient_stat(&self, x: f64) -> f64 {
        match self.kind {
            ExpFamilyKind::BinomialProportion | ExpFamilyKind::NormalMeanKnownVariance => x,
            ExpFamilyKind::NormalVarianceKnownMean => {
                let d = x - self.nuisance;
                d * d
            }
        }
    }

    pub(crate) fn check_alternative(&self, theta: f64) -> Result<()> {
        if theta == self.theta0 || self.on_alternative(theta) {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "theta = {theta} is not on the '{}' side of theta0 = {} for {}",
                self.side, self.theta0, self.kind
            )))
        }
    }
}

/// `log g(y, θ) = n (A(θ0) - A(θ)) + y (η(θ) - η(θ0))`.
pub fn expfam_log_bf(y: f64, theta: f64, model: &ExpFamilyModel) -> Result<f64> {
    model.check_alternative(theta)?;
    if !y.is_finite() {
        return Err(Error::domain(format!("statistic must be finite, got {y}")));
    }
    let n = model.n as f64;
    Ok(
        n * (model.log_partition(model.theta0) - model.log_partition(theta))
            + y * (model.eta(theta) - model.eta(model.theta0)),
    )
}
