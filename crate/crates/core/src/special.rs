//! Special functions and the (noncentral) chi-squared distribution.
//!
//! The modified Bessel function `I_ν` is evaluated on the log scale because
//! `√(θy)` routinely leaves the linear `f64` range inside solver brackets.
//! Log-gamma comes from `libm`; the regularized incomplete gamma functions
//! and `erfc` come from `statrs`.

use libm::lgamma;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Poisson};
use statrs::function::{erf, gamma};

use crate::error::{Error, Result};

/// Relative size below which a series term stops the summation.
const SERIES_TOL: f64 = 1e-16;
/// A series that needs more terms than this is reported, never truncated.
const SERIES_MAX_TERMS: usize = 1000;
/// Arguments above this switch from the power series to asymptotics.
const ASYMPTOTIC_Z: f64 = 700.0;
/// Poisson mass allowed to be left out of the noncentral mixture.
const MIXTURE_TOL: f64 = 1e-12;
const MIXTURE_MAX_TERMS: usize = 1_000_000;

/// Natural logarithm of a nonnegative quantity.
///
/// `-inf` encodes zero. Nothing is exponentiated unless [`LogValue::exp`] is
/// called.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogValue(f64);

impl LogValue {
    pub const ZERO: LogValue = LogValue(f64::NEG_INFINITY);
    pub const ONE: LogValue = LogValue(0.0);

    pub fn from_ln(ln: f64) -> Self {
        LogValue(ln)
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn exp(self) -> f64 {
        self.0.exp()
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
}

/// `χ²_ν(θ)`: chi-squared with `df` degrees of freedom and noncentrality `θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoncentralChiSq {
    df: f64,
    noncentrality: f64,
}

impl NoncentralChiSq {
    pub fn new(df: f64, noncentrality: f64) -> Result<Self> {
        check_df(df)?;
        if !noncentrality.is_finite() || noncentrality < 0.0 {
            return Err(Error::domain(format!(
                "noncentrality must be finite and nonnegative, got {noncentrality}"
            )));
        }
        Ok(NoncentralChiSq { df, noncentrality })
    }

    pub fn central(df: f64) -> Result<Self> {
        Self::new(df, 0.0)
    }

    pub fn df(&self) -> f64 {
        self.df
    }

    pub fn noncentrality(&self) -> f64 {
        self.noncentrality
    }

    pub fn mean(&self) -> f64 {
        self.df + self.noncentrality
    }

    /// Log density; the central density is used exactly when `θ = 0`.
    pub fn ln_pdf(&self, y: f64) -> Result<f64> {
        check_stat(y)?;
        if self.noncentrality == 0.0 {
            return chisq_ln_pdf(y, self.df);
        }
        if y == 0.0 {
            return Ok(match self.df {
                d if d < 2.0 => f64::INFINITY,
                2.0 => -0.5 * self.noncentrality - std::f64::consts::LN_2,
                _ => f64::NEG_INFINITY,
            });
        }
        let theta = self.noncentrality;
        let bessel = log_bessel_i(0.5 * self.df - 1.0, (theta * y).sqrt())?;
        Ok(-std::f64::consts::LN_2 - 0.5 * (y + theta)
            + (0.25 * self.df - 0.5) * (y.ln() - theta.ln())
            + bessel.ln())
    }

    pub fn sf(&self, y: f64) -> Result<f64> {
        noncentral_chisq_sf(y, *self)
    }
}

fn check_df(df: f64) -> Result<()> {
    if df > 0.0 && df.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "degrees of freedom must be positive and finite, got {df}"
        )))
    }
}

fn check_stat(y: f64) -> Result<()> {
    if y >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "statistic must be nonnegative, got {y}"
        )))
    }
}

/// `log I_order(z)` for real `order > -1` and `z ≥ 0`.
///
/// At `z = 0` the result is `log 1` for order zero, `log 0` for positive
/// order and `+inf` for `-1 < order < 0`, where the series diverges.
pub fn log_bessel_i(order: f64, z: f64) -> Result<LogValue> {
    if !order.is_finite() || order <= -1.0 {
        return Err(Error::domain(format!(
            "Bessel order must be finite and > -1, got {order}"
        )));
    }
    if !z.is_finite() || z < 0.0 {
        return Err(Error::domain(format!(
            "Bessel argument must be finite and nonnegative, got {z}"
        )));
    }
    if z == 0.0 {
        return Ok(if order == 0.0 {
            LogValue::ONE
        } else if order > 0.0 {
            LogValue::ZERO
        } else {
            LogValue(f64::INFINITY)
        });
    }
    if z <= ASYMPTOTIC_Z {
        bessel_series(order, z)
    } else if 4.0 * order * order < 40.0 * z {
        bessel_hankel(order, z)
    } else {
        Ok(bessel_debye(order, z))
    }
}

/// Power series `Σ (z/2)^{2j+ν} / (Γ(ν+j+1) j!)`, summed from `j = 0` with
/// successive term ratios and a running log scale to avoid overflow.
fn bessel_series(order: f64, z: f64) -> Result<LogValue> {
    let half = 0.5 * z;
    let q = half * half;
    let mut log_scale = order * half.ln() - lgamma(order + 1.0);
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 0..SERIES_MAX_TERMS {
        let jf = j as f64;
        term *= q / ((jf + 1.0) * (order + jf + 1.0));
        sum += term;
        if term < SERIES_TOL * sum {
            return Ok(LogValue(log_scale + sum.ln()));
        }
        if sum > 1e250 {
            log_scale += sum.ln();
            term /= sum;
            sum = 1.0;
        }
    }
    Err(Error::Internal(format!(
        "Bessel series for order {order}, z {z} did not converge in {SERIES_MAX_TERMS} terms"
    )))
}

/// Large-argument expansion
/// `I_ν(z) ~ e^z / √(2πz) · Σ_k (-1)^k a_k(ν) / z^k`.
fn bessel_hankel(order: f64, z: f64) -> Result<LogValue> {
    let mu = 4.0 * order * order;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for k in 1..=SERIES_MAX_TERMS {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (8.0 * k as f64 * z);
        if next.abs() >= term.abs() && odd * odd > mu {
            // smallest term of the divergent tail reached
            break;
        }
        term = next;
        sum += term;
        if term.abs() < SERIES_TOL * sum.abs() {
            return Ok(LogValue(
                z - 0.5 * (2.0 * std::f64::consts::PI * z).ln() + sum.ln(),
            ));
        }
    }
    if term.abs() < 1e-14 * sum.abs() {
        return Ok(LogValue(
            z - 0.5 * (2.0 * std::f64::consts::PI * z).ln() + sum.ln(),
        ));
    }
    Err(Error::Internal(format!(
        "asymptotic Bessel expansion for order {order}, z {z} did not converge"
    )))
}

/// Uniform (Debye) expansion for large order, used when `z > 700` and
/// `4ν² ≥ 40z`, i.e. `ν > 83`.
fn bessel_debye(order: f64, z: f64) -> LogValue {
    let nu = order;
    let t = z / nu;
    let root = (1.0 + t * t).sqrt();
    let p = 1.0 / root;
    let eta = root + (t / (1.0 + root)).ln();
    let p2 = p * p;
    let u1 = p * (3.0 - 5.0 * p2) / 24.0;
    let u2 = p2 * (81.0 - 462.0 * p2 + 385.0 * p2 * p2) / 1152.0;
    let u3 = p * p2 * (30375.0 - 369603.0 * p2 + 765765.0 * p2 * p2 - 425425.0 * p2 * p2 * p2)
        / 414720.0;
    let u4 = p2
        * p2
        * (4465125.0 - 94121676.0 * p2 + 349922430.0 * p2 * p2 - 446185740.0 * p2 * p2 * p2
            + 185910725.0 * p2 * p2 * p2 * p2)
        / 39813120.0;
    let series = 1.0 + u1 / nu + u2 / (nu * nu) + u3 / (nu * nu * nu) + u4 / (nu * nu * nu * nu);
    LogValue(nu * eta - 0.5 * (2.0 * std::f64::consts::PI * nu).ln() + 0.5 * p.ln() + series.ln())
}

/// `log Γ(x)` for `x > 0`.
pub fn log_gamma_fn(x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(lgamma(x))
    } else {
        Err(Error::domain(format!(
            "log-gamma needs a positive finite argument, got {x}"
        )))
    }
}

/// Central chi-squared log density.
pub fn chisq_ln_pdf(y: f64, df: f64) -> Result<f64> {
    check_df(df)?;
    check_stat(y)?;
    let half = 0.5 * df;
    if y == 0.0 {
        return Ok(match df {
            d if d < 2.0 => f64::INFINITY,
            2.0 => -std::f64::consts::LN_2,
            _ => f64::NEG_INFINITY,
        });
    }
    Ok(-half * std::f64::consts::LN_2 - 0.5 * y + (half - 1.0) * y.ln() - lgamma(half))
}

/// `P(Y ≤ y)` for `Y ~ χ²_df`.
pub fn chisq_cdf(y: f64, df: f64) -> Result<f64> {
    check_df(df)?;
    check_stat(y)?;
    if y == 0.0 {
        return Ok(0.0);
    }
    if y.is_infinite() {
        return Ok(1.0);
    }
    Ok(gamma::gamma_lr(0.5 * df, 0.5 * y).clamp(0.0, 1.0))
}

/// `P(Y > y)` for `Y ~ χ²_df`, computed directly rather than as `1 - cdf`.
pub fn chisq_sf(y: f64, df: f64) -> Result<f64> {
    check_df(df)?;
    check_stat(y)?;
    if y == 0.0 {
        return Ok(1.0);
    }
    if y.is_infinite() {
        return Ok(0.0);
    }
    Ok(gamma::gamma_ur(0.5 * df, 0.5 * y).clamp(0.0, 1.0))
}

/// Inverse of [`chisq_cdf`]: bisection down to a bracket of width `1e-8`,
/// then Newton polishing that falls back to bisection whenever a step leaves
/// the bracket or fails to shrink the residual.
pub fn chisq_quantile(p: f64, df: f64) -> Result<f64> {
    check_df(df)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!(
            "probability must lie in (0, 1), got {p}"
        )));
    }
    let mut lo = 0.0;
    let mut hi = df.max(1.0);
    while chisq_cdf(hi, df)? < p {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::Internal(format!(
                "cannot bracket the {p} quantile of chi-squared({df})"
            )));
        }
    }
    while hi - lo > 1e-8 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if chisq_cdf(mid, df)? < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let mut x = 0.5 * (lo + hi);
    let mut resid = chisq_cdf(x, df)? - p;
    for _ in 0..100 {
        if resid.abs() <= 1e-15 {
            break;
        }
        if resid < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let density = chisq_ln_pdf(x, df)?.exp();
        let newton = x - resid / density;
        let candidate = if density > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let cand_resid = chisq_cdf(candidate, df)? - p;
        let (next, next_resid) = if cand_resid.abs() < resid.abs() {
            (candidate, cand_resid)
        } else {
            let mid = 0.5 * (lo + hi);
            (mid, chisq_cdf(mid, df)? - p)
        };
        if next == x {
            break;
        }
        x = next;
        resid = next_resid;
    }
    Ok(x)
}

/// `P(Y > y)` for `Y ~ χ²_ν(θ)`, as the Poisson(θ/2) mixture
/// `Σ_k w_k · P(χ²_{ν+2k} > y)`.
///
/// Summation starts at the modal index `⌊θ/2⌋` and grows in whichever
/// direction has the heavier next weight until less than `1e-12` of the
/// Poisson mass is unaccounted for.
pub fn noncentral_chisq_sf(y: f64, dist: NoncentralChiSq) -> Result<f64> {
    check_stat(y)?;
    let df = dist.df;
    if y == 0.0 {
        return Ok(1.0);
    }
    if dist.noncentrality == 0.0 {
        return chisq_sf(y, df);
    }
    if y.is_infinite() {
        return Ok(0.0);
    }
    let lambda = 0.5 * dist.noncentrality;
    let ln_lambda = lambda.ln();
    let half_y = 0.5 * y;
    // Below the mean the lower-tail mixture is summed instead, so that the
    // neglected mass does not swamp an sf close to 1.
    let lower = y < df + dist.noncentrality;
    let tail = |k: u64| {
        if lower {
            gamma::gamma_lr(0.5 * df + k as f64, half_y)
        } else {
            gamma::gamma_ur(0.5 * df + k as f64, half_y)
        }
    };

    let mode = lambda.floor() as u64;
    let w_mode = (-lambda + mode as f64 * ln_lambda - lgamma(mode as f64 + 1.0)).exp();
    let mut covered = w_mode;
    let mut total = w_mode * tail(mode);

    let mut down = mode;
    let mut w_down = w_mode;
    let mut up = mode;
    let mut w_up = w_mode;
    let mut steps = 0usize;
    while 1.0 - covered >= MIXTURE_TOL {
        let next_down = if down > 0 {
            w_down * down as f64 / lambda
        } else {
            0.0
        };
        let next_up = w_up * lambda / (up + 1) as f64;
        if next_down == 0.0 && next_up == 0.0 {
            break;
        }
        if next_down >= next_up {
            down -= 1;
            w_down = next_down;
            covered += w_down;
            total += w_down * tail(down);
        } else {
            up += 1;
            w_up = next_up;
            covered += w_up;
            total += w_up * tail(up);
        }
        steps += 1;
        if steps > MIXTURE_MAX_TERMS {
            return Err(Error::Internal(format!(
                "Poisson mixture for noncentrality {} did not converge",
                dist.noncentrality
            )));
        }
    }
    let sf = if lower { 1.0 - total } else { total };
    Ok(sf.clamp(0.0, 1.0))
}

/// `n` seeded draws from `χ²_ν(θ)`: `K ~ Poisson(θ/2)` followed by
/// `Gamma(ν/2 + K, scale 2)`.
pub fn sample_noncentral_chisq(dist: NoncentralChiSq, n: usize, seed: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::domain("sample size must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lambda = 0.5 * dist.noncentrality;
    let poisson = if lambda > 0.0 {
        Some(Poisson::new(lambda).map_err(|e| Error::domain(e.to_string()))?)
    } else {
        None
    };
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let k = match &poisson {
            Some(p) => p.sample(&mut rng),
            None => 0.0,
        };
        let g = Gamma::new(0.5 * dist.df + k, 2.0).map_err(|e| Error::domain(e.to_string()))?;
        out.push(g.sample(&mut rng));
    }
    Ok(out)
}

/// `log Φ(x)` for the standard normal law, accurate far into the lower tail.
pub fn log_normal_cdf(x: f64) -> f64 {
    if x > 0.0 {
        (-0.5 * erf::erfc(x / std::f64::consts::SQRT_2)).ln_1p()
    } else if x > -30.0 {
        (0.5 * erf::erfc(-x / std::f64::consts::SQRT_2)).ln()
    } else {
        // Φ(x) = φ(x)/|x| · (1 - 1/x² + 3/x⁴ - 15/x⁶ + 105/x⁸ ...)
        let x2 = x * x;
        let inv = 1.0 / x2;
        let series = 1.0 - inv * (1.0 - 3.0 * inv * (1.0 - 5.0 * inv * (1.0 - 7.0 * inv)));
        -0.5 * x2 - 0.5 * (2.0 * std::f64::consts::PI).ln() - (-x).ln() + series.ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn bessel_at_zero() {
        assert_eq!(log_bessel_i(0.0, 0.0).unwrap(), LogValue::ONE);
        assert!(log_bessel_i(1.5, 0.0).unwrap().is_zero());
        assert_eq!(log_bessel_i(-0.5, 0.0).unwrap().ln(), f64::INFINITY);
    }

    #[test]
    fn bessel_domain_errors() {
        assert!(matches!(log_bessel_i(0.0, -1.0), Err(Error::Domain(_))));
        assert!(matches!(log_bessel_i(-1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(log_bessel_i(-2.5, 1.0), Err(Error::Domain(_))));
        assert!(matches!(log_bessel_i(0.0, f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn half_integer_closed_forms() {
        for &z in &[0.01, 0.3, 1.0, 4.0, 25.0, 300.0] {
            let pre = (2.0 / (std::f64::consts::PI * z)).sqrt();
            let plus = log_bessel_i(0.5, z).unwrap().ln();
            let minus = log_bessel_i(-0.5, z).unwrap().ln();
            // log sinh / log cosh without overflow
            let ln_sinh = z + (-(-2.0 * z).exp_m1()).ln() - std::f64::consts::LN_2;
            let ln_cosh = z + (1.0 + (-2.0 * z).exp()).ln() - std::f64::consts::LN_2;
            assert!((plus - (pre.ln() + ln_sinh)).abs() < 1e-12, "z={z}");
            assert!((minus - (pre.ln() + ln_cosh)).abs() < 1e-12, "z={z}");
        }
        let v = log_bessel_i(0.5, 1.0).unwrap().exp();
        assert!(rel(v, 0.937_674_888_245_487_6) < 1e-12);
    }

    #[test]
    fn bessel_order_zero_at_one() {
        let v = log_bessel_i(0.0, 1.0).unwrap().exp();
        assert!(rel(v, 1.266_065_877_752_008_4) < 1e-12);
    }

    #[test]
    fn log_gamma_values() {
        assert!(log_gamma_fn(1.0).unwrap().abs() < 1e-15);
        assert!((log_gamma_fn(0.5).unwrap() - 0.572_364_942_924_700_1).abs() < 1e-13);
        assert!(log_gamma_fn(0.0).is_err());
        assert!(log_gamma_fn(-3.0).is_err());
    }

    #[test]
    fn log_gamma_recursion() {
        // Γ(7.3) = 6.3·5.3·4.3·3.3·2.3·1.3·0.3·Γ(0.3)
        let mut expected = log_gamma_fn(0.3).unwrap();
        let mut x: f64 = 0.3;
        while x < 7.0 {
            expected += x.ln();
            x += 1.0;
        }
        assert!((log_gamma_fn(7.3).unwrap() - expected).abs() < 1e-13);
        assert!((log_gamma_fn(7.3).unwrap() - 7.147_892_523_022_249).abs() < 1e-13);
    }

    #[test]
    fn chisq_cdf_basics() {
        assert_eq!(chisq_cdf(0.0, 6.0).unwrap(), 0.0);
        let y = 2.0 * std::f64::consts::LN_2;
        assert!((chisq_cdf(y, 2.0).unwrap() - 0.5).abs() < 1e-12);
        for y in [0.1f64, 1.0, 3.0, 10.0] {
            let exact = -(-0.5 * y).exp_m1();
            assert!((chisq_cdf(y, 2.0).unwrap() - exact).abs() < 1e-12);
            assert!((chisq_cdf(y, 2.0).unwrap() + chisq_sf(y, 2.0).unwrap() - 1.0).abs() < 1e-14);
        }
        assert!(chisq_cdf(-1.0, 2.0).is_err());
        assert!(chisq_cdf(1.0, 0.0).is_err());
    }

    #[test]
    fn quantile_examples() {
        let m = chisq_quantile(0.5, 2.0).unwrap();
        assert!((m - 2.0 * std::f64::consts::LN_2).abs() < 1e-9);
        let q = chisq_quantile(0.95, 6.0).unwrap();
        assert!((q - 12.592).abs() < 1e-3);
        assert!(chisq_quantile(0.0, 2.0).is_err());
        assert!(chisq_quantile(1.0, 2.0).is_err());
    }

    #[test]
    fn quantile_roundtrip() {
        for &df in &[1.0, 6.0, 120.0] {
            for &p in &[0.01, 0.5, 0.99] {
                let q = chisq_quantile(p, df).unwrap();
                assert!(
                    (chisq_cdf(q, df).unwrap() - p).abs() < 1e-10,
                    "df={df} p={p}"
                );
            }
        }
    }

    #[test]
    fn noncentral_sf_reductions() {
        let central = NoncentralChiSq::central(6.0).unwrap();
        for &y in &[0.5, 3.0, 12.592, 40.0] {
            let sf = noncentral_chisq_sf(y, central).unwrap();
            assert!((sf - (1.0 - chisq_cdf(y, 6.0).unwrap())).abs() < 1e-15);
        }
        let d = NoncentralChiSq::new(3.0, 11.0).unwrap();
        assert_eq!(noncentral_chisq_sf(0.0, d).unwrap(), 1.0);
        assert!(NoncentralChiSq::new(0.0, 1.0).is_err());
        assert!(NoncentralChiSq::new(2.0, -1.0).is_err());
    }

    #[test]
    fn noncentral_sf_large_noncentrality() {
        // mean ν+θ, variance 2(ν+2θ): far above/below the bulk
        let d = NoncentralChiSq::new(4.0, 5000.0).unwrap();
        assert!(noncentral_chisq_sf(4000.0, d).unwrap() > 1.0 - 1e-9);
        assert!(noncentral_chisq_sf(6100.0, d).unwrap() < 1e-9);
        let mid = noncentral_chisq_sf(5004.0, d).unwrap();
        assert!(mid > 0.4 && mid < 0.6);
    }

    #[test]
    fn ln_pdf_central_limit() {
        let d = NoncentralChiSq::central(6.0).unwrap();
        assert_eq!(d.ln_pdf(3.0).unwrap(), chisq_ln_pdf(3.0, 6.0).unwrap());
        // tiny θ approaches the central density
        let near = NoncentralChiSq::new(6.0, 1e-10).unwrap();
        assert!((near.ln_pdf(3.0).unwrap() - chisq_ln_pdf(3.0, 6.0).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn sampler_is_deterministic() {
        let d = NoncentralChiSq::new(6.0, 7.31).unwrap();
        let a = sample_noncentral_chisq(d, 1000, 42).unwrap();
        let b = sample_noncentral_chisq(d, 1000, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_noncentral_chisq(d, 1000, 43).unwrap();
        assert_ne!(a, c);
        assert!(sample_noncentral_chisq(d, 0, 1).is_err());
    }

    #[test]
    fn sampler_means() {
        let central = NoncentralChiSq::central(6.0).unwrap();
        let xs = sample_noncentral_chisq(central, 100_000, 7).unwrap();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!((mean - 6.0).abs() < 0.15, "mean {mean}");

        let shifted = NoncentralChiSq::new(6.0, 7.31).unwrap();
        let xs = sample_noncentral_chisq(shifted, 100_000, 7).unwrap();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!((mean - 13.31).abs() < 0.25, "mean {mean}");
    }

    #[test]
    fn log_normal_cdf_tails() {
        assert!((log_normal_cdf(0.0) - 0.5_f64.ln()).abs() < 1e-15);
        // continuity across the asymptotic switch
        let a = log_normal_cdf(-30.0 + 1e-9);
        let b = log_normal_cdf(-30.0 - 1e-9);
        assert!((a - b).abs() < 1e-6);
        // Φ(-40) ≈ 3.655893540915e-350
        assert!((log_normal_cdf(-40.0) - (-804.608_442_013_753_8)).abs() < 1e-6);
        assert!(log_normal_cdf(10.0) < 0.0 && log_normal_cdf(10.0) > -1e-20);
    }
}
