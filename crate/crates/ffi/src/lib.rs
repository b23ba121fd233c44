//! C interface to `umpbt`.
//!
//! Every function returns an [`UmpbtStatus`]; results are written through
//! out-pointers only on success. After a failure,
//! [`umpbt_last_error_message`] describes it. Tables and curves are opaque
//! handles released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use umpbt::power::{default_theta_grid, default_theta_t_grid};
use umpbt::{
    chisq_quantile, dominance_check, gamma_vs_df_curve, independence_bf, log_bessel_i,
    log_bf_ncchisq, match_gamma_to_alpha, noncentral_chisq_sf, parse_table, rejection_boundary,
    rejection_probability, solve_umpbt_chisq, solve_umpbt_expfam, ChiSqTestSpec, ContingencyTable,
    CurvePoint, Error, ExpFamilyKind, ExpFamilyModel, NoncentralChiSq, Side,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UmpbtStatus {
    Ok = 0,
    Domain = 1,
    Validation = 2,
    Parse = 3,
    DegenerateMargin = 4,
    Overflow = 5,
    NoRoot = 6,
    Bracketing = 7,
    Internal = 8,
    Io = 9,
    NullPointer = 10,
    OutOfRange = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UmpbtFamily {
    Binomial = 0,
    NormalMean = 1,
    NormalVariance = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UmpbtSide {
    Greater = 0,
    Less = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UmpbtSolution {
    pub theta_star: f64,
    /// Critical value of the sufficient statistic.
    pub boundary: f64,
    pub gamma: f64,
    /// +1 or -1.
    pub direction: i32,
    /// NaN for exponential-family solutions.
    pub df: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UmpbtIndependence {
    pub statistic: f64,
    pub df: u32,
    pub gamma: f64,
    pub theta_star: f64,
    pub log_bf: f64,
    pub bf: f64,
    pub critical_value: f64,
    pub min_expected: f64,
    pub reject: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UmpbtCurvePoint {
    pub df: u32,
    pub alpha: f64,
    pub gamma: f64,
    pub theta_star: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UmpbtDominance {
    pub theta_star: f64,
    pub boundary: f64,
    pub max_margin: f64,
    pub worst_theta: f64,
    pub worst_theta_t: f64,
    pub passed: bool,
}

/// Opaque contingency table.
pub struct UmpbtTable {
    inner: ContingencyTable,
}

/// Opaque evidence-threshold curve.
pub struct UmpbtCurve {
    points: Vec<CurvePoint>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> UmpbtStatus {
    match e {
        Error::Domain(_) => UmpbtStatus::Domain,
        Error::Validation(_) => UmpbtStatus::Validation,
        Error::Parse { .. } => UmpbtStatus::Parse,
        Error::DegenerateMargin(_) => UmpbtStatus::DegenerateMargin,
        Error::Overflow(_) => UmpbtStatus::Overflow,
        Error::NoRoot(_) => UmpbtStatus::NoRoot,
        Error::Bracketing(_) => UmpbtStatus::Bracketing,
        Error::Internal(_) => UmpbtStatus::Internal,
        Error::Curve { source, .. } => status_of(source),
        Error::Io(_) => UmpbtStatus::Io,
    }
}

enum Failure {
    Lib(Error),
    Null(&'static str),
    Range(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `f`, converting errors and panics into a status and message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> UmpbtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UmpbtStatus::Ok,
        Ok(Err(Failure::Lib(e))) => {
            set_error(format!("{}: {e}", e.category()));
            status_of(&e)
        }
        Ok(Err(Failure::Null(name))) => {
            set_error(format!("null pointer: {name}"));
            UmpbtStatus::NullPointer
        }
        Ok(Err(Failure::Range(msg))) => {
            set_error(msg);
            UmpbtStatus::OutOfRange
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            UmpbtStatus::Panic
        }
    }
}

/// # Safety
/// `out` must be null or valid for writes.
unsafe fn write<T>(out: *mut T, name: &'static str, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(name));
    }
    out.write(value);
    Ok(())
}

fn solution(sol: umpbt::UmpbtSolution) -> UmpbtSolution {
    UmpbtSolution {
        theta_star: sol.theta_star,
        boundary: sol.boundary,
        gamma: sol.gamma,
        direction: sol.direction.sign(),
        df: sol.df.unwrap_or(f64::NAN),
    }
}

/// Message for the last failure on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn umpbt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// `log I_order(z)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn umpbt_log_bessel_i(order: f64, z: f64, out: *mut f64) -> UmpbtStatus {
    guard(|| write(out, "out", log_bessel_i(order, z)?.ln()))
}

/// Log Bayes factor of `χ²_df(theta)` against `χ²_df` at statistic `y`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn umpbt_log_bf_ncchisq(
    y: f64,
    theta: f64,
    df: f64,
    out: *mut f64,
) -> UmpbtStatus {
    guard(|| write(out, "out", log_bf_ncchisq(y, theta, df)?))
}

/// Statistic at which the Bayes factor for `theta` equals `gamma`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn umpbt_rejection_boundary(
    theta: f64,
    gamma: f64,
    df: f64,
    out: *mut f64,
) -> UmpbtStatus {
    guard(|| write(out, "out", rejection_boundary(theta, gamma, df)?))
}

/// UMPBT for a chi-squared test with evidence threshold `gamma`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn umpbt_solve_chisq(
    df: f64,
    gamma: f64,
    out: *mut UmpbtSolution,
) -> UmpbtStatus {
    guard(|| {
        let sol = solve_umpbt_chisq(&ChiSqTestSpec::with_gamma(df, gamma)?)?;
        write(out, "out", solution(sol))
    })
}

/// UMPBT whose rejection region is the classical level-`alpha` region.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn umpbt_match_gamma_to_alpha(
    df: f64,
    alpha: f64,
    out: *mut UmpbtSolution,
) -> UmpbtStatus {
    guard(|| {
        let sol = match_gamma_to_alpha(&ChiSqTestSpec::with_alpha(df, alpha)?)?;
        write(out, "out", solution(sol))
    })
}

/// `P(Y > y)` for `Y ~ χ²_df(noncentrality)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn umpbt_noncentral_chisq_sf(
    y: f64,
    df: f64,
    noncentrality: f64,
    out: *mut f64,
) -> UmpbtStatus {
    guard(|| {
        let dist = NoncentralChiSq::new(df, noncentrality)?;
        write(out, "out", noncentral_chisq_sf(y, dist)?)
    })
}

/// Central chi-squared quantile.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn umpbt_chisq_quantile(p: f64, df: f64, out: *mut f64) -> UmpbtStatus {
    guard(|| write(out, "out", chisq_quantile(p, df)?))
}

/// Probability that the test with alternative `theta` rejects when the true
/// noncentrality is `theta_t`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn umpbt_rejection_probability(
    theta: f64,
    theta_t: f64,
    gamma: f64,
    df: f64,
    out: *mut f64,
) -> UmpbtStatus {
    guard(|| {
        write(
            out,
            "out",
            rejection_probability(theta, theta_t, gamma, df)?,
        )
    })
}

/// Exponential-family UMPBT. `family` is a [`UmpbtFamily`] value and `side`
/// a [`UmpbtSide`] value; a NaN `nuisance` selects the family default.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn umpbt_solve_expfam(
    family: i32,
    theta0: f64,
    n: u64,
    side: i32,
    nuisance: f64,
    gamma: f64,
    out: *mut UmpbtSolution,
) -> UmpbtStatus {
    guard(|| {
        let kind = match family {
            x if x == UmpbtFamily::Binomial as i32 => ExpFamilyKind::BinomialProportion,
            x if x == UmpbtFamily::NormalMean as i32 => ExpFamilyKind::NormalMeanKnownVariance,
            x if x == UmpbtFamily::NormalVariance as i32 => ExpFamilyKind::NormalVarianceKnownMean,
            other => return Err(Error::Validation(format!("unknown family {other}")).into()),
        };
        let side = match side {
            x if x == UmpbtSide::Greater as i32 => Side::Greater,
            x if x == UmpbtSide::Less as i32 => Side::Less,
            other => return Err(Error::Validation(format!("unknown side {other}")).into()),
        };
        let nuisance = (!nuisance.is_nan()).then_some(nuisance);
        let model = ExpFamilyModel::new(kind, theta0, n, side, nuisance)?;
        write(out, "out", solution(solve_umpbt_expfam(&model, gamma)?))
    })
}

/// Dominance check on the default grids: 50 log-spaced alternatives over
/// `[θ*/100, 100θ*]` and `θ_t ∈ {0, θ*/2, θ*, 2θ*, 5θ*}`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn umpbt_dominance_check(
    df: f64,
    gamma: f64,
    out: *mut UmpbtDominance,
) -> UmpbtStatus {
    guard(|| {
        let theta_star = solve_umpbt_chisq(&ChiSqTestSpec::with_gamma(df, gamma)?)?.theta_star;
        let r = dominance_check(
            gamma,
            df,
            &default_theta_grid(theta_star),
            &default_theta_t_grid(theta_star),
        )?;
        write(
            out,
            "out",
            UmpbtDominance {
                theta_star: r.solution.theta_star,
                boundary: r.solution.boundary,
                max_margin: r.max_margin,
                worst_theta: r.worst.0,
                worst_theta_t: r.worst.1,
                passed: r.passed,
            },
        )
    })
}

/// Parses CSV counts from `len` bytes at `data`.
///
/// # Safety
/// `data` must point to `len` readable bytes; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn umpbt_table_from_csv(
    data: *const u8,
    len: usize,
    has_header: bool,
    has_row_labels: bool,
    out: *mut *mut UmpbtTable,
) -> UmpbtStatus {
    guard(|| {
        if data.is_null() {
            return Err(Failure::Null("data"));
        }
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let bytes = std::slice::from_raw_parts(data, len);
        let inner = parse_table(bytes, has_header, has_row_labels)?;
        out.write(Box::into_raw(Box::new(UmpbtTable { inner })));
        Ok(())
    })
}

/// # Safety
/// `table` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn umpbt_table_rows(table: *const UmpbtTable) -> usize {
    table.as_ref().map_or(0, |t| t.inner.rows())
}

/// # Safety
/// `table` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn umpbt_table_cols(table: *const UmpbtTable) -> usize {
    table.as_ref().map_or(0, |t| t.inner.cols())
}

/// Independence Bayes factor with `γ` matched to level `alpha`.
///
/// # Safety
/// `table` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn umpbt_table_independence_bf(
    table: *const UmpbtTable,
    alpha: f64,
    out: *mut UmpbtIndependence,
) -> UmpbtStatus {
    guard(|| {
        let t = table.as_ref().ok_or(Failure::Null("table"))?;
        let r = independence_bf(&t.inner, alpha)?;
        write(
            out,
            "out",
            UmpbtIndependence {
                statistic: r.statistic,
                df: r.df as u32,
                gamma: r.gamma,
                theta_star: r.theta_star,
                log_bf: r.log_bf,
                bf: r.bf,
                critical_value: r.critical_value,
                min_expected: r.min_expected,
                reject: r.rejects(),
            },
        )
    })
}

/// # Safety
/// `table` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn umpbt_table_free(table: *mut UmpbtTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Matched thresholds for `df = 1..=df_max` and each of `n_alphas` levels.
///
/// # Safety
/// `alphas` must point to `n_alphas` doubles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn umpbt_curve_new(
    alphas: *const f64,
    n_alphas: usize,
    df_max: u32,
    out: *mut *mut UmpbtCurve,
) -> UmpbtStatus {
    guard(|| {
        if alphas.is_null() {
            return Err(Failure::Null("alphas"));
        }
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let alphas = std::slice::from_raw_parts(alphas, n_alphas);
        let points = gamma_vs_df_curve(alphas, df_max)?;
        out.write(Box::into_raw(Box::new(UmpbtCurve { points })));
        Ok(())
    })
}

/// # Safety
/// `curve` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn umpbt_curve_len(curve: *const UmpbtCurve) -> usize {
    curve.as_ref().map_or(0, |c| c.points.len())
}

/// Points are ordered by `df`, then by the order of the requested levels.
///
/// # Safety
/// `curve` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn umpbt_curve_get(
    curve: *const UmpbtCurve,
    index: usize,
    out: *mut UmpbtCurvePoint,
) -> UmpbtStatus {
    guard(|| {
        let c = curve.as_ref().ok_or(Failure::Null("curve"))?;
        let p = c.points.get(index).ok_or_else(|| {
            Failure::Range(format!(
                "index {index} out of range for {} points",
                c.points.len()
            ))
        })?;
        write(
            out,
            "out",
            UmpbtCurvePoint {
                df: p.df,
                alpha: p.alpha,
                gamma: p.gamma,
                theta_star: p.theta_star,
            },
        )
    })
}

/// # Safety
/// `curve` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn umpbt_curve_free(curve: *mut UmpbtCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}
