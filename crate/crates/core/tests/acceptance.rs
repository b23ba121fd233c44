//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p umpbt --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use umpbt::power::{default_theta_grid, default_theta_t_grid};
use umpbt::*;

struct Verdict {
    passed: bool,
    detail: String,
}

fn check(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Result<Verdict>) -> (Verdict, Duration) {
    let start = Instant::now();
    let mut v = f().unwrap_or_else(|e| check(false, format!("error: {}: {e}", e.category())));
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            v.passed = false;
            v.detail
                .push_str(&format!("; over the {:.0} s budget", limit.as_secs_f64()));
        }
    }
    (v, elapsed)
}

const WHITE: &str = include_str!("../data/white.csv");

fn white_result() -> Result<IndependenceResult> {
    independence_bf(&parse_table(WHITE.as_bytes(), true, true)?, 0.05)
}

fn criterion_1() -> Result<Verdict> {
    let r = white_result()?;
    let ok = (r.statistic - 12.65).abs() <= 0.01
        && r.df == 6
        && (r.gamma - 3.46).abs() <= 0.01
        && (r.theta_star - 7.31).abs() <= 0.01
        && (r.bf - 3.52).abs() <= 0.01;
    Ok(check(
        ok,
        format!(
            "statistic={:.4} df={} gamma={:.4} theta_star={:.4} bf={:.4}",
            r.statistic, r.df, r.gamma, r.theta_star, r.bf
        ),
    ))
}

fn criterion_2() -> Result<Verdict> {
    let curve = gamma_vs_df_curve(&[0.05], 120)?;
    let worst = curve
        .iter()
        .max_by(|a, b| a.gamma.total_cmp(&b.gamma))
        .expect("nonempty curve");
    let six = curve.iter().find(|p| p.df == 6).expect("df 6 on curve");
    let reference = white_result()?.gamma;
    let bound_ok = worst.gamma < 3.67;
    let six_ok = (six.gamma - reference).abs() <= 1e-9;
    let first_over = curve.iter().find(|p| p.gamma >= 3.67).map(|p| p.df);
    Ok(check(
        bound_ok && six_ok,
        format!(
            "max gamma={:.7} at df={} (bound 3.67{}), gamma(df=6)={:.7} vs {:.7}",
            worst.gamma,
            worst.df,
            first_over.map_or(String::new(), |d| format!(", first reached at df={d}")),
            six.gamma,
            reference
        ),
    ))
}

const DOMINANCE_SETTINGS: [(f64, f64); 4] = [(1.0, 3.0), (2.0, 3.0), (6.0, 3.46), (10.0, 10.0)];

fn criterion_3() -> Result<Verdict> {
    let mut worst = f64::NEG_INFINITY;
    let mut all = true;
    for &(df, gamma) in &DOMINANCE_SETTINGS {
        let theta_star = solve_umpbt_chisq(&ChiSqTestSpec::with_gamma(df, gamma)?)?.theta_star;
        let report = dominance_check(
            gamma,
            df,
            &default_theta_grid(theta_star),
            &default_theta_t_grid(theta_star),
        )?;
        worst = worst.max(report.max_margin);
        all &= report.passed && report.theta_grid.len() == 50;
    }
    Ok(check(
        all && worst <= 1e-10,
        format!("max H(theta) - H(theta*) = {worst:.3e} over 4 settings x 50 x 5"),
    ))
}

fn criterion_4() -> Result<Verdict> {
    let mut worst = f64::NEG_INFINITY;
    for &(df, gamma) in &DOMINANCE_SETTINGS {
        let sol = solve_umpbt_chisq(&ChiSqTestSpec::with_gamma(df, gamma)?)?;
        for t in default_theta_grid(sol.theta_star) {
            worst = worst.max(sol.boundary - rejection_boundary(t, gamma, df)?);
        }
    }
    Ok(check(
        worst <= 1e-8,
        format!("max r(theta*) - r(theta) = {worst:.3e}"),
    ))
}

fn criterion_5() -> Result<Verdict> {
    let mut worst_nu1: f64 = 0.0;
    for i in 0..10 {
        let theta = 0.05 * 2f64.powi(i);
        for &gamma in &[1.5, 3.46, 20.0] {
            let r = rejection_boundary(theta, gamma, 1.0)?;
            worst_nu1 = worst_nu1.max(rel_err(r, nu1_boundary(theta, gamma)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_normal: f64 = 0.0;
    for _ in 0..20 {
        let n = rng.random_range(1..=1000u64);
        let gamma = 10f64.powf(rng.random_range(0.05..3.0));
        let model = ExpFamilyModel::new(
            ExpFamilyKind::NormalMeanKnownVariance,
            0.0,
            n,
            Side::Greater,
            None,
        )?;
        let sol = solve_umpbt_expfam(&model, gamma)?;
        let want = (2.0 * gamma.ln() / n as f64).sqrt();
        worst_normal = worst_normal.max((sol.theta_star - want).abs());
    }
    Ok(check(
        worst_nu1 <= 1e-8 && worst_normal <= 1e-6,
        format!(
            "df=1 boundary rel err {worst_nu1:.2e}; normal-mean theta* abs err {worst_normal:.2e}"
        ),
    ))
}

fn criterion_6() -> Result<Verdict> {
    // (df, gamma, theta as a multiple of theta*, theta_t)
    let settings = [
        (1.0, 3.0, 1.0, 0.0),
        (1.0, 3.0, 1.0, 4.0),
        (2.0, 3.0, 0.5, 6.0),
        (6.0, 3.46, 1.0, 0.0),
        (6.0, 3.46, 1.0, 7.31),
        (6.0, 3.46, 2.0, 15.0),
        (10.0, 10.0, 1.0, 12.0),
        (3.5, 5.0, 3.0, 3.0),
        (20.0, 8.0, 1.0, 10.0),
        (40.0, 20.0, 0.3, 30.0),
    ];
    let n = 1_000_000;
    let mut worst_z: f64 = 0.0;
    let mut mc_ok = true;
    for (k, &(df, gamma, mult, theta_t)) in settings.iter().enumerate() {
        let theta = mult * solve_umpbt_chisq(&ChiSqTestSpec::with_gamma(df, gamma)?)?.theta_star;
        let p = rejection_probability(theta, theta_t, gamma, df)?;
        let mc = mc_rejection_rate(theta, theta_t, gamma, df, n, 100 + k as u64)?;
        let sd = (p * (1.0 - p) / n as f64).sqrt();
        mc_ok &= (mc - p).abs() <= 3.0 * sd;
        worst_z = worst_z.max((mc - p).abs() / sd);
    }

    let mut grid_ok = true;
    let mut worst_grid: f64 = 0.0;
    let cases = [
        (
            ExpFamilyKind::BinomialProportion,
            0.5,
            10u64,
            Side::Less,
            10.0,
            None,
        ),
        (
            ExpFamilyKind::BinomialProportion,
            0.3,
            25,
            Side::Greater,
            3.0,
            Some(4.0),
        ),
        (
            ExpFamilyKind::NormalVarianceKnownMean,
            1.0,
            15,
            Side::Greater,
            5.0,
            None,
        ),
    ];
    for (kind, theta0, n_obs, side, gamma, nuisance) in cases {
        let model = ExpFamilyModel::new(kind, theta0, n_obs, side, nuisance)?;
        let sol = solve_umpbt_expfam(&model, gamma)?;
        let (lo, hi) = match (kind, side) {
            (_, Side::Less) => (0.0, theta0),
            (ExpFamilyKind::BinomialProportion, Side::Greater) => (theta0, 1.0),
            (_, Side::Greater) => (theta0, 20.0 * theta0),
        };
        let points = 100_000;
        let step = (hi - lo) / points as f64;
        let (mut best, mut best_val) = (f64::NAN, f64::INFINITY);
        for i in 1..points {
            let t = lo + i as f64 * step;
            let v = side.sign() * expfam_boundary(t, gamma, &model)?;
            if v < best_val {
                best = t;
                best_val = v;
            }
        }
        grid_ok &= (sol.theta_star - best).abs() <= step;
        worst_grid = worst_grid.max((sol.theta_star - best).abs() / step);
    }
    Ok(check(
        mc_ok && grid_ok,
        format!(
            "max |MC - H| = {worst_z:.2} sd over 10 settings; exp-family theta* within {worst_grid:.2} grid steps"
        ),
    ))
}

fn criterion_7() -> Result<Verdict> {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for alpha in [0.1, 0.05, 0.01, 0.005, 0.001] {
        for df in (1..=120).step_by(7).chain([6, 120]) {
            let sol = match_gamma_to_alpha(&ChiSqTestSpec::with_alpha(df as f64, alpha)?)?;
            let size = noncentral_chisq_sf(sol.boundary, NoncentralChiSq::central(df as f64)?)?;
            worst = worst.max((size - alpha).abs());
            count += 1;
        }
    }
    Ok(check(
        worst <= 1e-6,
        format!("max |size - alpha| = {worst:.2e} over {count} matched tests"),
    ))
}

fn criterion_8() -> Result<Verdict> {
    let setting = TTestSetting::new(10, 3.0)?;
    let report = nonexistence_demo(&setting, &[2.0, 4.0], 100_000, 20_240_601)?;
    let a2 = report.rows[0].argmax_theta;
    let a4 = report.rows[1].argmax_theta;
    let ok = (a4 - a2).abs() > 0.1 && a2 > 0.0 && a2 < 2.0 && a4 > 0.0 && a4 < 4.0;
    Ok(check(
        ok && report.nonexistent,
        format!("argmax theta = {a2:.4} (theta_t=2), {a4:.4} (theta_t=4)"),
    ))
}

fn criterion_9() -> Result<Verdict> {
    let mut failures = Vec::new();

    let mut bessel: f64 = 0.0;
    for (order, row) in LOG_BESSEL {
        for (&z, &want) in BESSEL_Z.iter().zip(&row) {
            bessel = bessel.max((log_bessel_i(order, z)?.ln() - want).exp_m1().abs());
        }
    }
    for (order, row) in LOG_BESSEL_LARGE {
        for (&z, &want) in BESSEL_Z_LARGE.iter().zip(&row) {
            bessel = bessel.max(rel_err(log_bessel_i(order, z)?.ln(), want));
        }
    }
    if bessel > 1e-10 {
        failures.push(format!("bessel {bessel:.1e}"));
    }

    let mut recurrence: f64 = 0.0;
    for &nu in &[1.0, 2.0, 5.5, 6.0, 10.0] {
        for &z in &BESSEL_Z {
            let i = |o: f64| log_bessel_i(o, z).map(|v| v.exp());
            recurrence =
                recurrence.max(rel_err(i(nu - 1.0)? - i(nu + 1.0)?, 2.0 * nu / z * i(nu)?));
        }
    }
    if recurrence > 1e-9 {
        failures.push(format!("recurrence {recurrence:.1e}"));
    }

    let mut gamma_err: f64 = 0.0;
    for &(x, want) in LOG_GAMMA.iter().filter(|(x, _)| *x <= LOG_GAMMA_ABS_MAX) {
        gamma_err = gamma_err.max((log_gamma_fn(x)? - want).abs());
    }
    if gamma_err > 1e-13 {
        failures.push(format!("log gamma {gamma_err:.1e}"));
    }

    let mut roundtrip: f64 = 0.0;
    for &df in &[1.0, 6.0, 120.0] {
        for &p in &[0.01, 0.5, 0.99] {
            roundtrip = roundtrip.max((chisq_cdf(chisq_quantile(p, df)?, df)? - p).abs());
        }
    }
    if roundtrip > 1e-10 || (chisq_cdf(12.592, 6.0)? - 0.95).abs() > 1e-4 {
        failures.push(format!("quantile roundtrip {roundtrip:.1e}"));
    }

    let mut monotone = true;
    for i in 0..20 {
        let theta = 1.5 * i as f64;
        let dist = NoncentralChiSq::new(6.0, theta)?;
        let mut prev = 1.0;
        for j in 0..20 {
            let sf = noncentral_chisq_sf(0.25 + 2.0 * j as f64, dist)?;
            monotone &= sf <= prev;
            prev = sf;
        }
    }
    for j in 0..20 {
        let y = 0.25 + 2.0 * j as f64;
        let mut prev = 0.0;
        for i in 0..20 {
            let sf = noncentral_chisq_sf(y, NoncentralChiSq::new(6.0, 1.5 * i as f64)?)?;
            monotone &= sf >= prev;
            prev = sf;
        }
    }
    if !monotone {
        failures.push("sf monotonicity".into());
    }

    let mut norm: f64 = 0.0;
    for &(df, theta) in &[(1.0, 1.0), (6.0, 7.31), (10.0, 20.0)] {
        let dist = NoncentralChiSq::new(df, theta)?;
        let y_max = dist.mean() + 10.0 * (2.0 * (df + 2.0 * theta)).sqrt();
        let mass = simpson(
            |u| {
                let u = u.max(1e-12);
                dist.ln_pdf(u * u).map_or(f64::NAN, f64::exp) * 2.0 * u
            },
            0.0,
            y_max.sqrt(),
            40_000,
        );
        norm = norm.max((mass + dist.sf(y_max)? - 1.0).abs());
    }
    if norm.is_nan() || norm > 1e-8 {
        failures.push(format!("normalization {norm:.1e}"));
    }

    Ok(check(
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "bessel {bessel:.1e}, recurrence {recurrence:.1e}, log gamma {gamma_err:.1e}, \
                 roundtrip {roundtrip:.1e}, normalization {norm:.1e}"
            )
        } else {
            format!("failed: {}", failures.join(", "))
        },
    ))
}

type Criterion = (&'static str, Option<Duration>, fn() -> Result<Verdict>);

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria: [Criterion; 9] = [
        ("white-table reproduction", secs(1), criterion_1),
        ("threshold curve bound", secs(30), criterion_2),
        ("power dominance", secs(30), criterion_3),
        ("coverage nesting", None, criterion_4),
        ("closed-form cross-checks", None, criterion_5),
        ("oracle agreement", None, criterion_6),
        ("size identity", None, criterion_7),
        ("t-test non-existence", secs(60), criterion_8),
        ("special-function suite", secs(10), criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let (v, elapsed) = timed(limit, f);
        failed += usize::from(!v.passed);
        println!(
            "criterion {} {}: {name}: {} ({:.2} s)",
            i + 1,
            if v.passed { "PASS" } else { "FAIL" },
            v.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
