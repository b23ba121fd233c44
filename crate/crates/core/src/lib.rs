//! Uniformly most powerful Bayesian tests (UMPBTs).
//!
//! The crate derives the alternative hypothesis `θ*` and the evidence
//! threshold `γ` of a UMPBT for
//!
//! * tests that the noncentrality parameter of a `χ²_ν` variable is zero, for
//!   any real `ν > 0` ([`solver::solve_umpbt_chisq`]),
//! * one-sided tests in one-parameter exponential families
//!   ([`solver::solve_umpbt_expfam`]),
//!
//! matches Bayesian rejection regions to classical size-`α` tests
//! ([`solver::match_gamma_to_alpha`]), computes Bayes factors for
//! contingency-table independence ([`contingency`]), verifies power
//! dominance on grids ([`power`]) and shows that no UMPBT exists for the
//! one-sample t-test ([`ttest`]).
//!
//! Every Bayes factor is handled on the log scale.

pub mod bayes;
pub mod cli;
pub mod contingency;
mod error;
mod optimize;
pub mod output;
pub mod power;
pub mod solver;
pub mod special;
pub mod ttest;

pub use bayes::{
    bf_ncchisq, dlogbf_dy, expfam_log_bf, log_bf_ncchisq, ChiSqTestSpec, ExpFamilyKind,
    ExpFamilyModel, Side,
};
pub use contingency::{
    independence_bf, parse_table, pearson_statistic, ContingencyTable, IndependenceResult,
};
pub use error::{Error, Result};
pub use power::{
    dominance_check, mc_rejection_rate, rejection_probability, DominanceReport, PowerCurve,
    PowerEntry,
};
pub use solver::{
    expfam_boundary, gamma_vs_df_curve, match_gamma_to_alpha, rejection_boundary, solve_chisq,
    solve_umpbt_chisq, solve_umpbt_expfam, CurvePoint, Direction, UmpbtSolution,
};
pub use special::{
    chisq_cdf, chisq_quantile, chisq_sf, log_bessel_i, log_gamma_fn, noncentral_chisq_sf,
    sample_noncentral_chisq, LogValue, NoncentralChiSq,
};
pub use ttest::{
    nonexistence_demo, t_log_bf, t_region, t_rejection_prob, NonexistenceReport, QuadraticRegion,
    TTestSetting,
};
