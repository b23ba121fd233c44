#ifndef UMPBT_H
#define UMPBT_H

/* Generated by cbindgen; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum UmpbtStatus {
  UMPBT_STATUS_OK = 0,
  UMPBT_STATUS_DOMAIN = 1,
  UMPBT_STATUS_VALIDATION = 2,
  UMPBT_STATUS_PARSE = 3,
  UMPBT_STATUS_DEGENERATE_MARGIN = 4,
  UMPBT_STATUS_OVERFLOW = 5,
  UMPBT_STATUS_NO_ROOT = 6,
  UMPBT_STATUS_BRACKETING = 7,
  UMPBT_STATUS_INTERNAL = 8,
  UMPBT_STATUS_IO = 9,
  UMPBT_STATUS_NULL_POINTER = 10,
  UMPBT_STATUS_OUT_OF_RANGE = 11,
  UMPBT_STATUS_PANIC = 12,
} UmpbtStatus;

typedef enum UmpbtFamily {
  UMPBT_FAMILY_BINOMIAL = 0,
  UMPBT_FAMILY_NORMAL_MEAN = 1,
  UMPBT_FAMILY_NORMAL_VARIANCE = 2,
} UmpbtFamily;

typedef enum UmpbtSide {
  UMPBT_SIDE_GREATER = 0,
  UMPBT_SIDE_LESS = 1,
} UmpbtSide;

// Opaque evidence-threshold curve.
typedef struct UmpbtCurve UmpbtCurve;

// Opaque contingency table.
typedef struct UmpbtTable UmpbtTable;

typedef struct UmpbtSolution {
  double theta_star;
  // Critical value of the sufficient statistic.
  double boundary;
  double gamma;
  // +1 or -1.
  int32_t direction;
  // NaN for exponential-family solutions.
  double df;
} UmpbtSolution;

typedef struct UmpbtDominance {
  double theta_star;
  double boundary;
  double max_margin;
  double worst_theta;
  double worst_theta_t;
  bool passed;
} UmpbtDominance;

typedef struct UmpbtIndependence {
  double statistic;
  uint32_t df;
  double gamma;
  double theta_star;
  double log_bf;
  double bf;
  double critical_value;
  double min_expected;
  bool reject;
} UmpbtIndependence;

typedef struct UmpbtCurvePoint {
  uint32_t df;
  double alpha;
  double gamma;
  double theta_star;
} UmpbtCurvePoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread, or NULL. The pointer stays
// valid until the next failing call on the same thread.
const char *umpbt_last_error_message(void);

// `log I_order(z)`.
//
// # Safety
// `out` must be valid for writes.
enum UmpbtStatus umpbt_log_bessel_i(double order, double z, double *out);

// Log Bayes factor of `χ²_df(theta)` against `χ²_df` at statistic `y`.
//
// # Safety
// `out` must be valid for writes.
enum UmpbtStatus umpbt_log_bf_ncchisq(double y, double theta, double df, double *out);

// Statistic at which the Bayes factor for `theta` equals `gamma`.
//
// # Safety
// `out` must be valid for writes.
enum UmpbtStatus umpbt_rejection_boundary(double theta, double gamma, double df, double *out);

// UMPBT for a chi-squared test with evidence threshold `gamma`.
//
// # Safety
// `out` must be valid for writes.
enum UmpbtStatus umpbt_solve_chisq(double df, double gamma, struct UmpbtSolution *out);

// UMPBT whose rejection region is the classical level-`alpha` region.
//
// # Safety
// `out` must be valid for writes.
enum UmpbtStatus umpbt_match_gamma_to_alpha(double df, double alpha, struct UmpbtSolution *out);

// `P(Y > y)` for `Y ~ χ²_df(noncentrality)`.
//
// # Safety
// `out` must be valid for writes.
enum UmpbtStatus umpbt_noncentral_chisq_sf(double y, double df, double noncentrality, double *out);

// Central chi-squared quantile.
//
// # Safety
// `out` must be valid for writes.
enum UmpbtStatus umpbt_chisq_quantile(double p, double df, double *out);

// Probability that the test with alternative `theta` rejects when the true
// noncentrality is `theta_t`.
//
// # Safety
// `out` must be valid for writes.
enum UmpbtStatus umpbt_rejection_probability(double theta,
                                             double theta_t,
                                             double gamma,
                                             double df,
                                             double *out);

// Exponential-family UMPBT. `family` is a [`UmpbtFamily`] value and `side`
// a [`UmpbtSide`] value; a NaN `nuisance` selects the family default.
//
// # Safety
// `out` must be valid for writes.
enum UmpbtStatus umpbt_solve_expfam(int32_t family,
                                    double theta0,
                                    uint64_t n,
                                    int32_t side,
                                    double nuisance,
                                    double gamma,
                                    struct UmpbtSolution *out);

// Dominance check on the default grids: 50 log-spaced alternatives over
// `[θ*/100, 100θ*]` and `θ_t ∈ {0, θ*/2, θ*, 2θ*, 5θ*}`.
//
// # Safety
// `out` must be valid for writes.
enum UmpbtStatus umpbt_dominance_check(double df, double gamma, struct UmpbtDominance *out);

// Parses CSV counts from `len` bytes at `data`.
//
// # Safety
// `data` must point to `len` readable bytes; `out` must be valid for writes.
enum UmpbtStatus umpbt_table_from_csv(const uint8_t *data,
                                      uintptr_t len,
                                      bool has_header,
                                      bool has_row_labels,
                                      struct UmpbtTable **out);

// # Safety
// `table` must be NULL or a live handle.
uintptr_t umpbt_table_rows(const struct UmpbtTable *table);

// # Safety
// `table` must be NULL or a live handle.
uintptr_t umpbt_table_cols(const struct UmpbtTable *table);

// Independence Bayes factor with `γ` matched to level `alpha`.
//
// # Safety
// `table` must be a live handle; `out` must be valid for writes.
enum UmpbtStatus umpbt_table_independence_bf(const struct UmpbtTable *table,
                                             double alpha,
                                             struct UmpbtIndependence *out);

// # Safety
// `table` must be NULL or a handle not yet freed.
void umpbt_table_free(struct UmpbtTable *table);

// Matched thresholds for `df = 1..=df_max` and each of `n_alphas` levels.
//
// # Safety
// `alphas` must point to `n_alphas` doubles; `out` must be valid for writes.
enum UmpbtStatus umpbt_curve_new(const double *alphas,
                                 uintptr_t n_alphas,
                                 uint32_t df_max,
                                 struct UmpbtCurve **out);

// # Safety
// `curve` must be NULL or a live handle.
uintptr_t umpbt_curve_len(const struct UmpbtCurve *curve);

// Points are ordered by `df`, then by the order of the requested levels.
//
// # Safety
// `curve` must be a live handle; `out` must be valid for writes.
enum UmpbtStatus umpbt_curve_get(const struct UmpbtCurve *curve,
                                 uintptr_t index,
                                 struct UmpbtCurvePoint *out);

// # Safety
// `curve` must be NULL or a handle not yet freed.
void umpbt_curve_free(struct UmpbtCurve *curve);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UMPBT_H */
