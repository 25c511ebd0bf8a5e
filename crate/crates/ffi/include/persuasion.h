#ifndef PERSUASION_H
#define PERSUASION_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Solution family for a continuous prior.
typedef enum BpRegime {
  BP_REGIME_FULL_DISCLOSURE = 0,
  BP_REGIME_CONCAVE_UNIFORM = 1,
  BP_REGIME_SMALL_R_STAR = 2,
  BP_REGIME_DTU_UNDOMINATED = 3,
  BP_REGIME_HEURISTIC = 4,
} BpRegime;

// Result codes.
typedef enum BpStatus {
  BP_STATUS_OK = 0,
  BP_STATUS_NULL_POINTER = 1,
  BP_STATUS_DOMAIN = 2,
  BP_STATUS_INVALID_DISTRIBUTION = 3,
  BP_STATUS_PARAMETER = 4,
  BP_STATUS_NO_SOLUTION = 5,
  BP_STATUS_ORACLE = 6,
  BP_STATUS_PARSE = 7,
  BP_STATUS_PANIC = 8,
} BpStatus;

typedef enum BpTieRule {
  BP_TIE_RULE_AGAINST = 0,
  BP_TIE_RULE_FAVOR = 1,
  BP_TIE_RULE_EVEN = 2,
} BpTieRule;

// Opaque distribution of posterior means.
typedef struct BpMixed BpMixed;

// Opaque continuous prior.
typedef struct BpPrior BpPrior;

// Worst-case receiver types: mass `weight_lo` at `q_lo`, the rest at `q_hi`.
typedef struct BpNatureResponse {
  double q_lo;
  double q_hi;
  double weight_lo;
} BpNatureResponse;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *bp_last_error_message(void);

// Builds a distribution from atoms `(atom_at[i], atom_mass[i])` and uniform
// segments `(seg_lo[i], seg_hi[i], seg_mass[i])`.
//
// # Safety
// Each array must hold at least its stated number of elements; `out` must be writable.
enum BpStatus bp_mixed_new(const double *atom_at,
                           const double *atom_mass,
                           size_t n_atoms,
                           const double *seg_lo,
                           const double *seg_hi,
                           const double *seg_mass,
                           size_t n_segments,
                           struct BpMixed **out);

// # Safety
// `out` must be writable.
enum BpStatus bp_mixed_uniform(double lo, double hi, struct BpMixed **out);

// # Safety
// `h` must come from this library and not have been freed; null is ignored.
void bp_mixed_free(struct BpMixed *h);

// Right-continuous CDF at `q`.
//
// # Safety
// `h` must be a live handle and `out` writable.
enum BpStatus bp_mixed_cdf(const struct BpMixed *h, double q, double *out);

// # Safety
// `h` must be a live handle and `out` writable.
enum BpStatus bp_mixed_mean(const struct BpMixed *h, double *out);

// `∫₀ˣ G`.
//
// # Safety
// `h` must be a live handle and `out` writable.
enum BpStatus bp_mixed_cdf_integral(const struct BpMixed *h, double x, double *out);

// Worst-case sender payoff `1 − Ḡ(r*)`.
//
// # Safety
// `h` must be a live handle and `out` writable.
enum BpStatus bp_sender_value(const struct BpMixed *h, double r_star, double *out);

// # Safety
// `h` must be a live handle and `out` writable.
enum BpStatus bp_nature_best_response(const struct BpMixed *h,
                                      double r_star,
                                      struct BpNatureResponse *out);

// Optimal posterior distribution for a binary prior with mean `pi`.
// `out_distribution` may be null when only the value is needed.
//
// # Safety
// `out_value` must be writable; `out_distribution` writable or null.
enum BpStatus bp_binary_optimal(double pi,
                                double r_star,
                                enum BpTieRule tie_rule,
                                double *out_value,
                                struct BpMixed **out_distribution);

// # Safety
// `out` must be writable.
enum BpStatus bp_prior_truncated_normal(double mu, double sigma, struct BpPrior **out);

// CDF `Σ coeffs[k] qᵏ`.
//
// # Safety
// `coeffs` must hold `n` values; `out` must be writable.
enum BpStatus bp_prior_polynomial_cdf(const double *coeffs, size_t n, struct BpPrior **out);

// Density interpolating `(q[i], f[i])`, rescaled to unit mass.
//
// # Safety
// `q` and `f` must hold `n` values; `out` must be writable.
enum BpStatus bp_prior_piecewise_linear_density(const double *q,
                                                const double *f,
                                                size_t n,
                                                struct BpPrior **out);

// # Safety
// `h` must come from this library and not have been freed; null is ignored.
void bp_prior_free(struct BpPrior *h);

// # Safety
// `h` must be a live handle and `out` writable.
enum BpStatus bp_prior_mean(const struct BpPrior *h, double *out);

// Solves a continuous-prior problem under the against tie rule.
// `out_regime` and `out_distribution` may be null.
//
// # Safety
// `prior` must be a live handle; out pointers writable or null as stated.
enum BpStatus bp_solve_continuous(const struct BpPrior *prior,
                                  double r_star,
                                  double tol,
                                  double *out_value,
                                  enum BpRegime *out_regime,
                                  struct BpMixed **out_distribution);

// Value of the discretized game on an `n`-point grid for a binary prior.
//
// # Safety
// `out` must be writable.
enum BpStatus bp_oracle_value_binary(double pi,
                                     double r_star,
                                     enum BpTieRule tie_rule,
                                     size_t n,
                                     double *out);

// Oracle value for a continuous prior, with its prefix-integral constraints.
//
// # Safety
// `prior` must be a live handle and `out` writable.
enum BpStatus bp_oracle_value_prior(const struct BpPrior *prior,
                                    double r_star,
                                    enum BpTieRule tie_rule,
                                    size_t n,
                                    double *out);

// Solves a JSON scenario document and returns the JSON report. Release
// the string with [`bp_string_free`].
//
// # Safety
// `scenario_json` must be a nul-terminated UTF-8 string; `out` must be writable.
enum BpStatus bp_solve_scenario_json(const char *scenario_json, char **out);

// # Safety
// `s` must come from this library and not have been freed; null is ignored.
void bp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PERSUASION_H */
