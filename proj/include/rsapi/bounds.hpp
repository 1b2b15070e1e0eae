#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rsapi/envs.hpp"
#include "rsapi/grid.hpp"
#include "rsapi/smoothness.hpp"

namespace rsapi {

// Closed-form sample-complexity quantities. All logarithms are natural.
//
// Wherever a formula is rounded up to an integer, values within a relative
// 1e-9 of an integer are treated as that integer, so e.g. (1/2)(2/0.1)
// yields 10 rather than 11.

/// ceil(x), snapping values that are an integer up to rounding noise.
std::uint64_t ceil_count(double x);

/// Grid size at which an exact-Q oracle labelling has regret epsilon:
/// ceil(((1/2) (L/epsilon)^{1/alpha})^d). Returns 1 when epsilon >= L.
std::uint64_t oracle_grid_size(double epsilon, const SmoothnessParams& p);

/// Discretisation term L (1 / (2 n^{1/d}))^alpha.
double discretization_regret(std::uint64_t n, const SmoothnessParams& p);

/// Regret of FIXED with n states and c sweeps per state:
/// max{ L (1/(2 n^{1/d}))^alpha, Z sqrt(8 log(2 n |A| / delta) / c) }.
/// `sweeps_per_state` may be +infinity.
double fixed_regret(std::uint64_t n, double sweeps_per_state, double value_range,
                    const SmoothnessParams& p, std::size_t num_actions, double delta);

/// 8 (Z^2/L^2) 4^alpha n^{2 alpha / d} log(2 n |A| / delta), unrounded.
double fixed_samples_per_state_raw(std::uint64_t n, double value_range, const SmoothnessParams& p,
                                   std::size_t num_actions, double delta);

/// Sweeps per state that equalise the two FIXED regret terms (rounded up).
std::uint64_t fixed_samples_per_state(std::uint64_t n, double value_range,
                                      const SmoothnessParams& p, std::size_t num_actions,
                                      double delta);

/// log(epsilon (1 - gamma)) / log(gamma), unrounded.
double horizon_bound_raw(double epsilon, double gamma);

/// Rollout horizon sufficient for epsilon accuracy with discount gamma < 1.
/// Throws UnsupportedError for gamma = 1 and DomainError unless
/// 0 < epsilon (1 - gamma) < 1.
std::uint64_t horizon_bound(double epsilon, double gamma);

/// Number of dyadic gap buckets worth considering: the count of integers
/// m >= 0 with m < 1 + (log L + alpha log rho) / log(1/2).
std::size_t bucket_count(const SmoothnessParams& p, double rho);

/// Gap histogram W_m = { s : gap(s) in [2^-m, 2^{1-m}) }.
struct BucketHistogram {
  std::vector<std::size_t> counts;  // index m = 0 .. bucket_count - 1
  std::size_t below = 0;            // gap < 2^{-(bucket_count-1)}, including gap = 0
  std::size_t above = 0;            // gap >= 2
  double rho = 0.0;
};

BucketHistogram wm_buckets(const Environment& env, const UniformGrid& grid);

/// M 2^{beta(1-m)} rho^{-d}: the measure-derived cap on |W_m|.
double bucket_size_bound(std::size_t m, const SmoothnessParams& p, double rho);

/// ceil(2^{2m+1} Z^2 log(2 n |A| / delta)).
std::uint64_t per_bucket_required_sweeps(std::size_t m, double value_range, std::uint64_t n,
                                         std::size_t num_actions, double delta);

/// Total-sweep bound for COUNT, evaluated as
///   M 2^{beta+1} 2^{(1 + (log L + alpha log rho)/log(1/2)) / (2 - beta)}
///     2^d Z^2 n log(2 n |A| / delta).
/// Throws DomainError at the singular point beta = 2.
double count_total_bound(std::uint64_t n, double value_range, const SmoothnessParams& p,
                         std::size_t num_actions, double delta, double rho);

/// Everything the bounds tables report for one target regret.
struct ComplexityReport {
  double epsilon = 0.0;
  std::uint64_t n_required = 0;        // actual grid size after rounding to m^d
  double rho = 0.0;
  std::uint64_t c_per_state = 0;
  std::uint64_t total_fixed = 0;       // sweeps: n * c
  double count_bound = 0.0;            // sweeps
  double epsilon_achieved = 0.0;       // fixed_regret(n, c)
  std::optional<std::uint64_t> horizon_T;  // only for gamma < 1
};

ComplexityReport complexity_report(double epsilon, const SmoothnessParams& p, double value_range,
                                   std::size_t num_actions, double delta, double gamma);

}  // namespace rsapi
