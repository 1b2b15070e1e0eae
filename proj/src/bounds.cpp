#include "rsapi/bounds.hpp"

#include <cmath>
#include <limits>

#include "rsapi/errors.hpp"

namespace rsapi {

namespace {

double log_term(std::uint64_t n, std::size_t num_actions, double delta) {
  if (n < 1) throw ContractViolation("bounds: n must be >= 1");
  if (num_actions < 1) throw ContractViolation("bounds: |A| must be >= 1");
  // delta >= 1 is allowed as long as the log term stays positive.
  if (!(delta > 0.0)) throw ContractViolation("bounds: delta must be > 0");
  const double t =
      std::log(2.0 * static_cast<double>(n) * static_cast<double>(num_actions) / delta);
  if (!(t > 0.0)) throw ContractViolation("bounds: log(2 n |A| / delta) must be > 0");
  return t;
}

void check_range(double value_range) {
  if (!(value_range > 0.0)) throw ContractViolation("bounds: Z must be > 0");
}

// 1 + (log L + alpha log rho) / log(1/2)
double bucket_limit(const SmoothnessParams& p, double rho) {
  if (!(rho > 0.0)) throw ContractViolation("bounds: rho must be > 0");
  return 1.0 + (std::log(p.lipschitz) + p.alpha * std::log(rho)) / std::log(0.5);
}

}  // namespace

void SmoothnessParams::validate() const {
  if (!(lipschitz > 0.0)) throw ContractViolation("smoothness: L must be > 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ContractViolation("smoothness: alpha must be in (0,1]");
  if (!(measure > 0.0)) throw ContractViolation("smoothness: M must be > 0");
  if (!(beta > 0.0)) throw ContractViolation("smoothness: beta must be > 0");
  if (dim < 1) throw ContractViolation("smoothness: dim must be >= 1");
}

std::uint64_t ceil_count(double x) {
  if (!std::isfinite(x)) throw DomainError("ceil_count: non-finite value");
  if (x <= 0.0) return 0;
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, r)) return static_cast<std::uint64_t>(r);
  if (x >= 0x1.0p63) throw DomainError("ceil_count: value too large");
  return static_cast<std::uint64_t>(std::ceil(x));
}

std::uint64_t oracle_grid_size(double epsilon, const SmoothnessParams& p) {
  p.validate();
  if (!(epsilon > 0.0)) throw DomainError("oracle_grid_size: epsilon must be > 0");
  if (epsilon >= p.lipschitz) return 1;
  const double per_axis = 0.5 * std::pow(p.lipschitz / epsilon, 1.0 / p.alpha);
  return std::max<std::uint64_t>(1, ceil_count(std::pow(per_axis, static_cast<double>(p.dim))));
}

double discretization_regret(std::uint64_t n, const SmoothnessParams& p) {
  p.validate();
  if (n < 1) throw ContractViolation("bounds: n must be >= 1");
  const double rho =
      1.0 / (2.0 * std::pow(static_cast<double>(n), 1.0 / static_cast<double>(p.dim)));
  return p.lipschitz * std::pow(rho, p.alpha);
}

double fixed_regret(std::uint64_t n, double sweeps_per_state, double value_range,
                    const SmoothnessParams& p, std::size_t num_actions, double delta) {
  check_range(value_range);
  if (!(sweeps_per_state > 0.0)) throw ContractViolation("fixed_regret: c must be > 0");
  const double grid_term = discretization_regret(n, p);
  const double estimation_term =
      value_range * std::sqrt(8.0 * log_term(n, num_actions, delta) / sweeps_per_state);
  return std::max(grid_term, estimation_term);
}

double fixed_samples_per_state_raw(std::uint64_t n, double value_range, const SmoothnessParams& p,
                                   std::size_t num_actions, double delta) {
  p.validate();
  check_range(value_range);
  const double z2_over_l2 = (value_range * value_range) / (p.lipschitz * p.lipschitz);
  return 8.0 * z2_over_l2 * std::pow(4.0, p.alpha) *
         std::pow(static_cast<double>(n), 2.0 * p.alpha / static_cast<double>(p.dim)) *
         log_term(n, num_actions, delta);
}

std::uint64_t fixed_samples_per_state(std::uint64_t n, double value_range,
                                      const SmoothnessParams& p, std::size_t num_actions,
                                      double delta) {
  return std::max<std::uint64_t>(
      1, ceil_count(fixed_samples_per_state_raw(n, value_range, p, num_actions, delta)));
}

double horizon_bound_raw(double epsilon, double gamma) {
  if (gamma == 1.0) throw UnsupportedError("horizon_bound: no closed form for gamma = 1");
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("horizon_bound: gamma must be in (0,1)");
  const double x = epsilon * (1.0 - gamma);
  if (!(x > 0.0 && x < 1.0)) throw DomainError("horizon_bound: need 0 < epsilon (1 - gamma) < 1");
  return std::log(x) / std::log(gamma);
}

std::uint64_t horizon_bound(double epsilon, double gamma) {
  return std::max<std::uint64_t>(1, ceil_count(horizon_bound_raw(epsilon, gamma)));
}

std::size_t bucket_count(const SmoothnessParams& p, double rho) {
  p.validate();
  const double limit = bucket_limit(p, rho);
  if (limit <= 0.0) return 0;
  // Integers m >= 0 with m < limit.
  return static_cast<std::size_t>(ceil_count(limit));
}

BucketHistogram wm_buckets(const Environment& env, const UniformGrid& grid) {
  const auto params = env.smoothness();
  if (!params) throw UnsupportedError(std::string(env.name()) + " has no certified constants");
  if (!env.analytic()) throw UnsupportedError("wm_buckets needs analytic gaps");
  BucketHistogram h;
  h.rho = grid.rho();
  h.counts.assign(bucket_count(*params, h.rho), 0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double gap = env.exact_best_action(grid.point(i)).gap;
    if (gap >= 2.0) {
      ++h.above;
      continue;
    }
    // Powers of two are exact, so the bucket edges are compared exactly.
    bool placed = false;
    for (std::size_t m = 0; m < h.counts.size(); ++m) {
      if (gap >= std::ldexp(1.0, -static_cast<int>(m))) {
        ++h.counts[m];
        placed = true;
        break;
      }
    }
    if (!placed) ++h.below;
  }
  return h;
}

double bucket_size_bound(std::size_t m, const SmoothnessParams& p, double rho) {
  p.validate();
  return p.measure * std::pow(2.0, p.beta * (1.0 - static_cast<double>(m))) *
         std::pow(rho, -static_cast<double>(p.dim));
}

std::uint64_t per_bucket_required_sweeps(std::size_t m, double value_range, std::uint64_t n,
                                         std::size_t num_actions, double delta) {
  check_range(value_range);
  return ceil_count(std::ldexp(1.0, static_cast<int>(2 * m + 1)) * value_range * value_range *
                    log_term(n, num_actions, delta));
}

double count_total_bound(std::uint64_t n, double value_range, const SmoothnessParams& p,
                         std::size_t num_actions, double delta, double rho) {
  p.validate();
  check_range(value_range);
  if (p.beta == 2.0) throw DomainError("count_total_bound: singular at beta = 2");
  const double exponent = bucket_limit(p, rho) / (2.0 - p.beta);
  return p.measure * std::pow(2.0, p.beta + 1.0) * std::pow(2.0, exponent) *
         std::pow(2.0, static_cast<double>(p.dim)) * value_range * value_range *
         static_cast<double>(n) * log_term(n, num_actions, delta);
}

ComplexityReport complexity_report(double epsilon, const SmoothnessParams& p, double value_range,
                                   std::size_t num_actions, double delta, double gamma) {
  ComplexityReport r;
  r.epsilon = epsilon;
  const UniformGrid grid = UniformGrid::build(oracle_grid_size(epsilon, p), p.dim, num_actions);
  r.n_required = grid.size();
  r.rho = grid.rho();
  r.c_per_state = fixed_samples_per_state(r.n_required, value_range, p, num_actions, delta);
  r.total_fixed = r.n_required * r.c_per_state;
  r.count_bound = count_total_bound(r.n_required, value_range, p, num_actions, delta, r.rho);
  r.epsilon_achieved = fixed_regret(r.n_required, static_cast<double>(r.c_per_state), value_range,
                                    p, num_actions, delta);
  if (gamma < 1.0) {
    try {
      r.horizon_T = horizon_bound(epsilon, gamma);
    } catch (const DomainError&) {
      r.horizon_T.reset();
    }
  }
  return r;
}

}  // namespace rsapi
