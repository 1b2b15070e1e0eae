#include "rsapi/rollout_stats.hpp"

#include <cmath>
#include <limits>

#include "rsapi/envs.hpp"
#include "rsapi/errors.hpp"

namespace rsapi {

double value_range(double gamma, std::size_t horizon) {
  check_rollout_settings(horizon, gamma);
  if (gamma == 1.0) return static_cast<double>(horizon);
  // Same accumulation order as rollout_return, so an all-ones trajectory
  // returns exactly Z.
  double total = 1.0;
  double discount = 1.0;
  for (std::size_t t = 1; t < horizon; ++t) {
    discount *= gamma;
    total += discount;
  }
  return total;
}

void ThresholdParams::validate() const {
  if (!(value_range > 0.0)) throw ContractViolation("threshold: Z must be > 0");
  if (grid_size < 1) throw ContractViolation("threshold: n must be >= 1");
  if (num_actions < 2) throw ContractViolation("threshold: at least two actions are required");
  if (!(delta > 0.0 && delta < 1.0)) throw ContractViolation("threshold: delta must be in (0,1)");
}

double ThresholdParams::log_term() const {
  return std::log(2.0 * static_cast<double>(grid_size) * static_cast<double>(num_actions) / delta);
}

double acceptance_threshold(const ThresholdParams& p, std::uint64_t sweeps) {
  p.validate();
  if (sweeps < 1) throw ContractViolation("acceptance_threshold: need at least one sweep");
  return p.value_range * std::sqrt(2.0 * p.log_term() / static_cast<double>(sweeps));
}

bool passes_threshold(double empirical_gap, double threshold) noexcept {
  constexpr double kSlack = 8.0 * std::numeric_limits<double>::epsilon();
  return empirical_gap >= threshold * (1.0 - kSlack);
}

double error_probability_bound_raw(const ThresholdParams& p, std::uint64_t sweeps, double gap) {
  p.validate();
  if (!(gap >= 0.0)) throw ContractViolation("error bound: gap must be >= 0");
  const double z = p.value_range;
  return 2.0 * static_cast<double>(p.num_actions) *
         std::exp(-static_cast<double>(sweeps) * gap * gap / (2.0 * z * z));
}

double error_probability_bound(const ThresholdParams& p, std::uint64_t sweeps, double gap) {
  return std::min(1.0, error_probability_bound_raw(p, sweeps, gap));
}

void sample_state(const GenerativeModel& model, const Policy& policy, const StatePoint& s,
                  std::size_t horizon, double gamma, RngStream& rng, std::span<double> out) {
  const std::size_t actions = model.spec().num_actions;
  if (out.size() != actions) throw ContractViolation("sample_state: output must hold |A| values");
  for (std::size_t a = 0; a < actions; ++a) {
    out[a] = rollout_return(model, policy, s, static_cast<Action>(a), horizon, gamma, rng);
  }
}

std::vector<double> sample_state(const GenerativeModel& model, const Policy& policy,
                                 const StatePoint& s, std::size_t horizon, double gamma,
                                 RngStream& rng) {
  std::vector<double> out(model.spec().num_actions);
  sample_state(model, policy, s, horizon, gamma, rng, out);
  return out;
}

StateStats::StateStats(std::size_t state_index, std::size_t num_actions)
    : state_index_(state_index), sums_(num_actions, 0.0) {
  if (num_actions < 2) throw ContractViolation("StateStats: at least two actions are required");
}

void StateStats::update(std::span<const double> returns) {
  if (accepted_) throw ContractViolation("StateStats: update after acceptance");
  if (returns.size() != sums_.size()) throw ContractViolation("StateStats: expected |A| returns");
  for (std::size_t a = 0; a < sums_.size(); ++a) sums_[a] += returns[a];
  ++sweeps_;
}

void StateStats::accept() {
  if (sweeps_ == 0) throw UndefinedStatistic("StateStats: cannot accept an unsampled state");
  label_ = empirical_best();
  accepted_ = true;
}

Action StateStats::label() const {
  if (!accepted_) throw ContractViolation("StateStats: label requested before acceptance");
  return label_;
}

double StateStats::q_hat(Action a) const {
  if (sweeps_ == 0) throw UndefinedStatistic("StateStats: no sweeps recorded");
  if (a >= sums_.size()) throw ContractViolation("StateStats: action out of range");
  return sums_[a] / static_cast<double>(sweeps_);
}

std::vector<double> StateStats::q_hat() const {
  std::vector<double> out(sums_.size());
  for (std::size_t a = 0; a < sums_.size(); ++a) out[a] = q_hat(static_cast<Action>(a));
  return out;
}

double StateStats::empirical_delta() const { return best_of(q_hat()).gap; }

Action StateStats::empirical_best() const { return best_of(q_hat()).action; }

}  // namespace rsapi
