#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rsapi/mdp.hpp"

namespace rsapi {

/// Width Z of the range of a T-horizon discounted return with rewards in
/// [0,1]: (1 - gamma^T) / (1 - gamma), or T when gamma = 1.
double value_range(double gamma, std::size_t horizon);

/// Inputs of the Hoeffding acceptance test.
struct ThresholdParams {
  double value_range = 1.0;   // Z
  std::size_t grid_size = 1;  // n
  std::size_t num_actions = 2;
  double delta = 0.05;        // total failure probability

  void validate() const;

  /// log(2 n |A| / delta), natural log.
  double log_term() const;
};

/// theta(c) = Z sqrt(2 log(2 n |A| / delta) / c).
double acceptance_threshold(const ThresholdParams& p, std::uint64_t sweeps);

/// True when an empirical gap clears the threshold. Equality accepts; the
/// comparison allows a few ulps so that exact boundary cases are not lost
/// to rounding in the sums.
bool passes_threshold(double empirical_gap, double threshold) noexcept;

/// 2 |A| exp(-c gap^2 / (2 Z^2)) before capping at 1.
double error_probability_bound_raw(const ThresholdParams& p, std::uint64_t sweeps, double gap);

/// min(1, error_probability_bound_raw(...)).
double error_probability_bound(const ThresholdParams& p, std::uint64_t sweeps, double gap);

/// One sweep at `s`: one rollout per action, each taking that action first
/// and then following `policy` for T-1 steps. Writes |A| returns to `out`.
void sample_state(const GenerativeModel& model, const Policy& policy, const StatePoint& s,
                  std::size_t horizon, double gamma, RngStream& rng, std::span<double> out);

std::vector<double> sample_state(const GenerativeModel& model, const Policy& policy,
                                 const StatePoint& s, std::size_t horizon, double gamma,
                                 RngStream& rng);

/// Rollout accounting for one grid state.
class StateStats {
 public:
  StateStats(std::size_t state_index, std::size_t num_actions);

  /// Adds one sweep of per-action returns. Throws ContractViolation if the
  /// state is already accepted or the length is not |A|.
  void update(std::span<const double> returns);

  /// Freezes the state with the empirical arg-max as its label.
  void accept();

  std::size_t state_index() const noexcept { return state_index_; }
  std::size_t num_actions() const noexcept { return sums_.size(); }
  std::uint64_t sweeps() const noexcept { return sweeps_; }
  std::span<const double> return_sums() const noexcept { return sums_; }
  bool accepted() const noexcept { return accepted_; }
  Action label() const;

  double q_hat(Action a) const;
  std::vector<double> q_hat() const;

  /// max - second max of q_hat. Throws UndefinedStatistic before the first sweep.
  double empirical_delta() const;

  /// Lowest-index arg-max of q_hat.
  Action empirical_best() const;

 private:
  std::size_t state_index_;
  std::uint64_t sweeps_ = 0;
  std::vector<double> sums_;
  bool accepted_ = false;
  Action label_ = 0;
};

}  // namespace rsapi
