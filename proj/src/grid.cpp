#include "rsapi/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rsapi/errors.hpp"

namespace rsapi {

namespace {

// m^d, or 0 on overflow.
std::uint64_t checked_power(std::uint64_t base, std::size_t exp) {
  std::uint64_t result = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && result > std::numeric_limits<std::uint64_t>::max() / base) return 0;
    result *= base;
  }
  return result;
}

}  // namespace

UniformGrid::UniformGrid(std::size_t points_per_axis, std::size_t dim)
    : per_axis_(points_per_axis), dim_(dim), size_(0) {
  if (dim < 1 || dim > kMaxStateDim) throw ContractViolation("grid dimension out of range");
  if (points_per_axis < 1) throw ContractViolation("grid needs at least one point per axis");
  const std::uint64_t n = checked_power(points_per_axis, dim);
  if (n == 0 || n > std::numeric_limits<std::size_t>::max()) {
    throw std::overflow_error("grid size overflows");
  }
  size_ = static_cast<std::size_t>(n);
}

UniformGrid UniformGrid::build(std::uint64_t requested, std::size_t dim, std::size_t num_actions) {
  if (dim < 1 || dim > kMaxStateDim) throw ContractViolation("grid dimension out of range");
  if (requested < 1) requested = 1;
  // Start from the floating-point root and correct by integer arithmetic.
  const double root =
      std::floor(std::pow(static_cast<double>(requested), 1.0 / static_cast<double>(dim)));
  if (!(root < 0x1.0p63)) throw std::overflow_error("grid size overflows");
  auto m = dim == 1 ? requested : static_cast<std::uint64_t>(root);
  if (m < 1) m = 1;
  while (m > 1 && checked_power(m - 1, dim) >= requested) --m;
  while (true) {
    const std::uint64_t p = checked_power(m, dim);
    if (p == 0) throw std::overflow_error("grid size overflows");
    if (p >= requested) break;
    ++m;
  }
  const std::uint64_t n = checked_power(m, dim);
  if (num_actions != 0 && n > std::numeric_limits<std::uint64_t>::max() / num_actions) {
    throw std::overflow_error("grid size times action count overflows");
  }
  return UniformGrid(static_cast<std::size_t>(m), dim);
}

StatePoint UniformGrid::point(std::size_t index) const {
  if (index >= size_) throw ContractViolation("grid index out of range");
  StatePoint p(dim_);
  for (std::size_t k = dim_; k-- > 0;) {
    p[k] = axis_center(index % per_axis_);
    index /= per_axis_;
  }
  return p;
}

std::size_t UniformGrid::nearest(const StatePoint& s) const {
  if (s.dim() != dim_) throw ContractViolation("nearest: state dimension does not match the grid");
  if (!s.in_unit_cube()) {
    throw DomainError("nearest: state outside [0,1]^" + std::to_string(dim_));
  }
  // The set of infinity-norm minimisers is a product over axes of
  // {i : |x_k - c_i| <= D}, D being the largest per-axis nearest distance.
  // Its lowest row-major member takes the lowest such i on every axis.
  std::array<std::size_t, kMaxStateDim> nearest_idx{};
  double worst = 0.0;
  const double m = static_cast<double>(per_axis_);
  for (std::size_t k = 0; k < dim_; ++k) {
    const double x = s[k];
    auto i = static_cast<std::size_t>(std::min(std::floor(x * m), m - 1.0));
    // Candidates are i and its neighbours; pick the closest, lowest on ties.
    std::size_t best = i;
    double best_d = std::abs(x - axis_center(i));
    if (i > 0 && std::abs(x - axis_center(i - 1)) <= best_d) {
      best = i - 1;
      best_d = std::abs(x - axis_center(i - 1));
    }
    if (i + 1 < per_axis_ && std::abs(x - axis_center(i + 1)) < best_d) {
      best = i + 1;
      best_d = std::abs(x - axis_center(i + 1));
    }
    nearest_idx[k] = best;
    worst = std::max(worst, best_d);
  }
  std::size_t index = 0;
  for (std::size_t k = 0; k < dim_; ++k) {
    std::size_t i = nearest_idx[k];
    if (i > 0 && std::abs(s[k] - axis_center(i - 1)) <= worst) --i;
    index = index * per_axis_ + i;
  }
  return index;
}

NearestNeighborPolicy::NearestNeighborPolicy(UniformGrid grid, std::vector<Action> labels)
    : grid_(grid), labels_(std::move(labels)) {
  if (labels_.size() != grid_.size()) {
    throw ContractViolation("NearestNeighborPolicy: one label per grid state required");
  }
}

}  // namespace rsapi
