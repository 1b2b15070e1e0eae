#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rsapi/mdp.hpp"

namespace rsapi {

/// Cell-centred lattice of m^d states over [0,1]^d.
///
/// Per-axis centres sit at (2i+1)/(2m), so adjacent states are 1/m apart and
/// every point of the cube lies within infinity-distance rho = 1/(2m) of a
/// state. States are indexed row-major with the first coordinate slowest.
class UniformGrid {
 public:
  UniformGrid(std::size_t points_per_axis, std::size_t dim);

  /// Smallest grid with at least `requested` states (rounded up to a perfect
  /// d-th power). Throws std::overflow_error if size * num_actions does not
  /// fit in 64 bits.
  static UniformGrid build(std::uint64_t requested, std::size_t dim, std::size_t num_actions = 2);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t points_per_axis() const noexcept { return per_axis_; }
  std::size_t size() const noexcept { return size_; }
  double rho() const noexcept { return 0.5 / static_cast<double>(per_axis_); }
  double spacing() const noexcept { return 1.0 / static_cast<double>(per_axis_); }

  double axis_center(std::size_t i) const noexcept {
    return static_cast<double>(2 * i + 1) / static_cast<double>(2 * per_axis_);
  }

  StatePoint point(std::size_t index) const;

  /// Index of the state closest to `s` in infinity norm; ties go to the
  /// lowest index. Throws DomainError if `s` is outside [0,1]^d.
  std::size_t nearest(const StatePoint& s) const;

  friend bool operator==(const UniformGrid&, const UniformGrid&) = default;

 private:
  std::size_t per_axis_;
  std::size_t dim_;
  std::size_t size_;
};

/// Piecewise-constant policy: each point takes the label of its nearest
/// grid state.
class NearestNeighborPolicy final : public Policy {
 public:
  NearestNeighborPolicy(UniformGrid grid, std::vector<Action> labels);

  Action act(const StatePoint& state) const override { return labels_[grid_.nearest(state)]; }

  const UniformGrid& grid() const noexcept { return grid_; }
  std::span<const Action> labels() const noexcept { return labels_; }

 private:
  UniformGrid grid_;
  std::vector<Action> labels_;
};

}  // namespace rsapi
