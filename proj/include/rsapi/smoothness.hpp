#pragma once

#include <cstddef>

namespace rsapi {

/// Regularity constants of a value-function class:
///   |Q(s,a) - Q(s',a)| <= (L/2) |s - s'|_inf^alpha            (Hoelder)
///   meas{ s : gap(s) < eps } < M eps^beta                     (measure)
/// over the state space [0,1]^dim.
struct SmoothnessParams {
  double lipschitz = 1.0;  // L
  double alpha = 1.0;
  double measure = 1.0;    // M
  double beta = 1.0;
  std::size_t dim = 1;

  void validate() const;
};

}  // namespace rsapi
