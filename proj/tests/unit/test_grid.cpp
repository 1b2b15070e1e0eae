#include <limits>

#include "doctest.h"
#include "rsapi/errors.hpp"
#include "rsapi/grid.hpp"
#include "rsapi/rng.hpp"

using namespace rsapi;

TEST_CASE("grid construction examples") {
  const auto g4 = UniformGrid::build(4, 2);
  CHECK(g4.size() == 4);
  CHECK(g4.rho() == 0.25);
  CHECK(g4.point(0) == StatePoint{0.25, 0.25});
  CHECK(g4.point(3) == StatePoint{0.75, 0.75});

  const auto g9 = UniformGrid::build(9, 2);
  CHECK(g9.size() == 9);
  CHECK(g9.rho() == doctest::Approx(1.0 / 6.0));
  CHECK(g9.axis_center(0) == doctest::Approx(1.0 / 6.0));
  CHECK(g9.axis_center(1) == doctest::Approx(0.5));
  CHECK(g9.axis_center(2) == doctest::Approx(5.0 / 6.0));

  CHECK(UniformGrid::build(5, 2).size() == 9);
  CHECK(UniformGrid::build(10, 1).size() == 10);
  CHECK(UniformGrid::build(65, 3).size() == 125);
}

TEST_CASE("row-major order, first coordinate slowest") {
  const UniformGrid g(2, 2);
  CHECK(g.point(1) == StatePoint{0.25, 0.75});
  CHECK(g.point(2) == StatePoint{0.75, 0.25});
  CHECK_THROWS_AS(g.point(4), ContractViolation);
}

TEST_CASE("grid construction rejects bad sizes") {
  CHECK(UniformGrid::build(0, 1).size() == 1);
  CHECK_THROWS_AS(UniformGrid(0, 1), ContractViolation);
  CHECK_THROWS_AS(UniformGrid(2, 0), ContractViolation);
  CHECK_THROWS_AS(UniformGrid::build(std::numeric_limits<std::uint64_t>::max(), 1),
                  std::overflow_error);
}

TEST_CASE("nearest examples") {
  const UniformGrid g(2, 1);
  CHECK(g.nearest(StatePoint{0.3}) == 0);
  CHECK(g.nearest(StatePoint{0.5}) == 0);
  CHECK(g.nearest(StatePoint{0.51}) == 1);
  CHECK(g.nearest(StatePoint{0.0}) == 0);
  CHECK(g.nearest(StatePoint{1.0}) == 1);
  const UniformGrid g2(2, 2);
  CHECK(g2.point(g2.nearest(StatePoint{0.9, 0.1})) == StatePoint{0.75, 0.25});
  CHECK_THROWS_AS(g.nearest(StatePoint{1.01}), DomainError);
  CHECK_THROWS_AS(g.nearest(StatePoint{0.5, 0.5}), ContractViolation);
}

TEST_CASE("nearest matches a brute-force scan with lowest-index ties") {
  for (std::size_t d : {1u, 2u, 3u}) {
    for (std::size_t m : {1u, 2u, 3u, 5u}) {
      const UniformGrid g(m, d);
      RngStream rng(100 * d + m);
      for (int trial = 0; trial < 300; ++trial) {
        StatePoint s(d);
        for (std::size_t k = 0; k < d; ++k) {
          // Mix in exact cell boundaries to exercise ties.
          s[k] = (trial % 3 == 0) ? static_cast<double>(rng() % (m + 1)) / static_cast<double>(m)
                                  : rng.uniform();
        }
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < g.size(); ++i) {
          const double dist = linf_distance(s, g.point(i));
          if (dist < best_d) {
            best_d = dist;
            best = i;
          }
        }
        REQUIRE(g.nearest(s) == best);
        REQUIRE(best_d <= g.rho() + 1e-15);
      }
    }
  }
}

TEST_CASE("nearest-neighbour policy") {
  const UniformGrid g(4, 1);
  const NearestNeighborPolicy pi(g, {1, 1, 0, 0});
  CHECK(pi.act(StatePoint{0.3}) == 1);
  CHECK(pi.act(StatePoint{0.7}) == 0);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(pi.act(g.point(i)) == pi.labels()[i]);
  const NearestNeighborPolicy constant(g, {1, 1, 1, 1});
  RngStream rng(4);
  for (int i = 0; i < 100; ++i) CHECK(constant.act(StatePoint{rng.uniform()}) == 1);
  CHECK_THROWS_AS(NearestNeighborPolicy(g, {0, 1}), ContractViolation);
}
