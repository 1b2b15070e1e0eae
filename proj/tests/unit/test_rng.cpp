#include <set>

#include "doctest.h"
#include "rsapi/rng.hpp"

using rsapi::RngStream;
using rsapi::StreamTag;

TEST_CASE("same seed and labels give the same sequence") {
  auto a = RngStream::labeled(7, StreamTag::rollout, 0, 3, 9);
  auto b = RngStream::labeled(7, StreamTag::rollout, 0, 3, 9);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());
}

TEST_CASE("streams differ across seeds, tags and labels") {
  std::set<std::uint64_t> first;
  first.insert(RngStream::labeled(1, StreamTag::rollout, 0, 0, 0)());
  first.insert(RngStream::labeled(2, StreamTag::rollout, 0, 0, 0)());
  first.insert(RngStream::labeled(1, StreamTag::evaluation, 0, 0, 0)());
  first.insert(RngStream::labeled(1, StreamTag::rollout, 1, 0, 0)());
  first.insert(RngStream::labeled(1, StreamTag::rollout, 0, 1, 0)());
  first.insert(RngStream::labeled(1, StreamTag::rollout, 0, 0, 1)());
  first.insert(RngStream(1, {1, 0, 0})());  // shorter label list
  CHECK(first.size() == 7);
}

TEST_CASE("label order matters") {
  CHECK(RngStream(5, {1, 2})() != RngStream(5, {2, 1})());
}

TEST_CASE("uniform stays in [0,1) and has mean near 1/2") {
  RngStream rng(42);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // sd of the mean is 1/sqrt(12 n) ~ 6.5e-4
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.004));
}

TEST_CASE("uniform(lo, hi) maps into the interval") {
  RngStream rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform(-2.0, 3.0);
    CHECK(x >= -2.0);
    CHECK(x < 3.0);
  }
}

TEST_CASE("copies continue identically") {
  RngStream a(11);
  a();
  RngStream b = a;
  CHECK(a == b);
  CHECK(a() == b());
}

TEST_CASE("mix64 is a bijection on a sample") {
  std::set<std::uint64_t> out;
  for (std::uint64_t i = 0; i < 10000; ++i) out.insert(rsapi::mix64(i));
  CHECK(out.size() == 10000);
}
