#include <doctest.h>

#include <cmath>
#include <set>

#include "optisketch/rng.hpp"

using namespace optisketch;

TEST_CASE("philox4x32-10 known-answer vectors") {
  // Random123 kat_vectors
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == Philox4x32Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        Philox4x32Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        Philox4x32Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are pure functions of (seed, stream, purpose, index)") {
  const CounterStream a({42, 3, Purpose::DenseMatrix});
  const CounterStream b({42, 3, Purpose::DenseMatrix});
  for (std::uint64_t i = 0; i < 100; ++i) CHECK(a.normal(i) == b.normal(i));

  // changing any coordinate changes the draws
  const CounterStream other_seed({43, 3, Purpose::DenseMatrix});
  const CounterStream other_stream({42, 4, Purpose::DenseMatrix});
  const CounterStream other_purpose({42, 3, Purpose::OpticalMatrix});
  CHECK(a.block(0) != other_seed.block(0));
  CHECK(a.block(0) != other_stream.block(0));
  CHECK(a.block(0) != other_purpose.block(0));
  CHECK(a.normal_pair(5)[1] == a.normal(11));
}

TEST_CASE("uniforms lie in the open unit interval and normals have unit moments") {
  const CounterStream rng({7, 0, Purpose::Experiment});
  constexpr int kN = 200000;
  double sum = 0.0, sumsq = 0.0, usum = 0.0;
  int ones = 0;
  for (int i = 0; i < kN; ++i) {
    const double u = rng.uniform(static_cast<std::uint64_t>(i));
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    usum += u;
    const double z = rng.normal(static_cast<std::uint64_t>(i));
    sum += z;
    sumsq += z * z;
    ones += rng.bit(static_cast<std::uint64_t>(i)) ? 1 : 0;
  }
  const double n = kN;
  // 5 standard errors: sd(z) = 1, sd(z^2) = sqrt(2), sd(u) = sqrt(1/12), sd(bit) = 1/2
  CHECK(std::abs(sum / n) < 5.0 / std::sqrt(n));
  CHECK(std::abs(sumsq / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(usum / n - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(ones / n - 0.5) < 5.0 * 0.5 / std::sqrt(n));
}
