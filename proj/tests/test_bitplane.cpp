#include <doctest.h>

#include <cmath>
#include <limits>

#include "optisketch/bitplane.hpp"
#include "optisketch/error.hpp"
#include "optisketch/rng.hpp"

using namespace optisketch;

namespace {

bool planes_binary(const BitPlaneEncoding& e) {
  return (e.planes.array() <= 1).all();
}

}  // namespace

TEST_CASE("positive integer input splits into its binary digits") {
  const Vector x = (Vector(2) << 3, 1).finished();
  const auto e = encode_bitplanes(x, 2);
  CHECK(e.scale == 1.0);
  REQUIRE(e.plane_count() == 2);
  CHECK(e.planes.col(0) == (BinaryVector(2) << 1, 1).finished());
  CHECK(e.planes.col(1) == (BinaryVector(2) << 1, 0).finished());
  CHECK(e.weights == std::vector<double>{1.0, 2.0});
}

TEST_CASE("signed input is split into positive and negative parts") {
  const Vector x = (Vector(2) << -2, 5).finished();
  const auto e = encode_bitplanes(x, 8);
  CHECK(e.scale == 1.0);
  // positive part [0, 5] = bits 0 and 2; negative part [2, 0] = bit 1 with negative weight
  REQUIRE(e.plane_count() == 3);
  CHECK(e.weights == std::vector<double>{1.0, 4.0, -2.0});
  CHECK(e.planes.col(0) == (BinaryVector(2) << 0, 1).finished());
  CHECK(e.planes.col(1) == (BinaryVector(2) << 0, 1).finished());
  CHECK(e.planes.col(2) == (BinaryVector(2) << 1, 0).finished());
  CHECK(e.reconstruct() == x);
}

TEST_CASE("zero vector has no planes and unit scale") {
  const auto e = encode_bitplanes(Vector::Zero(5), 8);
  CHECK(e.plane_count() == 0);
  CHECK(e.scale == 1.0);
  CHECK(e.reconstruct() == Vector::Zero(5));
}

TEST_CASE("real input is scaled by max|x| / (2^B - 1)") {
  const Vector x = (Vector(3) << 0.5, -1.5, 0.25).finished();
  const auto e = encode_bitplanes(x, 4);
  CHECK(e.scale == doctest::Approx(1.5 / 15.0));
  CHECK(planes_binary(e));
  // rounding error at most half a step
  CHECK((e.reconstruct() - x).cwiseAbs().maxCoeff() <= 0.5 * e.scale + 1e-15);
  // integers out of range also fall back to the max-abs step
  CHECK(bitplane_scale((Vector(2) << 300, 1).finished(), 8) == doctest::Approx(300.0 / 255.0));
}

TEST_CASE("integer inputs within the B-bit range reconstruct exactly") {
  const CounterStream rng({5, 0, Purpose::Experiment});
  for (int trial = 0; trial < 200; ++trial) {
    const int bits = 1 + trial % 12;
    const double top = std::ldexp(1.0, bits) - 1.0;
    Vector x(17);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double u = rng.uniform(static_cast<std::uint64_t>(trial * 17 + i));
      x[i] = std::round((2.0 * u - 1.0) * top);
    }
    const auto e = encode_bitplanes(x, bits);
    CAPTURE(trial);
    CHECK(planes_binary(e));
    CHECK(e.plane_count() <= 2 * bits);
    for (double w : e.weights) CHECK(std::abs(w) <= std::ldexp(1.0, bits - 1));
    CHECK(e.reconstruct() == x);
  }
}

TEST_CASE("explicit scale override and multiples of the step are exact") {
  const Vector x = (Vector(3) << 0.3, -0.6, 0.9).finished();
  const auto e = encode_bitplanes(x, 3, 0.3);
  CHECK((e.reconstruct() - x).norm() < 1e-15);
}

TEST_CASE("encoding rejects bad bit depths and non-finite entries") {
  const Vector x = Vector::Ones(3);
  CHECK_THROWS_AS(encode_bitplanes(x, 0), ConfigError);
  CHECK_THROWS_AS(encode_bitplanes(x, kMaxBitDepth + 1), ConfigError);
  Vector bad = x;
  bad[1] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(encode_bitplanes(bad, 8), ConfigError);
  bad[1] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(encode_bitplanes(bad, 8), ConfigError);
  CHECK_THROWS_AS(encode_bitplanes(x, 8, 0.0), ConfigError);
}
