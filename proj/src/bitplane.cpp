#include "optisketch/bitplane.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "optisketch/error.hpp"

namespace optisketch {

namespace {

void check_bits(int bits) {
  if (bits < 1 || bits > kMaxBitDepth)
    throw ConfigError("bit depth must be in [1, " + std::to_string(kMaxBitDepth) + "], got " + std::to_string(bits));
}

}  // namespace

Vector BitPlaneEncoding::reconstruct() const {
  Vector x = Vector::Zero(planes.rows());
  for (Eigen::Index k = 0; k < planes.cols(); ++k)
    x += weights[static_cast<std::size_t>(k)] * planes.col(k).cast<double>();
  return scale * x;
}

double bitplane_scale(const Eigen::Ref<const Matrix>& values, int bits) {
  check_bits(bits);
  const double levels = std::ldexp(1.0, bits) - 1.0;
  double max_abs = 0.0;
  bool integral = true;
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
      const double v = values(i, j);
      if (!std::isfinite(v)) throw ConfigError("bit-plane encoding: non-finite entry");
      max_abs = std::max(max_abs, std::abs(v));
      integral = integral && v == std::round(v);
    }
  }
  if (max_abs == 0.0 || (integral && max_abs <= levels)) return 1.0;
  return max_abs / levels;
}

BitPlaneEncoding encode_bitplanes(const Eigen::Ref<const Vector>& x, int bits, std::optional<double> scale) {
  check_bits(bits);
  const double step = scale ? *scale : bitplane_scale(x, bits);
  if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("bit-plane encoding: scale must be positive");
  const std::uint64_t top = (std::uint64_t{1} << bits) - 1;

  const Eigen::Index n = x.size();
  std::vector<std::uint64_t> pos(static_cast<std::size_t>(n)), neg(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = x[i];
    if (!std::isfinite(v)) throw ConfigError("bit-plane encoding: non-finite entry");
    const double q = std::min(std::round(std::abs(v) / step), static_cast<double>(top));
    (v >= 0.0 ? pos : neg)[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(q);
  }

  BitPlaneEncoding enc;
  enc.scale = step;
  std::vector<BinaryVector> planes;
  for (int sign = 0; sign < 2; ++sign) {
    const auto& part = sign == 0 ? pos : neg;
    for (int bit = 0; bit < bits; ++bit) {
      BinaryVector plane(n);
      bool any = false;
      for (Eigen::Index i = 0; i < n; ++i) {
        plane[i] = static_cast<std::uint8_t>((part[static_cast<std::size_t>(i)] >> bit) & 1u);
        any = any || plane[i] != 0;
      }
      if (!any) continue;
      planes.push_back(std::move(plane));
      enc.weights.push_back((sign == 0 ? 1.0 : -1.0) * std::ldexp(1.0, bit));
    }
  }
  enc.planes.resize(n, static_cast<Eigen::Index>(planes.size()));
  for (std::size_t k = 0; k < planes.size(); ++k) enc.planes.col(static_cast<Eigen::Index>(k)) = planes[k];
  return enc;
}

}  // namespace optisketch
