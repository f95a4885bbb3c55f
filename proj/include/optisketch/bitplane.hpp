#pragma once

#include <optional>
#include <vector>

#include "optisketch/types.hpp"

namespace optisketch {

inline constexpr int kMaxBitDepth = 32;

/// Signed multi-bit vector expressed as binary planes:
/// x ≈ scale * sum_k weights[k] * planes.col(k), weights[k] = ±2^bit.
///
/// Positive-part planes come first (ascending bit), then negative-part planes.
/// All-zero planes are omitted, so the zero vector has no planes at all.
struct BitPlaneEncoding {
  BinaryMatrix planes;
  std::vector<double> weights;
  double scale = 1.0;

  Eigen::Index plane_count() const noexcept { return planes.cols(); }
  Vector reconstruct() const;
};

/// Quantization step for `values` at `bits` bits per sign.
///
/// Integer-valued data whose magnitudes fit in bits is left unscaled (step 1),
/// which keeps its encoding exact; otherwise the step is max|x| / (2^bits - 1).
/// An all-zero input gets step 1.
double bitplane_scale(const Eigen::Ref<const Matrix>& values, int bits);

/// Encodes x with the given step (defaults to bitplane_scale(x, bits)).
/// Throws ConfigError for bits outside [1, 32] or non-finite entries.
BitPlaneEncoding encode_bitplanes(const Eigen::Ref<const Vector>& x, int bits,
                                  std::optional<double> scale = std::nullopt);

}  // namespace optisketch
