#pragma once

// Random-projection backends.
//
//  * DenseGaussianProjector: explicit real m x n matrix with N(0, 1/m) entries.
//  * OpticalTransform: simulated optical device, x -> |C x|^2 for binary x,
//    with C complex Gaussian (total variance 1/m per entry).
//  * LinearizedProjector: recovers a real linear projection g(b) = G b from
//    intensity-only measurements by interfering the data block with a fixed
//    binary anchor, and handles multi-bit input through bit planes.
//
// All projectors are immutable after construction and safe to share between
// threads.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "optisketch/rng.hpp"
#include "optisketch/types.hpp"

namespace optisketch {

enum class Backend { DenseGaussian, OpticalLinearized };
enum class AnchorPolicy { AllOnes, RandomBinary };

std::string to_string(Backend b);
std::string to_string(AnchorPolicy p);
Backend backend_from_string(const std::string& s);
AnchorPolicy anchor_policy_from_string(const std::string& s);

/// Finite-precision camera readout. Intensities are rounded to the nearest of
/// `levels` evenly spaced values in [0, saturation_value]; anything brighter
/// reads as the top level.
struct ReadoutQuantization {
  std::uint32_t levels = 256;
  /// <= 0 means "calibrate from a pilot batch when the projector is built".
  double saturation_value = 0.0;
  double calibration_percentile = 99.9;

  std::uint32_t level(double intensity) const noexcept;
  double dequantize(std::uint32_t level) const noexcept;
  /// Same as dequantize(level(intensity)).
  double apply(double intensity) const noexcept;
};

struct ProjectionConfig {
  std::size_t input_dim = 0;   // n
  std::size_t output_dim = 0;  // m
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;
  Backend backend = Backend::DenseGaussian;
  std::optional<ReadoutQuantization> quantization;
  int bit_depth = 8;
  AnchorPolicy anchor_policy = AnchorPolicy::AllOnes;
  std::size_t anchor_dim = 0;  // 0 selects anchor_dim = input_dim
  bool per_column_scale = false;

  double compression_ratio() const noexcept {
    return static_cast<double>(output_dim) / static_cast<double>(input_dim);
  }
  std::size_t effective_anchor_dim() const noexcept { return anchor_dim == 0 ? input_dim : anchor_dim; }
  ProjectionConfig with_stream(std::uint32_t s) const {
    ProjectionConfig c = *this;
    c.stream = s;
    return c;
  }
  /// Throws ConfigError on zero dimensions, bad bit depth, or bad quantization.
  void validate() const;
  StreamKey key(Purpose purpose) const noexcept { return {seed, stream, purpose}; }
};

class DenseGaussianProjector {
 public:
  explicit DenseGaussianProjector(const ProjectionConfig& config);

  /// R * X.
  Matrix project(const Matrix& x, Execution exec = Execution::Parallel) const;

  const Matrix& matrix() const noexcept { return r_; }
  const ProjectionConfig& config() const noexcept { return config_; }

 private:
  ProjectionConfig config_;
  Matrix r_;
};

class OpticalTransform {
 public:
  OpticalTransform(std::size_t input_dim, std::size_t anchor_dim, std::size_t output_dim, StreamKey key,
                   std::optional<ReadoutQuantization> quantization = std::nullopt);

  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t anchor_dim() const noexcept { return anchor_dim_; }
  std::size_t output_dim() const noexcept { return static_cast<std::size_t>(c_.rows()); }
  /// Length of a device input: data block followed by anchor block.
  std::size_t width() const noexcept { return input_dim_ + anchor_dim_; }

  /// |C x|^2 for binary x of length width(). With quantization enabled the
  /// readout is returned in intensity units, i.e. dequantize(level).
  Vector transform(std::span<const std::uint8_t> x) const;

  /// Raw readout levels; requires quantization.
  std::vector<std::uint32_t> levels(std::span<const std::uint8_t> x) const;

  /// transform() applied to every column of `inputs` (width() rows).
  Matrix transform_batch(const BinaryMatrix& inputs, Execution exec = Execution::Parallel) const;

  /// For every data plane b (input_dim rows): signal = transform([b; 0]) and
  /// mixed = transform([b; anchor]). Two device readouts per plane.
  void transform_with_anchor(const BinaryMatrix& planes, const BinaryVector& anchor, Matrix& signal,
                             Matrix& mixed, Execution exec = Execution::Parallel) const;

  const ComplexMatrix& matrix() const noexcept { return c_; }
  auto data_block() const { return c_.leftCols(static_cast<Eigen::Index>(input_dim_)); }
  auto anchor_block() const { return c_.rightCols(static_cast<Eigen::Index>(anchor_dim_)); }
  const std::optional<ReadoutQuantization>& quantization() const noexcept { return quantization_; }

  /// Replaces the readout model; used once during projector calibration.
  void set_quantization(std::optional<ReadoutQuantization> q) { quantization_ = q; }

 private:
  void apply_readout(Matrix& intensities) const;

  std::size_t input_dim_;
  std::size_t anchor_dim_;
  ComplexMatrix c_;
  ComplexMatrix data_;  // copy of the data block, contiguous for the kernels
  std::optional<ReadoutQuantization> quantization_;
};

class LinearizedProjector {
 public:
  /// Builds the transform, draws the anchor, calibrates readout saturation when
  /// requested, and measures the anchor intensity I0 = |C2 s|^2.
  /// Throws CalibrationError when no row clears the calibration floor.
  explicit LinearizedProjector(const ProjectionConfig& config);

  /// g(b) for a binary data vector: (I2 - I1 - I0) / sqrt(2 I0) on unmasked
  /// rows and 0 on masked rows, where I1 = |C1 b|^2 and I2 = |C1 b + C2 s|^2.
  Vector project_linear(std::span<const std::uint8_t> b) const;

  /// project_linear() for every column of `planes`.
  Matrix project_planes(const BinaryMatrix& planes, Execution exec = Execution::Parallel) const;

  /// Multi-bit projection through bit planes. Equals G * Xq, where Xq is X
  /// rounded to the bit-plane grid.
  Matrix project(const Matrix& x, int bits, Execution exec = Execution::Parallel) const;
  Matrix project(const Matrix& x, Execution exec = Execution::Parallel) const {
    return project(x, config_.bit_depth, exec);
  }

  /// The real m x n matrix G applied by project_linear(), computed from the
  /// simulator internals: G(i, j) = 2 Re(conj(u_i) C1(i, j)) / sqrt(2 I0_i), u = C2 s.
  Matrix effective_matrix() const;

  const OpticalTransform& transform() const noexcept { return transform_; }
  const BinaryVector& anchor() const noexcept { return anchor_; }
  const Vector& calibration() const noexcept { return i0_; }
  const std::vector<bool>& row_mask() const noexcept { return row_mask_; }
  const Vector& row_scale() const noexcept { return row_scale_; }
  double calibration_floor() const noexcept { return floor_; }
  const ProjectionConfig& config() const noexcept { return config_; }

 private:
  ProjectionConfig config_;
  OpticalTransform transform_;
  BinaryVector anchor_;
  Vector i0_;
  std::vector<bool> row_mask_;
  Vector row_scale_;
  double floor_ = 0.0;
};

/// Relative floor below which an anchor row is masked: eps_cal = kCalibrationFloor * mean(I0).
inline constexpr double kCalibrationFloor = 1e-12;

/// Type-erased projector handed to the sketching algorithms.
class Projector {
 public:
  explicit Projector(DenseGaussianProjector p) : impl_(std::move(p)) {}
  explicit Projector(LinearizedProjector p) : impl_(std::move(p)) {}

  Matrix project(const Matrix& x, Execution exec = Execution::Parallel) const;

  /// The real matrix this projector applies (R or G).
  Matrix effective_matrix() const;

  const ProjectionConfig& config() const noexcept;
  std::size_t input_dim() const noexcept { return config().input_dim; }
  std::size_t output_dim() const noexcept { return config().output_dim; }
  Backend backend() const noexcept { return config().backend; }

  const DenseGaussianProjector* dense() const noexcept { return std::get_if<DenseGaussianProjector>(&impl_); }
  const LinearizedProjector* optical() const noexcept { return std::get_if<LinearizedProjector>(&impl_); }

 private:
  std::variant<DenseGaussianProjector, LinearizedProjector> impl_;
};

/// Deterministic in the config: equal configs give bit-identical projectors.
Projector build_projector(const ProjectionConfig& config);

/// Intensity percentile used for saturation calibration (linear interpolation
/// between order statistics).
double percentile(std::vector<double> values, double pct);

}  // namespace optisketch
