#include "optisketch/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "optisketch/bitplane.hpp"
#include "optisketch/error.hpp"
#include "optisketch/kernels.hpp"

namespace optisketch {

namespace {

constexpr std::size_t kPilotBatch = 64;
constexpr Eigen::Index kColumnChunk = 64;

void check_binary(std::span<const std::uint8_t> x) {
  for (std::uint8_t v : x)
    if (v > 1) throw NonBinaryInputError("optical device input must be binary");
}

void check_binary(const BinaryMatrix& x) {
  check_binary(std::span<const std::uint8_t>(x.data(), static_cast<std::size_t>(x.size())));
}

}  // namespace

std::string to_string(Backend b) { return b == Backend::DenseGaussian ? "dense" : "optical"; }

std::string to_string(AnchorPolicy p) { return p == AnchorPolicy::AllOnes ? "all-ones" : "random-binary"; }

Backend backend_from_string(const std::string& s) {
  if (s == "dense") return Backend::DenseGaussian;
  if (s == "optical") return Backend::OpticalLinearized;
  throw ConfigError("unknown backend '" + s + "' (expected dense or optical)");
}

AnchorPolicy anchor_policy_from_string(const std::string& s) {
  if (s == "all-ones") return AnchorPolicy::AllOnes;
  if (s == "random-binary") return AnchorPolicy::RandomBinary;
  throw ConfigError("unknown anchor policy '" + s + "'");
}

std::uint32_t ReadoutQuantization::level(double intensity) const noexcept {
  const double top = static_cast<double>(levels - 1);
  if (!(intensity > 0.0)) return 0;
  if (intensity >= saturation_value) return levels - 1;
  return static_cast<std::uint32_t>(std::min(top, std::round(intensity / saturation_value * top)));
}

double ReadoutQuantization::dequantize(std::uint32_t lvl) const noexcept {
  return static_cast<double>(lvl) * saturation_value / static_cast<double>(levels - 1);
}

double ReadoutQuantization::apply(double intensity) const noexcept { return dequantize(level(intensity)); }

void ProjectionConfig::validate() const {
  if (input_dim == 0) throw ConfigError("projection input dimension must be positive");
  if (output_dim == 0) throw ConfigError("projection output dimension must be positive");
  if (bit_depth < 1 || bit_depth > kMaxBitDepth)
    throw ConfigError("bit depth must be in [1, " + std::to_string(kMaxBitDepth) + "]");
  if (quantization) {
    if (quantization->levels < 2) throw ConfigError("readout quantization needs at least 2 levels");
    if (!std::isfinite(quantization->saturation_value)) throw ConfigError("saturation value must be finite");
    if (!(quantization->calibration_percentile > 0.0 && quantization->calibration_percentile <= 100.0))
      throw ConfigError("calibration percentile must be in (0, 100]");
  }
}

double percentile(std::vector<double> values, double pct) {
  if (values.empty()) throw ConfigError("percentile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = pct / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

// ---------------------------------------------------------------------------

DenseGaussianProjector::DenseGaussianProjector(const ProjectionConfig& config) : config_(config) {
  config_.validate();
  r_.resize(static_cast<Eigen::Index>(config_.output_dim), static_cast<Eigen::Index>(config_.input_dim));
  const double stddev = 1.0 / std::sqrt(static_cast<double>(config_.output_dim));
  kernels::fill_gaussian(CounterStream(config_.key(Purpose::DenseMatrix)), stddev, r_, Execution::Serial);
}

Matrix DenseGaussianProjector::project(const Matrix& x, Execution exec) const {
  if (x.rows() != r_.cols())
    throw DimensionError("project_dense: input has " + std::to_string(x.rows()) + " rows, projector expects " +
                         std::to_string(r_.cols()));
  return kernels::matmul(r_, x, exec);
}

// ---------------------------------------------------------------------------

OpticalTransform::OpticalTransform(std::size_t input_dim, std::size_t anchor_dim, std::size_t output_dim,
                                   StreamKey key, std::optional<ReadoutQuantization> quantization)
    : input_dim_(input_dim), anchor_dim_(anchor_dim), quantization_(quantization) {
  if (input_dim == 0 || output_dim == 0) throw ConfigError("optical transform dimensions must be positive");
  c_.resize(static_cast<Eigen::Index>(output_dim), static_cast<Eigen::Index>(input_dim + anchor_dim));
  // per-component variance 1/(2m), total 1/m
  const double stddev = 1.0 / std::sqrt(2.0 * static_cast<double>(output_dim));
  kernels::fill_complex_gaussian(CounterStream(key), stddev, c_, Execution::Serial);
  data_ = data_block();
}

void OpticalTransform::apply_readout(Matrix& intensities) const {
  if (!quantization_) return;
  const auto& q = *quantization_;
  intensities = intensities.unaryExpr([&q](double v) { return q.apply(v); });
}

Vector OpticalTransform::transform(std::span<const std::uint8_t> x) const {
  if (x.size() != width())
    throw DimensionError("optical transform: input length " + std::to_string(x.size()) + ", expected " +
                         std::to_string(width()));
  check_binary(x);
  BinaryMatrix in = Eigen::Map<const BinaryVector>(x.data(), static_cast<Eigen::Index>(x.size()));
  Matrix out = kernels::intensities(c_, in, Execution::Serial);
  apply_readout(out);
  return out.col(0);
}

std::vector<std::uint32_t> OpticalTransform::levels(std::span<const std::uint8_t> x) const {
  if (!quantization_) throw ConfigError("optical transform: levels() requires readout quantization");
  if (x.size() != width()) throw DimensionError("optical transform: wrong input length");
  check_binary(x);
  BinaryMatrix in = Eigen::Map<const BinaryVector>(x.data(), static_cast<Eigen::Index>(x.size()));
  const Matrix raw = kernels::intensities(c_, in, Execution::Serial);
  std::vector<std::uint32_t> out(static_cast<std::size_t>(raw.rows()));
  for (Eigen::Index i = 0; i < raw.rows(); ++i) out[static_cast<std::size_t>(i)] = quantization_->level(raw(i, 0));
  return out;
}

Matrix OpticalTransform::transform_batch(const BinaryMatrix& inputs, Execution exec) const {
  if (static_cast<std::size_t>(inputs.rows()) != width()) throw DimensionError("optical transform: wrong input length");
  check_binary(inputs);
  Matrix out = kernels::intensities(c_, inputs, exec);
  apply_readout(out);
  return out;
}

void OpticalTransform::transform_with_anchor(const BinaryMatrix& planes, const BinaryVector& anchor,
                                             Matrix& signal, Matrix& mixed, Execution exec) const {
  if (static_cast<std::size_t>(planes.rows()) != input_dim_ || static_cast<std::size_t>(anchor.size()) != anchor_dim_)
    throw DimensionError("optical transform: wrong data or anchor length");
  check_binary(planes);
  check_binary(std::span<const std::uint8_t>(anchor.data(), static_cast<std::size_t>(anchor.size())));
  // field of the anchor block, identical for every input of the batch
  ComplexVector reference = ComplexVector::Zero(c_.rows());
  for (Eigen::Index p = 0; p < anchor.size(); ++p)
    if (anchor[p] != 0) reference += c_.col(static_cast<Eigen::Index>(input_dim_) + p);
  kernels::interference_intensities(data_, reference, planes, signal, mixed, exec);
  apply_readout(signal);
  apply_readout(mixed);
}

// ---------------------------------------------------------------------------

LinearizedProjector::LinearizedProjector(const ProjectionConfig& config)
    : config_(config),
      transform_((config.validate(), config.input_dim), config.effective_anchor_dim(), config.output_dim,
                 config.key(Purpose::OpticalMatrix)) {
  const auto n_a = static_cast<Eigen::Index>(config_.effective_anchor_dim());
  anchor_.resize(n_a);
  if (config_.anchor_policy == AnchorPolicy::AllOnes) {
    anchor_.setOnes();
  } else {
    const CounterStream rng(config_.key(Purpose::Anchor));
    for (Eigen::Index i = 0; i < n_a; ++i) anchor_[i] = rng.bit(static_cast<std::uint64_t>(i)) ? 1 : 0;
  }

  if (config_.quantization) {
    ReadoutQuantization q = *config_.quantization;
    if (q.saturation_value <= 0.0) {
      // pilot batch of half-density random planes, measured without quantization
      const auto n = static_cast<Eigen::Index>(config_.input_dim);
      BinaryMatrix pilot(n, static_cast<Eigen::Index>(kPilotBatch));
      const CounterStream rng(config_.key(Purpose::Pilot));
      for (Eigen::Index k = 0; k < pilot.size(); ++k) pilot.data()[k] = rng.bit(static_cast<std::uint64_t>(k)) ? 1 : 0;
      Matrix signal, mixed;
      transform_.transform_with_anchor(pilot, anchor_, signal, mixed, Execution::Serial);
      std::vector<double> sample(mixed.data(), mixed.data() + mixed.size());
      q.saturation_value = percentile(std::move(sample), q.calibration_percentile);
      if (!(q.saturation_value > 0.0)) throw CalibrationError("pilot batch produced no light; cannot set saturation");
      config_.quantization = q;
    }
    transform_.set_quantization(q);
  }

  BinaryVector probe = BinaryVector::Zero(static_cast<Eigen::Index>(transform_.width()));
  probe.tail(n_a) = anchor_;
  i0_ = transform_.transform(std::span<const std::uint8_t>(probe.data(), static_cast<std::size_t>(probe.size())));

  floor_ = kCalibrationFloor * i0_.mean();
  row_mask_.assign(static_cast<std::size_t>(i0_.size()), false);
  row_scale_ = Vector::Zero(i0_.size());
  bool any = false;
  for (Eigen::Index i = 0; i < i0_.size(); ++i) {
    if (i0_[i] > floor_) {
      row_mask_[static_cast<std::size_t>(i)] = true;
      row_scale_[i] = 1.0 / std::sqrt(2.0 * i0_[i]);
      any = true;
    }
  }
  if (!any) throw CalibrationError("anchor calibration failed: every row is below the calibration floor");
}

Matrix LinearizedProjector::project_planes(const BinaryMatrix& planes, Execution exec) const {
  if (static_cast<std::size_t>(planes.rows()) != config_.input_dim)
    throw DimensionError("project_linear: input has " + std::to_string(planes.rows()) + " rows, projector expects " +
                         std::to_string(config_.input_dim));
  Matrix signal, mixed;
  transform_.transform_with_anchor(planes, anchor_, signal, mixed, exec);
  Matrix g(mixed.rows(), mixed.cols());
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i)
      g(i, j) = row_mask_[static_cast<std::size_t>(i)] ? (mixed(i, j) - signal(i, j) - i0_[i]) * row_scale_[i] : 0.0;
  return g;
}

Vector LinearizedProjector::project_linear(std::span<const std::uint8_t> b) const {
  if (b.size() != config_.input_dim) throw DimensionError("project_linear: wrong input length");
  BinaryMatrix plane = Eigen::Map<const BinaryVector>(b.data(), static_cast<Eigen::Index>(b.size()));
  return project_planes(plane, Execution::Serial).col(0);
}

Matrix LinearizedProjector::project(const Matrix& x, int bits, Execution exec) const {
  if (static_cast<std::size_t>(x.rows()) != config_.input_dim)
    throw DimensionError("project_linearized: input has " + std::to_string(x.rows()) + " rows, projector expects " +
                         std::to_string(config_.input_dim));
  const double global_scale = config_.per_column_scale ? 0.0 : bitplane_scale(x, bits);
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(config_.output_dim), x.cols());

  for (Eigen::Index start = 0; start < x.cols(); start += kColumnChunk) {
    const Eigen::Index stop = std::min(x.cols(), start + kColumnChunk);
    std::vector<BitPlaneEncoding> encodings;
    Eigen::Index total = 0;
    for (Eigen::Index j = start; j < stop; ++j) {
      encodings.push_back(config_.per_column_scale ? encode_bitplanes(x.col(j), bits)
                                                   : encode_bitplanes(x.col(j), bits, global_scale));
      total += encodings.back().plane_count();
    }
    if (total == 0) continue;
    BinaryMatrix planes(x.rows(), total);
    Eigen::Index offset = 0;
    for (const auto& enc : encodings) {
      planes.middleCols(offset, enc.plane_count()) = enc.planes;
      offset += enc.plane_count();
    }
    const Matrix g = project_planes(planes, exec);
    offset = 0;
    for (Eigen::Index j = start; j < stop; ++j) {
      const auto& enc = encodings[static_cast<std::size_t>(j - start)];
      auto col = out.col(j);
      for (Eigen::Index k = 0; k < enc.plane_count(); ++k)
        col += enc.weights[static_cast<std::size_t>(k)] * g.col(offset + k);
      col *= enc.scale;
      offset += enc.plane_count();
    }
  }
  return out;
}

Matrix LinearizedProjector::effective_matrix() const {
  const auto& c = transform_.matrix();
  const auto n = static_cast<Eigen::Index>(config_.input_dim);
  ComplexVector u = ComplexVector::Zero(c.rows());
  for (Eigen::Index p = 0; p < anchor_.size(); ++p)
    if (anchor_[p] != 0) u += c.col(n + p);
  Matrix g = Matrix::Zero(c.rows(), n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < c.rows(); ++i)
      if (row_mask_[static_cast<std::size_t>(i)]) g(i, j) = 2.0 * (std::conj(u[i]) * c(i, j)).real() * row_scale_[i];
  return g;
}

// ---------------------------------------------------------------------------

Matrix Projector::project(const Matrix& x, Execution exec) const {
  return std::visit([&](const auto& p) { return p.project(x, exec); }, impl_);
}

Matrix Projector::effective_matrix() const {
  if (const auto* d = dense()) return d->matrix();
  return optical()->effective_matrix();
}

const ProjectionConfig& Projector::config() const noexcept {
  return std::visit([](const auto& p) -> const ProjectionConfig& { return p.config(); }, impl_);
}

Projector build_projector(const ProjectionConfig& config) {
  config.validate();
  if (config.backend == Backend::DenseGaussian) return Projector(DenseGaussianProjector(config));
  return Projector(LinearizedProjector(config));
}

}  // namespace optisketch
