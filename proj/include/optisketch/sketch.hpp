#pragma once

// Randomized linear algebra on top of any projection backend: sketched matrix
// products, Hutchinson trace estimation, triangle estimation, and randomized
// SVD.
//
// Algorithms that average over `repeats` draw one independent projector per
// repeat by advancing the config's stream index; see repeat_config().
// Per-repeat values are reduced in repeat order, so results do not depend on
// the number of threads.

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "optisketch/projection.hpp"
#include "optisketch/types.hpp"

namespace optisketch {

/// Black-box linear map R^cols -> R^rows, applied to blocks of column vectors.
class LinearOperator {
 public:
  using Apply = std::function<Matrix(const Matrix&)>;

  LinearOperator(std::size_t rows, std::size_t cols, Apply apply, Apply apply_transpose);

  /// Wraps a dense matrix (copied and shared).
  static LinearOperator from_matrix(Matrix a);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Matrix apply(const Matrix& x) const;
  Matrix apply_transpose(const Matrix& y) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  Apply apply_;
  Apply apply_transpose_;
};

/// Projector config used for repeat `r` of an averaged estimate.
ProjectionConfig repeat_config(const ProjectionConfig& base, std::size_t repeat);

struct Sketch {
  Matrix data;  // m x k, the projected columns
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;
  Backend backend = Backend::DenseGaussian;
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;
};

Sketch sketch_matrix(const Matrix& a, const Projector& projector, Execution exec = Execution::Parallel);

struct MatmulEstimate {
  Matrix value;           // mean over repeats of (RA)^T (RB)
  Matrix standard_error;  // entrywise
  std::size_t repeats = 0;
  std::vector<Matrix> per_repeat;
};

/// Estimates A^T B with (RA)^T (RB); unbiased under the dense backend.
MatmulEstimate sketched_matmul(const Matrix& a, const Matrix& b, const ProjectionConfig& base,
                               std::size_t repeats = 1);

struct TraceEstimate {
  double value = 0.0;
  std::size_t repeats = 0;
  std::vector<double> per_repeat;
  double standard_error = 0.0;
};

/// Hutchinson estimate Tr(R A R^T) = sum_i <r_i, A r_i>, evaluated a batch of
/// projector rows at a time so R A R^T is never formed.
TraceEstimate trace_estimate(const LinearOperator& a, const ProjectionConfig& base, std::size_t repeats = 1,
                             std::size_t row_batch = 64);
TraceEstimate trace_estimate(const Matrix& a, const ProjectionConfig& base, std::size_t repeats = 1);

struct TriangleOptions {
  /// Use three independent projectors per repeat instead of one shared R.
  bool independent_projectors = false;
};

struct TriangleEstimate {
  double trace_cubed_estimate = 0.0;
  double triangle_count_estimate = 0.0;  // trace_cubed_estimate / 6
  std::size_t repeats = 0;
  std::vector<double> per_repeat;  // Tr(S^3) per repeat
  double standard_error = 0.0;     // of trace_cubed_estimate
};

/// Throws ConfigError unless `a` is square, symmetric, 0/1 and has a zero diagonal.
void validate_adjacency(const Matrix& a);

/// Estimates Tr(A^3) of a graph adjacency as Tr((R A R^T)^3).
TriangleEstimate triangle_estimate(const Matrix& adjacency, const ProjectionConfig& base, std::size_t repeats = 1,
                                   TriangleOptions options = {});

/// Orthonormal basis (columns) of the column space of y via pivoted QR.
/// Throws RankCollapseError when y is numerically zero.
Matrix orthonormalize(const Matrix& y);

/// Relative diagonal threshold used by orthonormalize() to detect rank collapse.
inline constexpr double kRankTolerance = 1e-12;

/// Q with orthonormal columns such that A ≈ Q Q^T A, from Y = A R^T and
/// `power_iterations` rounds of Y <- A (A^T Y) with re-orthonormalization
/// after every half step. `config.input_dim` must equal a.cols().
Matrix range_finder(const LinearOperator& a, const ProjectionConfig& config, std::size_t power_iterations = 0);

struct SvdOptions {
  std::size_t rank = 1;  // k
  std::size_t oversampling = 10;
  std::size_t power_iterations = 0;
};

struct SvdResult {
  Matrix u;  // n1 x k
  Vector s;  // k, nonincreasing
  Matrix v;  // n2 x k
  std::size_t sketch_size = 0;
  std::size_t oversampling = 0;
  std::size_t power_iterations = 0;

  Matrix reconstruct() const { return u * s.asDiagonal() * v.transpose(); }
};

/// Randomized SVD with sketch size m = rank + oversampling. Only seed/stream
/// and backend settings are taken from `base`; dimensions come from `a`.
SvdResult randomized_svd(const LinearOperator& a, const SvdOptions& options, const ProjectionConfig& base);
SvdResult randomized_svd(const Matrix& a, const SvdOptions& options, const ProjectionConfig& base);

}  // namespace optisketch
