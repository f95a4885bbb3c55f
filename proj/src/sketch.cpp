#include "optisketch/sketch.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <string>

#include "optisketch/error.hpp"
#include "optisketch/kernels.hpp"

namespace optisketch {

namespace {

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double standard_error_of(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
}

void require_repeats(std::size_t repeats) {
  if (repeats == 0) throw ConfigError("repeats must be at least 1");
}

ProjectionConfig sized(ProjectionConfig c, std::size_t input_dim) {
  c.input_dim = input_dim;
  return c;
}

}  // namespace

LinearOperator::LinearOperator(std::size_t rows, std::size_t cols, Apply apply, Apply apply_transpose)
    : rows_(rows), cols_(cols), apply_(std::move(apply)), apply_transpose_(std::move(apply_transpose)) {
  if (rows == 0 || cols == 0) throw ConfigError("linear operator dimensions must be positive");
}

LinearOperator LinearOperator::from_matrix(Matrix a) {
  auto m = std::make_shared<const Matrix>(std::move(a));
  return LinearOperator(
      static_cast<std::size_t>(m->rows()), static_cast<std::size_t>(m->cols()),
      [m](const Matrix& x) -> Matrix { return (*m) * x; },
      [m](const Matrix& y) -> Matrix { return m->transpose() * y; });
}

Matrix LinearOperator::apply(const Matrix& x) const {
  if (static_cast<std::size_t>(x.rows()) != cols_) throw DimensionError("linear operator: apply to wrong row count");
  Matrix y = apply_(x);
  if (static_cast<std::size_t>(y.rows()) != rows_ || y.cols() != x.cols())
    throw DimensionError("linear operator: apply returned wrong shape");
  return y;
}

Matrix LinearOperator::apply_transpose(const Matrix& y) const {
  if (static_cast<std::size_t>(y.rows()) != rows_)
    throw DimensionError("linear operator: apply_transpose to wrong row count");
  Matrix x = apply_transpose_(y);
  if (static_cast<std::size_t>(x.rows()) != cols_ || x.cols() != y.cols())
    throw DimensionError("linear operator: apply_transpose returned wrong shape");
  return x;
}

ProjectionConfig repeat_config(const ProjectionConfig& base, std::size_t repeat) {
  return base.with_stream(base.stream + static_cast<std::uint32_t>(repeat));
}

// ---------------------------------------------------------------------------

Sketch sketch_matrix(const Matrix& a, const Projector& projector, Execution exec) {
  if (static_cast<std::size_t>(a.rows()) != projector.input_dim())
    throw DimensionError("sketch_matrix: matrix has " + std::to_string(a.rows()) + " rows, projector expects " +
                         std::to_string(projector.input_dim()));
  const auto& c = projector.config();
  return {projector.project(a, exec), c.input_dim, c.output_dim, c.backend, c.seed, c.stream};
}

MatmulEstimate sketched_matmul(const Matrix& a, const Matrix& b, const ProjectionConfig& base, std::size_t repeats) {
  require_repeats(repeats);
  if (a.rows() != b.rows()) throw DimensionError("sketched_matmul: A and B have different row counts");
  const auto config = sized(base, static_cast<std::size_t>(a.rows()));

  MatmulEstimate est;
  est.repeats = repeats;
  est.value = Matrix::Zero(a.cols(), b.cols());
  for (std::size_t r = 0; r < repeats; ++r) {
    const Projector p = build_projector(repeat_config(config, r));
    const Matrix sa = p.project(a);
    const Matrix sb = p.project(b);
    est.per_repeat.push_back(sa.transpose() * sb);
    est.value += est.per_repeat.back();
  }
  est.value /= static_cast<double>(repeats);

  est.standard_error = Matrix::Zero(a.cols(), b.cols());
  if (repeats > 1) {
    for (const auto& m : est.per_repeat) est.standard_error += (m - est.value).cwiseAbs2();
    est.standard_error =
        (est.standard_error / static_cast<double>(repeats - 1)).cwiseSqrt() / std::sqrt(static_cast<double>(repeats));
  }
  return est;
}

// ---------------------------------------------------------------------------

TraceEstimate trace_estimate(const LinearOperator& a, const ProjectionConfig& base, std::size_t repeats,
                             std::size_t row_batch) {
  require_repeats(repeats);
  if (a.rows() != a.cols()) throw DimensionError("trace_estimate: operator is not square");
  if (row_batch == 0) throw ConfigError("trace_estimate: row batch must be positive");
  const std::size_t n = a.cols();
  const auto config = sized(base, n);
  const Matrix identity = Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

  TraceEstimate est;
  est.repeats = repeats;
  for (std::size_t r = 0; r < repeats; ++r) {
    const Projector p = build_projector(repeat_config(config, r));
    // rows of R as columns, read back from the backend through the basis vectors
    const Matrix rows = p.project(identity).transpose();
    double total = 0.0;
    for (Eigen::Index start = 0; start < rows.cols(); start += static_cast<Eigen::Index>(row_batch)) {
      const Eigen::Index width = std::min<Eigen::Index>(static_cast<Eigen::Index>(row_batch), rows.cols() - start);
      const Matrix batch = rows.middleCols(start, width);
      const Vector quad = kernels::column_dots(batch, a.apply(batch), Execution::Parallel);
      for (Eigen::Index i = 0; i < quad.size(); ++i) total += quad[i];
    }
    est.per_repeat.push_back(total);
  }
  est.value = mean_of(est.per_repeat);
  est.standard_error = standard_error_of(est.per_repeat, est.value);
  return est;
}

TraceEstimate trace_estimate(const Matrix& a, const ProjectionConfig& base, std::size_t repeats) {
  if (a.rows() != a.cols()) throw DimensionError("trace_estimate: matrix is not square");
  return trace_estimate(LinearOperator::from_matrix(a), base, repeats);
}

// ---------------------------------------------------------------------------

void validate_adjacency(const Matrix& a) {
  if (a.rows() != a.cols()) throw ConfigError("adjacency matrix is not square");
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const double v = a(i, j);
      if (v != 0.0 && v != 1.0) throw ConfigError("adjacency matrix is not binary");
      if (v != a(j, i)) throw ConfigError("adjacency matrix is not symmetric");
    }
    if (a(j, j) != 0.0) throw ConfigError("adjacency matrix has a nonzero diagonal");
  }
}

TriangleEstimate triangle_estimate(const Matrix& adjacency, const ProjectionConfig& base, std::size_t repeats,
                                   TriangleOptions options) {
  require_repeats(repeats);
  validate_adjacency(adjacency);
  const auto config = sized(base, static_cast<std::size_t>(adjacency.rows()));

  // R_a A R_b^T, using A = A^T
  const auto cross = [&adjacency](const Projector& left, const Projector& right) -> Matrix {
    const Matrix right_sketch = right.project(adjacency);        // R_b A
    return left.project(right_sketch.transpose());               // R_a A R_b^T
  };

  TriangleEstimate est;
  est.repeats = repeats;
  for (std::size_t r = 0; r < repeats; ++r) {
    double value = 0.0;
    if (!options.independent_projectors) {
      const Projector p = build_projector(repeat_config(config, r));
      const Matrix s = cross(p, p);
      value = kernels::trace_of_product3(s, s, s, Execution::Parallel);
    } else {
      const Projector p1 = build_projector(repeat_config(config, 3 * r));
      const Projector p2 = build_projector(repeat_config(config, 3 * r + 1));
      const Projector p3 = build_projector(repeat_config(config, 3 * r + 2));
      value = kernels::trace_of_product3(cross(p1, p2), cross(p2, p3), cross(p3, p1), Execution::Parallel);
    }
    est.per_repeat.push_back(value);
  }
  const double mean = mean_of(est.per_repeat);
  // reported trace is 6 * count exactly; it differs from the mean by at most one ulp
  est.triangle_count_estimate = mean / 6.0;
  est.trace_cubed_estimate = est.triangle_count_estimate * 6.0;
  est.standard_error = standard_error_of(est.per_repeat, mean);
  return est;
}

// ---------------------------------------------------------------------------

Matrix orthonormalize(const Matrix& y) {
  const double scale = y.size() == 0 ? 0.0 : y.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) throw RankCollapseError("range finder: sketch Y is numerically zero");
  Eigen::ColPivHouseholderQR<Matrix> qr(y);
  qr.setThreshold(kRankTolerance);
  const auto& r = qr.matrixR();
  const Eigen::Index diag = std::min(y.rows(), y.cols());
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < diag; ++i)
    if (std::abs(r(i, i)) > kRankTolerance * scale) ++rank;
  if (rank == 0) throw RankCollapseError("range finder: sketch Y is numerically zero");
  Matrix q = qr.householderQ() * Matrix::Identity(y.rows(), diag);
  return q;
}

Matrix range_finder(const LinearOperator& a, const ProjectionConfig& config, std::size_t power_iterations) {
  if (config.input_dim != a.cols())
    throw DimensionError("range_finder: projector input dimension " + std::to_string(config.input_dim) +
                         " differs from operator width " + std::to_string(a.cols()));
  const Projector p = build_projector(config);
  const auto n = static_cast<Eigen::Index>(a.cols());
  const Matrix rt = p.project(Matrix::Identity(n, n)).transpose();  // R^T, n2 x m
  Matrix q = orthonormalize(a.apply(rt));
  for (std::size_t it = 0; it < power_iterations; ++it) {
    const Matrix z = orthonormalize(a.apply_transpose(q));
    q = orthonormalize(a.apply(z));
  }
  return q;
}

SvdResult randomized_svd(const LinearOperator& a, const SvdOptions& options, const ProjectionConfig& base) {
  if (options.rank == 0) throw ConfigError("randomized_svd: target rank must be at least 1");
  const std::size_t m = options.rank + options.oversampling;
  if (m > std::min(a.rows(), a.cols()))
    throw ConfigError("randomized_svd: rank + oversampling = " + std::to_string(m) + " exceeds min(" +
                      std::to_string(a.rows()) + ", " + std::to_string(a.cols()) + ")");
  ProjectionConfig config = base;
  config.input_dim = a.cols();
  config.output_dim = m;

  const Matrix q = range_finder(a, config, options.power_iterations);
  const Matrix small = a.apply_transpose(q).transpose();  // Q^T A
  Eigen::JacobiSVD<Matrix> svd(small, Eigen::ComputeThinU | Eigen::ComputeThinV);

  const auto k = static_cast<Eigen::Index>(options.rank);
  SvdResult result;
  result.u = q * svd.matrixU().leftCols(k);
  result.s = svd.singularValues().head(k);
  result.v = svd.matrixV().leftCols(k);
  result.sketch_size = m;
  result.oversampling = options.oversampling;
  result.power_iterations = options.power_iterations;
  return result;
}

SvdResult randomized_svd(const Matrix& a, const SvdOptions& options, const ProjectionConfig& base) {
  return randomized_svd(LinearOperator::from_matrix(a), options, base);
}

}  // namespace optisketch
