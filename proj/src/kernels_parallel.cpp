#include <omp.h>

#include <vector>

#include "kernel_bodies.hpp"
#include "optisketch/error.hpp"
#include "optisketch/kernels.hpp"

namespace optisketch::kernels::parallel {

void fill_gaussian(const CounterStream& stream, double stddev, Matrix& out) {
  const std::int64_t size = out.size();
  double* data = out.data();
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < (size + 1) / 2; ++b) detail::gaussian_block(stream, stddev, data, size, b);
}

void fill_complex_gaussian(const CounterStream& stream, double component_stddev, ComplexMatrix& out) {
  const std::int64_t size = out.size();
  auto* data = out.data();
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < size; ++k) detail::complex_gaussian_entry(stream, component_stddev, data, k);
}

Matrix matmul(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.cols() != rhs.rows()) throw DimensionError("matmul: inner dimensions differ");
  Matrix out(lhs.rows(), rhs.cols());
  const Eigen::Index cols = rhs.cols();
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < cols; ++j) detail::matmul_column(lhs, rhs, out, j);
  return out;
}

Matrix intensities(const ComplexMatrix& field, const BinaryMatrix& inputs) {
  if (field.cols() != inputs.rows()) throw DimensionError("intensities: input length differs from field width");
  Matrix out(field.rows(), inputs.cols());
  const Eigen::Index cols = inputs.cols();
#pragma omp parallel
  {
    ComplexVector acc(field.rows());
#pragma omp for schedule(static)
    for (Eigen::Index j = 0; j < cols; ++j) detail::intensity_column(field, inputs, out, acc, j);
  }
  return out;
}

void interference_intensities(const ComplexMatrix& field, const ComplexVector& reference,
                              const BinaryMatrix& planes, Matrix& signal, Matrix& mixed) {
  if (field.cols() != planes.rows() || reference.size() != field.rows())
    throw DimensionError("interference_intensities: shape mismatch");
  signal.resize(field.rows(), planes.cols());
  mixed.resize(field.rows(), planes.cols());
  const Eigen::Index cols = planes.cols();
#pragma omp parallel
  {
    ComplexVector acc(field.rows());
#pragma omp for schedule(static)
    for (Eigen::Index j = 0; j < cols; ++j)
      detail::interference_column(field, reference, planes, signal, mixed, acc, j);
  }
}

Vector column_dots(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) throw DimensionError("column_dots: shape mismatch");
  Vector out(lhs.cols());
  const Eigen::Index cols = lhs.cols();
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < cols; ++j) out[j] = detail::column_dot(lhs, rhs, j);
  return out;
}

double trace_of_product3(const Matrix& a, const Matrix& b, const Matrix& c) {
  if (a.cols() != b.rows() || b.cols() != c.rows() || c.cols() != a.rows())
    throw DimensionError("trace_of_product3: shape mismatch");
  const Eigen::Index cols = b.cols();
  std::vector<double> partial(static_cast<std::size_t>(cols));
#pragma omp parallel
  {
    Vector tmp(a.rows());
#pragma omp for schedule(static)
    for (Eigen::Index j = 0; j < cols; ++j) partial[static_cast<std::size_t>(j)] = detail::trace3_column(a, b, c, tmp, j);
  }
  // summed in column order, same as the serial kernel
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace optisketch::kernels::parallel
