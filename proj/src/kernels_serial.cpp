#include "kernel_bodies.hpp"
#include "optisketch/error.hpp"
#include "optisketch/kernels.hpp"

namespace optisketch::kernels {

namespace serial {

void fill_gaussian(const CounterStream& stream, double stddev, Matrix& out) {
  const std::int64_t size = out.size();
  for (std::int64_t b = 0; b < (size + 1) / 2; ++b) detail::gaussian_block(stream, stddev, out.data(), size, b);
}

void fill_complex_gaussian(const CounterStream& stream, double component_stddev, ComplexMatrix& out) {
  const std::int64_t size = out.size();
  for (std::int64_t k = 0; k < size; ++k) detail::complex_gaussian_entry(stream, component_stddev, out.data(), k);
}

Matrix matmul(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.cols() != rhs.rows()) throw DimensionError("matmul: inner dimensions differ");
  Matrix out(lhs.rows(), rhs.cols());
  for (Eigen::Index j = 0; j < rhs.cols(); ++j) detail::matmul_column(lhs, rhs, out, j);
  return out;
}

Matrix intensities(const ComplexMatrix& field, const BinaryMatrix& inputs) {
  if (field.cols() != inputs.rows()) throw DimensionError("intensities: input length differs from field width");
  Matrix out(field.rows(), inputs.cols());
  ComplexVector acc(field.rows());
  for (Eigen::Index j = 0; j < inputs.cols(); ++j) detail::intensity_column(field, inputs, out, acc, j);
  return out;
}

void interference_intensities(const ComplexMatrix& field, const ComplexVector& reference,
                              const BinaryMatrix& planes, Matrix& signal, Matrix& mixed) {
  if (field.cols() != planes.rows() || reference.size() != field.rows())
    throw DimensionError("interference_intensities: shape mismatch");
  signal.resize(field.rows(), planes.cols());
  mixed.resize(field.rows(), planes.cols());
  ComplexVector acc(field.rows());
  for (Eigen::Index j = 0; j < planes.cols(); ++j)
    detail::interference_column(field, reference, planes, signal, mixed, acc, j);
}

Vector column_dots(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) throw DimensionError("column_dots: shape mismatch");
  Vector out(lhs.cols());
  for (Eigen::Index j = 0; j < lhs.cols(); ++j) out[j] = detail::column_dot(lhs, rhs, j);
  return out;
}

double trace_of_product3(const Matrix& a, const Matrix& b, const Matrix& c) {
  if (a.cols() != b.rows() || b.cols() != c.rows() || c.cols() != a.rows())
    throw DimensionError("trace_of_product3: shape mismatch");
  Vector tmp(a.rows());
  double total = 0.0;
  for (Eigen::Index j = 0; j < b.cols(); ++j) total += detail::trace3_column(a, b, c, tmp, j);
  return total;
}

}  // namespace serial

#define OPTISKETCH_DISPATCH(call) \
  (exec == Execution::Serial ? serial::call : parallel::call)

void fill_gaussian(const CounterStream& stream, double stddev, Matrix& out, Execution exec) {
  OPTISKETCH_DISPATCH(fill_gaussian(stream, stddev, out));
}

void fill_complex_gaussian(const CounterStream& stream, double component_stddev, ComplexMatrix& out,
                           Execution exec) {
  OPTISKETCH_DISPATCH(fill_complex_gaussian(stream, component_stddev, out));
}

Matrix matmul(const Matrix& lhs, const Matrix& rhs, Execution exec) {
  return OPTISKETCH_DISPATCH(matmul(lhs, rhs));
}

Matrix intensities(const ComplexMatrix& field, const BinaryMatrix& inputs, Execution exec) {
  return OPTISKETCH_DISPATCH(intensities(field, inputs));
}

void interference_intensities(const ComplexMatrix& field, const ComplexVector& reference,
                              const BinaryMatrix& planes, Matrix& signal, Matrix& mixed,
                              Execution exec) {
  OPTISKETCH_DISPATCH(interference_intensities(field, reference, planes, signal, mixed));
}

Vector column_dots(const Matrix& lhs, const Matrix& rhs, Execution exec) {
  return OPTISKETCH_DISPATCH(column_dots(lhs, rhs));
}

double trace_of_product3(const Matrix& a, const Matrix& b, const Matrix& c, Execution exec) {
  return OPTISKETCH_DISPATCH(trace_of_product3(a, b, c));
}

#undef OPTISKETCH_DISPATCH

}  // namespace optisketch::kernels
