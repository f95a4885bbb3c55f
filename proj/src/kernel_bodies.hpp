#pragma once

// Per-column loop bodies. The serial and OpenMP kernels call exactly these,
// which is what makes their outputs bit-identical.

#include <complex>
#include <cstdint>

#include "optisketch/rng.hpp"
#include "optisketch/types.hpp"

namespace optisketch::kernels::detail {

inline void gaussian_block(const CounterStream& stream, double stddev, double* out, std::int64_t size,
                           std::int64_t block) {
  const auto z = stream.normal_pair(static_cast<std::uint64_t>(block));
  const std::int64_t k = 2 * block;
  out[k] = stddev * z[0];
  if (k + 1 < size) out[k + 1] = stddev * z[1];
}

inline void complex_gaussian_entry(const CounterStream& stream, double stddev, std::complex<double>* out,
                                   std::int64_t k) {
  const auto z = stream.normal_pair(static_cast<std::uint64_t>(k));
  out[k] = {stddev * z[0], stddev * z[1]};
}

inline void matmul_column(const Matrix& lhs, const Matrix& rhs, Matrix& out, Eigen::Index j) {
  const Eigen::Index rows = lhs.rows();
  double* dst = out.col(j).data();
  for (Eigen::Index i = 0; i < rows; ++i) dst[i] = 0.0;
  for (Eigen::Index p = 0; p < lhs.cols(); ++p) {
    const double a = rhs(p, j);
    if (a == 0.0) continue;
    const double* src = lhs.col(p).data();
    for (Eigen::Index i = 0; i < rows; ++i) dst[i] += a * src[i];
  }
}

inline void accumulate_field(const ComplexMatrix& field, const std::uint8_t* x, std::complex<double>* acc) {
  const Eigen::Index rows = field.rows();
  for (Eigen::Index i = 0; i < rows; ++i) acc[i] = 0.0;
  for (Eigen::Index p = 0; p < field.cols(); ++p) {
    if (x[p] == 0) continue;
    const std::complex<double>* src = field.col(p).data();
    for (Eigen::Index i = 0; i < rows; ++i) acc[i] += src[i];
  }
}

inline void intensity_column(const ComplexMatrix& field, const BinaryMatrix& inputs, Matrix& out,
                             ComplexVector& acc, Eigen::Index j) {
  accumulate_field(field, inputs.col(j).data(), acc.data());
  for (Eigen::Index i = 0; i < field.rows(); ++i) out(i, j) = std::norm(acc[i]);
}

inline void interference_column(const ComplexMatrix& field, const ComplexVector& reference,
                                const BinaryMatrix& planes, Matrix& signal, Matrix& mixed,
                                ComplexVector& acc, Eigen::Index j) {
  accumulate_field(field, planes.col(j).data(), acc.data());
  for (Eigen::Index i = 0; i < field.rows(); ++i) {
    signal(i, j) = std::norm(acc[i]);
    mixed(i, j) = std::norm(acc[i] + reference[i]);
  }
}

inline double column_dot(const Matrix& lhs, const Matrix& rhs, Eigen::Index j) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < lhs.rows(); ++i) s += lhs(i, j) * rhs(i, j);
  return s;
}

// Returns sum_i (a b)(i, j) * c(j, i); `tmp` holds column j of a b.
inline double trace3_column(const Matrix& a, const Matrix& b, const Matrix& c, Vector& tmp,
                            Eigen::Index j) {
  const Eigen::Index rows = a.rows();
  for (Eigen::Index i = 0; i < rows; ++i) tmp[i] = 0.0;
  for (Eigen::Index p = 0; p < a.cols(); ++p) {
    const double w = b(p, j);
    if (w == 0.0) continue;
    const double* src = a.col(p).data();
    for (Eigen::Index i = 0; i < rows; ++i) tmp[i] += w * src[i];
  }
  double s = 0.0;
  for (Eigen::Index i = 0; i < rows; ++i) s += tmp[i] * c(j, i);
  return s;
}

}  // namespace optisketch::kernels::detail
