#pragma once

// Inner loops shared by the projection backends and the sketching algorithms.
//
// `serial` holds the reference implementations. `parallel` holds OpenMP
// versions that distribute independent output columns (or rows) over threads
// and keep the per-element operation order of the reference, so both
// namespaces return bit-identical results for any thread count.

#include "optisketch/rng.hpp"
#include "optisketch/types.hpp"

namespace optisketch::kernels {

namespace serial {

/// out(i, j) = stddev * normal(j * rows + i)
void fill_gaussian(const CounterStream& stream, double stddev, Matrix& out);

/// out(i, j) = component_stddev * (z0 + i z1) with (z0, z1) = normal_pair(j * rows + i)
void fill_complex_gaussian(const CounterStream& stream, double component_stddev, ComplexMatrix& out);

/// lhs * rhs, accumulated column by column in ascending inner index.
Matrix matmul(const Matrix& lhs, const Matrix& rhs);

/// |field * x|^2 for every binary column x of `inputs`.
Matrix intensities(const ComplexMatrix& field, const BinaryMatrix& inputs);

/// For each binary plane b: signal = |C b|^2, mixed = |C b + reference|^2.
void interference_intensities(const ComplexMatrix& field, const ComplexVector& reference,
                              const BinaryMatrix& planes, Matrix& signal, Matrix& mixed);

/// out[j] = <lhs.col(j), rhs.col(j)>
Vector column_dots(const Matrix& lhs, const Matrix& rhs);

/// Tr(a * b * c) without forming the triple product.
double trace_of_product3(const Matrix& a, const Matrix& b, const Matrix& c);

}  // namespace serial

namespace parallel {

void fill_gaussian(const CounterStream& stream, double stddev, Matrix& out);
void fill_complex_gaussian(const CounterStream& stream, double component_stddev, ComplexMatrix& out);
Matrix matmul(const Matrix& lhs, const Matrix& rhs);
Matrix intensities(const ComplexMatrix& field, const BinaryMatrix& inputs);
void interference_intensities(const ComplexMatrix& field, const ComplexVector& reference,
                              const BinaryMatrix& planes, Matrix& signal, Matrix& mixed);
Vector column_dots(const Matrix& lhs, const Matrix& rhs);
double trace_of_product3(const Matrix& a, const Matrix& b, const Matrix& c);

}  // namespace parallel

void fill_gaussian(const CounterStream& stream, double stddev, Matrix& out, Execution exec);
void fill_complex_gaussian(const CounterStream& stream, double component_stddev, ComplexMatrix& out,
                           Execution exec);
Matrix matmul(const Matrix& lhs, const Matrix& rhs, Execution exec);
Matrix intensities(const ComplexMatrix& field, const BinaryMatrix& inputs, Execution exec);
void interference_intensities(const ComplexMatrix& field, const ComplexVector& reference,
                              const BinaryMatrix& planes, Matrix& signal, Matrix& mixed,
                              Execution exec);
Vector column_dots(const Matrix& lhs, const Matrix& rhs, Execution exec);
double trace_of_product3(const Matrix& a, const Matrix& b, const Matrix& c, Execution exec);

}  // namespace optisketch::kernels
