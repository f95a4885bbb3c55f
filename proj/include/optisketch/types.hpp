#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace optisketch {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using BinaryMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;
using BinaryVector = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 1>;

/// Selects the serial reference kernels or their OpenMP counterparts.
/// Both produce bit-identical results.
enum class Execution { Serial, Parallel };

}  // namespace optisketch
