#pragma once

// Experiment driver behind the command-line tool: single runs, compression
// ratio sweeps, and projection timing. Every run returns ResultRows plus a
// human-readable summary; nothing here writes to the terminal.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "optisketch/data_io.hpp"
#include "optisketch/projection.hpp"

namespace optisketch {

enum class Algorithm { Matmul, Trace, Triangles, Rsvd };
enum class Subcommand { Matmul, Trace, Triangles, Rsvd, Sweep, Timing };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

struct ExperimentConfig {
  Subcommand subcommand = Subcommand::Matmul;
  std::vector<Backend> backends{Backend::DenseGaussian};
  std::vector<Algorithm> algorithms{Algorithm::Matmul, Algorithm::Trace, Algorithm::Triangles, Algorithm::Rsvd};
  std::vector<double> ratios{0.25};
  std::size_t repeats = 1;
  std::uint64_t seed = 0;
  int bits = 8;
  bool quantize = false;
  std::uint32_t quantization_levels = 256;

  std::optional<MatrixSource> matrix;  // A for matmul / trace / rsvd
  std::optional<MatrixSource> second;  // B for matmul, defaults to A
  std::optional<MatrixSource> graph;   // adjacency for triangles
  std::size_t n = 128;                 // size of the default synthetic inputs
  double default_spectrum_ratio = 0.9;
  double default_edge_probability = 0.1;

  std::size_t rank = 10;  // rsvd target rank k; oversampling is m - k
  std::size_t power_iterations = 0;
  bool independent_projectors = false;
  std::size_t baseline_threshold = 2048;

  std::vector<std::size_t> dims;  // timing
  std::size_t timing_runs = 5;
  std::size_t timing_batch = 1;
  double memory_limit_bytes = 4e9;

  /// Throws ConfigError with an actionable message.
  void validate() const;
};

struct RunReport {
  std::vector<ResultRow> rows;
  std::string summary;
};

/// Sketch size for a ratio: round(ratio * n), at least 1.
std::size_t sketch_size(double ratio, std::size_t n);

RunReport run_single(const ExperimentConfig& config);
RunReport run_sweep(const ExperimentConfig& config);
RunReport run_timing(const ExperimentConfig& config);
/// Dispatches on config.subcommand.
RunReport run(const ExperimentConfig& config);

}  // namespace optisketch
