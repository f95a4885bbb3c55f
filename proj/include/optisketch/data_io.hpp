#pragma once

// Matrix and graph ingestion, synthetic generators, and CSV result files.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "optisketch/types.hpp"

namespace optisketch {

enum class SourceKind {
  MatrixMarketFile,
  EdgeListFile,
  SyntheticLowRank,
  SyntheticSpectrum,
  SyntheticErdosRenyi,
  SyntheticCompleteGraph,
};

/// Where an experiment's matrix comes from. Only the fields relevant to
/// `kind` are read.
struct MatrixSource {
  SourceKind kind = SourceKind::SyntheticSpectrum;
  std::filesystem::path path;
  bool one_based = false;  // bare edge lists only; MatrixMarket is always 1-based
  std::size_t n = 0;       // columns (and rows unless `rows` is set)
  std::size_t rows = 0;    // 0 selects rows = n
  std::size_t rank = 0;
  double noise = 0.0;  // relative Frobenius norm of added Gaussian noise
  double ratio = 1.0;  // geometric singular-value decay
  bool symmetric = false;  // spectrum: U diag(s) U^T instead of U diag(s) V^T
  double probability = 0.0;
  std::uint64_t seed = 0;

  std::size_t row_count() const noexcept { return rows == 0 ? n : rows; }
};

/// Parses "low-rank:n=200,r=5", "spectrum:n=64,ratio=0.9", "erdos-renyi:n=100,p=0.1",
/// "complete:n=4". Optional keys: rows, noise, seed, sym (spectrum only, 0|1). The seed defaults to `default_seed`.
MatrixSource parse_synthetic(const std::string& text, std::uint64_t default_seed);
std::string describe(const MatrixSource& source);

struct LoadedMatrix {
  Matrix values;
  bool symmetric = false;
  bool binary = false;
  std::size_t self_loops_dropped = 0;
};

LoadedMatrix load_matrix(const MatrixSource& source);

/// MatrixMarket "matrix coordinate|array real|integer|pattern general|symmetric".
Matrix read_matrix_market(std::istream& in);
Matrix read_matrix_market(const std::filesystem::path& path);
/// Writes the dense "array real general" form with 17 significant digits.
void write_matrix_market(std::ostream& out, const Matrix& a);

struct Graph {
  Matrix adjacency;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicate_edges = 0;
};

/// Whitespace-separated "u v" pairs, '#' comments. A file starting with a
/// %%MatrixMarket header is read as a 1-based MatrixMarket graph instead.
Graph read_edge_list(std::istream& in, bool one_based = false);
Graph read_edge_list(const std::filesystem::path& path, bool one_based = false);

Matrix generate_low_rank(std::size_t rows, std::size_t cols, std::size_t rank, double noise, std::uint64_t seed);
/// U diag(ratio^i) V^T with Haar-distributed U, V; symmetric positive semidefinite
/// U diag(ratio^i) U^T when `symmetric` (square only).
Matrix generate_spectrum(std::size_t rows, std::size_t cols, double ratio, std::uint64_t seed,
                         bool symmetric = false);
Matrix generate_erdos_renyi(std::size_t n, double probability, std::uint64_t seed);
Matrix generate_complete_graph(std::size_t n);

struct ResultRow {
  std::string algorithm;
  std::string backend;
  std::size_t n = 0;
  std::size_t m = 0;
  double compression_ratio = 0.0;
  std::size_t repeats = 0;
  std::string metric;
  double value = 0.0;
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;
};

inline constexpr const char* kResultHeader =
    "algorithm,backend,n,m,compression_ratio,repeats,metric,value,wall_time_s,seed";

/// Throws ConfigError when a row breaks the ResultRow invariants.
void validate(const ResultRow& row);

void write_results(std::ostream& out, const std::vector<ResultRow>& rows);
void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path);
std::vector<ResultRow> read_results(std::istream& in);
std::vector<ResultRow> read_results(const std::filesystem::path& path);

/// "%.17g", round-trippable.
std::string format_double(double v);

}  // namespace optisketch
