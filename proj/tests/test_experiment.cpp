#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "optisketch/error.hpp"
#include "optisketch/experiment.hpp"

using namespace optisketch;

namespace {

ExperimentConfig single(Subcommand s, double ratio, std::size_t repeats, std::uint64_t seed) {
  ExperimentConfig c;
  c.subcommand = s;
  c.ratios = {ratio};
  c.repeats = repeats;
  c.seed = seed;
  return c;
}

const ResultRow* find(const RunReport& r, const std::string& backend, const std::string& metric, std::size_t m = 0) {
  for (const auto& row : r.rows)
    if (row.backend == backend && row.metric == metric && (m == 0 || row.m == m)) return &row;
  return nullptr;
}

bool same_except_time(const std::vector<ResultRow>& a, const std::vector<ResultRow>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a[i];
    const auto& y = b[i];
    const bool value_eq = x.value == y.value || (std::isnan(x.value) && std::isnan(y.value));
    if (x.algorithm != y.algorithm || x.backend != y.backend || x.n != y.n || x.m != y.m ||
        x.compression_ratio != y.compression_ratio || x.repeats != y.repeats || x.metric != y.metric || !value_eq ||
        x.seed != y.seed)
      return false;
  }
  return true;
}

struct ThreadCount {
  int saved = omp_get_max_threads();
  explicit ThreadCount(int n) { omp_set_num_threads(n); }
  ~ThreadCount() { omp_set_num_threads(saved); }
};

}  // namespace

TEST_CASE("sketch_size rounds ratio * n") {
  CHECK(sketch_size(0.25, 128) == 32);
  CHECK(sketch_size(0.075, 200) == 15);
  CHECK(sketch_size(2.0, 3) == 6);
  CHECK(sketch_size(0.004, 128) == 1);
  CHECK_THROWS_AS(sketch_size(0.001, 128), ConfigError);
}

TEST_CASE("config validation") {
  auto c = single(Subcommand::Matmul, 0.5, 1, 0);
  CHECK_NOTHROW(c.validate());
  c.repeats = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = single(Subcommand::Matmul, 0.0, 1, 0);
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = single(Subcommand::Matmul, 2.5, 1, 0);
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = single(Subcommand::Matmul, 2.0, 1, 0);
  CHECK_NOTHROW(c.validate());
  c.ratios = {0.5, 1.0};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = single(Subcommand::Sweep, 0.5, 1, 0);
  CHECK_THROWS_AS(run_sweep(c), ConfigError);
  c = single(Subcommand::Matmul, 0.5, 1, 0);
  c.bits = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.bits = 33;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = single(Subcommand::Matmul, 0.5, 1, 0);
  c.backends.clear();
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = single(Subcommand::Rsvd, 0.05, 1, 0);
  c.n = 64;
  CHECK_THROWS_AS(run_single(c), ConfigError);  // m = 3 < k = 10
  CHECK(algorithm_from_string("rsvd") == Algorithm::Rsvd);
  CHECK_THROWS_AS(algorithm_from_string("fft"), ConfigError);
}

TEST_CASE("triangles on K4") {
  auto c = single(Subcommand::Triangles, 1.0, 50, 1);
  c.graph = MatrixSource{.kind = SourceKind::SyntheticCompleteGraph, .n = 4};
  c.backends = {Backend::DenseGaussian, Backend::OpticalLinearized};
  const auto report = run_single(c);
  CHECK(report.summary.find("true triangles 4") != std::string::npos);
  CHECK(report.summary.find("+/-") != std::string::npos);
  for (const char* b : {"dense", "optical"}) {
    const auto* row = find(report, b, "relative_triangle_error");
    REQUIRE(row != nullptr);
    CHECK(row->n == 4);
    CHECK(row->m == 4);
    CHECK(row->repeats == 50);
    CHECK(std::isfinite(row->value));
    CHECK(find(report, b, "relative_triangle_error_stderr") != nullptr);
    CHECK(find(report, b, "relative_triangle_error_median") != nullptr);
  }
  for (const auto& row : report.rows) CHECK_NOTHROW(validate(row));
}

TEST_CASE("rsvd on an exact low-rank input") {
  auto c = single(Subcommand::Rsvd, 0.075, 1, 0);
  c.matrix = parse_synthetic("low-rank:n=200,r=5", 0);
  c.rank = 5;
  c.backends = {Backend::DenseGaussian, Backend::OpticalLinearized};
  const auto report = run_single(c);
  for (const char* b : {"dense", "optical"}) {
    const auto* row = find(report, b, "relative_frobenius_error");
    REQUIRE(row != nullptr);
    CHECK(row->m == 15);
    CHECK(row->value <= 1e-10);
    const auto* spectral = find(report, b, "max_singular_value_deviation");
    REQUIRE(spectral != nullptr);
    CHECK(spectral->value <= 1e-10);
  }
}

TEST_CASE("single runs are deterministic, including across thread counts") {
  auto c = single(Subcommand::Matmul, 0.25, 20, 3);
  c.matrix = parse_synthetic("spectrum:n=64,ratio=0.9", 3);
  c.backends = {Backend::DenseGaussian, Backend::OpticalLinearized};
  RunReport first;
  {
    ThreadCount t(1);
    first = run_single(c);
  }
  for (int threads : {1, 3, 4}) {
    ThreadCount t(threads);
    CHECK(same_except_time(first.rows, run_single(c).rows));
  }
  c.seed = 4;
  c.matrix->seed = 3;
  CHECK_FALSE(same_except_time(first.rows, run_single(c).rows));
}

TEST_CASE("baseline skipped above the size threshold") {
  auto c = single(Subcommand::Trace, 0.5, 2, 0);
  c.n = 32;
  c.baseline_threshold = 16;
  const auto report = run_single(c);
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].metric == "none");
  CHECK(std::isnan(report.rows[0].value));
  CHECK(report.summary.find("skipped") != std::string::npos);
}

TEST_CASE("sweep covers every cell and the dense matmul error falls with the ratio") {
  ExperimentConfig c;
  c.subcommand = Subcommand::Sweep;
  c.algorithms = {Algorithm::Matmul};
  c.ratios = {0.125, 0.25, 0.5, 1.0};
  c.repeats = 20;
  c.n = 128;
  c.seed = 7;
  c.backends = {Backend::DenseGaussian, Backend::OpticalLinearized};
  const auto report = run_sweep(c);
  CHECK(report.rows.size() == 4 * 2 * 3);
  double previous = INFINITY;
  for (std::size_t m : {16, 32, 64, 128}) {
    const auto* row = find(report, "dense", "relative_frobenius_error", m);
    REQUIRE(row != nullptr);
    CAPTURE(m);
    CHECK(row->value < previous);
    previous = row->value;
    const auto* optical = find(report, "optical", "relative_frobenius_error_median", m);
    const auto* dense = find(report, "dense", "relative_frobenius_error_median", m);
    CHECK(optical->value <= 2.0 * dense->value);
    CHECK(dense->value <= 2.0 * optical->value);
  }
}

TEST_CASE("sweep over all algorithms emits rows in cell order") {
  ExperimentConfig c;
  c.subcommand = Subcommand::Sweep;
  c.ratios = {0.5, 1.0};
  c.repeats = 2;
  c.n = 24;
  c.rank = 4;
  const auto report = run(c);
  std::vector<std::string> order;
  for (const auto& row : report.rows)
    if (order.empty() || order.back() != row.algorithm) order.push_back(row.algorithm);
  CHECK(order == std::vector<std::string>{"matmul", "trace", "triangles", "rsvd"});
  for (const auto& row : report.rows) CHECK_NOTHROW(validate(row));
}

TEST_CASE("timing") {
  ExperimentConfig c;
  c.subcommand = Subcommand::Timing;
  CHECK_THROWS_AS(run_timing(c), ConfigError);
  c.dims = {32, 64};
  c.timing_runs = 3;
  c.backends = {Backend::DenseGaussian, Backend::OpticalLinearized};
  const auto report = run(c);
  REQUIRE(report.rows.size() == 4);
  for (const auto& row : report.rows) {
    CHECK(row.metric == "wall_time_s");
    CHECK(row.value > 0.0);
    CHECK(row.m == row.n);
    CHECK(row.algorithm == "projection");
    CHECK_NOTHROW(validate(row));
  }
  CHECK(report.summary.find("O(n m B)") != std::string::npos);

  c.memory_limit_bytes = 1000.0;
  const auto failed = run_timing(c);
  for (const auto& row : failed.rows) CHECK(row.metric == "failed");
}
