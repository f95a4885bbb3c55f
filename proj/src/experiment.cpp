#include "optisketch/experiment.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <new>
#include <sstream>

#include "optisketch/bitplane.hpp"
#include "optisketch/error.hpp"
#include "optisketch/kernels.hpp"
#include "optisketch/rng.hpp"
#include "optisketch/sketch.hpp"

namespace optisketch {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Per-cell seed; depends only on the user seed and the cell coordinates.
std::uint64_t cell_seed(std::uint64_t seed, Algorithm alg, std::size_t ratio_index) {
  const auto block = CounterStream({seed, static_cast<std::uint32_t>(ratio_index), Purpose::Experiment})
                         .block(static_cast<std::uint64_t>(alg));
  return (static_cast<std::uint64_t>(block[0]) << 32) | block[1];
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mu = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double relative(double estimate, double exact) {
  return exact == 0.0 ? std::abs(estimate) : std::abs(estimate - exact) / std::abs(exact);
}

struct Problem {
  Algorithm algorithm = Algorithm::Matmul;
  Matrix a;
  Matrix b;
  std::size_t n = 0;  // projector input dimension
  std::string description;
  bool has_baseline = false;
  Matrix exact_product;
  double exact_trace = 0.0;
  double exact_trace_cubed = 0.0;
  Vector exact_singular_values;
};

// Trace runs default to a PSD matrix so the exact trace is well away from zero.
MatrixSource default_matrix(const ExperimentConfig& c, bool symmetric) {
  MatrixSource s;
  s.symmetric = symmetric;
  s.kind = SourceKind::SyntheticSpectrum;
  s.n = c.n;
  s.ratio = c.default_spectrum_ratio;
  s.seed = c.seed;
  return s;
}

MatrixSource default_graph(const ExperimentConfig& c) {
  MatrixSource s;
  s.kind = SourceKind::SyntheticErdosRenyi;
  s.n = c.n;
  s.probability = c.default_edge_probability;
  s.seed = c.seed;
  return s;
}

Problem load_problem(Algorithm alg, const ExperimentConfig& c) {
  Problem p;
  p.algorithm = alg;
  if (alg == Algorithm::Triangles) {
    const MatrixSource src = c.graph.value_or(default_graph(c));
    p.a = load_matrix(src).values;
    validate_adjacency(p.a);
    p.description = describe(src);
    p.n = static_cast<std::size_t>(p.a.rows());
  } else {
    const MatrixSource src = c.matrix.value_or(default_matrix(c, alg == Algorithm::Trace));
    p.a = load_matrix(src).values;
    p.description = describe(src);
    if (alg == Algorithm::Matmul) {
      p.b = c.second ? load_matrix(*c.second).values : p.a;
      if (p.b.rows() != p.a.rows()) throw ConfigError("matmul: A and B must have the same number of rows");
      p.n = static_cast<std::size_t>(p.a.rows());
    } else if (alg == Algorithm::Trace) {
      if (p.a.rows() != p.a.cols()) throw ConfigError("trace: input matrix must be square");
      p.n = static_cast<std::size_t>(p.a.rows());
    } else {
      p.n = static_cast<std::size_t>(p.a.cols());
    }
  }

  const auto largest = static_cast<std::size_t>(std::max(p.a.rows(), p.a.cols()));
  p.has_baseline = largest <= c.baseline_threshold;
  if (!p.has_baseline) return p;
  switch (alg) {
    case Algorithm::Matmul: p.exact_product = p.a.transpose() * p.b; break;
    case Algorithm::Trace: p.exact_trace = p.a.trace(); break;
    case Algorithm::Triangles:
      p.exact_trace_cubed = kernels::trace_of_product3(p.a, p.a, p.a, Execution::Parallel);
      break;
    case Algorithm::Rsvd: {
      Eigen::BDCSVD<Matrix> svd(p.a);
      p.exact_singular_values = svd.singularValues();
      break;
    }
  }
  return p;
}

struct Metric {
  std::string name;
  std::vector<double> per_repeat;
};

struct CellOutcome {
  std::vector<Metric> metrics;
  std::string summary;
  double seconds = 0.0;
};

ProjectionConfig base_projection(const ExperimentConfig& c, Backend backend, std::size_t n, std::size_t m,
                                 std::uint64_t seed) {
  ProjectionConfig pc;
  pc.input_dim = n;
  pc.output_dim = m;
  pc.seed = seed;
  pc.backend = backend;
  pc.bit_depth = c.bits;
  if (c.quantize) pc.quantization = ReadoutQuantization{c.quantization_levels, 0.0, 99.9};
  return pc;
}

CellOutcome evaluate_cell(const Problem& p, const ExperimentConfig& c, Backend backend, std::size_t m,
                          std::uint64_t seed) {
  CellOutcome out;
  const ProjectionConfig base = base_projection(c, backend, p.n, m, seed);
  const auto t0 = Clock::now();
  std::ostringstream s;
  switch (p.algorithm) {
    case Algorithm::Matmul: {
      const auto est = sketched_matmul(p.a, p.b, base, c.repeats);
      out.seconds = seconds_since(t0);
      if (p.has_baseline) {
        Metric err{"relative_frobenius_error", {}};
        const double denom = p.exact_product.norm();
        for (const auto& e : est.per_repeat) err.per_repeat.push_back((e - p.exact_product).norm() / denom);
        out.metrics.push_back(std::move(err));
        s << "relative Frobenius error of the averaged product "
          << fmt("%.6g", (est.value - p.exact_product).norm() / denom);
      }
      break;
    }
    case Algorithm::Trace: {
      const auto est = trace_estimate(p.a, base, c.repeats);
      out.seconds = seconds_since(t0);
      s << "trace estimate " << fmt("%.6g", est.value) << " +/- " << fmt("%.3g", est.standard_error);
      if (p.has_baseline) {
        Metric err{"relative_trace_error", {}};
        for (double v : est.per_repeat) err.per_repeat.push_back(relative(v, p.exact_trace));
        out.metrics.push_back(std::move(err));
        s << " (exact " << fmt("%.6g", p.exact_trace) << ")";
      }
      break;
    }
    case Algorithm::Triangles: {
      const auto est = triangle_estimate(p.a, base, c.repeats, {c.independent_projectors});
      out.seconds = seconds_since(t0);
      s << "triangle estimate " << fmt("%.6g", est.triangle_count_estimate) << " +/- "
        << fmt("%.3g", est.standard_error / 6.0);
      if (p.has_baseline) {
        Metric err{"relative_triangle_error", {}};
        for (double v : est.per_repeat) err.per_repeat.push_back(relative(v, p.exact_trace_cubed));
        out.metrics.push_back(std::move(err));
        s << " (true triangles " << fmt("%.6g", p.exact_trace_cubed / 6.0) << ")";
      }
      break;
    }
    case Algorithm::Rsvd: {
      if (m < c.rank)
        throw ConfigError("rsvd: sketch size m = " + std::to_string(m) + " is below the target rank k = " +
                          std::to_string(c.rank) + "; raise --ratio");
      const SvdOptions opts{c.rank, m - c.rank, c.power_iterations};
      std::vector<SvdResult> results;
      for (std::size_t r = 0; r < c.repeats; ++r) results.push_back(randomized_svd(p.a, opts, repeat_config(base, r)));
      out.seconds = seconds_since(t0);
      s << "top singular value " << fmt("%.6g", results.front().s[0]);
      if (p.has_baseline) {
        Metric recon{"relative_frobenius_error", {}};
        Metric spectral{"max_singular_value_deviation", {}};
        const double denom = p.a.norm();
        for (const auto& res : results) {
          recon.per_repeat.push_back((p.a - res.reconstruct()).norm() / denom);
          double worst = 0.0;
          for (Eigen::Index i = 0; i < res.s.size(); ++i)
            worst = std::max(worst, relative(res.s[i], p.exact_singular_values[i]));
          spectral.per_repeat.push_back(worst);
        }
        s << ", mean reconstruction error " << fmt("%.6g", mean_of(recon.per_repeat));
        out.metrics.push_back(std::move(recon));
        out.metrics.push_back(std::move(spectral));
      }
      break;
    }
  }
  if (!p.has_baseline) s << " (exact baseline skipped above n = " << c.baseline_threshold << ")";
  out.summary = s.str();
  return out;
}

void append_rows(std::vector<ResultRow>& rows, const Problem& p, const ExperimentConfig& c, Backend backend,
                 std::size_t m, const CellOutcome& cell) {
  ResultRow base;
  base.algorithm = to_string(p.algorithm);
  base.backend = to_string(backend);
  base.n = p.n;
  base.m = m;
  base.compression_ratio = static_cast<double>(m) / static_cast<double>(p.n);
  base.repeats = c.repeats;
  base.wall_time_s = cell.seconds;
  base.seed = c.seed;
  if (cell.metrics.empty()) {
    ResultRow r = base;
    r.metric = "none";
    r.value = kNaN;
    rows.push_back(r);
    return;
  }
  for (const auto& metric : cell.metrics) {
    for (const auto& [suffix, value] :
         {std::pair<std::string, double>{"", mean_of(metric.per_repeat)},
          {"_stderr", stderr_of(metric.per_repeat)},
          {"_median", median_of(metric.per_repeat)}}) {
      ResultRow r = base;
      r.metric = metric.name + suffix;
      r.value = value;
      rows.push_back(r);
    }
  }
}

Algorithm algorithm_of(Subcommand s) {
  switch (s) {
    case Subcommand::Matmul: return Algorithm::Matmul;
    case Subcommand::Trace: return Algorithm::Trace;
    case Subcommand::Triangles: return Algorithm::Triangles;
    case Subcommand::Rsvd: return Algorithm::Rsvd;
    default: throw ConfigError("subcommand does not name a single algorithm");
  }
}

RunReport run_cells(const ExperimentConfig& c, const std::vector<Algorithm>& algorithms) {
  RunReport report;
  std::ostringstream summary;
  for (Algorithm alg : algorithms) {
    const Problem p = load_problem(alg, c);
    summary << to_string(alg) << " on " << p.description << " (n = " << p.n << ", repeats = " << c.repeats << ")\n";
    for (std::size_t ri = 0; ri < c.ratios.size(); ++ri) {
      const std::size_t m = sketch_size(c.ratios[ri], p.n);
      const std::uint64_t seed = cell_seed(c.seed, alg, ri);
      for (Backend backend : c.backends) {
        const CellOutcome cell = evaluate_cell(p, c, backend, m, seed);
        append_rows(report.rows, p, c, backend, m, cell);
        summary << "  " << to_string(backend) << " m = " << m << " (ratio " << fmt("%.4g", c.ratios[ri])
                << "): " << cell.summary << "\n";
      }
    }
  }
  report.summary = summary.str();
  return report;
}

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Matmul: return "matmul";
    case Algorithm::Trace: return "trace";
    case Algorithm::Triangles: return "triangles";
    case Algorithm::Rsvd: return "rsvd";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "matmul") return Algorithm::Matmul;
  if (s == "trace") return Algorithm::Trace;
  if (s == "triangles") return Algorithm::Triangles;
  if (s == "rsvd") return Algorithm::Rsvd;
  throw ConfigError("unknown algorithm '" + s + "' (matmul, trace, triangles, rsvd)");
}

std::size_t sketch_size(double ratio, std::size_t n) {
  const double m = std::round(ratio * static_cast<double>(n));
  if (m < 1.0) throw ConfigError("ratio " + fmt("%g", ratio) + " gives an empty sketch for n = " + std::to_string(n));
  return static_cast<std::size_t>(m);
}

void ExperimentConfig::validate() const {
  if (repeats == 0) throw ConfigError("--repeats must be at least 1");
  if (backends.empty()) throw ConfigError("at least one backend is required");
  if (bits < 1 || bits > kMaxBitDepth) throw ConfigError("--bits must be in [1, 32]");
  if (quantize && quantization_levels < 2) throw ConfigError("--levels must be at least 2");
  if (subcommand == Subcommand::Timing) {
    if (dims.empty()) throw ConfigError("timing needs a non-empty --dims list");
    for (auto d : dims)
      if (d == 0) throw ConfigError("--dims entries must be positive");
    if (timing_runs == 0) throw ConfigError("--runs must be at least 1");
    if (timing_batch == 0) throw ConfigError("--batch must be at least 1");
    return;
  }
  if (ratios.empty()) throw ConfigError("at least one compression ratio is required");
  for (double r : ratios)
    if (!(r > 0.0 && r <= 2.0)) throw ConfigError("compression ratio " + fmt("%g", r) + " is outside (0, 2]");
  if (subcommand == Subcommand::Sweep) {
    if (ratios.size() < 2) throw ConfigError("sweep needs at least two ratios (--ratios a,b,...)");
    if (algorithms.empty()) throw ConfigError("sweep needs at least one algorithm");
  } else if (ratios.size() != 1) {
    throw ConfigError("single runs take exactly one --ratio; use sweep for several");
  }
  if (rank == 0) throw ConfigError("--k must be at least 1");
}

RunReport run_single(const ExperimentConfig& c) {
  c.validate();
  return run_cells(c, {algorithm_of(c.subcommand)});
}

RunReport run_sweep(const ExperimentConfig& c) {
  c.validate();
  if (c.subcommand != Subcommand::Sweep) throw ConfigError("run_sweep needs the sweep subcommand");
  return run_cells(c, c.algorithms);
}

RunReport run_timing(const ExperimentConfig& c) {
  c.validate();
  RunReport report;
  std::ostringstream summary;
  summary << "projection timing, median of " << c.timing_runs << " runs after 1 warmup, batch " << c.timing_batch
          << ", " << c.bits << " bits\n";
  for (Backend backend : c.backends) {
    for (std::size_t n : c.dims) {
      ResultRow row;
      row.algorithm = "projection";
      row.backend = to_string(backend);
      row.n = n;
      row.m = n;
      row.compression_ratio = 1.0;
      row.repeats = c.timing_runs;
      row.metric = "wall_time_s";
      row.seed = c.seed;

      const double nd = static_cast<double>(n);
      const double bytes = backend == Backend::DenseGaussian ? 8.0 * nd * nd : 32.0 * nd * nd;
      bool failed = bytes > c.memory_limit_bytes;
      std::vector<double> times;
      if (!failed) {
        try {
          Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(c.timing_batch));
          kernels::fill_gaussian(CounterStream({c.seed, 0, Purpose::Experiment}), 1.0, x, Execution::Parallel);
          ProjectionConfig pc = base_projection(c, backend, n, n, c.seed);
          for (std::size_t run = 0; run <= c.timing_runs; ++run) {
            const auto t0 = Clock::now();
            const Projector p = build_projector(pc);
            const Matrix y = p.project(x);
            const double t = seconds_since(t0);
            if (y.size() == 0) throw NumericalError("empty projection");
            if (run > 0) times.push_back(t);
          }
        } catch (const std::bad_alloc&) {
          failed = true;
        }
      }
      if (failed) {
        row.metric = "failed";
        row.value = kNaN;
        row.wall_time_s = kNaN;
        summary << "  " << row.backend << " n = " << n << ": skipped (exceeds memory)\n";
      } else {
        row.value = median_of(times);
        row.wall_time_s = row.value;
        summary << "  " << row.backend << " n = " << n << ": " << fmt("%.6g", row.value) << " s\n";
      }
      report.rows.push_back(row);
    }
  }
  if (std::find(c.backends.begin(), c.backends.end(), Backend::OpticalLinearized) != c.backends.end())
    summary << "note: the optical backend is a simulation; its cost grows as O(n m B), unlike the device's "
               "near-constant projection time\n";
  report.summary = summary.str();
  return report;
}

RunReport run(const ExperimentConfig& c) {
  switch (c.subcommand) {
    case Subcommand::Sweep: return run_sweep(c);
    case Subcommand::Timing: return run_timing(c);
    default: return run_single(c);
  }
}

}  // namespace optisketch
