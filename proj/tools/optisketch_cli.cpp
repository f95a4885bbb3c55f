// optisketch: run sketched matmul, trace, triangle and randomized SVD
// experiments on the dense Gaussian or simulated optical backend.
//
// Exit codes: 0 success, 2 configuration error, 3 I/O or parse error,
// 4 numerical failure (e.g. rank collapse), 1 anything else.

#include <omp.h>

#include <CLI11.hpp>
#include <iostream>

#include "optisketch/error.hpp"
#include "optisketch/experiment.hpp"

namespace {

enum ExitCode { kOk = 0, kUnexpected = 1, kConfig = 2, kIo = 3, kNumerical = 4 };

struct Options {
  std::string backend = "dense";
  std::string synthetic;
  std::string matrix;
  std::string b_synthetic;
  std::string b_matrix;
  std::string graph;
  std::string graph_synthetic;
  bool one_based = false;
  double ratio = 0.25;
  std::vector<double> ratios;
  std::vector<std::string> algorithms;
  std::string out;
  int threads = 0;
};

void add_common(CLI::App* cmd, optisketch::ExperimentConfig& c, Options& o) {
  cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  cmd->add_option("--backend", o.backend, "dense | optical | both")
      ->check(CLI::IsMember({"dense", "optical", "both"}))
      ->capture_default_str();
  cmd->add_option("--bits", c.bits, "Bit planes per sign for the optical backend")->capture_default_str();
  cmd->add_flag("--quantize", c.quantize, "Enable optical readout quantization");
  cmd->add_option("--levels", c.quantization_levels, "Readout levels when quantizing")->capture_default_str();
  cmd->add_option("--out", o.out, "Write CSV results to this path");
  cmd->add_option("--threads", o.threads, "OpenMP threads (0 keeps the runtime default)");
}

void add_inputs(CLI::App* cmd, optisketch::ExperimentConfig& c, Options& o) {
  cmd->add_option("--repeats", c.repeats, "Independent sketches to average")->capture_default_str();
  cmd->add_option("--synthetic", o.synthetic, "Synthetic matrix, e.g. spectrum:n=64,ratio=0.9 or low-rank:n=200,r=5");
  cmd->add_option("--matrix", o.matrix, "MatrixMarket file for A");
  cmd->add_option("--b-synthetic", o.b_synthetic, "Synthetic B for matmul (defaults to A)");
  cmd->add_option("--b-matrix", o.b_matrix, "MatrixMarket file for B");
  cmd->add_option("--graph", o.graph, "Edge list (or MatrixMarket) graph for triangles");
  cmd->add_option("--graph-synthetic", o.graph_synthetic, "Synthetic graph, e.g. erdos-renyi:n=100,p=0.1");
  cmd->add_flag("--one-based", o.one_based, "Bare edge lists use 1-based vertex ids");
  cmd->add_option("--n", c.n, "Size of the default synthetic inputs")->capture_default_str();
  cmd->add_option("--k", c.rank, "Target rank for rsvd")->capture_default_str();
  cmd->add_option("--power-iters", c.power_iterations, "Power iterations for rsvd")->capture_default_str();
  cmd->add_flag("--independent", c.independent_projectors, "Triangles: independent projector per factor");
  cmd->add_option("--baseline-threshold", c.baseline_threshold, "Skip exact baselines above this dimension")
      ->capture_default_str();
}

optisketch::MatrixSource file_source(optisketch::SourceKind kind, const std::string& path, bool one_based) {
  optisketch::MatrixSource s;
  s.kind = kind;
  s.path = path;
  s.one_based = one_based;
  return s;
}

void finish(optisketch::ExperimentConfig& c, const Options& o) {
  using optisketch::Backend;
  if (o.backend == "both") c.backends = {Backend::DenseGaussian, Backend::OpticalLinearized};
  else c.backends = {optisketch::backend_from_string(o.backend)};

  if (!o.synthetic.empty() && !o.matrix.empty()) throw optisketch::ConfigError("give --synthetic or --matrix, not both");
  if (!o.synthetic.empty()) c.matrix = optisketch::parse_synthetic(o.synthetic, c.seed);
  if (!o.matrix.empty()) c.matrix = file_source(optisketch::SourceKind::MatrixMarketFile, o.matrix, false);
  if (!o.b_synthetic.empty()) c.second = optisketch::parse_synthetic(o.b_synthetic, c.seed + 1);
  if (!o.b_matrix.empty()) c.second = file_source(optisketch::SourceKind::MatrixMarketFile, o.b_matrix, false);
  if (!o.graph.empty() && !o.graph_synthetic.empty())
    throw optisketch::ConfigError("give --graph or --graph-synthetic, not both");
  if (!o.graph.empty()) c.graph = file_source(optisketch::SourceKind::EdgeListFile, o.graph, o.one_based);
  if (!o.graph_synthetic.empty()) c.graph = optisketch::parse_synthetic(o.graph_synthetic, c.seed);

  if (c.subcommand == optisketch::Subcommand::Sweep) {
    c.ratios = o.ratios;
    if (!o.algorithms.empty()) {
      c.algorithms.clear();
      for (const auto& a : o.algorithms) c.algorithms.push_back(optisketch::algorithm_from_string(a));
    }
  } else if (c.subcommand != optisketch::Subcommand::Timing) {
    c.ratios = {o.ratio};
  }
  if (o.threads > 0) omp_set_num_threads(o.threads);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized linear algebra with dense Gaussian and simulated optical projections"};
  app.require_subcommand(1);

  optisketch::ExperimentConfig config;
  Options opts;

  struct Single {
    const char* name;
    const char* help;
    optisketch::Subcommand sub;
  };
  const Single singles[] = {
      {"matmul", "Sketched matrix product A^T B", optisketch::Subcommand::Matmul},
      {"trace", "Hutchinson trace estimate", optisketch::Subcommand::Trace},
      {"triangles", "Triangle count estimate Tr((R A R^T)^3) / 6", optisketch::Subcommand::Triangles},
      {"rsvd", "Randomized SVD", optisketch::Subcommand::Rsvd},
  };
  for (const auto& s : singles) {
    auto* cmd = app.add_subcommand(s.name, s.help);
    add_common(cmd, config, opts);
    add_inputs(cmd, config, opts);
    cmd->add_option("--ratio", opts.ratio, "Compression ratio m/n")->capture_default_str();
    cmd->callback([&config, sub = s.sub] { config.subcommand = sub; });
  }

  auto* sweep = app.add_subcommand("sweep", "Error versus compression ratio for every algorithm and backend");
  add_common(sweep, config, opts);
  add_inputs(sweep, config, opts);
  sweep->add_option("--ratios", opts.ratios, "Compression ratios, comma separated")->delimiter(',')->required();
  sweep->add_option("--algorithms", opts.algorithms, "Subset of matmul,trace,triangles,rsvd")->delimiter(',');
  sweep->callback([&config] { config.subcommand = optisketch::Subcommand::Sweep; });

  auto* timing = app.add_subcommand("timing", "Wall time of building and applying an n x n projection");
  add_common(timing, config, opts);
  timing->add_option("--dims", config.dims, "Square dimensions, comma separated")->delimiter(',')->required();
  timing->add_option("--runs", config.timing_runs, "Timed runs per cell (after one warmup)")->capture_default_str();
  timing->add_option("--batch", config.timing_batch, "Input vectors per projection")->capture_default_str();
  timing->callback([&config] { config.subcommand = optisketch::Subcommand::Timing; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    finish(config, opts);
    const auto report = optisketch::run(config);
    std::cout << report.summary;
    if (!opts.out.empty()) {
      optisketch::write_results(report.rows, opts.out);
      std::cout << "wrote " << report.rows.size() << " rows to " << opts.out << "\n";
    }
    return kOk;
  } catch (const optisketch::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const optisketch::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const optisketch::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUnexpected;
  }
}
