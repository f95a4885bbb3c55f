#include "optisketch/data_io.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "optisketch/error.hpp"
#include "optisketch/rng.hpp"

namespace optisketch {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

long long parse_int(const std::string& tok, std::size_t line) {
  long long v = 0;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ParseError("expected an integer, got '" + tok + "'", line);
  return v;
}

double parse_real(const std::string& tok, std::size_t line) {
  double v = 0.0;
  const char* begin = tok.data();
  if (!tok.empty() && tok[0] == '+') ++begin;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) throw ParseError("expected a number, got '" + tok + "'", line);
  return v;
}

bool blank_or_comment(const std::string& line, char comment) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == comment;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::uint64_t parse_u64(const std::string& tok, const std::string& what) {
  std::uint64_t v = 0;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError("invalid value '" + tok + "' for " + what);
  return v;
}

double parse_double_cfg(const std::string& tok, const std::string& what) {
  double v = 0.0;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError("invalid value '" + tok + "' for " + what);
  return v;
}

Matrix gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed, std::uint32_t stream) {
  const CounterStream rng({seed, stream, Purpose::Synthetic});
  Matrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index k = 0; k < a.size(); ++k) a.data()[k] = rng.normal(static_cast<std::uint64_t>(k));
  return a;
}

// Haar-distributed orthonormal columns: QR of a Gaussian with R's diagonal made positive.
Matrix haar_columns(std::size_t rows, std::size_t cols, std::uint64_t seed, std::uint32_t stream) {
  const Matrix g = gaussian(rows, cols, seed, stream);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(g.rows(), g.cols());
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

}  // namespace

// ---------------------------------------------------------------------------

MatrixSource parse_synthetic(const std::string& text, std::uint64_t default_seed) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  MatrixSource src;
  src.seed = default_seed;
  if (kind == "low-rank") src.kind = SourceKind::SyntheticLowRank;
  else if (kind == "spectrum") src.kind = SourceKind::SyntheticSpectrum;
  else if (kind == "erdos-renyi") src.kind = SourceKind::SyntheticErdosRenyi;
  else if (kind == "complete") src.kind = SourceKind::SyntheticCompleteGraph;
  else throw ConfigError("unknown synthetic kind '" + kind + "' (low-rank, spectrum, erdos-renyi, complete)");

  std::map<std::string, std::string> params;
  if (colon != std::string::npos) {
    std::istringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) throw ConfigError("synthetic parameter '" + item + "' is not key=value");
      params[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }
  for (const auto& [key, value] : params) {
    if (key == "n") src.n = parse_u64(value, "n");
    else if (key == "rows") src.rows = parse_u64(value, "rows");
    else if (key == "r" || key == "rank") src.rank = parse_u64(value, "rank");
    else if (key == "noise") src.noise = parse_double_cfg(value, "noise");
    else if (key == "ratio") src.ratio = parse_double_cfg(value, "ratio");
    else if (key == "p") src.probability = parse_double_cfg(value, "p");
    else if (key == "seed") src.seed = parse_u64(value, "seed");
    else if (key == "sym") src.symmetric = parse_u64(value, "sym") != 0;
    else throw ConfigError("unknown synthetic parameter '" + key + "'");
  }
  if (src.n == 0) throw ConfigError("synthetic source '" + text + "' needs n > 0");
  return src;
}

namespace {

std::string short_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::string describe(const MatrixSource& s) {
  switch (s.kind) {
    case SourceKind::MatrixMarketFile: return "matrix-market:" + s.path.string();
    case SourceKind::EdgeListFile: return "edge-list:" + s.path.string();
    case SourceKind::SyntheticLowRank:
      return "low-rank:rows=" + std::to_string(s.row_count()) + ",n=" + std::to_string(s.n) +
             ",r=" + std::to_string(s.rank);
    case SourceKind::SyntheticSpectrum:
      return "spectrum:rows=" + std::to_string(s.row_count()) + ",n=" + std::to_string(s.n) +
             ",ratio=" + short_double(s.ratio) + (s.symmetric ? ",sym=1" : "");
    case SourceKind::SyntheticErdosRenyi:
      return "erdos-renyi:n=" + std::to_string(s.n) + ",p=" + short_double(s.probability);
    case SourceKind::SyntheticCompleteGraph: return "complete:n=" + std::to_string(s.n);
  }
  return "unknown";
}

LoadedMatrix load_matrix(const MatrixSource& s) {
  LoadedMatrix out;
  switch (s.kind) {
    case SourceKind::MatrixMarketFile:
      out.values = read_matrix_market(s.path);
      break;
    case SourceKind::EdgeListFile: {
      Graph g = read_edge_list(s.path, s.one_based);
      out.values = std::move(g.adjacency);
      out.self_loops_dropped = g.self_loops_dropped;
      break;
    }
    case SourceKind::SyntheticLowRank:
      out.values = generate_low_rank(s.row_count(), s.n, s.rank, s.noise, s.seed);
      break;
    case SourceKind::SyntheticSpectrum:
      out.values = generate_spectrum(s.row_count(), s.n, s.ratio, s.seed, s.symmetric);
      break;
    case SourceKind::SyntheticErdosRenyi:
      out.values = generate_erdos_renyi(s.n, s.probability, s.seed);
      break;
    case SourceKind::SyntheticCompleteGraph:
      out.values = generate_complete_graph(s.n);
      break;
  }
  const Matrix& a = out.values;
  out.symmetric = a.rows() == a.cols() && a == a.transpose();
  out.binary = (a.array() == 0.0 || a.array() == 1.0).all();
  return out;
}

// ---------------------------------------------------------------------------

Matrix read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError("empty file, expected a %%MatrixMarket header", 1);
  ++lineno;
  const auto header = split_ws(line);
  if (header.size() != 5 || header[0] != "%%MatrixMarket" || lower(header[1]) != "matrix")
    throw ParseError("malformed %%MatrixMarket header", lineno);
  const std::string format = lower(header[2]), field = lower(header[3]), symmetry = lower(header[4]);
  if (format != "coordinate" && format != "array") throw ParseError("unsupported format '" + format + "'", lineno);
  if (field != "real" && field != "integer" && field != "pattern")
    throw ParseError("unsupported field '" + field + "'", lineno);
  if (symmetry != "general" && symmetry != "symmetric")
    throw ParseError("unsupported symmetry '" + symmetry + "'", lineno);
  if (format == "array" && field == "pattern") throw ParseError("pattern field requires coordinate format", lineno);
  const bool symmetric = symmetry == "symmetric";
  const bool pattern = field == "pattern";

  auto next_data_line = [&](std::vector<std::string>& toks) {
    while (std::getline(in, line)) {
      ++lineno;
      if (blank_or_comment(line, '%')) continue;
      toks = split_ws(line);
      return true;
    }
    return false;
  };

  std::vector<std::string> toks;
  if (!next_data_line(toks)) throw ParseError("missing size line", lineno + 1);
  const std::size_t expected = format == "coordinate" ? 3 : 2;
  if (toks.size() != expected) throw ParseError("size line must have " + std::to_string(expected) + " fields", lineno);
  const long long rows = parse_int(toks[0], lineno), cols = parse_int(toks[1], lineno);
  if (rows <= 0 || cols <= 0) throw ParseError("matrix dimensions must be positive", lineno);
  if (symmetric && rows != cols) throw ParseError("symmetric matrix must be square", lineno);
  Matrix a = Matrix::Zero(rows, cols);

  if (format == "coordinate") {
    const long long nnz = parse_int(toks[2], lineno);
    if (nnz < 0) throw ParseError("negative entry count", lineno);
    for (long long e = 0; e < nnz; ++e) {
      if (!next_data_line(toks))
        throw ParseError("expected " + std::to_string(nnz) + " entries, found " + std::to_string(e), lineno + 1);
      const std::size_t want = pattern ? 2 : 3;
      if (toks.size() != want) throw ParseError("entry must have " + std::to_string(want) + " fields", lineno);
      const long long i = parse_int(toks[0], lineno), j = parse_int(toks[1], lineno);
      if (i < 1 || i > rows || j < 1 || j > cols) throw ParseError("entry index out of range", lineno);
      const double v = pattern ? 1.0 : parse_real(toks[2], lineno);
      a(i - 1, j - 1) += v;
      if (symmetric && i != j) a(j - 1, i - 1) += v;
    }
  } else {
    // column-major; symmetric arrays list the lower triangle only
    for (long long j = 0; j < cols; ++j) {
      for (long long i = symmetric ? j : 0; i < rows; ++i) {
        if (!next_data_line(toks)) throw ParseError("array ends early", lineno + 1);
        if (toks.size() != 1) throw ParseError("array entry must have exactly one field", lineno);
        const double v = parse_real(toks[0], lineno);
        a(i, j) = v;
        if (symmetric) a(j, i) = v;
      }
    }
  }
  if (next_data_line(toks)) throw ParseError("unexpected data after the last entry", lineno);
  return a;
}

Matrix read_matrix_market(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const Matrix& a) {
  out << "%%MatrixMarket matrix array real general\n" << a.rows() << ' ' << a.cols() << '\n';
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) out << format_double(a(i, j)) << '\n';
  if (!out) throw IoError("failed writing MatrixMarket output");
}

// ---------------------------------------------------------------------------

Graph read_edge_list(std::istream& in, bool one_based) {
  if (in.peek() == '%') {
    std::string rest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (rest.rfind("%%MatrixMarket", 0) == 0) {
      std::istringstream mm(rest);
      const Matrix raw = read_matrix_market(mm);
      if (raw.rows() != raw.cols()) throw ParseError("graph matrix must be square", 2);
      Graph g;
      const auto n = raw.rows();
      g.adjacency = Matrix::Zero(n, n);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (raw(j, j) != 0.0) ++g.self_loops_dropped;
        for (Eigen::Index i = 0; i < n; ++i)
          if (i != j && (raw(i, j) != 0.0 || raw(j, i) != 0.0)) g.adjacency(i, j) = 1.0;
      }
      return g;
    }
    throw ParseError("edge list starts with '%' but has no %%MatrixMarket header", 1);
  }

  std::vector<std::pair<long long, long long>> edges;
  std::string line;
  std::size_t lineno = 0;
  long long max_index = -1;
  const long long base = one_based ? 1 : 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = line.substr(0, line.find('#'));
    if (blank_or_comment(line, '#')) continue;
    const auto toks = split_ws(line);
    if (toks.size() < 2 || toks.size() > 3) throw ParseError("edge line must be 'u v' (optionally with a weight)", lineno);
    const long long u = parse_int(toks[0], lineno) - base;
    const long long v = parse_int(toks[1], lineno) - base;
    if (toks.size() == 3) parse_real(toks[2], lineno);
    if (u < 0 || v < 0) throw ParseError("vertex index out of range", lineno);
    edges.emplace_back(u, v);
    max_index = std::max({max_index, u, v});
  }
  if (max_index < 0) throw ParseError("edge list contains no edges", lineno == 0 ? 1 : lineno);

  Graph g;
  const auto n = static_cast<Eigen::Index>(max_index + 1);
  g.adjacency = Matrix::Zero(n, n);
  for (const auto& [u, v] : edges) {
    if (u == v) {
      ++g.self_loops_dropped;
      continue;
    }
    if (g.adjacency(u, v) != 0.0) ++g.duplicate_edges;
    g.adjacency(u, v) = 1.0;
    g.adjacency(v, u) = 1.0;
  }
  return g;
}

Graph read_edge_list(const std::filesystem::path& path, bool one_based) {
  auto in = open_input(path);
  return read_edge_list(in, one_based);
}

// ---------------------------------------------------------------------------

Matrix generate_low_rank(std::size_t rows, std::size_t cols, std::size_t rank, double noise, std::uint64_t seed) {
  if (rows == 0 || cols == 0) throw ConfigError("low-rank: dimensions must be positive");
  if (rank == 0 || rank > std::min(rows, cols)) throw ConfigError("low-rank: rank must be in [1, min(rows, n)]");
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw ConfigError("low-rank: noise must be nonnegative");
  Matrix a = gaussian(rows, rank, seed, 0) * gaussian(rank, cols, seed, 1);
  if (noise > 0.0) {
    const Matrix e = gaussian(rows, cols, seed, 2);
    a += (noise * a.norm() / e.norm()) * e;
  }
  return a;
}

Matrix generate_spectrum(std::size_t rows, std::size_t cols, double ratio, std::uint64_t seed, bool symmetric) {
  if (rows == 0 || cols == 0) throw ConfigError("spectrum: dimensions must be positive");
  if (!(ratio > 0.0) || !std::isfinite(ratio)) throw ConfigError("spectrum: ratio must be positive");
  if (symmetric && rows != cols) throw ConfigError("spectrum: a symmetric matrix must be square");
  const std::size_t k = std::min(rows, cols);
  const Matrix u = haar_columns(rows, k, seed, 0);
  const Matrix v = symmetric ? u : haar_columns(cols, k, seed, 1);
  Vector s(static_cast<Eigen::Index>(k));
  for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = std::pow(ratio, static_cast<double>(i));
  return u * s.asDiagonal() * v.transpose();
}

Matrix generate_erdos_renyi(std::size_t n, double probability, std::uint64_t seed) {
  if (n == 0) throw ConfigError("erdos-renyi: n must be positive");
  if (!(probability >= 0.0 && probability <= 1.0)) throw ConfigError("erdos-renyi: probability must lie in [0, 1]");
  const CounterStream rng({seed, 3, Purpose::Synthetic});
  const auto size = static_cast<Eigen::Index>(n);
  Matrix a = Matrix::Zero(size, size);
  for (Eigen::Index j = 0; j < size; ++j)
    for (Eigen::Index i = 0; i < j; ++i)
      if (rng.uniform(static_cast<std::uint64_t>(j * size + i)) < probability) a(i, j) = a(j, i) = 1.0;
  return a;
}

Matrix generate_complete_graph(std::size_t n) {
  if (n == 0) throw ConfigError("complete graph: n must be positive");
  const auto size = static_cast<Eigen::Index>(n);
  return Matrix::Ones(size, size) - Matrix::Identity(size, size);
}

// ---------------------------------------------------------------------------

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void validate(const ResultRow& r) {
  if (r.algorithm.empty() || r.backend.empty() || r.metric.empty())
    throw ConfigError("result row has an empty tag");
  if (r.n == 0) throw ConfigError("result row has n = 0");
  if (r.compression_ratio != static_cast<double>(r.m) / static_cast<double>(r.n))
    throw ConfigError("result row compression_ratio differs from m/n");
  for (const auto& s : {r.algorithm, r.backend, r.metric})
    if (s.find_first_of(",\n\"") != std::string::npos) throw ConfigError("result row tag contains a CSV delimiter");
}

void write_results(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultHeader << '\n';
  for (const auto& r : rows) {
    validate(r);
    out << r.algorithm << ',' << r.backend << ',' << r.n << ',' << r.m << ',' << format_double(r.compression_ratio)
        << ',' << r.repeats << ',' << r.metric << ',' << format_double(r.value) << ',' << format_double(r.wall_time_s)
        << ',' << r.seed << '\n';
  }
  if (!out) throw IoError("failed writing CSV results");
}

void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_results(out, rows);
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<ResultRow> read_results(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line) || line != kResultHeader) throw ParseError("missing or unexpected CSV header", 1);
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 10) throw ParseError("expected 10 CSV fields, got " + std::to_string(f.size()), lineno);
    ResultRow r;
    r.algorithm = f[0];
    r.backend = f[1];
    r.n = static_cast<std::size_t>(parse_int(f[2], lineno));
    r.m = static_cast<std::size_t>(parse_int(f[3], lineno));
    r.compression_ratio = parse_real(f[4], lineno);
    r.repeats = static_cast<std::size_t>(parse_int(f[5], lineno));
    r.metric = f[6];
    r.value = parse_real(f[7], lineno);
    r.wall_time_s = parse_real(f[8], lineno);
    std::uint64_t seed = 0;
    const auto [ptr, ec] = std::from_chars(f[9].data(), f[9].data() + f[9].size(), seed);
    if (ec != std::errc() || ptr != f[9].data() + f[9].size()) throw ParseError("invalid seed '" + f[9] + "'", lineno);
    r.seed = seed;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ResultRow> read_results(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_results(in);
}

}  // namespace optisketch
