#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <Eigen/SVD>

#include "optisketch/data_io.hpp"
#include "optisketch/error.hpp"

using namespace optisketch;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("optisketch_io_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::filesystem::path file(const std::string& name, const std::string& contents) const {
    const auto p = path_ / name;
    std::ofstream(p) << contents;
    return p;
  }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

Graph edges(const std::string& text, bool one_based = false) {
  std::istringstream in(text);
  return read_edge_list(in, one_based);
}

Matrix mm(const std::string& text) {
  std::istringstream in(text);
  return read_matrix_market(in);
}

std::size_t parse_error_line(const std::function<void()>& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

ResultRow sample_row(std::size_t i) {
  ResultRow r;
  r.algorithm = i % 2 ? "trace" : "matmul";
  r.backend = i % 3 ? "dense" : "optical";
  r.n = 64 + i;
  r.m = 1 + (i * 7) % r.n;
  r.compression_ratio = static_cast<double>(r.m) / static_cast<double>(r.n);
  r.repeats = i % 50 + 1;
  r.metric = "relative_frobenius_error";
  r.value = std::exp(-static_cast<double>(i) / 37.0) / 3.0;
  r.wall_time_s = 1e-6 * static_cast<double>(i * i) + 0.1;
  r.seed = 0xFFFFFFFFFFFFFFFFull - i;
  return r;
}

bool same(const ResultRow& a, const ResultRow& b) {
  const auto eq = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
  return a.algorithm == b.algorithm && a.backend == b.backend && a.n == b.n && a.m == b.m &&
         eq(a.compression_ratio, b.compression_ratio) && a.repeats == b.repeats && a.metric == b.metric &&
         eq(a.value, b.value) && eq(a.wall_time_s, b.wall_time_s) && a.seed == b.seed;
}

}  // namespace

// ---------------------------------------------------------------------------

TEST_CASE("edge lists") {
  const Graph k3 = edges("1 2\n2 3\n1 3\n", true);
  const Matrix& a = k3.adjacency;
  REQUIRE(a.rows() == 3);
  CHECK(a == generate_complete_graph(3));
  CHECK((a * a * a).trace() == 6.0);

  const Graph zero_based = edges("# comment\n0 1\n\n1 2  # trailing\n0 2\n");
  CHECK(zero_based.adjacency == a);

  const Graph loops = edges("0 1\n1 1\n2 2\n1 2\n");
  CHECK(loops.self_loops_dropped == 2);
  CHECK(loops.adjacency.diagonal().isZero());

  const Graph weighted = edges("0 1 0.5\n");
  CHECK(weighted.adjacency(0, 1) == 1.0);
}

TEST_CASE("edge lists are invariant under orientation and duplication") {
  const Graph base = edges("0 1\n1 2\n2 3\n3 0\n0 2\n");
  const Graph flipped = edges("1 0\n2 1\n3 2\n0 3\n2 0\n");
  const Graph doubled = edges("0 1\n1 0\n1 2\n2 3\n3 0\n0 2\n0 2\n2 1\n");
  CHECK(flipped.adjacency == base.adjacency);
  CHECK(doubled.adjacency == base.adjacency);
  CHECK(doubled.duplicate_edges == 3);
  CHECK(base.duplicate_edges == 0);
  CHECK(base.adjacency == base.adjacency.transpose());
}

TEST_CASE("edge list parse errors report line numbers") {
  CHECK(parse_error_line([] { edges("0 1\n1 x\n"); }) == 2);
  CHECK(parse_error_line([] { edges("0 1\n# c\n1\n"); }) == 3);
  CHECK(parse_error_line([] { edges("0 1\n1 2 3 4\n"); }) == 2);
  CHECK(parse_error_line([] { edges("1 2\n0 1\n", true); }) == 2);
  CHECK(parse_error_line([] { edges("0 -1\n"); }) == 1);
  CHECK(parse_error_line([] { edges("# nothing\n"); }) >= 1);
  CHECK(parse_error_line([] { edges("% not a header\n0 1\n"); }) == 1);
  CHECK_THROWS_AS(edges(""), ParseError);
}

TEST_CASE("MatrixMarket graphs are 1-based") {
  const Graph g = edges("%%MatrixMarket matrix coordinate pattern symmetric\n3 3 4\n2 1\n3 2\n3 1\n3 3\n");
  CHECK(g.adjacency == generate_complete_graph(3));
  CHECK(g.self_loops_dropped == 1);
}

// ---------------------------------------------------------------------------

TEST_CASE("MatrixMarket reading") {
  CHECK(mm("%%MatrixMarket matrix coordinate real general\n% comment\n2 2 2\n1 1 1.0\n2 2 1\n") ==
        Matrix::Identity(2, 2));

  const Matrix sym = mm("%%MatrixMarket matrix coordinate real symmetric\n3 3 3\n1 1 2\n3 1 -1.5\n2 2 4\n");
  Matrix expected(3, 3);
  expected << 2, 0, -1.5, 0, 4, 0, -1.5, 0, 0;
  CHECK(sym == expected);

  Matrix arr(2, 3);
  arr << 1, 3, 5, 2, 4, 6;
  CHECK(mm("%%MatrixMarket matrix array real general\n2 3\n1\n2\n3\n4\n5\n6\n") == arr);
  CHECK(mm("%%MatrixMarket matrix array integer general\n1 1\n7\n")(0, 0) == 7.0);
  CHECK(mm("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 2\n")(0, 1) == 1.0);
}

TEST_CASE("MatrixMarket parse errors report line numbers") {
  CHECK(parse_error_line([] { mm("hello\n"); }) == 1);
  CHECK(parse_error_line([] { mm(""); }) == 1);
  CHECK(parse_error_line([] { mm("%%MatrixMarket matrix coordinate complex general\n1 1 0\n"); }) == 1);
  CHECK(parse_error_line([] { mm("%%MatrixMarket matrix coordinate real general\n2 2\n"); }) == 2);
  CHECK(parse_error_line([] { mm("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n"); }) == 3);
  CHECK(parse_error_line([] { mm("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n2 2 abc\n"); }) == 4);
  CHECK(parse_error_line([] { mm("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n"); }) == 4);
  CHECK(parse_error_line([] { mm("%%MatrixMarket matrix array real general\n2 1\n1\n2\n3\n"); }) == 5);
  CHECK(parse_error_line([] { mm("%%MatrixMarket matrix coordinate real symmetric\n2 3 0\n"); }) == 2);
}

TEST_CASE("MatrixMarket write/read round trip") {
  Matrix a(3, 4);
  a << 1.0 / 3.0, -2.5e-300, 7e300, 0.0, -0.0, M_PI, 1e-17, 42.0, std::nextafter(1.0, 2.0), -1.0, 123456789.123456789,
      std::numeric_limits<double>::denorm_min();
  std::stringstream ss;
  write_matrix_market(ss, a);
  const Matrix back = read_matrix_market(ss);
  CHECK(back == a);

  TempDir dir;
  const auto path = dir / "a.mtx";
  {
    std::ofstream out(path);
    write_matrix_market(out, a);
  }
  CHECK(read_matrix_market(path) == a);
  CHECK_THROWS_AS(read_matrix_market(dir / "missing.mtx"), IoError);
}

// ---------------------------------------------------------------------------

TEST_CASE("load_matrix") {
  TempDir dir;
  MatrixSource mm_src{.kind = SourceKind::MatrixMarketFile,
                      .path = dir.file("i.mtx", "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n2 2 1\n")};
  const auto id = load_matrix(mm_src);
  CHECK(id.values == Matrix::Identity(2, 2));
  CHECK(id.symmetric);
  CHECK(id.binary);

  MatrixSource el{.kind = SourceKind::EdgeListFile, .path = dir.file("g.txt", "1 2\n2 3\n3 3\n"), .one_based = true};
  const auto g = load_matrix(el);
  CHECK(g.values.rows() == 3);
  CHECK(g.self_loops_dropped == 1);
  CHECK(g.binary);

  const auto k4 = load_matrix({.kind = SourceKind::SyntheticCompleteGraph, .n = 4});
  CHECK(k4.values.rowwise().sum() == Vector::Constant(4, 3.0));
  CHECK(k4.values.diagonal().isZero());

  MatrixSource missing{.kind = SourceKind::EdgeListFile, .path = dir / "nope.txt"};
  CHECK_THROWS_AS(load_matrix(missing), IoError);
}

TEST_CASE("synthetic generators") {
  const Matrix lr = generate_low_rank(50, 50, 3, 0.0, 1);
  const Vector s = Eigen::JacobiSVD<Matrix>(lr).singularValues();
  CHECK(s[3] <= 1e-10 * s[0]);
  CHECK(s[2] > 1e-3 * s[0]);

  const Matrix noisy = generate_low_rank(50, 40, 3, 0.1, 1);
  const Matrix clean = generate_low_rank(50, 40, 3, 0.0, 1);
  CHECK((noisy - clean).norm() / clean.norm() == doctest::Approx(0.1).epsilon(1e-12));

  const Vector flat = Eigen::JacobiSVD<Matrix>(generate_spectrum(8, 8, 1.0, 2)).singularValues();
  CHECK((flat.array() - 1.0).abs().maxCoeff() <= 1e-12);

  const Vector geo = Eigen::JacobiSVD<Matrix>(generate_spectrum(12, 7, 0.5, 3)).singularValues();
  for (Eigen::Index i = 0; i < geo.size(); ++i) CHECK(geo[i] == doctest::Approx(std::pow(0.5, i)).epsilon(1e-10));

  const Matrix psd = generate_spectrum(10, 10, 0.7, 4, true);
  CHECK((psd - psd.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(psd.trace() == doctest::Approx((1.0 - std::pow(0.7, 10)) / 0.3).epsilon(1e-12));

  // edge count ~ Binomial(C(100, 2), 0.1)
  const Matrix er = generate_erdos_renyi(100, 0.1, 5);
  const double count = er.sum() / 2.0;
  const double trials = 4950.0;
  CHECK(std::abs(count - 495.0) <= 5.0 * std::sqrt(trials * 0.1 * 0.9));
  CHECK(er == er.transpose());
  CHECK(er.diagonal().isZero());
  CHECK((er.array() == 0.0 || er.array() == 1.0).all());
  CHECK(generate_erdos_renyi(30, 0.0, 5).isZero());
  CHECK(generate_erdos_renyi(30, 1.0, 5) == generate_complete_graph(30));

  CHECK_THROWS_AS(generate_low_rank(10, 10, 11, 0.0, 1), ConfigError);
  CHECK_THROWS_AS(generate_low_rank(10, 10, 0, 0.0, 1), ConfigError);
  CHECK_THROWS_AS(generate_erdos_renyi(10, 1.5, 1), ConfigError);
  CHECK_THROWS_AS(generate_erdos_renyi(10, -0.1, 1), ConfigError);
  CHECK_THROWS_AS(generate_spectrum(4, 5, 0.5, 1, true), ConfigError);
}

TEST_CASE("synthetic generation is deterministic per parameters and seed") {
  CHECK(generate_low_rank(30, 20, 4, 0.05, 9) == generate_low_rank(30, 20, 4, 0.05, 9));
  CHECK(generate_low_rank(30, 20, 4, 0.05, 9) != generate_low_rank(30, 20, 4, 0.05, 10));
  CHECK(generate_spectrum(16, 16, 0.9, 9) == generate_spectrum(16, 16, 0.9, 9));
  CHECK(generate_erdos_renyi(40, 0.3, 9) == generate_erdos_renyi(40, 0.3, 9));
  CHECK(generate_erdos_renyi(40, 0.3, 9) != generate_erdos_renyi(40, 0.3, 11));
  const auto src = parse_synthetic("spectrum:n=16,ratio=0.9", 9);
  CHECK(load_matrix(src).values == load_matrix(src).values);
}

TEST_CASE("parse_synthetic") {
  const auto lr = parse_synthetic("low-rank:n=200,r=5,noise=0.01,rows=300", 7);
  CHECK(lr.kind == SourceKind::SyntheticLowRank);
  CHECK(lr.n == 200);
  CHECK(lr.row_count() == 300);
  CHECK(lr.rank == 5);
  CHECK(lr.noise == 0.01);
  CHECK(lr.seed == 7);
  CHECK(parse_synthetic("low-rank:n=10,rank=2,seed=3", 7).seed == 3);

  const auto er = parse_synthetic("erdos-renyi:n=100,p=0.1", 0);
  CHECK(er.kind == SourceKind::SyntheticErdosRenyi);
  CHECK(er.probability == 0.1);
  CHECK(describe(er) == "erdos-renyi:n=100,p=0.1");

  const auto sp = parse_synthetic("spectrum:n=64,ratio=0.9,sym=1", 0);
  CHECK(sp.symmetric);
  CHECK(sp.ratio == 0.9);
  CHECK(parse_synthetic("complete:n=4", 0).kind == SourceKind::SyntheticCompleteGraph);

  CHECK_THROWS_AS(parse_synthetic("banana:n=4", 0), ConfigError);
  CHECK_THROWS_AS(parse_synthetic("complete", 0), ConfigError);
  CHECK_THROWS_AS(parse_synthetic("complete:n=x", 0), ConfigError);
  CHECK_THROWS_AS(parse_synthetic("complete:n=4,q=1", 0), ConfigError);
  CHECK_THROWS_AS(parse_synthetic("complete:n", 0), ConfigError);
}

// ---------------------------------------------------------------------------

TEST_CASE("CSV results") {
  std::stringstream empty;
  write_results(empty, {});
  CHECK(empty.str() == std::string(kResultHeader) + "\n");
  CHECK(read_results(empty).empty());

  std::stringstream one;
  write_results(one, {sample_row(3)});
  const std::string text = one.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  const auto back = read_results(one);
  REQUIRE(back.size() == 1);
  CHECK(same(back[0], sample_row(3)));

  std::vector<ResultRow> rows;
  for (std::size_t i = 0; i < 1000; ++i) rows.push_back(sample_row(i));
  rows[10].value = std::numeric_limits<double>::quiet_NaN();
  rows[10].metric = "none";
  rows[11].value = std::numeric_limits<double>::infinity();
  TempDir dir;
  write_results(rows, dir / "r.csv");
  const auto again = read_results(dir / "r.csv");
  REQUIRE(again.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(same(again[i], rows[i]));
}

TEST_CASE("CSV row validation and parse errors") {
  ResultRow bad = sample_row(1);
  bad.compression_ratio += 1e-12;
  std::stringstream out;
  CHECK_THROWS_AS(write_results(out, {bad}), ConfigError);
  bad = sample_row(1);
  bad.metric = "a,b";
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = sample_row(1);
  bad.backend.clear();
  CHECK_THROWS_AS(validate(bad), ConfigError);

  const std::string header = std::string(kResultHeader) + "\n";
  const auto line_of = [](const std::string& text) {
    return parse_error_line([&] {
      std::istringstream in(text);
      read_results(in);
    });
  };
  CHECK(line_of("wrong,header\n") == 1);
  CHECK(line_of(header + "trace,dense,4,2,0.5,1,m,1,0,0\ntrace,dense,4,2\n") == 3);
  CHECK(line_of(header + "trace,dense,four,2,0.5,1,m,1,0,0\n") == 2);
  CHECK(line_of(header + "trace,dense,4,2,0.5,1,m,abc,0,0\n") == 2);
  CHECK(line_of(header + "trace,dense,4,2,0.5,1,m,1,0,-3\n") == 2);
  CHECK_THROWS_AS(write_results({}, std::filesystem::path("/nonexistent/dir/r.csv")), IoError);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-320, -7.25e200, 123456789012345678.0}) {
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}
