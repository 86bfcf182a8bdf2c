#include "sparsekit/graph_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "sparsekit/error.hpp"

namespace sparsekit {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

long long parse_int(const std::string& tok, std::size_t line,
                    const char* what) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, std::string("invalid ") + what + " '" + tok + "'");
  }
  return v;
}

double parse_real(const std::string& tok, std::size_t line, const char* what) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    throw ParseError(line, std::string("invalid ") + what + " '" + tok + "'");
  }
  return v;
}

std::string trim_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

GraphFormat parse_graph_format(const std::string& name) {
  if (name == "tsv") return GraphFormat::kTsv;
  if (name == "mtx") return GraphFormat::kMatrixMarket;
  throw Error(ErrorCode::kInvalidArgument, "unknown graph format '" + name + "'");
}

std::string format_real(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

WeightedGraph read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::set<std::pair<int, int>> seen;
  long long declared = -1;
  long long max_id = -1;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim_cr(raw);
    auto fields = split_fields(s);
    if (fields.empty()) continue;
    if (fields[0][0] == '#') {
      if (fields[0] == "#" && fields.size() == 3 && fields[1] == "vertices") {
        declared = parse_int(fields[2], line, "vertex count");
      }
      continue;
    }
    if (fields.size() != 3) {
      throw ParseError(line, "expected 3 fields 'a b w', got " +
                                 std::to_string(fields.size()));
    }
    const long long a = parse_int(fields[0], line, "vertex id");
    const long long b = parse_int(fields[1], line, "vertex id");
    const double w = parse_real(fields[2], line, "weight");
    if (a < 0 || b < 0 || a > (1LL << 30) || b > (1LL << 30)) {
      throw ParseError(line, "vertex id out of range");
    }
    if (a == b) throw ParseError(line, "self loop");
    if (w <= 0.0) throw ParseError(line, "weight must be positive");
    const int lo = static_cast<int>(std::min(a, b));
    const int hi = static_cast<int>(std::max(a, b));
    if (!seen.emplace(lo, hi).second) throw ParseError(line, "duplicate edge");
    edges.push_back({lo, hi, w});
    max_id = std::max(max_id, static_cast<long long>(hi));
  }
  if (declared >= 0 && declared <= max_id) {
    throw ParseError(line, "vertex count header is smaller than the largest id");
  }
  const long long n = std::max(declared, max_id + 1);
  if (n < 1) throw ParseError(line, "empty graph");
  return WeightedGraph(static_cast<int>(n), std::move(edges));
}

void write_edge_list(std::ostream& out, const WeightedGraph& g) {
  out << "# vertices " << g.n_vertices() << '\n';
  for (const Edge& e : g.edges()) {
    out << e.a << '\t' << e.b << '\t' << format_real(e.w) << '\n';
  }
}

WeightedGraph read_matrix_market(std::istream& in) {
  std::string raw;
  std::size_t line = 0;
  if (!std::getline(in, raw)) throw ParseError(1, "empty input");
  ++line;
  {
    auto f = split_fields(trim_cr(raw));
    for (auto& t : f) {
      for (auto& c : t) c = static_cast<char>(std::tolower(c));
    }
    if (f.size() != 5 || f[0] != "%%matrixmarket" || f[1] != "matrix" ||
        f[2] != "coordinate" || (f[3] != "real" && f[3] != "integer") ||
        f[4] != "symmetric") {
      throw ParseError(line,
                       "expected '%%MatrixMarket matrix coordinate real "
                       "symmetric'");
    }
  }
  long long rows = -1, cols = -1, nnz = -1;
  while (std::getline(in, raw)) {
    ++line;
    auto f = split_fields(trim_cr(raw));
    if (f.empty() || f[0][0] == '%') continue;
    if (f.size() != 3) throw ParseError(line, "expected size line 'n n nnz'");
    rows = parse_int(f[0], line, "row count");
    cols = parse_int(f[1], line, "column count");
    nnz = parse_int(f[2], line, "entry count");
    break;
  }
  if (rows < 1 || rows != cols || nnz < 0) {
    throw ParseError(line, "Laplacian must be square with positive size");
  }
  std::vector<Edge> edges;
  std::map<std::pair<int, int>, std::size_t> seen;
  std::vector<double> diag(rows, std::nan(""));
  std::vector<std::size_t> diag_line(rows, 0);
  long long count = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto f = split_fields(trim_cr(raw));
    if (f.empty() || f[0][0] == '%') continue;
    if (f.size() != 3) throw ParseError(line, "expected entry 'i j value'");
    const long long i = parse_int(f[0], line, "row index");
    const long long j = parse_int(f[1], line, "column index");
    const double v = parse_real(f[2], line, "value");
    if (i < 1 || j < 1 || i > rows || j > rows) {
      throw ParseError(line, "index out of range");
    }
    ++count;
    if (i == j) {
      diag[i - 1] = v;
      diag_line[i - 1] = line;
      continue;
    }
    if (v == 0.0) continue;
    if (v > 0.0) {
      throw ParseError(line, "positive off-diagonal entry; not a Laplacian");
    }
    const int lo = static_cast<int>(std::min(i, j) - 1);
    const int hi = static_cast<int>(std::max(i, j) - 1);
    if (!seen.emplace(std::make_pair(lo, hi), line).second) {
      throw ParseError(line, "entry repeated (store one triangle only)");
    }
    edges.push_back({lo, hi, -v});
  }
  if (count != nnz) {
    throw ParseError(line, "entry count " + std::to_string(count) +
                               " does not match header " + std::to_string(nnz));
  }
  std::vector<double> degree(rows, 0.0);
  for (const Edge& e : edges) {
    degree[e.a] += e.w;
    degree[e.b] += e.w;
  }
  for (long long v = 0; v < rows; ++v) {
    if (std::isnan(diag[v])) continue;
    const double scale = std::max(1.0, std::abs(degree[v]));
    if (std::abs(diag[v] - degree[v]) > 1e-9 * scale) {
      throw ParseError(diag_line[v],
                       "diagonal entry does not equal the weighted degree");
    }
  }
  return WeightedGraph(static_cast<int>(rows), std::move(edges));
}

void write_matrix_market(std::ostream& out, const WeightedGraph& g) {
  std::vector<double> degree(g.n_vertices(), 0.0);
  for (const Edge& e : g.edges()) {
    degree[e.a] += e.w;
    degree[e.b] += e.w;
  }
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << g.n_vertices() << ' ' << g.n_vertices() << ' '
      << g.n_vertices() + g.edge_count() << '\n';
  for (int v = 0; v < g.n_vertices(); ++v) {
    out << v + 1 << ' ' << v + 1 << ' ' << format_real(degree[v]) << '\n';
  }
  for (const Edge& e : g.edges()) {
    out << e.b + 1 << ' ' << e.a + 1 << ' ' << format_real(-e.w) << '\n';
  }
}

WeightedGraph load_graph(const std::string& path, GraphFormat format) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  return format == GraphFormat::kTsv ? read_edge_list(in)
                                     : read_matrix_market(in);
}

void save_graph(const std::string& path, const WeightedGraph& g,
                GraphFormat format) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  if (format == GraphFormat::kTsv) {
    write_edge_list(out, g);
  } else {
    write_matrix_market(out, g);
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path + "'");
}

Eigen::MatrixXd read_vectors(std::istream& in) {
  std::string raw;
  std::size_t line = 0;
  long long n = -1, m = -1;
  while (std::getline(in, raw)) {
    ++line;
    auto f = split_fields(trim_cr(raw));
    if (f.empty() || f[0][0] == '#') continue;
    if (f.size() != 2) throw ParseError(line, "expected header 'n m'");
    n = parse_int(f[0], line, "dimension");
    m = parse_int(f[1], line, "vector count");
    break;
  }
  if (n < 1 || m < 1) throw ParseError(line, "dimension and count must be >= 1");
  Eigen::MatrixXd v(n, m);
  long long col = 0;
  while (col < m && std::getline(in, raw)) {
    ++line;
    auto f = split_fields(trim_cr(raw));
    if (f.empty() || f[0][0] == '#') continue;
    if (static_cast<long long>(f.size()) != n) {
      throw ParseError(line, "expected " + std::to_string(n) + " values, got " +
                                 std::to_string(f.size()));
    }
    for (long long r = 0; r < n; ++r) v(r, col) = parse_real(f[r], line, "value");
    ++col;
  }
  if (col != m) {
    throw ParseError(line, "expected " + std::to_string(m) + " vectors, got " +
                               std::to_string(col));
  }
  return v;
}

void write_vectors(std::ostream& out, const Eigen::MatrixXd& vectors) {
  out << vectors.rows() << ' ' << vectors.cols() << '\n';
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      if (r) out << ' ';
      out << format_real(vectors(r, c));
    }
    out << '\n';
  }
}

void write_scalars(std::ostream& out, const std::vector<double>& s) {
  for (double x : s) out << format_real(x) << '\n';
}

}  // namespace sparsekit
