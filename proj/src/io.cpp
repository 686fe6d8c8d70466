#include "smoothsamp/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace smoothsamp::io {

namespace {

[[noreturn]] void parse_error(const std::string &what) {
  throw std::runtime_error("parse error: " + what);
}

// next non-empty line, with surrounding whitespace trimmed
bool next_line(std::istream &is, std::string &line) {
  while (std::getline(is, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    return true;
  }
  return false;
}

int parse_length_header(std::istream &is, const char *what) {
  std::string line;
  if (!next_line(is, line)) parse_error(std::string(what) + ": missing header");
  std::istringstream ss(line);
  std::string tag;
  long long n = -1;
  if (!(ss >> tag >> n) || tag != "n" || n <= 0)
    parse_error(std::string(what) + ": expected header 'n <count>', got '" + line + "'");
  return static_cast<int>(n);
}

std::ifstream open_in(const std::filesystem::path &p) {
  std::ifstream f(p);
  if (!f) throw std::runtime_error("cannot open '" + p.string() + "' for reading");
  return f;
}

std::ofstream open_out(const std::filesystem::path &p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + p.string() + "' for writing");
  return f;
}

} // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_graph(std::ostream &os, const Graph &g) {
  validate(g);
  os << "n " << g.num_vertices << '\n';
  if (g.coordinates) {
    os << "coords\n";
    for (const auto &p : *g.coordinates) os << format_double(p.x) << ' ' << format_double(p.y) << '\n';
  }
  for (const auto &e : g.edges)
    os << e.u << ' ' << e.v << ' ' << format_double(e.w) << '\n';
}

Graph read_graph(std::istream &is) {
  Graph g;
  g.num_vertices = parse_length_header(is, "graph");
  std::string line;
  bool first = true;
  while (next_line(is, line)) {
    if (first && line == "coords") {
      std::vector<Point2> pts(g.num_vertices);
      for (auto &p : pts) {
        if (!next_line(is, line)) parse_error("graph: truncated coords block");
        std::istringstream ss(line);
        if (!(ss >> p.x >> p.y)) parse_error("graph: bad coordinate line '" + line + "'");
      }
      g.coordinates = std::move(pts);
      first = false;
      continue;
    }
    first = false;
    std::istringstream ss(line);
    Edge e;
    if (!(ss >> e.u >> e.v >> e.w)) parse_error("graph: bad edge line '" + line + "'");
    g.edges.push_back(e);
  }
  validate(g);
  return g;
}

void write_matrix(std::ostream &os, const Eigen::MatrixXd &M) {
  os << M.rows() << ' ' << M.cols() << '\n';
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) os << ' ';
      os << format_double(M(i, j));
    }
    os << '\n';
  }
}

Eigen::MatrixXd read_matrix(std::istream &is) {
  long long rows = -1, cols = -1;
  if (!(is >> rows >> cols) || rows < 0 || cols < 0)
    parse_error("matrix: expected header '<rows> <cols>'");
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      if (!(is >> M(i, j))) parse_error("matrix: truncated data");
  return M;
}

void write_signal(std::ostream &os, const Eigen::VectorXd &x) {
  os << "n " << x.size() << '\n';
  for (Eigen::Index i = 0; i < x.size(); ++i) os << format_double(x(i)) << '\n';
}

Eigen::VectorXd read_signal(std::istream &is) {
  const int n = parse_length_header(is, "signal");
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i)
    if (!(is >> x(i))) parse_error("signal: expected " + std::to_string(n) + " values");
  return x;
}

void save_graph(const std::filesystem::path &p, const Graph &g) {
  auto f = open_out(p);
  write_graph(f, g);
}
Graph load_graph(const std::filesystem::path &p) {
  auto f = open_in(p);
  return read_graph(f);
}
void save_matrix(const std::filesystem::path &p, const Eigen::MatrixXd &M) {
  auto f = open_out(p);
  write_matrix(f, M);
}
Eigen::MatrixXd load_matrix(const std::filesystem::path &p) {
  auto f = open_in(p);
  return read_matrix(f);
}
void save_signal(const std::filesystem::path &p, const Eigen::VectorXd &x) {
  auto f = open_out(p);
  write_signal(f, x);
}
Eigen::VectorXd load_signal(const std::filesystem::path &p) {
  auto f = open_in(p);
  return read_signal(f);
}

} // namespace smoothsamp::io
