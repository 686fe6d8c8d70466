#include "smoothsamp/graph.hpp"

#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>

namespace smoothsamp {

void validate(const Graph &g) {
  if (g.num_vertices <= 0)
    throw std::invalid_argument("graph: num_vertices must be positive");
  std::set<std::pair<int, int>> seen;
  for (const auto &e : g.edges) {
    if (e.u < 0 || e.v < 0 || e.u >= g.num_vertices || e.v >= g.num_vertices)
      throw std::invalid_argument("graph: edge endpoint out of range");
    if (e.u == e.v)
      throw std::invalid_argument("graph: self loop at vertex " + std::to_string(e.u));
    if (!(e.w > 0.0) || !std::isfinite(e.w))
      throw std::invalid_argument("graph: edge weights must be positive and finite");
    if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second)
      throw std::invalid_argument("graph: duplicate edge " + std::to_string(e.u) + "-" +
                                  std::to_string(e.v));
  }
  if (g.coordinates && static_cast<int>(g.coordinates->size()) != g.num_vertices)
    throw std::invalid_argument("graph: coordinate count does not match vertex count");
}

bool is_connected(const Graph &g) {
  if (g.num_vertices <= 1) return g.num_vertices == 1;
  std::vector<std::vector<int>> adj(g.num_vertices);
  for (const auto &e : g.edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<char> visited(g.num_vertices, 0);
  std::vector<int> stack{0};
  visited[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (!visited[v]) {
        visited[v] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == g.num_vertices;
}

namespace {

Graph knn_gaussian_graph(const std::vector<Point2> &pts, int k) {
  const int n = static_cast<int>(pts.size());
  auto dist = [&](int a, int b) { return std::hypot(pts[a].x - pts[b].x, pts[a].y - pts[b].y); };

  // selected[u] holds the k nearest neighbours of u, ties by lower index
  std::vector<std::vector<int>> selected(n);
  double dist_sum = 0.0;
  std::vector<int> order(n);
  for (int u = 0; u < n; ++u) {
    std::iota(order.begin(), order.end(), 0);
    std::erase(order, u);
    std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
      const double da = dist(u, a), db = dist(u, b);
      return da < db || (da == db && a < b);
    });
    selected[u].assign(order.begin(), order.begin() + k);
    for (int v : selected[u]) dist_sum += dist(u, v);
  }
  const double sigma = dist_sum / (static_cast<double>(n) * k);

  std::set<std::pair<int, int>> pairs;
  for (int u = 0; u < n; ++u)
    for (int v : selected[u]) pairs.emplace(std::min(u, v), std::max(u, v));

  Graph g;
  g.num_vertices = n;
  g.coordinates = pts;
  g.edges.reserve(pairs.size());
  for (const auto &[u, v] : pairs) {
    const double d = dist(u, v);
    double w = std::exp(-d * d / (2.0 * sigma * sigma));
    // coincident points would give sigma = 0; keep the weight valid
    if (!(w > 0.0) || !std::isfinite(w)) w = std::numeric_limits<double>::min();
    g.edges.push_back({u, v, w});
  }
  return g;
}

} // namespace

Graph build_random_sensor_graph(int n, int k, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("build_random_sensor_graph: n must be at least 2");
  if (k < 1 || k >= n)
    throw std::invalid_argument("build_random_sensor_graph: k must satisfy 1 <= k < n");

  for (int attempt = 0; attempt < kSensorGraphMaxAttempts; ++attempt) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Point2> pts(n);
    for (auto &p : pts) {
      p.x = unit(rng);
      p.y = unit(rng);
    }
    Graph g = knn_gaussian_graph(pts, k);
    if (is_connected(g)) return g;
  }
  throw std::runtime_error("build_random_sensor_graph: no connected graph after " +
                           std::to_string(kSensorGraphMaxAttempts) + " attempts (n=" +
                           std::to_string(n) + ", k=" + std::to_string(k) + ")");
}

} // namespace smoothsamp
