#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "smoothsamp/io.hpp"

#include "test_util.hpp"

#include <sstream>

using namespace smoothsamp;

TEST_CASE("round trips are bit exact") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const Graph g = build_random_sensor_graph(30, 5, seed);
    std::stringstream ss;
    io::write_graph(ss, g);
    CHECK(io::read_graph(ss) == g);

    const Eigen::MatrixXd M = testutil::gaussian(7, 3, seed) * 1e-7;
    std::stringstream ms;
    io::write_matrix(ms, M);
    CHECK(io::read_matrix(ms) == M);

    const Eigen::VectorXd x = testutil::gaussian(11, 1, seed + 9) * 1e5;
    std::stringstream xs;
    io::write_signal(xs, x);
    CHECK(io::read_signal(xs) == x);
  }
}

TEST_CASE("graph format: header, optional coords, edges") {
  std::istringstream plain("n 3\n0 1 0.5\n1 2 2\n");
  const Graph g = io::read_graph(plain);
  CHECK(g.num_vertices == 3);
  CHECK_FALSE(g.coordinates.has_value());
  REQUIRE(g.edges.size() == 2);
  CHECK(g.edges[1] == Edge{1, 2, 2.0});

  std::istringstream with_coords("n 2\ncoords\n0.1 0.2\n0.3 0.4\n0 1 1\n");
  const Graph h = io::read_graph(with_coords);
  REQUIRE(h.coordinates.has_value());
  CHECK((*h.coordinates)[1] == Point2{0.3, 0.4});

  std::ostringstream os;
  io::write_graph(os, g);
  CHECK(os.str() == "n 3\n0 1 0.5\n1 2 2\n");
}

TEST_CASE("matrix and signal formats") {
  Eigen::MatrixXd M(2, 3);
  M << 1, 2.5, -3, 0, 1e-20, 4;
  std::ostringstream os;
  io::write_matrix(os, M);
  CHECK(os.str() == "2 3\n1 2.5 -3\n0 1e-20 4\n");

  std::ostringstream xs;
  io::write_signal(xs, Eigen::Vector2d(0.25, -1));
  CHECK(xs.str() == "n 2\n0.25\n-1\n");
}

TEST_CASE("malformed inputs are rejected") {
  std::istringstream bad_header("m 3\n");
  CHECK_THROWS_AS(io::read_graph(bad_header), std::runtime_error);
  std::istringstream bad_edge("n 3\n0 1\n");
  CHECK_THROWS_AS(io::read_graph(bad_edge), std::runtime_error);
  std::istringstream self_loop("n 3\n1 1 1\n");
  CHECK_THROWS_AS(io::read_graph(self_loop), std::invalid_argument);
  std::istringstream short_coords("n 3\ncoords\n0 0\n");
  CHECK_THROWS_AS(io::read_graph(short_coords), std::runtime_error);
  std::istringstream short_matrix("2 2\n1 2 3\n");
  CHECK_THROWS_AS(io::read_matrix(short_matrix), std::runtime_error);
  std::istringstream short_signal("n 3\n1\n2\n");
  CHECK_THROWS_AS(io::read_signal(short_signal), std::runtime_error);
  CHECK_THROWS_AS(io::load_graph("/nonexistent/graph.txt"), std::runtime_error);
}
