#pragma once

#include "smoothsamp/graph.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace smoothsamp::io {
// Text formats. Numbers use the shortest decimal form that parses back to the same
// double, so write -> read round-trips bit-exactly.
// write -> read round-trips bit-exactly.
//
//   graph:  "n <N>" / optional "coords" followed by N lines "x y" / "u v w" per edge
//   matrix: "<rows> <cols>" / rows lines of cols decimals
//   signal: "n <len>" / one decimal per line

std::string format_double(double v);

void write_graph(std::ostream &os, const Graph &g);
Graph read_graph(std::istream &is);

void write_matrix(std::ostream &os, const Eigen::MatrixXd &M);
Eigen::MatrixXd read_matrix(std::istream &is);

void write_signal(std::ostream &os, const Eigen::VectorXd &x);
Eigen::VectorXd read_signal(std::istream &is);

// file helpers; throw std::runtime_error naming the path on failure
void save_graph(const std::filesystem::path &p, const Graph &g);
Graph load_graph(const std::filesystem::path &p);
void save_matrix(const std::filesystem::path &p, const Eigen::MatrixXd &M);
Eigen::MatrixXd load_matrix(const std::filesystem::path &p);
void save_signal(const std::filesystem::path &p, const Eigen::VectorXd &x);
Eigen::VectorXd load_signal(const std::filesystem::path &p);

} // namespace smoothsamp::io
