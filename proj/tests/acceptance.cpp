// Acceptance checks 1-10. Prints one PASS/FAIL line per criterion and exits
// nonzero when any of them fails.

#include "smoothsamp/bench.hpp"
#include "smoothsamp/io.hpp"
#include "smoothsamp/reconstruction.hpp"

#include "test_util.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>

using namespace smoothsamp;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string &detail) {
  std::printf("criterion %2d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(double v) { return io::format_double(v); }

VariationOperator<double> sensor_operator(int n, std::uint64_t seed) {
  const Graph g = build_random_sensor_graph(n, 6, seed);
  return build_variation_operator(eigendecompose(laplacian(g)), SpectralResponse::affine(1.0, 0.1));
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void criterion_1() {
  const auto cfg = bench::ExperimentConfig::gmrf_preset();
  const auto r = bench::run_benchmark(cfg);
  const double p = r.summary(bench::kProposed)->mean_mse;
  const double b = r.summary(bench::kRandomVertex)->mean_mse;
  const bool in_range = p >= 0.03 && p <= 0.12;
  report(1, in_range && p < b,
         "GMRF proposed=" + fmt(p) + " (+-" + fmt(r.summary(bench::kProposed)->std_mse) +
             ") baseline=" + fmt(b) + " range[0.03,0.12]=" + (in_range ? "ok" : "no") +
             " beats_baseline=" + (p < b ? "ok" : "no"));
}

void criterion_2() {
  const auto cfg = bench::ExperimentConfig::pwl_preset();
  const auto r = bench::run_benchmark(cfg);
  const double p = r.summary(bench::kProposed)->mean_mse;
  const double b = r.summary(bench::kRandomVertex)->mean_mse;
  const bool half = p < 0.5 * b, small = p < 1e-2;
  report(2, half && small,
         "PWL proposed=" + fmt(p) + " baseline=" + fmt(b) + " ratio=" + fmt(p / b) +
             " below_half=" + (half ? "ok" : "no") + " below_1e-2=" + (small ? "ok" : "no"));
}

void criterion_3() {
  const int n = 64, K = 8;
  const auto vo = sensor_operator(n, 301);
  const auto design = design_sampling_operator(vo.A, K, DesignConfig::defaults_for(n, K, 302));
  const auto p = build_pipeline(vo, design.S);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Eigen::VectorXd x = p.W * testutil::gaussian(K, 1, 1000 + i);
    worst = std::max(worst, testutil::relative_error(reconstruct(p, sample(design.S, x)), x));
  }
  report(3, !p.used_pseudo_inverse && worst <= 1e-8,
         "max relative error " + fmt(worst) + (p.used_pseudo_inverse ? " (pseudo-inverse used)" : ""));
}

void criterion_4() {
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto vo = sensor_operator(32, 400 + i);
    const Eigen::MatrixXd S = testutil::gaussian(32, 8, 500 + i);
    const Eigen::VectorXd x = testutil::gaussian(32, 1, 600 + i);
    const Eigen::VectorXd c = sample(S, x);
    const auto p = build_pipeline(vo, S);
    worst = std::max(worst, testutil::relative_error(reconstruct(p, c), ls_oracle(vo, S, c)));
  }
  report(4, worst <= 1e-8, "max relative deviation from KKT oracle " + fmt(worst));
}

void criterion_5() {
  const int n = 64, K = 8;
  int bad_feasible = 0, bad_monotone = 0, bad_converged = 0, bad_rank = 0, max_iters = 0;
  for (int run = 0; run < 20; ++run) {
    const auto vo = sensor_operator(n, 700 + run);
    const auto cfg = DesignConfig::defaults_for(n, K, 800 + run);
    const auto d = design_sampling_operator(vo.A, K, cfg);
    bool feasible = d.S.norm() <= cfg.epsilon, monotone = true;
    for (std::size_t t = 0; t < d.trace.size(); ++t) {
      feasible &= d.trace[t].frobenius_norm <= cfg.epsilon;
      if (t > 0) {
        const double prev = d.trace[t - 1].nuclear_norm;
        monotone &= d.trace[t].nuclear_norm >= prev - 1e-9 * prev;
      }
    }
    const double final_nuc = testutil::nuclear_norm(vo.A * d.S);
    monotone &= final_nuc >= d.trace.back().nuclear_norm * (1 - 1e-9);
    bad_feasible += !feasible;
    bad_monotone += !monotone;
    bad_converged += !(d.converged && d.iterations < 10000);
    bad_rank += rank_of(vo.A * d.S, 1e-8) != K;
    max_iters = std::max(max_iters, d.iterations);
  }
  report(5, bad_feasible + bad_monotone + bad_converged + bad_rank == 0,
         "violations: feasibility=" + std::to_string(bad_feasible) + " monotone=" +
             std::to_string(bad_monotone) + " convergence=" + std::to_string(bad_converged) +
             " rank=" + std::to_string(bad_rank) + " (max iterations " + std::to_string(max_iters) + ")");
}

void criterion_6() {
  const int n = 16, K = 4;
  const auto cfg = DesignConfig::defaults_for(n, K, 906);
  const auto d = design_sampling_operator(Eigen::MatrixXd::Identity(n, n), K, cfg);
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(d.S).singularValues();
  const double target_sv = cfg.epsilon / std::sqrt(double(K));
  const double target_nuc = cfg.epsilon * std::sqrt(double(K));
  const double sv_dev = ((sv.array() - target_sv).abs() / target_sv).maxCoeff();
  const double nuc_dev = std::abs(sv.sum() - target_nuc) / target_nuc;
  report(6, sv_dev <= 0.01 && nuc_dev <= 0.01,
         "singular value deviation " + fmt(sv_dev) + ", nuclear norm deviation " + fmt(nuc_dev));
}

void criterion_7() {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dim(1, 12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const int r = dim(rng), c = dim(rng);
    const double eps = 0.1 + 5.0 * unit(rng);
    const Eigen::MatrixXd X = testutil::gaussian(r, c, 2 * i) * (4.0 * unit(rng));
    const Eigen::MatrixXd Y = testutil::gaussian(r, c, 2 * i + 1) * (4.0 * unit(rng));
    const Eigen::MatrixXd PX = project_frobenius_ball(X, eps), PY = project_frobenius_ball(Y, eps);
    const bool idem = testutil::max_abs(project_frobenius_ball(PX, eps) - PX) <= 1e-12;
    const bool inside = PX.norm() <= eps && PY.norm() <= eps;
    const bool nonexp = (PX - PY).norm() <= (X - Y).norm() + 1e-10;
    bad += !(idem && inside && nonexp);
  }
  report(7, bad == 0, std::to_string(bad) + " of 1000 probes violated a projection property");
}

void criterion_8() {
  const int n = 16, K = 4;
  int bad = 0, probes = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 1000; ++i) {
    const auto vo = sensor_operator(n, 2000 + i % 10);
    Eigen::MatrixXd S = testutil::gaussian(n, K, 3000 + i);
    if (i % 2) S.col(K - 1) = S.col(0); // rank-deficient AS separates the two modes
    const Eigen::MatrixXd Y = testutil::gaussian(n, K, 4000 + i);
    const Eigen::MatrixXd AS = vo.A * S;
    const double lhs = testutil::nuclear_norm(vo.A * Y);
    const double base = testutil::nuclear_norm(AS);
    for (TMode mode : {TMode::Zero, TMode::Identity}) {
      const Eigen::MatrixXd G = nuclear_subgradient(AS, mode);
      const double linear = ((Y - S).cwiseProduct(vo.A.transpose() * G)).sum();
      const double scale = std::max({1.0, lhs, base});
      const double gap = lhs - (base + linear);
      worst = std::min(worst, gap / scale);
      bad += gap < -1e-8 * scale;
      ++probes;
    }
  }
  report(8, bad == 0,
         std::to_string(bad) + " of " + std::to_string(probes) +
             " probes violated the inequality (smallest scaled gap " + fmt(worst) + ")");
}

void criterion_9() {
  const int n = 16, draws = 10000;
  const double eta = 0.1;
  const Graph g = build_random_sensor_graph(n, 6, 909);
  const auto spec = eigendecompose(laplacian(g));
  Eigen::VectorXd power = Eigen::VectorXd::Zero(n);
  for (int d = 0; d < draws; ++d)
    power += (spec.eigenvectors.transpose() * gen_gmrf(spec, eta, 5000 + d)).cwiseAbs2();
  power /= draws;
  double worst_power = 0.0;
  for (int i = 0; i < n; ++i) {
    const double expected = 1.0 / (spec.eigenvalues(i) + eta);
    worst_power = std::max(worst_power, std::abs(power(i) - expected) / expected);
  }

  double worst_harmonic = 0.0;
  for (int t = 0; t < 20; ++t) {
    const Graph h = build_random_sensor_graph(256, 6, 9100 + t);
    const Eigen::MatrixXd L = laplacian(h);
    std::vector<int> anchors;
    const Eigen::VectorXd x = gen_pwl(h, L, 0.125, 9200 + t, &anchors);
    const Eigen::VectorXd r = L * x;
    std::vector<char> is_anchor(256, 0);
    for (int a : anchors) is_anchor[a] = 1;
    for (int v = 0; v < 256; ++v)
      if (!is_anchor[v]) worst_harmonic = std::max(worst_harmonic, std::abs(r(v)));
  }
  report(9, worst_power <= 0.10 && worst_harmonic <= 1e-8,
         "max GMRF power deviation " + fmt(worst_power) + ", max PWL residual off anchors " +
             fmt(worst_harmonic));
}

void criterion_10() {
  auto cfg = bench::ExperimentConfig::pwl_preset();
  cfg.n = 64;
  cfg.K = 8;
  cfg.trials = 6;
  cfg.master_seed = 1010;
  const fs::path root = fs::temp_directory_path() / "smoothsamp_acceptance_determinism";
  fs::remove_all(root);
  cfg.output_dir = root / "a";
  bench::run_benchmark(cfg);
  cfg.output_dir = root / "b";
  cfg.jobs = 3;
  bench::run_benchmark(cfg);
  bool same = true;
  for (const char *f : {"trials.csv", "summary.csv"}) {
    const std::string a = slurp(root / "a" / f), b = slurp(root / "b" / f);
    same &= !a.empty() && a == b;
  }
  fs::remove_all(root);
  report(10, same, same ? "trials.csv and summary.csv byte-identical" : "reports differ");
}

} // namespace

int main() {
  const std::pair<int, void (*)()> checks[] = {
      {1, criterion_1}, {2, criterion_2}, {3, criterion_3}, {4, criterion_4}, {5, criterion_5},
      {6, criterion_6}, {7, criterion_7}, {8, criterion_8}, {9, criterion_9}, {10, criterion_10}};
  for (const auto &[id, fn] : checks) {
    try {
      fn();
    } catch (const std::exception &e) {
      report(id, false, std::string("exception: ") + e.what());
    }
  }
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
