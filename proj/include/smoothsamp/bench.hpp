#pragma once

#include "smoothsamp/graph.hpp"
#include "smoothsamp/pldc.hpp"
#include "smoothsamp/signal_models.hpp"
#include "smoothsamp/spectral_ops.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace smoothsamp::bench {

enum class Baseline { RandomVertex, None };

struct ExperimentConfig {
  int n = 256;
  int K = 32;
  int graph_k = 6;
  SpectralResponse response = SpectralResponse::affine(1.0, 0.1);
  SignalModelSpec model;          ///< seed is ignored; signals use per-trial seeds
  DesignConfig design;            ///< seed is ignored; epsilon replaced when auto_epsilon
  bool auto_epsilon = true;       ///< epsilon = sqrt(n K)
  int trials = 100;
  Baseline baseline = Baseline::RandomVertex;
  std::uint64_t master_seed = 1;
  std::filesystem::path output_dir;
  bool fixed_graph = false;       ///< one graph shared by every trial
  int jobs = 1;                   ///< worker threads; output does not depend on it

  void validate() const;
  double sampling_ratio() const { return static_cast<double>(K) / n; }
  /// Design settings actually used for n, K (epsilon resolved).
  DesignConfig resolved_design() const;

  static ExperimentConfig gmrf_preset();
  static ExperimentConfig pwl_preset();
};

/// Parses the key = value config format. Keys are the ExperimentConfig field
/// names; `design.<field>` addresses DesignConfig fields. Blank lines and
/// `#` comments are ignored. Unknown keys are an error.
ExperimentConfig parse_config(std::istream &is);
ExperimentConfig load_config(const std::filesystem::path &p);
void write_config(std::ostream &os, const ExperimentConfig &cfg);

inline constexpr const char *kProposed = "proposed";
inline constexpr const char *kRandomVertex = "random_vertex";

struct TrialRecord {
  int trial = 0;
  std::string method;
  double mse = 0.0;
  int design_iterations = 0;
  bool used_pseudo_inverse = false;
  bool converged = true;
};

struct MethodSummary {
  std::string method;
  int count = 0;
  double mean_mse = 0.0;
  double std_mse = 0.0; ///< sample standard deviation, 0 for a single trial
};

struct ExperimentReport {
  int n = 0;
  int K = 0;
  std::vector<TrialRecord> records; ///< ordered by trial, then method
  std::vector<MethodSummary> summaries;

  const MethodSummary *summary(const std::string &method) const;
};

/// ||x_hat - x||^2 / |V|.
double mse(const Eigen::VectorXd &x_hat, const Eigen::VectorXd &x);

/// n x K matrix whose columns are distinct standard basis vectors.
Eigen::MatrixXd random_vertex_sampler(int n, int K, std::uint64_t seed);

// Seed derivation. splitmix64 finalizer (Steele, Lea, Flood 2014):
//   z += 0x9e3779b97f4a7c15; z = (z ^ z>>30) * 0xbf58476d1ce4e5b9;
//   z = (z ^ z>>27) * 0x94d049bb133111eb; return z ^ z>>31.
// trial seed = splitmix64(master ^ splitmix64(trial_index)); each consumer
// inside a trial takes splitmix64(trial_seed + stream) with a fixed stream id.
std::uint64_t splitmix64(std::uint64_t z);
std::uint64_t trial_seed(std::uint64_t master_seed, int trial_index);

enum class Stream : std::uint64_t { Graph = 1, Design = 2, Signal = 3, Baseline = 4 };
std::uint64_t stream_seed(std::uint64_t trial_seed, Stream s);

std::vector<TrialRecord> run_trial(const ExperimentConfig &cfg, int trial_index);

std::vector<MethodSummary> summarize(const std::vector<TrialRecord> &records);

/// Runs every trial (optionally in parallel) and, when cfg.output_dir is set,
/// writes trials.csv and summary.csv there. Trial failures are rethrown as
/// std::runtime_error naming the trial.
ExperimentReport run_benchmark(const ExperimentConfig &cfg);

void write_trials_csv(std::ostream &os, const ExperimentReport &r);
void write_summary_csv(std::ostream &os, const ExperimentReport &r);
void write_report(const std::filesystem::path &dir, const ExperimentReport &r);

/// Trace as CSV with header `iter,nuclear_norm,step_norm`.
void write_trace_csv(std::ostream &os, const std::vector<IterationRecord> &trace);

/// Diverging map over [lo, hi]: blue (#0000ff) at lo, white at the midpoint,
/// red (#ff0000) at hi, linear in between. A degenerate range maps to white.
std::string diverging_color(double v, double lo, double hi);

std::string render_svg(const Graph &g, const Eigen::VectorXd &x);
void emit_svg(const Graph &g, const Eigen::VectorXd &x, const std::filesystem::path &path);

} // namespace smoothsamp::bench
