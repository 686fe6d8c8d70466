// smoothsamp command-line front end.
//
//   smoothsamp graph        generate a random sensor graph
//   smoothsamp signal       draw a GMRF or PWL signal on a graph
//   smoothsamp design       graph -> designed sampling operator S + trace
//   smoothsamp reconstruct  graph, S, signal -> reconstruction + MSE
//   smoothsamp bench        config -> trials.csv, summary.csv
//   smoothsamp render       graph + signal -> SVG

#include "smoothsamp/bench.hpp"
#include "smoothsamp/io.hpp"
#include "smoothsamp/reconstruction.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace smoothsamp;

namespace {

struct ResponseOpts {
  double slope = 1.0;
  double offset = 0.1;

  void add(CLI::App *app) {
    app->add_option("--response-slope", slope, "spectral response slope")->capture_default_str();
    app->add_option("--response-offset", offset, "spectral response offset")->capture_default_str();
  }
  SpectralResponse get() const { return SpectralResponse::affine(slope, offset); }
};

const std::map<std::string, TMode> kTModes{{"zero", TMode::Zero}, {"identity", TMode::Identity}};

VariationOperator<double> operator_for(const Graph &g, const SpectralResponse &resp) {
  return build_variation_operator(eigendecompose(laplacian(g)), resp);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Sampling operator design for smooth graph signals"};
  app.require_subcommand(1);

  // graph
  int g_n = 256, g_k = 6;
  std::uint64_t g_seed = 1;
  fs::path g_out = "graph.txt";
  auto *graph_cmd = app.add_subcommand("graph", "generate a random k-NN sensor graph");
  graph_cmd->add_option("-n,--vertices", g_n, "vertex count")->capture_default_str();
  graph_cmd->add_option("-k,--neighbors", g_k, "nearest neighbours per vertex")->capture_default_str();
  graph_cmd->add_option("--seed", g_seed, "random seed")->capture_default_str();
  graph_cmd->add_option("-o,--out", g_out, "output graph file")->capture_default_str();

  // signal
  fs::path s_graph, s_out = "signal.txt";
  std::string s_model = "gmrf";
  double s_eta = 0.1, s_density = 0.125;
  std::uint64_t s_seed = 1;
  auto *signal_cmd = app.add_subcommand("signal", "draw a graph signal");
  signal_cmd->add_option("--graph", s_graph, "graph file")->required();
  signal_cmd->add_option("--model", s_model, "gmrf or pwl")
      ->check(CLI::IsMember({"gmrf", "pwl"}))
      ->capture_default_str();
  signal_cmd->add_option("--eta", s_eta, "GMRF eta")->capture_default_str();
  signal_cmd->add_option("--density", s_density, "PWL anchor density")->capture_default_str();
  signal_cmd->add_option("--seed", s_seed, "random seed")->capture_default_str();
  signal_cmd->add_option("-o,--out", s_out, "output signal file")->capture_default_str();

  // design
  fs::path d_graph, d_out_dir = ".";
  int d_K = 32;
  DesignConfig d_cfg;
  std::optional<double> d_epsilon;
  std::uint64_t d_seed = 1;
  ResponseOpts d_resp;
  auto *design_cmd = app.add_subcommand("design", "design a sampling operator for a graph");
  design_cmd->add_option("--graph", d_graph, "graph file")->required();
  design_cmd->add_option("-K,--samples", d_K, "number of samples")->capture_default_str();
  design_cmd->add_option("--epsilon", d_epsilon, "Frobenius radius (default sqrt(n K))");
  design_cmd->add_option("--gamma", d_cfg.gamma, "step parameter")->capture_default_str();
  design_cmd->add_option("--t-mode", d_cfg.t_mode, "zero or identity")
      ->transform(CLI::CheckedTransformer(kTModes, CLI::ignore_case))
      ->default_str("zero");
  design_cmd->add_option("--stop-tol", d_cfg.stop_tol, "relative step tolerance")->capture_default_str();
  design_cmd->add_option("--max-iter", d_cfg.max_iter, "iteration cap")->capture_default_str();
  design_cmd->add_option("--rank-tol", d_cfg.rank_tol, "relative rank cutoff")->capture_default_str();
  design_cmd->add_option("--seed", d_seed, "seed for the initial point")->capture_default_str();
  design_cmd->add_option("--out-dir", d_out_dir, "directory for S.txt and trace.csv")->capture_default_str();
  d_resp.add(design_cmd);

  // reconstruct
  fs::path r_graph, r_S, r_signal, r_out = "reconstruction.txt";
  ResponseOpts r_resp;
  auto *recon_cmd = app.add_subcommand("reconstruct", "sample a signal with S and reconstruct it");
  recon_cmd->add_option("--graph", r_graph, "graph file")->required();
  recon_cmd->add_option("--S", r_S, "sampling operator matrix file")->required();
  recon_cmd->add_option("--signal", r_signal, "ground-truth signal file")->required();
  recon_cmd->add_option("-o,--out", r_out, "output reconstruction file")->capture_default_str();
  r_resp.add(recon_cmd);

  // bench
  fs::path b_config, b_out_dir;
  std::optional<std::uint64_t> b_seed;
  std::optional<int> b_trials, b_jobs;
  bool b_fixed_graph = false;
  std::optional<TMode> b_t_mode;
  std::string b_preset;
  auto *bench_cmd = app.add_subcommand("bench", "run the Monte-Carlo sampling benchmark");
  bench_cmd->add_option("--config", b_config, "key = value experiment config")->check(CLI::ExistingFile);
  bench_cmd->add_option("--preset", b_preset, "gmrf or pwl experimental preset")
      ->check(CLI::IsMember({"gmrf", "pwl"}));
  bench_cmd->add_option("--seed", b_seed, "master seed");
  bench_cmd->add_option("--trials", b_trials, "number of trials");
  bench_cmd->add_option("--jobs", b_jobs, "worker threads");
  bench_cmd->add_option("--out-dir", b_out_dir, "report directory");
  bench_cmd->add_flag("--fixed-graph", b_fixed_graph, "reuse one graph across trials");
  bench_cmd->add_option("--t-mode", b_t_mode, "zero or identity")
      ->transform(CLI::CheckedTransformer(kTModes, CLI::ignore_case));

  // render
  fs::path v_graph, v_signal, v_out = "signal.svg";
  auto *render_cmd = app.add_subcommand("render", "draw a graph signal as SVG");
  render_cmd->add_option("--graph", v_graph, "graph file with coordinates")->required();
  render_cmd->add_option("--signal", v_signal, "signal file")->required();
  render_cmd->add_option("-o,--out", v_out, "output SVG path")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*graph_cmd) {
      io::save_graph(g_out, build_random_sensor_graph(g_n, g_k, g_seed));
    } else if (*signal_cmd) {
      const Graph g = io::load_graph(s_graph);
      const Eigen::MatrixXd L = laplacian(g);
      const Eigen::VectorXd x = s_model == "gmrf" ? gen_gmrf(eigendecompose(L), s_eta, s_seed)
                                                  : gen_pwl(g, L, s_density, s_seed);
      io::save_signal(s_out, x);
    } else if (*design_cmd) {
      const Graph g = io::load_graph(d_graph);
      const auto vo = operator_for(g, d_resp.get());
      d_cfg.epsilon = d_epsilon.value_or(std::sqrt(static_cast<double>(g.num_vertices) * d_K));
      d_cfg.seed = d_seed;
      const auto design = design_sampling_operator(vo.A, d_K, d_cfg);
      fs::create_directories(d_out_dir);
      io::save_matrix(d_out_dir / "S.txt", design.S);
      std::ofstream trace(d_out_dir / "trace.csv", std::ios::binary);
      bench::write_trace_csv(trace, design.trace);
      std::cout << "iterations " << design.iterations << "\nconverged "
                << (design.converged ? "true" : "false") << "\nrank "
                << rank_of(vo.A * design.S, 1e-8) << '\n';
    } else if (*recon_cmd) {
      const Graph g = io::load_graph(r_graph);
      const auto vo = operator_for(g, r_resp.get());
      const Eigen::MatrixXd S = io::load_matrix(r_S);
      const Eigen::VectorXd x = io::load_signal(r_signal);
      const auto p = build_pipeline(vo, S);
      const Eigen::VectorXd x_hat = reconstruct(p, sample(S, x));
      io::save_signal(r_out, x_hat);
      std::cout << "mse " << io::format_double(bench::mse(x_hat, x)) << "\npseudo_inverse "
                << (p.used_pseudo_inverse ? "true" : "false") << '\n';
    } else if (*bench_cmd) {
      bench::ExperimentConfig cfg = b_preset == "pwl" ? bench::ExperimentConfig::pwl_preset()
                                                      : bench::ExperimentConfig::gmrf_preset();
      if (!b_config.empty()) cfg = bench::load_config(b_config);
      if (b_seed) cfg.master_seed = *b_seed;
      if (b_trials) cfg.trials = *b_trials;
      if (b_jobs) cfg.jobs = *b_jobs;
      if (b_fixed_graph) cfg.fixed_graph = true;
      if (b_t_mode) cfg.design.t_mode = *b_t_mode;
      if (!b_out_dir.empty()) cfg.output_dir = b_out_dir;
      const auto report = bench::run_benchmark(cfg);
      bench::write_summary_csv(std::cout, report);
    } else if (*render_cmd) {
      bench::emit_svg(io::load_graph(v_graph), io::load_signal(v_signal), v_out);
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
