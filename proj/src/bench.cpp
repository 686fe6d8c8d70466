#include "smoothsamp/bench.hpp"

#include "smoothsamp/io.hpp"
#include "smoothsamp/reconstruction.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace smoothsamp::bench {

// ---------------------------------------------------------------- config

void ExperimentConfig::validate() const {
  if (n < 2) throw std::invalid_argument("config: n must be at least 2");
  if (K < 1 || K >= n) throw std::invalid_argument("config: K must satisfy 1 <= K < n");
  if (graph_k < 1 || graph_k >= n)
    throw std::invalid_argument("config: graph_k must satisfy 1 <= graph_k < n");
  if (trials < 1) throw std::invalid_argument("config: trials must be at least 1");
  if (jobs < 1) throw std::invalid_argument("config: jobs must be at least 1");
  model.validate();
  resolved_design().validate();
}

DesignConfig ExperimentConfig::resolved_design() const {
  DesignConfig d = design;
  if (auto_epsilon) d.epsilon = std::sqrt(static_cast<double>(n) * K);
  return d;
}

ExperimentConfig ExperimentConfig::gmrf_preset() {
  ExperimentConfig cfg;
  cfg.model.kind = GmrfModel{0.1};
  return cfg;
}

ExperimentConfig ExperimentConfig::pwl_preset() {
  ExperimentConfig cfg;
  cfg.model.kind = PwlModel{static_cast<double>(cfg.K) / cfg.n};
  return cfg;
}

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void config_error(int line, const std::string &what) {
  throw std::invalid_argument("config line " + std::to_string(line) + ": " + what);
}

template <typename T>
T parse_number(const std::string &v, int line, const std::string &key) {
  std::istringstream ss(v);
  T out{};
  if (!(ss >> out) || !(ss >> std::ws).eof()) config_error(line, "bad value for " + key + ": '" + v + "'");
  return out;
}

bool parse_bool(const std::string &v, int line, const std::string &key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  config_error(line, "bad boolean for " + key + ": '" + v + "'");
}

const char *t_mode_name(TMode m) { return m == TMode::Zero ? "zero" : "identity"; }

} // namespace

ExperimentConfig parse_config(std::istream &is) {
  ExperimentConfig cfg;
  std::optional<double> pwl_density;
  bool pwl = false;
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) config_error(lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));

    if (key == "n") cfg.n = parse_number<int>(val, lineno, key);
    else if (key == "K") cfg.K = parse_number<int>(val, lineno, key);
    else if (key == "graph_k") cfg.graph_k = parse_number<int>(val, lineno, key);
    else if (key == "trials") cfg.trials = parse_number<int>(val, lineno, key);
    else if (key == "master_seed") cfg.master_seed = parse_number<std::uint64_t>(val, lineno, key);
    else if (key == "output_dir") cfg.output_dir = val;
    else if (key == "fixed_graph") cfg.fixed_graph = parse_bool(val, lineno, key);
    else if (key == "jobs") cfg.jobs = parse_number<int>(val, lineno, key);
    else if (key == "baseline") {
      if (val == "random_vertex") cfg.baseline = Baseline::RandomVertex;
      else if (val == "none") cfg.baseline = Baseline::None;
      else config_error(lineno, "baseline must be random_vertex or none");
    } else if (key == "response") {
      std::istringstream ss(val);
      std::string kind;
      double slope = 0, offset = 0;
      if (!(ss >> kind >> slope >> offset) || kind != "affine")
        config_error(lineno, "response must be 'affine <slope> <offset>'");
      cfg.response = SpectralResponse::affine(slope, offset);
    } else if (key == "model") {
      std::istringstream ss(val);
      std::string kind;
      ss >> kind;
      double p = 0;
      const bool has_param = static_cast<bool>(ss >> p);
      if (kind == "gmrf") {
        pwl = false;
        cfg.model.kind = GmrfModel{has_param ? p : 0.1};
      } else if (kind == "pwl") {
        pwl = true;
        pwl_density = has_param ? std::optional<double>(p) : std::nullopt;
      } else {
        config_error(lineno, "model must be 'gmrf [eta]' or 'pwl [density]'");
      }
    } else if (key == "design.epsilon") {
      if (val == "auto") cfg.auto_epsilon = true;
      else {
        cfg.auto_epsilon = false;
        cfg.design.epsilon = parse_number<double>(val, lineno, key);
      }
    } else if (key == "design.gamma") cfg.design.gamma = parse_number<double>(val, lineno, key);
    else if (key == "design.stop_tol") cfg.design.stop_tol = parse_number<double>(val, lineno, key);
    else if (key == "design.max_iter") cfg.design.max_iter = parse_number<int>(val, lineno, key);
    else if (key == "design.rank_tol") cfg.design.rank_tol = parse_number<double>(val, lineno, key);
    else if (key == "design.t_mode") {
      if (val == "zero") cfg.design.t_mode = TMode::Zero;
      else if (val == "identity") cfg.design.t_mode = TMode::Identity;
      else config_error(lineno, "design.t_mode must be zero or identity");
    } else {
      config_error(lineno, "unknown key '" + key + "'");
    }
  }
  // pwl without an explicit density uses the sampling ratio K / n
  if (pwl) cfg.model.kind = PwlModel{pwl_density.value_or(static_cast<double>(cfg.K) / cfg.n)};
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &p) {
  std::ifstream f(p);
  if (!f) throw std::runtime_error("cannot open config '" + p.string() + "'");
  return parse_config(f);
}

void write_config(std::ostream &os, const ExperimentConfig &cfg) {
  using io::format_double;
  os << "n = " << cfg.n << '\n'
     << "K = " << cfg.K << '\n'
     << "graph_k = " << cfg.graph_k << '\n'
     << "response = affine " << format_double(cfg.response.slope) << ' '
     << format_double(cfg.response.offset) << '\n';
  if (const auto *g = std::get_if<GmrfModel>(&cfg.model.kind))
    os << "model = gmrf " << format_double(g->eta) << '\n';
  else
    os << "model = pwl " << format_double(std::get<PwlModel>(cfg.model.kind).density) << '\n';
  os << "design.epsilon = " << (cfg.auto_epsilon ? "auto" : format_double(cfg.design.epsilon)) << '\n'
     << "design.gamma = " << format_double(cfg.design.gamma) << '\n'
     << "design.t_mode = " << t_mode_name(cfg.design.t_mode) << '\n'
     << "design.stop_tol = " << format_double(cfg.design.stop_tol) << '\n'
     << "design.max_iter = " << cfg.design.max_iter << '\n'
     << "design.rank_tol = " << format_double(cfg.design.rank_tol) << '\n'
     << "trials = " << cfg.trials << '\n'
     << "baseline = " << (cfg.baseline == Baseline::RandomVertex ? "random_vertex" : "none") << '\n'
     << "master_seed = " << cfg.master_seed << '\n'
     << "fixed_graph = " << (cfg.fixed_graph ? "true" : "false") << '\n';
  if (!cfg.output_dir.empty()) os << "output_dir = " << cfg.output_dir.string() << '\n';
}

// ---------------------------------------------------------------- primitives

double mse(const Eigen::VectorXd &x_hat, const Eigen::VectorXd &x) {
  if (x_hat.size() != x.size()) throw std::invalid_argument("mse: length mismatch");
  if (x.size() == 0) throw std::invalid_argument("mse: empty signals");
  return (x_hat - x).squaredNorm() / static_cast<double>(x.size());
}

Eigen::MatrixXd random_vertex_sampler(int n, int K, std::uint64_t seed) {
  if (K < 0 || n < 1 || K > n)
    throw std::invalid_argument("random_vertex_sampler: need 0 <= K <= n");
  std::mt19937_64 rng(seed);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = 0; i < K; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(perm[i], perm[pick(rng)]);
  }
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, K);
  for (int j = 0; j < K; ++j) S(perm[j], j) = 1.0;
  return S;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t trial_seed(std::uint64_t master_seed, int trial_index) {
  return splitmix64(master_seed ^ splitmix64(static_cast<std::uint64_t>(trial_index)));
}

std::uint64_t stream_seed(std::uint64_t ts, Stream s) {
  return splitmix64(ts + static_cast<std::uint64_t>(s));
}

// ---------------------------------------------------------------- trials

std::vector<TrialRecord> run_trial(const ExperimentConfig &cfg, int trial_index) {
  cfg.validate();
  const std::uint64_t ts = trial_seed(cfg.master_seed, trial_index);
  const std::uint64_t graph_seed =
      cfg.fixed_graph ? stream_seed(trial_seed(cfg.master_seed, -1), Stream::Graph)
                      : stream_seed(ts, Stream::Graph);

  const Graph g = build_random_sensor_graph(cfg.n, cfg.graph_k, graph_seed);
  const Eigen::MatrixXd L = laplacian(g);
  const auto spec = eigendecompose(L);
  const auto vo = build_variation_operator(spec, cfg.response);

  Eigen::VectorXd x;
  const std::uint64_t signal_seed = stream_seed(ts, Stream::Signal);
  if (const auto *gm = std::get_if<GmrfModel>(&cfg.model.kind))
    x = gen_gmrf(spec, gm->eta, signal_seed);
  else
    x = gen_pwl(g, L, std::get<PwlModel>(cfg.model.kind).density, signal_seed);

  std::vector<TrialRecord> out;
  auto score = [&](const char *method, const Eigen::MatrixXd &S, int iters, bool converged) {
    const auto p = build_pipeline(vo, S);
    const Eigen::VectorXd x_hat = reconstruct(p, sample(S, x));
    out.push_back({trial_index, method, mse(x_hat, x), iters, p.used_pseudo_inverse, converged});
  };

  DesignConfig dc = cfg.resolved_design();
  dc.seed = stream_seed(ts, Stream::Design);
  const auto design = design_sampling_operator(vo.A, cfg.K, dc);
  score(kProposed, design.S, design.iterations, design.converged);

  if (cfg.baseline == Baseline::RandomVertex)
    score(kRandomVertex, random_vertex_sampler(cfg.n, cfg.K, stream_seed(ts, Stream::Baseline)), 0,
          true);
  return out;
}

std::vector<MethodSummary> summarize(const std::vector<TrialRecord> &records) {
  std::vector<MethodSummary> out;
  std::map<std::string, std::vector<double>> by_method;
  for (const auto &r : records) {
    if (!by_method.count(r.method)) out.push_back({r.method, 0, 0.0, 0.0});
    by_method[r.method].push_back(r.mse);
  }
  for (auto &s : out) {
    const auto &v = by_method[s.method];
    s.count = static_cast<int>(v.size());
    s.mean_mse = std::accumulate(v.begin(), v.end(), 0.0) / s.count;
    double ss = 0.0;
    for (double m : v) ss += (m - s.mean_mse) * (m - s.mean_mse);
    s.std_mse = s.count > 1 ? std::sqrt(ss / (s.count - 1)) : 0.0;
  }
  return out;
}

const MethodSummary *ExperimentReport::summary(const std::string &method) const {
  for (const auto &s : summaries)
    if (s.method == method) return &s;
  return nullptr;
}

ExperimentReport run_benchmark(const ExperimentConfig &cfg) {
  cfg.validate();
  std::vector<std::vector<TrialRecord>> per_trial(cfg.trials);
  std::vector<std::exception_ptr> errors(cfg.trials);
  std::atomic<int> next{0};

  auto worker = [&] {
    for (int t = next++; t < cfg.trials; t = next++) {
      try {
        per_trial[t] = run_trial(cfg, t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  const int jobs = std::min(cfg.jobs, cfg.trials);
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  for (int t = 0; t < cfg.trials; ++t) {
    if (!errors[t]) continue;
    try {
      std::rethrow_exception(errors[t]);
    } catch (const std::exception &e) {
      throw std::runtime_error("trial " + std::to_string(t) + ": " + e.what());
    }
  }

  ExperimentReport report;
  report.n = cfg.n;
  report.K = cfg.K;
  for (auto &recs : per_trial)
    for (auto &r : recs) report.records.push_back(std::move(r));
  report.summaries = summarize(report.records);
  if (!cfg.output_dir.empty()) write_report(cfg.output_dir, report);
  return report;
}

// ---------------------------------------------------------------- output

void write_trials_csv(std::ostream &os, const ExperimentReport &r) {
  os << "trial,method,mse,design_iterations,used_pseudo_inverse,converged\n";
  for (const auto &t : r.records)
    os << t.trial << ',' << t.method << ',' << io::format_double(t.mse) << ','
       << t.design_iterations << ',' << (t.used_pseudo_inverse ? 1 : 0) << ','
       << (t.converged ? 1 : 0) << '\n';
}

void write_summary_csv(std::ostream &os, const ExperimentReport &r) {
  os << "method,trials,n,K,sampling_ratio,mean_mse,std_mse\n";
  const double ratio = static_cast<double>(r.K) / r.n;
  for (const auto &s : r.summaries)
    os << s.method << ',' << s.count << ',' << r.n << ',' << r.K << ','
       << io::format_double(ratio) << ',' << io::format_double(s.mean_mse) << ','
       << io::format_double(s.std_mse) << '\n';
}

void write_report(const std::filesystem::path &dir, const ExperimentReport &r) {
  std::filesystem::create_directories(dir);
  std::ofstream trials(dir / "trials.csv", std::ios::binary);
  std::ofstream summary(dir / "summary.csv", std::ios::binary);
  if (!trials || !summary)
    throw std::runtime_error("cannot write report files in '" + dir.string() + "'");
  write_trials_csv(trials, r);
  write_summary_csv(summary, r);
}

void write_trace_csv(std::ostream &os, const std::vector<IterationRecord> &trace) {
  os << "iter,nuclear_norm,step_norm\n";
  for (std::size_t i = 0; i < trace.size(); ++i)
    os << i << ',' << io::format_double(trace[i].nuclear_norm) << ','
       << io::format_double(trace[i].step_norm) << '\n';
}

std::string diverging_color(double v, double lo, double hi) {
  double t = 0.5;
  if (hi > lo) t = std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
  int r, g, b;
  if (t < 0.5) {
    const double s = t / 0.5; // blue -> white
    r = g = static_cast<int>(std::lround(255.0 * s));
    b = 255;
  } else {
    const double s = (t - 0.5) / 0.5; // white -> red
    r = 255;
    g = b = static_cast<int>(std::lround(255.0 * (1.0 - s)));
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

std::string render_svg(const Graph &g, const Eigen::VectorXd &x) {
  validate(g);
  if (!g.coordinates) throw std::invalid_argument("render_svg: graph has no coordinates");
  if (x.size() != g.num_vertices) throw std::invalid_argument("render_svg: signal length mismatch");

  constexpr double size = 512.0, margin = 16.0;
  const auto &pts = *g.coordinates;
  auto px = [&](double v) { return io::format_double(margin + v * (size - 2 * margin)); };
  auto py = [&](double v) { return io::format_double(size - margin - v * (size - 2 * margin)); };
  const double lo = x.minCoeff(), hi = x.maxCoeff();

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"512\" height=\"512\" "
        "viewBox=\"0 0 512 512\">\n"
     << "<rect width=\"512\" height=\"512\" fill=\"#ffffff\"/>\n"
     << "<g stroke=\"#999999\" stroke-width=\"0.6\">\n";
  for (const auto &e : g.edges)
    os << "<line x1=\"" << px(pts[e.u].x) << "\" y1=\"" << py(pts[e.u].y) << "\" x2=\""
       << px(pts[e.v].x) << "\" y2=\"" << py(pts[e.v].y) << "\"/>\n";
  os << "</g>\n<g stroke=\"#333333\" stroke-width=\"0.5\">\n";
  for (int v = 0; v < g.num_vertices; ++v)
    os << "<circle cx=\"" << px(pts[v].x) << "\" cy=\"" << py(pts[v].y) << "\" r=\"5\" fill=\""
       << diverging_color(x(v), lo, hi) << "\"/>\n";
  os << "</g>\n</svg>\n";
  return os.str();
}

void emit_svg(const Graph &g, const Eigen::VectorXd &x, const std::filesystem::path &path) {
  const std::string svg = render_svg(g, x);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << svg;
}

} // namespace smoothsamp::bench
