// Command line front end; talks to the library exclusively through ggb.h.

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ggb.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void die(int code, const std::string& msg) { throw CliError{code, msg}; }

void check(ggb_status st) {
  if (st == GGB_OK) return;
  die(st == GGB_ERR_NUMERIC ? kExitNumeric : kExitUsage, ggb_last_error());
}

// Handle guards -----------------------------------------------------------

struct GraphDeleter {
  void operator()(ggb_graph* g) const { ggb_graph_free(g); }
};
struct MatrixDeleter {
  void operator()(ggb_matrix* m) const { ggb_matrix_free(m); }
};
struct FitDeleter {
  void operator()(ggb_fit* f) const { ggb_fit_free(f); }
};
using GraphPtr = std::unique_ptr<ggb_graph, GraphDeleter>;
using MatrixPtr = std::unique_ptr<ggb_matrix, MatrixDeleter>;
using FitPtr = std::unique_ptr<ggb_fit, FitDeleter>;

GraphPtr read_graph(const std::string& path) {
  ggb_graph* g = nullptr;
  check(ggb_graph_read(path.c_str(), &g));
  return GraphPtr(g);
}

MatrixPtr read_symmetric(const std::string& path) {
  ggb_matrix* m = nullptr;
  check(ggb_matrix_read_symmetric(path.c_str(), &m));
  return MatrixPtr(m);
}

MatrixPtr read_matrix(const std::string& path) {
  ggb_matrix* m = nullptr;
  check(ggb_matrix_read(path.c_str(), &m));
  return MatrixPtr(m);
}

// Manifest ----------------------------------------------------------------

void atomic_write(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out.good()) die(kExitUsage, "cannot write " + tmp);
    out << text;
    out.flush();
    if (!out.good()) die(kExitUsage, "write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    die(kExitUsage, "rename to " + path + " failed");
  }
}

std::vector<std::string> g_argv;

void write_manifest(const std::string& command, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs,
                    const std::string& manifest_path, std::uint64_t seed = 0,
                    bool has_seed = false) {
  nlohmann::json j;
  j["tool"] = "ggb";
  j["version"] = ggb_version();
  j["command"] = command;
  j["argv"] = g_argv;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  if (has_seed) j["seed"] = seed;
  atomic_write(manifest_path, j.dump(2) + "\n");
}

std::string manifest_path_for(const std::string& primary_output) {
  return primary_output + ".manifest.json";
}

// Shared estimator options --------------------------------------------------

struct EstimatorFlags {
  std::string method;
  std::string graph_path;
  double lam = 0.0;
  std::string delta = "-inf";
  int depth = -1;
  std::string weights_path;
  bool corr = false;
  double outer_tol = 1e-7;
  int outer_max_iter = 500;
  double prox_tol = 1e-8;
  int prox_max_sweeps = 100000;
  bool allow_nonconverged = false;
};

void add_estimator_flags(CLI::App* cmd, EstimatorFlags& ef, bool with_lam) {
  cmd->add_option("--method", ef.method, "ggb-global, ggb-local, or soft")->required();
  cmd->add_option("--graph", ef.graph_path, "seed graph edge list (required for ggb methods)");
  if (with_lam) cmd->add_option("--lam", ef.lam, "penalty level")->required();
  cmd->add_option("--delta", ef.delta, "eigenvalue floor, or -inf to disable (default)");
  cmd->add_option("--depth", ef.depth, "group depth M (-1 = auto)");
  cmd->add_option("--weights", ef.weights_path, "file with one positive group weight per line");
  cmd->add_flag("--corr", ef.corr, "estimate on the correlation matrix");
  cmd->add_option("--outer-tol", ef.outer_tol, "outer loop tolerance");
  cmd->add_option("--outer-max-iter", ef.outer_max_iter, "outer loop iteration cap");
  cmd->add_option("--prox-tol", ef.prox_tol, "inner solver tolerance");
  cmd->add_option("--prox-max-sweeps", ef.prox_max_sweeps, "inner solver sweep cap");
  cmd->add_flag("--allow-nonconverged", ef.allow_nonconverged,
                "exit 0 even if iteration caps were hit");
}

ggb_config config_from_flags(const EstimatorFlags& ef) {
  ggb_config cfg;
  ggb_config_init(&cfg);
  cfg.lam = ef.lam;
  if (ef.delta == "-inf" || ef.delta == "-Inf" || ef.delta == "-INF") {
    cfg.delta = -HUGE_VAL;
  } else {
    try {
      std::size_t used = 0;
      cfg.delta = std::stod(ef.delta, &used);
      if (used != ef.delta.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      die(kExitUsage, "bad --delta value '" + ef.delta + "'");
    }
  }
  cfg.depth = ef.depth;
  cfg.outer_tol = ef.outer_tol;
  cfg.outer_max_iter = ef.outer_max_iter;
  cfg.prox_tol = ef.prox_tol;
  cfg.prox_max_sweeps = ef.prox_max_sweeps;
  cfg.correlation = ef.corr ? 1 : 0;
  return cfg;
}

std::vector<double> read_weights(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) die(kExitUsage, "cannot open " + path);
  std::vector<double> w;
  double v;
  while (in >> v) w.push_back(v);
  if (w.empty()) die(kExitUsage, path + ": no weights found");
  return w;
}

GraphPtr graph_for_method(const EstimatorFlags& ef) {
  if (ef.method == "soft") {
    if (!ef.graph_path.empty()) return read_graph(ef.graph_path);
    return nullptr;
  }
  if (ef.graph_path.empty()) die(kExitUsage, "--graph is required for " + ef.method);
  return read_graph(ef.graph_path);
}

std::vector<double> resolve_grid(const ggb_matrix* s, const ggb_graph* g,
                                 const EstimatorFlags& ef, const std::string& lams_text,
                                 int grid_count, double grid_ratio) {
  std::vector<double> lams;
  if (!lams_text.empty()) {
    std::istringstream ss(lams_text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        lams.push_back(std::stod(tok));
      } catch (const std::exception&) {
        die(kExitUsage, "bad --lams entry '" + tok + "'");
      }
    }
    if (lams.empty()) die(kExitUsage, "--lams is empty");
    return lams;
  }
  double lmax = 0.0;
  check(ggb_lambda_max(s, g, ef.method.c_str(), ef.depth, &lmax));
  if (lmax <= 0.0) die(kExitUsage, "lambda-max is zero; supply --lams explicitly");
  lams.resize(grid_count);
  check(ggb_lambda_grid(lmax, grid_count, grid_ratio, lams.data()));
  return lams;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Subcommand implementations ------------------------------------------------

int cmd_gen_graph(const std::string& kind, int p, int rows, int cols, int m,
                  std::uint64_t seed, double rewire_pi, const std::string& out) {
  ggb_graph* raw = nullptr;
  if (kind == "path") {
    check(ggb_graph_generate("path", p, 0, seed, &raw));
  } else if (kind == "lattice") {
    if (rows < 1 || cols < 1) die(kExitUsage, "--rows and --cols are required for lattice");
    check(ggb_graph_generate("lattice", rows, cols, seed, &raw));
  } else if (kind == "scalefree") {
    check(ggb_graph_generate("scalefree", p, 0, seed, &raw));
  } else if (kind == "gnm") {
    if (m < 0) die(kExitUsage, "--m is required for gnm");
    check(ggb_graph_generate("gnm", p, m, seed, &raw));
  } else {
    die(kExitUsage, "unknown --kind '" + kind + "'");
  }
  GraphPtr g(raw);
  if (rewire_pi > 0.0) {
    ggb_graph* rewired = nullptr;
    check(ggb_graph_rewire(g.get(), rewire_pi, seed + 1, &rewired));
    g.reset(rewired);
  }
  check(ggb_graph_write(g.get(), out.c_str()));
  write_manifest("gen-graph", {}, {out}, manifest_path_for(out), seed, true);
  std::cout << "wrote " << out << " (p=" << ggb_graph_p(g.get())
            << ", m=" << ggb_graph_m(g.get()) << ")\n";
  return 0;
}

int cmd_gen_cov(const std::string& graph_path, int bandwidth, const std::string& law_text,
                double sigma_floor, std::uint64_t seed, const std::string& out,
                const std::string& bw_out) {
  GraphPtr g = read_graph(graph_path);
  const int p = ggb_graph_p(g.get());
  std::vector<int> bw(p);
  if (!law_text.empty()) {
    std::vector<int> values;
    std::vector<double> probs;
    std::istringstream ss(law_text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) die(kExitUsage, "bad --law entry '" + tok + "'");
      try {
        values.push_back(std::stoi(tok.substr(0, colon)));
        probs.push_back(std::stod(tok.substr(colon + 1)));
      } catch (const std::exception&) {
        die(kExitUsage, "bad --law entry '" + tok + "'");
      }
    }
    check(ggb_draw_bandwidths(p, values.data(), probs.data(),
                              static_cast<int>(values.size()), seed, bw.data()));
  } else {
    if (bandwidth < 0) die(kExitUsage, "supply --bandwidth or --law");
    std::fill(bw.begin(), bw.end(), bandwidth);
  }
  ggb_matrix* raw = nullptr;
  check(ggb_gen_covariance(g.get(), bw.data(), sigma_floor, &raw));
  MatrixPtr sigma(raw);
  check(ggb_matrix_write(sigma.get(), out.c_str()));
  std::vector<std::string> outputs{out};
  if (!bw_out.empty()) {
    std::ostringstream text;
    for (int b : bw) text << b << "\n";
    atomic_write(bw_out, text.str());
    outputs.push_back(bw_out);
  }
  write_manifest("gen-cov", {graph_path}, outputs, manifest_path_for(out), seed, true);
  std::cout << "wrote " << out << " (p=" << p << ")\n";
  return 0;
}

int cmd_sample(const std::string& cov_path, int n, std::uint64_t seed, const std::string& out) {
  MatrixPtr sigma = read_symmetric(cov_path);
  ggb_matrix* raw = nullptr;
  check(ggb_sample_gaussian(sigma.get(), n, seed, &raw));
  MatrixPtr x(raw);
  check(ggb_matrix_write(x.get(), out.c_str()));
  write_manifest("sample", {cov_path}, {out}, manifest_path_for(out), seed, true);
  std::cout << "wrote " << out << " (" << n << " x " << ggb_matrix_cols(x.get()) << ")\n";
  return 0;
}

int cmd_estimate(const EstimatorFlags& ef, const std::string& cov_path,
                 const std::string& out) {
  MatrixPtr s = read_symmetric(cov_path);
  GraphPtr g = graph_for_method(ef);
  ggb_config cfg = config_from_flags(ef);
  std::vector<double> weights;
  if (!ef.weights_path.empty()) weights = read_weights(ef.weights_path);
  ggb_fit* raw = nullptr;
  check(ggb_estimate(s.get(), g.get(), ef.method.c_str(), &cfg,
                     weights.empty() ? nullptr : weights.data(),
                     static_cast<int>(weights.size()), &raw));
  FitPtr fit(raw);
  ggb_matrix* sig = nullptr;
  check(ggb_fit_sigma(fit.get(), &sig));
  MatrixPtr sigma(sig);
  check(ggb_matrix_write(sigma.get(), out.c_str()));
  std::vector<std::string> inputs{cov_path};
  if (!ef.graph_path.empty()) inputs.push_back(ef.graph_path);
  if (!ef.weights_path.empty()) inputs.push_back(ef.weights_path);
  write_manifest("estimate", inputs, {out}, manifest_path_for(out));
  std::cout << "objective " << fmt(ggb_fit_objective(fit.get())) << "\n";
  std::cout << "outer_iters " << ggb_fit_outer_iters(fit.get()) << "\n";
  const double kkt = ggb_fit_kkt_residual(fit.get());
  if (!std::isnan(kkt)) std::cout << "kkt_residual " << fmt(kkt) << "\n";
  const int bw = ggb_fit_bandwidth(fit.get());
  if (bw >= 0) std::cout << "bandwidth " << bw << "\n";
  if (ef.method == "ggb-local" && g) {
    std::vector<int> nb(ggb_graph_p(g.get()));
    if (ggb_fit_node_bandwidths(fit.get(), nb.data(), static_cast<int>(nb.size())) == GGB_OK) {
      std::cout << "node_bandwidths";
      for (int b : nb) std::cout << ' ' << b;
      std::cout << "\n";
    }
  }
  if (!ggb_fit_converged(fit.get())) {
    if (!ef.allow_nonconverged) die(kExitNumeric, "iteration caps hit before convergence");
    std::cout << "warning: not converged\n";
  }
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_path(const EstimatorFlags& ef, const std::string& cov_path,
             const std::string& lams_text, int grid_count, double grid_ratio,
             const std::string& out_dir, bool save_fits) {
  MatrixPtr s = read_symmetric(cov_path);
  GraphPtr g = graph_for_method(ef);
  std::filesystem::create_directories(out_dir);
  std::vector<double> lams = resolve_grid(s.get(), g.get(), ef, lams_text, grid_count,
                                          grid_ratio);
  ggb_config cfg = config_from_flags(ef);
  std::vector<ggb_fit*> fits(lams.size(), nullptr);
  check(ggb_fit_path(s.get(), g.get(), ef.method.c_str(), &cfg, lams.data(),
                     static_cast<int>(lams.size()), fits.data()));
  std::vector<FitPtr> guard;
  for (auto* f : fits) guard.emplace_back(f);

  std::ostringstream table;
  table << "lam,objective,outer_iters,converged,kkt_residual,bandwidth,min_eigenvalue\n";
  bool all_converged = true;
  std::vector<std::string> outputs;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    ggb_fit* f = fits[i];
    all_converged = all_converged && ggb_fit_converged(f);
    table << fmt(ggb_fit_lam(f)) << ',' << fmt(ggb_fit_objective(f)) << ','
          << ggb_fit_outer_iters(f) << ',' << (ggb_fit_converged(f) ? 1 : 0) << ','
          << fmt(ggb_fit_kkt_residual(f)) << ',' << ggb_fit_bandwidth(f) << ','
          << fmt(ggb_fit_min_eigenvalue(f)) << "\n";
    if (save_fits) {
      char name[32];
      std::snprintf(name, sizeof name, "fit_%03zu.csv", i + 1);
      const std::string path = out_dir + "/" + name;
      ggb_matrix* sig = nullptr;
      check(ggb_fit_sigma(f, &sig));
      MatrixPtr sigma(sig);
      check(ggb_matrix_write(sigma.get(), path.c_str()));
      outputs.push_back(path);
    }
  }
  const std::string table_path = out_dir + "/path.csv";
  atomic_write(table_path, table.str());
  outputs.insert(outputs.begin(), table_path);
  std::vector<std::string> inputs{cov_path};
  if (!ef.graph_path.empty()) inputs.push_back(ef.graph_path);
  write_manifest("path", inputs, outputs, out_dir + "/manifest.json");
  if (!all_converged && !ef.allow_nonconverged)
    die(kExitNumeric, "some fits hit iteration caps");
  std::cout << "wrote " << table_path << " (" << lams.size() << " fits)\n";
  return 0;
}

int cmd_cv(const EstimatorFlags& ef, const std::string& data_path, int folds,
           std::uint64_t seed, const std::string& lams_text, int grid_count,
           double grid_ratio, const std::string& out, const std::string& refit_out) {
  MatrixPtr x = read_matrix(data_path);
  GraphPtr g = graph_for_method(ef);
  ggb_matrix* sraw = nullptr;
  check(ggb_sample_cov(x.get(), &sraw));
  MatrixPtr s(sraw);
  std::vector<double> lams = resolve_grid(s.get(), g.get(), ef, lams_text, grid_count,
                                          grid_ratio);
  ggb_config cfg = config_from_flags(ef);
  double lam_cv = 0.0;
  std::vector<double> sorted(lams.size()), mean_err(lams.size());
  check(ggb_cross_validate(x.get(), g.get(), ef.method.c_str(), &cfg, lams.data(),
                           static_cast<int>(lams.size()), folds, seed, &lam_cv,
                           sorted.data(), mean_err.data()));
  std::ostringstream table;
  table << "lam,mean_err\n";
  for (std::size_t i = 0; i < sorted.size(); ++i)
    table << fmt(sorted[i]) << ',' << fmt(mean_err[i]) << "\n";
  atomic_write(out, table.str());
  std::vector<std::string> outputs{out};
  if (!refit_out.empty()) {
    ggb_config refit_cfg = cfg;
    refit_cfg.lam = lam_cv;
    ggb_fit* raw = nullptr;
    check(ggb_estimate(s.get(), g.get(), ef.method.c_str(), &refit_cfg, nullptr, 0, &raw));
    FitPtr fit(raw);
    if (!ggb_fit_converged(fit.get()) && !ef.allow_nonconverged)
      die(kExitNumeric, "refit hit iteration caps");
    ggb_matrix* sig = nullptr;
    check(ggb_fit_sigma(fit.get(), &sig));
    MatrixPtr sigma(sig);
    check(ggb_matrix_write(sigma.get(), refit_out.c_str()));
    outputs.push_back(refit_out);
  }
  std::vector<std::string> inputs{data_path};
  if (!ef.graph_path.empty()) inputs.push_back(ef.graph_path);
  write_manifest("cv", inputs, outputs, manifest_path_for(out), seed, true);
  std::cout << "lam_cv " << fmt(lam_cv) << "\n";
  return 0;
}

int cmd_eval(const std::string& est_path, const std::string& truth_path,
             const std::string& out) {
  MatrixPtr est = read_symmetric(est_path);
  MatrixPtr truth = read_symmetric(truth_path);
  double frob = 0.0, op = 0.0, entropy = 0.0;
  check(ggb_losses(est.get(), truth.get(), &frob, &op, &entropy));
  std::ostringstream table;
  table << "frobenius,operator,entropy\n"
        << fmt(frob) << ',' << fmt(op) << ',' << fmt(entropy) << "\n";
  if (!out.empty()) {
    atomic_write(out, table.str());
    write_manifest("eval", {est_path, truth_path}, {out}, manifest_path_for(out));
  }
  std::cout << "frobenius " << fmt(frob) << "\n"
            << "operator " << fmt(op) << "\n"
            << "entropy " << fmt(entropy) << "\n";
  return 0;
}

int cmd_roc(const EstimatorFlags& ef, const std::string& cov_path,
            const std::string& truth_path, const std::string& lams_text, int grid_count,
            double grid_ratio, const std::string& out) {
  MatrixPtr s = read_symmetric(cov_path);
  MatrixPtr truth = read_symmetric(truth_path);
  GraphPtr g = graph_for_method(ef);
  std::vector<double> lams = resolve_grid(s.get(), g.get(), ef, lams_text, grid_count,
                                          grid_ratio);
  ggb_config cfg = config_from_flags(ef);
  std::vector<ggb_fit*> fits(lams.size(), nullptr);
  check(ggb_fit_path(s.get(), g.get(), ef.method.c_str(), &cfg, lams.data(),
                     static_cast<int>(lams.size()), fits.data()));
  std::vector<FitPtr> guard;
  for (auto* f : fits) guard.emplace_back(f);
  std::ostringstream table;
  table << "lam,sensitivity,specificity\n";
  for (auto* f : fits) {
    ggb_matrix* sig = nullptr;
    check(ggb_fit_sigma(f, &sig));
    MatrixPtr sigma(sig);
    double sens = 0.0, spec = 0.0;
    check(ggb_support_metrics(sigma.get(), truth.get(), &sens, &spec));
    table << fmt(ggb_fit_lam(f)) << ',' << fmt(sens) << ',' << fmt(spec) << "\n";
  }
  atomic_write(out, table.str());
  std::vector<std::string> inputs{cov_path, truth_path};
  if (!ef.graph_path.empty()) inputs.push_back(ef.graph_path);
  write_manifest("roc", inputs, {out}, manifest_path_for(out));
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_scenario(const std::string& config_path, int replicates, int jobs,
                 const std::string& out_dir) {
  std::ifstream in(config_path);
  if (!in.good()) die(kExitUsage, "cannot open " + config_path);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string config_text = ss.str();
  if (replicates >= 0) {
    try {
      nlohmann::json j = nlohmann::json::parse(config_text);
      j["replicates"] = replicates;
      config_text = j.dump();
    } catch (const std::exception& e) {
      die(kExitUsage, std::string("bad scenario config: ") + e.what());
    }
  }
  std::filesystem::create_directories(out_dir);
  const std::string results = out_dir + "/results.csv";
  const std::string summary = out_dir + "/summary.csv";
  const std::string roc = out_dir + "/roc.csv";
  check(ggb_scenario_run(config_text.c_str(), results.c_str(), summary.c_str(), roc.c_str(),
                         jobs));
  write_manifest("scenario", {config_path}, {results, summary, roc},
                 out_dir + "/manifest.json");
  std::cout << "wrote " << results << "\n" << summary << "\n" << roc << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 0; i < argc; ++i) g_argv.emplace_back(argv[i]);

  CLI::App app{"graph-guided banded covariance estimation"};
  app.require_subcommand(1);

  // gen-graph
  auto* gen_graph = app.add_subcommand("gen-graph", "generate a seed graph");
  std::string gg_kind, gg_out;
  int gg_p = 0, gg_rows = 0, gg_cols = 0, gg_m = -1;
  std::uint64_t gg_seed = 1;
  double gg_rewire = 0.0;
  gen_graph->add_option("--kind", gg_kind, "path, lattice, scalefree, gnm")->required();
  gen_graph->add_option("--p", gg_p, "node count (path, scalefree, gnm)");
  gen_graph->add_option("--rows", gg_rows, "lattice rows");
  gen_graph->add_option("--cols", gg_cols, "lattice cols");
  gen_graph->add_option("--m", gg_m, "edge count (gnm)");
  gen_graph->add_option("--seed", gg_seed, "random seed");
  gen_graph->add_option("--rewire", gg_rewire, "rewiring probability applied after generation");
  gen_graph->add_option("--out", gg_out, "output edge list")->required();

  // gen-cov
  auto* gen_cov = app.add_subcommand("gen-cov", "build a covariance from a graph");
  std::string gc_graph, gc_law, gc_out, gc_bw_out;
  int gc_bandwidth = -1;
  double gc_sigma = 0.01;
  std::uint64_t gc_seed = 1;
  gen_cov->add_option("--graph", gc_graph, "edge list")->required();
  gen_cov->add_option("--bandwidth", gc_bandwidth, "uniform bandwidth for every node");
  gen_cov->add_option("--law", gc_law, "bandwidth law, e.g. 0:0.9,1:0.06,4:0.04");
  gen_cov->add_option("--sigma-floor", gc_sigma, "target smallest eigenvalue square root");
  gen_cov->add_option("--seed", gc_seed, "seed for --law draws");
  gen_cov->add_option("--out", gc_out, "output covariance CSV")->required();
  gen_cov->add_option("--bandwidths-out", gc_bw_out, "write drawn bandwidths here");

  // sample
  auto* sample = app.add_subcommand("sample", "draw Gaussian rows from a covariance");
  std::string sm_cov, sm_out;
  int sm_n = 0;
  std::uint64_t sm_seed = 1;
  sample->add_option("--cov", sm_cov, "covariance CSV")->required();
  sample->add_option("--n", sm_n, "number of rows")->required();
  sample->add_option("--seed", sm_seed, "random seed");
  sample->add_option("--out", sm_out, "output data CSV")->required();

  // estimate
  auto* estimate = app.add_subcommand("estimate", "fit one estimator at one penalty level");
  EstimatorFlags est_flags;
  std::string est_cov, est_out;
  estimate->add_option("--cov", est_cov, "input covariance CSV")->required();
  add_estimator_flags(estimate, est_flags, true);
  estimate->add_option("--out", est_out, "output estimate CSV")->required();

  // path
  auto* path_cmd = app.add_subcommand("path", "fit a descending penalty grid");
  EstimatorFlags path_flags;
  std::string path_cov, path_lams, path_out_dir;
  int path_count = 20;
  double path_ratio = 100.0;
  bool path_save = false;
  path_cmd->add_option("--cov", path_cov, "input covariance CSV")->required();
  add_estimator_flags(path_cmd, path_flags, false);
  path_cmd->add_option("--lams", path_lams, "explicit comma-separated descending grid");
  path_cmd->add_option("--grid-count", path_count, "grid size (default 20)");
  path_cmd->add_option("--grid-ratio", path_ratio, "lam_max / lam_min (default 100)");
  path_cmd->add_option("--out-dir", path_out_dir, "output directory")->required();
  path_cmd->add_flag("--save-fits", path_save, "write each fitted matrix");

  // cv
  auto* cv_cmd = app.add_subcommand("cv", "cross validate the penalty level");
  EstimatorFlags cv_flags;
  std::string cv_data, cv_lams, cv_out, cv_refit;
  int cv_folds = 5, cv_count = 20;
  double cv_ratio = 100.0;
  std::uint64_t cv_seed = 1;
  cv_cmd->add_option("--data", cv_data, "observation matrix CSV (rows = samples)")->required();
  add_estimator_flags(cv_cmd, cv_flags, false);
  cv_cmd->add_option("--folds", cv_folds, "fold count (default 5)");
  cv_cmd->add_option("--seed", cv_seed, "fold shuffle seed");
  cv_cmd->add_option("--lams", cv_lams, "explicit comma-separated grid");
  cv_cmd->add_option("--grid-count", cv_count, "grid size (default 20)");
  cv_cmd->add_option("--grid-ratio", cv_ratio, "lam_max / lam_min (default 100)");
  cv_cmd->add_option("--out", cv_out, "output curve CSV")->required();
  cv_cmd->add_option("--refit-out", cv_refit, "refit at lam_cv on the full data");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "compare an estimate against a truth");
  std::string ev_est, ev_truth, ev_out;
  eval_cmd->add_option("--est", ev_est, "estimate CSV")->required();
  eval_cmd->add_option("--truth", ev_truth, "truth CSV")->required();
  eval_cmd->add_option("--out", ev_out, "optional losses CSV");

  // roc
  auto* roc_cmd = app.add_subcommand("roc", "support recovery curve along a grid");
  EstimatorFlags roc_flags;
  std::string roc_cov, roc_truth, roc_lams, roc_out;
  int roc_count = 20;
  double roc_ratio = 100.0;
  roc_cmd->add_option("--cov", roc_cov, "input covariance CSV")->required();
  roc_cmd->add_option("--truth", roc_truth, "truth covariance CSV")->required();
  add_estimator_flags(roc_cmd, roc_flags, false);
  roc_cmd->add_option("--lams", roc_lams, "explicit comma-separated descending grid");
  roc_cmd->add_option("--grid-count", roc_count, "grid size (default 20)");
  roc_cmd->add_option("--grid-ratio", roc_ratio, "lam_max / lam_min (default 100)");
  roc_cmd->add_option("--out", roc_out, "output ROC CSV")->required();

  // scenario
  auto* scenario = app.add_subcommand("scenario", "run a simulation study from a JSON config");
  std::string sc_config, sc_out_dir = ".";
  int sc_replicates = -1, sc_jobs = 0;
  scenario->add_option("--config", sc_config, "scenario JSON")->required();
  scenario->add_option("--replicates", sc_replicates, "override replicate count");
  scenario->add_option("--jobs", sc_jobs, "parallel replicate workers");
  scenario->add_option("--out-dir", sc_out_dir, "output directory (default .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen_graph->parsed())
      return cmd_gen_graph(gg_kind, gg_p, gg_rows, gg_cols, gg_m, gg_seed, gg_rewire, gg_out);
    if (gen_cov->parsed())
      return cmd_gen_cov(gc_graph, gc_bandwidth, gc_law, gc_sigma, gc_seed, gc_out, gc_bw_out);
    if (sample->parsed()) return cmd_sample(sm_cov, sm_n, sm_seed, sm_out);
    if (estimate->parsed()) return cmd_estimate(est_flags, est_cov, est_out);
    if (path_cmd->parsed())
      return cmd_path(path_flags, path_cov, path_lams, path_count, path_ratio, path_out_dir,
                      path_save);
    if (cv_cmd->parsed())
      return cmd_cv(cv_flags, cv_data, cv_folds, cv_seed, cv_lams, cv_count, cv_ratio, cv_out,
                    cv_refit);
    if (eval_cmd->parsed()) return cmd_eval(ev_est, ev_truth, ev_out);
    if (roc_cmd->parsed())
      return cmd_roc(roc_flags, roc_cov, roc_truth, roc_lams, roc_count, roc_ratio, roc_out);
    if (scenario->parsed()) return cmd_scenario(sc_config, sc_replicates, sc_jobs, sc_out_dir);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  }
  return 0;
}
