// Command-line front end: solve / path / probe-c / simulate / bench.
//
// Exit codes: 0 success (for solve and path: converged), 1 usage or input
// error, 2 solver truncation. probe-c and bench report truncation in their
// output files and exit 0 when the run itself completed.

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "pcglasso/pcglasso.hpp"

namespace {

using namespace pcglasso;

std::pair<std::string, std::string> split_ext(const std::string& path) {
  std::size_t slash = path.find_last_of("/\\");
  std::size_t dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return {path, std::string()};
  return {path.substr(0, dot), path.substr(dot)};
}

GraphKind parse_model(const std::string& name) {
  if (name == "star") return GraphKind::star;
  if (name == "hub") return GraphKind::hub;
  if (name == "ar2") return GraphKind::ar2;
  if (name == "random") return GraphKind::random_graph;
  throw std::invalid_argument("unknown model '" + name + "' (star, hub, ar2, random)");
}

int count_nonzero_offdiag(const SymMatrix& m, double thr) {
  int nnz = 0;
  for (Eigen::Index j = 0; j < m.dim(); ++j)
    for (Eigen::Index i = j + 1; i < m.dim(); ++i)
      if (std::abs(m(i, j)) > thr) ++nnz;
  return nnz;
}

struct SolveArgs {
  std::string input, out, trace_out;
  double rho = 0.0, c = 1.0, t = 1e-4;
  int max_outer = 1000;
  bool pretty = false;
};

int run_solve(const SolveArgs& a) {
  SymMatrix s = read_matrix_csv(a.input);
  SolverConfig cfg;
  cfg.rho = a.rho;
  cfg.c = a.c;
  cfg.t = a.t;
  cfg.max_outer = a.max_outer;
  PcglassoSolution sol = solve(s, cfg);
  if (sol.existence_warning)
    std::cerr << "warning: input is singular and c is past the existence bound; "
                 "the minimiser may not exist\n";
  write_matrix_csv(a.out, sol.theta, a.pretty);
  if (!a.trace_out.empty()) write_trace_csv(a.trace_out, sol.trace);
  const TraceRow& last = sol.trace.back();
  std::cout << (sol.converged ? "converged" : "truncated") << " after " << last.iter
            << " outer iterations, objective " << format_double(last.objective) << "\n";
  return sol.converged ? 0 : 2;
}

struct PathArgs {
  std::string input, out, summary_out;
  std::vector<double> rho_list;
  double c = 1.0, t = 1e-4;
  int max_outer = 1000;
  bool pretty = false;
};

int run_path(const PathArgs& a) {
  SymMatrix s = read_matrix_csv(a.input);
  SolverConfig cfg;
  cfg.c = a.c;
  cfg.t = a.t;
  cfg.max_outer = a.max_outer;
  std::vector<PcglassoSolution> sols = solve_path(s, a.rho_list, cfg);

  auto [stem, ext] = split_ext(a.out);
  bool all_converged = true;
  std::string summary_path = a.summary_out.empty() ? stem + "_summary" + ext : a.summary_out;
  std::ofstream summary(summary_path);
  if (!summary) throw std::runtime_error("cannot open " + summary_path);
  summary << "rho,objective,nnz,seconds,converged\n";
  for (std::size_t i = 0; i < sols.size(); ++i) {
    std::string path = stem + "_r" + std::to_string(i + 1) + ext;
    write_matrix_csv(path, sols[i].theta, a.pretty);
    const TraceRow& last = sols[i].trace.back();
    summary << format_double(a.rho_list[i]) << ',' << format_double(last.objective) << ','
            << count_nonzero_offdiag(sols[i].delta, 1e-8) << ','
            << format_double(last.elapsed_s) << ',' << (sols[i].converged ? 1 : 0) << '\n';
    all_converged = all_converged && sols[i].converged;
  }
  std::cout << "wrote " << sols.size() << " estimates and " << summary_path << "\n";
  return all_converged ? 0 : 2;
}

struct ProbeArgs {
  std::string input, model, out;
  int p = 0, n = 0, max_outer = 200;
  std::uint64_t seed = 0;
  std::vector<double> c_grid;
  double t = 1e-4;
};

int run_probe(const ProbeArgs& a) {
  std::optional<SymMatrix> s;
  if (!a.input.empty()) {
    s = read_matrix_csv(a.input);
  } else {
    if (a.model.empty() || a.p == 0 || a.n == 0)
      throw std::invalid_argument("probe-c needs an input matrix or --model/--p/--n");
    GraphModel gm{parse_model(a.model), a.p, a.seed};
    SymMatrix theta = make_theta(gm);
    s = sample_cov(theta, a.n, a.seed, true);
  }
  std::ofstream out(a.out);
  if (!out) throw std::runtime_error("cannot open " + a.out);
  out << "c,max_eigenvalue,converged,iters\n";
  for (double c : a.c_grid) {
    SolverConfig cfg;
    cfg.rho = 0.0;
    cfg.c = c;
    cfg.t = a.t;
    cfg.max_outer = a.max_outer;
    PcglassoSolution sol = solve(*s, cfg);
    out << format_double(c) << ',' << format_double(max_eigenvalue(sol.theta)) << ','
        << (sol.converged ? 1 : 0) << ',' << sol.trace.size() << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + a.out);
  std::cout << "probed " << a.c_grid.size() << " values of c -> " << a.out << "\n";
  return 0;
}

struct SimArgs {
  std::string model, out, theta_out;
  int p = 0, n = 0;
  std::uint64_t seed = 0;
  bool standardize = false, pretty = false;
};

int run_simulate(const SimArgs& a) {
  GraphModel gm{parse_model(a.model), a.p, a.seed};
  std::uint64_t seed_used = a.seed;
  SymMatrix theta = make_theta(gm, &seed_used);
  if (seed_used != a.seed)
    std::cerr << "note: random graph was not positive definite at seed " << a.seed
              << "; regenerated with seed " << seed_used << "\n";
  SymMatrix s = sample_cov(theta, a.n, a.seed, a.standardize);
  write_matrix_csv(a.out, s, a.pretty);
  auto [stem, ext] = split_ext(a.out);
  std::string theta_path = a.theta_out.empty() ? stem + "_theta" + ext : a.theta_out;
  write_matrix_csv(theta_path, theta, a.pretty);
  std::cout << "wrote " << a.out << " and " << theta_path << "\n";
  return 0;
}

struct BenchScenario {
  std::string setting = "bench";
  GraphKind model = GraphKind::star;
  std::vector<int> p_list;
  std::vector<int> n_list;  // resolved per p
  double rho = 0.0, c = 1.0, t = 1e-4;
  int reps = 3;
  std::uint64_t seed = 1;
  std::vector<std::string> methods{"pcglasso", "cd", "glasso-drs"};
  bool standardize = true;
  int max_outer = 1000, max_inner = 10000, max_sweeps = 5000;
};

BenchScenario load_scenario(const std::string& path) {
  static const std::set<std::string> known{
      "setting", "model", "p_list", "n_list", "n_factor", "rho",     "c",
      "t",       "reps",  "seed",   "methods", "standardize", "max_outer",
      "max_inner", "max_sweeps"};
  std::map<std::string, std::string> kv = parse_kv_file(path);
  for (const auto& [k, v] : kv)
    if (!known.count(k)) throw std::runtime_error(path + ": unknown key '" + k + "'");

  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
      std::size_t comma = s.find(',', pos);
      if (comma == std::string::npos) {
        out.push_back(s.substr(pos));
        break;
      }
      out.push_back(s.substr(pos, comma - pos));
      pos = comma + 1;
    }
    return out;
  };

  BenchScenario sc;
  if (kv.count("setting")) sc.setting = kv["setting"];
  if (kv.count("model")) sc.model = parse_model(kv["model"]);
  if (!kv.count("p_list")) throw std::runtime_error(path + ": missing required key 'p_list'");
  for (const std::string& tok : split(kv["p_list"])) sc.p_list.push_back(std::stoi(tok));
  if (sc.p_list.empty()) throw std::runtime_error(path + ": empty p_list");
  if (kv.count("n_list") && kv.count("n_factor"))
    throw std::runtime_error(path + ": give n_list or n_factor, not both");
  if (kv.count("n_list")) {
    for (const std::string& tok : split(kv["n_list"])) sc.n_list.push_back(std::stoi(tok));
    if (sc.n_list.size() != sc.p_list.size())
      throw std::runtime_error(path + ": n_list length must match p_list");
  } else {
    double factor = kv.count("n_factor") ? std::stod(kv["n_factor"]) : 2.0;
    if (!(factor > 0)) throw std::runtime_error(path + ": n_factor must be positive");
    for (int p : sc.p_list)
      sc.n_list.push_back(static_cast<int>(std::llround(factor * p)));
  }
  if (kv.count("rho")) sc.rho = std::stod(kv["rho"]);
  if (kv.count("c")) sc.c = std::stod(kv["c"]);
  if (kv.count("t")) sc.t = std::stod(kv["t"]);
  if (kv.count("reps")) sc.reps = std::stoi(kv["reps"]);
  if (kv.count("seed")) sc.seed = std::stoull(kv["seed"]);
  if (kv.count("methods")) sc.methods = split(kv["methods"]);
  if (kv.count("standardize")) {
    if (kv["standardize"] != "true" && kv["standardize"] != "false")
      throw std::runtime_error(path + ": standardize must be true or false");
    sc.standardize = kv["standardize"] == "true";
  }
  if (kv.count("max_outer")) sc.max_outer = std::stoi(kv["max_outer"]);
  if (kv.count("max_inner")) sc.max_inner = std::stoi(kv["max_inner"]);
  if (kv.count("max_sweeps")) sc.max_sweeps = std::stoi(kv["max_sweeps"]);
  if (sc.rho < 0 || !(sc.c > 0) || !(sc.t > 0) || sc.reps < 1 || sc.max_outer < 1 ||
      sc.max_inner < 1 || sc.max_sweeps < 1)
    throw std::runtime_error(path + ": parameter out of range");
  for (int p : sc.p_list)
    if (p < 2) throw std::runtime_error(path + ": p must be at least 2");
  for (int n : sc.n_list)
    if (n < 2) throw std::runtime_error(path + ": n must be at least 2");
  for (const std::string& m : sc.methods)
    if (m != "pcglasso" && m != "cd" && m != "glasso-drs")
      throw std::runtime_error(path + ": unknown method '" + m + "'");
  return sc;
}

struct BenchArgs {
  std::string scenario, out;
  int jobs = 1;
};

int run_bench(const BenchArgs& a) {
  BenchScenario sc = load_scenario(a.scenario);
  struct Task {
    int p_idx, rep;
  };
  std::vector<Task> tasks;
  for (std::size_t pi = 0; pi < sc.p_list.size(); ++pi)
    for (int rep = 1; rep <= sc.reps; ++rep)
      tasks.push_back({static_cast<int>(pi), rep});

  std::vector<std::vector<BenchRecord>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) return;
      const Task& task = tasks[idx];
      int p = sc.p_list[task.p_idx];
      int n = sc.n_list[task.p_idx];
      std::uint64_t inst_seed = sc.seed + 1009ull * task.p_idx + task.rep;
      GraphModel gm{sc.model, p, inst_seed};
      SymMatrix theta = make_theta(gm);
      SymMatrix s = sample_cov(theta, n, inst_seed, sc.standardize);
      for (const std::string& method : sc.methods) {
        BenchRecord rec;
        rec.setting = sc.setting;
        rec.p = p;
        rec.n = n;
        rec.rho = sc.rho;
        rec.c = sc.c;
        rec.method = method;
        rec.rep = task.rep;
        rec.jobs = a.jobs;
        auto t0 = std::chrono::steady_clock::now();
        if (method == "pcglasso") {
          SolverConfig cfg;
          cfg.rho = sc.rho;
          cfg.c = sc.c;
          cfg.t = sc.t;
          cfg.max_outer = sc.max_outer;
          cfg.max_inner = sc.max_inner;
          PcglassoSolution sol = solve(s, cfg);
          rec.objective = sol.trace.back().objective;
          rec.converged = sol.converged;
        } else if (method == "cd") {
          CdConfig cfg;
          cfg.t = sc.t;
          cfg.max_sweeps = sc.max_sweeps;
          PcglassoSolution sol = cd_solve(s, sc.rho, sc.c, cfg);
          rec.objective = sol.trace.back().objective;
          rec.converged = sol.converged;
        } else {
          DrsConfig cfg;
          cfg.t_dr = sc.t;
          cfg.max_iter = sc.max_inner;
          GlassoResult res = glasso_drs_solve(s, sc.rho, cfg);
          rec.objective = objective_glasso(s, res.theta, sc.rho);
          rec.converged = !res.truncated;
        }
        rec.wall_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        results[idx].push_back(std::move(rec));
      }
    }
  };

  int jobs = std::max(1, a.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  std::vector<BenchRecord> flat;
  for (std::vector<BenchRecord>& group : results)
    for (BenchRecord& rec : group) flat.push_back(std::move(rec));
  write_bench_csv(a.out, flat);
  std::cout << "wrote " << flat.size() << " records to " << a.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial-correlation graphical lasso toolkit"};
  app.require_subcommand(1);

  SolveArgs sa;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Estimate a precision matrix");
  solve_cmd->add_option("input", sa.input, "sample covariance CSV")->required();
  solve_cmd->add_option("--rho", sa.rho, "l1 penalty level")->required();
  solve_cmd->add_option("--c", sa.c, "log-barrier weight (default 1)");
  solve_cmd->add_option("--t", sa.t, "stopping threshold (default 1e-4)");
  solve_cmd->add_option("--max-outer", sa.max_outer, "outer iteration cap");
  solve_cmd->add_option("--out", sa.out, "estimate output CSV")->required();
  solve_cmd->add_option("--trace-out", sa.trace_out, "per-iteration trace CSV");
  solve_cmd->add_flag("--pretty", sa.pretty, "aligned %.6g output (lossy)");

  PathArgs pa;
  CLI::App* path_cmd = app.add_subcommand("path", "Solve along an ascending rho grid");
  path_cmd->add_option("input", pa.input, "sample covariance CSV")->required();
  path_cmd->add_option("--rho-list", pa.rho_list, "ascending rho values")
      ->required()
      ->delimiter(',');
  path_cmd->add_option("--c", pa.c, "log-barrier weight (default 1)");
  path_cmd->add_option("--t", pa.t, "stopping threshold (default 1e-4)");
  path_cmd->add_option("--max-outer", pa.max_outer, "outer iteration cap");
  path_cmd->add_option("--out", pa.out, "output base path; _r<k> suffixes added")->required();
  path_cmd->add_option("--summary-out", pa.summary_out,
                       "summary CSV path (default <out>_summary)");
  path_cmd->add_flag("--pretty", pa.pretty, "aligned %.6g output (lossy)");

  ProbeArgs pra;
  CLI::App* probe_cmd =
      app.add_subcommand("probe-c", "Sweep c at rho 0 and record the estimate's size");
  probe_cmd->add_option("input", pra.input, "sample covariance CSV (or use --model)");
  probe_cmd->add_option("--model", pra.model, "generate input: star, hub, ar2, random");
  probe_cmd->add_option("--p", pra.p, "dimension for --model");
  probe_cmd->add_option("--n", pra.n, "sample size for --model");
  probe_cmd->add_option("--seed", pra.seed, "seed for --model");
  probe_cmd->add_option("--c-grid", pra.c_grid, "c values to probe")
      ->required()
      ->delimiter(',');
  probe_cmd->add_option("--t", pra.t, "stopping threshold (default 1e-4)");
  probe_cmd->add_option("--max-outer", pra.max_outer, "outer iteration cap (default 200)");
  probe_cmd->add_option("--out", pra.out, "probe output CSV")->required();

  SimArgs sim;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Generate a graph and sample data");
  sim_cmd->add_option("--model", sim.model, "star, hub, ar2, random")->required();
  sim_cmd->add_option("--p", sim.p, "dimension")->required();
  sim_cmd->add_option("--n", sim.n, "sample size")->required();
  sim_cmd->add_option("--seed", sim.seed, "RNG seed");
  sim_cmd->add_flag("--standardize", sim.standardize, "write the sample correlation matrix");
  sim_cmd->add_option("--out", sim.out, "sample covariance output CSV")->required();
  sim_cmd->add_option("--theta-out", sim.theta_out,
                      "precision matrix output CSV (default <out>_theta)");
  sim_cmd->add_flag("--pretty", sim.pretty, "aligned %.6g output (lossy)");

  BenchArgs ba;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Timing harness over a scenario file");
  bench_cmd->add_option("--scenario", ba.scenario, "key-value scenario file")->required();
  bench_cmd->add_option("--out", ba.out, "records output CSV")->required();
  bench_cmd->add_option("--jobs", ba.jobs, "concurrent replications (default 1)")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (solve_cmd->parsed()) return run_solve(sa);
    if (path_cmd->parsed()) return run_path(pa);
    if (probe_cmd->parsed()) return run_probe(pra);
    if (sim_cmd->parsed()) return run_simulate(sim);
    if (bench_cmd->parsed()) return run_bench(ba);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
