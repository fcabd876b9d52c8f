// Command-line front end. Talks to the library only through bouligand.h.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bouligand.h"

namespace {

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(bl_status status, const char* what) {
  if (status != BL_OK)
    throw CliError(std::string(what) + ": " + bl_status_string(status) + ": " + bl_last_error());
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using Problem = std::unique_ptr<bl_problem, Deleter<bl_problem, bl_problem_destroy>>;
using Grid = std::unique_ptr<bl_gridfn, Deleter<bl_gridfn, bl_gridfn_destroy>>;
using Record = std::unique_ptr<bl_record, Deleter<bl_record, bl_record_destroy>>;
using Table = std::unique_ptr<bl_table, Deleter<bl_table, bl_table_destroy>>;
using Verification =
    std::unique_ptr<bl_verification, Deleter<bl_verification, bl_verification_destroy>>;

std::string sidecar(const std::string& csv) {
  const auto dot = csv.rfind('.');
  const auto slash = csv.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return csv + ".json";
  return csv.substr(0, dot) + ".json";
}

// Options from `--config file.json`. Keys are long flag names without the
// leading dashes, either at top level or under a section named after the
// subcommand; the section wins. Flags given on the command line take
// precedence over both.
std::vector<std::string> merge_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw CliError("cannot open config file '" + path + "'");
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw CliError("malformed config file '" + path + "': " + e.what());
  }
  if (!cfg.is_object()) throw CliError("config file must hold a JSON object");

  std::string sub;
  for (std::size_t i = 1; i < args.size() && sub.empty(); ++i)
    for (const char* name : {"forward", "noise-free", "invert", "table", "verify"})
      if (args[i] == name) sub = name;
  nlohmann::json flat = nlohmann::json::object();
  for (auto& [key, value] : cfg.items())
    if (!value.is_object()) flat[key] = value;
  if (cfg.contains(sub) && cfg[sub].is_object())
    for (auto& [key, value] : cfg[sub].items()) flat[key] = value;

  auto given = [&](const std::string& flag) {
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
  };
  auto scalar = [](const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number_float()) {
      std::ostringstream s;
      s << std::setprecision(17) << v.get<double>();
      return s.str();
    }
    return v.dump();
  };

  for (auto& [key, value] : flat.items()) {
    const std::string flag = "--" + key;
    if (given(flag)) continue;
    // Exclusive noise options: a command-line choice of either overrides the file.
    if ((key == "sigma" && given("--delta-target")) || (key == "delta-target" && given("--sigma")))
      continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& item : value) joined += (joined.empty() ? "" : ",") + scalar(item);
      args.push_back(flag);
      args.push_back(joined);
    } else {
      args.push_back(flag);
      args.push_back(scalar(value));
    }
  }
  return args;
}

struct SolverFlags {
  std::string precond = "ic";
  double inner_tol = 1e-12;
  double forward_tol = 1e-11;

  void add(CLI::App* app) {
    app->add_option("--precond", precond, "CG preconditioner: none, diagonal or ic")
        ->check(CLI::IsMember({"none", "diagonal", "ic"}))
        ->capture_default_str();
    app->add_option("--inner-tol", inner_tol, "relative CG tolerance")->capture_default_str();
    app->add_option("--forward-tol", forward_tol, "absolute SSN residual tolerance")
        ->capture_default_str();
  }

  Problem make(int n_h) const {
    bl_solver_options opts;
    bl_solver_options_default(&opts);
    opts.inner_rel_tol = inner_tol;
    opts.forward_tol = forward_tol;
    opts.preconditioner = precond == "none"       ? BL_PRECOND_NONE
                          : precond == "diagonal" ? BL_PRECOND_DIAGONAL
                                                  : BL_PRECOND_INCOMPLETE_CHOLESKY;
    bl_problem* p = nullptr;
    check(bl_problem_create_ex(n_h, &opts, &p), "creating problem");
    return Problem(p);
  }
};

struct IterationFlags {
  bl_landweber_config cfg{};
  bool warm_start = false;

  IterationFlags() { bl_landweber_config_default(&cfg); }

  void add(CLI::App* app, bool with_max_iter = true) {
    app->add_option("--mu", cfg.mu, "tangential cone constant")->capture_default_str();
    app->add_option("--tau", cfg.tau, "discrepancy factor")->capture_default_str();
    app->add_option("--rho", cfg.rho, "ball radius (also scales the source start)")
        ->capture_default_str();
    app->add_option("--lbar", cfg.lbar, "subderivative norm estimate")->capture_default_str();
    if (with_max_iter)
      app->add_option("--max-iter", cfg.max_iterations, "maximum Landweber steps")
          ->capture_default_str();
    app->add_flag("--warm-start", warm_start, "start each SSN solve from the previous state");
  }

  const bl_landweber_config& get() {
    cfg.warm_start = warm_start ? 1 : 0;
    return cfg;
  }
};

bl_start parse_start(const std::string& s) { return s == "zero" ? BL_START_ZERO : BL_START_SOURCE; }

void warn_parameters(const bl_landweber_config& cfg) {
  bl_parameter_check pc;
  check(bl_check_parameters(&cfg, cfg.lbar, &pc), "checking parameters");
  if (!pc.choice_satisfied)
    std::fprintf(stderr,
                 "warning: finite-stopping condition violated with L = lbar: "
                 "2(mu+1)/tau - (2 - 2mu - Lambda L^2) = %.6g >= 0\n",
                 pc.choice);
  if (!pc.choice_aux_satisfied)
    std::fprintf(stderr,
                 "warning: stability condition violated with L = lbar: "
                 "-1 + mu + 5 Lambda L^2 = %.6g >= 0\n",
                 pc.choice_aux);
}

void print_record_summary(const bl_record* rec) {
  const size_t len = bl_record_length(rec);
  std::vector<double> res(len), err(len);
  check(bl_record_residuals(rec, res.data(), len), "reading residuals");
  check(bl_record_rel_errors(rec, err.data(), len), "reading errors");
  std::printf("stopping index %d (%s), total SSN steps %ld\n", bl_record_stopping_index(rec),
              bl_record_reason(rec), bl_record_total_ssn(rec));
  if (len > 0) std::printf("final residual %.6e, relative error %.6e\n", res.back(), err.back());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bouligand-Landweber iteration for -Lap y + max(y,0) = u on the unit square"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON file with option defaults (flags override it)");

  SolverFlags solver;

  // forward
  auto* forward = app.add_subcommand("forward", "solve the state equation for a source");
  int fwd_n = 0;
  std::string fwd_source, fwd_out;
  forward->add_option("--n", fwd_n, "vertices per side")->required();
  forward->add_option("--source", fwd_source, "grid function CSV or 'builtin-exact'")->required();
  forward->add_option("--out", fwd_out, "output state CSV")->required();
  forward->add_option("--config", config_path);
  solver.add(forward);

  // noise-free
  auto* noise_free = app.add_subcommand("noise-free", "Landweber iteration on exact data");
  int nf_n = 0, nf_iters = 0;
  std::string nf_start, nf_out;
  IterationFlags nf_flags;
  noise_free->add_option("--n", nf_n, "vertices per side")->required();
  noise_free->add_option("--start", nf_start, "zero or source")
      ->required()
      ->check(CLI::IsMember({"zero", "source"}));
  noise_free->add_option("--iters", nf_iters, "number of steps")->required();
  noise_free->add_option("--out", nf_out, "history CSV (JSON summary written alongside)")->required();
  noise_free->add_option("--config", config_path);
  nf_flags.add(noise_free, false);
  solver.add(noise_free);

  // invert
  auto* invert = app.add_subcommand("invert", "reconstruct the source from noisy data");
  int inv_n = 0;
  std::string inv_start, inv_out, inv_save;
  double inv_target = 0.0, inv_sigma = 0.0;
  std::uint64_t inv_seed = 0;
  IterationFlags inv_flags;
  invert->add_option("--n", inv_n, "vertices per side")->required();
  invert->add_option("--start", inv_start, "zero or source")
      ->required()
      ->check(CLI::IsMember({"zero", "source"}));
  auto* target_opt = invert->add_option("--delta-target", inv_target, "noise rescaled to this M-norm");
  auto* sigma_opt = invert->add_option("--sigma", inv_sigma, "raw Gaussian amplitude per node");
  target_opt->excludes(sigma_opt);
  invert->add_option("--seed", inv_seed, "noise seed")->capture_default_str();
  invert->add_option("--out", inv_out, "history CSV (JSON summary written alongside)")->required();
  invert->add_option("--save-iterate", inv_save, "write the final iterate as grid function CSV");
  invert->add_option("--config", config_path);
  inv_flags.add(invert);
  solver.add(invert);

  // table
  auto* table = app.add_subcommand("table", "noise-level campaign");
  int tab_n = 0, tab_threads = 0;
  std::string tab_start, tab_out;
  std::vector<double> tab_deltas;
  std::vector<std::uint64_t> tab_seeds;
  IterationFlags tab_flags;
  table->add_option("--n", tab_n, "vertices per side")->required();
  table->add_option("--start", tab_start, "zero or source")
      ->required()
      ->check(CLI::IsMember({"zero", "source"}));
  table->add_option("--deltas", tab_deltas, "comma-separated target noise levels")
      ->required()
      ->delimiter(',');
  table->add_option("--seeds", tab_seeds, "comma-separated noise seeds")->required()->delimiter(',');
  table->add_option("--out", tab_out, "table CSV")->required();
  table->add_option("--threads", tab_threads, "worker threads (0 = all cores)")->capture_default_str();
  table->add_option("--config", config_path);
  tab_flags.add(table);
  solver.add(table);

  // verify
  auto* verify = app.add_subcommand("verify", "empirical checks of the analytic assumptions");
  std::string ver_suite = "all", ver_out;
  std::uint64_t ver_seed = 2024;
  verify->add_option("--suite", ver_suite, "oracle, tcc, adjoint or all")
      ->check(CLI::IsMember({"oracle", "tcc", "adjoint", "all"}))
      ->capture_default_str();
  verify->add_option("--out", ver_out, "TCC sample CSV (JSON summary written alongside)")->required();
  verify->add_option("--seed", ver_seed, "sampling seed")->capture_default_str();
  verify->add_option("--config", config_path);

  std::vector<std::string> args;
  try {
    args = merge_config(argc, argv);
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  std::vector<char*> cargs;
  for (auto& a : args) cargs.push_back(a.data());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*forward) {
      auto problem = solver.make(fwd_n);
      bl_gridfn* src = nullptr;
      if (fwd_source == "builtin-exact") {
        check(bl_gridfn_builtin(problem.get(), BL_FIELD_EXACT_SOURCE, 5.0, &src), "building source");
      } else {
        check(bl_gridfn_read_csv(fwd_source.c_str(), &src), "reading source");
      }
      Grid source(src);
      bl_gridfn* y = nullptr;
      int ssn = 0;
      double residual = 0.0;
      check(bl_forward_solve(problem.get(), source.get(), &y, &ssn, &residual), "forward solve");
      Grid state(y);
      check(bl_gridfn_write_csv(state.get(), fwd_out.c_str()), "writing state");
      std::printf("SSN iterations %d, residual %.3e\n", ssn, residual);
    } else if (*noise_free) {
      auto problem = solver.make(nf_n);
      const auto& cfg = nf_flags.get();
      warn_parameters(cfg);
      bl_record* r = nullptr;
      check(bl_noise_free_run(problem.get(), parse_start(nf_start), nf_iters, &cfg, &r),
            "noise-free run");
      Record rec(r);
      check(bl_record_write(rec.get(), nf_out.c_str(), sidecar(nf_out).c_str()), "writing record");
      print_record_summary(rec.get());
    } else if (*invert) {
      if (target_opt->count() == 0 && sigma_opt->count() == 0)
        throw CliError("invert needs --delta-target or --sigma");
      auto problem = solver.make(inv_n);
      auto cfg = inv_flags.get();
      bl_gridfn *ys = nullptr, *us = nullptr, *st = nullptr, *yd = nullptr;
      check(bl_gridfn_builtin(problem.get(), BL_FIELD_EXACT_STATE, cfg.rho, &ys), "exact state");
      Grid y_exact(ys);
      check(bl_gridfn_builtin(problem.get(), BL_FIELD_EXACT_SOURCE, cfg.rho, &us), "exact source");
      Grid u_exact(us);
      check(bl_gridfn_builtin(problem.get(),
                              inv_start == "zero" ? BL_FIELD_ZERO : BL_FIELD_START_SOURCE, cfg.rho,
                              &st),
            "start");
      Grid start(st);
      const bool raw = sigma_opt->count() > 0;
      check(bl_add_noise(problem.get(), y_exact.get(),
                         raw ? BL_NOISE_RAW_SIGMA : BL_NOISE_RESCALE_TO_TARGET,
                         raw ? inv_sigma : inv_target, inv_seed, &yd, &cfg.delta),
            "adding noise");
      Grid data(yd);
      std::printf("noise level delta = %.6e\n", cfg.delta);
      warn_parameters(cfg);
      bl_record* r = nullptr;
      check(bl_landweber_run(problem.get(), data.get(), &cfg, start.get(), u_exact.get(), &r),
            "Landweber run");
      Record rec(r);
      check(bl_record_write(rec.get(), inv_out.c_str(), sidecar(inv_out).c_str()), "writing record");
      if (!inv_save.empty()) {
        bl_gridfn* u = nullptr;
        check(bl_record_final_iterate(rec.get(), &u), "final iterate");
        Grid final_u(u);
        check(bl_gridfn_write_csv(final_u.get(), inv_save.c_str()), "writing iterate");
      }
      print_record_summary(rec.get());
    } else if (*table) {
      auto problem = solver.make(tab_n);
      const auto& cfg = tab_flags.get();
      warn_parameters(cfg);
      bl_table* t = nullptr;
      check(bl_table_run(problem.get(), parse_start(tab_start), tab_deltas.data(), tab_deltas.size(),
                         tab_seeds.data(), tab_seeds.size(), &cfg, tab_threads, &t),
            "table run");
      Table tab(t);
      check(bl_table_write_csv(tab.get(), tab_out.c_str()), "writing table");
      for (size_t i = 0; i < bl_table_rows(tab.get()); ++i) {
        bl_table_row row;
        check(bl_table_row_at(tab.get(), i, &row), "reading row");
        std::printf("delta %.3e seed %llu: N=%d E=%.3e R=%.3f SSN=%ld (%s)\n", row.delta,
                    static_cast<unsigned long long>(row.seed), row.stopping_index, row.rel_error,
                    row.rate, row.ssn_total, row.reason);
      }
    } else if (*verify) {
      bl_verification* v = nullptr;
      check(bl_verify_run(ver_suite.c_str(), ver_seed, &v), "verification");
      Verification ver(v);
      check(bl_verification_write(ver.get(), ver_out.c_str(), sidecar(ver_out).c_str()),
            "writing report");
      const bool ok = bl_verification_passed(ver.get()) != 0;
      std::printf("verification suite '%s': %s\n", ver_suite.c_str(), ok ? "passed" : "FAILED");
      return ok ? 0 : 2;
    }
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
