#include "bouligand.h"

#include <cmath>
#include <fstream>
#include <memory>
#include <string>

#include "bouligand/error.hpp"
#include "bouligand/experiments.hpp"
#include "bouligand/landweber.hpp"
#include "bouligand/record_io.hpp"
#include "bouligand/verification.hpp"

using namespace bouligand;

struct bl_problem {
  std::unique_ptr<ForwardProblem> problem;
};

struct bl_gridfn {
  GridFunction g;
};

struct bl_record {
  RunRecord rec;
};

struct bl_table {
  std::vector<TableRow> rows;
};

struct bl_verification {
  VerificationReport report;
};

namespace {

thread_local std::string g_last_error;

bl_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return BL_ERR_INVALID_ARGUMENT;
    case ErrorCode::InvalidMesh: return BL_ERR_INVALID_MESH;
    case ErrorCode::DimensionMismatch: return BL_ERR_DIMENSION_MISMATCH;
    case ErrorCode::NonFinite: return BL_ERR_NON_FINITE;
    case ErrorCode::NotConverged: return BL_ERR_NOT_CONVERGED;
    case ErrorCode::Degenerate: return BL_ERR_DEGENERATE;
    case ErrorCode::Refused: return BL_ERR_REFUSED;
    case ErrorCode::Io: return BL_ERR_IO;
    case ErrorCode::Internal: return BL_ERR_INTERNAL;
  }
  return BL_ERR_INTERNAL;
}

bl_status fail(bl_status status, std::string msg) {
  g_last_error = std::move(msg);
  return status;
}

// Runs f, translating exceptions into status codes.
template <class F>
bl_status guarded(F&& f) {
  try {
    f();
    return BL_OK;
  } catch (const Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(BL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BL_ERR_INTERNAL, e.what());
  }
}

#define BL_REQUIRE(cond, what) \
  if (!(cond)) return fail(BL_ERR_INVALID_ARGUMENT, what)

LandweberConfig to_config(const bl_landweber_config* c) {
  LandweberConfig cfg;
  if (!c) return cfg;
  cfg.mu = c->mu;
  cfg.tau = c->tau;
  cfg.rho = c->rho;
  cfg.lbar = c->lbar;
  cfg.max_iterations = c->max_iterations;
  cfg.delta = c->delta;
  cfg.warm_start = c->warm_start != 0;
  return cfg;
}

void check_mesh(const bl_problem* p, const bl_gridfn* g, const char* what) {
  if (g->g.mesh->n_h() != p->problem->mesh()->n_h())
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " lives on n_h=" + std::to_string(g->g.mesh->n_h()) +
                    ", problem has n_h=" + std::to_string(p->problem->mesh()->n_h()));
}

bl_gridfn* wrap(GridFunction g) { return new bl_gridfn{std::move(g)}; }

}  // namespace

extern "C" {

const char* bl_version(void) { return "1.0.0"; }

const char* bl_status_string(bl_status status) {
  switch (status) {
    case BL_OK: return "ok";
    case BL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case BL_ERR_INVALID_MESH: return "invalid mesh";
    case BL_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case BL_ERR_NON_FINITE: return "non-finite value";
    case BL_ERR_NOT_CONVERGED: return "not converged";
    case BL_ERR_DEGENERATE: return "degenerate input";
    case BL_ERR_REFUSED: return "refused";
    case BL_ERR_IO: return "i/o error";
    case BL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* bl_last_error(void) { return g_last_error.c_str(); }

void bl_solver_options_default(bl_solver_options* opts) {
  if (!opts) return;
  const ForwardOptions d;
  opts->inner_rel_tol = d.inner.rel_tol;
  opts->inner_max_iterations = d.inner.max_iterations;
  opts->preconditioner = BL_PRECOND_DIAGONAL;
  opts->forward_tol = d.tolerance;
  opts->ssn_max_iterations = d.max_iterations;
}

void bl_landweber_config_default(bl_landweber_config* cfg) {
  if (!cfg) return;
  const LandweberConfig d;
  cfg->mu = d.mu;
  cfg->tau = d.tau;
  cfg->rho = d.rho;
  cfg->lbar = d.lbar;
  cfg->max_iterations = d.max_iterations;
  cfg->delta = d.delta;
  cfg->warm_start = d.warm_start ? 1 : 0;
}

bl_status bl_problem_create(int n_h, bl_problem** out) {
  return bl_problem_create_ex(n_h, nullptr, out);
}

bl_status bl_problem_create_ex(int n_h, const bl_solver_options* opts, bl_problem** out) {
  BL_REQUIRE(out, "output handle is NULL");
  return guarded([&] {
    ForwardOptions fo;
    if (opts) {
      fo.inner.rel_tol = opts->inner_rel_tol;
      fo.inner.max_iterations = opts->inner_max_iterations;
      switch (opts->preconditioner) {
        case BL_PRECOND_NONE: fo.inner.preconditioner = Preconditioner::None; break;
        case BL_PRECOND_DIAGONAL: fo.inner.preconditioner = Preconditioner::Diagonal; break;
        case BL_PRECOND_INCOMPLETE_CHOLESKY:
          fo.inner.preconditioner = Preconditioner::IncompleteCholesky;
          break;
        default: throw Error(ErrorCode::InvalidArgument, "unknown preconditioner");
      }
      fo.tolerance = opts->forward_tol;
      fo.max_iterations = opts->ssn_max_iterations;
    }
    auto p = std::make_unique<bl_problem>();
    p->problem = std::make_unique<ForwardProblem>(build_mesh(n_h), PC1Nonlinearity::max0(), fo);
    *out = p.release();
  });
}

void bl_problem_destroy(bl_problem* problem) { delete problem; }

int bl_problem_n_h(const bl_problem* problem) {
  return problem ? problem->problem->mesh()->n_h() : 0;
}

size_t bl_problem_size(const bl_problem* problem) { return problem ? problem->problem->dim() : 0; }

bl_status bl_gridfn_builtin(const bl_problem* problem, bl_field field, double rho,
                            bl_gridfn** out) {
  BL_REQUIRE(problem && out, "NULL argument");
  return guarded([&] {
    const auto& mesh = problem->problem->mesh();
    if (field == BL_FIELD_ZERO) {
      *out = wrap(GridFunction(mesh, Role::Source));
      return;
    }
    ExactData data;
    data.rho = rho;
    const auto fields = exact_fields(mesh, data);
    switch (field) {
      case BL_FIELD_EXACT_SOURCE: *out = wrap(fields.source); break;
      case BL_FIELD_EXACT_STATE: *out = wrap(fields.state); break;
      case BL_FIELD_START_SOURCE: *out = wrap(fields.start); break;
      default: throw Error(ErrorCode::InvalidArgument, "unknown builtin field");
    }
  });
}

bl_status bl_gridfn_from_values(const bl_problem* problem, const double* values, size_t n,
                                bl_role role, bl_gridfn** out) {
  BL_REQUIRE(problem && values && out, "NULL argument");
  return guarded([&] {
    const Role r = role == BL_ROLE_STATE ? Role::State
                   : role == BL_ROLE_DATA ? Role::Data
                                          : Role::Source;
    *out = wrap(GridFunction(problem->problem->mesh(), std::vector<double>(values, values + n), r));
  });
}

bl_status bl_gridfn_read_csv(const char* path, bl_gridfn** out) {
  BL_REQUIRE(path && out, "NULL argument");
  return guarded([&] { *out = wrap(read_csv(std::string(path))); });
}

bl_status bl_gridfn_write_csv(const bl_gridfn* g, const char* path) {
  BL_REQUIRE(g && path, "NULL argument");
  return guarded([&] { write_csv(std::string(path), g->g); });
}

size_t bl_gridfn_size(const bl_gridfn* g) { return g ? g->g.size() : 0; }

int bl_gridfn_n_h(const bl_gridfn* g) { return g ? g->g.mesh->n_h() : 0; }

bl_status bl_gridfn_values(const bl_gridfn* g, double* buffer, size_t n) {
  BL_REQUIRE(g && buffer, "NULL argument");
  if (n < g->g.size())
    return fail(BL_ERR_DIMENSION_MISMATCH, "buffer holds " + std::to_string(n) + " values, need " +
                                               std::to_string(g->g.size()));
  std::copy(g->g.values.begin(), g->g.values.end(), buffer);
  return BL_OK;
}

void bl_gridfn_destroy(bl_gridfn* g) { delete g; }

bl_status bl_m_norm(const bl_problem* problem, const bl_gridfn* g, double* out) {
  BL_REQUIRE(problem && g && out, "NULL argument");
  return guarded([&] {
    check_mesh(problem, g, "grid function");
    *out = m_norm(problem->problem->mass(), g->g);
  });
}

bl_status bl_relative_error(const bl_problem* problem, const bl_gridfn* u,
                            const bl_gridfn* u_exact, double* out) {
  BL_REQUIRE(problem && u && u_exact && out, "NULL argument");
  return guarded([&] {
    check_mesh(problem, u, "iterate");
    check_mesh(problem, u_exact, "exact source");
    *out = relative_error(u->g, u_exact->g, problem->problem->mass());
  });
}

bl_status bl_forward_solve(const bl_problem* problem, const bl_gridfn* source, bl_gridfn** state,
                           int* ssn_iterations, double* residual) {
  BL_REQUIRE(problem && source && state, "NULL argument");
  return guarded([&] {
    check_mesh(problem, source, "source");
    auto sol = solve_forward(*problem->problem, source->g);
    if (ssn_iterations) *ssn_iterations = sol.ssn_iterations;
    if (residual) *residual = sol.final_residual;
    *state = wrap(std::move(sol.y));
  });
}

bl_status bl_subderivative_apply(const bl_problem* problem, const bl_gridfn* state,
                                 const bl_gridfn* w, bl_gridfn** eta) {
  BL_REQUIRE(problem && state && w && eta, "NULL argument");
  return guarded([&] {
    check_mesh(problem, state, "state");
    check_mesh(problem, w, "direction");
    const auto op = build_linearized(*problem->problem, state->g);
    *eta = wrap(apply_subderivative(op, problem->problem->mass(), w->g));
  });
}

bl_status bl_add_noise(const bl_problem* problem, const bl_gridfn* state, bl_noise_mode mode,
                       double value, uint64_t seed, bl_gridfn** data, double* delta) {
  BL_REQUIRE(problem && state && data, "NULL argument");
  return guarded([&] {
    check_mesh(problem, state, "state");
    NoiseSpec spec{seed,
                   mode == BL_NOISE_RAW_SIGMA ? NoiseMode::RawAmplitude : NoiseMode::RescaleToTarget,
                   value};
    auto noisy = add_noise(state->g, spec, problem->problem->mass());
    if (delta) *delta = noisy.delta;
    *data = wrap(std::move(noisy.data));
  });
}

bl_status bl_check_parameters(const bl_landweber_config* cfg, double L, bl_parameter_check* out) {
  BL_REQUIRE(cfg && out, "NULL argument");
  return guarded([&] {
    const auto pc = check_parameters(to_config(cfg), L);
    *out = {pc.choice, pc.choice_aux, pc.choice_satisfied ? 1 : 0, pc.choice_aux_satisfied ? 1 : 0};
  });
}

bl_status bl_landweber_run(const bl_problem* problem, const bl_gridfn* data,
                           const bl_landweber_config* cfg, const bl_gridfn* start,
                           const bl_gridfn* exact, bl_record** out) {
  BL_REQUIRE(problem && data && start && out, "NULL argument");
  return guarded([&] {
    check_mesh(problem, data, "data");
    check_mesh(problem, start, "start");
    if (exact) check_mesh(problem, exact, "exact source");
    auto rec = run(*problem->problem, data->g, to_config(cfg), start->g, exact ? &exact->g : nullptr);
    *out = new bl_record{std::move(rec)};
  });
}

bl_status bl_noise_free_run(const bl_problem* problem, bl_start start, int iters,
                            const bl_landweber_config* cfg, bl_record** out) {
  BL_REQUIRE(problem && out, "NULL argument");
  return guarded([&] {
    const auto c = to_config(cfg);
    ExactData data;
    data.rho = c.rho;
    const auto fields = exact_fields(problem->problem->mesh(), data);
    auto rec = run_noise_free(*problem->problem, fields,
                              start == BL_START_ZERO ? StartKind::Zero : StartKind::Source, iters, c);
    *out = new bl_record{std::move(rec)};
  });
}

void bl_record_destroy(bl_record* rec) { delete rec; }

int bl_record_stopping_index(const bl_record* rec) { return rec ? rec->rec.stopping_index : -1; }

const char* bl_record_reason(const bl_record* rec) {
  return rec ? to_string(rec->rec.reason) : "";
}

size_t bl_record_length(const bl_record* rec) { return rec ? rec->rec.residual.size() : 0; }

bl_status bl_record_residuals(const bl_record* rec, double* buffer, size_t n) {
  BL_REQUIRE(rec && buffer, "NULL argument");
  const auto& r = rec->rec.residual;
  std::copy_n(r.begin(), std::min(n, r.size()), buffer);
  return BL_OK;
}

bl_status bl_record_rel_errors(const bl_record* rec, double* buffer, size_t n) {
  BL_REQUIRE(rec && buffer, "NULL argument");
  const auto& e = rec->rec.rel_error;
  const size_t len = std::min(n, rec->rec.residual.size());
  for (size_t i = 0; i < len; ++i) buffer[i] = i < e.size() ? e[i] : std::nan("");
  return BL_OK;
}

long bl_record_total_ssn(const bl_record* rec) { return rec ? rec->rec.total_ssn() : 0; }

int bl_record_discrepancy_consistent(const bl_record* rec) {
  return rec && rec->rec.discrepancy_consistent() ? 1 : 0;
}

bl_status bl_record_final_iterate(const bl_record* rec, bl_gridfn** out) {
  BL_REQUIRE(rec && out, "NULL argument");
  if (!rec->rec.final_iterate.mesh)
    return fail(BL_ERR_INVALID_ARGUMENT, "record carries no iterate (read back from disk?)");
  return guarded([&] { *out = wrap(rec->rec.final_iterate); });
}

bl_status bl_record_parameter_check(const bl_record* rec, bl_parameter_check* out) {
  BL_REQUIRE(rec && out, "NULL argument");
  const auto& pc = rec->rec.parameters;
  *out = {pc.choice, pc.choice_aux, pc.choice_satisfied ? 1 : 0, pc.choice_aux_satisfied ? 1 : 0};
  return BL_OK;
}

bl_status bl_record_write(const bl_record* rec, const char* csv_path, const char* json_path) {
  BL_REQUIRE(rec && csv_path, "NULL argument");
  return guarded([&] {
    const std::string csv(csv_path);
    write_run_record(rec->rec, csv, json_path ? std::string(json_path) : sidecar_path(csv));
  });
}

bl_status bl_record_read(const char* csv_path, const char* json_path, bl_record** out) {
  BL_REQUIRE(csv_path && out, "NULL argument");
  return guarded([&] {
    const std::string csv(csv_path);
    auto rec = read_run_record(csv, json_path ? std::string(json_path) : sidecar_path(csv));
    *out = new bl_record{std::move(rec)};
  });
}

bl_status bl_table_run(const bl_problem* problem, bl_start start, const double* deltas,
                       size_t n_deltas, const uint64_t* seeds, size_t n_seeds,
                       const bl_landweber_config* cfg, int threads, bl_table** out) {
  BL_REQUIRE(problem && out && (deltas || n_deltas == 0) && (seeds || n_seeds == 0),
             "NULL argument");
  return guarded([&] {
    const auto c = to_config(cfg);
    ExactData data;
    data.rho = c.rho;
    const auto fields = exact_fields(problem->problem->mesh(), data);
    auto rows = run_table(*problem->problem, fields, std::vector<double>(deltas, deltas + n_deltas),
                          std::vector<std::uint64_t>(seeds, seeds + n_seeds),
                          start == BL_START_ZERO ? StartKind::Zero : StartKind::Source, c, threads);
    // Iterates are not exposed through the table handle.
    for (auto& r : rows) r.record.final_iterate = {};
    *out = new bl_table{std::move(rows)};
  });
}

size_t bl_table_rows(const bl_table* table) { return table ? table->rows.size() : 0; }

bl_status bl_table_row_at(const bl_table* table, size_t i, bl_table_row* out) {
  BL_REQUIRE(table && out, "NULL argument");
  if (i >= table->rows.size()) return fail(BL_ERR_INVALID_ARGUMENT, "row index out of range");
  const auto& r = table->rows[i];
  *out = {r.delta, r.seed, r.stopping_index, r.rel_error, r.rate, r.ssn_total, r.reason.c_str()};
  return BL_OK;
}

bl_status bl_table_write_csv(const bl_table* table, const char* path) {
  BL_REQUIRE(table && path, "NULL argument");
  return guarded([&] {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, std::string("cannot open '") + path + "' for writing");
    write_table_csv(out, table->rows);
  });
}

void bl_table_destroy(bl_table* table) { delete table; }

bl_status bl_verify_run(const char* suite, uint64_t seed, bl_verification** out) {
  BL_REQUIRE(suite && out, "NULL argument");
  return guarded([&] {
    *out = new bl_verification{run_verification(suite_from_string(suite), seed)};
  });
}

int bl_verification_passed(const bl_verification* v) { return v && v->report.passed() ? 1 : 0; }

bl_status bl_verification_write(const bl_verification* v, const char* csv_path,
                                const char* json_path) {
  BL_REQUIRE(v && csv_path, "NULL argument");
  return guarded([&] {
    const std::string csv(csv_path);
    const std::string js = json_path ? std::string(json_path) : sidecar_path(csv);
    std::ofstream c(csv);
    if (!c) throw Error(ErrorCode::Io, "cannot open '" + csv + "' for writing");
    write_tcc_csv(c, v->report);
    std::ofstream j(js);
    if (!j) throw Error(ErrorCode::Io, "cannot open '" + js + "' for writing");
    write_verification_json(j, v->report);
  });
}

void bl_verification_destroy(bl_verification* v) { delete v; }

}  // extern "C"
