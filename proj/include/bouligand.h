/*
 * C interface to the Bouligand-Landweber library.
 *
 * All objects are opaque handles created by a bl_*_create / bl_*_run call and
 * released with the matching bl_*_destroy. Every fallible call returns a
 * bl_status; on failure a description is available from bl_last_error() on the
 * calling thread until its next failing call. Output handles are written only
 * on success.
 */
#ifndef BOULIGAND_H
#define BOULIGAND_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BOULIGAND_BUILDING)
#    define BL_API __declspec(dllexport)
#  else
#    define BL_API __declspec(dllimport)
#  endif
#else
#  define BL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bl_status {
  BL_OK = 0,
  BL_ERR_INVALID_ARGUMENT = 1,
  BL_ERR_INVALID_MESH = 2,
  BL_ERR_DIMENSION_MISMATCH = 3,
  BL_ERR_NON_FINITE = 4,
  BL_ERR_NOT_CONVERGED = 5,
  BL_ERR_DEGENERATE = 6,
  BL_ERR_REFUSED = 7,
  BL_ERR_IO = 8,
  BL_ERR_INTERNAL = 9
} bl_status;

typedef enum bl_preconditioner {
  BL_PRECOND_NONE = 0,
  BL_PRECOND_DIAGONAL = 1,
  BL_PRECOND_INCOMPLETE_CHOLESKY = 2
} bl_preconditioner;

typedef enum bl_field {
  BL_FIELD_ZERO = 0,
  BL_FIELD_EXACT_SOURCE = 1, /* I_h u_dagger */
  BL_FIELD_EXACT_STATE = 2,  /* I_h y_dagger */
  BL_FIELD_START_SOURCE = 3  /* I_h u_bar, depends on rho */
} bl_field;

typedef enum bl_role { BL_ROLE_STATE = 0, BL_ROLE_SOURCE = 1, BL_ROLE_DATA = 2 } bl_role;

typedef enum bl_start { BL_START_ZERO = 0, BL_START_SOURCE = 1 } bl_start;

typedef enum bl_noise_mode { BL_NOISE_RAW_SIGMA = 0, BL_NOISE_RESCALE_TO_TARGET = 1 } bl_noise_mode;

typedef struct bl_problem bl_problem;
typedef struct bl_gridfn bl_gridfn;
typedef struct bl_record bl_record;
typedef struct bl_table bl_table;
typedef struct bl_verification bl_verification;

typedef struct bl_solver_options {
  double inner_rel_tol;       /* CG relative residual tolerance, default 1e-12 */
  int inner_max_iterations;   /* 0 = 10 * dimension */
  bl_preconditioner preconditioner;
  double forward_tol;         /* absolute SSN residual tolerance, default 1e-11 */
  int ssn_max_iterations;     /* default 100 */
} bl_solver_options;

typedef struct bl_landweber_config {
  double mu;          /* 0.1 */
  double tau;         /* 1.4 */
  double rho;         /* 5 */
  double lbar;        /* 0.05; constant step (2 - 2 mu) / lbar^2 */
  int max_iterations; /* 5000 */
  double delta;       /* noise level used by the discrepancy principle */
  int warm_start;     /* nonzero: start SSN from the previous state */
} bl_landweber_config;

typedef struct bl_parameter_check {
  double choice;     /* 2(mu+1)/tau - (2 - 2mu - Lambda L^2) */
  double choice_aux; /* -1 + mu + 5 Lambda L^2 */
  int choice_satisfied;
  int choice_aux_satisfied;
} bl_parameter_check;

typedef struct bl_table_row {
  double delta; /* measured noise level */
  uint64_t seed;
  int stopping_index;
  double rel_error;
  double rate;
  long ssn_total;
  const char* reason; /* owned by the table */
} bl_table_row;

BL_API const char* bl_version(void);
BL_API const char* bl_status_string(bl_status status);
BL_API const char* bl_last_error(void);

BL_API void bl_solver_options_default(bl_solver_options* opts);
BL_API void bl_landweber_config_default(bl_landweber_config* cfg);

/* Problem: mesh, assembled matrices and max(., 0) nonlinearity. */
BL_API bl_status bl_problem_create(int n_h, bl_problem** out);
BL_API bl_status bl_problem_create_ex(int n_h, const bl_solver_options* opts, bl_problem** out);
BL_API void bl_problem_destroy(bl_problem* problem);
BL_API int bl_problem_n_h(const bl_problem* problem);
BL_API size_t bl_problem_size(const bl_problem* problem);

/* Grid functions on the interior nodes of a problem mesh. */
BL_API bl_status bl_gridfn_builtin(const bl_problem* problem, bl_field field, double rho,
                                   bl_gridfn** out);
BL_API bl_status bl_gridfn_from_values(const bl_problem* problem, const double* values, size_t n,
                                       bl_role role, bl_gridfn** out);
BL_API bl_status bl_gridfn_read_csv(const char* path, bl_gridfn** out);
BL_API bl_status bl_gridfn_write_csv(const bl_gridfn* g, const char* path);
BL_API size_t bl_gridfn_size(const bl_gridfn* g);
BL_API int bl_gridfn_n_h(const bl_gridfn* g);
BL_API bl_status bl_gridfn_values(const bl_gridfn* g, double* buffer, size_t n);
BL_API void bl_gridfn_destroy(bl_gridfn* g);

BL_API bl_status bl_m_norm(const bl_problem* problem, const bl_gridfn* g, double* out);
BL_API bl_status bl_relative_error(const bl_problem* problem, const bl_gridfn* u,
                                   const bl_gridfn* u_exact, double* out);

/* Semi-smooth Newton solve of A y + D max(y, 0) = M u. ssn_iterations and
 * residual may be NULL. */
BL_API bl_status bl_forward_solve(const bl_problem* problem, const bl_gridfn* source,
                                  bl_gridfn** state, int* ssn_iterations, double* residual);

/* eta = G_u w for the linearization at state y. */
BL_API bl_status bl_subderivative_apply(const bl_problem* problem, const bl_gridfn* state,
                                        const bl_gridfn* w, bl_gridfn** eta);

BL_API bl_status bl_add_noise(const bl_problem* problem, const bl_gridfn* state,
                              bl_noise_mode mode, double value, uint64_t seed, bl_gridfn** data,
                              double* delta);

BL_API bl_status bl_check_parameters(const bl_landweber_config* cfg, double L,
                                     bl_parameter_check* out);

/* Landweber iteration. exact may be NULL (no error history). */
BL_API bl_status bl_landweber_run(const bl_problem* problem, const bl_gridfn* data,
                                  const bl_landweber_config* cfg, const bl_gridfn* start,
                                  const bl_gridfn* exact, bl_record** out);
/* Exact data, delta = 0, exactly iters steps from the chosen start. */
BL_API bl_status bl_noise_free_run(const bl_problem* problem, bl_start start, int iters,
                                   const bl_landweber_config* cfg, bl_record** out);

BL_API void bl_record_destroy(bl_record* rec);
BL_API int bl_record_stopping_index(const bl_record* rec);
BL_API const char* bl_record_reason(const bl_record* rec);
BL_API size_t bl_record_length(const bl_record* rec);
/* Copies min(n, length) entries; rel errors are NaN without an exact source. */
BL_API bl_status bl_record_residuals(const bl_record* rec, double* buffer, size_t n);
BL_API bl_status bl_record_rel_errors(const bl_record* rec, double* buffer, size_t n);
BL_API long bl_record_total_ssn(const bl_record* rec);
BL_API int bl_record_discrepancy_consistent(const bl_record* rec);
BL_API bl_status bl_record_final_iterate(const bl_record* rec, bl_gridfn** out);
BL_API bl_status bl_record_parameter_check(const bl_record* rec, bl_parameter_check* out);
/* History CSV plus JSON sidecar. */
BL_API bl_status bl_record_write(const bl_record* rec, const char* csv_path, const char* json_path);
BL_API bl_status bl_record_read(const char* csv_path, const char* json_path, bl_record** out);

/* Noisy-data campaign over deltas x seeds (rescale-to-target noise). threads
 * <= 0 uses the hardware concurrency. */
BL_API bl_status bl_table_run(const bl_problem* problem, bl_start start, const double* deltas,
                              size_t n_deltas, const uint64_t* seeds, size_t n_seeds,
                              const bl_landweber_config* cfg, int threads, bl_table** out);
BL_API size_t bl_table_rows(const bl_table* table);
BL_API bl_status bl_table_row_at(const bl_table* table, size_t i, bl_table_row* out);
BL_API bl_status bl_table_write_csv(const bl_table* table, const char* path);
BL_API void bl_table_destroy(bl_table* table);

/* suite: "oracle", "tcc", "adjoint" or "all". */
BL_API bl_status bl_verify_run(const char* suite, uint64_t seed, bl_verification** out);
BL_API int bl_verification_passed(const bl_verification* v);
BL_API bl_status bl_verification_write(const bl_verification* v, const char* csv_path,
                                       const char* json_path);
BL_API void bl_verification_destroy(bl_verification* v);

#ifdef __cplusplus
}
#endif

#endif /* BOULIGAND_H */
