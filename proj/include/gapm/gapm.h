#ifndef GAPM_GAPM_H
#define GAPM_GAPM_H

/* C interface to the partition-method solver. Handles are opaque; every
 * fallible call returns a status code and leaves a message retrievable
 * with gapm_last_error() on the calling thread. Strings returned through
 * char** are owned by the caller and released with gapm_string_free(). */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gapm_status {
  GAPM_OK = 0,
  GAPM_ERROR_INVALID_ARGUMENT = 1,
  GAPM_ERROR_VALIDATION = 2,
  GAPM_ERROR_IO = 3,
  GAPM_ERROR_INFEASIBLE = 4,
  GAPM_ERROR_UNBOUNDED = 5,
  GAPM_ERROR_NUMERIC = 6,
  GAPM_ERROR_INTERNAL = 7
} gapm_status;

typedef struct gapm_problem gapm_problem;
typedef struct gapm_result gapm_result;

const char* gapm_version(void);

/* message from the last failing call on this thread; "" when none */
const char* gapm_last_error(void);

void gapm_string_free(char* s);

/* ---- problems -------------------------------------------------------- */

gapm_status gapm_problem_from_json(const char* text, gapm_problem** out);
gapm_status gapm_problem_load(const char* path, gapm_problem** out);
/* prodmix | cvar | lands-mini | random-discrete(seed,n,m,l[,atoms]) */
gapm_status gapm_problem_builtin(const char* name, gapm_problem** out);
void gapm_problem_free(gapm_problem* p);

const char* gapm_problem_name(const gapm_problem* p);
gapm_status gapm_problem_to_json(const gapm_problem* p, char** out);

/* options carried by the problem file; return 1 and fill *out when the
 * file sets the field, 0 otherwise */
int gapm_problem_option_eps(const gapm_problem* p, double* out);
int gapm_problem_option_max_iter(const gapm_problem* p, int* out);
int gapm_problem_option_solver(const gapm_problem* p, const char** out);
int gapm_problem_option_seed(const gapm_problem* p, uint64_t* out);

/* ---- runs ------------------------------------------------------------ */

typedef struct gapm_run_options {
  const char* mode; /* g2apm | lshaped | meanvalue | saa-ref */
  double eps;
  int max_iter;
  int relative_gap;     /* 0/1 */
  int feasibility_cuts; /* 0/1 */
  uint64_t seed;        /* saa-ref sampling */
  int saa_samples;
  int saa_replications;
} gapm_run_options;

void gapm_run_options_init(gapm_run_options* opt);

gapm_status gapm_run(const gapm_problem* p, const gapm_run_options* opt,
                     gapm_result** out);
void gapm_result_free(gapm_result* r);

/* 0 done, 2 iteration cap; mirrors the CLI exit code */
int gapm_result_exit_status(const gapm_result* r);
int gapm_result_converged(const gapm_result* r);
int gapm_result_iterations(const gapm_result* r);
size_t gapm_result_cells(const gapm_result* r);
double gapm_result_z_lower(const gapm_result* r);
double gapm_result_z_upper(const gapm_result* r);

size_t gapm_result_x_dim(const gapm_result* r);
gapm_status gapm_result_x(const gapm_result* r, double* out, size_t dim);

/* saa-ref runs only; 0 otherwise */
double gapm_result_saa_mean(const gapm_result* r);
double gapm_result_saa_half_width(const gapm_result* r);

/* rendered views */
gapm_status gapm_result_table(const gapm_result* r, char** out);
gapm_status gapm_result_ndjson(const gapm_result* r, char** out);
gapm_status gapm_result_partition_text(const gapm_result* r, char** out);
gapm_status gapm_result_partition_ndjson(const gapm_result* r, char** out);

#ifdef __cplusplus
}
#endif

#endif /* GAPM_GAPM_H */
