#include "gapm/gapm.h"

#include <cstring>
#include <exception>
#include <string>

#include "builtins.hpp"
#include "problem_json.hpp"
#include "report.hpp"

struct gapm_problem {
  gapm::ProblemFile file;
};

struct gapm_result {
  gapm::RunReport report;
};

namespace {

thread_local std::string g_last_error;

gapm_status map_code(gapm::ErrorCode c) {
  using gapm::ErrorCode;
  switch (c) {
    case ErrorCode::invalid_argument:
    case ErrorCode::dimension_mismatch:
      return GAPM_ERROR_INVALID_ARGUMENT;
    case ErrorCode::validation:
      return GAPM_ERROR_VALIDATION;
    case ErrorCode::io:
      return GAPM_ERROR_IO;
    case ErrorCode::infeasible:
      return GAPM_ERROR_INFEASIBLE;
    case ErrorCode::unbounded:
      return GAPM_ERROR_UNBOUNDED;
    case ErrorCode::empty_set:
    case ErrorCode::degenerate:
      return GAPM_ERROR_NUMERIC;
    default:
      return GAPM_ERROR_INTERNAL;
  }
}

template <typename F>
gapm_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return GAPM_OK;
  } catch (const gapm::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GAPM_ERROR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return GAPM_ERROR_INTERNAL;
  }
}

gapm_status reject(const char* msg) {
  g_last_error = msg;
  return GAPM_ERROR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* gapm_version(void) { return "1.0.0"; }

const char* gapm_last_error(void) { return g_last_error.c_str(); }

void gapm_string_free(char* s) { delete[] s; }

gapm_status gapm_problem_from_json(const char* text, gapm_problem** out) {
  if (!text || !out) return reject("gapm_problem_from_json: null argument");
  return guarded([&] {
    *out = new gapm_problem{gapm::parse_problem_json(text)};
  });
}

gapm_status gapm_problem_load(const char* path, gapm_problem** out) {
  if (!path || !out) return reject("gapm_problem_load: null argument");
  return guarded([&] {
    *out = new gapm_problem{gapm::load_problem_file(path)};
  });
}

gapm_status gapm_problem_builtin(const char* name, gapm_problem** out) {
  if (!name || !out) return reject("gapm_problem_builtin: null argument");
  return guarded([&] {
    gapm::ProblemFile pf;
    pf.problem = gapm::make_builtin(name);
    *out = new gapm_problem{std::move(pf)};
  });
}

void gapm_problem_free(gapm_problem* p) { delete p; }

const char* gapm_problem_name(const gapm_problem* p) {
  return p ? p->file.problem.name.c_str() : "";
}

gapm_status gapm_problem_to_json(const gapm_problem* p, char** out) {
  if (!p || !out) return reject("gapm_problem_to_json: null argument");
  return guarded([&] {
    *out = dup_string(gapm::problem_to_json(p->file.problem, p->file.options));
  });
}

int gapm_problem_option_eps(const gapm_problem* p, double* out) {
  if (!p || !p->file.options.eps) return 0;
  if (out) *out = *p->file.options.eps;
  return 1;
}

int gapm_problem_option_max_iter(const gapm_problem* p, int* out) {
  if (!p || !p->file.options.max_iter) return 0;
  if (out) *out = *p->file.options.max_iter;
  return 1;
}

int gapm_problem_option_solver(const gapm_problem* p, const char** out) {
  if (!p || !p->file.options.solver) return 0;
  if (out) *out = p->file.options.solver->c_str();
  return 1;
}

int gapm_problem_option_seed(const gapm_problem* p, uint64_t* out) {
  if (!p || !p->file.options.seed) return 0;
  if (out) *out = *p->file.options.seed;
  return 1;
}

void gapm_run_options_init(gapm_run_options* opt) {
  if (!opt) return;
  opt->mode = "g2apm";
  opt->eps = 1e-4;
  opt->max_iter = 100;
  opt->relative_gap = 0;
  opt->feasibility_cuts = 0;
  opt->seed = 0;
  opt->saa_samples = 10000;
  opt->saa_replications = 20;
}

gapm_status gapm_run(const gapm_problem* p, const gapm_run_options* opt,
                     gapm_result** out) {
  if (!p || !opt || !out || !opt->mode)
    return reject("gapm_run: null argument");
  return guarded([&] {
    gapm::RunOptions ro;
    ro.mode = opt->mode;
    ro.solve.eps = opt->eps;
    ro.solve.max_iter = opt->max_iter;
    ro.solve.relative_gap = opt->relative_gap != 0;
    ro.solve.feasibility_cuts = opt->feasibility_cuts != 0;
    ro.seed = opt->seed;
    ro.saa_samples = opt->saa_samples;
    ro.saa_replications = opt->saa_replications;
    *out = new gapm_result{gapm::run_problem(p->file.problem, ro)};
  });
}

void gapm_result_free(gapm_result* r) { delete r; }

int gapm_result_exit_status(const gapm_result* r) {
  return r ? r->report.exit_status : 1;
}

int gapm_result_converged(const gapm_result* r) {
  return r && r->report.state.converged ? 1 : 0;
}

int gapm_result_iterations(const gapm_result* r) {
  return r ? r->report.state.iterations : 0;
}

size_t gapm_result_cells(const gapm_result* r) {
  return r ? r->report.state.partition.size() : 0;
}

double gapm_result_z_lower(const gapm_result* r) {
  return r ? r->report.state.z_lower : 0;
}

double gapm_result_z_upper(const gapm_result* r) {
  return r ? r->report.state.z_upper : 0;
}

size_t gapm_result_x_dim(const gapm_result* r) {
  if (!r) return 0;
  const gapm::SolverState& st = r->report.state;
  return static_cast<size_t>(
      (st.incumbent.size() > 0 ? st.incumbent : st.x_last).size());
}

gapm_status gapm_result_x(const gapm_result* r, double* out, size_t dim) {
  if (!r || !out) return reject("gapm_result_x: null argument");
  const gapm::SolverState& st = r->report.state;
  const gapm::VectorXd& x = st.incumbent.size() > 0 ? st.incumbent : st.x_last;
  if (dim != static_cast<size_t>(x.size()))
    return reject("gapm_result_x: wrong dimension");
  for (size_t i = 0; i < dim; ++i) out[i] = x[static_cast<gapm::Index>(i)];
  g_last_error.clear();
  return GAPM_OK;
}

double gapm_result_saa_mean(const gapm_result* r) {
  return r ? r->report.saa_mean : 0;
}

double gapm_result_saa_half_width(const gapm_result* r) {
  return r ? r->report.saa_half_width : 0;
}

gapm_status gapm_result_table(const gapm_result* r, char** out) {
  if (!r || !out) return reject("gapm_result_table: null argument");
  return guarded([&] { *out = dup_string(gapm::render_table(r->report)); });
}

gapm_status gapm_result_ndjson(const gapm_result* r, char** out) {
  if (!r || !out) return reject("gapm_result_ndjson: null argument");
  return guarded([&] { *out = dup_string(gapm::render_ndjson(r->report)); });
}

gapm_status gapm_result_partition_text(const gapm_result* r, char** out) {
  if (!r || !out) return reject("gapm_result_partition_text: null argument");
  return guarded([&] {
    *out = dup_string(gapm::render_partition_text(r->report.state.partition));
  });
}

gapm_status gapm_result_partition_ndjson(const gapm_result* r, char** out) {
  if (!r || !out) return reject("gapm_result_partition_ndjson: null argument");
  return guarded([&] {
    *out = dup_string(gapm::render_partition_ndjson(r->report.state.partition));
  });
}

}  // extern "C"
