// apm: batch front end over the C API. Loads a problem file or a builtin,
// runs the requested solver mode, prints the iteration table, and
// optionally writes the newline-delimited record stream.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gapm/gapm.h"

namespace {

int complain(const std::string& what) {
  std::cerr << "apm: " << what << "\n";
  return 1;
}

gapm_problem* open_problem(const std::string& src, std::string& err) {
  gapm_problem* p = nullptr;
  if (std::filesystem::exists(src)) {
    if (gapm_problem_load(src.c_str(), &p) != GAPM_OK) {
      err = gapm_last_error();
      return nullptr;
    }
    return p;
  }
  if (gapm_problem_builtin(src.c_str(), &p) != GAPM_OK) {
    err = "no such file, and not a builtin: ";
    err += gapm_last_error();
    return nullptr;
  }
  return p;
}

bool write_file(const std::string& path, const char* text, std::string& err) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    err = path + ": write failed";
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive partition-based solver for two-stage stochastic LPs"};
  app.set_version_flag("--version", std::string("apm ") + gapm_version());
  app.require_subcommand(1);

  std::string source, mode, out_path, dump_path;
  double eps = 0;
  int max_iter = 0, saa_samples = 0, saa_reps = 0;
  std::uint64_t seed = 0;
  bool relative_gap = false, feas_cuts = false, print_partition = false;

  CLI::App* solve = app.add_subcommand("solve", "run a solver on a problem");
  solve->add_option("problem", source, "problem file or builtin name")
      ->required();
  solve->add_option("--mode", mode, "g2apm | lshaped | meanvalue | saa-ref");
  solve->add_option("--eps", eps, "absolute gap tolerance");
  solve->add_option("--max-iter", max_iter, "iteration cap");
  solve->add_option("--seed", seed, "sampling seed (saa-ref)");
  solve->add_option("--out", out_path, "write the record stream here");
  solve->add_flag("--relative-gap", relative_gap,
                  "measure the gap against 1 + |z_U|");
  solve->add_flag("--feasibility-cuts", feas_cuts,
                  "repair recourse-infeasible iterates with cuts");
  solve->add_option("--saa-samples", saa_samples, "samples per replication");
  solve->add_option("--saa-replications", saa_reps, "replication count");
  solve->add_option("--dump-partition", dump_path,
                    "write per-cell records of the final partition here");
  solve->add_flag("--print-partition", print_partition,
                  "print the final partition as a table");

  std::string export_out;
  CLI::App* exp = app.add_subcommand(
      "export", "parse a problem (file or builtin) and reprint it as JSON");
  exp->add_option("problem", source, "problem file or builtin name")
      ->required();
  exp->add_option("--out", export_out, "write here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  std::string err;
  gapm_problem* problem = open_problem(source, err);
  if (!problem) return complain(err);

  if (exp->parsed()) {
    char* text = nullptr;
    if (gapm_problem_to_json(problem, &text) != GAPM_OK) {
      gapm_problem_free(problem);
      return complain(gapm_last_error());
    }
    int rc = 0;
    if (export_out.empty())
      std::cout << text;
    else if (!write_file(export_out, text, err))
      rc = complain(err);
    gapm_string_free(text);
    gapm_problem_free(problem);
    return rc;
  }

  gapm_run_options opt;
  gapm_run_options_init(&opt);

  // file options fill the gaps, command-line flags win
  const char* file_solver = nullptr;
  if (gapm_problem_option_solver(problem, &file_solver)) opt.mode = file_solver;
  gapm_problem_option_eps(problem, &opt.eps);
  gapm_problem_option_max_iter(problem, &opt.max_iter);
  gapm_problem_option_seed(problem, &opt.seed);
  if (solve->count("--mode")) opt.mode = mode.c_str();
  if (solve->count("--eps")) opt.eps = eps;
  if (solve->count("--max-iter")) opt.max_iter = max_iter;
  if (solve->count("--seed")) opt.seed = seed;
  if (solve->count("--saa-samples")) opt.saa_samples = saa_samples;
  if (solve->count("--saa-replications")) opt.saa_replications = saa_reps;
  opt.relative_gap = relative_gap ? 1 : 0;
  opt.feasibility_cuts = feas_cuts ? 1 : 0;

  gapm_result* result = nullptr;
  if (gapm_run(problem, &opt, &result) != GAPM_OK) {
    gapm_problem_free(problem);
    return complain(gapm_last_error());
  }

  char* table = nullptr;
  if (gapm_result_table(result, &table) == GAPM_OK) {
    std::cout << table;
    gapm_string_free(table);
  }

  int rc = gapm_result_exit_status(result);
  if (!out_path.empty()) {
    char* ndjson = nullptr;
    if (gapm_result_ndjson(result, &ndjson) != GAPM_OK)
      rc = complain(gapm_last_error());
    else if (!write_file(out_path, ndjson, err))
      rc = complain(err);
    gapm_string_free(ndjson);
  }
  if (!dump_path.empty()) {
    char* cells = nullptr;
    if (gapm_result_partition_ndjson(result, &cells) != GAPM_OK)
      rc = complain(gapm_last_error());
    else if (!write_file(dump_path, cells, err))
      rc = complain(err);
    gapm_string_free(cells);
  }
  if (print_partition) {
    char* cells = nullptr;
    if (gapm_result_partition_text(result, &cells) == GAPM_OK) {
      std::cout << cells;
      gapm_string_free(cells);
    }
  }

  gapm_result_free(result);
  gapm_problem_free(problem);
  return rc;
}
