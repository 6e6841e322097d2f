#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "builtins.hpp"
#include "problem_json.hpp"
#include "report.hpp"

using namespace gapm;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

fs::path scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "apm_cli_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s)
    out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  out += "'";
  return out;
}

struct CliRun {
  int exit_code = -1;
  std::string out;
  std::string err;
};

CliRun apm(const std::vector<std::string>& args) {
  const fs::path errfile = scratch() / "stderr.txt";
  std::string cmd = shell_quote(APM_BINARY_PATH);
  for (const std::string& a : args) cmd += " " + shell_quote(a);
  cmd += " 2>" + shell_quote(errfile.string());

  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(errfile);
  return r;
}

std::vector<json> parse_ndjson(const std::string& text) {
  std::vector<json> records;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    REQUIRE(!line.empty());
    records.push_back(json::parse(line));
  }
  return records;
}

// structural and value equality of two problems
void check_same_problem(const TwoStageProblem& a, const TwoStageProblem& b) {
  CHECK(a.name == b.name);
  REQUIRE(a.c.size() == b.c.size());
  CHECK(a.c == b.c);
  REQUIRE(a.A.rows() == b.A.rows());
  CHECK(a.A == b.A);
  CHECK(a.b == b.b);
  REQUIRE(a.recourse.size() == b.recourse.size());
  for (std::size_t s = 0; s < a.recourse.size(); ++s) {
    CHECK(a.recourse[s].W == b.recourse[s].W);
    CHECK(a.recourse[s].q == b.recourse[s].q);
    CHECK(a.recourse[s].weight == b.recourse[s].weight);
  }
  REQUIRE(a.dist.is_discrete() == b.dist.is_discrete());
  CHECK(a.dist.l() == b.dist.l());
  CHECK(a.dist.n() == b.dist.n());
  if (a.dist.is_discrete()) {
    REQUIRE(a.dist.num_atoms() == b.dist.num_atoms());
    for (std::size_t i = 0; i < a.dist.num_atoms(); ++i) {
      CHECK(a.dist.atoms().atoms[i].T == b.dist.atoms().atoms[i].T);
      CHECK(a.dist.atoms().atoms[i].h == b.dist.atoms().atoms[i].h);
      CHECK(a.dist.atoms().atoms[i].weight == b.dist.atoms().atoms[i].weight);
    }
  } else {
    CHECK(a.dist.box().T_lo == b.dist.box().T_lo);
    CHECK(a.dist.box().T_hi == b.dist.box().T_hi);
    CHECK(a.dist.box().h_lo == b.dist.box().h_lo);
    CHECK(a.dist.box().h_hi == b.dist.box().h_hi);
  }
}

}  // namespace

TEST_CASE("round trip is value-exact for every builtin") {
  for (const char* name :
       {"prodmix", "cvar", "lands-mini", "random-discrete(5,2,2,2)"}) {
    CAPTURE(name);
    TwoStageProblem p = make_builtin(name);
    const std::string doc = problem_to_json(p);
    ProblemFile back = parse_problem_json(doc);
    check_same_problem(p, back.problem);
    // reprint is a byte-level fixed point
    CHECK(problem_to_json(back.problem) == doc);
  }
}

TEST_CASE("options survive the round trip") {
  TwoStageProblem p = make_builtin("cvar");
  FileOptions o;
  o.eps = 0.125;
  o.max_iter = 33;
  o.solver = "lshaped";
  o.seed = 77;
  ProblemFile back = parse_problem_json(problem_to_json(p, o));
  REQUIRE(back.options.eps.has_value());
  CHECK(*back.options.eps == 0.125);
  REQUIRE(back.options.max_iter.has_value());
  CHECK(*back.options.max_iter == 33);
  REQUIRE(back.options.solver.has_value());
  CHECK(*back.options.solver == "lshaped");
  REQUIRE(back.options.seed.has_value());
  CHECK(*back.options.seed == 77);
}

TEST_CASE("weighted recourse scenarios round trip") {
  TwoStageProblem p = make_builtin("cvar");
  RecourseScenario second = p.recourse[0];
  p.recourse[0].weight = 0.25;
  second.weight = 0.75;
  p.recourse.push_back(second);
  ProblemFile back = parse_problem_json(problem_to_json(p));
  check_same_problem(p, back.problem);
}

TEST_CASE("parse errors carry the field path") {
  auto parse_fails = [](const std::string& doc, const char* needle) {
    CAPTURE(doc);
    CAPTURE(needle);
    try {
      parse_problem_json(doc);
      FAIL_CHECK("expected a parse failure");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  const std::string good = problem_to_json(make_builtin("cvar"));

  parse_fails("{ nope", "parse error");
  parse_fails("[1,2]", "problem file");
  parse_fails(R"({"recourse": {}})", "first_stage: missing");
  parse_fails(R"({"first_stage": {"c": "x"}})", "first_stage.c");
  parse_fails(R"({"first_stage": {"c": [1, "x"]}})", "first_stage.c[1]");
  parse_fails(R"({"first_stage": {"c": [1], "A": [[1]]}})",
              "A and b must appear together");
  parse_fails(R"({"first_stage": {"c": [1], "A": [[1],[2,3]], "b": [0,0]}})",
              "first_stage.A[1]: row length 2 != 1");
  parse_fails(R"({"first_stage": {"c": [1], "A": [[1,2]], "b": [0]}})",
              "columns, expected 1");
  parse_fails(R"({"first_stage": {"c": [1]}, "recource": {}})",
              "recource: unknown key");
  parse_fails(R"({"first_stage": {"c": [1]}})", "recourse: missing");

  json doc = json::parse(good);
  doc["recourse_scenarios"] = json::array({doc["recourse"]});
  parse_fails(doc.dump(), "not both");

  doc = json::parse(good);
  doc["recourse_scenarios"] = json::array({doc["recourse"]});
  doc.erase("recourse");
  parse_fails(doc.dump(), "recourse_scenarios[0].weight: missing");

  doc = json::parse(good);
  doc["distribution"]["type"] = "gauss";
  parse_fails(doc.dump(), "unknown distribution type 'gauss'");

  doc = json::parse(good);
  doc["distribution"]["atoms"][1]["h"] = json::array({1.0, 2.0});
  parse_fails(doc.dump(), "distribution.atoms[1].h");

  doc = json::parse(good);
  doc["distribution"]["atoms"][2].erase("weight");
  parse_fails(doc.dump(), "distribution.atoms[2].weight: missing");

  doc = json::parse(good);
  doc["options"] = {{"solver", "simplex"}};
  parse_fails(doc.dump(), "options.solver: unknown solver 'simplex'");

  doc = json::parse(good);
  doc["options"] = {{"seed", -4}};
  parse_fails(doc.dump(), "options.seed");

  doc = json::parse(good);
  doc["options"] = {{"max_iter", 2.5}};
  parse_fails(doc.dump(), "options.max_iter: expected an integer");

  // box-shaped mistakes
  TwoStageProblem pm = make_builtin("prodmix");
  doc = json::parse(problem_to_json(pm));
  doc["distribution"]["T_hi"] = json::array({json::array({1.0, 2.0})});
  parse_fails(doc.dump(), "distribution.T_hi: dimensions differ from T_lo");

  doc = json::parse(problem_to_json(pm));
  doc["distribution"]["h_hi"][0] = -1e9;  // below h_lo
  try {
    parse_problem_json(doc.dump());
    FAIL_CHECK("expected a validation failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::validation);
  }
}

TEST_CASE("semantic validation still runs after a clean parse") {
  const std::string good = problem_to_json(make_builtin("cvar"));
  json doc = json::parse(good);
  doc["distribution"]["atoms"][0]["weight"] = 0.1;  // weights no longer sum to 1
  try {
    parse_problem_json(doc.dump());
    FAIL_CHECK("expected a validation failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::validation);
    CHECK(std::string(e.what()).find("weights") != std::string::npos);
  }
}

TEST_CASE("load_problem_file prefixes the path") {
  const fs::path f = scratch() / "cvar.json";
  spit(f, problem_to_json(make_builtin("cvar")));
  ProblemFile pf = load_problem_file(f.string());
  CHECK(pf.problem.name == "cvar");

  try {
    load_problem_file((scratch() / "missing.json").string());
    FAIL_CHECK("expected an io failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
    CHECK(std::string(e.what()).find("cannot open") != std::string::npos);
  }

  const fs::path badf = scratch() / "bad.json";
  spit(badf, "{\"first_stage\":}");
  try {
    load_problem_file(badf.string());
    FAIL_CHECK("expected an io failure");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("bad.json") != std::string::npos);
  }
}

TEST_CASE("json numbers survive the shortest-form writer") {
  for (double v : {1.0 / 3.0, -17711.566390258915, 1e-300, 6.02e23, 0.1,
                   123456789.123456789, -0.0}) {
    const std::string s = json_number(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(json_number(std::numeric_limits<double>::infinity()) == "null");
  CHECK(json_number(std::nan("")) == "null");
}

TEST_CASE("cli: prodmix table run") {
  CliRun r = apm({"solve", "prodmix", "--eps", "0.05"});
  CHECK(r.exit_code == 0);
  CHECK(r.err.empty());
  CHECK(r.out.find("z_L") != std::string::npos);
  CHECK(r.out.find("-18666.67") != std::string::npos);  // k = 1 lower bound
  CHECK(r.out.find("-17711.5") != std::string::npos);
  CHECK(r.out.find("status: converged") != std::string::npos);
  CHECK(r.out.find("timings:") != std::string::npos);
}

TEST_CASE("cli: exit codes") {
  CHECK(apm({"solve", "prodmix", "--eps", "1e-10", "--max-iter", "2"})
            .exit_code == 2);
  CliRun bad = apm({"solve", "no-such-thing"});
  CHECK(bad.exit_code == 1);
  CHECK(bad.err.find("apm:") != std::string::npos);
  CHECK(apm({"solve", "prodmix", "--mode", "simplex"}).exit_code == 1);
  CHECK(apm({"bogus-subcommand"}).exit_code != 0);
}

TEST_CASE("cli: structured records, byte-identical reruns") {
  const fs::path f1 = scratch() / "run1.ndjson";
  const fs::path f2 = scratch() / "run2.ndjson";
  CliRun r1 = apm({"solve", "prodmix", "--eps", "0.05", "--out", f1.string()});
  CliRun r2 = apm({"solve", "prodmix", "--eps", "0.05", "--out", f2.string()});
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r2.exit_code == 0);
  const std::string b1 = slurp(f1), b2 = slurp(f2);
  CHECK(!b1.empty());
  CHECK(b1 == b2);

  std::vector<json> records = parse_ndjson(b1);
  REQUIRE(records.size() >= 2);
  const json& summary = records.back();
  CHECK(summary.at("type") == "summary");
  CHECK(summary.at("mode") == "g2apm");
  CHECK(summary.at("problem") == "prodmix");
  CHECK(summary.at("status") == "converged");
  const double zu = summary.at("z_upper").get<double>();
  CHECK(zu >= -17712.6);
  CHECK(zu <= -17710.6);

  double prev_zl = -1e308, prev_zu = 1e308;
  int k = 0;
  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    const json& rec = records[i];
    CHECK(rec.at("type") == "iteration");
    CHECK(rec.at("k").get<int>() == ++k);
    const std::size_t cells = rec.at("cells").get<std::size_t>();
    CHECK(cells == std::size_t((k + 1) * (k + 1)));
    const double zl = rec.at("z_lower").get<double>();
    const double zur = rec.at("z_upper").get<double>();
    CHECK(zl >= prev_zl);
    CHECK(zur <= prev_zu);
    CHECK(zl <= zur);
    prev_zl = zl;
    prev_zu = zur;
  }
  CHECK(summary.at("iterations").get<int>() == k);
}

TEST_CASE("cli: export then solve matches the builtin run") {
  const fs::path exported = scratch() / "prodmix.json";
  CliRun e = apm({"export", "prodmix", "--out", exported.string()});
  REQUIRE(e.exit_code == 0);

  const fs::path f1 = scratch() / "direct.ndjson";
  const fs::path f2 = scratch() / "through_file.ndjson";
  REQUIRE(apm({"solve", "prodmix", "--eps", "0.05", "--out", f1.string()})
              .exit_code == 0);
  REQUIRE(apm({"solve", exported.string(), "--eps", "0.05", "--out",
               f2.string()})
              .exit_code == 0);
  CHECK(slurp(f1) == slurp(f2));

  // export to stdout parses too
  CliRun dump = apm({"export", "cvar"});
  REQUIRE(dump.exit_code == 0);
  CHECK(parse_problem_json(dump.out).problem.name == "cvar");
}

TEST_CASE("cli: file options steer the run, flags override") {
  TwoStageProblem p = make_builtin("cvar");
  FileOptions o;
  o.solver = "lshaped";
  o.eps = 1e-6;
  const fs::path f = scratch() / "cvar_opts.json";
  spit(f, problem_to_json(p, o));

  const fs::path out = scratch() / "opts_run.ndjson";
  REQUIRE(apm({"solve", f.string(), "--out", out.string()}).exit_code == 0);
  std::vector<json> records = parse_ndjson(slurp(out));
  CHECK(records.back().at("mode") == "lshaped");

  REQUIRE(apm({"solve", f.string(), "--mode", "g2apm", "--out", out.string()})
              .exit_code == 0);
  records = parse_ndjson(slurp(out));
  CHECK(records.back().at("mode") == "g2apm");
}

TEST_CASE("cli: meanvalue emits a null value") {
  const fs::path out = scratch() / "mv.ndjson";
  CliRun r = apm({"solve", "prodmix", "--mode", "meanvalue", "--out",
                  out.string()});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("lower bound only") != std::string::npos);
  std::vector<json> records = parse_ndjson(slurp(out));
  const json& summary = records.back();
  CHECK(summary.at("status") == "completed");
  CHECK(summary.at("value").is_null());
  CHECK(std::abs(summary.at("z_lower").get<double>() - (-18666.6667)) <= 0.5);
}

TEST_CASE("cli: partition dump on cvar") {
  const fs::path dump = scratch() / "cells.ndjson";
  CliRun r = apm({"solve", "cvar", "--print-partition", "--dump-partition",
                  dump.string()});
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("cells: 3") != std::string::npos);

  std::vector<json> records = parse_ndjson(slurp(dump));
  REQUIRE(records.size() == 4);  // three cells plus the summary
  double mass = 0;
  std::size_t atom_count = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(records[i].at("type") == "cell");
    mass += records[i].at("prob").get<double>();
    atom_count += records[i].at("atoms").size();
    CHECK(records[i].at("origin").size() >= 2);
  }
  CHECK(atom_count == 4);
  CHECK(std::abs(mass - 1.0) <= 1e-9);
  CHECK(records[3].at("type") == "partition_summary");
  CHECK(records[3].at("cells").get<int>() == 3);
}

TEST_CASE("cli: saa-ref replications, deterministic per seed") {
  const fs::path f1 = scratch() / "saa1.ndjson";
  const fs::path f2 = scratch() / "saa2.ndjson";
  const fs::path f3 = scratch() / "saa3.ndjson";
  std::vector<std::string> base = {"solve",  "prodmix", "--mode",
                                   "saa-ref", "--eps",  "0.05",
                                   "--saa-samples", "400",
                                   "--saa-replications", "4"};
  auto with = [&](const char* seed, const fs::path& out) {
    std::vector<std::string> args = base;
    args.insert(args.end(), {"--seed", seed, "--out", out.string()});
    return apm(args);
  };
  REQUIRE(with("11", f1).exit_code == 0);
  REQUIRE(with("11", f2).exit_code == 0);
  REQUIRE(with("12", f3).exit_code == 0);
  CHECK(slurp(f1) == slurp(f2));
  CHECK(slurp(f1) != slurp(f3));

  std::vector<json> records = parse_ndjson(slurp(f1));
  REQUIRE(records.size() == 5);
  for (int i = 0; i < 4; ++i) {
    CHECK(records[i].at("type") == "replication");
    CHECK(records[i].at("r").get<int>() == i + 1);
    CHECK(records[i].at("converged").get<bool>());
  }
  CHECK(records[4].at("mode") == "saa-ref");
  CHECK(records[4].at("seed").get<int>() == 11);
  const double mean = records[4].at("mean").get<double>();
  CHECK(mean < -17000.0);
  CHECK(mean > -18500.0);
}

TEST_CASE("saa reference run lands in the published interval") {
  // 10^4 samples x 20 replications, seed pinned; the per-replication
  // standard deviation is about 14, so the mean of 20 replications has
  // a standard error near 3 and an unpinned seed would fail often
  TwoStageProblem p = make_builtin("prodmix");
  RunOptions opt;
  opt.mode = "saa-ref";
  opt.solve.eps = 0.05;
  opt.seed = 3;
  opt.saa_samples = 10000;
  opt.saa_replications = 20;
  RunReport rep = run_problem(p, opt);
  CHECK(rep.exit_status == 0);
  CHECK(rep.saa_mean >= -17713.2);
  CHECK(rep.saa_mean <= -17708.8);
  CHECK(rep.saa_half_width > 0.0);
  CHECK(rep.saa_half_width < 20.0);
}

TEST_CASE("empirical sampling: atoms are honored, box stays inside") {
  TwoStageProblem cv = make_builtin("cvar");
  TwoStageProblem emp = sample_empirical(cv, 2000, 5);
  REQUIRE(emp.dist.is_discrete());
  REQUIRE(emp.dist.num_atoms() == 2000);
  // every sampled atom is one of the four originals; frequencies near 1/4
  std::vector<int> hits(cv.dist.num_atoms(), 0);
  for (std::size_t i = 0; i < emp.dist.num_atoms(); ++i) {
    const auto& a = emp.dist.atoms().atoms[i];
    bool found = false;
    for (std::size_t j = 0; j < cv.dist.num_atoms(); ++j) {
      if (a.T == cv.dist.atoms().atoms[j].T && a.h == cv.dist.atoms().atoms[j].h) {
        ++hits[j];
        found = true;
        break;
      }
    }
    CHECK(found);
  }
  for (int hcount : hits) {
    CHECK(hcount > 2000 / 4 - 120);
    CHECK(hcount < 2000 / 4 + 120);
  }

  TwoStageProblem pm = make_builtin("prodmix");
  TwoStageProblem box = sample_empirical(pm, 500, 5);
  REQUIRE(box.dist.num_atoms() == 500);
  const UniformBox& ub = pm.dist.box();
  for (std::size_t i = 0; i < 500; ++i) {
    const auto& a = box.dist.atoms().atoms[i];
    for (Index r = 0; r < a.T.rows(); ++r)
      for (Index c = 0; c < a.T.cols(); ++c) {
        CHECK(a.T(r, c) >= ub.T_lo(r, c));
        CHECK(a.T(r, c) <= ub.T_hi(r, c));
      }
    for (Index r = 0; r < a.h.size(); ++r) {
      CHECK(a.h[r] >= ub.h_lo[r]);
      CHECK(a.h[r] <= ub.h_hi[r]);
    }
  }
  box.validate();
}
