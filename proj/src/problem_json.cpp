#include "problem_json.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "error.hpp"

namespace gapm {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  fail(ErrorCode::io, path + ": " + what);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string at(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const json* find(const json& obj, const char* key) {
  if (!obj.is_object()) return nullptr;
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& need(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) bad(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) bad(join(path, key), "missing");
  return *it;
}

// catches misspelled sections early instead of silently ignoring them
void known_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> keys) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : keys)
      if (it.key() == k) ok = true;
    if (!ok) bad(join(path, it.key()), "unknown key");
  }
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  return j.get<double>();
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a string");
  return j.get<std::string>();
}

VectorXd vector(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of numbers");
  VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = number(j[i], at(path, i));
  return v;
}

MatrixXd matrix(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of rows");
  MatrixXd m(j.size(), 0);
  for (std::size_t i = 0; i < j.size(); ++i) {
    VectorXd row = vector(j[i], at(path, i));
    if (i == 0)
      m.resize(m.rows(), row.size());
    else if (row.size() != m.cols())
      bad(at(path, i), "row length " + std::to_string(row.size()) + " != " +
                           std::to_string(m.cols()));
    m.row(i) = row.transpose();
  }
  return m;
}

RecourseScenario scenario(const json& j, const std::string& path,
                          bool need_weight) {
  if (!j.is_object()) bad(path, "expected an object");
  known_keys(j, path, {"W", "q", "weight"});
  RecourseScenario s;
  s.W = matrix(need(j, "W", path), join(path, "W"));
  s.q = vector(need(j, "q", path), join(path, "q"));
  if (const json* w = find(j, "weight"))
    s.weight = number(*w, join(path, "weight"));
  else if (need_weight)
    bad(join(path, "weight"), "missing");
  return s;
}

XiDistribution distribution(const json& j, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  const std::string type = text(need(j, "type", path), join(path, "type"));
  if (type == "atoms") {
    known_keys(j, path, {"type", "atoms"});
    const json& arr = need(j, "atoms", path);
    if (!arr.is_array() || arr.empty())
      bad(join(path, "atoms"), "expected a nonempty array");
    DiscreteAtoms d;
    for (std::size_t a = 0; a < arr.size(); ++a) {
      const std::string ap = at(join(path, "atoms"), a);
      if (!arr[a].is_object()) bad(ap, "expected an object");
      known_keys(arr[a], ap, {"T", "h", "weight"});
      DiscreteAtoms::Atom atom;
      atom.T = matrix(need(arr[a], "T", ap), join(ap, "T"));
      atom.h = vector(need(arr[a], "h", ap), join(ap, "h"));
      atom.weight = number(need(arr[a], "weight", ap), join(ap, "weight"));
      if (a > 0) {
        const DiscreteAtoms::Atom& first = d.atoms[0];
        if (atom.T.rows() != first.T.rows() || atom.T.cols() != first.T.cols())
          bad(join(ap, "T"), "dimensions differ from atoms[0].T");
        if (atom.h.size() != first.h.size())
          bad(join(ap, "h"), "length differs from atoms[0].h");
      }
      d.atoms.push_back(std::move(atom));
    }
    const Index l = d.atoms[0].h.size(), n = d.atoms[0].T.cols();
    return XiDistribution(l, n, std::move(d));
  }
  if (type == "uniform_box") {
    known_keys(j, path, {"type", "T_lo", "T_hi", "h_lo", "h_hi"});
    UniformBox b;
    b.T_lo = matrix(need(j, "T_lo", path), join(path, "T_lo"));
    b.T_hi = matrix(need(j, "T_hi", path), join(path, "T_hi"));
    b.h_lo = vector(need(j, "h_lo", path), join(path, "h_lo"));
    b.h_hi = vector(need(j, "h_hi", path), join(path, "h_hi"));
    if (b.T_hi.rows() != b.T_lo.rows() || b.T_hi.cols() != b.T_lo.cols())
      bad(join(path, "T_hi"), "dimensions differ from T_lo");
    if (b.h_hi.size() != b.h_lo.size())
      bad(join(path, "h_hi"), "length differs from h_lo");
    if (b.h_lo.size() != b.T_lo.rows())
      bad(join(path, "h_lo"), "length " + std::to_string(b.h_lo.size()) +
                                  " != T_lo row count " +
                                  std::to_string(b.T_lo.rows()));
    const Index l = b.h_lo.size(), n = b.T_lo.cols();
    return XiDistribution(l, n, std::move(b));
  }
  bad(join(path, "type"), "unknown distribution type '" + type +
                              "' (want atoms or uniform_box)");
}

FileOptions options(const json* j, const std::string& path) {
  FileOptions o;
  if (!j) return o;
  if (!j->is_object()) bad(path, "expected an object");
  known_keys(*j, path, {"eps", "max_iter", "solver", "seed"});
  if (const json* v = find(*j, "eps")) o.eps = number(*v, join(path, "eps"));
  if (const json* v = find(*j, "max_iter")) {
    if (!v->is_number_integer()) bad(join(path, "max_iter"), "expected an integer");
    o.max_iter = v->get<int>();
  }
  if (const json* v = find(*j, "solver")) {
    const std::string s = text(*v, join(path, "solver"));
    if (s != "g2apm" && s != "lshaped" && s != "meanvalue" && s != "saa-ref")
      bad(join(path, "solver"),
          "unknown solver '" + s + "' (want g2apm, lshaped, meanvalue, saa-ref)");
    o.solver = s;
  }
  if (const json* v = find(*j, "seed")) {
    if (!v->is_number_integer() ||
        (!v->is_number_unsigned() && v->get<std::int64_t>() < 0))
      bad(join(path, "seed"), "expected a nonnegative integer");
    o.seed = v->get<std::uint64_t>();
  }
  return o;
}

json jvec(const VectorXd& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json jmat(const MatrixXd& m) {
  json a = json::array();
  for (Index i = 0; i < m.rows(); ++i) a.push_back(jvec(m.row(i).transpose()));
  return a;
}

}  // namespace

ProblemFile parse_problem_json(const std::string& textdoc) {
  json doc;
  try {
    doc = json::parse(textdoc);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::io, e.what());
  }
  if (!doc.is_object()) bad("problem file", "expected a JSON object");
  known_keys(doc, "",
             {"name", "first_stage", "recourse", "recourse_scenarios",
              "distribution", "options"});

  ProblemFile pf;
  if (const json* nm = find(doc, "name"))
    pf.problem.name = text(*nm, "name");

  const json& fs = need(doc, "first_stage", "");
  if (!fs.is_object()) bad("first_stage", "expected an object");
  known_keys(fs, "first_stage", {"c", "A", "b"});
  pf.problem.c = vector(need(fs, "c", "first_stage"), "first_stage.c");
  const json* A = find(fs, "A");
  const json* b = find(fs, "b");
  if (!A != !b) bad("first_stage", "A and b must appear together");
  if (A) {
    pf.problem.A = matrix(*A, "first_stage.A");
    pf.problem.b = vector(*b, "first_stage.b");
    if (pf.problem.A.rows() != pf.problem.b.size())
      bad("first_stage.A", std::to_string(pf.problem.A.rows()) +
                               " rows but b has " +
                               std::to_string(pf.problem.b.size()) + " entries");
    if (pf.problem.A.cols() != pf.problem.c.size())
      bad("first_stage.A", std::to_string(pf.problem.A.cols()) +
                               " columns, expected " +
                               std::to_string(pf.problem.c.size()) +
                               " (the length of c)");
  } else {
    pf.problem.A.resize(0, pf.problem.c.size());
    pf.problem.b.resize(0);
  }

  const json* rec = find(doc, "recourse");
  const json* recs = find(doc, "recourse_scenarios");
  if (rec && recs) bad("recourse", "give recourse or recourse_scenarios, not both");
  if (rec) {
    pf.problem.recourse.push_back(scenario(*rec, "recourse", false));
  } else if (recs) {
    if (!recs->is_array() || recs->empty())
      bad("recourse_scenarios", "expected a nonempty array");
    for (std::size_t s = 0; s < recs->size(); ++s)
      pf.problem.recourse.push_back(
          scenario((*recs)[s], at("recourse_scenarios", s), true));
  } else {
    bad("recourse", "missing (or give recourse_scenarios)");
  }

  pf.problem.dist = distribution(need(doc, "distribution", ""), "distribution");
  pf.options = options(find(doc, "options"), "options");
  pf.problem.validate();
  return pf;
}

ProblemFile load_problem_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, path + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_problem_json(buf.str());
  } catch (const Error& e) {
    fail(e.code(), path + ": " + e.what());
  }
}

std::string problem_to_json(const TwoStageProblem& p, const FileOptions& opts) {
  json doc;
  if (!p.name.empty()) doc["name"] = p.name;
  json fs;
  fs["c"] = jvec(p.c);
  if (p.A.rows() > 0) {
    fs["A"] = jmat(p.A);
    fs["b"] = jvec(p.b);
  }
  doc["first_stage"] = std::move(fs);

  if (p.recourse.size() == 1 && p.recourse[0].weight == 1.0) {
    json r;
    r["W"] = jmat(p.recourse[0].W);
    r["q"] = jvec(p.recourse[0].q);
    doc["recourse"] = std::move(r);
  } else {
    json arr = json::array();
    for (const RecourseScenario& s : p.recourse) {
      json r;
      r["W"] = jmat(s.W);
      r["q"] = jvec(s.q);
      r["weight"] = s.weight;
      arr.push_back(std::move(r));
    }
    doc["recourse_scenarios"] = std::move(arr);
  }

  json d;
  if (p.dist.is_discrete()) {
    d["type"] = "atoms";
    json arr = json::array();
    for (const DiscreteAtoms::Atom& a : p.dist.atoms().atoms) {
      json ja;
      ja["T"] = jmat(a.T);
      ja["h"] = jvec(a.h);
      ja["weight"] = a.weight;
      arr.push_back(std::move(ja));
    }
    d["atoms"] = std::move(arr);
  } else {
    const UniformBox& b = p.dist.box();
    d["type"] = "uniform_box";
    d["T_lo"] = jmat(b.T_lo);
    d["T_hi"] = jmat(b.T_hi);
    d["h_lo"] = jvec(b.h_lo);
    d["h_hi"] = jvec(b.h_hi);
  }
  doc["distribution"] = std::move(d);

  json jo;
  if (opts.eps) jo["eps"] = *opts.eps;
  if (opts.max_iter) jo["max_iter"] = *opts.max_iter;
  if (opts.solver) jo["solver"] = *opts.solver;
  if (opts.seed) jo["seed"] = *opts.seed;
  if (!jo.empty()) doc["options"] = std::move(jo);

  return doc.dump(2) + "\n";
}

}  // namespace gapm
