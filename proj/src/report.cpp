#include "report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

namespace gapm {
namespace {

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

void append_vec(std::string& s, const VectorXd& v) {
  s += '[';
  for (Index i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += json_number(v[i]);
  }
  s += ']';
}

void append_mat(std::string& s, const MatrixXd& m) {
  s += '[';
  for (Index i = 0; i < m.rows(); ++i) {
    if (i) s += ',';
    append_vec(s, m.row(i).transpose());
  }
  s += ']';
}

std::string status_string(const RunReport& rep) {
  if (rep.mode == "meanvalue" || rep.mode == "saa-ref")
    return rep.exit_status == 0 ? "completed" : "iteration_cap";
  return rep.state.converged ? "converged" : "iteration_cap";
}

const VectorXd& best_x(const SolverState& st) {
  return st.incumbent.size() > 0 ? st.incumbent : st.x_last;
}

std::string fixed2(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string point2(const VectorXd& x) {
  std::string s = "(";
  const Index shown = std::min<Index>(x.size(), 6);
  for (Index i = 0; i < shown; ++i) {
    if (i) s += ", ";
    s += fixed2(x[i]);
  }
  if (shown < x.size()) s += ", ...";
  s += ")";
  return s;
}

std::string general6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// right-align every column to its widest entry, two spaces between
std::string layout(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c)
      width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += "  ";
      line += std::string(width[c] - row[c].size(), ' ') + row[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

double u01(std::mt19937_64& g) { return (g() >> 11) * 0x1.0p-53; }

}  // namespace

std::string json_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

TwoStageProblem sample_empirical(const TwoStageProblem& p, int samples,
                                 std::uint64_t seed) {
  require(samples > 0, ErrorCode::invalid_argument,
          "saa: samples must be positive");
  std::mt19937_64 g(seed);
  const Index l = p.dist.l(), n = p.dist.n();
  DiscreteAtoms d;
  d.atoms.reserve(samples);
  const double w = 1.0 / samples;

  if (p.dist.is_discrete()) {
    const auto& atoms = p.dist.atoms().atoms;
    std::vector<double> cum(atoms.size());
    double acc = 0;
    for (std::size_t a = 0; a < atoms.size(); ++a)
      cum[a] = (acc += atoms[a].weight);
    for (int r = 0; r < samples; ++r) {
      const double u = u01(g) * acc;
      std::size_t idx =
          std::upper_bound(cum.begin(), cum.end(), u) - cum.begin();
      if (idx >= atoms.size()) idx = atoms.size() - 1;
      d.atoms.push_back({atoms[idx].T, atoms[idx].h, w});
    }
  } else {
    const UniformBox& b = p.dist.box();
    for (int r = 0; r < samples; ++r) {
      DiscreteAtoms::Atom a;
      a.T.resize(l, n);
      a.h.resize(l);
      a.weight = w;
      for (Index i = 0; i < l; ++i)
        for (Index j = 0; j < n; ++j)
          a.T(i, j) = b.T_lo(i, j) == b.T_hi(i, j)
                          ? b.T_lo(i, j)
                          : b.T_lo(i, j) +
                                u01(g) * (b.T_hi(i, j) - b.T_lo(i, j));
      for (Index i = 0; i < l; ++i)
        a.h[i] = b.h_lo[i] == b.h_hi[i]
                     ? b.h_lo[i]
                     : b.h_lo[i] + u01(g) * (b.h_hi[i] - b.h_lo[i]);
      d.atoms.push_back(std::move(a));
    }
  }

  TwoStageProblem q = p;
  q.dist = XiDistribution(l, n, std::move(d));
  return q;
}

RunReport run_problem(const TwoStageProblem& p, const RunOptions& opt) {
  p.validate();
  RunReport rep;
  rep.mode = opt.mode;
  rep.problem_name = p.name;
  rep.seed = opt.seed;
  const auto t0 = std::chrono::steady_clock::now();

  if (opt.mode == "g2apm" || opt.mode == "lshaped") {
    rep.state = opt.mode == "g2apm" ? g2apm(p, opt.solve) : lshaped(p, opt.solve);
    rep.exit_status = rep.state.converged ? 0 : 2;
  } else if (opt.mode == "meanvalue") {
    rep.state = meanvalue(p);
    rep.exit_status = 0;
  } else if (opt.mode == "saa-ref") {
    require(opt.saa_replications > 0 && opt.saa_samples > 0,
            ErrorCode::invalid_argument,
            "saa: samples and replications must be positive");
    rep.saa_samples = opt.saa_samples;
    std::mt19937_64 g(opt.seed);
    double sum = 0;
    for (int r = 1; r <= opt.saa_replications; ++r) {
      TwoStageProblem sp = sample_empirical(p, opt.saa_samples, g());
      SolverState st = g2apm(sp, opt.solve);
      rep.replications.push_back({r, st.z_upper, st.iterations, st.converged});
      if (!st.converged) rep.exit_status = 2;
      sum += st.z_upper;
    }
    const int R = opt.saa_replications;
    rep.saa_mean = sum / R;
    if (R > 1) {
      double ss = 0;
      for (const SaaReplication& sr : rep.replications)
        ss += (sr.value - rep.saa_mean) * (sr.value - rep.saa_mean);
      rep.saa_half_width = 1.96 * std::sqrt(ss / (R - 1)) / std::sqrt(double(R));
    }
  } else {
    fail(ErrorCode::invalid_argument, "run: unknown mode '" + opt.mode + "'");
  }

  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

std::string render_ndjson(const RunReport& rep) {
  std::string s;
  if (rep.mode == "saa-ref") {
    for (const SaaReplication& r : rep.replications) {
      s += "{\"type\":\"replication\",\"r\":" + std::to_string(r.r);
      s += ",\"samples\":" + std::to_string(rep.saa_samples);
      s += ",\"value\":" + json_number(r.value);
      s += ",\"iterations\":" + std::to_string(r.iterations);
      s += std::string(",\"converged\":") + (r.converged ? "true" : "false") +
           "}\n";
    }
    s += "{\"type\":\"summary\",\"mode\":\"saa-ref\",\"problem\":" +
         json_string(rep.problem_name);
    s += ",\"status\":\"" + status_string(rep) + "\"";
    s += ",\"replications\":" + std::to_string(rep.replications.size());
    s += ",\"samples\":" + std::to_string(rep.saa_samples);
    s += ",\"mean\":" + json_number(rep.saa_mean);
    s += ",\"half_width\":" + json_number(rep.saa_half_width);
    s += ",\"seed\":" + std::to_string(rep.seed) + "}\n";
    return s;
  }

  for (const IterationRecord& it : rep.state.history) {
    s += "{\"type\":\"iteration\",\"k\":" + std::to_string(it.k) + ",\"x\":";
    append_vec(s, it.x);
    s += ",\"master\":" + json_number(it.master_value);
    s += ",\"z_lower\":" + json_number(it.z_lower);
    s += ",\"z_upper\":" + json_number(it.z_upper);
    s += ",\"cells\":" + std::to_string(it.cells) + "}\n";
  }
  s += "{\"type\":\"summary\",\"mode\":\"" + rep.mode + "\",\"problem\":" +
       json_string(rep.problem_name);
  s += ",\"status\":\"" + status_string(rep) + "\"";
  s += ",\"iterations\":" + std::to_string(rep.state.iterations);
  s += ",\"cells\":" + std::to_string(rep.state.partition.size());
  s += ",\"z_lower\":" + json_number(rep.state.z_lower);
  s += ",\"z_upper\":" + json_number(rep.state.z_upper);
  s += ",\"value\":" + json_number(rep.state.z_upper);
  s += ",\"x\":";
  append_vec(s, best_x(rep.state));
  s += ",\"seed\":" + std::to_string(rep.seed) + "}\n";
  return s;
}

std::string render_table(const RunReport& rep) {
  std::string out;
  if (rep.mode == "saa-ref") {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"r", "value", "iters", "converged"});
    for (const SaaReplication& r : rep.replications)
      rows.push_back({std::to_string(r.r), fixed2(r.value),
                      std::to_string(r.iterations),
                      r.converged ? "yes" : "no"});
    out += layout(rows);
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "mean %.2f  95%% interval +/- %.2f  (%zu replications x %d "
                  "samples)\n",
                  rep.saa_mean, rep.saa_half_width, rep.replications.size(),
                  rep.saa_samples);
    out += buf;
    std::snprintf(buf, sizeof buf, "elapsed: %.3fs\n", rep.elapsed_seconds);
    out += buf;
    return out;
  }

  std::vector<std::vector<std::string>> rows;
  rows.push_back({"k", "x_k", "z_L", "z_U", "|P|"});
  for (const IterationRecord& it : rep.state.history)
    rows.push_back({std::to_string(it.k), point2(it.x), fixed2(it.z_lower),
                    fixed2(it.z_upper), std::to_string(it.cells)});
  out += layout(rows);

  const SolverState& st = rep.state;
  if (rep.mode == "meanvalue") {
    out += "status: lower bound only (mean-value relaxation), z_L = " +
           fixed2(st.z_lower) + "\n";
    out += "x_mv = " + point2(best_x(st)) + "\n";
  } else if (st.converged) {
    out += "status: converged in " + std::to_string(st.iterations) +
           " iterations (gap " + general6(st.gap()) + ")\n";
  } else {
    out += "status: iteration cap reached after " +
           std::to_string(st.iterations) + " iterations (gap " +
           general6(st.gap()) + ")\n";
  }
  if (rep.mode != "meanvalue")
    out += "value: " + fixed2(st.z_upper) + "  x* = " + point2(best_x(st)) +
           "\n";

  double tm = 0, tp = 0, tr = 0, tu = 0;
  for (const IterationRecord& it : st.history) {
    tm += it.t_master;
    tp += it.t_partition;
    tr += it.t_refine;
    tu += it.t_upper;
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "timings: master %.3fs  partition %.3fs  refine %.3fs  upper "
                "%.3fs  total %.3fs\n",
                tm, tp, tr, tu, rep.elapsed_seconds);
  out += buf;
  return out;
}

std::string render_partition_text(const Partition& part) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"cell", "prob", "origin", "mean_h", "mean_T"});
  for (std::size_t i = 0; i < part.cells.size(); ++i) {
    const Cell& c = part.cells[i];
    std::string origin;
    for (const std::string& tag : c.origin) {
      if (!origin.empty()) origin += "|";
      origin += tag;
    }
    std::string mh = "(";
    for (Index j = 0; j < c.stats.mean_h.size(); ++j) {
      if (j) mh += ", ";
      mh += general6(c.stats.mean_h[j]);
    }
    mh += ")";
    std::string mt;
    for (Index r = 0; r < c.stats.mean_T.rows(); ++r) {
      mt += "[";
      for (Index j = 0; j < c.stats.mean_T.cols(); ++j) {
        if (j) mt += ", ";
        mt += general6(c.stats.mean_T(r, j));
      }
      mt += "]";
    }
    rows.push_back({std::to_string(i), general6(c.stats.prob), origin, mh, mt});
  }
  std::string out = layout(rows);
  char buf[80];
  std::snprintf(buf, sizeof buf, "cells: %zu  total probability: %.12g\n",
                part.size(), part.total_prob());
  out += buf;
  return out;
}

std::string render_partition_ndjson(const Partition& part) {
  std::string s;
  for (std::size_t i = 0; i < part.cells.size(); ++i) {
    const Cell& c = part.cells[i];
    s += "{\"type\":\"cell\",\"index\":" + std::to_string(i);
    s += ",\"prob\":" + json_number(c.stats.prob);
    s += ",\"origin\":[";
    for (std::size_t t = 0; t < c.origin.size(); ++t) {
      if (t) s += ',';
      s += json_string(c.origin[t]);
    }
    s += "],\"mean_T\":";
    append_mat(s, c.stats.mean_T);
    s += ",\"mean_h\":";
    append_vec(s, c.stats.mean_h);
    if (c.atom_list) {
      s += ",\"atoms\":[";
      for (std::size_t a = 0; a < c.atom_list->size(); ++a) {
        if (a) s += ',';
        s += std::to_string((*c.atom_list)[a]);
      }
      s += ']';
    }
    s += "}\n";
  }
  s += "{\"type\":\"partition_summary\",\"cells\":" + std::to_string(part.size());
  s += ",\"total_prob\":" + json_number(part.total_prob()) + "}\n";
  return s;
}

}  // namespace gapm
