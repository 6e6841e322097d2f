#include "partition.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace gapm {
namespace {

std::string face_tag(const FaceId& f) {
  std::ostringstream os;
  os << "f{";
  for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << f[i];
  os << '}';
  return os.str();
}

CellStats stats_from_atoms(const XiDistribution& dist,
                           const std::vector<std::size_t>& idx) {
  CellStats s;
  if (idx.empty()) return s;
  VectorXd acc = VectorXd::Zero(dist.flat_dim());
  for (std::size_t a : idx) {
    s.prob += dist.atoms().atoms[a].weight;
    acc += dist.atoms().atoms[a].weight * dist.atom_full(a);
  }
  acc /= s.prob;
  XiDistribution::unflatten(dist.l(), dist.n(), acc, s.mean_T, s.mean_h);
  s.defined = true;
  return s;
}

// translate one cone row m.psi (<|=) 0 at psi = h - T x into the flattened
// xi space: sum_i m_i h_i - sum_ij m_i x_j T_ij (<|=) 0
VectorXd cone_row_to_flat(const XiDistribution& dist, const VectorXd& x,
                          const VectorXd& m) {
  const Index l = dist.l(), n = dist.n();
  VectorXd a = VectorXd::Zero(dist.flat_dim());
  for (Index i = 0; i < l; ++i) {
    a(XiDistribution::flat_index_h(l, n, i)) = m(i);
    for (Index j = 0; j < n; ++j)
      a(XiDistribution::flat_index_T(l, n, i, j)) = -m(i) * x(j);
  }
  return a;
}

struct CellRows {
  std::vector<VectorXd> a;
  std::vector<double> b;
  std::vector<bool> strict;
  std::vector<bool> eq;
  bool empty_cell = false;
};

// cone rows restricted to the random coordinates; constant rows either
// vanish or mark the preimage empty
void append_cone_rows(const XiDistribution& dist, const VectorXd& x,
                      const Cone& cone, double tol, bool keep_constant_verdict,
                      CellRows& out) {
  for (Index i = 0; i < cone.hrep.rows(); ++i) {
    const bool eq = cone.hrep.row_is_eq(i);
    VectorXd full = cone_row_to_flat(dist, x, cone.hrep.A.row(i));
    RestrictedRow rr = restrict_row(dist, full, 0.0, !eq, eq, tol);
    if (rr.kind == RestrictedRow::Kind::vacuous) continue;
    if (rr.kind == RestrictedRow::Kind::empty) {
      if (keep_constant_verdict) out.empty_cell = true;
      continue;  // atom-backed cells: membership is known, row is descriptive
    }
    out.a.push_back(std::move(rr.a));
    out.b.push_back(rr.b);
    out.strict.push_back(!eq);
    out.eq.push_back(eq);
  }
}

Cell cell_from_rows(const XiDistribution& dist, const CellRows& rows) {
  Cell c;
  c.geom.ambient_dim = dist.num_random();
  c.geom.A.resize(static_cast<Index>(rows.a.size()), dist.num_random());
  c.geom.b.resize(static_cast<Index>(rows.a.size()));
  for (std::size_t i = 0; i < rows.a.size(); ++i) {
    c.geom.A.row(static_cast<Index>(i)) = rows.a[i];
    c.geom.b(static_cast<Index>(i)) = rows.b[i];
    if (rows.eq[i]) c.geom.eqs.push_back(static_cast<Index>(i));
  }
  c.strict = rows.strict;
  return c;
}

// support box of the random coordinates (continuous laws)
HRep support_box(const XiDistribution& dist) {
  const Index r = dist.num_random();
  const UniformBox& bx = dist.box();
  const Index nT = dist.l() * dist.n();
  HRep h;
  h.ambient_dim = r;
  h.A.resize(2 * r, r);
  h.b.resize(2 * r);
  for (Index k = 0; k < r; ++k) {
    Index c = dist.random_coords()[static_cast<std::size_t>(k)];
    double lo, hi;
    if (c < nT) {
      lo = bx.T_lo(c / dist.n(), c % dist.n());
      hi = bx.T_hi(c / dist.n(), c % dist.n());
    } else {
      lo = bx.h_lo(c - nT);
      hi = bx.h_hi(c - nT);
    }
    h.A.row(2 * k) = VectorXd::Unit(r, k);
    h.b(2 * k) = hi;
    h.A.row(2 * k + 1) = -VectorXd::Unit(r, k);
    h.b(2 * k + 1) = -lo;
  }
  return h;
}

VectorXd lift_to_full(const XiDistribution& dist, const VectorXd& z) {
  VectorXd full = dist.constants();
  for (Index k = 0; k < dist.num_random(); ++k)
    full(dist.random_coords()[static_cast<std::size_t>(k)]) = z(k);
  return full;
}

bool atom_in_cell(const XiDistribution& dist, const Cell& cell, std::size_t a,
                  double tol) {
  VectorXd xi = dist.atom_restricted(a);
  double sc = tol * (1.0 + xi.norm());
  for (Index i = 0; i < cell.geom.rows(); ++i) {
    double rn = cell.geom.A.row(i).norm();
    double r = (cell.geom.A.row(i).dot(xi) - cell.geom.b(i)) / (rn > tol ? rn : 1.0);
    if (cell.geom.row_is_eq(i)) {
      if (std::abs(r) > sc) return false;
    } else if (cell.strict[static_cast<std::size_t>(i)]) {
      if (r >= -sc) return false;
    } else {
      if (r > sc) return false;
    }
  }
  return true;
}

std::vector<std::size_t> atoms_in_cell(const XiDistribution& dist,
                                       const Cell& cell, double tol) {
  if (cell.atom_list) return *cell.atom_list;
  std::vector<std::size_t> in;
  for (std::size_t a = 0; a < dist.num_atoms(); ++a)
    if (atom_in_cell(dist, cell, a, tol)) in.push_back(a);
  return in;
}

Partition adapted_discrete(const TwoStageProblem& p, const VectorXd& x,
                           const std::vector<Fan>& fans,
                           const std::string& label, double tol) {
  const XiDistribution& dist = p.dist;
  const std::size_t S = fans.size();
  std::map<std::vector<std::size_t>, std::vector<std::size_t>> groups;
  for (std::size_t a = 0; a < dist.num_atoms(); ++a) {
    const auto& atom = dist.atoms().atoms[a];
    std::vector<std::size_t> key(S);
    for (std::size_t s = 0; s < S; ++s) {
      VectorXd psi = atom.h - atom.T * x;
      auto c = classify_point(fans[s], psi, tol);
      if (!c)
        fail(ErrorCode::infeasible,
             "adapted_partition: atom " + std::to_string(a) +
                 " falls outside the coverage of scenario " +
                 std::to_string(s) + " (recourse infeasible there)");
      key[s] = *c;
    }
    groups[key].push_back(a);
  }

  Partition part;
  for (const auto& [key, atoms] : groups) {
    CellRows rows;
    std::ostringstream tag;
    tag << label;
    for (std::size_t s = 0; s < S; ++s) {
      append_cone_rows(dist, x, fans[s].cones[key[s]], tol, false, rows);
      tag << " s" << s << ":" << face_tag(fans[s].cones[key[s]].face_id);
    }
    Cell c = cell_from_rows(dist, rows);
    c.atom_list = atoms;
    c.stats = stats_from_atoms(dist, atoms);
    c.origin = {tag.str()};
    part.cells.push_back(std::move(c));
  }
  return part;
}

Partition adapted_one_fan_box(const TwoStageProblem& p, const VectorXd& x,
                              const Fan& fan, std::size_t s,
                              const std::string& label, double tol) {
  const XiDistribution& dist = p.dist;
  Partition part;
  for (std::size_t ci = 0; ci < fan.cones.size(); ++ci) {
    CellRows rows;
    append_cone_rows(dist, x, fan.cones[ci], tol, true, rows);
    if (rows.empty_cell) continue;
    Cell c = cell_from_rows(dist, rows);
    c.stats = cell_stats(dist, c.geom, c.strict, tol);
    if (c.stats.prob <= kProbFloor) continue;
    std::ostringstream tag;
    tag << label << " s" << s << ":" << face_tag(fan.cones[ci].face_id);
    c.origin = {tag.str()};
    part.cells.push_back(std::move(c));
  }
  double mass = part.total_prob();
  if (mass < 1.0 - 1e-6)
    fail(ErrorCode::infeasible,
         "adapted_partition: only " + std::to_string(mass) +
             " of the support is covered by scenario " + std::to_string(s) +
             " (recourse infeasible on the rest)");
  require(mass <= 1.0 + 1e-6, ErrorCode::consistency,
          "adapted_partition: cell masses overlap");
  return part;
}

}  // namespace

double Partition::total_prob() const {
  double s = 0;
  for (const Cell& c : cells) s += c.stats.prob;
  return s;
}

std::vector<CellStats> Partition::stats() const {
  std::vector<CellStats> out;
  out.reserve(cells.size());
  for (const Cell& c : cells) out.push_back(c.stats);
  return out;
}

Partition trivial_partition(const XiDistribution& dist) {
  Cell c;
  c.geom = HRep::full_space(dist.num_random());
  if (dist.is_discrete()) {
    std::vector<std::size_t> all(dist.num_atoms());
    for (std::size_t a = 0; a < all.size(); ++a) all[a] = a;
    c.atom_list = std::move(all);
  }
  c.stats.prob = 1.0;
  total_mean(dist, c.stats.mean_T, c.stats.mean_h);
  c.stats.defined = true;
  c.origin = {"root"};
  Partition p;
  p.cells.push_back(std::move(c));
  return p;
}

std::vector<Fan> dual_fans(const TwoStageProblem& p, double tol) {
  std::vector<Fan> fans;
  fans.reserve(p.num_scenarios());
  for (const RecourseScenario& rs : p.recourse) {
    HRep d;
    d.ambient_dim = p.l();
    d.A = rs.W.transpose();
    d.b = rs.q;
    fans.push_back(normal_fan(d, tol));
  }
  return fans;
}

Partition adapted_partition(const TwoStageProblem& p, const VectorXd& x,
                            const std::vector<Fan>& fans,
                            const std::string& label, double tol) {
  require(fans.size() == p.num_scenarios(), ErrorCode::invalid_argument,
          "adapted_partition: one fan per scenario required");
  require(x.size() == p.n(), ErrorCode::dimension_mismatch,
          "adapted_partition: x size");
  if (p.dist.is_discrete()) return adapted_discrete(p, x, fans, label, tol);

  Partition acc = adapted_one_fan_box(p, x, fans[0], 0, label, tol);
  for (std::size_t s = 1; s < fans.size(); ++s)
    acc = common_refinement(acc, adapted_one_fan_box(p, x, fans[s], s, label, tol),
                            p.dist, tol);
  return acc;
}

Partition common_refinement(const Partition& a, const Partition& b,
                            const XiDistribution& dist, double tol) {
  Partition out;
  for (const Cell& ca : a.cells) {
    for (const Cell& cb : b.cells) {
      Cell c;
      c.geom = intersect(ca.geom, cb.geom);
      c.strict = ca.strict;
      c.strict.insert(c.strict.end(), cb.strict.begin(), cb.strict.end());
      if (dist.is_discrete()) {
        std::vector<std::size_t> la = atoms_in_cell(dist, ca, tol);
        std::vector<std::size_t> lb = atoms_in_cell(dist, cb, tol);
        std::vector<std::size_t> inter;
        std::set_intersection(la.begin(), la.end(), lb.begin(), lb.end(),
                              std::back_inserter(inter));
        if (inter.empty()) continue;
        c.stats = stats_from_atoms(dist, inter);
        c.atom_list = std::move(inter);
      } else {
        c.stats = cell_stats(dist, c.geom, c.strict, tol);
        if (c.stats.prob <= kProbFloor) continue;
      }
      c.origin = ca.origin;
      for (const std::string& t : cb.origin)
        if (std::find(c.origin.begin(), c.origin.end(), t) == c.origin.end())
          c.origin.push_back(t);
      out.cells.push_back(std::move(c));
    }
  }
  double expect = std::min(a.total_prob(), b.total_prob());
  require(out.total_prob() >= expect - 1e-6, ErrorCode::consistency,
          "common_refinement: lost probability mass (" +
              std::to_string(out.total_prob()) + " of " + std::to_string(expect) +
              ")");
  return out;
}

bool is_refinement(const Partition& fine, const Partition& coarse,
                   const XiDistribution& dist, double tol) {
  for (const Cell& cf : fine.cells) {
    if (cf.stats.prob <= kProbFloor) continue;
    bool found = false;
    for (const Cell& cc : coarse.cells) {
      double inter;
      if (dist.is_discrete()) {
        std::vector<std::size_t> lf = atoms_in_cell(dist, cf, tol);
        std::vector<std::size_t> lc = atoms_in_cell(dist, cc, tol);
        std::vector<std::size_t> both;
        std::set_intersection(lf.begin(), lf.end(), lc.begin(), lc.end(),
                              std::back_inserter(both));
        inter = stats_from_atoms(dist, both).prob;
      } else {
        HRep g = intersect(cf.geom, cc.geom);
        std::vector<bool> strict = cf.strict;
        strict.insert(strict.end(), cc.strict.begin(), cc.strict.end());
        inter = cell_stats(dist, g, strict, tol).prob;
      }
      if (inter >= cf.stats.prob - 1e-9) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

bool check_adapted(const TwoStageProblem& p, const VectorXd& x,
                   const Partition& part, const std::vector<Fan>& fans,
                   double tol) {
  const XiDistribution& dist = p.dist;
  const double cover_tol = std::max(tol, 1e-7);

  for (const Cell& cell : part.cells) {
    if (cell.stats.prob <= kProbFloor) continue;

    // representative xi points whose psi must share a closed maximal cone
    std::vector<VectorXd> flats;
    if (dist.is_discrete()) {
      require(cell.atom_list.has_value(), ErrorCode::invalid_argument,
              "check_adapted: discrete cells need atom lists");
      for (std::size_t a : *cell.atom_list) flats.push_back(dist.atom_full(a));
    } else {
      VRep v = h_to_v(intersect(cell.geom, support_box(dist)), tol);
      if (v.empty()) continue;
      for (const VectorXd& vert : v.vertices)
        flats.push_back(lift_to_full(dist, vert));
    }

    for (std::size_t s = 0; s < fans.size(); ++s) {
      bool cell_ok = false;
      for (std::size_t mi : fans[s].maximal) {
        const Cone& cone = fans[s].cones[mi];
        bool all_in = true;
        for (const VectorXd& full : flats) {
          MatrixXd T;
          VectorXd h;
          XiDistribution::unflatten(dist.l(), dist.n(), full, T, h);
          if (!cone.contains(h - T * x, cover_tol)) {
            all_in = false;
            break;
          }
        }
        if (all_in) {
          cell_ok = true;
          break;
        }
      }
      if (!cell_ok) return false;
    }
  }
  return true;
}

Partition partition_from_atom_groups(
    const XiDistribution& dist,
    const std::vector<std::vector<std::size_t>>& groups) {
  require(dist.is_discrete(), ErrorCode::invalid_argument,
          "partition_from_atom_groups: discrete laws only");
  std::vector<int> seen(dist.num_atoms(), 0);
  Partition part;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::vector<std::size_t> idx = groups[g];
    std::sort(idx.begin(), idx.end());
    for (std::size_t a : idx) {
      require(a < dist.num_atoms(), ErrorCode::invalid_argument,
              "partition_from_atom_groups: atom index out of range");
      require(!seen[a]++, ErrorCode::invalid_argument,
              "partition_from_atom_groups: atom " + std::to_string(a) +
                  " in two groups");
    }
    if (idx.empty()) continue;
    Cell c;
    c.geom = HRep::full_space(dist.num_random());
    c.stats = stats_from_atoms(dist, idx);
    c.atom_list = std::move(idx);
    c.origin = {"user:g" + std::to_string(g)};
    part.cells.push_back(std::move(c));
  }
  for (std::size_t a = 0; a < dist.num_atoms(); ++a)
    require(seen[a] == 1, ErrorCode::invalid_argument,
            "partition_from_atom_groups: atom " + std::to_string(a) +
                " unassigned");
  return part;
}

}  // namespace gapm
