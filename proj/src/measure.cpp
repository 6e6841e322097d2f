#include "measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gapm {
namespace {

// union-find over coordinate indices
struct DSU {
  std::vector<int> parent;
  explicit DSU(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

XiDistribution::XiDistribution(Index l, Index n, DiscreteAtoms atoms)
    : l_(l), n_(n), law_(std::move(atoms)) {
  const auto& as = std::get<DiscreteAtoms>(law_).atoms;
  require(!as.empty(), ErrorCode::validation, "distribution: no atoms");
  constants_ = atom_full_impl(as[0]);
  std::vector<bool> varies(static_cast<std::size_t>(flat_dim()), false);
  for (const auto& a : as) {
    require(a.T.rows() == l_ && a.T.cols() == n_ && a.h.size() == l_,
            ErrorCode::validation, "distribution: atom dimensions");
    for (Index i = 0; i < l_; ++i) {
      for (Index j = 0; j < n_; ++j)
        if (a.T(i, j) != constants_(flat_index_T(l_, n_, i, j)))
          varies[static_cast<std::size_t>(flat_index_T(l_, n_, i, j))] = true;
      if (a.h(i) != constants_(flat_index_h(l_, n_, i)))
        varies[static_cast<std::size_t>(flat_index_h(l_, n_, i))] = true;
    }
  }
  for (Index k = 0; k < flat_dim(); ++k)
    if (varies[static_cast<std::size_t>(k)]) random_.push_back(k);
}

XiDistribution::XiDistribution(Index l, Index n, UniformBox box)
    : l_(l), n_(n), law_(std::move(box)) {
  const auto& bx = std::get<UniformBox>(law_);
  require(bx.T_lo.rows() == l_ && bx.T_lo.cols() == n_ &&
              bx.T_hi.rows() == l_ && bx.T_hi.cols() == n_ &&
              bx.h_lo.size() == l_ && bx.h_hi.size() == l_,
          ErrorCode::validation, "distribution: box dimensions");
  constants_.resize(flat_dim());
  for (Index i = 0; i < l_; ++i) {
    for (Index j = 0; j < n_; ++j) {
      require(bx.T_hi(i, j) >= bx.T_lo(i, j), ErrorCode::validation,
              "distribution: T_hi < T_lo");
      constants_(flat_index_T(l_, n_, i, j)) = bx.T_lo(i, j);
      if (bx.T_hi(i, j) > bx.T_lo(i, j))
        random_.push_back(flat_index_T(l_, n_, i, j));
    }
  }
  for (Index i = 0; i < l_; ++i) {
    require(bx.h_hi(i) >= bx.h_lo(i), ErrorCode::validation,
            "distribution: h_hi < h_lo");
    constants_(flat_index_h(l_, n_, i)) = bx.h_lo(i);
    if (bx.h_hi(i) > bx.h_lo(i)) random_.push_back(flat_index_h(l_, n_, i));
  }
}

VectorXd XiDistribution::atom_full_impl(const DiscreteAtoms::Atom& a) const {
  VectorXd full(flat_dim());
  for (Index i = 0; i < l_; ++i)
    for (Index j = 0; j < n_; ++j) full(flat_index_T(l_, n_, i, j)) = a.T(i, j);
  for (Index i = 0; i < l_; ++i) full(flat_index_h(l_, n_, i)) = a.h(i);
  return full;
}

const DiscreteAtoms& XiDistribution::atoms() const {
  require(is_discrete(), ErrorCode::invalid_argument,
          "distribution: not discrete");
  return std::get<DiscreteAtoms>(law_);
}

const UniformBox& XiDistribution::box() const {
  require(!is_discrete(), ErrorCode::invalid_argument,
          "distribution: not a uniform box");
  return std::get<UniformBox>(law_);
}

std::size_t XiDistribution::num_atoms() const {
  return is_discrete() ? atoms().atoms.size() : 0;
}

VectorXd XiDistribution::atom_full(std::size_t a) const {
  const auto& as = atoms().atoms;
  require(a < as.size(), ErrorCode::invalid_argument, "atom index");
  return atom_full_impl(as[a]);
}

VectorXd XiDistribution::atom_restricted(std::size_t a) const {
  VectorXd full = atom_full(a);
  VectorXd r(num_random());
  for (Index k = 0; k < num_random(); ++k) r(k) = full(random_[static_cast<std::size_t>(k)]);
  return r;
}

void XiDistribution::unflatten(Index l, Index n, const VectorXd& full,
                               MatrixXd& T, VectorXd& h) {
  T.resize(l, n);
  h.resize(l);
  for (Index i = 0; i < l; ++i) {
    for (Index j = 0; j < n; ++j) T(i, j) = full(flat_index_T(l, n, i, j));
    h(i) = full(flat_index_h(l, n, i));
  }
}

void XiDistribution::validate() const {
  require(l_ > 0 && n_ > 0, ErrorCode::validation, "distribution: l, n must be positive");
  if (is_discrete()) {
    double w = 0;
    for (const auto& a : atoms().atoms) {
      require(a.weight > 0, ErrorCode::validation,
              "distribution: atom weights must be positive");
      w += a.weight;
    }
    require(std::abs(w - 1.0) <= 1e-9, ErrorCode::validation,
            "distribution: atom weights sum to " + std::to_string(w));
  }
}

RestrictedRow restrict_row(const XiDistribution& dist, const VectorXd& a_full,
                           double b_full, bool strict, bool eq, double tol) {
  require(a_full.size() == dist.flat_dim(), ErrorCode::dimension_mismatch,
          "restrict_row: flat dimension");
  RestrictedRow out;
  out.a.resize(dist.num_random());
  double shift = 0.0;
  std::vector<bool> is_random(static_cast<std::size_t>(dist.flat_dim()), false);
  for (Index k = 0; k < dist.num_random(); ++k) {
    Index c = dist.random_coords()[static_cast<std::size_t>(k)];
    is_random[static_cast<std::size_t>(c)] = true;
    out.a(k) = a_full(c);
  }
  for (Index c = 0; c < dist.flat_dim(); ++c)
    if (!is_random[static_cast<std::size_t>(c)] && a_full(c) != 0.0)
      shift += a_full(c) * dist.constants()(c);
  out.b = b_full - shift;

  double scale = 1.0 + a_full.lpNorm<Eigen::Infinity>() +
                 dist.constants().lpNorm<Eigen::Infinity>();
  if (out.a.lpNorm<Eigen::Infinity>() <= tol * scale) {
    // constant constraint: either vacuous or impossible
    bool holds;
    if (eq)
      holds = std::abs(out.b) <= tol * scale;
    else if (strict)
      holds = out.b > tol * scale;
    else
      holds = out.b >= -tol * scale;
    out.kind = holds ? RestrictedRow::Kind::vacuous : RestrictedRow::Kind::empty;
    return out;
  }
  out.kind = RestrictedRow::Kind::usable;
  return out;
}

namespace {

CellStats undefined_stats(const XiDistribution& dist) {
  CellStats s;
  s.prob = 0.0;
  s.defined = false;
  s.mean_T.resize(0, 0);
  s.mean_h.resize(0);
  (void)dist;
  return s;
}

CellStats stats_from_full_mean(const XiDistribution& dist, double prob,
                               const VectorXd& full) {
  CellStats s;
  s.prob = prob;
  s.defined = true;
  XiDistribution::unflatten(dist.l(), dist.n(), full, s.mean_T, s.mean_h);
  return s;
}

CellStats discrete_cell_stats(const XiDistribution& dist, const HRep& cell,
                              const std::vector<bool>& strict, double tol) {
  double prob = 0.0;
  VectorXd acc = VectorXd::Zero(dist.flat_dim());
  const auto& as = dist.atoms().atoms;
  for (std::size_t a = 0; a < as.size(); ++a) {
    VectorXd xi = dist.atom_restricted(a);
    double scale = 1.0 + xi.norm();
    bool in = true;
    for (Index i = 0; i < cell.rows() && in; ++i) {
      double r = cell.A.row(i).dot(xi) - cell.b(i);
      double rn = cell.A.row(i).norm();
      if (rn > tol) r /= rn;
      if (cell.row_is_eq(i))
        in = std::abs(r) <= tol * scale;
      else if (i < static_cast<Index>(strict.size()) && strict[static_cast<std::size_t>(i)])
        in = r < -tol * scale;
      else
        in = r <= tol * scale;
    }
    if (in) {
      prob += as[a].weight;
      acc += as[a].weight * dist.atom_full(a);
    }
  }
  if (prob <= 0.0) return undefined_stats(dist);
  return stats_from_full_mean(dist, prob, VectorXd(acc / prob));
}

CellStats box_cell_stats(const XiDistribution& dist, const HRep& cell,
                         double tol) {
  const Index r = dist.num_random();
  const auto& coords = dist.random_coords();
  const UniformBox& bx = dist.box();

  // per-coordinate affine map xi_c = lo_c + w_c u_c onto [0,1]
  VectorXd lo(r), w(r);
  for (Index k = 0; k < r; ++k) {
    Index c = coords[static_cast<std::size_t>(k)];
    Index nT = dist.l() * dist.n();
    double a, b;
    if (c < nT) {
      a = bx.T_lo(c / dist.n(), c % dist.n());
      b = bx.T_hi(c / dist.n(), c % dist.n());
    } else {
      a = bx.h_lo(c - nT);
      b = bx.h_hi(c - nT);
    }
    lo(k) = a;
    w(k) = b - a;
  }

  // normalized rows; resolve rows that lost all their support
  std::vector<VectorXd> rows;
  std::vector<double> rhs;
  std::vector<bool> roweq;
  for (Index i = 0; i < cell.rows(); ++i) {
    VectorXd a(r);
    for (Index k = 0; k < r; ++k) a(k) = cell.A(i, k) * w(k);
    double b = cell.b(i) - cell.A.row(i).dot(lo);
    double scale = 1.0 + cell.A.row(i).lpNorm<Eigen::Infinity>() *
                             (1.0 + lo.lpNorm<Eigen::Infinity>() +
                              w.lpNorm<Eigen::Infinity>());
    bool eq = cell.row_is_eq(i);
    if (a.lpNorm<Eigen::Infinity>() <= tol * scale) {
      bool holds = eq ? std::abs(b) <= tol * scale : b >= -tol * scale;
      if (!holds) return undefined_stats(dist);
      continue;  // vacuous
    }
    if (eq) return undefined_stats(dist);  // hyperplane slice is null
    rows.push_back(std::move(a));
    rhs.push_back(b);
    roweq.push_back(false);
  }

  // independent coordinates split the volume integral into factors
  DSU dsu(static_cast<std::size_t>(r));
  std::vector<std::vector<Index>> support(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double rscale = rows[i].lpNorm<Eigen::Infinity>();
    for (Index k = 0; k < r; ++k)
      if (std::abs(rows[i](k)) > tol * rscale) support[i].push_back(k);
    for (std::size_t j = 1; j < support[i].size(); ++j)
      dsu.unite(static_cast<int>(support[i][0]), static_cast<int>(support[i][j]));
  }

  std::vector<std::vector<Index>> comp_coords;
  std::vector<int> comp_of(static_cast<std::size_t>(r), -1);
  for (Index k = 0; k < r; ++k) {
    int root = dsu.find(static_cast<int>(k));
    int found = -1;
    for (std::size_t c = 0; c < comp_coords.size(); ++c)
      if (dsu.find(static_cast<int>(comp_coords[c][0])) == root) {
        found = static_cast<int>(c);
        break;
      }
    if (found < 0) {
      comp_coords.push_back({});
      found = static_cast<int>(comp_coords.size()) - 1;
    }
    comp_coords[static_cast<std::size_t>(found)].push_back(k);
    comp_of[static_cast<std::size_t>(k)] = found;
  }

  double prob = 1.0;
  VectorXd u_mean = VectorXd::Constant(r, 0.5);
  for (std::size_t c = 0; c < comp_coords.size(); ++c) {
    const auto& cs = comp_coords[c];
    bool touched = false;
    for (std::size_t i = 0; i < rows.size() && !touched; ++i)
      if (!support[i].empty() && comp_of[static_cast<std::size_t>(support[i][0])] == static_cast<int>(c))
        touched = true;
    if (!touched) continue;  // free coordinates keep measure 1, mean 0.5

    const Index k = static_cast<Index>(cs.size());
    HRep sub;
    sub.ambient_dim = k;
    std::vector<VectorXd> sa;
    std::vector<double> sb;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (support[i].empty() ||
          comp_of[static_cast<std::size_t>(support[i][0])] != static_cast<int>(c))
        continue;
      VectorXd a(k);
      for (Index t = 0; t < k; ++t) a(t) = rows[i](cs[static_cast<std::size_t>(t)]);
      sa.push_back(std::move(a));
      sb.push_back(rhs[i]);
    }
    sub.A.resize(static_cast<Index>(sa.size()) + 2 * k, k);
    sub.b.resize(static_cast<Index>(sa.size()) + 2 * k);
    for (std::size_t i = 0; i < sa.size(); ++i) {
      sub.A.row(static_cast<Index>(i)) = sa[i];
      sub.b(static_cast<Index>(i)) = sb[i];
    }
    for (Index t = 0; t < k; ++t) {
      sub.A.row(static_cast<Index>(sa.size()) + 2 * t) = VectorXd::Unit(k, t);
      sub.b(static_cast<Index>(sa.size()) + 2 * t) = 1.0;
      sub.A.row(static_cast<Index>(sa.size()) + 2 * t + 1) = -VectorXd::Unit(k, t);
      sub.b(static_cast<Index>(sa.size()) + 2 * t + 1) = 0.0;
    }

    VRep v = h_to_v(sub, tol);
    if (v.empty()) return undefined_stats(dist);
    VolumeCentroid vc = volume_and_centroid(v, tol);
    if (vc.volume <= 0.0) return undefined_stats(dist);
    prob *= vc.volume;
    for (Index t = 0; t < k; ++t) u_mean(cs[static_cast<std::size_t>(t)]) = vc.centroid(t);
  }

  if (prob <= 0.0) return undefined_stats(dist);
  VectorXd full = dist.constants();
  for (Index k = 0; k < r; ++k)
    full(coords[static_cast<std::size_t>(k)]) = lo(k) + w(k) * u_mean(k);
  return stats_from_full_mean(dist, prob, full);
}

}  // namespace

CellStats cell_stats(const XiDistribution& dist, const HRep& cell,
                     const std::vector<bool>& strict, double tol) {
  require(cell.ambient_dim == dist.num_random(), ErrorCode::dimension_mismatch,
          "cell_stats: cell must live over the random coordinates (" +
              std::to_string(dist.num_random()) + "), got ambient " +
              std::to_string(cell.ambient_dim));
  if (dist.is_discrete()) return discrete_cell_stats(dist, cell, strict, tol);
  return box_cell_stats(dist, cell, tol);
}

void total_mean(const XiDistribution& dist, MatrixXd& T, VectorXd& h) {
  if (dist.is_discrete()) {
    VectorXd acc = VectorXd::Zero(dist.flat_dim());
    for (std::size_t a = 0; a < dist.num_atoms(); ++a)
      acc += dist.atoms().atoms[a].weight * dist.atom_full(a);
    XiDistribution::unflatten(dist.l(), dist.n(), acc, T, h);
    return;
  }
  const UniformBox& bx = dist.box();
  T = 0.5 * (bx.T_lo + bx.T_hi);
  h = 0.5 * (bx.h_lo + bx.h_hi);
}

}  // namespace gapm
