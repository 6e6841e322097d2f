#include "lp.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace gapm {
namespace {

constexpr double kPivTol = 1e-9;
constexpr Index kMaxPivots = 200000;

// tableau simplex over min c.z, A z = b (b >= 0 not required here: caller
// supplies a feasible starting basis). tab = [B^-1 A | B^-1 b], zrow holds
// reduced costs and, in its last entry, -objective.
struct Core {
  MatrixXd tab;          // m x (n+1)
  Eigen::RowVectorXd zrow;  // n+1
  std::vector<Index> basis;  // size m, column index per row
  Index n;

  double rhs(Index i) const { return tab(i, n); }
  double obj() const { return -zrow(n); }
};

enum class CoreStatus { optimal, unbounded };

// columns with allow[j] == false can never enter
CoreStatus run_simplex(Core& core, const std::vector<bool>& allow,
                       Index& pivots, Index& out_col) {
  const Index m = core.tab.rows(), n = core.n;
  bool bland = false;
  Index stall = 0;
  double last_obj = core.obj();

  for (;; ++pivots) {
    require(pivots < kMaxPivots, ErrorCode::internal, "simplex: pivot cap hit");

    Index enter = -1;
    double best = -kPivTol;
    for (Index j = 0; j < n; ++j) {
      if (!allow[static_cast<std::size_t>(j)]) continue;
      double rc = core.zrow(j);
      if (bland) {
        if (rc < -kPivTol) { enter = j; break; }
      } else if (rc < best) {
        best = rc;
        enter = j;
      }
    }
    if (enter < 0) return CoreStatus::optimal;

    Index leave = -1;
    double best_ratio = 0;
    for (Index i = 0; i < m; ++i) {
      double a = core.tab(i, enter);
      if (a <= kPivTol) continue;
      double ratio = std::max(core.rhs(i), 0.0) / a;
      if (leave < 0 || ratio < best_ratio - 1e-12 ||
          (ratio <= best_ratio + 1e-12 && core.basis[static_cast<std::size_t>(i)] <
                                              core.basis[static_cast<std::size_t>(leave)])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0) {
      out_col = enter;
      return CoreStatus::unbounded;
    }

    // pivot on (leave, enter)
    double piv = core.tab(leave, enter);
    core.tab.row(leave) /= piv;
    for (Index i = 0; i < m; ++i) {
      if (i == leave) continue;
      double f = core.tab(i, enter);
      if (f != 0.0) core.tab.row(i) -= f * core.tab.row(leave);
    }
    double fz = core.zrow(enter);
    if (fz != 0.0) core.zrow -= fz * core.tab.row(leave);
    core.basis[static_cast<std::size_t>(leave)] = enter;

    double o = core.obj();
    if (o < last_obj - 1e-12) {
      last_obj = o;
      stall = 0;
      bland = false;
    } else if (++stall > 2 * (m + n)) {
      bland = true;  // anti-cycling fallback
    }
  }
}

// rebuild tab and zrow from scratch for the given basis (fresh factorization)
void refactor(Core& core, const MatrixXd& A, const VectorXd& b,
              const VectorXd& c) {
  const Index m = A.rows();
  MatrixXd B(m, m);
  VectorXd cb(m);
  for (Index i = 0; i < m; ++i) {
    B.col(i) = A.col(core.basis[static_cast<std::size_t>(i)]);
    cb(i) = c(core.basis[static_cast<std::size_t>(i)]);
  }
  Eigen::PartialPivLU<MatrixXd> lu(B);
  MatrixXd rhs(m, A.cols() + 1);
  rhs << A, b;
  core.tab = lu.solve(rhs);
  core.n = A.cols();
  core.zrow.resize(A.cols() + 1);
  VectorXd yT = B.transpose().partialPivLu().solve(cb);
  core.zrow.head(A.cols()) = c.transpose() - yT.transpose() * A;
  core.zrow(A.cols()) = -yT.dot(b);
}

}  // namespace

void LinearProgram::check_consistent() const {
  const Index n = c.size();
  require(A_eq.size() == 0 || A_eq.cols() == n, ErrorCode::dimension_mismatch,
          "LP: A_eq column count");
  require(A_le.size() == 0 || A_le.cols() == n, ErrorCode::dimension_mismatch,
          "LP: A_le column count");
  require(A_eq.rows() == b_eq.size(), ErrorCode::dimension_mismatch,
          "LP: b_eq size");
  require(A_le.rows() == b_le.size(), ErrorCode::dimension_mismatch,
          "LP: b_le size");
}

LPResult solve_lp(const LinearProgram& lp, double tol) {
  lp.check_consistent();
  const Index n = lp.nvars();
  const Index m_eq = lp.A_eq.rows(), m_le = lp.A_le.rows();
  const Index m = m_eq + m_le;
  const Index N = n + m_le;  // + slacks

  // assemble rows, flip signs so b >= 0
  MatrixXd A = MatrixXd::Zero(m, N);
  VectorXd b(m);
  if (m_eq > 0) {
    A.topLeftCorner(m_eq, n) = lp.A_eq;
    b.head(m_eq) = lp.b_eq;
  }
  if (m_le > 0) {
    A.bottomLeftCorner(m_le, n) = lp.A_le;
    A.bottomRightCorner(m_le, m_le) = MatrixXd::Identity(m_le, m_le);
    b.tail(m_le) = lp.b_le;
  }
  VectorXd sign = VectorXd::Ones(m);
  for (Index i = 0; i < m; ++i)
    if (b(i) < 0) {
      sign(i) = -1;
      A.row(i) = -A.row(i);
      b(i) = -b(i);
    }

  LPResult res;
  const double bscale = 1.0 + (m > 0 ? b.lpNorm<Eigen::Infinity>() : 0.0);

  // ---- phase 1
  std::vector<Index> kept(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) kept[static_cast<std::size_t>(i)] = i;

  Core core;
  Index pivots = 0;
  if (m > 0) {
    MatrixXd A1(m, N + m);
    A1 << A, MatrixXd::Identity(m, m);
    VectorXd c1 = VectorXd::Zero(N + m);
    c1.tail(m).setOnes();

    core.n = N + m;
    core.tab.resize(m, N + m + 1);
    core.tab << A1, b;
    core.basis.resize(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) core.basis[static_cast<std::size_t>(i)] = N + i;
    core.zrow.resize(N + m + 1);
    core.zrow.setZero();
    for (Index i = 0; i < m; ++i) core.zrow -= core.tab.row(i);
    for (Index j = N; j < N + m; ++j) core.zrow(j) = 0.0;

    std::vector<bool> allow(static_cast<std::size_t>(N + m), true);
    Index dummy = -1;
    run_simplex(core, allow, pivots, dummy);

    if (core.obj() > tol * bscale) {
      // infeasible; phase-1 duals certify it
      VectorXd cb = VectorXd::Zero(m);
      MatrixXd B(m, m);
      for (Index i = 0; i < m; ++i) {
        Index j = core.basis[static_cast<std::size_t>(i)];
        B.col(i) = A1.col(j);
        cb(i) = c1(j);
      }
      VectorXd y = B.transpose().partialPivLu().solve(cb);
      res.status = LPResult::Status::infeasible;
      res.farkas_eq.resize(m_eq);
      res.farkas_le.resize(m_le);
      for (Index i = 0; i < m_eq; ++i) res.farkas_eq(i) = sign(i) * y(i);
      for (Index i = 0; i < m_le; ++i)
        res.farkas_le(i) = sign(m_eq + i) * y(m_eq + i);
      return res;
    }

    // drive artificials out of the basis; an all-zero row is redundant
    std::vector<bool> drop_row(static_cast<std::size_t>(m), false);
    for (Index i = 0; i < m; ++i) {
      if (core.basis[static_cast<std::size_t>(i)] < N) continue;
      Index piv_col = -1;
      double best = 1e-7;
      for (Index j = 0; j < N; ++j)
        if (std::abs(core.tab(i, j)) > best) {
          best = std::abs(core.tab(i, j));
          piv_col = j;
        }
      if (piv_col < 0) {
        drop_row[static_cast<std::size_t>(i)] = true;
        continue;
      }
      double piv = core.tab(i, piv_col);
      core.tab.row(i) /= piv;
      for (Index r = 0; r < m; ++r) {
        if (r == i) continue;
        double f = core.tab(r, piv_col);
        if (f != 0.0) core.tab.row(r) -= f * core.tab.row(i);
      }
      core.basis[static_cast<std::size_t>(i)] = piv_col;
    }

    // rebuild structures without dropped rows and artificial columns
    std::vector<Index> keep_rows;
    for (Index i = 0; i < m; ++i)
      if (!drop_row[static_cast<std::size_t>(i)]) keep_rows.push_back(i);
    if (keep_rows.size() != static_cast<std::size_t>(m)) {
      MatrixXd A2(static_cast<Index>(keep_rows.size()), N);
      VectorXd b2(static_cast<Index>(keep_rows.size()));
      std::vector<Index> basis2, kept2;
      for (std::size_t i = 0; i < keep_rows.size(); ++i) {
        A2.row(static_cast<Index>(i)) = A.row(keep_rows[i]);
        b2(static_cast<Index>(i)) = b(keep_rows[i]);
        basis2.push_back(core.basis[static_cast<std::size_t>(keep_rows[i])]);
        kept2.push_back(kept[static_cast<std::size_t>(keep_rows[i])]);
      }
      A = std::move(A2);
      b = std::move(b2);
      core.basis = std::move(basis2);
      kept = std::move(kept2);
    }
  }

  const Index m2 = A.rows();
  VectorXd c2 = VectorXd::Zero(N);
  c2.head(n) = lp.c;

  if (m2 == 0) {
    // no constraints at all: optimum 0 unless some cost is negative
    for (Index j = 0; j < n; ++j)
      if (lp.c(j) < -kPivTol) {
        res.status = LPResult::Status::unbounded;
        res.ray = VectorXd::Unit(n, j);
        res.x = VectorXd::Zero(n);
        return res;
      }
    res.status = LPResult::Status::optimal;
    res.x = VectorXd::Zero(n);
    res.y_eq = VectorXd::Zero(m_eq);
    res.y_le = VectorXd::Zero(m_le);
    res.value = 0.0;
    return res;
  }

  // ---- phase 2 from a fresh factorization of the feasible basis
  refactor(core, A, b, c2);
  std::vector<bool> allow(static_cast<std::size_t>(N), true);
  Index ray_col = -1;
  CoreStatus st = run_simplex(core, allow, pivots, ray_col);

  if (st == CoreStatus::unbounded) {
    res.status = LPResult::Status::unbounded;
    VectorXd dir = VectorXd::Zero(N);
    dir(ray_col) = 1.0;
    VectorXd at = VectorXd::Zero(N);
    for (Index i = 0; i < m2; ++i) {
      dir(core.basis[static_cast<std::size_t>(i)]) = -core.tab(i, ray_col);
      at(core.basis[static_cast<std::size_t>(i)]) = std::max(core.rhs(i), 0.0);
    }
    res.ray = dir.head(n);
    res.x = at.head(n);  // the vertex the ray leaves from
    return res;
  }

  // final refactorization for reported values
  {
    MatrixXd B(m2, m2);
    VectorXd cb(m2);
    for (Index i = 0; i < m2; ++i) {
      B.col(i) = A.col(core.basis[static_cast<std::size_t>(i)]);
      cb(i) = c2(core.basis[static_cast<std::size_t>(i)]);
    }
    Eigen::PartialPivLU<MatrixXd> lu(B);
    VectorXd xb = lu.solve(b);
    VectorXd y = B.transpose().partialPivLu().solve(cb);

    VectorXd z = VectorXd::Zero(N);
    for (Index i = 0; i < m2; ++i)
      z(core.basis[static_cast<std::size_t>(i)]) = std::max(xb(i), 0.0);
    res.status = LPResult::Status::optimal;
    res.x = z.head(n);
    res.value = lp.c.dot(res.x);
    res.y_eq = VectorXd::Zero(m_eq);
    res.y_le = VectorXd::Zero(m_le);
    for (Index i = 0; i < m2; ++i) {
      Index orig = kept[static_cast<std::size_t>(i)];
      double yo = sign(orig) * y(i);
      if (orig < m_eq)
        res.y_eq(orig) = yo;
      else
        res.y_le(orig - m_eq) = yo;
    }
  }
  return res;
}

}  // namespace gapm
