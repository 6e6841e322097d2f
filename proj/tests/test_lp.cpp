#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "geometry.hpp"
#include "helpers.hpp"
#include "lp.hpp"

using namespace gapm;
using namespace gapm::testing;

namespace {

LinearProgram make_lp(Index n) {
  LinearProgram lp;
  lp.c = VectorXd::Zero(n);
  lp.A_eq.resize(0, n);
  lp.b_eq.resize(0);
  lp.A_le.resize(0, n);
  lp.b_le.resize(0);
  return lp;
}

// brute force: enumerate vertices of {x >= 0 : A_eq x = b_eq, A_le x <= b_le}
double vertex_min(const LinearProgram& lp) {
  Index n = lp.nvars();
  HRep h;
  h.ambient_dim = n;
  Index rows = lp.A_le.rows() + lp.A_eq.rows() + n;
  h.A.resize(rows, n);
  h.b.resize(rows);
  Index r = 0;
  for (Index i = 0; i < lp.A_le.rows(); ++i, ++r) {
    h.A.row(r) = lp.A_le.row(i);
    h.b(r) = lp.b_le(i);
  }
  for (Index i = 0; i < lp.A_eq.rows(); ++i, ++r) {
    h.A.row(r) = lp.A_eq.row(i);
    h.b(r) = lp.b_eq(i);
    h.eqs.push_back(r);
  }
  for (Index i = 0; i < n; ++i, ++r) {
    h.A.row(r) = -VectorXd::Unit(n, i);
    h.b(r) = 0.0;
  }
  VRep v = h_to_v(h);
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double best = std::numeric_limits<double>::infinity();
  for (const VectorXd& p : v.vertices) best = std::min(best, lp.c.dot(p));
  return best;
}

void check_kkt(const LinearProgram& lp, const LPResult& r, double tol = 1e-6) {
  // primal feasibility
  if (lp.A_eq.rows() > 0)
    CHECK((lp.A_eq * r.x - lp.b_eq).lpNorm<Eigen::Infinity>() <=
          tol * (1 + lp.b_eq.lpNorm<Eigen::Infinity>()));
  for (Index i = 0; i < lp.A_le.rows(); ++i)
    CHECK(lp.A_le.row(i).dot(r.x) <= lp.b_le(i) + tol * (1 + std::abs(lp.b_le(i))));
  CHECK(r.x.minCoeff() >= -tol);
  // dual feasibility and strong duality
  VectorXd red = lp.c;
  if (lp.A_eq.rows() > 0) red -= lp.A_eq.transpose() * r.y_eq;
  if (lp.A_le.rows() > 0) red -= lp.A_le.transpose() * r.y_le;
  CHECK(red.minCoeff() >= -tol * (1 + lp.c.lpNorm<Eigen::Infinity>()));
  if (lp.A_le.rows() > 0) CHECK(r.y_le.maxCoeff() <= tol);
  double dual_val = 0;
  if (lp.A_eq.rows() > 0) dual_val += r.y_eq.dot(lp.b_eq);
  if (lp.A_le.rows() > 0) dual_val += r.y_le.dot(lp.b_le);
  CHECK(std::abs(dual_val - r.value) <= tol * (1 + std::abs(r.value)));
}

}  // namespace

TEST_CASE("small inequality LP") {
  auto lp = make_lp(2);
  lp.c = -VectorXd::Ones(2);
  lp.A_le.resize(2, 2);
  lp.A_le << 1, 2, 1, 0;
  lp.b_le.resize(2);
  lp.b_le << 4, 3;
  LPResult r = solve_lp(lp);
  REQUIRE(r.status == LPResult::Status::optimal);
  CHECK(r.value == doctest::Approx(-3.5).epsilon(1e-9));
  CHECK(r.x(0) == doctest::Approx(3.0));
  CHECK(r.x(1) == doctest::Approx(0.5));
  check_kkt(lp, r);
}

TEST_CASE("equality LP returns the support-function dual") {
  // min 5 y1 + 10 y2  s.t. -y + s = psi, all vars >= 0
  // dual: max lambda.psi over [-5,0] x [-10,0]
  auto lp = make_lp(4);
  lp.c.resize(4);
  lp.c << 5, 10, 0, 0;
  lp.A_eq.resize(2, 4);
  lp.A_eq << -1, 0, 1, 0, 0, -1, 0, 1;

  SUBCASE("psi positive: zero recourse") {
    lp.b_eq.resize(2);
    lp.b_eq << 6000, 4000;
    LPResult r = solve_lp(lp);
    REQUIRE(r.status == LPResult::Status::optimal);
    CHECK(r.value == doctest::Approx(0.0));
    CHECK(r.y_eq.lpNorm<Eigen::Infinity>() <= 1e-9);
    check_kkt(lp, r);
  }
  SUBCASE("psi negative: both penalties active") {
    lp.b_eq.resize(2);
    lp.b_eq << -10, -20;
    LPResult r = solve_lp(lp);
    REQUIRE(r.status == LPResult::Status::optimal);
    CHECK(r.value == doctest::Approx(5 * 10 + 10 * 20));
    CHECK(r.y_eq(0) == doctest::Approx(-5.0));
    CHECK(r.y_eq(1) == doctest::Approx(-10.0));
    check_kkt(lp, r);
  }
}

TEST_CASE("infeasible LP yields a Farkas certificate") {
  auto lp = make_lp(2);
  lp.c = VectorXd::Ones(2);
  lp.A_eq.resize(1, 2);
  lp.A_eq << 1, 1;
  lp.b_eq.resize(1);
  lp.b_eq << -1.0;
  LPResult r = solve_lp(lp);
  REQUIRE(r.status == LPResult::Status::infeasible);
  VectorXd comb = lp.A_eq.transpose() * r.farkas_eq;
  CHECK(comb.maxCoeff() <= 1e-8);
  CHECK(r.farkas_eq.dot(lp.b_eq) > 1e-9);
}

TEST_CASE("infeasible inequality system certificate") {
  // x1 <= -2 with x1 >= 0
  auto lp = make_lp(1);
  lp.c = VectorXd::Zero(1);
  lp.A_le.resize(1, 1);
  lp.A_le << 1;
  lp.b_le.resize(1);
  lp.b_le << -2.0;
  LPResult r = solve_lp(lp);
  REQUIRE(r.status == LPResult::Status::infeasible);
  CHECK(r.farkas_le(0) <= 1e-12);
  VectorXd comb = lp.A_le.transpose() * r.farkas_le;
  CHECK(comb.maxCoeff() <= 1e-8);
  CHECK(r.farkas_le.dot(lp.b_le) > 1e-9);
}

TEST_CASE("unbounded LP yields an improving ray") {
  auto lp = make_lp(2);
  lp.c << -1, 0;
  lp.A_le.resize(1, 2);
  lp.A_le << 1, -1;
  lp.b_le.resize(1);
  lp.b_le << 1;
  LPResult r = solve_lp(lp);
  REQUIRE(r.status == LPResult::Status::unbounded);
  CHECK(lp.c.dot(r.ray) < -1e-9);
  CHECK((lp.A_le * r.ray).maxCoeff() <= 1e-9);
  CHECK(r.ray.minCoeff() >= -1e-9);
}

TEST_CASE("free problem with no constraints") {
  auto lp = make_lp(3);
  lp.c << 1, 0, 2;
  LPResult r = solve_lp(lp);
  REQUIRE(r.status == LPResult::Status::optimal);
  CHECK(r.value == 0.0);

  lp.c(1) = -1;
  r = solve_lp(lp);
  CHECK(r.status == LPResult::Status::unbounded);
}

TEST_CASE("degenerate optimum converges") {
  // three constraints meet at the optimal vertex (2,2)
  auto lp = make_lp(2);
  lp.c << -1, -1;
  lp.A_le.resize(3, 2);
  lp.A_le << 1, 0, 0, 1, 1, 1;
  lp.b_le.resize(3);
  lp.b_le << 2, 2, 4;
  LPResult r = solve_lp(lp);
  REQUIRE(r.status == LPResult::Status::optimal);
  CHECK(r.value == doctest::Approx(-4.0));
  check_kkt(lp, r);
}

TEST_CASE("redundant equality rows are tolerated") {
  auto lp = make_lp(2);
  lp.c << 1, 2;
  lp.A_eq.resize(2, 2);
  lp.A_eq << 1, 1, 2, 2;  // second row is twice the first
  lp.b_eq.resize(2);
  lp.b_eq << 3, 6;
  LPResult r = solve_lp(lp);
  REQUIRE(r.status == LPResult::Status::optimal);
  CHECK(r.value == doctest::Approx(3.0));
  CHECK(r.x(0) == doctest::Approx(3.0));
}

TEST_CASE("random LPs match vertex enumeration") {
  auto g = rng(555);
  std::uniform_real_distribution<double> uc(-1.0, 1.0), ub(0.5, 2.0);
  int solved = 0;
  for (int rep = 0; rep < 60; ++rep) {
    Index n = 2 + static_cast<Index>(rep % 4);
    auto lp = make_lp(n);
    for (Index j = 0; j < n; ++j) lp.c(j) = uc(g);
    Index mle = n + 1 + (rep % 3);
    lp.A_le.resize(mle, n);
    lp.b_le.resize(mle);
    for (Index i = 0; i + 1 < mle; ++i) {
      for (Index j = 0; j < n; ++j) lp.A_le(i, j) = uc(g);
      lp.b_le(i) = ub(g);
    }
    lp.A_le.row(mle - 1).setOnes();  // boundedness
    lp.b_le(mle - 1) = 3.0;

    LPResult r = solve_lp(lp);
    REQUIRE(r.status == LPResult::Status::optimal);
    double ref = vertex_min(lp);
    CHECK(std::abs(r.value - ref) <= 1e-7 * (1 + std::abs(ref)));
    check_kkt(lp, r);
    ++solved;
  }
  CHECK(solved == 60);
}

TEST_CASE("random equality-constrained LPs match vertex enumeration") {
  auto g = rng(777);
  std::uniform_real_distribution<double> uc(-1.0, 1.0), ux(0.1, 1.0);
  for (int rep = 0; rep < 40; ++rep) {
    Index n = 3 + static_cast<Index>(rep % 3);
    auto lp = make_lp(n);
    for (Index j = 0; j < n; ++j) lp.c(j) = uc(g);
    // one random equality through a nonnegative point keeps it feasible
    lp.A_eq.resize(1, n);
    VectorXd x0(n);
    for (Index j = 0; j < n; ++j) {
      lp.A_eq(0, j) = std::abs(uc(g)) + 0.1;
      x0(j) = ux(g);
    }
    lp.b_eq.resize(1);
    lp.b_eq(0) = lp.A_eq.row(0).dot(x0);

    LPResult r = solve_lp(lp);
    REQUIRE(r.status == LPResult::Status::optimal);  // bounded: positive row
    double ref = vertex_min(lp);
    CHECK(std::abs(r.value - ref) <= 1e-7 * (1 + std::abs(ref)));
    check_kkt(lp, r);
  }
}

TEST_CASE("random infeasible systems certify correctly") {
  auto g = rng(888);
  std::uniform_real_distribution<double> uc(0.2, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    Index n = 2 + static_cast<Index>(rep % 3);
    auto lp = make_lp(n);
    // sum x_i <= 1 and sum x_i >= 2 cannot both hold
    lp.A_le.resize(2, n);
    for (Index j = 0; j < n; ++j) {
      lp.A_le(0, j) = uc(g);
      lp.A_le(1, j) = -lp.A_le(0, j);
    }
    lp.b_le.resize(2);
    lp.b_le << 1.0, -2.0;
    LPResult r = solve_lp(lp);
    REQUIRE(r.status == LPResult::Status::infeasible);
    VectorXd comb = lp.A_le.transpose() * r.farkas_le;
    CHECK(comb.maxCoeff() <= 1e-8);
    CHECK(r.farkas_le.maxCoeff() <= 1e-12);
    CHECK(r.farkas_le.dot(lp.b_le) > 1e-9);
  }
}
