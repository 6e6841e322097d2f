#include "builtins.hpp"

#include <random>
#include <sstream>

namespace gapm {
namespace {

// platform-independent uniforms: 53 mantissa bits straight from the engine
double u01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}
double uni(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * u01(g);
}

}  // namespace

// profit maximization with two products and two random resource rows:
//   min -12 x1 - 40 x2 + E[5 y1 + 10 y2],  T x - y <= h
// slacks s make the coupling an equality: -y_i + s_i = h_i - (Tx)_i
TwoStageProblem builtin_prodmix() {
  TwoStageProblem p;
  p.name = "prodmix";
  p.c.resize(2);
  p.c << -12, -40;
  p.A.resize(0, 2);
  p.b.resize(0);

  RecourseScenario s;
  s.W.resize(2, 4);
  s.W << -1, 0, 1, 0, 0, -1, 0, 1;
  s.q.resize(4);
  s.q << 5, 10, 0, 0;
  p.recourse = {s};

  UniformBox bx;
  bx.T_lo.resize(2, 2);
  bx.T_hi.resize(2, 2);
  bx.T_lo << 3.5, 9.0, 0.8, 36.0;
  bx.T_hi << 4.5, 11.0, 1.2, 44.0;
  bx.h_lo.resize(2);
  bx.h_hi.resize(2);
  bx.h_lo << 5970, 3979;
  bx.h_hi << 6030, 4021;
  p.dist = XiDistribution(2, 2, std::move(bx));
  return p;
}

// tail-loss recourse (x r^t - y1 + y2 = -tau style): Q = (-tau - r.x)^+,
// duals in [0, 1]; portfolio x on the unit simplex, one return atom sits
// exactly on the kink of the canonical point x = (1/2, 1/2)
TwoStageProblem builtin_cvar() {
  TwoStageProblem p;
  p.name = "cvar";
  p.c = VectorXd::Zero(2);
  p.A.resize(1, 2);
  p.A << 1, 1;
  p.b = VectorXd::Ones(1);

  RecourseScenario s;
  s.W.resize(1, 2);
  s.W << 1, -1;
  s.q.resize(2);
  s.q << 1, 0;
  p.recourse = {s};

  const double tau = 1.5;
  const double returns[4][2] = {{-1, -2}, {-3, -1}, {2, -1}, {0, -1}};
  DiscreteAtoms da;
  for (const auto& r : returns) {
    DiscreteAtoms::Atom a;
    a.T.resize(1, 2);
    a.T << r[0], r[1];
    a.h = VectorXd::Constant(1, -tau);
    a.weight = 0.25;
    da.atoms.push_back(a);
  }
  p.dist = XiDistribution(1, 2, std::move(da));
  return p;
}

// three technologies, three demand cells, one random demand; budget row
// with a slack column. Illustrative numbers, not survey data.
TwoStageProblem builtin_lands_mini() {
  TwoStageProblem p;
  p.name = "lands-mini";
  p.c.resize(4);
  p.c << 10, 7, 16, 0;
  p.A.resize(1, 4);
  p.A << 1, 1, 1, 1;
  p.b = VectorXd::Constant(1, 12.0);

  // vars: y_ij (production of tech i for cell j), u_i (unused capacity),
  // z_j (unmet demand at 40 a unit)
  const double f[3][3] = {{4.0, 4.5, 5.5}, {5.0, 5.2, 6.0}, {3.0, 7.0, 9.0}};
  RecourseScenario s;
  s.W = MatrixXd::Zero(6, 15);
  s.q.resize(15);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      s.W(i, 3 * i + j) = 1;      // capacity row i
      s.W(3 + j, 3 * i + j) = 1;  // demand row j
      s.q(3 * i + j) = f[i][j];
    }
  for (int i = 0; i < 3; ++i) {
    s.W(i, 9 + i) = 1;  // u_i
    s.q(9 + i) = 0;
  }
  for (int j = 0; j < 3; ++j) {
    s.W(3 + j, 12 + j) = 1;  // z_j
    s.q(12 + j) = 40;
  }
  p.recourse = {s};

  // capacity rows read sum_j y_ij + u_i = x_i, demand rows = d_j
  const double d1[3] = {3, 5, 7};
  const double w1[3] = {0.3, 0.4, 0.3};
  DiscreteAtoms da;
  for (int a = 0; a < 3; ++a) {
    DiscreteAtoms::Atom at;
    at.T = MatrixXd::Zero(6, 4);
    for (int i = 0; i < 3; ++i) at.T(i, i) = -1;
    at.h.resize(6);
    at.h << 0, 0, 0, d1[a], 3, 2;
    at.weight = w1[a];
    da.atoms.push_back(at);
  }
  p.dist = XiDistribution(6, 4, std::move(da));
  return p;
}

TwoStageProblem builtin_random_discrete(std::uint64_t seed, Index n, Index m,
                                        Index l, std::size_t atoms) {
  require(n >= 1 && m >= 1 && l >= 1 && n <= 10 && m <= 10 && l <= 10,
          ErrorCode::invalid_argument,
          "random-discrete: sizes must lie in 1..10");
  require(atoms >= 1 && atoms <= 64, ErrorCode::invalid_argument,
          "random-discrete: atom count must lie in 1..64");
  std::mt19937_64 g(seed);

  TwoStageProblem p;
  std::ostringstream nm;
  nm << "random-discrete(" << seed << "," << n << "," << m << "," << l << ","
     << atoms << ")";
  p.name = nm.str();

  p.c.resize(n);
  for (Index j = 0; j < n; ++j) p.c(j) = uni(g, -1, 1);
  p.A = MatrixXd::Ones(1, n);
  p.b = VectorXd::Constant(1, uni(g, 1, 3));

  // W = [W0 | I | -I]: slack pair keeps every psi reachable and the dual
  // polytope bounded, so the recourse is complete
  RecourseScenario s;
  s.W = MatrixXd::Zero(l, m + 2 * l);
  s.q.resize(m + 2 * l);
  for (Index i = 0; i < l; ++i)
    for (Index j = 0; j < m; ++j) s.W(i, j) = uni(g, -1, 1);
  for (Index j = 0; j < m; ++j) s.q(j) = uni(g, 0.5, 1.5);
  for (Index i = 0; i < l; ++i) {
    s.W(i, m + i) = 1;
    s.q(m + i) = uni(g, 1, 2);
    s.W(i, m + l + i) = -1;
    s.q(m + l + i) = uni(g, 1, 2);
  }
  p.recourse = {s};

  DiscreteAtoms da;
  double wsum = 0;
  for (std::size_t a = 0; a < atoms; ++a) {
    DiscreteAtoms::Atom at;
    at.T.resize(l, n);
    for (Index i = 0; i < l; ++i)
      for (Index j = 0; j < n; ++j) at.T(i, j) = uni(g, -1, 1);
    at.h.resize(l);
    for (Index i = 0; i < l; ++i) at.h(i) = uni(g, -1, 1);
    at.weight = uni(g, 0.1, 1);
    wsum += at.weight;
    da.atoms.push_back(std::move(at));
  }
  for (auto& at : da.atoms) at.weight /= wsum;
  p.dist = XiDistribution(l, n, std::move(da));
  return p;
}

bool is_builtin_name(const std::string& spec) {
  if (spec == "prodmix" || spec == "cvar" || spec == "lands-mini") return true;
  return spec.rfind("random-discrete(", 0) == 0 && spec.back() == ')';
}

TwoStageProblem make_builtin(const std::string& spec) {
  if (spec == "prodmix") return builtin_prodmix();
  if (spec == "cvar") return builtin_cvar();
  if (spec == "lands-mini") return builtin_lands_mini();
  if (spec.rfind("random-discrete(", 0) == 0 && spec.back() == ')') {
    std::string args = spec.substr(16, spec.size() - 17);
    std::vector<long long> v;
    std::istringstream is(args);
    std::string tok;
    while (std::getline(is, tok, ',')) {
      try {
        std::size_t used = 0;
        long long val = std::stoll(tok, &used);
        require(used == tok.size() && val >= 0, ErrorCode::invalid_argument,
                "random-discrete: bad argument '" + tok + "'");
        v.push_back(val);
      } catch (const Error&) {
        throw;
      } catch (...) {
        fail(ErrorCode::invalid_argument,
             "random-discrete: bad argument '" + tok + "'");
      }
    }
    require(v.size() == 4 || v.size() == 5, ErrorCode::invalid_argument,
            "random-discrete takes (seed,n,m,l) or (seed,n,m,l,atoms)");
    std::size_t atoms = v.size() == 5 ? static_cast<std::size_t>(v[4]) : 8;
    return builtin_random_discrete(static_cast<std::uint64_t>(v[0]),
                                   static_cast<Index>(v[1]),
                                   static_cast<Index>(v[2]),
                                   static_cast<Index>(v[3]), atoms);
  }
  fail(ErrorCode::invalid_argument, "unknown builtin '" + spec + "'");
}

}  // namespace gapm
