#include "solver.hpp"

#include <chrono>
#include <cmath>

namespace gapm {
namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// cut excluding x from the region with infeasible recourse at (T, h):
// a Farkas sigma with sigma.W <= 0 and sigma.(h - Tx) > 0 forces
// (-T^t sigma).x <= -sigma.h on every x with feasible recourse there
std::optional<CutPool::FeasibilityCut> cut_from_xi(const TwoStageProblem& p,
                                                   const VectorXd& x,
                                                   const MatrixXd& T,
                                                   const VectorXd& h) {
  for (std::size_t s = 0; s < p.num_scenarios(); ++s) {
    LPResult r = solve_recourse(p, s, x, T, h);
    if (r.status != LPResult::Status::infeasible) continue;
    CutPool::FeasibilityCut cut;
    cut.f = -T.transpose() * r.farkas_eq;
    cut.fbar = -r.farkas_eq.dot(h);
    if (cut.f.dot(x) > cut.fbar + 1e-9) return cut;
  }
  return std::nullopt;
}

// scan the support's extreme scenarios for one violated feasibility cut;
// exact for atoms, and for boxes via corner enumeration (psi is affine
// in xi, so feasibility on all corners covers the whole box)
std::optional<CutPool::FeasibilityCut> feasibility_cut_at(
    const TwoStageProblem& p, const VectorXd& x) {
  const XiDistribution& dist = p.dist;
  if (dist.is_discrete()) {
    for (std::size_t a = 0; a < dist.num_atoms(); ++a) {
      const auto& atom = dist.atoms().atoms[a];
      if (auto cut = cut_from_xi(p, x, atom.T, atom.h)) return cut;
    }
    return std::nullopt;
  }
  const Index r = dist.num_random();
  if (r > 12) return std::nullopt;  // corner scan would explode
  const Index nT = dist.l() * dist.n();
  const UniformBox& bx = dist.box();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << r); ++mask) {
    VectorXd full = dist.constants();
    for (Index k = 0; k < r; ++k) {
      Index c = dist.random_coords()[static_cast<std::size_t>(k)];
      bool hi = (mask >> k) & 1;
      if (c < nT)
        full(c) = hi ? bx.T_hi(c / dist.n(), c % dist.n())
                     : bx.T_lo(c / dist.n(), c % dist.n());
      else
        full(c) = hi ? bx.h_hi(c - nT) : bx.h_lo(c - nT);
    }
    MatrixXd T;
    VectorXd h;
    XiDistribution::unflatten(dist.l(), dist.n(), full, T, h);
    if (auto cut = cut_from_xi(p, x, T, h)) return cut;
  }
  return std::nullopt;
}

Partition make_adapted(const TwoStageProblem& p, const VectorXd& x,
                       const std::vector<Fan>& fans, const SolveOptions& opt,
                       int k) {
  if (opt.partition_hook) {
    Partition r = opt.partition_hook(p, x, fans);
    require(check_adapted(p, x, r, fans), ErrorCode::validation,
            "partition hook returned a partition that is not adapted at the "
            "current iterate");
    return r;
  }
  return adapted_partition(p, x, fans, "k" + std::to_string(k));
}

bool gap_closed(const SolveOptions& opt, double z_lower, double z_upper) {
  double gap = z_upper - z_lower;
  if (opt.relative_gap) return gap <= opt.eps * (1.0 + std::abs(z_upper));
  return gap <= opt.eps;
}

// both bounds are LP-certified; when rounding noise inverts them, trust
// the evaluated upper bound and keep the records monotone and ordered
void settle_bounds(double master, double upper_candidate, double& z_lower,
                   double& z_upper) {
  z_lower = std::max(z_lower, std::min(master, z_upper));
  z_upper = std::min(z_upper, std::max(upper_candidate, z_lower));
}

}  // namespace

SolverState g2apm(const TwoStageProblem& p, const SolveOptions& opt) {
  require(opt.eps > 0, ErrorCode::invalid_argument, "g2apm: eps must be > 0");
  require(opt.max_iter >= 1, ErrorCode::invalid_argument,
          "g2apm: max_iter must be >= 1");
  p.validate();

  std::vector<Fan> fans = dual_fans(p);
  SolverState st;
  st.partition = opt.initial_partition ? *opt.initial_partition
                                       : trivial_partition(p.dist);
  CutPool repair_cuts;

  for (int k = 1; k <= opt.max_iter; ++k) {
    IterationRecord rec;
    rec.k = k;

    auto t0 = std::chrono::steady_clock::now();
    MasterSolution m = solve_master(p, st.partition.stats(),
                                    opt.feasibility_cuts ? &repair_cuts : nullptr);
    rec.t_master = seconds_since(t0);

    // adapt at the iterate, repairing with cuts when allowed
    t0 = std::chrono::steady_clock::now();
    Partition rx;
    int repairs = 0;
    for (;;) {
      try {
        rx = make_adapted(p, m.x, fans, opt, k);
        break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::infeasible || !opt.feasibility_cuts) throw;
        auto cut = feasibility_cut_at(p, m.x);
        require(cut.has_value(), ErrorCode::infeasible,
                std::string("g2apm: recourse infeasible at the iterate and no "
                            "separating cut was found: ") +
                    e.what());
        require(++repairs <= opt.max_repairs, ErrorCode::infeasible,
                "g2apm: feasibility repair did not terminate");
        repair_cuts.feas.push_back(*cut);
        m = solve_master(p, st.partition.stats(), &repair_cuts);
      }
    }
    rec.t_partition = seconds_since(t0);
    st.x_last = m.x;
    rec.x = m.x;
    rec.master_value = m.value;

    t0 = std::chrono::steady_clock::now();
    st.partition = common_refinement(st.partition, rx, p.dist);
    rec.t_refine = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    VPResult vp = eval_VP(p, m.x, st.partition.stats());
    require(vp.feasible, ErrorCode::infeasible,
            "g2apm: recourse infeasible at a refined cell mean");
    rec.t_upper = seconds_since(t0);

    double candidate = p.c.dot(m.x) + vp.value;
    if (candidate < st.z_upper) st.incumbent = m.x;
    settle_bounds(m.value, candidate, st.z_lower, st.z_upper);

    rec.z_lower = st.z_lower;
    rec.z_upper = st.z_upper;
    rec.cells = st.partition.size();
    st.history.push_back(std::move(rec));
    st.iterations = k;

    if (gap_closed(opt, st.z_lower, st.z_upper)) {
      st.converged = true;
      break;
    }
  }
  st.cuts = std::move(repair_cuts);
  return st;
}

SolverState lshaped(const TwoStageProblem& p, const SolveOptions& opt) {
  require(opt.eps > 0, ErrorCode::invalid_argument, "lshaped: eps must be > 0");
  require(opt.max_iter >= 1, ErrorCode::invalid_argument,
          "lshaped: max_iter must be >= 1");
  p.validate();

  std::vector<Fan> fans = dual_fans(p);
  SolverState st;
  st.partition = trivial_partition(p.dist);

  for (int k = 1; k <= opt.max_iter; ++k) {
    IterationRecord rec;
    rec.k = k;

    auto resolve = [&]() {
      MasterSolution mm;
      if (st.cuts.opt.empty()) {
        // no cuts to lean on yet: seed from the aggregated master, whose
        // optimum is a valid lower bound and whose argmin is a sound x_1
        mm = solve_master(p, st.partition.stats(),
                          st.cuts.feas.empty() ? nullptr : &st.cuts);
      } else {
        mm = solve_master_cuts(p, st.cuts, opt.theta_lower);
        if (mm.unbounded) {
          // probe far along the improving ray; the exact cut generated
          // there blocks this direction in later masters
          double step =
              100.0 * (1.0 + mm.x.norm()) / std::max(mm.ray.norm(), 1e-12);
          mm.x += step * mm.ray;
        }
      }
      return mm;
    };

    auto t0 = std::chrono::steady_clock::now();
    MasterSolution m = resolve();
    rec.t_master = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    Partition rx;
    int repairs = 0;
    for (;;) {
      try {
        rx = make_adapted(p, m.x, fans, opt, k);
        break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::infeasible || !opt.feasibility_cuts) throw;
        auto cut = feasibility_cut_at(p, m.x);
        require(cut.has_value(), ErrorCode::infeasible,
                std::string("lshaped: recourse infeasible at the iterate and "
                            "no separating cut was found: ") +
                    e.what());
        require(++repairs <= opt.max_repairs, ErrorCode::infeasible,
                "lshaped: feasibility repair did not terminate");
        st.cuts.feas.push_back(*cut);
        m = resolve();
      }
    }
    rec.t_partition = seconds_since(t0);
    st.x_last = m.x;
    rec.x = m.x;
    rec.master_value = m.value;

    // exact value and subgradient at x_k from the adapted partition
    t0 = std::chrono::steady_clock::now();
    auto cells = rx.stats();
    VPResult vp = eval_VP(p, m.x, cells);
    require(vp.feasible, ErrorCode::infeasible,
            "lshaped: recourse infeasible at an adapted cell mean");
    VectorXd g = subgradient_VP(p, cells, vp);
    st.cuts.opt.push_back({g, vp.value - g.dot(m.x)});
    rec.t_upper = seconds_since(t0);

    double candidate = p.c.dot(m.x) + vp.value;
    if (candidate < st.z_upper) st.incumbent = m.x;
    settle_bounds(m.value, candidate, st.z_lower, st.z_upper);

    rec.z_lower = st.z_lower;
    rec.z_upper = st.z_upper;
    rec.cells = rx.size();
    st.history.push_back(std::move(rec));
    st.iterations = k;
    st.partition = std::move(rx);

    if (gap_closed(opt, st.z_lower, st.z_upper)) {
      st.converged = true;
      break;
    }
  }
  return st;
}

SolverState meanvalue(const TwoStageProblem& p) {
  p.validate();
  SolverState st;
  st.partition = trivial_partition(p.dist);

  IterationRecord rec;
  rec.k = 1;
  auto t0 = std::chrono::steady_clock::now();
  MasterSolution m = solve_master(p, st.partition.stats());
  rec.t_master = seconds_since(t0);

  st.x_last = st.incumbent = m.x;
  st.z_lower = m.value;
  st.iterations = 1;
  rec.x = m.x;
  rec.master_value = m.value;
  rec.z_lower = m.value;
  rec.z_upper = st.z_upper;
  rec.cells = 1;
  st.history.push_back(std::move(rec));
  return st;
}

long long iteration_bound(int n, double L, double M, double eps) {
  require(n >= 1, ErrorCode::invalid_argument, "iteration_bound: n must be >= 1");
  require(L > 0 && M > 0 && eps > 0, ErrorCode::invalid_argument,
          "iteration_bound: L, M, eps must be > 0");
  double base = std::sqrt(static_cast<double>(n)) * L * M / eps + 1.0;
  double raw = std::pow(base, static_cast<double>(n));
  constexpr double kSat = 9.2e18;
  if (!(raw < kSat)) return std::numeric_limits<long long>::max();
  return static_cast<long long>(std::ceil(raw));
}

}  // namespace gapm
