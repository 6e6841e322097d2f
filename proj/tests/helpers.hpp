#pragma once

// Shared test oracles: Monte-Carlo volume, random polytope generators,
// brute-force support functions over enumerated vertices.

#include <random>
#include <utility>
#include <vector>

#include "geometry.hpp"

namespace gapm::testing {

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline VectorXd random_point_in_box(const VectorXd& lo, const VectorXd& hi,
                                    std::mt19937_64& g) {
  VectorXd p(lo.size());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Index i = 0; i < lo.size(); ++i) p(i) = lo(i) + u(g) * (hi(i) - lo(i));
  return p;
}

inline VectorXd random_unit_vec(Index d, std::mt19937_64& g) {
  std::normal_distribution<double> n(0.0, 1.0);
  VectorXd v(d);
  double norm = 0;
  do {
    for (Index i = 0; i < d; ++i) v(i) = n(g);
    norm = v.norm();
  } while (norm < 1e-6);
  return v / norm;
}

struct McVolume {
  double estimate;
  double sigma;
};

// hit-or-miss estimate of vol(h) over the box [lo, hi]
inline McVolume mc_volume(const HRep& h, const VectorXd& lo, const VectorXd& hi,
                          std::size_t n, std::uint64_t seed) {
  auto g = rng(seed);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < n; ++k)
    if (h.contains(random_point_in_box(lo, hi, g), 1e-12)) ++hits;
  double boxvol = 1.0;
  for (Index i = 0; i < lo.size(); ++i) boxvol *= hi(i) - lo(i);
  double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p * boxvol,
          std::sqrt(std::max(p * (1 - p), 1e-12) / static_cast<double>(n)) * boxvol};
}

// box [-1,1]^d cut by `extra` random halfspaces through the unit shell
inline HRep random_hpolytope(Index d, int extra, std::mt19937_64& g) {
  std::uniform_real_distribution<double> ub(0.3, 1.2);
  HRep h;
  h.ambient_dim = d;
  h.A.resize(2 * d + extra, d);
  h.b.resize(2 * d + extra);
  for (Index i = 0; i < d; ++i) {
    h.A.row(2 * i) = VectorXd::Unit(d, i);
    h.b(2 * i) = 1.0;
    h.A.row(2 * i + 1) = -VectorXd::Unit(d, i);
    h.b(2 * i + 1) = 1.0;
  }
  for (int k = 0; k < extra; ++k) {
    h.A.row(2 * d + k) = random_unit_vec(d, g);
    h.b(2 * d + k) = ub(g);
  }
  return h;
}

// support function max_{z in v} psi.z over an enumerated bounded VRep,
// together with the set of maximizing vertices (ties within tol)
inline std::pair<double, std::vector<std::size_t>> support_over_vertices(
    const VRep& v, const VectorXd& psi, double tol = 1e-9) {
  double best = -std::numeric_limits<double>::infinity();
  for (const VectorXd& p : v.vertices) best = std::max(best, psi.dot(p));
  std::vector<std::size_t> arg;
  for (std::size_t i = 0; i < v.vertices.size(); ++i)
    if (psi.dot(v.vertices[i]) >= best - tol * (1.0 + std::abs(best)))
      arg.push_back(i);
  return {best, arg};
}

}  // namespace gapm::testing
