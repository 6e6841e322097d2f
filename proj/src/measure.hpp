#pragma once

// Distributions of xi = (T, h) and exact conditional statistics over
// polyhedral cells. Cells live in the flattened coordinate space
// (vec T row-major, then h) restricted to the coordinates that actually
// vary; constant coordinates are folded into the right-hand sides.

#include <variant>
#include <vector>

#include "geometry.hpp"

namespace gapm {

struct DiscreteAtoms {
  struct Atom {
    MatrixXd T;
    VectorXd h;
    double weight = 0;
  };
  std::vector<Atom> atoms;
};

// independent entrywise uniforms; lo == hi marks a deterministic entry
struct UniformBox {
  MatrixXd T_lo, T_hi;
  VectorXd h_lo, h_hi;
};

class XiDistribution {
 public:
  XiDistribution() = default;
  XiDistribution(Index l, Index n, DiscreteAtoms atoms);
  XiDistribution(Index l, Index n, UniformBox box);

  Index l() const { return l_; }
  Index n() const { return n_; }
  Index flat_dim() const { return l_ * n_ + l_; }
  bool is_discrete() const { return std::holds_alternative<DiscreteAtoms>(law_); }
  const DiscreteAtoms& atoms() const;
  const UniformBox& box() const;
  std::size_t num_atoms() const;

  const std::vector<Index>& random_coords() const { return random_; }
  Index num_random() const { return static_cast<Index>(random_.size()); }
  // full flat vector holding every constant coordinate's value (random
  // coordinates hold a representative value, do not rely on them)
  const VectorXd& constants() const { return constants_; }

  VectorXd atom_restricted(std::size_t a) const;  // over random coords
  VectorXd atom_full(std::size_t a) const;

  static Index flat_index_T(Index l, Index n, Index i, Index j) { return i * n + j; }
  static Index flat_index_h(Index l, Index n, Index i) { return l * n + i; }
  static void unflatten(Index l, Index n, const VectorXd& full, MatrixXd& T,
                        VectorXd& h);

  void validate() const;

 private:
  VectorXd atom_full_impl(const DiscreteAtoms::Atom& a) const;

  Index l_ = 0, n_ = 0;
  std::variant<DiscreteAtoms, UniformBox> law_;
  std::vector<Index> random_;
  VectorXd constants_;
};

struct CellStats {
  double prob = 0.0;
  MatrixXd mean_T;  // conditional means, defined iff prob > 0
  VectorXd mean_h;
  bool defined = false;
};

// a full-flat-space constraint a.xi (<= | = | <) b expressed over the
// random coordinates, constants folded into the right-hand side
struct RestrictedRow {
  enum class Kind { usable, vacuous, empty };
  Kind kind = Kind::usable;
  VectorXd a;  // over random coords, in random_coords() order
  double b = 0.0;
};
RestrictedRow restrict_row(const XiDistribution& dist, const VectorXd& a_full,
                           double b_full, bool strict, bool eq,
                           double tol = kGeomTol);

// P(cell) and E[(T,h) | cell]. `strict` flags the inequality rows of `cell`
// that are open; they matter only for discrete laws (null boundaries
// otherwise). `cell` is over the random coordinates.
CellStats cell_stats(const XiDistribution& dist, const HRep& cell,
                     const std::vector<bool>& strict, double tol = kGeomTol);

// unconditional means
void total_mean(const XiDistribution& dist, MatrixXd& T, VectorXd& h);

}  // namespace gapm
