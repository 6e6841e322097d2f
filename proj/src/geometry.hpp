#pragma once

// Polyhedral kernel: H/V representations, double description conversions,
// normal fans of polyhedra, point classification into relative interiors,
// triangulation and volumes. Everything downstream (partitions, bounds)
// rests on the invariants stated here.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "error.hpp"

namespace gapm {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Geometric comparison tolerance. All tests are made against normalized data
// (unit row normals, unit rays), so the tolerance is effectively relative.
inline constexpr double kGeomTol = 1e-9;

// {z : A z <= b}, rows listed in `eqs` are equalities A_i z = b_i.
struct HRep {
  MatrixXd A;
  VectorXd b;
  std::vector<Index> eqs;
  Index ambient_dim = 0;

  static HRep full_space(Index dim) {
    HRep h;
    h.A.resize(0, dim);
    h.b.resize(0);
    h.ambient_dim = dim;
    return h;
  }

  Index rows() const { return A.rows(); }
  bool row_is_eq(Index i) const;
  // closed-set membership, tolerance scaled by (1 + |z|) per normalized row
  bool contains(const VectorXd& z, double tol = kGeomTol) const;
  void check_consistent() const;
};

// Conv(vertices) + Cone(rays) + Span(lineality). A VRep with rays or
// lineality but no vertices is read as a cone with apex at the origin.
struct VRep {
  std::vector<VectorXd> vertices;
  std::vector<VectorXd> rays;
  std::vector<VectorXd> lineality;
  Index ambient_dim = 0;
  bool is_empty_set = false;

  bool empty() const {
    return is_empty_set ||
           (vertices.empty() && rays.empty() && lineality.empty());
  }
  bool bounded() const { return rays.empty() && lineality.empty(); }
};

// Sorted active-row indices of the source polyhedron's H-representation.
// Unique per face, comparable across runs.
using FaceId = std::vector<Index>;

struct Cone {
  HRep hrep;        // homogeneous (b = 0), facet rows plus equality rows
  VRep generators;  // rays + lineality, apex at origin
  Index dim = 0;    // linear dimension
  FaceId face_id;

  bool contains(const VectorXd& psi, double tol = kGeomTol) const;
  // strict on facet rows, equality rows within tol (of a unit-scaled psi)
  bool in_relative_interior(const VectorXd& psi, double tol = kGeomTol) const;
};

// Normal fan of a polyhedron D: one cone per nonempty face, indexed by
// face_id. `maximal` lists the full-dimensional cones (normal cones of the
// minimal faces of D); `coverage` is the union of all cones, the polar of
// rec(D). `lineality_dim` is the common lineality dimension of every cone.
struct Fan {
  std::vector<Cone> cones;
  std::vector<std::size_t> maximal;
  HRep coverage;
  Index lineality_dim = 0;
  std::size_t top_cone = 0;  // normal cone of D itself, the fan's lineality space

  std::size_t size() const { return cones.size(); }
};

struct Simplex {
  std::vector<VectorXd> vertices;  // affine dim = vertices.size() - 1
};

struct VolumeCentroid {
  double volume = 0.0;        // ambient-dimensional Lebesgue measure
  VectorXd centroid;          // defined whenever the set is nonempty
  bool centroid_defined = false;
  Index affine_dim = -1;      // -1 for the empty set
  double relative_volume = 0.0;  // measure within the affine hull
};

// Enumerate vertices, extreme rays and lineality. Exact up to tol; empty
// input sets come back with is_empty_set. Throws on inconsistent HRep.
VRep h_to_v(const HRep& h, double tol = kGeomTol);

// Minimal H-representation: every inequality row supports a facet, implicit
// equalities are returned through eqs. Throws ErrorCode::empty_set on an
// empty VRep.
HRep v_to_h(const VRep& v, double tol = kGeomTol);

// Normal fan of {lambda : A lambda <= b}. Throws ErrorCode::empty_set if D
// is empty. Cones carry non-redundant HReps and generator sets eagerly.
Fan normal_fan(const HRep& d, double tol = kGeomTol);

// Index of the unique cone with psi in its relative interior, or nullopt if
// psi violates the fan's coverage. Ambiguity (two candidate cones within
// tol) throws ErrorCode::degenerate naming both face ids.
std::optional<std::size_t> classify_point(const Fan& fan, const VectorXd& psi,
                                          double tol = kGeomTol);

// Concatenate constraint systems (dims must agree).
HRep intersect(const HRep& p, const HRep& q);

// Triangulate a bounded VRep into simplices of its affine dimension.
// Unbounded input throws ErrorCode::unbounded.
std::vector<Simplex> triangulate(const VRep& p, double tol = kGeomTol);

// Volume and centroid of a bounded VRep. Lower-dimensional sets get ambient
// volume 0 but a defined centroid and relative_volume measured inside the
// affine hull. Empty sets get volume 0 and centroid_defined = false.
VolumeCentroid volume_and_centroid(const VRep& p, double tol = kGeomTol);

// Active rows of h at point z (closed test, used for face signatures).
FaceId active_rows(const HRep& h, const VectorXd& z, double tol = kGeomTol);

}  // namespace gapm
