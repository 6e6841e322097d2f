#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>

namespace gapm {
namespace {

std::string face_id_str(const FaceId& f) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << f[i];
  os << '}';
  return os.str();
}

// dynamic bitset over constraint-row indices
class RowMask {
 public:
  RowMask() = default;
  explicit RowMask(std::size_t nbits) : words_((nbits + 63) / 64, 0), n_(nbits) {}
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t(1) << (i & 63); }
  bool test(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1;
  }
  RowMask intersect(const RowMask& o) const {
    RowMask r(n_);
    for (std::size_t w = 0; w < words_.size(); ++w) r.words_[w] = words_[w] & o.words_[w];
    return r;
  }
  bool subset_of(const RowMask& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & ~o.words_[w]) return false;
    return true;
  }
  bool operator==(const RowMask&) const = default;
  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  std::vector<std::uint64_t> words_;
  std::size_t n_ = 0;
};

struct DDRow {
  VectorXd a;  // unit norm
  bool eq;
};

// Rays are unit vectors, lineality is an orthonormal basis. Masks record,
// per ray, which input rows are satisfied with equality.
struct DDOutput {
  std::vector<VectorXd> rays;
  std::vector<RowMask> masks;
  std::vector<VectorXd> lineality;
};

void reorthonormalize(std::vector<VectorXd>& basis, double tol) {
  std::vector<VectorXd> out;
  for (VectorXd v : basis) {
    for (const VectorXd& u : out) v -= u.dot(v) * u;
    double n = v.norm();
    if (n > tol) out.push_back(v / n);
  }
  basis = std::move(out);
}

// Double description for {z : a_i z <= 0 (or = 0)}. The classic incremental
// scheme: a lineality basis absorbs rows until the cone is pointed in the
// remaining directions, then plus/minus ray pairs are combined when
// combinatorially adjacent.
DDOutput dd_cone(const std::vector<DDRow>& rows_in, Index dim, double tol) {
  // normalize + drop duplicates (an LE row equal to an EQ row is implied)
  std::vector<DDRow> rows;
  rows.reserve(rows_in.size());
  for (const DDRow& r : rows_in) {
    double n = r.a.norm();
    if (n <= tol) continue;  // 0 <= 0
    DDRow cand{r.a / n, r.eq};
    bool dup = false;
    for (const DDRow& k : rows) {
      bool same = (k.a - cand.a).lpNorm<Eigen::Infinity>() < 1e-12;
      bool neg = (k.a + cand.a).lpNorm<Eigen::Infinity>() < 1e-12;
      if ((same && (k.eq || !cand.eq)) || (neg && k.eq)) { dup = true; break; }
    }
    if (!dup) rows.push_back(std::move(cand));
  }
  std::size_t nrows = rows.size();

  std::vector<VectorXd> L;
  for (Index j = 0; j < dim; ++j) L.push_back(VectorXd::Unit(dim, j));
  std::vector<VectorXd> R;
  std::vector<RowMask> M;

  for (std::size_t i = 0; i < nrows; ++i) {
    const VectorXd& a = rows[i].a;
    const bool eq = rows[i].eq;

    // does the row cut the lineality space?
    std::size_t jstar = 0;
    double best = 0;
    for (std::size_t j = 0; j < L.size(); ++j) {
      double v = std::abs(a.dot(L[j]));
      if (v > best) { best = v; jstar = j; }
    }

    if (best > tol) {
      VectorXd l0 = L[jstar];
      L.erase(L.begin() + jstar);
      double d0 = a.dot(l0);
      for (VectorXd& l : L) l -= (a.dot(l) / d0) * l0;
      reorthonormalize(L, tol);
      for (std::size_t k = 0; k < R.size(); ++k) {
        R[k] -= (a.dot(R[k]) / d0) * l0;
        double n = R[k].norm();
        if (n > tol) R[k] /= n;
        M[k].set(i);  // exact zero by construction
      }
      if (!eq) {
        VectorXd r0 = (d0 > 0 ? -l0 : l0);
        RowMask m(nrows);
        for (std::size_t j = 0; j < i; ++j) m.set(j);
        R.push_back(r0);
        M.push_back(std::move(m));
      }
      continue;
    }

    // row is orthogonal to the lineality space: split the rays
    std::vector<double> s(R.size());
    std::vector<int> sign(R.size());
    for (std::size_t k = 0; k < R.size(); ++k) {
      s[k] = a.dot(R[k]);
      sign[k] = (s[k] > tol) ? 1 : (s[k] < -tol ? -1 : 0);
    }

    std::vector<VectorXd> newR;
    std::vector<RowMask> newM;
    for (std::size_t k = 0; k < R.size(); ++k) {
      if (sign[k] == 0) {
        RowMask m = M[k];
        m.set(i);
        newR.push_back(R[k]);
        newM.push_back(std::move(m));
      } else if (sign[k] < 0 && !eq) {
        newR.push_back(R[k]);
        newM.push_back(M[k]);
      }
    }
    for (std::size_t p = 0; p < R.size(); ++p) {
      if (sign[p] != 1) continue;
      for (std::size_t m = 0; m < R.size(); ++m) {
        if (sign[m] != -1) continue;
        RowMask z = M[p].intersect(M[m]);
        bool adjacent = true;
        for (std::size_t k = 0; k < R.size(); ++k) {
          if (k == p || k == m) continue;
          if (z.subset_of(M[k])) { adjacent = false; break; }
        }
        if (!adjacent) continue;
        VectorXd w = s[p] * R[m] - s[m] * R[p];
        double n = w.norm();
        if (n <= tol) continue;
        z.set(i);
        newR.push_back(w / n);
        newM.push_back(std::move(z));
      }
    }
    R = std::move(newR);
    M = std::move(newM);
  }

  return {std::move(R), std::move(M), std::move(L)};
}

bool row_active(const VectorXd& a_unit, double b, const VectorXd& z, double tol) {
  return std::abs(a_unit.dot(z) - b) <= tol * (1.0 + z.norm());
}

// normalized copy of the rows of h: unit normals, scaled rhs
struct NormRows {
  MatrixXd A;
  VectorXd b;
  std::vector<bool> eq;
};

NormRows normalize_rows(const HRep& h, double tol) {
  NormRows nr;
  nr.A = h.A;
  nr.b = h.b;
  nr.eq.assign(static_cast<std::size_t>(h.rows()), false);
  for (Index i : h.eqs) nr.eq[static_cast<std::size_t>(i)] = true;
  for (Index i = 0; i < h.rows(); ++i) {
    double n = nr.A.row(i).norm();
    if (n > tol) {
      nr.A.row(i) /= n;
      nr.b(i) /= n;
    }
  }
  return nr;
}

int affine_dim_of(const std::vector<VectorXd>& pts,
                  const std::vector<VectorXd>& dirs, Index ambient,
                  double tol) {
  if (pts.empty() && dirs.empty()) return -1;
  std::vector<VectorXd> span = dirs;
  if (!pts.empty()) {
    for (std::size_t i = 1; i < pts.size(); ++i) span.push_back(pts[i] - pts[0]);
  }
  if (span.empty()) return 0;
  MatrixXd S(static_cast<Index>(span.size()), ambient);
  for (std::size_t i = 0; i < span.size(); ++i) S.row(static_cast<Index>(i)) = span[i];
  Eigen::ColPivHouseholderQR<MatrixXd> qr(S);
  qr.setThreshold(tol * 100);
  return static_cast<int>(qr.rank());
}

}  // namespace

bool HRep::row_is_eq(Index i) const {
  return std::find(eqs.begin(), eqs.end(), i) != eqs.end();
}

bool HRep::contains(const VectorXd& z, double tol) const {
  double scale = 1.0 + z.norm();
  for (Index i = 0; i < rows(); ++i) {
    double n = A.row(i).norm();
    if (n <= tol) n = 1.0;
    double r = (A.row(i).dot(z) - b(i)) / n;
    if (row_is_eq(i) ? std::abs(r) > tol * scale : r > tol * scale) return false;
  }
  return true;
}

void HRep::check_consistent() const {
  require(A.rows() == b.size(), ErrorCode::dimension_mismatch,
          "HRep: A has " + std::to_string(A.rows()) + " rows but b has " +
              std::to_string(b.size()));
  require(A.cols() == ambient_dim, ErrorCode::dimension_mismatch,
          "HRep: ambient_dim disagrees with A");
  for (Index i : eqs)
    require(i >= 0 && i < A.rows(), ErrorCode::invalid_argument,
            "HRep: eq row index out of range");
}

bool Cone::contains(const VectorXd& psi, double tol) const {
  double n = psi.norm();
  if (n <= tol) return true;
  return hrep.contains(psi / n, tol);
}

bool Cone::in_relative_interior(const VectorXd& psi, double tol) const {
  double n = psi.norm();
  if (n <= tol) {
    // only a linear subspace has 0 in its relative interior
    return hrep.eqs.size() == static_cast<std::size_t>(hrep.rows());
  }
  VectorXd u = psi / n;
  for (Index i = 0; i < hrep.rows(); ++i) {
    double v = hrep.A.row(i).dot(u);
    if (hrep.row_is_eq(i) ? std::abs(v) > tol : v >= -tol) return false;
  }
  return true;
}

FaceId active_rows(const HRep& h, const VectorXd& z, double tol) {
  NormRows nr = normalize_rows(h, tol);
  FaceId out;
  for (Index i = 0; i < h.rows(); ++i)
    if (row_active(nr.A.row(i), nr.b(i), z, tol)) out.push_back(i);
  return out;
}

VRep h_to_v(const HRep& h, double tol) {
  h.check_consistent();
  const Index d = h.ambient_dim;

  std::vector<DDRow> rows;
  rows.reserve(static_cast<std::size_t>(h.rows()) + 1);
  for (Index i = 0; i < h.rows(); ++i) {
    VectorXd a(d + 1);
    a.head(d) = h.A.row(i);
    a(d) = -h.b(i);
    rows.push_back({std::move(a), h.row_is_eq(i)});
  }
  {
    VectorXd t = VectorXd::Zero(d + 1);
    t(d) = -1.0;  // t >= 0
    rows.push_back({std::move(t), false});
  }

  DDOutput dd = dd_cone(rows, d + 1, tol);

  VRep v;
  v.ambient_dim = d;
  for (const VectorXd& w : dd.rays) {
    double t = w(d);
    if (t > tol) {
      v.vertices.push_back(w.head(d) / t);
    } else {
      VectorXd dir = w.head(d);
      double n = dir.norm();
      if (n > tol) v.rays.push_back(dir / n);
    }
  }
  for (const VectorXd& l : dd.lineality) {
    VectorXd dir = l.head(d);
    double n = dir.norm();
    if (n > tol) v.lineality.push_back(dir / n);
  }
  reorthonormalize(v.lineality, tol);
  if (v.vertices.empty()) {
    v = VRep{};
    v.ambient_dim = d;
    v.is_empty_set = true;
  }
  return v;
}

HRep v_to_h(const VRep& v, double tol) {
  require(!v.empty(), ErrorCode::empty_set, "v_to_h: empty VRep");
  const Index d = v.ambient_dim;

  std::vector<VectorXd> pts = v.vertices;
  if (pts.empty()) pts.push_back(VectorXd::Zero(d));  // cone apex

  std::vector<DDRow> polar;
  auto lift = [d](const VectorXd& z, double last) {
    VectorXd y(d + 1);
    y.head(d) = z;
    y(d) = last;
    return y;
  };
  for (const VectorXd& p : pts) polar.push_back({lift(p, 1.0), false});
  for (const VectorXd& r : v.rays) polar.push_back({lift(r, 0.0), false});
  for (const VectorXd& l : v.lineality) polar.push_back({lift(l, 0.0), true});

  DDOutput dd = dd_cone(polar, d + 1, tol);

  HRep out;
  out.ambient_dim = d;
  std::vector<VectorXd> rows_a;
  std::vector<double> rows_b;
  std::vector<bool> rows_eq;
  auto push_row = [&](const VectorXd& s, bool eq) {
    VectorXd az = s.head(d);
    double n = az.norm();
    if (n <= tol) return;  // homogenization artifact (pure-t face)
    rows_a.push_back(az / n);
    rows_b.push_back(-s(d) / n);
    rows_eq.push_back(eq);
  };
  for (const VectorXd& s : dd.rays) push_row(s, false);
  for (const VectorXd& l : dd.lineality) push_row(l, true);

  // keep only rows active somewhere on the input: every genuine facet is
  // active at an input point, leftovers are artifacts of lower-dim inputs
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < rows_a.size(); ++i) {
    if (rows_eq[i]) { keep.push_back(i); continue; }
    bool act = false;
    for (const VectorXd& p : pts)
      if (row_active(rows_a[i], rows_b[i], p, tol)) { act = true; break; }
    if (act) keep.push_back(i);
  }

  out.A.resize(static_cast<Index>(keep.size()), d);
  out.b.resize(static_cast<Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out.A.row(static_cast<Index>(i)) = rows_a[keep[i]];
    out.b(static_cast<Index>(i)) = rows_b[keep[i]];
    if (rows_eq[keep[i]]) out.eqs.push_back(static_cast<Index>(i));
  }
  return out;
}

HRep intersect(const HRep& p, const HRep& q) {
  require(p.ambient_dim == q.ambient_dim, ErrorCode::dimension_mismatch,
          "intersect: ambient dims differ");
  HRep out;
  out.ambient_dim = p.ambient_dim;
  out.A.resize(p.rows() + q.rows(), p.ambient_dim);
  out.A << p.A, q.A;
  out.b.resize(p.rows() + q.rows());
  out.b << p.b, q.b;
  out.eqs = p.eqs;
  for (Index i : q.eqs) out.eqs.push_back(i + p.rows());
  return out;
}

Fan normal_fan(const HRep& d_in, double tol) {
  d_in.check_consistent();
  const Index l = d_in.ambient_dim;
  const std::size_t nrows = static_cast<std::size_t>(d_in.rows());

  VRep V = h_to_v(d_in, tol);
  require(!V.empty(), ErrorCode::empty_set, "normal_fan: polyhedron is empty");

  NormRows nr = normalize_rows(d_in, tol);

  // incidence masks: which rows are tight at each vertex / along each ray
  const std::size_t nv = V.vertices.size(), nray = V.rays.size();
  std::vector<RowMask> vert_inc(nv, RowMask(nrows)), ray_inc(nray, RowMask(nrows));
  for (std::size_t k = 0; k < nv; ++k)
    for (std::size_t i = 0; i < nrows; ++i)
      if (row_active(nr.A.row(static_cast<Index>(i)), nr.b(static_cast<Index>(i)),
                     V.vertices[k], tol))
        vert_inc[k].set(i);
  for (std::size_t k = 0; k < nray; ++k)
    for (std::size_t i = 0; i < nrows; ++i)
      if (std::abs(nr.A.row(static_cast<Index>(i)).dot(V.rays[k])) <= tol)
        ray_inc[k].set(i);
  // transposed incidence: which vertices / rays lie on each row
  std::vector<RowMask> row_vinc(nrows, RowMask(nv)), row_rinc(nrows, RowMask(nray));
  for (std::size_t i = 0; i < nrows; ++i) {
    for (std::size_t k = 0; k < nv; ++k)
      if (vert_inc[k].test(i)) row_vinc[i].set(k);
    for (std::size_t k = 0; k < nray; ++k)
      if (ray_inc[k].test(i)) row_rinc[i].set(k);
  }

  // face = (vertex set, ray set) incidence pair; BFS downward from D itself
  struct FaceRec {
    RowMask verts, rays, act;
  };
  using Key = std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>;
  auto key_of = [](const RowMask& a, const RowMask& b) {
    return Key{a.words(), b.words()};
  };
  auto act_of = [&](const RowMask& vs, const RowMask& rs) {
    RowMask act(nrows);
    for (std::size_t i = 0; i < nrows; ++i) {
      bool all = true;
      for (std::size_t k = 0; k < nv && all; ++k)
        if (vs.test(k) && !vert_inc[k].test(i)) all = false;
      for (std::size_t k = 0; k < nray && all; ++k)
        if (rs.test(k) && !ray_inc[k].test(i)) all = false;
      if (all || nr.eq[i]) act.set(i);
    }
    return act;
  };

  std::vector<FaceRec> faces;
  std::map<Key, std::size_t> seen;
  {
    RowMask vs(nv), rs(nray);
    for (std::size_t k = 0; k < nv; ++k) vs.set(k);
    for (std::size_t k = 0; k < nray; ++k) rs.set(k);
    faces.push_back({vs, rs, act_of(vs, rs)});
    seen.emplace(key_of(vs, rs), 0);
  }
  for (std::size_t qi = 0; qi < faces.size(); ++qi) {
    require(faces.size() < 500000, ErrorCode::internal,
            "normal_fan: face lattice too large");
    FaceRec f = faces[qi];  // copy: faces may reallocate
    for (std::size_t i = 0; i < nrows; ++i) {
      if (f.act.test(i)) continue;
      RowMask vs = f.verts.intersect(row_vinc[i]);
      RowMask rs = f.rays.intersect(row_rinc[i]);
      bool any_vert = false;
      for (std::size_t k = 0; k < nv && !any_vert; ++k) any_vert = vs.test(k);
      if (!any_vert) continue;  // every nonempty face holds a vertex
      Key key = key_of(vs, rs);
      if (seen.emplace(key, faces.size()).second)
        faces.push_back({vs, rs, act_of(vs, rs)});
    }
  }

  Fan fan;
  fan.lineality_dim = 0;
  const Index d_lin = static_cast<Index>(V.lineality.size());
  std::vector<VectorXd> eq_dirs;
  for (std::size_t i = 0; i < nrows; ++i)
    if (nr.eq[i]) eq_dirs.push_back(nr.A.row(static_cast<Index>(i)));

  for (const FaceRec& f : faces) {
    Cone cone;
    for (std::size_t i = 0; i < nrows; ++i)
      if (f.act.test(i)) cone.face_id.push_back(static_cast<Index>(i));

    VRep gen;
    gen.ambient_dim = l;
    for (Index i : cone.face_id)
      if (!nr.eq[static_cast<std::size_t>(i)]) gen.rays.push_back(nr.A.row(i));
    gen.lineality = eq_dirs;

    if (gen.rays.empty() && gen.lineality.empty()) {
      cone.hrep.ambient_dim = l;
      cone.hrep.A = MatrixXd::Identity(l, l);
      cone.hrep.b = VectorXd::Zero(l);
      for (Index i = 0; i < l; ++i) cone.hrep.eqs.push_back(i);
      cone.dim = 0;
      gen = VRep{};
      gen.ambient_dim = l;
      gen.is_empty_set = false;
    } else {
      cone.hrep = v_to_h(gen, tol);
      cone.hrep.b.setZero();  // homogeneous by construction, clamp noise
      cone.dim = affine_dim_of({}, [&] {
        std::vector<VectorXd> dirs = gen.rays;
        for (const VectorXd& e : gen.lineality) dirs.push_back(e);
        return dirs;
      }(), l, tol);
    }
    cone.generators = std::move(gen);
    fan.cones.push_back(std::move(cone));
  }

  const Index max_dim = l - d_lin;
  for (std::size_t i = 0; i < fan.cones.size(); ++i)
    if (fan.cones[i].dim == max_dim) fan.maximal.push_back(i);
  fan.top_cone = 0;  // BFS root is the face D itself
  fan.lineality_dim = fan.cones[fan.top_cone].dim;

  fan.coverage.ambient_dim = l;
  fan.coverage.A.resize(static_cast<Index>(nray + V.lineality.size()), l);
  fan.coverage.b = VectorXd::Zero(static_cast<Index>(nray + V.lineality.size()));
  for (std::size_t k = 0; k < nray; ++k)
    fan.coverage.A.row(static_cast<Index>(k)) = V.rays[k];
  for (std::size_t k = 0; k < V.lineality.size(); ++k) {
    fan.coverage.A.row(static_cast<Index>(nray + k)) = V.lineality[k];
    fan.coverage.eqs.push_back(static_cast<Index>(nray + k));
  }
  return fan;
}

std::optional<std::size_t> classify_point(const Fan& fan, const VectorXd& psi,
                                          double tol) {
  if (!fan.coverage.contains(psi, tol)) return std::nullopt;
  double n = psi.norm();
  if (n <= tol) return fan.top_cone;
  VectorXd u = psi / n;

  std::vector<std::size_t> hits;
  for (std::size_t idx : fan.maximal)
    if (fan.cones[idx].in_relative_interior(u, tol)) hits.push_back(idx);
  if (hits.size() == 1) return hits[0];
  if (hits.empty()) {
    for (std::size_t idx = 0; idx < fan.cones.size(); ++idx) {
      bool is_max = std::find(fan.maximal.begin(), fan.maximal.end(), idx) !=
                    fan.maximal.end();
      if (!is_max && fan.cones[idx].in_relative_interior(u, tol))
        hits.push_back(idx);
    }
    if (hits.size() == 1) return hits[0];
  }
  if (hits.empty())
    fail(ErrorCode::degenerate,
         "classify_point: point inside coverage matches no cone's relative "
         "interior (numerically degenerate fan?)");
  fail(ErrorCode::degenerate,
       "classify_point: ambiguous between faces " +
           face_id_str(fan.cones[hits[0]].face_id) + " and " +
           face_id_str(fan.cones[hits[1]].face_id));
}

namespace {

std::vector<VectorXd> dedup_points(const std::vector<VectorXd>& pts, double tol) {
  std::vector<VectorXd> out;
  for (const VectorXd& p : pts) {
    bool dup = false;
    for (const VectorXd& q : out)
      if ((p - q).norm() <= tol * (1.0 + p.norm())) { dup = true; break; }
    if (!dup) out.push_back(p);
  }
  return out;
}

bool lex_less(const VectorXd& a, const VectorXd& b) {
  for (Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

// recursive apex-over-facets triangulation on index subsets of pts
void triangulate_rec(const std::vector<VectorXd>& pts, std::vector<int> idxs,
                     double tol, std::vector<std::vector<int>>& out) {
  // local affine coordinates for the subset
  const VectorXd& origin = pts[idxs[0]];
  std::vector<VectorXd> diffs;
  for (std::size_t i = 1; i < idxs.size(); ++i) diffs.push_back(pts[idxs[i]] - origin);
  std::vector<VectorXd> basis = diffs;
  reorthonormalize(basis, tol * 10);
  const int k = static_cast<int>(basis.size());

  if (k == 0) {
    out.push_back({idxs[0]});
    return;
  }
  if (static_cast<int>(idxs.size()) == k + 1) {
    out.push_back(idxs);
    return;
  }

  // project, convert, and split facet cones from the lex-min apex
  VRep local;
  local.ambient_dim = k;
  for (int id : idxs) {
    VectorXd w(k);
    for (int j = 0; j < k; ++j) w(j) = basis[j].dot(pts[id] - origin);
    local.vertices.push_back(std::move(w));
  }
  HRep facets = v_to_h(local, tol);

  int apex = idxs[0];
  std::size_t apex_pos = 0;
  for (std::size_t i = 1; i < idxs.size(); ++i)
    if (lex_less(pts[idxs[i]], pts[apex])) { apex = idxs[i]; apex_pos = i; }

  NormRows nf = normalize_rows(facets, tol);
  for (Index f = 0; f < facets.rows(); ++f) {
    if (facets.row_is_eq(f)) continue;
    if (row_active(nf.A.row(f), nf.b(f), local.vertices[apex_pos], tol)) continue;
    std::vector<int> face_idxs;
    for (std::size_t i = 0; i < idxs.size(); ++i)
      if (row_active(nf.A.row(f), nf.b(f), local.vertices[i], tol))
        face_idxs.push_back(idxs[i]);
    if (face_idxs.empty()) continue;
    std::vector<std::vector<int>> sub;
    triangulate_rec(pts, face_idxs, tol, sub);
    for (std::vector<int>& s : sub) {
      s.push_back(apex);
      out.push_back(std::move(s));
    }
  }
}

double simplex_rel_volume(const std::vector<VectorXd>& verts) {
  const std::size_t k = verts.size() - 1;
  if (k == 0) return 1.0;
  MatrixXd E(static_cast<Index>(k), verts[0].size());
  for (std::size_t i = 0; i < k; ++i)
    E.row(static_cast<Index>(i)) = verts[i + 1] - verts[0];
  double g = (E * E.transpose()).determinant();
  if (g <= 0) return 0.0;
  double fact = 1.0;
  for (std::size_t i = 2; i <= k; ++i) fact *= static_cast<double>(i);
  return std::sqrt(g) / fact;
}

}  // namespace

std::vector<Simplex> triangulate(const VRep& p, double tol) {
  if (p.empty()) return {};
  require(p.bounded(), ErrorCode::unbounded, "triangulate: unbounded set");
  std::vector<VectorXd> pts = dedup_points(p.vertices, tol);
  std::vector<int> all(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) all[i] = static_cast<int>(i);

  std::vector<std::vector<int>> chunks;
  triangulate_rec(pts, all, tol, chunks);

  std::vector<Simplex> out;
  out.reserve(chunks.size());
  for (const std::vector<int>& c : chunks) {
    Simplex s;
    for (int id : c) s.vertices.push_back(pts[id]);
    out.push_back(std::move(s));
  }
  return out;
}

VolumeCentroid volume_and_centroid(const VRep& p, double tol) {
  VolumeCentroid vc;
  if (p.empty()) return vc;
  require(p.bounded(), ErrorCode::unbounded, "volume_and_centroid: unbounded set");

  std::vector<VectorXd> pts = dedup_points(p.vertices, tol);
  VRep q;
  q.ambient_dim = p.ambient_dim;
  q.vertices = pts;
  std::vector<Simplex> tris = triangulate(q, tol);

  const int k = static_cast<int>(tris.empty() ? 0 : tris[0].vertices.size() - 1);
  double total = 0.0;
  VectorXd cen = VectorXd::Zero(p.ambient_dim);
  for (const Simplex& s : tris) {
    double v = simplex_rel_volume(s.vertices);
    VectorXd c = VectorXd::Zero(p.ambient_dim);
    for (const VectorXd& vert : s.vertices) c += vert;
    c /= static_cast<double>(s.vertices.size());
    total += v;
    cen += v * c;
  }

  vc.affine_dim = k;
  vc.relative_volume = total;
  vc.volume = (k == p.ambient_dim) ? total : 0.0;
  if (total > 1e-300) {
    vc.centroid = cen / total;
  } else {
    vc.centroid = VectorXd::Zero(p.ambient_dim);
    for (const VectorXd& v : pts) vc.centroid += v;
    vc.centroid /= static_cast<double>(pts.size());
    vc.relative_volume = 0.0;
  }
  vc.centroid_defined = true;
  return vc;
}

}  // namespace gapm
