#pragma once

// Exact rational polyhedral cones with dual H/V representations.
//
// Rays are computed by double description with big rationals throughout.
// Cones are canonicalized: primitive sorted rays, equalities as the reduced
// row echelon basis of span(rays)^perp, inequalities as the primitive facet
// normals recovered from the polar cone. Cone equality is then a syntactic
// comparison of the ray lists (all cones in this artifact are pointed).

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "logdr/linalg.hpp"
#include "logdr/rational.hpp"

namespace logdr {

namespace dd {

// Double description: extreme rays of {x : eqs x = 0, ineqs x >= 0}.
// Returns (lineality basis, extreme rays); rays are primitive and sorted.
inline std::pair<QMat, QMat> rays_of(int dim, const QMat& eqs, const QMat& ineqs) {
  // restrict to the nullspace of the equalities
  QMat nsp = nullspace(eqs, dim);  // basis vectors (rows)
  const int k = (int)nsp.size();
  // reduced inequalities b(z) = ineq . (sum z_j nsp_j)
  QMat red;
  for (auto& a : ineqs) {
    QVec b = qvec(k);
    for (int j = 0; j < k; ++j) b[j] = dot(a, nsp[j]);
    red.push_back(b);
  }
  // state in the reduced space
  QMat lin;  // lineality basis
  for (int j = 0; j < k; ++j) {
    QVec v = qvec(k);
    v[j] = 1;
    lin.push_back(v);
  }
  QMat rays;
  QMat processed;
  auto zero_set = [&](const QVec& r) {
    std::vector<bool> z(processed.size());
    for (std::size_t i = 0; i < processed.size(); ++i) z[i] = dot(processed[i], r) == 0;
    return z;
  };
  for (auto& h : red) {
    // pivot on lineality if possible
    int piv = -1;
    for (std::size_t i = 0; i < lin.size(); ++i)
      if (dot(h, lin[i]) != 0) { piv = (int)i; break; }
    if (piv >= 0) {
      QVec l0 = lin[piv];
      Rat hv = dot(h, l0);
      if (hv < 0) { l0 = vec_scale(l0, -1); hv = -hv; }
      QMat nl;
      for (std::size_t i = 0; i < lin.size(); ++i) {
        if ((int)i == piv) continue;
        nl.push_back(vec_sub(lin[i], vec_scale(l0, dot(h, lin[i]) / hv)));
      }
      lin = nl;
      for (auto& r : rays) r = vec_sub(r, vec_scale(l0, dot(h, r) / hv));
      rays.push_back(l0);
      processed.push_back(h);
      continue;
    }
    // partition
    QMat pos, zer, neg;
    for (auto& r : rays) {
      Rat v = dot(h, r);
      (v > 0 ? pos : v == 0 ? zer : neg).push_back(r);
    }
    if (neg.empty()) { processed.push_back(h); continue; }
    QMat next = pos;
    for (auto& r : zer) next.push_back(r);
    // adjacent (p, q) pairs combine into new boundary rays
    for (auto& p : pos) {
      auto zp = zero_set(p);
      for (auto& q : neg) {
        auto zq = zero_set(q);
        std::vector<bool> common(processed.size());
        for (std::size_t i = 0; i < processed.size(); ++i) common[i] = zp[i] && zq[i];
        bool adjacent = true;
        for (auto& r : rays) {
          if (vec_cmp(r, p) == 0 || vec_cmp(r, q) == 0) continue;
          auto zr = zero_set(r);
          bool contains = true;
          for (std::size_t i = 0; i < processed.size(); ++i)
            if (common[i] && !zr[i]) { contains = false; break; }
          if (contains) { adjacent = false; break; }
        }
        if (!adjacent) continue;
        QVec w = vec_sub(vec_scale(q, dot(h, p)), vec_scale(p, dot(h, q)));
        w = primitive(w);
        if (!is_zero_vec(w)) next.push_back(w);
      }
    }
    rays = next;
    processed.push_back(h);
    // dedupe
    for (auto& r : rays) r = primitive(r);
    std::sort(rays.begin(), rays.end(), vec_less);
    rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  }
  // extremeness filter: tight constraints must have rank k-1 (given lineality 0)
  if (lin.empty()) {
    QMat keep;
    for (auto& r : rays) {
      QMat tight;
      for (auto& h : red)
        if (dot(h, r) == 0) tight.push_back(h);
      if (rank(tight) >= k - 1) keep.push_back(r);
    }
    rays = keep;
  }
  // map back to the ambient space
  QMat out;
  for (auto& r : rays) {
    QVec x = qvec(dim);
    for (int j = 0; j < k; ++j)
      if (r[j] != 0)
        for (int c = 0; c < dim; ++c) x[c] += r[j] * nsp[j][c];
    out.push_back(primitive(x));
  }
  QMat lout;
  for (auto& l : lin) {
    QVec x = qvec(dim);
    for (int j = 0; j < k; ++j)
      if (l[j] != 0)
        for (int c = 0; c < dim; ++c) x[c] += l[j] * nsp[j][c];
    lout.push_back(primitive(x));
  }
  std::sort(out.begin(), out.end(), vec_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return {lout, out};
}

}  // namespace dd

struct RationalCone {
  int ambient_dim = 0;
  QMat eqs;    // canonical: rref basis of span(rays)^perp
  QMat ineqs;  // canonical: primitive facet normals, sorted
  QMat rays;   // primitive, sorted, extreme
  int lineality_dim = 0;

  int dim() const { return ambient_dim - (int)eqs.size(); }
  bool is_zero_cone() const { return rays.empty() && lineality_dim == 0; }

  bool operator==(const RationalCone& o) const {
    return ambient_dim == o.ambient_dim && rays == o.rays && lineality_dim == o.lineality_dim;
  }
  bool operator<(const RationalCone& o) const {
    if (rays.size() != o.rays.size()) return rays.size() < o.rays.size();
    for (std::size_t i = 0; i < rays.size(); ++i) {
      int c = vec_cmp(rays[i], o.rays[i]);
      if (c) return c < 0;
    }
    return false;
  }

  bool contains(const QVec& x) const {
    for (auto& e : eqs)
      if (dot(e, x) != 0) return false;
    for (auto& a : ineqs)
      if (dot(a, x) < 0) return false;
    return true;
  }

  // A canonical relative-interior point: the sum of the rays.
  QVec interior_point() const {
    QVec p = qvec(ambient_dim);
    for (auto& r : rays) p = vec_add(p, r);
    return p;
  }
};

namespace detail {

// Canonical H-representation from the rays of a pointed cone.
inline void hrep_from_rays(RationalCone& c) {
  const int dim = c.ambient_dim;
  // equalities: basis of span(rays)^perp, canonical via rref
  QMat span = c.rays;
  c.eqs = nullspace(span, dim);
  QMat tmp = c.eqs;
  rref(tmp);
  c.eqs = tmp;
  if (c.rays.empty()) {
    // the zero cone: x = 0
    c.ineqs.clear();
    return;
  }
  // work inside span(rays): coordinates via a row-basis B of the span
  QMat b = c.rays;
  auto piv = rref(b);  // b: rows form a basis of span
  const int k = (int)b.size();
  // express rays in basis coordinates: r = sum z_j b_j; since b is in rref,
  // z_j = r[piv[j]]
  QMat zr;
  for (auto& r : c.rays) {
    QVec z = qvec(k);
    for (int j = 0; j < k; ++j) z[j] = r[piv[j]];
    zr.push_back(z);
  }
  // polar cone in the k-dim space: {y : y . z >= 0 for all rays}
  auto [lin, polar] = dd::rays_of(k, {}, zr);
  // each polar ray y gives the facet normal a with a = sum y_j b_j
  c.ineqs.clear();
  for (auto& y : polar) {
    QVec a = qvec(dim);
    for (int j = 0; j < k; ++j)
      if (y[j] != 0)
        for (int t = 0; t < dim; ++t) a[t] += y[j] * b[j][t];
    c.ineqs.push_back(primitive(a));
  }
  std::sort(c.ineqs.begin(), c.ineqs.end(), vec_less);
}

}  // namespace detail

// Cone from generators (V-representation); canonicalizes and computes H-rep.
inline RationalCone cone_from_rays(int dim, const QMat& gens) {
  RationalCone c;
  c.ambient_dim = dim;
  // primitive, dedupe
  QMat rs;
  for (auto& g : gens) {
    QVec p = primitive(g);
    if (!is_zero_vec(p)) rs.push_back(p);
  }
  std::sort(rs.begin(), rs.end(), vec_less);
  rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
  c.rays = rs;
  detail::hrep_from_rays(c);
  // run V -> H -> V to drop non-extreme generators
  if (!c.rays.empty()) {
    auto [lin, ext] = dd::rays_of(dim, c.eqs, c.ineqs);
    if (!lin.empty()) throw std::runtime_error("cone_from_rays: cone is not pointed");
    c.rays = ext;
    detail::hrep_from_rays(c);
  }
  return c;
}

// Cone from constraints {x : eqs x = 0, ineqs x >= 0}. The nonnegative orthant
// is part of the set only when orthant inequalities are supplied explicitly.
inline RationalCone cone_from_constraints(int dim, const QMat& eqs, const QMat& ineqs) {
  for (auto& e : eqs)
    if ((int)e.size() != dim) throw std::invalid_argument("cone_from_constraints: dimension mismatch");
  for (auto& a : ineqs)
    if ((int)a.size() != dim) throw std::invalid_argument("cone_from_constraints: dimension mismatch");
  auto [lin, rays] = dd::rays_of(dim, eqs, ineqs);
  RationalCone c;
  c.ambient_dim = dim;
  c.lineality_dim = (int)lin.size();
  c.rays = rays;
  if (c.lineality_dim > 0)
    throw std::runtime_error("cone_from_constraints: cone has positive lineality");
  detail::hrep_from_rays(c);
  return c;
}

inline QMat orthant_ineqs(int dim) {
  QMat m;
  for (int i = 0; i < dim; ++i) {
    QVec v = qvec(dim);
    v[i] = 1;
    m.push_back(v);
  }
  return m;
}

inline RationalCone orthant_cone(int dim) {
  return cone_from_constraints(dim, {}, orthant_ineqs(dim));
}

inline RationalCone intersect(const RationalCone& a, const RationalCone& b) {
  QMat eqs = a.eqs, ineqs = a.ineqs;
  eqs.insert(eqs.end(), b.eqs.begin(), b.eqs.end());
  ineqs.insert(ineqs.end(), b.ineqs.begin(), b.ineqs.end());
  return cone_from_constraints(a.ambient_dim, eqs, ineqs);
}

// The smallest face of c containing x (x must lie in c): generated by the rays
// of c on which all facet inequalities tight at x vanish.
inline RationalCone smallest_face_containing(const RationalCone& c, const QVec& x) {
  QMat tight;
  for (auto& a : c.ineqs)
    if (dot(a, x) == 0) tight.push_back(a);
  QMat frays;
  for (auto& r : c.rays) {
    bool on = true;
    for (auto& a : tight)
      if (dot(a, r) != 0) { on = false; break; }
    if (on) frays.push_back(r);
  }
  return cone_from_rays(c.ambient_dim, frays);
}

inline bool is_face_of(const RationalCone& face, const RationalCone& c) {
  for (auto& r : face.rays)
    if (!c.contains(r)) return false;
  return smallest_face_containing(c, face.interior_point()) == face;
}

struct LinearImage {
  RationalCone cone;
  bool injective_on_span = false;
  QMat section;  // right inverse: section * (M x) = x on span(source), when injective
};

// Image of a cone under a rational matrix; when M restricted to span(c) is
// injective, also returns the canonical rational section.
inline LinearImage linear_image(const RationalCone& c, const QMat& m) {
  LinearImage li;
  QMat imgs;
  for (auto& r : c.rays) imgs.push_back(mat_apply(m, r));
  li.cone = cone_from_rays((int)m.size(), imgs);
  int rank_src = rank(c.rays), rank_img = rank(imgs);
  li.injective_on_span = rank_src == rank_img;
  if (li.injective_on_span && !c.rays.empty()) {
    // S * (image ray) = (source ray), columnwise over all rays
    auto s = solve_sv_eq_t(transpose(imgs), transpose(c.rays));
    if (!s) throw std::runtime_error("linear_image: section solve failed");
    li.section = *s;
  }
  return li;
}

// ---------------------------------------------------------------------------
// Volumes of the slice {sum x_i = 1} and fan coverage

// Normalized slice volume of a full-dimensional simplicial cone spanned by
// primitive rays r_i: |det(r_1/s_1, ..., r_d/s_d)| with s_i the coordinate sum.
// This measure is additive across subdivisions within the orthant.
inline Rat simplex_slice_volume(const QMat& rays) {
  QMat m = rays;
  for (auto& r : m) {
    Rat s = 0;
    for (auto& x : r) s += x;
    if (s <= 0) throw std::runtime_error("slice volume: ray outside the positive halfspace");
    r = vec_scale(r, 1 / s);
  }
  Rat d = det(m);
  return d < 0 ? -d : d;
}

// Placing triangulation over the lexicographically least ray.
inline std::vector<QMat> triangulate(const RationalCone& c) {
  const int d = c.dim();
  if ((int)c.rays.size() == d) return {c.rays};
  std::vector<QMat> out;
  const QVec& r0 = c.rays[0];
  for (auto& a : c.ineqs) {
    if (dot(a, r0) == 0) continue;  // facet contains r0
    QMat frays;
    for (auto& r : c.rays)
      if (dot(a, r) == 0) frays.push_back(r);
    auto facet = cone_from_rays(c.ambient_dim, frays);
    for (auto& simplex : triangulate(facet)) {
      QMat s = simplex;
      s.push_back(r0);
      std::sort(s.begin(), s.end(), vec_less);
      out.push_back(s);
    }
  }
  return out;
}

inline Rat slice_volume(const RationalCone& c) {
  Rat v = 0;
  for (auto& s : triangulate(c)) v += simplex_slice_volume(s);
  return v;
}

struct FanCoverReport {
  bool ok = true;
  std::string failure;           // empty when ok
  int bad_i = -1, bad_j = -1;    // offending pair for a face failure
  Rat expected_volume, got_volume;
};

// Checks that `cones` forms a fan with support sigma: every pairwise
// intersection is a common face, and the slice volumes of the
// full-dimensional cones add up to the slice volume of sigma. Both exact.
inline FanCoverReport verify_fan_cover(const RationalCone& sigma,
                                       const std::vector<RationalCone>& cones) {
  FanCoverReport rep;
  for (std::size_t i = 0; i < cones.size(); ++i)
    for (auto& r : cones[i].rays)
      if (!sigma.contains(r)) {
        rep.ok = false;
        rep.failure = "cone " + std::to_string(i) + " is not contained in the support";
        rep.bad_i = (int)i;
        return rep;
      }
  for (std::size_t i = 0; i < cones.size(); ++i) {
    for (std::size_t j = i + 1; j < cones.size(); ++j) {
      auto inter = intersect(cones[i], cones[j]);
      if (!is_face_of(inter, cones[i]) || !is_face_of(inter, cones[j])) {
        rep.ok = false;
        rep.failure = "intersection of cones " + std::to_string(i) + " and " +
                      std::to_string(j) + " is not a common face";
        rep.bad_i = (int)i;
        rep.bad_j = (int)j;
        return rep;
      }
    }
  }
  const int d = sigma.dim();
  rep.expected_volume = d == 0 ? Rat(0) : slice_volume(sigma);
  rep.got_volume = 0;
  for (auto& c : cones)
    if (c.dim() == d && d > 0) rep.got_volume += slice_volume(c);
  if (d > 0 && rep.expected_volume != rep.got_volume) {
    rep.ok = false;
    rep.failure = "volume deficit: expected " + rat_str(rep.expected_volume) + ", got " +
                  rat_str(rep.got_volume);
  }
  return rep;
}

}  // namespace logdr
