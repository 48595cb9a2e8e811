#pragma once

// Exact rational scalars, vectors and matrices over GMP.
// Everything downstream is exact: there is no floating point in this library.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace logdr {

using Rat = mpq_class;
using Int = mpz_class;
using QVec = std::vector<Rat>;
using QMat = std::vector<QVec>;

inline Rat rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// Parses "p", "-p" or "p/q".
inline Rat rat_parse(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  r.canonicalize();
  return r;
}

// Canonical serialization: "p" when the denominator is 1, else "p/q".
inline std::string rat_str(const Rat& r) {
  return r.get_den() == 1 ? r.get_num().get_str() : r.get_str();
}

inline QVec qvec(std::size_t n) { return QVec(n, Rat(0)); }

inline Rat dot(const QVec& a, const QVec& b) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline bool is_zero_vec(const QVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

inline QVec vec_sub(const QVec& a, const QVec& b) {
  QVec r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

inline QVec vec_add(const QVec& a, const QVec& b) {
  QVec r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

inline QVec vec_scale(const QVec& a, const Rat& c) {
  QVec r = a;
  for (auto& x : r) x *= c;
  return r;
}

// Matrix * vector.
inline QVec mat_apply(const QMat& m, const QVec& v) {
  QVec r = qvec(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) r[i] = dot(m[i], v);
  return r;
}

// Scales a rational vector to a primitive integer vector (gcd of entries 1).
// Direction is preserved; the zero vector stays zero.
inline QVec primitive(const QVec& v) {
  Int l = 1;
  for (const auto& x : v) l = lcm(l, x.get_den());
  Int g = 0;
  for (const auto& x : v) g = gcd(g, Int(x.get_num() * (l / x.get_den())));
  if (g == 0) return qvec(v.size());
  QVec r = qvec(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    r[i] = Rat(Int(v[i].get_num() * (l / v[i].get_den()) / g));
  return r;
}

// Lexicographic comparison, used for canonical sorting of rays.
inline int vec_cmp(const QVec& a, const QVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return -1;
    if (a[i] > b[i]) return 1;
  }
  return 0;
}

inline bool vec_less(const QVec& a, const QVec& b) { return vec_cmp(a, b) < 0; }

}  // namespace logdr
