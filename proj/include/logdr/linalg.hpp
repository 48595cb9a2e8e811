#pragma once

// Exact Gaussian elimination utilities: RREF, rank, nullspace, determinant,
// and canonical solutions of linear systems (free variables pinned to zero,
// pivots chosen left to right so results are deterministic).

#include <optional>

#include "logdr/rational.hpp"

namespace logdr {

// Reduced row echelon form in place; returns pivot column indices.
inline std::vector<int> rref(QMat& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  const int rows = (int)m.size(), cols = (int)m[0].size();
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (m[i][c] != 0) { p = i; break; }
    if (p < 0) continue;
    std::swap(m[r], m[p]);
    Rat inv = 1 / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rat f = m[i][c];
      for (int j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  m.resize(r);  // drop zero rows
  return pivots;
}

inline int rank(QMat m) { return (int)rref(m).size(); }

// Basis of {x : m x = 0}, one vector per free column, in column order.
inline QMat nullspace(QMat m, int cols) {
  if (m.empty()) {
    QMat basis;
    for (int c = 0; c < cols; ++c) {
      QVec v = qvec(cols);
      v[c] = 1;
      basis.push_back(v);
    }
    return basis;
  }
  auto pivots = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivots) is_pivot[c] = true;
  QMat basis;
  for (int c = 0; c < cols; ++c) {
    if (is_pivot[c]) continue;
    QVec v = qvec(cols);
    v[c] = 1;
    for (std::size_t r = 0; r < m.size(); ++r) v[pivots[r]] = -m[r][c];
    basis.push_back(v);
  }
  return basis;
}

// Canonical solution of a x = b (free variables zero); nullopt if inconsistent.
inline std::optional<QVec> solve(const QMat& a, const QVec& b) {
  const int rows = (int)a.size();
  const int cols = rows ? (int)a[0].size() : 0;
  QMat aug(rows, qvec(cols + 1));
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) aug[i][j] = a[i][j];
    aug[i][cols] = b[i];
  }
  auto pivots = rref(aug);
  QVec x = qvec(cols);
  for (std::size_t r = 0; r < aug.size(); ++r) {
    if (pivots[r] == cols) return std::nullopt;  // row (0..0 | c), c != 0
    x[pivots[r]] = aug[r][cols];
  }
  return x;
}

inline Rat det(QMat m) {
  const int n = (int)m.size();
  Rat d = 1;
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i)
      if (m[i][c] != 0) { p = i; break; }
    if (p < 0) return Rat(0);
    if (p != c) {
      std::swap(m[c], m[p]);
      d = -d;
    }
    d *= m[c][c];
    Rat inv = 1 / m[c][c];
    for (int i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      Rat f = m[i][c] * inv;
      for (int j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return d;
}

// Transpose helper.
inline QMat transpose(const QMat& m) {
  if (m.empty()) return {};
  QMat t(m[0].size(), qvec(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

inline QMat mat_mul(const QMat& a, const QMat& b) {
  if (a.empty() || b.empty()) return {};
  QMat r(a.size(), qvec(b[0].size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < b[0].size(); ++j) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

// Canonical solution of S V = T for S, with V (q x r) and T (p x r) given
// row-major. Solved row by row with free entries of S pinned to zero;
// nullopt if any row is inconsistent.
inline std::optional<QMat> solve_sv_eq_t(const QMat& v, const QMat& t) {
  QMat vt = transpose(v);  // r x q
  QMat s(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    auto x = solve(vt, t[i]);
    if (!x) return std::nullopt;
    s[i] = *x;
  }
  return s;
}

}  // namespace logdr
