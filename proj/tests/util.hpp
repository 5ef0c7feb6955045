#pragma once

// Shared helpers for the test binaries: tiny exact Gaussian elimination, a
// brute-force vertex-enumeration oracle for box LPs, and random pre-metric
// generation by feasible-interval sampling.

#include <optional>
#include <vector>

#include "obkit/lp.hpp"
#include "obkit/metric.hpp"
#include "obkit/rng.hpp"

namespace testutil {

using obkit::Rat;
using obkit::Rng;

// Solves M x = rhs exactly; nullopt when singular.
inline std::optional<std::vector<Rat>> gauss_solve(std::vector<std::vector<Rat>> m,
                                                   std::vector<Rat> rhs) {
  const int n = (int)m.size();
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (!m[r][col].is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) return std::nullopt;
    std::swap(m[col], m[piv]);
    std::swap(rhs[col], rhs[piv]);
    Rat inv = Rat(1) / m[col][col];
    for (int j = col; j < n; ++j) m[col][j] *= inv;
    rhs[col] *= inv;
    for (int r = 0; r < n; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      Rat f = m[r][col];
      for (int j = col; j < n; ++j) m[r][j] -= f * m[col][j];
      rhs[r] -= f * rhs[col];
    }
  }
  return rhs;
}

// Minimum of c.x over {A x <= b, lo <= x <= up} by enumerating all candidate
// vertices: every n-subset of tight hyperplanes (rows and bound planes).
// nullopt when no feasible vertex exists.
inline std::optional<Rat> lp_oracle(const obkit::lp::Problem& p) {
  const int n = p.cols();
  const int m = p.rows();
  const int planes = m + 2 * n;
  std::optional<Rat> best;
  for (unsigned mask = 0; mask < (1u << planes); ++mask) {
    if (__builtin_popcount(mask) != n) continue;
    std::vector<std::vector<Rat>> sys;
    std::vector<Rat> rhs;
    for (int t = 0; t < planes; ++t) {
      if (!(mask & (1u << t))) continue;
      if (t < m) {
        sys.push_back(p.a[t]);
        rhs.push_back(p.b[t]);
      } else {
        int j = (t - m) % n;
        bool is_up = t - m >= n;
        std::vector<Rat> row(n, Rat(0));
        row[j] = Rat(1);
        sys.push_back(std::move(row));
        rhs.push_back(is_up ? p.up[j] : p.lo[j]);
      }
    }
    auto x = gauss_solve(std::move(sys), std::move(rhs));
    if (!x) continue;
    bool feasible = true;
    for (int j = 0; j < n && feasible; ++j)
      if ((*x)[j] < p.lo[j] || (*x)[j] > p.up[j]) feasible = false;
    for (int i = 0; i < m && feasible; ++i) {
      Rat s(0);
      for (int j = 0; j < n; ++j) s += p.a[i][j] * (*x)[j];
      if (s > p.b[i]) feasible = false;
    }
    if (!feasible) continue;
    Rat v(0);
    for (int j = 0; j < n; ++j) v += p.c[j] * (*x)[j];
    if (!best || v < *best) best = v;
  }
  return best;
}

// Random pre-metric with entries k/den in [0,1].  Entries are drawn in
// column order; each new one is sampled uniformly from its exact feasible
// grid interval, so every triangle holds by construction and every grid
// pre-metric has positive probability.  strict forces nonzero entries.
inline obkit::metric::DistanceMatrix random_premetric(Rng& rng, int n, long den,
                                                      bool strict = false) {
  std::vector<std::vector<Rat>> e(n, std::vector<Rat>(n, Rat(0)));
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      Rat lo(0), up(1);
      for (int k = 0; k < i; ++k) {
        Rat diff = (e[i][k] - e[k][j]).abs();
        Rat sum = e[i][k] + e[k][j];
        if (diff > lo) lo = diff;
        if (sum < up) up = sum;
      }
      long lo_k = (lo * Rat(den)).ceil().num_long();
      long hi_k = (up * Rat(den)).floor().num_long();
      if (strict && lo_k == 0) lo_k = 1;
      Rat v = rng.grid(lo_k, hi_k, den);
      e[i][j] = v;
      e[j][i] = v;
    }
  return obkit::metric::DistanceMatrix::validated(std::move(e));
}

}  // namespace testutil
