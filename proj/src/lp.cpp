#include "obkit/lp.hpp"

#include "obkit/error.hpp"

namespace obkit::lp {

namespace {

// Variable ids: 0..n-1 structural, n..n+m-1 slacks (bounds [0, +inf)).
struct Simplex {
  const Problem& p;
  int m, n;
  std::vector<int> basic;            // row -> variable id
  std::vector<int> nb;               // column -> variable id
  std::vector<signed char> at_upper; // nonbasic structural var at its upper bound?
  std::vector<Rat> val;              // current value per variable id
  std::vector<std::vector<Rat>> w;   // m x n condensed tableau
  std::vector<Rat> zr;               // reduced cost per column, kept incrementally
  long pivots = 0;

  explicit Simplex(const Problem& prob) : p(prob), m(prob.rows()), n(prob.cols()) {
    basic.resize(m);
    nb.resize(n);
    at_upper.assign(n + m, 0);
    val.assign(n + m, Rat(0));
    w.assign(m, std::vector<Rat>(n));
    zr.resize(n);
    for (int j = 0; j < n; ++j) {
      nb[j] = j;
      at_upper[j] = 1;
      val[j] = p.up[j];
      zr[j] = p.c[j];  // initial basis is all slacks, which cost nothing
    }
    for (int i = 0; i < m; ++i) {
      basic[i] = n + i;
      Rat s = p.b[i];
      for (int j = 0; j < n; ++j)
        if (!p.a[i][j].is_zero()) s -= p.a[i][j] * p.up[j];
      if (s.sign() < 0)
        throw Error(ErrorKind::Invalid, "upper-bound vertex is infeasible for this program");
      val[n + i] = s;
      w[i] = p.a[i];
    }
  }

  bool is_slack(int v) const { return v >= n; }
  const Rat& lo_of(int v) const {
    static const Rat zero(0);
    return is_slack(v) ? zero : p.lo[v];
  }
  bool has_upper(int v) const { return !is_slack(v); }
  const Rat& up_of(int v) const { return p.up[v]; }

  // Reduced cost of nonbasic column j recomputed from the definition; used
  // only to audit the incremental values after termination.
  Rat reduced_from_scratch(int j) const {
    Rat z = is_slack(nb[j]) ? Rat(0) : p.c[nb[j]];
    for (int i = 0; i < m; ++i) {
      if (is_slack(basic[i])) continue;
      if (!w[i][j].is_zero()) z -= p.c[basic[i]] * w[i][j];
    }
    return z;
  }

  void run() {
    for (;;) {
      if (++pivots > 200000)
        throw Error(ErrorKind::Internal, "simplex iteration cap exceeded");
      // Entering: Bland, smallest eligible variable id.
      int enter_col = -1;
      for (int j = 0; j < n; ++j) {
        int s = zr[j].sign();
        bool ok = at_upper[nb[j]] ? s > 0 : s < 0;
        if (ok && (enter_col < 0 || nb[j] < nb[enter_col])) enter_col = j;
      }
      if (enter_col < 0) return;  // optimal

      int e = nb[enter_col];
      int dir = at_upper[e] ? -1 : 1;  // moving off its current bound

      // Ratio test: largest step t keeping every basic variable in bounds,
      // capped by the entering variable's own opposite bound.  Ties break on
      // the smallest variable id, the entering variable being a candidate.
      bool best_set = false;
      bool cap_is_own = false;
      Rat best_t;
      int best_id = -1;
      int leave_row = -1;
      if (has_upper(e)) {
        best_t = up_of(e) - lo_of(e);
        best_id = e;
        cap_is_own = true;
        best_set = true;
      }
      for (int i = 0; i < m; ++i) {
        Rat g = w[i][enter_col] * Rat(dir);
        int gs = g.sign();
        if (gs == 0) continue;
        int bvar = basic[i];
        Rat t;
        if (gs > 0) {
          t = (val[bvar] - lo_of(bvar)) / g;
        } else {
          if (!has_upper(bvar)) continue;  // slack unbounded above
          t = (val[bvar] - up_of(bvar)) / g;
        }
        if (!best_set || t < best_t || (t == best_t && bvar < best_id)) {
          best_t = t;
          best_id = bvar;
          leave_row = i;
          cap_is_own = false;
          best_set = true;
        }
      }
      if (!best_set)
        throw Error(ErrorKind::Internal, "unbounded direction in a box-bounded program");

      // Apply the step.
      Rat step = best_t * Rat(dir);
      if (!step.is_zero()) {
        for (int i = 0; i < m; ++i)
          if (!w[i][enter_col].is_zero()) val[basic[i]] -= w[i][enter_col] * step;
        val[e] += step;
      }

      if (cap_is_own) {  // bound flip, basis unchanged
        at_upper[e] = static_cast<signed char>(!at_upper[e]);
        continue;
      }

      int leave = basic[leave_row];
      // The leaver sits exactly at the bound it hit.
      int gs = (w[leave_row][enter_col] * Rat(dir)).sign();
      at_upper[leave] = static_cast<signed char>(gs < 0);
      val[leave] = gs < 0 ? up_of(leave) : lo_of(leave);

      pivot(leave_row, enter_col);
    }
  }

  void pivot(int r, int ecol) {
    Rat piv = w[r][ecol];
    if (piv.is_zero()) throw Error(ErrorKind::Internal, "zero pivot");
    Rat inv = Rat(1) / piv;
    for (int j = 0; j < n; ++j) w[r][j] *= inv;
    w[r][ecol] = inv;
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      Rat f = w[i][ecol];
      if (f.is_zero()) continue;
      for (int j = 0; j < n; ++j)
        if (j != ecol && !w[r][j].is_zero()) w[i][j] -= f * w[r][j];
      w[i][ecol] = -f * w[r][ecol];
    }
    // The objective row transforms the same way; after the swap the entry in
    // column ecol is the reduced cost of the leaving variable.
    Rat ze = zr[ecol];
    if (!ze.is_zero()) {
      for (int j = 0; j < n; ++j)
        if (j != ecol && !w[r][j].is_zero()) zr[j] -= ze * w[r][j];
      zr[ecol] = -ze * w[r][ecol];
    }
    std::swap(basic[r], nb[ecol]);
  }
};

}  // namespace

Solution solve_from_upper(const Problem& p) {
  if (p.b.size() != p.a.size() || p.lo.size() != p.c.size() || p.up.size() != p.c.size())
    throw Error(ErrorKind::Invalid, "inconsistent program dimensions");
  for (const auto& row : p.a)
    if (row.size() != p.c.size())
      throw Error(ErrorKind::Invalid, "inconsistent program dimensions");
  for (int j = 0; j < p.cols(); ++j)
    if (p.up[j] < p.lo[j]) throw Error(ErrorKind::Invalid, "empty variable box");

  Simplex s(p);
  s.run();

  // Audit the incrementally maintained reduced costs and the optimality
  // conditions from scratch; a mismatch is a solver bug, not a caller error.
  for (int j = 0; j < s.n; ++j) {
    Rat z = s.reduced_from_scratch(j);
    if (!(z == s.zr[j]))
      throw Error(ErrorKind::Internal, "reduced-cost bookkeeping diverged");
    int sg = z.sign();
    if (s.at_upper[s.nb[j]] ? sg > 0 : sg < 0)
      throw Error(ErrorKind::Internal, "simplex stopped at a non-optimal point");
  }

  Solution out;
  out.x.assign(p.cols(), Rat(0));
  out.value = Rat(0);
  for (int j = 0; j < p.cols(); ++j) {
    out.x[j] = s.val[j];
    if (!p.c[j].is_zero()) out.value += p.c[j] * s.val[j];
  }
  out.pivots = s.pivots;

  // Exact feasibility of the reported point; violations mean a solver bug.
  for (int j = 0; j < p.cols(); ++j)
    if (out.x[j] < p.lo[j] || out.x[j] > p.up[j])
      throw Error(ErrorKind::Internal, "simplex produced an out-of-box point");
  for (int i = 0; i < p.rows(); ++i) {
    Rat s2(0);
    for (int j = 0; j < p.cols(); ++j)
      if (!p.a[i][j].is_zero()) s2 += p.a[i][j] * out.x[j];
    if (s2 > p.b[i]) throw Error(ErrorKind::Internal, "simplex produced an infeasible point");
  }
  return out;
}

}  // namespace obkit::lp
