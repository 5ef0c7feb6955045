#include "obkit/urysohn.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>

#include "obkit/error.hpp"

namespace obkit::urysohn {

namespace {

const Rat kOne(1);

Rat cap1(const Rat& v) { return v > kOne ? kOne : v; }

std::string idx_str(std::size_t i) { return std::to_string(i); }

void check_indices(const RationalMetricSpace& x, const std::vector<std::size_t>& t,
                   const char* name) {
  for (std::size_t i : t)
    if (i >= (std::size_t)x.d.size())
      throw Error(ErrorKind::Invalid,
                  std::string(name) + " index " + idx_str(i) + " out of range");
}

Rat dist(const RationalMetricSpace& x, std::size_t i, std::size_t j) {
  return x.d.at((int)i, (int)j);
}

RationalMetricSpace space_from(std::vector<std::vector<Rat>> entries,
                               ErrorKind fail_kind, const char* fail_msg) {
  try {
    DistanceMatrix m = DistanceMatrix::validated(std::move(entries));
    bool strict = m.strict();
    return RationalMetricSpace::make(std::move(m), strict);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Internal) throw;
    throw Error(fail_kind, std::string(fail_msg) + ": " + e.what());
  }
}

// Grid numerators admissible for a new value against the rows already fixed.
// Constraints per fixed j: |v_i - v_j| <= d_ij and d_ij <= v_i + v_j.
std::pair<long, long> value_window(const std::vector<Rat>& fixed,
                                   const std::vector<std::size_t>& order,
                                   std::size_t upto,
                                   const RationalMetricSpace& x, std::size_t i,
                                   long denom) {
  Rat lo(0), hi(denom);
  for (std::size_t t = 0; t < upto; ++t) {
    std::size_t j = order[t];
    Rat vj = fixed[j] * Rat(denom);
    Rat dij = dist(x, i, j) * Rat(denom);
    lo = std::max(lo, vj - dij);
    lo = std::max(lo, dij - vj);
    hi = std::min(hi, vj + dij);
  }
  return {lo.ceil().num_long(), hi.floor().num_long()};
}

}  // namespace

std::vector<KatetovFunction> katetov_extensions(const RationalMetricSpace& x,
                                                long denom) {
  if (denom < 1) throw Error(ErrorKind::Invalid, "denominator must be positive");
  std::size_t n = (std::size_t)x.d.size();
  std::vector<KatetovFunction> out;
  std::vector<Rat> vals(n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  auto rec = [&](auto&& self, std::size_t at) -> void {
    if (at == n) {
      out.push_back({vals});
      return;
    }
    std::size_t i = order[at];
    auto [lo, hi] = value_window(vals, order, at, x, i, denom);
    for (long k = lo; k <= hi; ++k) {
      vals[i] = Rat(k, denom);
      self(self, at + 1);
    }
  };
  rec(rec, 0);
  return out;
}

RationalMetricSpace extend_with(const RationalMetricSpace& x,
                                const KatetovFunction& f) {
  std::size_t n = (std::size_t)x.d.size();
  if (f.values.size() != n)
    throw Error(ErrorKind::Invalid, "profile length differs from the space size");
  std::vector<std::vector<Rat>> e(n + 1, std::vector<Rat>(n + 1, Rat(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) e[i][j] = dist(x, i, j);
  for (std::size_t i = 0; i < n; ++i) {
    e[i][n] = f.values[i];
    e[n][i] = f.values[i];
  }
  return space_from(std::move(e), ErrorKind::Invalid,
                    "profile is not a Katetov function");
}

void validate_partial_isometry(const RationalMetricSpace& x,
                               const PartialIsometry& p) {
  std::set<std::size_t> dom, img;
  for (auto [a, b] : p.map) {
    if (a >= (std::size_t)x.d.size() || b >= (std::size_t)x.d.size())
      throw Error(ErrorKind::Invalid, "assignment index out of range");
    if (!dom.insert(a).second)
      throw Error(ErrorKind::Invalid, "point " + idx_str(a) + " assigned twice");
    if (!img.insert(b).second)
      throw Error(ErrorKind::Invalid, "image " + idx_str(b) + " hit twice");
  }
  for (auto [a, b] : p.map)
    for (auto [c, d] : p.map)
      if (dist(x, a, c) != dist(x, b, d))
        throw Error(ErrorKind::Invalid, "assignment distorts d(" + idx_str(a) +
                                            ", " + idx_str(c) + ")");
}

Amalgam amalgamate_over(const RationalMetricSpace& x,
                        const std::vector<std::size_t>& xbar,
                        const std::vector<std::size_t>& zbar,
                        const std::vector<std::size_t>& ybar) {
  check_indices(x, xbar, "xbar");
  check_indices(x, zbar, "zbar");
  check_indices(x, ybar, "ybar");
  for (std::size_t xi : xbar)
    for (std::size_t yl : ybar)
      if (dist(x, xi, yl) != kOne)
        throw Error(ErrorKind::Invalid,
                    "anchor tuples are not uniformly at distance 1");
  {
    std::set<std::size_t> yset(ybar.begin(), ybar.end());
    for (std::size_t zi : zbar)
      if (yset.count(zi))
        throw Error(ErrorKind::Invalid,
                    "the moved tuple must be disjoint from the anchor copy");
  }

  std::size_t n = (std::size_t)x.d.size();
  std::size_t m = xbar.size(), p = zbar.size();
  std::size_t total = n + m + p;
  auto xp = [&](std::size_t i) { return n + i; };
  auto zp = [&](std::size_t j) { return n + m + j; };

  std::vector<std::vector<Rat>> e(total, std::vector<Rat>(total, Rat(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) e[i][j] = dist(x, i, j);

  auto put = [&](std::size_t a, std::size_t b, const Rat& v) {
    e[a][b] = v;
    e[b][a] = v;
  };

  // Distances among the copies mirror the originals.
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j) put(xp(i), xp(j), dist(x, xbar[i], xbar[j]));
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      if (i != j) put(zp(i), zp(j), dist(x, zbar[i], zbar[j]));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < p; ++j)
      put(xp(i), zp(j), dist(x, xbar[i], zbar[j]));

  std::set<std::size_t> xset(xbar.begin(), xbar.end());
  std::set<std::size_t> zset(zbar.begin(), zbar.end());
  std::set<std::size_t> yset(ybar.begin(), ybar.end());

  // The inner span between the moved tuple and its copy.
  auto span = [&](std::size_t zi, std::size_t zj) {
    Rat best = kOne;
    for (std::size_t yl : ybar)
      best = std::min(best, cap1(dist(x, zi, yl) + dist(x, yl, zbar[zj])));
    return best;
  };

  for (std::size_t u = 0; u < n; ++u) {
    if (yset.count(u)) {
      for (std::size_t i = 0; i < m; ++i) put(u, xp(i), dist(x, xbar[i], u));
      for (std::size_t j = 0; j < p; ++j) put(u, zp(j), dist(x, zbar[j], u));
    } else if (xset.count(u)) {
      for (std::size_t i = 0; i < m; ++i) put(u, xp(i), kOne);
      for (std::size_t j = 0; j < p; ++j) put(u, zp(j), kOne);
    } else if (zset.count(u)) {
      for (std::size_t i = 0; i < m; ++i) put(u, xp(i), kOne);
      for (std::size_t j = 0; j < p; ++j) put(u, zp(j), span(u, j));
    }
  }

  // Everything else meets the new points through the anchor tuples.
  std::vector<std::size_t> anchors;
  for (std::size_t a = 0; a < n; ++a)
    if (xset.count(a) || zset.count(a) || yset.count(a)) anchors.push_back(a);
  for (std::size_t u = 0; u < n; ++u) {
    if (xset.count(u) || zset.count(u) || yset.count(u)) continue;
    for (std::size_t w = n; w < total; ++w) {
      Rat best = kOne;
      for (std::size_t a : anchors) best = std::min(best, cap1(e[u][a] + e[a][w]));
      put(u, w, best);
    }
  }

  Amalgam out{space_from(std::move(e), ErrorKind::Internal,
                         "amalgamation produced an invalid space"),
              {},
              {}};
  for (std::size_t i = 0; i < m; ++i) out.xprime.push_back(xp(i));
  for (std::size_t j = 0; j < p; ++j) out.zprime.push_back(zp(j));
  return out;
}

namespace {

// Assignment list built positionally; a pair is dropped when either side was
// already used, so the result stays a well-defined injection.
struct MapBuilder {
  std::set<std::size_t> dom, img;
  PartialIsometry out;
  void add(std::size_t a, std::size_t b) {
    if (dom.count(a) || img.count(b)) return;
    dom.insert(a);
    img.insert(b);
    out.map.push_back({a, b});
  }
  std::size_t at(std::size_t a) const {
    for (auto [u, v] : out.map)
      if (u == a) return v;
    throw Error(ErrorKind::Internal, "factor map misses a required point");
  }
};

}  // namespace

FourFactor four_factor_decomposition(const RationalMetricSpace& x,
                                     const std::vector<std::size_t>& xbar,
                                     const PartialIsometry& g) {
  check_indices(x, xbar, "xbar");
  validate_partial_isometry(x, g);
  std::map<std::size_t, std::size_t> gmap(g.map.begin(), g.map.end());
  std::vector<std::size_t> zbar;
  for (std::size_t xi : xbar) {
    auto it = gmap.find(xi);
    if (it == gmap.end())
      throw Error(ErrorKind::Invalid, "the map must cover the anchor tuple");
    zbar.push_back(it->second);
  }

  // Fresh copy of the anchor tuple at uniform distance 1 from the whole base.
  std::size_t n0 = (std::size_t)x.d.size();
  std::size_t m = xbar.size();
  std::vector<std::vector<Rat>> e(n0 + m, std::vector<Rat>(n0 + m, Rat(0)));
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t j = 0; j < n0; ++j) e[i][j] = dist(x, i, j);
  for (std::size_t l = 0; l < m; ++l) {
    for (std::size_t u = 0; u < n0; ++u) {
      e[u][n0 + l] = kOne;
      e[n0 + l][u] = kOne;
    }
    for (std::size_t k2 = 0; k2 < m; ++k2)
      if (l != k2) {
        e[n0 + l][n0 + k2] = dist(x, xbar[l], xbar[k2]);
        e[n0 + k2][n0 + l] = e[n0 + l][n0 + k2];
      }
  }
  RationalMetricSpace with_y = space_from(
      std::move(e), ErrorKind::Internal, "anchor copy broke the space");
  std::vector<std::size_t> ybar;
  for (std::size_t l = 0; l < m; ++l) ybar.push_back(n0 + l);

  Amalgam am = amalgamate_over(with_y, xbar, zbar, ybar);

  MapBuilder h, f, k;
  for (std::size_t l = 0; l < m; ++l) h.add(ybar[l], ybar[l]);
  for (std::size_t j = 0; j < m; ++j) h.add(zbar[j], am.zprime[j]);
  for (std::size_t i = 0; i < m; ++i) h.add(xbar[i], am.xprime[i]);
  for (std::size_t i = 0; i < m; ++i) f.add(xbar[i], xbar[i]);
  for (std::size_t j = 0; j < m; ++j) f.add(am.zprime[j], am.xprime[j]);
  for (std::size_t l = 0; l < m; ++l) k.add(ybar[l], ybar[l]);
  for (std::size_t i = 0; i < m; ++i) k.add(am.xprime[i], xbar[i]);

  FourFactor out{am.space, xbar,  ybar,  zbar, am.xprime,
                 am.zprime, g, h.out, f.out, k.out};

  try {
    validate_partial_isometry(out.space, out.h);
    validate_partial_isometry(out.space, out.f);
    validate_partial_isometry(out.space, out.k);
  } catch (const Error& e2) {
    throw Error(ErrorKind::Internal,
                std::string("stabilizer factor is not an isometry: ") + e2.what());
  }

  // The composite k.f.h.g must return every anchor point to itself.
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t a = zbar[i];
    std::size_t b = h.at(a);
    std::size_t c = f.at(b);
    std::size_t d = k.at(c);
    if (d != xbar[i])
      throw Error(ErrorKind::Internal, "four-factor certificate failed");
  }
  return out;
}

namespace {

struct SearchState {
  std::vector<std::vector<Rat>> e;  // current space
  std::vector<long> map;            // image index or -1
};

// New-point profiles on the grid, with the rows demanded by the pending
// assignment pinned; free rows range over their admissible windows.
void pinned_profiles(const std::vector<std::vector<Rat>>& e,
                     const std::map<std::size_t, Rat>& pinned, long denom,
                     std::vector<std::vector<Rat>>& out) {
  std::size_t n = e.size();
  std::vector<Rat> vals(n);
  auto feasible = [&](std::size_t i, const Rat& v) {
    for (std::size_t j = 0; j < i; ++j) {
      const Rat& d = e[i][j];
      if ((vals[j] - v).abs() > d) return false;
      if (v + vals[j] < d) return false;
    }
    return true;
  };
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      out.push_back(vals);
      return;
    }
    auto it = pinned.find(i);
    if (it != pinned.end()) {
      if (feasible(i, it->second)) {
        vals[i] = it->second;
        self(self, i + 1);
      }
      return;
    }
    for (long kk = 0; kk <= denom; ++kk) {
      Rat v(kk, denom);
      if (feasible(i, v)) {
        vals[i] = v;
        self(self, i + 1);
      }
    }
  };
  rec(rec, 0);
}

}  // namespace

ExtensionResult extend_partial_isometry(const RationalMetricSpace& x,
                                        const PartialIsometry& p, long denom,
                                        std::size_t budget) {
  if (denom < 1) throw Error(ErrorKind::Invalid, "denominator must be positive");
  validate_partial_isometry(x, p);
  std::size_t n0 = (std::size_t)x.d.size();
  if (budget < n0)
    throw Error(ErrorKind::Invalid, "budget smaller than the space itself");
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t j = i + 1; j < n0; ++j)
      if (!(dist(x, i, j) * Rat(denom)).is_integer())
        throw Error(ErrorKind::Invalid,
                    "distances do not live on the 1/denom grid");

  SearchState start;
  start.e.assign(n0, std::vector<Rat>(n0, Rat(0)));
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t j = 0; j < n0; ++j) start.e[i][j] = dist(x, i, j);
  start.map.assign(n0, -1);
  for (auto [a, b] : p.map) start.map[a] = (long)b;

  std::deque<SearchState> queue{start};
  std::size_t best_covered = 0;
  const std::size_t kExpansionCap = 200000;
  std::size_t expansions = 0;

  while (!queue.empty()) {
    if (++expansions > kExpansionCap)
      throw Error(ErrorKind::Budget,
                  "extension search exhausted its expansion budget; best state "
                  "covered " +
                      idx_str(best_covered) + " points");
    SearchState st = std::move(queue.front());
    queue.pop_front();
    std::size_t n = st.e.size();

    std::size_t u = n;
    std::size_t covered = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (st.map[i] >= 0)
        ++covered;
      else if (u == n)
        u = i;
    }
    best_covered = std::max(best_covered, covered);
    if (u == n) {
      // Total and injective on a finite set, hence a bijection.
      std::vector<std::vector<Rat>> e = st.e;
      ExtensionResult res{space_from(std::move(e), ErrorKind::Internal,
                                     "search state left the metric class"),
                          {}};
      for (long v : st.map) res.map.push_back((std::size_t)v);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (st.e[i][j] != st.e[res.map[i]][res.map[j]])
            throw Error(ErrorKind::Internal, "completed map distorts a distance");
      for (auto [a, b] : p.map)
        if (res.map[a] != b)
          throw Error(ErrorKind::Internal, "completed map forgot the input");
      return res;
    }

    std::vector<bool> taken(n, false);
    for (long v : st.map)
      if (v >= 0) taken[(std::size_t)v] = true;

    // Reuse an existing point when the distances line up.
    for (std::size_t v = 0; v < n; ++v) {
      if (taken[v]) continue;
      bool ok = true;
      for (std::size_t w = 0; w < n && ok; ++w)
        if (st.map[w] >= 0 && st.e[u][w] != st.e[v][(std::size_t)st.map[w]])
          ok = false;
      if (!ok) continue;
      SearchState next = st;
      next.map[u] = (long)v;
      queue.push_back(std::move(next));
    }

    // Otherwise grow the space by one grid point serving as the image.
    if (n < budget) {
      std::map<std::size_t, Rat> pinned;
      bool consistent = true;
      for (std::size_t w = 0; w < n; ++w)
        if (st.map[w] >= 0) {
          auto [it, fresh] =
              pinned.insert({(std::size_t)st.map[w], st.e[u][w]});
          if (!fresh && it->second != st.e[u][w]) consistent = false;
        }
      if (consistent) {
        std::vector<std::vector<Rat>> profiles;
        pinned_profiles(st.e, pinned, denom, profiles);
        for (const auto& prof : profiles) {
          SearchState next = st;
          for (std::size_t i = 0; i < n; ++i) {
            next.e[i].push_back(prof[i]);
          }
          next.e.emplace_back(prof);
          next.e.back().push_back(Rat(0));
          next.map[u] = (long)n;
          next.map.push_back(-1);
          queue.push_back(std::move(next));
        }
      }
    }
  }
  throw Error(ErrorKind::Budget,
              "no extension within a space of " + idx_str(budget) +
                  " points; best state covered " + idx_str(best_covered) +
                  " points");
}

std::vector<DistanceMatrix> oligomorphy_witness(std::size_t n, const Rat& eps) {
  if (n < 1) throw Error(ErrorKind::Invalid, "tuple length must be positive");
  return metric::epsilon_net((int)n, eps);
}

namespace {

struct Group {
  std::vector<std::vector<std::size_t>> el;
  std::vector<std::vector<std::size_t>> mul;  // mul[a][b] = index of el[a].el[b]
  std::vector<std::size_t> inv;
  std::size_t id = 0;
};

std::vector<std::size_t> compose_perm(const std::vector<std::size_t>& a,
                                      const std::vector<std::size_t>& b) {
  std::vector<std::size_t> c(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) c[i] = a[b[i]];
  return c;
}

Group build_group(const IsometryAction& action) {
  std::size_t n = (std::size_t)action.space.d.size();
  Group g;
  g.el = action.elements;
  if (g.el.empty()) throw Error(ErrorKind::Invalid, "empty element list");
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t a = 0; a < g.el.size(); ++a) {
    const auto& perm = g.el[a];
    if (perm.size() != n)
      throw Error(ErrorKind::Invalid, "element " + idx_str(a) + " has wrong size");
    std::vector<bool> seen(n, false);
    for (std::size_t v : perm) {
      if (v >= n || seen[v])
        throw Error(ErrorKind::Invalid,
                    "element " + idx_str(a) + " is not a permutation");
      seen[v] = true;
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (dist(action.space, perm[i], perm[j]) != dist(action.space, i, j))
          throw Error(ErrorKind::Invalid,
                      "element " + idx_str(a) + " is not an isometry");
    if (!index.insert({perm, a}).second)
      throw Error(ErrorKind::Invalid, "duplicate group elements");
  }
  bool have_id = false;
  g.mul.assign(g.el.size(), std::vector<std::size_t>(g.el.size()));
  g.inv.assign(g.el.size(), 0);
  for (std::size_t a = 0; a < g.el.size(); ++a) {
    bool is_id = true;
    for (std::size_t i = 0; i < n; ++i)
      if (g.el[a][i] != i) is_id = false;
    if (is_id) {
      g.id = a;
      have_id = true;
    }
  }
  if (!have_id) throw Error(ErrorKind::Invalid, "identity element missing");
  for (std::size_t a = 0; a < g.el.size(); ++a)
    for (std::size_t b = 0; b < g.el.size(); ++b) {
      auto it = index.find(compose_perm(g.el[a], g.el[b]));
      if (it == index.end())
        throw Error(ErrorKind::Invalid, "element list is not closed");
      g.mul[a][b] = it->second;
      if (it->second == g.id && g.el[a] != g.el[g.id]) g.inv[a] = b;
    }
  for (std::size_t a = 0; a < g.el.size(); ++a) {
    if (a == g.id) {
      g.inv[a] = a;
      continue;
    }
    if (g.mul[a][g.inv[a]] != g.id)
      throw Error(ErrorKind::Invalid, "inverse missing for element " + idx_str(a));
  }
  return g;
}

}  // namespace

WidthDecomposition width_decomposition(const IsometryAction& action,
                                       const std::vector<std::size_t>& xbar,
                                       const Rat& eps) {
  if (eps.sign() <= 0) throw Error(ErrorKind::Invalid, "eps must be positive");
  if (xbar.empty()) throw Error(ErrorKind::Invalid, "anchor tuple is empty");
  check_indices(action.space, xbar, "xbar");
  Group g = build_group(action);
  std::size_t n = (std::size_t)action.space.d.size();
  std::size_t len = xbar.size();

  double combos = 1;
  for (std::size_t i = 0; i < 2 * len; ++i) combos *= (double)n;
  if (combos > 4e6)
    throw Error(ErrorKind::Budget, "tuple-pair enumeration too large");

  auto tuple_dist = [&](const std::vector<std::size_t>& a,
                        const std::vector<std::size_t>& b) {
    Rat best(0);
    for (std::size_t i = 0; i < a.size(); ++i)
      best = std::max(best, dist(action.space, a[i], b[i]));
    return best;
  };
  auto act = [&](std::size_t e, const std::vector<std::size_t>& t) {
    std::vector<std::size_t> out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = g.el[e][t[i]];
    return out;
  };
  // Element order for searches: identity first, then list order.
  std::vector<std::size_t> elems{g.id};
  for (std::size_t a = 0; a < g.el.size(); ++a)
    if (a != g.id) elems.push_back(a);

  Rat half = eps / Rat(2);

  WidthDecomposition out;
  for (std::size_t a : elems)
    if (tuple_dist(xbar, act(a, xbar)) < eps) out.u.push_back(a);

  // All tuples of the given length, lexicographically.
  std::vector<std::vector<std::size_t>> tuples;
  {
    std::vector<std::size_t> cur(len, 0);
    while (true) {
      tuples.push_back(cur);
      std::size_t i = len;
      while (i > 0 && ++cur[i - 1] == n) cur[--i] = 0;
      if (i == 0) break;
    }
  }

  // Orbit representatives of tuple pairs under the diagonal action, then the
  // proof's A' -> B -> B' refinement with recorded witnesses.
  std::set<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> seen;
  std::vector<std::vector<std::size_t>> b_tuples;
  std::vector<std::size_t> b_g, b_h;  // witnesses g_b in U, h_b in G per entry
  std::set<std::vector<std::size_t>> b_dedup;
  for (const auto& a1 : tuples)
    for (const auto& a2 : tuples) {
      if (seen.count({a1, a2})) continue;
      for (std::size_t e = 0; e < g.el.size(); ++e)
        seen.insert({act(e, a1), act(e, a2)});
      // A' membership: some element carries the first half near the anchor.
      std::size_t ga = g.el.size();
      for (std::size_t e : elems)
        if (tuple_dist(xbar, act(e, a1)) < half) {
          ga = e;
          break;
        }
      if (ga == g.el.size()) continue;
      std::vector<std::size_t> b = act(ga, a2);
      if (!b_dedup.insert(b).second) continue;
      // B' witnesses: g_b in U and h_b with g_b b close to h_b xbar.
      bool found = false;
      for (std::size_t h : elems) {
        for (std::size_t u2 : out.u) {
          if (tuple_dist(act(u2, b), act(h, xbar)) < half) {
            b_tuples.push_back(b);
            b_g.push_back(u2);
            b_h.push_back(h);
            found = true;
            break;
          }
        }
        if (found) break;
      }
    }

  std::set<std::size_t> hset;
  for (std::size_t h : b_h)
    if (hset.insert(h).second) out.h.push_back(h);

  // Certificate: factor every element through the recorded witnesses.
  for (std::size_t f = 0; f < g.el.size(); ++f) {
    auto fx = act(f, xbar);
    bool done = false;
    for (std::size_t bi = 0; bi < b_tuples.size() && !done; ++bi)
      for (std::size_t u1 : out.u) {
        if (tuple_dist(fx, act(u1, b_tuples[bi])) < half) {
          std::size_t u2 = b_g[bi], h = b_h[bi];
          std::size_t u3 = g.mul[g.mul[g.mul[g.inv[f]][u1]][g.inv[u2]]][h];
          if (tuple_dist(xbar, act(u3, xbar)) >= eps)
            throw Error(ErrorKind::Internal, "residual factor left the ball");
          std::size_t recon =
              g.mul[g.mul[g.mul[u1][g.inv[u2]]][h]][g.inv[u3]];
          if (recon != f)
            throw Error(ErrorKind::Internal, "width factors do not compose back");
          out.certificate.push_back({f, u1, u2, h, u3});
          done = true;
          break;
        }
      }
    if (!done) {
      std::string t;
      for (std::size_t v : fx) t += (t.empty() ? "" : ", ") + idx_str(v);
      throw Error(ErrorKind::Check,
                  "eps too small: no translated anchor within eps/2 of (" + t +
                      ")");
    }
  }
  return out;
}

}  // namespace obkit::urysohn
