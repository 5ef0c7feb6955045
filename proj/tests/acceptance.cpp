// Release gate.  Each criterion runs from its own fixed seed, checks its
// property exactly (no tolerances anywhere), and prints one pass/fail line.
// The exit code is the number of failed criteria.  An optional argv[1]
// restricts the run to a single criterion number.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "obkit/circular.hpp"
#include "obkit/error.hpp"
#include "obkit/group.hpp"
#include "obkit/metric.hpp"
#include "obkit/rng.hpp"
#include "obkit/tower.hpp"
#include "obkit/tree.hpp"
#include "obkit/unitary.hpp"
#include "obkit/urysohn.hpp"
#include "util.hpp"

namespace {

using namespace obkit;
using metric::DistanceMatrix;
using metric::GeodesicPoint;
using metric::RationalMetricSpace;
using tower::Elem;
using unitary::FinitaryOperator;
using unitary::FinVector;
using Perm = std::vector<std::size_t>;

const std::uint64_t kSeed = 20260822;

template <class... Ts>
std::string cat(Ts&&... parts) {
  std::ostringstream o;
  (o << ... << parts);
  return o.str();
}

struct Res {
  bool ok;
  std::string detail;
};

Res fail(std::string s) { return {false, std::move(s)}; }

Rat rpow(const Rat& base, long exp) {
  Rat out(1);
  for (long i = 0; i < exp; ++i) out *= base;
  return out;
}

RationalMetricSpace as_space(DistanceMatrix m) {
  bool s = m.strict();
  return RationalMetricSpace::make(std::move(m), s);
}

// Two copies of a at uniform cross distance 1.
RationalMetricSpace two_copies(const DistanceMatrix& a) {
  int n = a.size();
  std::vector<std::vector<Rat>> e(2 * (std::size_t)n,
                                  std::vector<Rat>(2 * (std::size_t)n, Rat(1)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      e[(std::size_t)i][(std::size_t)j] = a.at(i, j);
      e[(std::size_t)(n + i)][(std::size_t)(n + j)] = a.at(i, j);
    }
  for (int i = 0; i < 2 * n; ++i) e[(std::size_t)i][(std::size_t)i] = Rat(0);
  return as_space(DistanceMatrix::validated(std::move(e)));
}

// The four distance values with denominator at most 3.
const std::vector<Rat>& small_grid() {
  static const std::vector<Rat> v{Rat(1, 3), Rat(1, 2), Rat(2, 3), Rat(1)};
  return v;
}

Perm identity_perm(std::size_t n) {
  Perm g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = i;
  return g;
}

// Center 0 with b branches, each a path of p vertices.
tree::SimplicialTree star_tree(std::size_t b, std::size_t p) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t j = 0; j < b; ++j)
    for (std::size_t s = 0; s < p; ++s) {
      std::size_t v = 1 + j * p + s;
      e.push_back({s == 0 ? 0 : v - 1, v});
    }
  return tree::SimplicialTree::validated(1 + b * p, e);
}

Perm star_rotation(std::size_t b, std::size_t p, std::size_t shift) {
  Perm g(1 + b * p);
  g[0] = 0;
  for (std::size_t j = 0; j < b; ++j)
    for (std::size_t s = 0; s < p; ++s)
      g[1 + j * p + s] = 1 + ((j + shift) % b) * p + s;
  return g;
}

Perm star_branch_swap(std::size_t b, std::size_t p, std::size_t j1,
                      std::size_t j2) {
  Perm g = identity_perm(1 + b * p);
  for (std::size_t s = 0; s < p; ++s)
    std::swap(g[1 + j1 * p + s], g[1 + j2 * p + s]);
  return g;
}

tree::FreeWord random_word(Rng& rng, int len) {
  std::vector<int> v;
  const int cand[4] = {1, -1, 2, -2};
  while ((int)v.size() < len) {
    int l = cand[rng.below(4)];
    if (!v.empty() && v.back() == -l) continue;
    v.push_back(l);
  }
  return tree::FreeWord{v};
}

tree::FreeWord wpow(int letter, int p) {
  std::vector<int> v((std::size_t)p, letter);
  return tree::FreeWord{v};
}

tree::FreeWord conj(const tree::FreeWord& w, const tree::FreeWord& u) {
  return tree::wmul(tree::wmul(u, w), tree::winv(u));
}

FinitaryOperator opq(long lo, std::vector<std::vector<Rat>> cols) {
  std::vector<std::vector<Elem>> c;
  for (auto& col : cols) {
    c.emplace_back();
    for (auto& x : col) c.back().push_back(Elem(x));
  }
  return FinitaryOperator::from_columns(lo, std::move(c));
}

FinitaryOperator random_block(Rng& rng, long lo, long size) {
  if (size == 1) return opq(lo, {{Rat(rng.coin() ? 1 : -1)}});
  switch (rng.below(4)) {
    case 0: return opq(lo, {{Rat(3, 5), Rat(4, 5)}, {Rat(-4, 5), Rat(3, 5)}});
    case 1: return opq(lo, {{Rat(0), Rat(1)}, {Rat(1), Rat(0)}});
    case 2: return opq(lo, {{Rat(1), Rat(0)}, {Rat(0), Rat(-1)}});
    default: return opq(lo, {{Rat(-3, 5), Rat(4, 5)}, {Rat(4, 5), Rat(3, 5)}});
  }
}

// Orthogonal block of an exact size, pasted from small random pieces.
FinitaryOperator random_sized(Rng& rng, long lo, long size) {
  std::vector<FinitaryOperator> parts;
  long total = 0;
  while (total < size) {
    long piece = std::min<long>(1 + (long)rng.below(2), size - total);
    parts.push_back(random_block(rng, lo + total, piece));
    total += piece;
  }
  return unitary::block_paste(parts);
}

FinitaryOperator rebase(const FinitaryOperator& b, long lo) {
  return FinitaryOperator::from_columns(lo, b.columns());
}

bool op_identity(const FinitaryOperator& q) {
  return q == FinitaryOperator::identity();
}

std::vector<std::size_t> sorted_of(const std::set<std::size_t>& s) {
  return std::vector<std::size_t>(s.begin(), s.end());
}

std::set<std::size_t> cube_of(const group::FiniteGroup& g,
                              const std::set<std::size_t>& v) {
  std::set<std::size_t> out;
  for (std::size_t a : v)
    for (std::size_t b : v)
      for (std::size_t c : v) out.insert(g.op(a, g.op(b, c)));
  return out;
}

const std::vector<std::pair<std::string, group::FiniteGroup>>& corpus() {
  static const auto groups = [] {
    std::vector<std::pair<std::string, group::FiniteGroup>> v;
    for (std::size_t n : {2, 3, 4, 6, 8, 12, 24})
      v.push_back({cat("C", n), group::cyclic_group(n)});
    v.push_back({"C2xC2", group::direct_product(group::cyclic_group(2),
                                                group::cyclic_group(2))});
    v.push_back({"C2xC6", group::direct_product(group::cyclic_group(2),
                                                group::cyclic_group(6))});
    v.push_back({"C3xC3", group::direct_product(group::cyclic_group(3),
                                                group::cyclic_group(3))});
    v.push_back({"S3", group::symmetric_group(3)});
    v.push_back({"S4", group::symmetric_group(4)});
    v.push_back({"D4", group::dihedral_group(4)});
    v.push_back({"D6", group::dihedral_group(6)});
    v.push_back({"D12", group::dihedral_group(12)});
    return v;
  }();
  return groups;
}

// Symmetric identity neighbourhoods grown by cubes, ending at the group.
group::Filtration random_filtration(Rng& rng, const group::FiniteGroup& g) {
  std::set<std::size_t> cur{g.id};
  std::size_t s = 1 + rng.below(g.size() - 1);
  cur.insert(s);
  cur.insert(g.inv[s]);
  std::vector<std::vector<std::size_t>> sets{sorted_of(cur)};
  while (cur.size() < g.size() && sets.size() < 10) {
    auto nx = cube_of(g, cur);
    if (nx == cur) {
      for (std::size_t cand = 0; cand < g.size(); ++cand)
        if (!nx.count(cand)) {
          nx.insert(cand);
          nx.insert(g.inv[cand]);
          break;
        }
    }
    cur = nx;
    sets.push_back(sorted_of(cur));
  }
  if (cur.size() < g.size()) {
    std::set<std::size_t> all;
    for (std::size_t i = 0; i < g.size(); ++i) all.insert(i);
    sets.push_back(sorted_of(all));
  }
  long first = -(long)rng.below(3);
  return group::Filtration::validated(g, first, sets);
}

// Ascending distinct grid points k/den in [0, 1).
std::vector<Rat> grid_points(Rng& rng, std::size_t count, long den) {
  std::set<long> ks;
  while (ks.size() < count) ks.insert((long)rng.below((std::uint64_t)den));
  std::vector<Rat> out;
  for (long k : ks) out.push_back(Rat(k, den));
  return out;
}

// Distinct points strictly inside the arc from start to end, ascending.
std::vector<Rat> arc_points(Rng& rng, std::size_t count, const Rat& start,
                            const Rat& end) {
  Rat span = circular::mod1(end - start);
  if (span.is_zero()) span = Rat(1);
  std::set<long> ks;
  while (ks.size() < count) ks.insert(1 + (long)rng.below(96));
  std::vector<Rat> out;
  for (long k : ks) out.push_back(circular::mod1(start + span * Rat(k, 97)));
  return out;
}

// ---------------------------------------------------------- criterion 1 --
// At least 500 random pairs on 2..5 points, denominators up to 8: the sup
// distance bounds the coupling distance from below, n/2 times it from
// above, and the glue construction's trace (exactly n*sup/2) from above.

Res crit1() {
  Rng rng(kSeed ^ 0x01);
  const long rounds = 520;
  auto t0 = std::chrono::steady_clock::now();
  for (long round = 0; round < rounds; ++round) {
    int n = rng.range(2, 5);
    long den = 1 + (long)rng.below(8);
    auto a = testutil::random_premetric(rng, n, den);
    auto b = testutil::random_premetric(rng, n, den);
    Rat sup = metric::sup_distance(a, b);
    auto cr = metric::d1_distance(a, b);
    if (sup > cr.value)
      return fail(cat("round ", round, ": sup exceeds the coupling distance"));
    if (Rat(2) * cr.value > Rat(n) * sup)
      return fail(cat("round ", round, ": coupling distance above (n/2) sup"));
    auto glued = metric::glue_premetric(a, b, sup);
    Rat tr = metric::glue_trace(glued);
    if (Rat(2) * tr != Rat(n) * sup)
      return fail(cat("round ", round, ": glue trace is not n sup / 2"));
    if (cr.value > tr)
      return fail(cat("round ", round, ": coupling distance above the glue "
                      "trace"));
    auto cm = metric::coupled_matrix(a, b, cr.coupling);
    if (cm.size() != 2 * n)
      return fail(cat("round ", round, ": witness coupling has wrong size"));
    Rat diag(0);
    for (int i = 0; i < n; ++i) diag += cr.coupling[(std::size_t)i][(std::size_t)i];
    if (diag != cr.value)
      return fail(cat("round ", round, ": witness trace differs from the "
                      "optimum"));
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= 120.0)
    return fail(cat(rounds, " pairs took ", (long)secs, "s, over the 2 minute "
                    "limit"));
  return {true, cat(rounds, " pairs: sup <= coupling <= (n/2) sup and "
                    "coupling <= glue trace = n sup/2, witnesses exact")};
}

// ---------------------------------------------------------- criterion 2 --
// Every strict space on up to 5 points with denominators up to 3,
// exhaustively: the geodesic extension satisfies the metric axioms on
// sampled points, embeds the originals isometrically, and realizes every
// sampled rational intermediate distance exactly.

std::string check_geodesic(const DistanceMatrix& m, bool full) {
  const int n = m.size();
  auto g = [&](const GeodesicPoint& p, const GeodesicPoint& q) {
    return metric::geodesic_distance(m, p, q);
  };
  std::vector<GeodesicPoint> probes;
  for (int i = 0; i < n; ++i) probes.push_back(GeodesicPoint::original(i));
  if (n >= 2) {
    Rat d01 = m.at(0, 1);
    probes.push_back(GeodesicPoint::interior(m, 0, 1, d01 / Rat(3)));
    probes.push_back(GeodesicPoint::interior(m, 0, 1, Rat(2) * d01 / Rat(3)));
    if (n >= 3 && full)
      probes.push_back(GeodesicPoint::interior(m, 1, 2, m.at(1, 2) / Rat(2)));
  }

  if (full) {
    std::size_t np = probes.size();
    std::vector<std::vector<Rat>> d(np, std::vector<Rat>(np));
    for (std::size_t i = 0; i < np; ++i)
      for (std::size_t j = 0; j < np; ++j) d[i][j] = g(probes[i], probes[j]);
    for (std::size_t i = 0; i < np; ++i) {
      if (!d[i][i].is_zero()) return "nonzero self distance";
      for (std::size_t j = i + 1; j < np; ++j)
        if (d[i][j] != d[j][i]) return "asymmetric probe distance";
    }
    for (std::size_t i = 0; i < np; ++i)
      for (std::size_t j = 0; j < np; ++j)
        for (std::size_t k = 0; k < np; ++k)
          if (d[i][k] > d[i][j] + d[j][k]) return "triangle violated on probes";
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (d[(std::size_t)i][(std::size_t)j] != m.at(i, j))
          return "originals not embedded isometrically";
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Rat v = g(probes[(std::size_t)i], probes[(std::size_t)j]);
        if (v != m.at(i, j)) return "originals not embedded isometrically";
      }
    const GeodesicPoint& pa = probes[(std::size_t)n];
    const GeodesicPoint& pb = probes[(std::size_t)n + 1];
    Rat d01 = m.at(0, 1);
    Rat t = d01 / Rat(3);
    if (g(probes[0], pa) != t || g(pa, probes[0]) != t)
      return "interior point off its segment offset";
    if (g(pa, probes[1]) != d01 - t) return "interior far endpoint off";
    if (!g(pa, pa).is_zero()) return "nonzero interior self distance";
    if (g(pa, pb) != t) return "same-segment interior distance off";
    Rat a2 = g(probes[2], pa);
    Rat a0 = g(probes[2], probes[0]);
    if (a2 > a0 + t || a2 < (a0 - t).abs())
      return "triangle violated through an endpoint";
  }

  if (n >= 2) {
    Rat d01 = m.at(0, 1);
    auto realize = [&](const Rat& t) -> bool {
      GeodesicPoint pt = GeodesicPoint::interior(m, 0, 1, t);
      return g(probes[0], pt) == t && g(pt, probes[1]) == d01 - t;
    };
    for (long k = full ? 0 : 1; k <= (full ? 4 : 3); ++k)
      if (!realize(d01 * Rat(k, 4)))
        return cat("intermediate distance ", k, "/4 not realized");
    if (full)
      for (long k = 1; k <= 2; ++k)
        if (!realize(d01 * Rat(k, 3)))
          return cat("intermediate distance ", k, "/3 not realized");
  }
  return "";
}

Res crit2() {
  long spaces = 0;
  std::string bad;
  for (int n = 1; n <= 5; ++n)
    metric::for_each_premetric(n, small_grid(), [&](const DistanceMatrix& m) {
      if (!bad.empty()) return;
      ++spaces;
      std::string err = check_geodesic(m, n <= 4);
      if (!err.empty()) bad = cat("space ", spaces, " (n=", n, "): ", err);
    });
  if (!bad.empty()) return fail(bad);
  if (spaces != 315781)
    return fail(cat("enumeration produced ", spaces, " spaces instead of "
                    "315781"));
  return {true, cat(spaces, " spaces exhaustively: axioms, embedding, and "
                    "exact realization of sampled intermediates")};
}

// ---------------------------------------------------------- criterion 3 --
// At least 200 random tuples (X, anchors, g) with |X| up to 8: the
// four-factor certificate composes to fix the anchors pointwise, every
// factor is a partial isometry, and the amalgam stays within 8 + 3m points.

Res crit3() {
  Rng rng(kSeed ^ 0x03);
  const long rounds = 220;
  for (long round = 0; round < rounds; ++round) {
    int na = rng.range(1, 4);
    auto x = two_copies(testutil::random_premetric(rng, na, 4, true));
    std::size_t mmax = na < 3 ? (std::size_t)na : 3;
    std::size_t m = 1 + rng.below((std::uint64_t)mmax);
    std::vector<std::size_t> base((std::size_t)na);
    for (std::size_t i = 0; i < base.size(); ++i) base[i] = i;
    rng.shuffle(base);
    std::vector<std::size_t> xbar(base.begin(), base.begin() + (long)m);

    urysohn::PartialIsometry g;
    bool ident = rng.coin();
    for (std::size_t xi : xbar)
      g.map.push_back({xi, ident ? xi : xi + (std::size_t)na});
    urysohn::validate_partial_isometry(x, g);

    auto ff = urysohn::four_factor_decomposition(x, xbar, g);
    std::size_t sz = (std::size_t)ff.space.d.size();
    if (sz != 2 * (std::size_t)na + 3 * m)
      return fail(cat("round ", round, ": amalgam size ", sz));
    if (sz > 8 + 3 * m)
      return fail(cat("round ", round, ": amalgam exceeds 8 + 3m points"));
    auto chase = [&](const urysohn::PartialIsometry& p,
                     std::size_t v) -> std::optional<std::size_t> {
      for (const auto& [a, b] : p.map)
        if (a == v) return b;
      return std::nullopt;
    };
    for (std::size_t xi : ff.xbar) {
      auto s = chase(ff.g, xi);
      if (s) s = chase(ff.h, *s);
      if (s) s = chase(ff.f, *s);
      if (s) s = chase(ff.k, *s);
      if (!s || *s != xi)
        return fail(cat("round ", round, ": composite misses anchor ", xi));
    }
    for (std::size_t y : ff.ybar)
      if (chase(ff.h, y) != y || chase(ff.k, y) != y)
        return fail(cat("round ", round, ": h or k moves a fresh anchor"));
    for (std::size_t xi : ff.xbar)
      if (chase(ff.f, xi) != xi)
        return fail(cat("round ", round, ": f moves the anchor tuple"));
    try {
      urysohn::validate_partial_isometry(ff.space, ff.g);
      urysohn::validate_partial_isometry(ff.space, ff.h);
      urysohn::validate_partial_isometry(ff.space, ff.f);
      urysohn::validate_partial_isometry(ff.space, ff.k);
    } catch (const Error& err) {
      return fail(cat("round ", round, ": factor not a partial isometry: ",
                      err.what()));
    }
  }
  return {true, cat(rounds, " certificates: composite fixes the anchors, "
                    "factors exact, sizes within 8 + 3m")};
}

// ---------------------------------------------------------- criterion 4 --
// Every strict space on up to 4 points with denominators up to 3, and every
// partial isometry of it: the search completes the map to a total isometry
// of a space of at most 40 points on the sixths grid.  A budget throw is a
// failure.

void for_each_partial_isometry(
    const DistanceMatrix& m,
    const std::function<void(const urysohn::PartialIsometry&)>& fn) {
  const std::size_t n = (std::size_t)m.size();
  std::vector<long> assign(n, -1);
  std::vector<bool> used(n, false);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      urysohn::PartialIsometry p;
      for (std::size_t a = 0; a < n; ++a)
        if (assign[a] >= 0) p.map.push_back({a, (std::size_t)assign[a]});
      fn(p);
      return;
    }
    rec(i + 1);
    for (std::size_t v = 0; v < n; ++v) {
      if (used[v]) continue;
      bool ok = true;
      for (std::size_t k = 0; k < i && ok; ++k)
        if (assign[k] >= 0 &&
            m.at((int)i, (int)k) != m.at((int)v, (int)assign[k]))
          ok = false;
      if (!ok) continue;
      assign[i] = (long)v;
      used[v] = true;
      rec(i + 1);
      used[v] = false;
      assign[i] = -1;
    }
  };
  rec(0);
}

Res crit4() {
  std::vector<DistanceMatrix> spaces;
  for (int n = 1; n <= 4; ++n)
    metric::for_each_premetric(n, small_grid(), [&](const DistanceMatrix& m) {
      spaces.push_back(m);
    });

  std::atomic<std::size_t> next{0};
  std::atomic<long> instances{0};
  std::atomic<long> grown{0};
  std::mutex mu;
  std::vector<std::string> errs;
  auto worker = [&] {
    for (;;) {
      std::size_t idx = next.fetch_add(1);
      if (idx >= spaces.size()) return;
      const DistanceMatrix& m = spaces[idx];
      auto x = RationalMetricSpace::make(m, true);
      for_each_partial_isometry(m, [&](const urysohn::PartialIsometry& p) {
        instances.fetch_add(1);
        std::string err;
        try {
          auto res = urysohn::extend_partial_isometry(x, p, 6, 40);
          std::size_t rn = (std::size_t)res.space.d.size();
          if (rn > 40) err = "result space over budget";
          if (rn > (std::size_t)m.size()) grown.fetch_add(1);
          std::set<std::size_t> image(res.map.begin(), res.map.end());
          if (err.empty() && (res.map.size() != rn || image.size() != rn))
            err = "completion is not a bijection";
          for (const auto& [a, b] : p.map)
            if (err.empty() && res.map[a] != b) err = "input pair forgotten";
          for (int i = 0; err.empty() && i < m.size(); ++i)
            for (int j = 0; err.empty() && j < m.size(); ++j)
              if (res.space.d.at(i, j) != m.at(i, j)) err = "base modified";
          for (std::size_t i = 0; err.empty() && i < rn; ++i)
            for (std::size_t j = 0; err.empty() && j < rn; ++j)
              if (res.space.d.at((int)i, (int)j) !=
                  res.space.d.at((int)res.map[i], (int)res.map[j]))
                err = "completion distorts a distance";
        } catch (const Error& e) {
          err = cat(error_kind_name(e.kind()), ": ", e.what());
        }
        if (!err.empty()) {
          std::lock_guard<std::mutex> lk(mu);
          errs.push_back(cat("space ", idx, " with ", p.map.size(),
                             " pairs: ", err));
        }
      });
    }
  };
  unsigned hw = std::thread::hardware_concurrency();
  std::size_t nt = hw == 0 ? 1 : (hw > 8 ? 8 : hw);
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < nt; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (!errs.empty()) {
    std::sort(errs.begin(), errs.end());
    return fail(cat(errs.size(), " of ", instances.load(), " extensions "
                    "failed; first: ", errs.front()));
  }
  return {true, cat(instances.load(), " partial isometries over ",
                    spaces.size(), " spaces all completed (", grown.load(),
                    " needed extra points, budget 40)")};
}

// ---------------------------------------------------------- criterion 5 --
// At least 1000 applicable tree instances: the disjoint-axis translation
// identity, the crossing-axes max identity, common fixed vertices for
// elliptic pairs, the triple-intersection fixed point, and conjugation
// invariance of the displacement norm.

Res crit5() {
  Rng rng(kSeed ^ 0x05);
  long disjoint = 0;

  long tries = 0;
  while (disjoint < 150) {
    if (++tries > 2500)
      return fail(cat("only ", disjoint, " disjoint-axis instances in ",
                      tries, " tries"));
    auto g = conj(wpow(1, 1 + (int)rng.below(3)), random_word(rng, (int)rng.below(3)));
    auto h = conj(wpow(2, 1 + (int)rng.below(3)), random_word(rng, (int)rng.below(3)));
    auto cd = tree::cm_disjoint_identity(g, h);
    if (!cd.applicable) continue;
    ++disjoint;
    if (cd.norm_g != tree::classify_word(g).norm ||
        cd.norm_h != tree::classify_word(h).norm)
      return fail(cat("try ", tries, ": reported norms disagree with the "
                      "classification"));
    if (cd.norm_product != tree::classify_word(tree::wmul(g, h)).norm)
      return fail(cat("try ", tries, ": product norm disagrees"));
    if (cd.distance < 1)
      return fail(cat("try ", tries, ": disjoint axes at distance ",
                      cd.distance));
    if (cd.norm_product != cd.norm_g + cd.norm_h + 2 * cd.distance)
      return fail(cat("try ", tries, ": translation identity off: ",
                      cd.norm_product, " vs ", cd.norm_g, "+", cd.norm_h,
                      "+2*", cd.distance));
  }

  const long crossing = 320;
  for (long round = 0; round < crossing; ++round) {
    auto u = random_word(rng, (int)rng.below(3));
    auto g = conj(wpow(1, 1 + (int)rng.below(3)), u);
    auto h = conj(wpow(2, 1 + (int)rng.below(3)), u);
    auto cm = tree::cm_max_identity(g, h);
    if (!cm.applicable)
      return fail(cat("round ", round, ": shared-vertex axes not applicable: ",
                      cm.reason));
    if (cm.norm_product != tree::classify_word(tree::wmul(g, h)).norm ||
        cm.norm_product_inv !=
            tree::classify_word(tree::wmul(g, tree::winv(h))).norm)
      return fail(cat("round ", round, ": product norms disagree"));
    long mx = cm.norm_product > cm.norm_product_inv ? cm.norm_product
                                                    : cm.norm_product_inv;
    if (mx != cm.norm_g + cm.norm_h)
      return fail(cat("round ", round, ": max identity off: ", mx, " vs ",
                      cm.norm_g + cm.norm_h));
  }

  const long elliptic = 220;
  for (long round = 0; round < elliptic; ++round) {
    std::size_t b = 3 + rng.below(5);
    std::size_t p = 1 + rng.below(8);
    auto t = star_tree(b, p);
    std::size_t j1 = rng.below(b);
    std::size_t j2 = (j1 + 1 + rng.below(b - 1)) % b;
    std::size_t j3 = (j2 + 1 + rng.below(b - 1)) % b;
    auto g = star_branch_swap(b, p, j1, j2);
    auto h = star_branch_swap(b, p, j2, j3);
    auto sw = tree::serre_common_vertex(t, g, h);
    if (!sw.applicable)
      return fail(cat("round ", round, ": elliptic pair not applicable: ",
                      sw.reason));
    auto gh = tree::perm_compose(g, h);
    if (g[sw.common] != sw.common || h[sw.common] != sw.common ||
        gh[sw.common] != sw.common)
      return fail(cat("round ", round, ": reported vertex ", sw.common,
                      " is not fixed by g, h, and gh"));
  }

  const long triple = 220;
  for (long round = 0; round < triple; ++round) {
    std::size_t b = 3 + rng.below(5);
    std::size_t p = 1 + rng.below(8);
    auto t = star_tree(b, p);
    auto pick_swap = [&] {
      std::size_t j1 = rng.below(b);
      std::size_t j2 = (j1 + 1 + rng.below(b - 1)) % b;
      return star_branch_swap(b, p, j1, j2);
    };
    auto k0 = pick_swap(), k1 = pick_swap(), k2 = pick_swap();
    auto mw = tree::macpherson_fixed_point(t, k0, k1, k2);
    if (!mw.applicable)
      return fail(cat("round ", round, ": elliptic triple not applicable: ",
                      mw.reason));
    auto w = tree::perm_compose(
        k0, tree::perm_compose(k1, tree::perm_compose(k0, k2)));
    if (w[mw.vertex] != mw.vertex)
      return fail(cat("round ", round, ": k0k1k0k2 moves the reported "
                      "vertex"));
  }

  const long conjrounds = 320;
  for (long round = 0; round < conjrounds; ++round) {
    if (rng.coin()) {
      auto g = random_word(rng, 1 + (int)rng.below(4));
      auto h = random_word(rng, (int)rng.below(3));
      if (tree::classify_word(conj(g, h)).norm != tree::classify_word(g).norm)
        return fail(cat("round ", round, ": word conjugation changes the "
                        "norm"));
    } else {
      std::size_t b = 3 + rng.below(4);
      std::size_t p = 1 + rng.below(4);
      auto t = star_tree(b, p);
      auto r = star_rotation(b, p, 1 + rng.below(b - 1));
      std::size_t j1 = rng.below(b);
      std::size_t j2 = (j1 + 1 + rng.below(b - 1)) % b;
      auto s = star_branch_swap(b, p, j1, j2);
      auto rc = tree::perm_compose(
          s, tree::perm_compose(r, tree::perm_inverse(s)));
      if (tree::classify_perm(t, rc).norm != tree::classify_perm(t, r).norm)
        return fail(cat("round ", round, ": perm conjugation changes the "
                        "norm"));
    }
  }

  long applicable = disjoint + crossing + elliptic + triple + conjrounds;
  return {true, cat(applicable, " applicable instances (", disjoint,
                    " disjoint-axis, ", crossing, " crossing, ", elliptic,
                    " common-vertex, ", triple, " triple, ", conjrounds,
                    " conjugation), all identities exact")};
}

// ---------------------------------------------------------- criterion 6 --
// At least 200 orthonormalizations with exactly-identity Gram matrices,
// plus extension, window-scan, and two-window factorization certificates,
// all exact.

Res crit6() {
  Rng rng(kSeed ^ 0x06);

  const long gs_rounds = 220;
  for (long round = 0; round < gs_rounds; ++round) {
    std::size_t count = 1 + rng.below(4);
    long width = (long)count + (long)rng.below(2);
    if (width > 5) width = 5;
    long lo = -(long)rng.below(3);
    std::vector<FinVector> vs;
    for (std::size_t v = 0; v < count; ++v) {
      FinVector x;
      for (long i = 0; i < width; ++i)
        x.set(lo + i, Elem(rng.grid(-4, 4, 1 + (long)rng.below(3))));
      if (v == 0 && rng.below(4) == 0)
        x = x.scaled(tower::sqrt(Elem(Rat(2))));
      if (x.is_zero()) x = FinVector::basis(lo);
      vs.push_back(x);
    }
    auto basis = unitary::gram_schmidt(vs);
    Elem one{Rat(1)}, zero{Rat(0)};
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = i; j < basis.size(); ++j)
        if (inner(basis[i], basis[j]) != (i == j ? one : zero))
          return fail(cat("round ", round, ": Gram entry (", i, ",", j,
                          ") not exact"));
    for (const auto& v : vs) {
      FinVector resid = v;
      for (const auto& b : basis) resid = resid - b.scaled(inner(v, b));
      if (!resid.is_zero())
        return fail(cat("round ", round, ": input does not reconstruct"));
    }
  }

  const long ext_rounds = 120;
  for (long round = 0; round < ext_rounds; ++round) {
    std::vector<FinitaryOperator> blocks;
    long total = 0;
    while (total < 4) {
      long size = 1 + (long)rng.below(2);
      blocks.push_back(random_block(rng, 1 + total, size));
      total += size;
    }
    auto q = unitary::block_paste(blocks);
    std::vector<FinVector> raw;
    std::size_t count = 1 + rng.below(2);
    for (std::size_t v = 0; v < count; ++v) {
      FinVector x;
      for (long i = 1; i <= total; ++i) x.set(i, Elem(rng.grid(-2, 2, 2)));
      if (x.is_zero()) x = FinVector::basis(1);
      raw.push_back(x);
    }
    auto xs = unitary::gram_schmidt(raw);
    std::vector<unitary::VectorPair> pairs;
    for (const auto& x : xs) pairs.push_back({x, q.apply(x)});
    auto r = unitary::extend_partial_isometry(pairs);
    for (const auto& pr : pairs)
      if (r.apply(pr.x) != pr.y)
        return fail(cat("round ", round, ": prescribed image missed"));
    if (!op_identity(unitary::compose(r.inverse(), r)))
      return fail(cat("round ", round, ": extension not orthogonal"));
  }

  const long shift_rounds = 120;
  for (long round = 0; round < shift_rounds; ++round) {
    long k = (long)rng.below(2);
    long w = 2 * k + 1;
    std::size_t members = 1 + rng.below(2);
    std::size_t slots = 2 + rng.below(3);
    std::size_t planted = rng.below(slots);
    unitary::BlockSchedule h;
    long row = 1;
    long planted_row = 0;
    for (std::size_t s = 0; s < slots; ++s) {
      long size = (s == planted || rng.coin()) ? w : w + 1;
      if (s == planted) planted_row = row;
      std::vector<FinitaryOperator> tuple;
      for (std::size_t mm = 0; mm < members; ++mm)
        tuple.push_back(random_sized(rng, row, size));
      h.tuples.push_back(std::move(tuple));
      row += size;
    }
    std::vector<FinitaryOperator> targets;
    for (const auto& b : h.tuples[planted]) targets.push_back(rebase(b, -k));
    long n = unitary::shift_conjugate_window(h, targets, k);
    if (n < 1 + k || n > planted_row + k)
      return fail(cat("round ", round, ": exponent ", n, " outside the "
                      "expected range"));
    if (!unitary::shift_conjugate_matches(h, targets, k, n))
      return fail(cat("round ", round, ": reported exponent does not match"));
  }

  const long berg_rounds = 120;
  for (long round = 0; round < berg_rounds; ++round) {
    long k = 1 + (long)rng.below(2);
    std::vector<FinitaryOperator> blocks;
    long total = 0;
    long want = 1 + (long)rng.below((std::uint64_t)(2 * k));
    while (total < want) {
      long size = std::min<long>(1 + (long)rng.below(2), want - total);
      blocks.push_back(random_block(rng, 1 + total, size));
      total += size;
    }
    FinitaryOperator t = unitary::block_paste(blocks);
    if (rng.below(4) == 0) {
      Elem c = tower::sqrt(Elem(Rat(1, 2)));
      t = FinitaryOperator::from_columns(1, {{c, c}, {c, -c}});
      k = 1;
    }
    auto f = unitary::bergman_factorization(t, k);
    if (!(unitary::compose(f.r0.inverse(),
                           unitary::compose(f.r1.inverse(), f.residual)) == t))
      return fail(cat("round ", round, ": factors do not recompose"));
    if (!f.r0.fixes_pointwise(1, k) || !f.residual.fixes_pointwise(1, k))
      return fail(cat("round ", round, ": first window not fixed"));
    if (!f.r1.fixes_pointwise(k + 1, 2 * k))
      return fail(cat("round ", round, ": second window not fixed"));
    for (long i = 1; i <= k; ++i)
      if (f.m.apply(FinVector::basis(i)) != FinVector::basis(i + k))
        return fail(cat("round ", round, ": m does not swap the windows"));
  }

  return {true, cat(gs_rounds, " Gram matrices exactly identity; ",
                    ext_rounds, " extensions, ", shift_rounds,
                    " window scans, ", berg_rounds,
                    " two-window factorizations exact")};
}

// ---------------------------------------------------------- criterion 7 --
// Group metric battery over a corpus of groups of order up to 24: the delta
// sandwich on all pairs for random filtrations, exhaustive left-invariance
// of chain metrics on orders up to 12, induced action certificates, and
// majority subsets always squaring to the group.

Res crit7() {
  Rng rng(kSeed ^ 0x07);
  long bpairs = 0;
  for (const auto& [name, g] : corpus()) {
    for (int rep = 0; rep < 3; ++rep) {
      auto filt = random_filtration(rng, g);
      for (std::size_t g1 = 0; g1 < g.size(); ++g1)
        for (std::size_t g2 = 0; g2 < g.size(); ++g2) {
          auto bd = group::birkhoff_metric(g, filt, g1, g2);
          ++bpairs;
          if (g1 == g2) {
            if (!bd.delta.is_zero() || !bd.d.is_zero())
              return fail(cat(name, ": nonzero self distance"));
            continue;
          }
          if (bd.delta > Rat(2) * bd.d || bd.d > bd.delta)
            return fail(cat(name, " pair (", g1, ",", g2, "): delta=",
                            bd.delta.str(), " d=", bd.d.str(),
                            " escapes the sandwich"));
          if (group::birkhoff_metric(g, filt, g2, g1).d != bd.d)
            return fail(cat(name, ": chained metric asymmetric"));
        }
    }
  }

  long chain_groups = 0;
  for (const auto& [name, g] : corpus()) {
    if (g.size() > 12) continue;
    ++chain_groups;
    for (int rep = 0; rep < 2; ++rep) {
      std::set<std::size_t> lvl{g.id};
      std::vector<std::vector<std::size_t>> levels{sorted_of(lvl)};
      for (int grow = 0; grow < 2; ++grow) {
        std::size_t a = rng.below(g.size());
        lvl.insert(a);
        lvl.insert(g.inv[a]);
        levels.push_back(sorted_of(lvl));
      }
      std::vector<std::size_t> all(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) all[i] = i;
      levels.push_back(all);
      auto chain = group::SubsetChain::validated(g, levels);

      std::vector<std::vector<Rat>> d(g.size(), std::vector<Rat>(g.size()));
      for (std::size_t f = 0; f < g.size(); ++f)
        for (std::size_t h = 0; h < g.size(); ++h)
          d[f][h] = group::chain_metric(g, chain, f, h).distance;
      for (std::size_t f = 0; f < g.size(); ++f)
        for (std::size_t h = 0; h < g.size(); ++h) {
          if (d[f][h] != d[h][f]) return fail(cat(name, ": chain asymmetric"));
          for (std::size_t a = 0; a < g.size(); ++a)
            if (d[g.op(a, f)][g.op(a, h)] != d[f][h])
              return fail(cat(name, ": left translation by ", a,
                              " changes d(", f, ",", h, ")"));
        }
    }
  }

  const long induce_rounds = 110;
  for (long round = 0; round < induce_rounds; ++round) {
    const auto& [name, g] = corpus()[rng.below(corpus().size())];
    std::size_t gen = 1 + rng.below(g.size() - 1);
    auto sub = group::subgroup_closure(g, {gen});
    auto trans = group::left_transversal(g, sub);

    std::size_t invol = 0;
    for (std::size_t a : sub)
      if (a != g.id && g.op(a, a) == g.id) invol = a;
    RationalMetricSpace x = as_space(DistanceMatrix::validated(
        {{Rat(0), Rat(1, 2)}, {Rat(1, 2), Rat(0)}}));
    std::vector<Perm> act;
    if (invol != 0 && sub.size() == 2 && rng.coin()) {
      for (std::size_t a : sub)
        act.push_back(a == g.id ? Perm{0, 1} : Perm{1, 0});
    }
    if (act.empty()) {
      x = as_space(testutil::random_premetric(rng, 2 + (int)rng.below(2), 2, true));
      for (std::size_t i = 0; i < sub.size(); ++i)
        act.push_back(identity_perm((std::size_t)x.d.size()));
    }

    auto ia = group::induce_action(g, sub, trans, x, act);
    std::size_t pts = ia.points.size();
    if (ia.action.size() != g.size())
      return fail(cat(name, ": one permutation per group element expected"));
    for (const auto& pa : ia.action)
      if (pa.size() != pts)
        return fail(cat(name, ": action tables misaligned"));
    Rat diam_space(0);
    for (int i = 0; i < ia.space.d.size(); ++i)
      for (int j = 0; j < ia.space.d.size(); ++j)
        if (ia.space.d.at(i, j) > diam_space) diam_space = ia.space.d.at(i, j);
    std::size_t plimit = pts < 24 ? pts : 24;
    for (std::size_t a = 0; a < g.size(); ++a) {
      const auto& pa = ia.action[a];
      for (std::size_t p = 0; p < plimit; ++p)
        for (std::size_t q = p + 1; q < plimit; ++q)
          if (ia.space.d.at((int)pa[p], (int)pa[q]) !=
              ia.space.d.at((int)p, (int)q))
            return fail(cat(name, ": element ", a, " distorts the induced "
                            "metric"));
    }
    for (std::size_t p = 0; p < plimit; ++p) {
      Rat diam(0);
      for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t b = 0; b < g.size(); ++b) {
          Rat v = ia.space.d.at((int)ia.action[a][p], (int)ia.action[b][p]);
          if (v > diam) diam = v;
        }
      if (diam != ia.orbit_diameter[p])
        return fail(cat(name, ": orbit diameter of point ", p, " misreported"));
      if (diam > diam_space)
        return fail(cat(name, ": orbit diameter beyond the space diameter"));
    }
    bool small = g.size() <= 12;
    long probes = small ? (long)(g.size() * g.size()) : 80;
    for (long pr = 0; pr < probes; ++pr) {
      std::size_t a = small ? (std::size_t)pr / g.size() : rng.below(g.size());
      std::size_t b = small ? (std::size_t)pr % g.size() : rng.below(g.size());
      if (ia.action[g.op(a, b)] !=
          tree::perm_compose(ia.action[a], ia.action[b]))
        return fail(cat(name, ": induced action not a homomorphism at (", a,
                        ",", b, ")"));
    }
  }

  const long pettis_rounds = 260;
  for (long round = 0; round < pettis_rounds; ++round) {
    const auto& [name, g] = corpus()[rng.below(corpus().size())];
    std::set<std::size_t> b{g.id};
    while (2 * b.size() <= g.size()) {
      std::size_t a = rng.below(g.size());
      b.insert(a);
      b.insert(g.inv[a]);
    }
    auto sc = group::large_subset_square(g, sorted_of(b));
    if (!sc.majority)
      return fail(cat(name, ": majority subset not recognized"));
    if (!sc.square)
      return fail(cat(name, ": majority subset failed to square"));
    for (std::size_t e = 0; e < g.size(); ++e) {
      auto [p, q] = sc.factors[e];
      if (p < 0 || q < 0 || !b.count((std::size_t)p) ||
          !b.count((std::size_t)q) ||
          g.op((std::size_t)p, (std::size_t)q) != e)
        return fail(cat(name, ": factor pair for ", e, " does not verify"));
    }
  }

  return {true, cat(bpairs, " sandwich pairs over ", corpus().size(),
                    " groups; chain metrics fully left-invariant on ",
                    chain_groups, " groups; ", induce_rounds,
                    " induced actions and ", pettis_rounds,
                    " majority squares verified")};
}

// ---------------------------------------------------------- criterion 8 --
// At least 500 random solvable circular configurations with up to 6 moved
// and 6 fixed points: the two-stabilizer factorization always succeeds and
// its certificate composes exactly.

Res crit8() {
  Rng rng(kSeed ^ 0x08);
  const long rounds = 520;
  long pinned = 0;
  for (long round = 0; round < rounds; ++round) {
    std::size_t n = 1 + rng.below(6);
    std::size_t m = 1 + rng.below(6);
    auto all = grid_points(rng, n + m, 64);
    std::vector<Rat> xs(all.begin(), all.begin() + (long)n);
    std::vector<Rat> ys(all.begin() + (long)n, all.end());

    auto as = arc_points(rng, n, ys.back(), ys.front());
    std::vector<std::pair<Rat, Rat>> fp;
    for (std::size_t i = 0; i < n; ++i) fp.push_back({xs[i], as[i]});
    for (const Rat& y : ys) fp.push_back({y, y});
    auto fprime = circular::PLCircleMap::validated(fp);

    auto bs = arc_points(rng, m, xs.back(), xs.front());
    std::vector<std::pair<Rat, Rat>> hp;
    for (const Rat& x : xs) hp.push_back({x, x});
    for (std::size_t j = 0; j < m; ++j) hp.push_back({ys[j], bs[j]});
    auto hprime = circular::PLCircleMap::validated(hp);

    std::vector<Rat> gs;
    for (const Rat& x : xs) gs.push_back(hprime.eval(fprime.eval(x)));

    auto res = circular::produkt_factorization(xs, ys, gs);
    if (!res.feasible)
      return fail(cat("round ", round, ": solvable instance declared "
                      "infeasible: ", res.reason));
    if (res.pinned) ++pinned;
    for (std::size_t i = 0; i < n; ++i)
      if (circular::mod1(res.h.eval(res.f.eval(xs[i]))) !=
          circular::mod1(gs[i]))
        return fail(cat("round ", round, ": certificate misses image ", i));
    for (const Rat& y : ys)
      if (circular::mod1(res.f.eval(y)) != circular::mod1(y))
        return fail(cat("round ", round, ": f moves a fixed anchor"));
    for (const Rat& x : xs)
      if (circular::mod1(res.h.eval(x)) != circular::mod1(x))
        return fail(cat("round ", round, ": h moves a moved-tuple point"));
  }
  return {true, cat(rounds, " solvable configurations factored (", pinned,
                    " pinned), certificates compose exactly")};
}

// ---------------------------------------------------------- criterion 9 --
// Displacement bounds: measured displacements never exceed the composition
// bound (the doubling map included, where the bound is attained exactly),
// and measured orbit diameters stay under the 2 k^2 M^k bound.

Res crit9() {
  Rng rng(kSeed ^ 0x09);

  for (long k = 1; k <= 6; ++k)
    for (int rep = 0; rep < 30; ++rep) {
      Rat d = rng.grid(0, 32, 16);
      std::vector<metric::HolderPair> maps(
          (std::size_t)k, metric::HolderPair{Rat(2), Rat(1)});
      auto hb = metric::holder_composition_bound(maps, d);
      Rat expect = rpow(Rat(2), k) * d;
      if (hb.bound != Elem(expect) || hb.alpha != Rat(1) || hb.d != d)
        return fail(cat("doubling k=", k, ": bound is not 2^k d"));
      Rat x = rng.grid(-8, 8, 4);
      Rat y = x + d;
      Rat moved = (rpow(Rat(2), k) * x - rpow(Rat(2), k) * y).abs();
      if (moved != expect)
        return fail(cat("doubling k=", k, ": measured displacement ",
                        moved.str(), " differs from the bound"));
    }

  for (int rep = 0; rep < 120; ++rep) {
    long k = 1 + (long)rng.below(4);
    Rat d = rng.grid(0, 16, 8);
    std::vector<metric::HolderPair> maps;
    Rat prod(1);
    for (long i = 0; i < k; ++i) {
      Rat c = Rat(1) + rng.grid(0, 8, 4);
      maps.push_back({c, Rat(1)});
      prod *= c;
    }
    auto hb = metric::holder_composition_bound(maps, d);
    if (hb.bound != Elem(prod * d))
      return fail(cat("round ", rep, ": linear bound is not the product"));
    Rat x = rng.grid(-8, 8, 4);
    Rat moved = (prod * x - prod * (x + d)).abs();
    if (moved > prod * d)
      return fail(cat("round ", rep, ": linear composite exceeds its bound"));
    maps[0].c = maps[0].c + Rat(1, 2);
    auto hb2 = metric::holder_composition_bound(maps, d);
    if (!d.is_zero() && metric::compare_bounds(hb, hb2) >= 0)
      return fail(cat("round ", rep, ": bound not monotone in the constant"));
  }

  for (int rep = 0; rep < 120; ++rep) {
    Rat c = Rat(1) + rng.grid(0, 6, 2);
    Rat s = rng.grid(0, 12, 6);
    Rat t = rng.grid(0, 12, 6);
    if (s == t) t = s + Rat(1, 6);
    Rat d = (s * s - t * t).abs();
    auto hb = metric::holder_composition_bound({{c, Rat(1, 2)}}, d);
    if (hb.bound * hb.bound != Elem(c * c * d))
      return fail(cat("round ", rep, ": square of the root bound is off"));
    Rat moved = (c * s - c * t).abs();
    if (moved * moved > c * c * d)
      return fail(cat("round ", rep, ": root map exceeds its bound"));
    if ((hb.bound - Elem(moved)).sign() < 0)
      return fail(cat("round ", rep, ": tower comparison disagrees"));
  }

  for (long m = 2; m <= 4; ++m)
    for (long k = 1; k <= 6; ++k)
      for (int rep = 0; rep < 10; ++rep) {
        Rat d = rng.grid(0, 16, 8);
        auto lb = metric::lipschitz_large_bound(Rat(m), k, d);
        Rat mk = rpow(Rat(m), k);
        if (lb.displacement != mk * (d + Rat(k)))
          return fail(cat("m=", m, " k=", k, ": displacement formula off"));
        if (lb.orbit_diameter != Rat(2) * Rat(k) * Rat(k) * mk)
          return fail(cat("m=", m, " k=", k, ": orbit formula off"));
        // Orbit of 0 under x -> m x + 1: the k-th point is (m^k - 1)/(m - 1).
        Rat top = (mk - Rat(1)) / (Rat(m) - Rat(1));
        if (top > lb.orbit_diameter)
          return fail(cat("m=", m, " k=", k, ": affine orbit escapes the "
                          "bound"));
        Rat x = rng.grid(-8, 8, 4);
        Rat moved = (mk * x - mk * (x + d)).abs();
        if (moved > lb.displacement)
          return fail(cat("m=", m, " k=", k, ": affine composite exceeds the "
                          "displacement bound"));
      }

  return {true, cat("doubling bounds attained exactly for k <= 6; linear, "
                    "root, and affine displacements never exceed their "
                    "bounds; orbits within 2 k^2 M^k")};
}

}  // namespace

int main(int argc, char** argv) {
  int only = argc > 1 ? std::atoi(argv[1]) : 0;
  struct Entry {
    int num;
    const char* label;
    Res (*fn)();
  };
  const Entry entries[] = {
      {1, "coupling distance bounds", crit1},
      {2, "geodesic extension axioms", crit2},
      {3, "four-factor stabilizer certificates", crit3},
      {4, "partial isometry extension", crit4},
      {5, "tree translation identities", crit5},
      {6, "orthogonal extension certificates", crit6},
      {7, "invariant group metrics", crit7},
      {8, "circular factorization", crit8},
      {9, "displacement growth bounds", crit9},
  };
  int fails = 0;
  int ran = 0;
  for (const Entry& e : entries) {
    if (only != 0 && e.num != only) continue;
    ++ran;
    auto t0 = std::chrono::steady_clock::now();
    Res r{false, ""};
    try {
      r = e.fn();
    } catch (const obkit::Error& err) {
      r = fail(cat("unexpected ", obkit::error_kind_name(err.kind()),
                   " error: ", err.what()));
    } catch (const std::exception& err) {
      r = fail(cat("unexpected error: ", err.what()));
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("%s  %d  %-36s  %s  (%.1fs)\n", r.ok ? "pass" : "FAIL", e.num,
                e.label, r.detail.c_str(), secs);
    std::fflush(stdout);
    if (!r.ok) ++fails;
  }
  if (ran == 0) {
    std::printf("no such criterion: %d\n", only);
    return 1;
  }
  std::printf("%d of %d criteria failed\n", fails, ran);
  return fails;
}
