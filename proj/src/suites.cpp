#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "obkit/checks.hpp"
#include "obkit/circular.hpp"
#include "obkit/error.hpp"
#include "obkit/group.hpp"
#include "obkit/metric.hpp"
#include "obkit/rng.hpp"
#include "obkit/tower.hpp"
#include "obkit/tree.hpp"
#include "obkit/unitary.hpp"
#include "obkit/urysohn.hpp"

// Randomized property suites.  Every check runs from its own seed derived
// from the request seed and the check name, so reports do not depend on
// execution order or thread count.

namespace obkit::checks {

namespace {

template <class... Ts>
std::string cat(Ts&&... parts) {
  std::ostringstream o;
  (o << ... << parts);
  return o.str();
}

struct Outcome {
  bool ok;
  std::string witness;
};

using Body = Outcome (*)(Rng&, long);

struct SuiteCheck {
  const char* name;
  const char* lemma;
  Body body;
};

long at_least(long lo, long v) { return v < lo ? lo : v; }

// ------------------------------------------------------------ generators --

// Entries drawn from their exact feasible interval, so every triangle holds
// by construction.
metric::DistanceMatrix rnd_premetric(Rng& rng, int n, long den, bool strict) {
  std::vector<std::vector<Rat>> e((std::size_t)n,
                                  std::vector<Rat>((std::size_t)n, Rat(0)));
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      Rat lo(0), up(1);
      for (int k = 0; k < i; ++k) {
        Rat diff = (e[(std::size_t)i][(std::size_t)k] -
                    e[(std::size_t)k][(std::size_t)j]).abs();
        Rat sum = e[(std::size_t)i][(std::size_t)k] +
                  e[(std::size_t)k][(std::size_t)j];
        if (diff > lo) lo = diff;
        if (sum < up) up = sum;
      }
      long lo_k = (lo * Rat(den)).ceil().num_long();
      long hi_k = (up * Rat(den)).floor().num_long();
      if (strict && lo_k == 0) lo_k = 1;
      Rat v = rng.grid(lo_k, hi_k, den);
      e[(std::size_t)i][(std::size_t)j] = v;
      e[(std::size_t)j][(std::size_t)i] = v;
    }
  return metric::DistanceMatrix::validated(std::move(e));
}

metric::RationalMetricSpace as_space(metric::DistanceMatrix m) {
  bool s = m.strict();
  return metric::RationalMetricSpace::make(std::move(m), s);
}

metric::RationalMetricSpace equilateral(int n, const Rat& v) {
  std::vector<std::vector<Rat>> e((std::size_t)n,
                                  std::vector<Rat>((std::size_t)n, v));
  for (int i = 0; i < n; ++i) e[(std::size_t)i][(std::size_t)i] = Rat(0);
  return as_space(metric::DistanceMatrix::validated(std::move(e)));
}

// Two copies of a at uniform cross distance 1.
metric::RationalMetricSpace two_copies(const metric::DistanceMatrix& a) {
  int n = a.size();
  std::vector<std::vector<Rat>> e(2 * (std::size_t)n,
                                  std::vector<Rat>(2 * (std::size_t)n, Rat(1)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      e[(std::size_t)i][(std::size_t)j] = a.at(i, j);
      e[(std::size_t)(n + i)][(std::size_t)(n + j)] = a.at(i, j);
    }
  for (int i = 0; i < 2 * n; ++i) e[(std::size_t)i][(std::size_t)i] = Rat(0);
  return as_space(metric::DistanceMatrix::validated(std::move(e)));
}

using Perm = std::vector<std::size_t>;
using Edges = std::vector<std::pair<std::size_t, std::size_t>>;

Perm identity_perm(std::size_t n) {
  Perm g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = i;
  return g;
}

tree::SimplicialTree path_tree(std::size_t k) {
  Edges e;
  for (std::size_t i = 0; i < k; ++i) e.push_back({i, i + 1});
  return tree::SimplicialTree::validated(k + 1, e);
}

Perm path_reversal(std::size_t k) {
  Perm g(k + 1);
  for (std::size_t i = 0; i <= k; ++i) g[i] = k - i;
  return g;
}

// Center 0 with b branches, each a path of p vertices.
tree::SimplicialTree star_tree(std::size_t b, std::size_t p) {
  Edges e;
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

tree::SimplicialTree double_tripod(std::size_t k) {
  Edges e;
  for (std::size_t i = 0; i < k; ++i) e.push_back({i, i + 1});
  e.push_back({0, k + 1});
  e.push_back({0, k + 2});
  e.push_back({k, k + 3});
  e.push_back({k, k + 4});
  return tree::SimplicialTree::validated(k + 5, e);
}

long brute_norm(const tree::SimplicialTree& t, const Perm& g) {
  long best = -1;
  for (std::size_t v = 0; v < t.size(); ++v) {
    long d = tree::vertex_distance(t, v, g[v]);
    if (best < 0 || d < best) best = d;
  }
  return best;
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

long cyclic_length(const tree::FreeWord& w) {
  std::vector<int> v = w.letters;
  while (v.size() >= 2 && v.front() == -v.back()) {
    v.erase(v.begin());
    v.pop_back();
  }
  return (long)v.size();
}

using tower::Elem;
using unitary::FinitaryOperator;
using unitary::FinVector;

FinitaryOperator opq(long lo, std::vector<std::vector<Rat>> cols) {
  std::vector<std::vector<Elem>> c;
  for (auto& col : cols) {
    c.emplace_back();
    for (auto& x : col) c.back().push_back(Elem(x));
  }
  return FinitaryOperator::from_columns(lo, std::move(c));
}

FinitaryOperator rotation35(long lo) {
  return opq(lo, {{Rat(3, 5), Rat(4, 5)}, {Rat(-4, 5), Rat(3, 5)}});
}

FinitaryOperator swap2(long lo) {
  return opq(lo, {{Rat(0), Rat(1)}, {Rat(1), Rat(0)}});
}

FinitaryOperator rebase(const FinitaryOperator& b, long lo) {
  return FinitaryOperator::from_columns(lo, b.columns());
}

FinitaryOperator random_sized(Rng& rng, long lo, long size);

// Random orthogonal block of the requested size at the given base index.
FinitaryOperator random_block(Rng& rng, long lo, long size) {
  if (size == 1) return opq(lo, {{Rat(rng.coin() ? 1 : -1)}});
  switch (rng.below(4)) {
    case 0: return rotation35(lo);
    case 1: return swap2(lo);
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

bool op_identity(const FinitaryOperator& q) {
  return q == FinitaryOperator::identity();
}

group::FiniteGroup pool_group(Rng& rng) {
  switch (rng.below(5)) {
    case 0: return group::cyclic_group(4);
    case 1: return group::cyclic_group(6);
    case 2: return group::symmetric_group(3);
    case 3: return group::dihedral_group(4);
    default:
      return group::direct_product(group::cyclic_group(2),
                                   group::cyclic_group(2));
  }
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

std::size_t recompute_width(const group::FiniteGroup& g,
                            const std::vector<std::size_t>& e) {
  std::set<std::size_t> ball(e.begin(), e.end());
  std::size_t steps = 1;
  while (ball.size() < g.size()) {
    std::set<std::size_t> next = ball;
    for (std::size_t a : ball)
      for (std::size_t b : e) next.insert(g.op(a, b));
    if (next == ball) return 0;  // does not generate
    ball = std::move(next);
    ++steps;
  }
  return steps;
}

// Ascending distinct grid points k/den in [0, 1).
std::vector<Rat> grid_points(Rng& rng, std::size_t count, long den) {
  std::set<long> ks;
  while (ks.size() < count) ks.insert((long)rng.below((std::uint64_t)den));
  std::vector<Rat> out;
  for (long k : ks) out.push_back(Rat(k, den));
  return out;
}

// Distinct points strictly inside the arc from start to end, ascending
// along the arc.  A zero span means the full circle minus the start point.
std::vector<Rat> arc_points(Rng& rng, std::size_t count, const Rat& start,
                            const Rat& end) {
  Rat span = circular::mod1(end - start);
  if (span.is_zero()) span = Rat(1);
  std::set<long> ks;
  while (ks.size() < count) ks.insert(1 + (long)rng.below(96));
  std::vector<Rat> out;
  for (long k : ks)
    out.push_back(circular::mod1(start + span * Rat(k, 97)));
  return out;
}

Rat rpow(const Rat& base, long exp) {
  Rat out(1);
  for (long i = 0; i < exp; ++i) out *= base;
  return out;
}

// --------------------------------------------------------- metric bodies --

Outcome body_d1_bounds(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 10);
  for (long round = 0; round < rounds; ++round) {
    int n = rng.range(2, 4);
    long den = 1 + (long)rng.below(6);
    auto a = rnd_premetric(rng, n, den, false);
    auto b = rnd_premetric(rng, n, den, false);
    auto res = metric::d1_distance(a, b);
    Rat sup = metric::sup_distance(a, b);
    if (sup > res.value || Rat(2) * res.value > Rat(n) * sup)
      return {false, cat("round ", round, ": sup=", sup.str(), " d1=",
                         res.value.str(), " n=", n, " breaks the sandwich")};
    Rat trace(0);
    for (int i = 0; i < n; ++i)
      trace += res.coupling[(std::size_t)i][(std::size_t)i];
    if (trace != res.value)
      return {false, cat("round ", round, ": witness trace ", trace.str(),
                         " misses the value ", res.value.str())};
    try {
      metric::coupled_matrix(a, b, res.coupling);
    } catch (const Error& err) {
      return {false, cat("round ", round, ": coupling does not validate: ",
                         err.what())};
    }
  }
  return {true, cat(rounds, " random pairs stay inside the sandwich with "
                            "validated couplings")};
}

Outcome body_glue_trace(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 5);
  for (long round = 0; round < rounds; ++round) {
    int n = rng.range(2, 4);
    auto a = rnd_premetric(rng, n, 1 + (long)rng.below(6), false);
    auto b = rnd_premetric(rng, n, 1 + (long)rng.below(6), false);
    Rat delta = metric::sup_distance(a, b);
    auto g = metric::glue_premetric(a, b, delta);
    if (metric::DistanceMatrix::find_violation(g.entries()))
      return {false, cat("round ", round, ": glued matrix is not a premetric")};
    if (metric::glue_trace(g) != Rat(n) * delta / Rat(2))
      return {false, cat("round ", round, ": trace differs from n*delta/2")};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (g.at(i, j) != a.at(i, j) || g.at(n + i, n + j) != b.at(i, j))
          return {false, cat("round ", round, ": gluing moved a block entry")};
  }
  return {true, cat(rounds, " gluings hit the exact trace n*delta/2")};
}

Outcome body_net_round(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 5);
  for (long round = 0; round < rounds; ++round) {
    int n = rng.range(2, 4);
    auto m = rnd_premetric(rng, n, 1 + (long)rng.below(6), false);
    Rat eps(1, 1 + (long)rng.below(8));
    auto rd = metric::round_to_net(m, eps);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (rd.at(i, j) < m.at(i, j) || rd.at(i, j) - m.at(i, j) > eps)
          return {false, cat("round ", round, ": entry (", i, ",", j,
                             ") rounds outside [d, d+eps]")};
      }
    if (!(metric::round_to_net(rd, eps) == rd))
      return {false, cat("round ", round, ": rounding is not idempotent")};
  }
  return {true, cat(rounds, " roundings cover within eps and are idempotent")};
}

Outcome body_geodesic_axioms(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 10);
  for (long round = 0; round < rounds; ++round) {
    int n = rng.range(2, 4);
    auto m = rnd_premetric(rng, n, 1 + (long)rng.below(5), true);

    std::vector<metric::GeodesicPoint> pts;
    for (int i = 0; i < n; ++i) pts.push_back(metric::GeodesicPoint::original(i));
    auto add_interior = [&](int x, int y) {
      Rat d = m.at(x, y);
      for (long k = 1; k <= 2; ++k)
        pts.push_back(metric::GeodesicPoint::interior(m, x, y, d * Rat(k, 3)));
    };
    add_interior(0, 1);
    if (n >= 3) add_interior(1, 2);

    std::size_t np = pts.size();
    std::vector<std::vector<Rat>> d(np, std::vector<Rat>(np, Rat(0)));
    for (std::size_t i = 0; i < np; ++i)
      for (std::size_t j = 0; j < np; ++j)
        d[i][j] = metric::geodesic_distance(m, pts[i], pts[j]);

    for (std::size_t i = 0; i < np; ++i) {
      if (!d[i][i].is_zero())
        return {false, cat("round ", round, ": nonzero self distance")};
      for (std::size_t j = 0; j < np; ++j) {
        if (d[i][j] != d[j][i])
          return {false, cat("round ", round, ": asymmetric extension")};
        for (std::size_t k = 0; k < np; ++k)
          if (d[i][j] > d[i][k] + d[k][j])
            return {false, cat("round ", round, ": triangle breaks at (", i,
                               ",", j, ",", k, ")")};
      }
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (d[(std::size_t)i][(std::size_t)j] != m.at(i, j))
          return {false, cat("round ", round, ": originals moved")};

    Rat span = m.at(0, 1);
    for (long k = 0; k <= 4; ++k) {
      Rat t = span * Rat(k, 4);
      metric::GeodesicPoint p =
          k == 0 ? metric::GeodesicPoint::original(0)
          : k == 4 ? metric::GeodesicPoint::original(1)
                   : metric::GeodesicPoint::interior(m, 0, 1, t);
      if (metric::geodesic_distance(m, metric::GeodesicPoint::original(0), p) !=
              t ||
          metric::geodesic_distance(m, p, metric::GeodesicPoint::original(1)) !=
              span - t)
        return {false, cat("round ", round, ": arclength t=", t.str(),
                           " is not realized exactly")};
    }
  }
  return {true, cat(rounds, " extensions satisfy the metric axioms with every "
                            "sampled arclength realized")};
}

Outcome body_holder_bound(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 5);
  const Rat alphas[3] = {Rat(1), Rat(1, 2), Rat(1, 4)};
  for (long round = 0; round < rounds; ++round) {
    long k = 1 + (long)rng.below(3);
    std::vector<metric::HolderPair> maps;
    bool linear = rng.coin();
    for (long i = 0; i < k; ++i) {
      Rat c(1 + (long)rng.below(3));
      Rat alpha = linear ? Rat(1) : alphas[rng.below(3)];
      maps.push_back({c, alpha});
    }
    long den = 2 + (long)rng.below(4);
    Rat dist = rng.grid(1, den, den);
    auto hb = metric::holder_composition_bound(maps, dist);

    Rat alpha_prod(1);
    for (const auto& mp : maps) alpha_prod *= mp.alpha;
    if (hb.alpha != alpha_prod || hb.d != dist)
      return {false, cat("round ", round, ": composed exponent or distance "
                         "is off")};

    if (linear) {
      Rat cprod(1);
      for (const auto& mp : maps) cprod *= mp.c;
      // Lipschitz maps x -> c x realize the bound with equality.
      if (hb.bound != Elem(cprod * dist))
        return {false, cat("round ", round, ": linear bound ",
                           (cprod * dist).str(), " is not met exactly")};
    }

    auto bumped = maps;
    bumped[0].c += Rat(1);
    auto hb2 = metric::holder_composition_bound(bumped, dist);
    if (metric::compare_bounds(hb2, hb) < 0)
      return {false, cat("round ", round, ": bound shrank as the first "
                         "constant grew")};
  }
  // The doubling map specifically: k iterates give exactly 2^k d.
  for (long k = 1; k <= 4; ++k) {
    std::vector<metric::HolderPair> twos((std::size_t)k, {Rat(2), Rat(1)});
    Rat dist(1, 3);
    auto hb = metric::holder_composition_bound(twos, dist);
    if (hb.bound != Elem(rpow(Rat(2), k) * dist))
      return {false, cat("doubling map bound at k=", k, " is not 2^k d")};
  }
  return {true, cat(rounds, " compositions verified, doubling map bounds "
                            "exact through k=4")};
}

Outcome body_lipschitz_orbit(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 5);
  for (long round = 0; round < rounds; ++round) {
    Rat m(2 + (long)rng.below(3));
    long k = 1 + (long)rng.below(4);
    Rat dist = rng.grid(0, 4, 2);
    auto lb = metric::lipschitz_large_bound(m, k, dist);
    Rat mk = rpow(m, k);
    if (lb.displacement != mk * (dist + Rat(k)))
      return {false, cat("round ", round, ": displacement formula mismatch")};
    if (lb.orbit_diameter != Rat(2) * Rat(k) * Rat(k) * mk)
      return {false, cat("round ", round, ": orbit formula mismatch")};

    // The affine map T(x) = m x + 1 is m-large-Lipschitz; its k-step orbit
    // from 0 must stay inside both bounds.
    Rat x(0);
    Rat hi(0);
    for (long j = 0; j < k; ++j) {
      x = m * x + Rat(1);
      if (x > hi) hi = x;
    }
    if (hi > lb.orbit_diameter)
      return {false, cat("round ", round, ": affine orbit reaches ", hi.str(),
                         " beyond the bound ", lb.orbit_diameter.str())};
    if (mk * dist > lb.displacement)
      return {false, cat("round ", round, ": pure scaling displacement "
                         "escapes the bound")};
  }
  return {true, cat(rounds, " rounds: formulas exact, affine orbits inside "
                            "the 2k^2 M^k bound")};
}

// -------------------------------------------------------- urysohn bodies --

Outcome body_katetov_valid(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 10);
  for (long round = 0; round < rounds; ++round) {
    int n = rng.range(1, 3);
    auto x = as_space(rnd_premetric(rng, n, 2, false));
    long denom = 1 + (long)rng.below(2);
    auto fs = urysohn::katetov_extensions(x, denom);
    if (fs.empty())
      return {false, cat("round ", round, ": no admissible profile found")};
    std::size_t cap = fs.size() < 200 ? fs.size() : 200;
    for (std::size_t i = 0; i < cap; ++i) {
      try {
        urysohn::extend_with(x, fs[i]);
      } catch (const Error& err) {
        return {false, cat("round ", round, ": profile ", i,
                           " fails to extend: ", err.what())};
      }
      if (i > 0 && !std::lexicographical_compare(
                       fs[i - 1].values.begin(), fs[i - 1].values.end(),
                       fs[i].values.begin(), fs[i].values.end()))
        return {false, cat("round ", round, ": enumeration order broke at ", i)};
    }
  }
  return {true, cat(rounds, " spaces enumerated; every profile extends to a "
                            "valid premetric in lexicographic order")};
}

Outcome body_amalgam_copies(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 10);
  for (long round = 0; round < rounds; ++round) {
    int n0 = rng.range(2, 3);
    auto x = as_space(rnd_premetric(rng, n0, 2 + (long)rng.below(3), true));
    std::size_t m = 1 + rng.below(2);
    for (std::size_t i = 0; i < m; ++i) {
      urysohn::KatetovFunction ones{
          std::vector<Rat>((std::size_t)x.d.size(), Rat(1))};
      x = urysohn::extend_with(x, ones);
    }
    std::vector<std::size_t> base((std::size_t)n0);
    for (std::size_t i = 0; i < base.size(); ++i) base[i] = i;
    rng.shuffle(base);
    std::size_t mx = 1 + rng.below(2);
    std::vector<std::size_t> xbar(base.begin(), base.begin() + (long)mx);
    rng.shuffle(base);
    std::size_t mz = rng.below((std::uint64_t)n0);
    std::vector<std::size_t> zbar(base.begin(), base.begin() + (long)mz);
    std::vector<std::size_t> ybar;
    for (std::size_t i = 0; i < m; ++i) ybar.push_back((std::size_t)n0 + i);

    auto am = urysohn::amalgamate_over(x, xbar, zbar, ybar);
    if (am.space.d.size() != (int)((std::size_t)x.d.size() + mx + mz))
      return {false, cat("round ", round, ": unexpected amalgam size")};
    auto sd = [&](std::size_t a, std::size_t b) {
      return am.space.d.at((int)a, (int)b);
    };
    for (std::size_t i = 0; i < mx; ++i) {
      for (std::size_t j = 0; j < mx; ++j)
        if (sd(am.xprime[i], am.xprime[j]) !=
            x.d.at((int)xbar[i], (int)xbar[j]))
          return {false, cat("round ", round, ": moved copy distorted")};
      for (std::size_t j = 0; j < mz; ++j)
        if (sd(am.xprime[i], am.zprime[j]) !=
            x.d.at((int)xbar[i], (int)zbar[j]))
          return {false, cat("round ", round, ": cross copy distorted")};
      for (std::size_t y : ybar)
        if (sd(am.xprime[i], y) != x.d.at((int)xbar[i], (int)y))
          return {false, cat("round ", round, ": anchor distances moved")};
    }
    for (std::size_t i = 0; i < mz; ++i)
      for (std::size_t j = 0; j < mz; ++j)
        if (sd(am.zprime[i], am.zprime[j]) !=
            x.d.at((int)zbar[i], (int)zbar[j]))
          return {false, cat("round ", round, ": second copy distorted")};
  }
  return {true, cat(rounds, " amalgams keep both adjoined copies isometric "
                            "over the anchors")};
}

Outcome body_factor4_cert(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 10);
  for (long round = 0; round < rounds; ++round) {
    int na = rng.range(1, 3);
    auto x = two_copies(rnd_premetric(rng, na, 4, true));
    std::size_t m = 1 + rng.below((std::uint64_t)(na < 2 ? 1 : 2));
    std::vector<std::size_t> base((std::size_t)na);
    for (std::size_t i = 0; i < base.size(); ++i) base[i] = i;
    rng.shuffle(base);
    std::vector<std::size_t> xbar(base.begin(), base.begin() + (long)m);

    urysohn::PartialIsometry g;
    bool ident = rng.coin();
    for (std::size_t xi : xbar)
      g.map.push_back({xi, ident ? xi : xi + (std::size_t)na});

    auto ff = urysohn::four_factor_decomposition(x, xbar, g);
    if (ff.space.d.size() != (int)(2 * (std::size_t)na + 3 * m))
      return {false, cat("round ", round, ": unexpected amalgam size ",
                         ff.space.d.size())};
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
        return {false, cat("round ", round, ": composite misses anchor ", xi)};
    }
    for (std::size_t y : ff.ybar)
      if (chase(ff.h, y) != y || chase(ff.k, y) != y)
        return {false, cat("round ", round, ": h or k moves a fresh anchor")};
    for (std::size_t xi : ff.xbar)
      if (chase(ff.f, xi) != xi)
        return {false, cat("round ", round, ": f moves the anchor tuple")};
    try {
      urysohn::validate_partial_isometry(ff.space, ff.h);
      urysohn::validate_partial_isometry(ff.space, ff.f);
      urysohn::validate_partial_isometry(ff.space, ff.k);
    } catch (const Error& err) {
      return {false, cat("round ", round, ": a factor fails to be a partial "
                         "isometry: ", err.what())};
    }
  }
  return {true, cat(rounds, " four-factor certificates verified on glued "
                            "double spaces")};
}

Outcome body_extend_closure(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 10);
  for (long round = 0; round < rounds; ++round) {
    int n = rng.range(2, 3);
    auto x = as_space(rnd_premetric(rng, n, 2, true));
    urysohn::PartialIsometry p;
    p.map.push_back({rng.below((std::uint64_t)n), rng.below((std::uint64_t)n)});
    urysohn::PartialIsometry wider = p;
    wider.map.push_back({rng.below((std::uint64_t)n), rng.below((std::uint64_t)n)});
    try {
      urysohn::validate_partial_isometry(x, wider);
      p = wider;
    } catch (const Error&) {
    }

    auto res = urysohn::extend_partial_isometry(x, p, 2, 16);
    std::size_t rn = (std::size_t)res.space.d.size();
    std::set<std::size_t> image(res.map.begin(), res.map.end());
    if (res.map.size() != rn || image.size() != rn)
      return {false, cat("round ", round, ": completion is not a bijection")};
    for (const auto& [a, b] : p.map)
      if (res.map[a] != b)
        return {false, cat("round ", round, ": completion forgets a pair")};
    for (std::size_t i = 0; i < rn; ++i)
      for (std::size_t j = 0; j < rn; ++j)
        if (res.space.d.at((int)i, (int)j) !=
            res.space.d.at((int)res.map[i], (int)res.map[j]))
          return {false, cat("round ", round, ": completion distorts (", i,
                             ",", j, ")")};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (res.space.d.at(i, j) != x.d.at(i, j))
          return {false, cat("round ", round, ": base space modified")};
  }
  return {true, cat(rounds, " partial maps completed to total isometries "
                            "within budget 16")};
}

Outcome body_width_certificate(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 10);
  const Rat epss[3] = {Rat(1, 2), Rat(1), Rat(3, 2)};
  for (long round = 0; round < rounds; ++round) {
    metric::RationalMetricSpace x =
        rng.coin() ? equilateral(3, Rat(1, 2))
                   : as_space(rnd_premetric(rng, 3, 2, true));
    std::vector<Perm> elements;
    Perm p = identity_perm(3);
    std::sort(p.begin(), p.end());
    do {
      bool iso = true;
      for (int i = 0; i < 3 && iso; ++i)
        for (int j = i + 1; j < 3 && iso; ++j)
          iso = x.d.at((int)p[(std::size_t)i], (int)p[(std::size_t)j]) ==
                x.d.at(i, j);
      if (iso) elements.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));

    std::vector<std::size_t> xbar{rng.below(3)};
    Rat eps = epss[rng.below(3)];
    auto wd = urysohn::width_decomposition({x, elements}, xbar, eps);

    std::set<std::size_t> uset(wd.u.begin(), wd.u.end());
    std::set<std::size_t> hset(wd.h.begin(), wd.h.end());
    for (std::size_t u : wd.u)
      for (std::size_t xi : xbar)
        if (x.d.at((int)xi, (int)elements[u][xi]) >= eps)
          return {false, cat("round ", round, ": a u factor moves the anchor "
                             "at least eps")};
    if (wd.certificate.size() != elements.size())
      return {false, cat("round ", round, ": certificate misses elements")};
    std::set<std::size_t> covered;
    for (const auto& c : wd.certificate) {
      if (!uset.count(c.u1) || !uset.count(c.u2) || !uset.count(c.u3) ||
          !hset.count(c.h))
        return {false, cat("round ", round, ": factor outside its set")};
      Perm recon = tree::perm_compose(
          elements[c.u1],
          tree::perm_compose(
              tree::perm_inverse(elements[c.u2]),
              tree::perm_compose(elements[c.h],
                                 tree::perm_inverse(elements[c.u3]))));
      if (recon != elements[c.f])
        return {false, cat("round ", round, ": factorization of element ",
                           c.f, " does not recompose")};
      covered.insert(c.f);
    }
    if (covered.size() != elements.size())
      return {false, cat("round ", round, ": some element lacks factors")};
  }
  return {true, cat(rounds, " bounded-width certificates recompose every "
                            "isometry exactly")};
}

// ----------------------------------------------------------- tree bodies --

Outcome body_classify_struct(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 5);
  for (long round = 0; round < rounds; ++round) {
    tree::SimplicialTree t = path_tree(2);
    Perm g;
    switch (rng.below(4)) {
      case 0: {
        std::size_t k = 2 + rng.below(6);
        t = path_tree(k);
        g = path_reversal(k);
        break;
      }
      case 1: {
        std::size_t b = 2 + rng.below(3);
        std::size_t p = 1 + rng.below(3);
        t = star_tree(b, p);
        g = star_rotation(b, p, 1 + rng.below(b - 1));
        break;
      }
      case 2: {
        std::size_t b = 2 + rng.below(3);
        std::size_t p = 1 + rng.below(3);
        t = star_tree(b, p);
        std::size_t j1 = rng.below(b);
        std::size_t j2 = (j1 + 1 + rng.below(b - 1)) % b;
        g = star_branch_swap(b, p, j1, j2);
        break;
      }
      default: {
        std::size_t k = 1 + rng.below(4);
        t = double_tripod(k);
        g = identity_perm(t.size());
        std::swap(g[k + 1], g[k + 2]);
        break;
      }
    }
    tree::validate_automorphism(t, g);
    auto pc = tree::classify_perm(t, g);
    if (pc.norm != brute_norm(t, g))
      return {false, cat("round ", round, ": norm ", pc.norm,
                         " differs from the minimal displacement")};
    if (pc.kind == tree::CharKind::FixedSet) {
      if (pc.fixed.empty() || pc.norm != 0)
        return {false, cat("round ", round, ": elliptic without fixed set")};
      for (std::size_t v : pc.fixed)
        if (g[v] != v)
          return {false, cat("round ", round, ": reported fixed vertex moves")};
    } else if (pc.kind == tree::CharKind::InvertedEdge) {
      if (g[pc.edge.first] != pc.edge.second ||
          g[pc.edge.second] != pc.edge.first || pc.norm != 1)
        return {false, cat("round ", round, ": inverted edge is wrong")};
      auto sub = tree::subdivide_midpoints(t, g);
      if (tree::classify_perm(sub.tree, sub.perm).kind ==
          tree::CharKind::InvertedEdge)
        return {false, cat("round ", round, ": subdivision still inverts")};
    } else {
      return {false, cat("round ", round, ": finite tree reported hyperbolic")};
    }
  }
  return {true, cat(rounds, " automorphisms classified with exact norms; "
                            "subdivision removes every inversion")};
}

Outcome body_word_axis(Rng& rng, long samples) {
  long rounds = at_least(4, samples / 2);
  for (long round = 0; round < rounds; ++round) {
    auto w = random_word(rng, (int)rng.below(9));
    auto wc = tree::classify_word(w);
    if (w.empty()) {
      if (wc.kind != tree::CharKind::FixedSet || wc.norm != 0)
        return {false, cat("round ", round, ": identity misclassified")};
      continue;
    }
    if (wc.kind != tree::CharKind::Axis || wc.norm <= 0)
      return {false, cat("round ", round, ": nontrivial word not hyperbolic")};
    if (!(conj(wc.direction, wc.base) == w))
      return {false, cat("round ", round, ": base.direction.base^-1 misses")};
    if (wc.norm != cyclic_length(w))
      return {false, cat("round ", round, ": norm ", wc.norm,
                         " is not the cyclic reduction length")};
    if (tree::wdist(wc.base, tree::wmul(w, wc.base)) != wc.norm)
      return {false, cat("round ", round, ": axis point displaced by more "
                         "than the norm")};
    if (tree::wdist(tree::FreeWord{}, w) !=
        2 * wc.base.length() + wc.norm)
      return {false, cat("round ", round, ": identity displacement is not "
                         "2|base| + norm")};
  }
  return {true, cat(rounds, " words classified; axes, norms, and "
                            "displacements all agree")};
}

Outcome body_cm_disjoint(Rng& rng, long samples) {
  long rounds = at_least(4, samples / 2);
  long applicable = 0;
  // Known disjoint pair first: axes of a and bab^-1 sit at distance 1.
  {
    auto g = tree::FreeWord::parse("a");
    auto h = tree::FreeWord::parse("baB");
    auto res = tree::cm_disjoint_identity(g, h);
    if (!res.applicable || res.distance != 1 || res.norm_product != 4)
      return {false, "pinned pair a, baB did not produce |gh| = 1 + 1 + 2"};
  }
  for (long round = 0; round < rounds; ++round) {
    auto g = conj(wpow(1, 1 + (int)rng.below(3)), random_word(rng, (int)rng.below(4)));
    auto h = conj(wpow(2, 1 + (int)rng.below(3)), random_word(rng, (int)rng.below(4)));
    auto res = tree::cm_disjoint_identity(g, h);
    if (!res.applicable) continue;
    ++applicable;
    if (res.norm_product != res.norm_g + res.norm_h + 2 * res.distance)
      return {false, cat("round ", round, ": translation lengths break the "
                         "bridge identity")};
    if (tree::classify_word(tree::wmul(g, h)).norm != res.norm_product)
      return {false, cat("round ", round, ": |gh| recomputed differently")};
    if (res.distance < 1)
      return {false, cat("round ", round, ": disjoint axes at distance 0")};
  }
  return {true, cat("pinned pair plus ", applicable, " of ", rounds,
                    " random pairs applicable, identity exact on all")};
}

Outcome body_cm_crossing(Rng& rng, long samples) {
  long rounds = at_least(4, samples / 2);
  long applicable = 0;
  {
    auto res = tree::cm_max_identity(tree::FreeWord::parse("a"),
                                     tree::FreeWord::parse("b"));
    if (!res.applicable ||
        std::max(res.norm_product, res.norm_product_inv) != 2)
      return {false, "pinned pair a, b did not satisfy the max identity"};
  }
  for (long round = 0; round < rounds; ++round) {
    auto u = random_word(rng, (int)rng.below(4));
    auto g = conj(wpow(1, 1 + (int)rng.below(3)), u);
    auto h = conj(wpow(2, 1 + (int)rng.below(3)), u);
    auto res = tree::cm_max_identity(g, h);
    if (!res.applicable)
      return {false, cat("round ", round, ": conjugated crossing pair "
                         "reported inapplicable")};
    ++applicable;
    if (std::max(res.norm_product, res.norm_product_inv) !=
        res.norm_g + res.norm_h)
      return {false, cat("round ", round, ": max identity fails")};
    if (tree::classify_word(tree::wmul(g, h)).norm != res.norm_product ||
        tree::classify_word(tree::wmul(g, tree::winv(h))).norm !=
            res.norm_product_inv)
      return {false, cat("round ", round, ": product norms recomputed "
                         "differently")};
  }
  return {true, cat("pinned pair plus ", applicable,
                    " conjugated crossing pairs, max identity exact")};
}

Outcome body_serre_fixed(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 5);
  long applicable = 0;
  for (long round = 0; round < rounds; ++round) {
    std::size_t b = 3 + rng.below(2);
    std::size_t p = 1 + rng.below(2);
    auto t = star_tree(b, p);
    std::size_t j1 = rng.below(b), j2 = (j1 + 1 + rng.below(b - 1)) % b;
    std::size_t j3 = rng.below(b), j4 = (j3 + 1 + rng.below(b - 1)) % b;
    Perm g = star_branch_swap(b, p, j1, j2);
    Perm h = star_branch_swap(b, p, j3, j4);
    auto res = tree::serre_common_vertex(t, g, h);
    if (!res.applicable)
      return {false, cat("round ", round, ": elliptic pair with elliptic "
                         "product reported inapplicable")};
    ++applicable;
    if (g[res.common] != res.common || h[res.common] != res.common)
      return {false, cat("round ", round, ": reported vertex ", res.common,
                         " is not fixed by both")};
  }
  // An inversion on either side leaves the lemma silent.
  auto t2 = path_tree(3);
  auto res2 = tree::serre_common_vertex(t2, path_reversal(3), identity_perm(4));
  if (res2.applicable)
    return {false, "edge inversion slipped past the ellipticity screen"};
  return {true, cat(applicable, " elliptic pairs share a verified fixed "
                                "vertex; inversions are screened out")};
}

Outcome body_macpherson_triple(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 5);
  for (long round = 0; round < rounds; ++round) {
    std::size_t b = 3 + rng.below(2);
    std::size_t p = 1 + rng.below(2);
    auto t = star_tree(b, p);
    auto rand_swap = [&] {
      std::size_t j1 = rng.below(b);
      std::size_t j2 = (j1 + 1 + rng.below(b - 1)) % b;
      return star_branch_swap(b, p, j1, j2);
    };
    Perm k0 = rand_swap(), k1 = rand_swap(), k2 = rand_swap();
    auto res = tree::macpherson_fixed_point(t, k0, k1, k2);
    if (!res.applicable)
      return {false, cat("round ", round, ": all-elliptic triple reported "
                         "inapplicable")};
    Perm prod = tree::perm_compose(
        k0, tree::perm_compose(k1, tree::perm_compose(k0, k2)));
    if (prod[res.vertex] != res.vertex)
      return {false, cat("round ", round, ": k0k1k0k2 moves the reported "
                         "vertex")};
  }
  return {true, cat(rounds, " triples produce a verified common fixed "
                            "vertex for k0k1k0k2")};
}

// -------------------------------------------------------- unitary bodies --

Outcome body_gram_schmidt(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 10);
  for (long round = 0; round < rounds; ++round) {
    std::size_t count = 2 + rng.below(2);
    long width = 2 + (long)rng.below(2);
    std::vector<FinVector> vs;
    for (std::size_t v = 0; v < count; ++v) {
      FinVector x;
      for (long i = 1; i <= width; ++i)
        x.set(i, Elem(rng.grid(-2, 2, 1 + (long)rng.below(2))));
      if (v == 0 && rng.coin())
        x = x.scaled(tower::sqrt(Elem(Rat(2))));
      if (x.is_zero()) x = FinVector::basis(1);
      vs.push_back(x);
    }
    auto basis = unitary::gram_schmidt(vs);
    Elem one{Rat(1)}, zero{Rat(0)};
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = i; j < basis.size(); ++j)
        if (inner(basis[i], basis[j]) != (i == j ? one : zero))
          return {false, cat("round ", round, ": Gram entry (", i, ",", j,
                             ") is not exact")};
    for (const auto& v : vs) {
      FinVector resid = v;
      for (const auto& b : basis) resid = resid - b.scaled(inner(v, b));
      if (!resid.is_zero())
        return {false, cat("round ", round, ": an input does not reconstruct "
                           "from its projections")};
    }
  }
  return {true, cat(rounds, " orthonormalizations with exact identity Gram "
                            "matrices and exact reconstruction")};
}

Outcome body_extend_pairs(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 10);
  for (long round = 0; round < rounds; ++round) {
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
      for (long i = 1; i <= total; ++i)
        x.set(i, Elem(rng.grid(-2, 2, 2)));
      if (x.is_zero()) x = FinVector::basis(1);
      raw.push_back(x);
    }
    auto xs = unitary::gram_schmidt(raw);
    std::vector<unitary::VectorPair> pairs;
    for (const auto& x : xs) pairs.push_back({x, q.apply(x)});

    auto r = unitary::extend_partial_isometry(pairs);
    for (const auto& pr : pairs)
      if (r.apply(pr.x) != pr.y)
        return {false, cat("round ", round, ": a prescribed image is missed")};
    if (!op_identity(unitary::compose(r.inverse(), r)))
      return {false, cat("round ", round, ": extension is not orthogonal")};
  }
  return {true, cat(rounds, " partial isometries extended with exact images "
                            "and exact orthogonality")};
}

Outcome body_block_paste(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 10);
  for (long round = 0; round < rounds; ++round) {
    std::vector<FinitaryOperator> blocks;
    long lo = 1 + (long)rng.below(3) - 1;
    long total = 0;
    std::size_t nb = 2 + rng.below(2);
    for (std::size_t i = 0; i < nb; ++i) {
      long size = 1 + (long)rng.below(2);
      blocks.push_back(random_block(rng, lo + total, size));
      total += size;
    }
    auto pasted = unitary::block_paste(blocks);
    long slot = blocks[0].lo();
    for (const auto& b : blocks) {
      for (long j = 0; j < b.size(); ++j) {
        auto col = b.column(b.lo() + j);
        FinVector expect;
        for (const auto& [i, e] : col.entries())
          expect.set(i - b.lo() + slot, e);
        if (!(pasted.apply(FinVector::basis(slot + j)) == expect))
          return {false, cat("round ", round, ": block content moved in "
                             "the paste")};
      }
      slot += b.size();
    }
    if (!op_identity(unitary::compose(pasted.inverse(), pasted)))
      return {false, cat("round ", round, ": pasted operator lost "
                         "orthogonality")};
  }
  return {true, cat(rounds, " pastes preserve every block and stay "
                            "orthogonal")};
}

Outcome body_shift_window(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 10);
  for (long round = 0; round < rounds; ++round) {
    // Only slots of the full window size 2k+1 can match; sprinkle in
    // wrong-size decoys that the scan must skip.
    long k = (long)rng.below(2);
    long w = 2 * k + 1;
    std::size_t members = 1 + rng.below(2);
    std::size_t slots = 2 + rng.below(3);
    std::size_t planted = rng.below(slots);
    unitary::BlockSchedule h;
    long row = 1;
    for (std::size_t s = 0; s < slots; ++s) {
      long size = (s == planted || rng.coin()) ? w : w + 1;
      std::vector<FinitaryOperator> tuple;
      for (std::size_t m = 0; m < members; ++m)
        tuple.push_back(random_sized(rng, row, size));
      h.tuples.push_back(std::move(tuple));
      row += size;
    }
    std::vector<FinitaryOperator> targets;
    for (const auto& b : h.tuples[planted])
      targets.push_back(rebase(b, -k));

    long n = unitary::shift_conjugate_window(h, targets, k);
    if (n < 1 + k)
      return {false, cat("round ", round, ": shift exponent below the first "
                         "slot")};
    if (!unitary::shift_conjugate_matches(h, targets, k, n))
      return {false, cat("round ", round, ": reported exponent does not "
                         "match on the window")};
  }
  return {true, cat(rounds, " planted tuples found by the window scan with "
                            "verified matches")};
}

Outcome body_bergman_window(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 10);
  for (long round = 0; round < rounds; ++round) {
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
      return {false, cat("round ", round, ": r0^-1 r1^-1 residual does not "
                         "recompose the operator")};
    if (!f.r0.fixes_pointwise(1, k) || !f.residual.fixes_pointwise(1, k))
      return {false, cat("round ", round, ": first window not fixed")};
    if (!f.r1.fixes_pointwise(k + 1, 2 * k))
      return {false, cat("round ", round, ": second window not fixed")};
  }
  return {true, cat(rounds, " factorizations recompose exactly with correct "
                            "stabilizer memberships")};
}

// ---------------------------------------------------------- group bodies --

Outcome body_chain_metric(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 10);
  for (long round = 0; round < rounds; ++round) {
    auto g = pool_group(rng);
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

    std::size_t f = rng.below(g.size());
    std::size_t h = rng.below(g.size());
    auto d = group::chain_metric(g, chain, f, h);
    if (group::chain_metric(g, chain, h, f).distance != d.distance)
      return {false, cat("round ", round, ": chain distance asymmetric")};
    for (std::size_t a = 0; a < g.size(); ++a)
      if (group::chain_metric(g, chain, g.op(a, f), g.op(a, h)).distance !=
          d.distance)
        return {false, cat("round ", round, ": left translation by ", a,
                           " changes the distance")};
    std::size_t mid = rng.below(g.size());
    if (d.distance > group::chain_metric(g, chain, f, mid).distance +
                         group::chain_metric(g, chain, mid, h).distance)
      return {false, cat("round ", round, ": triangle inequality fails "
                         "through ", mid)};
  }
  return {true, cat(rounds, " chain metrics left-invariant and triangular "
                            "on the whole group")};
}

Outcome body_birkhoff_sandwich(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 10);
  for (long round = 0; round < rounds; ++round) {
    auto g = pool_group(rng);
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
      cur = all;
      sets.push_back(sorted_of(cur));
    }
    long first = -(long)rng.below(3);
    auto filt = group::Filtration::validated(g, first, sets);

    for (std::size_t g1 = 0; g1 < g.size(); ++g1)
      for (std::size_t g2 = 0; g2 < g.size(); ++g2) {
        auto bd = group::birkhoff_metric(g, filt, g1, g2);
        if (g1 == g2) {
          if (!bd.delta.is_zero() || !bd.d.is_zero())
            return {false, cat("round ", round, ": nonzero self distance")};
          continue;
        }
        if (bd.delta > Rat(2) * bd.d || bd.d > bd.delta)
          return {false, cat("round ", round, ": pair (", g1, ",", g2,
                             "): delta=", bd.delta.str(), " d=", bd.d.str(),
                             " escapes the sandwich")};
        if (group::birkhoff_metric(g, filt, g2, g1).d != bd.d)
          return {false, cat("round ", round, ": chained metric asymmetric")};
      }
  }
  return {true, cat(rounds, " filtrations: delta <= 2d <= 2 delta on every "
                            "pair of every group")};
}

Outcome body_cayley_width(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 5);
  for (long round = 0; round < rounds; ++round) {
    auto g = pool_group(rng);
    std::set<std::size_t> e{g.id};
    while (group::subgroup_closure(g, sorted_of(e)).size() < g.size()) {
      std::size_t a = rng.below(g.size());
      e.insert(a);
      e.insert(g.inv[a]);
    }
    auto es = sorted_of(e);
    std::size_t w = group::cayley_width(g, es);
    if (w != recompute_width(g, es))
      return {false, cat("round ", round, ": width ", w,
                         " differs from the ball recomputation")};
    if (w > g.size())
      return {false, cat("round ", round, ": width beyond the group order")};
  }
  return {true, cat(rounds, " generating sets; eccentricity matches the "
                            "ball growth exactly")};
}

Outcome body_pettis_square(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 5);
  for (long round = 0; round < rounds; ++round) {
    auto g = pool_group(rng);
    std::set<std::size_t> b{g.id};
    while (2 * b.size() <= g.size()) {
      std::size_t a = rng.below(g.size());
      b.insert(a);
      b.insert(g.inv[a]);
    }
    auto bs = sorted_of(b);
    auto sc = group::large_subset_square(g, bs);
    if (!sc.majority)
      return {false, cat("round ", round, ": majority subset not recognized")};
    if (!sc.square)
      return {false, cat("round ", round, ": pigeonhole failed on a "
                         "majority subset")};
    for (std::size_t x = 0; x < g.size(); ++x) {
      auto [p, q] = sc.factors[x];
      if (p < 0 || q < 0 || !b.count((std::size_t)p) ||
          !b.count((std::size_t)q) ||
          g.op((std::size_t)p, (std::size_t)q) != x)
        return {false, cat("round ", round, ": factor pair for ", x,
                           " does not verify")};
    }
  }
  return {true, cat(rounds, " majority subsets squared to the whole group "
                            "with verified factor pairs")};
}

Outcome body_induce_transfer(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 10);
  for (long round = 0; round < rounds; ++round) {
    auto g = pool_group(rng);
    std::size_t gen = 1 + rng.below(g.size() - 1);
    auto sub = group::subgroup_closure(g, {gen});
    auto trans = group::left_transversal(g, sub);

    std::size_t invol = 0;
    for (std::size_t a : sub)
      if (a != g.id && g.op(a, a) == g.id) invol = a;

    metric::RationalMetricSpace x = equilateral(2, Rat(1, 2));
    std::vector<std::vector<std::size_t>> act;
    if (invol != 0 && sub.size() == 2 && rng.coin()) {
      // The order-2 subgroup acts by the swap on a two point space.
      for (std::size_t a : sub)
        act.push_back(a == g.id ? Perm{0, 1} : Perm{1, 0});
    }
    if (act.empty()) {
      x = as_space(rnd_premetric(rng, rng.range(2, 3), 2, true));
      for (std::size_t i = 0; i < sub.size(); ++i)
        act.push_back(identity_perm((std::size_t)x.d.size()));
    }

    auto ia = group::induce_action(g, sub, trans, x, act);
    std::size_t pts = ia.points.size();
    std::size_t plimit = pts < 24 ? pts : 24;
    for (std::size_t a = 0; a < g.size(); ++a) {
      const auto& pa = ia.action[a];
      for (std::size_t p = 0; p < plimit; ++p) {
        for (std::size_t q = p + 1; q < plimit; ++q)
          if (ia.space.d.at((int)pa[p], (int)pa[q]) !=
              ia.space.d.at((int)p, (int)q))
            return {false, cat("round ", round, ": element ", a,
                               " distorts the induced metric")};
        if (ia.space.d.at((int)p, (int)pa[p]) > ia.orbit_diameter[p])
          return {false, cat("round ", round, ": displacement beyond the "
                             "orbit diameter")};
      }
    }
    for (int probe = 0; probe < 6; ++probe) {
      std::size_t a = rng.below(g.size());
      std::size_t b2 = rng.below(g.size());
      auto lhs = ia.action[g.op(a, b2)];
      auto rhs = tree::perm_compose(ia.action[a], ia.action[b2]);
      if (lhs != rhs)
        return {false, cat("round ", round, ": induced action is not a "
                           "homomorphism at (", a, ",", b2, ")")};
    }
  }
  return {true, cat(rounds, " induced actions isometric, homomorphic, and "
                            "inside their orbit diameters")};
}

// ------------------------------------------------------- circular bodies --

Outcome body_betweenness(Rng& rng, long samples) {
  for (long round = 0; round < samples; ++round) {
    auto pts = grid_points(rng, 3, 97);
    Rat x = pts[0], y = pts[1], z = pts[2];
    if (rng.coin()) std::swap(x, y);
    if (rng.coin()) std::swap(y, z);
    bool b = circular::betweenness(x, y, z);
    Rat r = rng.grid(0, 96, 97);
    if (circular::betweenness(x + r, y + r, z + r) != b)
      return {false, cat("round ", round, ": rotation by ", r.str(),
                         " changes betweenness")};
    if (b != circular::betweenness(y, z, x))
      return {false, cat("round ", round, ": cyclic shift changes the "
                         "relation")};
    if (b && circular::betweenness(x, z, y))
      return {false, cat("round ", round, ": both orientations hold at once")};
  }
  return {true, cat(samples, " triples invariant under rotation and cyclic "
                            "shifts, never both orientations")};
}

Outcome body_config_order(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 2);
  for (long round = 0; round < rounds; ++round) {
    std::size_t n = 3 + rng.below(4);
    auto pts = grid_points(rng, n, 64);
    if (!circular::is_circular_config(pts))
      return {false, cat("round ", round, ": ascending points rejected")};
    std::size_t i = rng.below(n);
    std::size_t j = (i + 1 + rng.below(n - 1)) % n;
    std::swap(pts[i], pts[j]);
    if (circular::is_circular_config(pts))
      return {false, cat("round ", round, ": a transposition of ", n,
                         " points was accepted")};
  }
  return {true, cat(rounds, " ascending tuples accepted; every transposition "
                            "rejected")};
}

Outcome body_plmaps(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 5);
  for (long round = 0; round < rounds; ++round) {
    std::size_t n = 2 + rng.below(3);
    auto ins = grid_points(rng, n, 64);
    auto outs = grid_points(rng, n, 64);
    std::size_t rot = rng.below(n);
    std::vector<std::pair<Rat, Rat>> pairs;
    for (std::size_t i = 0; i < n; ++i)
      pairs.push_back({ins[i], outs[(i + rot) % n]});
    auto f = circular::PLCircleMap::validated(pairs);
    auto finv = f.inverse();

    auto probes = grid_points(rng, 3, 97);
    for (const Rat& u : probes)
      if (circular::mod1(finv.eval(f.eval(u))) != circular::mod1(u))
        return {false, cat("round ", round, ": inverse roundtrip misses at ",
                           u.str())};
    bool bin = circular::betweenness(probes[0], probes[1], probes[2]);
    bool bout = circular::betweenness(f.eval(probes[0]), f.eval(probes[1]),
                                      f.eval(probes[2]));
    if (bin != bout)
      return {false, cat("round ", round, ": orientation not preserved on "
                         "probes")};
  }
  return {true, cat(rounds, " random maps invert exactly and preserve the "
                            "cyclic order")};
}

Outcome body_produkt_solvable(Rng& rng, long samples) {
  long rounds = at_least(2, samples / 5);
  long pinned = 0;
  for (long round = 0; round < rounds; ++round) {
    std::size_t n = 1 + rng.below(4);
    std::size_t m = 1 + rng.below(4);
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
      return {false, cat("round ", round, ": a solvable instance was "
                         "declared infeasible: ", res.reason)};
    if (res.pinned) ++pinned;
    for (std::size_t i = 0; i < n; ++i)
      if (circular::mod1(res.h.eval(res.f.eval(xs[i]))) !=
          circular::mod1(gs[i]))
        return {false, cat("round ", round, ": certificate misses image ", i)};
    for (const Rat& y : ys)
      if (circular::mod1(res.f.eval(y)) != circular::mod1(y))
        return {false, cat("round ", round, ": f moves a fixed anchor")};
    for (const Rat& x : xs)
      if (circular::mod1(res.h.eval(x)) != circular::mod1(x))
        return {false, cat("round ", round, ": h moves a moved-tuple point")};
  }
  return {true, cat(rounds, " solvable instances factored (", pinned,
                    " pinned), certificates exact")};
}

// ----------------------------------------------------------- the runner --

const std::vector<SuiteCheck>& module_checks(const std::string& module) {
  static const std::map<std::string, std::vector<SuiteCheck>> table = {
      {"metric",
       {{"suite.metric.d1_bounds", "Kantorovich duality", body_d1_bounds},
        {"suite.metric.glue_trace", "premetric gluing", body_glue_trace},
        {"suite.metric.net_round", "epsilon-net rounding", body_net_round},
        {"suite.metric.geodesic_axioms", "Menger convexity",
         body_geodesic_axioms},
        {"suite.metric.holder_bound", "Holder composition", body_holder_bound},
        {"suite.metric.lipschitz_orbit", "large-scale Lipschitz bound",
         body_lipschitz_orbit}}},
      {"urysohn",
       {{"suite.urysohn.katetov_valid", "Katetov extension",
         body_katetov_valid},
        {"suite.urysohn.amalgam_copies", "Urysohn amalgamation",
         body_amalgam_copies},
        {"suite.urysohn.factor4_cert", "four-factor stabilizer width",
         body_factor4_cert},
        {"suite.urysohn.extend_closure", "Solecki finite extension",
         body_extend_closure},
        {"suite.urysohn.width_certificate", "Bergman width",
         body_width_certificate}}},
      {"tree",
       {{"suite.tree.classify_struct", "Serre dichotomy", body_classify_struct},
        {"suite.tree.word_axis", "Serre dichotomy", body_word_axis},
        {"suite.tree.cm_disjoint", "Culler-Morgan disjoint axes",
         body_cm_disjoint},
        {"suite.tree.cm_crossing", "Culler-Morgan crossing axes",
         body_cm_crossing},
        {"suite.tree.serre_fixed", "Serre common fixed point",
         body_serre_fixed},
        {"suite.tree.macpherson_triple", "MacPherson triple intersection",
         body_macpherson_triple}}},
      {"unitary",
       {{"suite.unitary.gram_schmidt", "Gram-Schmidt", body_gram_schmidt},
        {"suite.unitary.extend_pairs", "isometry extension",
         body_extend_pairs},
        {"suite.unitary.block_paste", "block pasting", body_block_paste},
        {"suite.unitary.shift_window", "bilateral shift window",
         body_shift_window},
        {"suite.unitary.bergman_window", "Bergman factorization",
         body_bergman_window}}},
      {"group",
       {{"suite.group.chain_metric", "Birkhoff-Kakutani chain",
         body_chain_metric},
        {"suite.group.birkhoff_sandwich", "Birkhoff-Kakutani sandwich",
         body_birkhoff_sandwich},
        {"suite.group.cayley_width", "Cayley eccentricity", body_cayley_width},
        {"suite.group.pettis_square", "Pettis pigeonhole", body_pettis_square},
        {"suite.group.induce_transfer", "finite-index induction",
         body_induce_transfer}}},
      {"circular",
       {{"suite.circular.betweenness", "cyclic betweenness", body_betweenness},
        {"suite.circular.config_order", "cyclic order axioms",
         body_config_order},
        {"suite.circular.plmaps", "piecewise linear circle maps", body_plmaps},
        {"suite.circular.produkt_solvable", "stabilizer product width",
         body_produkt_solvable}}},
  };
  auto it = table.find(module);
  if (it == table.end())
    throw Error(ErrorKind::Parse, "unknown suite module: " + module);
  return it->second;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

unsigned thread_cap() {
  if (const char* env = std::getenv("OBKIT_THREADS")) {
    long v = std::atol(env);
    if (v >= 1) return (unsigned)std::min<long>(v, 64);
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? std::min(hc, 8u) : 1u;
}

}  // namespace

json run_suite(const std::string& module, const json& request) {
  static const std::vector<std::string> all_modules = {
      "metric", "urysohn", "tree", "unitary", "group", "circular"};

  std::uint64_t seed = 0;
  if (auto it = request.find("seed"); it != request.end()) {
    if (it->is_number_unsigned())
      seed = it->get<std::uint64_t>();
    else if (it->is_number_integer() && it->get<long long>() >= 0)
      seed = (std::uint64_t)it->get<long long>();
    else
      throw Error(ErrorKind::Parse, "seed must be a nonnegative integer");
  }
  long samples = 50;
  if (auto it = request.find("samples"); it != request.end()) {
    if (!it->is_number_integer() || it->get<long long>() < 1)
      throw Error(ErrorKind::Parse, "samples must be a positive integer");
    samples = (long)it->get<long long>();
  }
  if (samples > 100000)
    throw Error(ErrorKind::Budget, "sample budget too large (cap 100000)");
  bool timing = request.value("timing", false);

  std::vector<std::string> modules;
  if (module == "all")
    modules = all_modules;
  else
    modules.push_back(module);

  std::vector<const SuiteCheck*> jobs;
  for (const auto& m : modules)
    for (const auto& c : module_checks(m)) jobs.push_back(&c);

  std::vector<CheckResult> rows(jobs.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= jobs.size()) return;
      const SuiteCheck& c = *jobs[i];
      Rng rng(seed ^ fnv1a(c.name));
      auto start = std::chrono::steady_clock::now();
      Outcome out{false, ""};
      try {
        out = c.body(rng, samples);
      } catch (const Error& err) {
        out = {false, cat("unexpected ", error_kind_name(err.kind()),
                          " error: ", err.what())};
      } catch (const std::exception& ex) {
        out = {false, cat("unexpected error: ", ex.what())};
      }
      long micros = 0;
      if (timing)
        micros = (long)std::chrono::duration_cast<std::chrono::microseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();
      rows[i] = {c.name, c.lemma, out.ok ? "pass" : "fail", out.witness,
                 micros};
    }
  };

  unsigned nthreads = std::min<std::size_t>(thread_cap(), jobs.size());
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < nthreads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  json data = json::object();
  data["seed"] = seed;
  data["samples"] = samples;
  data["modules"] = modules;
  return make_report("suite." + module, std::move(rows), std::move(data));
}

}  // namespace obkit::checks
