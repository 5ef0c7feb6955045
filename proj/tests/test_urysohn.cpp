#include "obkit/urysohn.hpp"

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "doctest.h"
#include "obkit/rng.hpp"
#include "util.hpp"

using namespace obkit;
using namespace obkit::urysohn;
using metric::DistanceMatrix;
using metric::RationalMetricSpace;

namespace {

RationalMetricSpace space(std::vector<std::vector<Rat>> e) {
  DistanceMatrix m = DistanceMatrix::validated(std::move(e));
  bool s = m.strict();
  return RationalMetricSpace::make(std::move(m), s);
}

std::vector<std::vector<Rat>> zeros(std::size_t n) {
  return std::vector<std::vector<Rat>>(n, std::vector<Rat>(n, Rat(0)));
}

void put(std::vector<std::vector<Rat>>& e, std::size_t i, std::size_t j, Rat v) {
  e[i][j] = v;
  e[j][i] = v;
}

RationalMetricSpace equilateral(std::size_t n, Rat d) {
  auto e = zeros(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) put(e, i, j, d);
  return space(std::move(e));
}

// Two isometric copies of a block at uniform cross distance 1.
RationalMetricSpace two_copies(const DistanceMatrix& a) {
  std::size_t n = (std::size_t)a.size();
  auto e = zeros(2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      e[i][j] = a.at((int)i, (int)j);
      e[n + i][n + j] = a.at((int)i, (int)j);
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) put(e, i, n + j, Rat(1));
  return space(std::move(e));
}

template <class Fn>
ErrorKind thrown_kind(Fn&& fn) {
  try {
    fn();
  } catch (const Error& err) {
    return err.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Internal;
}

std::size_t applied(const PartialIsometry& p, std::size_t a) {
  for (auto [u, v] : p.map)
    if (u == a) return v;
  FAIL("map misses point ", a);
  return 0;
}

Rat sd(const RationalMetricSpace& s, std::size_t i, std::size_t j) {
  return s.d.at((int)i, (int)j);
}

using Perm = std::vector<std::size_t>;

Perm pcompose(const Perm& a, const Perm& b) {
  Perm c(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) c[i] = a[b[i]];
  return c;
}

Perm pinv(const Perm& a) {
  Perm c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[a[i]] = i;
  return c;
}

std::vector<Perm> sym3() {
  return {{0, 1, 2}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}, {1, 2, 0}, {2, 0, 1}};
}

}  // namespace

TEST_CASE("katetov enumeration matches brute force") {
  // One point, half-integer grid: distances 0, 1/2, 1 to the new point.
  auto one = katetov_extensions(equilateral(1, Rat(0)), 2);
  CHECK(one.size() == 3);
  CHECK(one[0].values[0] == Rat(0));
  CHECK(one[1].values[0] == Rat(1, 2));
  CHECK(one[2].values[0] == Rat(1));

  // Two points at distance 1 on the integer grid.
  auto e2 = zeros(2);
  put(e2, 0, 1, Rat(1));
  auto two = katetov_extensions(space(e2), 1);
  REQUIRE(two.size() == 3);
  CHECK(two[0].values == std::vector<Rat>{Rat(0), Rat(1)});
  CHECK(two[1].values == std::vector<Rat>{Rat(1), Rat(0)});
  CHECK(two[2].values == std::vector<Rat>{Rat(1), Rat(1)});

  Rng rng(411);
  for (int round = 0; round < 12; ++round) {
    int n = rng.range(1, 3);
    long denom = rng.range(2, 3);
    DistanceMatrix m = testutil::random_premetric(rng, n, denom);
    bool srt = m.strict();
    RationalMetricSpace x = RationalMetricSpace::make(std::move(m), srt);

    // Lex-ordered brute force over the whole grid.
    std::vector<std::vector<Rat>> want;
    std::vector<long> k(n, 0);
    while (true) {
      std::vector<Rat> f;
      for (int i = 0; i < n; ++i) f.push_back(Rat(k[i], denom));
      bool ok = true;
      for (int i = 0; i < n && ok; ++i)
        for (int j = 0; j < n && ok; ++j) {
          Rat d = sd(x, (std::size_t)i, (std::size_t)j);
          if ((f[i] - f[j]).abs() > d || f[i] + f[j] < d) ok = false;
        }
      if (ok) want.push_back(f);
      int i = n;
      while (i > 0 && ++k[i - 1] > denom) k[--i] = 0;
      if (i == 0) break;
    }

    auto got = katetov_extensions(x, denom);
    REQUIRE(got.size() == want.size());
    for (std::size_t t = 0; t < want.size(); ++t)
      CHECK(got[t].values == want[t]);

    // The constant-one profile is always admissible, and every profile
    // produces a valid one-point extension carrying the right distances.
    bool has_one = false;
    for (const auto& f : got) {
      bool all_one = true;
      for (const Rat& v : f.values)
        if (v != Rat(1)) all_one = false;
      if (all_one) has_one = true;
      RationalMetricSpace y = extend_with(x, f);
      REQUIRE(y.d.size() == n + 1);
      for (int i = 0; i < n; ++i)
        CHECK(sd(y, (std::size_t)i, (std::size_t)n) == f.values[(std::size_t)i]);
    }
    CHECK(has_one);
  }

  auto bad = zeros(2);
  put(bad, 0, 1, Rat(1));
  CHECK(thrown_kind([&] {
          extend_with(space(bad), KatetovFunction{{Rat(0), Rat(0)}});
        }) == ErrorKind::Invalid);
  CHECK(thrown_kind([&] { katetov_extensions(equilateral(1, Rat(0)), 0); }) ==
        ErrorKind::Invalid);
}

TEST_CASE("partial isometry validation") {
  auto e = zeros(3);
  put(e, 0, 1, Rat(1, 4));
  put(e, 0, 2, Rat(1, 2));
  put(e, 1, 2, Rat(1, 2));
  RationalMetricSpace x = space(e);

  validate_partial_isometry(x, {{{0, 0}, {1, 1}}});
  validate_partial_isometry(x, {{{0, 1}, {1, 0}}});
  validate_partial_isometry(x, {});
  CHECK(thrown_kind([&] { validate_partial_isometry(x, {{{0, 1}, {1, 2}}}); }) ==
        ErrorKind::Invalid);
  CHECK(thrown_kind([&] { validate_partial_isometry(x, {{{0, 1}, {0, 2}}}); }) ==
        ErrorKind::Invalid);
  CHECK(thrown_kind([&] { validate_partial_isometry(x, {{{0, 2}, {1, 2}}}); }) ==
        ErrorKind::Invalid);
  CHECK(thrown_kind([&] { validate_partial_isometry(x, {{{0, 3}}}); }) ==
        ErrorKind::Invalid);
}

TEST_CASE("amalgamation pins") {
  // Copying a single anchored point: x at 0, spectator at 1, anchor at 2.
  auto e = zeros(3);
  put(e, 0, 1, Rat(1, 2));
  put(e, 0, 2, Rat(1));
  put(e, 1, 2, Rat(1));
  Amalgam a = amalgamate_over(space(e), {0}, {}, {2});
  REQUIRE(a.space.d.size() == 4);
  REQUIRE(a.xprime == std::vector<std::size_t>{3});
  CHECK(a.zprime.empty());
  CHECK(sd(a.space, 2, 3) == Rat(1));   // anchor keeps its distance
  CHECK(sd(a.space, 0, 3) == Rat(1));   // the original is pushed to 1
  CHECK(sd(a.space, 1, 3) == Rat(1));   // spectator route through anchors

  // A chain x - y - z with the copy of z landing at distance 1 from z.
  auto c = zeros(3);
  put(c, 0, 1, Rat(1));
  put(c, 1, 2, Rat(1, 2));
  put(c, 0, 2, Rat(1, 2));
  Amalgam b = amalgamate_over(space(c), {0}, {2}, {1});
  REQUIRE(b.space.d.size() == 5);
  REQUIRE(b.xprime == std::vector<std::size_t>{3});
  REQUIRE(b.zprime == std::vector<std::size_t>{4});
  CHECK(sd(b.space, 3, 4) == Rat(1, 2));  // copies mirror d(x, z)
  CHECK(sd(b.space, 2, 4) == Rat(1));     // z to its copy through y
  CHECK(sd(b.space, 2, 3) == Rat(1));
  CHECK(sd(b.space, 0, 3) == Rat(1));
  CHECK(sd(b.space, 0, 4) == Rat(1));
  CHECK(sd(b.space, 1, 3) == Rat(1));     // anchor sees the copy like x
  CHECK(sd(b.space, 1, 4) == Rat(1, 2));  // anchor sees the copy like z

  // Preconditions: anchors at distance 1, and the moved tuple disjoint
  // from the anchor copy.
  CHECK(thrown_kind([&] { amalgamate_over(space(c), {2}, {}, {1}); }) ==
        ErrorKind::Invalid);
  CHECK(thrown_kind([&] { amalgamate_over(space(c), {0}, {1}, {1}); }) ==
        ErrorKind::Invalid);
}

TEST_CASE("amalgamation random clause table") {
  Rng rng(5117);
  for (int round = 0; round < 20; ++round) {
    int n0 = rng.range(2, 4);
    int n1 = rng.range(1, 2);
    DistanceMatrix a = testutil::random_premetric(rng, n0, 4);
    DistanceMatrix b = testutil::random_premetric(rng, n1, 4);
    std::size_t n = (std::size_t)(n0 + n1);
    auto e = zeros(n);
    for (int i = 0; i < n0; ++i)
      for (int j = 0; j < n0; ++j) e[(std::size_t)i][(std::size_t)j] = a.at(i, j);
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n1; ++j)
        e[(std::size_t)(n0 + i)][(std::size_t)(n0 + j)] = b.at(i, j);
    for (int i = 0; i < n0; ++i)
      for (int j = 0; j < n1; ++j)
        put(e, (std::size_t)i, (std::size_t)(n0 + j), Rat(1));
    RationalMetricSpace x = space(e);

    std::vector<std::size_t> base(static_cast<std::size_t>(n0));
    for (std::size_t i = 0; i < base.size(); ++i) base[i] = i;
    rng.shuffle(base);
    std::size_t mx = (std::size_t)rng.range(1, std::min(n0, 2));
    std::vector<std::size_t> xbar(base.begin(), base.begin() + (long)mx);
    rng.shuffle(base);
    std::size_t mz = (std::size_t)rng.range(0, std::min(n0, 2));
    std::vector<std::size_t> zbar(base.begin(), base.begin() + (long)mz);
    std::vector<std::size_t> ybar;
    for (int i = 0; i < n1; ++i)
      if (rng.coin()) ybar.push_back((std::size_t)(n0 + i));

    Amalgam am = amalgamate_over(x, xbar, zbar, ybar);
    REQUIRE(am.space.d.size() == (int)(n + mx + mz));

    std::set<std::size_t> xs(xbar.begin(), xbar.end());
    std::set<std::size_t> zs(zbar.begin(), zbar.end());
    std::set<std::size_t> ys(ybar.begin(), ybar.end());
    auto cap = [](Rat v) { return v > Rat(1) ? Rat(1) : v; };

    for (std::size_t i = 0; i < mx; ++i)
      for (std::size_t j = 0; j < mx; ++j)
        if (i != j)
          CHECK(sd(am.space, am.xprime[i], am.xprime[j]) ==
                sd(x, xbar[i], xbar[j]));
    for (std::size_t i = 0; i < mz; ++i)
      for (std::size_t j = 0; j < mz; ++j)
        if (i != j)
          CHECK(sd(am.space, am.zprime[i], am.zprime[j]) ==
                sd(x, zbar[i], zbar[j]));
    for (std::size_t i = 0; i < mx; ++i)
      for (std::size_t j = 0; j < mz; ++j)
        CHECK(sd(am.space, am.xprime[i], am.zprime[j]) ==
              sd(x, xbar[i], zbar[j]));

    for (std::size_t u = 0; u < n; ++u) {
      if (ys.count(u)) {
        for (std::size_t i = 0; i < mx; ++i)
          CHECK(sd(am.space, u, am.xprime[i]) == sd(x, xbar[i], u));
        for (std::size_t j = 0; j < mz; ++j)
          CHECK(sd(am.space, u, am.zprime[j]) == sd(x, zbar[j], u));
      } else if (xs.count(u)) {
        for (std::size_t i = 0; i < mx; ++i)
          CHECK(sd(am.space, u, am.xprime[i]) == Rat(1));
        for (std::size_t j = 0; j < mz; ++j)
          CHECK(sd(am.space, u, am.zprime[j]) == Rat(1));
      } else if (zs.count(u)) {
        for (std::size_t i = 0; i < mx; ++i)
          CHECK(sd(am.space, u, am.xprime[i]) == Rat(1));
        for (std::size_t j = 0; j < mz; ++j) {
          Rat best(1);
          for (std::size_t yl : ybar)
            best = std::min(best, cap(sd(x, u, yl) + sd(x, yl, zbar[j])));
          CHECK(sd(am.space, u, am.zprime[j]) == best);
        }
      } else {
        std::vector<std::size_t> anchors;
        for (std::size_t w = 0; w < n; ++w)
          if (xs.count(w) || zs.count(w) || ys.count(w)) anchors.push_back(w);
        for (std::size_t wnew = n; wnew < n + mx + mz; ++wnew) {
          Rat best(1);
          for (std::size_t w : anchors)
            best = std::min(best, cap(sd(x, u, w) + sd(am.space, w, wnew)));
          CHECK(sd(am.space, u, wnew) == best);
        }
      }
    }
  }
}

TEST_CASE("four factor pins") {
  // Identity map: the whole dance still goes through fresh copies.
  FourFactor idf = four_factor_decomposition(equilateral(2, Rat(1, 2)), {0},
                                             {{{0, 0}}});
  REQUIRE(idf.space.d.size() == 5);
  CHECK(applied(idf.k, applied(idf.f, applied(idf.h, applied(idf.g, 0)))) == 0);

  // Moving one corner of a triangle onto another.
  FourFactor tri = four_factor_decomposition(equilateral(3, Rat(1, 2)), {0},
                                             {{{0, 1}}});
  REQUIRE(tri.space.d.size() == 6);
  CHECK(tri.zbar == std::vector<std::size_t>{1});
  CHECK(tri.ybar == std::vector<std::size_t>{3});
  CHECK(tri.xprime == std::vector<std::size_t>{4});
  CHECK(tri.zprime == std::vector<std::size_t>{5});
  CHECK(applied(tri.h, 1) == 5);
  CHECK(applied(tri.f, 5) == 4);
  CHECK(applied(tri.k, 4) == 0);
  CHECK(sd(tri.space, 3, 0) == Rat(1));  // fresh anchor is far from the base
  CHECK(sd(tri.space, 3, 2) == Rat(1));

  // Repeated anchor indices collapse into one assignment per map.
  FourFactor dup = four_factor_decomposition(equilateral(2, Rat(1, 2)), {0, 0},
                                             {{{0, 0}}});
  REQUIRE(dup.space.d.size() == 8);
  CHECK(applied(dup.k, applied(dup.f, applied(dup.h, 0))) == 0);

  // The map must cover the anchor tuple.
  CHECK(thrown_kind([&] {
          four_factor_decomposition(equilateral(3, Rat(1, 2)), {0}, {{{1, 2}}});
        }) == ErrorKind::Invalid);
}

TEST_CASE("four factor random certificates") {
  Rng rng(90210);
  for (int round = 0; round < 15; ++round) {
    int na = rng.range(1, 3);
    DistanceMatrix a = testutil::random_premetric(rng, na, 4, true);
    RationalMetricSpace x = two_copies(a);
    std::size_t m = (std::size_t)rng.range(1, std::min(na, 2));
    std::vector<std::size_t> base(static_cast<std::size_t>(na));
    for (std::size_t i = 0; i < base.size(); ++i) base[i] = i;
    rng.shuffle(base);
    std::vector<std::size_t> xbar(base.begin(), base.begin() + (long)m);

    PartialIsometry g;
    bool ident = rng.coin();
    for (std::size_t xi : xbar)
      g.map.push_back({xi, ident ? xi : xi + (std::size_t)na});

    FourFactor ff = four_factor_decomposition(x, xbar, g);
    REQUIRE(ff.space.d.size() == (int)(2 * (std::size_t)na + 3 * m));
    validate_partial_isometry(ff.space, ff.h);
    validate_partial_isometry(ff.space, ff.f);
    validate_partial_isometry(ff.space, ff.k);
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t chased = applied(
          ff.k, applied(ff.f, applied(ff.h, applied(ff.g, xbar[i]))));
      CHECK(chased == xbar[i]);
    }
    // The base keeps its geometry inside the amalgam.
    for (std::size_t i = 0; i < 2 * (std::size_t)na; ++i)
      for (std::size_t j = 0; j < 2 * (std::size_t)na; ++j)
        CHECK(sd(ff.space, i, j) == sd(x, i, j));
  }
}

TEST_CASE("isometry extension search") {
  // A total map comes back untouched.
  ExtensionResult rot = extend_partial_isometry(
      equilateral(3, Rat(1, 2)), {{{0, 1}, {1, 2}, {2, 0}}}, 2, 3);
  REQUIRE(rot.space.d.size() == 3);
  CHECK(rot.map == std::vector<std::size_t>{1, 2, 0});

  // A swap of two points closes without growing.
  auto e2 = zeros(2);
  put(e2, 0, 1, Rat(1, 2));
  ExtensionResult sw = extend_partial_isometry(space(e2), {{{0, 1}}}, 2, 4);
  REQUIRE(sw.space.d.size() == 2);
  CHECK(sw.map == std::vector<std::size_t>{1, 0});

  // An isosceles pair forces a fourth point before the map can close.
  auto e3 = zeros(3);
  put(e3, 0, 1, Rat(1, 4));
  put(e3, 0, 2, Rat(1, 2));
  put(e3, 1, 2, Rat(1, 2));
  RationalMetricSpace iso = space(e3);
  CHECK(thrown_kind([&] { extend_partial_isometry(iso, {{{1, 2}}}, 4, 3); }) ==
        ErrorKind::Budget);
  ExtensionResult grown = extend_partial_isometry(iso, {{{1, 2}}}, 4, 6);
  CHECK(grown.space.d.size() >= 4);
  CHECK(grown.space.d.size() <= 6);
  CHECK(grown.map[1] == 2);
  std::size_t gn = (std::size_t)grown.space.d.size();
  for (std::size_t i = 0; i < gn; ++i)
    for (std::size_t j = 0; j < gn; ++j)
      CHECK(sd(grown.space, i, j) ==
            sd(grown.space, grown.map[i], grown.map[j]));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(sd(grown.space, i, j) == sd(iso, i, j));

  CHECK(thrown_kind([&] { extend_partial_isometry(iso, {{{1, 2}}}, 2, 6); }) ==
        ErrorKind::Invalid);
  CHECK(thrown_kind([&] { extend_partial_isometry(iso, {{{1, 2}}}, 4, 2); }) ==
        ErrorKind::Invalid);
}

TEST_CASE("isometry extension random rounds") {
  Rng rng(3434);
  for (int round = 0; round < 12; ++round) {
    int n = rng.range(2, 3);
    DistanceMatrix m = testutil::random_premetric(rng, n, 2, true);
    bool srt = m.strict();
    RationalMetricSpace x = RationalMetricSpace::make(std::move(m), srt);

    PartialIsometry p;
    std::size_t a0 = (std::size_t)rng.range(0, n - 1);
    std::size_t b0 = (std::size_t)rng.range(0, n - 1);
    p.map.push_back({a0, b0});
    std::size_t a1 = (std::size_t)rng.range(0, n - 1);
    std::size_t b1 = (std::size_t)rng.range(0, n - 1);
    PartialIsometry wider = p;
    wider.map.push_back({a1, b1});
    try {
      validate_partial_isometry(x, wider);
      p = wider;
    } catch (const Error&) {
    }

    ExtensionResult res = extend_partial_isometry(x, p, 2, 16);
    std::size_t rn = (std::size_t)res.space.d.size();
    REQUIRE(rn <= 16);
    std::set<std::size_t> image(res.map.begin(), res.map.end());
    CHECK(image.size() == rn);
    for (auto [a, b] : p.map) CHECK(res.map[a] == b);
    for (std::size_t i = 0; i < rn; ++i)
      for (std::size_t j = 0; j < rn; ++j)
        CHECK(sd(res.space, i, j) == sd(res.space, res.map[i], res.map[j]));
  }
}

TEST_CASE("oligomorphy witness wraps the net") {
  auto net = oligomorphy_witness(2, Rat(1, 4));
  CHECK(net.size() == 5);
  CHECK(thrown_kind([&] { oligomorphy_witness(0, Rat(1, 4)); }) ==
        ErrorKind::Invalid);
}

TEST_CASE("width decomposition on the full symmetric group") {
  RationalMetricSpace x = equilateral(3, Rat(1, 2));
  IsometryAction action{x, sym3()};

  // A ball larger than the space turns every factor trivial.
  WidthDecomposition wide = width_decomposition(action, {0}, Rat(3));
  CHECK(wide.u.size() == 6);
  REQUIRE(wide.h.size() == 1);
  CHECK(action.elements[wide.h[0]] == Perm{0, 1, 2});
  REQUIRE(wide.certificate.size() == 6);

  // A ball that only sees the stabilizer of the anchor.
  WidthDecomposition wd = width_decomposition(action, {0}, Rat(1, 2));
  CHECK(wd.u.size() == 2);
  for (std::size_t u : wd.u) CHECK(action.elements[u][0] == 0);
  CHECK(wd.h.size() == 2);
  REQUIRE(wd.certificate.size() == 6);

  for (const WidthDecomposition* out : {&wide, &wd}) {
    std::set<std::size_t> uset(out->u.begin(), out->u.end());
    std::set<std::size_t> hset(out->h.begin(), out->h.end());
    std::set<std::size_t> covered;
    for (const WidthFactors& c : out->certificate) {
      CHECK(uset.count(c.u1));
      CHECK(uset.count(c.u2));
      CHECK(uset.count(c.u3));
      CHECK(hset.count(c.h));
      Perm recon = pcompose(
          action.elements[c.u1],
          pcompose(pinv(action.elements[c.u2]),
                   pcompose(action.elements[c.h], pinv(action.elements[c.u3]))));
      CHECK(recon == action.elements[c.f]);
      covered.insert(c.f);
    }
    CHECK(covered.size() == 6);
  }
}

TEST_CASE("width decomposition input screening") {
  RationalMetricSpace x = equilateral(3, Rat(1, 2));
  CHECK(thrown_kind([&] {
          width_decomposition({x, {{0, 1, 2}, {1, 2, 0}}}, {0}, Rat(1, 2));
        }) == ErrorKind::Invalid);
  CHECK(thrown_kind([&] {
          width_decomposition({x, {{0, 0, 1}}}, {0}, Rat(1, 2));
        }) == ErrorKind::Invalid);
  CHECK(thrown_kind([&] {
          width_decomposition({x, sym3()}, {0}, Rat(0));
        }) == ErrorKind::Invalid);
  CHECK(thrown_kind([&] {
          width_decomposition({x, sym3()}, {}, Rat(1, 2));
        }) == ErrorKind::Invalid);

  auto e = zeros(3);
  put(e, 0, 1, Rat(1, 4));
  put(e, 0, 2, Rat(1, 2));
  put(e, 1, 2, Rat(1, 2));
  CHECK(thrown_kind([&] {
          width_decomposition({space(e), {{0, 1, 2}, {2, 1, 0}}}, {0},
                              Rat(1, 2));
        }) == ErrorKind::Invalid);

  std::vector<std::size_t> long_tuple(12, 0);
  CHECK(thrown_kind([&] {
          width_decomposition({x, {{0, 1, 2}}}, long_tuple, Rat(1, 2));
        }) == ErrorKind::Budget);
}
