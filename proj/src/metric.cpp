#include "obkit/metric.hpp"

#include <algorithm>
#include <sstream>

#include "obkit/error.hpp"
#include "obkit/lp.hpp"

namespace obkit::metric {

namespace {

std::string pair_detail(const char* what, int i, int j, const Rat& v) {
  std::ostringstream os;
  os << what << " at (" << i << "," << j << "): " << v.str();
  return os.str();
}

Rat rat_pow(const Rat& base, long k) {
  Rat r(1);
  for (long i = 0; i < k; ++i) r = r * base;
  return r;
}

}  // namespace

std::optional<Violation> DistanceMatrix::find_violation(
    const std::vector<std::vector<Rat>>& entries) {
  const int n = (int)entries.size();
  if (n == 0) return Violation{"shape", {-1, -1, -1}, "matrix is empty"};
  for (int i = 0; i < n; ++i) {
    if ((int)entries[i].size() != n) {
      std::ostringstream os;
      os << "row " << i << " has " << entries[i].size() << " entries, expected " << n;
      return Violation{"shape", {i, -1, -1}, os.str()};
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!entries[i][i].is_zero())
      return Violation{"diagonal", {i, -1, -1}, pair_detail("nonzero diagonal", i, i, entries[i][i])};
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (entries[i][j].sign() < 0 || entries[i][j] > Rat(1))
        return Violation{"range", {i, j, -1}, pair_detail("entry outside [0,1]", i, j, entries[i][j])};
    }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (!(entries[i][j] == entries[j][i]))
        return Violation{"symmetry", {i, j, -1}, pair_detail("asymmetric entry", i, j, entries[i][j])};
    }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (entries[i][j] > entries[i][k] + entries[k][j]) {
          std::ostringstream os;
          os << "d(" << i << "," << j << ") = " << entries[i][j].str() << " > "
             << entries[i][k].str() << " + " << entries[k][j].str() << " = d(" << i << "," << k
             << ") + d(" << k << "," << j << ")";
          return Violation{"triangle", {i, k, j}, os.str()};
        }
      }
  return std::nullopt;
}

DistanceMatrix DistanceMatrix::validated(std::vector<std::vector<Rat>> entries) {
  if (auto v = find_violation(entries))
    throw Error(ErrorKind::Invalid, "distance matrix rejected (" + v->kind + "): " + v->detail);
  return DistanceMatrix(std::move(entries));
}

DistanceMatrix::DistanceMatrix(std::vector<std::vector<Rat>> e)
    : n_((int)e.size()), e_(std::move(e)) {}

bool DistanceMatrix::strict() const {
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (e_[i][j].is_zero()) return false;
  return true;
}

RationalMetricSpace RationalMetricSpace::make(DistanceMatrix m, bool strict_claim,
                                              std::vector<std::string> labels) {
  if (strict_claim && !m.strict())
    throw Error(ErrorKind::Invalid, "space claimed strict but has distinct points at distance 0");
  if (!labels.empty() && (int)labels.size() != m.size())
    throw Error(ErrorKind::Invalid, "label count does not match point count");
  return RationalMetricSpace{std::move(m), strict_claim, std::move(labels)};
}

Rat sup_distance(const DistanceMatrix& a, const DistanceMatrix& b) {
  if (a.size() != b.size())
    throw Error(ErrorKind::Invalid, "sup distance needs matrices of equal size");
  Rat best(0);
  for (int i = 0; i < a.size(); ++i)
    for (int j = i + 1; j < a.size(); ++j) {
      Rat diff = (a.at(i, j) - b.at(i, j)).abs();
      if (diff > best) best = diff;
    }
  return best;
}

DistanceMatrix glue_premetric(const DistanceMatrix& a, const DistanceMatrix& b,
                              const Rat& delta) {
  const int n = a.size();
  if (b.size() != n) throw Error(ErrorKind::Invalid, "glue needs matrices of equal size");
  if (delta < sup_distance(a, b))
    throw Error(ErrorKind::Invalid, "glue parameter below the sup distance of the blocks");
  const Rat half = delta / Rat(2);
  std::vector<std::vector<Rat>> e(2 * n, std::vector<Rat>(2 * n, Rat(0)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      e[i][j] = a.at(i, j);
      e[n + i][n + j] = b.at(i, j);
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Rat best = a.at(i, 0) + half + b.at(0, j);
      for (int l = 1; l < n; ++l) {
        Rat cand = a.at(i, l) + half + b.at(l, j);
        if (cand < best) best = cand;
      }
      if (best > Rat(1)) best = Rat(1);
      e[i][n + j] = best;
      e[n + j][i] = best;
    }
  try {
    return DistanceMatrix::validated(std::move(e));
  } catch (const Error& err) {
    throw Error(ErrorKind::Internal, std::string("glued matrix failed validation: ") + err.what());
  }
}

Rat glue_trace(const DistanceMatrix& glued) {
  if (glued.size() % 2 != 0)
    throw Error(ErrorKind::Invalid, "trace needs an even number of points");
  const int n = glued.size() / 2;
  Rat s(0);
  for (int i = 0; i < n; ++i) s = s + glued.at(i, n + i);
  return s;
}

DistanceMatrix coupled_matrix(const DistanceMatrix& a, const DistanceMatrix& b,
                              const std::vector<std::vector<Rat>>& cross) {
  const int n = a.size();
  if (b.size() != n) throw Error(ErrorKind::Invalid, "coupling needs blocks of equal size");
  if ((int)cross.size() != n)
    throw Error(ErrorKind::Invalid, "cross block has wrong number of rows");
  for (const auto& row : cross)
    if ((int)row.size() != n)
      throw Error(ErrorKind::Invalid, "cross block has wrong number of columns");
  std::vector<std::vector<Rat>> e(2 * n, std::vector<Rat>(2 * n, Rat(0)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      e[i][j] = a.at(i, j);
      e[n + i][n + j] = b.at(i, j);
      e[i][n + j] = cross[i][j];
      e[n + j][i] = cross[i][j];
    }
  return DistanceMatrix::validated(std::move(e));
}

CouplingResult d1_distance(const DistanceMatrix& a, const DistanceMatrix& b) {
  const int n = a.size();
  if (b.size() != n) throw Error(ErrorKind::Invalid, "coupling distance needs equal sizes");
  const int nv = n * n;
  auto var = [n](int i, int j) { return i * n + j; };

  lp::Problem p;
  p.c.assign(nv, Rat(0));
  for (int i = 0; i < n; ++i) p.c[var(i, i)] = Rat(1);
  p.lo.assign(nv, Rat(0));
  p.up.assign(nv, Rat(1));

  auto add_row = [&p, nv](std::vector<std::pair<int, Rat>> terms, Rat rhs) {
    std::vector<Rat> row(nv, Rat(0));
    for (auto& t : terms) row[t.first] = row[t.first] + t.second;
    p.a.push_back(std::move(row));
    p.b.push_back(std::move(rhs));
  };

  // c(i,j') <= a(i,k) + c(k,j')
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (i == k) continue;
      for (int j = 0; j < n; ++j)
        add_row({{var(i, j), Rat(1)}, {var(k, j), Rat(-1)}}, a.at(i, k));
    }
  // c(i,j') <= c(i,k') + b(k,j)
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      if (j == k) continue;
      for (int i = 0; i < n; ++i)
        add_row({{var(i, j), Rat(1)}, {var(i, k), Rat(-1)}}, b.at(k, j));
    }
  // a(i,j) <= c(i,k') + c(j,k')
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k)
        add_row({{var(i, k), Rat(-1)}, {var(j, k), Rat(-1)}}, Rat(0) - a.at(i, j));
  // b(j,k) <= c(i,j') + c(i,k')
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k)
      for (int i = 0; i < n; ++i)
        add_row({{var(i, j), Rat(-1)}, {var(i, k), Rat(-1)}}, Rat(0) - b.at(j, k));

  lp::Solution sol = lp::solve_from_upper(p);

  CouplingResult res;
  res.value = sol.value;
  res.coupling.assign(n, std::vector<Rat>(n, Rat(0)));
  Rat trace(0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      res.coupling[i][j] = sol.x[var(i, j)];
      if (i == j) trace = trace + sol.x[var(i, j)];
    }
  if (!(trace == res.value))
    throw Error(ErrorKind::Internal, "coupling optimum does not match its trace");
  try {
    coupled_matrix(a, b, res.coupling);
  } catch (const Error& err) {
    throw Error(ErrorKind::Internal,
                std::string("optimal coupling failed validation: ") + err.what());
  }
  return res;
}

void for_each_premetric(int n, const std::vector<Rat>& values,
                        const std::function<void(const DistanceMatrix&)>& fn) {
  if (n < 1) throw Error(ErrorKind::Invalid, "enumeration needs at least one point");
  for (const Rat& v : values)
    if (v.sign() < 0 || v > Rat(1))
      throw Error(ErrorKind::Invalid, "enumeration values must lie in [0,1]");
  std::vector<std::pair<int, int>> order;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) order.push_back({i, j});

  std::vector<std::vector<Rat>> e(n, std::vector<Rat>(n, Rat(0)));
  std::function<void(size_t)> rec = [&](size_t step) {
    if (step == order.size()) {
      fn(DistanceMatrix::validated(e));
      return;
    }
    auto [i, j] = order[step];
    for (const Rat& v : values) {
      bool ok = true;
      for (int k = 0; k < i && ok; ++k) {
        const Rat& ik = e[i][k];
        const Rat& kj = e[k][j];
        if (v > ik + kj || ik > v + kj || kj > v + ik) ok = false;
      }
      if (!ok) continue;
      e[i][j] = v;
      e[j][i] = v;
      rec(step + 1);
    }
    e[i][j] = Rat(0);
    e[j][i] = Rat(0);
  };
  rec(0);
}

static long net_resolution(const Rat& eps) {
  if (eps.sign() <= 0) throw Error(ErrorKind::Invalid, "net resolution must be positive");
  Rat inv = Rat(1) / eps;
  return inv.ceil().num_long();
}

std::vector<DistanceMatrix> epsilon_net(int n, const Rat& eps) {
  long m = net_resolution(eps);
  std::vector<Rat> values;
  for (long k = 0; k <= m; ++k) values.push_back(Rat(k, m));
  std::vector<DistanceMatrix> out;
  for_each_premetric(n, values, [&out](const DistanceMatrix& d) { out.push_back(d); });
  return out;
}

DistanceMatrix round_to_net(const DistanceMatrix& m, const Rat& eps) {
  long res = net_resolution(eps);
  const int n = m.size();
  std::vector<std::vector<Rat>> e(n, std::vector<Rat>(n, Rat(0)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Rat scaled = m.at(i, j) * Rat(res);
      Rat up = scaled.ceil();
      Rat v = up / Rat(res);
      if (v > Rat(1)) v = Rat(1);
      e[i][j] = v;
    }
  try {
    return DistanceMatrix::validated(std::move(e));
  } catch (const Error& err) {
    throw Error(ErrorKind::Internal, std::string("net rounding broke validity: ") + err.what());
  }
}

GeodesicPoint GeodesicPoint::interior(const DistanceMatrix& m, int x, int y, const Rat& t) {
  const int n = m.size();
  if (x < 0 || x >= n || y < 0 || y >= n)
    throw Error(ErrorKind::Invalid, "segment endpoint out of range");
  const Rat d = m.at(x, y);
  if (t.sign() < 0 || t > d)
    throw Error(ErrorKind::Invalid, "segment offset outside [0, d(x,y)]");
  if (t.is_zero()) return original(x);
  if (t == d) return original(y);
  if (x < y) return {x, y, t};
  return {y, x, d - t};
}

Rat geodesic_distance(const DistanceMatrix& m, const GeodesicPoint& p, const GeodesicPoint& q) {
  const int n = m.size();
  auto check = [n](const GeodesicPoint& g) {
    if (g.x < 0 || g.x >= n || g.y < 0 || g.y >= n)
      throw Error(ErrorKind::Invalid, "geodesic point out of range");
  };
  check(p);
  check(q);
  if (p.is_original() && q.is_original()) return m.at(p.x, q.x);
  if (!p.is_original() && !q.is_original() && p.x == q.x && p.y == q.y)
    return (p.t - q.t).abs();

  struct End {
    int at;
    Rat off;
  };
  auto ends = [&m](const GeodesicPoint& g) {
    std::vector<End> r;
    if (g.is_original()) {
      r.push_back({g.x, Rat(0)});
    } else {
      r.push_back({g.x, g.t});
      r.push_back({g.y, m.at(g.x, g.y) - g.t});
    }
    return r;
  };
  std::optional<Rat> best;
  for (const End& ep : ends(p))
    for (const End& eq : ends(q)) {
      Rat cand = ep.off + m.at(ep.at, eq.at) + eq.off;
      if (!best || cand < *best) best = cand;
    }
  return *best;
}

HolderComposite holder_composition_bound(const std::vector<HolderPair>& maps, const Rat& d) {
  if (d.sign() < 0) throw Error(ErrorKind::Invalid, "distance must be nonnegative");
  if (maps.empty()) throw Error(ErrorKind::Invalid, "composition of zero maps");
  for (const auto& hp : maps) {
    if (hp.c < Rat(1))
      throw Error(ErrorKind::Invalid, "displacement constant below 1");
    if (hp.alpha.sign() <= 0)
      throw Error(ErrorKind::Invalid, "displacement exponent must be positive");
  }
  tower::Elem c(Rat(1));
  Rat prefix(1);
  for (const auto& hp : maps) {
    tower::Elem base = tower::Elem(hp.c).promoted(c.tower());
    tower::Elem factor = tower::pow(base, prefix);
    c = c * factor;
    prefix = prefix * hp.alpha;
  }
  tower::Elem dd = tower::Elem(d).promoted(c.tower());
  tower::Elem bound = d.is_zero() ? tower::Elem(Rat(0)).promoted(c.tower())
                                  : c * tower::pow(dd, prefix);
  return HolderComposite{c, prefix, d, bound};
}

int compare_bounds(const HolderComposite& a, const HolderComposite& b) {
  long qa = a.alpha.den_long();
  long qb = b.alpha.den_long();
  long q = qa > qb ? qa : qb;  // both dyadic, so the larger is the lcm
  auto side = [q](const HolderComposite& h) {
    Rat e = h.alpha * Rat(q);
    if (!e.is_integer())
      throw Error(ErrorKind::Internal, "exponent denominator is not dyadic");
    tower::Elem cq = tower::pow(h.c, Rat(q));
    return cq * tower::Elem(rat_pow(h.d, e.num_long()));
  };
  return (side(a) - side(b)).sign();
}

LargeScaleLipschitzBound lipschitz_large_bound(const Rat& m, long k, const Rat& d) {
  if (m < Rat(1)) throw Error(ErrorKind::Invalid, "uniform constant must be at least 1");
  if (k < 0) throw Error(ErrorKind::Invalid, "composition length must be nonnegative");
  if (d.sign() < 0) throw Error(ErrorKind::Invalid, "distance must be nonnegative");
  Rat mk = rat_pow(m, k);
  Rat kk(k);
  return LargeScaleLipschitzBound{mk * (d + kk), Rat(2) * kk * kk * mk};
}

}  // namespace obkit::metric
