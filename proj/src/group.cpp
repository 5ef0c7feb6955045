#include "obkit/group.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "obkit/error.hpp"

namespace obkit::group {

namespace {

[[noreturn]] void invalid(const std::string& msg) {
  throw Error(ErrorKind::Invalid, msg);
}

[[noreturn]] void internal(const std::string& msg) {
  throw Error(ErrorKind::Internal, msg);
}

std::string pair_str(std::size_t a, std::size_t b) {
  return "(" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

void check_element(const FiniteGroup& g, std::size_t a) {
  if (a >= g.size()) invalid("group element " + std::to_string(a) + " out of range");
}

// Sorts, deduplicates and range-checks a subset.
std::vector<std::size_t> tidy_subset(const FiniteGroup& g,
                                     std::vector<std::size_t> v,
                                     const std::string& what) {
  for (std::size_t a : v)
    if (a >= g.size())
      invalid(what + " has element " + std::to_string(a) + " out of range");
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool is_symmetric(const FiniteGroup& g, const std::vector<std::size_t>& v) {
  std::vector<char> in(g.size(), 0);
  for (std::size_t a : v) in[a] = 1;
  for (std::size_t a : v)
    if (!in[g.inv[a]]) return false;
  return true;
}

// Breadth-first word lengths from the identity over right multiplication
// by the given set; -1 marks unreachable elements.
std::vector<long> word_lengths(const FiniteGroup& g,
                               const std::vector<std::size_t>& gens) {
  std::vector<long> dist(g.size(), -1);
  std::deque<std::size_t> queue;
  dist[g.id] = 0;
  queue.push_back(g.id);
  while (!queue.empty()) {
    std::size_t x = queue.front();
    queue.pop_front();
    for (std::size_t h : gens) {
      std::size_t y = g.mul[x][h];
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  return dist;
}

}  // namespace

FiniteGroup FiniteGroup::validated(std::vector<std::vector<std::size_t>> table,
                                   bool full_associativity) {
  std::size_t n = table.size();
  if (n == 0) invalid("the multiplication table is empty");
  for (std::size_t i = 0; i < n; ++i) {
    if (table[i].size() != n)
      invalid("multiplication table row " + std::to_string(i) + " has length " +
              std::to_string(table[i].size()) + ", expected " + std::to_string(n));
    for (std::size_t j = 0; j < n; ++j)
      if (table[i][j] >= n)
        invalid("table entry out of range at " + pair_str(i, j));
  }

  std::size_t id = n;
  for (std::size_t e = 0; e < n && id == n; ++e) {
    bool ok = true;
    for (std::size_t x = 0; x < n && ok; ++x)
      ok = table[e][x] == x && table[x][e] == x;
    if (ok) id = e;
  }
  if (id == n) invalid("no identity element in the table");

  std::vector<std::size_t> inv(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b)
      if (table[a][b] == id && table[b][a] == id) {
        inv[a] = b;
        break;
      }
    if (inv[a] == n)
      invalid("element " + std::to_string(a) + " has no two-sided inverse");
  }

  auto assoc_at = [&](std::size_t i, std::size_t j, std::size_t k) {
    if (table[table[i][j]][k] != table[i][table[j][k]])
      invalid("associativity fails at (" + std::to_string(i) + ", " +
              std::to_string(j) + ", " + std::to_string(k) + ")");
  };
  if (full_associativity || n <= 32) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) assoc_at(i, j, k);
  } else {
    std::uint64_t s = 0x9e3779b97f4a7c15ull;
    auto next = [&s, n] {
      s = s * 6364136223846793005ull + 1442695040888963407ull;
      return static_cast<std::size_t>((s >> 33) % n);
    };
    for (int t = 0; t < 20000; ++t) {
      std::size_t i = next(), j = next(), k = next();
      assoc_at(i, j, k);
    }
  }

  FiniteGroup g;
  g.mul = std::move(table);
  g.id = id;
  g.inv = std::move(inv);
  return g;
}

FiniteGroup cyclic_group(std::size_t n) {
  if (n == 0) invalid("a cyclic group needs a positive order");
  std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t[i][j] = (i + j) % n;
  return FiniteGroup::validated(std::move(t));
}

FiniteGroup symmetric_group(std::size_t letters) {
  if (letters == 0 || letters > 6)
    invalid("symmetric groups are provided for 1 to 6 letters");
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> p(letters);
  std::iota(p.begin(), p.end(), 0);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t i = 0; i < perms.size(); ++i) index[perms[i]] = i;
  std::size_t n = perms.size();
  std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::size_t> c(letters);
      for (std::size_t x = 0; x < letters; ++x) c[x] = perms[i][perms[j][x]];
      t[i][j] = index.at(c);
    }
  return FiniteGroup::validated(std::move(t));
}

FiniteGroup dihedral_group(std::size_t n) {
  if (n == 0) invalid("a dihedral group needs a positive rotation order");
  std::size_t m = 2 * n;
  auto enc = [n](std::size_t flip, std::size_t rot) { return flip * n + rot; };
  std::vector<std::vector<std::size_t>> t(m, std::vector<std::size_t>(m));
  for (std::size_t e = 0; e < 2; ++e)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t f = 0; f < 2; ++f)
        for (std::size_t j = 0; j < n; ++j) {
          std::size_t rot = e == 0 ? (i + j) % n : (i + n - j % n) % n;
          t[enc(e, i)][enc(f, j)] = enc(e ^ f, rot);
        }
  return FiniteGroup::validated(std::move(t));
}

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  std::size_t na = a.size(), nb = b.size(), n = na * nb;
  auto enc = [nb](std::size_t x, std::size_t y) { return x * nb + y; };
  std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
  for (std::size_t x1 = 0; x1 < na; ++x1)
    for (std::size_t y1 = 0; y1 < nb; ++y1)
      for (std::size_t x2 = 0; x2 < na; ++x2)
        for (std::size_t y2 = 0; y2 < nb; ++y2)
          t[enc(x1, y1)][enc(x2, y2)] = enc(a.mul[x1][x2], b.mul[y1][y2]);
  return FiniteGroup::validated(std::move(t));
}

std::vector<std::size_t> subgroup_closure(const FiniteGroup& g,
                                          const std::vector<std::size_t>& gens) {
  for (std::size_t a : gens) check_element(g, a);
  std::vector<char> in(g.size(), 0);
  std::deque<std::size_t> queue;
  auto add = [&](std::size_t a) {
    if (!in[a]) {
      in[a] = 1;
      queue.push_back(a);
    }
  };
  add(g.id);
  for (std::size_t a : gens) add(a);
  std::vector<std::size_t> members;
  while (!queue.empty()) {
    std::size_t a = queue.front();
    queue.pop_front();
    members.push_back(a);
    for (std::size_t b : members) {
      add(g.mul[a][b]);
      add(g.mul[b][a]);
    }
  }
  std::sort(members.begin(), members.end());
  return members;
}

namespace {

void check_subgroup(const FiniteGroup& g, const std::vector<std::size_t>& sub) {
  if (sub.empty()) invalid("the subgroup list is empty");
  std::vector<char> in(g.size(), 0);
  for (std::size_t a : sub) in[a] = 1;
  if (!in[g.id]) invalid("the subgroup does not contain the identity");
  for (std::size_t a : sub) {
    if (!in[g.inv[a]]) invalid("the subgroup list is not closed under inverses");
    for (std::size_t b : sub)
      if (!in[g.mul[a][b]])
        invalid("the subgroup list is not closed under multiplication");
  }
}

}  // namespace

std::vector<std::size_t> left_transversal(const FiniteGroup& g,
                                          const std::vector<std::size_t>& sub) {
  std::vector<std::size_t> s = tidy_subset(g, sub, "the subgroup");
  check_subgroup(g, s);
  std::vector<char> covered(g.size(), 0);
  std::vector<std::size_t> reps;
  auto take = [&](std::size_t a) {
    reps.push_back(a);
    for (std::size_t h : s) covered[g.mul[a][h]] = 1;
  };
  take(g.id);
  for (std::size_t a = 0; a < g.size(); ++a)
    if (!covered[a]) take(a);
  return reps;
}

SubsetChain SubsetChain::validated(const FiniteGroup& g,
                                   std::vector<std::vector<std::size_t>> levels) {
  if (levels.empty()) invalid("the chain has no levels");
  for (std::size_t i = 0; i < levels.size(); ++i)
    levels[i] = tidy_subset(g, std::move(levels[i]),
                            "chain level " + std::to_string(i));
  for (std::size_t i = 0; i + 1 < levels.size(); ++i)
    if (!std::includes(levels[i + 1].begin(), levels[i + 1].end(),
                       levels[i].begin(), levels[i].end()))
      invalid("chain level " + std::to_string(i) +
              " is not contained in the next level");
  if (levels.back().size() != g.size()) {
    std::vector<char> in(g.size(), 0);
    for (std::size_t a : levels.back()) in[a] = 1;
    std::size_t missing = 0;
    while (in[missing]) ++missing;
    invalid("the chain is not exhaustive: element " + std::to_string(missing) +
            " is missing from the top level");
  }

  SubsetChain out;
  out.normalized = levels.front() == std::vector<std::size_t>{g.id};
  for (const auto& lvl : levels)
    if (!is_symmetric(g, lvl)) out.normalized = false;
  out.levels = std::move(levels);
  return out;
}

ChainDistance chain_metric(const FiniteGroup& g, const SubsetChain& chain,
                           std::size_t f, std::size_t h) {
  check_element(g, f);
  check_element(g, h);
  if (!chain.normalized)
    invalid("the chain is not normalized: symmetric levels with the bottom "
            "level equal to the identity singleton are required");

  std::size_t n = g.size();
  std::vector<long> weight(n, -1);
  for (std::size_t k = 0; k < chain.levels.size(); ++k)
    for (std::size_t a : chain.levels[k])
      if (weight[a] < 0) weight[a] = static_cast<long>(k);

  // Cheapest factorization, as a shortest path multiplying factors on
  // the right and charging each its first membership level.
  const long kInf = -1;
  std::vector<long> dist(n, kInf);
  std::vector<char> done(n, 0);
  dist[f] = 0;
  for (;;) {
    std::size_t best = n;
    for (std::size_t x = 0; x < n; ++x)
      if (!done[x] && dist[x] >= 0 && (best == n || dist[x] < dist[best]))
        best = x;
    if (best == n) break;
    done[best] = 1;
    for (std::size_t step = 0; step < n; ++step) {
      std::size_t y = g.mul[best][step];
      long cand = dist[best] + weight[step];
      if (dist[y] < 0 || cand < dist[y]) dist[y] = cand;
    }
  }

  ChainDistance out;
  out.distance = Rat(dist[h]);
  for (std::size_t lvl = 0;; ++lvl) {
    std::vector<long> reach = word_lengths(g, chain.levels[lvl]);
    long ecc = 0;
    bool all = true;
    for (long dv : reach) {
      if (dv < 0) {
        all = false;
        break;
      }
      ecc = std::max(ecc, dv);
    }
    if (all) {
      out.gen_level = lvl;
      out.gen_power = static_cast<std::size_t>(ecc);
      break;
    }
  }
  return out;
}

Filtration Filtration::validated(const FiniteGroup& g, long first,
                                 std::vector<std::vector<std::size_t>> sets) {
  if (sets.empty()) invalid("the filtration has no sets");
  for (std::size_t i = 0; i < sets.size(); ++i) {
    std::string tag = "the set at index " + std::to_string(first + (long)i);
    sets[i] = tidy_subset(g, std::move(sets[i]), tag);
    std::vector<char> in(g.size(), 0);
    for (std::size_t a : sets[i]) in[a] = 1;
    if (!in[g.id]) invalid(tag + " does not contain the identity");
    if (!is_symmetric(g, sets[i]))
      invalid("condition (I) fails at index " + std::to_string(first + (long)i) +
              ": the set is not symmetric");
  }
  for (std::size_t i = 0; i + 1 < sets.size(); ++i) {
    std::vector<char> next(g.size(), 0);
    for (std::size_t a : sets[i + 1]) next[a] = 1;
    for (std::size_t a : sets[i])
      for (std::size_t b : sets[i])
        for (std::size_t c : sets[i])
          if (!next[g.mul[g.mul[a][b]][c]])
            invalid("condition (III) fails at index " +
                    std::to_string(first + (long)i) + ": the product of (" +
                    std::to_string(a) + ", " + std::to_string(b) + ", " +
                    std::to_string(c) + ") escapes the next set");
  }
  if (sets.back().size() != g.size()) {
    std::vector<char> in(g.size(), 0);
    for (std::size_t a : sets.back()) in[a] = 1;
    std::size_t missing = 0;
    while (in[missing]) ++missing;
    invalid("condition (II) fails: element " + std::to_string(missing) +
            " is in no set of the filtration");
  }

  Filtration out;
  out.first = first;
  out.sets = std::move(sets);
  return out;
}

BirkhoffDistance birkhoff_metric(const FiniteGroup& g, const Filtration& filt,
                                 std::size_t g1, std::size_t g2) {
  check_element(g, g1);
  check_element(g, g2);
  if (g1 == g2) return {Rat(0), Rat(0)};

  std::size_t n = g.size();
  std::vector<long> level(n, -1);
  for (std::size_t i = 0; i < filt.sets.size(); ++i)
    for (std::size_t a : filt.sets[i])
      if (level[a] < 0) level[a] = filt.first + static_cast<long>(i);
  auto delta = [&](std::size_t x, std::size_t y) {
    return pow2(level[g.mul[g.inv[x]][y]]);
  };

  std::vector<Rat> dist(n);
  std::vector<char> have(n, 0), done(n, 0);
  dist[g1] = Rat(0);
  have[g1] = 1;
  for (;;) {
    std::size_t best = n;
    for (std::size_t x = 0; x < n; ++x)
      if (have[x] && !done[x] && (best == n || dist[x] < dist[best])) best = x;
    if (best == n || best == g2) break;
    done[best] = 1;
    for (std::size_t y = 0; y < n; ++y) {
      if (y == best) continue;
      Rat cand = dist[best] + delta(best, y);
      if (!have[y] || cand < dist[y]) {
        dist[y] = cand;
        have[y] = 1;
      }
    }
  }
  return {delta(g1, g2), dist[g2]};
}

std::size_t cayley_width(const FiniteGroup& g,
                         const std::vector<std::size_t>& e) {
  std::vector<std::size_t> s = tidy_subset(g, e, "the generating set");
  if (s.empty()) invalid("the generating set is empty");
  std::vector<char> in(g.size(), 0);
  for (std::size_t a : s) in[a] = 1;
  if (!in[g.id]) invalid("the generating set must contain the identity");
  if (!is_symmetric(g, s)) invalid("the generating set is not symmetric");

  std::vector<long> dist = word_lengths(g, s);
  long ecc = 0;
  std::size_t reached = 0;
  for (long dv : dist)
    if (dv >= 0) {
      ++reached;
      ecc = std::max(ecc, dv);
    }
  if (reached != g.size())
    invalid("the set generates only " + std::to_string(reached) + " of " +
            std::to_string(g.size()) + " elements");
  return static_cast<std::size_t>(ecc);
}

SquareCertificate large_subset_square(const FiniteGroup& g,
                                      const std::vector<std::size_t>& b) {
  std::vector<std::size_t> s = tidy_subset(g, b, "the subset");
  if (s.empty()) invalid("the subset is empty");
  std::vector<char> in(g.size(), 0);
  for (std::size_t a : s) in[a] = 1;
  if (!in[g.id]) invalid("the subset must contain the identity");
  if (!is_symmetric(g, s)) invalid("the subset is not symmetric");

  SquareCertificate out;
  out.majority = 2 * s.size() > g.size();
  out.square = true;
  out.missing = 0;
  out.factors.assign(g.size(), {-1, -1});
  for (std::size_t target = 0; target < g.size(); ++target) {
    bool hit = false;
    for (std::size_t b1 : s) {
      std::size_t b2 = g.mul[g.inv[b1]][target];
      if (in[b2]) {
        out.factors[target] = {static_cast<long>(b1), static_cast<long>(b2)};
        hit = true;
        break;
      }
    }
    if (!hit && out.square) {
      out.square = false;
      out.missing = target;
    }
  }
  if (out.majority && !out.square)
    internal("a majority subset failed to cover the group by two factors");
  return out;
}

InducedAction induce_action(const FiniteGroup& g,
                            const std::vector<std::size_t>& sub,
                            const std::vector<std::size_t>& transversal,
                            const metric::RationalMetricSpace& x,
                            const std::vector<std::vector<std::size_t>>& act) {
  std::size_t n = g.size();
  if (n > 64)
    throw Error(ErrorKind::Budget, "induction is capped at groups of 64 elements");
  if (x.d.size() == 0) invalid("the base space is empty");
  std::vector<std::size_t> h = tidy_subset(g, sub, "the subgroup");
  check_subgroup(g, h);

  for (std::size_t a : transversal) check_element(g, a);
  {
    std::set<std::size_t> uniq(transversal.begin(), transversal.end());
    if (uniq.size() != transversal.size())
      invalid("the transversal repeats a coset representative");
  }
  if (std::find(transversal.begin(), transversal.end(), g.id) ==
      transversal.end())
    invalid("the transversal must contain the identity");

  // Coset bookkeeping: for every group element the transversal position
  // of its representative and the subgroup part of the factorization.
  std::vector<long> rep_of(n, -1);
  std::vector<std::size_t> sub_part(n, 0);
  for (std::size_t ti = 0; ti < transversal.size(); ++ti)
    for (std::size_t hh : h) {
      std::size_t e = g.mul[transversal[ti]][hh];
      if (rep_of[e] >= 0)
        invalid("the transversal does not split the group into disjoint cosets");
      rep_of[e] = static_cast<long>(ti);
      sub_part[e] = hh;
    }
  for (std::size_t e = 0; e < n; ++e)
    if (rep_of[e] < 0) invalid("the transversal misses part of the group");

  std::size_t m = static_cast<std::size_t>(x.d.size());
  if (act.size() != h.size())
    invalid("the base action must list one permutation per subgroup element");
  std::vector<long> hpos(n, -1);
  for (std::size_t i = 0; i < h.size(); ++i) hpos[h[i]] = static_cast<long>(i);
  for (std::size_t i = 0; i < act.size(); ++i) {
    std::vector<char> seen(m, 0);
    bool ok = act[i].size() == m;
    for (std::size_t v : act[i]) {
      if (v >= m || seen[v]) {
        ok = false;
        break;
      }
      seen[v] = 1;
    }
    if (!ok)
      invalid("base action entry " + std::to_string(i) +
              " is not a permutation of the base points");
  }
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = 0; j < h.size(); ++j) {
      std::size_t k = static_cast<std::size_t>(hpos[g.mul[h[i]][h[j]]]);
      for (std::size_t v = 0; v < m; ++v)
        if (act[k][v] != act[i][act[j][v]])
          invalid("the base action is not a homomorphism at subgroup entries " +
                  pair_str(i, j));
    }
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t v = 0; v < m; ++v)
      for (std::size_t w = 0; w < m; ++w)
        if (x.d.at(static_cast<int>(act[i][v]), static_cast<int>(act[i][w])) !=
            x.d.at(static_cast<int>(v), static_cast<int>(w)))
          invalid("base action entry " + std::to_string(i) +
                  " is not an isometry of the base space");

  const std::size_t kMapCap = 128;
  std::size_t count = 1;
  for (std::size_t t = 0; t < transversal.size(); ++t) {
    count *= m;
    if (count > kMapCap)
      throw Error(ErrorKind::Budget,
                  "the induced family would exceed " + std::to_string(kMapCap) +
                      " maps");
  }

  // Every equivariant map comes from free choices on the transversal.
  std::vector<std::vector<std::size_t>> points;
  std::vector<std::size_t> choice(transversal.size(), 0);
  for (;;) {
    std::vector<std::size_t> xi(n);
    for (std::size_t e = 0; e < n; ++e) {
      std::size_t hinv = g.inv[sub_part[e]];
      xi[e] = act[static_cast<std::size_t>(hpos[hinv])]
                 [choice[static_cast<std::size_t>(rep_of[e])]];
    }
    points.push_back(std::move(xi));
    std::size_t pos = 0;
    while (pos < choice.size() && ++choice[pos] == m) {
      choice[pos] = 0;
      ++pos;
    }
    if (pos == choice.size()) break;
  }

  for (const auto& xi : points)
    for (std::size_t e = 0; e < n; ++e)
      for (std::size_t hh : h) {
        std::size_t lhs = xi[g.mul[e][hh]];
        std::size_t rhs = act[static_cast<std::size_t>(hpos[g.inv[hh]])][xi[e]];
        if (lhs != rhs)
          internal("an enumerated map violates the equivariance constraint");
      }

  std::size_t y = points.size();
  std::vector<std::vector<Rat>> ent(y, std::vector<Rat>(y, Rat(0)));
  for (std::size_t i = 0; i < y; ++i)
    for (std::size_t j = i + 1; j < y; ++j) {
      Rat best(0);
      for (std::size_t a : transversal) {
        const Rat& dv = x.d.at(static_cast<int>(points[i][a]),
                               static_cast<int>(points[j][a]));
        if (dv > best) best = dv;
      }
      ent[i][j] = best;
      ent[j][i] = std::move(best);
    }
  for (std::size_t i = 0; i < y; ++i)
    for (std::size_t j = i + 1; j < y; ++j) {
      Rat full(0);
      for (std::size_t e = 0; e < n; ++e) {
        const Rat& dv = x.d.at(static_cast<int>(points[i][e]),
                               static_cast<int>(points[j][e]));
        if (dv > full) full = dv;
      }
      if (full != ent[i][j])
        internal("the transversal supremum disagrees with the full supremum");
    }

  metric::DistanceMatrix dm = [&] {
    try {
      return metric::DistanceMatrix::validated(std::move(ent));
    } catch (const Error& err) {
      internal(std::string("the induced distances are not a metric: ") +
               err.what());
    }
  }();
  metric::RationalMetricSpace space =
      metric::RationalMetricSpace::make(std::move(dm), x.strict);

  std::map<std::vector<std::size_t>, std::size_t> find;
  for (std::size_t i = 0; i < y; ++i) find[points[i]] = i;
  std::vector<std::vector<std::size_t>> action(n, std::vector<std::size_t>(y));
  for (std::size_t e = 0; e < n; ++e)
    for (std::size_t i = 0; i < y; ++i) {
      std::vector<std::size_t> moved(n);
      for (std::size_t f = 0; f < n; ++f)
        moved[f] = points[i][g.mul[g.inv[e]][f]];
      auto it = find.find(moved);
      if (it == find.end())
        internal("left translation left the equivariant family");
      action[e][i] = it->second;
    }
  for (std::size_t e1 = 0; e1 < n; ++e1)
    for (std::size_t e2 = 0; e2 < n; ++e2)
      for (std::size_t i = 0; i < y; ++i)
        if (action[g.mul[e1][e2]][i] != action[e1][action[e2][i]])
          internal("the induced action is not a homomorphism");
  for (std::size_t e = 0; e < n; ++e)
    for (std::size_t i = 0; i < y; ++i)
      for (std::size_t j = i + 1; j < y; ++j)
        if (space.d.at(static_cast<int>(action[e][i]),
                       static_cast<int>(action[e][j])) !=
            space.d.at(static_cast<int>(i), static_cast<int>(j)))
          internal("left translation is not an isometry of the induced metric");

  std::vector<Rat> diam(y, Rat(0));
  for (std::size_t i = 0; i < y; ++i) {
    std::set<std::size_t> orbit;
    for (std::size_t e = 0; e < n; ++e) orbit.insert(action[e][i]);
    for (std::size_t a : orbit)
      for (std::size_t b : orbit) {
        const Rat& dv = space.d.at(static_cast<int>(a), static_cast<int>(b));
        if (dv > diam[i]) diam[i] = dv;
      }
    std::size_t base = points[i][g.id];
    for (std::size_t hh : h) {
      std::size_t moved = act[static_cast<std::size_t>(hpos[hh])][base];
      if (x.d.at(static_cast<int>(base), static_cast<int>(moved)) > diam[i])
        internal("a subgroup displacement exceeded the orbit diameter");
    }
  }

  return {std::move(points), std::move(space), std::move(action),
          std::move(diam)};
}

}  // namespace obkit::group
