#include "obkit/tree.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <string>

namespace obkit::tree {

namespace {

std::pair<std::size_t, std::size_t> norm_edge(std::size_t a, std::size_t b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

std::string num(std::size_t v) { return std::to_string(v); }

}  // namespace

SimplicialTree::SimplicialTree(
    std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges,
    std::vector<std::vector<std::size_t>> adj)
    : n_(n), edges_(std::move(edges)), adj_(std::move(adj)) {}

SimplicialTree SimplicialTree::validated(
    std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges) {
  if (n == 0) throw Error(ErrorKind::Invalid, "tree needs at least one vertex");
  if (edges.size() + 1 != n)
    throw Error(ErrorKind::Invalid, "a tree on " + num(n) + " vertices has " +
                                        num(n - 1) + " edges, got " +
                                        num(edges.size()));
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto& [a, b] : edges) {
    if (a >= n || b >= n)
      throw Error(ErrorKind::Invalid, "edge endpoint out of range");
    if (a == b) throw Error(ErrorKind::Invalid, "self-loop at vertex " + num(a));
    auto e = norm_edge(a, b);
    if (!seen.insert(e).second)
      throw Error(ErrorKind::Invalid,
                  "duplicate edge {" + num(e.first) + ", " + num(e.second) + "}");
    adj[a].push_back(b);
    adj[b].push_back(a);
    a = e.first;
    b = e.second;
  }
  std::vector<bool> reached(n, false);
  std::deque<std::size_t> queue{0};
  reached[0] = true;
  std::size_t count = 1;
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : adj[v])
      if (!reached[w]) {
        reached[w] = true;
        ++count;
        queue.push_back(w);
      }
  }
  if (count != n) throw Error(ErrorKind::Invalid, "edge list is not connected");
  return SimplicialTree(n, std::move(edges), std::move(adj));
}

std::vector<long> distances_from(const SimplicialTree& t, std::size_t src) {
  if (src >= t.size()) throw Error(ErrorKind::Invalid, "vertex out of range");
  std::vector<long> d(t.size(), -1);
  std::deque<std::size_t> queue{src};
  d[src] = 0;
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : t.neighbors(v))
      if (d[w] < 0) {
        d[w] = d[v] + 1;
        queue.push_back(w);
      }
  }
  return d;
}

long vertex_distance(const SimplicialTree& t, std::size_t u, std::size_t v) {
  return distances_from(t, u)[v];
}

void validate_automorphism(const SimplicialTree& t,
                           const std::vector<std::size_t>& perm) {
  std::size_t n = t.size();
  if (perm.size() != n)
    throw Error(ErrorKind::Invalid, "permutation length differs from the tree");
  std::vector<bool> hit(n, false);
  for (std::size_t v : perm) {
    if (v >= n || hit[v])
      throw Error(ErrorKind::Invalid, "vertex map is not a permutation");
    hit[v] = true;
  }
  std::set<std::pair<std::size_t, std::size_t>> es(t.edges().begin(),
                                                   t.edges().end());
  for (auto [a, b] : t.edges())
    if (!es.count(norm_edge(perm[a], perm[b])))
      throw Error(ErrorKind::Invalid, "vertex map does not preserve edge {" +
                                          num(a) + ", " + num(b) + "}");
}

std::vector<std::size_t> perm_compose(const std::vector<std::size_t>& a,
                                      const std::vector<std::size_t>& b) {
  std::vector<std::size_t> c(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) c[i] = a[b[i]];
  return c;
}

std::vector<std::size_t> perm_inverse(const std::vector<std::size_t>& a) {
  std::vector<std::size_t> c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[a[i]] = i;
  return c;
}

namespace {

bool connected_subset(const SimplicialTree& t,
                      const std::vector<std::size_t>& verts) {
  if (verts.empty()) return false;
  std::vector<bool> in(t.size(), false);
  for (std::size_t v : verts) in[v] = true;
  std::vector<bool> reached(t.size(), false);
  std::deque<std::size_t> queue{verts[0]};
  reached[verts[0]] = true;
  std::size_t count = 1;
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : t.neighbors(v))
      if (in[w] && !reached[w]) {
        reached[w] = true;
        ++count;
        queue.push_back(w);
      }
  }
  return count == verts.size();
}

}  // namespace

PermChar classify_perm(const SimplicialTree& t,
                       const std::vector<std::size_t>& g) {
  validate_automorphism(t, g);
  std::vector<std::size_t> fixed;
  for (std::size_t v = 0; v < t.size(); ++v)
    if (g[v] == v) fixed.push_back(v);
  if (!fixed.empty()) {
    if (!connected_subset(t, fixed))
      throw Error(ErrorKind::Internal, "fixed vertex set is not connected");
    return {CharKind::FixedSet, std::move(fixed), {0, 0}, 0};
  }
  std::vector<std::pair<std::size_t, std::size_t>> inverted;
  for (auto [a, b] : t.edges())
    if (g[a] == b && g[b] == a) inverted.push_back({a, b});
  if (inverted.size() != 1)
    throw Error(ErrorKind::Internal,
                "fixed-point-free tree automorphism without a unique "
                "inverted edge");
  return {CharKind::InvertedEdge, {}, inverted[0], 1};
}

Subdivision subdivide_midpoints(const SimplicialTree& t,
                                const std::vector<std::size_t>& g) {
  validate_automorphism(t, g);
  std::size_t n = t.size();
  std::size_t m = t.edges().size();
  std::set<std::pair<std::pair<std::size_t, std::size_t>, std::size_t>> lookup;
  for (std::size_t e = 0; e < m; ++e) lookup.insert({t.edges()[e], e});
  auto edge_index = [&](std::size_t a, std::size_t b) {
    auto it = lookup.lower_bound({norm_edge(a, b), 0});
    return it->second;
  };
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::size_t> midpoint(m);
  for (std::size_t e = 0; e < m; ++e) {
    auto [a, b] = t.edges()[e];
    midpoint[e] = n + e;
    edges.push_back({a, n + e});
    edges.push_back({n + e, b});
  }
  std::vector<std::size_t> perm(n + m);
  for (std::size_t v = 0; v < n; ++v) perm[v] = g[v];
  for (std::size_t e = 0; e < m; ++e) {
    auto [a, b] = t.edges()[e];
    perm[n + e] = n + edge_index(g[a], g[b]);
  }
  SimplicialTree t2 = SimplicialTree::validated(n + m, std::move(edges));
  validate_automorphism(t2, perm);
  return {std::move(t2), std::move(perm), std::move(midpoint)};
}

FreeWord wreduce(std::vector<int> letters) {
  std::vector<int> out;
  for (int l : letters) {
    if (l == 0) throw Error(ErrorKind::Invalid, "zero letter in word");
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return {std::move(out)};
}

FreeWord FreeWord::parse(std::string_view s) {
  std::vector<int> letters;
  for (char c : s) {
    if (c == ' ' || c == '\t') continue;
    if (c >= 'a' && c <= 'z')
      letters.push_back(c - 'a' + 1);
    else if (c >= 'A' && c <= 'Z')
      letters.push_back(-(c - 'A' + 1));
    else
      throw Error(ErrorKind::Parse,
                  std::string("bad letter '") + c + "' in word");
  }
  return wreduce(std::move(letters));
}

std::string FreeWord::str() const {
  std::string out;
  for (int l : letters)
    out += l > 0 ? (char)('a' + l - 1) : (char)('A' - l - 1);
  return out;
}

FreeWord wmul(const FreeWord& a, const FreeWord& b) {
  std::vector<int> cat = a.letters;
  cat.insert(cat.end(), b.letters.begin(), b.letters.end());
  return wreduce(std::move(cat));
}

FreeWord winv(const FreeWord& a) {
  std::vector<int> out(a.letters.rbegin(), a.letters.rend());
  for (int& l : out) l = -l;
  return {std::move(out)};
}

long wdist(const FreeWord& x, const FreeWord& y) {
  return wmul(winv(x), y).length();
}

WordChar classify_word(const FreeWord& g) {
  FreeWord r = wreduce(g.letters);  // normalizes unnormalized inputs
  std::vector<int> core = r.letters;
  std::vector<int> base;
  while (core.size() >= 2 && core.front() == -core.back()) {
    base.push_back(core.front());
    core.erase(core.begin());
    core.pop_back();
  }
  if (core.empty()) return {CharKind::FixedSet, {{}}, {{}}, 0};
  long norm = (long)core.size();
  return {CharKind::Axis, {std::move(base)}, {std::move(core)}, norm};
}

std::vector<FreeWord> axis_ball(const WordChar& wc, long radius) {
  if (wc.kind != CharKind::Axis)
    throw Error(ErrorKind::Invalid, "the identity translation has no axis");
  std::vector<FreeWord> out;
  long span = radius - wc.base.length();
  if (span < 0) return out;
  out.push_back(wc.base);
  const std::vector<int>& c = wc.direction.letters;
  std::vector<int> fwd = wc.base.letters;
  for (long t = 0; t < span; ++t) {
    int l = c[(std::size_t)(t % (long)c.size())];
    if (!fwd.empty() && fwd.back() == -l)
      throw Error(ErrorKind::Internal, "axis walk cancelled");
    fwd.push_back(l);
    out.push_back({fwd});
  }
  FreeWord cinv = winv(wc.direction);
  std::vector<int> bwd = wc.base.letters;
  for (long t = 0; t < span; ++t) {
    int l = cinv.letters[(std::size_t)(t % (long)cinv.letters.size())];
    if (!bwd.empty() && bwd.back() == -l)
      throw Error(ErrorKind::Internal, "axis walk cancelled");
    bwd.push_back(l);
    out.push_back({bwd});
  }
  return out;
}

namespace {

// Least distance between the two axes, scanned inside the ball that is
// guaranteed to contain the bridge endpoints.
long axis_distance(const FreeWord& g, const WordChar& cg, const FreeWord& h,
                   const WordChar& ch) {
  long radius = g.length() + h.length();
  std::vector<FreeWord> sg = axis_ball(cg, radius);
  std::vector<FreeWord> sh = axis_ball(ch, radius);
  if (sg.empty() || sh.empty())
    throw Error(ErrorKind::Internal, "axis scan ball came back empty");
  long best = -1;
  for (const FreeWord& x : sg)
    for (const FreeWord& y : sh) {
      long d = wdist(x, y);
      if (best < 0 || d < best) best = d;
    }
  return best;
}

long min_displacement(const SimplicialTree& t,
                      const std::vector<std::size_t>& g) {
  long best = -1;
  for (std::size_t v = 0; v < t.size(); ++v) {
    long d = vertex_distance(t, v, g[v]);
    if (best < 0 || d < best) best = d;
  }
  return best;
}

std::vector<std::size_t> char_vertices(const PermChar& pc) {
  if (pc.kind == CharKind::FixedSet) return pc.fixed;
  return {pc.edge.first, pc.edge.second};
}

}  // namespace

CmDisjoint cm_disjoint_identity(const FreeWord& g, const FreeWord& h) {
  WordChar cg = classify_word(g);
  WordChar ch = classify_word(h);
  if (cg.kind != CharKind::Axis || ch.kind != CharKind::Axis)
    return {false, "an identity factor leaves the whole tree fixed", 0, 0, 0, 0};
  long d = axis_distance(g, cg, h, ch);
  if (d == 0) return {false, "the axes intersect", 0, 0, 0, 0};
  long np = classify_word(wmul(g, h)).norm;
  if (np != cg.norm + ch.norm + 2 * d)
    throw Error(ErrorKind::Check,
                "translation length across the bridge came out as " +
                    std::to_string(np) + " instead of " +
                    std::to_string(cg.norm + ch.norm + 2 * d));
  return {true, "", cg.norm, ch.norm, np, d};
}

CmDisjoint cm_disjoint_identity(const SimplicialTree& t,
                                const std::vector<std::size_t>& g,
                                const std::vector<std::size_t>& h) {
  PermChar cg = classify_perm(t, g);
  PermChar ch = classify_perm(t, h);
  if (cg.kind == CharKind::InvertedEdge || ch.kind == CharKind::InvertedEdge)
    return {false, "inversions are excluded from the identity", 0, 0, 0, 0};
  std::vector<std::size_t> a = char_vertices(cg);
  std::vector<std::size_t> b = char_vertices(ch);
  std::set<std::size_t> bs(b.begin(), b.end());
  long d = -1;
  for (std::size_t v : a) {
    std::vector<long> dist = distances_from(t, v);
    for (std::size_t w : b)
      if (d < 0 || dist[w] < d) d = dist[w];
  }
  if (d == 0) return {false, "the fixed trees intersect", 0, 0, 0, 0};
  long np = min_displacement(t, perm_compose(g, h));
  if (np != cg.norm + ch.norm + 2 * d)
    throw Error(ErrorKind::Check,
                "translation length across the bridge came out as " +
                    std::to_string(np) + " instead of " +
                    std::to_string(cg.norm + ch.norm + 2 * d));
  return {true, "", cg.norm, ch.norm, np, d};
}

CmMax cm_max_identity(const FreeWord& g, const FreeWord& h) {
  WordChar cg = classify_word(g);
  WordChar ch = classify_word(h);
  if (cg.kind != CharKind::Axis || ch.kind != CharKind::Axis)
    return {false, "both factors must be hyperbolic", 0, 0, 0, 0};
  long d = axis_distance(g, cg, h, ch);
  if (d > 0) return {false, "the axes are disjoint", 0, 0, 0, 0};
  long np = classify_word(wmul(g, h)).norm;
  long ni = classify_word(wmul(g, winv(h))).norm;
  if (std::max(np, ni) != cg.norm + ch.norm)
    throw Error(ErrorKind::Check,
                "crossing-axes identity came out as " +
                    std::to_string(std::max(np, ni)) + " instead of " +
                    std::to_string(cg.norm + ch.norm));
  return {true, "", cg.norm, ch.norm, np, ni};
}

CmMax cm_max_identity(const SimplicialTree& t,
                      const std::vector<std::size_t>& g,
                      const std::vector<std::size_t>& h) {
  classify_perm(t, g);
  classify_perm(t, h);
  return {false, "finite tree automorphisms are never hyperbolic", 0, 0, 0, 0};
}

SerreWitness serre_common_vertex(const SimplicialTree& t,
                                 const std::vector<std::size_t>& g,
                                 const std::vector<std::size_t>& h) {
  PermChar cg = classify_perm(t, g);
  PermChar ch = classify_perm(t, h);
  PermChar cp = classify_perm(t, perm_compose(g, h));
  if (cg.kind != CharKind::FixedSet)
    return {false, "the first factor is an inversion", 0};
  if (ch.kind != CharKind::FixedSet)
    return {false, "the second factor is an inversion", 0};
  if (cp.kind != CharKind::FixedSet)
    return {false, "the product is an inversion", 0};
  std::set<std::size_t> hs(ch.fixed.begin(), ch.fixed.end());
  for (std::size_t v : cg.fixed)
    if (hs.count(v)) return {true, "", v};
  throw Error(ErrorKind::Check,
              "elliptic pair with elliptic product has disjoint fixed trees");
}

HellyOutcome helly_intersection(
    const SimplicialTree& t,
    const std::vector<std::vector<std::size_t>>& subtrees) {
  if (subtrees.empty())
    throw Error(ErrorKind::Invalid, "no subtrees to intersect");
  for (std::size_t i = 0; i < subtrees.size(); ++i) {
    for (std::size_t v : subtrees[i])
      if (v >= t.size())
        throw Error(ErrorKind::Invalid,
                    "subtree " + num(i) + " has a vertex out of range");
    if (!connected_subset(t, subtrees[i]))
      throw Error(ErrorKind::Invalid,
                  "input " + num(i) + " is empty or not a subtree");
  }
  std::vector<std::set<std::size_t>> sets;
  for (const auto& s : subtrees) sets.emplace_back(s.begin(), s.end());
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      bool meet = false;
      for (std::size_t v : sets[i])
        if (sets[j].count(v)) {
          meet = true;
          break;
        }
      if (!meet) return {false, 0, {i, j}};
    }
  for (std::size_t v : sets[0]) {
    bool in_all = true;
    for (std::size_t j = 1; j < sets.size() && in_all; ++j)
      if (!sets[j].count(v)) in_all = false;
    if (in_all) return {true, v, {0, 0}};
  }
  throw Error(ErrorKind::Internal,
              "pairwise intersecting subtrees with empty total intersection");
}

MacphersonWitness macpherson_fixed_point(const SimplicialTree& t,
                                         const std::vector<std::size_t>& k0,
                                         const std::vector<std::size_t>& k1,
                                         const std::vector<std::size_t>& k2) {
  std::vector<std::size_t> p01 = perm_compose(k0, k1);
  std::vector<std::size_t> p02 = perm_compose(k0, k2);
  std::vector<std::size_t> p102 = perm_compose(k1, p02);
  struct Named {
    const char* name;
    const std::vector<std::size_t>* perm;
  };
  PermChar c0 = classify_perm(t, k0);
  PermChar c1 = classify_perm(t, k1);
  PermChar c02 = classify_perm(t, p02);
  for (Named nm : {Named{"k0", &k0}, Named{"k1", &k1}, Named{"k2", &k2},
                   Named{"k0k1", &p01}, Named{"k0k2", &p02},
                   Named{"k1k0k2", &p102}}) {
    if (classify_perm(t, *nm.perm).kind != CharKind::FixedSet)
      return {false, std::string(nm.name) + " is an inversion, not elliptic", 0};
  }
  HellyOutcome common = helly_intersection(t, {c0.fixed, c1.fixed, c02.fixed});
  if (!common.found)
    throw Error(ErrorKind::Internal,
                "pairwise fixed-tree intersections vanished despite the "
                "elliptic hypotheses");
  std::vector<std::size_t> f = perm_compose(k0, perm_compose(k1, p02));
  if (f[common.vertex] != common.vertex)
    throw Error(ErrorKind::Internal, "returned vertex moves under the product");
  return {true, "", common.vertex};
}

}  // namespace obkit::tree
