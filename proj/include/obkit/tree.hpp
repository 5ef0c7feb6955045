#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "obkit/error.hpp"

namespace obkit::tree {

// Finite combinatorial tree: connected, acyclic, vertices 0..n-1.
class SimplicialTree {
public:
  static SimplicialTree validated(
      std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges);

  std::size_t size() const { return n_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const {
    return edges_;
  }
  const std::vector<std::size_t>& neighbors(std::size_t v) const {
    return adj_[v];
  }

private:
  SimplicialTree(std::size_t n,
                 std::vector<std::pair<std::size_t, std::size_t>> edges,
                 std::vector<std::vector<std::size_t>> adj);
  std::size_t n_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<std::vector<std::size_t>> adj_;
};

std::vector<long> distances_from(const SimplicialTree& t, std::size_t src);
long vertex_distance(const SimplicialTree& t, std::size_t u, std::size_t v);

// Vertex permutations acting on a tree.
void validate_automorphism(const SimplicialTree& t,
                           const std::vector<std::size_t>& perm);
std::vector<std::size_t> perm_compose(const std::vector<std::size_t>& a,
                                      const std::vector<std::size_t>& b);
std::vector<std::size_t> perm_inverse(const std::vector<std::size_t>& a);

enum class CharKind { FixedSet, InvertedEdge, Axis };

// Characteristic subtree of a finite-tree automorphism: the fixed subtree,
// or the unique inverted edge.  norm is the minimal vertex displacement.
struct PermChar {
  CharKind kind;
  std::vector<std::size_t> fixed;
  std::pair<std::size_t, std::size_t> edge;
  long norm;
};
PermChar classify_perm(const SimplicialTree& t,
                       const std::vector<std::size_t>& g);

// Midpoint subdivision with the induced automorphism, which never inverts
// an edge.  midpoint[e] is the new vertex sitting on edge e.
struct Subdivision {
  SimplicialTree tree;
  std::vector<std::size_t> perm;
  std::vector<std::size_t> midpoint;
};
Subdivision subdivide_midpoints(const SimplicialTree& t,
                                const std::vector<std::size_t>& g);

// Freely reduced word over generators a..z, capital letters for inverses.
// Acts by left translation on the Cayley tree of the free group.
struct FreeWord {
  std::vector<int> letters;  // +k is the k-th generator, -k its inverse

  static FreeWord parse(std::string_view s);
  std::string str() const;
  bool empty() const { return letters.empty(); }
  long length() const { return (long)letters.size(); }
  bool operator==(const FreeWord& o) const { return letters == o.letters; }
  bool operator!=(const FreeWord& o) const { return !(*this == o); }
};

FreeWord wreduce(std::vector<int> letters);
FreeWord wmul(const FreeWord& a, const FreeWord& b);
FreeWord winv(const FreeWord& a);
long wdist(const FreeWord& x, const FreeWord& y);

// Characteristic data of a left translation: identity fixes everything,
// any other word is hyperbolic with axis base.(powers of direction) and
// norm the length of the cyclic reduction.
struct WordChar {
  CharKind kind;
  FreeWord base;
  FreeWord direction;
  long norm;
};
WordChar classify_word(const FreeWord& g);

// All axis vertices at distance <= radius from the identity vertex.
std::vector<FreeWord> axis_ball(const WordChar& wc, long radius);

// Translation length addition across the bridge between disjoint
// characteristic subtrees: norm_product = norm_g + norm_h + 2*distance.
struct CmDisjoint {
  bool applicable;
  std::string reason;
  long norm_g, norm_h, norm_product, distance;
};
CmDisjoint cm_disjoint_identity(const FreeWord& g, const FreeWord& h);
CmDisjoint cm_disjoint_identity(const SimplicialTree& t,
                                const std::vector<std::size_t>& g,
                                const std::vector<std::size_t>& h);

// Crossing hyperbolic axes: max(norm_product, norm_product_inv) equals
// norm_g + norm_h.
struct CmMax {
  bool applicable;
  std::string reason;
  long norm_g, norm_h, norm_product, norm_product_inv;
};
CmMax cm_max_identity(const FreeWord& g, const FreeWord& h);
CmMax cm_max_identity(const SimplicialTree& t,
                      const std::vector<std::size_t>& g,
                      const std::vector<std::size_t>& h);

// Serre: elliptic g, h with elliptic product share a fixed vertex.
struct SerreWitness {
  bool applicable;
  std::string reason;
  std::size_t common;
};
SerreWitness serre_common_vertex(const SimplicialTree& t,
                                 const std::vector<std::size_t>& g,
                                 const std::vector<std::size_t>& h);

// Helly property for subtrees: pairwise intersection forces a common
// vertex; otherwise some pair is disjoint and is returned as witness.
struct HellyOutcome {
  bool found;
  std::size_t vertex;
  std::pair<std::size_t, std::size_t> disjoint;  // indices into the input
};
HellyOutcome helly_intersection(
    const SimplicialTree& t,
    const std::vector<std::vector<std::size_t>>& subtrees);

// Triple-intersection fixed point: with k0, k1, k2 and the products
// k0k1, k0k2, k1k0k2 all elliptic, k0k1k0k2 fixes a vertex.
struct MacphersonWitness {
  bool applicable;
  std::string reason;
  std::size_t vertex;
};
MacphersonWitness macpherson_fixed_point(const SimplicialTree& t,
                                         const std::vector<std::size_t>& k0,
                                         const std::vector<std::size_t>& k1,
                                         const std::vector<std::size_t>& k2);

}  // namespace obkit::tree
