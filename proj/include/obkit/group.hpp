#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "obkit/metric.hpp"
#include "obkit/rat.hpp"

namespace obkit::group {

// Finite group as a multiplication table over indices 0..n-1.
struct FiniteGroup {
  std::vector<std::vector<std::size_t>> mul;
  std::size_t id = 0;
  std::vector<std::size_t> inv;

  std::size_t size() const { return mul.size(); }
  std::size_t op(std::size_t a, std::size_t b) const { return mul[a][b]; }

  // Locates the identity and inverses, checks associativity (every triple
  // up to order 32 or when forced, a fixed pseudorandom sample beyond).
  static FiniteGroup validated(std::vector<std::vector<std::size_t>> table,
                               bool full_associativity = false);
};

FiniteGroup cyclic_group(std::size_t n);
FiniteGroup symmetric_group(std::size_t letters);
FiniteGroup dihedral_group(std::size_t n);  // order 2n, n >= 1
FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);

// Smallest subgroup containing the given elements, sorted.
std::vector<std::size_t> subgroup_closure(const FiniteGroup& g,
                                          const std::vector<std::size_t>& gens);

// Lex-least left coset representatives, identity first.
std::vector<std::size_t> left_transversal(const FiniteGroup& g,
                                          const std::vector<std::size_t>& sub);

// Increasing exhaustive list of subsets W_0 to W_top = G.  The word
// metric below needs the normalized form: symmetric levels starting
// from the singleton of the identity.
struct SubsetChain {
  std::vector<std::vector<std::size_t>> levels;  // each sorted, deduplicated
  bool normalized = false;

  static SubsetChain validated(const FiniteGroup& g,
                               std::vector<std::vector<std::size_t>> levels);
};

struct ChainDistance {
  Rat distance;           // least total level weight of a factorization
  std::size_t gen_level;  // least n with the n-th level generating the group
  std::size_t gen_power;  // least k with levels[gen_level]^k covering it
};

// Left-invariant word metric weighted by chain membership level: the
// cheapest way to write f^-1 g as a product of chain members, charging
// each factor the index of the first level containing it.
ChainDistance chain_metric(const FiniteGroup& g, const SubsetChain& chain,
                           std::size_t f, std::size_t h);

// Symmetric identity neighbourhoods V_first, V_first+1, ... with
// V_n^3 inside V_n+1 and the top level covering the group.
struct Filtration {
  long first = 0;  // integer index of sets[0]
  std::vector<std::vector<std::size_t>> sets;  // each sorted, deduplicated

  static Filtration validated(const FiniteGroup& g, long first,
                              std::vector<std::vector<std::size_t>> sets);
};

struct BirkhoffDistance {
  Rat delta;  // least 2^n with g1^-1 g2 in the n-th set (0 on equality)
  Rat d;      // cheapest chain of hops, each charged its delta
};

// Distance pair of the Birkhoff-Kakutani construction; the chained
// metric d always satisfies delta <= 2d <= 2 delta on distinct pairs.
BirkhoffDistance birkhoff_metric(const FiniteGroup& g, const Filtration& filt,
                                 std::size_t g1, std::size_t g2);

// Least n with E^n = G for a symmetric generating set containing the
// identity (the eccentricity of the identity in the Cayley graph).
std::size_t cayley_width(const FiniteGroup& g,
                         const std::vector<std::size_t>& e);

struct SquareCertificate {
  bool majority;  // the subset has more than half the elements
  bool square;    // every element is a product of two members
  // Per group element a factor pair inside the subset, or (-1, -1).
  std::vector<std::pair<long, long>> factors;
  std::size_t missing;  // first uncovered element, valid when !square
};

// Squares a symmetric subset containing the identity; a majority subset
// always covers the whole group (two translates must overlap).
SquareCertificate large_subset_square(const FiniteGroup& g,
                                      const std::vector<std::size_t>& b);

struct InducedAction {
  // Equivariant maps from the group into the base space, each stored as
  // the vector of base-point indices over all group elements.
  std::vector<std::vector<std::size_t>> points;
  metric::RationalMetricSpace space;  // sup metric over the transversal
  // Per group element the permutation of `points` by left translation.
  std::vector<std::vector<std::size_t>> action;
  std::vector<Rat> orbit_diameter;  // per point, diameter of its orbit
};

// Induces an isometric action of the whole group from an isometric
// subgroup action on the base space, over a left coset transversal
// containing the identity.  `act` lists one base-space permutation per
// subgroup element, aligned with `sub`.
InducedAction induce_action(const FiniteGroup& g,
                            const std::vector<std::size_t>& sub,
                            const std::vector<std::size_t>& transversal,
                            const metric::RationalMetricSpace& x,
                            const std::vector<std::vector<std::size_t>>& act);

}  // namespace obkit::group
