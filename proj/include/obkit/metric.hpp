#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "obkit/rat.hpp"
#include "obkit/tower.hpp"

namespace obkit::metric {

// Constraint violated by a candidate distance matrix; idx entries are
// 0-based point indices (unused slots -1).
struct Violation {
  std::string kind;  // "shape" | "range" | "diagonal" | "symmetry" | "triangle"
  std::array<int, 3> idx{-1, -1, -1};
  std::string detail;
};

// Symmetric n x n matrix over [0,1] with zero diagonal satisfying all
// triangle inequalities.  Distinct points at distance zero are allowed
// (a pre-metric); `strict()` reports whether none occur.
class DistanceMatrix {
public:
  static std::optional<Violation> find_violation(const std::vector<std::vector<Rat>>& entries);
  static DistanceMatrix validated(std::vector<std::vector<Rat>> entries);

  int size() const { return n_; }
  const Rat& at(int i, int j) const { return e_[i][j]; }
  const std::vector<std::vector<Rat>>& entries() const { return e_; }
  bool strict() const;

  bool operator==(const DistanceMatrix& o) const { return e_ == o.e_; }

private:
  explicit DistanceMatrix(std::vector<std::vector<Rat>> e);
  int n_;
  std::vector<std::vector<Rat>> e_;
};

// A distance matrix carrying a strictness claim and optional labels.
struct RationalMetricSpace {
  DistanceMatrix d;
  bool strict;
  std::vector<std::string> labels;  // empty or size n

  static RationalMetricSpace make(DistanceMatrix m, bool strict_claim,
                                  std::vector<std::string> labels = {});
};

Rat sup_distance(const DistanceMatrix& a, const DistanceMatrix& b);

// Pre-metric on 2n points restricting to A and B with cross distances
// min{1, min_l (a(i,l) + delta/2 + b(l,j))}; points 0..n-1 come from A,
// n..2n-1 from B.  Requires delta >= sup_distance(a, b).
DistanceMatrix glue_premetric(const DistanceMatrix& a, const DistanceMatrix& b,
                              const Rat& delta);

Rat glue_trace(const DistanceMatrix& glued);

struct CouplingResult {
  Rat value;                              // minimal trace
  std::vector<std::vector<Rat>> coupling; // witness cross-block c(i,j')
};

// Minimal trace of the cross block over all diameter-1 pre-metric couplings
// of A and B, as an exact rational linear program.
CouplingResult d1_distance(const DistanceMatrix& a, const DistanceMatrix& b);

// Builds the full 2n-point matrix from two blocks and a cross block and
// validates it (certificate helper for couplings).
DistanceMatrix coupled_matrix(const DistanceMatrix& a, const DistanceMatrix& b,
                              const std::vector<std::vector<Rat>>& cross);

// Enumerates every symmetric zero-diagonal matrix with off-diagonal entries
// drawn from `values` that satisfies all triangle inequalities, in
// lexicographic order of the upper triangle.
void for_each_premetric(int n, const std::vector<Rat>& values,
                        const std::function<void(const DistanceMatrix&)>& fn);

// All grid pre-metrics with entries in {0, 1/m, ..., 1} for m = ceil(1/eps);
// every element of D_n is within eps of some member (entrywise ceiling
// rounding, capped at 1).
std::vector<DistanceMatrix> epsilon_net(int n, const Rat& eps);

// The net member covering M under ceiling rounding.
DistanceMatrix round_to_net(const DistanceMatrix& m, const Rat& eps);

// Point of the geodesic extension: a point of X, or an interior point of the
// segment glued between two points.  Canonical form: x == y means the
// original point x; otherwise x < y and 0 < t < d(x,y).
struct GeodesicPoint {
  int x, y;
  Rat t;

  static GeodesicPoint original(int i) { return {i, i, Rat(0)}; }
  static GeodesicPoint interior(const DistanceMatrix& m, int x, int y, const Rat& t);
  bool is_original() const { return x == y; }
  bool operator==(const GeodesicPoint& o) const { return x == o.x && y == o.y && t == o.t; }
};

Rat geodesic_distance(const DistanceMatrix& m, const GeodesicPoint& p, const GeodesicPoint& q);

// One map in a Hölder composition: displacement bound c * d^alpha.
struct HolderPair {
  Rat c;      // >= 1
  Rat alpha;  // > 0, denominator a power of two (exactness)
};

struct HolderComposite {
  tower::Elem c;      // composed constant c1 * c2^a1 * c3^(a1 a2) * ...
  Rat alpha;          // composed exponent a1 a2 ... an
  Rat d;              // the distance the bound was evaluated at
  tower::Elem bound;  // c * d^alpha
};

HolderComposite holder_composition_bound(const std::vector<HolderPair>& maps, const Rat& d);

// Exact three-way comparison (-1, 0, +1) of two composition bounds.  Both
// sides are raised to the common denominator of the exponents first, which
// keeps the computation inside the constants' towers instead of adjoining
// chains of roots of the distances.
int compare_bounds(const HolderComposite& a, const HolderComposite& b);

// Composition of k maps that are M-Lipschitz for large distances
// (d(gx, gy) <= M(d(x,y) + 1) style, uniformly): displacement bound
// M^k (d + k) and the orbit diameter bound 2 k^2 M^k.
struct LargeScaleLipschitzBound {
  Rat displacement;    // M^k (d + k)
  Rat orbit_diameter;  // 2 k^2 M^k
};

LargeScaleLipschitzBound lipschitz_large_bound(const Rat& m, long k, const Rat& d);

}  // namespace obkit::metric
