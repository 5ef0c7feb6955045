#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "obkit/metric.hpp"
#include "obkit/rat.hpp"

namespace obkit::urysohn {

using metric::DistanceMatrix;
using metric::RationalMetricSpace;

// Admissible distance profile for one new point over a base space: each value
// f(x) obeys |f(x) - f(y)| <= d(x,y) <= f(x) + f(y), everything capped at 1.
struct KatetovFunction {
  std::vector<Rat> values;
};

// All Katetov functions with values on the grid {0, 1/denom, ..., 1},
// enumerated in lexicographic order.  Never empty: the constant-1 profile
// always qualifies on a diameter-1 space.
std::vector<KatetovFunction> katetov_extensions(const RationalMetricSpace& x,
                                                long denom);

// The base space with one point appended at the profile's distances.
RationalMetricSpace extend_with(const RationalMetricSpace& x,
                                const KatetovFunction& f);

// Injective point assignment preserving every pairwise distance.
struct PartialIsometry {
  std::vector<std::pair<std::size_t, std::size_t>> map;
};

void validate_partial_isometry(const RationalMetricSpace& x,
                               const PartialIsometry& p);

struct Amalgam {
  RationalMetricSpace space;
  std::vector<std::size_t> xprime, zprime;  // indices of the adjoined copies
};

// Adjoins copies xbar', zbar' with (xbar', zbar', ybar) isometric to
// (xbar, zbar, ybar), xbar at uniform distance 1 from both copies, zbar at
// uniform distance 1 from xbar', d(z_i, z'_j) = min{1, min_l d(z_i,y_l) +
// d(y_l,z_j)}, and distances to unrelated base points filled by the Katetov
// infimal convolution over the anchor tuples.  Requires xbar uniformly at
// distance 1 from ybar and zbar disjoint from ybar.
Amalgam amalgamate_over(const RationalMetricSpace& x,
                        const std::vector<std::size_t>& xbar,
                        const std::vector<std::size_t>& zbar,
                        const std::vector<std::size_t>& ybar);

struct FourFactor {
  RationalMetricSpace space;  // base, then ybar, then xbar', zbar'
  std::vector<std::size_t> xbar, ybar, zbar, xprime, zprime;
  PartialIsometry g, h, f, k;  // over the extended space's indices
};

// Writes g (given on xbar) as a product of stabilizer pieces: h fixes ybar
// and moves (xbar, zbar) to the adjoined copies, f fixes xbar and moves
// zbar' to xbar', k fixes ybar and returns xbar' to xbar; the composite
// k.f.h.g fixes xbar pointwise, checked index by index.
FourFactor four_factor_decomposition(const RationalMetricSpace& x,
                                     const std::vector<std::size_t>& xbar,
                                     const PartialIsometry& g);

struct ExtensionResult {
  RationalMetricSpace space;     // contains the input space as a prefix
  std::vector<std::size_t> map;  // total isometry as a permutation
};

// Breadth-first completion of p to a total isometry of an enlarged space,
// growing by one-point extensions on the 1/denom grid; the space may not
// exceed `budget` points.  Branches are explored in lexicographic order, so
// the result is deterministic.
ExtensionResult extend_partial_isometry(const RationalMetricSpace& x,
                                        const PartialIsometry& p, long denom,
                                        std::size_t budget);

// Orbit-representative distance matrices witnessing finite-level approximate
// oligomorphy; a thin wrapper over the metric grid net.
std::vector<DistanceMatrix> oligomorphy_witness(std::size_t n, const Rat& eps);

// A finite group acting on a finite space, each element a distance-preserving
// permutation of the points; the list must be closed under composition.
struct IsometryAction {
  RationalMetricSpace space;
  std::vector<std::vector<std::size_t>> elements;
};

struct WidthFactors {
  std::size_t f, u1, u2, h, u3;  // element indices with f = u1 u2^-1 h u3^-1
};

struct WidthDecomposition {
  std::vector<std::size_t> u;  // elements moving the anchor tuple less than eps
  std::vector<std::size_t> h;  // the finite correction set
  std::vector<WidthFactors> certificate;  // one verified entry per element
};

// Constructive bounded-width certificate G = U U^-1 H U^-1 for the action,
// with U the eps-stabilizer of xbar; every group element receives explicit
// factors, each membership checked exactly.
WidthDecomposition width_decomposition(const IsometryAction& action,
                                       const std::vector<std::size_t>& xbar,
                                       const Rat& eps);

}  // namespace obkit::urysohn
