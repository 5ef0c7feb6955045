#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "obkit/rat.hpp"

namespace obkit::circular {

// Representative of a circle point in [0, 1).
Rat mod1(const Rat& x);

// Strict clockwise betweenness: walking from x in the increasing
// direction one meets y before z.  False unless all three are distinct.
bool betweenness(const Rat& x, const Rat& y, const Rat& z);

// Every increasing index triple satisfies betweenness.  Vacuously true
// for fewer than three points.
bool is_circular_config(const std::vector<Rat>& pts);

// Orientation-preserving piecewise-linear circle bijection given by
// breakpoint pairs; between breakpoints the map interpolates linearly.
// No breakpoints means the identity, one breakpoint a rotation.
struct PLCircleMap {
  // Sorted by input point; outputs share the inputs' cyclic order.
  std::vector<std::pair<Rat, Rat>> breakpoints;

  static PLCircleMap validated(std::vector<std::pair<Rat, Rat>> pairs);

  Rat eval(const Rat& t) const;
  PLCircleMap inverse() const;
};

struct ProduktResult {
  bool feasible;
  std::string reason;  // obstruction witness when infeasible
  // Indices whose image already lies in the arc between the last and
  // the first fixed anchor (the pinnable positions).
  std::vector<std::size_t> interval;
  bool pinned;     // direct placement used; otherwise the derived route
  PLCircleMap f;   // fixes ybar pointwise
  PLCircleMap h;   // fixes xbar pointwise
};

// Factors a cyclic-order automorphism through two point-stabilizers:
// finds f fixing ybar and h fixing xbar with h(f(x_i)) = g_i exactly.
// xbar followed by ybar must be a circular configuration and the g_i
// must be distinct and in cyclic order.  When the two placement arcs
// are disjoint no such pair exists; the result says so with a witness.
ProduktResult produkt_factorization(const std::vector<Rat>& xbar,
                                    const std::vector<Rat>& ybar,
                                    const std::vector<Rat>& gimg);

}  // namespace obkit::circular
