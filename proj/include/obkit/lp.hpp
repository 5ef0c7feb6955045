#pragma once

#include <vector>

#include "obkit/rat.hpp"

namespace obkit::lp {

// min c.x  subject to  A x <= b  and  lo <= x <= up, all data rational.
// Every bound must be finite; solved exactly.
struct Problem {
  std::vector<std::vector<Rat>> a;
  std::vector<Rat> b;
  std::vector<Rat> c;
  std::vector<Rat> lo, up;

  int rows() const { return static_cast<int>(a.size()); }
  int cols() const { return static_cast<int>(c.size()); }
};

struct Solution {
  Rat value;
  std::vector<Rat> x;
  long pivots = 0;
};

// Bounded-variable primal simplex with Bland's rule on a condensed tableau,
// started from the all-at-upper-bound vertex, which must be feasible (this
// is checked; the coupling LPs used in this library always satisfy it).
// Re-entrant: no global state.
Solution solve_from_upper(const Problem& p);

}  // namespace obkit::lp
