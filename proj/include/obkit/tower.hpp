#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "obkit/error.hpp"
#include "obkit/rat.hpp"

namespace obkit::tower {

// Real multiquadratic field tower Q(sqrt(r1), ..., sqrt(rk)).  Each radicand
// r_j is a positive element of the previous level that is not a square there,
// so the 2^k products of radicals form a basis and the zero test is just
// "all coordinates zero".  Towers are immutable; adjoining a root returns a
// new descriptor whose levels extend the old one, and elements of a prefix
// tower promote into the extension.
class Tower;
using TowerPtr = std::shared_ptr<const Tower>;

class Tower {
public:
  // Radicand j is stored by its coordinate vector over the depth-j prefix
  // (length 2^j).
  const std::vector<std::vector<Rat>>& radicands() const { return rads_; }
  std::size_t depth() const { return rads_.size(); }
  std::size_t dim() const { return std::size_t(1) << depth(); }

  static TowerPtr rational();  // depth 0

  // True when `p` is a prefix of `t` (coordinatewise equal radicands).
  static bool extends(const TowerPtr& t, const TowerPtr& p);

private:
  friend class Elem;
  friend TowerPtr extend_tower(const TowerPtr&, std::vector<Rat>);
  std::vector<std::vector<Rat>> rads_;
};

class Elem {
public:
  Elem() : tw_(Tower::rational()), co_(1, Rat(0)) {}
  Elem(const Rat& r) : tw_(Tower::rational()), co_(1, r) {}
  Elem(TowerPtr tw, std::vector<Rat> co);

  const TowerPtr& tower() const { return tw_; }
  const std::vector<Rat>& coords() const { return co_; }

  bool is_zero() const;
  bool is_rational() const;  // all coords above the first vanish
  Rat as_rat() const;        // requires is_rational()

  // -1, 0, +1; decided exactly (zero by canonical form, otherwise interval
  // refinement until the enclosure excludes zero).
  int sign() const;

  friend Elem operator+(const Elem& a, const Elem& b);
  friend Elem operator-(const Elem& a, const Elem& b);
  friend Elem operator*(const Elem& a, const Elem& b);
  friend Elem operator/(const Elem& a, const Elem& b);
  Elem operator-() const;
  Elem inverse() const;

  friend bool operator==(const Elem& a, const Elem& b);
  friend bool operator!=(const Elem& a, const Elem& b) { return !(a == b); }
  bool operator<(const Elem& o) const { return (*this - o).sign() < 0; }
  bool operator<=(const Elem& o) const { return (*this - o).sign() <= 0; }
  bool operator>(const Elem& o) const { return (*this - o).sign() > 0; }
  bool operator>=(const Elem& o) const { return (*this - o).sign() >= 0; }

  std::string str() const;

  // Lift into a deeper tower extending this element's tower.
  Elem promoted(const TowerPtr& deeper) const;

private:
  TowerPtr tw_;
  std::vector<Rat> co_;  // length = tw_->dim(), basis by radical-subset mask
};

// Brings two elements into a common tower.  When neither tower extends the
// other, a merged tower is built by adjoining the missing radicals, so
// elements from independently grown towers always compare and combine.
std::pair<Elem, Elem> align(const Elem& a, const Elem& b);

// Exact square root search within the element's own tower; nullopt when x is
// not a square there.  Returned root is the nonnegative one.
std::optional<Elem> try_sqrt(const Elem& x);

// Square root of a nonnegative element, adjoining a new level when needed.
// The result lives in the (possibly extended) tower.
Elem sqrt(const Elem& x);

// x^(p/q) for nonnegative x, where q must be a power of two (repeated
// square roots keep everything inside quadratic towers).
Elem pow(const Elem& x, const Rat& exponent);

}  // namespace obkit::tower
