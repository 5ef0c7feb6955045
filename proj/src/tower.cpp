#include "obkit/tower.hpp"

#include <sstream>

namespace obkit::tower {

namespace {

using Vec = std::vector<Rat>;

Vec addv(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec subv(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec negv(const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

bool zerov(const Vec& a) {
  for (const auto& x : a)
    if (!x.is_zero()) return false;
  return true;
}

Vec lower(const Vec& a) { return Vec(a.begin(), a.begin() + a.size() / 2); }
Vec upper(const Vec& a) { return Vec(a.begin() + a.size() / 2, a.end()); }

Vec join(Vec lo, const Vec& hi) {
  lo.insert(lo.end(), hi.begin(), hi.end());
  return lo;
}

// rads[0..depth) are the radicand coordinate vectors; level-d values have
// 2^d coordinates.
Vec mulv(const std::vector<Vec>& rads, std::size_t depth, const Vec& a, const Vec& b) {
  if (depth == 0) return Vec{a[0] * b[0]};
  Vec a0 = lower(a), a1 = upper(a), b0 = lower(b), b1 = upper(b);
  const Vec& r = rads[depth - 1];
  Vec cross = mulv(rads, depth - 1, a1, b1);
  Vec lo = addv(mulv(rads, depth - 1, a0, b0), mulv(rads, depth - 1, cross, r));
  Vec hi = addv(mulv(rads, depth - 1, a0, b1), mulv(rads, depth - 1, a1, b0));
  return join(std::move(lo), hi);
}

Vec invv(const std::vector<Vec>& rads, std::size_t depth, const Vec& a) {
  if (zerov(a)) throw Error(ErrorKind::Invalid, "field tower division by zero");
  if (depth == 0) return Vec{Rat(1) / a[0]};
  Vec a0 = lower(a), a1 = upper(a);
  const Vec& r = rads[depth - 1];
  // (a0 + a1*s)^-1 = (a0 - a1*s) / (a0^2 - a1^2 r); the norm is nonzero
  // because r is not a square at its level.
  Vec norm = subv(mulv(rads, depth - 1, a0, a0),
                  mulv(rads, depth - 1, mulv(rads, depth - 1, a1, a1), r));
  if (zerov(norm))
    throw Error(ErrorKind::Internal, "tower radicand turned out to be a square");
  Vec ninv = invv(rads, depth - 1, norm);
  return join(mulv(rads, depth - 1, a0, ninv), negv(mulv(rads, depth - 1, a1, ninv)));
}

struct Iv {
  Rat lo, hi;
};

Iv iv_add(const Iv& a, const Iv& b) { return {a.lo + b.lo, a.hi + b.hi}; }

Iv iv_mul(const Iv& a, const Iv& b) {
  Rat p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  Rat lo = min(min(p1, p2), min(p3, p4));
  Rat hi = max(max(p1, p2), max(p3, p4));
  return {lo, hi};
}

Iv eval_iv(const std::vector<Vec>& rads, std::size_t depth, const Vec& a, long bits) {
  if (depth == 0) return {a[0], a[0]};
  Iv v0 = eval_iv(rads, depth - 1, lower(a), bits);
  Iv v1 = eval_iv(rads, depth - 1, upper(a), bits);
  Iv r = eval_iv(rads, depth - 1, rads[depth - 1], bits);
  if (r.lo.sign() < 0) r.lo = Rat(0);  // radicand is positive; clamp the enclosure
  Iv s{r.lo.sqrt_enclosure(bits).first, r.hi.sqrt_enclosure(bits).second};
  return iv_add(v0, iv_mul(v1, s));
}

std::optional<Vec> sqrt_rec(const std::vector<Vec>& rads, std::size_t depth, const Vec& x);

std::optional<Vec> sqrt_scaled(const std::vector<Vec>& rads, std::size_t depth, Vec v,
                               const Rat& scale) {
  for (auto& c : v) c *= scale;
  return sqrt_rec(rads, depth, v);
}

std::optional<Vec> sqrt_rec(const std::vector<Vec>& rads, std::size_t depth, const Vec& x) {
  if (depth == 0) {
    auto r = x[0].exact_sqrt();
    if (!r) return std::nullopt;
    return Vec{*r};
  }
  Vec u = lower(x), v = upper(x);
  const Vec& r = rads[depth - 1];
  std::size_t half = x.size() / 2;
  if (zerov(v)) {
    // y = a (pure) or y = b*sqrt(r): y^2 = a^2 resp. b^2 r.
    if (auto a = sqrt_rec(rads, depth - 1, u))
      return join(std::move(*a), Vec(half, Rat(0)));
    Vec u_over_r = mulv(rads, depth - 1, u, invv(rads, depth - 1, r));
    if (auto b = sqrt_rec(rads, depth - 1, u_over_r))
      return join(Vec(half, Rat(0)), *b);
    return std::nullopt;
  }
  // y = a + b*sqrt(r) with a,b nonzero: a^2 = (u ± sqrt(u^2 - v^2 r))/2.
  Vec disc = subv(mulv(rads, depth - 1, u, u),
                  mulv(rads, depth - 1, mulv(rads, depth - 1, v, v), r));
  auto s = sqrt_rec(rads, depth - 1, disc);
  if (!s) return std::nullopt;
  for (int pick = 0; pick < 2; ++pick) {
    Vec t = pick == 0 ? addv(u, *s) : subv(u, *s);
    auto a = sqrt_scaled(rads, depth - 1, t, Rat(1, 2));
    if (!a || zerov(*a)) continue;
    Vec twice_a = *a;
    for (auto& c : twice_a) c *= Rat(2);
    Vec b = mulv(rads, depth - 1, v, invv(rads, depth - 1, twice_a));
    Vec y = join(Vec(*a), b);
    if (mulv(rads, depth, y, y) == x) return y;
  }
  return std::nullopt;
}

}  // namespace

TowerPtr Tower::rational() {
  static const TowerPtr base = std::make_shared<Tower>();
  return base;
}

bool Tower::extends(const TowerPtr& t, const TowerPtr& p) {
  if (p->depth() > t->depth()) return false;
  for (std::size_t i = 0; i < p->depth(); ++i)
    if (t->rads_[i] != p->rads_[i]) return false;
  return true;
}

TowerPtr extend_tower(const TowerPtr& t, std::vector<Rat> radicand) {
  auto nt = std::make_shared<Tower>(*t);
  nt->rads_.push_back(std::move(radicand));
  return nt;
}

Elem::Elem(TowerPtr tw, std::vector<Rat> co) : tw_(std::move(tw)), co_(std::move(co)) {
  if (co_.size() != tw_->dim())
    throw Error(ErrorKind::Invalid, "tower element coordinate count mismatch");
}

bool Elem::is_zero() const { return zerov(co_); }

bool Elem::is_rational() const {
  for (std::size_t i = 1; i < co_.size(); ++i)
    if (!co_[i].is_zero()) return false;
  return true;
}

Rat Elem::as_rat() const {
  if (!is_rational()) throw Error(ErrorKind::Invalid, "tower element is not rational");
  return co_[0];
}

int Elem::sign() const {
  if (is_zero()) return 0;
  if (is_rational()) return co_[0].sign();
  for (long bits = 8; bits <= 4096; bits *= 2) {
    Iv iv = eval_iv(tw_->radicands(), tw_->depth(), co_, bits);
    if (iv.lo.sign() > 0) return 1;
    if (iv.hi.sign() < 0) return -1;
  }
  throw Error(ErrorKind::Internal, "sign refinement did not separate from zero");
}

Elem Elem::promoted(const TowerPtr& deeper) const {
  if (!Tower::extends(deeper, tw_))
    throw Error(ErrorKind::Invalid, "tower promotion into a non-extension");
  std::vector<Rat> co(deeper->dim(), Rat(0));
  for (std::size_t i = 0; i < co_.size(); ++i) co[i] = co_[i];
  return Elem(deeper, std::move(co));
}

namespace {

// State of a tower merge: the combined tower so far, and the square root of
// each source radicand expressed inside it.
struct Merge {
  TowerPtr t;
  std::vector<Elem> roots;
};

// Evaluates coordinates over the source tower's depth-`depth` prefix as an
// element of the merge target, substituting the recorded roots.
Elem eval_coords(std::size_t depth, const Vec& co, const Merge& mg) {
  if (depth == 0) return Elem(co[0]).promoted(mg.t);
  Elem l = eval_coords(depth - 1, lower(co), mg);
  Elem h = eval_coords(depth - 1, upper(co), mg);
  return l + h * mg.roots[depth - 1].promoted(mg.t);
}

// If v coincides with a generator radicand of t, its root is that basis
// radical; this shortcut keeps merges of towers with shared chains cheap.
std::optional<Elem> generator_root(const TowerPtr& t, const Elem& v) {
  const auto& rads = t->radicands();
  const Vec& cv = v.coords();
  for (std::size_t level = 0; level < rads.size(); ++level) {
    bool eq = true;
    for (std::size_t i = 0; i < cv.size() && eq; ++i) {
      if (i < rads[level].size()) {
        if (!(cv[i] == rads[level][i])) eq = false;
      } else if (!cv[i].is_zero()) {
        eq = false;
      }
    }
    if (!eq) continue;
    std::vector<Rat> co(t->dim(), Rat(0));
    co[std::size_t(1) << level] = Rat(1);
    return Elem(t, std::move(co));
  }
  return std::nullopt;
}

Merge merge_towers(const TowerPtr& base, const TowerPtr& src) {
  Merge mg{base, {}};
  for (std::size_t j = 0; j < src->depth(); ++j) {
    Elem v = eval_coords(j, src->radicands()[j], mg);
    Elem s;
    if (auto g = generator_root(mg.t, v)) {
      s = *g;
    } else {
      s = sqrt(v);  // finds an existing root or extends mg.t
    }
    mg.t = s.tower();
    mg.roots.push_back(s);
  }
  return mg;
}

}  // namespace

std::pair<Elem, Elem> align(const Elem& a, const Elem& b) {
  if (Tower::extends(a.tower(), b.tower())) return {a, b.promoted(a.tower())};
  if (Tower::extends(b.tower(), a.tower())) return {a.promoted(b.tower()), b};
  Merge mg = merge_towers(a.tower(), b.tower());
  return {a.promoted(mg.t), eval_coords(b.tower()->depth(), b.coords(), mg)};
}

Elem operator+(const Elem& a, const Elem& b) {
  auto [x, y] = align(a, b);
  return Elem(x.tower(), addv(x.coords(), y.coords()));
}

Elem operator-(const Elem& a, const Elem& b) {
  auto [x, y] = align(a, b);
  return Elem(x.tower(), subv(x.coords(), y.coords()));
}

Elem operator*(const Elem& a, const Elem& b) {
  auto [x, y] = align(a, b);
  const auto& tw = x.tower();
  return Elem(tw, mulv(tw->radicands(), tw->depth(), x.coords(), y.coords()));
}

Elem operator/(const Elem& a, const Elem& b) { return a * b.inverse(); }

Elem Elem::operator-() const { return Elem(tw_, negv(co_)); }

Elem Elem::inverse() const {
  return Elem(tw_, invv(tw_->radicands(), tw_->depth(), co_));
}

bool operator==(const Elem& a, const Elem& b) {
  auto [x, y] = align(a, b);
  return x.coords() == y.coords();
}

std::string Elem::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t mask = 0; mask < co_.size(); ++mask) {
    if (co_[mask].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << co_[mask].str();
    for (std::size_t j = 0; j < tw_->depth(); ++j)
      if (mask & (std::size_t(1) << j)) os << "*s" << (j + 1);
  }
  if (first) os << "0";
  return os.str();
}

std::optional<Elem> try_sqrt(const Elem& x) {
  if (x.sign() < 0) return std::nullopt;
  auto r = sqrt_rec(x.tower()->radicands(), x.tower()->depth(), x.coords());
  if (!r) return std::nullopt;
  Elem root(x.tower(), std::move(*r));
  if (root.sign() < 0) root = -root;
  return root;
}

Elem sqrt(const Elem& x) {
  int sg = x.sign();
  if (sg < 0) throw Error(ErrorKind::Invalid, "square root of a negative element");
  if (sg == 0) return Elem(x.tower(), std::vector<Rat>(x.tower()->dim(), Rat(0)));
  if (auto r = try_sqrt(x)) return *r;
  // Not a square anywhere in the current tower, so adjoining it keeps the
  // basis independent; the result extends x's tower and stays mixable with
  // everything already built over it.
  auto ext = extend_tower(x.tower(), x.coords());
  std::vector<Rat> co(ext->dim(), Rat(0));
  co[ext->dim() / 2] = Rat(1);  // the freshly adjoined radical
  return Elem(ext, std::move(co));
}

Elem pow(const Elem& x, const Rat& exponent) {
  long den = exponent.den_long();
  if ((den & (den - 1)) != 0)
    throw Error(ErrorKind::Invalid,
                "exponent denominator must be a power of two for exact evaluation");
  long num = exponent.num_long();
  if (x.sign() < 0) throw Error(ErrorKind::Invalid, "power of a negative element");
  if (x.is_zero()) {
    if (num <= 0) throw Error(ErrorKind::Invalid, "zero to a nonpositive power");
    return x;
  }
  Elem y = x;
  for (long d = den; d > 1; d /= 2) y = sqrt(y);
  Elem acc(Rat(1));
  Elem base = num >= 0 ? y : y.inverse();
  long e = num >= 0 ? num : -num;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

}  // namespace obkit::tower
