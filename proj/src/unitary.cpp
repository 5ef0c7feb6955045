#include "obkit/unitary.hpp"

#include <algorithm>
#include <string>

namespace obkit::unitary {

namespace {

const Elem kZero{};
const Elem kOne{Rat(1)};

std::string pair_label(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

FinVector shifted(const FinVector& v, long delta) {
  FinVector out;
  for (const auto& [i, c] : v.entries()) out.set(i + delta, c);
  return out;
}

}  // namespace

FinVector FinVector::basis(long i) {
  FinVector v;
  v.set(i, kOne);
  return v;
}

void FinVector::set(long i, Elem v) {
  if (v.is_zero())
    co_.erase(i);
  else
    co_.insert_or_assign(i, std::move(v));
}

Elem FinVector::get(long i) const {
  auto it = co_.find(i);
  return it == co_.end() ? kZero : it->second;
}

long FinVector::support_lo() const {
  if (co_.empty()) throw Error(ErrorKind::Invalid, "zero vector has no support");
  return co_.begin()->first;
}

long FinVector::support_hi() const {
  if (co_.empty()) throw Error(ErrorKind::Invalid, "zero vector has no support");
  return co_.rbegin()->first;
}

FinVector operator+(const FinVector& a, const FinVector& b) {
  FinVector out = a;
  for (const auto& [i, c] : b.co_) out.set(i, out.get(i) + c);
  return out;
}

FinVector operator-(const FinVector& a, const FinVector& b) {
  FinVector out = a;
  for (const auto& [i, c] : b.co_) out.set(i, out.get(i) - c);
  return out;
}

FinVector FinVector::scaled(const Elem& c) const {
  FinVector out;
  for (const auto& [i, v] : co_) out.set(i, v * c);
  return out;
}

Elem inner(const FinVector& a, const FinVector& b) {
  Elem s;
  for (const auto& [i, c] : a.co_) {
    auto it = b.co_.find(i);
    if (it != b.co_.end()) s = s + c * it->second;
  }
  return s;
}

bool operator==(const FinVector& a, const FinVector& b) { return (a - b).is_zero(); }

Elem norm_sq(const FinVector& v) { return inner(v, v); }

FinitaryOperator::FinitaryOperator(long lo, std::vector<std::vector<Elem>> cols,
                                   bool validate)
    : lo_(lo), cols_(std::move(cols)) {
  for (const auto& c : cols_)
    if ((long)c.size() != size())
      throw Error(ErrorKind::Invalid, "operator block is not square");
  if (!validate) return;
  for (long j = 0; j < size(); ++j)
    for (long l = j; l < size(); ++l) {
      Elem s;
      for (long i = 0; i < size(); ++i) s = s + cols_[j][i] * cols_[l][i];
      bool ok = (j == l) ? s == kOne : s.is_zero();
      if (!ok)
        throw Error(ErrorKind::Invalid, "operator columns are not orthonormal at " +
                                            pair_label(j, l));
    }
}

FinitaryOperator FinitaryOperator::identity() { return FinitaryOperator(0, {}, false); }

FinitaryOperator FinitaryOperator::from_columns(long lo,
                                                std::vector<std::vector<Elem>> cols) {
  return FinitaryOperator(lo, std::move(cols), true);
}

FinVector FinitaryOperator::column(long basis_index) const {
  long j = basis_index - lo_;
  if (j < 0 || j >= size()) return FinVector::basis(basis_index);
  FinVector out;
  for (long i = 0; i < size(); ++i) out.set(lo_ + i, cols_[j][i]);
  return out;
}

FinVector FinitaryOperator::apply(const FinVector& v) const {
  FinVector out;
  for (const auto& [i, c] : v.entries()) {
    long j = i - lo_;
    if (j < 0 || j >= size()) {
      out.set(i, out.get(i) + c);
    } else {
      for (long r = 0; r < size(); ++r)
        if (!cols_[j][r].is_zero()) out.set(lo_ + r, out.get(lo_ + r) + c * cols_[j][r]);
    }
  }
  return out;
}

FinitaryOperator FinitaryOperator::inverse() const {
  std::vector<std::vector<Elem>> t(size(), std::vector<Elem>(size()));
  for (long j = 0; j < size(); ++j)
    for (long i = 0; i < size(); ++i) t[j][i] = cols_[i][j];
  return FinitaryOperator(lo_, std::move(t), false);
}

bool FinitaryOperator::fixes_pointwise(long first, long last) const {
  for (long i = first; i <= last; ++i)
    if (column(i) != FinVector::basis(i)) return false;
  return true;
}

FinitaryOperator FinitaryOperator::normalized() const {
  auto is_identity_col = [&](long j) {
    for (long i = 0; i < size(); ++i) {
      bool want_one = (i == j);
      if (want_one ? cols_[j][i] != kOne : !cols_[j][i].is_zero()) return false;
    }
    return true;
  };
  long a = 0, b = size();
  while (a < b && is_identity_col(a)) ++a;
  while (b > a && is_identity_col(b - 1)) --b;
  std::vector<std::vector<Elem>> sub;
  for (long j = a; j < b; ++j)
    sub.emplace_back(cols_[j].begin() + a, cols_[j].begin() + b);
  long nlo = sub.empty() ? 0 : lo_ + a;
  return FinitaryOperator(nlo, std::move(sub), false);
}

bool operator==(const FinitaryOperator& a, const FinitaryOperator& b) {
  FinitaryOperator na = a.normalized(), nb = b.normalized();
  if (na.lo_ != nb.lo_ || na.size() != nb.size()) return false;
  for (long j = 0; j < na.size(); ++j)
    for (long i = 0; i < na.size(); ++i)
      if (na.cols_[j][i] != nb.cols_[j][i]) return false;
  return true;
}

FinitaryOperator compose(const FinitaryOperator& a, const FinitaryOperator& b) {
  if (a.size() == 0) return b;
  if (b.size() == 0) return a;
  long lo = std::min(a.lo(), b.lo());
  long hi = std::max(a.lo() + a.size(), b.lo() + b.size());
  long n = hi - lo;
  std::vector<std::vector<Elem>> cols(n, std::vector<Elem>(n));
  for (long j = 0; j < n; ++j) {
    FinVector w = a.apply(b.column(lo + j));
    for (const auto& [i, c] : w.entries()) {
      if (i < lo || i >= hi)
        throw Error(ErrorKind::Internal, "composition left the common window");
      cols[j][i - lo] = c;
    }
  }
  return FinitaryOperator::from_columns(lo, std::move(cols));
}

std::vector<FinVector> gram_schmidt(const std::vector<FinVector>& vectors,
                                    const std::vector<FinVector>& prefix) {
  for (std::size_t i = 0; i < prefix.size(); ++i)
    for (std::size_t j = i; j < prefix.size(); ++j) {
      Elem ip = inner(prefix[i], prefix[j]);
      bool ok = (i == j) ? ip == kOne : ip.is_zero();
      if (!ok)
        throw Error(ErrorKind::Invalid,
                    "prefix is not orthonormal at " + pair_label(i, j));
    }
  std::vector<FinVector> out = prefix;
  for (const FinVector& v : vectors) {
    FinVector r = v;
    for (const FinVector& w : out) r = r - w.scaled(inner(r, w));
    Elem n2 = norm_sq(r);
    if (n2.is_zero()) continue;
    out.push_back(r.scaled(tower::sqrt(n2).inverse()));
  }
  for (const FinVector& v : vectors) {
    FinVector rec;
    for (const FinVector& w : out) rec = rec + w.scaled(inner(v, w));
    if (rec != v) throw Error(ErrorKind::Internal, "span certificate failed");
  }
  return out;
}

FinitaryOperator extend_partial_isometry(const std::vector<VectorPair>& pairs) {
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = i; j < pairs.size(); ++j)
      if (inner(pairs[i].x, pairs[j].x) != inner(pairs[i].y, pairs[j].y))
        throw Error(ErrorKind::Invalid,
                    "not an isometry: inner products differ at pairs " +
                        pair_label(i, j));

  // Orthonormalize the domain side and replay the same combination on the
  // image side; equal Gram matrices force equal residual norms.
  std::vector<FinVector> u, v;
  for (const auto& p : pairs) {
    FinVector rx = p.x, ry = p.y;
    for (std::size_t l = 0; l < u.size(); ++l) {
      Elem c = inner(rx, u[l]);
      rx = rx - u[l].scaled(c);
      ry = ry - v[l].scaled(c);
    }
    Elem n2 = norm_sq(rx);
    if (norm_sq(ry) != n2)
      throw Error(ErrorKind::Internal, "replayed orthonormalization lost the norm");
    if (n2.is_zero()) continue;
    Elem inv = tower::sqrt(n2).inverse();
    u.push_back(rx.scaled(inv));
    v.push_back(ry.scaled(inv));
  }

  long lo = 0, hi = 0;
  bool seen = false;
  auto widen = [&](const FinVector& w) {
    if (w.is_zero()) return;
    long a = w.support_lo(), b = w.support_hi();
    if (!seen) {
      lo = a;
      hi = b;
      seen = true;
    } else {
      lo = std::min(lo, a);
      hi = std::max(hi, b);
    }
  };
  for (const auto& p : pairs) {
    widen(p.x);
    widen(p.y);
  }
  if (!seen) return FinitaryOperator::identity();

  std::vector<FinVector> window;
  for (long i = lo; i <= hi; ++i) window.push_back(FinVector::basis(i));
  std::vector<FinVector> dom = gram_schmidt(window, u);
  std::vector<FinVector> img = gram_schmidt(window, v);
  if (dom.size() != img.size() || (long)dom.size() != hi - lo + 1)
    throw Error(ErrorKind::Internal, "window completion sizes disagree");

  long n = hi - lo + 1;
  std::vector<std::vector<Elem>> cols(n, std::vector<Elem>(n));
  for (long j = 0; j < n; ++j) {
    FinVector col;
    for (std::size_t l = 0; l < dom.size(); ++l) {
      Elem c = dom[l].get(lo + j);
      if (!c.is_zero()) col = col + img[l].scaled(c);
    }
    for (const auto& [i, c] : col.entries()) {
      if (i < lo || i > hi)
        throw Error(ErrorKind::Internal, "extension left the window");
      cols[j][i - lo] = c;
    }
  }
  FinitaryOperator t = FinitaryOperator::from_columns(lo, std::move(cols));
  for (const auto& p : pairs)
    if (t.apply(p.x) != p.y)
      throw Error(ErrorKind::Internal, "extension does not reproduce the map");
  return t;
}

FinitaryOperator block_paste(const std::vector<FinitaryOperator>& blocks) {
  if (blocks.empty()) return FinitaryOperator::identity();
  long lo = blocks.front().lo();
  long total = 0;
  for (const auto& b : blocks) total += b.size();
  std::vector<std::vector<Elem>> cols(total, std::vector<Elem>(total));
  long at = 0;
  for (const auto& b : blocks) {
    for (long j = 0; j < b.size(); ++j)
      for (long i = 0; i < b.size(); ++i) cols[at + j][at + i] = b.columns()[j][i];
    at += b.size();
  }
  return FinitaryOperator::from_columns(lo, std::move(cols));
}

namespace {

// Action of family member t on e_m, slots starting at row 1.
FinVector schedule_column(const BlockSchedule& h, std::size_t t, long m) {
  long start = 1;
  for (const auto& tup : h.tuples) {
    long sz = tup.front().size();
    if (m < start + sz) {
      if (m < start) break;
      FinVector out;
      const auto& mat = tup[t].columns();
      for (long i = 0; i < sz; ++i) out.set(start + i, mat[m - start][i]);
      return out;
    }
    start += sz;
  }
  return FinVector::basis(m);
}

void check_window_inputs(const BlockSchedule& h,
                         const std::vector<FinitaryOperator>& targets, long k) {
  if (k < 0) throw Error(ErrorKind::Invalid, "window radius must be nonnegative");
  if (targets.empty()) throw Error(ErrorKind::Invalid, "no targets given");
  for (const auto& t : targets) {
    FinitaryOperator nt = t.normalized();
    if (nt.size() > 0 && (nt.lo() < -k || nt.lo() + nt.size() - 1 > k))
      throw Error(ErrorKind::Invalid, "target acts outside the window");
  }
  for (const auto& tup : h.tuples) {
    if (tup.size() != targets.size())
      throw Error(ErrorKind::Invalid, "slot tuple length differs from target count");
    for (const auto& b : tup)
      if (b.size() != tup.front().size() || b.size() == 0)
        throw Error(ErrorKind::Invalid, "slot blocks must share one positive size");
  }
}

}  // namespace

bool shift_conjugate_matches(const BlockSchedule& h,
                             const std::vector<FinitaryOperator>& targets, long k,
                             long n) {
  check_window_inputs(h, targets, k);
  for (std::size_t t = 0; t < targets.size(); ++t)
    for (long i = -k; i <= k; ++i)
      if (shifted(schedule_column(h, t, i + n), -n) != targets[t].column(i))
        return false;
  return true;
}

long shift_conjugate_window(const BlockSchedule& h,
                            const std::vector<FinitaryOperator>& targets, long k) {
  check_window_inputs(h, targets, k);

  // Full-window matrices of the targets, rows and columns over e_-k..e_k.
  long w = 2 * k + 1;
  std::vector<std::vector<std::vector<Elem>>> full(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) {
    full[t].assign(w, std::vector<Elem>(w));
    for (long j = 0; j < w; ++j) {
      FinVector col = targets[t].column(-k + j);
      for (long i = 0; i < w; ++i) full[t][j][i] = col.get(-k + i);
    }
  }

  long start = 1;
  for (const auto& tup : h.tuples) {
    long sz = tup.front().size();
    if (sz == w) {
      bool match = true;
      for (std::size_t t = 0; t < targets.size() && match; ++t) {
        const auto& mat = tup[t].columns();
        for (long j = 0; j < w && match; ++j)
          for (long i = 0; i < w && match; ++i)
            if (mat[j][i] != full[t][j][i]) match = false;
      }
      if (match) {
        long n = start + k;
        if (!shift_conjugate_matches(h, targets, k, n))
          throw Error(ErrorKind::Internal, "matched slot fails the window check");
        return n;
      }
    }
    start += sz;
  }
  throw Error(ErrorKind::Invalid, "target tuple does not occur in the schedule");
}

BergmanFactorization bergman_factorization(const FinitaryOperator& t, long k) {
  if (k < 1) throw Error(ErrorKind::Invalid, "window size must be positive");
  FinitaryOperator tn = t.normalized();
  if (tn.size() > 0 && tn.lo() < 1)
    throw Error(ErrorKind::Invalid, "operator must act on the positive basis");

  std::vector<std::vector<Elem>> swap_cols(2 * k, std::vector<Elem>(2 * k));
  for (long j = 0; j < 2 * k; ++j) swap_cols[j][(j + k) % (2 * k)] = kOne;
  FinitaryOperator m = FinitaryOperator::from_columns(1, std::move(swap_cols));

  // Overflow directions: images of the first window, projected off the two
  // reference windows and orthonormalized.
  std::vector<FinVector> proj;
  bool touches_second = false;
  for (long i = 1; i <= k; ++i) {
    FinVector c = t.column(i);
    FinVector p;
    for (const auto& [row, val] : c.entries()) {
      if (row > 2 * k) p.set(row, val);
      if (row > k && row <= 2 * k) touches_second = true;
    }
    proj.push_back(p);
  }
  std::vector<FinVector> overflow = gram_schmidt(proj);

  long top = 2 * k;
  if (tn.size() > 0) top = std::max(top, tn.lo() + tn.size() - 1);
  for (const auto& hvec : overflow) top = std::max(top, hvec.support_hi());

  // The push of the second window off itself is only needed when the images
  // of the first window lean on it; otherwise the identity already serves.
  std::vector<VectorPair> r0_pairs;
  if (touches_second) {
    for (long i = 1; i <= k; ++i)
      r0_pairs.push_back({FinVector::basis(i), FinVector::basis(i)});
    for (const auto& hvec : overflow) r0_pairs.push_back({hvec, hvec});
    for (long i = 0; i < k; ++i)
      r0_pairs.push_back({FinVector::basis(k + 1 + i), FinVector::basis(top + 1 + i)});
  }

  FinitaryOperator r0 = FinitaryOperator::identity();
  FinitaryOperator r1 = FinitaryOperator::identity();
  try {
    r0 = extend_partial_isometry(r0_pairs);
    FinitaryOperator r0t = compose(r0, t);
    std::vector<VectorPair> r1_pairs;
    for (long i = 1; i <= k; ++i) r1_pairs.push_back({r0t.column(i), FinVector::basis(i)});
    for (long i = 1; i <= k; ++i)
      r1_pairs.push_back({FinVector::basis(k + i), FinVector::basis(k + i)});
    r1 = extend_partial_isometry(r1_pairs);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Internal) throw;
    throw Error(ErrorKind::Internal,
                std::string("factorization lost orthogonality: ") + e.what());
  }

  BergmanFactorization out{m, r0, r1, compose(r1, compose(r0, t))};

  bool ok = out.r0.fixes_pointwise(1, k) && out.r1.fixes_pointwise(k + 1, 2 * k) &&
            out.residual.fixes_pointwise(1, k);
  for (const auto& hvec : overflow)
    if (out.r0.apply(hvec) != hvec) ok = false;
  FinitaryOperator conj = compose(out.m.inverse(), compose(out.r1, out.m));
  if (!conj.fixes_pointwise(1, k)) ok = false;
  if (compose(out.r0.inverse(), compose(out.r1.inverse(), out.residual)) != t) ok = false;
  if (!ok) throw Error(ErrorKind::Internal, "factorization certificate failed");
  return out;
}

ApproximationResult approximate_on_finite_set(const std::vector<VectorPair>& pairs,
                                              const Rat& eps) {
  if (eps.sign() < 0) throw Error(ErrorKind::Invalid, "tolerance must be nonnegative");
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (norm_sq(pairs[i].x) != kOne || norm_sq(pairs[i].y) != kOne)
      throw Error(ErrorKind::Invalid,
                  "vectors must be unit at pair " + std::to_string(i));

  bool exact = true;
  for (std::size_t i = 0; i < pairs.size() && exact; ++i)
    for (std::size_t j = i; j < pairs.size() && exact; ++j)
      if (inner(pairs[i].x, pairs[j].x) != inner(pairs[i].y, pairs[j].y)) exact = false;

  ApproximationResult out{FinitaryOperator::identity(), {}};
  if (exact) {
    out.r = extend_partial_isometry(pairs);
    out.error_sq.assign(pairs.size(), kZero);
    return out;
  }

  std::vector<FinVector> xs, ys;
  for (const auto& p : pairs) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  std::vector<FinVector> u = gram_schmidt(xs);
  std::vector<FinVector> v = gram_schmidt(ys);
  std::size_t r = std::min(u.size(), v.size());
  std::vector<VectorPair> frame;
  for (std::size_t l = 0; l < r; ++l) frame.push_back({u[l], v[l]});
  out.r = extend_partial_isometry(frame);

  Elem eps_sq{eps * eps};
  for (const auto& p : pairs) {
    Elem e2 = norm_sq(p.y - out.r.apply(p.x));
    if (e2 > eps_sq)
      throw Error(ErrorKind::Invalid, "Gram mismatch beyond tolerance");
    out.error_sq.push_back(e2);
  }
  return out;
}

}  // namespace obkit::unitary
