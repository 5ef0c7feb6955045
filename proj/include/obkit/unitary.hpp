#pragma once

#include <map>
#include <vector>

#include "obkit/rat.hpp"
#include "obkit/tower.hpp"

namespace obkit::unitary {

using tower::Elem;

// Finitely supported vector over the field tower, indexed by integers.
// Entries from different towers mix freely; exact zeros are dropped.
class FinVector {
public:
  FinVector() = default;
  static FinVector basis(long i);

  void set(long i, Elem v);
  Elem get(long i) const;  // zero when absent
  bool is_zero() const { return co_.empty(); }
  const std::map<long, Elem>& entries() const { return co_; }
  long support_lo() const;  // throws on the zero vector
  long support_hi() const;

  friend FinVector operator+(const FinVector& a, const FinVector& b);
  friend FinVector operator-(const FinVector& a, const FinVector& b);
  FinVector scaled(const Elem& c) const;
  friend Elem inner(const FinVector& a, const FinVector& b);
  friend bool operator==(const FinVector& a, const FinVector& b);
  friend bool operator!=(const FinVector& a, const FinVector& b) { return !(a == b); }

private:
  std::map<long, Elem> co_;
};

Elem norm_sq(const FinVector& v);

// Orthogonal operator equal to the identity outside the window
// [lo, lo+size): column j of the matrix holds the coordinates of the image
// of e_{lo+j} over e_lo..e_{lo+size-1}.  Exact orthogonality is validated on
// construction.
class FinitaryOperator {
public:
  static FinitaryOperator identity();
  static FinitaryOperator from_columns(long lo, std::vector<std::vector<Elem>> cols);

  long lo() const { return lo_; }
  long size() const { return (long)cols_.size(); }
  const std::vector<std::vector<Elem>>& columns() const { return cols_; }

  FinVector apply(const FinVector& v) const;
  FinVector column(long basis_index) const;  // image of e_i, identity off-window
  FinitaryOperator inverse() const;          // transpose
  bool fixes_pointwise(long first, long last) const;  // e_i for i in [first, last]

  // Identity rows/columns at the window edges trimmed away; equality of the
  // normalized form is equality as an operator.
  FinitaryOperator normalized() const;
  friend bool operator==(const FinitaryOperator& a, const FinitaryOperator& b);
  friend bool operator!=(const FinitaryOperator& a, const FinitaryOperator& b) {
    return !(a == b);
  }

private:
  FinitaryOperator(long lo, std::vector<std::vector<Elem>> cols, bool validate);
  long lo_ = 0;
  std::vector<std::vector<Elem>> cols_;  // cols_[j][i]: row i of column j
};

// compose(a, b) applies b first.
FinitaryOperator compose(const FinitaryOperator& a, const FinitaryOperator& b);

// Orthonormalizes `vectors` against and after `prefix` (checked orthonormal);
// dependent vectors are skipped.  Returns prefix ++ new vectors; every input
// reconstructs exactly in the returned basis.
std::vector<FinVector> gram_schmidt(const std::vector<FinVector>& vectors,
                                    const std::vector<FinVector>& prefix = {});

struct VectorPair {
  FinVector x, y;
};

// Extends the linear isometry x_i -> y_i (Gram matrices must agree exactly)
// to an orthogonal operator on a window covering all supports.
FinitaryOperator extend_partial_isometry(const std::vector<VectorPair>& pairs);

// Block-diagonal sum on consecutive ranges, starting at the first block's
// window base.
FinitaryOperator block_paste(const std::vector<FinitaryOperator>& blocks);

// A family of block-diagonal operators with shared consecutive slots; slot j
// holds one block per family member, all of one size, and occupies rows
// starting at index 1 + (sizes of earlier slots).
struct BlockSchedule {
  std::vector<std::vector<FinitaryOperator>> tuples;
};

// True when conjugating every family member by the n-th power of the
// bilateral shift, e_i -> e_{i+n}, matches the corresponding target on
// span(e_-k .. e_k); n = 0 asks whether the family already matches.
bool shift_conjugate_matches(const BlockSchedule& h,
                             const std::vector<FinitaryOperator>& targets, long k,
                             long n);

// Shift exponent n = s_j + k for the first slot j (starting at row s_j) whose
// block tuple equals the targets on the full window; the match is verified
// basis vector by basis vector before returning.
long shift_conjugate_window(const BlockSchedule& h,
                            const std::vector<FinitaryOperator>& targets, long k);

struct BergmanFactorization {
  FinitaryOperator m;         // swaps the two reference windows
  FinitaryOperator r0;        // fixes the first window and the overflow space
  FinitaryOperator r1;        // fixes the second window
  FinitaryOperator residual;  // r1 r0 t, fixes the first window
};

// Factors T as r0^-1 r1^-1 (r1 r0 T) with the stabilizer memberships of the
// bounded-width decomposition checked exactly: r0 and the residual fix
// span(e_1..e_k) pointwise, r1 fixes span(e_{k+1}..e_{2k}) = M[span(e_1..e_k)].
BergmanFactorization bergman_factorization(const FinitaryOperator& t, long k);

struct ApproximationResult {
  FinitaryOperator r;
  std::vector<Elem> error_sq;  // per pair, exact squared distance y_i - R x_i
};

// Orthogonal R with ||y_i - R x_i|| <= eps for all pairs; exact when the two
// Gram matrices agree, otherwise via both orthonormalizations with the error
// certified exactly.
ApproximationResult approximate_on_finite_set(const std::vector<VectorPair>& pairs,
                                              const Rat& eps);

}  // namespace obkit::unitary
