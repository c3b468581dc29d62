#pragma once

#include <map>
#include <vector>

#include "hermitian.hpp"

namespace opseq {

// ---------------------------------------------------------------------------
// Eventually-constant sequence over the nonnegative integers: an explicit
// head followed by a constant tail. Canonical form trims trailing head
// entries equal to the tail, so equality of values is equality of
// representations. This is the closed carrier for band-operator diagonals.
// ---------------------------------------------------------------------------
class EvSeq {
  public:
    EvSeq() : tail_(0.0, 0.0) {}
    EvSeq(std::vector<cplx> head, cplx tail) : head_(std::move(head)), tail_(tail) {
        canonicalize();
    }
    static EvSeq constant(cplx tail) { return EvSeq({}, tail); }
    static EvSeq zero() { return EvSeq(); }

    cplx at(long t) const {
        if (t < 0) throw DimensionError("EvSeq index must be nonnegative");
        return t < static_cast<long>(head_.size()) ? head_[static_cast<size_t>(t)] : tail_;
    }
    cplx tail() const { return tail_; }
    const std::vector<cplx>& head() const { return head_; }

    bool is_zero() const { return head_.empty() && tail_ == cplx(0.0, 0.0); }
    bool operator==(const EvSeq& o) const { return head_ == o.head_ && tail_ == o.tail_; }

    EvSeq plus(const EvSeq& o) const;
    EvSeq scaled(cplx alpha) const;
    EvSeq conjugated() const;

  private:
    std::vector<cplx> head_;
    cplx tail_;
    void canonicalize() {
        while (!head_.empty() && head_.back() == tail_) head_.pop_back();
    }
};

// ---------------------------------------------------------------------------
// Finitely supported vector in l2 over the nonnegative integers.
// Stored sparsely; zero coefficients are never kept.
// ---------------------------------------------------------------------------
class FinSuppVector {
  public:
    FinSuppVector() = default;
    static FinSuppVector unit(long j);

    void set(long j, cplx v);
    cplx at(long j) const;
    const std::map<long, cplx>& entries() const { return c_; }

    bool empty() const { return c_.empty(); }
    long max_support() const;  // -1 when empty
    double norm() const;

    FinSuppVector plus(const FinSuppVector& o) const;
    FinSuppVector scaled(cplx alpha) const;

  private:
    std::map<long, cplx> c_;
};

cplx inner(const FinSuppVector& u, const FinSuppVector& v);  // sum u_j conj(v_j)

// ---------------------------------------------------------------------------
// Band operator on l2(N): finitely many diagonals, each an eventually-
// constant sequence. Diagonal at offset k holds the entries
// d_k(t) = A[t + max(k,0), t + max(-k,0)], i.e. k > 0 are subdiagonals and
// k < 0 superdiagonals. Only identically-nonzero diagonals are stored, so
// equality of operators is equality of representations. The algebra
// (adjoint, composition, linear combination) is exact: no truncation ever
// happens; floating-point arithmetic on the finitely many stored values is
// the only rounding.
// ---------------------------------------------------------------------------
class BandOperator {
  public:
    BandOperator() = default;
    static BandOperator zero() { return BandOperator(); }
    static BandOperator identity();

    // Builder: sets the diagonal at `offset`; dropped if identically zero.
    void set_diagonal(int offset, EvSeq d);
    const std::map<int, EvSeq>& diagonals() const { return d_; }

    int width() const;  // max |offset| over stored diagonals, 0 for the zero op

    // Entry A[i, j]; zero when |i - j| exceeds the width.
    cplx entry(long i, long j) const;

  private:
    std::map<int, EvSeq> d_;
};

// The n-th power of the forward shift (e_j -> e_{j+n}); n >= 1.
BandOperator shift_power(int n);

BandOperator band_adjoint(const BandOperator& a);
BandOperator band_compose(const BandOperator& a, const BandOperator& b);

// sum_i coeff_i * term_i, exact per diagonal.
BandOperator band_linear_comb(const std::vector<std::pair<cplx, BandOperator>>& terms);

FinSuppVector band_apply(const BandOperator& a, const FinSuppVector& x);

// <A x, y> over the finite supports; exact in the same sense as the algebra.
cplx pairing(const BandOperator& a, const FinSuppVector& x, const FinSuppVector& y);

// Top-left N x N compression P_N A P_N.
DenseMatrix finite_section(const BandOperator& a, int n);
// Same, packaged as an exactly-Hermitian matrix; requires a self-adjoint band.
HermitianMatrix finite_section_hermitian(const BandOperator& a, int n);

// Representation equality (canonical forms make this value equality).
bool band_equals(const BandOperator& a, const BandOperator& b);

bool is_selfadjoint(const BandOperator& a);

}  // namespace opseq
