#include "band.hpp"

#include <algorithm>
#include <cmath>

namespace opseq {

// --- EvSeq -------------------------------------------------------------------

EvSeq EvSeq::plus(const EvSeq& o) const {
    const size_t len = std::max(head_.size(), o.head_.size());
    std::vector<cplx> head(len);
    for (size_t t = 0; t < len; ++t) head[t] = at(static_cast<long>(t)) + o.at(static_cast<long>(t));
    return EvSeq(std::move(head), tail_ + o.tail_);
}

EvSeq EvSeq::scaled(cplx alpha) const {
    std::vector<cplx> head(head_.size());
    for (size_t t = 0; t < head_.size(); ++t) head[t] = alpha * head_[t];
    return EvSeq(std::move(head), alpha * tail_);
}

EvSeq EvSeq::conjugated() const {
    std::vector<cplx> head(head_.size());
    for (size_t t = 0; t < head_.size(); ++t) head[t] = std::conj(head_[t]);
    return EvSeq(std::move(head), std::conj(tail_));
}

// --- FinSuppVector -----------------------------------------------------------

FinSuppVector FinSuppVector::unit(long j) {
    FinSuppVector v;
    v.set(j, cplx(1.0, 0.0));
    return v;
}

void FinSuppVector::set(long j, cplx v) {
    if (j < 0) throw DimensionError("vector index must be nonnegative");
    if (v == cplx(0.0, 0.0))
        c_.erase(j);
    else
        c_[j] = v;
}

cplx FinSuppVector::at(long j) const {
    auto it = c_.find(j);
    return it == c_.end() ? cplx(0.0, 0.0) : it->second;
}

long FinSuppVector::max_support() const { return c_.empty() ? -1 : c_.rbegin()->first; }

double FinSuppVector::norm() const {
    double s = 0.0;
    for (const auto& [j, v] : c_) s += std::norm(v);
    return std::sqrt(s);
}

FinSuppVector FinSuppVector::plus(const FinSuppVector& o) const {
    FinSuppVector r = *this;
    for (const auto& [j, v] : o.c_) r.set(j, r.at(j) + v);
    return r;
}

FinSuppVector FinSuppVector::scaled(cplx alpha) const {
    FinSuppVector r;
    for (const auto& [j, v] : c_) r.set(j, alpha * v);
    return r;
}

cplx inner(const FinSuppVector& u, const FinSuppVector& v) {
    // iterate over the sparser one
    const auto& a = u.entries();
    const auto& b = v.entries();
    cplx s(0.0, 0.0);
    if (a.size() <= b.size()) {
        for (const auto& [j, x] : a) s += x * std::conj(v.at(j));
    } else {
        for (const auto& [j, y] : b) s += u.at(j) * std::conj(y);
    }
    return s;
}

// --- BandOperator ------------------------------------------------------------

BandOperator BandOperator::identity() {
    BandOperator a;
    a.set_diagonal(0, EvSeq::constant(cplx(1.0, 0.0)));
    return a;
}

void BandOperator::set_diagonal(int offset, EvSeq d) {
    if (d.is_zero())
        d_.erase(offset);
    else
        d_[offset] = std::move(d);
}

int BandOperator::width() const {
    int w = 0;
    for (const auto& [k, d] : d_) w = std::max(w, std::abs(k));
    return w;
}

cplx BandOperator::entry(long i, long j) const {
    if (i < 0 || j < 0) throw DimensionError("band entry indices must be nonnegative");
    const long k = i - j;
    if (k < -width() || k > width()) return cplx(0.0, 0.0);
    auto it = d_.find(static_cast<int>(k));
    if (it == d_.end()) return cplx(0.0, 0.0);
    return it->second.at(std::min(i, j));
}

BandOperator shift_power(int n) {
    if (n < 1) throw DimensionError("shift_power expects n >= 1");
    BandOperator a;
    a.set_diagonal(n, EvSeq::constant(cplx(1.0, 0.0)));
    return a;
}

BandOperator band_adjoint(const BandOperator& a) {
    BandOperator r;
    // (A*)[i,j] = conj(A[j,i]); the diagonal at offset k of A* is the
    // conjugate of A's diagonal at -k, evaluated at the same running index.
    for (const auto& [k, d] : a.diagonals()) r.set_diagonal(-k, d.conjugated());
    return r;
}

BandOperator band_compose(const BandOperator& a, const BandOperator& b) {
    BandOperator r;
    std::map<int, EvSeq> acc;
    for (const auto& [p, da] : a.diagonals()) {
        for (const auto& [qk, db] : b.diagonals()) {
            const int k = p + qk;
            // (AB)[i,j] with i-j=k sums A[i,m] B[m,j] over m = i - p, which is
            // a valid l2(N) index only from t0 onward; shifted diagonal reads:
            const int kp = std::max(k, 0);
            const long sa = kp - std::max(p, 0);
            const long sb = static_cast<long>(kp) - p - std::max(qk, 0);
            const long t0 = std::max(0L, static_cast<long>(p) - kp);

            const long head_a = static_cast<long>(da.head().size());
            const long head_b = static_cast<long>(db.head().size());
            const long len = std::max({t0, head_a - sa, head_b - sb, 0L});
            std::vector<cplx> head(static_cast<size_t>(len), cplx(0.0, 0.0));
            for (long t = t0; t < len; ++t)
                head[static_cast<size_t>(t)] = da.at(t + sa) * db.at(t + sb);
            EvSeq term(std::move(head), da.tail() * db.tail());

            auto it = acc.find(k);
            if (it == acc.end())
                acc.emplace(k, std::move(term));
            else
                it->second = it->second.plus(term);
        }
    }
    for (auto& [k, d] : acc) r.set_diagonal(k, std::move(d));
    return r;
}

BandOperator band_linear_comb(const std::vector<std::pair<cplx, BandOperator>>& terms) {
    std::map<int, EvSeq> acc;
    for (const auto& [alpha, op] : terms) {
        for (const auto& [k, d] : op.diagonals()) {
            EvSeq scaled = d.scaled(alpha);
            auto it = acc.find(k);
            if (it == acc.end())
                acc.emplace(k, std::move(scaled));
            else
                it->second = it->second.plus(scaled);
        }
    }
    BandOperator r;
    for (auto& [k, d] : acc) r.set_diagonal(k, std::move(d));
    return r;
}

FinSuppVector band_apply(const BandOperator& a, const FinSuppVector& x) {
    std::map<long, cplx> acc;
    for (const auto& [j, xj] : x.entries()) {
        for (const auto& [k, d] : a.diagonals()) {
            const long i = j + k;
            if (i < 0) continue;
            const cplx v = d.at(std::min(i, j));
            if (v == cplx(0.0, 0.0)) continue;
            acc[i] += v * xj;
        }
    }
    FinSuppVector y;
    for (const auto& [i, v] : acc) y.set(i, v);
    return y;
}

cplx pairing(const BandOperator& a, const FinSuppVector& x, const FinSuppVector& y) {
    return inner(band_apply(a, x), y);
}

DenseMatrix finite_section(const BandOperator& a, int n) {
    if (n < 0) throw DimensionError("finite_section size must be nonnegative");
    DenseMatrix m(n, n);
    for (const auto& [k, d] : a.diagonals()) {
        long i = std::max(k, 0);
        long j = std::max(-k, 0);
        for (long t = 0; i < n && j < n; ++t, ++i, ++j) m.at(static_cast<int>(i), static_cast<int>(j)) = d.at(t);
    }
    return m;
}

HermitianMatrix finite_section_hermitian(const BandOperator& a, int n) {
    if (!is_selfadjoint(a))
        throw DimensionError("finite_section_hermitian expects a self-adjoint band operator");
    return HermitianMatrix::hermitian_part(finite_section(a, n));
}

bool band_equals(const BandOperator& a, const BandOperator& b) {
    return a.diagonals() == b.diagonals();
}

bool is_selfadjoint(const BandOperator& a) { return band_equals(a, band_adjoint(a)); }

}  // namespace opseq
