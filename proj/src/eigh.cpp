// Cyclic Jacobi diagonalization for Hermitian matrices with complex Givens
// rotations. This is the only spectral kernel in the library; everything
// spectral (norms, order predicates, square roots, moduli) funnels through it.

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hermitian.hpp"

namespace opseq {

namespace {

// Frobenius mass of the off-diagonal part.
double offdiag_frobenius(const DenseMatrix& a) {
    const int n = a.rows();
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) s += std::norm(a.at(i, j));
    return std::sqrt(s);
}

}  // namespace

SpectralDecomposition eigh(const HermitianMatrix& input) {
    const int n = input.dim();
    SpectralDecomposition out;
    out.eigenvectors = DenseMatrix::identity(n);
    out.eigenvalues.assign(n, 0.0);
    if (n == 0) return out;

    DenseMatrix a = input.to_dense();
    DenseMatrix& q = out.eigenvectors;

    const double norm_f = a.frobenius();
    if (n == 1 || norm_f == 0.0) {
        for (int i = 0; i < n; ++i) out.eigenvalues[i] = a.at(i, i).real();
        return out;
    }

    const double target = 1e-14 * norm_f;
    // Entries individually below this cannot push the post-sweep total above
    // target even if every one of them survives, so rotating on them is waste.
    const double skip = target / (2.0 * n);
    const long budget = 30L * n * n;
    long rotations = 0;

    while (true) {
        const double off = offdiag_frobenius(a);
        if (off <= target) break;
        if (rotations >= budget)
            throw ConvergenceError("eigh: rotation budget exhausted with off-diagonal residual " +
                                       std::to_string(off),
                                   off);

        for (int p = 0; p < n - 1; ++p) {
            for (int qq = p + 1; qq < n; ++qq) {
                const cplx g = a.at(p, qq);
                const double absg = std::abs(g);
                if (absg <= skip) continue;
                if (rotations >= budget) break;
                ++rotations;

                const double alpha = a.at(p, p).real();
                const double beta = a.at(qq, qq).real();
                const cplx phase = g / absg;
                const double tau = (beta - alpha) / (2.0 * absg);
                // R* A R kills the pivot iff (c^2 - s^2)/(2cs) = -tau; the
                // smaller-magnitude root keeps the rotation angle under pi/4.
                const double t =
                    (tau >= 0.0 ? -1.0 : 1.0) / (std::abs(tau) + std::sqrt(tau * tau + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const cplx conj_phase = std::conj(phase);

                // A <- A R   (columns p and qq)
                for (int i = 0; i < n; ++i) {
                    const cplx ap = a.at(i, p);
                    const cplx aq = a.at(i, qq);
                    a.at(i, p) = c * ap + s * conj_phase * aq;
                    a.at(i, qq) = -s * phase * ap + c * aq;
                }
                // A <- R* A  (rows p and qq)
                for (int j = 0; j < n; ++j) {
                    const cplx ap = a.at(p, j);
                    const cplx aq = a.at(qq, j);
                    a.at(p, j) = c * ap + s * phase * aq;
                    a.at(qq, j) = -s * conj_phase * ap + c * aq;
                }
                // The rotation annihilates (p,qq) exactly in exact arithmetic;
                // pin it and keep the diagonal exactly real.
                a.at(p, qq) = cplx(0.0, 0.0);
                a.at(qq, p) = cplx(0.0, 0.0);
                a.at(p, p) = cplx(a.at(p, p).real(), 0.0);
                a.at(qq, qq) = cplx(a.at(qq, qq).real(), 0.0);

                // Q <- Q R (accumulated eigenvectors live in the columns)
                for (int i = 0; i < n; ++i) {
                    const cplx qp = q.at(i, p);
                    const cplx qqv = q.at(i, qq);
                    q.at(i, p) = c * qp + s * conj_phase * qqv;
                    q.at(i, qq) = -s * phase * qp + c * qqv;
                }
            }
        }
    }

    // Ascending eigenvalue order with index-order tie-breaking, so identical
    // inputs always produce identical outputs.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = a.at(i, i).real();
    std::sort(order.begin(), order.end(), [&diag](int lhs, int rhs) {
        if (diag[lhs] != diag[rhs]) return diag[lhs] < diag[rhs];
        return lhs < rhs;
    });

    DenseMatrix sorted_q(n, n);
    for (int j = 0; j < n; ++j) {
        out.eigenvalues[j] = diag[order[j]];
        for (int i = 0; i < n; ++i) sorted_q.at(i, j) = q.at(i, order[j]);
    }
    out.eigenvectors = std::move(sorted_q);
    return out;
}

}  // namespace opseq
