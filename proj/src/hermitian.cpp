#include "hermitian.hpp"

#include <algorithm>
#include <cmath>

namespace opseq {

// --- DenseMatrix -----------------------------------------------------------

DenseMatrix::DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw DimensionError("matrix dimensions must be nonnegative");
    a_.assign(static_cast<size_t>(rows) * cols, cplx(0.0, 0.0));
}

DenseMatrix DenseMatrix::identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::adjoint() const {
    DenseMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(j, i) = std::conj(at(i, j));
    return r;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& b) const {
    if (cols_ != b.rows_) throw DimensionError("matrix product: inner dimensions differ");
    DenseMatrix r(rows_, b.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int k = 0; k < cols_; ++k) {
            const cplx aik = at(i, k);
            if (aik == cplx(0.0, 0.0)) continue;
            for (int j = 0; j < b.cols_; ++j) r.at(i, j) += aik * b.at(k, j);
        }
    }
    return r;
}

DenseMatrix DenseMatrix::operator+(const DenseMatrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) throw DimensionError("matrix sum: shapes differ");
    DenseMatrix r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + b.a_[i];
    return r;
}

DenseMatrix DenseMatrix::operator-(const DenseMatrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) throw DimensionError("matrix difference: shapes differ");
    DenseMatrix r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - b.a_[i];
    return r;
}

DenseMatrix DenseMatrix::scaled(cplx alpha) const {
    DenseMatrix r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = alpha * a_[i];
    return r;
}

Vec DenseMatrix::apply(const Vec& x) const {
    if (static_cast<int>(x.size()) != cols_) throw DimensionError("matvec: vector length differs");
    Vec y(rows_, cplx(0.0, 0.0));
    for (int i = 0; i < rows_; ++i) {
        cplx s(0.0, 0.0);
        for (int j = 0; j < cols_; ++j) s += at(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double DenseMatrix::frobenius() const {
    double s = 0.0;
    for (const cplx& v : a_) s += std::norm(v);
    return std::sqrt(s);
}

// --- HermitianMatrix -------------------------------------------------------

HermitianMatrix::HermitianMatrix(int dim) : dim_(dim) {
    if (dim < 0) throw DimensionError("matrix dimension must be nonnegative");
    lower_.assign(static_cast<size_t>(dim) * (dim + 1) / 2, cplx(0.0, 0.0));
}

HermitianMatrix HermitianMatrix::identity(int dim) {
    HermitianMatrix a(dim);
    for (int i = 0; i < dim; ++i) a.lower_[a.idx(i, i)] = 1.0;
    return a;
}

HermitianMatrix HermitianMatrix::diagonal(const std::vector<double>& d) {
    HermitianMatrix a(static_cast<int>(d.size()));
    for (int i = 0; i < a.dim_; ++i) a.lower_[a.idx(i, i)] = d[i];
    return a;
}

HermitianMatrix HermitianMatrix::hermitian_part(const DenseMatrix& x) {
    if (x.rows() != x.cols()) throw DimensionError("hermitian part: matrix must be square");
    HermitianMatrix a(x.rows());
    for (int i = 0; i < a.dim_; ++i) {
        for (int j = 0; j < i; ++j)
            a.lower_[a.idx(i, j)] = 0.5 * (x.at(i, j) + std::conj(x.at(j, i)));
        a.lower_[a.idx(i, i)] = cplx(x.at(i, i).real(), 0.0);
    }
    return a;
}

HermitianMatrix HermitianMatrix::from_dense_checked(const DenseMatrix& x, double max_asym) {
    if (x.rows() != x.cols()) throw DimensionError("hermitian check: matrix must be square");
    for (int i = 0; i < x.rows(); ++i) {
        for (int j = 0; j <= i; ++j) {
            const cplx gap = x.at(i, j) - std::conj(x.at(j, i));
            if (std::abs(gap) > max_asym)
                throw DimensionError("matrix is not Hermitian within the requested tolerance");
        }
    }
    return hermitian_part(x);
}

cplx HermitianMatrix::entry(int i, int j) const {
    if (i < 0 || j < 0 || i >= dim_ || j >= dim_) throw DimensionError("entry index out of range");
    if (i >= j) return lower_[idx(i, j)];
    return std::conj(lower_[idx(j, i)]);
}

void HermitianMatrix::set(int i, int j, cplx v) {
    if (i < 0 || j < 0 || i >= dim_ || j >= dim_ || i < j)
        throw DimensionError("set expects lower-triangle indices");
    if (i == j) v = cplx(v.real(), 0.0);
    lower_[idx(i, j)] = v;
}

DenseMatrix HermitianMatrix::to_dense() const {
    DenseMatrix m(dim_, dim_);
    for (int i = 0; i < dim_; ++i) {
        for (int j = 0; j < i; ++j) {
            m.at(i, j) = lower_[idx(i, j)];
            m.at(j, i) = std::conj(lower_[idx(i, j)]);
        }
        m.at(i, i) = lower_[idx(i, i)].real();
    }
    return m;
}

Vec HermitianMatrix::apply(const Vec& x) const {
    if (static_cast<int>(x.size()) != dim_) throw DimensionError("matvec: vector length differs");
    Vec y(dim_, cplx(0.0, 0.0));
    for (int i = 0; i < dim_; ++i) {
        cplx s = lower_[idx(i, i)].real() * x[i];
        for (int j = 0; j < i; ++j) {
            const cplx v = lower_[idx(i, j)];
            s += v * x[j];
            y[j] += std::conj(v) * x[i];
        }
        y[i] += s;
    }
    return y;
}

void HermitianMatrix::check_pair(const HermitianMatrix& other) const {
    if (dim_ != other.dim_) throw DimensionError("Hermitian operands have different dimensions");
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& b) const {
    check_pair(b);
    HermitianMatrix r(dim_);
    for (size_t i = 0; i < lower_.size(); ++i) r.lower_[i] = lower_[i] + b.lower_[i];
    return r;
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& b) const {
    check_pair(b);
    HermitianMatrix r(dim_);
    for (size_t i = 0; i < lower_.size(); ++i) r.lower_[i] = lower_[i] - b.lower_[i];
    return r;
}

HermitianMatrix HermitianMatrix::scaled(double alpha) const {
    HermitianMatrix r(dim_);
    for (size_t i = 0; i < lower_.size(); ++i) r.lower_[i] = alpha * lower_[i];
    return r;
}

HermitianMatrix HermitianMatrix::plus_scaled_identity(double c) const {
    HermitianMatrix r = *this;
    for (int i = 0; i < dim_; ++i) r.lower_[idx(i, i)] += c;
    return r;
}

double HermitianMatrix::frobenius() const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) {
        s += std::norm(lower_[idx(i, i)]);
        for (int j = 0; j < i; ++j) s += 2.0 * std::norm(lower_[idx(i, j)]);
    }
    return std::sqrt(s);
}

// --- spectral operations (eigh itself lives in eigh.cpp) -------------------

double op_norm(const HermitianMatrix& a) {
    if (a.dim() == 0) return 0.0;
    const SpectralDecomposition d = eigh(a);
    double m = 0.0;
    for (double w : d.eigenvalues) m = std::max(m, std::abs(w));
    return m;
}

double op_norm(const DenseMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionError("op_norm expects a square matrix");
    if (m.rows() == 0) return 0.0;
    // Gram route: ||M|| = sqrt(max eig of M*M); keeps Jacobi the only kernel.
    const DenseMatrix gram = m.adjoint() * m;
    const SpectralDecomposition d = eigh(HermitianMatrix::hermitian_part(gram));
    const double top = d.eigenvalues.empty() ? 0.0 : d.eigenvalues.back();
    return std::sqrt(std::max(top, 0.0));
}

double min_eigenvalue(const HermitianMatrix& a) {
    if (a.dim() == 0) throw DimensionError("min_eigenvalue of an empty matrix");
    return eigh(a).eigenvalues.front();
}

bool is_psd(const HermitianMatrix& a, OrderTolerance tol) {
    if (a.dim() == 0) return true;
    const SpectralDecomposition d = eigh(a);
    double lo = d.eigenvalues.front();
    double hi = 0.0;
    for (double w : d.eigenvalues) hi = std::max(hi, std::abs(w));
    return lo >= -(tol.eps + tol.rel * hi);
}

bool loewner_leq(const HermitianMatrix& a, const HermitianMatrix& b, OrderTolerance tol) {
    if (a.dim() != b.dim()) throw DimensionError("loewner_leq: operands have different dimensions");
    return is_psd(b - a, tol);
}

HermitianMatrix sqrt_psd(const HermitianMatrix& a, OrderTolerance tol) {
    const SpectralDecomposition d = eigh(a);
    double hi = 0.0;
    for (double w : d.eigenvalues) hi = std::max(hi, std::abs(w));
    const double floor = -(tol.eps + tol.rel * hi);
    std::vector<double> roots(d.eigenvalues.size());
    for (size_t i = 0; i < d.eigenvalues.size(); ++i) {
        const double w = d.eigenvalues[i];
        if (w < floor)
            throw NotPsdError("sqrt_psd: operand is not positive semidefinite "
                              "(min eigenvalue " + std::to_string(w) + ")",
                              w);
        roots[i] = std::sqrt(std::max(w, 0.0));
    }
    // Q diag(sqrt(w)) Q*, re-packed through the exact-Hermitian container.
    const DenseMatrix& q = d.eigenvectors;
    const int n = a.dim();
    DenseMatrix scaled(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scaled.at(i, j) = q.at(i, j) * roots[j];
    return HermitianMatrix::hermitian_part(scaled * q.adjoint());
}

HermitianMatrix abs_op(const DenseMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionError("abs_op expects a square matrix");
    const DenseMatrix gram = m.adjoint() * m;
    // M*M is PSD by construction; allow a generous clamp for rounding.
    OrderTolerance tol;
    tol.eps = 1e-10 * std::max(1.0, gram.frobenius());
    return sqrt_psd(HermitianMatrix::hermitian_part(gram), tol);
}

HermitianMatrix abs_op(const HermitianMatrix& a) { return abs_op(a.to_dense()); }

GapBound sqrt_contraction_gap(const HermitianMatrix& b, const HermitianMatrix& c,
                              OrderTolerance tol) {
    if (b.dim() != c.dim())
        throw DimensionError("sqrt_contraction_gap: operands have different dimensions");
    GapBound g;
    g.lhs = op_norm(sqrt_psd(b, tol) - sqrt_psd(c, tol));
    g.rhs = std::sqrt(op_norm(b - c));
    return g;
}

// --- vector helpers --------------------------------------------------------

cplx inner(const Vec& u, const Vec& v) {
    if (u.size() != v.size()) throw DimensionError("inner product: lengths differ");
    cplx s(0.0, 0.0);
    for (size_t i = 0; i < u.size(); ++i) s += u[i] * std::conj(v[i]);
    return s;
}

double vec_norm(const Vec& v) {
    double s = 0.0;
    for (const cplx& x : v) s += std::norm(x);
    return std::sqrt(s);
}

Vec vec_sub(const Vec& u, const Vec& v) {
    if (u.size() != v.size()) throw DimensionError("vector difference: lengths differ");
    Vec r(u.size());
    for (size_t i = 0; i < u.size(); ++i) r[i] = u[i] - v[i];
    return r;
}

Vec vec_add(const Vec& u, const Vec& v) {
    if (u.size() != v.size()) throw DimensionError("vector sum: lengths differ");
    Vec r(u.size());
    for (size_t i = 0; i < u.size(); ++i) r[i] = u[i] + v[i];
    return r;
}

Vec vec_scaled(const Vec& u, cplx alpha) {
    Vec r(u.size());
    for (size_t i = 0; i < u.size(); ++i) r[i] = alpha * u[i];
    return r;
}

}  // namespace opseq
