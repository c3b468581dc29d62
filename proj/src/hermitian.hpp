#pragma once

#include <complex>
#include <vector>

#include "errors.hpp"

namespace opseq {

using cplx = std::complex<double>;
using Vec = std::vector<cplx>;

// ---------------------------------------------------------------------------
// Dense complex matrix, row-major. Workhorse for products and eigenvectors;
// no algebraic structure is assumed.
// ---------------------------------------------------------------------------
class DenseMatrix {
  public:
    DenseMatrix() : rows_(0), cols_(0) {}
    DenseMatrix(int rows, int cols);
    static DenseMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    cplx& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const cplx& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    const std::vector<cplx>& data() const { return a_; }
    std::vector<cplx>& data() { return a_; }

    DenseMatrix adjoint() const;           // conjugate transpose
    DenseMatrix operator*(const DenseMatrix&) const;
    DenseMatrix operator+(const DenseMatrix&) const;
    DenseMatrix operator-(const DenseMatrix&) const;
    DenseMatrix scaled(cplx alpha) const;

    Vec apply(const Vec& x) const;         // matrix * vector
    double frobenius() const;

  private:
    int rows_, cols_;
    std::vector<cplx> a_;
};

// ---------------------------------------------------------------------------
// Hermitian matrix: only the lower triangle is stored, so the reconstructed
// full matrix satisfies A = A* exactly by construction. Diagonal imaginary
// parts are forced to zero on every write path.
// ---------------------------------------------------------------------------
class HermitianMatrix {
  public:
    HermitianMatrix() : dim_(0) {}
    explicit HermitianMatrix(int dim);        // zero matrix
    static HermitianMatrix identity(int dim);
    static HermitianMatrix diagonal(const std::vector<double>& d);

    // Takes the Hermitian part (X + X*)/2 of a square matrix. This is exact
    // for inputs that are Hermitian up to rounding and is the sanctioned way
    // to re-pack numerically symmetric products.
    static HermitianMatrix hermitian_part(const DenseMatrix& x);

    // Strict variant: rejects inputs whose asymmetry exceeds
    // max_asym (absolute, entrywise) instead of averaging it away.
    static HermitianMatrix from_dense_checked(const DenseMatrix& x, double max_asym);

    int dim() const { return dim_; }

    // Entry access with the conjugate mirror applied for i < j.
    cplx entry(int i, int j) const;
    void set(int i, int j, cplx v);           // requires i >= j

    DenseMatrix to_dense() const;
    Vec apply(const Vec& x) const;

    HermitianMatrix operator+(const HermitianMatrix&) const;
    HermitianMatrix operator-(const HermitianMatrix&) const;
    HermitianMatrix scaled(double alpha) const;
    HermitianMatrix plus_scaled_identity(double c) const;  // A + c*I

    double frobenius() const;

    const std::vector<cplx>& packed() const { return lower_; }

  private:
    int dim_;
    std::vector<cplx> lower_;  // row i, col j<=i at i*(i+1)/2 + j
    size_t idx(int i, int j) const { return static_cast<size_t>(i) * (i + 1) / 2 + j; }
    void check_pair(const HermitianMatrix& other) const;
};

// Result of diagonalizing a Hermitian matrix: A = Q diag(w) Q*, eigenvalues
// ascending, columns of Q the matching eigenvectors.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    DenseMatrix eigenvectors;
};

// Tolerance policy for order predicates: an eigenvalue counts as nonnegative
// when it is >= -(eps + rel * op_norm(operand)).
struct OrderTolerance {
    double eps = 1e-10;
    double rel = 1e-12;
};

// Cyclic Jacobi diagonalization with complex Givens rotations. Sweeps until
// the off-diagonal Frobenius mass is <= 1e-14 * ||A||_F, with a hard cap of
// 30*dim^2 rotations (ConvergenceError beyond that). Deterministic: fixed
// sweep order, eigenvalues sorted ascending with index-order tie-breaking.
SpectralDecomposition eigh(const HermitianMatrix& a);

// Largest singular value, computed as sqrt(max eigenvalue of M*M) so that the
// Jacobi kernel above is the only spectral primitive in the library.
double op_norm(const DenseMatrix& m);
// For Hermitian operands this equals max |eigenvalue|.
double op_norm(const HermitianMatrix& a);

double min_eigenvalue(const HermitianMatrix& a);

bool is_psd(const HermitianMatrix& a, OrderTolerance tol = {});

// Loewner order: a <= b iff b - a is positive semidefinite (within tol).
bool loewner_leq(const HermitianMatrix& a, const HermitianMatrix& b,
                 OrderTolerance tol = {});

// Positive square root of a PSD matrix. Eigenvalues in [-(eps+rel*||a||), 0)
// are clamped to zero; anything more negative raises NotPsdError carrying the
// offending minimum eigenvalue.
HermitianMatrix sqrt_psd(const HermitianMatrix& a, OrderTolerance tol = {});

// Modulus |M| = sqrt(M* M); defined for every square matrix.
HermitianMatrix abs_op(const DenseMatrix& m);
HermitianMatrix abs_op(const HermitianMatrix& a);

// Both sides of the square-root contraction inequality
// ||sqrt(b) - sqrt(c)|| <= sqrt(||b - c||), for PSD b and c.
struct GapBound {
    double lhs;
    double rhs;
};
GapBound sqrt_contraction_gap(const HermitianMatrix& b, const HermitianMatrix& c,
                              OrderTolerance tol = {});

// --- small vector helpers shared across modules ---
cplx inner(const Vec& u, const Vec& v);  // sum u_i * conj(v_i)
double vec_norm(const Vec& v);
Vec vec_sub(const Vec& u, const Vec& v);
Vec vec_add(const Vec& u, const Vec& v);
Vec vec_scaled(const Vec& u, cplx alpha);

}  // namespace opseq
