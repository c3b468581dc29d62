#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "band.hpp"
#include "hermitian.hpp"

namespace opseq {

// Convergence is probed in three senses: operator norm, pointwise on test
// vectors (strong), and against test-vector pairs (weak).
enum class Mode { Norm = 0, Strong = 1, Weak = 2 };
enum class Verdict { Convergent, Stalled, Undetermined };

const char* mode_name(Mode m);
const char* verdict_name(Verdict v);

// One residual value per sequence index n = 1..horizon (stored at n-1).
// For band sequences in Norm mode, window_unstable[n-1] records whether
// doubling the finite-section window moved the value by more than 1e-3.
struct ResidualTrajectory {
    Mode mode = Mode::Norm;
    std::vector<double> values;
    std::vector<std::uint8_t> window_unstable;
};

// --- test sets ---------------------------------------------------------------

struct MatrixTestSet {
    std::vector<Vec> vectors;                   // strong probes
    std::vector<std::pair<Vec, Vec>> pairs;     // weak probes
};
// Standard basis plus eight seeded random unit vectors; pairs are the
// diagonal pairs (v, v) plus eight seeded cross pairs.
MatrixTestSet default_matrix_tests(int dim, std::uint64_t seed);

struct BandTestSet {
    std::vector<FinSuppVector> vectors;
    std::vector<std::pair<FinSuppVector, FinSuppVector>> pairs;
};
// e_0..e_8 plus two seeded random vectors supported in [0, 16]; pairs follow
// the same diagonal-plus-cross recipe.
BandTestSet default_band_tests(std::uint64_t seed);

// --- operator sequences -------------------------------------------------------

// Lazily evaluated sequence A_1..A_horizon of Hermitian matrices of one
// common dimension. element(n) must be defined for 1 <= n <= horizon.
struct MatrixSequence {
    int horizon = 0;
    int dim = 0;
    std::function<HermitianMatrix(int)> element;
};

// Same, over band operators on l2(N). Self-adjointness is required by the
// order-based harnesses (they check it); the modulus harness also accepts
// non-self-adjoint sequences since |A| = sqrt(A*A) is defined regardless.
struct BandSequence {
    int horizon = 0;
    std::function<BandOperator(int)> element;
};

// --- residuals and verdicts ---------------------------------------------------

// Residual trajectories of element(n) - limit in all three modes.
// Band Norm mode is approximated on finite sections of size
// window(n) = max(4 * band_width, 16), with a doubled-window stability flag.
std::array<ResidualTrajectory, 3> residuals(const MatrixSequence& seq,
                                            const HermitianMatrix& limit,
                                            const MatrixTestSet& tests);
std::array<ResidualTrajectory, 3> residuals(const BandSequence& seq, const BandOperator& limit,
                                            const BandTestSet& tests);

// convergent: last k values all <= tol.
// stalled:    last k values all >= 10*tol with max/min ratio <= 2.
// undetermined otherwise. Requires 1 <= k <= trajectory length and tol > 0.
Verdict classify(const ResidualTrajectory& traj, double tol, int k);

// --- sandwich harnesses --------------------------------------------------------

// lower_n <= middle_n <= upper_n expected in the semidefinite order, with all
// three converging to `limit` when squeezed.
struct SandwichInstance {
    MatrixSequence lower, middle, upper;
    HermitianMatrix limit;
};
struct BandSandwichInstance {
    BandSequence lower, middle, upper;
    BandOperator limit;
};

struct PremiseVerdict {
    int n;
    bool lower_ok;  // lower_n <= middle_n
    bool upper_ok;  // middle_n <= upper_n
};

// Checks both order premises at every index, never skipping any.
// Band instances are screened on finite sections of width-covering size
// (compressions of PSD operators stay PSD, so this is a sound screen).
std::vector<PremiseVerdict> check_sandwich_premises(const SandwichInstance& inst,
                                                    OrderTolerance tol = {});
std::vector<PremiseVerdict> check_sandwich_premises(const BandSandwichInstance& inst,
                                                    OrderTolerance tol = {});

struct SandwichReport {
    std::vector<PremiseVerdict> premises;
    std::array<ResidualTrajectory, 3> lower_res, middle_res, upper_res;
    std::array<Verdict, 3> lower_verdict{}, middle_verdict{}, upper_verdict{};
    // Norm-mode bound ||middle_n - L|| <= ||upper_n - L|| + 2||lower_n - L||
    // (+ 1e-8 * scale); finite-dimensional instances only.
    bool bound_checked = false;
    std::vector<int> bound_violations;
    double tol = 0.0;
    int k = 0;
    std::vector<std::string> failures;
    bool passed = true;
};

// Verifies premises (throws PremiseError at the earliest violation), then
// asserts: in every mode where both outer sequences classify convergent, the
// middle one does too. Finite-dimensional instances additionally get the
// quantitative norm bound above at every index.
SandwichReport sandwich_verify(const SandwichInstance& inst, const MatrixTestSet& tests,
                               double tol, int k);
SandwichReport sandwich_verify(const BandSandwichInstance& inst, const BandTestSet& tests,
                               double tol, int k);

// --- proof-step checks ----------------------------------------------------------

// Mechanical re-check of the two chains the squeeze argument runs on, for
// instances whose lower sequence is PSD (which forces all three to be):
//   ||sqrt(lower_n) x||^2 <= ||sqrt(middle_n) x||^2 <= ||sqrt(upper_n) x||^2
//   (within 1e-8 * scale), and
//   ||lower_n|| <= ||middle_n|| <= ||upper_n||  (within 1e-9 * scale).
struct ProofStepReport {
    int checked_n = 0;
    std::vector<std::string> failures;
    bool passed = true;
};
ProofStepReport proof_step_checks(const SandwichInstance& inst, const MatrixTestSet& tests);

// The positivity shift used to reduce the general case to the PSD case:
// every element gains +|lower_n|, the limit gains +|limit|. The order
// premises are untouched and the new lower sequence is PSD by construction.
SandwichInstance shifted_by_modulus(const SandwichInstance& inst);

// --- modulus squeeze -------------------------------------------------------------

struct ModulusSqueezeReport {
    std::array<ResidualTrajectory, 3> seq_res, abs_res;
    std::array<Verdict, 3> seq_verdict{}, abs_verdict{};
    bool modulus_exact_identity = false;  // band path: (A_n)* A_n = I at every n
    std::vector<std::string> failures;    // asserted direction breaches
    std::vector<std::string> notes;       // converse observations, never asserted
    bool passed = true;
    double tol = 0.0;
    int k = 0;
};

// Asserts, per mode: |A_n| -> 0 convergent implies A_n -> 0 convergent.
// The converse is only ever reported in `notes`. The band overload
// recognizes (A_n)* A_n = I exactly (then |A_n| = I); otherwise it falls
// back to finite-section moduli with the usual stability flagging.
ModulusSqueezeReport modulus_squeeze(const MatrixSequence& seq, const MatrixTestSet& tests,
                                     double tol, int k);
ModulusSqueezeReport modulus_squeeze(const BandSequence& seq, const BandTestSet& tests,
                                     double tol, int k);

// --- dominated products ------------------------------------------------------------

struct PremiseViolation {
    int n;
    std::string premise;
    double value;  // the measured quantity that broke the premise
};

struct DominatedProductReport {
    std::vector<PremiseViolation> violations;
    std::array<ResidualTrajectory, 3> product_res, b_res;
    std::array<Verdict, 3> product_verdict{}, b_verdict{};
    bool scalar_dominator = false;  // M = alpha*I detected exactly
    std::vector<std::string> failures;
    bool passed = true;
    double tol = 0.0;
    int k = 0;
};

// Premises per n: B_n PSD; |A_n| <= M; A_n B_n = B_n A_n within 1e-10*scale;
// B_n M = M B_n within 1e-10*scale (skipped when M is exactly scalar); and
// the envelope -herm(M B_n) <= herm(A_n B_n) <= herm(M B_n) in the
// semidefinite order with eps = 1e-9*scale. Asserts that the product
// sequence classifies convergent to zero in every mode in which B_n does.
DominatedProductReport dominated_product_check(const MatrixSequence& a_seq,
                                               const MatrixSequence& b_seq,
                                               const HermitianMatrix& dominator,
                                               const MatrixTestSet& tests, double tol, int k);

struct WeakProductReport {
    double alpha = 0.0;  // sup_n ||A_n||, the scalar the reduction runs on
    std::vector<PremiseViolation> violations;
    ResidualTrajectory product_weak;
    Verdict product_verdict = Verdict::Undetermined;
    Verdict b_weak_verdict = Verdict::Undetermined;
    std::vector<std::string> failures;
    bool passed = true;
    double tol = 0.0;
    int k = 0;
};

// Positive commuting case: both sequences PSD, commuting within tolerance,
// B_n -> 0 weakly; asserts A_n B_n -> 0 weakly on the pair set.
WeakProductReport weak_positive_product_check(const MatrixSequence& a_seq,
                                              const MatrixSequence& b_seq,
                                              const MatrixTestSet& tests, double tol, int k);

// Band-kind screening: only evaluates the positivity premise on quadratic
// forms over the test vectors and their pairwise differences, and exhibits
// the product pairing trajectory. Asserts nothing else — its job is to
// reject inputs (like shift-plus-adjoint sequences) that are not positive.
struct BandWeakProductProbe {
    std::vector<PremiseViolation> violations;
    ResidualTrajectory product_weak;
    bool rejected = false;
};
BandWeakProductProbe weak_positive_product_probe(const BandSequence& a_seq,
                                                 const BandSequence& b_seq,
                                                 const BandTestSet& tests);

// --- weak-topology utilities ---------------------------------------------------------

double weak_quadratic_residual(const HermitianMatrix& a, const Vec& x);
double weak_quadratic_residual(const BandOperator& a, const FinSuppVector& x);

// Recovers <A x, y> from four quadratic forms (works for any operator):
// (1/4) * sum_{p=0..3} i^p <A(x + i^p y), x + i^p y>.
cplx polarization_pairing(const HermitianMatrix& a, const Vec& x, const Vec& y);
cplx polarization_pairing(const BandOperator& a, const FinSuppVector& x, const FinSuppVector& y);

// --- finite-section spectral helpers ----------------------------------------------------

// Operator norm of the N x N section, computed by splitting the section into
// connected components of its nonzero pattern and running the dense spectral
// kernel per component. Identical value to op_norm(finite_section(a, n)).
double band_section_norm(const BandOperator& a, int n);

// <|P_N A P_N| x, y> for self-adjoint a, same component-splitting route.
cplx section_abs_pairing(const BandOperator& a, int n, const FinSuppVector& x,
                         const FinSuppVector& y);

struct SectionProbe {
    double value;         // <|P_N A P_N| x, x>
    double doubled_value; // same at window 2N
    bool stable;          // |value - doubled_value| <= 1e-3
};

// Modulus probe on a finite section. Requires a self-adjoint band, a window
// of at least 4 * width(a) (and at least 1), and supp(x) inside the window.
SectionProbe section_modulus_probe(const BandOperator& a, int window, const FinSuppVector& x);

}  // namespace opseq
