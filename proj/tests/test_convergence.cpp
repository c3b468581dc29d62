#include <algorithm>
#include <cmath>
#include <string>

#include "convergence.hpp"
#include "doctest.h"
#include "generators.hpp"

using namespace opseq;

namespace {

ResidualTrajectory traj(std::vector<double> v) {
    ResidualTrajectory t;
    t.values = std::move(v);
    return t;
}

BandOperator hopping(int n) {
    const BandOperator s = shift_power(n);
    return band_linear_comb({{cplx(1.0, 0.0), s}, {cplx(1.0, 0.0), band_adjoint(s)}});
}

bool has_violation(const std::vector<PremiseViolation>& vs, int n, const std::string& premise) {
    return std::any_of(vs.begin(), vs.end(), [&](const PremiseViolation& v) {
        return v.n == n && v.premise == premise;
    });
}

}  // namespace

TEST_CASE("mode and verdict names are the report vocabulary") {
    CHECK(std::string(mode_name(Mode::Norm)) == "norm");
    CHECK(std::string(mode_name(Mode::Weak)) == "weak");
    CHECK(std::string(verdict_name(Verdict::Convergent)) == "convergent");
    CHECK(std::string(verdict_name(Verdict::Stalled)) == "stalled");
    CHECK(std::string(verdict_name(Verdict::Undetermined)) == "undetermined");
}

TEST_CASE("classify: convergent, stalled, undetermined, and bounds") {
    CHECK(classify(traj({1.0, 0.5, 1e-7, 2e-7, 5e-8}), 1e-6, 3) == Verdict::Convergent);
    CHECK(classify(traj({1.0, 1.0, 1.0}), 1e-2, 3) == Verdict::Stalled);
    CHECK(classify(traj({1.0, 30.0, 1.0}), 1e-2, 3) == Verdict::Undetermined);
    CHECK(classify(traj({1e-9, 1.0, 1.0}), 1e-2, 3) == Verdict::Undetermined);
    // Only the last k values matter.
    CHECK(classify(traj({50.0, 1e-8, 1e-8}), 1e-6, 2) == Verdict::Convergent);

    CHECK_THROWS_AS(classify(traj({1.0}), 0.0, 1), DimensionError);
    CHECK_THROWS_AS(classify(traj({1.0}), 1e-6, 0), DimensionError);
    CHECK_THROWS_AS(classify(traj({1.0}), 1e-6, 2), DimensionError);
}

TEST_CASE("matrix residuals fall in the weak <= strong <= norm chain") {
    const int dim = 5, horizon = 15;
    const HermitianMatrix limit = rand_hermitian(dim, 4);
    const HermitianMatrix bump = rand_hermitian(dim, 9);
    MatrixSequence seq{horizon, dim,
                       [=](int n) { return limit + bump.scaled(1.0 / n); }};
    const MatrixTestSet tests = default_matrix_tests(dim, 12);
    const auto res = residuals(seq, limit, tests);
    REQUIRE(res[0].values.size() == horizon);
    for (int i = 0; i < horizon; ++i) {
        CHECK(res[2].values[(size_t)i] <= res[1].values[(size_t)i] + 1e-12);
        CHECK(res[1].values[(size_t)i] <= res[0].values[(size_t)i] + 1e-12);
        CHECK(res[0].values[(size_t)i] == doctest::Approx(1.0 / (i + 1)).epsilon(1e-10));
    }
    CHECK(res[0].window_unstable.empty());  // finite-dimensional: no windows
}

TEST_CASE("band residuals flag unstable finite-section windows") {
    BandSequence seq{5, [](int n) { return hopping(n); }};
    const auto res = residuals(seq, BandOperator::zero(), default_band_tests(1));
    REQUIRE(res[0].values.size() == 5);
    REQUIRE(res[0].window_unstable.size() == 5);
    // Hopping sections keep gaining norm as the window grows: every window
    // is flagged, and the section values sit strictly below the true norm 2.
    for (int i = 0; i < 5; ++i) {
        CHECK(res[0].window_unstable[(size_t)i] == 1);
        CHECK(res[0].values[(size_t)i] < 2.0);
        CHECK(res[0].values[(size_t)i] > 1.5);
    }
}

TEST_CASE("sandwich_verify passes on a seeded squeeze and checks the bound") {
    const int dim = 4, horizon = 20;
    const HermitianMatrix limit = rand_hermitian(dim, 7);
    const SandwichInstance inst =
        make_sandwich_instance(limit, DecaySchedule::geometric(1.0, 0.5), horizon, 11);
    const SandwichReport rep = sandwich_verify(inst, default_matrix_tests(dim, 2), 1e-4, 5);

    CHECK(rep.passed);
    CHECK(rep.failures.empty());
    CHECK(rep.premises.size() == horizon);
    CHECK(rep.bound_checked);
    CHECK(rep.bound_violations.empty());
    for (int m = 0; m < 3; ++m) {
        CHECK(rep.middle_verdict[(size_t)m] == Verdict::Convergent);
        CHECK(rep.lower_verdict[(size_t)m] == Verdict::Convergent);
        CHECK(rep.upper_verdict[(size_t)m] == Verdict::Convergent);
    }
}

TEST_CASE("sandwich_verify reports the first broken premise with its index") {
    const int dim = 2, horizon = 6;
    const HermitianMatrix zero(dim);
    const HermitianMatrix eye = HermitianMatrix::identity(dim);
    SandwichInstance inst;
    inst.lower = {horizon, dim, [=](int) { return zero; }};
    inst.middle = {horizon, dim, [=](int n) {
                       return n == 3 ? eye.scaled(-1.0) : eye.scaled(0.5 / n);
                   }};
    inst.upper = {horizon, dim, [=](int n) { return eye.scaled(1.0 / n); }};
    inst.limit = zero;

    const auto premises = check_sandwich_premises(inst);
    CHECK_FALSE(premises[2].lower_ok);
    CHECK(premises[2].upper_ok);

    try {
        sandwich_verify(inst, default_matrix_tests(dim, 1), 1e-3, 2);
        FAIL("expected a premise rejection");
    } catch (const PremiseError& e) {
        CHECK(e.index == 3);
        CHECK(std::string(e.what()).find("lower <= middle") != std::string::npos);
        CHECK(std::string(e.what()).find("n=3") != std::string::npos);
    }
}

TEST_CASE("band sandwich: scalar envelopes verify with exact windows") {
    const int horizon = 12;
    const BandOperator eye = BandOperator::identity();
    BandSandwichInstance inst;
    inst.lower = {horizon, [=](int n) {
                      return band_linear_comb({{cplx(-1.0 / n, 0.0), eye}});
                  }};
    inst.middle = {horizon, [](int) { return BandOperator::zero(); }};
    inst.upper = {horizon, [=](int n) {
                      return band_linear_comb({{cplx(1.0 / n, 0.0), eye}});
                  }};
    inst.limit = BandOperator::zero();

    const SandwichReport rep = sandwich_verify(inst, default_band_tests(5), 0.2, 3);
    CHECK(rep.passed);
    CHECK_FALSE(rep.bound_checked);  // no norm bound on the infinite carrier
    CHECK(rep.middle_verdict[0] == Verdict::Convergent);
    // Scalar diagonals hit the exact section path: every window is stable.
    for (auto flag : rep.lower_res[0].window_unstable) CHECK(flag == 0);
}

TEST_CASE("proof-step chains hold after the positivity shift") {
    const int dim = 4, horizon = 15;
    const HermitianMatrix limit = rand_hermitian(dim, 23);
    const SandwichInstance inst =
        make_sandwich_instance(limit, DecaySchedule::harmonic(1.0), horizon, 29);
    const SandwichInstance shifted = shifted_by_modulus(inst);

    // The shift preserves the order premises and makes the bottom PSD.
    for (const PremiseVerdict& p : check_sandwich_premises(shifted)) {
        CHECK(p.lower_ok);
        CHECK(p.upper_ok);
    }
    for (int n = 1; n <= horizon; ++n) CHECK(is_psd(shifted.lower.element(n)));
    CHECK((shifted.limit - (inst.limit + abs_op(inst.limit))).frobenius() == 0.0);

    const ProofStepReport rep = proof_step_checks(shifted, default_matrix_tests(dim, 3));
    CHECK(rep.passed);
    CHECK(rep.failures.empty());
    CHECK(rep.checked_n == horizon);
}

TEST_CASE("proof-step checks refuse instances with an indefinite bottom") {
    const int dim = 2, horizon = 3;
    const HermitianMatrix eye = HermitianMatrix::identity(dim);
    SandwichInstance inst;
    inst.lower = {horizon, dim, [=](int) { return eye.scaled(-1.0); }};
    inst.middle = {horizon, dim, [=](int) { return HermitianMatrix(dim); }};
    inst.upper = {horizon, dim, [=](int) { return eye; }};
    inst.limit = HermitianMatrix(dim);
    CHECK_THROWS_AS(proof_step_checks(inst, default_matrix_tests(dim, 1)), NotPsdError);
}

TEST_CASE("matrix modulus squeeze: vanishing sequence, vanishing modulus") {
    const int dim = 4, horizon = 20;
    const HermitianMatrix h = rand_hermitian(dim, 14);
    MatrixSequence seq{horizon, dim, [=](int n) { return h.scaled(1.0 / n); }};
    const ModulusSqueezeReport rep = modulus_squeeze(seq, default_matrix_tests(dim, 6), 0.1, 3);
    CHECK(rep.passed);
    CHECK(rep.failures.empty());
    CHECK(rep.notes.empty());
    for (int m = 0; m < 3; ++m) {
        CHECK(rep.seq_verdict[(size_t)m] == Verdict::Convergent);
        CHECK(rep.abs_verdict[(size_t)m] == Verdict::Convergent);
    }
}

TEST_CASE("band modulus squeeze takes the exact-isometry shortcut on shifts") {
    const int horizon = 40;
    BandSequence seq{horizon, [](int n) { return shift_power(n); }};
    const ModulusSqueezeReport rep = modulus_squeeze(seq, default_band_tests(8), 1e-6, 5);

    CHECK(rep.modulus_exact_identity);
    for (double v : rep.abs_res[0].values) CHECK(v == 1.0);  // |A_n| = I exactly

    // The sequence dies weakly; its modulus plainly does not. That is the
    // unasserted converse direction, so it lands in notes, not failures.
    CHECK(rep.seq_verdict[2] == Verdict::Convergent);
    CHECK(rep.abs_verdict[2] == Verdict::Stalled);
    CHECK(rep.seq_verdict[1] == Verdict::Stalled);
    CHECK(rep.failures.empty());
    REQUIRE(rep.notes.size() == 1);
    CHECK(rep.notes[0].find("sequence convergent while modulus verdict is") !=
          std::string::npos);
    CHECK(rep.passed);
}

TEST_CASE("band modulus squeeze fallback reuses the exact norm identities") {
    const int horizon = 12;
    BandSequence seq{horizon, [](int n) {
                         const BandOperator h = hopping(1);
                         return band_linear_comb({{cplx(1.0 / n, 0.0), h}});
                     }};
    const ModulusSqueezeReport rep = modulus_squeeze(seq, default_band_tests(4), 0.5, 3);
    CHECK_FALSE(rep.modulus_exact_identity);
    // Norm and strong trajectories coincide with the sequence's own, exactly.
    CHECK(rep.abs_res[0].values == rep.seq_res[0].values);
    CHECK(rep.abs_res[1].values == rep.seq_res[1].values);
    CHECK(rep.passed);
    CHECK(rep.failures.empty());
}

TEST_CASE("dominated products: clean commuting instance passes") {
    const int dim = 4, horizon = 40;
    const auto fam = rand_commuting_family(dim, 2, 777, -0.9, 0.9);
    const HermitianMatrix a0 = fam[0];
    HermitianMatrix b0 = fam[1].plus_scaled_identity(op_norm(fam[1]));
    b0 = b0.scaled(1.0 / op_norm(b0));

    MatrixSequence a_seq{horizon, dim, [=](int) { return a0; }};
    MatrixSequence b_seq{horizon, dim, [=](int n) { return b0.scaled(1.0 / n); }};
    const double tol = 1.0 / 36 + 1e-12;
    const DominatedProductReport rep =
        dominated_product_check(a_seq, b_seq, HermitianMatrix::identity(dim),
                                default_matrix_tests(dim, 5), tol, 5);

    CHECK(rep.scalar_dominator);
    CHECK(rep.violations.empty());
    CHECK(rep.failures.empty());
    CHECK(rep.b_verdict[0] == Verdict::Convergent);
    CHECK(rep.product_verdict[0] == Verdict::Convergent);
    CHECK(rep.passed);
}

TEST_CASE("dominated products: planted defects are reported at their index") {
    const int dim = 4, horizon = 12;
    const auto fam = rand_commuting_family(dim, 2, 777, -0.9, 0.9);
    const HermitianMatrix a0 = fam[0];
    HermitianMatrix b0 = fam[1].plus_scaled_identity(op_norm(fam[1]));
    b0 = b0.scaled(1.0 / op_norm(b0));
    const HermitianMatrix eye = HermitianMatrix::identity(dim);
    const MatrixTestSet tests = default_matrix_tests(dim, 5);
    const double tol = 0.2;

    SUBCASE("positivity break") {
        MatrixSequence a_seq{horizon, dim, [=](int) { return a0; }};
        MatrixSequence b_seq{horizon, dim, [=](int n) {
                                 const HermitianMatrix b = b0.scaled(1.0 / n);
                                 return n == 3 ? b.plus_scaled_identity(-0.5) : b;
                             }};
        const auto rep = dominated_product_check(a_seq, b_seq, eye, tests, tol, 3);
        CHECK(has_violation(rep.violations, 3, "positivity"));
        CHECK_FALSE(rep.passed);
        REQUIRE(!rep.failures.empty());
        CHECK(rep.failures[0].find("premise violations at") != std::string::npos);
    }
    SUBCASE("domination break") {
        MatrixSequence a_seq{horizon, dim, [=](int n) {
                                 return n == 5 ? eye.scaled(2.0) : a0;
                             }};
        MatrixSequence b_seq{horizon, dim, [=](int n) { return b0.scaled(1.0 / n); }};
        const auto rep = dominated_product_check(a_seq, b_seq, eye, tests, tol, 3);
        CHECK(has_violation(rep.violations, 5, "domination"));
        CHECK_FALSE(rep.passed);
    }
    SUBCASE("commutation break") {
        const HermitianMatrix rogue = rand_hermitian(dim, 888);
        MatrixSequence a_seq{horizon, dim, [=](int n) { return n == 7 ? rogue : a0; }};
        MatrixSequence b_seq{horizon, dim, [=](int n) { return b0.scaled(1.0 / n); }};
        const auto rep = dominated_product_check(a_seq, b_seq, eye, tests, tol, 3);
        CHECK(has_violation(rep.violations, 7, "commutation"));
        CHECK_FALSE(rep.passed);
    }
}

TEST_CASE("weak positive products: pass, premise reject, positivity reject") {
    const int dim = 4, horizon = 40;
    const auto fam = rand_commuting_family(dim, 2, 555, 0.1, 0.9);
    const MatrixTestSet tests = default_matrix_tests(dim, 8);

    SUBCASE("clean commuting PSD pair") {
        MatrixSequence a_seq{horizon, dim, [=](int) { return fam[0]; }};
        MatrixSequence b_seq{horizon, dim, [=](int n) { return fam[1].scaled(1.0 / n); }};
        const auto rep =
            weak_positive_product_check(a_seq, b_seq, tests, 1.0 / 36 + 1e-12, 5);
        CHECK(rep.passed);
        CHECK(rep.violations.empty());
        CHECK(rep.alpha == doctest::Approx(op_norm(fam[0])).epsilon(1e-12));
        CHECK(rep.b_weak_verdict == Verdict::Convergent);
        CHECK(rep.product_verdict == Verdict::Convergent);
    }
    SUBCASE("B_n that refuses to vanish weakly is rejected") {
        MatrixSequence a_seq{horizon, dim, [=](int) { return fam[0]; }};
        MatrixSequence b_seq{horizon, dim, [=](int) { return fam[1]; }};
        const auto rep = weak_positive_product_check(a_seq, b_seq, tests, 1e-6, 5);
        CHECK_FALSE(rep.passed);
        bool premise_named = false;
        for (const auto& f : rep.failures)
            premise_named |= f.find("premise: B_n is not weakly convergent") != std::string::npos;
        CHECK(premise_named);
    }
    SUBCASE("an indefinite factor is a positivity violation") {
        const HermitianMatrix indef = rand_hermitian(dim, 999);
        REQUIRE(min_eigenvalue(indef) < -1e-3);  // documents the seed
        MatrixSequence a_seq{horizon, dim, [=](int) { return indef; }};
        MatrixSequence b_seq{horizon, dim, [=](int n) { return fam[1].scaled(1.0 / n); }};
        const auto rep =
            weak_positive_product_check(a_seq, b_seq, tests, 1.0 / 36 + 1e-12, 5);
        CHECK_FALSE(rep.passed);
        CHECK(has_violation(rep.violations, 1, "positivity(a)"));
    }
}

TEST_CASE("band weak-product probe rejects the shift pair on quadratic forms") {
    BandSequence a_seq{5, [](int n) { return hopping(n); }};
    BandSequence b_seq{5, [](int n) { return hopping(n); }};
    const BandWeakProductProbe probe =
        weak_positive_product_probe(a_seq, b_seq, default_band_tests(2));
    CHECK(probe.rejected);
    REQUIRE(!probe.violations.empty());
    bool positivity = false;
    for (const auto& v : probe.violations)
        positivity |= v.premise.rfind("positivity", 0) == 0 && v.value < -1.0;
    CHECK(positivity);
    CHECK(probe.product_weak.values.size() == 5);
}

TEST_CASE("polarization recovers pairings from quadratic forms") {
    const HermitianMatrix a = rand_hermitian(5, 61);
    const MatrixTestSet tests = default_matrix_tests(5, 62);
    for (const auto& [x, y] : tests.pairs) {
        const cplx direct = inner(a.apply(x), y);
        const cplx recovered = polarization_pairing(a, x, y);
        CHECK(recovered.real() == doctest::Approx(direct.real()).epsilon(1e-11));
        CHECK(recovered.imag() == doctest::Approx(direct.imag()).epsilon(1e-11));
    }

    const BandOperator band = band_linear_comb(
        {{cplx(1.0, 2.0), shift_power(2)}, {cplx(0.0, -1.0), band_adjoint(shift_power(1))}});
    FinSuppVector x, y;
    x.set(0, cplx(1.0, -1.0));
    x.set(4, cplx(0.5, 0.0));
    y.set(1, cplx(2.0, 1.0));
    y.set(2, cplx(0.0, -1.0));
    const cplx direct = pairing(band, x, y);
    const cplx recovered = polarization_pairing(band, x, y);
    CHECK(recovered.real() == doctest::Approx(direct.real()).epsilon(1e-12));
    CHECK(recovered.imag() == doctest::Approx(direct.imag()).epsilon(1e-12));
}

TEST_CASE("weak quadratic residuals are the |<Ax, x>| scalars") {
    const HermitianMatrix a = rand_hermitian(4, 71);
    const MatrixTestSet tests = default_matrix_tests(4, 72);
    const Vec& x = tests.vectors[1];
    CHECK(weak_quadratic_residual(a, x) ==
          doctest::Approx(std::abs(inner(a.apply(x), x))).epsilon(1e-13));

    const BandOperator band = hopping(2);
    FinSuppVector u;
    u.set(0, cplx(1.0, 0.0));
    u.set(2, cplx(1.0, 0.0));
    CHECK(weak_quadratic_residual(band, u) == doctest::Approx(2.0).epsilon(1e-13));
}
