#include <cmath>
#include <cstring>

#include "doctest.h"
#include "generators.hpp"

using namespace opseq;

namespace {

double commutator_frob(const HermitianMatrix& a, const HermitianMatrix& b) {
    const DenseMatrix ad = a.to_dense(), bd = b.to_dense();
    return (ad * bd - bd * ad).frobenius();
}

}  // namespace

TEST_CASE("rand_hermitian: pinned norm, determinism, seed sensitivity") {
    const HermitianMatrix a = rand_hermitian(6, 21);
    CHECK(op_norm(a) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(op_norm(rand_hermitian(6, 21, 2.5)) == doctest::Approx(2.5).epsilon(1e-12));

    const HermitianMatrix again = rand_hermitian(6, 21);
    REQUIRE(again.packed().size() == a.packed().size());
    CHECK(std::memcmp(again.packed().data(), a.packed().data(),
                      a.packed().size() * sizeof(cplx)) == 0);

    const HermitianMatrix other = rand_hermitian(6, 22);
    CHECK((a - other).frobenius() > 1e-6);
    CHECK_THROWS_AS(rand_hermitian(0, 1), DimensionError);
}

TEST_CASE("rand_psd: positive semidefinite with pinned norm") {
    for (int dim : {1, 4, 9}) {
        const HermitianMatrix p = rand_psd(dim, 100 + (std::uint64_t)dim);
        CHECK(is_psd(p));
        CHECK(op_norm(p) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(op_norm(rand_psd(5, 3, 0.25)) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("seeded_unitary columns are orthonormal at working precision") {
    for (int dim : {2, 5, 12}) {
        const DenseMatrix q = seeded_unitary(dim, 50 + (std::uint64_t)dim);
        const DenseMatrix gram = q.adjoint() * q;
        CHECK((gram - DenseMatrix::identity(dim)).frobenius() <= 1e-12 * dim);
    }
}

TEST_CASE("rand_unit_vector has unit norm and advances the stream") {
    Rng rng(7);
    const Vec u = rand_unit_vector(5, rng);
    const Vec v = rand_unit_vector(5, rng);
    CHECK(vec_norm(u) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(vec_norm(vec_sub(u, v)) > 1e-6);
}

TEST_CASE("rand_commuting_family commutes and respects the spectral box") {
    const auto fam = rand_commuting_family(6, 4, 31, -0.5, 0.75);
    REQUIRE(fam.size() == 4);
    for (size_t i = 0; i < fam.size(); ++i)
        for (size_t j = i + 1; j < fam.size(); ++j)
            CHECK(commutator_frob(fam[i], fam[j]) <= 1e-12);
    for (const auto& m : fam) {
        const SpectralDecomposition d = eigh(m);
        for (double w : d.eigenvalues) {
            CHECK(w >= -0.5 - 1e-12);
            CHECK(w <= 0.75 + 1e-12);
        }
    }
    CHECK_THROWS_AS(rand_commuting_family(4, 2, 1, 1.0, -1.0), Error);
}

TEST_CASE("decay schedules evaluate and validate") {
    CHECK(DecaySchedule::harmonic(2.0).rate(4) == 0.5);
    CHECK(DecaySchedule::geometric(1.0, 0.5).rate(3) == doctest::Approx(0.125).epsilon(1e-15));
    const DecaySchedule t = DecaySchedule::from_table({1.0, 0.5, 0.25});
    CHECK(t.rate(2) == 0.5);
    CHECK(t.rate(9) == 0.25);  // clamped to the last entry
    CHECK(DecaySchedule::harmonic(1.0).describe().rfind("harmonic:", 0) == 0);

    CHECK_THROWS_AS(DecaySchedule::harmonic(0.0), Error);
    CHECK_THROWS_AS(DecaySchedule::geometric(1.0, 1.0), Error);
    CHECK_THROWS_AS(DecaySchedule::geometric(-1.0, 0.5), Error);
    CHECK_THROWS_AS(DecaySchedule::from_table({}), Error);
    CHECK_THROWS_AS(DecaySchedule::from_table({1.0, 0.0}), Error);
    CHECK_THROWS_AS(DecaySchedule::harmonic(1.0).rate(0), Error);
}

TEST_CASE("sandwich instances honor their premises and their rate") {
    const HermitianMatrix limit = rand_hermitian(4, 7);
    const DecaySchedule sched = DecaySchedule::geometric(1.0, 0.5);
    const SandwichInstance inst = make_sandwich_instance(limit, sched, 12, 99);
    CHECK(inst.lower.horizon == 12);
    CHECK(inst.middle.dim == 4);

    for (const PremiseVerdict& p : check_sandwich_premises(inst)) {
        CHECK(p.lower_ok);
        CHECK(p.upper_ok);
    }
    for (int n = 1; n <= 12; ++n) {
        const double r = sched.rate(n);
        CHECK(op_norm(inst.lower.element(n) - limit) <= r + 1e-12);
        CHECK(op_norm(inst.middle.element(n) - limit) <= r + 1e-12);
        CHECK(op_norm(inst.upper.element(n) - limit) <= r + 1e-12);
    }
}

TEST_CASE("mix override pins the middle sequence to the lower envelope") {
    const HermitianMatrix limit = rand_hermitian(3, 5);
    const SandwichInstance inst = make_sandwich_instance(
        limit, DecaySchedule::harmonic(1.0), 6, 42, [](int) { return 0.0; });
    for (int n = 1; n <= 6; ++n)
        CHECK((inst.middle.element(n) - inst.lower.element(n)).frobenius() == 0.0);

    // Out-of-range weights are clamped, so a huge weight means "upper" — up to
    // the single rounding step in lower + 1.0 * (upper - lower).
    const SandwichInstance top = make_sandwich_instance(
        limit, DecaySchedule::harmonic(1.0), 6, 42, [](int) { return 7.0; });
    for (int n = 1; n <= 6; ++n)
        CHECK((top.middle.element(n) - top.upper.element(n)).frobenius() <= 1e-14);
}

TEST_CASE("hand-built order/modulus witness has the frozen spectra") {
    HermitianMatrix a(2), b(2);
    a.set(0, 0, cplx(1.0, 0.0));
    a.set(1, 1, cplx(-1.0, 0.0));
    b.set(0, 0, cplx(1.1, 0.0));
    b.set(1, 1, cplx(1.1, 0.0));
    b.set(1, 0, cplx(0.4, 0.0));

    CHECK(min_eigenvalue(b + a) == doctest::Approx(0.0229670384960195).epsilon(1e-10));
    CHECK(min_eigenvalue(b - a) == doctest::Approx(0.0229670384960195).epsilon(1e-10));
    CHECK(min_eigenvalue(b - abs_op(a)) == doctest::Approx(-0.3).epsilon(1e-12));

    const OrderTolerance tol{1e-9, 0.0};
    CHECK(loewner_leq(a.scaled(-1.0), b, tol));  // -B <= A rewritten as -A <= B
    CHECK(loewner_leq(a, b, tol));
    CHECK_FALSE(loewner_leq(abs_op(a), b, tol));
}

TEST_CASE("interval counterexample search: none in dim 1, witness in dim >= 2") {
    CHECK_FALSE(search_interval_counterexample(1, 3).has_value());

    for (int dim : {2, 6}) {
        const auto w = search_interval_counterexample(dim, 17);
        REQUIRE(w.has_value());
        CHECK(w->trials_used >= 1);
        CHECK(w->premise_lower_min >= -1e-9);
        CHECK(w->premise_upper_min >= -1e-9);
        CHECK(w->violation_min < -1e-6);

        const OrderTolerance tol{1e-9, 1e-12};
        CHECK(loewner_leq(w->b.scaled(-1.0), w->a, tol));
        CHECK(loewner_leq(w->a, w->b, tol));
        CHECK_FALSE(loewner_leq(abs_op(w->a), w->b, tol));
        CHECK(min_eigenvalue(w->b - abs_op(w->a)) ==
              doctest::Approx(w->violation_min).epsilon(1e-10));
    }
}

TEST_CASE("default test sets have the documented shape") {
    const MatrixTestSet mt = default_matrix_tests(5, 1);
    CHECK(mt.vectors.size() == 13);  // basis plus eight random units
    CHECK(mt.pairs.size() == 21);    // diagonal pairs plus eight cross pairs
    for (const Vec& v : mt.vectors) CHECK(vec_norm(v) == doctest::Approx(1.0).epsilon(1e-12));

    const BandTestSet bt = default_band_tests(1);
    CHECK(bt.vectors.size() == 11);  // e_0..e_8 plus two random
    CHECK(bt.pairs.size() == 19);
    for (const FinSuppVector& v : bt.vectors) {
        CHECK_FALSE(v.empty());
        CHECK(v.max_support() <= 16);
    }
}
