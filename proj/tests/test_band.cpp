#include <cmath>
#include <string>

#include "band.hpp"
#include "convergence.hpp"
#include "doctest.h"

using namespace opseq;

namespace {

bool fsv_equal(const FinSuppVector& u, const FinSuppVector& v) {
    return u.entries() == v.entries();
}

// S^n + (S^n)*: self-adjoint, weakly vanishing but strongly persistent.
BandOperator shift_plus_adjoint(int n) {
    const BandOperator s = shift_power(n);
    return band_linear_comb({{cplx(1.0, 0.0), s}, {cplx(1.0, 0.0), band_adjoint(s)}});
}

}  // namespace

TEST_CASE("EvSeq canonicalizes trailing tail values") {
    const EvSeq a({cplx(1.0, 0.0), cplx(1.0, 0.0)}, cplx(1.0, 0.0));
    CHECK(a == EvSeq::constant(cplx(1.0, 0.0)));
    CHECK(a.head().empty());

    const EvSeq b({cplx(0.0, 0.0), cplx(1.0, 0.0), cplx(1.0, 0.0)}, cplx(1.0, 0.0));
    CHECK(b.head().size() == 1);
    CHECK(b.at(0) == cplx(0.0, 0.0));
    CHECK(b.at(1) == cplx(1.0, 0.0));
    CHECK(b.at(100) == cplx(1.0, 0.0));
    CHECK_THROWS_AS(b.at(-1), DimensionError);
}

TEST_CASE("EvSeq arithmetic is pointwise and re-canonicalizes") {
    const EvSeq a({cplx(2.0, 1.0)}, cplx(3.0, 0.0));
    const EvSeq b({cplx(-2.0, -1.0), cplx(1.0, 0.0)}, cplx(-3.0, 0.0));
    CHECK(a.plus(b).at(0) == cplx(0.0, 0.0));
    CHECK(a.plus(b).at(1) == cplx(4.0, 0.0));
    CHECK(a.plus(b).tail() == cplx(0.0, 0.0));
    CHECK(a.scaled(cplx(0.0, 0.0)).is_zero());
    CHECK(a.conjugated().at(0) == cplx(2.0, -1.0));
    CHECK(EvSeq({cplx(5.0, 0.0)}, cplx(5.0, 0.0)) == EvSeq::constant(cplx(5.0, 0.0)));
}

TEST_CASE("FinSuppVector stores sparsely and drops exact zeros") {
    FinSuppVector v;
    CHECK(v.max_support() == -1);
    v.set(3, cplx(2.0, 0.0));
    v.set(1, cplx(0.0, 1.0));
    CHECK(v.max_support() == 3);
    CHECK(v.norm() == doctest::Approx(std::sqrt(5.0)));
    v.set(3, cplx(0.0, 0.0));
    CHECK(v.entries().size() == 1);
    CHECK(v.at(3) == cplx(0.0, 0.0));
    CHECK_THROWS_AS(v.set(-1, cplx(1.0, 0.0)), DimensionError);

    const FinSuppVector e0 = FinSuppVector::unit(0);
    CHECK(e0.norm() == 1.0);
    CHECK(inner(e0, e0) == cplx(1.0, 0.0));
}

TEST_CASE("shift powers are exact isometries: (S^n)* S^n = I for n = 1..12") {
    const BandOperator eye = BandOperator::identity();
    for (int n = 1; n <= 12; ++n) {
        const BandOperator s = shift_power(n);
        CHECK(band_equals(band_compose(band_adjoint(s), s), eye));
    }
    CHECK_THROWS_AS(shift_power(0), DimensionError);
}

TEST_CASE("S S* is the identity minus the rank-one head projection") {
    const BandOperator s = shift_power(1);
    const BandOperator ss = band_compose(s, band_adjoint(s));
    BandOperator expected;
    expected.set_diagonal(0, EvSeq({cplx(0.0, 0.0)}, cplx(1.0, 0.0)));
    CHECK(band_equals(ss, expected));
    REQUIRE(ss.diagonals().size() == 1);
    CHECK(ss.diagonals().begin()->first == 0);
    CHECK(ss.entry(0, 0) == cplx(0.0, 0.0));
    CHECK(ss.entry(7, 7) == cplx(1.0, 0.0));
}

TEST_CASE("band entries follow the offset convention") {
    const BandOperator s3 = shift_power(3);
    CHECK(s3.entry(5, 2) == cplx(1.0, 0.0));
    CHECK(s3.entry(2, 5) == cplx(0.0, 0.0));
    CHECK(s3.width() == 3);
    CHECK(BandOperator::zero().width() == 0);
    CHECK_THROWS_AS(s3.entry(-1, 0), DimensionError);
}

TEST_CASE("adjoint reverses composition exactly on integer bands") {
    BandOperator d;
    d.set_diagonal(0, EvSeq({cplx(2.0, 0.0), cplx(-1.0, 0.0)}, cplx(1.0, 0.0)));
    const BandOperator a =
        band_linear_comb({{cplx(1.0, 0.0), shift_power(2)},
                          {cplx(3.0, 0.0), band_adjoint(shift_power(1))},
                          {cplx(1.0, 0.0), d}});
    const BandOperator b =
        band_linear_comb({{cplx(0.0, 1.0), shift_power(1)}, {cplx(1.0, 0.0), d}});

    CHECK(band_equals(band_adjoint(band_compose(a, b)),
                      band_compose(band_adjoint(b), band_adjoint(a))));
    CHECK(band_equals(band_adjoint(band_adjoint(a)), a));
}

TEST_CASE("composition agrees with iterated application, exactly") {
    BandOperator d;
    d.set_diagonal(0, EvSeq({cplx(3.0, 0.0)}, cplx(2.0, 0.0)));
    const BandOperator a = band_linear_comb(
        {{cplx(1.0, 0.0), shift_power(1)}, {cplx(1.0, 0.0), band_adjoint(shift_power(2))}});
    const BandOperator b =
        band_linear_comb({{cplx(2.0, 0.0), shift_power(3)}, {cplx(1.0, 0.0), d}});

    FinSuppVector x;
    x.set(0, cplx(1.0, 0.0));
    x.set(2, cplx(-2.0, 1.0));
    x.set(7, cplx(4.0, 0.0));

    const FinSuppVector lhs = band_apply(band_compose(a, b), x);
    const FinSuppVector rhs = band_apply(a, band_apply(b, x));
    CHECK(fsv_equal(lhs, rhs));
}

TEST_CASE("pairing satisfies the adjoint identity exactly") {
    const BandOperator a = band_linear_comb(
        {{cplx(2.0, 1.0), shift_power(2)}, {cplx(0.0, -3.0), band_adjoint(shift_power(1))}});
    FinSuppVector x, y;
    x.set(0, cplx(1.0, 1.0));
    x.set(3, cplx(2.0, 0.0));
    y.set(1, cplx(0.0, 1.0));
    y.set(2, cplx(-1.0, 0.0));

    const cplx lhs = pairing(a, x, y);
    const cplx rhs = std::conj(pairing(band_adjoint(a), y, x));
    CHECK(lhs == rhs);
}

TEST_CASE("shift-plus-adjoint: exact head-vector identities") {
    const FinSuppVector e0 = FinSuppVector::unit(0);
    for (int n : {1, 2, 5, 8, 64}) {
        const BandOperator a = shift_plus_adjoint(n);
        CHECK(is_selfadjoint(a));
        // A_n e_0 = e_n exactly, so the norm is exactly one.
        CHECK(band_apply(a, e0).norm() == 1.0);
        // <A_n^2 e_0, e_0> = 1 exactly.
        CHECK(pairing(band_compose(a, a), e0, e0) == cplx(1.0, 0.0));
    }
    CHECK_FALSE(is_selfadjoint(shift_power(1)));
}

TEST_CASE("shift-plus-adjoint: pairings die exactly once the support is cleared") {
    FinSuppVector x, y;
    x.set(0, cplx(1.0, 0.0));
    x.set(1, cplx(1.0, 0.0));
    y.set(2, cplx(1.0, 0.0));
    // n exceeds max support of x plus max support of y.
    for (int n : {4, 7, 30}) {
        CHECK(pairing(shift_plus_adjoint(n), x, y) == cplx(0.0, 0.0));
        CHECK(pairing(shift_plus_adjoint(n), x, x) == cplx(0.0, 0.0));
    }
}

TEST_CASE("finite_section_hermitian demands a self-adjoint band") {
    CHECK_THROWS_AS(finite_section_hermitian(shift_power(1), 4), DimensionError);
    CHECK_NOTHROW(finite_section_hermitian(shift_plus_adjoint(1), 4));
}

TEST_CASE("frozen section norms of the hopping band") {
    const BandOperator a1 = shift_plus_adjoint(1);
    // Four-node section: 2 cos(pi/5).
    CHECK(band_section_norm(a1, 4) == doctest::Approx(1.6180339887498949).epsilon(1e-13));
    // Eight-node section: 2 cos(pi/9).
    CHECK(band_section_norm(a1, 8) == doctest::Approx(1.8793852415718169).epsilon(1e-13));
    CHECK(band_section_norm(a1, 0) == 0.0);
}

TEST_CASE("band_section_norm matches the dense route, symmetric and not") {
    const BandOperator sym = shift_plus_adjoint(2);
    for (int n : {3, 5, 8, 12}) {
        CHECK(band_section_norm(sym, n) ==
              doctest::Approx(op_norm(finite_section(sym, n))).epsilon(1e-13));
    }
    const BandOperator asym = band_linear_comb({{cplx(2.0, 0.0), shift_power(2)}});
    for (int n : {2, 5, 9}) {
        CHECK(band_section_norm(asym, n) ==
              doctest::Approx(op_norm(finite_section(asym, n))).epsilon(1e-13));
    }
    // Diagonal bands hit the singleton fast path; the answer is exact.
    BandOperator diag;
    diag.set_diagonal(0, EvSeq({cplx(3.0, 0.0), cplx(-4.0, 0.0)}, cplx(1.0, 0.0)));
    CHECK(band_section_norm(diag, 5) == 4.0);
}

TEST_CASE("section_abs_pairing agrees with the dense modulus") {
    const BandOperator a = shift_plus_adjoint(1);
    FinSuppVector x, y;
    x.set(0, cplx(1.0, 0.0));
    x.set(3, cplx(0.0, 0.5));
    y.set(1, cplx(1.0, 0.0));
    y.set(2, cplx(-1.0, 0.0));

    const int window = 6;
    const HermitianMatrix section = finite_section_hermitian(a, window);
    const HermitianMatrix m = abs_op(section);
    Vec xd(window, cplx(0.0, 0.0)), yd(window, cplx(0.0, 0.0));
    for (const auto& [j, v] : x.entries()) xd[static_cast<size_t>(j)] = v;
    for (const auto& [j, v] : y.entries()) yd[static_cast<size_t>(j)] = v;
    const cplx dense = inner(m.apply(xd), yd);
    const cplx sparse = section_abs_pairing(a, window, x, y);
    CHECK(sparse.real() == doctest::Approx(dense.real()).epsilon(1e-12));
    CHECK(sparse.imag() == doctest::Approx(dense.imag()).epsilon(1e-12));
}

TEST_CASE("frozen modulus probe of the hopping band at the head vector") {
    const FinSuppVector e0 = FinSuppVector::unit(0);
    const SectionProbe p = section_modulus_probe(shift_plus_adjoint(1), 4, e0);
    CHECK(p.value == doctest::Approx(0.8944271909999159).epsilon(1e-12));
    CHECK(p.doubled_value == doctest::Approx(0.8620856092381818).epsilon(1e-12));
    CHECK_FALSE(p.stable);
}

TEST_CASE("the head-vector probe is constant across the sequence") {
    const FinSuppVector e0 = FinSuppVector::unit(0);
    const double first = section_modulus_probe(shift_plus_adjoint(1), 4, e0).value;
    for (int n : {2, 3, 5, 9}) {
        const double v = section_modulus_probe(shift_plus_adjoint(n), 4 * n, e0).value;
        CHECK(v == doctest::Approx(first).epsilon(1e-14));
    }
}

TEST_CASE("probe rejects small windows, naming the minimum") {
    const FinSuppVector e0 = FinSuppVector::unit(0);
    try {
        section_modulus_probe(shift_plus_adjoint(2), 7, e0);
        FAIL("expected a window-size rejection");
    } catch (const DimensionError& e) {
        CHECK(std::string(e.what()).find("minimum admissible size is 8") != std::string::npos);
    }
    CHECK_THROWS_AS(section_modulus_probe(shift_power(1), 8, e0), DimensionError);
}
