#include <doctest.h>

#include <cmath>

#include "hotbang/minkowski.hpp"
#include "hotbang/testfn.hpp"

using namespace hb;

namespace {

double max_diff(const FourVector& a, const FourVector& b) {
    double d = 0;
    for (int i = 0; i < 4; ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

FourVector random_vector(Rng& rng) { return {rng.normal(), rng.normal(), rng.normal(), rng.normal()}; }

SpinorMatrix random_sl2(Rng& rng) {
    SpinorMatrix m{{cplx(rng.normal(), rng.normal()), cplx(rng.normal(), rng.normal()),
                    cplx(rng.normal(), rng.normal()), cplx(rng.normal(), rng.normal())}};
    cplx s = std::sqrt(m.det());
    return m * (1.0 / s);
}

}  // namespace

TEST_CASE("mink_product examples") {
    using V = FourVector;
    CHECK(mink_product(V{1, 0, 0, 0}, V{1, 0, 0, 0}) == 1.0);
    CHECK(mink_product(V{0, 1, 0, 0}, V{0, 1, 0, 0}) == -1.0);
    CHECK(mink_product(V{2, 1, 1, 1}, V{1, 0, 0, 0}) == 2.0);
    CHECK(mink_product(V{1, 1, 0, 0}, V{1, 1, 0, 0}) == 0.0);
    CHECK(is_timelike_future({1, 0.5, 0, 0}));
    CHECK_FALSE(is_timelike_future({-1, 0, 0, 0}));
    CHECK_FALSE(is_timelike_future({1, 1, 0, 0}));
    CHECK(is_forward_null({1, 1, 0, 0}));
    CHECK_FALSE(is_forward_null({-1, 1, 0, 0}));
}

TEST_CASE("complex product has no conjugation") {
    ComplexFourVector a = ComplexFourVector::from_real({1, 2, 0, 0}, cplx(0, 1));
    CHECK(std::abs(mink_product(a, a) - cplx(-1.0 + 4.0, 0)) < 1e-15);
}

TEST_CASE("spinor matrix examples") {
    auto lo = spinor_matrix(FourVector{1, 0, 0, 0}, Index::Lower);
    auto up = spinor_matrix(FourVector{1, 0, 0, 0}, Index::Upper);
    CHECK(std::abs(lo.det() - 1.0) < 1e-15);
    CHECK((lo - SpinorMatrix::identity()).max_abs() == 0.0);
    CHECK((up - SpinorMatrix::identity()).max_abs() == 0.0);

    auto p = spinor_matrix(FourVector{0, 1, 0, 0}, Index::Lower);
    CHECK(p(0, 1) == cplx(1, 0));
    CHECK(p(1, 0) == cplx(1, 0));
    auto q = spinor_matrix(FourVector{0, 0, 1, 0}, Index::Lower);
    CHECK(q(0, 1) == cplx(0, -1));
    CHECK(q(1, 0) == cplx(0, 1));
}

TEST_CASE("lower times upper is the square") {
    Rng rng(11);
    for (int k = 0; k < 20; ++k) {
        FourVector a = random_vector(rng);
        auto prod = spinor_matrix(a, Index::Lower) * spinor_matrix(a, Index::Upper);
        auto expect = SpinorMatrix::identity() * mink_product(a, a);
        CHECK((prod - expect).max_abs() < 1e-12);
        CHECK(std::abs(spinor_matrix(a, Index::Lower).det() - mink_product(a, a)) < 1e-12);
    }
}

TEST_CASE("shell matrix is positive semidefinite with eigenvalues 0 and 2|p|") {
    Rng rng(12);
    for (int k = 0; k < 20; ++k) {
        FourVector p = shell_vector(rng.normal(), rng.normal(), rng.normal());
        auto m = spinor_matrix(p, Index::Lower);
        CHECK(std::abs(m.det()) < 1e-12);
        CHECK(std::abs(m.trace() - 2.0 * p.t) < 1e-12);
        CHECK((m - m.adjoint()).max_abs() < 1e-15);
    }
}

TEST_CASE("lorentz_from_sl2 on boosts and rotations") {
    const double eta = 0.7, th = 0.9;
    auto B = lorentz_from_sl2(SL2Element::boost_z(eta));
    auto b = lorentz_apply(B, FourVector{1, 0, 0, 0});
    CHECK(max_diff(b, {std::cosh(eta), 0, 0, std::sinh(eta)}) < 1e-14);

    auto R = lorentz_from_sl2(SL2Element::rotation_z(th));
    auto r = lorentz_apply(R, FourVector{0, 1, 0, 0});
    CHECK(max_diff(r, {0, std::cos(th), std::sin(th), 0}) < 1e-14);

    auto I = lorentz_from_sl2(SL2Element());
    Rng rng(13);
    FourVector v = random_vector(rng);
    CHECK(max_diff(lorentz_apply(I, v), v) < 1e-15);
}

TEST_CASE("lorentz image preserves the product and inverts") {
    Rng rng(14);
    for (int k = 0; k < 20; ++k) {
        SL2Element A(random_sl2(rng));
        auto L = lorentz_from_sl2(A);
        FourVector a = random_vector(rng), b = random_vector(rng);
        double scale = 1 + std::abs(mink_product(lorentz_apply(L, a), lorentz_apply(L, a)));
        CHECK(std::abs(mink_product(lorentz_apply(L, a), lorentz_apply(L, b)) - mink_product(a, b)) < 1e-10 * scale);
        CHECK(max_diff(lorentz_apply(lorentz_inverse(L), lorentz_apply(L, a)), a) < 1e-9 * scale);
        // A a_M A^dagger is the lower matrix of Lambda a.
        auto lhs = A.matrix() * spinor_matrix(a, Index::Lower) * A.matrix().adjoint();
        CHECK((lhs - spinor_matrix(lorentz_apply(L, a), Index::Lower)).max_abs() < 1e-10 * scale);
    }
}

TEST_CASE("non-unit determinant is rejected") {
    SpinorMatrix m = SpinorMatrix::identity() * 2.0;
    CHECK_THROWS_AS(SL2Element{m}, std::invalid_argument);
}
