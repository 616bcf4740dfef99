#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hotbang/testfn.hpp"

using namespace hb;

namespace {

const cplx I(0, 1);

// int_{-1}^{1} e^{i k u} b(u) du by the trapezoid rule; b and all its
// derivatives vanish at the ends, so the rule converges very fast.
cplx trapezoid_bump(cplx k, int n = 4000) {
    cplx s = 0;
    for (int i = 1; i < n; ++i) {
        double u = -1.0 + 2.0 * i / n;
        s += std::exp(I * k * u) * bump_profile(u);
    }
    return s * (2.0 / n);
}

double max_diff(const Spinor& a, const Spinor& b) { return std::max(std::abs(a[0] - b[0]), std::abs(a[1] - b[1])); }

ComplexFourVector cvec(cplx a, cplx b, cplx c, cplx d) { return ComplexFourVector{{a, b, c, d}}; }

}  // namespace

TEST_CASE("bump evaluation") {
    auto f = standard_bump();
    auto c = f.evaluate({2, 0, 0, 0});
    CHECK(std::abs(c[0] - std::exp(-4.0)) < 1e-15);
    CHECK(c[1] == 0.0);
    CHECK(f.evaluate({2.5, 0, 0, 0})[0] == 0.0);
    CHECK(f.evaluate({5, 0, 0, 0})[0] == 0.0);

    auto g = f.plus(f.scaled(-1.0));
    CHECK(g.evaluate({2, 0.1, 0, 0})[0] == 0.0);
}

TEST_CASE("bump transform against the trapezoid oracle") {
    for (cplx k : {cplx(0.0), cplx(1.3), cplx(-7.0), cplx(2.0, 1.5), cplx(40.0, -3.0)}) {
        cplx exact = trapezoid_bump(k);
        CHECK(std::abs(bump_transform(k) - exact) < 1e-12 * (1 + std::abs(exact)));
    }
}

TEST_CASE("single bump transform factorizes per axis") {
    auto f = standard_bump();
    const auto& b = f.terms()[0];
    auto zeta = cvec(1.0, 0.0, 0.0, 0.0);
    // (zeta, x) = x0, so only the time axis oscillates.
    cplx expect = std::pow(2 * std::numbers::pi, -2.0) * std::exp(I * b.center.t) * b.half_widths[0] *
                  trapezoid_bump(b.half_widths[0]);
    for (int k = 1; k < 4; ++k) expect *= b.half_widths[k] * trapezoid_bump(0.0);
    CHECK(std::abs(f.fourier(zeta)[0] - expect) < 1e-12 * std::abs(expect));

    auto zeta2 = cvec(cplx(0.4, 0.2), 1.1, cplx(-0.3, 0.5), 0.7);
    cplx e2 = std::pow(2 * std::numbers::pi, -2.0);
    for (int k = 0; k < 4; ++k) {
        cplx w = kMetric[k] * zeta2[k];
        e2 *= std::exp(I * w * b.center[k]) * b.half_widths[k] * trapezoid_bump(w * b.half_widths[k]);
    }
    CHECK(std::abs(f.fourier(zeta2)[0] - e2) < 1e-12 * std::abs(e2));
}

TEST_CASE("zero function has zero transform") {
    auto f = standard_bump().scaled(0.0);
    CHECK(f.is_zero());
    auto v = f.fourier(cvec(1.0, 0.5, 0.0, cplx(0, 1)));
    CHECK(v[0] == 0.0);
    CHECK(v[1] == 0.0);
}

TEST_CASE("translation multiplies by a phase") {
    auto f = standard_pair();
    FourVector a{0.3, 0.1, -0.05, 0.0};
    auto g = f.translated(a);
    auto zeta = cvec(cplx(0.8, 0.1), 0.3, cplx(-0.2, 0.05), 0.4);
    auto lhs = g.fourier(zeta);
    auto rhs = f.fourier(zeta);
    cplx ph = std::exp(I * mink_product(zeta, a));
    CHECK(max_diff(lhs, {ph * rhs[0], ph * rhs[1]}) < 1e-14);
    CHECK(max_diff(g.evaluate(FourVector{2.1, 0.15, 0, 0} + a), f.evaluate({2.1, 0.15, 0, 0})) < 1e-15);
}

TEST_CASE("real functions have hermitian transforms") {
    auto f = standard_bump();
    Rng rng(3);
    for (int k = 0; k < 10; ++k) {
        FourVector p{rng.normal(), rng.normal(), rng.normal(), rng.normal()};
        auto a = f.fourier(ComplexFourVector::from_real(p));
        auto b = f.fourier(ComplexFourVector::from_real(-p));
        CHECK(std::abs(a[0] - std::conj(b[0])) < 1e-15);
    }
}

TEST_CASE("transform is linear") {
    auto f = standard_bump(), g = standard_pair();
    auto zeta = cvec(cplx(1.0, 0.3), 0.2, 0.1, cplx(0.0, -0.1));
    auto s = f.scaled(cplx(0.5, -2.0)).plus(g).fourier(zeta);
    auto a = f.fourier(zeta), b = g.fourier(zeta);
    cplx c(0.5, -2.0);
    CHECK(max_diff(s, {c * a[0] + b[0], c * a[1] + b[1]}) < 1e-15);
}

TEST_CASE("transform is holomorphic") {
    auto f = standard_pair();
    auto zeta = cvec(cplx(0.7, 0.2), cplx(0.1, 0.05), -0.4, 0.3);
    const double h = 1e-4;
    for (int k = 0; k < 4; ++k) {
        auto shift = [&](cplx d) {
            auto z = zeta;
            z[k] += d;
            return f.fourier(z)[1];
        };
        cplx dr = (shift(h) - shift(-h)) / (2 * h);
        cplx di = (shift(I * h) - shift(-I * h)) / (2.0 * I * h);
        CHECK(std::abs(dr - di) < 1e-6 * std::abs(dr) + 1e-12);
    }
}

TEST_CASE("conjugate transform") {
    auto f = standard_pair();
    FourVector p{0.9, 0.3, -0.2, 0.5};
    auto a = f.conjugate().fourier(ComplexFourVector::from_real(p));
    auto b = f.fourier(ComplexFourVector::from_real(-p));
    CHECK(max_diff(a, {std::conj(b[0]), std::conj(b[1])}) < 1e-15);
}

TEST_CASE("gauge and translation transform") {
    auto f = standard_bump();
    auto g = transform(f, {0, 0, 0, 0}, FieldKind::Psi, 0.5);
    auto v = g.evaluate({2, 0, 0, 0});
    CHECK(std::abs(v[0] - std::polar(1.0, 0.5) * std::exp(-4.0)) < 1e-15);
    auto h = transform(f, {0, 0, 0, 0}, FieldKind::PsiBar, 0.5);
    CHECK(std::abs(h.evaluate({2, 0, 0, 0})[0] - std::polar(1.0, -0.5) * std::exp(-4.0)) < 1e-15);
}

TEST_CASE("pull-back transform matches direct quadrature") {
    TransformedFunction t(standard_bump(), SL2Element::boost_z(0.2), {0.1, 0, 0, 0}, FieldKind::Psi, 0.3);
    CHECK(t.slow_path());
    auto zeta = cvec(0.6, 0.1, -0.2, 0.3);
    auto a = t.fourier(zeta);
    auto b = t.fourier_direct(zeta, 64);
    CHECK(max_diff(a, b) < 1e-10 * spinor_norm(a));
    auto c = t.evaluate(lorentz_apply(lorentz_from_sl2(SL2Element::boost_z(0.2)), FourVector{2, 0, 0, 0}) +
                        FourVector{0.1, 0, 0, 0});
    auto m = SL2Element::boost_z(0.2).matrix().transpose().inverse();
    CHECK(std::abs(c[0] - std::polar(1.0, 0.3) * m(0, 0) * std::exp(-4.0)) < 1e-14);

    TransformedFunction id(standard_bump(), SL2Element(), {0, 0, 0, 0}, FieldKind::Psi, 0.0);
    CHECK_FALSE(id.slow_path());
}

TEST_CASE("bump ray table matches the direct transform") {
    for (double theta : {0.0, 0.5, std::numbers::pi / 2, 2.5}) {
        auto ray = bump_ray(theta);
        for (double s : {0.0, 0.7, 5.0, 33.3, 180.0}) {
            cplx direct = bump_transform_scaled(std::polar(s, theta));
            CHECK(std::abs(ray(s) - direct) < 1e-12);
        }
    }
}

TEST_CASE("shell samples are cached and correct") {
    auto f = standard_pair();
    QuadConfig q;
    q.radial_order = 12;
    q.cos_order = 6;
    q.azimuth_order = 8;
    auto g = shell_grid(q);
    cplx z(1.0, 0.5);
    auto a = f.shell_samples(z, *g);
    auto b = f.shell_samples(z, *g);
    CHECK(a.get() == b.get());
    int i = 5, j = 7;
    const auto& n = g->direction(j);
    double r = g->radius(i);
    auto zeta = ComplexFourVector::from_real({r, r * n[0], r * n[1], r * n[2]}, z);
    CHECK(max_diff((*a)[i * g->n_dir() + j], f.fourier(zeta)) < 1e-13 * (1 + spinor_norm(f.fourier(zeta))));
}

TEST_CASE("invalid bumps are rejected") {
    Bump b;
    b.center = {0.5, 0, 0, 0};
    CHECK_THROWS_AS(b.validate(), std::invalid_argument);
    Bump c;
    c.center = {3, 0, 0, 0};
    c.half_widths = {1, 0, 1, 1};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("random test functions are deterministic and valid") {
    auto a = random_test_function(77), b = random_test_function(77), c = random_test_function(78);
    REQUIRE(a.terms().size() == b.terms().size());
    for (size_t k = 0; k < a.terms().size(); ++k) CHECK(a.terms()[k].center == b.terms()[k].center);
    CHECK(a.support_margin() > 0);
    CHECK(c.support_margin() > 0);
    CHECK(random_test_function(5, apex_family()).support_margin() > 0);
}

TEST_CASE("paley wiener bound") {
    auto samples = paley_wiener_samples(8, 12);
    auto zero = paley_wiener_check(standard_bump().scaled(0.0), 4, samples);
    CHECK(zero.C_N == 0.0);
    auto r1 = paley_wiener_check(standard_bump(), 4, paley_wiener_samples(16, 24));
    auto r2 = paley_wiener_check(standard_bump(), 4, paley_wiener_samples(32, 48));
    CHECK(r1.C_N > 0);
    CHECK(std::abs(r2.C_N - r1.C_N) < 0.1 * r2.C_N);
}

TEST_CASE("rng is deterministic") {
    Rng a(9), b(9);
    for (int k = 0; k < 5; ++k) CHECK(a.next() == b.next());
    Rng c(10);
    double u = c.uniform(2, 3);
    CHECK(u >= 2);
    CHECK(u < 3);
}
