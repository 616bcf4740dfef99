#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hotbang/hot_bang.hpp"

using namespace hb;

namespace {

constexpr double kPi = std::numbers::pi;

// int d^3p/(2|p|) f~(z p')^T p'_M conj(f~(z p')), evaluated directly.
cplx same_argument_shell(const TestFunction& f, cplx z, const QuadConfig& q) {
    return shell_integrate<cplx>([&](const std::array<double, 3>& p) {
               FourVector v = shell_vector(p[0], p[1], p[2]);
               auto a = f.fourier(ComplexFourVector::from_real(v, z));
               auto M = spinor_matrix(v, Index::Lower);
               cplx s = 0;
               for (int i = 0; i < 2; ++i)
                   for (int j = 0; j < 2; ++j) s += a[i] * M(i, j) * std::conj(a[j]);
               return s;
           }, q).value;
}

}  // namespace

TEST_CASE("series schedule") {
    SeriesSchedule s;
    s.lambda = 0.7;
    for (int n : {0, 1, 5, 100}) {
        CHECK(std::abs(s.phi(n) - std::atan(n * 0.7)) < 1e-15);
        CHECK(std::abs(s.cos3(n) - std::pow(1 + n * n * 0.49, -1.5)) < 1e-15 * s.cos3(n) + 1e-300);
        CHECK(std::abs(std::pow(std::cos(s.phi(n)), 3) - s.cos3(n)) < 1e-13);
    }
    SeriesSchedule bad;
    bad.lambda = 0;
    CHECK_THROWS(bad.validate());
}

TEST_CASE("L of the zero function vanishes") {
    auto z = standard_bump().scaled(0.0);
    CHECK(L_phi(z, 0.0).value == 0.0);
    CHECK(L_phi(z, 1.3).value == 0.0);
}

TEST_CASE("L is positive on a grid") {
    LProfile L(standard_pair());
    for (int k = 0; k <= 20; ++k) CHECK(L(kPi * k / 20) > 0);
    CHECK(L.evaluations() == 21);
    L(0.0);
    CHECK(L.evaluations() == 21);
}

TEST_CASE("same argument in both slots scales as r^-3") {
    auto f = standard_bump();
    QuadConfig q;
    for (double phi : {0.4, 2.0}) {
        double l = L_phi(f, phi, q).value;
        for (double r : {0.5, 2.0}) {
            cplx d = same_argument_shell(f, std::polar(r, phi), q);
            CHECK(std::abs(d - std::pow(r, -3.0) * l) < 1e-8 * l * std::pow(r, -3.0));
        }
    }
}

TEST_CASE("F on the unit circle is L") {
    auto f = standard_pair();
    for (double phi : {0.0, 0.3, 1.5, 2.9}) {
        double l = L_phi(f, phi).value;
        auto F = F_z(f, std::polar(1.0, phi));
        CHECK(std::abs(F.value - l) < 1e-10 * l);
    }
}

TEST_CASE("F is bounded by L at the same argument") {
    auto f = standard_bump();
    Rng rng(41);
    for (int k = 0; k < 20; ++k) {
        double phi = rng.uniform(0.0, kPi);
        double r = std::exp(rng.uniform(-1.0, 1.0));
        auto F = F_z(f, std::polar(r, phi));
        double l = L_phi(f, phi).value;
        CHECK(std::abs(F.value) <= l * (1 + 1e-8));
    }
}

TEST_CASE("F equals z^{3 alpha} F_alpha") {
    auto f = standard_bump();
    const double alpha = 1.0 / 3;
    cplx z = std::polar(2.0, kPi / 5);
    auto F = F_z(f, z);
    auto Fa = F_z(f, z, alpha);
    cplx pred = std::pow(z, 3 * alpha) * Fa.value;
    CHECK(std::abs(F.value - pred) < 1e-8 * std::abs(F.value));
    CHECK_THROWS(F_z(f, std::polar(1.0, 2.5), 0.5));
}

TEST_CASE("constant profile gives telescoping series equal to one") {
    auto one = synthetic_profile("one", [](double) { return 1.0; });
    for (double lambda : {0.25, 1.0, 4.0}) {
        SeriesSchedule s;
        s.lambda = lambda;
        s.tol = 1e-12;
        auto a = series_terms(one, s, SeriesKind::A);
        auto b = series_terms(one, s, SeriesKind::B);
        CHECK(std::abs(a.value - 1.0) < 1e-10);
        CHECK(std::abs(b.value - 1.0) < 1e-10);
    }
}

TEST_CASE("exponential profile gives nonnegative series") {
    auto e = synthetic_profile("exp", [](double phi) { return std::exp(phi); });
    CHECK(e.check().positive);
    CHECK(e.check().convex);
    SeriesSchedule s;
    CHECK(series_terms(e, s, SeriesKind::A).value >= 0);
    CHECK(series_terms(e, s, SeriesKind::B).value >= 0);
    auto concave = synthetic_profile("sin", [](double phi) { return 1 + std::sin(phi); });
    CHECK_FALSE(concave.check().convex);
}

TEST_CASE("bump profile series matches hotbang_smeared") {
    LProfile L(standard_pair());
    SeriesSchedule s;
    s.lambda = 1.0;
    s.tol = 1e-12 * L.scale();
    auto prof = L.as_profile();
    auto a = series_terms(prof, s, SeriesKind::A);
    auto b = series_terms(prof, s, SeriesKind::B);
    CHECK(a.value >= 0);
    CHECK(b.value >= 0);
    auto h = hotbang_smeared(L, 1.0, Ordering::PsiBarPsi);
    CHECK(std::abs(2 * kPi * a.value - h.value) < 1e-8 * h.scale);
    auto hb = hotbang_smeared(L, 1.0, Ordering::PsiPsiBar);
    CHECK(std::abs(2 * kPi * b.value - hb.value) < 1e-8 * hb.scale);
}

TEST_CASE("orderings sum to the anticommutator scale") {
    LProfile L(standard_pair());
    for (double lambda : {0.25, 1.0, 4.0}) {
        auto a = hotbang_smeared(L, lambda, Ordering::PsiBarPsi);
        auto b = hotbang_smeared(L, lambda, Ordering::PsiPsiBar);
        CHECK(a.value >= -a.tail_bound);
        CHECK(b.value >= -b.tail_bound);
        CHECK(std::abs(a.value + b.value - a.scale) < 1e-6 * a.scale);
    }
}

TEST_CASE("large lambda keeps only the first term") {
    LProfile L(standard_pair());
    auto h = hotbang_smeared(L, 1000.0, Ordering::PsiBarPsi);
    double lead = 2 * kPi * L(0.0);
    CHECK(std::abs(h.value - lead) < 1e-6 * lead);
}

TEST_CASE("thermal excess agrees with the series minus the vacuum") {
    LProfile L(standard_pair());
    auto h = hotbang_smeared(L, 1.0, Ordering::PsiBarPsi);
    auto ex = thermal_excess(L, 1.0, 1e-10);
    double vac = 2 * kPi * L(0.0);
    CHECK(std::abs(h.value - vac - ex.value) < 1e-7 * h.scale);
}

TEST_CASE("log convexity") {
    std::vector<double> grid;
    for (int k = 1; k <= 19; ++k) grid.push_back(kPi * k / 20);
    auto r = log_convexity_check(standard_bump(), grid, 0.01);
    CHECK(r.verdict == Verdict::Pass);
    CHECK_FALSE(r.identically_zero);
    auto c = log_convexity_check(standard_bump().scaled(cplx(3.0, 1.0)), grid, 0.01);
    CHECK(c.verdict == r.verdict);
    CHECK(std::abs(c.worst_additive - r.worst_additive) < 1e-10);
    auto z = log_convexity_check(standard_bump().scaled(0.0), grid, 0.01);
    CHECK(z.identically_zero);
}

TEST_CASE("dilation with lambda fixed scales the expectation by s^5") {
    // K_{s beta}(s x, s y) = s^{-3} K_beta(x, y) and d^4x d^4y contributes s^8.
    auto f = standard_pair();
    const double lambda = 1.0;
    double base = hotbang_smeared(f, lambda, Ordering::PsiBarPsi).value;
    double up = hotbang_smeared(f.dilated(2.0), lambda, Ordering::PsiBarPsi).value;
    double exponent = std::log2(up / base);
    CHECK(std::abs(exponent - 5.0) < 1e-5);
    double down = hotbang_smeared(f.dilated(0.5), lambda, Ordering::PsiBarPsi).value;
    CHECK(std::abs(down - std::pow(0.5, exponent) * base) < 1e-6 * base);
}
