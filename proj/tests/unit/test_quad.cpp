#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hotbang/quad.hpp"

using namespace hb;

TEST_CASE("shell integrals of radial examples") {
    QuadConfig q;
    auto e1 = shell_integrate<double>([](const std::array<double, 3>& p) {
        return std::exp(-std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]));
    }, q);
    CHECK(std::abs(e1.value - 2 * std::numbers::pi) < 1e-10);

    auto e2 = shell_integrate<double>([](const std::array<double, 3>& p) {
        return std::exp(-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]));
    }, q);
    CHECK(std::abs(e2.value - std::numbers::pi) < 1e-10);

    auto zero = shell_integrate<double>([](const std::array<double, 3>&) { return 0.0; }, q);
    CHECK(zero.value == 0.0);
}

TEST_CASE("odd integrand integrates to zero") {
    auto r = shell_integrate<double>([](const std::array<double, 3>& p) {
        return p[2] * std::exp(-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]));
    }, QuadConfig{});
    CHECK(std::abs(r.value) < 1e-14);
}

TEST_CASE("self check flags an unresolved integrand") {
    QuadConfig q;
    q.radial_order = 8;
    q.cos_order = 4;
    q.azimuth_order = 4;
    q.self_check = true;
    auto r = shell_integrate<double>([](const std::array<double, 3>& p) { return std::cos(40 * p[0]) / (1 + p[0] * p[0] * p[0] * p[0]); }, q);
    CHECK_FALSE(r.converged);
}

TEST_CASE("gauss legendre integrates polynomials exactly") {
    const auto& g = gauss_legendre(10);
    double s = 0;
    for (size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * std::pow(g.x[i], 18);
    CHECK(std::abs(s - 2.0 / 19) < 1e-14);
}

TEST_CASE("alternating sums") {
    auto ln2 = alternating_sum([](int n) { return (n % 2 ? -1.0 : 1.0) / (n + 1); }, 1e-4, 1000000);
    CHECK(std::abs(ln2.value - std::log(2.0)) <= ln2.error_bound);

    auto zeros = alternating_sum([](int) { return 0.0; }, 1e-12, 100);
    CHECK(zeros.value == 0.0);

    auto geo = alternating_sum([](int n) { return std::pow(-std::exp(-1.0), n); }, 1e-14, 1000);
    CHECK(std::abs(geo.value - 1.0 / (1.0 + std::exp(-1.0))) < 1e-12);

    auto br = bracketed_alternating_sum([](int n) { return (n % 2 ? -1.0 : 1.0) / (n + 1); }, 1e-4, 1000000);
    CHECK(std::abs(br.value - std::log(2.0)) <= br.error_bound);
}

TEST_CASE("alternating sum hitting max_n throws") {
    CHECK_THROWS_AS(alternating_sum([](int n) { return (n % 2 ? -1.0 : 1.0); }, 1e-8, 50), ConvergenceError);
}

TEST_CASE("finite differences") {
    auto sq = [](const std::vector<double>& x) { return x[0] * x[0]; };
    CHECK(std::abs(finite_difference(sq, {0.3}, {0, 0}, 0.01, 4) - 2.0) < 1e-8);

    auto lin = [](const std::vector<double>& x) { return 3 * x[0] - 2 * x[1]; };
    CHECK(std::abs(finite_difference(lin, {1, 2}, {1}, 0.1, 4) + 2.0) < 1e-12);

    // Box of 1/(beta, beta) vanishes away from the cone.
    auto inv = [](const std::vector<double>& b) { return 1.0 / (b[0] * b[0] - b[1] * b[1] - b[2] * b[2] - b[3] * b[3]); };
    std::vector<double> b{2, 0.3, 0.1, -0.2};
    const double h = 1e-2;
    double box = finite_difference(inv, b, {0, 0}, h, 4);
    for (int k = 1; k < 4; ++k) box -= finite_difference(inv, b, {k, k}, h, 4);
    CHECK(std::abs(box) < 1e-6);

    // Fourth-order convergence.
    auto s = [](const std::vector<double>& x) { return std::sin(x[0]); };
    double e1 = std::abs(finite_difference(s, {0.3}, {0}, 0.1, 4) - std::cos(0.3));
    double e2 = std::abs(finite_difference(s, {0.3}, {0}, 0.05, 4) - std::cos(0.3));
    CHECK(std::log2(e1 / e2) >= 3.5);
}

TEST_CASE("central stencil weights") {
    auto w = central_stencil(1, 2);
    REQUIRE(w.size() == 3);
    CHECK(std::abs(w[0] + 0.5) < 1e-15);
    CHECK(std::abs(w[1]) < 1e-15);
    CHECK(std::abs(w[2] - 0.5) < 1e-15);
}

TEST_CASE("extrapolate_limit examples") {
    std::vector<std::pair<double, double>> a, b, c;
    for (double h : {0.4, 0.2, 0.1, 0.05}) {
        a.push_back({h, 3 + h * h});
        b.push_back({h, 5.0});
        c.push_back({h, 1 + h * h + h * h * h * h});
    }
    auto ra = extrapolate_limit(a, ExtrapolationKind::RichardsonPoly);
    CHECK(std::abs(ra.limit - 3) < 1e-12);
    auto rb = extrapolate_limit(b, ExtrapolationKind::RichardsonPoly);
    CHECK(std::abs(rb.limit - 5) < 1e-14);
    auto rc = extrapolate_limit(c, ExtrapolationKind::RichardsonPoly);
    CHECK(std::abs(rc.limit - 1) < 1e-4);
}

TEST_CASE("refinement ladder ends at x4 radial") {
    QuadConfig q;
    auto levels = refinement_ladder(q);
    REQUIRE(levels.size() >= 3);
    CHECK(levels.back().radial_order == 4 * q.radial_order);
    for (size_t k = 1; k < levels.size(); ++k) CHECK(levels[k].radial_order > levels[k - 1].radial_order);
}

TEST_CASE("refined needs two agreements below the configured order") {
    QuadConfig q;
    auto levels = refinement_ladder(q);
    // Coarse levels agree once by chance, then the value moves.
    int calls = 0;
    auto r = refined<double>([&](const QuadConfig& c) {
        ++calls;
        if (c.radial_order <= levels[1].radial_order) return 1.0;
        return 2.0;
    }, q);
    CHECK(r.value == 2.0);
    CHECK(r.converged);
}

TEST_CASE("invalid configuration is rejected") {
    QuadConfig q;
    q.radial_order = 0;
    CHECK_THROWS(q.validate());
}

TEST_CASE("compensated sum") {
    CompensatedSum s;
    s.add(1e16);
    s.add(1.0);
    s.add(-1e16);
    CHECK(s.value() == 1.0);
}
