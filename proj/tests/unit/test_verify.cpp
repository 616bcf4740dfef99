#include <doctest.h>

#include <cmath>
#include <limits>

#include "hotbang/verify.hpp"

using namespace hb;

namespace {

double metric(const CheckReport& r, const std::string& name) {
    for (const auto& m : r.metrics)
        if (m.name == name) return m.value;
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

TEST_CASE("fnv1a digests") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("shortest round-trip formatting") {
    CHECK(fmt_double(0.1) == "0.1");
    CHECK(std::stod(fmt_double(1.0 / 3)) == 1.0 / 3);
    CHECK(fmt_vector({1, 0, 0.5, -2}) == "(1,0,0.5,-2)");
}

TEST_CASE("report verdicts") {
    CheckReport a;
    a.check("x", 1e-9, 1e-8);
    a.info("y", 42);
    a.finalize();
    CHECK(a.verdict == Verdict::Pass);

    CheckReport b;
    b.check("x", 1e-7, 1e-8, Severity::Soft);
    b.finalize();
    CHECK(b.verdict == Verdict::Warn);

    CheckReport c;
    c.check("x", 1e-7, 1e-8, Severity::Soft);
    c.check("z", 2.0, 1.0);
    c.finalize();
    CHECK(c.verdict == Verdict::Fail);

    CheckReport d;
    d.check("x", std::numeric_limits<double>::quiet_NaN(), 1.0);
    d.finalize();
    CHECK(d.verdict == Verdict::Fail);

    CheckReport e;
    e.set_inputs("abc");
    CHECK(e.digest == fnv1a_hex("abc"));
}

TEST_CASE("transport residual of a kms state and a hot bang state") {
    FourVector x{2, 0.1, 0, 0}, p{1, 0, 0.6, 0.8};
    auto h = transport_residual(HotBang{0.5}, x, p);
    CHECK(h.verdict == Verdict::Pass);
    auto k = transport_residual(Kms{{1, 0.2, 0, 0}}, x, p);
    CHECK(k.verdict == Verdict::Pass);
    auto m = transport_residual(Mixture{{{0.5, {1, 0, 0, 0}}, {0.5, {2, 0.3, 0, 0}}}}, x, p);
    CHECK(m.verdict == Verdict::Pass);
    CHECK(metric(m, "normalized_residual") == 0.0);
}

TEST_CASE("pde residuals") {
    FourVector x{2, 0.3, -0.1, 0.2};
    for (const MacroObservable& xi : {MacroObservable{T2Obs{}}, MacroObservable{EnergyObs{0, 1}},
                                      MacroObservable{PhaseSpaceObs{{1, 0, 0, 1}}}}) {
        auto r = pde_residuals(HotBang{0.7}, xi, x);
        CHECK(r.verdict == Verdict::Pass);
    }
    auto m = pde_residuals(Mixture{{{0.4, {1, 0, 0, 0}}, {0.6, {2, 0, 0, 0}}}}, T2Obs{}, x);
    CHECK(m.verdict == Verdict::Pass);
    for (const auto& mt : m.metrics)
        if (mt.severity != Severity::Info) CHECK(mt.value == 0.0);
}

TEST_CASE("thermal wave residual") {
    auto r = thermal_wave_residual({{0, 1}, 2}, {1.5, 0.2, 0.1, 0});
    CHECK(r.verdict == Verdict::Pass);
}

TEST_CASE("symmetrization") {
    auto r = symmetrization_check({{1, 2}, 3}, {1.2, 0.1, 0, 0.2});
    CHECK(r.verdict == Verdict::Pass);
    auto s = symmetrization_check({{0}, 0}, {1, 0, 0, 0});
    CHECK(s.verdict == Verdict::Pass);
}

TEST_CASE("vacuum limit decreases along a future direction") {
    auto r = vacuum_limit(standard_pair(), 1.0, {1, 0, 0, 0}, {1, 2, 4, 8, 16, 32});
    CHECK(r.verdict == Verdict::Pass);
    CHECK(metric(r, "monotone_violations") == 0.0);
}

TEST_CASE("weyl report") {
    auto r = weyl_report(Kms{{1, 0, 0, 0}}, standard_pair(), random_test_function(3));
    CHECK(r.verdict == Verdict::Pass);
}

TEST_CASE("reports are deterministic") {
    auto a = symmetrization_check({{1}, 2}, {1.3, 0, 0.2, 0});
    auto b = symmetrization_check({{1}, 2}, {1.3, 0, 0.2, 0});
    CHECK(a.digest == b.digest);
    REQUIRE(a.metrics.size() == b.metrics.size());
    for (size_t k = 0; k < a.metrics.size(); ++k) CHECK(a.metrics[k].value == b.metrics[k].value);
}

TEST_CASE("thermal coincidence at m = 1 and the even m = 2 case") {
    auto r = thermal_coincidence(0.5, {1, 0, 0, 0}, {{0}, 0});
    CHECK(r.verdict == Verdict::Pass);
    auto e = thermal_coincidence(0.5, {1.2, 0.1, 0, 0}, {{0, 1}, 2});
    CHECK(e.verdict == Verdict::Pass);
}
