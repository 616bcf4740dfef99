#include <doctest.h>

#include "hotbang/json_io.hpp"

using namespace hb;

TEST_CASE("complex and vector round trips") {
    cplx z(1.5, -0.25);
    CHECK(cplx_from_json(to_json(z)) == z);
    FourVector v{1, 2, 3, 4};
    CHECK(four_from_json(to_json(v)) == v);
    CHECK_THROWS_AS(four_from_json(json::array({1, 2, 3})), ConfigError);
    CHECK(cplx_from_json(json(1.0)) == cplx(1.0));
    CHECK_THROWS_AS(cplx_from_json(json::array({1.0})), ConfigError);
}

TEST_CASE("test function round trip") {
    auto f = standard_pair().translated({0.1, 0, 0, 0});
    auto g = testfn_from_json(to_json(f));
    REQUIRE(g.terms().size() == f.terms().size());
    for (const FourVector& x : {FourVector{2.1, 0, 0.1, 0}, FourVector{2.5, 0.2, 0, 0}}) {
        auto a = f.evaluate(x), b = g.evaluate(x);
        CHECK(a[0] == b[0]);
        CHECK(a[1] == b[1]);
    }
    CHECK_THROWS_AS(bump_from_json(json::parse(R"({"center":[0.5,0,0,0],"half_widths":[0.5,0.5,0.5,0.5]})")),
                    ConfigError);
}

TEST_CASE("state round trips") {
    for (const StateSpec& s : {StateSpec{Vacuum{}}, StateSpec{Kms{{1, 0.2, 0, 0}}}, StateSpec{HotBang{0.5}},
                               StateSpec{Mixture{{{0.25, {1, 0, 0, 0}}, {0.75, {2, 0, 0, 0}}}}}}) {
        CHECK(to_json(state_from_json(to_json(s))) == to_json(s));
    }
    auto m = state_from_json(json::parse(R"({"mixture":{"atoms":[{"weight":1.0,"beta":[1,0,0,0]}]}})"));
    CHECK(std::holds_alternative<Mixture>(m));
    CHECK_THROWS_AS(state_from_json(json::parse(R"({"kms":{"beta":[1,2,0,0]}})")), ConfigError);
    CHECK_THROWS_AS(state_from_json(json::parse(R"({"thermal":{}})")), ConfigError);
    CHECK_THROWS_AS(state_from_json(json::parse(R"({"hotbang":{"lambda":-1}})")), ConfigError);
}

TEST_CASE("observable round trips") {
    for (const MacroObservable& o : {MacroObservable{T2Obs{}}, MacroObservable{EnergyObs{1, 2}},
                                     MacroObservable{EntropyObs{3}}, MacroObservable{PhaseSpaceObs{{1, 1, 0, 0}}}})
        CHECK(to_json(observable_from_json(to_json(o))) == to_json(o));
    CHECK_THROWS_AS(observable_from_json(json::parse(R"({"energy":{"mu":5,"nu":0}})")), ConfigError);
    CHECK_THROWS_AS(to_json(MacroObservable{CustomObs{"c", [](const FourVector&) { return 0.0; }}}), ConfigError);
}

TEST_CASE("quad config keeps defaults for missing keys") {
    QuadConfig base;
    auto q = quad_from_json(json::parse(R"({"radial_order":40})"));
    CHECK(q.radial_order == 40);
    CHECK(q.cos_order == base.cos_order);
    CHECK(quad_from_json(to_json(q)).radial_order == 40);
    CHECK_THROWS_AS(quad_from_json(json::parse(R"({"radial_order":0})")), ConfigError);
    CHECK_THROWS_AS(quad_from_json(json::parse(R"({"bogus":1})")), ConfigError);
}

TEST_CASE("check report json") {
    CheckReport r;
    r.name = "x";
    r.set_inputs("in");
    r.check("m", 0.5, 1.0);
    r.finalize();
    auto j = to_json(r);
    CHECK(j["name"] == "x");
    CHECK(j["digest"] == fnv1a_hex("in"));
    CHECK(j["verdict"] == "pass");
}
