#include "hotbang/json_io.hpp"

#include <cmath>

namespace hb {

namespace {

const json& member(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
    return j.at(key);
}

double number(const json& j, const char* what) {
    if (!j.is_number()) throw ConfigError(std::string(what) + " must be a number");
    return j.get<double>();
}

int integer(const json& j, const char* what) {
    if (!j.is_number_integer()) throw ConfigError(std::string(what) + " must be an integer");
    return j.get<int>();
}

// Exactly one key naming the variant.
std::pair<std::string, const json*> tagged(const json& j, const char* what) {
    if (!j.is_object() || j.size() != 1) throw ConfigError(std::string(what) + " must be an object with one key");
    auto it = j.begin();
    return {it.key(), &it.value()};
}

json metric_value(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

}  // namespace

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx cplx_from_json(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (!j.is_array() || j.size() != 2) throw ConfigError("complex number must be [re, im]");
    return {number(j[0], "real part"), number(j[1], "imaginary part")};
}

json to_json(const FourVector& v) { return json::array({v[0], v[1], v[2], v[3]}); }

FourVector four_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4) throw ConfigError("four-vector must have 4 components");
    FourVector v;
    for (int i = 0; i < 4; ++i) v[i] = number(j[i], "four-vector component");
    return v;
}

json to_json(const Bump& b) {
    return {{"center", to_json(b.center)},
            {"half_widths", json::array({b.half_widths[0], b.half_widths[1], b.half_widths[2], b.half_widths[3]})},
            {"amplitude", json::array({to_json(b.amplitude[0]), to_json(b.amplitude[1])})},
            {"scale", to_json(b.scale)}};
}

Bump bump_from_json(const json& j) {
    Bump b;
    b.center = four_from_json(member(j, "center"));
    const auto& hw = member(j, "half_widths");
    if (!hw.is_array() || hw.size() != 4) throw ConfigError("half_widths must have 4 entries");
    for (int i = 0; i < 4; ++i) b.half_widths[i] = number(hw[i], "half width");
    if (j.contains("amplitude")) {
        const auto& a = j.at("amplitude");
        if (!a.is_array() || a.size() != 2) throw ConfigError("amplitude must have 2 components");
        b.amplitude = {cplx_from_json(a[0]), cplx_from_json(a[1])};
    }
    if (j.contains("scale")) b.scale = cplx_from_json(j.at("scale"));
    try {
        b.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return b;
}

json to_json(const TestFunction& f) {
    json t = json::array();
    for (const auto& b : f.terms()) t.push_back(to_json(b));
    return {{"terms", t}};
}

TestFunction testfn_from_json(const json& j) {
    const auto& t = member(j, "terms");
    if (!t.is_array()) throw ConfigError("terms must be an array");
    std::vector<Bump> terms;
    for (const auto& b : t) terms.push_back(bump_from_json(b));
    return TestFunction(std::move(terms));
}

json to_json(const StateSpec& s) {
    if (std::holds_alternative<Vacuum>(s)) return {{"vacuum", json::object()}};
    if (auto* k = std::get_if<Kms>(&s)) return {{"kms", {{"beta", to_json(k->beta)}}}};
    if (auto* m = std::get_if<Mixture>(&s)) {
        json atoms = json::array();
        for (const auto& a : m->atoms) atoms.push_back({{"w", a.weight}, {"beta", to_json(a.beta)}});
        return {{"mixture", {{"atoms", atoms}}}};
    }
    return {{"hotbang", {{"lambda", std::get<HotBang>(s).lambda}}}};
}

StateSpec state_from_json(const json& j) {
    auto [tag, body] = tagged(j, "state");
    StateSpec s;
    if (tag == "vacuum") {
        s = Vacuum{};
    } else if (tag == "kms") {
        s = Kms{four_from_json(member(*body, "beta"))};
    } else if (tag == "mixture") {
        Mixture m;
        const auto& atoms = member(*body, "atoms");
        if (!atoms.is_array()) throw ConfigError("mixture atoms must be an array");
        for (const auto& a : atoms) {
            const char* wkey = a.is_object() && a.contains("weight") ? "weight" : "w";
            m.atoms.push_back({number(member(a, wkey), "weight"), four_from_json(member(a, "beta"))});
        }
        s = m;
    } else if (tag == "hotbang") {
        s = HotBang{number(member(*body, "lambda"), "lambda")};
    } else {
        throw ConfigError("unknown state '" + tag + "'");
    }
    try {
        validate(s);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return s;
}

json to_json(const MacroObservable& xi) {
    if (std::holds_alternative<T2Obs>(xi)) return {{"t2", json::object()}};
    if (auto* e = std::get_if<EnergyObs>(&xi)) return {{"energy", {{"mu", e->mu}, {"nu", e->nu}}}};
    if (auto* s = std::get_if<EntropyObs>(&xi)) return {{"entropy", {{"mu", s->mu}}}};
    if (auto* p = std::get_if<PhaseSpaceObs>(&xi)) return {{"phasespace", {{"p", to_json(p->p)}}}};
    throw ConfigError("custom observables have no JSON form");
}

MacroObservable observable_from_json(const json& j) {
    auto [tag, body] = tagged(j, "observable");
    MacroObservable xi;
    if (tag == "t2")
        xi = T2Obs{};
    else if (tag == "energy")
        xi = EnergyObs{integer(member(*body, "mu"), "mu"), integer(member(*body, "nu"), "nu")};
    else if (tag == "entropy")
        xi = EntropyObs{integer(member(*body, "mu"), "mu")};
    else if (tag == "phasespace")
        xi = PhaseSpaceObs{four_from_json(member(*body, "p"))};
    else
        throw ConfigError("unknown observable '" + tag + "'");
    try {
        validate(xi);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return xi;
}

json to_json(const QuadConfig& q) {
    return {{"radial_order", q.radial_order}, {"cos_order", q.cos_order},
            {"azimuth_order", q.azimuth_order}, {"tol", q.tol},
            {"radial_scale", q.radial_scale},   {"self_check", q.self_check},
            {"refine", q.refine}};
}

QuadConfig quad_from_json(const json& j, QuadConfig q) {
    if (!j.is_object()) throw ConfigError("quad must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& k = it.key();
        const auto& v = it.value();
        if (k == "radial_order")
            q.radial_order = integer(v, "radial_order");
        else if (k == "cos_order")
            q.cos_order = integer(v, "cos_order");
        else if (k == "azimuth_order")
            q.azimuth_order = integer(v, "azimuth_order");
        else if (k == "tol")
            q.tol = number(v, "tol");
        else if (k == "radial_scale")
            q.radial_scale = number(v, "radial_scale");
        else if (k == "self_check" && v.is_boolean())
            q.self_check = v.get<bool>();
        else if (k == "refine" && v.is_boolean())
            q.refine = v.get<bool>();
        else
            throw ConfigError("bad quad key '" + k + "'");
    }
    try {
        q.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return q;
}

json to_json(const CheckReport& r) {
    json metrics = json::array();
    for (const auto& m : r.metrics) {
        json e{{"name", m.name}, {"value", metric_value(m.value)}};
        if (m.severity != Severity::Info) {
            e["tolerance"] = m.tolerance;
            e["severity"] = m.severity == Severity::Hard ? "hard" : "soft";
        }
        metrics.push_back(e);
    }
    json notes = json::object();
    for (const auto& [k, v] : r.notes) notes[k] = v;
    return {{"name", r.name},         {"inputs", r.inputs}, {"digest", r.digest},
            {"verdict", verdict_name(r.verdict)}, {"metrics", metrics}, {"notes", notes}};
}

}  // namespace hb
