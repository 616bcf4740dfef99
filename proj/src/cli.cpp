#include "hotbang/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

namespace hb {

namespace {

constexpr double kPi = std::numbers::pi;

std::string csv_cell(double v) { return std::isfinite(v) ? fmt_double(v) : std::string("nan"); }

double positive_number(const json& j, const std::string& what) {
    if (!j.is_number()) throw ConfigError(what + " must be a number");
    double v = j.get<double>();
    if (!(v > 0) || !std::isfinite(v)) throw ConfigError(what + " must be positive");
    return v;
}

std::vector<FourVector> line_points(const json& j) {
    FourVector a = four_from_json(j.at("from")), b = four_from_json(j.at("to"));
    if (!j.contains("n") || !j.at("n").is_number_integer()) throw ConfigError("scan line needs an integer n");
    int n = j.at("n").get<int>();
    if (n < 0) throw ConfigError("scan line n must be >= 0");
    std::vector<FourVector> pts;
    for (int i = 0; i < n; ++i) {
        double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        pts.push_back(a + (b - a) * t);
    }
    return pts;
}

FourVector random_future_point(Rng& rng, double t_min, double t_max) {
    double t = rng.uniform(t_min, t_max);
    FourVector x{t, 0, 0, 0};
    for (int k = 1; k < 4; ++k) x[k] = rng.uniform(-0.3, 0.3) * t;
    return x;
}

FourVector random_null(Rng& rng) {
    double c = rng.uniform(-1.0, 1.0), ph = rng.uniform(0.0, 2.0 * kPi), e = rng.uniform(0.5, 2.0);
    double s = std::sqrt(1.0 - c * c);
    return {e, e * s * std::cos(ph), e * s * std::sin(ph), e * c};
}

ThermalIndex random_index(Rng& rng, int m) {
    ThermalIndex idx;
    for (int i = 0; i < m; ++i) idx.mu.push_back(static_cast<int>(rng.next() % 4));
    idx.nu = static_cast<int>(rng.next() % 4);
    return idx;
}

}  // namespace

double RunConfig::Verify::tolerance(const std::string& key) const {
    auto it = tolerances.find(key);
    if (it != tolerances.end()) return it->second;
    return default_verify_tolerances().at(key);
}

const std::vector<std::string>& verify_check_names() {
    static const std::vector<std::string> names{"convention", "thermal_coincidence", "transport", "pde",
                                                "thermal_wave", "symmetrization", "vacuum_limit", "weyl"};
    return names;
}

std::map<std::string, double> default_verify_tolerances() {
    return {{"convention", 1e-3}, {"coincidence", 1e-2}, {"transport", 1e-6}, {"pde", 1e-5},
            {"curl", 1e-8},       {"thermal_wave", 1e-5}, {"vacuum_ratio", 1e-3}, {"weyl", 1e-12}};
}

void RunConfig::validate() const {
    try {
        quad.validate();
        hb::validate(state);
        for (const auto& xi : scan.observables) hb::validate(xi);
        for (const auto& f : testfn.functions)
            for (const auto& b : f.terms()) b.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (testfn.kind != "random" && testfn.kind != "apex") throw ConfigError("testfn family must be random or apex");
    if (testfn.count < 0) throw ConfigError("testfn count must be >= 0");
    for (double l : positivity.lambdas)
        if (!(l > 0) || !std::isfinite(l)) throw ConfigError("positivity lambdas must be positive");
    if (!(positivity.series_tol > 0)) throw ConfigError("series_tol must be positive");
    if (!(positivity.residual_tol > 0)) throw ConfigError("residual_tol must be positive");
    for (const auto& c : verify.checks)
        if (std::find(verify_check_names().begin(), verify_check_names().end(), c) == verify_check_names().end())
            throw ConfigError("unknown verify check '" + c + "'");
    auto defaults = default_verify_tolerances();
    for (const auto& [k, v] : verify.tolerances) {
        if (!defaults.count(k)) throw ConfigError("unknown verify tolerance '" + k + "'");
        if (!(v > 0) || !std::isfinite(v)) throw ConfigError("verify tolerance '" + k + "' must be positive");
    }
}

json RunConfig::to_json() const {
    json fns = json::array();
    for (const auto& f : testfn.functions) fns.push_back(hb::to_json(f));
    json lam = json::array();
    for (double l : positivity.lambdas) lam.push_back(l);
    json pts = json::array();
    for (const auto& p : scan.points) pts.push_back(hb::to_json(p));
    json obs = json::array();
    for (const auto& o : scan.observables) obs.push_back(hb::to_json(o));
    json tol = json::object();
    for (const auto& [k, v] : verify.tolerances) tol[k] = v;
    return {{"seed", seed},
            {"quad", hb::to_json(quad)},
            {"state", hb::to_json(state)},
            {"testfn", {{"family", testfn.kind}, {"count", testfn.count}, {"functions", fns}}},
            {"positivity",
             {{"lambdas", lam}, {"series_tol", positivity.series_tol}, {"residual_tol", positivity.residual_tol}}},
            {"scan", {{"points", pts}, {"observables", obs}}},
            {"verify", {{"checks", verify.checks}, {"tolerances", tol}}}};
}

std::string RunConfig::digest() const { return fnv1a_hex(to_json().dump()); }

RunConfig run_config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig c;
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const auto& k = it.key();
            const auto& v = it.value();
            if (k == "seed") {
                if (!v.is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
                c.seed = v.get<std::uint64_t>();
            } else if (k == "quad") {
                c.quad = quad_from_json(v);
            } else if (k == "state") {
                c.state = state_from_json(v);
            } else if (k == "testfn") {
                for (auto t = v.begin(); t != v.end(); ++t) {
                    if (t.key() == "family" && t.value().is_string())
                        c.testfn.kind = t.value().get<std::string>();
                    else if (t.key() == "count" && t.value().is_number_integer())
                        c.testfn.count = t.value().get<int>();
                    else if (t.key() == "functions" && t.value().is_array())
                        for (const auto& f : t.value()) c.testfn.functions.push_back(testfn_from_json(f));
                    else
                        throw ConfigError("bad testfn key '" + t.key() + "'");
                }
            } else if (k == "positivity") {
                for (auto t = v.begin(); t != v.end(); ++t) {
                    if (t.key() == "lambdas" && t.value().is_array()) {
                        c.positivity.lambdas.clear();
                        for (const auto& l : t.value()) {
                            if (!l.is_number()) throw ConfigError("lambda must be a number");
                            c.positivity.lambdas.push_back(l.get<double>());
                        }
                    } else if (t.key() == "series_tol") {
                        c.positivity.series_tol = positive_number(t.value(), "series_tol");
                    } else if (t.key() == "residual_tol") {
                        c.positivity.residual_tol = positive_number(t.value(), "residual_tol");
                    } else {
                        throw ConfigError("bad positivity key '" + t.key() + "'");
                    }
                }
            } else if (k == "scan") {
                for (auto t = v.begin(); t != v.end(); ++t) {
                    if (t.key() == "points" && t.value().is_array()) {
                        for (const auto& p : t.value()) c.scan.points.push_back(four_from_json(p));
                    } else if (t.key() == "line") {
                        for (const auto& p : line_points(t.value())) c.scan.points.push_back(p);
                    } else if (t.key() == "observables" && t.value().is_array()) {
                        c.scan.observables.clear();
                        for (const auto& o : t.value()) c.scan.observables.push_back(observable_from_json(o));
                    } else {
                        throw ConfigError("bad scan key '" + t.key() + "'");
                    }
                }
            } else if (k == "verify") {
                for (auto t = v.begin(); t != v.end(); ++t) {
                    if (t.key() == "checks" && t.value().is_array()) {
                        for (const auto& n : t.value()) {
                            if (!n.is_string()) throw ConfigError("check names must be strings");
                            c.verify.checks.push_back(n.get<std::string>());
                        }
                    } else if (t.key() == "tolerances" && t.value().is_object()) {
                        for (auto q = t.value().begin(); q != t.value().end(); ++q) {
                            if (!q.value().is_number()) throw ConfigError("tolerance must be a number");
                            c.verify.tolerances[q.key()] = q.value().get<double>();
                        }
                    } else {
                        throw ConfigError("bad verify key '" + t.key() + "'");
                    }
                }
            } else {
                throw ConfigError("unknown config key '" + k + "'");
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(e.what());
    }
    c.validate();
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return run_config_from_json(j);
}

std::uint64_t family_seed(const RunConfig& cfg, int i) { return cfg.seed * 1000003ULL + static_cast<std::uint64_t>(i); }

TestFunction family_member(const RunConfig& cfg, int i) {
    if (!cfg.testfn.functions.empty()) return cfg.testfn.functions.at(i);
    return random_test_function(family_seed(cfg, i), cfg.testfn.kind == "apex" ? apex_family() : BumpFamily{});
}

int command_positivity(const RunConfig& cfg, std::ostream& csv) {
    csv << "# config " << cfg.digest() << "\n";
    csv << "seed,lambda,ordering,value,tail_bound,anticommutator,ordering_sum_residual\n";
    const int n = cfg.testfn.functions.empty() ? cfg.testfn.count : static_cast<int>(cfg.testfn.functions.size());
    EvalOptions opt;
    opt.quad = cfg.quad;
    opt.series_tol = cfg.positivity.series_tol;
    bool ok = true;
    for (int i = 0; i < n; ++i) {
        TestFunction f = family_member(cfg, i);
        const std::uint64_t seed = cfg.testfn.functions.empty() ? family_seed(cfg, i) : static_cast<std::uint64_t>(i);
        LProfile L(f, cfg.quad);
        const TestFunction fbar = f.conjugate();
        const double ac = f.is_zero() ? 0.0 : anticommutator(f, fbar, cfg.quad).value.real();
        for (double lambda : cfg.positivity.lambdas) {
            auto a = hotbang_smeared(L, lambda, Ordering::PsiBarPsi, opt);
            auto b = hotbang_smeared(L, lambda, Ordering::PsiPsiBar, opt);
            double res = ac != 0.0 ? std::abs(a.value + b.value - ac) / std::abs(ac) : std::abs(a.value + b.value);
            if (!(res < cfg.positivity.residual_tol)) ok = false;
            for (const auto* v : {&a, &b}) {
                if (!(v->value >= -v->tail_bound)) ok = false;
                csv << seed << "," << csv_cell(lambda) << "," << (v == &a ? "psibar_psi" : "psi_psibar") << ","
                    << csv_cell(v->value) << "," << csv_cell(v->tail_bound) << "," << csv_cell(ac) << ","
                    << csv_cell(res) << "\n";
            }
        }
    }
    return ok ? kExitPass : kExitFail;
}

int command_scan(const RunConfig& cfg, std::ostream& csv) {
    csv << "# config " << cfg.digest() << "\n";
    csv << "x0,x1,x2,x3,observable,value\n";
    for (const auto& x : cfg.scan.points)
        for (const auto& xi : cfg.scan.observables) {
            double v = macro_expectation(cfg.state, xi, x);
            csv << csv_cell(x[0]) << "," << csv_cell(x[1]) << "," << csv_cell(x[2]) << "," << csv_cell(x[3]) << ","
                << observable_name(xi) << "," << csv_cell(v) << "\n";
        }
    return kExitPass;
}

VerifyOutput run_verify(const RunConfig& cfg, const std::string& filter) {
    VerifyOutput out;
    const auto& V = cfg.verify;
    auto selected = [&](const std::string& name) {
        if (!V.checks.empty() && std::find(V.checks.begin(), V.checks.end(), name) == V.checks.end()) return false;
        return filter.empty() || name.find(filter) != std::string::npos;
    };
    auto add = [&](CheckReport r, const std::string& group) {
        r.name = group + "/" + r.name;
        out.reports.push_back(std::move(r));
    };
    // One stream per check group, so filtered runs reproduce the full run.
    auto stream = [&](std::uint64_t group) { return Rng(cfg.seed * 1000003ULL + group); };

    if (selected("convention")) add(convention_oracle(V.tolerance("convention")).report, "convention");

    if (selected("thermal_coincidence")) {
        CoincidenceOptions co;
        co.tolerance = V.tolerance("coincidence");
        const std::vector<FourVector> xs{{1.0, 0.0, 0.0, 0.0}, {2.0, 0.3, 0.0, 0.1}, {1.5, -0.2, 0.4, 0.3}};
        for (double lambda : {0.5, 1.0})
            for (const auto& x : xs)
                for (const ThermalIndex& idx : {ThermalIndex{{0}, 0}, ThermalIndex{{3}, 3}, ThermalIndex{{0}, 3}})
                    add(thermal_coincidence(lambda, x, idx, co), "thermal_coincidence");
        add(thermal_coincidence(0.5, {1.0, 0.0, 0.0, 0.0}, {{0, 0}, 0}, co), "thermal_coincidence");
    }

    if (selected("transport")) {
        Rng rng = stream(1);
        for (int i = 0; i < 10; ++i) {
            FourVector x = random_future_point(rng, 0.5, 3.0);
            FourVector p = random_null(rng);
            add(transport_residual(HotBang{1.0}, x, p, 1e-3, V.tolerance("transport")), "transport");
        }
        Mixture m{{{0.5, {1.0, 0.0, 0.0, 0.0}}, {0.5, {2.0, 0.5, 0.0, 0.0}}}};
        add(transport_residual(m, {1.0, 0.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 1.0}, 1e-3, V.tolerance("transport")),
            "transport");
    }

    if (selected("pde")) {
        Rng rng = stream(2);
        const double tol = V.tolerance("pde"), ctol = V.tolerance("curl");
        for (int i = 0; i < 2; ++i) {
            FourVector x = random_future_point(rng, 1.0, 2.0);
            add(pde_residuals(HotBang{0.5}, T2Obs{}, x, 1e-2, tol, ctol), "pde");
            add(pde_residuals(HotBang{0.5}, EnergyObs{0, 0}, x, 1e-2, tol, ctol), "pde");
        }
        Mixture m{{{0.25, {1.0, 0.0, 0.0, 0.0}}, {0.75, {1.5, 0.2, -0.1, 0.3}}}};
        add(pde_residuals(m, T2Obs{}, {1.0, 0.1, 0.0, 0.0}, 1e-2, tol, ctol), "pde");
        add(pde_residuals(HotBang{0.5}, EntropyObs{0}, {1.5, 0.2, 0.1, 0.0}, 1e-2, tol, ctol), "pde");
    }

    if (selected("thermal_wave")) {
        Rng rng = stream(3);
        for (int m : {1, 3})
            for (int i = 0; i < 10; ++i) {
                FourVector beta = random_future_point(rng, 0.8, 2.0);
                add(thermal_wave_residual(random_index(rng, m), beta, V.tolerance("thermal_wave")), "thermal_wave");
            }
    }

    if (selected("symmetrization")) {
        Rng rng = stream(4);
        FourVector beta = random_future_point(rng, 0.8, 2.0);
        add(symmetrization_check({{0}, 1}, beta), "symmetrization");
        add(symmetrization_check(random_index(rng, 3), beta), "symmetrization");
        add(symmetrization_check({{1, 2}, 3}, beta), "symmetrization");
    }

    if (selected("vacuum_limit")) {
        VacuumLimitOptions vo;
        vo.quad = cfg.quad;
        vo.ratio_tol = V.tolerance("vacuum_ratio");
        TestFunction f = random_test_function(cfg.seed, apex_family());
        add(vacuum_limit(f, 1.0, {1.0, 0.0, 0.0, 0.0}, {1.0, 2.0, 4.0, 8.0}, vo), "vacuum_limit");
    }

    if (selected("weyl")) {
        TestFunction f = random_test_function(cfg.seed * 7 + 1), g = random_test_function(cfg.seed * 7 + 2);
        EvalOptions eo;
        eo.quad = cfg.quad;
        const std::vector<StateSpec> states{Vacuum{}, Kms{{1.0, 0.2, 0.0, -0.1}},
                                            Mixture{{{0.5, {1.0, 0.0, 0.0, 0.0}}, {0.5, {2.0, 0.0, 0.5, 0.0}}}},
                                            HotBang{1.0}};
        for (const auto& s : states) add(weyl_report(s, f, g, eo, V.tolerance("weyl")), "weyl");
    }

    for (const auto& r : out.reports)
        if (r.verdict == Verdict::Fail) out.exit_code = kExitFail;
    return out;
}

void write_verify(const RunConfig& cfg, const VerifyOutput& out, std::ostream& json_out, std::ostream& csv) {
    json reports = json::array();
    for (const auto& r : out.reports) reports.push_back(to_json(r));
    int fails = 0, warns = 0;
    for (const auto& r : out.reports) {
        fails += r.verdict == Verdict::Fail;
        warns += r.verdict == Verdict::Warn;
    }
    json j{{"config_digest", cfg.digest()},
           {"summary", {{"reports", out.reports.size()}, {"fail", fails}, {"warn", warns}}},
           {"reports", reports}};
    json_out << j.dump(2) << "\n";

    csv << "# config " << cfg.digest() << "\n";
    csv << "check,inputs_digest,metric,value,tolerance,verdict\n";
    for (const auto& r : out.reports)
        for (const auto& m : r.metrics) {
            csv << r.name << "," << r.digest << "," << m.name << "," << csv_cell(m.value) << ","
                << (m.severity == Severity::Info ? std::string() : csv_cell(m.tolerance)) << ","
                << verdict_name(r.verdict) << "\n";
        }
}

int cli_main(int argc, char** argv) {
    CLI::App app{"Hot Bang state numerics: positivity, scans and verification"};
    std::string config_path, out_dir = ".", command, filter;
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "JSON run configuration");
    auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--command", command, "positivity | scan | verify")
        ->required()
        ->check(CLI::IsMember({"positivity", "scan", "verify"}));
    app.add_option("--filter", filter, "run only verify checks whose name contains this");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitPass : kExitConfig;
    }

    RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = load_run_config(config_path);
        if (*seed_opt) cfg.seed = seed;
        std::filesystem::create_directories(out_dir);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    const std::filesystem::path dir(out_dir);
    try {
        if (command == "positivity") {
            std::ofstream csv(dir / "positivity.csv");
            int rc = command_positivity(cfg, csv);
            std::cout << "positivity: " << (rc == kExitPass ? "pass" : "fail") << "\n";
            return rc;
        }
        if (command == "scan") {
            std::ofstream csv(dir / "scan.csv");
            return command_scan(cfg, csv);
        }
        auto out = run_verify(cfg, filter);
        std::ofstream js(dir / "verify.json"), csv(dir / "verify.csv");
        write_verify(cfg, out, js, csv);
        for (const auto& r : out.reports) std::cout << verdict_name(r.verdict) << "  " << r.name << "  " << r.inputs << "\n";
        return out.exit_code;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace hb
