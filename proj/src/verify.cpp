#include "hotbang/verify.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

namespace hb {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> as_vec(const FourVector& v) { return {v[0], v[1], v[2], v[3]}; }
FourVector as_four(const std::vector<double>& v) { return {v[0], v[1], v[2], v[3]}; }

double euclid(const std::array<double, 4>& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
}

}  // namespace

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string fmt_double(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string fmt_vector(const FourVector& v) {
    return "(" + fmt_double(v[0]) + "," + fmt_double(v[1]) + "," + fmt_double(v[2]) + "," + fmt_double(v[3]) + ")";
}

void CheckReport::check(const std::string& metric, double value, double tol, Severity s) {
    metrics.push_back({metric, value, tol, s});
}

void CheckReport::info(const std::string& metric, double value) {
    metrics.push_back({metric, value, kNaN, Severity::Info});
}

void CheckReport::note(const std::string& key, const std::string& value) { notes.emplace_back(key, value); }

void CheckReport::set_inputs(std::string text) {
    inputs = std::move(text);
    digest = fnv1a_hex(inputs);
}

void CheckReport::finalize() {
    verdict = Verdict::Pass;
    for (const auto& m : metrics) {
        if (m.severity == Severity::Info) continue;
        bool ok = std::isfinite(m.value) && m.value <= m.tolerance;
        if (ok) continue;
        if (m.severity == Severity::Hard) {
            verdict = Verdict::Fail;
            return;
        }
        verdict = Verdict::Warn;
    }
}

PointSplitRatio reference_normalization(int m, BernoulliConvention c) {
    if (m % 2 == 0) return {};
    static std::mutex mu;
    static std::map<std::pair<int, int>, PointSplitRatio> cache;
    std::lock_guard lock(mu);
    auto key = std::make_pair(m, static_cast<int>(c));
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const FourVector beta{1.0, 0.0, 0.0, 0.0};
    ThermalIndex idx{std::vector<int>(m, 0), 0};
    auto ps = point_split_expectation(Kms{beta}, {}, idx);
    cplx tf = thermal_function(idx, beta, c);
    PointSplitRatio r;
    if (tf != 0.0) {
        r.ratio = (ps.value / tf).real();
        r.uncertainty = ps.uncertainty / std::abs(tf);
    }
    cache.emplace(key, r);
    return r;
}

CheckReport thermal_coincidence(double lambda, const FourVector& x, const ThermalIndex& idx,
                                const CoincidenceOptions& opt) {
    CheckReport rep;
    rep.name = "thermal_coincidence";
    rep.set_inputs("lambda=" + fmt_double(lambda) + ";x=" + fmt_vector(x) + ";idx=" + idx.label() +
                   ";tol=" + fmt_double(opt.tolerance));
    const StateSpec state = HotBang{lambda};
    validate(state);
    idx.validate();
    if (!is_timelike_future(x)) throw std::invalid_argument("thermal coincidence needs x in the forward cone");
    const FourVector beta = x * (2.0 * lambda);
    const double bb = mink_product(beta, beta);
    try {
        auto ps = point_split_expectation(state, x, idx, opt.split);
        rep.info("point_split_im", ps.value.imag());
        rep.info("uncertainty", ps.uncertainty);
        if (idx.m() % 2 == 1) {
            auto K = reference_normalization(idx.m());
            cplx tf = thermal_function(idx, beta);
            cplx ref = thermal_function({std::vector<int>(idx.m(), 0), 0}, beta);
            double scale = std::max(std::abs(K.ratio * tf), std::abs(K.ratio * ref));
            double res = std::abs(ps.value - K.ratio * tf) / scale;
            rep.info("thermal_function_im", tf.imag());
            rep.info("normalization", K.ratio);
            if (tf != 0.0) rep.info("raw_ratio", (ps.value / tf).real());
            rep.info("relative_uncertainty", ps.uncertainty / scale);
            rep.check("relative_residual", res, opt.tolerance);
        } else {
            // Zero within the extrapolation uncertainty (plus a floor at the thermal scale).
            double floor = 1e-10 * std::pow(bb, -0.5 * (idx.m() + 3));
            rep.check("even_value_over_uncertainty", std::abs(ps.value) / (3.0 * ps.uncertainty + floor), 1.0);
        }
    } catch (const std::exception& e) {
        rep.note("error", e.what());
        rep.check("evaluated", 1.0, 0.0);
    }
    rep.finalize();
    return rep;
}

CheckReport transport_residual(const StateSpec& state, const FourVector& x, const FourVector& p, double step,
                               double tol) {
    CheckReport rep;
    rep.name = "transport";
    rep.set_inputs("state=" + state_name(state) + ";x=" + fmt_vector(x) + ";p=" + fmt_vector(p) +
                   ";step=" + fmt_double(step));
    const MacroObservable np = PhaseSpaceObs{p};
    validate(np);
    auto g = [&](const std::vector<double>& v) { return macro_expectation(state, np, as_four(v)); };
    std::array<double, 4> grad{};
    double raw = 0;
    for (int mu = 0; mu < 4; ++mu) {
        grad[mu] = finite_difference(g, as_vec(x), {mu}, step, 4);
        raw += p[mu] * grad[mu];
    }
    double norm = euclid(grad) * euclid({p[0], p[1], p[2], p[3]});
    rep.info("raw", raw);
    rep.info("gradient_norm", euclid(grad));
    rep.check("normalized_residual", norm > 0 ? std::abs(raw) / norm : std::abs(raw), tol);
    rep.finalize();
    return rep;
}

CheckReport pde_residuals(const StateSpec& state, const MacroObservable& xi, const FourVector& x, double rel_step,
                          double tol, double curl_tol) {
    CheckReport rep;
    rep.name = "pde";
    rep.set_inputs("state=" + state_name(state) + ";xi=" + observable_name(xi) + ";x=" + fmt_vector(x) +
                   ";rel_step=" + fmt_double(rel_step));
    validate(xi);
    const double xx = mink_product(x, x);
    const double h = rel_step * (xx > 0 ? std::sqrt(xx) : std::max(1.0, euclid({x[0], x[1], x[2], x[3]})));

    // Admissibility on the temperatures this state actually sees at x.
    std::vector<FourVector> seen;
    if (auto* k = std::get_if<Kms>(&state)) seen.push_back(k->beta);
    if (auto* m = std::get_if<Mixture>(&state))
        for (const auto& a : m->atoms) seen.push_back(a.beta);
    if (auto* hb = std::get_if<HotBang>(&state)) seen.push_back(x * (2.0 * hb->lambda));
    auto adm = wave_admissibility(xi, seen);
    rep.info("admissibility_residual", adm.worst_residual);
    const Severity sev = adm.admissible ? Severity::Hard : Severity::Soft;
    if (!adm.admissible) rep.note("admissibility", "observable fails the wave equation in beta");

    auto g = [&](const std::vector<double>& v) { return macro_expectation(state, xi, as_four(v)); };
    double box = 0, box_norm = 0;
    for (int mu = 0; mu < 4; ++mu) {
        double d2 = finite_difference(g, as_vec(x), {mu, mu}, h, 4);
        box += kMetric[mu] * d2;
        box_norm += std::abs(d2);
    }
    rep.info("wave_raw", box);
    rep.check("wave", box_norm > 0 ? std::abs(box) / box_norm : std::abs(box), tol, sev);

    // One fixed inner step; for the Hot Bang it equals the outer step seen
    // through beta = 2 lambda x, so the nested stencils commute.
    double hbeta = 0;
    if (auto* hb = std::get_if<HotBang>(&state))
        hbeta = 2.0 * hb->lambda * h;
    else if (!seen.empty())
        hbeta = rel_step * std::sqrt(mink_product(seen.front(), seen.front()));
    auto dxi = [&](int nu) -> MacroObservable {
        return CustomObs{"d" + std::to_string(nu), [xi, nu, hb = hbeta](const FourVector& b) {
                             auto f = [&](const std::vector<double>& v) { return builtin_macro(xi, as_four(v)); };
                             return finite_difference(f, as_vec(b), {nu}, hb, 4);
                         }};
    };
    std::array<MacroObservable, 4> dx{dxi(0), dxi(1), dxi(2), dxi(3)};
    // D[mu][nu] = d_mu omega(d_nu xi)
    std::array<std::array<double, 4>, 4> D{};
    for (int nu = 0; nu < 4; ++nu) {
        auto G = [&](const std::vector<double>& v) { return macro_expectation(state, dx[nu], as_four(v)); };
        for (int mu = 0; mu < 4; ++mu) D[mu][nu] = finite_difference(G, as_vec(x), {mu}, h, 4);
    }
    double div = 0, div_norm = 0;
    for (int mu = 0; mu < 4; ++mu) {
        div += kMetric[mu] * D[mu][mu];
        div_norm += std::abs(D[mu][mu]);
    }
    rep.info("divergence_raw", div);
    rep.check("divergence", div_norm > 0 ? std::abs(div) / div_norm : std::abs(div), tol, sev);
    double curl = 0;
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = mu + 1; nu < 4; ++nu) {
            double a = D[mu][nu], b = D[nu][mu];
            double den = std::abs(a) + std::abs(b);
            curl = std::max(curl, den > 0 ? std::abs(a - b) / den : std::abs(a - b));
        }
    rep.check("curl", curl, curl_tol);
    rep.finalize();
    return rep;
}

CheckReport thermal_wave_residual(const ThermalIndex& idx, const FourVector& beta, double tol) {
    CheckReport rep;
    rep.name = "thermal_wave";
    rep.set_inputs("idx=" + idx.label() + ";beta=" + fmt_vector(beta));
    const double h = 1e-2 * std::sqrt(mink_product(beta, beta));
    auto g = [&](const std::vector<double>& v) { return thermal_function(idx, as_four(v)).imag(); };
    double box = 0, norm = 0;
    for (int mu = 0; mu < 4; ++mu) {
        double d2 = finite_difference(g, as_vec(beta), {mu, mu}, h, 4);
        box += kMetric[mu] * d2;
        norm += std::abs(d2);
    }
    rep.info("raw", box);
    rep.check("normalized_residual", norm > 0 ? std::abs(box) / norm : std::abs(box), tol);
    rep.finalize();
    return rep;
}

CheckReport vacuum_limit(const TestFunction& f, double lambda, const FourVector& a, const std::vector<double>& t_grid,
                         const VacuumLimitOptions& opt) {
    CheckReport rep;
    rep.name = "vacuum_limit";
    std::ostringstream in;
    in << "lambda=" << fmt_double(lambda) << ";a=" << fmt_vector(a) << ";t=";
    for (double t : t_grid) in << fmt_double(t) << ",";
    in << ";f=";
    for (const auto& b : f.terms()) in << fmt_vector(b.center) << fmt_vector(FourVector{b.half_widths[0], b.half_widths[1], b.half_widths[2], b.half_widths[3]});
    rep.set_inputs(in.str());
    if (!is_timelike_future(a)) throw std::invalid_argument("vacuum limit needs a timelike future direction");
    if (t_grid.size() < 2) throw std::invalid_argument("vacuum limit needs at least two translation times");
    std::vector<double> d;
    double worst_precision = 0;
    try {
        for (double t : t_grid) {
            LProfile L(f.translated(a * t), opt.quad);
            auto r = thermal_excess(L, lambda, opt.series_rel_tol);
            double v = std::abs(r.value);
            d.push_back(v);
            rep.info("d(" + fmt_double(t) + ")", v);
            worst_precision = std::max(worst_precision, v > 0 ? (r.tail_bound + r.quad_error) / v : 1.0);
        }
    } catch (const std::exception& e) {
        rep.note("error", e.what());
        rep.check("evaluated", 1.0, 0.0);
        rep.finalize();
        return rep;
    }
    int violations = 0;
    for (size_t i = 1; i < d.size(); ++i)
        if (!(d[i] < d[i - 1])) ++violations;
    rep.check("monotone_violations", violations, 0.0);
    rep.check("decay_ratio", d.front() > 0 ? d.back() / d.front() : kNaN, opt.ratio_tol);
    rep.check("relative_precision", worst_precision, 0.1, Severity::Soft);
    rep.finalize();
    return rep;
}

CheckReport symmetrization_check(const ThermalIndex& idx, const FourVector& beta) {
    CheckReport rep;
    rep.name = "symmetrization";
    rep.set_inputs("idx=" + idx.label() + ";beta=" + fmt_vector(beta));
    const auto base = inverse_square_derivative(idx.all());
    const cplx L = thermal_function(idx, beta);
    int mismatched = 0;
    double antisym = 0;
    auto perms = index_permutations(idx);
    for (const auto& p : perms) {
        if (inverse_square_derivative(p.all()) != base) ++mismatched;
        antisym = std::max(antisym, std::abs(L - thermal_function(p, beta)));
    }
    rep.check("mismatched_term_lists", mismatched, 0.0);
    rep.check("antisymmetric_part", antisym, 0.0);
    cplx sym = symmetrized_thermal_function(idx, beta);
    const double factor = static_cast<double>(perms.size());
    rep.info("permutations", factor);
    if (L != 0.0)
        rep.check("symmetrization_factor", std::abs(sym / L - factor) / factor, 1e-12);
    else
        rep.check("symmetrized_value", std::abs(sym), 0.0);
    rep.finalize();
    return rep;
}

ConventionOracle convention_oracle(double tol, const PointSplitOptions& split) {
    ConventionOracle out;
    auto& rep = out.report;
    rep.name = "convention_oracle";
    rep.set_inputs("beta=(1,0,0,0);tol=" + fmt_double(tol));
    const FourVector beta{1.0, 0.0, 0.0, 0.0};
    const StateSpec kms = Kms{beta};

    std::array<std::array<PointSplitResult, 4>, 4> ps1;
    double ps1_max = 0;
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) {
            ps1[mu][nu] = point_split_expectation(kms, {}, {{mu}, nu}, split);
            ps1_max = std::max(ps1_max, std::abs(ps1[mu][nu].value));
        }
    const ThermalIndex i3{{0, 0, 0}, 0};
    auto ps3 = point_split_expectation(kms, {}, i3, split);
    const bool ps3_significant = std::abs(ps3.value) > 10.0 * ps3.uncertainty;

    for (auto c : {BernoulliConvention::Modern, BernoulliConvention::Classical}) {
        ConventionOracle::Entry e;
        e.convention = c;
        cplx t00 = thermal_function({{0}, 0}, beta, c);
        e.k1 = (ps1[0][0].value / t00).real();
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = 0; nu < 4; ++nu) {
                cplx tf = thermal_function({{mu}, nu}, beta, c);
                e.m1_spread = std::max(e.m1_spread, std::abs(ps1[mu][nu].value - e.k1 * tf) / ps1_max);
            }
        e.m1_consistent = e.m1_spread <= tol;
        cplx t3 = thermal_function(i3, beta, c);
        e.m3_nonzero = (t3 != 0.0) == ps3_significant;
        if (t3 != 0.0) e.k3 = (ps3.value / t3).real();
        e.matches = e.m1_consistent && e.m3_nonzero;
        const std::string tag = convention_name(c);
        rep.info(tag + ".k1", e.k1);
        rep.info(tag + ".k3", e.k3);
        rep.info(tag + ".m1_spread", e.m1_spread);
        rep.info(tag + ".m3_consistent", e.m3_nonzero ? 1.0 : 0.0);
        out.entries.push_back(e);
    }
    int matching = 0;
    bool adopted_matches = false;
    for (const auto& e : out.entries) {
        matching += e.matches;
        if (e.matches && e.convention == kAdoptedConvention) adopted_matches = true;
    }
    rep.check("matching_conventions_minus_one", std::abs(matching - 1), 0.0);
    rep.check("adopted_convention_mismatch", adopted_matches ? 0.0 : 1.0, 0.0);

    for (const ThermalIndex& ie : {ThermalIndex{{}, 0}, ThermalIndex{{0, 0}, 0}, ThermalIndex{{3, 3}, 3}}) {
        auto r = point_split_expectation(kms, {}, ie, split);
        out.even_residual = std::max(out.even_residual, std::abs(r.value) / (3.0 * r.uncertainty + 1e-10));
    }
    rep.check("even_value_over_uncertainty", out.even_residual, 1.0);

    // Same observable along two other split directions.
    for (std::array<double, 3> dir : {std::array<double, 3>{1, 0, 0}, std::array<double, 3>{0, 1, 0}}) {
        auto o = split;
        o.direction = dir;
        auto r = point_split_expectation(kms, {}, {{0}, 0}, o);
        double allowed = 3.0 * (r.uncertainty + ps1[0][0].uncertainty) + 1e-12 * std::abs(r.value);
        out.direction_spread = std::max(out.direction_spread, std::abs(r.value - ps1[0][0].value) / allowed);
    }
    rep.check("direction_spread_over_uncertainty", out.direction_spread, 1.0);
    rep.finalize();
    return out;
}

CheckReport weyl_report(const StateSpec& state, const TestFunction& f, const TestFunction& g, const EvalOptions& opt,
                        double tol) {
    CheckReport rep;
    rep.name = "weyl_null";
    rep.set_inputs("state=" + state_name(state) + ";f_terms=" + std::to_string(f.terms().size()) +
                   ";g_terms=" + std::to_string(g.terms().size()));
    auto w = weyl_null_check(state, f, g, opt);
    rep.info("residual", w.residual);
    rep.info("scale", w.scale);
    rep.check("relative_residual", w.scale > 0 ? w.residual / w.scale : w.residual, tol);
    rep.finalize();
    return rep;
}

}  // namespace hb
