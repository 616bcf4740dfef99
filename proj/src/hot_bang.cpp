#include "hotbang/hot_bang.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hb {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
// Series switch to bracketed summation for slowly turning angles.
constexpr double kBracketLambda = 0.05;

SeriesResult sum_series(const std::function<double(int)>& term, double lambda, double tol, int max_n, bool record) {
    if (lambda <= kBracketLambda) return bracketed_alternating_sum(term, tol, max_n, record);
    return alternating_sum(term, tol, max_n, record);
}

}  // namespace

void SeriesSchedule::validate() const {
    if (!(lambda > 0) || !std::isfinite(lambda)) throw std::invalid_argument("schedule lambda must be positive");
    if (!(tol > 0)) throw std::invalid_argument("schedule tolerance must be positive");
    if (max_terms < 1) throw std::invalid_argument("schedule needs at least one term");
}

double SeriesSchedule::phi(int n) const { return std::atan(n * lambda); }

double SeriesSchedule::cos3(int n) const {
    double q = 1.0 + (n * lambda) * (n * lambda);
    return 1.0 / (q * std::sqrt(q));
}

ProfileCheck ConvexProfile::check(int n) const {
    ProfileCheck r;
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) {
        v[k] = fn(kPi * k / (n - 1));
        if (!(v[k] > 0)) r.positive = false;
    }
    for (int k = 1; k + 1 < n; ++k) {
        double excess = (v[k] - 0.5 * (v[k - 1] + v[k + 1])) / std::max(std::abs(v[k]), 1e-300);
        r.worst_convexity = std::max(r.worst_convexity, excess);
    }
    r.convex = r.worst_convexity <= 1e-10;
    return r;
}

ConvexProfile synthetic_profile(const std::string& name, std::function<double(double)> fn) {
    return {std::move(fn), "synthetic:" + name};
}

ShellResult<double> L_phi(const TestFunction& f, double phi, const QuadConfig& cfg) {
    if (!(phi >= 0.0 && phi <= kPi)) throw std::invalid_argument("L(phi) needs phi in [0, pi]");
    ShellResult<double> out;
    if (f.is_zero()) return out;
    const cplx z = std::polar(1.0, phi);
    std::vector<Pairing> terms{{&f, z, &f, z, true, {}}};
    double sc = natural_radial_scale({&f}, {z, z});
    auto r = pairing_integral(terms, cfg, sc);
    if (std::abs(r.value.imag()) > 1e-10 * std::abs(r.value.real()) + 1e-300)
        throw std::runtime_error("L(phi) picked up an imaginary part");
    out.value = r.value.real();
    out.error = r.error;
    out.converged = r.converged;
    return out;
}

LProfile::LProfile(TestFunction f, QuadConfig cfg) : f_(std::move(f)), cfg_(cfg) {}

const ShellResult<double>& LProfile::at(double phi) {
    auto it = memo_.find(phi);
    if (it == memo_.end()) it = memo_.emplace(phi, L_phi(f_, phi, cfg_)).first;
    return it->second;
}

double LProfile::scale() { return at(0.0).value + at(kPi).value; }

ConvexProfile LProfile::as_profile() {
    return {[this](double phi) { return at(phi).value; }, "test function L(phi)"};
}

ShellResult<cplx> F_z(const TestFunction& f, cplx z, double alpha, const QuadConfig& cfg) {
    if (z == 0.0 || z.imag() < 0) throw std::invalid_argument("F(z) needs z in the closed upper half plane minus 0");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("F_alpha needs alpha in [0, 1)");
    if (alpha > 0 && !(std::arg(z) < kPi / (1.0 + alpha)))
        throw std::invalid_argument("F_alpha needs arg z < pi / (1 + alpha)");
    if (f.is_zero()) return {};
    const cplx lz = std::log(z);
    const cplx a = std::exp((1.0 + alpha) * lz);
    const cplx w = std::exp((alpha - 1.0) * std::conj(lz));
    std::vector<Pairing> terms{{&f, a, &f, w, true, {}}};
    return pairing_integral(terms, cfg, natural_radial_scale({&f}, {a, w}));
}

HotBangValue hotbang_smeared(LProfile& L, double lambda, Ordering ord, const EvalOptions& opt, bool record) {
    SeriesSchedule sched{lambda, 1.0, opt.max_terms};
    sched.validate();
    HotBangValue out;
    out.scale = kTwoPi * L.scale();
    if (out.scale == 0.0) return out;
    const double ref = opt.series_scale > 0 ? opt.series_scale : out.scale;
    const double tol = opt.series_tol * ref / kTwoPi;

    double qerr = 0;
    auto g = [&](double phi, int n) {
        const auto& v = L.at(phi);
        double c = sched.cos3(n);
        qerr += c * v.error;
        return c * v.value;
    };
    auto term = [&](int n) {
        double s = (n % 2 == 0) ? 1.0 : -1.0;
        if (ord == Ordering::PsiBarPsi) return s * (g(sched.phi(n), n) + g(kPi - sched.phi(n + 1), n + 1));
        return s * (g(kPi - sched.phi(n), n) + g(sched.phi(n + 1), n + 1));
    };
    auto r = sum_series(term, lambda, tol, opt.max_terms, record);
    out.value = kTwoPi * r.value;
    out.tail_bound = kTwoPi * r.error_bound;
    out.quad_error = kTwoPi * qerr;
    out.n_terms = r.n_terms;
    for (double p : r.partial_sums) out.partial_sums.push_back(kTwoPi * p);
    return out;
}

HotBangValue hotbang_smeared(const TestFunction& f, double lambda, Ordering ord, const EvalOptions& opt) {
    LProfile L(f, opt.quad);
    return hotbang_smeared(L, lambda, ord, opt);
}

HotBangValue thermal_excess(LProfile& L, double lambda, double rel_tol, int max_terms) {
    SeriesSchedule sched{lambda, 1.0, max_terms};
    sched.validate();
    HotBangValue out;
    out.scale = kTwoPi * L.scale();
    double qerr = 0;
    auto term = [&](int k) {
        int n = k + 1;
        double phi = sched.phi(n);
        const auto& a = L.at(phi);
        const auto& b = L.at(kPi - phi);
        double c = sched.cos3(n);
        qerr += c * (a.error + b.error);
        return ((n % 2 == 0) ? c : -c) * (a.value - b.value);
    };
    double first = std::abs(term(0));
    if (first == 0.0) return out;
    auto r = sum_series(term, lambda, rel_tol * first, max_terms, false);
    out.value = kTwoPi * r.value;
    out.tail_bound = kTwoPi * r.error_bound;
    out.quad_error = kTwoPi * qerr;
    out.n_terms = r.n_terms;
    return out;
}

TwoPointResult hotbang_two_point(const SpinorSource& f, const SpinorSource& g, double lambda, Ordering ord,
                                 const EvalOptions& opt) {
    SeriesSchedule sched{lambda, 1.0, opt.max_terms};
    sched.validate();
    TwoPointResult out;
    double ref = opt.series_scale > 0 ? opt.series_scale : std::abs(anticommutator(g, f, opt.quad).value);
    if (ref == 0.0) return out;
    const double floor = opt.quad.tol * ref / kTwoPi;

    auto S = [&](cplx a, cplx b) {
        std::vector<Pairing> terms{{&g, a, &f, b, false, {}}};
        auto r = pairing_integral(terms, opt.quad, natural_radial_scale({&f, &g}, {a, b}), floor);
        out.quad_error += kTwoPi * r.error;
        out.converged = out.converged && r.converged;
        return r.value;
    };
    std::vector<cplx> cache;
    auto term = [&](int n) -> cplx {
        while (static_cast<int>(cache.size()) <= n) {
            int k = static_cast<int>(cache.size());
            cplx zk = sched.z(k), zk1 = sched.z(k + 1);
            double s = (k % 2 == 0) ? 1.0 : -1.0;
            cplx v = ord == Ordering::PsiBarPsi ? S(zk, -std::conj(zk)) + S(-std::conj(zk1), zk1)
                                                : S(-std::conj(zk), zk) + S(zk1, -std::conj(zk1));
            cache.push_back(s * v);
        }
        return cache[n];
    };
    const double tol = opt.series_tol * ref / kTwoPi;
    auto re = sum_series([&](int n) { return term(n).real(); }, lambda, tol, opt.max_terms, false);
    auto im = sum_series([&](int n) { return term(n).imag(); }, lambda, tol, opt.max_terms, false);
    out.value = kTwoPi * cplx(re.value, im.value);
    out.tail_bound = kTwoPi * (re.error_bound + im.error_bound);
    out.n_terms = std::max(re.n_terms, im.n_terms);
    return out;
}

SeriesTermsResult series_terms(const ConvexProfile& profile, const SeriesSchedule& schedule, SeriesKind which) {
    schedule.validate();
    auto g = [&](double phi, int n) { return schedule.cos3(n) * profile(phi); };
    SeriesTermsResult r;
    double sum = 0;
    for (int n = 0; n < schedule.max_terms; ++n) {
        double t = which == SeriesKind::A ? g(schedule.phi(n), n) + g(kPi - schedule.phi(n + 1), n + 1)
                                          : g(kPi - schedule.phi(n), n) + g(schedule.phi(n + 1), n + 1);
        if (n % 2 == 1) t = -t;
        if (n >= 2 && std::abs(t) < schedule.tol) {
            r.value = sum;
            r.n_terms = n;
            return r;
        }
        sum += t;
        r.partial_sums.push_back(sum);
    }
    throw ConvergenceError("series_terms: no convergence within max_terms");
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Warn: return "warn";
        case Verdict::Fail: return "fail";
    }
    return "fail";
}

LogConvexityReport log_convexity_check(LProfile& L, const std::vector<double>& grid, double eps) {
    LogConvexityReport r;
    if (L.function().is_zero()) {
        r.identically_zero = true;
        return r;
    }
    double top = 0;
    for (double phi : grid) top = std::max(top, L(phi));
    if (top == 0.0) {
        r.identically_zero = true;
        return r;
    }
    r.worst_additive = -std::numeric_limits<double>::infinity();
    r.worst_multiplicative = -std::numeric_limits<double>::infinity();
    for (double phi : grid) {
        if (!(phi - eps > 0 && phi + eps < kPi)) throw std::invalid_argument("convexity grid must stay inside (0, pi)");
        double c = L(phi);
        r.worst_additive = std::max(r.worst_additive, c * c / (L(phi + eps) * L(phi - eps)) - 1.0);
        double alpha = eps / phi;
        r.worst_multiplicative =
            std::max(r.worst_multiplicative, c * c / (L((1.0 + alpha) * phi) * L((1.0 - alpha) * phi)) - 1.0);
        r.n_checks += 2;
    }
    double worst = std::max(r.worst_additive, r.worst_multiplicative);
    r.verdict = worst <= 1e-8 ? Verdict::Pass : (worst <= 1e-6 ? Verdict::Warn : Verdict::Fail);
    return r;
}

LogConvexityReport log_convexity_check(const TestFunction& f, const std::vector<double>& grid, double eps,
                                       const QuadConfig& cfg) {
    LProfile L(f, cfg);
    return log_convexity_check(L, grid, eps);
}

}  // namespace hb
