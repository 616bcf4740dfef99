#include "hotbang/thermal.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace hb {

namespace {

constexpr double kPi = std::numbers::pi;

void check_index(int i) {
    if (i < 0 || i > 3) throw std::invalid_argument("spacetime index must be in 0..3");
}

void check_beta(const FourVector& beta) {
    if (!is_timelike_future(beta)) throw std::invalid_argument("beta must be timelike future");
}

}  // namespace

void ThermalIndex::validate() const {
    for (int i : mu) check_index(i);
    check_index(nu);
}

std::vector<int> ThermalIndex::all() const {
    auto v = mu;
    v.push_back(nu);
    return v;
}

std::string ThermalIndex::label() const {
    std::string s;
    for (int i : mu) s += std::to_string(i);
    return s + ";" + std::to_string(nu);
}

const char* convention_name(BernoulliConvention c) {
    return c == BernoulliConvention::Modern ? "modern" : "classical";
}

BernoulliTable::BernoulliTable(int max_n) {
    b_.resize(max_n + 1);
    b_[0] = 1;
    for (int m = 1; m <= max_n; ++m) {
        Rational s = 0;
        Rational binom = 1;  // C(m+1, k)
        for (int k = 0; k < m; ++k) {
            s += binom * b_[k];
            binom = binom * (m + 1 - k) / (k + 1);
        }
        b_[m] = -s / (m + 1);
    }
}

const BernoulliTable& BernoulliTable::instance() {
    static const BernoulliTable t(64);
    return t;
}

const Rational& BernoulliTable::modern(int n) const {
    if (n < 0 || n > max_index()) throw std::out_of_range("Bernoulli index out of table range");
    return b_[n];
}

Rational BernoulliTable::classical(int n) const {
    if (n < 1) throw std::out_of_range("classical Bernoulli numbers start at 1");
    return abs(modern(2 * n));
}

Rational BernoulliTable::get(int n, BernoulliConvention c) const {
    return c == BernoulliConvention::Modern ? modern(n) : classical(n);
}

cplx c_coeff(int m, BernoulliConvention c) {
    if (m < 0) throw std::invalid_argument("c_m needs m >= 0");
    if (m % 2 == 0) return 0.0;
    const int n = (m + 3) / 2;
    double fact = 1;
    for (int k = 2; k <= m + 3; ++k) fact *= k;
    double mag = std::pow(kPi, m + 1) * (std::ldexp(1.0, 2 * m + 2) - std::ldexp(1.0, m + 1)) / fact;
    double sign = (n % 2 == 0) ? 1.0 : -1.0;
    double b = BernoulliTable::instance().get(n, c).convert_to<double>();
    return {0.0, mag * sign * b};
}

std::vector<DerivTerm> inverse_square_derivative(const std::vector<int>& upper) {
    std::map<std::pair<std::array<int, 4>, int>, long long> cur{{{{0, 0, 0, 0}, 1}, 1}};
    for (int mu : upper) {
        check_index(mu);
        std::map<std::pair<std::array<int, 4>, int>, long long> next;
        for (const auto& [key, c] : cur) {
            auto [pow, k] = key;
            if (pow[mu] > 0) {
                auto p = pow;
                --p[mu];
                next[{p, k}] += c * static_cast<long long>(kMetric[mu]) * pow[mu];
            }
            auto p = pow;
            ++p[mu];
            next[{p, k + 1}] += -2LL * k * c;
        }
        cur.clear();
        for (const auto& [key, c] : next)
            if (c != 0) cur.emplace(key, c);
    }
    std::vector<DerivTerm> out;
    for (const auto& [key, c] : cur) out.push_back({c, key.first, key.second});
    return out;
}

double evaluate_terms(const std::vector<DerivTerm>& terms, const FourVector& beta) {
    const double bb = mink_product(beta, beta);
    CompensatedSum s;
    for (const auto& t : terms) {
        double v = static_cast<double>(t.coeff) * std::pow(bb, -t.k);
        for (int i = 0; i < 4; ++i) v *= std::pow(beta[i], t.pow[i]);
        s.add(v);
    }
    return s.value();
}

cplx thermal_function(const ThermalIndex& idx, const FourVector& beta, BernoulliConvention c) {
    idx.validate();
    check_beta(beta);
    cplx cm = c_coeff(idx.m(), c);
    if (cm == 0.0) return 0.0;
    return cm * evaluate_terms(inverse_square_derivative(idx.all()), beta);
}

void validate(const MacroObservable& xi) {
    if (auto* e = std::get_if<EnergyObs>(&xi)) {
        check_index(e->mu);
        check_index(e->nu);
    } else if (auto* s = std::get_if<EntropyObs>(&xi)) {
        check_index(s->mu);
    } else if (auto* p = std::get_if<PhaseSpaceObs>(&xi)) {
        if (!is_forward_null(p->p)) throw std::invalid_argument("phase-space momentum must be forward null");
    } else if (auto* c = std::get_if<CustomObs>(&xi)) {
        if (!c->fn) throw std::invalid_argument("custom observable needs a callable");
    }
}

std::string observable_name(const MacroObservable& xi) {
    struct V {
        std::string operator()(const T2Obs&) const { return "T2"; }
        std::string operator()(const EnergyObs& e) const {
            return "E" + std::to_string(e.mu) + std::to_string(e.nu);
        }
        std::string operator()(const EntropyObs& s) const { return "S" + std::to_string(s.mu); }
        std::string operator()(const PhaseSpaceObs& p) const {
            std::string s = "Np(";
            for (int i = 0; i < 4; ++i) {
                char buf[32];
                auto r = std::to_chars(buf, buf + sizeof buf, p.p[i]);
                s += std::string(buf, r.ptr) + (i < 3 ? " " : ")");
            }
            return s;
        }
        std::string operator()(const CustomObs& c) const { return c.name; }
    };
    return std::visit(V{}, xi);
}

double builtin_macro(const MacroObservable& xi, const FourVector& beta) {
    validate(xi);
    check_beta(beta);
    const double bb = mink_product(beta, beta);
    struct V {
        const FourVector& b;
        double bb;
        double operator()(const T2Obs&) const { return 1.0 / bb; }
        double operator()(const EnergyObs& e) const {
            double eta = e.mu == e.nu ? kMetric[e.mu] : 0.0;
            return kPi * kPi / 60.0 * (4.0 * b[e.mu] * b[e.nu] / (bb * bb * bb) - eta / (bb * bb));
        }
        double operator()(const EntropyObs& s) const { return kPi * kPi / 15.0 * b[s.mu] / bb; }
        double operator()(const PhaseSpaceObs& p) const {
            return fermi_excess(mink_product(b, p.p)) / (8.0 * kPi * kPi * kPi);
        }
        double operator()(const CustomObs& c) const { return c.fn(b); }
    };
    return std::visit(V{beta, bb}, xi);
}

AdmissibilityReport wave_admissibility(const MacroObservable& xi, const std::vector<FourVector>& samples, double tol) {
    validate(xi);
    AdmissibilityReport r;
    for (const auto& beta : samples) {
        check_beta(beta);
        const double h = 1e-3 * std::sqrt(mink_product(beta, beta));
        auto g = [&](const std::vector<double>& v) { return builtin_macro(xi, {v[0], v[1], v[2], v[3]}); };
        std::vector<double> x{beta[0], beta[1], beta[2], beta[3]};
        double box = 0, norm = 0;
        for (int mu = 0; mu < 4; ++mu) {
            double d2 = finite_difference(g, x, {mu, mu}, h, 4);
            box += kMetric[mu] * d2;
            norm += std::abs(d2);
        }
        double res = norm > 0 ? std::abs(box) / norm : std::abs(box);
        r.worst_residual = std::max(r.worst_residual, res);
        ++r.n_samples;
    }
    r.admissible = r.worst_residual < tol;
    return r;
}

double macro_expectation(const StateSpec& state, const MacroObservable& xi, const FourVector& x) {
    validate(state);
    validate(xi);
    if (std::holds_alternative<Vacuum>(state)) return 0.0;
    if (auto* k = std::get_if<Kms>(&state)) return builtin_macro(xi, k->beta);
    if (auto* m = std::get_if<Mixture>(&state)) {
        CompensatedSum s;
        for (const auto& a : m->atoms) s.add(a.weight * builtin_macro(xi, a.beta));
        return s.value();
    }
    const auto& h = std::get<HotBang>(state);
    if (!is_timelike_future(x)) throw std::invalid_argument("Hot Bang expectation needs x in the forward cone");
    return builtin_macro(xi, x * (2.0 * h.lambda));
}

double seminorm(const MacroObservable& xi, const std::vector<FourVector>& B) {
    double s = 0;
    for (const auto& b : B) s = std::max(s, std::abs(builtin_macro(xi, b)));
    return s;
}

QuadConfig PointSplitOptions::fixed_kernel_grid() {
    QuadConfig q;
    q.refine = false;
    return q;
}

PointSplitResult point_split_expectation(const StateSpec& state, const FourVector& x, const ThermalIndex& idx,
                                         const PointSplitOptions& opt) {
    validate(state);
    idx.validate();
    if (opt.splits.size() < 3) throw std::invalid_argument("point split needs at least three split distances");
    PointSplitResult out;
    auto atoms = kernel_atoms(state, x, x);
    if (atoms.empty()) {
        for (double s : opt.splits) out.samples.push_back({s, 0.0});
        return out;
    }
    double ell = std::numeric_limits<double>::infinity();
    for (const auto& a : atoms) ell = std::min(ell, std::sqrt(mink_product(a.beta, a.beta)));
    const auto& e = opt.direction;
    const double en = std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
    if (!(en > 0)) throw std::invalid_argument("split direction must be nonzero");
    const SpinorMatrix sig = sigma(idx.nu);

    std::map<std::vector<double>, cplx> memo;
    auto E = [&](const std::vector<double>& z) {
        auto it = memo.find(z);
        if (it != memo.end()) return it->second;
        FourVector zeta{z[0], z[1], z[2], z[3]};
        auto K = normal_ordered_kernel(state, x + zeta, x - zeta, opt.quad);
        cplx v = (sig * K.value).trace();
        memo.emplace(z, v);
        return v;
    };
    // Upper-index derivatives pick up eta^{mu mu}.
    double sign = 1.0;
    for (int mu : idx.mu) sign *= kMetric[mu];
    const double h = opt.fd_step * ell;

    auto derivative = [&](const std::vector<double>& z0, double step) -> cplx {
        if (idx.mu.empty()) return E(z0);
        double vr =
            finite_difference([&](const std::vector<double>& z) { return E(z).real(); }, z0, idx.mu, step, opt.fd_order);
        double vi =
            finite_difference([&](const std::vector<double>& z) { return E(z).imag(); }, z0, idx.mu, step, opt.fd_order);
        return sign * cplx(vr, vi);
    };
    auto split_point = [&](double d) {
        return std::vector<double>{0.0, d * e[0] / en, d * e[1] / en, d * e[2] / en};
    };

    std::vector<std::pair<double, double>> re, im;
    for (double s : opt.splits) {
        const double d = s * ell;
        cplx v = derivative(split_point(d), h);
        out.samples.push_back({d, v});
        re.push_back({d, v.real()});
        im.push_back({d, v.imag()});
    }
    double fd_error = 0;
    if (!idx.mu.empty()) {
        const double d = opt.splits.back() * ell;
        cplx coarse = derivative(split_point(d), 2.0 * h);
        fd_error = std::abs(coarse - out.samples.back().second) / (std::pow(2.0, opt.fd_order) - 1.0);
    }
    const double p0 = idx.m() % 2 == 1 ? 2.0 : 1.0;
    auto xr = extrapolate_limit(re, ExtrapolationKind::RichardsonPoly, p0, 2.0);
    auto xi = extrapolate_limit(im, ExtrapolationKind::RichardsonPoly, p0, 2.0);
    out.value = {xr.limit, xi.limit};
    out.uncertainty = std::hypot(xr.uncertainty, xi.uncertainty) + fd_error;
    return out;
}

std::vector<ThermalIndex> index_permutations(const ThermalIndex& idx) {
    idx.validate();
    auto all = idx.all();
    std::vector<int> pos(all.size());
    std::iota(pos.begin(), pos.end(), 0);
    std::vector<ThermalIndex> out;
    do {
        ThermalIndex t;
        for (size_t i = 0; i + 1 < pos.size(); ++i) t.mu.push_back(all[pos[i]]);
        t.nu = all[pos.back()];
        out.push_back(t);
    } while (std::next_permutation(pos.begin(), pos.end()));
    return out;
}

cplx symmetrized_thermal_function(const ThermalIndex& idx, const FourVector& beta, BernoulliConvention c) {
    cplx s = 0;
    for (const auto& t : index_permutations(idx)) s += thermal_function(t, beta, c);
    return s;
}

}  // namespace hb
