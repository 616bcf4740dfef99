#include "hotbang/states.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "hotbang/hot_bang.hpp"

namespace hb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kKernelNorm = 1.0 / (kTwoPi * kTwoPi * kTwoPi);

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_future(const FourVector& b, const char* what) {
    if (!is_timelike_future(b)) throw std::invalid_argument(std::string(what) + " must be timelike future");
}

// p'_M for p' = rho (1, n).
inline SpinorMatrix shell_lower(double rho, const std::array<double, 3>& n) {
    const cplx I(0, 1);
    return {{rho * (1.0 + n[2]), rho * (n[0] - I * n[1]), rho * (n[0] + I * n[1]), rho * (1.0 - n[2])}};
}

double weighted_fermi(const std::vector<MixtureAtom>& atoms, double rho, const std::array<double, 3>& n) {
    double w = 0;
    for (const auto& a : atoms) {
        double bp = rho * (a.beta.t - a.beta.x * n[0] - a.beta.y * n[1] - a.beta.z * n[2]);
        w += a.weight * fermi_excess(bp);
    }
    return w;
}

SpinorMatrix spectrum_from_atoms(const std::vector<MixtureAtom>& atoms, const FourVector& p) {
    double n = 0;
    for (const auto& a : atoms) n += a.weight * fermi_excess(mink_product(a.beta, p));
    return spinor_matrix(p, Index::Lower) * (kKernelNorm * n);
}

}  // namespace

void validate(const StateSpec& s) {
    std::visit(overloaded{
                   [](const Vacuum&) {},
                   [](const Kms& k) { require_future(k.beta, "KMS beta"); },
                   [](const Mixture& m) {
                       if (m.atoms.empty()) throw std::invalid_argument("mixture needs at least one atom");
                       double total = 0;
                       for (const auto& a : m.atoms) {
                           if (!(a.weight > 0)) throw std::invalid_argument("mixture weights must be positive");
                           require_future(a.beta, "mixture beta");
                           total += a.weight;
                       }
                       if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("mixture weights must sum to 1");
                   },
                   [](const HotBang& h) {
                       if (!(h.lambda > 0) || !std::isfinite(h.lambda))
                           throw std::invalid_argument("hot bang lambda must be positive");
                   },
               },
               s);
}

std::string state_name(const StateSpec& s) {
    return std::visit(overloaded{
                          [](const Vacuum&) { return std::string("vacuum"); },
                          [](const Kms&) { return std::string("kms"); },
                          [](const Mixture&) { return std::string("mixture"); },
                          [](const HotBang&) { return std::string("hotbang"); },
                      },
                      s);
}

double fermi_excess(double x) {
    if (x > 0) {
        double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}

cplx pairing_sum(const std::vector<Pairing>& terms, const QuadConfig& cfg) {
    auto grid = shell_grid(cfg);
    const ShellGrid& g = *grid;
    const int D = g.n_dir();

    // Each (source, ray) is sampled once.
    using Samples = std::shared_ptr<const std::vector<Spinor>>;
    std::map<std::pair<const SpinorSource*, std::pair<double, double>>, Samples> samples;
    auto sample = [&](const SpinorSource* s, cplx z) -> const std::vector<Spinor>* {
        auto key = std::make_pair(s, std::make_pair(z.real(), z.imag()));
        auto it = samples.find(key);
        if (it == samples.end()) it = samples.emplace(key, s->shell_samples(z, g)).first;
        return it->second.get();
    };
    std::vector<const std::vector<Spinor>*> L, R;
    for (const auto& t : terms) {
        L.push_back(sample(t.left, t.a));
        R.push_back(sample(t.right, t.b));
    }
    return integrate_nodes<cplx>(g, [&](int i, int j) {
        const double rho = g.radius(i);
        const auto& n = g.direction(j);
        const SpinorMatrix M = shell_lower(rho, n);
        const size_t k = static_cast<size_t>(i) * D + j;
        cplx acc = 0;
        for (size_t t = 0; t < terms.size(); ++t) {
            const double w = terms[t].weight ? terms[t].weight(rho, n) : 1.0;
            if (w == 0.0) continue;
            const Spinor& u = (*L[t])[k];
            Spinor v = (*R[t])[k];
            if (terms[t].conj_right) v = {std::conj(v[0]), std::conj(v[1])};
            acc += w * bilinear(u, M, v);
        }
        return acc;
    });
}

double natural_radial_scale(const std::vector<const SpinorSource*>& sources, const std::vector<cplx>& rays) {
    double rmin = std::numeric_limits<double>::infinity();
    double delta = std::numeric_limits<double>::infinity();
    for (const auto* s : sources) {
        rmin = std::min(rmin, s->min_half_width());
        delta = std::min(delta, s->support_margin());
    }
    double zmax = 0, damp = 0;
    for (cplx z : rays) {
        zmax = std::max(zmax, std::abs(z));
        damp += std::max(0.0, z.imag());
    }
    if (!(delta > 0)) damp = 0;
    // Without damping the transforms keep their stretched-exponential tails,
    // which matter out to about four times the width scale.
    const double reach = damp > 0 ? 1.0 : 4.0;
    double denom = rmin * zmax / reach + damp * (delta > 0 ? delta : 0.0);
    if (!(denom > 0) || !std::isfinite(denom)) return 1.0;
    return 1.0 / denom;
}

ShellResult<cplx> pairing_integral(const std::vector<Pairing>& terms, const QuadConfig& cfg, double natural_scale,
                                   double abs_floor) {
    QuadConfig c = cfg.with_scale(cfg.radial_scale * natural_scale);
    return refined<cplx>([&](const QuadConfig& q) { return pairing_sum(terms, q); }, c, abs_floor);
}

ShellResult<cplx> anticommutator(const SpinorSource& f, const SpinorSource& g, const QuadConfig& cfg) {
    std::vector<Pairing> terms{{&f, 1.0, &g, -1.0, false, {}}, {&f, -1.0, &g, 1.0, false, {}}};
    double sc = natural_radial_scale({&f, &g}, {1.0, -1.0});
    auto r = pairing_integral(terms, cfg, sc);
    r.value *= kTwoPi;
    r.error *= kTwoPi;
    return r;
}

namespace {

std::vector<MixtureAtom> thermal_atoms(const StateSpec& s) {
    return std::visit(overloaded{
                          [](const Vacuum&) { return std::vector<MixtureAtom>{}; },
                          [](const Kms& k) { return std::vector<MixtureAtom>{{1.0, k.beta}}; },
                          [](const Mixture& m) { return m.atoms; },
                          [](const HotBang&) -> std::vector<MixtureAtom> {
                              throw std::logic_error("hot bang has no global temperature");
                          },
                      },
                      s);
}

// PsiBarPsi for vacuum, KMS and mixtures; the lower shell carries the excess occupation,
// the upper shell 1 minus it.
ShellResult<cplx> stationary_psibar_psi(const std::vector<MixtureAtom>& atoms, const SpinorSource& f,
                                        const SpinorSource& g, const QuadConfig& cfg, double abs_floor) {
    std::vector<Pairing> terms;
    if (atoms.empty()) {
        terms.push_back({&g, 1.0, &f, -1.0, false, {}});
    } else {
        terms.push_back({&g, 1.0, &f, -1.0, false,
                         [&atoms](double rho, const std::array<double, 3>& n) {
                             return 1.0 - weighted_fermi(atoms, rho, n);
                         }});
        terms.push_back({&g, -1.0, &f, 1.0, false, [&atoms](double rho, const std::array<double, 3>& n) {
                             return weighted_fermi(atoms, rho, n);
                         }});
    }
    double sc = natural_radial_scale({&f, &g}, {1.0, -1.0});
    auto r = pairing_integral(terms, cfg, sc, abs_floor / kTwoPi);
    r.value *= kTwoPi;
    r.error *= kTwoPi;
    return r;
}

}  // namespace

TwoPointResult two_point(const StateSpec& state, const SpinorSource& f, const SpinorSource& g, Ordering ord,
                         const EvalOptions& opt) {
    validate(state);
    if (const auto* hbs = std::get_if<HotBang>(&state)) {
        if (!(f.support_margin() > 0) || !(g.support_margin() > 0))
            throw std::invalid_argument("hot bang smearing needs supports inside the forward cone");
        return hotbang_two_point(f, g, hbs->lambda, ord, opt);
    }
    auto atoms = thermal_atoms(state);
    auto pp = stationary_psibar_psi(atoms, f, g, opt.quad, opt.quad.tol * opt.series_scale);
    TwoPointResult r;
    r.value = pp.value;
    r.quad_error = pp.error;
    r.converged = pp.converged;
    if (ord == Ordering::PsiPsiBar) {
        auto ac = anticommutator(g, f, opt.quad);
        r.value = ac.value - pp.value;
        r.quad_error += ac.error;
        r.converged = r.converged && ac.converged;
    }
    return r;
}

TwoPointResult two_point_conjugate(const StateSpec& state, const TestFunction& f, Ordering ord,
                                   const EvalOptions& opt) {
    validate(state);
    if (const auto* hbs = std::get_if<HotBang>(&state)) {
        auto v = hotbang_smeared(f, hbs->lambda, ord, opt);
        TwoPointResult r;
        r.value = v.value;
        r.quad_error = v.quad_error;
        r.tail_bound = v.tail_bound;
        r.n_terms = v.n_terms;
        return r;
    }
    TestFunction fb = f.conjugate();
    return two_point(state, fb, f, ord, opt);
}

std::vector<MixtureAtom> kernel_atoms(const StateSpec& state, const FourVector& x, const FourVector& y) {
    if (const auto* h = std::get_if<HotBang>(&state)) {
        FourVector b = (x + y) * h->lambda;
        if (!is_timelike_future(b)) throw std::invalid_argument("hot bang kernel needs x + y timelike future");
        return {{1.0, b}};
    }
    return thermal_atoms(state);
}

SpinorMatrix kernel_spectrum(const StateSpec& state, const FourVector& x, const FourVector& y, const FourVector& p) {
    return spectrum_from_atoms(kernel_atoms(state, x, y), p);
}

cplx kernel_phase(const FourVector& p, const FourVector& diff) { return cplx(0.0, 2.0 * std::sin(mink_product(p, diff))); }

ShellResult<SpinorMatrix> normal_ordered_kernel(const StateSpec& state, const FourVector& x, const FourVector& y,
                                                const QuadConfig& cfg) {
    validate(state);
    auto atoms = kernel_atoms(state, x, y);
    if (atoms.empty()) return {};
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& a : atoms) gap = std::min(gap, a.beta.t - a.beta.spatial_norm());
    const FourVector d = x - y;
    QuadConfig c = cfg.with_scale(cfg.radial_scale / gap);
    return refined<SpinorMatrix>(
        [&](const QuadConfig& q) {
            auto grid = shell_grid(q);
            return integrate_nodes<SpinorMatrix>(*grid, [&](int i, int j) {
                const double rho = grid->radius(i);
                const auto& n = grid->direction(j);
                FourVector p{rho, rho * n[0], rho * n[1], rho * n[2]};
                return spectrum_from_atoms(atoms, p) * kernel_phase(p, d);
            });
        },
        c);
}

GridFourier::GridFourier(TestFunction f, int nodes_per_axis) : f_(std::move(f)), n_(nodes_per_axis) {
    if (n_ < 1) throw std::invalid_argument("grid needs at least one node per axis");
}

Spinor GridFourier::fourier(const ComplexFourVector& zeta) const {
    const cplx I(0, 1);
    const auto& gl = gauss_legendre(n_);
    const double norm = 1.0 / (kTwoPi * kTwoPi);
    Spinor r{0.0, 0.0};
    for (const auto& b : f_.terms()) {
        cplx prod = norm * b.scale;
        for (int k = 0; k < 4; ++k) {
            cplx w = kMetric[k] * zeta[k];
            cplx s = 0;
            for (int j = 0; j < n_; ++j) {
                double u = gl.x[j];
                double x = b.center[k] + b.half_widths[k] * u;
                s += gl.w[j] * b.half_widths[k] * bump_profile(u) * std::exp(I * w * x);
            }
            prod *= s;
        }
        r[0] += prod * b.amplitude[0];
        r[1] += prod * b.amplitude[1];
    }
    return r;
}

std::vector<GridFourier::Node> GridFourier::nodes() const {
    const auto& gl = gauss_legendre(n_);
    std::vector<Node> out;
    for (const auto& b : f_.terms()) {
        std::array<int, 4> idx{};
        for (idx[0] = 0; idx[0] < n_; ++idx[0])
            for (idx[1] = 0; idx[1] < n_; ++idx[1])
                for (idx[2] = 0; idx[2] < n_; ++idx[2])
                    for (idx[3] = 0; idx[3] < n_; ++idx[3]) {
                        Node nd;
                        double w = 1.0, chi = 1.0;
                        for (int k = 0; k < 4; ++k) {
                            double u = gl.x[idx[k]];
                            nd.x[k] = b.center[k] + b.half_widths[k] * u;
                            w *= gl.w[idx[k]] * b.half_widths[k];
                            chi *= bump_profile(u);
                        }
                        nd.w = w;
                        nd.value = {b.scale * b.amplitude[0] * chi, b.scale * b.amplitude[1] * chi};
                        out.push_back(nd);
                    }
    }
    return out;
}

ShellResult<cplx> kernel_double_smear(const StateSpec& state, const GridFourier& f, const GridFourier& g,
                                      const QuadConfig& cfg) {
    validate(state);
    if (std::holds_alternative<HotBang>(state))
        throw std::invalid_argument("factored double smearing needs a translation-invariant state");
    const FourVector origin{};
    // 2i sin((p, x - y)) summed against f(x) and g(y) on the grids gives
    // (2 pi)^4 [g^(-p)^T S f^(p) - g^(p)^T S f^(-p)].
    const double four = std::pow(kTwoPi, 4);
    double sc = natural_radial_scale({&f, &g}, {1.0, -1.0});
    QuadConfig c = cfg.with_scale(cfg.radial_scale * sc);
    return refined<cplx>(
        [&](const QuadConfig& q) {
            auto grid = shell_grid(q);
            const int D = grid->n_dir();
            std::vector<Spinor> fp, fm, gp, gm;
            f.sample_shell(1.0, *grid, fp);
            f.sample_shell(-1.0, *grid, fm);
            g.sample_shell(1.0, *grid, gp);
            g.sample_shell(-1.0, *grid, gm);
            return integrate_nodes<cplx>(*grid, [&](int i, int j) {
                const double rho = grid->radius(i);
                const auto& n = grid->direction(j);
                FourVector p{rho, rho * n[0], rho * n[1], rho * n[2]};
                SpinorMatrix S = kernel_spectrum(state, origin, origin, p);
                size_t k = static_cast<size_t>(i) * D + j;
                return four * (bilinear(gm[k], S, fp[k]) - bilinear(gp[k], S, fm[k]));
            });
        },
        c);
}

WeylReport weyl_null_check(const StateSpec& state, const SpinorSource& f, const SpinorSource& g,
                           const EvalOptions& opt) {
    WeylReport rep;
    rep.scale = std::abs(anticommutator(g, f, opt.quad).value);
    EvalOptions o = opt;
    o.series_scale = rep.scale;
    WeylImage gw(g, FieldKind::Psi), fw(f, FieldKind::PsiBar);
    double r1 = std::abs(two_point(state, f, gw, Ordering::PsiBarPsi, o).value);
    double r2 = std::abs(two_point(state, fw, g, Ordering::PsiBarPsi, o).value);
    rep.residual = std::max(r1, r2);
    return rep;
}

}  // namespace hb
