#include "hotbang/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace hb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kFourierNorm = 1.0 / (kTwoPi * kTwoPi);

// Nodes u_j and w_j * b(u_j) with negligible tails dropped.
struct WeightedRule {
    std::vector<double> u, wb;
};

const WeightedRule& weighted_rule(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<WeightedRule>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) {
        slot = std::make_unique<WeightedRule>();
        const auto& g = gauss_legendre(n);
        for (int j = 0; j < n; ++j) {
            double v = g.w[j] * bump_profile(g.x[j]);
            if (v == 0.0) continue;
            slot->u.push_back(g.x[j]);
            slot->wb.push_back(v);
        }
    }
    return *slot;
}

int ladder_order(double need) {
    static const int ladder[] = {64, 96, 128, 192, 256, 384, 512, 768, 1024};
    for (int n : ladder)
        if (n >= need) return n;
    return 1024;
}

constexpr double kPanel = 4.0;
constexpr int kChebN = 25;

}  // namespace

double bump_profile(double u) {
    if (!(std::abs(u) < 1.0)) return 0.0;
    return std::exp(-1.0 / (1.0 - u * u));
}

cplx bump_transform_scaled(cplx kappa, int base_order) {
    double a = std::abs(kappa);
    if (a > kBumpDirectLimit) return 0.0;
    int n = std::max(base_order, ladder_order(2.0 * a + 40.0));
    const auto& r = weighted_rule(n);
    double kr = kappa.real(), ki = kappa.imag(), aim = std::abs(ki);
    double sr = 0, si = 0;
    for (size_t j = 0; j < r.u.size(); ++j) {
        double u = r.u[j];
        double mag = r.wb[j] * std::exp(-ki * u - aim);
        sr += mag * std::cos(kr * u);
        si += mag * std::sin(kr * u);
    }
    return {sr, si};
}

cplx bump_transform(cplx kappa, int base_order) {
    return bump_transform_scaled(kappa, base_order) * std::exp(std::abs(kappa.imag()));
}

BumpRayTable::BumpRayTable(double theta) : theta_(theta) {
    const int panels = static_cast<int>(std::ceil(kBumpCutoff / kPanel));
    coef_.assign(static_cast<size_t>(panels) * kChebN, 0.0);
    ready_ = std::make_unique<std::atomic<bool>[]>(panels);
    for (int p = 0; p < panels; ++p) ready_[p].store(false);
}

const cplx* BumpRayTable::panel(int p) const {
    cplx* c = &coef_[static_cast<size_t>(p) * kChebN];
    if (ready_[p].load(std::memory_order_acquire)) return c;
    std::lock_guard lock(mu_);
    if (ready_[p].load(std::memory_order_relaxed)) return c;
    const cplx dir = std::polar(1.0, theta_);
    std::array<cplx, kChebN> vals;
    const double mid = p * kPanel + 0.5 * kPanel;
    for (int j = 0; j < kChebN; ++j) {
        double x = std::cos(std::numbers::pi * (j + 0.5) / kChebN);
        vals[j] = bump_transform_scaled(dir * (mid + 0.5 * kPanel * x));
    }
    for (int k = 0; k < kChebN; ++k) {
        cplx a = 0;
        for (int j = 0; j < kChebN; ++j) a += vals[j] * std::cos(std::numbers::pi * k * (j + 0.5) / kChebN);
        a *= 2.0 / kChebN;
        if (k == 0) a *= 0.5;
        c[k] = a;
    }
    ready_[p].store(true, std::memory_order_release);
    return c;
}

cplx BumpRayTable::operator()(double s) const {
    if (s > kBumpCutoff) return 0.0;
    const int panels = static_cast<int>(coef_.size() / kChebN);
    int p = std::min(static_cast<int>(s / kPanel), panels - 1);
    double x = (s - (p * kPanel + 0.5 * kPanel)) / (0.5 * kPanel);
    const cplx* c = panel(p);
    cplx b1 = 0, b2 = 0;
    for (int k = kChebN - 1; k >= 1; --k) {
        cplx b0 = 2.0 * x * b1 - b2 + c[k];
        b2 = b1;
        b1 = b0;
    }
    return x * b1 - b2 + c[0];
}

BumpRay bump_ray(double theta) {
    const double pi = std::numbers::pi;
    bool conj = false;
    double t = theta;
    if (t > pi / 2) {
        t = pi - t;
        conj = true;
    } else if (t < -pi / 2) {
        t = t + pi;
    } else if (t < 0) {
        t = -t;
        conj = true;
    }
    // Quantized key; the table is built at the quantized angle so results
    // do not depend on call order.
    const double q = std::ldexp(1.0, 44);
    long long key = std::llround(t * q);
    static std::mutex mu;
    static std::map<long long, std::shared_ptr<const BumpRayTable>> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it == cache.end()) {
        if (cache.size() >= 4096) cache.clear();
        it = cache.emplace(key, std::make_shared<const BumpRayTable>(static_cast<double>(key) / q)).first;
    }
    return {it->second, conj};
}

std::shared_ptr<const std::vector<Spinor>> SpinorSource::shell_samples(cplx z, const ShellGrid& g) const {
    auto out = std::make_shared<std::vector<Spinor>>();
    sample_shell(z, g, *out);
    return out;
}

void SpinorSource::sample_shell(cplx z, const ShellGrid& g, std::vector<Spinor>& out) const {
    const int D = g.n_dir();
    out.assign(static_cast<size_t>(g.n_radial()) * D, Spinor{0.0, 0.0});
    parallel_for(g.n_radial(), [&](int i) {
        double rho = g.radius(i);
        for (int j = 0; j < D; ++j) {
            const auto& n = g.direction(j);
            cplx w = z * rho;
            out[static_cast<size_t>(i) * D + j] = fourier({{w, w * n[0], w * n[1], w * n[2]}});
        }
    });
}

double Bump::margin() const {
    double s = 0;
    for (int k = 1; k < 4; ++k) {
        double e = std::abs(center[k]) + half_widths[k];
        s += e * e;
    }
    return center.t - half_widths[0] - std::sqrt(s);
}

void Bump::validate() const {
    for (double r : half_widths)
        if (!(r > 0) || !std::isfinite(r)) throw std::invalid_argument("bump half-widths must be positive");
    if (!(margin() > 0)) throw std::invalid_argument("bump support box must lie strictly inside the forward cone");
}

struct TestFunction::SampleCache {
    using Key = std::tuple<double, double, std::uint64_t>;
    static constexpr size_t kMaxBytes = size_t{128} << 20;
    std::mutex mu;
    std::map<Key, std::shared_ptr<const std::vector<Spinor>>> entries;
    std::deque<Key> order;
    size_t bytes = 0;
};

TestFunction::TestFunction() : cache_(std::make_shared<SampleCache>()) {}

TestFunction::TestFunction(std::vector<Bump> terms)
    : terms_(std::move(terms)), cache_(std::make_shared<SampleCache>()) {
    if (terms_.empty()) throw std::invalid_argument("test function needs at least one term");
    for (const auto& b : terms_) b.validate();
}

bool TestFunction::is_zero() const {
    for (const auto& b : terms_)
        if (b.scale != 0.0 && (b.amplitude[0] != 0.0 || b.amplitude[1] != 0.0)) return false;
    return true;
}

Spinor TestFunction::evaluate(const FourVector& x) const {
    Spinor r{0.0, 0.0};
    for (const auto& b : terms_) {
        double chi = 1.0;
        for (int k = 0; k < 4 && chi != 0.0; ++k) chi *= bump_profile((x[k] - b.center[k]) / b.half_widths[k]);
        if (chi == 0.0) continue;
        r[0] += b.scale * b.amplitude[0] * chi;
        r[1] += b.scale * b.amplitude[1] * chi;
    }
    return r;
}

// Per axis: r e^{i w c} B(w r) with w = eta_kk zeta^k, accumulated as a
// mantissa times exp(exponent) so large imaginary arguments do not overflow.
Spinor TestFunction::fourier(const ComplexFourVector& zeta) const {
    Spinor r{0.0, 0.0};
    const cplx I(0, 1);
    for (const auto& b : terms_) {
        cplx mant = kFourierNorm * b.scale;
        cplx expo = 0;
        for (int k = 0; k < 4; ++k) {
            cplx w = kMetric[k] * zeta[k];
            cplx kappa = w * b.half_widths[k];
            mant *= b.half_widths[k] * bump_transform_scaled(kappa);
            expo += I * w * b.center[k] + std::abs(kappa.imag());
        }
        if (mant == 0.0) continue;
        cplx v = mant * std::exp(expo);
        r[0] += v * b.amplitude[0];
        r[1] += v * b.amplitude[1];
    }
    return r;
}

// Log-magnitude below which a sampled row is dropped.
constexpr double kNegligible = -60.0;

void TestFunction::sample_shell(cplx z, const ShellGrid& g, std::vector<Spinor>& out) const {
    out = *shell_samples(z, g);
}

std::shared_ptr<const std::vector<Spinor>> TestFunction::shell_samples(cplx z, const ShellGrid& g) const {
    SampleCache& c = *cache_;
    const SampleCache::Key key{z.real(), z.imag(), g.id()};
    {
        std::lock_guard lock(c.mu);
        auto it = c.entries.find(key);
        if (it != c.entries.end()) return it->second;
    }
    auto fresh = std::make_shared<std::vector<Spinor>>();
    sample_shell_direct(z, g, *fresh);
    const size_t size = fresh->size() * sizeof(Spinor);
    if (size > SampleCache::kMaxBytes / 2) return fresh;
    std::lock_guard lock(c.mu);
    auto it = c.entries.find(key);
    if (it != c.entries.end()) return it->second;
    while (c.bytes + size > SampleCache::kMaxBytes && !c.order.empty()) {
        auto old = c.entries.find(c.order.front());
        c.bytes -= old->second->size() * sizeof(Spinor);
        c.entries.erase(old);
        c.order.pop_front();
    }
    c.entries.emplace(key, fresh);
    c.order.push_back(key);
    c.bytes += size;
    return fresh;
}

void TestFunction::sample_shell_direct(cplx z, const ShellGrid& g, std::vector<Spinor>& out) const {
    const int R = g.n_radial(), D = g.n_dir();
    out.assign(static_cast<size_t>(R) * D, Spinor{0.0, 0.0});
    if (z == 0.0) {
        for (auto& v : out) v = fourier({});
        return;
    }
    const double mz = std::abs(z);
    const BumpRay ray = bump_ray(std::arg(z));

    parallel_for(R, [&](int i) {
        const double rho = g.radius(i);
        const cplx zr = z * rho;
        // Per spatial axis, interleaved [2 v + sign]: mantissa and real exponent.
        std::array<std::vector<cplx>, 3> mant;
        std::array<std::vector<double>, 3> expo;
        for (const auto& b : terms_) {
            if (b.scale == 0.0) continue;
            const double s0 = mz * rho * b.half_widths[0];
            if (s0 > kBumpCutoff) continue;
            const double e0 = -zr.imag() * b.center.t + std::abs(zr.imag()) * b.half_widths[0];
            double emax = e0;
            std::array<double, 3> shift{};
            for (int k = 1; k <= 3; ++k) {
                const auto& vals = g.axis_values(k);
                const size_t nv = vals.size();
                auto& E = expo[k - 1];
                E.assign(2 * nv, 0.0);
                const double r = b.half_widths[k], c = b.center[k];
                double ek = -std::numeric_limits<double>::infinity();
                for (size_t v = 0; v < nv; ++v) {
                    const double im = zr.imag() * vals[v];
                    // n^k > 0: w = -om; n^k < 0: w = +om.
                    E[2 * v] = im * c + std::abs(im) * r;
                    E[2 * v + 1] = -im * c + std::abs(im) * r;
                    if (mz * rho * vals[v] * r <= kBumpCutoff) ek = std::max({ek, E[2 * v], E[2 * v + 1]});
                }
                emax += ek;
                shift[k - 1] = ek;
            }
            // Everything in this row is damped below e^{kNegligible} of the peak.
            if (!(emax > kNegligible)) continue;
            cplx m0 = b.half_widths[0] * ray(s0) * std::polar(1.0, zr.real() * b.center.t);
            for (int k = 1; k <= 3; ++k) {
                const auto& vals = g.axis_values(k);
                const size_t nv = vals.size();
                auto& M = mant[k - 1];
                const auto& E = expo[k - 1];
                M.assign(2 * nv, 0.0);
                const double r = b.half_widths[k], c = b.center[k];
                const double rest = emax - shift[k - 1];
                for (size_t v = 0; v < nv; ++v) {
                    const double s = mz * rho * vals[v] * r;
                    if (s > kBumpCutoff) continue;
                    if (!(std::max(E[2 * v], E[2 * v + 1]) + rest > kNegligible)) continue;
                    const cplx om = zr * vals[v];
                    const cplx B = r * ray(s);
                    const cplx ph = std::polar(1.0, om.real() * c);
                    M[2 * v] = B * std::conj(ph);
                    M[2 * v + 1] = B * ph;
                }
            }
            const Spinor coef{kFourierNorm * b.scale * b.amplitude[0], kFourierNorm * b.scale * b.amplitude[1]};
            Spinor* row = &out[static_cast<size_t>(i) * D];
            if (emax < 600.0) {
                // Each axis factor is normalized by its largest exponent, the
                // total goes into the time factor; nothing can overflow.
                m0 *= std::exp(emax);
                for (int k = 0; k < 3; ++k)
                    for (size_t v = 0; v < mant[k].size(); ++v)
                        if (mant[k][v] != 0.0) mant[k][v] *= std::exp(expo[k][v] - shift[k]);
                const cplx* M1 = mant[0].data();
                const cplx* M2 = mant[1].data();
                const cplx* M3 = mant[2].data();
                for (int j = 0; j < D; ++j) {
                    const auto& pk = g.packed_index(j);
                    const cplx chi = m0 * M1[pk[0]] * M2[pk[1]] * M3[pk[2]];
                    row[j][0] += coef[0] * chi;
                    row[j][1] += coef[1] * chi;
                }
            } else {
                for (int j = 0; j < D; ++j) {
                    const auto& pk = g.packed_index(j);
                    cplx m = m0 * mant[0][pk[0]] * mant[1][pk[1]] * mant[2][pk[2]];
                    if (m == 0.0) continue;
                    double e = e0 + expo[0][pk[0]] + expo[1][pk[1]] + expo[2][pk[2]];
                    const cplx chi = m * std::exp(e);
                    row[j][0] += coef[0] * chi;
                    row[j][1] += coef[1] * chi;
                }
            }
        }
    });
}

double TestFunction::support_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& b : terms_) m = std::min(m, b.margin());
    return m;
}

double TestFunction::min_half_width() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& b : terms_)
        for (double r : b.half_widths) m = std::min(m, r);
    return m;
}

TestFunction TestFunction::conjugate() const {
    auto t = terms_;
    for (auto& b : t) {
        b.amplitude = {std::conj(b.amplitude[0]), std::conj(b.amplitude[1])};
        b.scale = std::conj(b.scale);
    }
    return TestFunction(std::move(t));
}

TestFunction TestFunction::scaled(cplx c) const {
    auto t = terms_;
    for (auto& b : t) b.scale *= c;
    return TestFunction(std::move(t));
}

TestFunction TestFunction::translated(const FourVector& a) const {
    auto t = terms_;
    for (auto& b : t) b.center = b.center + a;
    return TestFunction(std::move(t));
}

TestFunction TestFunction::dilated(double s) const {
    if (!(s > 0)) throw std::invalid_argument("dilation factor must be positive");
    auto t = terms_;
    for (auto& b : t) {
        b.center = b.center * s;
        for (auto& r : b.half_widths) r *= s;
    }
    return TestFunction(std::move(t));
}

TestFunction TestFunction::plus(const TestFunction& o) const {
    auto t = terms_;
    t.insert(t.end(), o.terms_.begin(), o.terms_.end());
    return TestFunction(std::move(t));
}

TestFunction standard_bump() {
    Bump b;
    b.center = {2.0, 0.0, 0.0, 0.0};
    b.half_widths = {0.5, 0.5, 0.5, 0.5};
    b.amplitude = {1.0, 0.0};
    b.scale = 1.0;
    return TestFunction({b});
}

TestFunction standard_pair() {
    Bump a;
    a.center = {2.0, 0.2, 0.0, -0.1};
    a.half_widths = {0.4, 0.3, 0.35, 0.3};
    a.amplitude = {1.0, cplx(0.0, 0.5)};
    a.scale = 1.0;
    Bump b;
    b.center = {1.7, -0.3, 0.2, 0.25};
    b.half_widths = {0.3, 0.25, 0.3, 0.2};
    b.amplitude = {cplx(0.3, -0.2), 1.0};
    b.scale = cplx(0.6, 0.4);
    return TestFunction({a, b});
}

TestFunction transform(const TestFunction& f, const FourVector& a, FieldKind kind, double phase) {
    cplx g = std::polar(1.0, kind == FieldKind::Psi ? phase : -phase);
    return f.translated(a).scaled(g);
}

TransformedFunction::TransformedFunction(TestFunction f, const SL2Element& A, const FourVector& a, FieldKind kind,
                                         double phase)
    : base_(std::move(f)), a_(a), L_(lorentz_from_sl2(A)), slow_(!A.is_identity()) {
    Linv_ = lorentz_inverse(L_);
    const SpinorMatrix& m = A.matrix();
    M_ = (kind == FieldKind::Psi ? m.transpose().inverse() : m.adjoint().inverse()) *
         std::polar(1.0, kind == FieldKind::Psi ? phase : -phase);
}

Spinor TransformedFunction::evaluate(const FourVector& x) const { return M_ * base_.evaluate(lorentz_apply(Linv_, x - a_)); }

Spinor TransformedFunction::fourier(const ComplexFourVector& zeta) const {
    const cplx I(0, 1);
    Spinor v = M_ * base_.fourier(lorentz_apply(Linv_, zeta));
    cplx ph = std::exp(I * mink_product(zeta, a_));
    return {ph * v[0], ph * v[1]};
}

Spinor TransformedFunction::fourier_direct(const ComplexFourVector& zeta, int order) const {
    const cplx I(0, 1);
    const auto& g = gauss_legendre(order);
    Spinor total{0.0, 0.0};
    for (const auto& b : base_.terms()) {
        Accumulator<cplx> acc;
        std::array<int, 4> idx{};
        for (idx[0] = 0; idx[0] < order; ++idx[0])
            for (idx[1] = 0; idx[1] < order; ++idx[1])
                for (idx[2] = 0; idx[2] < order; ++idx[2])
                    for (idx[3] = 0; idx[3] < order; ++idx[3]) {
                        FourVector y;
                        double w = 1.0, chi = 1.0;
                        for (int k = 0; k < 4; ++k) {
                            double u = g.x[idx[k]];
                            y[k] = b.center[k] + b.half_widths[k] * u;
                            w *= g.w[idx[k]] * b.half_widths[k];
                            chi *= bump_profile(u);
                        }
                        if (chi == 0.0) continue;
                        FourVector x = lorentz_apply(L_, y) + a_;
                        acc.add(w * chi * std::exp(I * mink_product(zeta, x)));
                    }
        cplx s = kFourierNorm * b.scale * acc.value();
        Spinor v = M_ * Spinor{b.amplitude[0] * s, b.amplitude[1] * s};
        total[0] += v[0];
        total[1] += v[1];
    }
    return total;
}

double TransformedFunction::support_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& b : base_.terms())
        for (int corner = 0; corner < 16; ++corner) {
            FourVector y;
            for (int k = 0; k < 4; ++k) y[k] = b.center[k] + ((corner >> k) & 1 ? 1.0 : -1.0) * b.half_widths[k];
            FourVector x = lorentz_apply(L_, y) + a_;
            m = std::min(m, x.t - x.spatial_norm());
        }
    return m;
}

Spinor WeylImage::fourier(const ComplexFourVector& zeta) const {
    SpinorMatrix up = spinor_matrix(zeta, Index::Upper);
    return (kind_ == FieldKind::Psi ? up.transpose() : up) * f_.fourier(zeta);
}

void WeylImage::sample_shell(cplx z, const ShellGrid& g, std::vector<Spinor>& out) const {
    f_.sample_shell(z, g, out);
    const int D = g.n_dir();
    for (int i = 0; i < g.n_radial(); ++i) {
        cplx w = z * g.radius(i);
        for (int j = 0; j < D; ++j) {
            const auto& n = g.direction(j);
            SpinorMatrix up = spinor_matrix(ComplexFourVector{{w, w * n[0], w * n[1], w * n[2]}}, Index::Upper);
            auto& v = out[static_cast<size_t>(i) * D + j];
            v = (kind_ == FieldKind::Psi ? up.transpose() : up) * v;
        }
    }
}

std::uint64_t Rng::next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double Rng::uniform(double a, double b) { return a + (b - a) * (static_cast<double>(next() >> 11) * 0x1.0p-53); }

double Rng::normal() {
    double u1 = (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

BumpFamily apex_family() {
    BumpFamily f;
    f.t_min = 0.28;
    f.t_max = 0.4;
    f.spatial_max = 0.05;
    f.width_min = 0.04;
    f.width_max = 0.08;
    f.margin = 0.03;
    return f;
}

TestFunction random_test_function(std::uint64_t seed, const BumpFamily& fam) {
    if (fam.min_terms < 1 || fam.max_terms < fam.min_terms) throw std::invalid_argument("bad term-count range");
    if (!(fam.margin > 0)) throw std::invalid_argument("safety margin must be positive");
    Rng rng(seed);
    rng.next();
    int nt = fam.min_terms + static_cast<int>(rng.next() % static_cast<std::uint64_t>(fam.max_terms - fam.min_terms + 1));
    std::vector<Bump> terms;
    for (int t = 0; t < nt; ++t) {
        Bump b;
        int tries = 0;
        do {
            if (++tries > 10000) throw std::invalid_argument("bump family cannot satisfy the safety margin");
            b.center.t = rng.uniform(fam.t_min, fam.t_max);
            for (int k = 1; k < 4; ++k) b.center[k] = rng.uniform(-fam.spatial_max, fam.spatial_max);
            for (auto& r : b.half_widths) r = rng.uniform(fam.width_min, fam.width_max);
        } while (b.margin() < fam.margin);
        b.amplitude = {cplx(rng.normal(), rng.normal()), cplx(rng.normal(), rng.normal())};
        b.scale = std::polar(rng.uniform(0.5, 1.5), rng.uniform(0.0, 2.0 * std::numbers::pi));
        terms.push_back(b);
    }
    return TestFunction(std::move(terms));
}

double spinor_norm(const Spinor& v) { return std::sqrt(std::norm(v[0]) + std::norm(v[1])); }

std::vector<PaleyWienerSample> paley_wiener_samples(int n_z, int n_p) {
    if (n_z < 2 || n_p < 2) throw std::invalid_argument("need at least two z and p levels");
    std::vector<std::array<double, 3>> dirs;
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b)
            for (int c = -1; c <= 1; ++c) {
                if (a == 0 && b == 0 && c == 0) continue;
                double n = std::sqrt(double(a * a + b * b + c * c));
                dirs.push_back({a / n, b / n, c / n});
            }
    std::vector<PaleyWienerSample> out;
    for (int iz = 0; iz < n_z; ++iz) {
        cplx z = std::polar(1.0, std::numbers::pi * iz / (n_z - 1));
        for (int ip = 0; ip < n_p; ++ip) {
            double rho = 0.25 * std::pow(2.0, 9.0 * ip / (n_p - 1));
            for (const auto& d : dirs) out.push_back({z, {rho * d[0], rho * d[1], rho * d[2]}});
        }
    }
    return out;
}

PaleyWienerReport paley_wiener_check(const SpinorSource& f, int N, const std::vector<PaleyWienerSample>& samples) {
    if (N < 0) throw std::invalid_argument("N must be nonnegative");
    PaleyWienerReport rep;
    rep.N = N;
    rep.delta = f.support_margin();
    rep.n_samples = static_cast<int>(samples.size());
    std::vector<double> ratios;
    for (const auto& s : samples) {
        if (s.z.imag() < 0) throw std::invalid_argument("Paley-Wiener samples need Im z >= 0");
        double p = std::sqrt(s.p[0] * s.p[0] + s.p[1] * s.p[1] + s.p[2] * s.p[2]);
        cplx w = s.z;
        Spinor v = f.fourier({{w * p, w * s.p[0], w * s.p[1], w * s.p[2]}});
        double val = spinor_norm(v) * std::pow(1.0 + std::abs(s.z) * p, N) * std::exp(rep.delta * p * s.z.imag());
        ratios.push_back(val);
        rep.C_N = std::max(rep.C_N, val);
    }
    for (double r : ratios) rep.worst_ratio = std::max(rep.worst_ratio, rep.C_N > 0 ? r / rep.C_N : 0.0);
    return rep;
}

}  // namespace hb
