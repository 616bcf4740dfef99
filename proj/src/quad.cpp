#include "hotbang/quad.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>
#include <tuple>

namespace hb {

namespace {

GaussRule compute_gauss_legendre(int n) {
    GaussRule r;
    r.x.assign(n, 0.0);
    r.w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double p0 = 1.0, p1 = 0.0;
        for (int k = 1; k <= n; ++k) {
            double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        double w = 2.0 / ((1.0 - z * z) * dp * dp);
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.x[n / 2] = 0.0;
    return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("Gauss-Legendre order must be positive");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussRule>(compute_gauss_legendre(n));
    return *slot;
}

int thread_count() {
    static const int n = [] {
        int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
        if (const char* env = std::getenv("HOTBANG_THREADS")) {
            int cap = std::atoi(env);
            if (cap >= 1) return std::min(cap, hw);
        }
        return hw;
    }();
    return n;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
    int nt = std::min(thread_count(), n);
    if (nt <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t)
        pool.emplace_back([&, t] {
            for (int i = t; i < n; i += nt) fn(i);
        });
    for (auto& th : pool) th.join();
}

void QuadConfig::validate() const {
    if (radial_order < 4 || cos_order < 4 || azimuth_order < 4)
        throw std::invalid_argument("quadrature orders must be >= 4");
    if (!(tol > 0)) throw std::invalid_argument("quadrature tolerance must be positive");
    if (!(radial_scale > 0) || !std::isfinite(radial_scale))
        throw std::invalid_argument("radial scale must be positive");
}

QuadConfig QuadConfig::doubled() const {
    QuadConfig c = *this;
    c.radial_order *= 2;
    c.cos_order *= 2;
    c.azimuth_order *= 2;
    c.self_check = false;
    return c;
}

QuadConfig QuadConfig::with_scale(double s) const {
    QuadConfig c = *this;
    c.radial_scale = s;
    return c;
}

std::vector<QuadConfig> refinement_ladder(const QuadConfig& cfg) {
    auto round_to = [](double v, int m) { return std::max(m, m * static_cast<int>(std::lround(v / m))); };
    std::vector<QuadConfig> out;
    for (double f : {1.0 / 3.0, 0.5, 2.0 / 3.0}) {
        QuadConfig c = cfg;
        c.radial_order = std::max(8, round_to(f * cfg.radial_order, 4));
        c.cos_order = std::max(8, round_to(f * cfg.cos_order, 2));
        c.azimuth_order = std::max(8, round_to(f * cfg.azimuth_order, 4));
        if (c.radial_order < cfg.radial_order) out.push_back(c);
    }
    out.push_back(cfg);
    for (int m : {2, 4}) {
        QuadConfig c = cfg;
        c.radial_order *= m;
        out.push_back(c);
    }
    for (auto& c : out) c.self_check = false;
    return out;
}

ShellGrid::ShellGrid(const QuadConfig& cfg) : scale_(cfg.radial_scale) {
    static std::atomic<std::uint64_t> serial{0};
    id_ = ++serial;
    cfg.validate();
    const auto& gr = gauss_legendre(cfg.radial_order);
    for (int i = 0; i < cfg.radial_order; ++i) {
        double s = 0.5 * (gr.x[i] + 1.0);
        double ws = 0.5 * gr.w[i];
        double rho = scale_ * s / (1.0 - s);
        double jac = scale_ / ((1.0 - s) * (1.0 - s));
        rho_.push_back(rho);
        wr_.push_back(ws * jac * 0.5 * rho);
    }

    const auto& gc = gauss_legendre(cfg.cos_order);
    const int M = cfg.azimuth_order;
    const double wa = 2.0 * std::numbers::pi / M;
    std::vector<double> ca(M), sa(M);
    for (int l = 0; l < M; ++l) {
        if (M % 4 == 0) {
            // Quadrant-reduced so that |cos| and |sin| repeat bit-exactly.
            int Q = M / 4;
            int q = l / Q, i = l - q * Q;
            double cb = std::cos(2.0 * std::numbers::pi * (i + 0.5) / M);
            double sb = std::cos(2.0 * std::numbers::pi * (Q - 1 - i + 0.5) / M);
            switch (q) {
                case 0: ca[l] = cb; sa[l] = sb; break;
                case 1: ca[l] = -sb; sa[l] = cb; break;
                case 2: ca[l] = -cb; sa[l] = -sb; break;
                default: ca[l] = sb; sa[l] = -cb; break;
            }
        } else {
            double a = 2.0 * std::numbers::pi * (l + 0.5) / M;
            ca[l] = std::cos(a);
            sa[l] = std::sin(a);
        }
    }
    for (int t = 0; t < cfg.cos_order; ++t) {
        double c = gc.x[t];
        double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        for (int l = 0; l < M; ++l) {
            dir_.push_back({s * ca[l], s * sa[l], c});
            wd_.push_back(gc.w[t] * wa);
        }
    }

    for (int k = 0; k < 3; ++k) {
        std::vector<double> mags;
        mags.reserve(dir_.size());
        for (const auto& d : dir_) mags.push_back(std::abs(d[k]));
        std::vector<double> uniq = mags;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        axis_vals_[k] = uniq;
        axis_idx_[k].resize(dir_.size());
        axis_sgn_[k].resize(dir_.size());
        for (size_t j = 0; j < dir_.size(); ++j) {
            axis_idx_[k][j] = static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), mags[j]) - uniq.begin());
            axis_sgn_[k][j] = dir_[j][k] < 0 ? -1 : 1;
        }
    }
    packed_.resize(dir_.size());
    for (size_t j = 0; j < dir_.size(); ++j)
        for (int k = 0; k < 3; ++k) packed_[j][k] = 2 * axis_idx_[k][j] + (axis_sgn_[k][j] < 0 ? 1 : 0);
}

std::shared_ptr<const ShellGrid> shell_grid(const QuadConfig& cfg) {
    using Key = std::tuple<int, int, int, double>;
    static std::mutex mu;
    static std::map<Key, std::shared_ptr<const ShellGrid>> cache;
    Key key{cfg.radial_order, cfg.cos_order, cfg.azimuth_order, cfg.radial_scale};
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    if (cache.size() > 256) cache.clear();
    auto g = std::make_shared<const ShellGrid>(cfg);
    cache.emplace(key, g);
    return g;
}

namespace {

SeriesResult summed(const std::function<double(int)>& term, double tol, int max_n, bool record, bool paired) {
    if (!(tol > 0)) throw std::invalid_argument("series tolerance must be positive");
    SeriesResult r;
    CompensatedSum acc;
    double prev_mag = 0;
    int streak = 0;
    auto next = [&](int n) {
        double t = term(n);
        if (!std::isfinite(t)) throw ConvergenceError("non-finite series term at index " + std::to_string(n));
        double m = std::abs(t);
        streak = (n > 0 && m <= prev_mag) ? streak + 1 : 0;
        prev_mag = m;
        return t;
    };
    int n = 0;
    while (n <= max_n) {
        double t = next(n);
        if (std::abs(t) < tol && streak >= 3) {
            r.value = acc.value();
            r.error_bound = std::abs(t);
            r.n_terms = n;
            return r;
        }
        if (paired) {
            double t1 = next(n + 1);
            acc.add(t + t1);
            n += 2;
        } else {
            acc.add(t);
            n += 1;
        }
        if (record) r.partial_sums.push_back(acc.value());
    }
    throw ConvergenceError("series did not meet the stopping rule within " + std::to_string(max_n) + " terms");
}

}  // namespace

SeriesResult alternating_sum(const std::function<double(int)>& term, double tol, int max_n, bool record) {
    return summed(term, tol, max_n, record, false);
}

SeriesResult bracketed_alternating_sum(const std::function<double(int)>& term, double tol, int max_n,
                                       bool record) {
    return summed(term, tol, max_n, record, true);
}

std::vector<double> central_stencil(int d, int acc) {
    if (d < 0 || (acc != 2 && acc != 4 && acc != 6)) throw std::invalid_argument("unsupported stencil");
    if (d == 0) return {1.0};
    int npts = 2 * ((d + 1) / 2) - 1 + acc;
    int P = (npts - 1) / 2;
    // Fornberg's recursion at x0 = 0 on offsets -P..P.
    std::vector<double> xs;
    for (int k = -P; k <= P; ++k) xs.push_back(k);
    int N = npts;
    std::vector<std::vector<std::vector<double>>> c(
        d + 1, std::vector<std::vector<double>>(N, std::vector<double>(N, 0.0)));
    c[0][0][0] = 1.0;
    double c1 = 1.0;
    for (int n = 1; n < N; ++n) {
        double c2 = 1.0;
        for (int nu = 0; nu < n; ++nu) {
            double c3 = xs[n] - xs[nu];
            c2 *= c3;
            for (int m = 0; m <= std::min(n, d); ++m) {
                double prev = (m > 0) ? c[m - 1][n - 1][nu] : 0.0;
                c[m][n][nu] = (xs[n] * c[m][n - 1][nu] - m * prev) / c3;
            }
        }
        for (int m = 0; m <= std::min(n, d); ++m) {
            double prev = (m > 0) ? c[m - 1][n - 1][n - 1] : 0.0;
            c[m][n][n] = c1 / c2 * (m * prev - xs[n - 1] * c[m][n - 1][n - 1]);
        }
        c1 = c2;
    }
    std::vector<double> w(N);
    for (int k = 0; k < N; ++k) w[k] = c[d][N - 1][k];
    return w;
}

double finite_difference(const std::function<double(const std::vector<double>&)>& g, const std::vector<double>& x,
                         const std::vector<int>& directions, double step, int order) {
    if (order != 2 && order != 4) throw std::invalid_argument("finite difference order must be 2 or 4");
    if (!(step > 0)) throw std::invalid_argument("finite difference step must be positive");
    std::map<int, int> mult;
    for (int a : directions) {
        if (a < 0 || a >= static_cast<int>(x.size())) throw std::invalid_argument("direction out of range");
        ++mult[a];
    }
    std::vector<int> axes;
    std::vector<std::vector<double>> stencils;
    std::vector<int> derivs;
    for (auto [axis, d] : mult) {
        axes.push_back(axis);
        stencils.push_back(central_stencil(d, order));
        derivs.push_back(d);
    }
    double scale = 1.0;
    for (int d : derivs) scale *= std::pow(step, d);

    // Stencil weights sum to zero; differencing against the center makes
    // constants exact.
    const double g0 = g(x);
    CompensatedSum acc;
    std::vector<int> idx(axes.size(), 0);
    std::vector<double> pt = x;
    while (true) {
        double w = 1.0;
        for (size_t a = 0; a < axes.size(); ++a) {
            const auto& st = stencils[a];
            int P = static_cast<int>(st.size() - 1) / 2;
            w *= st[idx[a]];
            pt[axes[a]] = x[axes[a]] + (idx[a] - P) * step;
        }
        if (w != 0.0) acc.add(w * (g(pt) - g0));
        size_t a = 0;
        for (; a < axes.size(); ++a) {
            if (++idx[a] < static_cast<int>(stencils[a].size())) break;
            idx[a] = 0;
        }
        if (a == axes.size()) break;
    }
    return acc.value() / scale;
}

Extrapolation extrapolate_limit(const std::vector<std::pair<double, double>>& samples, ExtrapolationKind kind,
                                double first_exponent, double exponent_step) {
    if (samples.size() < 3) throw std::invalid_argument("extrapolation needs at least 3 samples");
    for (size_t i = 1; i < samples.size(); ++i)
        if (!(samples[i].first < samples[i - 1].first) || !(samples[i].first > 0))
            throw std::invalid_argument("extrapolation steps must decrease and stay positive");
    Extrapolation out;
    const size_t n = samples.size();
    for (size_t i = 2; i < n; ++i) {
        double d1 = std::abs(samples[i].second - samples[i - 1].second);
        double d0 = std::abs(samples[i - 1].second - samples[i - 2].second);
        if (d1 > d0) out.monotone = false;
    }

    if (kind == ExtrapolationKind::ExponentialTail) {
        auto aitken = [&](size_t i) {
            double v0 = samples[i - 2].second, v1 = samples[i - 1].second, v2 = samples[i].second;
            double den = (v2 - v1) - (v1 - v0);
            if (den == 0.0) return v2;
            return v2 - (v2 - v1) * (v2 - v1) / den;
        };
        out.limit = aitken(n - 1);
        out.uncertainty = n >= 4 ? std::abs(out.limit - aitken(n - 2)) : std::abs(out.limit - samples[n - 1].second);
        return out;
    }

    // T[i][k]: k-th elimination stage ending at sample i.
    std::vector<std::vector<double>> T(n);
    for (size_t i = 0; i < n; ++i) {
        T[i].push_back(samples[i].second);
        for (size_t k = 1; k <= i; ++k) {
            double p = first_exponent + (k - 1) * exponent_step;
            // Both entries carry c h^p with the same c on geometric steps.
            double ratio = std::pow(samples[i - 1].first / samples[i].first, p);
            T[i].push_back(T[i][k - 1] + (T[i][k - 1] - T[i - 1][k - 1]) / (ratio - 1.0));
        }
    }
    out.limit = T[n - 1][n - 1];
    out.uncertainty = std::abs(T[n - 1][n - 1] - T[n - 1][n - 2]);
    return out;
}

}  // namespace hb
