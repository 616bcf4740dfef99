#pragma once

#include <array>
#include <cstdint>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "hotbang/minkowski.hpp"

namespace hb {

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double v) {
        double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0, comp_ = 0;
};

template <class T>
struct Accumulator;

template <>
struct Accumulator<double> {
    CompensatedSum s;
    void add(double v) { s.add(v); }
    double value() const { return s.value(); }
};

template <>
struct Accumulator<cplx> {
    CompensatedSum re, im;
    void add(cplx v) {
        re.add(v.real());
        im.add(v.imag());
    }
    cplx value() const { return {re.value(), im.value()}; }
};

template <>
struct Accumulator<SpinorMatrix> {
    std::array<Accumulator<cplx>, 4> e;
    void add(const SpinorMatrix& v) {
        for (int i = 0; i < 4; ++i) e[i].add(v.m[i]);
    }
    SpinorMatrix value() const {
        SpinorMatrix r;
        for (int i = 0; i < 4; ++i) r.m[i] = e[i].value();
        return r;
    }
};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(cplx v) { return std::abs(v); }
inline double magnitude(const SpinorMatrix& v) { return v.max_abs(); }

struct GaussRule {
    std::vector<double> x, w;
};

// Gauss-Legendre nodes and weights on [-1, 1]; cached per order.
const GaussRule& gauss_legendre(int n);

// Number of worker threads; HOTBANG_THREADS caps it.
int thread_count();

// Runs fn(i) for i in [0, n). Callers write results into per-index slots
// and reduce them in index order afterwards.
void parallel_for(int n, const std::function<void(int)>& fn);

enum class DecayClass { Exponential, RapidPolynomial };

struct QuadConfig {
    int radial_order = 96;
    int cos_order = 32;
    int azimuth_order = 64;
    double tol = 1e-9;
    // rho = radial_scale * s / (1 - s)
    double radial_scale = 1.0;
    bool self_check = false;
    // Structured integrals walk refinement_ladder() until two levels agree.
    bool refine = true;

    void validate() const;
    QuadConfig doubled() const;
    QuadConfig with_scale(double s) const;
    bool operator==(const QuadConfig&) const = default;
};

// Spherical product rule for the measure d^3p / (2|p|).
class ShellGrid {
public:
    explicit ShellGrid(const QuadConfig& cfg);

    int n_radial() const { return static_cast<int>(rho_.size()); }
    int n_dir() const { return static_cast<int>(dir_.size()); }
    double radius(int i) const { return rho_[i]; }
    double radial_weight(int i) const { return wr_[i]; }
    const std::array<double, 3>& direction(int j) const { return dir_[j]; }
    double direction_weight(int j) const { return wd_[j]; }
    double weight(int i, int j) const { return wr_[i] * wd_[j]; }
    double scale() const { return scale_; }
    // Distinct for every grid built in this process.
    std::uint64_t id() const { return id_; }

    // Distinct |n^k| values over all directions for spatial axis k in {1,2,3},
    // with the index and sign of each direction's component.
    const std::vector<double>& axis_values(int k) const { return axis_vals_[k - 1]; }
    int axis_index(int j, int k) const { return axis_idx_[k - 1][j]; }
    int axis_sign(int j, int k) const { return axis_sgn_[k - 1][j]; }
    // 2 * axis_index + (sign < 0) for k = 1..3, packed per direction.
    const std::array<int, 3>& packed_index(int j) const { return packed_[j]; }

private:
    double scale_;
    std::uint64_t id_;
    std::vector<double> rho_, wr_;
    std::vector<std::array<double, 3>> dir_;
    std::vector<double> wd_;
    std::array<std::vector<double>, 3> axis_vals_;
    std::array<std::vector<int>, 3> axis_idx_;
    std::array<std::vector<signed char>, 3> axis_sgn_;
    std::vector<std::array<int, 3>> packed_;
};

std::shared_ptr<const ShellGrid> shell_grid(const QuadConfig& cfg);

template <class T>
struct ShellResult {
    T value{};
    double error = 0;
    bool converged = true;
};

// Sums weight(i,j) * fn(i,j) over all nodes; per-radius partial sums are
// reduced in ascending radial order so the result is thread-count independent.
template <class T, class F>
T integrate_nodes(const ShellGrid& g, F&& fn) {
    std::vector<T> partial(g.n_radial());
    parallel_for(g.n_radial(), [&](int i) {
        Accumulator<T> acc;
        for (int j = 0; j < g.n_dir(); ++j) acc.add(fn(i, j) * g.direction_weight(j));
        partial[i] = acc.value() * g.radial_weight(i);
    });
    Accumulator<T> total;
    for (const auto& v : partial) total.add(v);
    return total.value();
}

template <class T>
using ShellIntegrand = std::function<T(const std::array<double, 3>&)>;

template <class T>
T shell_integrate_once(const ShellIntegrand<T>& h, const QuadConfig& cfg) {
    auto g = shell_grid(cfg);
    return integrate_nodes<T>(*g, [&](int i, int j) {
        const auto& n = g->direction(j);
        double r = g->radius(i);
        return h({r * n[0], r * n[1], r * n[2]});
    });
}

// Integral of h over R^3 with measure d^3p/(2|p|). In self-check mode the
// orders are doubled and the result flagged when they disagree beyond tol.
template <class T>
ShellResult<T> shell_integrate(const ShellIntegrand<T>& h, const QuadConfig& cfg,
                               DecayClass = DecayClass::Exponential) {
    cfg.validate();
    ShellResult<T> r;
    r.value = shell_integrate_once<T>(h, cfg);
    if (cfg.self_check) {
        T fine = shell_integrate_once<T>(h, cfg.doubled());
        r.error = magnitude(fine - r.value);
        r.converged = r.error <= cfg.tol * std::max(magnitude(fine), 1e-300);
        r.value = fine;
    }
    return r;
}

// Coarse-to-fine orders ending at cfg, then cfg with radial order x2 and x4.
// Slowly decaying real-argument integrands need the extra radial levels.
std::vector<QuadConfig> refinement_ladder(const QuadConfig& cfg);

// eval(QuadConfig) -> T. With cfg.refine the ladder is walked until successive
// levels agree within cfg.tol * |value| + abs_floor; below the configured orders
// two consecutive agreements are required, since coarse levels can agree by
// chance. Otherwise cfg alone is used (plus the doubled check when cfg.self_check).
template <class T, class F>
ShellResult<T> refined(F&& eval, const QuadConfig& cfg, double abs_floor = 0.0) {
    cfg.validate();
    ShellResult<T> r;
    if (!cfg.refine) {
        r.value = eval(cfg);
        if (cfg.self_check) {
            T fine = eval(cfg.doubled());
            r.error = magnitude(fine - r.value);
            r.converged = r.error <= cfg.tol * magnitude(fine) + abs_floor;
            r.value = fine;
        }
        return r;
    }
    auto levels = refinement_ladder(cfg);
    size_t base = 0;
    while (base + 1 < levels.size() && levels[base].radial_order < cfg.radial_order) ++base;
    T prev = eval(levels[0]);
    bool agreed = false;
    for (size_t k = 1; k < levels.size(); ++k) {
        T v = eval(levels[k]);
        r.value = v;
        r.error = magnitude(v - prev);
        const bool ok = r.error <= cfg.tol * magnitude(v) + abs_floor;
        if (ok && (agreed || k > base)) return r;
        agreed = ok;
        prev = v;
    }
    r.converged = false;
    return r;
}

struct SeriesResult {
    double value = 0;
    double error_bound = 0;
    int n_terms = 0;
    std::vector<double> partial_sums;
};

// Stops at the first n with |t_n| < tol after three consecutive non-increasing
// magnitudes; value is the sum of t_0..t_{n-1}, bound is |t_n|.
SeriesResult alternating_sum(const std::function<double(int)>& term, double tol, int max_n,
                             bool record_partials = false);

// Same stopping rule checked only at even n; terms are added in pairs.
SeriesResult bracketed_alternating_sum(const std::function<double(int)>& term, double tol, int max_n,
                                       bool record_partials = false);

// Central-difference stencil weights for derivative order d and accuracy acc.
std::vector<double> central_stencil(int d, int acc);

// Mixed partial along the axes listed in `directions` (repeats allowed).
double finite_difference(const std::function<double(const std::vector<double>&)>& g,
                         const std::vector<double>& x, const std::vector<int>& directions, double step,
                         int order);

enum class ExtrapolationKind { RichardsonPoly, ExponentialTail };

struct Extrapolation {
    double limit = 0;
    double uncertainty = 0;
    bool monotone = true;
};

// samples: (h, value) with h geometrically decreasing. Richardson assumes
// v(h) = L + a1 h^p + a2 h^(p+step) + ... with p = first_exponent.
Extrapolation extrapolate_limit(const std::vector<std::pair<double, double>>& samples, ExtrapolationKind kind,
                                double first_exponent = 2.0, double exponent_step = 2.0);

}  // namespace hb
