#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include "hotbang/minkowski.hpp"
#include "hotbang/quad.hpp"

namespace hb {

// b(u) = exp(-1/(1-u^2)) on |u| < 1, zero elsewhere.
double bump_profile(double u);

// Bs(kappa) = e^{-|Im kappa|} * int_{-1}^{1} e^{i kappa u} b(u) du.
// Gauss-Legendre with order raised with |kappa|; zero beyond kBumpDirectLimit.
cplx bump_transform_scaled(cplx kappa, int base_order = 96);
cplx bump_transform(cplx kappa, int base_order = 96);

// Beyond this |kappa| the scaled transform is below ~1e-11 of its peak.
inline constexpr double kBumpCutoff = 400.0;
inline constexpr double kBumpDirectLimit = 480.0;

// Piecewise Chebyshev table of s -> Bs(e^{i theta} s) on [0, kBumpCutoff].
// Panels are built on first use.
class BumpRayTable {
public:
    explicit BumpRayTable(double theta);
    cplx operator()(double s) const;
    double theta() const { return theta_; }

private:
    const cplx* panel(int p) const;

    double theta_;
    mutable std::vector<cplx> coef_;
    mutable std::unique_ptr<std::atomic<bool>[]> ready_;
    mutable std::mutex mu_;
};

// Ray lookup using evenness and reality of b; theta in (-pi, pi].
struct BumpRay {
    std::shared_ptr<const BumpRayTable> table;
    bool conjugate = false;
    cplx operator()(double s) const {
        cplx v = (*table)(s);
        return conjugate ? std::conj(v) : v;
    }
};
BumpRay bump_ray(double theta);

// Anything with a complex-argument Fourier transform that can be put on the shell.
class SpinorSource {
public:
    virtual ~SpinorSource() = default;
    virtual Spinor fourier(const ComplexFourVector& zeta) const = 0;
    // out[i * n_dir + j] = fourier(z * rho_i * (1, n_j)).
    virtual void sample_shell(cplx z, const ShellGrid& g, std::vector<Spinor>& out) const;
    // Same values, possibly shared with a cache; never modified afterwards.
    virtual std::shared_ptr<const std::vector<Spinor>> shell_samples(cplx z, const ShellGrid& g) const;
    // min over the support of x0 - |x|.
    virtual double support_margin() const = 0;
    // Smallest support half-width; sets the momentum scale of the transform.
    virtual double min_half_width() const = 0;
};

struct Bump {
    FourVector center;
    std::array<double, 4> half_widths{1, 1, 1, 1};
    Spinor amplitude{1.0, 0.0};
    cplx scale = 1.0;

    double margin() const;
    void validate() const;
};

enum class FieldKind { Psi, PsiBar };

class TestFunction : public SpinorSource {
public:
    TestFunction();
    explicit TestFunction(std::vector<Bump> terms);

    const std::vector<Bump>& terms() const { return terms_; }
    bool is_zero() const;

    Spinor evaluate(const FourVector& x) const;
    Spinor fourier(const ComplexFourVector& zeta) const override;
    void sample_shell(cplx z, const ShellGrid& g, std::vector<Spinor>& out) const override;
    std::shared_ptr<const std::vector<Spinor>> shell_samples(cplx z, const ShellGrid& g) const override;
    double support_margin() const override;
    double min_half_width() const override;

    // Componentwise complex conjugate function.
    TestFunction conjugate() const;
    TestFunction scaled(cplx c) const;
    TestFunction translated(const FourVector& a) const;
    // f_s(x) = f(x / s).
    TestFunction dilated(double s) const;
    TestFunction plus(const TestFunction& o) const;

private:
    void sample_shell_direct(cplx z, const ShellGrid& g, std::vector<Spinor>& out) const;

    struct SampleCache;
    std::vector<Bump> terms_;
    // Shell samples keyed by ray and grid; shared by copies, bounded in size.
    std::shared_ptr<SampleCache> cache_;
};

TestFunction standard_bump();
// Two-term function; single symmetric bumps give L(phi) = L(pi - phi).
TestFunction standard_pair();

// Translation and gauge phase keep the product form.
TestFunction transform(const TestFunction& f, const FourVector& a, FieldKind kind, double phase);

// General Poincare image (A^T)^{-1} f(Lambda^{-1}(x - a)) for psi,
// (A^dagger)^{-1} f(...) for psibar, times the gauge phase.
class TransformedFunction : public SpinorSource {
public:
    TransformedFunction(TestFunction f, const SL2Element& A, const FourVector& a, FieldKind kind, double phase);

    Spinor evaluate(const FourVector& x) const;
    // Pull-back identity e^{i(zeta,a)} M f~(Lambda^{-1} zeta).
    Spinor fourier(const ComplexFourVector& zeta) const override;
    // Non-factorized 4D Gauss-Legendre quadrature of the transformed integrand.
    Spinor fourier_direct(const ComplexFourVector& zeta, int order) const;
    double support_margin() const override;
    double min_half_width() const override { return base_.min_half_width(); }
    bool slow_path() const { return slow_; }

private:
    TestFunction base_;
    FourVector a_;
    SpinorMatrix M_;
    LorentzMatrix L_, Linv_;
    bool slow_;
};

// Fourier image of the Weyl operator: zeta -> (zeta^M)^T f~(zeta) for the psi
// slot, zeta -> zeta^M f~(zeta) for the psibar slot.
class WeylImage : public SpinorSource {
public:
    WeylImage(const SpinorSource& f, FieldKind kind) : f_(f), kind_(kind) {}
    Spinor fourier(const ComplexFourVector& zeta) const override;
    void sample_shell(cplx z, const ShellGrid& g, std::vector<Spinor>& out) const override;
    double support_margin() const override { return f_.support_margin(); }
    double min_half_width() const override { return f_.min_half_width(); }

private:
    const SpinorSource& f_;
    FieldKind kind_;
};

// Deterministic generator (SplitMix64), independent of the standard library's distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    double uniform(double a = 0.0, double b = 1.0);
    double normal();

private:
    std::uint64_t state_;
};

struct BumpFamily {
    int min_terms = 2;
    int max_terms = 3;
    double t_min = 1.2, t_max = 2.5;
    double spatial_max = 0.5;
    double width_min = 0.15, width_max = 0.45;
    double margin = 0.1;
};

// Compact functions close to the apex of the cone.
BumpFamily apex_family();

TestFunction random_test_function(std::uint64_t seed, const BumpFamily& fam = {});

struct PaleyWienerSample {
    cplx z;
    std::array<double, 3> p;
};

struct PaleyWienerReport {
    int N = 0;
    double delta = 0;
    double C_N = 0;
    double worst_ratio = 0;
    int n_samples = 0;
};

// Deterministic sample set: z on rays in the closed upper half plane, p on a radial/angular grid.
std::vector<PaleyWienerSample> paley_wiener_samples(int n_z, int n_p);
PaleyWienerReport paley_wiener_check(const SpinorSource& f, int N, const std::vector<PaleyWienerSample>& samples);

double spinor_norm(const Spinor& v);

}  // namespace hb
