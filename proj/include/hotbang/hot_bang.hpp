#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hotbang/quad.hpp"
#include "hotbang/states.hpp"
#include "hotbang/testfn.hpp"

namespace hb {

// phi_n = arg(1 + i n lambda), cos^3 phi_n = (1 + n^2 lambda^2)^{-3/2}.
struct SeriesSchedule {
    double lambda = 1.0;
    // Absolute stopping tolerance on a single term.
    double tol = 1e-12;
    int max_terms = 200000;

    void validate() const;
    double phi(int n) const;
    double cos3(int n) const;
    cplx z(int n) const { return {1.0, n * lambda}; }
};

enum class SeriesKind { A, B };

struct ProfileCheck {
    bool positive = true;
    bool convex = true;
    double worst_convexity = 0;
};

struct ConvexProfile {
    std::function<double(double)> fn;
    std::string provenance;

    double operator()(double phi) const { return fn(phi); }
    // Positivity and midpoint convexity on an n-point grid of [0, pi].
    ProfileCheck check(int n = 101) const;
};

ConvexProfile synthetic_profile(const std::string& name, std::function<double(double)> fn);

// L(phi) = int d^3p/(2|p|) f~(e^{i phi} p')^T p'_M conj(f~(e^{i phi} p')).
ShellResult<double> L_phi(const TestFunction& f, double phi, const QuadConfig& cfg = {});

// Memoized L for one test function; angles are keyed exactly.
class LProfile {
public:
    LProfile(TestFunction f, QuadConfig cfg = {});
    const ShellResult<double>& at(double phi);
    double operator()(double phi) { return at(phi).value; }
    // L(0) + L(pi); 2 pi times this is the anticommutator of the conjugate pair.
    double scale();
    const TestFunction& function() const { return f_; }
    size_t evaluations() const { return memo_.size(); }
    ConvexProfile as_profile();

private:
    TestFunction f_;
    QuadConfig cfg_;
    std::map<double, ShellResult<double>> memo_;
};

// F_alpha(z) = int f~(z^{1+alpha} p')^T p'_M conj(f~(conj(z)^{alpha-1} p')); alpha = 0 gives F(z).
// Rescaling p' by z^{-alpha} on the positive axis gives F(z) = z^{3 alpha} F_alpha(z).
ShellResult<cplx> F_z(const TestFunction& f, cplx z, double alpha = 0.0, const QuadConfig& cfg = {});

struct HotBangValue {
    double value = 0;
    double tail_bound = 0;
    double quad_error = 0;
    int n_terms = 0;
    // 2 pi (L(0) + L(pi)).
    double scale = 0;
    std::vector<double> partial_sums;
};

// omega_hb(psibar(conj f) psi(f)) and omega_hb(psi(f) psibar(conj f)) from the
// regrouped alternating series
//   A = sum_n (-1)^n [g(phi_n) + g(pi - phi_{n+1})],  B = sum_n (-1)^n [g(pi - phi_n) + g(phi_{n+1})],
// g = cos^3 * L; value = 2 pi A (PsiBarPsi) or 2 pi B (PsiPsiBar).
HotBangValue hotbang_smeared(LProfile& L, double lambda, Ordering ord, const EvalOptions& opt = {},
                             bool record_partials = false);
HotBangValue hotbang_smeared(const TestFunction& f, double lambda, Ordering ord, const EvalOptions& opt = {});

// omega_hb - omega_vacuum for the PsiBarPsi conjugate pairing, summed directly:
//   2 pi sum_{n>=1} (-1)^n cos^3(phi_n) [L(phi_n) - L(pi - phi_n)].
// rel_tol is relative to the first term.
HotBangValue thermal_excess(LProfile& L, double lambda, double rel_tol = 1e-8, int max_terms = 20000);

// General pair (f slot psibar, g slot psi):
//   PsiBarPsi = 2 pi sum_n (-1)^n [S(g, z_n; f, -conj z_n) + S(g, -conj z_{n+1}; f, z_{n+1})],
//   PsiPsiBar = 2 pi sum_n (-1)^n [S(g, -conj z_n; f, z_n) + S(g, z_{n+1}; f, -conj z_{n+1})],
// S(g, a; f, b) = int g~(a p')^T p'_M f~(b p').
TwoPointResult hotbang_two_point(const SpinorSource& f, const SpinorSource& g, double lambda, Ordering ord,
                                 const EvalOptions& opt = {});

struct SeriesTermsResult {
    double value = 0;
    int n_terms = 0;
    std::vector<double> partial_sums;
};

// Brute-force partial sums of A_L or B_L with g = |cos^3| * profile, run until a
// term falls below schedule.tol.
SeriesTermsResult series_terms(const ConvexProfile& profile, const SeriesSchedule& schedule, SeriesKind which);

enum class Verdict { Pass, Warn, Fail };
const char* verdict_name(Verdict v);

struct LogConvexityReport {
    bool identically_zero = false;
    int n_checks = 0;
    // max over the grid of L(phi)^2 / (L(phi+eps) L(phi-eps)) - 1
    double worst_additive = 0;
    // same with (1 +- alpha) phi, alpha = eps / phi
    double worst_multiplicative = 0;
    Verdict verdict = Verdict::Pass;
};

// Violations up to 1e-8 pass, up to 1e-6 warn, beyond fail.
LogConvexityReport log_convexity_check(LProfile& L, const std::vector<double>& grid, double eps);
LogConvexityReport log_convexity_check(const TestFunction& f, const std::vector<double>& grid, double eps,
                                       const QuadConfig& cfg = {});

}  // namespace hb
