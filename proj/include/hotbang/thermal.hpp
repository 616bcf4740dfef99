#pragma once

#include <array>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hotbang/minkowski.hpp"
#include "hotbang/quad.hpp"
#include "hotbang/states.hpp"

namespace hb {

// Multi-index (mu_1..mu_m; nu), every index in 0..3.
struct ThermalIndex {
    std::vector<int> mu;
    int nu = 0;

    int m() const { return static_cast<int>(mu.size()); }
    void validate() const;
    // mu followed by nu.
    std::vector<int> all() const;
    std::string label() const;
};

using Rational = boost::multiprecision::cpp_rational;

enum class BernoulliConvention { Modern, Classical };
const char* convention_name(BernoulliConvention c);

// Modern B_n (B_1 = -1/2, odd n > 1 vanish) and the classical even-index
// view Bc_n = |B_{2n}|. Computed once, read-only afterwards.
class BernoulliTable {
public:
    static const BernoulliTable& instance();
    const Rational& modern(int n) const;
    Rational classical(int n) const;
    Rational get(int n, BernoulliConvention c) const;
    int max_index() const { return static_cast<int>(b_.size()) - 1; }

private:
    explicit BernoulliTable(int max_n);
    std::vector<Rational> b_;
};

// The convention fixed by comparing against the point-split kernel at
// beta = (1,0,0,0): only the classical numbering leaves m = 3 nonzero.
inline constexpr BernoulliConvention kAdoptedConvention = BernoulliConvention::Classical;

// 0 for even m; for odd m
//   i pi^{m+1} (2^{2m+2} - 2^{m+1}) / (m+3)! (-1)^{(m+3)/2} B_{(m+3)/2}.
cplx c_coeff(int m, BernoulliConvention c = kAdoptedConvention);

// coeff * prod_k beta^k^{pow[k]} * (beta, beta)^{-k}
struct DerivTerm {
    long long coeff = 0;
    std::array<int, 4> pow{};
    int k = 0;
    auto operator<=>(const DerivTerm&) const = default;
};

// Exact d^{i_1}...d^{i_n} (beta, beta)^{-1} with upper-index derivatives
// d^mu = eta^{mu mu} d/d beta^mu; terms merged and sorted.
std::vector<DerivTerm> inverse_square_derivative(const std::vector<int>& upper);
double evaluate_terms(const std::vector<DerivTerm>& terms, const FourVector& beta);

// c_m d^{mu nu} (beta, beta)^{-1}; beta must be timelike future.
cplx thermal_function(const ThermalIndex& idx, const FourVector& beta,
                      BernoulliConvention c = kAdoptedConvention);

struct T2Obs {};
struct EnergyObs {
    int mu = 0, nu = 0;
};
struct EntropyObs {
    int mu = 0;
};
struct PhaseSpaceObs {
    FourVector p;
};
struct CustomObs {
    std::string name;
    std::function<double(const FourVector&)> fn;
};
using MacroObservable = std::variant<T2Obs, EnergyObs, EntropyObs, PhaseSpaceObs, CustomObs>;

void validate(const MacroObservable& xi);
std::string observable_name(const MacroObservable& xi);

// T2 = 1/(beta,beta); E^{mu nu} = pi^2/60 (4 b^mu b^nu/(b,b)^3 - eta^{mu nu}/(b,b)^2);
// S^mu = pi^2/15 b^mu/(b,b) as printed; N_p = (2 pi)^{-3}/(1 + e^{(b,p)}).
double builtin_macro(const MacroObservable& xi, const FourVector& beta);

struct AdmissibilityReport {
    bool admissible = true;
    double worst_residual = 0;
    int n_samples = 0;
};

// Box_beta xi relative to sum |d_mu d_mu xi| on the given samples (finite differences).
AdmissibilityReport wave_admissibility(const MacroObservable& xi, const std::vector<FourVector>& samples,
                                       double tol = 1e-5);

// Vacuum gives 0, KMS xi(beta), Mixture sum w xi(beta_i), HotBang xi(2 lambda x).
double macro_expectation(const StateSpec& state, const MacroObservable& xi, const FourVector& x);

// sup over the sampled set B of |xi(beta)|.
double seminorm(const MacroObservable& xi, const std::vector<FourVector>& B);

struct PointSplitOptions {
    // Split distances and difference step, in units of the thermal length sqrt((beta,beta)).
    std::vector<double> splits{0.04, 0.02, 0.01};
    double fd_step = 0.005;
    int fd_order = 4;
    std::array<double, 3> direction{0.0, 0.0, 1.0};
    QuadConfig quad = fixed_kernel_grid();

    static QuadConfig fixed_kernel_grid();
};

struct PointSplitResult {
    cplx value = 0.0;
    double uncertainty = 0;
    // (split distance, derivative) before extrapolation.
    std::vector<std::pair<double, cplx>> samples;
};

// d^{mu_1}..d^{mu_m}_zeta tr(sigma^nu K(x + zeta, x - zeta)) at zeta = s (0, e),
// extrapolated to s -> 0. Odd m is even in s, even m odd. The uncertainty adds
// the Richardson spread and a step-doubling estimate of the difference error.
PointSplitResult point_split_expectation(const StateSpec& state, const FourVector& x, const ThermalIndex& idx,
                                         const PointSplitOptions& opt = {});

// All permutations of the m+1 indices (with repeats), in lexicographic order.
std::vector<ThermalIndex> index_permutations(const ThermalIndex& idx);
// Sum of the thermal function over all (m+1)! orderings.
cplx symmetrized_thermal_function(const ThermalIndex& idx, const FourVector& beta,
                                  BernoulliConvention c = kAdoptedConvention);

}  // namespace hb
