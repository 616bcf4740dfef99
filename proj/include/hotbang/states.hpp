#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "hotbang/minkowski.hpp"
#include "hotbang/quad.hpp"
#include "hotbang/testfn.hpp"

namespace hb {

struct Vacuum {};
struct Kms {
    FourVector beta;
};
struct MixtureAtom {
    double weight = 1.0;
    FourVector beta;
};
struct Mixture {
    std::vector<MixtureAtom> atoms;
};
struct HotBang {
    double lambda = 1.0;
};

using StateSpec = std::variant<Vacuum, Kms, Mixture, HotBang>;

// Throws std::invalid_argument on violated invariants.
void validate(const StateSpec& s);
std::string state_name(const StateSpec& s);

// PsiBarPsi: omega(psibar(f) psi(g)); PsiPsiBar: omega(psi(g) psibar(f)).
enum class Ordering { PsiBarPsi, PsiPsiBar };

struct EvalOptions {
    QuadConfig quad;
    // Series truncation, relative to the anticommutator scale of the pair.
    double series_tol = 1e-8;
    int max_terms = 20000;
    // Reference magnitude for tolerances; 0 means the pair's own anticommutator.
    // Also used as the absolute floor of quadrature refinement (times quad.tol).
    double series_scale = 0;
};

// Occupation of the upper shell relative to the vacuum, 1/(1 + e^{(beta,p')}),
// overflow-safe.
double fermi_excess(double beta_dot_p);

// One term of a shell pairing:
//   int d^3p/(2|p|) w(p') L~(a p')^T p'_M R~(b p')      (R~ conjugated if conj_right).
struct Pairing {
    const SpinorSource* left = nullptr;
    cplx a = 1.0;
    const SpinorSource* right = nullptr;
    cplx b = 1.0;
    bool conj_right = false;
    // w(rho, n) on the node p' = rho (1, n); empty means 1.
    std::function<double(double, const std::array<double, 3>&)> weight;
};

// Sum of pairings at one fixed grid; cfg.radial_scale is used as given.
cplx pairing_sum(const std::vector<Pairing>& terms, const QuadConfig& cfg);

// Natural momentum scale for sampling sources on rays z: the transforms decay
// beyond |z| rho ~ 1/r_min, faster when Im z > 0 pushes e^{-Im z rho delta}.
double natural_radial_scale(const std::vector<const SpinorSource*>& sources, const std::vector<cplx>& rays);

// Walks the refinement ladder; cfg.radial_scale multiplies natural_scale.
ShellResult<cplx> pairing_integral(const std::vector<Pairing>& terms, const QuadConfig& cfg, double natural_scale,
                                   double abs_floor = 0.0);

// {psi(f), psibar(g)} = 2 pi int d^3p/(2|p|) [f~(p')^T p'_M g~(-p') + f~(-p')^T p'_M g~(p')].
// The 2 pi is the shell image of delta(p^2) eps(p0) after both smearings; the
// (2 pi)^{-2} of each transform sits inside f~, g~.
ShellResult<cplx> anticommutator(const SpinorSource& f, const SpinorSource& g, const QuadConfig& cfg = {});

struct TwoPointResult {
    cplx value = 0.0;
    // Quadrature error estimate (ladder difference) plus series tail bound.
    double quad_error = 0.0;
    double tail_bound = 0.0;
    int n_terms = 0;
    bool converged = true;
};

// omega(psibar(f) psi(g)) for KMS:
//   2 pi int [g~(p')^T p'_M f~(-p') w+ + g~(-p')^T p'_M f~(p') w-],
//   w+ = 1/(1 + e^{-(beta,p')}), w- = 1/(1 + e^{(beta,p')});
// vacuum keeps w+ = 1, w- = 0; mixtures average the weights. PsiPsiBar is
// anticommutator(g, f) minus the PsiBarPsi value. HotBang goes through the
// alternating series.
TwoPointResult two_point(const StateSpec& state, const SpinorSource& f, const SpinorSource& g, Ordering ord,
                         const EvalOptions& opt = {});

// Conjugate pairing used for positivity: f slot = conj(f), g slot = f.
TwoPointResult two_point_conjugate(const StateSpec& state, const TestFunction& f, Ordering ord,
                                   const EvalOptions& opt = {});

// Normal-ordered kernel K(x, y) with omega(psibar(f) psi(g)) - vacuum
//   = int dx dy g(y)^T K(x, y) f(x),
//   K(x, y) = (2 pi)^{-3} int d^3p/(2|p|) p'_M n(p') 2i sin((p', x - y)),
// n = fermi_excess((beta, p')); HotBang uses beta = lambda (x + y).
SpinorMatrix kernel_spectrum(const StateSpec& state, const FourVector& x, const FourVector& y, const FourVector& p);
cplx kernel_phase(const FourVector& p, const FourVector& diff);
ShellResult<SpinorMatrix> normal_ordered_kernel(const StateSpec& state, const FourVector& x, const FourVector& y,
                                                const QuadConfig& cfg = {});

// Effective temperature vectors seen by the kernel at (x, y); empty for vacuum.
std::vector<MixtureAtom> kernel_atoms(const StateSpec& state, const FourVector& x, const FourVector& y);

// Fourier transform from a coarse tensor Gauss-Legendre grid over each term's box,
// i.e. the grid sum (2 pi)^{-2} sum_x w_x e^{i(zeta,x)} f(x), factored per axis.
class GridFourier : public SpinorSource {
public:
    GridFourier(TestFunction f, int nodes_per_axis);
    Spinor fourier(const ComplexFourVector& zeta) const override;
    double support_margin() const override { return f_.support_margin(); }
    double min_half_width() const override { return f_.min_half_width(); }
    // The grid points and weights, for direct kernel smearing.
    struct Node {
        FourVector x;
        double w;
        Spinor value;
    };
    std::vector<Node> nodes() const;

private:
    TestFunction f_;
    int n_;
};

// int dx dy g(y)^T K(x, y) f(x) for a translation-invariant state, with both
// smearings replaced by grid sums: the kernel spectrum is integrated against
// the grid-summed phases (factored form).
ShellResult<cplx> kernel_double_smear(const StateSpec& state, const GridFourier& f, const GridFourier& g,
                                      const QuadConfig& cfg = {});

struct WeylReport {
    double residual = 0;
    double scale = 0;
};

// two_point with g replaced by its Weyl image (p^M)^T g~ and, separately, f by p^M f~;
// both vanish identically on the shell. Residual is the larger magnitude.
WeylReport weyl_null_check(const StateSpec& state, const SpinorSource& f, const SpinorSource& g,
                           const EvalOptions& opt = {});

}  // namespace hb
