#pragma once

#include <string>
#include <vector>

#include "hotbang/hot_bang.hpp"
#include "hotbang/states.hpp"
#include "hotbang/testfn.hpp"
#include "hotbang/thermal.hpp"

namespace hb {

enum class Severity { Hard, Soft, Info };

struct Metric {
    std::string name;
    double value = 0;
    // NaN for informational entries.
    double tolerance = 0;
    Severity severity = Severity::Hard;
};

struct CheckReport {
    std::string name;
    // Canonical text of the inputs and its 64-bit FNV-1a digest.
    std::string inputs;
    std::string digest;
    std::vector<Metric> metrics;
    std::vector<std::pair<std::string, std::string>> notes;
    Verdict verdict = Verdict::Pass;

    // Hard metrics fail, soft ones warn when value > tolerance or not finite.
    void check(const std::string& metric, double value, double tol, Severity s = Severity::Hard);
    void info(const std::string& metric, double value);
    void note(const std::string& key, const std::string& value);
    void set_inputs(std::string text);
    void finalize();
};

std::string fnv1a_hex(const std::string& text);
// Shortest round-trip decimal form, for canonical inputs and CSV cells.
std::string fmt_double(double v);
std::string fmt_vector(const FourVector& v);

struct CoincidenceOptions {
    double tolerance = 1e-2;
    PointSplitOptions split;
};

// Point split of the Hot Bang kernel against the thermal function at 2 lambda x,
// after dividing out the point-split normalization measured in KMS at rest.
// Even m must vanish within three times the extrapolation uncertainty.
CheckReport thermal_coincidence(double lambda, const FourVector& x, const ThermalIndex& idx,
                                const CoincidenceOptions& opt = {});

// Point split over thermal function for index (0..0; 0) at beta = (1,0,0,0),
// measured once per m and convention.
struct PointSplitRatio {
    double ratio = 0;
    double uncertainty = 0;
};
PointSplitRatio reference_normalization(int m, BernoulliConvention c = kAdoptedConvention);

// p^mu d_mu of x -> omega(N_p)(x), normalized by |grad| |p| (Euclidean norms).
CheckReport transport_residual(const StateSpec& state, const FourVector& x, const FourVector& p, double step = 1e-3,
                               double tol = 1e-6);

// Box_x omega(xi)(x), d^mu omega(d_mu xi)(x), and the antisymmetrized
// d_mu omega(d_nu xi) - d_nu omega(d_mu xi), each normalized by its terms.
CheckReport pde_residuals(const StateSpec& state, const MacroObservable& xi, const FourVector& x,
                          double rel_step = 1e-2, double tol = 1e-5, double curl_tol = 1e-8);

// Box_beta L^{mu nu}(beta) by finite differences of the symbolic value.
CheckReport thermal_wave_residual(const ThermalIndex& idx, const FourVector& beta, double tol = 1e-5);

struct VacuumLimitOptions {
    QuadConfig quad;
    double series_rel_tol = 1e-6;
    double ratio_tol = 1e-3;
};

// d(t) = |omega_hb - omega_vac| for the conjugate pair of f translated by t a,
// from the excess series. Requires strict decrease and d(t_max) < ratio_tol d(t_min).
CheckReport vacuum_limit(const TestFunction& f, double lambda, const FourVector& a, const std::vector<double>& t_grid,
                         const VacuumLimitOptions& opt = {});

// Antisymmetric combinations vanish exactly; the symmetrized value is (m+1)! times.
CheckReport symmetrization_check(const ThermalIndex& idx, const FourVector& beta);

struct ConventionOracle {
    struct Entry {
        BernoulliConvention convention;
        double k1 = 0, k3 = 0;
        double m1_spread = 0;
        bool m1_consistent = false;
        bool m3_nonzero = false;
        bool matches = false;
    };
    std::vector<Entry> entries;
    double even_residual = 0;
    double direction_spread = 0;
    CheckReport report;
};

// Decides the Bernoulli convention from point splits in KMS at beta = (1,0,0,0):
// all 16 m = 1 pairs must be a single multiple of the thermal function, and
// m = 3 must be nonzero whenever the point split is.
ConventionOracle convention_oracle(double tol = 1e-3, const PointSplitOptions& split = {});

CheckReport weyl_report(const StateSpec& state, const TestFunction& f, const TestFunction& g,
                        const EvalOptions& opt = {}, double tol = 1e-12);

}  // namespace hb
