#pragma once

#include <array>
#include <complex>

namespace hb {

using cplx = std::complex<double>;

// Signature (+,-,-,-) everywhere.
inline constexpr std::array<double, 4> kMetric{1.0, -1.0, -1.0, -1.0};

struct FourVector {
    double t = 0, x = 0, y = 0, z = 0;

    double operator[](int i) const;
    double& operator[](int i);

    FourVector operator+(const FourVector& o) const { return {t + o.t, x + o.x, y + o.y, z + o.z}; }
    FourVector operator-(const FourVector& o) const { return {t - o.t, x - o.x, y - o.y, z - o.z}; }
    FourVector operator-() const { return {-t, -x, -y, -z}; }
    FourVector operator*(double s) const { return {s * t, s * x, s * y, s * z}; }
    bool operator==(const FourVector&) const = default;

    double spatial_norm() const;
};

inline FourVector operator*(double s, const FourVector& v) { return v * s; }

double mink_product(const FourVector& a, const FourVector& b);
bool is_timelike_future(const FourVector& a);
bool is_null(const FourVector& a, double tol = 1e-12);
bool is_forward_null(const FourVector& a, double tol = 1e-12);

// p' = (|p|, p) on the forward shell.
FourVector shell_vector(double px, double py, double pz);

struct ComplexFourVector {
    std::array<cplx, 4> c{};

    cplx operator[](int i) const { return c[i]; }
    cplx& operator[](int i) { return c[i]; }

    static ComplexFourVector from_real(const FourVector& v, cplx scale = 1.0);
};

cplx mink_product(const ComplexFourVector& a, const ComplexFourVector& b);
cplx mink_product(const ComplexFourVector& a, const FourVector& b);

using Spinor = std::array<cplx, 2>;

// Row-major 2x2 complex matrix.
struct SpinorMatrix {
    std::array<cplx, 4> m{};

    cplx operator()(int r, int c) const { return m[2 * r + c]; }
    cplx& operator()(int r, int c) { return m[2 * r + c]; }

    static SpinorMatrix identity();
    SpinorMatrix operator*(const SpinorMatrix& o) const;
    SpinorMatrix operator+(const SpinorMatrix& o) const;
    SpinorMatrix operator-(const SpinorMatrix& o) const;
    SpinorMatrix operator*(cplx s) const;
    Spinor operator*(const Spinor& v) const;

    SpinorMatrix adjoint() const;
    SpinorMatrix transpose() const;
    SpinorMatrix inverse() const;
    cplx trace() const { return m[0] + m[3]; }
    cplx det() const { return m[0] * m[3] - m[1] * m[2]; }
    double max_abs() const;
};

enum class Index { Lower, Upper };

// lower: a_M = [[a0+a3, a1-i a2], [a1+i a2, a0-a3]]
// upper: a^M = [[a0-a3, -a1+i a2], [-a1-i a2, a0+a3]]
SpinorMatrix spinor_matrix(const FourVector& a, Index which);
// Formal complex extension, no conjugation of components.
SpinorMatrix spinor_matrix(const ComplexFourVector& a, Index which);

// sigma^nu = lower matrix of the nu-th unit vector.
SpinorMatrix sigma(int nu);

// u^T M v, no conjugation.
cplx bilinear(const Spinor& u, const SpinorMatrix& M, const Spinor& v);

class SL2Element {
public:
    SL2Element() : a_(SpinorMatrix::identity()) {}
    explicit SL2Element(const SpinorMatrix& a);

    static SL2Element boost_z(double rapidity);
    static SL2Element rotation_z(double angle);
    static SL2Element rotation_x(double angle);
    static SL2Element boost_x(double rapidity);

    const SpinorMatrix& matrix() const { return a_; }
    bool is_identity(double tol = 0.0) const;

private:
    SpinorMatrix a_;
};

using LorentzMatrix = std::array<std::array<double, 4>, 4>;

LorentzMatrix lorentz_identity();
LorentzMatrix lorentz_from_sl2(const SL2Element& A);
LorentzMatrix lorentz_inverse(const LorentzMatrix& L);
FourVector lorentz_apply(const LorentzMatrix& L, const FourVector& a);
ComplexFourVector lorentz_apply(const LorentzMatrix& L, const ComplexFourVector& a);

}  // namespace hb
