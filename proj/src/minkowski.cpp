#include "hotbang/minkowski.hpp"

#include <cmath>
#include <stdexcept>

namespace hb {

double FourVector::operator[](int i) const {
    switch (i) {
        case 0: return t;
        case 1: return x;
        case 2: return y;
        case 3: return z;
    }
    throw std::out_of_range("FourVector index");
}

double& FourVector::operator[](int i) {
    switch (i) {
        case 0: return t;
        case 1: return x;
        case 2: return y;
        case 3: return z;
    }
    throw std::out_of_range("FourVector index");
}

double FourVector::spatial_norm() const { return std::sqrt(x * x + y * y + z * z); }

double mink_product(const FourVector& a, const FourVector& b) {
    return a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z;
}

bool is_timelike_future(const FourVector& a) { return a.t > 0 && mink_product(a, a) > 0; }

bool is_null(const FourVector& a, double tol) {
    double s = a.t * a.t + a.x * a.x + a.y * a.y + a.z * a.z;
    return std::abs(mink_product(a, a)) <= tol * std::max(1.0, s);
}

bool is_forward_null(const FourVector& a, double tol) { return a.t > 0 && is_null(a, tol); }

FourVector shell_vector(double px, double py, double pz) {
    return {std::sqrt(px * px + py * py + pz * pz), px, py, pz};
}

ComplexFourVector ComplexFourVector::from_real(const FourVector& v, cplx scale) {
    return {{scale * v.t, scale * v.x, scale * v.y, scale * v.z}};
}

cplx mink_product(const ComplexFourVector& a, const ComplexFourVector& b) {
    return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
}

cplx mink_product(const ComplexFourVector& a, const FourVector& b) {
    return a[0] * b.t - a[1] * b.x - a[2] * b.y - a[3] * b.z;
}

SpinorMatrix SpinorMatrix::identity() { return {{1.0, 0.0, 0.0, 1.0}}; }

SpinorMatrix SpinorMatrix::operator*(const SpinorMatrix& o) const {
    const auto& a = m;
    const auto& b = o.m;
    return {{a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
             a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]}};
}

SpinorMatrix SpinorMatrix::operator+(const SpinorMatrix& o) const {
    return {{m[0] + o.m[0], m[1] + o.m[1], m[2] + o.m[2], m[3] + o.m[3]}};
}

SpinorMatrix SpinorMatrix::operator-(const SpinorMatrix& o) const {
    return {{m[0] - o.m[0], m[1] - o.m[1], m[2] - o.m[2], m[3] - o.m[3]}};
}

SpinorMatrix SpinorMatrix::operator*(cplx s) const { return {{s * m[0], s * m[1], s * m[2], s * m[3]}}; }

Spinor SpinorMatrix::operator*(const Spinor& v) const {
    return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]};
}

SpinorMatrix SpinorMatrix::adjoint() const {
    return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}};
}

SpinorMatrix SpinorMatrix::transpose() const { return {{m[0], m[2], m[1], m[3]}}; }

SpinorMatrix SpinorMatrix::inverse() const {
    cplx d = det();
    if (d == 0.0) throw std::domain_error("singular spinor matrix");
    return {{m[3] / d, -m[1] / d, -m[2] / d, m[0] / d}};
}

double SpinorMatrix::max_abs() const {
    double r = 0;
    for (auto v : m) r = std::max(r, std::abs(v));
    return r;
}

SpinorMatrix spinor_matrix(const FourVector& a, Index which) {
    return spinor_matrix(ComplexFourVector::from_real(a), which);
}

SpinorMatrix spinor_matrix(const ComplexFourVector& a, Index which) {
    const cplx I(0, 1);
    if (which == Index::Lower)
        return {{a[0] + a[3], a[1] - I * a[2], a[1] + I * a[2], a[0] - a[3]}};
    return {{a[0] - a[3], -a[1] + I * a[2], -a[1] - I * a[2], a[0] + a[3]}};
}

SpinorMatrix sigma(int nu) {
    FourVector e;
    e[nu] = 1.0;
    return spinor_matrix(e, Index::Lower);
}

cplx bilinear(const Spinor& u, const SpinorMatrix& M, const Spinor& v) {
    return u[0] * (M.m[0] * v[0] + M.m[1] * v[1]) + u[1] * (M.m[2] * v[0] + M.m[3] * v[1]);
}

SL2Element::SL2Element(const SpinorMatrix& a) : a_(a) {
    if (std::abs(a.det() - 1.0) > 1e-12) throw std::invalid_argument("SL(2,C) element must have unit determinant");
}

SL2Element SL2Element::boost_z(double eta) {
    return SL2Element(SpinorMatrix{{std::exp(eta / 2), 0.0, 0.0, std::exp(-eta / 2)}});
}

SL2Element SL2Element::rotation_z(double th) {
    const cplx I(0, 1);
    return SL2Element(SpinorMatrix{{std::exp(-I * th / 2.0), 0.0, 0.0, std::exp(I * th / 2.0)}});
}

SL2Element SL2Element::rotation_x(double th) {
    const cplx I(0, 1);
    double c = std::cos(th / 2), s = std::sin(th / 2);
    return SL2Element(SpinorMatrix{{c, -I * s, -I * s, c}});
}

SL2Element SL2Element::boost_x(double eta) {
    double c = std::cosh(eta / 2), s = std::sinh(eta / 2);
    return SL2Element(SpinorMatrix{{c, s, s, c}});
}

bool SL2Element::is_identity(double tol) const {
    return (a_ - SpinorMatrix::identity()).max_abs() <= tol;
}

LorentzMatrix lorentz_identity() {
    LorentzMatrix L{};
    for (int i = 0; i < 4; ++i) L[i][i] = 1.0;
    return L;
}

// Lambda^mu_nu = tr(sigma^mu A sigma^nu A^dagger) / 2, read off from A a_M A^dagger.
LorentzMatrix lorentz_from_sl2(const SL2Element& A) {
    const SpinorMatrix& a = A.matrix();
    SpinorMatrix ad = a.adjoint();
    LorentzMatrix L{};
    for (int nu = 0; nu < 4; ++nu) {
        SpinorMatrix img = a * sigma(nu) * ad;
        for (int mu = 0; mu < 4; ++mu) L[mu][nu] = 0.5 * (sigma(mu) * img).trace().real();
    }
    return L;
}

LorentzMatrix lorentz_inverse(const LorentzMatrix& L) {
    LorentzMatrix R{};
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) R[mu][nu] = kMetric[mu] * L[nu][mu] * kMetric[nu];
    return R;
}

FourVector lorentz_apply(const LorentzMatrix& L, const FourVector& a) {
    FourVector r;
    for (int mu = 0; mu < 4; ++mu) {
        double s = 0;
        for (int nu = 0; nu < 4; ++nu) s += L[mu][nu] * a[nu];
        r[mu] = s;
    }
    return r;
}

ComplexFourVector lorentz_apply(const LorentzMatrix& L, const ComplexFourVector& a) {
    ComplexFourVector r;
    for (int mu = 0; mu < 4; ++mu) {
        cplx s = 0;
        for (int nu = 0; nu < 4; ++nu) s += L[mu][nu] * a[nu];
        r[mu] = s;
    }
    return r;
}

}  // namespace hb
