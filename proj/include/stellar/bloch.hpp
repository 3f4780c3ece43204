#pragma once

// Geometry of the extended complex plane, the unit spinor, and the unit
// sphere, plus the group maps between them: SU(2) -> SO(3), GL(2) -> Mobius.
//
// Conventions used throughout the library:
//   spinor (c0, c1)        ->  z = c0 / c1,  z = infinity when c1 = 0
//   z = e^{-i phi} cot(theta/2), so z = infinity at the north pole
//   Bloch vector n = (sin t cos p, sin t sin p, cos t) = <s|sigma|s>

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "stellar/polyroots.hpp"  // for the cplx alias

namespace stellar {

// Point on the extended complex plane C u {infinity}.
class ExtendedComplex {
 public:
  ExtendedComplex() : v_(0.0), inf_(false) {}
  ExtendedComplex(cplx v) : v_(v), inf_(false) {}  // NOLINT: implicit by design
  static ExtendedComplex infinity() {
    ExtendedComplex e;
    e.inf_ = true;
    return e;
  }

  bool is_infinity() const { return inf_; }
  cplx value() const {
    if (inf_) throw std::domain_error("value() called on the point at infinity");
    return v_;
  }

 private:
  cplx v_;
  bool inf_;
};

// Normalized two-component complex vector.  Construction normalizes; a zero
// input is rejected.
class Spinor {
 public:
  Spinor(cplx c0, cplx c1) : c0_(c0), c1_(c1) {
    const double n = std::sqrt(std::norm(c0_) + std::norm(c1_));
    if (n < 1e-300) throw std::invalid_argument("cannot normalize the zero spinor");
    c0_ /= n;
    c1_ /= n;
  }
  cplx c0() const { return c0_; }
  cplx c1() const { return c1_; }

 private:
  cplx c0_, c1_;
};

// Unit vector in R^3.
struct BlochPoint {
  double x = 0.0, y = 0.0, z = 1.0;
};

inline BlochPoint make_bloch(double x, double y, double z) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (n < 1e-300) throw std::invalid_argument("cannot normalize the zero vector");
  return BlochPoint{x / n, y / n, z / n};
}

inline double dot(const BlochPoint& a, const BlochPoint& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline double distance(const BlochPoint& a, const BlochPoint& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// --- chart maps -----------------------------------------------------------

inline ExtendedComplex spinor_to_z(const Spinor& s) {
  if (s.c1() == cplx(0.0)) return ExtendedComplex::infinity();
  return ExtendedComplex(s.c0() / s.c1());
}

// Representative with c1 real nonnegative (c0 = 1 for the point at infinity).
inline Spinor z_to_spinor(const ExtendedComplex& z) {
  if (z.is_infinity()) return Spinor(1.0, 0.0);
  const cplx v = z.value();
  const double n = std::sqrt(1.0 + std::norm(v));
  return Spinor(v / n, 1.0 / n);
}

inline BlochPoint z_to_bloch(const ExtendedComplex& z) {
  if (z.is_infinity()) return BlochPoint{0.0, 0.0, 1.0};
  const cplx v = z.value();
  const double m2 = std::norm(v);
  const double denom = 1.0 + m2;
  return BlochPoint{2.0 * v.real() / denom, -2.0 * v.imag() / denom, (m2 - 1.0) / denom};
}

inline ExtendedComplex bloch_to_z(const BlochPoint& n) {
  const double denom = 1.0 - n.z;
  if (denom < 1e-15) return ExtendedComplex::infinity();
  return ExtendedComplex(cplx(n.x, -n.y) / denom);
}

inline BlochPoint spinor_to_bloch(const Spinor& s) { return z_to_bloch(spinor_to_z(s)); }

// --- group maps -----------------------------------------------------------

inline Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}
inline Eigen::Matrix2cd pauli_y() {
  Eigen::Matrix2cd m;
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}
inline Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

// Rotation matrix R with bloch(u s) = R bloch(s):  R_ij = Tr(sigma_i u sigma_j u^dag)/2.
// Rejects matrices that are not unitary to within 1e-10.
inline Eigen::Matrix3d su2_to_so3(const Eigen::Matrix2cd& u) {
  const double unitarity = (u.adjoint() * u - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
  if (unitarity > 1e-10)
    throw std::invalid_argument("matrix is not unitary (deviation " + std::to_string(unitarity) +
                                ")");
  const std::array<Eigen::Matrix2cd, 3> sigma = {pauli_x(), pauli_y(), pauli_z()};
  Eigen::Matrix3d r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r(i, j) = 0.5 * (sigma[i] * u * sigma[j] * u.adjoint()).trace().real();
  return r;
}

inline Spinor apply_su2(const Eigen::Matrix2cd& u, const Spinor& s) {
  const cplx a = u(0, 0) * s.c0() + u(0, 1) * s.c1();
  const cplx b = u(1, 0) * s.c0() + u(1, 1) * s.c1();
  return Spinor(a, b);
}

// Unique factorization m = u r with u unitary and r Hermitian positive
// definite, computed through the SVD.  Requires |det m| > 1e-12.
struct PolarFactors {
  Eigen::Matrix2cd unitary;
  Eigen::Matrix2cd positive;
};

inline PolarFactors polar_decompose(const Eigen::Matrix2cd& m) {
  if (std::abs(m.determinant()) <= 1e-12)
    throw std::invalid_argument("polar decomposition requires an invertible matrix");
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  PolarFactors f;
  f.unitary = svd.matrixU() * svd.matrixV().adjoint();
  f.positive = svd.matrixV() * svd.singularValues().asDiagonal() * svd.matrixV().adjoint();
  return f;
}

// Fractional linear map z -> (a z + b) / (c z + d), ad - bc != 0.
struct MobiusMap {
  cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};
};

inline MobiusMap mobius_from_gl2(const Eigen::Matrix2cd& m) {
  if (std::abs(m.determinant()) <= 1e-14 * m.cwiseAbs().maxCoeff() * m.cwiseAbs().maxCoeff())
    throw std::invalid_argument("Mobius map requires an invertible matrix");
  return MobiusMap{m(0, 0), m(0, 1), m(1, 0), m(1, 1)};
}

// Infinity is handled exactly: infinity -> a/c (or stays at infinity when
// c = 0), and the pole z = -d/c maps to infinity when the denominator
// vanishes exactly.
inline ExtendedComplex apply_mobius(const MobiusMap& f, const ExtendedComplex& z) {
  if (z.is_infinity()) {
    if (f.c == cplx(0.0)) return ExtendedComplex::infinity();
    return ExtendedComplex(f.a / f.c);
  }
  const cplx v = z.value();
  const cplx denom = f.c * v + f.d;
  if (denom == cplx(0.0)) return ExtendedComplex::infinity();
  return ExtendedComplex((f.a * v + f.b) / denom);
}

inline MobiusMap compose(const MobiusMap& f, const MobiusMap& g) {
  // composition (f o g)(z) = f(g(z)) mirrors the matrix product
  return MobiusMap{f.a * g.a + f.b * g.c, f.a * g.b + f.b * g.d, f.c * g.a + f.d * g.c,
                   f.c * g.b + f.d * g.d};
}

}  // namespace stellar
