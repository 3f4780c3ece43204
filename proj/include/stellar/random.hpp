#pragma once

// Seeded sampling of spinors, states, unitaries, and bounded-condition
// invertible matrices.  All draws are deterministic for a fixed seed on a
// fixed platform; every randomized check in the test drivers goes through
// these helpers so failures replay exactly.

#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "stellar/bloch.hpp"
#include "stellar/majorana.hpp"

namespace stellar {

using Rng = std::mt19937_64;

// Gaussian 4-vector on S^3 gives the Haar measure on SU(2).
inline Eigen::Matrix2cd haar_su2(Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  double a, b, c, d, n;
  do {
    a = gauss(rng);
    b = gauss(rng);
    c = gauss(rng);
    d = gauss(rng);
    n = std::sqrt(a * a + b * b + c * c + d * d);
  } while (n < 1e-6);
  a /= n;
  b /= n;
  c /= n;
  d /= n;
  Eigen::Matrix2cd u;
  u << cplx(a, b), cplx(c, d), cplx(-c, d), cplx(a, -b);
  return u;
}

// Invertible matrix with singular-value ratio at most e^{2 spread} (about 20
// for the default), exercised through random unitaries on both sides and a
// random overall complex scale.
inline Eigen::Matrix2cd random_invertible_gl2(Rng& rng, double spread = 1.5) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const double s0 = std::exp(spread * uni(rng));
  const double s1 = std::exp(spread * uni(rng));
  const cplx scale = std::polar(std::exp(0.5 * uni(rng)), 3.14159265358979323846 * uni(rng));
  Eigen::Vector2cd diag;
  diag << scale * s0, scale * s1;
  return haar_su2(rng) * diag.asDiagonal() * haar_su2(rng);
}

inline Spinor random_spinor(Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (true) {
    const cplx c0(gauss(rng), gauss(rng)), c1(gauss(rng), gauss(rng));
    if (std::norm(c0) + std::norm(c1) > 1e-12) return Spinor(c0, c1);
  }
}

inline Eigen::VectorXcd random_unit_vector(int dim, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd v(dim);
  do {
    for (int i = 0; i < dim; ++i) v(i) = cplx(gauss(rng), gauss(rng));
  } while (v.norm() < 1e-9);
  return v / v.norm();
}

inline SpinState random_spin_state(int two_j, Rng& rng) {
  return SpinState(two_j, random_unit_vector(two_j + 1, rng));
}

// Uniformly random permutation as 1-based images.
inline std::vector<int> random_permutation_images(int n, Rng& rng) {
  std::vector<int> images(n);
  std::iota(images.begin(), images.end(), 1);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng() % static_cast<unsigned long long>(i + 1));
    std::swap(images[i], images[j]);
  }
  return images;
}

}  // namespace stellar
