#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <stellar/majorana.hpp>
#include <stellar/pairing.hpp>
#include <stellar/random.hpp>

using namespace stellar;
using cplx = std::complex<double>;
using Catch::Approx;

namespace {

Eigen::VectorXcd basis_vector(int dim, int k) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  v(k) = 1.0;
  return v;
}

std::vector<BlochPoint> rotate_all(const Eigen::Matrix3d& r, const std::vector<BlochPoint>& pts) {
  std::vector<BlochPoint> out;
  out.reserve(pts.size());
  for (const auto& p : pts) {
    Eigen::Vector3d v = r * Eigen::Vector3d(p.x, p.y, p.z);
    out.push_back(BlochPoint{v.x(), v.y(), v.z()});
  }
  return out;
}

// Independent oracle for the symmetric-subspace action: conjugate the n-fold
// Kronecker power of m by the orthonormal symmetric (Dicke) basis.
Eigen::MatrixXcd sym_oracle(const Eigen::Matrix2cd& m, int n) {
  const int dim = 1 << n;
  Eigen::MatrixXcd big(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      cplx v = 1.0;
      for (int q = 0; q < n; ++q) {
        const int rb = (r >> q) & 1;
        const int cb = (c >> q) & 1;
        v *= m(rb, cb);
      }
      big(r, c) = v;
    }
  }
  Eigen::MatrixXcd dicke = Eigen::MatrixXcd::Zero(dim, n + 1);
  for (int r = 0; r < dim; ++r) {
    const int k = __builtin_popcount(static_cast<unsigned>(r));
    dicke(r, k) += 1.0 / std::sqrt(binomial_d(n, k));
  }
  return dicke.adjoint() * big * dicke;
}

std::vector<Spinor> constellation_spinors(const PointConstellation& c) {
  std::vector<Spinor> out;
  for (const auto& z : to_extended(c.source_roots)) out.push_back(z_to_spinor(z));
  return out;
}

}  // namespace

TEST_CASE("polynomial coefficients follow the alternating-binomial convention") {
  SpinState noon(2, Eigen::Vector3cd(1.0 / std::sqrt(2.0), 0.0, 1.0 / std::sqrt(2.0)));
  auto p = majorana_poly(noon);
  REQUIRE(p.nominal_degree == 2);
  CHECK(std::abs(p.coeffs[0] - cplx(1.0 / std::sqrt(2.0))) < 1e-15);
  CHECK(std::abs(p.coeffs[1]) < 1e-15);
  CHECK(std::abs(p.coeffs[2] - cplx(1.0 / std::sqrt(2.0))) < 1e-15);
}

TEST_CASE("highest and lowest weight states sit at the poles") {
  SECTION("stretched state: all points at the north pole, reported exactly") {
    SpinState top(7, basis_vector(8, 0));
    auto c = majorana_points(top);
    REQUIRE(c.points.size() == 7);
    REQUIRE(c.source_roots.infinity_count == 7);
    for (const auto& pt : c.points) {
      CHECK(pt.z == 1.0);
      CHECK(pt.x == 0.0);
    }
  }
  SECTION("lowest weight state: all points at the south pole") {
    SpinState bottom(6, basis_vector(7, 6));
    auto c = majorana_points(bottom);
    REQUIRE(c.points.size() == 6);
    REQUIRE(c.source_roots.infinity_count == 0);
    for (const auto& pt : c.points) {
      CHECK(distance(pt, BlochPoint{0, 0, -1}) < 1e-12);
    }
  }
  SECTION("intermediate weight state splits between the poles") {
    // amps index 1 of two_j=3 has one zero root and two infinite ones
    SpinState s(3, basis_vector(4, 1));
    auto c = majorana_points(s);
    auto sig = degeneracy_signature(c);
    REQUIRE(sig.multiplicities == std::vector<int>{2, 1});
    int north = 0, south = 0;
    for (const auto& pt : c.points) {
      if (pt.z > 0.5) ++north;
      if (pt.z < -0.5) ++south;
    }
    CHECK(north == 2);
    CHECK(south == 1);
  }
}

TEST_CASE("spin-1 equal superposition of extremes maps to +/- y") {
  SpinState s(2, Eigen::Vector3cd(1.0 / std::sqrt(2.0), 0.0, 1.0 / std::sqrt(2.0)));
  auto c = majorana_points(s);
  std::vector<BlochPoint> expected = {BlochPoint{0, -1, 0}, BlochPoint{0, 1, 0}};
  CHECK(pairing_distance(c.points, expected) < 1e-12);
}

TEST_CASE("balanced extreme superpositions form regular equatorial rings") {
  for (int n : {2, 3, 5, 8, 12}) {
    SpinState s = noon_state(n);
    auto c = majorana_points(s);
    REQUIRE(c.points.size() == static_cast<std::size_t>(n));
    std::vector<double> azimuths;
    for (const auto& pt : c.points) {
      CHECK(std::abs(pt.z) < 1e-9);
      azimuths.push_back(std::atan2(pt.y, pt.x));
    }
    std::sort(azimuths.begin(), azimuths.end());
    for (int i = 0; i < n; ++i) {
      const double gap = (i + 1 < n) ? azimuths[i + 1] - azimuths[i]
                                     : azimuths[0] + 2.0 * M_PI - azimuths[n - 1];
      CHECK(std::abs(gap - 2.0 * M_PI / n) < 1e-7);
    }
    auto sig = degeneracy_signature(c);
    CHECK(sig.multiplicities == std::vector<int>(n, 1));
  }
}

TEST_CASE("n-fold repeated spinor collapses to a single certified cluster") {
  Spinor plus(1.0, 1.0);
  for (int n : {4, 7, 12}) {
    SpinState s = product_state(n, plus);
    auto c = majorana_points(s);
    REQUIRE(c.points.size() == static_cast<std::size_t>(n));
    for (const auto& pt : c.points) {
      CHECK(distance(pt, BlochPoint{1, 0, 0}) < 1e-9);
    }
    auto sig = degeneracy_signature(c);
    REQUIRE(sig.multiplicities == std::vector<int>{n});
  }
}

TEST_CASE("state_from_points inverts the constellation map") {
  SECTION("one up one down gives the symmetric middle state") {
    std::vector<Spinor> pts = {Spinor(1.0, 0.0), Spinor(0.0, 1.0)};
    SpinState s = state_from_points(pts);
    REQUIRE(s.two_j() == 2);
    CHECK(std::abs(s.amps()(0)) < 1e-15);
    CHECK(std::abs(s.amps()(1) - cplx(1.0)) < 1e-14);
    CHECK(std::abs(s.amps()(2)) < 1e-15);
  }
  SECTION("random well separated spinors round trip through the state") {
    Rng rng(2024);
    for (int trial = 0; trial < 12; ++trial) {
      std::vector<Spinor> pts;
      std::vector<BlochPoint> blochs;
      while (pts.size() < 5) {
        Spinor cand = random_spinor(rng);
        BlochPoint b = spinor_to_bloch(cand);
        bool ok = true;
        for (const auto& prev : blochs) ok = ok && distance(prev, b) > 0.35;
        if (ok) {
          pts.push_back(cand);
          blochs.push_back(b);
        }
      }
      SpinState s = state_from_points(pts);
      auto c = majorana_points(s);
      CHECK(pairing_distance(c.points, blochs) < 1e-8);
    }
  }
  SECTION("random states reconstruct with unit fidelity") {
    Rng rng(77);
    for (int trial = 0; trial < 30; ++trial) {
      const int two_j = 1 + static_cast<int>(rng() % 12);
      SpinState s = random_spin_state(two_j, rng);
      auto c = majorana_points(s);
      SpinState back = state_from_points(constellation_spinors(c));
      REQUIRE(back.two_j() == s.two_j());
      CHECK(overlap(back, s) > 1.0 - 1e-9);
    }
  }
}

TEST_CASE("symmetric power matches the Kronecker-power oracle") {
  Rng rng(31);
  SECTION("diagonal action") {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 0) = cplx(2.0, 1.0);
    m(1, 1) = cplx(0.5, -0.25);
    Eigen::MatrixXcd sp = sym_power(m, 2);
    CHECK(std::abs(sp(0, 0) - m(0, 0) * m(0, 0)) < 1e-14);
    CHECK(std::abs(sp(1, 1) - m(0, 0) * m(1, 1)) < 1e-14);
    CHECK(std::abs(sp(2, 2) - m(1, 1) * m(1, 1)) < 1e-14);
    CHECK(std::abs(sp(0, 1)) < 1e-14);
  }
  SECTION("dense comparison at n = 4") {
    for (int trial = 0; trial < 8; ++trial) {
      Eigen::Matrix2cd m;
      std::normal_distribution<double> g;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m(i, j) = cplx(g(rng), g(rng));
      Eigen::MatrixXcd expected = sym_oracle(m, 4);
      Eigen::MatrixXcd got = sym_power(m, 4);
      REQUIRE(got.rows() == 5);
      CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-12 * expected.cwiseAbs().maxCoeff());
    }
  }
  SECTION("multiplicative over matrix products") {
    for (int trial = 0; trial < 6; ++trial) {
      Eigen::Matrix2cd m1 = random_invertible_gl2(rng);
      Eigen::Matrix2cd m2 = random_invertible_gl2(rng);
      Eigen::MatrixXcd lhs = sym_power(m1 * m2, 5);
      Eigen::MatrixXcd rhs = sym_power(m1, 5) * sym_power(m2, 5);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-11 * rhs.cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("unitary collective action rotates the constellation rigidly") {
  Rng rng(404);
  for (int trial = 0; trial < 20; ++trial) {
    const int two_j = 1 + static_cast<int>(rng() % 12);
    SpinState s = random_spin_state(two_j, rng);
    Eigen::Matrix2cd u = haar_su2(rng);
    SpinState rotated = apply_gl2(s, u);
    auto before = majorana_points(s);
    auto after = majorana_points(rotated);
    Eigen::Matrix3d r = su2_to_so3(u);
    CHECK(pairing_distance(after.points, rotate_all(r, before.points)) < 1e-6);
  }
}

TEST_CASE("invertible collective action moves roots by the matching Mobius map") {
  Rng rng(555);
  for (int trial = 0; trial < 15; ++trial) {
    const int two_j = 8;
    SpinState s = random_spin_state(two_j, rng);
    Eigen::Matrix2cd m = random_invertible_gl2(rng);
    SpinState moved = apply_gl2(s, m);
    auto before = majorana_points(s);
    auto after = majorana_points(moved);
    MobiusMap mob = mobius_from_gl2(m);
    std::vector<ExtendedComplex> mapped;
    for (const auto& z : to_extended(before.source_roots)) mapped.push_back(apply_mobius(mob, z));
    CHECK(pairing_distance(to_extended(after.source_roots), mapped) < 1e-5);
  }
}

TEST_CASE("degeneracy signature survives invertible collective actions") {
  Rng rng(616);
  SECTION("two-and-one pattern") {
    for (int trial = 0; trial < 10; ++trial) {
      Spinor a = random_spinor(rng);
      Spinor b = random_spinor(rng);
      if (distance(spinor_to_bloch(a), spinor_to_bloch(b)) < 0.6) {
        --trial;
        continue;
      }
      std::vector<Spinor> pts = {a, a, b};
      SpinState s = state_from_points(pts);
      REQUIRE(degeneracy_signature(majorana_points(s)).multiplicities == std::vector<int>{2, 1});
      SpinState moved = apply_gl2(s, random_invertible_gl2(rng));
      CHECK(degeneracy_signature(majorana_points(moved)).multiplicities == std::vector<int>{2, 1});
    }
  }
  SECTION("three-two-one pattern") {
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<Spinor> generators;
      std::vector<BlochPoint> blochs;
      while (generators.size() < 3) {
        Spinor cand = random_spinor(rng);
        BlochPoint bp = spinor_to_bloch(cand);
        bool ok = true;
        for (const auto& prev : blochs) ok = ok && distance(prev, bp) > 0.8;
        if (ok) {
          generators.push_back(cand);
          blochs.push_back(bp);
        }
      }
      std::vector<Spinor> pts;
      for (int i = 0; i < 3; ++i) pts.push_back(generators[0]);
      for (int i = 0; i < 2; ++i) pts.push_back(generators[1]);
      pts.push_back(generators[2]);
      SpinState s = state_from_points(pts);
      std::vector<int> want = {3, 2, 1};
      REQUIRE(degeneracy_signature(majorana_points(s)).multiplicities == want);
      SpinState moved = apply_gl2(s, random_invertible_gl2(rng));
      CHECK(degeneracy_signature(majorana_points(moved)).multiplicities == want);
    }
  }
  SECTION("a simple point hiding inside a heavy cluster's numerical fuzz") {
    // chordal separation 0.01 is far below the raw root-finder scatter for a
    // six-fold root, so this only passes through certified refinement
    BlochPoint na{1.0 / 3.0, 2.0 / 3.0, -2.0 / 3.0};
    BlochPoint nb = make_bloch(na.x + 0.01 * 2.0 / std::sqrt(5.0),
                               na.y - 0.01 * 1.0 / std::sqrt(5.0), na.z);
    Spinor a = z_to_spinor(bloch_to_z(na));
    Spinor b = z_to_spinor(bloch_to_z(nb));
    std::vector<Spinor> pts = {a, a, a, a, a, a, b};
    SpinState s = state_from_points(pts);
    auto sig = degeneracy_signature(majorana_points(s));
    CHECK(sig.multiplicities == std::vector<int>{6, 1});
  }
}

TEST_CASE("rotation fidelity profiles match closed forms") {
  BlochPoint zaxis{0, 0, 1};
  SECTION("balanced extreme superposition oscillates n times faster") {
    const int n = 9;
    auto prof = rotation_fidelity_profile(noon_state(n), zaxis, 256);
    REQUIRE(prof.size() == 256);
    for (int k = 0; k < 256; ++k) {
      const double phi = 2.0 * M_PI * k / 256;
      CHECK(std::abs(prof[k].second - std::abs(std::cos(n * phi))) < 1e-12);
    }
  }
  SECTION("repeated equatorial spinor decays by a power of the overlap") {
    const int n = 8;
    auto prof = rotation_fidelity_profile(product_state(n, Spinor(1.0, 1.0)), zaxis, 256);
    for (int k = 0; k < 256; ++k) {
      const double phi = 2.0 * M_PI * k / 256;
      CHECK(std::abs(prof[k].second - std::pow(std::abs(std::cos(phi)), n)) < 1e-12);
    }
  }
  SECTION("stretched state is immune to rotations about its own axis") {
    SpinState top(10, basis_vector(11, 0));
    auto prof = rotation_fidelity_profile(top, zaxis, 64);
    for (const auto& pt : prof) CHECK(pt.second == Approx(1.0).margin(1e-12));
  }
  SECTION("ring state maps to itself under its own discrete rotation") {
    const int n = 6;
    SpinState s = noon_state(n);
    const double phi = M_PI / n;
    const cplx e = std::exp(cplx(0.0, phi));
    Eigen::Matrix2cd u = Eigen::Matrix2cd::Zero();
    u(0, 0) = e;
    u(1, 1) = std::conj(e);
    SpinState moved = apply_gl2(s, u);
    CHECK(overlap(moved, s) > 1.0 - 1e-10);
    CHECK(pairing_distance(majorana_points(moved).points, majorana_points(s).points) < 1e-10);
  }
}

TEST_CASE("constellation bookkeeping is consistent") {
  Rng rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    const int two_j = 1 + static_cast<int>(rng() % 10);
    SpinState s = random_spin_state(two_j, rng);
    auto c = majorana_points(s);
    CHECK(c.points.size() == static_cast<std::size_t>(two_j));
    CHECK(c.source_roots.total() == static_cast<std::size_t>(two_j));
    int north_exact = 0;
    for (const auto& pt : c.points) {
      if (pt.z == 1.0) ++north_exact;
    }
    CHECK(north_exact >= static_cast<int>(c.source_roots.infinity_count));
  }
}

TEST_CASE("apply_gl2 rejects singular matrices and zero states are impossible") {
  Eigen::Matrix2cd sing;
  sing << 1.0, 2.0, 0.5, 1.0;
  SpinState s = noon_state(3);
  CHECK_THROWS_AS(apply_gl2(s, sing), std::invalid_argument);
  Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(4);
  CHECK_THROWS_AS(SpinState(3, zero), std::invalid_argument);
}
