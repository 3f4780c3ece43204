#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include <stellar/bloch.hpp>
#include <stellar/dfs.hpp>
#include <stellar/majorana.hpp>
#include <stellar/random.hpp>
#include <stellar/schur.hpp>

using namespace stellar;
using Catch::Approx;

namespace {

MultiQubitState worked_three_qubit_state() {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(8);
  const double s3 = std::sqrt(3.0);
  const double c = 1.0 / (2.0 * std::sqrt(6.0));
  v(1) = 2.0 * c;
  v(6) = 2.0 * c;
  v(4) = -(1.0 + s3) * c;
  v(5) = -(1.0 + s3) * c;
  v(2) = (s3 - 1.0) * c;
  v(3) = (s3 - 1.0) * c;
  return MultiQubitState(3, v);
}

SpinState spin_half(cplx up, cplx down) {
  Eigen::VectorXcd v(2);
  v << up, down;
  return SpinState(1, v);
}

Eigen::Vector3d bloch_of(const Eigen::Vector2cd& q) {
  Eigen::Vector3d b;
  b(0) = q.dot(pauli_x() * q).real();
  b(1) = q.dot(pauli_y() * q).real();
  b(2) = q.dot(pauli_z() * q).real();
  return b;
}

Eigen::Matrix2cd euler_su2(double a, double b, double g) {
  const cplx i(0.0, 1.0);
  Eigen::Matrix2cd ez_a = Eigen::Matrix2cd::Zero(), ez_g = Eigen::Matrix2cd::Zero();
  ez_a(0, 0) = std::exp(i * a);
  ez_a(1, 1) = std::exp(-i * a);
  ez_g(0, 0) = std::exp(i * g);
  ez_g(1, 1) = std::exp(-i * g);
  const Eigen::Matrix2cd ey =
      std::cos(b) * Eigen::Matrix2cd::Identity() + i * std::sin(b) * pauli_y();
  return ez_a * ey * ez_g;
}

// Multiplicity block of an 8x8 operator expressed in the z-eigenframe
// (+1 eigenvector first), i.e. with the path order (alpha1, alpha0).
Eigen::Matrix2cd block_in_z_frame(const Eigen::MatrixXcd& op, int r) {
  Eigen::Matrix2cd swap;
  swap << 0, 1, 1, 0;
  return swap * detail::multiplicity_block_of(op, r) * swap;
}

Eigen::MatrixXcd commutator(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return a * b - b * a;
}

}  // namespace

TEST_CASE("logical z operator acts as the exact path involution") {
  const LogicalOperator z = z_logical();

  CHECK((z.physical - z.physical.adjoint()).norm() < 1e-14);
  CHECK(z.physical.imag().norm() < 1e-14);
  CHECK(z.kappa == Approx(1.0).margin(1e-13));

  Eigen::Matrix2cd expected;
  expected << -1, 0, 0, 1;
  CHECK((z.multiplicity_block - expected).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((detail::multiplicity_block_of(z.physical, 1) - expected).cwiseAbs().maxCoeff() < 1e-13);

  // Identity on the representation factor and zero on the j = 3/2 sector,
  // all at once: the physical operator IS the embedded involution.
  CHECK((z.physical - detail::embed_multiplicity(expected)).norm() < 1e-13);

  // Squares to the j = 1/2 sector projector.
  const Eigen::MatrixXcd proj = detail::embed_multiplicity(Eigen::Matrix2cd::Identity());
  CHECK((z.physical * z.physical - proj).norm() < 1e-13);

  // The defining permutation combination is recovered with a tiny residual.
  CHECK(z.fit_residual < 1e-12);
  CHECK(std::abs(z.perm_coeffs[0]) < 1e-12);
  CHECK(std::abs(z.perm_coeffs[1] - cplx(-2.0 / 3.0)) < 1e-12);
  CHECK(std::abs(z.perm_coeffs[2] - cplx(1.0 / 3.0)) < 1e-12);
  CHECK(std::abs(z.perm_coeffs[3] - cplx(1.0 / 3.0)) < 1e-12);
  CHECK(std::abs(z.perm_coeffs[4]) < 1e-12);
  CHECK(std::abs(z.perm_coeffs[5]) < 1e-12);
}

TEST_CASE("logical z commutes with every collective operator") {
  const LogicalOperator z = z_logical();
  Rng rng(71);
  for (int t = 0; t < 10; ++t) {
    const Eigen::MatrixXcd u = collective_op(haar_su2(rng), 3).dense();
    CHECK(commutator(z.physical, u).cwiseAbs().maxCoeff() < 1e-10);
  }
  for (int t = 0; t < 5; ++t) {
    const Eigen::MatrixXcd g = collective_op(random_invertible_gl2(rng), 3).dense();
    CHECK(commutator(z.physical, g).cwiseAbs().maxCoeff() < 1e-8 * g.norm());
  }
}

TEST_CASE("logical x and y close the Pauli algebra on the multiplicity factor") {
  const auto [x, y] = xy_logical();
  const LogicalOperator z = z_logical();
  const cplx i(0.0, 1.0);

  // Block-level convention: x maps the +1 eigenvector of z to the -1
  // eigenvector with coefficient +1.  In path coordinates that pins
  // x = [[0,1],[1,0]] and y = [[0,i],[-i,0]].
  Eigen::Matrix2cd xb_expected, yb_expected;
  xb_expected << 0, 1, 1, 0;
  yb_expected << 0, i, -i, 0;
  CHECK((x.multiplicity_block - xb_expected).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((y.multiplicity_block - yb_expected).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(x.kappa == Approx(1.0).margin(1e-12));
  CHECK(y.kappa == Approx(1.0).margin(1e-12));

  const Eigen::Matrix2cd xb = x.multiplicity_block;
  const Eigen::Matrix2cd yb = y.multiplicity_block;
  const Eigen::Matrix2cd zb = z.multiplicity_block;
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  CHECK((xb * xb - id).norm() < 1e-12);
  CHECK((yb * yb - id).norm() < 1e-12);
  CHECK((zb * zb - id).norm() < 1e-12);
  CHECK((xb * yb - yb * xb - 2.0 * i * zb).norm() < 1e-12);
  CHECK((yb * zb - zb * yb - 2.0 * i * xb).norm() < 1e-12);
  CHECK((zb * xb - xb * zb - 2.0 * i * yb).norm() < 1e-12);
  CHECK((xb * yb + yb * xb).norm() < 1e-12);
  CHECK((yb * zb + zb * yb).norm() < 1e-12);
  CHECK((zb * xb + xb * zb).norm() < 1e-12);
}

TEST_CASE("logical x and y physical operators") {
  const auto [x, y] = xy_logical();
  const LogicalOperator z = z_logical();
  const cplx i(0.0, 1.0);

  CHECK((x.physical - x.physical.adjoint()).norm() < 1e-13);
  CHECK((y.physical - y.physical.adjoint()).norm() < 1e-13);

  // Pauli commutators carry over to the physical operators (both sides
  // vanish on the j = 3/2 sector).
  CHECK((commutator(x.physical, y.physical) - 2.0 * i * z.normalized()).norm() < 1e-12);
  CHECK((commutator(y.physical, z.normalized()) - 2.0 * i * x.physical).norm() < 1e-12);
  CHECK((commutator(z.normalized(), x.physical) - 2.0 * i * y.physical).norm() < 1e-12);

  // Zero on the j = 3/2 sector.
  const auto basis = schur_basis(3);
  for (int r = 0; r < 4; ++r) {
    Eigen::VectorXcd col = Eigen::VectorXcd::Zero(8);
    for (const auto& [idx, val] : basis->block(3, 0).vectors[r]) col(idx) = val;
    CHECK((x.physical * col).norm() < 1e-12);
    CHECK((y.physical * col).norm() < 1e-12);
  }

  // Members of the collective commutant.
  Rng rng(72);
  for (int t = 0; t < 5; ++t) {
    const Eigen::MatrixXcd u = collective_op(haar_su2(rng), 3).dense();
    CHECK(commutator(x.physical, u).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(commutator(y.physical, u).cwiseAbs().maxCoeff() < 1e-10);
  }

  // Permutation-combination fits: x is a real combination, y is genuinely
  // imaginary on the two 3-cycles (the real span cannot produce it).
  CHECK(x.fit_residual < 1e-10);
  CHECK(y.fit_residual < 1e-10);
  for (int g = 0; g < 6; ++g) CHECK(std::abs(x.perm_coeffs[g].imag()) < 1e-12);
  for (int g = 0; g < 4; ++g) CHECK(std::abs(y.perm_coeffs[g]) < 1e-12);
  CHECK(std::abs(y.perm_coeffs[4] + y.perm_coeffs[5]) < 1e-12);
  CHECK(std::abs(y.perm_coeffs[4].real()) < 1e-12);
  CHECK(std::abs(y.perm_coeffs[4].imag()) == Approx(1.0 / std::sqrt(3.0)).margin(1e-12));

  // The fitted combinations really do rebuild the operators.
  Eigen::MatrixXcd xr = Eigen::MatrixXcd::Zero(8, 8), yr = Eigen::MatrixXcd::Zero(8, 8);
  for (int g = 0; g < 6; ++g) {
    const Eigen::MatrixXcd pg = permutation_op(s3_elements()[g], 3).dense().cast<cplx>();
    xr += x.perm_coeffs[g] * pg;
    yr += y.perm_coeffs[g] * pg;
  }
  CHECK((xr - x.physical).norm() < 1e-12);
  CHECK((yr - y.physical).norm() < 1e-12);
}

TEST_CASE("logical unitaries implement Euler rotations on the multiplicity factor") {
  CHECK((logical_unitary(0.0, 0.0, 0.0) - Eigen::MatrixXcd::Identity(8, 8)).norm() < 1e-13);

  const auto basis = schur_basis(3);
  Rng rng(73);
  for (int t = 0; t < 5; ++t) {
    const double a = 3.0 * (rng() / double(Rng::max()) - 0.5);
    const double b = 3.0 * (rng() / double(Rng::max()) - 0.5);
    const double g = 3.0 * (rng() / double(Rng::max()) - 0.5);
    const Eigen::MatrixXcd u = logical_unitary(a, b, g);

    CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(8, 8)).norm() < 1e-12);

    // Identity on the j = 3/2 sector.
    for (int r = 0; r < 4; ++r) {
      Eigen::VectorXcd col = Eigen::VectorXcd::Zero(8);
      for (const auto& [idx, val] : basis->block(3, 0).vectors[r]) col(idx) = val;
      CHECK((u * col - col).norm() < 1e-12);
    }

    // Multiplicity factor equals the 2x2 Euler unitary, in both m slices.
    const Eigen::Matrix2cd pred = euler_su2(a, b, g);
    CHECK((block_in_z_frame(u, 0) - pred).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((block_in_z_frame(u, 1) - pred).cwiseAbs().maxCoeff() < 1e-9);

    // Commutes with collective rotations.
    const Eigen::MatrixXcd c = collective_op(haar_su2(rng), 3).dense();
    CHECK(commutator(u, c).cwiseAbs().maxCoeff() < 1e-10);
  }

  // (pi, 0, 0) flips the sign of the whole j = 1/2 sector: a pure logical
  // phase, matching the Euler prediction exp(i pi sigma_z) = -1.
  const Eigen::MatrixXcd half_turn = logical_unitary(M_PI, 0.0, 0.0);
  const Eigen::MatrixXcd proj = detail::embed_multiplicity(Eigen::Matrix2cd::Identity());
  CHECK((half_turn - (Eigen::MatrixXcd::Identity(8, 8) - 2.0 * proj)).norm() < 1e-12);
  CHECK((block_in_z_frame(half_turn, 0) + Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("logical unitaries rotate the decoded Bloch vector") {
  Rng rng(74);
  for (int t = 0; t < 5; ++t) {
    const SpinState rep = random_spin_state(1, rng);
    Eigen::Vector2cd amp = random_unit_vector(2, rng);
    const MultiQubitState before = encode_logical(LogicalQubit(amp(0), amp(1)), rep, rep);

    const double a = 2.0 * (rng() / double(Rng::max()) - 0.5);
    const double b = 2.0 * (rng() / double(Rng::max()) - 0.5);
    const double g = 2.0 * (rng() / double(Rng::max()) - 0.5);
    const Eigen::MatrixXcd u = logical_unitary(a, b, g);
    const MultiQubitState after(3, u * before.amps());

    const LogicalDecode d0 = decode_logical(before);
    const LogicalDecode d1 = decode_logical(after);
    const Eigen::Vector2cd q0(d0.xi(1), d0.xi(0));  // z-eigenframe order (+1 first)
    const Eigen::Vector2cd q1(d1.xi(1), d1.xi(0));

    const Eigen::Matrix3d rot = su2_to_so3(euler_su2(a, b, g));
    CHECK((bloch_of(q1) - rot * bloch_of(q0)).norm() < 1e-9);
  }
}

TEST_CASE("logical encoding round-trips through the coupled decomposition") {
  // Basis-state anchor: amplitude (1, 0) with the spin-up representation
  // state lands exactly on the first alpha = 0 basis column.
  const MultiQubitState anchored =
      encode_logical(LogicalQubit(1.0, 0.0), spin_half(1.0, 0.0), spin_half(0.0, 1.0));
  const auto basis = schur_basis(3);
  Eigen::VectorXcd expected = Eigen::VectorXcd::Zero(8);
  for (const auto& [idx, val] : basis->block(1, 0).vectors[0]) expected(idx) = val;
  CHECK((anchored.amps() - expected).norm() < 1e-12);

  Rng rng(75);
  for (int t = 0; t < 10; ++t) {
    Eigen::Vector2cd amp = random_unit_vector(2, rng);
    const SpinState rep0 = random_spin_state(1, rng);
    const SpinState rep1 = random_spin_state(1, rng);
    const MultiQubitState state = encode_logical(LogicalQubit(amp(0), amp(1)), rep0, rep1);

    const auto dec = decompose(state);
    REQUIRE(dec.blocks.size() == 3);
    CHECK(dec.blocks[0].two_j == 3);
    CHECK(std::abs(dec.blocks[0].xi) < 1e-12);
    CHECK(std::abs(dec.blocks[1].xi) == Approx(std::abs(amp(0))).margin(1e-12));
    CHECK(std::abs(dec.blocks[2].xi) == Approx(std::abs(amp(1))).margin(1e-12));
    if (std::abs(amp(0)) > 1e-6)
      CHECK(std::abs(overlap(*dec.blocks[1].rep_state, rep0)) == Approx(1.0).margin(1e-10));
    if (std::abs(amp(1)) > 1e-6)
      CHECK(std::abs(overlap(*dec.blocks[2].rep_state, rep1)) == Approx(1.0).margin(1e-10));

    CHECK((reconstruct(dec).amps() - state.amps()).norm() < 1e-12);
  }

  // Re-encoding the worked example from its own decomposition reproduces it.
  const MultiQubitState worked = worked_three_qubit_state();
  const auto dec = decompose(worked);
  const MultiQubitState again = encode_logical(LogicalQubit(dec.blocks[1].xi, dec.blocks[2].xi),
                                               *dec.blocks[1].rep_state, *dec.blocks[2].rep_state);
  CHECK((again.amps() - worked.amps()).norm() < 1e-10);
}

TEST_CASE("logical readout is collective-noise immune") {
  // Worked example: the two representation states are orthogonal, so this
  // exercises the distinct-representation case; the Gram matrix is the
  // invariant readout there.
  const MultiQubitState worked = worked_three_qubit_state();
  const LogicalDecode wd = decode_logical(worked);
  CHECK_FALSE(wd.shared_reps);
  CHECK(wd.rep_overlap < 1e-9);
  CHECK(std::abs(wd.gram(0, 0) - cplx(0.5)) < 1e-12);
  CHECK(std::abs(wd.gram(1, 1) - cplx(0.5)) < 1e-12);
  CHECK(std::abs(wd.gram(0, 1)) < 1e-12);

  const ImmunityReport worked_report = collective_noise_immunity(worked, 100);
  CHECK(worked_report.pass);
  CHECK_FALSE(worked_report.shared_reps);
  CHECK(worked_report.max_xi_deviation < 1e-10);
  CHECK(worked_report.max_gram_deviation < 1e-9);

  // Pure j = 3/2 state: both logical blocks are empty.
  Eigen::VectorXcd up = Eigen::VectorXcd::Zero(8);
  up(0) = 1.0;
  const ImmunityReport trivial = collective_noise_immunity(MultiQubitState(3, up), 20);
  CHECK(trivial.pass);

  // Shared representation state: the amplitude ratio itself is defined and
  // invariant.
  Rng rng(76);
  const SpinState rep = random_spin_state(1, rng);
  Eigen::Vector2cd amp = random_unit_vector(2, rng);
  const MultiQubitState shared = encode_logical(LogicalQubit(amp(0), amp(1)), rep, rep);
  const LogicalDecode sd = decode_logical(shared);
  CHECK(sd.shared_reps);
  REQUIRE(sd.ratio.has_value());
  CHECK(std::abs(*sd.ratio - amp(1) / amp(0)) < 1e-10);

  const ImmunityReport shared_report = collective_noise_immunity(shared, 50);
  CHECK(shared_report.pass);
  CHECK(shared_report.shared_reps);

  for (int t = 0; t < 10; ++t) {
    const Eigen::Matrix2cd u = haar_su2(rng);
    const MultiQubitState moved(3, collective_op(u, 3).apply(shared.amps()));
    const LogicalDecode md = decode_logical(moved);
    REQUIRE(md.ratio.has_value());
    CHECK(std::abs(*md.ratio - *sd.ratio) < 1e-9);
  }

  // Distinct (orthogonal-by-construction) representation states.
  const SpinState repa = random_spin_state(1, rng);
  const SpinState repb =
      spin_half(-std::conj(repa.amps()(1)), std::conj(repa.amps()(0)));
  const MultiQubitState distinct = encode_logical(LogicalQubit(0.6, 0.8), repa, repb);
  const ImmunityReport distinct_report = collective_noise_immunity(distinct, 50);
  CHECK(distinct_report.pass);
  CHECK_FALSE(distinct_report.shared_reps);

  // Logically evolved state stays immune.
  const Eigen::MatrixXcd u = logical_unitary(0.7, 0.3, -0.4);
  const MultiQubitState evolved(3, u * worked.amps());
  CHECK(collective_noise_immunity(evolved, 20).pass);
}

TEST_CASE("logical interfaces validate their inputs") {
  CHECK_THROWS_AS(LogicalQubit(0.0, 0.0), std::invalid_argument);

  Eigen::VectorXcd v3(3);
  v3 << 1.0, 0.0, 0.0;
  const SpinState spin1(2, v3);  // spin-1 state is not a valid representation input
  CHECK_THROWS_AS(encode_logical(LogicalQubit(1.0, 0.0), spin1, spin1), std::invalid_argument);

  Eigen::VectorXcd v4 = Eigen::VectorXcd::Zero(4);
  v4(0) = 1.0;
  CHECK_THROWS_AS(decode_logical(MultiQubitState(2, v4)), std::invalid_argument);
  Eigen::VectorXcd v8 = Eigen::VectorXcd::Zero(8);
  v8(0) = 1.0;
  CHECK_THROWS_AS(collective_noise_immunity(MultiQubitState(3, v8), 0), std::invalid_argument);
  CHECK_THROWS_AS(collective_noise_immunity(MultiQubitState(2, v4), 5), std::invalid_argument);
}
