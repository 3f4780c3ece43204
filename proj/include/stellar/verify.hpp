#pragma once

// Randomized invariant sweeps with max-deviation reporting, shared by the
// command-line verify subcommand and the acceptance harness.

#include <cstdint>
#include <string>
#include <vector>

#include <stellar/dfs.hpp>
#include <stellar/majorana.hpp>
#include <stellar/pairing.hpp>
#include <stellar/random.hpp>
#include <stellar/schur.hpp>

namespace stellar {

struct PropertyResult {
  std::string name;
  int trials = 0;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;

  void finish() { pass = max_deviation <= tolerance; }
};

namespace detail {

inline BlochPoint rotate_point(const Eigen::Matrix3d& r, const BlochPoint& p) {
  const Eigen::Vector3d v = r * Eigen::Vector3d(p.x, p.y, p.z);
  return make_bloch(v(0), v(1), v(2));
}

inline std::vector<BlochPoint> constellation_bloch(const SpinState& s, double eps = 1e-6) {
  return majorana_points(s, eps).points;
}

}  // namespace detail

// Unitary collective rotations rigidly rotate the point constellation.
inline PropertyResult check_rigid_rotation(int trials, std::uint64_t seed, int two_j_max = 12) {
  PropertyResult res{"rigid_rotation", trials, 0.0, 1e-6, false};
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const int two_j = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(two_j_max));
    const SpinState s = random_spin_state(two_j, rng);
    const Eigen::Matrix2cd u = haar_su2(rng);
    const Eigen::Matrix3d r = su2_to_so3(u);

    std::vector<BlochPoint> predicted;
    for (const BlochPoint& p : detail::constellation_bloch(s))
      predicted.push_back(detail::rotate_point(r, p));
    const std::vector<BlochPoint> actual = detail::constellation_bloch(apply_gl2(s, u));
    res.max_deviation = std::max(res.max_deviation, pairing_distance(predicted, actual));
  }
  res.finish();
  return res;
}

// Invertible collective maps act on the roots as Mobius transformations.
inline PropertyResult check_mobius_covariance(int trials, std::uint64_t seed, int two_j = 8) {
  PropertyResult res{"mobius_covariance", trials, 0.0, 1e-5, false};
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const SpinState s = random_spin_state(two_j, rng);
    const Eigen::Matrix2cd g = random_invertible_gl2(rng);
    const MobiusMap f = mobius_from_gl2(g);

    std::vector<BlochPoint> predicted;
    for (const ExtendedComplex& z : to_extended(majorana_points(s).source_roots))
      predicted.push_back(z_to_bloch(apply_mobius(f, z)));
    std::vector<BlochPoint> actual;
    for (const ExtendedComplex& z : to_extended(majorana_points(apply_gl2(s, g)).source_roots))
      actual.push_back(z_to_bloch(z));
    res.max_deviation = std::max(res.max_deviation, pairing_distance(predicted, actual));
  }
  res.finish();
  return res;
}

// Collective x permutation operators are block diagonal in the coupled basis
// with the predicted tensor-factor structure.
inline PropertyResult check_block_structure(int n, int trials, std::uint64_t seed,
                                            bool general_linear = false) {
  PropertyResult res{general_linear ? "gl_block_structure" : "su2_block_structure", trials, 0.0,
                     general_linear ? 1e-8 : 1e-10, false};
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const Eigen::Matrix2cd m = general_linear ? random_invertible_gl2(rng) : haar_su2(rng);
    const Permutation s(random_permutation_images(n, rng));
    const BlockStructureReport rep = verify_block_structure(m, s, n, res.tolerance);
    res.max_deviation = std::max(res.max_deviation, rep.max_off_block);
    for (const auto& sector : rep.sectors)
      res.max_deviation = std::max(res.max_deviation, sector.deviation);
  }
  res.finish();
  return res;
}

// Sum over j of (2j+1) d_j accounts for the full 2^n dimension, exactly.
inline PropertyResult check_dimension_completeness(int n_max = 14) {
  PropertyResult res{"dimension_completeness", n_max, 0.0, 0.5, false};
  for (int n = 1; n <= n_max; ++n) {
    std::uint64_t total = 0;
    for (int two_j = n % 2; two_j <= n; two_j += 2)
      total += static_cast<std::uint64_t>(two_j + 1) * multiplicity_dim(n, two_j);
    const std::uint64_t expected = std::uint64_t{1} << n;
    const double diff = total >= expected ? double(total - expected) : double(expected - total);
    res.max_deviation = std::max(res.max_deviation, diff);
  }
  res.finish();
  return res;
}

// Collective noise never moves the block magnitudes or the logical readout.
inline PropertyResult check_logical_immunity(int trials, std::uint64_t seed) {
  PropertyResult res{"logical_invariance", trials, 0.0, 1e-9, false};
  Rng rng(seed);
  const int kicks = 4;  // collective kicks per sampled state
  for (int t = 0; t < trials; ++t) {
    MultiQubitState state = [&]() {
      switch (t % 3) {
        case 0:  // generic 3-qubit state
          return MultiQubitState(3, random_unit_vector(8, rng));
        case 1: {  // shared representation states
          const SpinState rep = random_spin_state(1, rng);
          const Eigen::VectorXcd a = random_unit_vector(2, rng);
          return encode_logical(LogicalQubit(a(0), a(1)), rep, rep);
        }
        default: {  // orthogonal representation states
          const SpinState rep = random_spin_state(1, rng);
          Eigen::VectorXcd other(2);
          other << -std::conj(rep.amps()(1)), std::conj(rep.amps()(0));
          const Eigen::VectorXcd a = random_unit_vector(2, rng);
          return encode_logical(LogicalQubit(a(0), a(1)), rep, SpinState(1, other));
        }
      }
    }();
    const ImmunityReport rep = collective_noise_immunity(state, kicks, rng());
    res.max_deviation =
        std::max({res.max_deviation, rep.max_xi_deviation, rep.max_gram_deviation});
  }
  res.finish();
  return res;
}

// Logical Euler unitaries rotate the decoded Bloch vector by the matching
// SO(3) rotation.
inline PropertyResult check_logical_euler(int trials, std::uint64_t seed) {
  PropertyResult res{"logical_euler_rotation", trials, 0.0, 1e-9, false};
  Rng rng(seed);
  const auto angle = [&rng]() { return 6.0 * (rng() / double(Rng::max()) - 0.5); };
  for (int t = 0; t < trials; ++t) {
    const SpinState rep = random_spin_state(1, rng);
    const Eigen::VectorXcd a = random_unit_vector(2, rng);
    const MultiQubitState before = encode_logical(LogicalQubit(a(0), a(1)), rep, rep);

    const double al = angle(), be = angle(), ga = angle();
    const Eigen::MatrixXcd u = logical_unitary(al, be, ga);
    const MultiQubitState after(3, u * before.amps());

    const LogicalDecode d0 = decode_logical(before);
    const LogicalDecode d1 = decode_logical(after);
    const auto bloch = [](const Eigen::Vector2cd& q) {
      return Eigen::Vector3d(q.dot(pauli_x() * q).real(), q.dot(pauli_y() * q).real(),
                             q.dot(pauli_z() * q).real());
    };
    const Eigen::Vector2cd q0(d0.xi(1), d0.xi(0));  // z-eigenframe order (+1 first)
    const Eigen::Vector2cd q1(d1.xi(1), d1.xi(0));

    const cplx i(0.0, 1.0);
    Eigen::Matrix2cd ez_a = Eigen::Matrix2cd::Zero(), ez_g = Eigen::Matrix2cd::Zero();
    ez_a(0, 0) = std::exp(i * al);
    ez_a(1, 1) = std::exp(-i * al);
    ez_g(0, 0) = std::exp(i * ga);
    ez_g(1, 1) = std::exp(-i * ga);
    const Eigen::Matrix2cd u2 =
        ez_a * (std::cos(be) * Eigen::Matrix2cd::Identity() + i * std::sin(be) * pauli_y()) * ez_g;

    res.max_deviation =
        std::max(res.max_deviation, (bloch(q1) - su2_to_so3(u2) * bloch(q0)).norm());
  }
  res.finish();
  return res;
}

}  // namespace stellar
