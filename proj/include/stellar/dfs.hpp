#pragma once

// Noiseless-subsystem demonstrations on 3 qubits: logical encoding into the
// j = 1/2 multiplicity factor, permutation-built logical operators, Euler
// logical unitaries, and collective-noise immunity checks.
//
// Logical frame convention: the j = 1/2 multiplicity factor is spanned by the
// two coupling paths (alpha = 0 through the triplet, alpha = 1 through the
// singlet).  z_logical acts on it exactly as diag(-1, +1) in (alpha0, alpha1)
// coordinates, so the +1 eigenvector (logical |0>) is the singlet path and
// the -1 eigenvector (logical |1>) is the triplet path, each phase-fixed so
// its largest component is real positive.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include <stellar/bloch.hpp>
#include <stellar/random.hpp>
#include <stellar/schur.hpp>

namespace stellar {

struct LogicalQubit {
  cplx a0, a1;  // amplitudes on the alpha = 0 and alpha = 1 blocks
  LogicalQubit(cplx a0_in, cplx a1_in) : a0(a0_in), a1(a1_in) {
    const double n = std::sqrt(std::norm(a0) + std::norm(a1));
    if (n < 1e-12) throw std::invalid_argument("logical amplitudes are numerically zero");
    a0 /= n;
    a1 /= n;
  }
};

// Fixed element order for permutation-combination coefficients.
inline const std::vector<Permutation>& s3_elements() {
  static const std::vector<Permutation> elems = {
      Permutation::identity(3),
      Permutation::from_cycles("(12)", 3),
      Permutation::from_cycles("(13)", 3),
      Permutation::from_cycles("(23)", 3),
      Permutation::from_cycles("(123)", 3),  // 1 -> 2 -> 3 -> 1
      Permutation::from_cycles("(132)", 3),
  };
  return elems;
}

struct LogicalOperator {
  Eigen::MatrixXcd physical;            // 8x8 operator on the three qubits
  Eigen::Matrix2cd multiplicity_block;  // action on (alpha0, alpha1), any m slice
  double kappa = 1.0;                   // positive scale; block/kappa is an involution
  std::array<cplx, 6> perm_coeffs{};    // combination over s3_elements() order
  double fit_residual = 0.0;            // Frobenius residual of that combination

  Eigen::MatrixXcd normalized() const { return physical / kappa; }
};

namespace detail {

inline const SchurBasis& three_qubit_basis() {
  static const std::shared_ptr<const SchurBasis> b = schur_basis(3);
  return *b;
}

// Dense column of the (two_j, alpha, r) basis vector.
inline Eigen::VectorXcd basis_column(int two_j, int alpha, int r) {
  const auto& blk = three_qubit_basis().block(two_j, alpha);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(8);
  for (const auto& [idx, val] : blk.vectors[r]) v(idx) = val;
  return v;
}

// Embed a 2x2 matrix acting on the j = 1/2 multiplicity factor (identity on
// the representation factor, zero on the j = 3/2 sector).
inline Eigen::MatrixXcd embed_multiplicity(const Eigen::Matrix2cd& block) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(8, 8);
  for (int r = 0; r < 2; ++r) {
    std::array<Eigen::VectorXcd, 2> cols = {basis_column(1, 0, r), basis_column(1, 1, r)};
    for (int ap = 0; ap < 2; ++ap)
      for (int a = 0; a < 2; ++a) out += block(ap, a) * cols[ap] * cols[a].adjoint();
  }
  return out;
}

// 2x2 multiplicity block of an 8x8 operator at the given m slice.
inline Eigen::Matrix2cd multiplicity_block_of(const Eigen::MatrixXcd& op, int r) {
  Eigen::Matrix2cd m;
  std::array<Eigen::VectorXcd, 2> cols = {basis_column(1, 0, r), basis_column(1, 1, r)};
  for (int ap = 0; ap < 2; ++ap)
    for (int a = 0; a < 2; ++a) m(ap, a) = cols[ap].dot(op * cols[a]);
  return m;
}

// Least-squares combination of the six permutation operators reproducing
// `target`.  The permutation matrices are real, so the coefficients split
// into independent real and imaginary solves; they may be genuinely complex
// (the multiplicity factor of an imaginary combination is outside the real
// span).  On three qubits the six operators are linearly dependent (the
// alternating-sign combination is the antisymmetrizer, which vanishes), so
// the system is rank-5 and we return the minimum-norm solution.
inline std::pair<std::array<cplx, 6>, double> fit_permutation_combo(
    const Eigen::MatrixXcd& target) {
  Eigen::MatrixXd design(64, 6);
  for (int g = 0; g < 6; ++g) {
    const Eigen::MatrixXd m = permutation_op(s3_elements()[g], 3).dense();
    design.col(g) = Eigen::Map<const Eigen::VectorXd>(m.data(), 64);
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
  const Eigen::MatrixXd t_re = target.real(), t_im = target.imag();
  const Eigen::VectorXd v_re = Eigen::Map<const Eigen::VectorXd>(t_re.data(), 64);
  const Eigen::VectorXd v_im = Eigen::Map<const Eigen::VectorXd>(t_im.data(), 64);
  Eigen::VectorXcd coeff =
      cod.solve(v_re).cast<cplx>() + cplx(0.0, 1.0) * cod.solve(v_im).cast<cplx>();
  Eigen::MatrixXcd recombined = Eigen::MatrixXcd::Zero(8, 8);
  for (int g = 0; g < 6; ++g)
    recombined += coeff(g) * permutation_op(s3_elements()[g], 3).dense().cast<cplx>();
  std::array<cplx, 6> out;
  for (int g = 0; g < 6; ++g) out[g] = coeff(g);
  return {out, (recombined - target).norm()};
}

// Positive scale of a traceless involution-up-to-scale Hermitian block.
inline double block_scale(const Eigen::Matrix2cd& block) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(block);
  return std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(1)));
}

}  // namespace detail

// Z_L = (S_(13) + S_(23) - 2 S_(12)) / 3.  On each m slice of the j = 1/2
// sector it acts exactly as diag(-1, +1) in path order (kappa = 1); on the
// j = 3/2 sector it vanishes (the coefficients sum to zero).
inline LogicalOperator z_logical() {
  LogicalOperator op;
  const Eigen::MatrixXcd s12 =
      permutation_op(Permutation::from_cycles("(12)", 3), 3).dense().cast<cplx>();
  const Eigen::MatrixXcd s13 =
      permutation_op(Permutation::from_cycles("(13)", 3), 3).dense().cast<cplx>();
  const Eigen::MatrixXcd s23 =
      permutation_op(Permutation::from_cycles("(23)", 3), 3).dense().cast<cplx>();
  op.physical = (s13 + s23 - 2.0 * s12) / 3.0;
  op.multiplicity_block = detail::multiplicity_block_of(op.physical, 0);
  op.kappa = detail::block_scale(op.multiplicity_block);
  auto [coeffs, residual] = detail::fit_permutation_combo(op.physical);
  op.perm_coeffs = coeffs;  // recovers the defining (-2/3, 1/3, 1/3) combination
  op.fit_residual = residual;
  return op;
}

// Pauli X and Y on the multiplicity factor, anchored to the z_logical
// eigenframe: X maps the +1 eigenvector to the -1 eigenvector with
// coefficient +1, and Y = i X Z.  Both act as zero on the j = 3/2 sector and
// as identity on the representation factor.  Their permutation combinations
// are solved in the group algebra; Y's coefficients are imaginary
// (i (S_(123) - S_(132)) / sqrt(3)) because the real span of the permutation
// matrices only reaches real multiplicity blocks.
inline std::pair<LogicalOperator, LogicalOperator> xy_logical() {
  const LogicalOperator z = z_logical();
  const Eigen::Matrix2cd zn = z.multiplicity_block / z.kappa;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(zn);
  Eigen::Vector2cd minus = es.eigenvectors().col(0);  // eigenvalue -1
  Eigen::Vector2cd plus = es.eigenvectors().col(1);   // eigenvalue +1
  const auto fix_phase = [](Eigen::Vector2cd& v) {
    const int k = std::abs(v(0)) >= std::abs(v(1)) ? 0 : 1;
    v *= std::conj(v(k)) / std::abs(v(k));
  };
  fix_phase(minus);
  fix_phase(plus);

  const Eigen::Matrix2cd xb = plus * minus.adjoint() + minus * plus.adjoint();
  const Eigen::Matrix2cd yb = cplx(0.0, 1.0) * xb * zn;

  const auto build = [](const Eigen::Matrix2cd& block) {
    LogicalOperator op;
    op.multiplicity_block = block;
    op.kappa = detail::block_scale(block);
    op.physical = detail::embed_multiplicity(block);
    auto [coeffs, residual] = detail::fit_permutation_combo(op.physical);
    op.perm_coeffs = coeffs;
    op.fit_residual = residual;
    return op;
  };
  return {build(xb), build(yb)};
}

// exp(i alpha Z~) exp(i beta Y~) exp(i gamma Z~) on the physical space, using
// the normalized (involutive on the j = 1/2 sector, zero elsewhere) logical
// operators.  For such H with H^2 = P (the sector projector),
// exp(i t H) = 1 + (cos t - 1) P + i sin t H exactly.
inline Eigen::MatrixXcd logical_unitary(double alpha, double beta, double gamma) {
  const LogicalOperator z = z_logical();
  const auto xy = xy_logical();
  const Eigen::MatrixXcd zt = z.normalized();
  const Eigen::MatrixXcd yt = xy.second.normalized();
  const Eigen::MatrixXcd proj = detail::embed_multiplicity(Eigen::Matrix2cd::Identity());
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(8, 8);
  const auto rot = [&](const Eigen::MatrixXcd& h, double t) {
    return id + (std::cos(t) - 1.0) * proj + cplx(0.0, std::sin(t)) * h;
  };
  return rot(zt, alpha) * rot(yt, beta) * rot(zt, gamma);
}

// Build the physical state with blocks (j=1/2, alpha=0, xi=a0, rep0) and
// (j=1/2, alpha=1, xi=a1, rep1); the j = 3/2 block is empty.
inline MultiQubitState encode_logical(const LogicalQubit& q, const SpinState& rep0,
                                      const SpinState& rep1) {
  if (rep0.two_j() != 1 || rep1.two_j() != 1)
    throw std::invalid_argument("representation states must be spin-1/2");
  SchurDecomposition dec;
  dec.n = 3;
  const auto basis = schur_basis(3);
  int alpha = 0, prev = -1;
  for (const auto& blk : basis->blocks) {
    alpha = (blk.two_j == prev) ? alpha + 1 : 0;
    prev = blk.two_j;
    SchurBlockComponent comp;
    comp.two_j = blk.two_j;
    comp.alpha = alpha;
    comp.path = blk.path;
    if (blk.two_j == 1) {
      comp.xi = (alpha == 0) ? q.a0 : q.a1;
      comp.rep_state.emplace((alpha == 0) ? rep0 : rep1);
      if (std::abs(comp.xi) < 1e-14) {
        comp.xi = 0.0;
        comp.rep_state.reset();
      }
    }
    dec.blocks.push_back(std::move(comp));
  }
  return reconstruct(dec);
}

// Gauge-invariant logical readout.  gram(a, a') = <v_a, v_a'> over the raw
// (unnormalized) j = 1/2 block vectors; it is exactly invariant under any
// collective unitary, reduces to the outer product of (xi0, xi1) when both
// blocks share one representation state, and its diagonal is |xi_alpha|^2
// always.
struct LogicalDecode {
  Eigen::Vector2cd xi;        // anchor-phase block amplitudes (alpha0, alpha1)
  Eigen::Matrix2cd gram;      // invariant multiplicity Gram matrix
  double rep_overlap = 1.0;   // |<rep0|rep1>| when both blocks are occupied
  bool shared_reps = false;   // true when the two rep states coincide
  std::optional<cplx> ratio;  // xi1/xi0, defined in the shared-rep case
};

inline LogicalDecode decode_logical(const MultiQubitState& s) {
  if (s.n() != 3) throw std::invalid_argument("logical decoding is defined for three qubits");
  const auto basis = schur_basis(3);
  LogicalDecode out;
  std::array<Eigen::Vector2cd, 2> v;
  for (int alpha = 0; alpha < 2; ++alpha) {
    const auto& blk = basis->block(1, alpha);
    for (int r = 0; r < 2; ++r) {
      cplx acc = 0.0;
      for (const auto& [idx, val] : blk.vectors[r]) acc += val * s.amps()(idx);
      v[alpha](r) = acc;
    }
  }
  for (int a = 0; a < 2; ++a)
    for (int ap = 0; ap < 2; ++ap) out.gram(a, ap) = v[a].dot(v[ap]);

  const auto dec = decompose(s);
  for (const auto& blk : dec.blocks) {
    if (blk.two_j != 1) continue;
    out.xi(blk.alpha) = blk.xi;
  }
  const double n0 = v[0].norm(), n1 = v[1].norm();
  if (n0 > 1e-12 && n1 > 1e-12) {
    out.rep_overlap = std::abs(v[0].dot(v[1])) / (n0 * n1);
    out.shared_reps = out.rep_overlap > 1.0 - 1e-8;
  } else {
    out.rep_overlap = 1.0;
    out.shared_reps = true;  // at most one block occupied: trivially shared
  }
  if (out.shared_reps && std::abs(out.gram(0, 0)) > 1e-20)
    out.ratio = out.gram(0, 1) / std::real(out.gram(0, 0));
  return out;
}

struct ImmunityReport {
  int trials = 0;
  double max_xi_deviation = 0.0;    // worst |xi| magnitude drift over all blocks
  double max_gram_deviation = 0.0;  // worst entry drift of the logical Gram matrix
  bool shared_reps = false;         // which case the input state exercises
  double xi_tol = 1e-10;
  double gram_tol = 1e-9;
  bool pass = false;
};

// Apply `trials` Haar-random collective unitaries and check that neither the
// block magnitudes |xi| nor the logical Gram matrix move.
inline ImmunityReport collective_noise_immunity(const MultiQubitState& state, int trials,
                                                std::uint64_t seed = 42) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  if (state.n() != 3)
    throw std::invalid_argument("collective-noise immunity check is defined for three qubits");
  ImmunityReport report;
  report.trials = trials;

  const auto base_dec = decompose(state);
  std::vector<double> base_mags;
  for (const auto& blk : base_dec.blocks) base_mags.push_back(std::abs(blk.xi));
  const LogicalDecode base = decode_logical(state);
  report.shared_reps = base.shared_reps;

  for (int t = 0; t < trials; ++t) {
    Rng rng(seed + static_cast<std::uint64_t>(t));  // independent per-trial stream
    const Eigen::Matrix2cd u = haar_su2(rng);
    MultiQubitState moved(3, collective_op(u, 3).apply(state.amps()));
    const auto dec = decompose(moved);
    for (std::size_t i = 0; i < dec.blocks.size(); ++i) {
      report.max_xi_deviation = std::max(report.max_xi_deviation,
                                         std::abs(std::abs(dec.blocks[i].xi) - base_mags[i]));
    }
    const LogicalDecode after = decode_logical(moved);
    report.max_gram_deviation = std::max(report.max_gram_deviation,
                                         (after.gram - base.gram).cwiseAbs().maxCoeff());
  }
  report.pass =
      report.max_xi_deviation <= report.xi_tol && report.max_gram_deviation <= report.gram_tol;
  return report;
}

}  // namespace stellar
