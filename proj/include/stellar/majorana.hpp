#pragma once

// Stellar representation of spin-J pure states: every normalized state of a
// spin J maps to a multiset of 2J points on the unit sphere, the roots of an
// associated polynomial read on the Bloch sphere.  Collective SU(2) rotations
// act as rigid rotations of the point set and invertible collective GL(2)
// actions as Mobius transformations, so point-coincidence patterns are
// invariants of the orbit.
//
// Amplitude ordering: amps[k] is the component on |J, m = J - k>, i.e. the
// list runs from m = J down to m = -J.
//
// The polynomial attached to a state has coefficient
//     c_k = (-1)^k sqrt(C(2J, k)) amps[k]     on z^k,  k = 0..2J,
// with nominal degree 2J.  Anchors fixing this convention: |J, J> maps to a
// 2J-fold point at the north pole (all roots at infinity), |J, -J> to the
// south pole (all roots at the origin), and a symmetrized product of spin-1/2
// directions recovers exactly those directions.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "stellar/bloch.hpp"
#include "stellar/combinatorics.hpp"
#include "stellar/pairing.hpp"
#include "stellar/polyroots.hpp"

namespace stellar {

class SpinState {
 public:
  SpinState(int two_j, Eigen::VectorXcd amps) : two_j_(two_j), amps_(std::move(amps)) {
    if (two_j_ < 0) throw std::invalid_argument("2J must be nonnegative");
    if (amps_.size() != two_j_ + 1)
      throw std::invalid_argument("amplitude count must be 2J + 1");
    const double n = amps_.norm();
    if (n < 1e-150) throw std::invalid_argument("cannot normalize the zero state");
    amps_ /= n;
  }

  int two_j() const { return two_j_; }
  double j() const { return 0.5 * two_j_; }
  const Eigen::VectorXcd& amps() const { return amps_; }

 private:
  int two_j_;
  Eigen::VectorXcd amps_;
};

// |<a|b>| in [0, 1].
inline double overlap(const SpinState& a, const SpinState& b) {
  if (a.two_j() != b.two_j()) throw std::invalid_argument("spin mismatch in overlap");
  return std::abs(a.amps().dot(b.amps()));  // Eigen dot conjugates the left factor
}

inline ComplexPolynomial majorana_poly(const SpinState& s) {
  const int n = s.two_j();
  ComplexPolynomial p;
  p.nominal_degree = n;
  p.coeffs.resize(n + 1);
  double sign = 1.0;
  for (int k = 0; k <= n; ++k) {
    p.coeffs[k] = sign * std::sqrt(binomial_d(n, k)) * s.amps()(k);
    sign = -sign;
  }
  return p;
}

// Point multiset on the sphere together with the underlying roots.
// points[i] corresponds to finite_roots[i] for i < finite count, after which
// the remaining points are north-pole images of the roots at infinity.
struct PointConstellation {
  std::vector<BlochPoint> points;
  RootSet source_roots;
};

// Multiset of coincidence multiplicities, sorted descending; e.g. [2, 1, 1]
// for a double point plus two simple ones.
struct DegeneracySignature {
  std::vector<int> multiplicities;
  bool operator==(const DegeneracySignature& o) const {
    return multiplicities == o.multiplicities;
  }
};

namespace detail {

// Single-linkage clusters (connected components of the "distance <= tau"
// graph) over a point set; returns groups of indices.
inline std::vector<std::vector<int>> single_linkage(const std::vector<BlochPoint>& pts,
                                                    double tau) {
  const int n = static_cast<int>(pts.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (distance(pts[i], pts[j]) <= tau) parent[find(i)] = find(j);
  std::vector<std::vector<int>> groups;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[slot[r]].push_back(i);
  }
  return groups;
}

// Coefficient lists of p, p', p'', ... up to and including order `count`.
inline std::vector<std::vector<cplx>> derivative_tower(const std::vector<cplx>& c, int count) {
  std::vector<std::vector<cplx>> tower;
  tower.push_back(c);
  for (int d = 1; d <= count; ++d) {
    const std::vector<cplx>& prev = tower.back();
    std::vector<cplx> next;
    if (prev.size() <= 1) {
      next = {cplx(0.0)};
    } else {
      next.resize(prev.size() - 1);
      for (std::size_t k = 1; k < prev.size(); ++k)
        next[k - 1] = static_cast<double>(k) * prev[k];
    }
    tower.push_back(std::move(next));
  }
  return tower;
}

// Worst-case rounding scale of a Horner evaluation at |z|: sum |c_k| |z|^k.
inline double evaluation_scale(const std::vector<cplx>& c, double abs_z) {
  double s = 0.0;
  double zp = 1.0;
  for (const cplx& x : c) {
    s += std::abs(x) * zp;
    zp *= abs_z;
  }
  return std::max(s, 1e-300);
}

constexpr double kEvalFactor = 64.0;    // headroom over bare Horner rounding
constexpr double kDataFactor = 64.0;    // trusted relative accuracy of the coefficients
constexpr double kMarginFactor = 10.0;  // separation demanded of the top derivative
constexpr double kFuzzSafety = 4.0;     // slack allowed between claimed and implied fuzz
constexpr double kMachineEps = 2.2e-16;

// Noise floor for the k-th derivative of the (max-normalized) polynomial at
// |z|.  Two contributions: the Horner evaluation of the stage coefficients
// rounds at ~eps * sum |c_i||z|^i, and each ORIGINAL coefficient is only
// trusted to ~eps relative to the largest one, which differentiation turns
// into falling-factorial weights (i+k)!/i!.  The data term is what keeps the
// test honest when every stage term is tiny -- e.g. in the reversed chart
// near the pole, where the evaluation scale alone would demand residuals far
// below the accuracy the coefficients were ever computed to.
inline double noise_terms(const std::vector<cplx>& stage_coeffs, int k, double abs_z,
                          double eval_factor, double data_factor) {
  const double eval = evaluation_scale(stage_coeffs, abs_z);
  double data = 0.0;
  double w = 1.0;
  for (int j = 2; j <= k; ++j) w *= j;  // k!
  double zp = 1.0;
  for (std::size_t i = 0; i < stage_coeffs.size(); ++i) {
    if (i > 0) {
      w *= static_cast<double>(i + k) / static_cast<double>(i);
      zp *= abs_z;
    }
    data += w * zp;
  }
  return kMachineEps * (eval_factor * eval + data_factor * data);
}

inline double derivative_noise(const std::vector<cplx>& stage_coeffs, int k, double abs_z) {
  return noise_terms(stage_coeffs, k, abs_z, kEvalFactor, kDataFactor);
}

// Fuzz radius a genuine k-fold root at z would show, implied by the honest
// (headroom-free) error level: |p| <= eps_honest within radius r of the root
// where eps_honest ~ |p^(k)(z)/k!| r^k.  Cluster members claimed as fuzz of a
// certified k-fold root must lie within a small multiple of this; genuinely
// distinct roots sit far outside it even when the residual certificate alone
// is ambiguous (e.g. a critical point inside a crowded constellation, where
// |p| is at noise floor over a whole region).
inline double implied_fuzz_radius(const std::vector<std::vector<cplx>>& tower, int k, cplx z) {
  const double az = std::abs(z);
  const double eps_honest = noise_terms(tower[0], 0, az, 2.0, 4.0);
  double kfact = 1.0;
  for (int j = 2; j <= k; ++j) kfact *= j;
  const double lead = std::abs(evaluate(tower[k], z)) / kfact;
  if (lead <= 0.0) return std::numeric_limits<double>::infinity();
  return std::pow(eps_honest / lead, 1.0 / static_cast<double>(k));
}

// Newton iteration treating `target` as having a simple root near z.
// Returns false if the step sequence leaves the local basin.
inline bool newton_simple(const std::vector<cplx>& target, cplx& z, int steps) {
  for (int step = 0; step < steps; ++step) {
    cplx pv, dv;
    evaluate_with_derivative(target, z, pv, dv);
    if (std::abs(dv) < 1e-280) return true;
    const cplx w = pv / dv;
    if (!std::isfinite(std::abs(w))) return false;
    if (std::abs(w) > 0.5 * (1.0 + std::abs(z))) return false;  // not in a Newton basin
    z -= w;
    if (std::abs(w) < 1e-16 * (1.0 + std::abs(z))) return true;
  }
  return true;
}

// True when the derivatives of order 0..upto-1 all vanish at z to within the
// rounding noise of their own evaluation.
inline bool residual_ladder_ok(const std::vector<std::vector<cplx>>& tower, int upto, cplx z) {
  const double az = std::abs(z);
  for (int k = 0; k < upto; ++k) {
    if (std::abs(evaluate(tower[k], z)) > derivative_noise(tower[k], k, az)) return false;
  }
  return true;
}

// Look for a multiple root of multiplicity >= d_start near the centroid.
// Returns the certified multiplicity (0 on failure) and the refined root.
//
// The certificate: at the refined center z*, derivatives of order 0..d-1
// vanish to within rounding noise while the d-th stands clearly above it.
// z* comes from Newton on the (d-1)-th derivative, for which a d-fold root
// is simple, so the refinement is quadratically convergent.
//
// After d_start certifies, probe upward: if the d-th derivative also vanishes
// at a nearby Newton-refined point where the whole ladder still passes, the
// true multiplicity is higher; without this, a d-fold root examined with a
// lower hypothesis can be accepted at a slightly offset z* where the margin
// test is satisfied vacuously.
inline int certify_multiple_root(const std::vector<std::vector<cplx>>& tower, int d_start,
                                 int d_cap, cplx centroid, cplx& center) {
  cplx z = centroid;
  if (!newton_simple(tower[d_start - 1], z, 12)) return 0;
  if (!residual_ladder_ok(tower, d_start, z)) return 0;
  int d = d_start;
  while (d < d_cap && d + 1 < static_cast<int>(tower.size())) {
    cplx z2 = z;
    if (!newton_simple(tower[d], z2, 8)) break;
    if (std::abs(z2 - z) > 0.02 * (1.0 + std::abs(z))) break;
    if (std::abs(evaluate(tower[d], z2)) > derivative_noise(tower[d], d, std::abs(z2))) break;
    if (!residual_ladder_ok(tower, d, z2)) break;
    z = z2;
    ++d;
  }
  const double az = std::abs(z);
  const double noise_d = derivative_noise(tower[d], d, az);
  if (std::abs(evaluate(tower[d], z)) <= kMarginFactor * noise_d) return 0;
  center = z;
  return d;
}

// Split a cluster along the largest gap: build the minimum spanning tree of
// the member points and cut its longest edge.
inline void split_cluster(const std::vector<BlochPoint>& pts, const std::vector<int>& members,
                          std::vector<int>& left, std::vector<int>& right) {
  const int n = static_cast<int>(members.size());
  std::vector<int> tree_parent(n, -1);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<char> in_tree(n, false);
  best[0] = 0.0;
  for (int iter = 0; iter < n; ++iter) {
    int u = -1;
    for (int i = 0; i < n; ++i)
      if (!in_tree[i] && (u < 0 || best[i] < best[u])) u = i;
    in_tree[u] = true;
    for (int v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      const double w = distance(pts[members[u]], pts[members[v]]);
      if (w < best[v]) {
        best[v] = w;
        tree_parent[v] = u;
      }
    }
  }
  int cut = 1;
  for (int i = 2; i < n; ++i)
    if (best[i] > best[cut]) cut = i;
  // nodes on the cut side = subtree of `cut`; collect by walking parents
  std::vector<std::vector<int>> children(n);
  for (int i = 1; i < n; ++i)
    if (i != cut) children[tree_parent[i]].push_back(i);
  std::vector<char> on_right(n, false);
  std::vector<int> stack = {cut};
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    on_right[u] = true;
    for (int v : children[u]) stack.push_back(v);
  }
  for (int i = 0; i < n; ++i) (on_right[i] ? right : left).push_back(members[i]);
}

}  // namespace detail

// Build the constellation of a state.
//
// The returned points are the roots of the state polynomial pushed through
// the stereographic chart, with two post-processing passes:
//
//  1. multiplicity refinement: a d-fold root comes out of the solver as a
//     fuzzed cluster of diameter ~ noise^(1/d), far wider than the noise
//     itself for large d.  Candidate clusters are certified against a
//     derivative-residual test and, when genuinely degenerate, replaced by d
//     copies of the refined root (clusters in the |z| > 1 region are handled
//     on the reversed polynomial in the chart w = 1/z, keeping the test
//     well conditioned near the north pole);
//
//  2. eps coalescing: points within `eps` of each other (single linkage,
//     chordal metric) are snapped to their common spherical centroid, making
//     coincidence exact at the caller's resolution.  Points driven to within
//     machine precision of the north pole are reported exactly as roots at
//     infinity.
inline PointConstellation majorana_points(const SpinState& s, double eps = 1e-6) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const ComplexPolynomial poly = majorana_poly(s);
  const RootSet raw = find_roots(poly, 1e-10);

  // Work on a normalized coefficient copy (max |c| = 1) for the certificates.
  std::vector<cplx> c = poly.coeffs;
  {
    const double m = detail::max_abs(c);
    for (cplx& x : c) x /= m;
  }
  std::vector<cplx> c_rev(c.rbegin(), c.rend());  // w^n p(1/w)

  const int nf = static_cast<int>(raw.finite_roots.size());
  std::vector<BlochPoint> finite_pts(nf);
  for (int i = 0; i < nf; ++i) finite_pts[i] = z_to_bloch(ExtendedComplex(raw.finite_roots[i]));

  // --- pass 1: certified multiplicity refinement over finite roots ---------
  std::vector<cplx> refined(raw.finite_roots);
  const int tower_depth = std::min(nf + 1, poly.nominal_degree);
  const auto tower_fwd = detail::derivative_tower(c, tower_depth);
  const auto tower_rev = detail::derivative_tower(c_rev, tower_depth);

  // Certify a root of multiplicity >= k_start near the cluster, working in
  // whichever chart keeps the members inside the unit disk.  Returns the
  // certified multiplicity (0 on failure) along with the chordal fuzz radius
  // a genuine root of that multiplicity would show at the certified center.
  auto certify = [&](const std::vector<int>& members, int k_start, cplx& center,
                     double& fuzz_chordal) -> int {
    const int cap = static_cast<int>(members.size());
    double max_abs_z = 0.0;
    for (int idx : members) max_abs_z = std::max(max_abs_z, std::abs(refined[idx]));
    if (max_abs_z > 1.0) {
      cplx centroid_w = 0.0;
      for (int idx : members) centroid_w += 1.0 / refined[idx];
      centroid_w /= static_cast<double>(cap);
      const int k = detail::certify_multiple_root(tower_rev, k_start, cap, centroid_w, center);
      if (k == 0) return 0;
      if (center == cplx(0.0)) return 0;  // belongs to the infinity block
      const double rw = detail::implied_fuzz_radius(tower_rev, k, center);
      fuzz_chordal = 2.0 * rw / (1.0 + std::norm(center));
      center = 1.0 / center;
      return k;
    }
    cplx centroid = 0.0;
    for (int idx : members) centroid += refined[idx];
    centroid /= static_cast<double>(cap);
    const int k = detail::certify_multiple_root(tower_fwd, k_start, cap, centroid, center);
    if (k > 0) {
      const double rz = detail::implied_fuzz_radius(tower_fwd, k, center);
      fuzz_chordal = 2.0 * rz / (1.0 + std::norm(center));
    }
    return k;
  };

  std::function<void(const std::vector<int>&)> refine = [&](const std::vector<int>& members) {
    const int d = static_cast<int>(members.size());
    if (d <= 1) return;
    // Try the full cluster first, then lower starting hypotheses: a stray
    // simple root can sit inside the fuzz ring of a high-order root, in which
    // case the certificate still pins the multiple root exactly and only the
    // leftovers need further treatment.  The certifier may promote a low
    // hypothesis back up, so the answer does not depend on which derivative
    // Newton happens to land on.
    for (int k0 = d; k0 >= 2; --k0) {
      cplx center;
      double fuzz_chordal = 0.0;
      const int k = certify(members, k0, center, fuzz_chordal);
      if (k == 0) continue;
      const BlochPoint center_pt = z_to_bloch(ExtendedComplex(center));
      double nearest = std::numeric_limits<double>::infinity();
      for (int idx : members) nearest = std::min(nearest, distance(finite_pts[idx], center_pt));
      if (nearest > 0.45) continue;  // certified some other cluster's root
      std::vector<int> sorted = members;
      std::sort(sorted.begin(), sorted.end(), [&](int a, int b) {
        return distance(finite_pts[a], center_pt) < distance(finite_pts[b], center_pt);
      });
      // The k members being snapped must look like fuzz of the claimed root:
      // a residual certificate alone can be satisfied at a critical point
      // amid a crowd of distinct roots, but those sit far outside the fuzz
      // radius the noise level supports.
      const double limit = std::max(detail::kFuzzSafety * fuzz_chordal, 1e-12);
      if (distance(finite_pts[sorted[k - 1]], center_pt) > limit) continue;
      for (int i = 0; i < k; ++i) refined[sorted[i]] = center;
      if (k < d) refine(std::vector<int>(sorted.begin() + k, sorted.end()));
      return;
    }
    if (d == 2) return;  // two simple roots
    std::vector<int> left, right;
    detail::split_cluster(finite_pts, members, left, right);
    if (left.empty() || right.empty()) return;
    refine(left);
    refine(right);
  };

  for (const std::vector<int>& group : detail::single_linkage(finite_pts, 0.5)) refine(group);

  // --- pass 2: eps coalescing over the full multiset (finite + infinity) ---
  std::vector<ExtendedComplex> ext;
  ext.reserve(raw.total());
  for (const cplx& r : refined) ext.push_back(ExtendedComplex(r));
  for (int i = 0; i < raw.infinity_count; ++i) ext.push_back(ExtendedComplex::infinity());

  std::vector<BlochPoint> all_pts(ext.size());
  for (std::size_t i = 0; i < ext.size(); ++i) all_pts[i] = z_to_bloch(ext[i]);

  std::vector<ExtendedComplex> snapped(ext.size());
  for (const std::vector<int>& group : detail::single_linkage(all_pts, eps)) {
    if (group.size() == 1) {
      snapped[group[0]] = ext[group[0]];
      continue;
    }
    double sx = 0.0, sy = 0.0, sz = 0.0;
    for (int idx : group) {
      sx += all_pts[idx].x;
      sy += all_pts[idx].y;
      sz += all_pts[idx].z;
    }
    const ExtendedComplex common = bloch_to_z(make_bloch(sx, sy, sz));
    for (int idx : group) snapped[idx] = common;
  }

  // --- assemble, finite entries first ---------------------------------------
  PointConstellation out;
  for (const ExtendedComplex& e : snapped) {
    if (e.is_infinity()) continue;
    out.source_roots.finite_roots.push_back(e.value());
    out.points.push_back(z_to_bloch(e));
  }
  for (const ExtendedComplex& e : snapped) {
    if (!e.is_infinity()) continue;
    ++out.source_roots.infinity_count;
    out.points.push_back(BlochPoint{0.0, 0.0, 1.0});
  }
  return out;
}

// Normalized projection of |s_1> x ... x |s_2J> onto the symmetric (Dicke)
// sector.  The constellation of the result is exactly the input directions.
inline SpinState state_from_points(const std::vector<Spinor>& spinors) {
  const int n = static_cast<int>(spinors.size());
  if (n == 0) throw std::invalid_argument("need at least one spinor");
  std::vector<cplx> e(n + 1, cplx(0.0));
  e[0] = 1.0;
  int used = 0;
  for (const Spinor& s : spinors) {
    ++used;
    for (int k = used; k >= 1; --k) e[k] = s.c0() * e[k] + s.c1() * e[k - 1];
    e[0] = s.c0() * e[0];
  }
  Eigen::VectorXcd amps(n + 1);
  for (int k = 0; k <= n; ++k) amps(k) = e[k] / std::sqrt(binomial_d(n, k));
  return SpinState(n, amps);
}

inline SpinState product_state(int n, const Spinor& s) {
  return state_from_points(std::vector<Spinor>(n, s));
}

// (|J, J> + |J, -J>)/sqrt(2) for 2J = n: the n-point ring on the equator.
inline SpinState noon_state(int n) {
  if (n < 1) throw std::invalid_argument("need n >= 1");
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(n + 1);
  amps(0) = 1.0 / std::sqrt(2.0);
  amps(n) = 1.0 / std::sqrt(2.0);
  return SpinState(n, amps);
}

// Restriction of m x m x ... x m (2J factors) to the symmetric sector, in the
// Dicke basis with the amplitude ordering above.  For unitary m this is the
// spin-J rotation matrix; it is multiplicative in m for any invertible m.
inline Eigen::MatrixXcd sym_power(const Eigen::Matrix2cd& m, int two_j) {
  if (two_j < 0) throw std::invalid_argument("2J must be nonnegative");
  const int n = two_j;
  Eigen::MatrixXcd w(n + 1, n + 1);
  std::vector<cplx> e(n + 1);
  for (int k = 0; k <= n; ++k) {
    // input Dicke state with k lowered factors: n-k factors m|0>, k factors m|1>
    std::fill(e.begin(), e.end(), cplx(0.0));
    e[0] = 1.0;
    int used = 0;
    for (int f = 0; f < n; ++f) {
      const bool lowered = f >= n - k;
      const cplx a = lowered ? m(0, 1) : m(0, 0);
      const cplx b = lowered ? m(1, 1) : m(1, 0);
      ++used;
      for (int kk = used; kk >= 1; --kk) e[kk] = a * e[kk] + b * e[kk - 1];
      e[0] = a * e[0];
    }
    const double col_norm = std::sqrt(binomial_d(n, k));
    for (int kp = 0; kp <= n; ++kp) w(kp, k) = e[kp] * col_norm / std::sqrt(binomial_d(n, kp));
  }
  return w;
}

// Collective invertible action on a spin state (renormalized).  The
// constellation transforms by the Mobius map of m: this is the group action
// whose coincidence structure degeneracy_signature captures.
inline SpinState apply_gl2(const SpinState& s, const Eigen::Matrix2cd& m) {
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale <= 0.0 || std::abs(m.determinant()) <= 1e-14 * scale * scale)
    throw std::invalid_argument("collective action requires an invertible matrix");
  return SpinState(s.two_j(), sym_power(m, s.two_j()) * s.amps());
}

// Sorted coincidence multiplicities of a constellation at resolution eps
// (single-linkage, chordal metric).  Invariant under invertible collective
// actions as long as eps separates the transformed clusters.
inline DegeneracySignature degeneracy_signature(const PointConstellation& c, double eps = 1e-6) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  DegeneracySignature sig;
  for (const std::vector<int>& group : detail::single_linkage(c.points, eps))
    sig.multiplicities.push_back(static_cast<int>(group.size()));
  std::sort(sig.multiplicities.begin(), sig.multiplicities.end(), std::greater<int>());
  return sig;
}

// |<s| exp(i phi n.sigma)^{x 2J} |s>| sampled at `samples` equally spaced
// angles phi_j = 2 pi j / samples, j = 0..samples-1.
inline std::vector<std::pair<double, double>> rotation_fidelity_profile(const SpinState& s,
                                                                        const BlochPoint& axis,
                                                                        int samples) {
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  const Eigen::Matrix2cd sigma_n =
      axis.x * pauli_x() + axis.y * pauli_y() + axis.z * pauli_z();
  std::vector<std::pair<double, double>> profile;
  profile.reserve(samples);
  const double two_pi = 6.283185307179586476925286766559;
  for (int k = 0; k < samples; ++k) {
    const double phi = two_pi * k / samples;
    // exp(i phi sigma_n) = cos(phi) 1 + i sin(phi) sigma_n  (sigma_n^2 = 1)
    const Eigen::Matrix2cd u = std::cos(phi) * Eigen::Matrix2cd::Identity() +
                               cplx(0.0, 1.0) * std::sin(phi) * sigma_n;
    const Eigen::VectorXcd rotated = sym_power(u, s.two_j()) * s.amps();
    profile.emplace_back(phi, std::abs(s.amps().dot(rotated)));
  }
  return profile;
}

}  // namespace stellar
