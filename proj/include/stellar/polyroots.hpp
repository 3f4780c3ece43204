#pragma once

// Dense complex polynomial root finding on the extended plane.
//
// Polynomials carry a nominal degree in addition to their coefficient list:
// a deficient leading block (coefficients numerically zero at the top) is
// reported as roots at infinity rather than silently dropped.  Finite roots
// are found by the Aberth-Ehrlich simultaneous iteration with a
// companion-matrix eigenvalue fallback, and every returned root is certified
// against a residual bound.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace stellar {

using cplx = std::complex<double>;

// Coefficients are stored lowest power first: coeffs[k] multiplies z^k.
// coeffs.size() == nominal_degree + 1 always; the entries at the top may be
// zero, in which case the polynomial is degree-deficient and the missing
// roots live at z = infinity.
struct ComplexPolynomial {
  std::vector<cplx> coeffs;
  int nominal_degree = 0;
};

// Multiset of roots: finite ones listed explicitly (repeats allowed),
// plus a count of roots at infinity.
struct RootSet {
  std::vector<cplx> finite_roots;
  int infinity_count = 0;

  int total() const { return static_cast<int>(finite_roots.size()) + infinity_count; }
};

// Thrown when the iteration fails to certify all roots within tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), best_residual(residual) {}
  double best_residual;
};

inline ComplexPolynomial make_polynomial(std::vector<cplx> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("polynomial needs at least one coefficient");
  ComplexPolynomial p;
  p.nominal_degree = static_cast<int>(coeffs.size()) - 1;
  p.coeffs = std::move(coeffs);
  return p;
}

// Horner evaluation.
inline cplx evaluate(const std::vector<cplx>& coeffs, cplx z) {
  cplx v = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * z + *it;
  return v;
}

inline cplx evaluate(const ComplexPolynomial& p, cplx z) { return evaluate(p.coeffs, z); }

// Horner evaluation of p and p' in one pass.
inline void evaluate_with_derivative(const std::vector<cplx>& coeffs, cplx z, cplx& value,
                                     cplx& deriv) {
  value = 0.0;
  deriv = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    deriv = deriv * z + value;
    value = value * z + *it;
  }
}

inline ComplexPolynomial derivative(const ComplexPolynomial& p) {
  ComplexPolynomial d;
  if (p.coeffs.size() <= 1) {
    d.coeffs = {cplx(0.0)};
    d.nominal_degree = 0;
    return d;
  }
  d.coeffs.resize(p.coeffs.size() - 1);
  for (std::size_t k = 1; k < p.coeffs.size(); ++k)
    d.coeffs[k - 1] = static_cast<double>(k) * p.coeffs[k];
  d.nominal_degree = p.nominal_degree - 1;
  return d;
}

// Expand prod_i (z - r_i) and zero-pad so the coefficient list has
// nominal_degree + 1 entries.  The highest present power gets coefficient 1.
inline ComplexPolynomial poly_from_roots(const std::vector<cplx>& finite_roots,
                                         int nominal_degree) {
  const int nf = static_cast<int>(finite_roots.size());
  if (nominal_degree < nf)
    throw std::invalid_argument("nominal degree smaller than number of finite roots");
  std::vector<cplx> c(static_cast<std::size_t>(nominal_degree) + 1, cplx(0.0));
  c[0] = 1.0;
  int deg = 0;
  for (const cplx& r : finite_roots) {
    // multiply by (z - r)
    ++deg;
    for (int k = deg; k >= 1; --k) c[k] = c[k - 1] - r * c[k];
    c[0] = -r * c[0];
  }
  ComplexPolynomial p;
  p.coeffs = std::move(c);
  p.nominal_degree = nominal_degree;
  return p;
}

inline ComplexPolynomial poly_from_roots(const RootSet& roots) {
  return poly_from_roots(roots.finite_roots, roots.total());
}

namespace detail {

inline double max_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const cplx& x : v) m = std::max(m, std::abs(x));
  return m;
}

// |p(r)| <= tol * max|c_k| * max(1,|r|)^deg is the acceptance bound used to
// certify a computed root (backward-error style, scale invariant).
inline double residual_scale(double coeff_max, double abs_root, int degree) {
  return coeff_max * std::pow(std::max(1.0, abs_root), degree);
}

// Aberth-Ehrlich simultaneous iteration.  Roots start on a perturbed circle
// at the Cauchy bound radius; sweeps update each estimate with the Newton
// correction divided by the repulsion term from all other estimates.
// Returns false if the sweep cap is hit or the iteration produced non-finite
// values (caller then falls back to companion-matrix eigenvalues).
inline bool aberth(const std::vector<cplx>& c, std::vector<cplx>& z) {
  const int n = static_cast<int>(c.size()) - 1;
  z.assign(n, cplx(0.0));
  if (n == 0) return true;
  if (n == 1) {
    z[0] = -c[0] / c[1];
    return true;
  }

  double cauchy = 0.0;
  for (int k = 0; k < n; ++k) cauchy = std::max(cauchy, std::abs(c[k] / c[n]));
  const double radius = 1.0 + cauchy;

  const double two_pi = 6.283185307179586476925286766559;
  for (int i = 0; i < n; ++i) {
    // fixed angular offset breaks conjugate-symmetric stalls; deterministic
    const double angle = two_pi * (i + 0.37) / n + 0.5 / n;
    z[i] = radius * cplx(std::cos(angle), std::sin(angle));
  }

  const int max_sweeps = 500;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double max_update = 0.0;
    for (int i = 0; i < n; ++i) {
      cplx pv, dv;
      evaluate_with_derivative(c, z[i], pv, dv);
      if (!std::isfinite(std::abs(pv)) || !std::isfinite(std::abs(dv))) return false;
      if (pv == cplx(0.0)) continue;
      if (dv == cplx(0.0)) {
        z[i] += 1e-8 * radius;  // sit exactly on a critical point: nudge off
        continue;
      }
      const cplx newton = pv / dv;
      cplx repulsion = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        cplx diff = z[i] - z[j];
        if (diff == cplx(0.0)) diff = cplx(1e-30, 0.0);
        repulsion += 1.0 / diff;
      }
      const cplx denom = 1.0 - newton * repulsion;
      const cplx w = (denom == cplx(0.0)) ? newton : newton / denom;
      z[i] -= w;
      if (!std::isfinite(std::abs(z[i]))) return false;
      max_update = std::max(max_update, std::abs(w) / (1.0 + std::abs(z[i])));
    }
    if (max_update < 1e-14) return true;
  }
  return false;
}

inline std::vector<cplx> companion_eigen_roots(const std::vector<cplx>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) a(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) a(i, n - 1) = -c[i] / c[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, /*computeEigenvectors=*/false);
  std::vector<cplx> z(n);
  for (int i = 0; i < n; ++i) z[i] = solver.eigenvalues()(i);
  return z;
}

// A few guarded Newton steps per root; improves companion eigenvalues and
// tightens Aberth output.  Near a multiple root p and p' are both at noise
// level, so an unguarded step is noise/noise and can fling the estimate far
// away; every step is therefore accepted only if it shrinks |p|.
inline void polish(const std::vector<cplx>& c, std::vector<cplx>& roots) {
  for (cplx& r : roots) {
    double best = std::abs(evaluate(c, r));
    for (int step = 0; step < 4; ++step) {
      if (best == 0.0) break;
      cplx pv, dv;
      evaluate_with_derivative(c, r, pv, dv);
      if (std::abs(dv) < 1e-280) break;
      const cplx w = pv / dv;
      if (!std::isfinite(std::abs(w))) break;
      if (std::abs(w) > 0.1 * (1.0 + std::abs(r))) break;  // outside the basin: keep estimate
      const cplx cand = r - w;
      const double resid = std::abs(evaluate(c, cand));
      if (resid >= best) break;  // step no longer improves: stop at the best point
      r = cand;
      best = resid;
      if (std::abs(w) < 1e-16 * (1.0 + std::abs(r))) break;
    }
  }
}

}  // namespace detail

// Find all roots of p on the extended plane.  Leading coefficients with
// |c| <= 1e-12 * max|c| are treated as exactly zero and produce roots at
// infinity; trailing numerical zeros produce exact roots at the origin.
// Multiple roots come back as a numerically fuzzed cluster of simple roots;
// no multiplicity detection happens at this layer.
//
// Every finite root r is certified to satisfy
//   |p(r)| <= tol * max|c_k| * max(1, |r|)^deg
// where deg is the effective (deficiency-stripped) degree; failure to certify
// after the fallback path throws ConvergenceError carrying the best residual.
inline RootSet find_roots(const ComplexPolynomial& p, double tol = 1e-10) {
  if (p.coeffs.empty() || static_cast<int>(p.coeffs.size()) != p.nominal_degree + 1)
    throw std::invalid_argument("coefficient list does not match nominal degree");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");

  const double coeff_max = detail::max_abs(p.coeffs);
  if (coeff_max == 0.0) throw std::invalid_argument("zero polynomial has no well-defined roots");
  const double strip = 1e-12 * coeff_max;

  int top = p.nominal_degree;
  while (top > 0 && std::abs(p.coeffs[top]) <= strip) --top;

  RootSet out;
  if (std::abs(p.coeffs[top]) <= strip) {
    // numerically constant (and nonzero): every nominal root sits at infinity
    out.infinity_count = p.nominal_degree;
    return out;
  }
  out.infinity_count = p.nominal_degree - top;

  int bottom = 0;
  while (bottom < top && std::abs(p.coeffs[bottom]) <= strip) ++bottom;
  for (int i = 0; i < bottom; ++i) out.finite_roots.push_back(cplx(0.0));

  const int n = top - bottom;
  if (n == 0) return out;

  std::vector<cplx> c(p.coeffs.begin() + bottom, p.coeffs.begin() + top + 1);
  const double scale = detail::max_abs(c);
  for (cplx& x : c) x /= scale;

  // The iteration's own convergence flag is advisory only: on a multiple root
  // the corrections stall at the fuzz-ring scale and the flag never trips,
  // yet the computed roots are backward stable.  Judge by residuals alone.
  std::vector<cplx> roots;
  detail::aberth(c, roots);
  detail::polish(c, roots);

  const int deg = top;  // effective degree of the stripped polynomial
  auto certify = [&](const std::vector<cplx>& rs, double& worst) {
    bool all_ok = true;
    worst = 0.0;
    for (const cplx& r : rs) {
      const double resid =
          std::abs(evaluate(p.coeffs, r)) / detail::residual_scale(coeff_max, std::abs(r), deg);
      if (!(resid <= tol)) all_ok = false;  // NaN-safe: a NaN residual fails
      if (std::isfinite(resid)) worst = std::max(worst, resid);
    }
    return all_ok;
  };

  double worst = 0.0;
  {
    std::vector<cplx> all(out.finite_roots);
    all.insert(all.end(), roots.begin(), roots.end());
    if (certify(all, worst)) {
      out.finite_roots = std::move(all);
      return out;
    }
  }

  // Fallback: companion-matrix eigenvalues of the stripped polynomial.
  std::vector<cplx> eig = detail::companion_eigen_roots(c);
  detail::polish(c, eig);
  std::vector<cplx> all(out.finite_roots);
  all.insert(all.end(), eig.begin(), eig.end());
  double worst_eig = 0.0;
  if (certify(all, worst_eig)) {
    out.finite_roots = std::move(all);
    return out;
  }
  throw ConvergenceError("root iteration failed to certify all roots", std::min(worst, worst_eig));
}

}  // namespace stellar
