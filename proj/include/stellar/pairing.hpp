#pragma once

// Multiset comparison on the extended plane / sphere: chordal metric and
// minimum-cost optimal pairing.  Used wherever two root sets or two point
// constellations have to be compared without a canonical ordering.

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

#include "stellar/bloch.hpp"

namespace stellar {

// Chordal distance on the Riemann sphere (diameter 2): coincides with the
// Euclidean distance between the corresponding Bloch points.
inline double chordal_distance(const ExtendedComplex& a, const ExtendedComplex& b) {
  if (a.is_infinity() && b.is_infinity()) return 0.0;
  if (a.is_infinity()) return 2.0 / std::sqrt(1.0 + std::norm(b.value()));
  if (b.is_infinity()) return 2.0 / std::sqrt(1.0 + std::norm(a.value()));
  const cplx za = a.value(), zb = b.value();
  return 2.0 * std::abs(za - zb) /
         (std::sqrt(1.0 + std::norm(za)) * std::sqrt(1.0 + std::norm(zb)));
}

// Minimum-cost perfect assignment on a square cost matrix (Hungarian
// algorithm, shortest augmenting path form, O(n^3)).  Returns the column
// assigned to each row.
inline std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  for (const auto& row : cost)
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("cost matrix not square");
  if (n == 0) return {};

  const double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials over rows (u) and columns (v); way[j] remembers the
  // augmenting path.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> match(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] != 0) match[p[j] - 1] = j - 1;
  return match;
}

// Largest paired chordal distance under the optimal pairing of two equally
// sized root multisets; points at infinity are matched exactly through the
// metric (distance 0 among themselves).
inline double pairing_distance(const std::vector<ExtendedComplex>& a,
                               const std::vector<ExtendedComplex>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("multisets must have equal size to be paired");
  const int n = static_cast<int>(a.size());
  if (n == 0) return 0.0;
  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cost[i][j] = chordal_distance(a[i], b[j]);
  const std::vector<int> match = min_cost_assignment(cost);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) worst = std::max(worst, cost[i][match[i]]);
  return worst;
}

inline std::vector<ExtendedComplex> to_extended(const RootSet& roots) {
  std::vector<ExtendedComplex> pts;
  pts.reserve(roots.total());
  for (const cplx& r : roots.finite_roots) pts.push_back(ExtendedComplex(r));
  for (int i = 0; i < roots.infinity_count; ++i) pts.push_back(ExtendedComplex::infinity());
  return pts;
}

inline double pairing_distance(const RootSet& a, const RootSet& b) {
  return pairing_distance(to_extended(a), to_extended(b));
}

// Same comparison for Bloch point sets (Euclidean metric on the sphere).
inline double pairing_distance(const std::vector<BlochPoint>& a,
                               const std::vector<BlochPoint>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("point sets must have equal size to be paired");
  const int n = static_cast<int>(a.size());
  if (n == 0) return 0.0;
  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cost[i][j] = distance(a[i], b[j]);
  const std::vector<int> match = min_cost_assignment(cost);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) worst = std::max(worst, cost[i][match[i]]);
  return worst;
}

}  // namespace stellar
