#pragma once

// Small exact-combinatorics helpers shared by the constellation and
// Schur-Weyl layers.  Everything here is desk scale: arguments in the tens.

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace stellar {

// Exact binomial coefficient in 64-bit; n up to 34 stays well inside range
// even after the multiplications done by callers.
inline std::uint64_t binomial_u64(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (n > 62) throw std::invalid_argument("binomial argument too large for exact arithmetic");
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (int i = 1; i <= k; ++i) {
    acc = acc * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  }
  if (acc > static_cast<unsigned __int128>(UINT64_MAX))
    throw std::overflow_error("binomial overflows 64 bits");
  return static_cast<std::uint64_t>(acc);
}

inline double binomial_d(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double acc = 1.0;
  for (int i = 1; i <= k; ++i) acc = acc * static_cast<double>(n - k + i) / static_cast<double>(i);
  return acc;
}

// Factorials as long double, exact through 25! and accurate to an ulp or two
// well past the desk range used here (arguments stay below ~60).
inline long double factorial_ld(int n) {
  if (n < 0) throw std::invalid_argument("factorial of a negative number");
  static const std::vector<long double> table = [] {
    std::vector<long double> t(171);
    t[0] = 1.0L;
    for (int i = 1; i <= 170; ++i) t[i] = t[i - 1] * static_cast<long double>(i);
    return t;
  }();
  if (n >= static_cast<int>(table.size()))
    throw std::invalid_argument("factorial argument too large");
  return table[n];
}

}  // namespace stellar
