#pragma once

// Schur-Weyl machinery for N spin-1/2 constituents: sequential coupling
// basis, decomposition of N-qubit states into (representation state,
// multiplicity amplitude) blocks, collective and permutation operators, and
// block-structure verification.
//
// Basis ordering: qubit 1 is the leftmost tensor factor and the most
// significant bit, index = sum_k b_k 2^{N-k}, and bit 0 is |0> (spin up).

#include <algorithm>
#include <cctype>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include <stellar/combinatorics.hpp>
#include <stellar/majorana.hpp>

namespace stellar {

// --------------------------------------------------------------------------
// Clebsch-Gordan coefficients (Condon-Shortley convention, Racah's formula).
// Arguments are twice the physical values so that everything stays integral.
// Out-of-domain arguments give 0 rather than an error.
inline double cg_coefficient_2j(int two_j1, int two_m1, int two_j2, int two_m2,
                                int two_J, int two_M) {
  if (two_m1 + two_m2 != two_M) return 0.0;
  if (two_j1 < 0 || two_j2 < 0 || two_J < 0) return 0.0;
  if (std::abs(two_m1) > two_j1 || std::abs(two_m2) > two_j2 || std::abs(two_M) > two_J)
    return 0.0;
  if ((two_j1 + two_m1) % 2 != 0 || (two_j2 + two_m2) % 2 != 0 || (two_J + two_M) % 2 != 0)
    return 0.0;
  if ((two_j1 + two_j2 + two_J) % 2 != 0) return 0.0;
  if (two_J < std::abs(two_j1 - two_j2) || two_J > two_j1 + two_j2) return 0.0;

  // Every factorial argument below is an integer once the parity checks pass.
  const auto f = [](int two_x) -> long double { return factorial_ld(two_x / 2); };
  const int t_a = two_j1 + two_j2 - two_J;
  const int t_b = two_j1 - two_j2 + two_J;
  const int t_c = -two_j1 + two_j2 + two_J;
  const long double delta =
      f(t_a) * f(t_b) * f(t_c) / factorial_ld((two_j1 + two_j2 + two_J) / 2 + 1);

  const long double pref = (two_J + 1.0L) * delta * f(two_J + two_M) * f(two_J - two_M) *
                           f(two_j1 - two_m1) * f(two_j1 + two_m1) * f(two_j2 - two_m2) *
                           f(two_j2 + two_m2);

  const int k_min = std::max({0, -(two_J - two_j2 + two_m1) / 2, -(two_J - two_j1 - two_m2) / 2});
  const int k_max = std::min({t_a / 2, (two_j1 - two_m1) / 2, (two_j2 + two_m2) / 2});
  long double sum = 0.0L;
  for (int k = k_min; k <= k_max; ++k) {
    const long double term =
        factorial_ld(k) * factorial_ld(t_a / 2 - k) * factorial_ld((two_j1 - two_m1) / 2 - k) *
        factorial_ld((two_j2 + two_m2) / 2 - k) *
        factorial_ld((two_J - two_j2 + two_m1) / 2 + k) *
        factorial_ld((two_J - two_j1 - two_m2) / 2 + k);
    sum += ((k % 2 == 0) ? 1.0L : -1.0L) / term;
  }
  return static_cast<double>(std::sqrt(pref) * sum);
}

// Half-integer-argument front end.  Non-half-integer input maps to 0.
inline double cg_coefficient(double j1, double m1, double j2, double m2, double J, double M) {
  const auto to2 = [](double x, int& out) {
    const double d = 2.0 * x;
    out = static_cast<int>(std::llround(d));
    return std::abs(d - out) < 1e-9;
  };
  int tj1, tm1, tj2, tm2, tJ, tM;
  if (!to2(j1, tj1) || !to2(m1, tm1) || !to2(j2, tj2) || !to2(m2, tm2) || !to2(J, tJ) ||
      !to2(M, tM))
    return 0.0;
  return cg_coefficient_2j(tj1, tm1, tj2, tm2, tJ, tM);
}

// --------------------------------------------------------------------------
// Permutations of {1..N}, stored as 1-based images.
class Permutation {
 public:
  explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
    const int n = static_cast<int>(images_.size());
    if (n < 1) throw std::invalid_argument("permutation must act on at least one element");
    std::vector<char> seen(n + 1, 0);
    for (int v : images_) {
      if (v < 1 || v > n || seen[v]) throw std::invalid_argument("images are not a bijection");
      seen[v] = 1;
    }
  }

  static Permutation identity(int n) {
    std::vector<int> im(n);
    std::iota(im.begin(), im.end(), 1);
    return Permutation(std::move(im));
  }

  static Permutation transposition(int n, int a, int b) {
    Permutation p = identity(n);
    if (a < 1 || a > n || b < 1 || b > n) throw std::invalid_argument("transposition out of range");
    std::swap(p.images_[a - 1], p.images_[b - 1]);
    return p;
  }

  // Parse disjoint-cycle notation, e.g. "(12)(3)" or "(1 10 2)".  Inside a
  // cycle, indices may be separated by spaces or commas; bare juxtaposition
  // is accepted only when every index is a single digit.  Elements missing
  // from the text are fixed points.
  static Permutation from_cycles(const std::string& text, int n) {
    if (n < 1) throw std::invalid_argument("permutation size must be positive");
    std::vector<int> im(n);
    std::iota(im.begin(), im.end(), 1);
    std::vector<char> used(n + 1, 0);
    std::size_t pos = 0;
    const auto skip_ws = [&] {
      while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    skip_ws();
    while (pos < text.size()) {
      if (text[pos] != '(') throw std::invalid_argument("expected '(' in cycle notation");
      const std::size_t close = text.find(')', pos);
      if (close == std::string::npos) throw std::invalid_argument("unterminated cycle");
      const std::string body = text.substr(pos + 1, close - pos - 1);
      pos = close + 1;
      std::vector<int> cycle;
      if (body.find_first_of(", \t") != std::string::npos) {
        std::istringstream iss(body);
        std::string tok;
        while (std::getline(iss, tok, ',')) {
          std::istringstream inner(tok);
          std::string word;
          while (inner >> word) {
            std::size_t used_chars = 0;
            int v = 0;
            try {
              v = std::stoi(word, &used_chars);
            } catch (const std::exception&) {
              throw std::invalid_argument("bad index in cycle: " + word);
            }
            if (used_chars != word.size()) throw std::invalid_argument("bad index in cycle: " + word);
            cycle.push_back(v);
          }
        }
      } else if (n < 10) {
        for (char ch : body) {
          if (!std::isdigit(static_cast<unsigned char>(ch)))
            throw std::invalid_argument("bad character in cycle");
          cycle.push_back(ch - '0');
        }
      } else {
        // with ten or more elements, a separator-free body is one index;
        // multi-element cycles need spaces or commas
        for (char ch : body)
          if (!std::isdigit(static_cast<unsigned char>(ch)))
            throw std::invalid_argument("bad character in cycle");
        if (!body.empty()) cycle.push_back(std::stoi(body));
      }
      if (cycle.empty()) continue;  // "()" denotes the identity
      for (int v : cycle) {
        if (v < 1 || v > n) throw std::invalid_argument("cycle index out of range");
        if (used[v]) throw std::invalid_argument("cycles must be disjoint");
        used[v] = 1;
      }
      for (std::size_t i = 0; i < cycle.size(); ++i)
        im[cycle[i] - 1] = cycle[(i + 1) % cycle.size()];
      skip_ws();
    }
    return Permutation(std::move(im));
  }

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[i - 1]; }  // 1-based
  const std::vector<int>& images() const { return images_; }

  Permutation inverse() const {
    std::vector<int> im(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) im[images_[i] - 1] = static_cast<int>(i) + 1;
    return Permutation(std::move(im));
  }

  bool operator==(const Permutation& o) const { return images_ == o.images_; }

  std::string to_cycles() const {
    const int n = size();
    const bool wide = n >= 10;
    std::vector<char> seen(n + 1, 0);
    std::string out;
    for (int start = 1; start <= n; ++start) {
      if (seen[start]) continue;
      out += '(';
      int cur = start;
      bool first = true;
      do {
        if (!first && wide) out += ' ';
        out += std::to_string(cur);
        first = false;
        seen[cur] = 1;
        cur = images_[cur - 1];
      } while (cur != start);
      out += ')';
    }
    return out;
  }

 private:
  std::vector<int> images_;
};

// Product in operator order: permutation_op(compose(s1, s2)) equals
// permutation_op(s1) * permutation_op(s2).
inline Permutation compose(const Permutation& s1, const Permutation& s2) {
  if (s1.size() != s2.size()) throw std::invalid_argument("permutation size mismatch");
  std::vector<int> im(s1.size());
  for (int i = 1; i <= s1.size(); ++i) im[i - 1] = s2(s1(i));
  return Permutation(std::move(im));
}

// --------------------------------------------------------------------------
// Dimension bookkeeping.

// Number of inequivalent spin-j blocks for N spin-1/2 constituents:
// d_j = (2j+1) C(N, N/2-j) / (j + N/2 + 1), exact in integers.
inline std::uint64_t multiplicity_dim(int n, int two_j) {
  if (n < 1) throw std::invalid_argument("need at least one constituent");
  if (two_j < 0 || two_j > n || (n - two_j) % 2 != 0)
    throw std::invalid_argument("total spin incompatible with constituent count");
  const std::uint64_t num =
      static_cast<std::uint64_t>(two_j + 1) * binomial_u64(n, (n - two_j) / 2);
  const std::uint64_t den = static_cast<std::uint64_t>((two_j + n) / 2 + 1);
  return num / den;
}

struct IrrepDimension {
  std::vector<int> partition;  // weakly decreasing, at most d parts
  std::uint64_t dim_gl;        // Weyl dimension formula
  std::uint64_t dim_s;         // hook-length formula
};

// All partitions of n into at most d parts with both irrep dimensions,
// in descending lexicographic order of the partition.
inline std::vector<IrrepDimension> irrep_dimensions(int n, int d) {
  if (n < 1 || n > 20) throw std::invalid_argument("constituent count out of supported range");
  if (d < 2) throw std::invalid_argument("local dimension must be at least 2");

  std::vector<IrrepDimension> out;
  std::vector<int> parts;
  const std::function<void(int, int)> walk = [&](int remaining, int max_part) {
    if (remaining == 0) {
      // hook lengths
      const int rows = static_cast<int>(parts.size());
      std::vector<int> conj(parts[0], 0);
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < parts[r]; ++c) ++conj[c];
      std::uint64_t hook_prod = 1;
      __int128 weyl_num = 1, weyl_den = 1;
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < parts[r]; ++c) {
          const int hook = (parts[r] - c) + (conj[c] - r) - 1;
          hook_prod *= static_cast<std::uint64_t>(hook);
          weyl_num *= (d + c - r);
          weyl_den *= hook;
          __int128 a = weyl_num, b = weyl_den;
          while (b != 0) {
            const __int128 t = a % b;
            a = b;
            b = t;
          }
          weyl_num /= a;
          weyl_den /= a;
        }
      }
      std::uint64_t fact = 1;
      for (int k = 2; k <= n; ++k) fact *= static_cast<std::uint64_t>(k);
      IrrepDimension row;
      row.partition = parts;
      row.dim_s = fact / hook_prod;
      row.dim_gl = static_cast<std::uint64_t>(weyl_num / weyl_den);
      out.push_back(std::move(row));
      return;
    }
    if (static_cast<int>(parts.size()) == d) return;
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
      parts.push_back(p);
      walk(remaining - p, p);
      parts.pop_back();
    }
  };
  walk(n, n);
  return out;
}

// --------------------------------------------------------------------------
// Multi-qubit states.
class MultiQubitState {
 public:
  MultiQubitState(int n, Eigen::VectorXcd amps) : n_(n), amps_(std::move(amps)) {
    if (n_ < 1) throw std::invalid_argument("need at least one qubit");
    if (n_ > 26) throw std::invalid_argument("qubit count out of supported range");
    if (amps_.size() != (1LL << n_))
      throw std::invalid_argument("amplitude vector length must be 2^N");
    const double norm = amps_.norm();
    if (norm < 1e-12) throw std::invalid_argument("state vector is numerically zero");
    amps_ /= norm;
  }

  int n() const { return n_; }
  const Eigen::VectorXcd& amps() const { return amps_; }

 private:
  int n_;
  Eigen::VectorXcd amps_;
};

// --------------------------------------------------------------------------
// Sequentially coupled basis.

struct CouplingPath {
  std::vector<int> two_js;  // two_js[0] = 1; |two_js[k+1] - two_js[k]| = 1
};

class SchurBasis {
 public:
  // One (j, path) block: vectors[r] is the orthonormal basis vector with
  // m = j - r, stored sparsely over the computational basis (real values).
  struct Block {
    int two_j = 0;
    CouplingPath path;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> vectors;
  };

  int n = 0;
  std::vector<Block> blocks;  // j descending; within j, paths lex-descending

  int multiplicity(int two_j) const {
    int d = 0;
    for (const auto& b : blocks) d += (b.two_j == two_j) ? 1 : 0;
    return d;
  }

  std::vector<int> two_j_values() const {
    std::vector<int> v;
    for (const auto& b : blocks)
      if (v.empty() || v.back() != b.two_j) v.push_back(b.two_j);
    return v;
  }

  const Block& block(int two_j, int alpha) const {
    int seen = 0;
    for (const auto& b : blocks) {
      if (b.two_j != two_j) continue;
      if (seen == alpha) return b;
      ++seen;
    }
    throw std::invalid_argument("no such (j, alpha) block");
  }

  // Column offset of the j sector in the canonical ordering: sectors in
  // descending j; within a sector, index = (j - m) * d_j + alpha.
  int canonical_offset(int two_j) const {
    int off = 0;
    for (int tj : two_j_values()) {
      if (tj == two_j) return off;
      off += (tj + 1) * multiplicity(tj);
    }
    throw std::invalid_argument("no such j sector");
  }

  // Orthogonal matrix whose columns are the basis vectors in canonical order.
  Eigen::MatrixXd transform() const {
    const int dim = 1 << n;
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(dim, dim);
    int alpha = 0;
    int prev_two_j = -1;
    for (const auto& b : blocks) {
      alpha = (b.two_j == prev_two_j) ? alpha + 1 : 0;
      prev_two_j = b.two_j;
      const int d_j = multiplicity(b.two_j);
      const int off = canonical_offset(b.two_j);
      for (int r = 0; r <= b.two_j; ++r) {
        const int col = off + r * d_j + alpha;
        for (const auto& [idx, val] : b.vectors[r]) u(idx, col) = val;
      }
    }
    return u;
  }
};

namespace detail {

inline std::shared_ptr<const SchurBasis> build_schur_basis(int n) {
  struct Partial {
    std::vector<int> two_js;
    // vectors[r]: sparse coefficients of the (j, m = j - r) vector
    std::vector<std::vector<std::pair<std::uint32_t, double>>> vectors;
  };
  std::vector<Partial> layer;
  layer.push_back({{1}, {{{0u, 1.0}}, {{1u, 1.0}}}});
  for (int step = 2; step <= n; ++step) {
    std::vector<Partial> next;
    next.reserve(layer.size() * 2);
    for (const Partial& p : layer) {
      const int tj = p.two_js.back();
      for (int ntj : {tj + 1, tj - 1}) {
        if (ntj < 0) continue;
        Partial q;
        q.two_js = p.two_js;
        q.two_js.push_back(ntj);
        q.vectors.resize(ntj + 1);
        for (int r = 0; r <= ntj; ++r) {
          const int two_m_new = ntj - 2 * r;
          auto& vec = q.vectors[r];
          for (int two_mu : {1, -1}) {
            const int two_m = two_m_new - two_mu;
            if (std::abs(two_m) > tj) continue;
            const double c = cg_coefficient_2j(tj, two_m, 1, two_mu, ntj, two_m_new);
            if (c == 0.0) continue;
            const std::uint32_t bit = (two_mu == 1) ? 0u : 1u;
            for (const auto& [idx, val] : p.vectors[(tj - two_m) / 2])
              vec.emplace_back((idx << 1) | bit, c * val);
          }
          std::sort(vec.begin(), vec.end(),
                    [](const auto& a, const auto& b) { return a.first < b.first; });
        }
        next.push_back(std::move(q));
      }
    }
    layer = std::move(next);
  }

  auto basis = std::make_shared<SchurBasis>();
  basis->n = n;
  std::sort(layer.begin(), layer.end(), [](const Partial& a, const Partial& b) {
    if (a.two_js.back() != b.two_js.back()) return a.two_js.back() > b.two_js.back();
    return a.two_js > b.two_js;  // lex descending
  });
  for (Partial& p : layer) {
    SchurBasis::Block blk;
    blk.two_j = p.two_js.back();
    blk.path.two_js = std::move(p.two_js);
    blk.vectors = std::move(p.vectors);
    basis->blocks.push_back(std::move(blk));
  }
  return basis;
}

}  // namespace detail

// Cached sequential-coupling basis.  Construction is single-threaded per N;
// queries on the returned object are read-only.
inline std::shared_ptr<const SchurBasis> schur_basis(int n) {
  if (n < 1) throw std::invalid_argument("need at least one qubit");
  if (n > 12)
    throw std::runtime_error("coupled basis supported up to 12 qubits (resource cap)");
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const SchurBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, detail::build_schur_basis(n)).first;
  return it->second;
}

// --------------------------------------------------------------------------
// Operators on the 2^N computational space.

struct PermutationOp {
  int n = 0;
  std::vector<std::uint32_t> image;  // basis index map: e_i -> e_image[i]

  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const {
    Eigen::VectorXcd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out(image[static_cast<std::size_t>(i)]) = v(i);
    return out;
  }

  Eigen::MatrixXd dense() const {
    const int dim = 1 << n;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) m(image[i], i) = 1.0;
    return m;
  }
};

// S(s)|a_1 ... a_N> = |a_{s(1)} ... a_{s(N)}>.
inline PermutationOp permutation_op(const Permutation& s, int n) {
  if (s.size() != n) throw std::invalid_argument("permutation size must match qubit count");
  PermutationOp op;
  op.n = n;
  const int dim = 1 << n;
  op.image.resize(dim);
  for (int i = 0; i < dim; ++i) {
    std::uint32_t t = 0;
    for (int k = 1; k <= n; ++k) {
      const std::uint32_t a_sk = (static_cast<std::uint32_t>(i) >> (n - s(k))) & 1u;
      t |= a_sk << (n - k);
    }
    op.image[i] = t;
  }
  return op;
}

struct CollectiveOp {
  int n = 0;
  Eigen::Matrix2cd m;

  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const {
    Eigen::VectorXcd out = v;
    const Eigen::Index dim = out.size();
    for (int p = 0; p < n; ++p) {
      const Eigen::Index bit = Eigen::Index(1) << p;
      for (Eigen::Index i = 0; i < dim; ++i) {
        if (i & bit) continue;
        const cplx v0 = out(i), v1 = out(i | bit);
        out(i) = m(0, 0) * v0 + m(0, 1) * v1;
        out(i | bit) = m(1, 0) * v0 + m(1, 1) * v1;
      }
    }
    return out;
  }

  Eigen::MatrixXcd dense() const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (int k = 0; k < n; ++k) {
      Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
      next.block(0, 0, out.rows(), out.cols()) = m(0, 0) * out;
      next.block(0, out.cols(), out.rows(), out.cols()) = m(0, 1) * out;
      next.block(out.rows(), 0, out.rows(), out.cols()) = m(1, 0) * out;
      next.block(out.rows(), out.cols(), out.rows(), out.cols()) = m(1, 1) * out;
      // kron(m, out): qubit added on the most significant side; all factors
      // carry the same m, so the order is immaterial but kept consistent.
      out = std::move(next);
    }
    return out;
  }
};

inline CollectiveOp collective_op(const Eigen::Matrix2cd& m, int n) {
  if (n < 1) throw std::invalid_argument("need at least one qubit");
  CollectiveOp op;
  op.n = n;
  op.m = m;
  return op;
}

// --------------------------------------------------------------------------
// Decomposition into (j, alpha) blocks.

struct SchurBlockComponent {
  int two_j = 0;
  int alpha = 0;
  CouplingPath path;
  cplx xi = 0.0;
  std::optional<SpinState> rep_state;  // absent when xi == 0
};

struct SchurDecomposition {
  int n = 0;
  std::vector<SchurBlockComponent> blocks;

  Eigen::VectorXcd multiplicity_state(int two_j) const {
    std::vector<cplx> xs;
    for (const auto& b : blocks)
      if (b.two_j == two_j) xs.push_back(b.xi);
    if (xs.empty()) throw std::invalid_argument("no such j sector");
    Eigen::VectorXcd v(static_cast<Eigen::Index>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) v(static_cast<Eigen::Index>(i)) = xs[i];
    return v;
  }
};

inline SchurDecomposition decompose(const MultiQubitState& s) {
  const auto basis = schur_basis(s.n());
  SchurDecomposition dec;
  dec.n = s.n();
  int alpha = 0;
  int prev_two_j = -1;
  for (const auto& blk : basis->blocks) {
    alpha = (blk.two_j == prev_two_j) ? alpha + 1 : 0;
    prev_two_j = blk.two_j;

    Eigen::VectorXcd v(blk.two_j + 1);
    for (int r = 0; r <= blk.two_j; ++r) {
      cplx acc = 0.0;
      for (const auto& [idx, val] : blk.vectors[r]) acc += val * s.amps()(idx);
      v(r) = acc;
    }

    SchurBlockComponent comp;
    comp.two_j = blk.two_j;
    comp.alpha = alpha;
    comp.path = blk.path;
    const double norm = v.norm();
    if (norm < 1e-12) {
      comp.xi = 0.0;
    } else {
      // Phase convention: the rep state's highest-|m| nonzero amplitude is
      // real positive (|m| descending, positive m first on ties).
      int anchor = 0;
      bool found = false;
      for (int half = 0; half <= blk.two_j && !found; ++half) {
        for (int r : {half, blk.two_j - half}) {
          if (std::abs(v(r)) > 1e-8 * norm) {
            anchor = r;
            found = true;
            break;
          }
        }
      }
      if (!found) v.cwiseAbs().maxCoeff(&anchor);
      const cplx phase = v(anchor) / std::abs(v(anchor));
      comp.xi = norm * phase;
      comp.rep_state.emplace(blk.two_j, Eigen::VectorXcd(v / (norm * phase)));
    }
    dec.blocks.push_back(std::move(comp));
  }
  return dec;
}

inline MultiQubitState reconstruct(const SchurDecomposition& d) {
  const auto basis = schur_basis(d.n);
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(Eigen::Index(1) << d.n);
  std::size_t bi = 0;
  for (const auto& comp : d.blocks) {
    const auto& blk = basis->blocks.at(bi++);
    if (blk.two_j != comp.two_j) throw std::invalid_argument("decomposition does not match basis");
    if (comp.xi == cplx(0.0) || !comp.rep_state) continue;
    for (int r = 0; r <= comp.two_j; ++r) {
      const cplx w = comp.xi * comp.rep_state->amps()(r);
      for (const auto& [idx, val] : blk.vectors[r]) amps(idx) += w * val;
    }
  }
  return MultiQubitState(d.n, std::move(amps));
}

// --------------------------------------------------------------------------
// Permutation action on the multiplicity factor.

// d_j x d_j matrix with entries <j,m,alpha'| S(s) |j,m,alpha> evaluated at a
// chosen weight two_m; the result is m-independent (verified property).
inline Eigen::MatrixXd perm_irrep_matrix_at(const Permutation& s, int two_j, int n, int two_m) {
  const auto basis = schur_basis(n);
  const PermutationOp op = permutation_op(s, n);
  const int d_j = basis->multiplicity(two_j);
  const int r = (two_j - two_m) / 2;
  if (r < 0 || r > two_j || (two_j - two_m) % 2 != 0)
    throw std::invalid_argument("m out of range");
  Eigen::MatrixXd m(d_j, d_j);
  std::vector<const SchurBasis::Block*> sector;
  for (const auto& b : basis->blocks)
    if (b.two_j == two_j) sector.push_back(&b);
  std::vector<double> dense(std::size_t(1) << n, 0.0);
  for (int a = 0; a < d_j; ++a) {
    for (const auto& [idx, val] : sector[a]->vectors[r]) dense[op.image[idx]] = val;
    for (int ap = 0; ap < d_j; ++ap) {
      double acc = 0.0;
      for (const auto& [idx, val] : sector[ap]->vectors[r]) acc += val * dense[idx];
      m(ap, a) = acc;
    }
    for (const auto& [idx, val] : sector[a]->vectors[r]) dense[op.image[idx]] = 0.0;
  }
  return m;
}

// Default evaluation at m = j (smallest weight-sector support).
inline Eigen::MatrixXd perm_irrep_matrix(const Permutation& s, int two_j, int n) {
  return perm_irrep_matrix_at(s, two_j, n, two_j);
}

// --------------------------------------------------------------------------
// Block-structure verification.

struct BlockStructureReport {
  int n = 0;
  double tol = 0.0;
  double max_off_block = 0.0;
  struct SectorDeviation {
    int two_j = 0;
    double deviation = 0.0;  // max |actual - predicted| within the sector
  };
  std::vector<SectorDeviation> sectors;
  bool pass = false;
};

// Conjugate collective_op(m) * permutation_op(s) into the coupled basis and
// compare against the predicted block-diagonal form.  For general invertible
// m the j sector carries det(m)^{(N-2j)/2} * sym_power(m, 2j) on the
// representation factor (the determinant power is what remains of the N-2j
// contracted constituent pairs; it is 1 for unimodular m).
inline BlockStructureReport verify_block_structure(const Eigen::Matrix2cd& m,
                                                   const Permutation& s, int n,
                                                   double tol = 1e-10) {
  if (n < 1 || n > 8)
    throw std::runtime_error("dense block-structure verification supported up to 8 qubits");
  const auto basis = schur_basis(n);
  const Eigen::MatrixXd u = basis->transform();
  const Eigen::MatrixXcd big = collective_op(m, n).dense() * permutation_op(s, n).dense();
  const Eigen::MatrixXcd in_basis = u.transpose() * big * u;

  BlockStructureReport report;
  report.n = n;
  report.tol = tol;

  const int dim = 1 << n;
  for (int two_j : basis->two_j_values()) {
    const int d_j = basis->multiplicity(two_j);
    const int off = basis->canonical_offset(two_j);
    const int size = (two_j + 1) * d_j;
    const Eigen::MatrixXcd rep = sym_power(m, two_j);
    const Eigen::MatrixXd mult = perm_irrep_matrix(s, two_j, n);
    cplx det_power = 1.0;
    for (int k = 0; k < (n - two_j) / 2; ++k) det_power *= m.determinant();
    Eigen::MatrixXcd block(size, size);
    for (int r1 = 0; r1 <= two_j; ++r1)
      for (int a1 = 0; a1 < d_j; ++a1)
        for (int r2 = 0; r2 <= two_j; ++r2)
          for (int a2 = 0; a2 < d_j; ++a2)
            block(r1 * d_j + a1, r2 * d_j + a2) = det_power * rep(r1, r2) * mult(a1, a2);

    BlockStructureReport::SectorDeviation dev;
    dev.two_j = two_j;
    dev.deviation =
        (in_basis.block(off, off, size, size) - block).cwiseAbs().maxCoeff();
    report.sectors.push_back(dev);
  }

  double off_block = 0.0;
  for (int two_j : basis->two_j_values()) {
    const int d_j = basis->multiplicity(two_j);
    const int off = basis->canonical_offset(two_j);
    const int size = (two_j + 1) * d_j;
    // rows of this sector, columns outside it
    for (int r = off; r < off + size; ++r)
      for (int c = 0; c < dim; ++c)
        if (c < off || c >= off + size) off_block = std::max(off_block, std::abs(in_basis(r, c)));
  }
  report.max_off_block = off_block;

  report.pass = report.max_off_block <= tol;
  for (const auto& sec : report.sectors) report.pass = report.pass && sec.deviation <= tol;
  return report;
}

}  // namespace stellar
