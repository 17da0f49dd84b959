#pragma once

// Superelliptic curves y^m = f(x) and the index bookkeeping of their
// Cartier-Manin matrices.
//
// The regular differentials x^(i-1) y^(j-1) dx / F_y with m*i + d*j < m*d form
// a basis; grouping them by j gives mu families of sizes d_1 >= ... >= d_mu.
// The Cartier operator maps family j into family l = j*p rem m, so A_p is a
// mu x mu grid of blocks with at most one nonzero block per block row.

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "intpoly.hpp"

namespace supercount {

class invalid_curve : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct BlockGeometry {
  int m = 0;
  int d = 0;
  int mu = 0;
  std::vector<int> row_dims;  // d_1..d_mu, stored 0-based
  std::vector<int> col_dims;  // m_1..m_{d-1}: family sizes along i

  /// d_j for 1-based j.
  int dim(int j) const { return row_dims.at(static_cast<std::size_t>(j - 1)); }
  int genus() const { return std::accumulate(row_dims.begin(), row_dims.end(), 0); }
  /// Offset of family j in the dense g x g ordering (first by j, then by i).
  int offset(int j) const {
    int o = 0;
    for (int t = 1; t < j; ++t) o += dim(t);
    return o;
  }
};

inline BlockGeometry block_dims(int m, int d) {
  if (m < 2 || d < 3) throw std::invalid_argument("block_dims: need m >= 2 and d >= 3");
  BlockGeometry g;
  g.m = m;
  g.d = d;
  g.mu = m - m / d - 1;
  for (int j = 1; j <= g.mu; ++j) g.row_dims.push_back(d - (d * j) / m - 1);
  for (int i = 1; i < d; ++i) g.col_dims.push_back(m - (m * i) / d - 1);
  return g;
}

inline int genus_formula(int m, int d) {
  return ((d - 2) * (m - 1) + m - std::gcd(m, d)) / 2;
}

struct SuperellipticCurve {
  int m = 0;
  IntPoly f;
  int d = 0;
  int genus = 0;
  mpz_class disc;
  mpz_class bad_product;  // |m * lc(f) * disc(f)|
  BlockGeometry geometry;

  bool is_good_prime(std::uint64_t p) const {
    return !mpz_divisible_ui_p(bad_product.get_mpz_t(), static_cast<unsigned long>(p));
  }
};

inline SuperellipticCurve validate_curve(int m, const IntPoly& f) {
  if (m < 2) throw invalid_curve("exponent m must be at least 2");
  if (f.degree() < 3) throw invalid_curve("degree must be at least 3");
  if (m > 1000 || f.degree() > 1000) throw invalid_curve("m and degree must be at most 1000");
  SuperellipticCurve c;
  c.m = m;
  c.f = f;
  c.d = f.degree();
  c.disc = discriminant(f);
  if (c.disc == 0) throw invalid_curve("f is not squarefree (discriminant is zero)");
  c.genus = genus_formula(m, c.d);
  c.bad_product = abs(mpz_class(m) * f.leading() * c.disc);
  c.geometry = block_dims(m, c.d);
  return c;
}

/// Column family l = j*p rem m reached from row family j, if it is a family.
inline std::optional<int> block_target(int j, std::uint64_t p, int m, int mu) {
  const int l = static_cast<int>((static_cast<std::uint64_t>(j) * p) % static_cast<std::uint64_t>(m));
  if (l >= 1 && l <= mu) return l;
  return std::nullopt;
}

struct Exponents {
  std::int64_t n = 0;  // power of f in block (j, l)
  std::int64_t s = 0;  // number of recurrence steps
};

inline Exponents exponents(int j, int l, std::uint64_t p, int m, int c) {
  const std::int64_t P = static_cast<std::int64_t>(p);
  const std::int64_t num = (m - j) * P - (m - l);
  if (num % m != 0) throw consistency_error("exponents: l is not j*p rem m");
  Exponents e;
  e.n = num / m;
  e.s = P - 1 - c * e.n;
  return e;
}

}  // namespace supercount
