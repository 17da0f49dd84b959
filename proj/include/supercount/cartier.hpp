#pragma once

// Cartier-Manin matrices: block storage, recovery of full blocks from first
// rows of translated curves, the direct coefficient-extraction oracle, and
// the invariants read off A_p (trace, L_p(T) mod p, p-rank).

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "curve.hpp"
#include "intpoly.hpp"
#include "matrix.hpp"
#include "numtheory.hpp"

namespace supercount {

/// Block-sparse g x g matrix over F_p. Block (j, l) is d_j x d_l and may be
/// nonzero only for l = j p rem m.
class CartierManinMatrix {
public:
  using BlockMap = std::map<std::pair<int, int>, ModMatrix>;

  CartierManinMatrix() = default;
  CartierManinMatrix(std::uint64_t p, BlockGeometry geometry, BlockMap blocks)
      : p_(p), geometry_(std::move(geometry)), blocks_(std::move(blocks)) {}

  std::uint64_t prime() const { return p_; }
  const BlockGeometry& geometry() const { return geometry_; }
  const BlockMap& blocks() const { return blocks_; }
  int genus() const { return geometry_.genus(); }

  const ModMatrix* block(int j, int l) const {
    auto it = blocks_.find({j, l});
    return it == blocks_.end() ? nullptr : &it->second;
  }

  /// Dense rendering, basis ordered first by j and then by i.
  ModMatrix dense() const {
    const auto g = static_cast<std::size_t>(genus());
    ModMatrix A(g, g, p_);
    for (const auto& [key, B] : blocks_) {
      const auto ro = static_cast<std::size_t>(geometry_.offset(key.first));
      const auto co = static_cast<std::size_t>(geometry_.offset(key.second));
      for (std::size_t i = 0; i < B.rows(); ++i)
        for (std::size_t k = 0; k < B.cols(); ++k) A(ro + i, co + k) = B(i, k);
    }
    return A;
  }

  friend bool operator==(const CartierManinMatrix& a, const CartierManinMatrix& b) {
    return a.p_ == b.p_ && a.dense() == b.dense();
  }

private:
  std::uint64_t p_ = 2;
  BlockGeometry geometry_;
  BlockMap blocks_;
};

/// Upper triangular T(a) with t_ik = C(k-1, i-1) a^(k-i); T(a)^-1 = T(-a).
inline ModMatrix translation_matrix(residue a, std::size_t n, std::uint64_t p) {
  ModMatrix T(n, n, p);
  a %= p;
  // Pascal rows give C(k, i) for the column index k
  std::vector<residue> binom(n, 0);
  std::vector<residue> apow(n, 0);
  apow[0] = 1 % p;
  for (std::size_t e = 1; e < n; ++e) apow[e] = mod_mul(apow[e - 1], a, p);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = k; i > 0; --i) binom[i] = mod_add(binom[i], binom[i - 1], p);
    binom[0] = 1 % p;
    for (std::size_t i = 0; i <= k; ++i) T(i, k) = mod_mul(binom[i], apow[k - i], p);
  }
  return T;
}

/// Solves V(points) X = W for X, column by column, by Newton interpolation.
inline ModMatrix solve_vandermonde(std::span<const residue> points, const ModMatrix& W) {
  const std::size_t n = points.size();
  const std::uint64_t p = W.modulus();
  if (W.rows() != n) throw std::invalid_argument("solve_vandermonde: row count mismatch");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (points[i] % p == points[j] % p) throw std::invalid_argument("solve_vandermonde: coincident points");

  ModMatrix X(n, W.cols(), p);
  std::vector<residue> dd(n), poly(n);
  for (std::size_t col = 0; col < W.cols(); ++col) {
    for (std::size_t i = 0; i < n; ++i) dd[i] = W(i, col);
    for (std::size_t lvl = 1; lvl < n; ++lvl)
      for (std::size_t i = n - 1; i >= lvl; --i) {
        residue den = mod_sub(points[i] % p, points[i - lvl] % p, p);
        dd[i] = mod_mul(mod_sub(dd[i], dd[i - 1], p), mod_inv(den, p), p);
      }
    // Newton form -> monomial coefficients, Horner from the top
    std::fill(poly.begin(), poly.end(), 0);
    for (std::size_t i = n; i-- > 0;) {
      const residue a = points[i] % p;
      // poly <- poly * (x - a) + dd[i]
      for (std::size_t t = n - 1; t > 0; --t) poly[t] = mod_sub(poly[t - 1], mod_mul(a, poly[t], p), p);
      poly[0] = mod_sub(dd[i], mod_mul(a, poly[0], p), p);
    }
    for (std::size_t t = 0; t < n; ++t) X(t, col) = poly[t];
  }
  return X;
}

/// Recovers B^{jl} from the first rows of B^{jl}(a_i): row i of B1 is the
/// first row for translate a_i. B = V(a)^-1 W with W_i = (B1)_i T^l(a_i).
inline ModMatrix recover_block(const ModMatrix& B1, std::span<const residue> points) {
  const std::uint64_t p = B1.modulus();
  const std::size_t dj = B1.rows(), dl = B1.cols();
  if (points.size() != dj) throw std::invalid_argument("recover_block: need one point per row");
  ModMatrix W(dj, dl, p);
  for (std::size_t i = 0; i < dj; ++i) {
    const ModMatrix T = translation_matrix(points[i], dl, p);
    for (std::size_t k = 0; k < dl; ++k) {
      residue acc = 0;
      for (std::size_t s = 0; s <= k; ++s) acc = mod_add(acc, mod_mul(B1(i, s), T(s, k), p), p);
      W(i, k) = acc;
    }
  }
  return solve_vandermonde(points, W);
}

inline CartierManinMatrix assemble(const BlockGeometry& geom, std::uint64_t p,
                                   CartierManinMatrix::BlockMap blocks) {
  for (const auto& [key, B] : blocks) {
    const auto [j, l] = key;
    if (j < 1 || j > geom.mu) throw std::invalid_argument("assemble: block row out of range");
    auto target = block_target(j, p, geom.m, geom.mu);
    if (!target || *target != l) throw std::invalid_argument("assemble: inadmissible block position");
    if (B.rows() != static_cast<std::size_t>(geom.dim(j)) || B.cols() != static_cast<std::size_t>(geom.dim(l)))
      throw std::invalid_argument("assemble: block dimension mismatch");
    if (B.modulus() != p) throw std::invalid_argument("assemble: block modulus mismatch");
  }
  return CartierManinMatrix(p, geom, std::move(blocks));
}

class bad_prime : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Entry (i, k) of block (j, l) is the coefficient of x^(i p - k) in
/// f^(n_j) mod p, read off a direct expansion of the power.
inline CartierManinMatrix direct_cartier_manin(const SuperellipticCurve& curve, std::uint64_t p) {
  if (!curve.is_good_prime(p)) throw bad_prime("direct_cartier_manin: bad prime " + std::to_string(p));
  const auto& geom = curve.geometry;
  const ModPoly fm = ModPoly::reduce(curve.f, p);
  CartierManinMatrix::BlockMap blocks;
  const auto P = static_cast<std::int64_t>(p);
  for (int j = 1; j <= geom.mu; ++j) {
    auto l = block_target(j, p, geom.m, geom.mu);
    if (!l) continue;
    const int dj = geom.dim(j), dl = geom.dim(*l);
    const std::int64_t n = P - 1 - (static_cast<std::int64_t>(j) * P) / geom.m;
    const std::int64_t lo = std::max<std::int64_t>(0, P - dl);
    const std::int64_t hi = dj * P - 1;
    std::vector<residue> c = pow_coeffs_mod(fm, static_cast<std::uint64_t>(n), static_cast<std::size_t>(lo),
                                            static_cast<std::size_t>(hi));
    ModMatrix B(static_cast<std::size_t>(dj), static_cast<std::size_t>(dl), p);
    for (int i = 1; i <= dj; ++i)
      for (int k = 1; k <= dl; ++k) {
        const std::int64_t idx = i * P - k;
        if (idx >= lo) B(i - 1, k - 1) = c[static_cast<std::size_t>(idx - lo)];
      }
    blocks.emplace(std::pair{j, *l}, std::move(B));
  }
  return CartierManinMatrix(p, geom, std::move(blocks));
}

inline residue trace(const CartierManinMatrix& A) {
  const std::uint64_t p = A.prime();
  residue t = 0;
  for (const auto& [key, B] : A.blocks())
    if (key.first == key.second)
      for (std::size_t i = 0; i < B.rows(); ++i) t = mod_add(t, B(i, i), p);
  return t;
}

/// Characteristic polynomial det(x I - A), coefficient of x^i at index i,
/// via reduction to Hessenberg form.
inline std::vector<residue> charpoly(ModMatrix H) {
  const std::size_t n = H.rows();
  const std::uint64_t p = H.modulus();
  for (std::size_t m = 1; m + 1 < n; ++m) {
    std::size_t i = m;
    while (i < n && H(i, m - 1) == 0) ++i;
    if (i == n) continue;
    if (i > m) {
      for (std::size_t j = 0; j < n; ++j) std::swap(H(i, j), H(m, j));
      for (std::size_t j = 0; j < n; ++j) std::swap(H(j, i), H(j, m));
    }
    const residue tinv = mod_inv(H(m, m - 1), p);
    for (i = m + 1; i < n; ++i) {
      const residue u = mod_mul(H(i, m - 1), tinv, p);
      if (!u) continue;
      for (std::size_t j = 0; j < n; ++j) H(i, j) = mod_sub(H(i, j), mod_mul(u, H(m, j), p), p);
      for (std::size_t j = 0; j < n; ++j) H(j, m) = mod_add(H(j, m), mod_mul(u, H(j, i), p), p);
    }
  }
  // chi_k is the characteristic polynomial of the leading k x k block
  std::vector<std::vector<residue>> chi(n + 1);
  chi[0] = {1 % p};
  for (std::size_t k = 1; k <= n; ++k) {
    const std::size_t c = k - 1;  // 0-based column
    std::vector<residue> next(k + 1, 0);
    for (std::size_t t = 0; t < k; ++t) {
      next[t + 1] = mod_add(next[t + 1], chi[k - 1][t], p);
      next[t] = mod_sub(next[t], mod_mul(H(c, c), chi[k - 1][t], p), p);
    }
    residue prod = 1 % p;
    for (std::size_t i = c; i-- > 0;) {
      prod = mod_mul(prod, H(i + 1, i), p);
      const residue coef = mod_mul(H(i, c), prod, p);
      if (!coef) continue;
      for (std::size_t t = 0; t < chi[i].size(); ++t)
        next[t] = mod_sub(next[t], mod_mul(coef, chi[i][t], p), p);
    }
    chi[k] = std::move(next);
  }
  return chi[n];
}

/// Coefficients c_0..c_g of det(I - T A) over F_p.
inline std::vector<residue> lpoly_mod_p(const CartierManinMatrix& A) {
  std::vector<residue> chi = charpoly(A.dense());
  return std::vector<residue>(chi.rbegin(), chi.rend());
}

/// Stable rank of A: rank of A^g over F_p.
inline int p_rank(const CartierManinMatrix& A, int g) {
  ModMatrix D = A.dense();
  if (g <= 0 || D.rows() == 0) return 0;
  ModMatrix P = D;
  for (int e = 1; e < g; ++e) P = P * D;
  return static_cast<int>(P.rank());
}

}  // namespace supercount
