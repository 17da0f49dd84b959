#pragma once

// Small dense matrices over Z (GMP entries) and over F_p.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "numtheory.hpp"

namespace supercount {

using IntRow = std::vector<mpz_class>;

class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1;
    return I;
  }
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows) {
    IntMatrix M(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < M.rows_; ++i)
      for (std::size_t j = 0; j < M.cols_; ++j) M(i, j) = rows[i].at(j);
    return M;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  mpz_class& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const mpz_class& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  std::vector<mpz_class>& data() { return a_; }
  const std::vector<mpz_class>& data() const { return a_; }

  /// Largest entry size in bits.
  std::size_t max_bits() const {
    std::size_t b = 0;
    for (const auto& v : a_)
      if (v != 0) b = std::max(b, mpz_sizeinbase(v.get_mpz_t(), 2));
    return b;
  }

  /// Replaces every entry by its least nonnegative residue mod q.
  void reduce(const mpz_class& q) {
    for (auto& v : a_) mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), q.get_mpz_t());
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<mpz_class> a_;
};

inline IntMatrix operator*(const IntMatrix& A, const IntMatrix& B) {
  if (A.cols() != B.rows()) throw std::invalid_argument("matrix product: dimension mismatch");
  IntMatrix C(A.rows(), B.cols());
  mpz_class t;
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t k = 0; k < A.cols(); ++k) {
      const mpz_class& a = A(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < B.cols(); ++j) {
        const mpz_class& b = B(k, j);
        if (b == 0) continue;
        mpz_addmul(C(i, j).get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      }
    }
  return C;
}

inline IntRow operator*(const IntRow& v, const IntMatrix& M) {
  if (v.size() != M.rows()) throw std::invalid_argument("vector-matrix product: dimension mismatch");
  IntRow out(M.cols());
  for (std::size_t k = 0; k < M.rows(); ++k) {
    if (v[k] == 0) continue;
    for (std::size_t j = 0; j < M.cols(); ++j)
      if (M(k, j) != 0) mpz_addmul(out[j].get_mpz_t(), v[k].get_mpz_t(), M(k, j).get_mpz_t());
  }
  return out;
}

inline void reduce_row(IntRow& v, const mpz_class& q) {
  for (auto& x : v) mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), q.get_mpz_t());
}

/// Dense matrix over F_p with entries in [0, p-1].
class ModMatrix {
public:
  ModMatrix() = default;
  ModMatrix(std::size_t rows, std::size_t cols, std::uint64_t p)
      : rows_(rows), cols_(cols), p_(p), a_(rows * cols, 0) {}

  static ModMatrix identity(std::size_t n, std::uint64_t p) {
    ModMatrix I(n, n, p);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1 % p;
    return I;
  }
  static ModMatrix from_rows(const std::vector<std::vector<residue>>& rows, std::uint64_t p) {
    ModMatrix M(rows.size(), rows.empty() ? 0 : rows[0].size(), p);
    for (std::size_t i = 0; i < M.rows_; ++i)
      for (std::size_t j = 0; j < M.cols_; ++j) M(i, j) = rows[i].at(j) % p;
    return M;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint64_t modulus() const { return p_; }
  residue& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  residue operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  std::vector<std::vector<residue>> to_rows() const {
    std::vector<std::vector<residue>> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      out[i].assign(a_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                    a_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    return out;
  }

  bool is_zero() const {
    for (residue v : a_)
      if (v) return false;
    return true;
  }

  friend bool operator==(const ModMatrix&, const ModMatrix&) = default;

  friend ModMatrix operator*(const ModMatrix& A, const ModMatrix& B) {
    if (A.cols_ != B.rows_ || A.p_ != B.p_) throw std::invalid_argument("ModMatrix product: mismatch");
    ModMatrix C(A.rows_, B.cols_, A.p_);
    for (std::size_t i = 0; i < A.rows_; ++i)
      for (std::size_t k = 0; k < A.cols_; ++k) {
        residue a = A(i, k);
        if (!a) continue;
        for (std::size_t j = 0; j < B.cols_; ++j)
          C(i, j) = mod_add(C(i, j), mod_mul(a, B(k, j), A.p_), A.p_);
      }
    return C;
  }

  /// Rank by Gaussian elimination.
  std::size_t rank() const {
    ModMatrix M = *this;
    std::size_t r = 0;
    for (std::size_t col = 0; col < cols_ && r < rows_; ++col) {
      std::size_t piv = r;
      while (piv < rows_ && M(piv, col) == 0) ++piv;
      if (piv == rows_) continue;
      for (std::size_t j = 0; j < cols_; ++j) std::swap(M(r, j), M(piv, j));
      const residue inv = mod_inv(M(r, col), p_);
      for (std::size_t i = r + 1; i < rows_; ++i) {
        residue fct = mod_mul(M(i, col), inv, p_);
        if (!fct) continue;
        for (std::size_t j = col; j < cols_; ++j)
          M(i, j) = mod_sub(M(i, j), mod_mul(fct, M(r, j), p_), p_);
      }
      ++r;
    }
    return r;
  }

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::uint64_t p_ = 2;
  std::vector<residue> a_;
};

}  // namespace supercount
