#pragma once

// Linear recurrences for the coefficients of h(x)^n.
//
// From h^(n+1) = h * h^n and (h^(n+1))' = (n+1) h' h^n one gets
//   sum_{i=0..r} ((n+1) i - k) h_i h^n_{k-i} = 0.
// When n = ((m-j)p - (m-l))/m this reduces mod p to
//   sum_i (l i - m k) h_i h^n_{k-i} = 0,
// whose coefficients no longer depend on p. The window
// v_k = [h^n_{k-r+1}, ..., h^n_k] then satisfies (m k h_0) v_k = v_{k-1} M_{k-1}
// for the sparse r x r integer matrix built by transition_matrix().

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "intpoly.hpp"
#include "matrix.hpp"
#include "numtheory.hpp"

namespace supercount {

/// Data the transition matrices M_i depend on: h (with h_0 != 0), m and l.
struct TransitionContext {
  std::vector<mpz_class> h;  // h_0..h_r
  int m = 2;
  int ell = 1;

  TransitionContext() = default;
  TransitionContext(const IntPoly& poly, int m_, int ell_) : h(poly.coeffs()), m(m_), ell(ell_) {
    if (poly.degree() < 1) throw std::invalid_argument("TransitionContext: need deg h >= 1");
    if (h[0] == 0) throw std::invalid_argument("TransitionContext: need h(0) != 0");
  }

  int r() const { return static_cast<int>(h.size()) - 1; }
};

/// The r x r matrix M_i (built from i' = i + 1): subdiagonal m i' h_0, last
/// column (l (r - t) - m i') h_(r-t) in row t, zero elsewhere.
inline IntMatrix transition_matrix(const TransitionContext& ctx, std::uint64_t i) {
  const std::size_t r = static_cast<std::size_t>(ctx.r());
  const mpz_class ip = mpz_class(static_cast<unsigned long>(i + 1)) * ctx.m;
  IntMatrix M(r, r);
  for (std::size_t t = 0; t < r; ++t) {
    mpz_class coef = mpz_class(ctx.ell) * static_cast<long>(r - t) - ip;
    M(t, r - 1) = coef * ctx.h[r - t];
  }
  for (std::size_t t = 0; t + 1 < r; ++t) M(t + 1, t) = ip * ctx.h[0];
  return M;
}

/// acc <- acc * M_i using the sparsity of M_i. If acc has r + 1 columns the
/// trailing column is scaled by i + 1 (the factorial extension).
inline void multiply_transition(IntMatrix& acc, const TransitionContext& ctx, std::uint64_t i) {
  const std::size_t r = static_cast<std::size_t>(ctx.r());
  const bool ext = acc.cols() == r + 1;
  if (acc.cols() != r && !ext) throw std::invalid_argument("multiply_transition: dimension mismatch");
  const mpz_class ip = mpz_class(static_cast<unsigned long>(i + 1)) * ctx.m;
  const mpz_class sub = ip * ctx.h[0];
  std::vector<mpz_class> coef(r);
  for (std::size_t u = 0; u < r; ++u)
    coef[u] = (mpz_class(ctx.ell) * static_cast<long>(r - u) - ip) * ctx.h[r - u];
  mpz_class last;
  for (std::size_t row = 0; row < acc.rows(); ++row) {
    last = 0;
    for (std::size_t u = 0; u < r; ++u) {
      const mpz_class& a = acc(row, u);
      if (a != 0 && coef[u] != 0) mpz_addmul(last.get_mpz_t(), a.get_mpz_t(), coef[u].get_mpz_t());
    }
    for (std::size_t t = 0; t + 1 < r; ++t) {
      mpz_class& dst = acc(row, t);
      mpz_mul(dst.get_mpz_t(), acc(row, t + 1).get_mpz_t(), sub.get_mpz_t());
    }
    mpz_swap(acc(row, r - 1).get_mpz_t(), last.get_mpz_t());
    if (ext) mpz_mul_ui(acc(row, r).get_mpz_t(), acc(row, r).get_mpz_t(), static_cast<unsigned long>(i + 1));
  }
}

/// Transition data reduced mod a single prime.
struct ModTransition {
  std::vector<residue> h;
  residue m = 0;
  residue ell = 0;
  std::uint64_t p = 2;

  ModTransition() = default;
  ModTransition(std::vector<residue> h_, int m_, int ell_, std::uint64_t p_)
      : h(std::move(h_)), m(static_cast<residue>(m_) % p_), ell(static_cast<residue>(ell_) % p_), p(p_) {}
  ModTransition(const TransitionContext& ctx, std::uint64_t p_)
      : m(static_cast<residue>(ctx.m) % p_), ell(static_cast<residue>(ctx.ell) % p_), p(p_) {
    for (const auto& v : ctx.h) h.push_back(mpz_fdiv_ui(v.get_mpz_t(), p_));
  }
  int r() const { return static_cast<int>(h.size()) - 1; }
};

struct SinglePrimeProduct {
  std::vector<residue> w;  // v_0^0 M_0 ... M_{s-1} mod p
  residue u = 1;           // s! mod p
};

/// Runs s steps of the recurrence mod p in O(r) operations per step.
inline SinglePrimeProduct product_single_prime(const ModTransition& ctx, std::uint64_t s) {
  const std::size_t r = static_cast<std::size_t>(ctx.r());
  const std::uint64_t p = ctx.p;
  SinglePrimeProduct out;
  out.w.assign(r, 0);
  out.w[r - 1] = 1 % p;
  out.u = 1 % p;
  // coefficient of h_(r-u) in the last column is (l (r - u) - m i'), linear in i'
  std::vector<residue> base(r), lh(r);
  for (std::size_t u = 0; u < r; ++u) {
    base[u] = mod_mul(ctx.ell, static_cast<residue>(r - u) % p, p);
    lh[u] = ctx.h[r - u];
  }
  std::vector<residue> next(r);
  for (std::uint64_t i = 0; i < s; ++i) {
    const residue ip = mod_mul(ctx.m, static_cast<residue>((i + 1) % p), p);
    const residue sub = mod_mul(ip, ctx.h[0], p);
    residue last = 0;
    for (std::size_t u = 0; u < r; ++u) {
      if (!out.w[u]) continue;
      residue c = mod_mul(mod_sub(base[u], ip, p), lh[u], p);
      last = (last + mod_mul(out.w[u], c, p)) % p;
    }
    for (std::size_t t = 0; t + 1 < r; ++t) next[t] = mod_mul(out.w[t + 1], sub, p);
    next[r - 1] = last;
    out.w.swap(next);
    out.u = mod_mul(out.u, static_cast<residue>((i + 1) % p), p);
  }
  return out;
}

/// alpha = m^(-s) h_0^(n-s) u^(-1) w, the window [h^n_(s-r+1), ..., h^n_s].
inline std::vector<residue> normalize_row(const std::vector<residue>& w, residue u, residue h0, int m,
                                          std::int64_t n, std::int64_t s, std::uint64_t p) {
  const residue mm = static_cast<residue>(m) % p;
  if (h0 % p == 0 || mm == 0 || u % p == 0)
    throw consistency_error("normalize_row: h0, m or s! vanishes mod p (bad prime)");
  residue scale = mod_mul(mod_pow(mm, -s, p), mod_pow(h0, n - s, p), p);
  scale = mod_mul(scale, mod_inv(u, p), p);
  std::vector<residue> alpha(w.size());
  for (std::size_t t = 0; t < w.size(); ++t) alpha[t] = mod_mul(w[t] % p, scale, p);
  return alpha;
}

/// [alpha_r, alpha_(r-1), ..., alpha_(r-d_l+1)]: the first row of block (j, l).
inline std::vector<residue> first_row(const std::vector<residue>& alpha, std::size_t d_ell) {
  if (d_ell > alpha.size()) throw std::invalid_argument("first_row: block width exceeds r");
  return std::vector<residue>(alpha.rbegin(), alpha.rbegin() + static_cast<std::ptrdiff_t>(d_ell));
}

}  // namespace supercount
