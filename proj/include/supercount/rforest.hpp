#pragma once

// Accumulating remainder trees and forests.
//
// Given a row vector V, integer matrices M_0, M_1, ... and pairwise coprime
// moduli, these compute the reduced prefix products V M_0 ... M_{k-1} mod m_k
// for every position k that carries a nontrivial modulus.

#include <gmpxx.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "matrix.hpp"
#include "numtheory.hpp"
#include "recurrence.hpp"

namespace supercount {

// ---------------------------------------------------------------------------
// Plain remainder tree

struct TreeOutput {
  std::size_t index = 0;       // t: the product M_0 ... M_t was reduced
  std::vector<residue> value;  // V M_0 ... M_t mod mods[t]
};

namespace detail {

inline std::vector<IntRow> remainder_tree_rec(const IntRow& V, const std::vector<IntMatrix>& M,
                                              const std::vector<mpz_class>& mods) {
  const std::size_t n = M.size();
  std::vector<IntRow> A(n);
  if (n == 0) return A;
  if (n == 1) {
    A[0] = V * M[0];
    reduce_row(A[0], mods[0]);
    return A;
  }
  // B_k = M_{2k-1} M_{2k} (with M_{-1} = 1), b_k = m_{2k} m_{2k+1} (with m_n = 1)
  const std::size_t half = (n + 1) / 2;
  std::vector<IntMatrix> B(half);
  std::vector<mpz_class> b(half);
  for (std::size_t k = 0; k < half; ++k) {
    B[k] = k == 0 ? M[0] : M[2 * k - 1] * M[2 * k];
    b[k] = mods[2 * k] * (2 * k + 1 < n ? mods[2 * k + 1] : mpz_class(1));
  }
  std::vector<IntRow> C = remainder_tree_rec(V, B, b);
  for (std::size_t k = 0; k < half; ++k) {
    A[2 * k] = C[k];
    reduce_row(A[2 * k], mods[2 * k]);
    if (2 * k + 1 < n) {
      A[2 * k + 1] = C[k] * M[2 * k + 1];
      reduce_row(A[2 * k + 1], mods[2 * k + 1]);
    }
  }
  return A;
}

inline std::vector<residue> to_residues(const IntRow& v) {
  std::vector<residue> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = mpz_get_ui(v[i].get_mpz_t());
  return out;
}

}  // namespace detail

/// Element t of the result is V M_0 ... M_t mod mods[t]; positions whose
/// modulus is 1 are omitted.
inline std::vector<TreeOutput> remainder_tree(const IntRow& V, std::span<const IntMatrix> M,
                                              std::span<const std::uint64_t> mods) {
  if (M.size() != mods.size()) throw std::invalid_argument("remainder_tree: length mismatch");
  for (const auto& X : M)
    if (X.rows() != V.size() || X.cols() != V.size())
      throw std::invalid_argument("remainder_tree: dimension mismatch");
  std::vector<mpz_class> zm;
  for (auto q : mods) {
    if (q == 0) throw std::invalid_argument("remainder_tree: zero modulus");
    zm.emplace_back(static_cast<unsigned long>(q));
  }
  std::vector<IntRow> A = detail::remainder_tree_rec(V, std::vector<IntMatrix>(M.begin(), M.end()), zm);
  std::vector<TreeOutput> out;
  for (std::size_t t = 0; t < A.size(); ++t)
    if (mods[t] > 1) out.push_back({t, detail::to_residues(A[t])});
  return out;
}

// ---------------------------------------------------------------------------
// Moduli schedules

struct ScheduleTarget {
  std::uint64_t k = 0;        // number of matrix factors
  std::uint64_t modulus = 1;  // m_k
};

struct ModuliSchedule {
  std::uint64_t length = 0;             // N'
  std::vector<ScheduleTarget> targets;  // nontrivial m_k, increasing in k

  std::uint64_t modulus_at(std::uint64_t k) const {
    auto it = std::lower_bound(targets.begin(), targets.end(), k,
                               [](const ScheduleTarget& t, std::uint64_t v) { return t.k < v; });
    return it != targets.end() && it->k == k ? it->modulus : 1;
  }
  /// k(p): the position whose modulus is p.
  std::optional<std::uint64_t> index_of(std::uint64_t p) const {
    for (const auto& t : targets)
      if (t.modulus == p) return t.k;
    return std::nullopt;
  }
};

/// Moduli for block (j, l) of translates with x-factor exponent c: position
/// k(p) = p - 1 when c = 0 and k(p) = (j p - l)/m when c = 1, so that the
/// product up to k(p) has exactly s = p - 1 - c n factors.
inline ModuliSchedule moduli_schedule(int j, int ell, int c, int m, std::uint64_t N,
                                      std::span<const std::uint32_t> primes) {
  ModuliSchedule s;
  if (c == 0) {
    s.length = N;
  } else {
    const std::int64_t num = static_cast<std::int64_t>(j) * static_cast<std::int64_t>(N) - ell;
    s.length = num < 0 ? 0 : static_cast<std::uint64_t>(num / m);
  }
  for (std::uint32_t p : primes) {
    if ((static_cast<std::uint64_t>(j) * p) % static_cast<std::uint64_t>(m) != static_cast<std::uint64_t>(ell))
      throw std::invalid_argument("moduli_schedule: prime " + std::to_string(p) + " violates j p = l mod m");
    const std::uint64_t k = c == 0 ? p - 1 : (static_cast<std::uint64_t>(j) * p - ell) / m;
    s.targets.push_back({k, p});
  }
  std::sort(s.targets.begin(), s.targets.end(),
            [](const ScheduleTarget& a, const ScheduleTarget& b) { return a.k < b.k; });
  return s;
}

/// Schedule equivalent to remainder_tree's mods array: mods[t] sits at k = t + 1.
inline ModuliSchedule schedule_from_moduli(std::span<const std::uint64_t> mods) {
  ModuliSchedule s;
  s.length = mods.size();
  for (std::size_t t = 0; t < mods.size(); ++t)
    if (mods[t] > 1) s.targets.push_back({t + 1, mods[t]});
  return s;
}

// ---------------------------------------------------------------------------
// Leaf sources

/// Leaves given as explicit matrices (or any callable i -> IntMatrix).
class DenseLeaves {
public:
  DenseLeaves(std::size_t dim, std::function<IntMatrix(std::uint64_t)> gen)
      : dim_(dim), gen_(std::move(gen)) {}
  explicit DenseLeaves(std::span<const IntMatrix> ms)
      : dim_(ms.empty() ? 0 : ms[0].rows()), gen_([ms](std::uint64_t i) { return ms[i]; }) {}

  std::size_t dim() const { return dim_; }
  IntMatrix matrix(std::uint64_t i) const { return gen_(i); }
  void multiply_right(IntMatrix& acc, std::uint64_t i) const { acc = acc * gen_(i); }

private:
  std::size_t dim_;
  std::function<IntMatrix(std::uint64_t)> gen_;
};

/// (r+1) x (r+1) matrix with M_i in the leading block and i + 1 in the
/// trailing diagonal entry, so that products carry k! alongside the window.
inline IntMatrix factorial_extension(const TransitionContext& ctx, std::uint64_t i) {
  const IntMatrix M = transition_matrix(ctx, i);
  const std::size_t r = M.rows();
  IntMatrix E(r + 1, r + 1);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) E(a, b) = M(a, b);
  E(r, r) = static_cast<unsigned long>(i + 1);
  return E;
}

/// The transition matrices M_i, optionally with the factorial extension.
class TransitionLeaves {
public:
  TransitionLeaves(TransitionContext ctx, bool with_factorial)
      : ctx_(std::move(ctx)), factorial_(with_factorial) {}

  std::size_t dim() const { return static_cast<std::size_t>(ctx_.r()) + (factorial_ ? 1 : 0); }
  IntMatrix matrix(std::uint64_t i) const {
    return factorial_ ? factorial_extension(ctx_, i) : transition_matrix(ctx_, i);
  }
  void multiply_right(IntMatrix& acc, std::uint64_t i) const { multiply_transition(acc, ctx_, i); }

private:
  TransitionContext ctx_;
  bool factorial_;
};

// ---------------------------------------------------------------------------
// Remainder forest

struct ForestPlan {
  int kappa = -1;          // number of subtrees is 2^kappa; negative selects the default
  std::size_t chunk = 16;  // leaves multiplied sequentially before switching to a product tree
};

inline int default_kappa(std::uint64_t length) {
  if (length <= 2) return 0;
  const int cap = static_cast<int>(std::ceil(std::log2(static_cast<double>(length))));
  const int k = static_cast<int>(std::ceil(2.0 * std::log2(std::log2(static_cast<double>(length)))));
  return std::clamp(k, 0, cap);
}

struct ForestOutput {
  std::uint64_t k = 0;
  std::uint64_t modulus = 1;
  std::vector<residue> value;  // V M_0 ... M_{k-1} mod modulus
};

namespace detail {

inline void maybe_reduce(IntMatrix& M, const mpz_class& q, std::size_t qbits) {
  if (q > 1 && M.max_bits() > qbits + 64) M.reduce(q);
}

template <class Leaves>
IntMatrix range_product(const Leaves& leaves, std::uint64_t a, std::uint64_t b, const mpz_class& q,
                        std::size_t qbits, std::size_t chunk) {
  if (b - a <= chunk) {
    IntMatrix acc = IntMatrix::identity(leaves.dim());
    for (std::uint64_t i = a; i < b; ++i) leaves.multiply_right(acc, i);
    maybe_reduce(acc, q, qbits);
    return acc;
  }
  const std::uint64_t mid = a + (b - a) / 2;
  IntMatrix P = range_product(leaves, a, mid, q, qbits, chunk) * range_product(leaves, mid, b, q, qbits, chunk);
  maybe_reduce(P, q, qbits);
  return P;
}

inline mpz_class product_of(std::vector<mpz_class> v) {
  if (v.empty()) return 1;
  while (v.size() > 1) {
    std::vector<mpz_class> next((v.size() + 1) / 2);
    for (std::size_t i = 0; i < next.size(); ++i)
      next[i] = 2 * i + 1 < v.size() ? v[2 * i] * v[2 * i + 1] : v[2 * i];
    v.swap(next);
  }
  return v[0];
}

/// Product and moduli trees for the segments of one subtree.
struct SubtreeTrees {
  std::vector<std::vector<IntMatrix>> prod;
  std::vector<std::vector<mpz_class>> mods;
};

inline void descend(const SubtreeTrees& T, std::size_t level, std::size_t idx, IntRow X,
                    std::vector<IntRow>& out) {
  if (level == 0) {
    IntRow Y = X * T.prod[0][idx];
    reduce_row(Y, T.mods[0][idx]);
    out[idx] = std::move(Y);
    return;
  }
  const std::size_t left = 2 * idx, right = 2 * idx + 1;
  const auto& below = T.mods[level - 1];
  if (right < below.size()) {
    const mpz_class& qr = below[right];
    IntMatrix L = T.prod[level - 1][left];
    maybe_reduce(L, qr, mpz_sizeinbase(qr.get_mpz_t(), 2));
    IntRow XR = X;
    reduce_row(XR, qr);
    XR = XR * L;
    reduce_row(XR, qr);
    reduce_row(X, below[left]);
    descend(T, level - 1, left, std::move(X), out);
    descend(T, level - 1, right, std::move(XR), out);
  } else {
    reduce_row(X, below[left]);
    descend(T, level - 1, left, std::move(X), out);
  }
}

}  // namespace detail

/// Same results as remainder_tree, computed over 2^kappa consecutive subtrees.
/// Runs of matrices between consecutive targets are multiplied lazily, and
/// every partial product is reduced modulo the product of the moduli that
/// are still pending, so no subtree grows past that size.
template <class Leaves>
std::vector<ForestOutput> remainder_forest(const IntRow& V, const Leaves& leaves, const ModuliSchedule& sched,
                                           const ForestPlan& plan = {}) {
  if (V.size() != leaves.dim()) throw std::invalid_argument("remainder_forest: dimension mismatch");
  std::vector<ForestOutput> results;
  const auto& targets = sched.targets;
  if (targets.empty()) return results;
  for (std::size_t t = 1; t < targets.size(); ++t)
    if (targets[t].k <= targets[t - 1].k) throw std::invalid_argument("remainder_forest: targets not increasing");

  const std::uint64_t kmax = targets.back().k;
  int kappa = plan.kappa < 0 ? default_kappa(std::max(sched.length, kmax)) : plan.kappa;
  std::uint64_t groups = kmax == 0 ? 1 : std::min<std::uint64_t>(std::uint64_t{1} << std::min(kappa, 40), kmax);
  const std::size_t chunk = std::max<std::size_t>(plan.chunk, 1);

  auto boundary = [&](std::uint64_t g) -> std::uint64_t {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(g) * kmax) / groups);
  };
  // targets [first[g], first[g+1]) fall in group g: k - 1 in [boundary(g), boundary(g+1))
  std::vector<std::size_t> first(groups + 1, targets.size());
  {
    std::size_t t = 0;
    for (std::uint64_t g = 0; g < groups; ++g) {
      first[g] = t;
      const std::uint64_t hi = boundary(g + 1);
      while (t < targets.size() && (targets[t].k == 0 || targets[t].k - 1 < hi)) ++t;
    }
    first[groups] = t;
  }

  std::vector<mpz_class> group_mod(groups);
  for (std::uint64_t g = 0; g < groups; ++g) {
    std::vector<mpz_class> qs;
    for (std::size_t t = first[g]; t < first[g + 1]; ++t)
      qs.emplace_back(static_cast<unsigned long>(targets[t].modulus));
    group_mod[g] = detail::product_of(std::move(qs));
  }
  mpz_class pending = detail::product_of(group_mod);

  IntRow X = V;
  reduce_row(X, pending);
  results.reserve(targets.size());

  for (std::uint64_t g = 0; g < groups; ++g) {
    const std::uint64_t lo = boundary(g), hi = boundary(g + 1);
    const std::size_t qbits = mpz_sizeinbase(pending.get_mpz_t(), 2);
    mpz_class rest;
    mpz_divexact(rest.get_mpz_t(), pending.get_mpz_t(), group_mod[g].get_mpz_t());
    const bool last = g + 1 == groups;

    const std::size_t nt = first[g + 1] - first[g];
    if (nt == 0) {
      IntMatrix P = detail::range_product(leaves, lo, hi, pending, qbits, chunk);
      X = X * P;
      reduce_row(X, rest);
      pending = std::move(rest);
      continue;
    }

    detail::SubtreeTrees T;
    T.prod.emplace_back();
    T.mods.emplace_back();
    std::uint64_t start = lo;
    for (std::size_t t = first[g]; t < first[g + 1]; ++t) {
      const std::uint64_t k = targets[t].k;
      T.prod[0].push_back(detail::range_product(leaves, std::min(start, k), k, pending, qbits, chunk));
      T.mods[0].emplace_back(static_cast<unsigned long>(targets[t].modulus));
      start = k;
    }
    while (T.prod.back().size() > 1) {
      const auto& P = T.prod.back();
      const auto& Q = T.mods.back();
      std::vector<IntMatrix> np((P.size() + 1) / 2);
      std::vector<mpz_class> nq(np.size());
      for (std::size_t i = 0; i < np.size(); ++i) {
        if (2 * i + 1 < P.size()) {
          np[i] = P[2 * i] * P[2 * i + 1];
          detail::maybe_reduce(np[i], pending, qbits);
          nq[i] = Q[2 * i] * Q[2 * i + 1];
        } else {
          np[i] = P[2 * i];
          nq[i] = Q[2 * i];
        }
      }
      T.prod.push_back(std::move(np));
      T.mods.push_back(std::move(nq));
    }

    std::vector<IntRow> out(nt);
    IntRow Xg = X;
    reduce_row(Xg, T.mods.back()[0]);
    detail::descend(T, T.prod.size() - 1, 0, std::move(Xg), out);
    for (std::size_t i = 0; i < nt; ++i) {
      const auto& tg = targets[first[g] + i];
      results.push_back({tg.k, tg.modulus, detail::to_residues(out[i])});
    }

    if (!last) {
      X = X * T.prod.back()[0];
      reduce_row(X, rest);
      if (start < hi) {
        IntMatrix tail = detail::range_product(leaves, start, hi, pending, qbits, chunk);
        X = X * tail;
        reduce_row(X, rest);
      }
    }
    pending = std::move(rest);
  }
  return results;
}

}  // namespace supercount
