#pragma once

// Top-level computations: the single-prime algorithm, the all-primes
// algorithm built on remainder forests, and point counting.

#include <gmpxx.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "cartier.hpp"
#include "curve.hpp"
#include "intpoly.hpp"
#include "numtheory.hpp"
#include "recurrence.hpp"
#include "rforest.hpp"

namespace supercount {

enum class Mode { matrix, trace, lpoly, prank };

struct RunConfig {
  Mode mode = Mode::trace;
  std::uint64_t N = 1024;
  int kappa = -1;           // negative: automatic
  unsigned threads = 0;     // 0: all hardware threads
  std::size_t chunk = 16;   // forest leaf batch size
};

struct PrimeResult {
  std::uint64_t p = 0;
  std::optional<CartierManinMatrix> matrix;  // matrix mode
  residue trace = 0;                         // trace of A_p mod p (all modes)
  std::optional<std::int64_t> a_p;           // trace mode
  std::vector<residue> lpoly;                // lpoly mode: det(I - T A_p)
  std::optional<int> p_rank;                 // prank mode
};

/// Runs fn(i) for i in [0, n) on up to `threads` workers.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

/// count distinct integers: the integer roots of f by increasing magnitude
/// (nonnegative first on ties), then non-roots 0, 1, -1, 2, -2, ...
inline std::vector<std::int64_t> choose_translations(const IntPoly& f, int count) {
  std::vector<std::int64_t> roots;
  for (const auto& r : integer_roots(f))
    if (r.fits_slong_p()) roots.push_back(r.get_si());
  std::sort(roots.begin(), roots.end(), [](std::int64_t a, std::int64_t b) {
    const auto aa = a < 0 ? -a : a, bb = b < 0 ? -b : b;
    return aa != bb ? aa < bb : a > b;
  });
  std::vector<std::int64_t> out;
  for (auto r : roots) {
    if (static_cast<int>(out.size()) == count) break;
    out.push_back(r);
  }
  for (std::int64_t mag = 0; static_cast<int>(out.size()) < count; ++mag) {
    for (std::int64_t cand : {mag, -mag}) {
      if (static_cast<int>(out.size()) == count) break;
      if (mag == 0 && cand != 0) continue;
      if (std::find(out.begin(), out.end(), cand) == out.end()) out.push_back(cand);
    }
  }
  return out;
}

/// #X(F_p) for the smooth projective model: affine solutions of y^m = f(x)
/// counted through a table of m-th powers, plus the #{z : z^gcd(m,d) = lc(f)}
/// rational points at infinity.
inline std::uint64_t naive_count(const SuperellipticCurve& curve, std::uint64_t p) {
  if (!curve.is_good_prime(p)) throw bad_prime("naive_count: bad prime " + std::to_string(p));
  const ModPoly fm = ModPoly::reduce(curve.f, p);
  std::vector<std::uint32_t> roots_of(p, 0);  // #{y : y^m = v}
  roots_of[0] = 1;
  for (residue y = 1; y < p; ++y) ++roots_of[mod_pow(y, curve.m, p)];
  std::uint64_t count = 0;
  for (residue x = 0; x < p; ++x) count += roots_of[fm.eval(x)];
  const int delta = std::gcd(curve.m, curve.d);
  const residue lc = mpz_fdiv_ui(curve.f.leading().get_mpz_t(), p);
  for (residue z = 1; z < p; ++z)
    if (mod_pow(z, delta, p) == lc) ++count;
  return count;
}

/// The integer a = t mod p with |a| <= 2 g sqrt(p); unique once p > 16 g^2.
inline std::int64_t lift_trace(residue t, std::uint64_t p, int g) {
  const auto G = static_cast<std::uint64_t>(g);
  if (p <= 16 * G * G) throw std::invalid_argument("lift_trace: need p > 16 g^2");
  t %= p;
  const std::int64_t a = t > p / 2 ? static_cast<std::int64_t>(t) - static_cast<std::int64_t>(p)
                                   : static_cast<std::int64_t>(t);
  const auto aa = static_cast<unsigned __int128>(a < 0 ? -a : a);
  if (aa * aa > static_cast<unsigned __int128>(4) * G * G * p)
    throw consistency_error("lift_trace: residue violates the Weil bound");
  return a;
}

namespace detail {

inline std::vector<residue> mod_points(std::span<const std::int64_t> pts, std::size_t n, std::uint64_t p) {
  std::vector<residue> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = mod_reduce(pts[i], p);
  return out;
}

}  // namespace detail

/// Cartier-Manin matrix of the reduction at one prime p >= d, from first
/// rows of translated curves computed by the O(r)-per-step recurrence.
/// With diagonal_only only the blocks (j, j) are produced.
inline CartierManinMatrix compute_single(const SuperellipticCurve& curve, std::uint64_t p,
                                         bool diagonal_only = false) {
  if (!curve.is_good_prime(p)) throw bad_prime("compute_single: bad prime " + std::to_string(p));
  if (p < static_cast<std::uint64_t>(curve.d)) throw std::invalid_argument("compute_single: need p >= d");
  const auto& geom = curve.geometry;
  const ModPoly fm = ModPoly::reduce(curve.f, p);

  std::vector<residue> pts;
  for (residue x = 0; x < p && static_cast<int>(pts.size()) < geom.dim(1); ++x)
    if (fm.eval(x) == 0) pts.push_back(x);
  for (residue x = 0; x < p && static_cast<int>(pts.size()) < geom.dim(1); ++x)
    if (fm.eval(x) != 0) pts.push_back(x);

  struct Translate {
    int c;
    std::vector<residue> h;
  };
  std::vector<Translate> tr;
  for (residue a : pts) {
    ModPoly g = translate_mod(fm, a);
    Translate t{g.coeffs[0] == 0 ? 1 : 0, {}};
    t.h.assign(g.coeffs.begin() + t.c, g.coeffs.end());
    tr.push_back(std::move(t));
  }

  CartierManinMatrix::BlockMap blocks;
  for (int j = 1; j <= geom.mu; ++j) {
    auto l = block_target(j, p, geom.m, geom.mu);
    if (!l || (diagonal_only && *l != j)) continue;
    const int dj = geom.dim(j), dl = geom.dim(*l);
    ModMatrix B1(static_cast<std::size_t>(dj), static_cast<std::size_t>(dl), p);
    for (int i = 0; i < dj; ++i) {
      const auto& t = tr[static_cast<std::size_t>(i)];
      const Exponents e = exponents(j, *l, p, geom.m, t.c);
      ModTransition ctx(t.h, geom.m, *l, p);
      SinglePrimeProduct prod = product_single_prime(ctx, static_cast<std::uint64_t>(e.s));
      auto alpha = normalize_row(prod.w, prod.u, t.h[0], geom.m, e.n, e.s, p);
      auto row = first_row(alpha, static_cast<std::size_t>(dl));
      for (int k = 0; k < dl; ++k) B1(static_cast<std::size_t>(i), static_cast<std::size_t>(k)) = row[static_cast<std::size_t>(k)];
    }
    blocks.emplace(std::pair{j, *l},
                   recover_block(B1, std::span<const residue>(pts.data(), static_cast<std::size_t>(dj))));
  }
  return assemble(geom, p, std::move(blocks));
}

/// Cartier-Manin data for every good prime p <= N, in increasing order.
inline std::vector<PrimeResult> compute_all(const SuperellipticCurve& curve, const RunConfig& cfg) {
  if (cfg.N < 2) throw std::invalid_argument("compute_all: N must be at least 2");
  const auto& geom = curve.geometry;
  const int mu = geom.mu, m = curve.m, d = curve.d, g = curve.genus;
  const bool trace_only = cfg.mode == Mode::trace;
  const std::uint64_t naive_limit = 16ull * static_cast<std::uint64_t>(g) * static_cast<std::uint64_t>(g);

  std::vector<std::uint32_t> good;
  for_each_prime(cfg.N, [&](std::uint64_t p) {
    if (curve.is_good_prime(p)) good.push_back(static_cast<std::uint32_t>(p));
  });

  // translation points and the translated polynomials f(x + a) = x^c h(x)
  const std::vector<std::int64_t> pts = choose_translations(curve.f, geom.dim(1));
  std::vector<XFactorSplit> tr;
  for (auto a : pts) tr.push_back(split_x_factor(translate(curve.f, mpz_class(static_cast<long>(a)))));

  // exceptional primes: translation points collide, some h(0) vanishes, or p < d
  auto regular = [&](std::uint64_t p) {
    if (p < static_cast<std::uint64_t>(d)) return false;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t k = i + 1; k < pts.size(); ++k)
        if (mod_reduce(pts[i] - pts[k], p) == 0) return false;
    for (const auto& t : tr)
      if (mpz_divisible_ui_p(t.h[0].get_mpz_t(), static_cast<unsigned long>(p))) return false;
    return true;
  };
  auto needs_matrix = [&](std::uint64_t p) { return !trace_only || p > naive_limit; };

  std::vector<std::uint32_t> regular_primes, exceptional;
  for (auto p : good) {
    if (!needs_matrix(p)) continue;
    (regular(p) ? regular_primes : exceptional).push_back(p);
  }

  // block pairs (j, l) and their prime sets
  struct Pair {
    int j, l;
    std::vector<std::uint32_t> primes;
    std::vector<std::vector<residue>> rows;  // rows[i][idx * d_l + k]
  };
  std::vector<Pair> pairs;
  for (int j = 1; j <= mu; ++j)
    for (int l = 1; l <= mu; ++l) {
      if (trace_only && l != j) continue;
      Pair pr{j, l, {}, {}};
      for (auto p : regular_primes)
        if ((static_cast<std::uint64_t>(j) * p) % static_cast<std::uint64_t>(m) == static_cast<std::uint64_t>(l))
          pr.primes.push_back(p);
      if (pr.primes.empty()) continue;
      pr.rows.assign(static_cast<std::size_t>(geom.dim(j)),
                     std::vector<residue>(pr.primes.size() * static_cast<std::size_t>(geom.dim(l))));
      pairs.push_back(std::move(pr));
    }

  struct Task {
    std::size_t pair;
    int i;
    double cost;
  };
  std::vector<Task> tasks;
  for (std::size_t q = 0; q < pairs.size(); ++q)
    for (int i = 0; i < geom.dim(pairs[q].j); ++i) {
      const auto& t = tr[static_cast<std::size_t>(i)];
      const double len = t.c == 0 ? double(cfg.N) : double(pairs[q].j) * double(cfg.N) / m;
      const double dim = double(t.h.degree() + t.c);
      tasks.push_back({q, i, len * dim * dim});
    }
  std::stable_sort(tasks.begin(), tasks.end(), [](const Task& a, const Task& b) { return a.cost > b.cost; });

  const ForestPlan plan{cfg.kappa, cfg.chunk};
  parallel_for(tasks.size(), cfg.threads, [&](std::size_t ti) {
    const Task& task = tasks[ti];
    Pair& pr = pairs[task.pair];
    const auto& t = tr[static_cast<std::size_t>(task.i)];
    const int c = t.c;
    const std::size_t r = static_cast<std::size_t>(t.h.degree());
    const std::size_t dl = static_cast<std::size_t>(geom.dim(pr.l));
    TransitionLeaves leaves(TransitionContext(t.h, m, pr.l), c == 1);
    const ModuliSchedule sched = moduli_schedule(pr.j, pr.l, c, m, cfg.N, pr.primes);
    IntRow V(leaves.dim());
    V[r - 1] = 1;
    if (c == 1) V[r] = 1;
    const auto out = remainder_forest(V, leaves, sched, plan);
    auto& dest = pr.rows[static_cast<std::size_t>(task.i)];
    for (const auto& o : out) {
      const std::uint64_t p = o.modulus;
      const Exponents e = exponents(pr.j, pr.l, p, m, c);
      if (static_cast<std::uint64_t>(e.s) != o.k) throw consistency_error("compute_all: schedule position mismatch");
      std::vector<residue> w(o.value.begin(), o.value.begin() + static_cast<std::ptrdiff_t>(r));
      const residue u = c == 1 ? o.value[r] : p - 1;  // (p-1)! = -1
      const residue h0 = mpz_fdiv_ui(t.h[0].get_mpz_t(), static_cast<unsigned long>(p));
      const auto alpha = normalize_row(w, u, h0, m, e.n, e.s, p);
      const auto row = first_row(alpha, dl);
      const auto idx = static_cast<std::size_t>(
          std::lower_bound(pr.primes.begin(), pr.primes.end(), static_cast<std::uint32_t>(p)) - pr.primes.begin());
      std::copy(row.begin(), row.end(), dest.begin() + static_cast<std::ptrdiff_t>(idx * dl));
    }
  });

  // per-prime assembly
  std::vector<PrimeResult> results(good.size());
  auto finish = [&](PrimeResult& res, const CartierManinMatrix& A) {
    res.trace = trace(A);
    switch (cfg.mode) {
      case Mode::matrix: res.matrix = A; break;
      case Mode::trace: res.a_p = lift_trace(res.trace, res.p, g); break;
      case Mode::lpoly: res.lpoly = lpoly_mod_p(A); break;
      case Mode::prank: res.p_rank = p_rank(A, g); break;
    }
  };

  parallel_for(good.size(), cfg.threads, [&](std::size_t gi) {
    const std::uint64_t p = good[gi];
    PrimeResult& res = results[gi];
    res.p = p;
    if (!needs_matrix(p)) {
      const auto cnt = static_cast<std::int64_t>(naive_count(curve, p));
      res.a_p = static_cast<std::int64_t>(p) + 1 - cnt;
      res.trace = mod_reduce(*res.a_p, p);
      return;
    }
    if (!regular(p)) {
      finish(res, p >= static_cast<std::uint64_t>(d) ? compute_single(curve, p, trace_only)
                                                     : direct_cartier_manin(curve, p));
      return;
    }
    CartierManinMatrix::BlockMap blocks;
    for (const auto& pr : pairs) {
      if ((static_cast<std::uint64_t>(pr.j) * p) % static_cast<std::uint64_t>(m) != static_cast<std::uint64_t>(pr.l))
        continue;
      const auto idx = static_cast<std::size_t>(
          std::lower_bound(pr.primes.begin(), pr.primes.end(), static_cast<std::uint32_t>(p)) - pr.primes.begin());
      const std::size_t dj = static_cast<std::size_t>(geom.dim(pr.j)), dl = static_cast<std::size_t>(geom.dim(pr.l));
      ModMatrix B1(dj, dl, p);
      for (std::size_t i = 0; i < dj; ++i)
        for (std::size_t k = 0; k < dl; ++k) B1(i, k) = pr.rows[i][idx * dl + k];
      blocks.emplace(std::pair{pr.j, pr.l}, recover_block(B1, detail::mod_points(pts, dj, p)));
    }
    finish(res, assemble(geom, p, std::move(blocks)));
  });
  return results;
}

}  // namespace supercount
