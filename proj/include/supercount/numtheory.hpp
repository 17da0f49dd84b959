#pragma once

// Prime enumeration and word-size modular arithmetic.
//
// Residues are least nonnegative representatives in [0, p-1] and moduli are
// below 2^32, so a product of two residues always fits in 64 bits.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

namespace supercount {

using residue = std::uint64_t;

/// Thrown when an arithmetic precondition that good-prime filtering should
/// have guaranteed turns out to be false.
class consistency_error : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

struct PrimeSet {
  std::uint64_t bound = 0;
  std::vector<std::uint32_t> primes;

  std::size_t size() const { return primes.size(); }
  bool empty() const { return primes.empty(); }
  auto begin() const { return primes.begin(); }
  auto end() const { return primes.end(); }
  bool contains(std::uint64_t p) const {
    return std::binary_search(primes.begin(), primes.end(), p);
  }
};

inline constexpr std::size_t default_sieve_segment = std::size_t{1} << 20;

/// Calls fn(p) for every prime p <= n in increasing order, sieving one
/// fixed-size segment at a time.
template <class Fn>
void for_each_prime(std::uint64_t n, Fn&& fn,
                    std::size_t segment = default_sieve_segment) {
  if (n < 2) return;
  if (n >= (std::uint64_t{1} << 32))
    throw std::invalid_argument("sieve bound must be below 2^32");
  std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(double(n)));
  while (root * root > n) --root;
  while ((root + 1) * (root + 1) <= n) ++root;

  std::vector<char> small(root + 1, 1);
  std::vector<std::uint64_t> base;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::uint64_t k = i * i; k <= root; k += i) small[k] = 0;
  }

  std::vector<char> seg(segment);
  std::vector<std::uint64_t> next(base.size());
  for (std::size_t b = 0; b < base.size(); ++b) next[b] = base[b] * base[b];

  for (std::uint64_t lo = 2; lo <= n; lo += segment) {
    std::uint64_t hi = std::min<std::uint64_t>(n + 1, lo + segment);
    std::fill(seg.begin(), seg.begin() + (hi - lo), 1);
    for (std::size_t b = 0; b < base.size(); ++b) {
      std::uint64_t q = base[b], k = next[b];
      if (k >= hi) continue;
      for (; k < hi; k += q) seg[k - lo] = 0;
      next[b] = k;
    }
    for (std::uint64_t x = lo; x < hi; ++x)
      if (seg[x - lo]) fn(x);
  }
}

inline PrimeSet sieve_primes(std::uint64_t n) {
  PrimeSet out;
  out.bound = n;
  if (n >= 100) {
    double est = 1.26 * double(n) / std::log(double(n));
    out.primes.reserve(static_cast<std::size_t>(est));
  }
  for_each_prime(n, [&](std::uint64_t p) {
    out.primes.push_back(static_cast<std::uint32_t>(p));
  });
  return out;
}

inline residue mod_reduce(std::int64_t a, std::uint64_t p) {
  std::int64_t r = a % static_cast<std::int64_t>(p);
  return static_cast<residue>(r < 0 ? r + static_cast<std::int64_t>(p) : r);
}

inline residue mod_mul(residue a, residue b, std::uint64_t p) { return a * b % p; }
inline residue mod_add(residue a, residue b, std::uint64_t p) {
  residue s = a + b;
  return s >= p ? s - p : s;
}
inline residue mod_sub(residue a, residue b, std::uint64_t p) {
  return a >= b ? a - b : a + p - b;
}
inline residue mod_neg(residue a, std::uint64_t p) { return a == 0 ? 0 : p - a; }

inline residue mod_inv(residue a, std::uint64_t p) {
  a %= p;
  if (a == 0) throw consistency_error("mod_inv: residue is not invertible");
  std::int64_t t = 0, newt = 1;
  std::int64_t r = static_cast<std::int64_t>(p), newr = static_cast<std::int64_t>(a);
  while (newr != 0) {
    std::int64_t q = r / newr;
    std::tie(t, newt) = std::pair{newt, t - q * newt};
    std::tie(r, newr) = std::pair{newr, r - q * newr};
  }
  if (r != 1) throw consistency_error("mod_inv: residue is not invertible");
  return mod_reduce(t, p);
}

/// a^e mod p; a negative exponent raises the inverse of a.
inline residue mod_pow(residue a, std::int64_t e, std::uint64_t p) {
  a %= p;
  if (e < 0) {
    a = mod_inv(a, p);
    e = -e;
  }
  residue result = 1 % p;
  while (e > 0) {
    if (e & 1) result = mod_mul(result, a, p);
    a = mod_mul(a, a, p);
    e >>= 1;
  }
  return result;
}

}  // namespace supercount
