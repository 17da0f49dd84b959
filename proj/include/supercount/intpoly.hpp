#pragma once

// Dense univariate polynomials over Z (GMP coefficients) and over F_p.

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "numtheory.hpp"

namespace supercount {

/// Polynomial in Z[x]; coeffs()[i] is the coefficient of x^i. The zero
/// polynomial has no coefficients and degree -1.
class IntPoly {
public:
  IntPoly() = default;
  explicit IntPoly(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }
  IntPoly(std::initializer_list<long> coeffs) {
    for (long v : coeffs) c_.emplace_back(v);
    trim();
  }

  static IntPoly constant(const mpz_class& v) { return IntPoly(std::vector<mpz_class>{v}); }
  static IntPoly x() { return IntPoly{0, 1}; }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<mpz_class>& coeffs() const { return c_; }
  std::size_t size() const { return c_.size(); }

  /// Coefficient of x^i, zero past the degree.
  mpz_class operator[](std::size_t i) const { return i < c_.size() ? c_[i] : mpz_class(0); }
  const mpz_class& leading() const { return c_.back(); }

  mpz_class eval(const mpz_class& x) const {
    mpz_class acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  IntPoly derivative() const {
    std::vector<mpz_class> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<unsigned long>(i));
    return IntPoly(std::move(d));
  }

  mpz_class content() const {
    mpz_class g = 0;
    for (const auto& v : c_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    return g;
  }

  IntPoly divexact(const mpz_class& d) const {
    std::vector<mpz_class> out(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i)
      mpz_divexact(out[i].get_mpz_t(), c_[i].get_mpz_t(), d.get_mpz_t());
    return IntPoly(std::move(out));
  }

  friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    std::vector<mpz_class> r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + b[i];
    return IntPoly(std::move(r));
  }
  friend IntPoly operator-(const IntPoly& a) {
    std::vector<mpz_class> r(a.c_);
    for (auto& v : r) v = -v;
    return IntPoly(std::move(r));
  }
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b) { return a + (-b); }
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<mpz_class> r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return IntPoly(std::move(r));
  }
  friend IntPoly operator*(const mpz_class& s, const IntPoly& a) {
    std::vector<mpz_class> r(a.c_);
    for (auto& v : r) v *= s;
    return IntPoly(std::move(r));
  }
  friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.c_ == b.c_; }

  IntPoly pow(unsigned e) const {
    IntPoly result = constant(1), base = *this;
    while (e) {
      if (e & 1) result = result * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return result;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
      const mpz_class& v = c_[i];
      if (v == 0) continue;
      mpz_class a = abs(v);
      if (first) {
        if (v < 0) os << '-';
      } else {
        os << (v < 0 ? '-' : '+');
      }
      first = false;
      if (a != 1 || i == 0) os << a.get_str() << (i > 0 ? "*" : "");
      if (i >= 1) os << 'x';
      if (i >= 2) os << '^' << i;
    }
    return os.str();
  }

private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<mpz_class> c_;
};

/// A polynomial over F_p with coefficients in [0, p-1].
struct ModPoly {
  std::uint64_t modulus = 2;
  std::vector<residue> coeffs;

  static ModPoly reduce(const IntPoly& f, std::uint64_t p) {
    ModPoly g{p, {}};
    g.coeffs.reserve(f.size());
    for (const auto& v : f.coeffs())
      g.coeffs.push_back(mpz_fdiv_ui(v.get_mpz_t(), p));
    return g;
  }
  int degree() const {
    for (std::size_t i = coeffs.size(); i-- > 0;)
      if (coeffs[i] != 0) return static_cast<int>(i);
    return -1;
  }
  residue eval(residue x) const {
    residue acc = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;)
      acc = mod_add(mod_mul(acc, x, modulus), coeffs[i], modulus);
    return acc;
  }
};

/// f(x + a) over F_p.
inline ModPoly translate_mod(const ModPoly& f, residue a) {
  ModPoly g = f;
  const std::uint64_t p = f.modulus;
  a %= p;
  const int n = static_cast<int>(g.coeffs.size()) - 1;
  if (a == 0 || n < 1) return g;
  for (int i = 0; i < n; ++i)
    for (int k = n - 1; k >= i; --k) g.coeffs[k] = mod_add(g.coeffs[k], mod_mul(a, g.coeffs[k + 1], p), p);
  return g;
}

// ---------------------------------------------------------------------------
// Parsing

class parse_error : public std::invalid_argument {
public:
  parse_error(const std::string& what, std::size_t pos)
      : std::invalid_argument(what + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

private:
  std::size_t pos_;
};

namespace detail {

class PolyParser {
public:
  explicit PolyParser(std::string_view s) : s_(s) {}

  IntPoly parse() {
    skip();
    if (pos_ >= s_.size()) throw parse_error("empty expression", pos_);
    IntPoly r = expr();
    skip();
    if (pos_ != s_.size()) fail_at_current("unexpected character");
    return r;
  }

private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  [[noreturn]] void fail_at_current(const char* what) {
    char ch = pos_ < s_.size() ? s_[pos_] : '\0';
    if (ch == '.' || ch == '/') throw parse_error("non-integer coefficient", pos_);
    throw parse_error(std::string(what) + (ch ? std::string(" '") + ch + "'" : " end of input"), pos_);
  }

  IntPoly expr() {
    IntPoly acc = term();
    for (;;) {
      char c = peek();
      if (c == '+') {
        ++pos_;
        acc = acc + term();
      } else if (c == '-') {
        ++pos_;
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  IntPoly term() {
    IntPoly acc = unary();
    for (;;) {
      char c = peek();
      if (c == '*') {
        ++pos_;
        acc = acc * unary();
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == 'x' || c == '(') {
        acc = acc * power();  // implicit multiplication, e.g. 4x or 2(x+1)
      } else {
        return acc;
      }
    }
  }

  IntPoly unary() {
    char c = peek();
    if (c == '-') {
      ++pos_;
      return -unary();
    }
    if (c == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }

  IntPoly power() {
    IntPoly base = primary();
    if (peek() == '^') {
      ++pos_;
      skip();
      std::size_t start = pos_;
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
        fail_at_current("expected nonnegative integer exponent, found");
      mpz_class e = number();
      if (e > 100000) throw parse_error("exponent too large", start);
      return base.pow(static_cast<unsigned>(e.get_ui()));
    }
    return base;
  }

  mpz_class number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') throw parse_error("non-integer coefficient", pos_);
    return mpz_class(std::string(s_.substr(start, pos_ - start)));
  }

  IntPoly primary() {
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) return IntPoly::constant(number());
    if (c == 'x') {
      ++pos_;
      return IntPoly::x();
    }
    if (c == '(') {
      ++pos_;
      IntPoly inner = expr();
      if (peek() != ')') fail_at_current("expected ')', found");
      ++pos_;
      return inner;
    }
    fail_at_current("unexpected");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses an integer polynomial in x built from literals, +, -, *, ^ and
/// parentheses. Juxtaposition ("4x", "2(x+1)") multiplies.
inline IntPoly parse_poly(std::string_view text) { return detail::PolyParser(text).parse(); }

// ---------------------------------------------------------------------------
// Resultants and discriminants

/// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b.
inline IntPoly pseudo_remainder(const IntPoly& a, const IntPoly& b) {
  if (b.is_zero()) throw std::invalid_argument("pseudo_remainder: zero divisor");
  std::vector<mpz_class> r = a.coeffs();
  const int db = b.degree();
  int steps = std::max(a.degree() - db + 1, 0);
  const mpz_class& lb = b.leading();
  int dr = a.degree();
  while (dr >= db && dr >= 0) {
    mpz_class lr = r[dr];
    for (int i = 0; i <= dr; ++i) r[i] *= lb;
    for (int i = 0; i <= db; ++i) r[dr - db + i] -= lr * b.coeffs()[i];
    --steps;
    r.resize(dr);
    while (!r.empty() && r.back() == 0) r.pop_back();
    dr = static_cast<int>(r.size()) - 1;
  }
  mpz_class scale;
  mpz_pow_ui(scale.get_mpz_t(), lb.get_mpz_t(), static_cast<unsigned long>(std::max(steps, 0)));
  for (auto& v : r) v *= scale;
  return IntPoly(std::move(r));
}

/// Resultant over Z by the subresultant remainder sequence.
inline mpz_class resultant(IntPoly a, IntPoly b) {
  if (a.is_zero() || b.is_zero()) return 0;
  mpz_class ca = a.content(), cb = b.content();
  a = a.divexact(ca);
  b = b.divexact(cb);
  mpz_class t1, t2;
  mpz_pow_ui(t1.get_mpz_t(), ca.get_mpz_t(), static_cast<unsigned long>(b.degree()));
  mpz_pow_ui(t2.get_mpz_t(), cb.get_mpz_t(), static_cast<unsigned long>(a.degree()));
  mpz_class t = t1 * t2;
  int s = 1;
  if (a.degree() < b.degree()) {
    std::swap(a, b);
    if ((a.degree() & 1) && (b.degree() & 1)) s = -s;
  }
  mpz_class g = 1, h = 1;
  while (b.degree() > 0) {
    const int delta = a.degree() - b.degree();
    if ((a.degree() & 1) && (b.degree() & 1)) s = -s;
    IntPoly r = pseudo_remainder(a, b);
    a = std::move(b);
    if (r.is_zero()) return 0;
    mpz_class hd;
    mpz_pow_ui(hd.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(delta));
    b = r.divexact(g * hd);
    g = a.leading();
    // h <- g^delta / h^(delta-1)
    mpz_class gd, hd1;
    mpz_pow_ui(gd.get_mpz_t(), g.get_mpz_t(), static_cast<unsigned long>(delta));
    mpz_pow_ui(hd1.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(delta - 1));
    mpz_divexact(h.get_mpz_t(), gd.get_mpz_t(), hd1.get_mpz_t());
  }
  if (b.is_zero()) return 0;
  // b is a nonzero constant: h <- lc(b)^deg(a) / h^(deg(a)-1)
  const unsigned long da = static_cast<unsigned long>(a.degree());
  mpz_class lb, hd;
  mpz_pow_ui(lb.get_mpz_t(), b.leading().get_mpz_t(), da);
  if (da == 0) {
    h = h * lb;
  } else {
    mpz_pow_ui(hd.get_mpz_t(), h.get_mpz_t(), da - 1);
    mpz_divexact(h.get_mpz_t(), lb.get_mpz_t(), hd.get_mpz_t());
  }
  return s * t * h;
}

inline mpz_class discriminant(const IntPoly& f) {
  if (f.is_zero()) throw std::invalid_argument("discriminant of the zero polynomial");
  const long n = f.degree();
  if (n < 1) throw std::invalid_argument("discriminant needs degree at least 1");
  if (n == 1) return 1;
  mpz_class r = resultant(f, f.derivative());
  mpz_class d;
  mpz_divexact(d.get_mpz_t(), r.get_mpz_t(), f.leading().get_mpz_t());
  if ((n * (n - 1) / 2) & 1) d = -d;
  return d;
}

/// f(x + a), by repeated synthetic division (Taylor shift).
inline IntPoly translate(const IntPoly& f, const mpz_class& a) {
  std::vector<mpz_class> c = f.coeffs();
  const int n = f.degree();
  if (a == 0 || n < 1) return f;
  for (int i = 0; i < n; ++i)
    for (int k = n - 1; k >= i; --k) c[k] += a * c[k + 1];
  return IntPoly(std::move(c));
}

struct XFactorSplit {
  int c = 0;  // 0 or 1
  IntPoly h;  // f = x^c * h with h(0) != 0
};

inline XFactorSplit split_x_factor(const IntPoly& f) {
  if (f.is_zero()) throw std::invalid_argument("split_x_factor: zero polynomial");
  if (f[0] != 0) return {0, f};
  if (f[1] == 0) throw std::invalid_argument("split_x_factor: x^2 divides f, f is not squarefree");
  std::vector<mpz_class> h(f.coeffs().begin() + 1, f.coeffs().end());
  return {1, IntPoly(std::move(h))};
}

namespace detail {

inline mpz_class pollard_brent(const mpz_class& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    mpz_class x = 2, y = 2, d = 1, q = 1, ys, xs;
    auto step = [&](mpz_class& v) {
      v = v * v + c;
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    unsigned long r = 1;
    const unsigned long m = 64;
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) step(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          step(y);
          mpz_class diff = abs(x - y);
          q = q * diff;
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        mpz_gcd(d.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      } while (k < r && d == 1);
      r *= 2;
    } while (d == 1);
    if (d == n) {
      do {
        step(ys);
        mpz_class diff = abs(x - ys);
        mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (d == 1);
    }
    if (d != n) return d;
  }
}

inline void factor_into(mpz_class n, std::vector<mpz_class>& out) {
  for (unsigned long q = 2; q < 10000 && n > 1; ++q) {
    while (mpz_divisible_ui_p(n.get_mpz_t(), q)) {
      out.emplace_back(q);
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), q);
    }
  }
  std::vector<mpz_class> stack;
  if (n > 1) stack.push_back(n);
  while (!stack.empty()) {
    mpz_class v = stack.back();
    stack.pop_back();
    if (mpz_probab_prime_p(v.get_mpz_t(), 30)) {
      out.push_back(v);
      continue;
    }
    mpz_class d = pollard_brent(v);
    stack.push_back(d);
    stack.push_back(v / d);
  }
}

inline std::vector<mpz_class> positive_divisors(const mpz_class& n) {
  std::vector<mpz_class> primes;
  factor_into(abs(n), primes);
  std::sort(primes.begin(), primes.end());
  std::vector<mpz_class> divs{1};
  for (std::size_t i = 0; i < primes.size();) {
    std::size_t j = i;
    while (j < primes.size() && primes[j] == primes[i]) ++j;
    const std::size_t base = divs.size();
    mpz_class pw = 1;
    for (std::size_t e = i; e < j; ++e) {
      pw *= primes[i];
      for (std::size_t k = 0; k < base; ++k) divs.push_back(divs[k] * pw);
    }
    i = j;
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

}  // namespace detail

/// All integer roots of f, in increasing order.
inline std::vector<mpz_class> integer_roots(const IntPoly& f) {
  if (f.is_zero()) throw std::invalid_argument("integer_roots: zero polynomial");
  std::set<mpz_class> roots;
  IntPoly g = f;
  if (g[0] == 0) {
    roots.insert(0);
    std::size_t k = 0;
    while (g.coeffs()[k] == 0) ++k;
    g = IntPoly(std::vector<mpz_class>(g.coeffs().begin() + static_cast<std::ptrdiff_t>(k), g.coeffs().end()));
  }
  if (g.degree() >= 1) {
    for (const auto& dv : detail::positive_divisors(g[0])) {
      if (g.eval(dv) == 0) roots.insert(dv);
      if (g.eval(-dv) == 0) roots.insert(-dv);
    }
  }
  return {roots.begin(), roots.end()};
}

// ---------------------------------------------------------------------------
// Powers over F_p

namespace detail {

using u128 = unsigned __int128;

/// Packs c[0..n) into consecutive bits-wide slots of an integer.
inline void pack_slots(std::span<const residue> c, unsigned bits, mpz_class& out) {
  const std::size_t total = c.size() * bits;
  std::vector<std::uint64_t> limbs(total / 64 + 2, 0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    const std::size_t pos = i * bits, w = pos / 64, off = pos % 64;
    limbs[w] |= c[i] << off;
    if (off) limbs[w + 1] |= c[i] >> (64 - off);
  }
  mpz_import(out.get_mpz_t(), limbs.size(), -1, sizeof(std::uint64_t), 0, 0, limbs.data());
}

inline std::vector<residue> unpack_slots(const mpz_class& z, unsigned bits, std::size_t count,
                                         std::uint64_t p) {
  std::vector<std::uint64_t> limbs(count * bits / 64 + 4, 0);
  std::size_t written = 0;
  if (z != 0) {
    const std::size_t need = (mpz_sizeinbase(z.get_mpz_t(), 2) + 63) / 64;
    if (need + 3 > limbs.size()) limbs.resize(need + 3, 0);
    mpz_export(limbs.data(), &written, -1, sizeof(std::uint64_t), 0, 0, z.get_mpz_t());
  }
  const u128 mask = bits >= 128 ? ~u128(0) : ((u128(1) << bits) - 1);
  std::vector<residue> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t pos = i * bits, w = pos / 64, off = pos % 64;
    u128 v = ((u128(limbs[w + 1]) << 64) | limbs[w]) >> off;
    if (off) v |= u128(limbs[w + 2]) << (128 - off);
    out[i] = static_cast<residue>((v & mask) % p);
  }
  return out;
}

/// Product of a and b mod p, truncated to the first len coefficients, by
/// Kronecker substitution into a single big-integer product.
inline std::vector<residue> mulmod_trunc(std::span<const residue> a, std::span<const residue> b,
                                         std::size_t len, std::uint64_t p) {
  a = a.first(std::min(a.size(), len));
  b = b.first(std::min(b.size(), len));
  if (a.empty() || b.empty()) return std::vector<residue>(len, 0);
  const std::size_t terms = std::min(a.size(), b.size());
  mpz_class bound = mpz_class(static_cast<unsigned long>(p - 1)) * (p - 1) * terms;
  const unsigned bits = static_cast<unsigned>(mpz_sizeinbase(bound.get_mpz_t(), 2)) + 1;
  mpz_class za, zb;
  pack_slots(a, bits, za);
  pack_slots(b, bits, zb);
  mpz_class prod = za * zb;
  const std::size_t n = std::min(len, a.size() + b.size() - 1);
  std::vector<residue> out = unpack_slots(prod, bits, n, p);
  out.resize(len, 0);
  return out;
}

}  // namespace detail

/// Coefficients of x^lo..x^hi in f^n mod p, by binary powering with exact
/// (Kronecker-substituted) products truncated past x^hi.
inline std::vector<residue> pow_coeffs_mod(const ModPoly& f, std::uint64_t n, std::size_t lo,
                                           std::size_t hi) {
  if (hi < lo) return {};
  const std::uint64_t p = f.modulus;
  const std::size_t len = hi + 1;
  std::vector<residue> base(f.coeffs.begin(), f.coeffs.begin() + static_cast<std::ptrdiff_t>(std::min(f.coeffs.size(), len)));
  std::vector<residue> acc(len, 0);
  acc[0] = 1 % p;
  int top = 63;
  while (top >= 0 && !((n >> top) & 1)) --top;
  for (int bit = top; bit >= 0; --bit) {
    acc = detail::mulmod_trunc(acc, acc, len, p);
    if ((n >> bit) & 1) acc = detail::mulmod_trunc(acc, base, len, p);
  }
  return std::vector<residue>(acc.begin() + static_cast<std::ptrdiff_t>(lo), acc.end());
}

}  // namespace supercount
