#include <gtest/gtest.h>

#include <random>

#include <supercount/intpoly.hpp>

#include "oracles.hpp"

using namespace supercount;

namespace {

std::vector<long> as_longs(const IntPoly& f) {
  std::vector<long> out;
  for (const auto& c : f.coeffs()) out.push_back(c.get_si());
  return out;
}

// Degree of gcd(f, g) over Q, by the Euclidean algorithm on rational coefficients.
int rational_gcd_degree(const IntPoly& f, const IntPoly& g) {
  using Q = std::vector<mpq_class>;
  auto conv = [](const IntPoly& p) {
    Q q;
    for (const auto& c : p.coeffs()) q.emplace_back(c);
    return q;
  };
  auto trim = [](Q& q) {
    while (!q.empty() && q.back() == 0) q.pop_back();
  };
  Q a = conv(f), b = conv(g);
  trim(a);
  trim(b);
  while (!b.empty()) {
    while (a.size() >= b.size() && !a.empty()) {
      const mpq_class factor = a.back() / b.back();
      const std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= factor * b[i];
      trim(a);
    }
    std::swap(a, b);
  }
  return static_cast<int>(a.size()) - 1;
}

}  // namespace

TEST(Parse, Examples) {
  EXPECT_EQ(as_longs(parse_poly("x^3+4*x^2+3*x-1")), (std::vector<long>{-1, 3, 4, 1}));
  EXPECT_EQ(as_longs(parse_poly("x")), (std::vector<long>{0, 1}));
  EXPECT_EQ(as_longs(parse_poly("(x+1)*(x-1)")), (std::vector<long>{-1, 0, 1}));
}

TEST(Parse, Grammar) {
  EXPECT_EQ(as_longs(parse_poly("4x^2 - x")), (std::vector<long>{0, -1, 4}));
  EXPECT_EQ(as_longs(parse_poly("-x^2")), (std::vector<long>{0, 0, -1}));
  EXPECT_EQ(as_longs(parse_poly("(x+1)^3")), (std::vector<long>{1, 3, 3, 1}));
  EXPECT_EQ(as_longs(parse_poly("2*3 + x*x")), (std::vector<long>{6, 0, 1}));
  EXPECT_EQ(as_longs(parse_poly("  x ^ 2 + 1 ")), (std::vector<long>{1, 0, 1}));
  EXPECT_EQ(as_longs(parse_poly("--x")), (std::vector<long>{0, 1}));
  EXPECT_TRUE(parse_poly("x - x").is_zero());
  EXPECT_EQ(parse_poly("123456789012345678901234567890").leading(), mpz_class("123456789012345678901234567890"));
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_poly(""), parse_error);
  EXPECT_THROW(parse_poly("x+"), parse_error);
  EXPECT_THROW(parse_poly("(x+1"), parse_error);
  EXPECT_THROW(parse_poly("y^2"), parse_error);
  EXPECT_THROW(parse_poly("x^-1"), parse_error);
  EXPECT_THROW(parse_poly("1.5*x"), parse_error);
  EXPECT_THROW(parse_poly("x/2"), parse_error);
  try {
    parse_poly("x^2 + 0.5");
    FAIL();
  } catch (const parse_error& e) {
    EXPECT_NE(std::string(e.what()).find("non-integer coefficient"), std::string::npos);
    EXPECT_EQ(e.position(), 7u);
  }
}

TEST(Discriminant, Examples) {
  EXPECT_EQ(discriminant(IntPoly{0, 1, 0, 1}), -4);
  EXPECT_EQ(discriminant(IntPoly{6, 11, 6, 1}), 4);
  EXPECT_EQ(discriminant(IntPoly{0, 0, 1}), 0);
  EXPECT_EQ(discriminant(IntPoly{1, 0, 1}), -4);
  EXPECT_EQ(discriminant(IntPoly{3, 2}), 1);
  EXPECT_THROW(discriminant(IntPoly{}), std::invalid_argument);
}

TEST(Discriminant, MatchesSylvesterDeterminant) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const int d = 2 + t % 9;
    const IntPoly f = oracle::random_poly(rng, d, 20);
    EXPECT_EQ(discriminant(f), oracle::sylvester_discriminant(f)) << f.to_string();
  }
}

TEST(Discriminant, VanishesExactlyForRepeatedFactors) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 150; ++t) {
    IntPoly f = oracle::random_poly(rng, 1 + t % 4, 5);
    if (t % 2 == 0) {
      const IntPoly g = oracle::random_poly(rng, 1 + t % 3, 5);
      f = f * g * g;
    }
    if (f.degree() > 8 || f.degree() < 1) continue;
    const bool nonzero = discriminant(f) != 0;
    EXPECT_EQ(nonzero, rational_gcd_degree(f, f.derivative()) == 0) << f.to_string();
  }
}

TEST(Translate, Examples) {
  EXPECT_EQ(translate(IntPoly{0, 1, 0, 1}, 1), (IntPoly{2, 4, 3, 1}));
  const IntPoly f{-1, 3, 4, 1};
  EXPECT_EQ(translate(f, 0), f);
  EXPECT_EQ(translate(IntPoly{0, -1, 0, 1}, 1), (IntPoly{0, 2, 3, 1}));
}

TEST(Translate, RoundTripAndEvaluation) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<long> ra(-50, 50);
  for (int t = 0; t < 100; ++t) {
    const IntPoly f = oracle::random_poly(rng, 1 + t % 10, 1000);
    const mpz_class a = ra(rng);
    const IntPoly g = translate(f, a);
    EXPECT_EQ(translate(g, -a), f);
    for (long x = -3; x <= 3; ++x) EXPECT_EQ(g.eval(x), f.eval(x + a));
  }
}

TEST(TranslateMod, AgreesWithIntegerTranslation) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 50; ++t) {
    const IntPoly f = oracle::random_poly(rng, 1 + t % 7, 100);
    const std::uint64_t p = 101;
    const residue a = static_cast<residue>(t * 7 % 101);
    const ModPoly want = ModPoly::reduce(translate(f, mpz_class(static_cast<unsigned long>(a))), p);
    EXPECT_EQ(translate_mod(ModPoly::reduce(f, p), a).coeffs, want.coeffs);
  }
}

TEST(SplitXFactor, Examples) {
  const auto a = split_x_factor(IntPoly{0, 1, 0, 1});
  EXPECT_EQ(a.c, 1);
  EXPECT_EQ(a.h, (IntPoly{1, 0, 1}));
  const auto b = split_x_factor(IntPoly{1, 1, 0, 1});
  EXPECT_EQ(b.c, 0);
  EXPECT_EQ(b.h, (IntPoly{1, 1, 0, 1}));
  EXPECT_THROW(split_x_factor(IntPoly{0, 0, 1}), std::invalid_argument);
}

TEST(IntegerRoots, Examples) {
  auto roots = [](const IntPoly& f) {
    std::vector<long> out;
    for (const auto& r : integer_roots(f)) out.push_back(r.get_si());
    return out;
  };
  EXPECT_EQ(roots(IntPoly{0, -1, 0, 1}), (std::vector<long>{-1, 0, 1}));
  EXPECT_TRUE(roots(IntPoly{-1, 3, 4, 1}).empty());
  EXPECT_EQ(roots(IntPoly{0, 1, 0, 1}), (std::vector<long>{0}));
  EXPECT_EQ(roots(IntPoly{-6, 1}), (std::vector<long>{6}));
  EXPECT_TRUE(roots(IntPoly{1, 0, 4}).empty());
  // 2x - 1 has the rational root 1/2 only
  EXPECT_TRUE(roots(IntPoly{-1, 2}).empty());
}

TEST(IntegerRoots, RecoversPlantedRoots) {
  std::mt19937_64 rng(15);
  std::uniform_int_distribution<long> ra(-30, 30);
  for (int t = 0; t < 60; ++t) {
    std::vector<long> planted;
    while (planted.size() < 3) {
      const long r = ra(rng);
      if (std::find(planted.begin(), planted.end(), r) == planted.end()) planted.push_back(r);
    }
    // cofactor x^2 + x + 7 has no real roots
    const IntPoly f = oracle::split_poly(planted) * IntPoly{7, 1, 1};
    std::sort(planted.begin(), planted.end());
    std::vector<long> got;
    for (const auto& r : integer_roots(f)) got.push_back(r.get_si());
    EXPECT_EQ(got, planted);
  }
}

TEST(IntegerRoots, LargeConstantTerm) {
  // (x - 1000003)(x + 999983)(x^2 + 1)
  const IntPoly f = oracle::split_poly({1000003, -999983}) * IntPoly{1, 0, 1};
  std::vector<long> got;
  for (const auto& r : integer_roots(f)) got.push_back(r.get_si());
  EXPECT_EQ(got, (std::vector<long>{-999983, 1000003}));
}

TEST(PowCoeffsMod, Examples) {
  EXPECT_EQ(pow_coeffs_mod(ModPoly::reduce(IntPoly{1, 0, 1}, 5), 2, 0, 4), (std::vector<residue>{1, 0, 2, 0, 1}));
  EXPECT_EQ(pow_coeffs_mod(ModPoly::reduce(IntPoly{3, 1, 4}, 5), 0, 0, 0), (std::vector<residue>{1}));
  EXPECT_EQ(pow_coeffs_mod(ModPoly::reduce(IntPoly{0, 1, 0, 1}, 5), 2, 4, 4), (std::vector<residue>{2}));
}

TEST(PowCoeffsMod, MatchesSchoolbookExpansion) {
  std::mt19937_64 rng(16);
  for (std::uint64_t p : {2ull, 3ull, 7ull, 101ull, 65521ull, 4294967291ull}) {
    for (int t = 0; t < 20; ++t) {
      const IntPoly f = oracle::random_poly(rng, 1 + t % 6, 1000);
      const ModPoly fm = ModPoly::reduce(f, p);
      const unsigned n = static_cast<unsigned>(t % 11);
      const std::size_t top = static_cast<std::size_t>(n) * static_cast<std::size_t>(f.degree());
      const auto full = oracle::mod_power(fm.coeffs, n, top, p);
      EXPECT_EQ(pow_coeffs_mod(fm, n, 0, top), full);
      const std::size_t lo = top / 3, hi = top - top / 4;
      EXPECT_EQ(pow_coeffs_mod(fm, n, lo, hi), std::vector<residue>(full.begin() + lo, full.begin() + hi + 1));
    }
  }
}

TEST(PowCoeffsMod, WindowPastTheDegreeIsZero) {
  const auto c = pow_coeffs_mod(ModPoly::reduce(IntPoly{1, 1}, 7), 2, 0, 6);
  EXPECT_EQ(c, (std::vector<residue>{1, 2, 1, 0, 0, 0, 0}));
}

TEST(PowCoeffsMod, LargeExponent) {
  // (1 + x)^(p-1) = sum (-1)^k x^k mod p
  const std::uint64_t p = 10007;
  const auto c = pow_coeffs_mod(ModPoly::reduce(IntPoly{1, 1}, p), p - 1, 0, p - 1);
  for (std::size_t k = 0; k < p; ++k) EXPECT_EQ(c[k], k % 2 ? p - 1 : 1u);
}

TEST(PowerRecurrence, IdentityHoldsOverTheIntegers) {
  std::mt19937_64 rng(17);
  const std::uint64_t big = 4294967291ull;
  for (int t = 0; t < 40; ++t) {
    const int r = 1 + t % 5;
    IntPoly h = oracle::random_poly(rng, r, 9);
    if (h[0] == 0) h = h + IntPoly{1};
    for (unsigned n = 0; n <= 6; ++n) {
      const auto hn = oracle::int_power(h, n);
      const auto hm = pow_coeffs_mod(ModPoly::reduce(h, big), n, 0, hn.size() - 1);
      for (std::size_t k = 0; k < hn.size(); ++k) EXPECT_EQ(hm[k], mpz_fdiv_ui(hn[k].get_mpz_t(), big));
      auto coef = [&](long k) { return k < 0 || k >= static_cast<long>(hn.size()) ? mpz_class(0) : hn[static_cast<std::size_t>(k)]; };
      for (long k = 0; k <= static_cast<long>((n + 1) * static_cast<unsigned>(r)); ++k) {
        mpz_class sum = 0;
        for (long i = 0; i <= r; ++i) sum += ((static_cast<long>(n) + 1) * i - k) * h[static_cast<std::size_t>(i)] * coef(k - i);
        EXPECT_EQ(sum, 0) << "n=" << n << " k=" << k;
      }
    }
  }
}

TEST(IntPolyArith, Basics) {
  const IntPoly f{1, 2}, g{-1, 0, 3};
  EXPECT_EQ(f * g, (IntPoly{-1, -2, 3, 6}));
  EXPECT_EQ(f + g, (IntPoly{0, 2, 3}));
  EXPECT_EQ(f - f, IntPoly{});
  EXPECT_EQ(f.pow(3), (IntPoly{1, 6, 12, 8}));
  EXPECT_EQ(g.derivative(), (IntPoly{0, 6}));
  EXPECT_EQ(IntPoly{}.degree(), -1);
  EXPECT_EQ((IntPoly{4, 6, 8}).content(), 2);
  EXPECT_EQ(parse_poly(IntPoly{-1, 3, 4, 1}.to_string()), (IntPoly{-1, 3, 4, 1}));
}
