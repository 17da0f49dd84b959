#include <gtest/gtest.h>

#include <random>

#include <supercount/cartier.hpp>

#include "oracles.hpp"

using namespace supercount;

namespace {

std::vector<std::vector<residue>> dense_rows(const CartierManinMatrix& A) { return A.dense().to_rows(); }

ModMatrix random_mod_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, std::uint64_t p) {
  ModMatrix M(r, c, p);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < c; ++k) M(i, k) = rng() % p;
  return M;
}

struct Sample {
  SuperellipticCurve curve;
  std::uint64_t p;
};

std::vector<Sample> random_samples(std::uint64_t seed, int count, std::uint64_t pmax) {
  std::mt19937_64 rng(seed);
  const auto primes = oracle::primes_upto(pmax);
  std::vector<Sample> out;
  while (static_cast<int>(out.size()) < count) {
    const int m = 2 + static_cast<int>(rng() % 6);
    const int d = 3 + static_cast<int>(rng() % 5);
    const IntPoly f = oracle::random_squarefree(rng, d, 9);
    const auto curve = validate_curve(m, f);
    const std::uint64_t p = primes[rng() % primes.size()];
    if (!curve.is_good_prime(p)) continue;
    out.push_back({curve, p});
  }
  return out;
}

}  // namespace

TEST(TranslationMatrix, Examples) {
  EXPECT_EQ(translation_matrix(2, 3, 7).to_rows(),
            (std::vector<std::vector<residue>>{{1, 2, 4}, {0, 1, 4}, {0, 0, 1}}));
  EXPECT_EQ(translation_matrix(0, 2, 5), ModMatrix::identity(2, 5));
  EXPECT_EQ(translation_matrix(1, 4, 11).to_rows()[0], (std::vector<residue>{1, 1, 1, 1}));
}

TEST(TranslationMatrix, InverseIsNegatedShift) {
  for (std::uint64_t p : {5ull, 13ull, 101ull})
    for (residue a = 0; a < 6; ++a)
      for (std::size_t n = 1; n <= 6; ++n)
        EXPECT_EQ(translation_matrix(a, n, p) * translation_matrix((p - a) % p, n, p), ModMatrix::identity(n, p));
}

TEST(RecoverBlock, Example) {
  const ModMatrix B1 = ModMatrix::from_rows({{1, 2}, {4, 2}}, 5);
  const std::vector<residue> pts{0, 1};
  EXPECT_EQ(recover_block(B1, pts).to_rows(), (std::vector<std::vector<residue>>{{1, 2}, {3, 4}}));
}

TEST(RecoverBlock, RoundTrip) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 100; ++t) {
    const std::uint64_t p = oracle::primes_upto(400)[10 + t % 60];
    const std::size_t dj = 1 + rng() % 5, dl = 1 + rng() % 5;
    const ModMatrix B = random_mod_matrix(rng, dj, dl, p);
    std::vector<residue> pts;
    while (pts.size() < dj) {
      const residue a = rng() % p;
      if (std::find(pts.begin(), pts.end(), a) == pts.end()) pts.push_back(a);
    }
    // first row of the translate at a is v(a) B T(-a)
    ModMatrix B1(dj, dl, p);
    for (std::size_t i = 0; i < dj; ++i) {
      ModMatrix v(1, dj, p);
      for (std::size_t e = 0; e < dj; ++e) v(0, e) = oracle::pow_mod(pts[i], e, p);
      const ModMatrix row = v * B * translation_matrix((p - pts[i]) % p, dl, p);
      for (std::size_t k = 0; k < dl; ++k) B1(i, k) = row(0, k);
    }
    EXPECT_EQ(recover_block(B1, pts), B);
  }
}

TEST(RecoverBlock, Errors) {
  const ModMatrix B1 = ModMatrix::from_rows({{1, 2}, {4, 2}}, 5);
  const std::vector<residue> same{1, 6};
  EXPECT_THROW(recover_block(B1, same), std::invalid_argument);
  const std::vector<residue> one{1};
  EXPECT_THROW(recover_block(B1, one), std::invalid_argument);
}

TEST(Assemble, Errors) {
  const auto geom = block_dims(5, 3);  // dims (2, 1, 1)
  CartierManinMatrix::BlockMap ok{{{1, 2}, ModMatrix(2, 1, 7)}};
  EXPECT_NO_THROW(assemble(geom, 7, ok));
  CartierManinMatrix::BlockMap wrong_pos{{{1, 1}, ModMatrix(2, 2, 7)}};
  EXPECT_THROW(assemble(geom, 7, wrong_pos), std::invalid_argument);
  CartierManinMatrix::BlockMap wrong_dim{{{1, 2}, ModMatrix(2, 2, 7)}};
  EXPECT_THROW(assemble(geom, 7, wrong_dim), std::invalid_argument);
  CartierManinMatrix::BlockMap wrong_mod{{{1, 2}, ModMatrix(2, 1, 11)}};
  EXPECT_THROW(assemble(geom, 7, wrong_mod), std::invalid_argument);
  CartierManinMatrix::BlockMap out_of_range{{{4, 3}, ModMatrix(1, 1, 7)}};
  EXPECT_THROW(assemble(geom, 7, out_of_range), std::invalid_argument);
}

TEST(DirectCartierManin, Examples) {
  const auto E = validate_curve(2, IntPoly{0, 1, 0, 1});
  EXPECT_EQ(dense_rows(direct_cartier_manin(E, 5)), (std::vector<std::vector<residue>>{{2}}));
  EXPECT_EQ(dense_rows(direct_cartier_manin(E, 3)), (std::vector<std::vector<residue>>{{0}}));
  EXPECT_EQ(dense_rows(direct_cartier_manin(E, 13)), (std::vector<std::vector<residue>>{{7}}));
  EXPECT_THROW(direct_cartier_manin(E, 2), bad_prime);
}

TEST(DirectCartierManin, BlockPattern) {
  const auto C = validate_curve(7, IntPoly{-1, 3, 4, 1});
  for (std::uint64_t p : {11ull, 13ull, 29ull, 43ull}) {
    const auto A = direct_cartier_manin(C, p);
    for (const auto& [key, B] : A.blocks()) {
      EXPECT_EQ(block_target(key.first, p, 7, C.geometry.mu), key.second);
      EXPECT_EQ(B.rows(), static_cast<std::size_t>(C.geometry.dim(key.first)));
    }
  }
}

TEST(DirectCartierManin, MatchesCoefficientOracle) {
  for (const auto& [curve, p] : random_samples(42, 120, 200))
    EXPECT_EQ(dense_rows(direct_cartier_manin(curve, p)), oracle::cartier_dense(curve, p))
        << "m=" << curve.m << " f=" << curve.f.to_string() << " p=" << p;
}

// Translating x by a conjugates each block: first row of the translate is v(a) B T(-a).
TEST(DirectCartierManin, TranslationCovariance) {
  std::mt19937_64 rng(43);
  for (const auto& [curve, p] : random_samples(44, 60, 150)) {
    const std::int64_t a = static_cast<std::int64_t>(rng() % 50) - 25;
    const auto moved = validate_curve(curve.m, translate(curve.f, mpz_class(static_cast<long>(a))));
    if (!moved.is_good_prime(p)) continue;
    const auto A = direct_cartier_manin(curve, p);
    const auto Aa = direct_cartier_manin(moved, p);
    const residue ar = static_cast<residue>(((a % static_cast<std::int64_t>(p)) + static_cast<std::int64_t>(p)) %
                                            static_cast<std::int64_t>(p));
    for (const auto& [key, B] : A.blocks()) {
      const ModMatrix* Ba = Aa.block(key.first, key.second);
      ASSERT_NE(Ba, nullptr);
      ModMatrix v(1, B.rows(), p);
      for (std::size_t e = 0; e < B.rows(); ++e) v(0, e) = oracle::pow_mod(ar, e, p);
      const ModMatrix want = v * B * translation_matrix((p - ar) % p, B.cols(), p);
      for (std::size_t k = 0; k < B.cols(); ++k) EXPECT_EQ((*Ba)(0, k), want(0, k));
    }
    EXPECT_EQ(lpoly_mod_p(A), lpoly_mod_p(Aa));
  }
}

TEST(Invariants, Examples) {
  const auto E = validate_curve(2, IntPoly{0, 1, 0, 1});
  const auto A5 = direct_cartier_manin(E, 5);
  EXPECT_EQ(trace(A5), 2u);
  EXPECT_EQ(lpoly_mod_p(A5), (std::vector<residue>{1, 3}));
  EXPECT_EQ(p_rank(A5, 1), 1);
  const auto A3 = direct_cartier_manin(E, 3);
  EXPECT_EQ(trace(A3), 0u);
  EXPECT_EQ(lpoly_mod_p(A3), (std::vector<residue>{1, 0}));
  EXPECT_EQ(p_rank(A3, 1), 0);
}

TEST(Charpoly, MatchesInterpolationOracle) {
  std::mt19937_64 rng(45);
  for (int t = 0; t < 200; ++t) {
    const std::uint64_t p = oracle::primes_upto(300)[5 + t % 50];
    const std::size_t n = 1 + rng() % 8;
    if (p <= n) continue;
    ModMatrix M = random_mod_matrix(rng, n, n, p);
    if (t % 3 == 0)  // sparse inputs exercise the pivot search
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
          if (rng() % 3) M(i, k) = 0;
    const auto chi = charpoly(M);
    const auto rev = oracle::reversed_charpoly(M.to_rows(), p);
    EXPECT_EQ(std::vector<residue>(chi.rbegin(), chi.rend()), rev);
  }
}

TEST(Invariants, AgreeWithOracles) {
  for (const auto& [curve, p] : random_samples(46, 120, 300)) {
    const auto A = direct_cartier_manin(curve, p);
    const auto rows = dense_rows(A);
    const auto lp = lpoly_mod_p(A);
    ASSERT_EQ(lp.size(), static_cast<std::size_t>(curve.genus) + 1);
    if (p > static_cast<std::uint64_t>(curve.genus)) {
      EXPECT_EQ(lp, oracle::reversed_charpoly(rows, p));
    }
    EXPECT_EQ(lp[1], (p - trace(A)) % p);
    auto power = rows;
    for (int e = 1; e < curve.genus; ++e) power = oracle::mat_mul(power, rows, p);
    EXPECT_EQ(static_cast<std::size_t>(p_rank(A, curve.genus)), oracle::rank_mod(power, p));
  }
}

// trace(A_p) = a_p mod p, with #X(F_p) = p + 1 - a_p
TEST(Invariants, TraceMatchesPointCount) {
  for (const auto& [curve, p] : random_samples(47, 150, 120)) {
    const std::uint64_t count = oracle::brute_count(curve, p);
    const std::int64_t ap = static_cast<std::int64_t>(p) + 1 - static_cast<std::int64_t>(count);
    const auto P = static_cast<std::int64_t>(p);
    EXPECT_EQ(trace(direct_cartier_manin(curve, p)), static_cast<residue>(((ap % P) + P) % P))
        << "m=" << curve.m << " f=" << curve.f.to_string() << " p=" << p;
  }
}
