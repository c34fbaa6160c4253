#include <doctest.h>

#include <random>

#include "grapes/binpoly.hpp"
#include "grapes/errors.hpp"
#include "grapes/hilbert.hpp"
#include "support.hpp"

using namespace grapes;
using grapes::testing::pascal;

namespace {

BinPoly random_poly(std::mt19937& rng, int maxdeg = 4) {
  std::uniform_int_distribution<int> deg(0, maxdeg), c(-5, 5);
  std::vector<mpz_class> v(static_cast<std::size_t>(deg(rng)) + 1);
  for (auto& x : v) x = c(rng);
  return BinPoly(v);
}

// Direct evaluation with the test-side binomial.
mpz_class eval_direct(const BinPoly& p, long k) {
  mpz_class s = 0;
  for (std::size_t j = 0; j < p.coefficients().size(); ++j) s += p.coefficients()[j] * pascal(k, static_cast<long>(j));
  return s;
}

}  // namespace

TEST_SUITE("binpoly") {
  TEST_CASE("binomials") {
    for (long n = 0; n <= 20; ++n)
      for (long k = -2; k <= n + 2; ++k) CHECK(binom(n, k) == pascal(n, k));
    CHECK_THROWS_AS(binom(-1, 0), Error);
  }

  TEST_CASE("eval") {
    CHECK(eval(BinPoly::basis(2), 4) == 6);
    CHECK(eval(BinPoly(), 7) == 0);
    CHECK(eval(elementary_p1(3, 4).p1, 1) == 3);
    std::mt19937 rng(1);
    for (int t = 0; t < 50; ++t) {
      BinPoly p = random_poly(rng);
      for (unsigned long k = 0; k < 10; ++k) CHECK(eval(p, k) == eval_direct(p, static_cast<long>(k)));
    }
  }

  TEST_CASE("trimming and degree") {
    BinPoly p({1, 2, 0, 0});
    CHECK(p.coefficients().size() == 2);
    CHECK(p.degree() == 1u);
    CHECK(!BinPoly({0, 0}).degree());
    CHECK(BinPoly({0, 0}).is_zero());
    CHECK(p.leading() == 2);
  }

  TEST_CASE("shift_plus") {
    CHECK(eval(shift_plus(BinPoly::constant(1)), 3) == 4);
    CHECK(shift_plus(BinPoly::basis(1)) == BinPoly::basis(2) + BinPoly::basis(1));  // C(k+1,2)
    CHECK(eval(shift_plus(BinPoly::basis(1)), 3) == 6);
    CHECK(shift_plus(BinPoly()).is_zero());
    std::mt19937 rng(2);
    for (int t = 0; t < 50; ++t) {
      BinPoly p = random_poly(rng);
      BinPoly q = shift_plus(p);
      mpz_class partial = 0;
      for (unsigned long k = 0; k < 12; ++k) {
        partial += eval(p, k);
        CHECK(eval(q, k) == partial);
        if (k >= 1) CHECK(eval(q, k) - eval(q, k - 1) == eval(p, k));
      }
    }
  }

  TEST_CASE("conv") {
    CHECK(conv(BinPoly::constant(1), elementary_p1(1, 1).p1) == elementary_p1(1, 1).p1);
    CHECK(conv(BinPoly::basis(1), BinPoly::basis(1)) == BinPoly::basis(2));
    CHECK(conv(elementary_p1(1, 1).p1, elementary_p1(0, 3).p1) == BinPoly::basis(3));
    std::mt19937 rng(3);
    for (int t = 0; t < 40; ++t) {
      BinPoly a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
      CHECK(conv(a, b) == conv(b, a));
      CHECK(conv(conv(a, b), c) == conv(a, conv(b, c)));
      CHECK(conv(a, b + c) == conv(a, b) + conv(a, c));
      CHECK(conv(BinPoly::constant(1), a) == a);
    }
  }

  TEST_CASE("generating-function lemma") {
    // sum_k p(k) y^k * sum_k q(k) y^k == sum_k (p*q)^+(k) y^k, up to y^K
    std::mt19937 rng(4);
    const unsigned long K = 10;
    for (int t = 0; t < 30; ++t) {
      BinPoly p = random_poly(rng), q = random_poly(rng);
      BinPoly r = shift_plus(conv(p, q));
      for (unsigned long k = 0; k <= K; ++k) {
        mpz_class lhs = 0;
        for (unsigned long a = 0; a <= k; ++a) lhs += eval_direct(p, static_cast<long>(a)) * eval_direct(q, static_cast<long>(k - a));
        CHECK(lhs == eval(r, k));
      }
    }
  }

  TEST_CASE("Vandermonde-type identity") {
    for (long j1 = 0; j1 <= 12; ++j1)
      for (long j2 = 0; j2 <= 12; ++j2)
        for (long k = 0; k <= 12; ++k) {
          mpz_class lhs = 0;
          for (long k1 = 0; k1 <= k; ++k1) lhs += pascal(k1, j1) * pascal(k - k1, j2);
          CHECK(lhs == pascal(k + 1, j1 + j2 + 1));
        }
  }

  TEST_CASE("monomial basis") {
    auto m = to_monomial(BinPoly::basis(2));
    REQUIRE(m.size() == 3);
    CHECK(m[0] == 0);
    CHECK(m[1] == mpq_class(-1, 2));
    CHECK(m[2] == mpq_class(1, 2));
    std::vector<mpq_class> k2{0, 0, 1};
    CHECK(from_monomial(k2) == BinPoly::basis(1) + BinPoly::basis(2, 2));
    std::vector<mpq_class> seven{7};
    CHECK(from_monomial(seven) == BinPoly::constant(7));
    std::vector<mpq_class> half{0, mpq_class(1, 2)};
    CHECK_THROWS_AS(from_monomial(half), Error);
    std::mt19937 rng(5);
    for (int t = 0; t < 40; ++t) {
      BinPoly p = random_poly(rng, 6);
      auto a = to_monomial(p);
      CHECK(from_monomial(a) == p);
      // the power-basis form evaluates to the same values
      for (long k = 0; k < 8; ++k) {
        mpq_class s = 0, pw = 1;
        for (const auto& c : a) {
          s += c * pw;
          pw *= k;
        }
        CHECK(s == mpq_class(eval_direct(p, k)));
      }
      if (p.degree() && *p.degree() > 0) {
        mpz_class fact = 1;
        for (std::size_t d = 2; d <= *p.degree(); ++d) fact *= static_cast<unsigned long>(d);
        CHECK(a.back() == mpq_class(p.leading()) / fact);
      }
    }
  }

  TEST_CASE("text rendering") {
    BinPoly p({1, -1, 3});
    CHECK(to_text(p) == "3*C(k,2) - C(k,1) + 1");
    CHECK(to_text(BinPoly()) == "0");
    CHECK(parse_binpoly("3*C(k,2) - C(k,1) + 1") == p);
    CHECK(parse_binpoly(" C(k,1)+C(k,2) ") == BinPoly({0, 1, 1}));
    CHECK(parse_binpoly("-2") == BinPoly::constant(-2));
    CHECK_THROWS_AS(parse_binpoly("C(n,1)"), Error);
    CHECK_THROWS_AS(parse_binpoly(""), Error);
    std::mt19937 rng(6);
    for (int t = 0; t < 40; ++t) {
      BinPoly q = random_poly(rng, 7);
      CHECK(parse_binpoly(to_text(q)) == q);
    }
  }

  TEST_CASE("json rendering") {
    BinPoly p({1, -1, 3});
    nlohmann::json j = to_json(p);
    CHECK(j["binomial"]["2"] == 3);
    CHECK(j["binomial"]["1"] == -1);
    CHECK(binpoly_from_json(j) == p);
    mpz_class big("123456789012345678901234567890");
    CHECK(mpz_from_json(mpz_to_json(big)) == big);
    BinPoly b({big});
    CHECK(binpoly_from_json(to_json(b)) == b);
  }
}
