#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "wdd/errors.hpp"
#include "wdd/walsh.hpp"

using namespace wdd;

namespace {

std::vector<int> as_ints(const DyadicFunction& f) { return {f.signs().begin(), f.signs().end()}; }

}  // namespace

TEST_CASE("rademacher samples") {
  CHECK(as_ints(rademacher(1, 1)) == std::vector<int>{1, -1});
  CHECK(as_ints(rademacher(2, 2)) == std::vector<int>{1, -1, 1, -1});
  CHECK(as_ints(rademacher(0, 1)) == std::vector<int>{1, 1});
  CHECK_THROWS_AS(rademacher(3, 2), ValidationError);
}

TEST_CASE("walsh samples") {
  CHECK(as_ints(walsh(WalshIndex(0), 2)) == std::vector<int>{1, 1, 1, 1});
  CHECK(as_ints(walsh(WalshIndex(3), 2)) == std::vector<int>{1, -1, -1, 1});
  CHECK(as_ints(walsh(WalshIndex(7), 3)) == std::vector<int>{1, -1, -1, 1, -1, 1, 1, -1});
  CHECK_THROWS_AS(walsh(WalshIndex(4), 2), ValidationError);

  for (std::uint64_t n = 0; n < 256; ++n) {
    const unsigned m = std::max(8U, bit_length(n));
    REQUIRE(as_ints(walsh(WalshIndex(n), m)) == oracle::walsh_samples(n, m));
  }
}

TEST_CASE("refinement leaves values unchanged") {
  for (std::uint64_t n = 0; n < 32; ++n) {
    const auto coarse = walsh(WalshIndex(n));
    CHECK(coarse.refine(7) == walsh(WalshIndex(n), 7));
  }
}

TEST_CASE("hamming weight and sequency") {
  CHECK(hamming_weight(3) == 2);
  CHECK(sequency(3) == 2);
  CHECK(hamming_weight(2) == 1);
  CHECK(sequency(2) == 3);
  CHECK(hamming_weight(7) == 3);
  CHECK(sequency(7) == 5);

  for (std::uint64_t n = 0; n < 1024; ++n) {
    const auto w = walsh(WalshIndex(n), 10);
    REQUIRE(sequency(n) == w.sign_changes());
  }
}

TEST_CASE("switch points") {
  CHECK(switch_points(0).empty());
  const auto one = switch_points(1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].exact() == Rational(1, 2));
  const auto three = switch_points(3);
  REQUIRE(three.size() == 2);
  CHECK(three[0].exact() == Rational(1, 4));
  CHECK(three[1].exact() == Rational(3, 4));
}

TEST_CASE("orthonormality") {
  const unsigned m = 6;
  for (std::uint64_t a = 0; a < 64; ++a) {
    const auto wa = walsh(WalshIndex(a), m);
    for (std::uint64_t b = 0; b < 64; ++b) {
      const auto wb = walsh(WalshIndex(b), m);
      long dot = 0;
      for (std::size_t k = 0; k < wa.size(); ++k) dot += wa[k] * wb[k];
      REQUIRE(dot == (a == b ? 64 : 0));
    }
  }
}

TEST_CASE("walsh transform") {
  const auto w5 = walsh(WalshIndex(5), 3);
  std::vector<double> samples(w5.signs().begin(), w5.signs().end());
  auto a = walsh_transform(samples);
  for (std::size_t n = 0; n < a.size(); ++n) CHECK(a[n] == (n == 5 ? 1.0 : 0.0));

  std::vector<double> ones(16, 1.0);
  a = walsh_transform(ones);
  for (std::size_t n = 0; n < a.size(); ++n) CHECK(a[n] == (n == 0 ? 1.0 : 0.0));

  std::vector<double> x(16);
  for (std::size_t k = 0; k < 16; ++k) x[k] = (k + 0.5) / 16.0;
  a = walsh_transform(x);
  for (std::uint64_t n = 0; n < 16; ++n) {
    const auto w = oracle::walsh_samples(n, 4);
    double dot = 0.0;
    for (std::size_t k = 0; k < 16; ++k) dot += w[k] * x[k] / 16.0;
    CHECK(a[n] == doctest::Approx(dot).epsilon(1e-12));
    if (hamming_weight(n) >= 2) CHECK(std::abs(a[n]) <= 1e-12);
  }

  CHECK_THROWS_AS(walsh_transform(std::vector<double>(12, 0.0)), ValidationError);
}

TEST_CASE("transform round trip and Parseval") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (unsigned m = 0; m <= 10; ++m) {
    std::vector<double> f(std::size_t{1} << m);
    for (auto& v : f) v = g(rng);
    const auto a = walsh_transform(f);
    const auto back = inverse_walsh_transform(a);
    double energy = 0.0, coeff = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
      REQUIRE(std::abs(back[k] - f[k]) <= 1e-12);
      energy += f[k] * f[k] / f.size();
      coeff += a[k] * a[k];
    }
    CHECK(coeff == doctest::Approx(energy).epsilon(1e-12));
  }
}

TEST_CASE("exact moments") {
  CHECK(moment(3, 1) == 0);
  CHECK(moment(1, 1) == Rational(-1, 4));
  CHECK(moment(15, 3) == 0);
  CHECK(moment(3, 2) != 0);
  CHECK(moment(0, 0) == 1);
  CHECK(moment(0, 1) == Rational(1, 2));
}

TEST_CASE("modulated moments") {
  CHECK(std::abs(modulated_moment(1, 0)) <= 1e-12);
  CHECK(std::abs(modulated_moment(2, 1)) <= 1e-12);

  const auto value = modulated_moment(1, 2);
  const auto ref = oracle::walsh_transform(1, 1, 4.0 * std::numbers::pi, 2);
  CHECK(std::abs(ref) > 1e-3);
  CHECK(std::abs(value - ref) <= 1e-12);

  for (unsigned r = 1; r <= 4; ++r) {
    for (unsigned k = 0; k <= r + 1; ++k) {
      const auto v = modulated_moment(r, k);
      const auto o = oracle::walsh_transform((1U << r) - 1, r, std::ldexp(std::numbers::pi, r + 1), k);
      CHECK(std::abs(v - o) <= 1e-11);
    }
  }
}

TEST_CASE("walsh_exp_moment agrees with quadrature") {
  for (std::uint64_t n : {1, 5, 6, 13}) {
    for (double c : {0.0, 0.7, 9.0}) {
      for (unsigned k : {0U, 2U}) {
        const auto v = walsh_exp_moment(n, c, k);
        const auto o = oracle::walsh_transform(n, bit_length(n), c, k);
        CHECK(std::abs(v - o) <= 1e-12);
      }
    }
  }
}
