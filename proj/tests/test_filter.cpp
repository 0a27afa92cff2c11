#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "wdd/errors.hpp"
#include "wdd/filter.hpp"

using namespace wdd;

namespace {

constexpr double pi = std::numbers::pi;

}  // namespace

TEST_CASE("propagator transform") {
  CHECK(y_tilde(PulsePattern::free_evolution(2.5), 0.0) == std::complex<double>(2.5, 0.0));
  CHECK(std::abs(y_tilde(PulsePattern::free_evolution(2.5), 1e-9) - std::complex<double>(2.5, 1.25e-9)) <= 1e-15);
  CHECK(std::abs(y_tilde(wdd_pattern(1, 2.5), 1e-12)) <= 1e-12);
  CHECK(std::abs(y_tilde(wdd_pattern(1, 2.5), 0.0)) == 0.0);

  const auto p3 = wdd_pattern(3, 1.0);
  CHECK(std::abs(normalized_transform(p3, pi) - oracle::transform(p3.deltas(), pi)) <= 1e-13);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> d(5);
    for (auto& v : d) v = u(rng);
    std::sort(d.begin(), d.end());
    const PulsePattern p(1.0, d);
    const double theta = 40.0 * u(rng);
    CHECK(std::abs(normalized_transform(p, theta) - oracle::transform(d, theta)) <= 1e-12);
  }
}

TEST_CASE("filter values") {
  // Free evolution has F = 4 sin^2(w tau / 2) under the pulse-sum form.
  CHECK(filter_sum(PulsePattern::free_evolution(1.0), pi) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(filter_sum(wdd_pattern(1, 1.0), pi) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(filter_wdd_closed(1, pi) == doctest::Approx(4.0).epsilon(1e-14));
  for (std::uint64_t n : {0, 1, 3, 7, 22}) CHECK(filter_sum(wdd_pattern(n, 1.0), 0.0) == 0.0);

  for (double x : {0.3, 2.0, 7.5, 31.0}) {
    CHECK(filter_wdd_closed(1, x) == doctest::Approx(16.0 * std::pow(std::sin(x / 4), 4)).epsilon(1e-13));
    CHECK(filter_value(PulsePattern::free_evolution(1.0), x) ==
          doctest::Approx(oracle::filter({}, x)).epsilon(1e-12));
  }
}

TEST_CASE("closed form matches the pulse sum") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (std::uint64_t n = 1; n < 64; ++n) {
    const auto p = wdd_pattern(n, 1.0);
    for (int i = 0; i < 200; ++i) {
      const double x = u(rng);
      const double closed = filter_wdd_closed(n, x);
      REQUIRE(std::abs(filter_sum(p, x) - closed) <= 1e-9 * std::max(1.0, closed));
      REQUIRE(std::abs(x * x * std::norm(normalized_transform(p, x)) - filter_sum(p, x)) <=
              1e-12 * std::max(1.0, closed));
    }
  }
}

TEST_CASE("periodicity and zeros") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  for (std::uint64_t n = 1; n < 32; ++n) {
    const double period = wdd_filter_period(n);
    CHECK(period == doctest::Approx(std::ldexp(2.0 * pi, static_cast<int>(bit_length(n)))));
    for (int i = 0; i < 20; ++i) {
      const double x = u(rng);
      CHECK(std::abs(filter_wdd_closed(n, x + period) - filter_wdd_closed(n, x)) <=
            1e-9 * std::max(1.0, filter_wdd_closed(n, x)));
    }
    // w tau_min = 2 pi
    CHECK(filter_wdd_closed(n, period) <= 1e-20);
    CHECK(wdd_first_zero(n) <= period * (1 + 1e-12));
    CHECK(filter_wdd_closed(n, wdd_first_zero(n)) <= 1e-20);
  }
}

TEST_CASE("rolloff exponents") {
  CHECK(rolloff_exponent(PulsePattern::free_evolution(1.0)).slope == doctest::Approx(2.0).epsilon(0.025));
  CHECK(std::abs(rolloff_exponent(1).slope - 4.0) <= 0.05);
  CHECK(std::abs(rolloff_exponent(31).slope - 12.0) <= 0.05);
  CHECK(std::abs(rolloff_exponent(wdd_pattern(7, 1.0)).slope - 8.0) <= 0.05);
  CHECK_THROWS_AS(rolloff_exponent(1, FitWindow{1.0, 20.0, 32}), NumericalError);
}

TEST_CASE("bandwidth") {
  const double fid = bandwidth(PulsePattern::free_evolution(1.0));
  const double fid_ref = oracle::bisect([](double x) { return oracle::filter({}, x) - 1.0; }, 0.1, 2.0);
  CHECK(fid == doctest::Approx(fid_ref).epsilon(1e-8));
  CHECK(fid == doctest::Approx(pi / 3).epsilon(1e-8));

  const double echo = bandwidth(1);
  const double echo_ref =
      oracle::bisect([](double x) { return oracle::filter({0.5}, x) - 1.0; }, 0.5, 4.0);
  CHECK(echo == doctest::Approx(echo_ref).epsilon(1e-8));
  CHECK(bandwidth(wdd_pattern(1, 1.0)) == doctest::Approx(echo).epsilon(1e-8));

  const double b15 = bandwidth(15);
  for (std::uint64_t n : {23, 27, 29, 30}) CHECK(bandwidth(n) > b15);
}

TEST_CASE("filter profile is thread independent") {
  std::vector<double> grid;
  for (int i = 0; i < 500; ++i) grid.push_back(0.01 * (i + 1));
  const auto a = filter_profile(15, grid, 1);
  const auto b = filter_profile(15, grid, 4);
  CHECK(a.values == b.values);
  CHECK(a.log_values == b.log_values);
}
