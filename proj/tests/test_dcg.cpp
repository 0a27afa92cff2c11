#include <doctest.h>

#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "oracles.hpp"
#include "wdd/dcg.hpp"
#include "wdd/errors.hpp"
#include "wdd/filter.hpp"

using namespace wdd;

namespace {

constexpr double pi = std::numbers::pi;
using Big = boost::multiprecision::cpp_bin_float_50;

// |int_0^1 W_n(x) exp(i theta x) dx|^2 in 50-digit arithmetic.
double y_tilde_sq_big(std::uint64_t n, unsigned m, double theta_d, double offset_d) {
  const Big theta = Big(theta_d) + Big(offset_d);
  const auto signs = oracle::walsh_samples(n, m);
  const Big h = Big(1) / Big(signs.size());
  Big re = 0, im = 0;
  for (std::size_t k = 0; k < signs.size(); ++k) {
    const Big a = theta * h * k, b = theta * h * (k + 1);
    re += signs[k] * (sin(b) - sin(a));
    im += signs[k] * (cos(a) - cos(b));
  }
  return static_cast<double>((re * re + im * im) / (theta * theta));
}

}  // namespace

TEST_CASE("displacement closed form") {
  const auto bare = PulsePattern::free_evolution(1.0);
  CHECK(std::abs(alpha_tau(bare, 2 * pi, 0.0, 1.0)) <= 1e-15);

  for (std::uint64_t n : {1, 3, 7, 12}) {
    const auto p = wdd_pattern(n, 1.0);
    const double zero = wdd_filter_period(n);
    CHECK(std::abs(alpha_tau(p, zero - 0.25, 0.25, 1.7)) <= 1e-12);
  }

  using boost::math::quadrature::gauss_kronrod;
  const double re = gauss_kronrod<double, 61>::integrate([](double s) { return std::cos(pi * s); }, 0.0, 1.0);
  const double im = gauss_kronrod<double, 61>::integrate([](double s) { return -std::sin(pi * s); }, 0.0, 1.0);
  const auto a = alpha_tau(bare, pi, 0.0, 3.0);
  CHECK(std::abs(a - 1.5 * std::complex<double>(re, im)) <= 1e-14);

  CHECK(std::isfinite(std::abs(alpha_tau(wdd_pattern(3, 1.0), 1.0, -1.0, 1.0))));
}

TEST_CASE("displacement equals the filter over frequency squared") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> d(1 + trial % 7);
    for (auto& v : d) v = u(rng);
    std::sort(d.begin(), d.end());
    const PulsePattern p(0.5 + u(rng), d);
    const double delta = 60.0 * u(rng) + 0.1, Delta = u(rng) - 0.5, Omega = 0.3 + u(rng);
    const double w = delta + Delta;
    const double lhs = alpha_sq(p, delta, Delta, Omega) * 4.0 * w * w / (Omega * Omega);
    const double rhs = filter_value(p, w * p.tau());
    REQUIRE(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, rhs));
    REQUIRE(std::norm(alpha_tau(p, delta, Delta, Omega)) ==
            doctest::Approx(alpha_sq(p, delta, Delta, Omega)).epsilon(1e-12));
  }
}

TEST_CASE("gauss hermite") {
  const auto rule = gauss_hermite(20);
  double w0 = 0.0, w2 = 0.0, w4 = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    w0 += rule.weights[i];
    w2 += rule.weights[i] * x * x;
    w4 += rule.weights[i] * x * x * x * x;
  }
  CHECK(w0 == doctest::Approx(std::sqrt(pi)).epsilon(1e-13));
  CHECK(w2 == doctest::Approx(std::sqrt(pi) / 2).epsilon(1e-13));
  CHECK(w4 == doctest::Approx(3 * std::sqrt(pi) / 4).epsilon(1e-13));
}

TEST_CASE("expected displacement") {
  GateErrorConfig cfg{32 * pi, 1.0, 0.0, 1.0};
  CHECK(expected_alpha_sq(wdd_pattern(15, 1.0), cfg) <= 1e-30);

  cfg.sigma_Delta = 1.0;
  const double flipped = expected_alpha_sq(wdd_pattern(15, 1.0), cfg);
  const double bare = expected_alpha_sq(PulsePattern::free_evolution(1.0), cfg);
  CHECK(flipped * 10.0 <= bare);

  cfg.sigma_Delta = cfg.delta / 6.0;
  CHECK_THROWS_AS(expected_alpha_sq(wdd_pattern(15, 1.0), cfg), ValidationError);
}

TEST_CASE("notch order") {
  const auto offsets = default_notch_offsets();
  for (unsigned r = 1; r <= 4; ++r) {
    const auto sweep = notch_order(r, offsets);
    CHECK(std::abs(sweep.fit.slope - 2.0 * (r + 1)) <= 0.1);
    const std::uint64_t n = (1U << r) - 1;
    const double dt = std::ldexp(2 * pi, static_cast<int>(r));
    for (std::size_t i = 0; i < offsets.size(); i += 7) {
      CHECK(sweep.y_tilde_sq[i] == doctest::Approx(y_tilde_sq_big(n, r, dt, offsets[i])).epsilon(1e-6));
    }
  }
  // Both candidate placements for WDD_15.
  for (int e : {4, 5}) {
    const auto sweep = notch_sweep(15, std::ldexp(2 * pi, e), offsets);
    CHECK(std::abs(sweep.fit.slope - 10.0) <= 0.1);
  }
  CHECK_THROWS_AS(notch_sweep(1, 4 * pi, std::vector<double>{1e-3, 13.0}), NumericalError);
}

TEST_CASE("notch width and translation") {
  const double shared = 64 * pi;
  const double w15 = notch_width(15, shared);
  for (std::uint64_t n : {23, 27, 29, 30}) CHECK(notch_width(n, shared) > w15);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (std::uint64_t n : {7, 15, 22}) {
    for (int i = 0; i < 20; ++i) {
      const double x = u(rng);
      CHECK(std::abs(filter_wdd_closed(n, wdd_filter_period(n) + x) - filter_wdd_closed(n, x)) <=
            1e-9 * std::max(1.0, filter_wdd_closed(n, x)));
    }
  }
}
