#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "wdd/errors.hpp"
#include "wdd/sequences.hpp"

using namespace wdd;

TEST_CASE("wdd patterns") {
  CHECK(wdd_pattern(1, 2.0).deltas() == std::vector<double>{0.5});
  CHECK(wdd_pattern(3, 2.0).deltas() == std::vector<double>{0.25, 0.75});
  CHECK(wdd_pattern(0, 2.0).deltas().empty());
  CHECK(wdd_pattern(3, 2.0).tau() == 2.0);
  CHECK_THROWS_AS(PulsePattern(1.0, {0.5, 0.5}), ValidationError);
  CHECK_THROWS_AS(PulsePattern(0.0, {}), ValidationError);
}

TEST_CASE("named sequences") {
  CHECK(named_index(SequenceKind::CDD, 3).value() == 7);
  CHECK(sequency(7) == 5);
  CHECK(named_index(SequenceKind::PDD, 1).value() == 2);
  CHECK(sequency(2) == 3);
  CHECK(named_index(SequenceKind::CPMG, 2).value() == 6);
  CHECK(sequency(6) == 4);
  CHECK_THROWS_AS(named_index(SequenceKind::CDD, 0), ValidationError);

  for (unsigned r = 1; r <= 6; ++r) {
    const std::uint64_t p = (std::uint64_t{1} << (r + 1)) - 1;
    const std::uint64_t c = std::uint64_t{1} << r;
    const std::uint64_t d = ((std::uint64_t{1} << (r + 1)) - 2 + 2) / 3;
    CHECK(sequency(named_index(SequenceKind::PDD, r).value()) == p);
    CHECK(sequency(named_index(SequenceKind::CPMG, r).value()) == c);
    CHECK(sequency(named_index(SequenceKind::CDD, r).value()) == d);
    CHECK(named_pulse_count(SequenceKind::CDD, r) == d);
  }
}

TEST_CASE("uhrig locations") {
  CHECK(udd_pattern(1, 1.0).deltas()[0] == doctest::Approx(0.5));
  const auto two = udd_pattern(2, 1.0).deltas();
  CHECK(two[0] == doctest::Approx(0.25));
  CHECK(two[1] == doctest::Approx(0.75));
  const auto four = udd_pattern(4, 1.0).deltas();
  for (int j = 1; j <= 4; ++j) {
    CHECK(four[j - 1] == doctest::Approx(std::pow(std::sin(j * std::numbers::pi / 10.0), 2)));
  }
}

TEST_CASE("repeat and concatenate") {
  CHECK(repeat(15) == 30);
  CHECK(concatenate(15) == 31);
  CHECK(repeat(0) == 0);
  const auto w15 = walsh(WalshIndex(15), 4);
  CHECK(walsh(WalshIndex(30), 5) == w15.doubled(false));
  CHECK(walsh(WalshIndex(31), 5) == w15.doubled(true));

  for (std::uint64_t n = 0; n < 256; ++n) {
    const unsigned m = std::max(1U, bit_length(n));
    REQUIRE(build_by_recursion(n, m) == walsh(WalshIndex(n), m));
    REQUIRE(build_by_recursion(n, 9) == walsh(WalshIndex(n), 9));
  }
}

TEST_CASE("compiled schedules") {
  auto s = compile_schedule(3, 2, 1.0);
  CHECK(s.ticks == std::vector<std::uint64_t>{1, 3});
  CHECK(s.rademacher_bits == std::vector<unsigned>{1, 2});
  s = compile_schedule(7, 3, 1.0);
  CHECK(s.ticks == std::vector<std::uint64_t>{1, 3, 4, 5, 7});
  CHECK(s.rademacher_bits == std::vector<unsigned>{1, 2, 3});
  s = compile_schedule(1, 4, 1.0);
  CHECK(s.ticks == std::vector<std::uint64_t>{8});
  CHECK(s.rademacher_bits == std::vector<unsigned>{1});
  CHECK(s.propagator() == walsh(WalshIndex(1), 4));
  CHECK(s.tau_min == doctest::Approx(1.0 / 16));
}

TEST_CASE("middle pulse follows the samples") {
  for (std::uint64_t n = 1; n < 64; ++n) {
    const auto s = compile_schedule(n, 6, 1.0);
    const auto w = walsh(WalshIndex(n), 6);
    CHECK(s.has_middle_pulse() == (w[31] != w[32]));
  }
}

TEST_CASE("digitize") {
  const auto udd = digitize(udd_pattern(4, 1.0), 4);
  double worst = 0.0;
  for (double e : udd.rounding_error) worst = std::max(worst, std::abs(e));
  CHECK(worst > 1e-3);

  for (std::uint64_t n = 1; n < 256; ++n) {
    const unsigned m = bit_length(n);
    const auto report = digitize(wdd_pattern(n, 1.0), m);
    for (double e : report.rounding_error) REQUIRE(e == 0.0);
    REQUIRE(!report.collision);
    REQUIRE(report.schedule.propagator() == walsh(WalshIndex(n), m));
  }

  const auto clash = digitize(PulsePattern(1.0, {0.30, 0.32}), 2);
  CHECK(clash.collision);
  CHECK(clash.schedule.ticks.empty());
  CHECK(clash.cancelled_ticks == std::vector<std::uint64_t>{1});
}
