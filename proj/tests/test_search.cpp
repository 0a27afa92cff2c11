#include <doctest.h>

#include "wdd/errors.hpp"
#include "wdd/noise.hpp"
#include "wdd/search.hpp"

using namespace wdd;

namespace {

std::vector<std::uint64_t> values(const std::vector<WalshIndex>& v) {
  std::vector<std::uint64_t> out;
  for (const auto& w : v) out.push_back(w.value());
  return out;
}

}  // namespace

TEST_CASE("candidate enumeration") {
  CHECK(values(enumerate_wdd(3, 2)) == std::vector<std::uint64_t>{3, 5, 6, 7});
  CHECK(values(enumerate_wdd(2, 0)) == std::vector<std::uint64_t>{0, 1, 2, 3});
  CHECK(values(enumerate_wdd(4, 4)) == std::vector<std::uint64_t>{15});
  CHECK_THROWS_AS(enumerate_wdd(0, 0), ValidationError);
  CHECK_THROWS_AS(enumerate_wdd(3, 4), ValidationError);
}

TEST_CASE("best WDD sequence") {
  const auto slow = NoiseSpectrum::power_law(1.0, 0.0, 1.0);
  const auto m1 = best_wdd(1, slow, 1.0);
  CHECK(m1.best_n == 1);
  CHECK(m1.wdd_chi[1] < m1.wdd_chi[0]);

  const auto fig = NoiseSpectrum::power_law(1.0, 2.0, 0.1);
  const auto m4 = best_wdd(4, fig, 1.0);
  CHECK(m4.best_n == 15);
  CHECK(m4.skipped == 1);
  CHECK(std::isnan(m4.wdd_chi[0]));

  const auto quiet = best_wdd(3, NoiseSpectrum::white(0.0), 1.0);
  CHECK(quiet.best_n == 0);
  CHECK(quiet.best_chi == 0.0);
  CHECK(quiet.ties == 7);
}

TEST_CASE("gram diagonal reproduces chi") {
  const auto spec = NoiseSpectrum::power_law(2.0, 1.0, 6.0);
  const auto report = best_wdd(3, spec, 0.7, 1);
  for (std::size_t i = 0; i < report.wdd_index.size(); ++i) {
    const double direct = chi_wdd(report.wdd_index[i], 0.7, spec).chi;
    CHECK(report.wdd_chi[i] == doctest::Approx(direct).epsilon(1e-6));
  }
}

TEST_CASE("exhaustive digital search") {
  const auto soft = NoiseSpectrum::power_law(1.0, 0.0, 3.0);
  const auto m1 = brute_force_digital(1, soft, 1.0);
  CHECK(m1.oracle_candidates == 4);

  const auto quiet = brute_force_digital(2, NoiseSpectrum::white(0.0), 1.0);
  CHECK(quiet.oracle_best_chi == 0.0);
  CHECK(quiet.oracle_ties == 7);

  SearchOptions one;
  one.threads = 1;
  SearchOptions three;
  three.threads = 3;
  for (const auto& spec : {soft, NoiseSpectrum::white(1.0, 40.0)}) {
    const auto a = brute_force_digital(3, spec, 1.0, 0, one);
    const auto b = brute_force_digital(3, spec, 1.0, 0, three);
    CHECK(a.oracle_best_chi <= a.best_chi);
    CHECK(a.oracle_best_chi == b.oracle_best_chi);
    CHECK(a.oracle_code == b.oracle_code);
    CHECK(a.wdd_chi == b.wdd_chi);
    CHECK(a.best_n == b.best_n);
  }
  CHECK_THROWS_AS(brute_force_digital(5, soft, 1.0), ValidationError);
}
