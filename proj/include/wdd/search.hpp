#pragma once

// Sequence search on a digital clock of 2^m ticks. Every candidate is a
// sign pattern c on 2^m segments; with Walsh coefficients a = transform(c)
// its decoherence exponent is the quadratic form a^T G a, where
//   G[n][n'] = (1/pi) tau^2 int S(w) Re(T_n(w tau) conj T_n'(w tau)) dw
// and T_n is the Fourier transform of W_n on [0,1]. The WDD candidates are
// the unit vectors, so both searches read the same numbers.

#include <cstdint>
#include <vector>

#include "wdd/noise.hpp"
#include "wdd/walsh.hpp"

namespace wdd {

std::vector<WalshIndex> enumerate_wdd(unsigned m, unsigned r_min);

struct SearchOptions {
  unsigned threads = 1;
  QuadratureConfig quad;
};

// Entries that diverge in the infrared are NaN.
struct WalshGram {
  unsigned m = 0;
  double tau = 0.0;
  double omega_max = 0.0;
  std::vector<double> values;  // row-major 2^m x 2^m
  double operator()(std::size_t i, std::size_t j) const { return values[i * size() + j]; }
  std::size_t size() const { return std::size_t{1} << m; }
};

WalshGram walsh_gram(unsigned m, const NoiseSpectrum& spec, double tau,
                     const SearchOptions& opts = {}, bool diagonal_only = false);

struct SearchReport {
  unsigned m = 0;
  unsigned r_min = 0;
  double tau = 0.0;

  std::size_t candidates = 0;  // WDD candidates with weight >= r_min
  std::size_t skipped = 0;     // infrared-divergent WDD candidates
  std::int64_t best_n = -1;
  double best_chi = 0.0;
  std::size_t ties = 0;  // other WDD candidates with exactly best_chi
  std::vector<std::uint64_t> wdd_index;
  std::vector<double> wdd_chi;  // NaN where skipped

  bool oracle_run = false;
  std::size_t oracle_candidates = 0;  // 2^(2^m) sign patterns
  std::size_t oracle_skipped = 0;
  double oracle_best_chi = 0.0;
  std::uint64_t oracle_code = 0;  // bit k set: segment k has sign -1
  std::vector<std::uint64_t> oracle_pattern_ticks;
  std::size_t oracle_ties = 0;  // other patterns, up to global sign, at the optimum
  bool wdd_is_global_opt = false;

  double seconds = 0.0;
};

// argmin chi over enumerate_wdd(m, r_min); ties go to the smaller n.
SearchReport best_wdd(unsigned m, const NoiseSpectrum& spec, double tau, unsigned r_min = 0,
                      const SearchOptions& opts = {});

// best_wdd plus the exhaustive search over all 2^(2^m) sign patterns, m <= 4.
// Ties go to the smaller code.
SearchReport brute_force_digital(unsigned m, const NoiseSpectrum& spec, double tau,
                                 unsigned r_min = 0, const SearchOptions& opts = {});

}  // namespace wdd
