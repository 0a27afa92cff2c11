#include "wdd/search.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "wdd/errors.hpp"
#include "wdd/filter.hpp"
#include "wdd/parallel.hpp"

namespace wdd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_inputs(unsigned m, const NoiseSpectrum& spec, double tau) {
  if (m < 1 || m > 20) throw ValidationError("search: m must be in [1, 20]");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ValidationError("search: tau must be positive");
  spec.validate();
}

bool pair_diverges(const NoiseSpectrum& spec, unsigned ra, unsigned rb) {
  if (spec.is_zero() || spec.omega_ir > 0.0) return false;
  return spec.infrared_exponent() >= static_cast<double>(ra + rb) + 1.0;
}

// Jumps of W_n at 0, the interior ticks and 1 (the function is zero
// outside [0,1]); the period-average of w^2 T_n conj T_n' is their dot product.
std::vector<int> jumps(std::uint64_t n, unsigned m) {
  const auto w = walsh(WalshIndex(n), m);
  std::vector<int> j(w.size() + 1);
  j[0] = w[0];
  for (std::size_t k = 1; k < w.size(); ++k) j[k] = w[k] - w[k - 1];
  j[w.size()] = -w[w.size() - 1];
  return j;
}

}  // namespace

std::vector<WalshIndex> enumerate_wdd(unsigned m, unsigned r_min) {
  if (m < 1 || m > 30) throw ValidationError("enumerate_wdd: m must be in [1, 30]");
  if (r_min > m) throw ValidationError("enumerate_wdd: r_min must not exceed m");
  std::vector<WalshIndex> out;
  for (std::uint64_t n = 0; n < (std::uint64_t{1} << m); ++n) {
    if (hamming_weight(n) >= r_min) out.emplace_back(n);
  }
  return out;
}

WalshGram walsh_gram(unsigned m, const NoiseSpectrum& spec, double tau, const SearchOptions& opts,
                     bool diagonal_only) {
  check_inputs(m, spec, tau);
  WalshGram g;
  g.m = m;
  g.tau = tau;
  const std::size_t size = g.size();
  const double min_interval = std::ldexp(1.0, -static_cast<int>(m));
  g.omega_max = opts.quad.omega_max > 0.0 ? opts.quad.omega_max
                                          : default_omega_max(spec, tau, min_interval);
  QuadratureConfig cfg = opts.quad;
  cfg.omega_max = g.omega_max;
  g.values.assign(size * size, kNaN);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = diagonal_only ? i : 0; j <= i; ++j) pairs.emplace_back(i, j);
  }
  std::vector<std::vector<int>> jump(size);
  if (spec.unbounded()) {
    for (std::size_t i = 0; i < size; ++i) jump[i] = jumps(i, m);
  }
  const bool tail = cfg.tail_correction && spec.unbounded();

  std::vector<double> out(pairs.size(), kNaN);
  parallel_for(pairs.size(), opts.threads, [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    if (pair_diverges(spec, hamming_weight(i), hamming_weight(j))) return;
    if (spec.is_zero()) {
      out[p] = 0.0;
      return;
    }
    auto kernel = [i, j](double theta) {
      if (i == j) return std::norm(wdd_transform(i, theta));
      const auto a = wdd_transform(i, theta);
      const auto b = wdd_transform(j, theta);
      return (a * std::conj(b)).real();
    };
    auto envelope = [i, j](double theta) {
      return std::abs(wdd_transform(i, theta)) * std::abs(wdd_transform(j, theta));
    };
    double value = integrate_kernel(kernel, tau, min_interval, spec, cfg, envelope).value;
    if (tail) {
      double mean = 0.0;
      for (std::size_t k = 0; k < jump[i].size(); ++k) mean += jump[i][k] * jump[j][k];
      value += mean * spec.tail_over_omega_sq(g.omega_max) / std::numbers::pi;
    }
    out[p] = value;
  });
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [i, j] = pairs[p];
    g.values[i * size + j] = out[p];
    g.values[j * size + i] = out[p];
  }
  return g;
}

namespace {

SearchReport wdd_part(const WalshGram& g, unsigned m, double tau, unsigned r_min) {
  SearchReport r;
  r.m = m;
  r.r_min = r_min;
  r.tau = tau;
  for (const auto& idx : enumerate_wdd(m, r_min)) {
    const double c = g(idx.value(), idx.value());
    r.wdd_index.push_back(idx.value());
    r.wdd_chi.push_back(c);
    ++r.candidates;
    if (std::isnan(c)) {
      ++r.skipped;
      continue;
    }
    if (r.best_n < 0 || c < r.best_chi) {
      r.best_n = static_cast<std::int64_t>(idx.value());
      r.best_chi = c;
      r.ties = 0;
    } else if (c == r.best_chi) {
      ++r.ties;
    }
  }
  if (r.best_n < 0) {
    throw DivergenceError("search: every candidate diverges in the infrared; set omega_ir > 0");
  }
  return r;
}

}  // namespace

SearchReport best_wdd(unsigned m, const NoiseSpectrum& spec, double tau, unsigned r_min,
                      const SearchOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  check_inputs(m, spec, tau);
  if (r_min > m) throw ValidationError("search: r_min must not exceed m");
  const auto g = walsh_gram(m, spec, tau, opts, true);
  auto r = wdd_part(g, m, tau, r_min);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

SearchReport brute_force_digital(unsigned m, const NoiseSpectrum& spec, double tau, unsigned r_min,
                                 const SearchOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  if (m > 4) throw ValidationError("brute_force_digital: m must be at most 4");
  check_inputs(m, spec, tau);
  if (r_min > m) throw ValidationError("search: r_min must not exceed m");
  const auto g = walsh_gram(m, spec, tau, opts, false);
  auto r = wdd_part(g, m, tau, r_min);

  const std::size_t size = g.size();
  // c and -c have the same chi; evaluate codes with segment 0 positive.
  const std::uint64_t half = std::uint64_t{1} << (size - 1);
  std::vector<double> chis(half);
  parallel_for(half, opts.threads, [&](std::size_t h) {
    const std::uint64_t code = static_cast<std::uint64_t>(h) << 1;
    std::vector<double> c(size);
    for (std::size_t k = 0; k < size; ++k) c[k] = ((code >> k) & 1U) ? -1.0 : 1.0;
    const auto a = walsh_transform(c);
    double acc = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
      if (a[i] == 0.0) continue;
      for (std::size_t j = 0; j < size; ++j) {
        if (a[j] == 0.0) continue;
        const double gij = g(i, j);
        if (std::isnan(gij)) {
          chis[h] = kNaN;
          return;
        }
        acc += a[i] * gij * a[j];
      }
    }
    chis[h] = acc;
  });

  r.oracle_run = true;
  r.oracle_candidates = std::size_t{1} << size;
  bool found = false;
  for (std::size_t h = 0; h < half; ++h) {
    const double c = chis[h];
    if (std::isnan(c)) {
      r.oracle_skipped += 2;
      continue;
    }
    if (!found || c < r.oracle_best_chi) {
      found = true;
      r.oracle_best_chi = c;
      r.oracle_code = static_cast<std::uint64_t>(h) << 1;
      r.oracle_ties = 0;
    } else if (c == r.oracle_best_chi) {
      ++r.oracle_ties;
    }
  }
  if (!found) throw DivergenceError("search: every digital pattern diverges in the infrared");
  for (std::uint64_t k = 1; k < size; ++k) {
    if (((r.oracle_code >> k) & 1U) != ((r.oracle_code >> (k - 1)) & 1U)) {
      r.oracle_pattern_ticks.push_back(k);
    }
  }
  // Ties between a WDD candidate and a non-WDD pattern count as WDD optima.
  r.wdd_is_global_opt = r.oracle_best_chi == r.best_chi;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace wdd
