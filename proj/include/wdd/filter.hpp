#pragma once

// Filter functions F_p(w tau) = w^2 |y~(w tau)|^2 of pi-pulse patterns.
//
// Two evaluation routes exist. The pattern route works for any pulse
// locations. The WDD route uses the factorized product over Rademacher
// digits and is exact down to e^-700 in log form, which the
// low-frequency fits and the noise integrals rely on.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "wdd/sequences.hpp"

namespace wdd {

struct FilterProfile {
  std::vector<double> grid;        // dimensionless w tau
  std::vector<double> values;      // F
  std::vector<double> log_values;  // ln F, -inf at exact zeros
};

// tau * integral_0^1 y(x) exp(i w tau x) dx, in units of the pattern's tau.
std::complex<double> y_tilde(const PulsePattern& pattern, double omega_tau);

// integral_0^1 y(x) exp(i theta x) dx, evaluated piecewise with a stable
// sinc form so the theta -> 0 limit is exact.
std::complex<double> normalized_transform(const PulsePattern& pattern, double theta);

// Direct modulus-squared sum over the pulse intervals.
double filter_sum(const PulsePattern& pattern, double omega_tau);

// theta^2 |normalized_transform|^2; agrees with filter_sum but keeps
// relative accuracy at small theta for low-order patterns.
double filter_value(const PulsePattern& pattern, double omega_tau);

// integral_0^1 W_n(x) exp(i theta x) dx from the digit product.
std::complex<double> wdd_transform(std::uint64_t n, double theta);

// Closed-form F for WDD_n and its natural log.
double filter_wdd_closed(std::uint64_t n, double omega_tau);
double log_filter_wdd_closed(std::uint64_t n, double omega_tau);

// Period of F_WDD_n in w tau: 2^(m+1) pi with m = bit_length(n).
double wdd_filter_period(std::uint64_t n);
// Smallest positive w tau where F_WDD_n vanishes.
double wdd_first_zero(std::uint64_t n);

struct FitWindow {
  double lo = 1e-4;
  double hi = 1e-3;
  std::size_t points = 32;
};

struct PowerFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

// Least-squares line through (xs, ys).
PowerFit fit_line(std::span<const double> xs, std::span<const double> ys);

// Low-frequency exponent of F (= 2(alpha+1)) from a log-log fit over the
// window. Throws NumericalError if the window reaches a filter zero.
PowerFit rolloff_exponent(std::uint64_t n, const FitWindow& window = {});
PowerFit rolloff_exponent(const PulsePattern& pattern, const FitWindow& window = {});

struct BandwidthOptions {
  std::size_t scan_points = 100000;
  double rel_tol = 1e-9;
};

// Largest w tau such that F <= 1 on [0, w tau].
double bandwidth(std::uint64_t n, const BandwidthOptions& opts = {});
double bandwidth(const PulsePattern& pattern, const BandwidthOptions& opts = {});

FilterProfile filter_profile(std::uint64_t n, std::span<const double> grid, unsigned threads = 1);
FilterProfile filter_profile(const PulsePattern& pattern, std::span<const double> grid,
                             unsigned threads = 1);

}  // namespace wdd
