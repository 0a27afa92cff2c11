#include "wdd/filter.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "wdd/errors.hpp"
#include "wdd/parallel.hpp"

namespace wdd {

namespace {

using cld = std::complex<long double>;

long double sinc(long double u) {
  if (std::abs(u) < 1e-4L) {
    const long double u2 = u * u;
    return 1.0L - u2 / 6.0L + u2 * u2 / 120.0L;
  }
  return std::sin(u) / u;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  std::vector<double> xs(points);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < points; ++i) {
    xs[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  return xs;
}

void check_window(const FitWindow& w) {
  if (!(w.lo > 0.0) || !(w.hi > w.lo) || w.points < 20) {
    throw ValidationError("rolloff: need 0 < lo < hi and at least 20 points");
  }
}

template <typename Filter>
double scan_bandwidth(Filter&& filter, double upper, const BandwidthOptions& opts) {
  if (opts.scan_points < 2) throw ValidationError("bandwidth: scan needs at least 2 points");
  double prev = 0.0;
  for (std::size_t i = 1; i <= opts.scan_points; ++i) {
    const double x = upper * static_cast<double>(i) / static_cast<double>(opts.scan_points);
    if (filter(x) > 1.0) {
      double lo = prev;
      double hi = x;
      while (hi - lo > opts.rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (filter(mid) > 1.0) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      return lo;
    }
    prev = x;
  }
  return upper;
}

}  // namespace

std::complex<double> normalized_transform(const PulsePattern& pattern, double theta) {
  const auto b = pattern.boundaries();
  cld acc = 0;
  const long double th = theta;
  for (std::size_t j = 0; j + 1 < b.size(); ++j) {
    const long double lo = b[j];
    const long double hi = b[j + 1];
    const long double width = hi - lo;
    const cld piece = std::polar(width * sinc(th * width / 2), th * (lo + hi) / 2);
    acc += (j % 2 == 0) ? piece : -piece;
  }
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

std::complex<double> y_tilde(const PulsePattern& pattern, double omega_tau) {
  return pattern.tau() * normalized_transform(pattern, omega_tau);
}

double filter_sum(const PulsePattern& pattern, double omega_tau) {
  const auto b = pattern.boundaries();
  std::complex<double> acc = 0;
  for (std::size_t j = 0; j + 1 < b.size(); ++j) {
    const auto term = std::polar(1.0, b[j] * omega_tau) - std::polar(1.0, b[j + 1] * omega_tau);
    acc += (j % 2 == 0) ? term : -term;
  }
  return std::norm(acc);
}

double filter_value(const PulsePattern& pattern, double omega_tau) {
  return omega_tau * omega_tau * std::norm(normalized_transform(pattern, omega_tau));
}

std::complex<double> wdd_transform(std::uint64_t n, double theta) {
  const unsigned m = bit_length(n);
  const long double th_min = std::ldexp(static_cast<long double>(theta), -static_cast<int>(m));
  // e^{i theta/2} 2^-m sinc(theta_min/2) prod_i (2cos | -2i sin)(2^(i-1) theta_min)
  cld acc = std::polar(std::ldexp(sinc(th_min / 2), -static_cast<int>(m)),
                       static_cast<long double>(theta) / 2);
  for (unsigned i = 0; i < m; ++i) {
    const long double angle = std::ldexp(th_min, static_cast<int>(i) - 1);
    const bool digit = (n >> (m - 1 - i)) & 1U;
    if (digit) {
      acc *= cld(0.0L, -2.0L * std::sin(angle));
    } else {
      acc *= 2.0L * std::cos(angle);
    }
  }
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

double filter_wdd_closed(std::uint64_t n, double omega_tau) {
  const unsigned m = bit_length(n);
  const long double th_min = std::ldexp(static_cast<long double>(omega_tau), -static_cast<int>(m));
  const long double s0 = std::sin(th_min / 2);
  long double f = std::ldexp(s0 * s0, static_cast<int>(2 * (m + 1)));
  for (unsigned j = 1; j <= m; ++j) {
    const long double angle = std::ldexp(th_min, static_cast<int>(j) - 2);
    const bool digit = (n >> (m - j)) & 1U;  // b_{m+1-j}
    const long double t = digit ? std::sin(angle) : std::cos(angle);
    f *= t * t;
  }
  return static_cast<double>(f);
}

double log_filter_wdd_closed(std::uint64_t n, double omega_tau) {
  const unsigned m = bit_length(n);
  const long double th_min = std::ldexp(static_cast<long double>(omega_tau), -static_cast<int>(m));
  long double acc = (m + 1) * std::log(4.0L) + 2 * std::log(std::abs(std::sin(th_min / 2)));
  for (unsigned j = 1; j <= m; ++j) {
    const long double angle = std::ldexp(th_min, static_cast<int>(j) - 2);
    const bool digit = (n >> (m - j)) & 1U;
    acc += 2 * std::log(std::abs(digit ? std::sin(angle) : std::cos(angle)));
  }
  return static_cast<double>(acc);
}

double wdd_filter_period(std::uint64_t n) {
  return std::ldexp(std::numbers::pi, static_cast<int>(bit_length(n)) + 1);
}

double wdd_first_zero(std::uint64_t n) {
  const unsigned m = bit_length(n);
  const double big_n = std::ldexp(1.0, static_cast<int>(m));
  double first = 2.0 * std::numbers::pi * big_n;
  for (unsigned j = 1; j <= m; ++j) {
    const bool digit = (n >> (m - j)) & 1U;
    const double zero = digit ? std::numbers::pi * big_n * std::ldexp(1.0, 2 - static_cast<int>(j))
                              : std::numbers::pi * big_n * std::ldexp(1.0, 1 - static_cast<int>(j));
    first = std::min(first, zero);
  }
  return first;
}

PowerFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw ValidationError("fit_line: need at least two matching points");
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("fit_line: degenerate abscissae");
  PowerFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    fit.max_residual =
        std::max(fit.max_residual, std::abs(ys[i] - (fit.intercept + fit.slope * xs[i])));
  }
  return fit;
}

PowerFit rolloff_exponent(std::uint64_t n, const FitWindow& window) {
  check_window(window);
  const double zero = wdd_first_zero(n);
  if (window.hi >= zero) {
    throw NumericalError("rolloff: fit window reaches the filter zero at w tau = " +
                         std::to_string(zero));
  }
  const auto xs = log_grid(window.lo, window.hi, window.points);
  std::vector<double> lx, ly;
  for (double x : xs) {
    lx.push_back(std::log(x));
    ly.push_back(log_filter_wdd_closed(n, x));
  }
  return fit_line(lx, ly);
}

PowerFit rolloff_exponent(const PulsePattern& pattern, const FitWindow& window) {
  check_window(window);
  // Dense pass: F must be positive and increasing across the window.
  const auto dense = log_grid(window.lo, window.hi, 10 * window.points);
  double prev = 0.0;
  for (double x : dense) {
    const double f = filter_value(pattern, x);
    if (!(f > 0.0) || !std::isfinite(f) || f < prev) {
      throw NumericalError("rolloff: fit window contains a filter zero or dip near w tau = " +
                           std::to_string(x));
    }
    prev = f;
  }
  const auto xs = log_grid(window.lo, window.hi, window.points);
  std::vector<double> lx, ly;
  for (double x : xs) {
    lx.push_back(std::log(x));
    ly.push_back(std::log(filter_value(pattern, x)));
  }
  return fit_line(lx, ly);
}

double bandwidth(std::uint64_t n, const BandwidthOptions& opts) {
  return scan_bandwidth([n](double x) { return filter_wdd_closed(n, x); }, wdd_filter_period(n),
                        opts);
}

double bandwidth(const PulsePattern& pattern, const BandwidthOptions& opts) {
  const double upper = 4.0 * std::numbers::pi / pattern.min_interval();
  return scan_bandwidth([&pattern](double x) { return filter_value(pattern, x); }, upper, opts);
}

FilterProfile filter_profile(std::uint64_t n, std::span<const double> grid, unsigned threads) {
  FilterProfile p;
  p.grid.assign(grid.begin(), grid.end());
  p.values.resize(grid.size());
  p.log_values.resize(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    p.values[i] = filter_wdd_closed(n, grid[i]);
    p.log_values[i] = log_filter_wdd_closed(n, grid[i]);
  });
  return p;
}

FilterProfile filter_profile(const PulsePattern& pattern, std::span<const double> grid,
                             unsigned threads) {
  FilterProfile p;
  p.grid.assign(grid.begin(), grid.end());
  p.values.resize(grid.size());
  p.log_values.resize(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    const double f = filter_value(pattern, grid[i]);
    p.values[i] = f;
    p.log_values[i] = f > 0.0 ? std::log(f) : -std::numeric_limits<double>::infinity();
  });
  return p;
}

}  // namespace wdd
