#pragma once

// Reference computations that share no code with the library: Walsh signs
// from sin(), transforms from per-piece Gauss-Legendre, roots from bisection.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

namespace oracle {

// Product of sgn sin(2^j pi x) over the set bits of n.
inline int walsh_sign(std::uint64_t n, double x) {
  int s = 1;
  for (unsigned j = 1; n >> (j - 1); ++j) {
    if ((n >> (j - 1)) & 1U) s *= std::sin(std::ldexp(std::numbers::pi, static_cast<int>(j)) * x) < 0 ? -1 : 1;
  }
  return s;
}

inline std::vector<int> walsh_samples(std::uint64_t n, unsigned m) {
  std::vector<int> v(std::size_t{1} << m);
  for (std::size_t k = 0; k < v.size(); ++k) {
    v[k] = walsh_sign(n, (static_cast<double>(k) + 0.5) / static_cast<double>(v.size()));
  }
  return v;
}

inline std::complex<double> integrate(const std::vector<double>& breaks, const std::vector<int>& signs,
                                      double theta, unsigned k = 0) {
  // Each piece spans a few oscillations at most, where 30-point
  // Gauss-Legendre is exact to rounding.
  using boost::math::quadrature::gauss;
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], b = breaks[i + 1];
    re += signs[i] * gauss<double, 30>::integrate(
                         [&](double x) { return std::pow(x, k) * std::cos(theta * x); }, a, b);
    im += signs[i] * gauss<double, 30>::integrate(
                         [&](double x) { return std::pow(x, k) * std::sin(theta * x); }, a, b);
  }
  return {re, im};
}

// integral_0^1 y(x) x^k exp(i theta x) dx for y switching sign at each delta.
inline std::complex<double> transform(const std::vector<double>& deltas, double theta, unsigned k = 0) {
  std::vector<double> breaks{0.0};
  breaks.insert(breaks.end(), deltas.begin(), deltas.end());
  breaks.push_back(1.0);
  std::vector<int> signs;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) signs.push_back(i % 2 ? -1 : 1);
  return integrate(breaks, signs, theta, k);
}

inline std::complex<double> walsh_transform(std::uint64_t n, unsigned m, double theta, unsigned k = 0) {
  const auto s = walsh_samples(n, m);
  std::vector<double> breaks;
  for (std::size_t i = 0; i <= s.size(); ++i) breaks.push_back(static_cast<double>(i) / s.size());
  return integrate(breaks, s, theta, k);
}

inline double filter(const std::vector<double>& deltas, double theta) {
  return theta * theta * std::norm(transform(deltas, theta));
}

// Same integral from exact antiderivatives, k = 0 only.
inline double filter_exact(const std::vector<double>& deltas, double theta) {
  std::vector<double> breaks{0.0};
  breaks.insert(breaks.end(), deltas.begin(), deltas.end());
  breaks.push_back(1.0);
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double sign = i % 2 ? -1.0 : 1.0;
    sum += sign * (std::polar(1.0, theta * breaks[i + 1]) - std::polar(1.0, theta * breaks[i]));
  }
  return std::norm(sum);
}

// Root of f on [lo, hi] by bisection to full double precision.
template <typename F>
double bisect(F f, double lo, double hi) {
  boost::math::tools::eps_tolerance<double> tol(52);
  const auto [a, b] = boost::math::tools::bisect(f, lo, hi, tol);
  return 0.5 * (a + b);
}

// Slope of the least-squares line through (log x, log y).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
