#include "wdd/dcg.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "wdd/errors.hpp"

namespace wdd {

namespace {

long double sinc(long double u) {
  if (std::abs(u) < 1e-4L) {
    const long double u2 = u * u;
    return 1.0L - u2 / 6.0L + u2 * u2 / 120.0L;
  }
  return std::sin(u) / u;
}

double wdd_y_sq(std::uint64_t n, double theta) { return std::norm(wdd_transform(n, theta)); }

}  // namespace

void GateErrorConfig::validate() const {
  if (!std::isfinite(delta) || !std::isfinite(Omega)) throw ValidationError("dcg: non-finite input");
  if (!(tau > 0.0)) throw ValidationError("dcg: tau must be positive");
  if (!(sigma_Delta >= 0.0)) throw ValidationError("dcg: sigma_Delta must be non-negative");
}

std::complex<double> alpha_tau(const PulsePattern& pattern, double delta, double Delta,
                               double Omega) {
  const long double w = static_cast<long double>(delta) + Delta;
  const long double tau = pattern.tau();
  const auto b = pattern.boundaries();
  std::complex<long double> acc = 0;
  for (std::size_t j = 0; j + 1 < b.size(); ++j) {
    const long double lo = tau * b[j];
    const long double hi = tau * b[j + 1];
    // int_lo^hi e^{-iws} ds = (hi - lo) sinc(w (hi - lo)/2) e^{-iw (lo + hi)/2}
    const auto piece = std::polar((hi - lo) * sinc(w * (hi - lo) / 2), -w * (lo + hi) / 2);
    acc += (j % 2 == 0) ? piece : -piece;
  }
  acc *= static_cast<long double>(Omega) / 2;
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

double alpha_sq(const PulsePattern& pattern, double delta, double Delta, double Omega) {
  const double tau = pattern.tau();
  const double theta = (delta + Delta) * tau;
  return Omega * Omega / 4.0 * tau * tau * std::norm(normalized_transform(pattern, theta));
}

HermiteRule gauss_hermite(std::size_t n) {
  if (n < 1) throw ValidationError("gauss_hermite: need at least one node");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                 static_cast<Eigen::Index>(n));
  for (std::size_t i = 1; i < n; ++i) {
    const double off = std::sqrt(static_cast<double>(i) / 2.0);
    jacobi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = off;
    jacobi(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(i)) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  HermiteRule rule;
  const double mu0 = std::sqrt(std::numbers::pi);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    rule.nodes.push_back(es.eigenvalues()(i));
    const double v = es.eigenvectors()(0, i);
    rule.weights.push_back(mu0 * v * v);
  }
  return rule;
}

double expected_alpha_sq(const PulsePattern& pattern, const GateErrorConfig& cfg,
                         std::size_t nodes) {
  cfg.validate();
  const auto p = pattern.with_tau(cfg.tau);
  if (cfg.sigma_Delta == 0.0) return alpha_sq(p, cfg.delta, 0.0, cfg.Omega);
  if (cfg.sigma_Delta * 6.0 >= std::abs(cfg.delta)) {
    throw ValidationError("expected_alpha_sq: sigma_Delta must be below |delta|/6");
  }
  const auto rule = gauss_hermite(nodes);
  // Delta = sqrt(2) sigma x, P(Delta) dDelta = exp(-x^2) dx / sqrt(pi)
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double d = std::numbers::sqrt2 * cfg.sigma_Delta * rule.nodes[i];
    acc += rule.weights[i] * alpha_sq(p, cfg.delta, d, cfg.Omega);
  }
  return acc / std::sqrt(std::numbers::pi);
}

std::vector<double> default_notch_offsets() {
  std::vector<double> xs(32);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = std::pow(10.0, -4.0 + 2.0 * static_cast<double>(i) / static_cast<double>(xs.size() - 1));
  }
  return xs;
}

NotchSweep notch_sweep(std::uint64_t n, double delta_tau, std::span<const double> offsets) {
  if (offsets.size() < 2) throw ValidationError("notch: need at least two offsets");
  double hi = 0.0;
  for (double x : offsets) {
    if (!(x > 0.0)) throw ValidationError("notch: offsets must be positive");
    hi = std::max(hi, x);
  }
  // Neighbouring zeros: |y~|^2 must rise monotonically out of the notch.
  double prev = 0.0;
  constexpr int kDense = 2000;
  for (int i = 1; i <= kDense; ++i) {
    const double x = hi * i / kDense;
    const double v = wdd_y_sq(n, delta_tau + x);
    if (!(v > prev)) {
      throw NumericalError("notch: sweep reaches a neighbouring zero near offset " +
                           std::to_string(x));
    }
    prev = v;
  }
  NotchSweep sweep;
  std::vector<double> lx, ly;
  for (double x : offsets) {
    const double v = wdd_y_sq(n, delta_tau + x);
    sweep.delta_tau.push_back(x);
    sweep.y_tilde_sq.push_back(v);
    lx.push_back(std::log(x));
    ly.push_back(std::log(v));
  }
  sweep.fit = fit_line(lx, ly);
  return sweep;
}

NotchSweep notch_order(unsigned r, std::span<const double> offsets) {
  if (r < 1 || r > 20) throw ValidationError("notch_order: r must be in [1, 20]");
  const std::uint64_t n = (std::uint64_t{1} << r) - 1;
  return notch_sweep(n, std::ldexp(std::numbers::pi, static_cast<int>(r) + 1), offsets);
}

double notch_width(std::uint64_t n, double delta_tau, const BandwidthOptions& opts) {
  if (opts.scan_points < 2) throw ValidationError("notch_width: scan needs at least 2 points");
  const double period = wdd_filter_period(n);
  auto edge = [&](double sign) {
    double prev = 0.0;
    for (std::size_t i = 1; i <= opts.scan_points; ++i) {
      const double x = period * static_cast<double>(i) / static_cast<double>(opts.scan_points);
      if (filter_wdd_closed(n, delta_tau + sign * x) > 1.0) {
        double lo = prev, up = x;
        while (up - lo > opts.rel_tol * up) {
          const double mid = 0.5 * (lo + up);
          (filter_wdd_closed(n, delta_tau + sign * mid) > 1.0 ? up : lo) = mid;
        }
        return lo;
      }
      prev = x;
    }
    return period;
  };
  return edge(1.0) + edge(-1.0);
}

}  // namespace wdd
