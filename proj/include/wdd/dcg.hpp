#pragma once

// Phase-flip modulation of a detuned spin-motion gate. The residual
// displacement alpha(tau) = (Omega/2) sum_j (-1)^j int_{t_j}^{t_j+1}
// exp(-i(delta+Delta)s) ds obeys
//   |alpha|^2 = (Omega^2/4) F_p((delta+Delta) tau) / (delta+Delta)^2.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "wdd/filter.hpp"
#include "wdd/sequences.hpp"

namespace wdd {

struct GateErrorConfig {
  double delta = 0.0;        // nominal detuning, rad/s
  double Omega = 1.0;        // drive strength, rad/s
  double sigma_Delta = 0.0;  // std. dev. of the Gaussian detuning error
  double tau = 1.0;          // gate duration, s

  void validate() const;
};

// Closed-form segment sum. The pattern's own tau is the gate duration.
std::complex<double> alpha_tau(const PulsePattern& pattern, double delta, double Delta,
                               double Omega);

// (Omega^2/4) F_p(w tau) / w^2 at w = delta + Delta, finite at w = 0.
double alpha_sq(const PulsePattern& pattern, double delta, double Delta, double Omega);

// Mean of |alpha|^2 over Delta ~ N(0, sigma^2) by Gauss-Hermite quadrature.
// Refuses sigma_Delta >= |delta| / 6.
double expected_alpha_sq(const PulsePattern& pattern, const GateErrorConfig& cfg,
                         std::size_t nodes = 64);

// Gauss-Hermite nodes and weights for weight exp(-x^2) (Golub-Welsch).
struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
HermiteRule gauss_hermite(std::size_t n);

struct NotchSweep {
  std::vector<double> delta_tau;  // offsets from the notch, dimensionless
  std::vector<double> y_tilde_sq;  // |y~|^2 / tau^2
  PowerFit fit;
};

// |y~((delta + Delta) tau)|^2 for WDD_n against Delta tau around delta tau.
// Throws NumericalError if the sweep reaches a neighbouring zero.
NotchSweep notch_sweep(std::uint64_t n, double delta_tau, std::span<const double> offsets);

// Default placement: n = 2^r - 1 and delta tau = 2^(r+1) pi.
NotchSweep notch_order(unsigned r, std::span<const double> offsets);
std::vector<double> default_notch_offsets();

// Width of the region around delta tau where F_WDD_n <= 1.
double notch_width(std::uint64_t n, double delta_tau, const BandwidthOptions& opts = {});

}  // namespace wdd
