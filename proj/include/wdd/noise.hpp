#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "wdd/sequences.hpp"

namespace wdd {

enum class SpectrumKind { PowerLawGaussianCutoff, White, Ohmic, OneOverF, Tabulated };

SpectrumKind parse_spectrum_kind(std::string_view name);
std::string to_string(SpectrumKind kind);

// One-sided power spectral density of the dephasing field beta(t), in
// rad^2/s, evaluated at w >= 0 rad/s. Kinds:
//   power_law_gaussian_cutoff  A w^-p exp(-(w/wc)^2)
//   white                      A, hard cutoff at wc when wc > 0
//   ohmic                      A w exp(-w/wc)
//   one_over_f                 A / w, hard cutoff at wc when wc > 0
//   tabulated                  log-linear interpolation of (w_i, S_i),
//                              constant below the table, zero above it
// Every kind is zero below the infrared cutoff omega_ir.
struct NoiseSpectrum {
  SpectrumKind kind = SpectrumKind::White;
  double amplitude = 0.0;
  double exponent = 0.0;
  double omega_c = 0.0;
  double omega_ir = 0.0;
  std::vector<double> table_omega;
  std::vector<double> table_psd;

  static NoiseSpectrum white(double amplitude, double omega_c = 0.0);
  static NoiseSpectrum power_law(double amplitude, double p, double omega_c,
                                 double omega_ir = 0.0);

  void validate() const;
  double operator()(double omega) const;
  double log_eval(double omega) const;

  bool is_zero() const;
  // q such that S ~ w^-q as w -> 0 (ignoring omega_ir).
  double infrared_exponent() const;
  // Finite support [omega_ir, omega_c] with a discontinuity at omega_c.
  bool has_hard_cutoff() const;
  // Neither a hard nor a smooth ultraviolet cutoff.
  bool unbounded() const;
  // integral_W^inf S(w)/w^2 dw for unbounded spectra.
  double tail_over_omega_sq(double omega) const;
  // Frequency above which S is negligible (infinite when unbounded).
  double effective_cutoff() const;
};

struct QuadratureConfig {
  double omega_max = 0.0;  // 0 selects the default upper limit
  double abs_tol = 1e-8;
  double rel_tol = 1e-8;
  bool tail_correction = true;
  std::size_t max_panels = 20000;
};

struct CoherenceResult {
  double chi = 0.0;
  double W = 1.0;
  double error = 0.0;  // 1 - W
  double quad_error = 0.0;
  double omega_max = 0.0;
};

// Leading power alpha of y~(w tau) ~ (w tau)^alpha: index of the first
// non-vanishing moment of the propagator.
unsigned low_frequency_order(const PulsePattern& pattern);

// Mean of F over a period: 2 + 4s for s distinct pulses.
double mean_filter(const PulsePattern& pattern);

// Default quadrature ceiling: 10 x max(wc, 2 pi / (tau * shortest interval)).
double default_omega_max(const NoiseSpectrum& spec, double tau, double min_interval);

// chi = (1/pi) integral S(w) F(w tau) / w^2 dw over [omega_ir, omega_max],
// plus the analytic tail for unbounded spectra. Throws DivergenceError for
// infrared-divergent combinations.
CoherenceResult chi(const PulsePattern& pattern, const NoiseSpectrum& spec,
                    const QuadratureConfig& cfg = {});

// Same integral for WDD_n using the closed-form digit product.
CoherenceResult chi_wdd(std::uint64_t n, double tau, const NoiseSpectrum& spec,
                        const QuadratureConfig& cfg = {});

// Integral of (1/pi) tau^2 S(w) g(w tau) over [omega_ir, omega_max] for a
// bounded kernel g; shared by chi and the search Gram matrix. The product
// is formed in log space so S(w -> 0) cannot overflow it. The error target
// is rel_tol times the same integral of the envelope (default |g|), which
// must dominate |g|.
struct KernelIntegral {
  double value = 0.0;
  double error = 0.0;
};
KernelIntegral integrate_kernel(const std::function<double(double theta)>& kernel,
                                double tau, double min_interval, const NoiseSpectrum& spec,
                                const QuadratureConfig& cfg,
                                const std::function<double(double theta)>& envelope = {});

// Sorted panel boundaries on [a, b]: a uniform grid of the given width
// (coarsened to at most max_panels), spectral scales around omega_c, and a
// geometric run towards zero when a = 0.
std::vector<double> panel_breakpoints(const NoiseSpectrum& spec, double a, double b,
                                      double panel_width, std::size_t max_panels);

struct T2Options {
  double tau_guess = 0.0;  // 0 selects 1/omega_c or 1/A
  double tau_lo = 1e-15;
  double tau_hi = 1e6;
  double rel_tol = 1e-6;
  QuadratureConfig quad;
};

// tau with chi_WDD_n(tau) = 1 by bracketed bisection in log tau.
double t2_time(std::uint64_t n, const NoiseSpectrum& spec, const T2Options& opts = {});

}  // namespace wdd
