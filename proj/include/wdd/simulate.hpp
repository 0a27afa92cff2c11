#pragma once

// Stochastic and exact-evolution cross-checks of the coherence formula.
//
// Convention: beta(t) has one-sided PSD S(w) such that
//   <beta(t) beta(t')> = (1/pi) int_0^inf S(w) cos(w (t - t')) dw,
// and the qubit accumulates phase phi = sqrt(2) int_0^tau y(t) beta(t) dt.
// Then |<exp(i phi)>| = exp(-chi) with chi as in noise.hpp, so white noise
// under free evolution gives chi = A tau.

#include <array>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wdd/filter.hpp"
#include "wdd/noise.hpp"
#include "wdd/sequences.hpp"

namespace wdd {

inline constexpr double kPhaseConstant = std::numbers::sqrt2;

// splitmix64 finaliser; derives independent per-task seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

struct NoiseTrajectory {
  double dt = 0.0;
  std::vector<double> samples;
  std::uint64_t seed = 0;
};

// Stationary Gaussian trajectory by spectral synthesis on the FFT grid
// w_l = 2 pi l / (N dt), l = 1..N/2-1, with Gaussian cosine and sine
// amplitudes of variance S(w_l) dw / pi. Bit-identical for equal seeds.
NoiseTrajectory synth_noise(const NoiseSpectrum& spec, double duration, double dt,
                            std::uint64_t seed);

// One-sided periodogram (dt/N)|DFT|^2 at w_l, l = 1..N/2-1; its ensemble
// mean is S(w_l) for synth_noise output.
struct Periodogram {
  std::vector<double> omega;
  std::vector<double> power;
};
Periodogram periodogram(const NoiseTrajectory& trajectory);

// Quadrature frequencies and weights used to represent a stationary process
// as a finite sum of independent random sinusoids.
struct SpectralGrid {
  std::vector<double> omega;
  std::vector<double> weight;
};
SpectralGrid spectral_grid(const NoiseSpectrum& spec, double tau, double min_interval,
                           double omega_max = 0.0);

// beta(t) = sum_l a_l cos(w_l t) + b_l sin(w_l t).
struct SinusoidNoise {
  std::vector<double> omega;
  std::vector<double> a;
  std::vector<double> b;

  double value(double t) const;
  // Exact integral of y(t) beta(t) over [0, tau].
  double integral_against(const PulsePattern& pattern) const;
};
SinusoidNoise draw_sinusoid_noise(const SpectralGrid& grid, const NoiseSpectrum& spec,
                                  std::uint64_t seed);

struct McOptions {
  std::size_t n_traj = 10000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  double omega_max = 0.0;  // 0 selects the noise-module default
  std::size_t bootstrap = 200;
};

struct McResult {
  double W = 1.0;
  double stderr_W = 0.0;
  // chi of the finite sinusoid process (what W estimates).
  double chi_grid = 0.0;
  std::size_t n_traj = 0;
  std::size_t n_frequencies = 0;
};

McResult mc_coherence(const PulsePattern& pattern, const NoiseSpectrum& spec,
                      const McOptions& opts);

// Quantum bath coupled through sigma_z (x) B_z, with bath Hamiltonian H_B.
struct BathModel {
  Eigen::MatrixXcd coupling;
  Eigen::MatrixXcd hamiltonian;

  static BathModel random(std::size_t d, std::uint64_t seed, double coupling_norm = 1.0,
                          double hamiltonian_norm = 1.0);
  std::size_t dimension() const { return static_cast<std::size_t>(coupling.rows()); }
  double coupling_norm() const;
  double hamiltonian_norm() const;
  void validate() const;
};

struct BathSweep {
  std::vector<double> tau;
  std::vector<double> loss;
  PowerFit fit;
  bool regime_warning = false;
};

// Exact piecewise evolution of |+><+| (x) 1/d under WDD_n. Fidelity loss is
// 1 - <+|rho_S(tau)|+> computed as <-|rho_S|->; the fit is over log loss
// against log tau for the points with positive loss.
BathSweep bath_fidelity(std::uint64_t n, const BathModel& bath, std::span<const double> taus);

// Qubit coupled on all three axes: sum_i sigma_i (x) B_i + 1 (x) H_B.
struct GenericBathModel {
  std::array<Eigen::MatrixXcd, 3> coupling;
  Eigen::MatrixXcd hamiltonian;

  static GenericBathModel random(std::size_t d, std::uint64_t seed, double coupling_norm = 1.0,
                                 double hamiltonian_norm = 1.0);
  void validate() const;
};

// Toggling-frame evolution with per-segment signs (s_x, s_y, s_z) on equal
// segments. Loss is averaged over the six Pauli eigenstates.
BathSweep generic_bath_fidelity(std::span<const std::array<int, 3>> segment_signs,
                                const GenericBathModel& bath, std::span<const double> taus);

// Hermitian check with absolute tolerance.
bool is_hermitian(const Eigen::MatrixXcd& m, double tol = 1e-12);

}  // namespace wdd
