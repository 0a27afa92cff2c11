#include "wdd/simulate.hpp"

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss.hpp>
#include <fftw3.h>

#include "wdd/errors.hpp"
#include "wdd/parallel.hpp"

namespace wdd {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffers {
  double* real = nullptr;
  fftw_complex* spectrum = nullptr;
  explicit FftwBuffers(std::size_t n) {
    real = fftw_alloc_real(n);
    spectrum = fftw_alloc_complex(n / 2 + 1);
  }
  ~FftwBuffers() {
    fftw_free(real);
    fftw_free(spectrum);
  }
  FftwBuffers(const FftwBuffers&) = delete;
  FftwBuffers& operator=(const FftwBuffers&) = delete;
};

double resolvable_frequency(const NoiseSpectrum& spec) {
  if (spec.kind == SpectrumKind::PowerLawGaussianCutoff) return 3.0 * spec.omega_c;
  return spec.effective_cutoff();
}

Eigen::MatrixXcd random_hermitian(std::size_t d, std::mt19937_64& rng, double norm) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd a(d, d);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = {gauss(rng), gauss(rng)};
  }
  Eigen::MatrixXcd h = (a + a.adjoint()) / 2.0;
  if (norm == 0.0) return Eigen::MatrixXcd::Zero(d, d);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  return h * (norm / es.eigenvalues().cwiseAbs().maxCoeff());
}

double spectral_norm(const Eigen::MatrixXcd& h) {
  if (h.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// exp(-i t H) for Hermitian H via its eigendecomposition.
class HermitianPropagator {
 public:
  explicit HermitianPropagator(const Eigen::MatrixXcd& h) : solver_(h) {}
  Eigen::MatrixXcd operator()(double t) const {
    const auto& v = solver_.eigenvectors();
    Eigen::VectorXcd phases(v.cols());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
      phases(i) = std::polar(1.0, -t * solver_.eigenvalues()(i));
    }
    return v * phases.asDiagonal() * v.adjoint();
  }

 private:
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver_;
};

std::vector<double> check_taus(std::span<const double> taus) {
  if (taus.empty()) throw ValidationError("bath: empty tau list");
  for (double t : taus) {
    if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("bath: tau must be positive");
  }
  return {taus.begin(), taus.end()};
}

PowerFit fit_positive(const std::vector<double>& taus, const std::vector<double>& loss) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (loss[i] > 0.0) {
      lx.push_back(std::log(taus[i]));
      ly.push_back(std::log(loss[i]));
    }
  }
  if (lx.size() < 2) return {std::nan(""), std::nan(""), 0.0};
  return fit_line(lx, ly);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

NoiseTrajectory synth_noise(const NoiseSpectrum& spec, double duration, double dt,
                            std::uint64_t seed) {
  spec.validate();
  if (!(dt > 0.0) || !(duration >= dt)) {
    throw ValidationError("synth_noise: need dt > 0 and duration >= dt");
  }
  const double nyquist = std::numbers::pi / dt;
  const double needed = resolvable_frequency(spec);
  if (std::isfinite(needed) && needed > nyquist && !spec.is_zero()) {
    throw ValidationError("synth_noise: dt too large; spectrum extends to " +
                          std::to_string(needed) + " rad/s beyond the Nyquist frequency " +
                          std::to_string(nyquist));
  }
  auto n = static_cast<std::size_t>(std::ceil(duration / dt));
  n += n % 2;
  if (n < 4) n = 4;

  NoiseTrajectory traj;
  traj.dt = dt;
  traj.seed = seed;
  traj.samples.assign(n, 0.0);
  if (spec.is_zero()) return traj;

  const double d_omega = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
  std::mt19937_64 rng(derive_seed(seed, 0));
  std::normal_distribution<double> gauss;

  FftwBuffers buf(n);
  for (std::size_t l = 0; l <= n / 2; ++l) {
    buf.spectrum[l][0] = 0.0;
    buf.spectrum[l][1] = 0.0;
  }
  for (std::size_t l = 1; l < n / 2; ++l) {
    const double sigma = std::sqrt(spec(static_cast<double>(l) * d_omega) * d_omega / std::numbers::pi);
    const double a = sigma * gauss(rng);
    const double b = sigma * gauss(rng);
    buf.spectrum[l][0] = a / 2.0;
    buf.spectrum[l][1] = -b / 2.0;
  }
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), buf.real, buf.spectrum, FFTW_ESTIMATE);
    fftw_destroy_plan(plan);
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), buf.spectrum, buf.real, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  std::copy(buf.real, buf.real + n, traj.samples.begin());
  return traj;
}

Periodogram periodogram(const NoiseTrajectory& trajectory) {
  const std::size_t n = trajectory.samples.size();
  if (n < 4) throw ValidationError("periodogram: trajectory too short");
  FftwBuffers buf(n);
  std::copy(trajectory.samples.begin(), trajectory.samples.end(), buf.real);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), buf.real, buf.spectrum, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  Periodogram p;
  const double d_omega = 2.0 * std::numbers::pi / (static_cast<double>(n) * trajectory.dt);
  for (std::size_t l = 1; l < n / 2; ++l) {
    const double re = buf.spectrum[l][0];
    const double im = buf.spectrum[l][1];
    p.omega.push_back(static_cast<double>(l) * d_omega);
    p.power.push_back((re * re + im * im) * trajectory.dt / static_cast<double>(n));
  }
  return p;
}

SpectralGrid spectral_grid(const NoiseSpectrum& spec, double tau, double min_interval,
                           double omega_max) {
  spec.validate();
  if (!(tau > 0.0)) throw ValidationError("spectral_grid: tau must be positive");
  const double a = spec.omega_ir;
  double b = omega_max > 0.0 ? omega_max : default_omega_max(spec, tau, min_interval);
  if (spec.has_hard_cutoff()) b = std::min(b, spec.omega_c);
  SpectralGrid grid;
  if (!(b > a)) return grid;

  using Rule = boost::math::quadrature::gauss<double, 12>;
  const auto cuts = panel_breakpoints(spec, a, b, std::numbers::pi / (2.0 * tau), 50000);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    const double half = 0.5 * (cuts[i + 1] - cuts[i]);
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x[k] == 0.0) {
        grid.omega.push_back(mid);
        grid.weight.push_back(half * w[k]);
        continue;
      }
      grid.omega.push_back(mid - half * x[k]);
      grid.weight.push_back(half * w[k]);
      grid.omega.push_back(mid + half * x[k]);
      grid.weight.push_back(half * w[k]);
    }
  }
  return grid;
}

double SinusoidNoise::value(double t) const {
  double acc = 0.0;
  for (std::size_t l = 0; l < omega.size(); ++l) {
    acc += a[l] * std::cos(omega[l] * t) + b[l] * std::sin(omega[l] * t);
  }
  return acc;
}

double SinusoidNoise::integral_against(const PulsePattern& pattern) const {
  double acc = 0.0;
  for (std::size_t l = 0; l < omega.size(); ++l) {
    const auto yt = y_tilde(pattern, omega[l] * pattern.tau());
    acc += a[l] * yt.real() + b[l] * yt.imag();
  }
  return acc;
}

SinusoidNoise draw_sinusoid_noise(const SpectralGrid& grid, const NoiseSpectrum& spec,
                                  std::uint64_t seed) {
  SinusoidNoise noise;
  noise.omega = grid.omega;
  noise.a.resize(grid.omega.size());
  noise.b.resize(grid.omega.size());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (std::size_t l = 0; l < grid.omega.size(); ++l) {
    const double sigma = std::sqrt(spec(grid.omega[l]) * grid.weight[l] / std::numbers::pi);
    noise.a[l] = sigma * gauss(rng);
    noise.b[l] = sigma * gauss(rng);
  }
  return noise;
}

McResult mc_coherence(const PulsePattern& pattern, const NoiseSpectrum& spec,
                      const McOptions& opts) {
  if (opts.n_traj < 100) throw ValidationError("mc_coherence: need at least 100 trajectories");
  spec.validate();
  McResult result;
  result.n_traj = opts.n_traj;
  if (spec.is_zero()) return result;

  const auto grid = spectral_grid(spec, pattern.tau(), pattern.min_interval(), opts.omega_max);
  result.n_frequencies = grid.omega.size();

  // Per-frequency transform of the propagator and the implied chi.
  std::vector<std::complex<double>> yt(grid.omega.size());
  std::vector<double> sigma(grid.omega.size());
  for (std::size_t l = 0; l < yt.size(); ++l) {
    yt[l] = y_tilde(pattern, grid.omega[l] * pattern.tau());
    sigma[l] = std::sqrt(spec(grid.omega[l]) * grid.weight[l] / std::numbers::pi);
    result.chi_grid += 0.5 * kPhaseConstant * kPhaseConstant * sigma[l] * sigma[l] * std::norm(yt[l]);
  }

  std::vector<double> phases(opts.n_traj);
  parallel_for(opts.n_traj, opts.threads, [&](std::size_t i) {
    std::mt19937_64 rng(derive_seed(opts.seed, i));
    std::normal_distribution<double> gauss;
    double integral = 0.0;
    for (std::size_t l = 0; l < yt.size(); ++l) {
      const double a = sigma[l] * gauss(rng);
      const double b = sigma[l] * gauss(rng);
      integral += a * yt[l].real() + b * yt[l].imag();
    }
    phases[i] = kPhaseConstant * integral;
  });

  auto coherence = [&](auto&& index_of) {
    double c = 0.0, s = 0.0;
    for (std::size_t i = 0; i < phases.size(); ++i) {
      const double phi = phases[index_of(i)];
      c += std::cos(phi);
      s += std::sin(phi);
    }
    const double n = static_cast<double>(phases.size());
    return std::hypot(c / n, s / n);
  };
  result.W = coherence([](std::size_t i) { return i; });

  if (opts.bootstrap >= 2) {
    std::mt19937_64 rng(derive_seed(opts.seed, 0xB0075774ULL));
    std::uniform_int_distribution<std::size_t> pick(0, phases.size() - 1);
    std::vector<std::size_t> idx(phases.size());
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t b = 0; b < opts.bootstrap; ++b) {
      for (auto& v : idx) v = pick(rng);
      const double w = coherence([&](std::size_t i) { return idx[i]; });
      sum += w;
      sum2 += w * w;
    }
    const double nb = static_cast<double>(opts.bootstrap);
    const double mean = sum / nb;
    result.stderr_W = std::sqrt(std::max(0.0, (sum2 - nb * mean * mean) / (nb - 1.0)));
  }
  return result;
}

bool is_hermitian(const Eigen::MatrixXcd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

BathModel BathModel::random(std::size_t d, std::uint64_t seed, double coupling_norm,
                            double hamiltonian_norm) {
  std::mt19937_64 rng(seed);
  BathModel bath;
  bath.coupling = random_hermitian(d, rng, coupling_norm);
  bath.hamiltonian = random_hermitian(d, rng, hamiltonian_norm);
  return bath;
}

double BathModel::coupling_norm() const { return spectral_norm(coupling); }
double BathModel::hamiltonian_norm() const { return spectral_norm(hamiltonian); }

void BathModel::validate() const {
  const auto d = coupling.rows();
  if (d < 1 || d > 16) throw ValidationError("bath: dimension must be in [1, 16]");
  if (hamiltonian.rows() != d || hamiltonian.cols() != d || coupling.cols() != d) {
    throw ValidationError("bath: B_z and H_B must be square of equal size");
  }
  if (!is_hermitian(coupling) || !is_hermitian(hamiltonian)) {
    throw ValidationError("bath: B_z and H_B must be Hermitian");
  }
}

BathSweep bath_fidelity(std::uint64_t n, const BathModel& bath, std::span<const double> taus) {
  bath.validate();
  BathSweep sweep;
  sweep.tau = check_taus(taus);
  const auto y = walsh(WalshIndex(n));
  const double segments = static_cast<double>(y.size());
  const double d = static_cast<double>(bath.dimension());

  // sigma_z (x) B + 1 (x) H_B is block diagonal: H_B + B on |0>, H_B - B on |1>.
  const HermitianPropagator up(bath.hamiltonian + bath.coupling);
  const HermitianPropagator down(bath.hamiltonian - bath.coupling);

  const double scale = std::max(bath.coupling_norm(), bath.hamiltonian_norm());
  for (double tau : sweep.tau) {
    if (scale * tau > 0.5) sweep.regime_warning = true;
    const double dt = tau / segments;
    const Eigen::MatrixXcd up_step = up(dt);
    const Eigen::MatrixXcd down_step = down(dt);
    Eigen::MatrixXcd u0 = Eigen::MatrixXcd::Identity(bath.dimension(), bath.dimension());
    Eigen::MatrixXcd u1 = u0;
    for (std::size_t k = 0; k < y.size(); ++k) {
      // Qubit |0> sees +y B, |1> sees -y B.
      if (y[k] > 0) {
        u0 = up_step * u0;
        u1 = down_step * u1;
      } else {
        u0 = down_step * u0;
        u1 = up_step * u1;
      }
    }
    // <-| rho_S |-> = ||(U0 - U1)/2||_F^2 / d
    sweep.loss.push_back(((u0 - u1) / 2.0).squaredNorm() / d);
  }
  sweep.fit = fit_positive(sweep.tau, sweep.loss);
  return sweep;
}

GenericBathModel GenericBathModel::random(std::size_t d, std::uint64_t seed,
                                          double coupling_norm, double hamiltonian_norm) {
  std::mt19937_64 rng(seed);
  GenericBathModel bath;
  for (auto& b : bath.coupling) b = random_hermitian(d, rng, coupling_norm);
  bath.hamiltonian = random_hermitian(d, rng, hamiltonian_norm);
  return bath;
}

void GenericBathModel::validate() const {
  const auto d = hamiltonian.rows();
  if (d < 1 || d > 16) throw ValidationError("bath: dimension must be in [1, 16]");
  if (!is_hermitian(hamiltonian)) throw ValidationError("bath: H_B must be Hermitian");
  for (const auto& b : coupling) {
    if (b.rows() != d || !is_hermitian(b)) {
      throw ValidationError("bath: couplings must be Hermitian and match H_B");
    }
  }
}

BathSweep generic_bath_fidelity(std::span<const std::array<int, 3>> segment_signs,
                                const GenericBathModel& bath, std::span<const double> taus) {
  bath.validate();
  if (segment_signs.empty()) throw ValidationError("bath: no segments");
  BathSweep sweep;
  sweep.tau = check_taus(taus);
  const auto d = bath.hamiltonian.rows();

  using C = std::complex<double>;
  const std::array<Eigen::Matrix2cd, 3> pauli = {
      (Eigen::Matrix2cd() << 0, 1, 1, 0).finished(),
      (Eigen::Matrix2cd() << 0, C(0, -1), C(0, 1), 0).finished(),
      (Eigen::Matrix2cd() << 1, 0, 0, -1).finished()};
  auto kron = [](const Eigen::Matrix2cd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(2 * b.rows(), 2 * b.cols());
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
    return out;
  };

  // One propagator per distinct sign triple.
  auto key = [](const std::array<int, 3>& s) {
    return ((s[0] > 0) ? 1 : 0) | ((s[1] > 0) ? 2 : 0) | ((s[2] > 0) ? 4 : 0);
  };
  std::array<std::unique_ptr<HermitianPropagator>, 8> props;
  for (const auto& s : segment_signs) {
    auto& p = props[key(s)];
    if (p) continue;
    Eigen::MatrixXcd h = kron(Eigen::Matrix2cd::Identity(), bath.hamiltonian);
    for (int i = 0; i < 3; ++i) h += static_cast<double>(s[i]) * kron(pauli[i], bath.coupling[i]);
    p = std::make_unique<HermitianPropagator>(h);
  }

  // Pauli eigenstates and their orthogonal partners.
  const double r = 1.0 / std::sqrt(2.0);
  const std::array<std::pair<Eigen::Vector2cd, Eigen::Vector2cd>, 6> states = {{
      {Eigen::Vector2cd(r, r), Eigen::Vector2cd(r, -r)},
      {Eigen::Vector2cd(r, -r), Eigen::Vector2cd(r, r)},
      {Eigen::Vector2cd(r, C(0, r)), Eigen::Vector2cd(r, C(0, -r))},
      {Eigen::Vector2cd(r, C(0, -r)), Eigen::Vector2cd(r, C(0, r))},
      {Eigen::Vector2cd(1, 0), Eigen::Vector2cd(0, 1)},
      {Eigen::Vector2cd(0, 1), Eigen::Vector2cd(1, 0)},
  }};

  const double segments = static_cast<double>(segment_signs.size());
  double scale = spectral_norm(bath.hamiltonian);
  for (const auto& b : bath.coupling) scale = std::max(scale, spectral_norm(b));

  for (double tau : sweep.tau) {
    if (scale * tau > 0.5) sweep.regime_warning = true;
    const double dt = tau / segments;
    std::array<Eigen::MatrixXcd, 8> steps;
    for (std::size_t k = 0; k < props.size(); ++k) {
      if (props[k]) steps[k] = (*props[k])(dt);
    }
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(2 * d, 2 * d);
    for (const auto& s : segment_signs) u = steps[key(s)] * u;

    double loss = 0.0;
    for (const auto& [psi, perp] : states) {
      // (<perp| (x) 1) U (|psi> (x) 1)
      Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(d, d);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          block += std::conj(perp(i)) * psi(j) * u.block(i * d, j * d, d, d);
        }
      }
      loss += block.squaredNorm() / static_cast<double>(d);
    }
    sweep.loss.push_back(loss / static_cast<double>(states.size()));
  }
  sweep.fit = fit_positive(sweep.tau, sweep.loss);
  return sweep;
}

}  // namespace wdd
