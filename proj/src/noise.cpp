#include "wdd/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "wdd/errors.hpp"
#include "wdd/filter.hpp"

namespace wdd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double finite_positive(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0) {
    throw ValidationError(std::string("spectrum: ") + what + " must be finite and >= 0");
  }
  return v;
}

}  // namespace

SpectrumKind parse_spectrum_kind(std::string_view name) {
  if (name == "power_law_gaussian_cutoff") return SpectrumKind::PowerLawGaussianCutoff;
  if (name == "white") return SpectrumKind::White;
  if (name == "ohmic") return SpectrumKind::Ohmic;
  if (name == "one_over_f") return SpectrumKind::OneOverF;
  if (name == "tabulated") return SpectrumKind::Tabulated;
  throw ValidationError("unknown spectrum kind '" + std::string(name) + "'");
}

std::string to_string(SpectrumKind kind) {
  switch (kind) {
    case SpectrumKind::PowerLawGaussianCutoff: return "power_law_gaussian_cutoff";
    case SpectrumKind::White: return "white";
    case SpectrumKind::Ohmic: return "ohmic";
    case SpectrumKind::OneOverF: return "one_over_f";
    case SpectrumKind::Tabulated: return "tabulated";
  }
  return "?";
}

NoiseSpectrum NoiseSpectrum::white(double amplitude, double omega_c) {
  NoiseSpectrum s;
  s.kind = SpectrumKind::White;
  s.amplitude = amplitude;
  s.omega_c = omega_c;
  s.validate();
  return s;
}

NoiseSpectrum NoiseSpectrum::power_law(double amplitude, double p, double omega_c,
                                       double omega_ir) {
  NoiseSpectrum s;
  s.kind = SpectrumKind::PowerLawGaussianCutoff;
  s.amplitude = amplitude;
  s.exponent = p;
  s.omega_c = omega_c;
  s.omega_ir = omega_ir;
  s.validate();
  return s;
}

void NoiseSpectrum::validate() const {
  finite_positive(amplitude, "A");
  finite_positive(omega_c, "omega_c");
  finite_positive(omega_ir, "omega_ir");
  if (!std::isfinite(exponent)) throw ValidationError("spectrum: p must be finite");
  switch (kind) {
    case SpectrumKind::PowerLawGaussianCutoff:
    case SpectrumKind::Ohmic:
      if (!(omega_c > 0.0)) throw ValidationError("spectrum: this kind needs omega_c > 0");
      break;
    case SpectrumKind::Tabulated: {
      if (table_omega.size() != table_psd.size() || table_omega.size() < 2) {
        throw ValidationError("tabulated spectrum: need at least two (omega, S) pairs");
      }
      for (std::size_t i = 0; i < table_omega.size(); ++i) {
        if (!(table_psd[i] >= 0.0) || !std::isfinite(table_psd[i])) {
          throw ValidationError("tabulated spectrum: S must be finite and nonnegative");
        }
        if (!(table_omega[i] >= 0.0) || (i > 0 && !(table_omega[i] > table_omega[i - 1]))) {
          throw ValidationError("tabulated spectrum: omega grid must increase");
        }
      }
      break;
    }
    default: break;
  }
  if (omega_c > 0.0 && omega_ir >= omega_c) {
    throw ValidationError("spectrum: omega_ir must lie below omega_c");
  }
}

double NoiseSpectrum::log_eval(double omega) const {
  if (omega < 0.0 || std::isnan(omega)) throw ValidationError("spectrum: negative frequency");
  if (omega < omega_ir) return kNegInf;
  if (kind != SpectrumKind::Tabulated && amplitude == 0.0) return kNegInf;
  const double la = std::log(amplitude);
  switch (kind) {
    case SpectrumKind::PowerLawGaussianCutoff: {
      const double x = omega / omega_c;
      return la - exponent * std::log(omega) - x * x;
    }
    case SpectrumKind::White:
      if (omega_c > 0.0 && omega > omega_c) return kNegInf;
      return la;
    case SpectrumKind::Ohmic:
      return la + std::log(omega) - omega / omega_c;
    case SpectrumKind::OneOverF:
      if (omega_c > 0.0 && omega > omega_c) return kNegInf;
      return la - std::log(omega);
    case SpectrumKind::Tabulated: {
      const double v = (*this)(omega);
      return v > 0.0 ? std::log(v) : kNegInf;
    }
  }
  return kNegInf;
}

double NoiseSpectrum::operator()(double omega) const {
  if (omega < 0.0 || std::isnan(omega)) throw ValidationError("spectrum: negative frequency");
  if (omega < omega_ir) return 0.0;
  if (kind != SpectrumKind::Tabulated) return std::exp(log_eval(omega));

  const auto& xs = table_omega;
  const auto& ys = table_psd;
  if (omega <= xs.front()) return ys.front();
  if (omega > xs.back()) return 0.0;
  const auto it = std::upper_bound(xs.begin(), xs.end(), omega);
  const std::size_t i = static_cast<std::size_t>(it - xs.begin());
  const double t = (omega - xs[i - 1]) / (xs[i] - xs[i - 1]);
  if (ys[i - 1] > 0.0 && ys[i] > 0.0) {
    return std::exp((1 - t) * std::log(ys[i - 1]) + t * std::log(ys[i]));
  }
  return (1 - t) * ys[i - 1] + t * ys[i];
}

bool NoiseSpectrum::is_zero() const {
  if (kind == SpectrumKind::Tabulated) {
    return std::all_of(table_psd.begin(), table_psd.end(), [](double v) { return v == 0.0; });
  }
  return amplitude == 0.0;
}

double NoiseSpectrum::infrared_exponent() const {
  switch (kind) {
    case SpectrumKind::PowerLawGaussianCutoff: return exponent;
    case SpectrumKind::Ohmic: return -1.0;
    case SpectrumKind::OneOverF: return 1.0;
    default: return 0.0;
  }
}

bool NoiseSpectrum::has_hard_cutoff() const {
  return (kind == SpectrumKind::White || kind == SpectrumKind::OneOverF) && omega_c > 0.0;
}

bool NoiseSpectrum::unbounded() const {
  return (kind == SpectrumKind::White || kind == SpectrumKind::OneOverF) && omega_c == 0.0;
}

double NoiseSpectrum::tail_over_omega_sq(double omega) const {
  if (!unbounded() || amplitude == 0.0) return 0.0;
  if (kind == SpectrumKind::White) return amplitude / omega;
  return amplitude / (2.0 * omega * omega);
}

double NoiseSpectrum::effective_cutoff() const {
  switch (kind) {
    case SpectrumKind::PowerLawGaussianCutoff: return omega_c;
    case SpectrumKind::Ohmic: return 4.0 * omega_c;
    case SpectrumKind::White:
    case SpectrumKind::OneOverF:
      return omega_c > 0.0 ? omega_c : std::numeric_limits<double>::infinity();
    case SpectrumKind::Tabulated: return table_omega.back();
  }
  return 0.0;
}

unsigned low_frequency_order(const PulsePattern& pattern) {
  const auto b = pattern.boundaries();
  const unsigned max_order = static_cast<unsigned>(pattern.pulse_count());
  for (unsigned k = 0; k <= max_order; ++k) {
    long double mu = 0;
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
      const long double piece = (std::pow(static_cast<long double>(b[j + 1]), k + 1) -
                                 std::pow(static_cast<long double>(b[j]), k + 1)) /
                                (k + 1);
      mu += (j % 2 == 0) ? piece : -piece;
    }
    if (std::abs(mu) > 1e-12L) return k;
  }
  return max_order;
}

double mean_filter(const PulsePattern& pattern) {
  return 2.0 + 4.0 * static_cast<double>(pattern.pulse_count());
}

double default_omega_max(const NoiseSpectrum& spec, double tau, double min_interval) {
  const double natural = 2.0 * std::numbers::pi / (tau * min_interval);
  const double cutoff = spec.effective_cutoff();
  return 10.0 * (std::isfinite(cutoff) ? std::max(cutoff, natural) : natural);
}

std::vector<double> panel_breakpoints(const NoiseSpectrum& spec, double a, double b,
                                      double panel_width, std::size_t max_panels) {
  std::vector<double> cuts{a, b};
  double h = panel_width;
  if ((b - a) / h > static_cast<double>(max_panels)) h = (b - a) / static_cast<double>(max_panels);
  const auto panels = static_cast<std::size_t>(std::ceil((b - a) / h));
  for (std::size_t i = 1; i < panels; ++i) cuts.push_back(a + static_cast<double>(i) * h);
  if (spec.omega_c > 0.0) {
    for (double f : {0.125, 0.5, 1.0, 2.0, 4.0}) cuts.push_back(f * spec.omega_c);
  }
  if (a == 0.0) {
    for (double f : {1e-6, 1e-4, 1e-2}) cuts.push_back(f * std::min(h, b));
  }
  if (spec.kind == SpectrumKind::Tabulated && spec.table_omega.size() <= 1000) {
    cuts.insert(cuts.end(), spec.table_omega.begin(), spec.table_omega.end());
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [&](double x) { return x < a || x > b; }),
             cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

KernelIntegral integrate_kernel(const std::function<double(double theta)>& kernel, double tau,
                                double min_interval, const NoiseSpectrum& spec,
                                const QuadratureConfig& cfg,
                                const std::function<double(double theta)>& envelope) {
  spec.validate();
  KernelIntegral out;
  if (spec.is_zero()) return out;

  const double a = spec.omega_ir;
  double b = cfg.omega_max > 0.0 ? cfg.omega_max : default_omega_max(spec, tau, min_interval);
  if (spec.has_hard_cutoff()) b = std::min(b, spec.omega_c);
  if (!(b > a)) return out;

  const double tau2 = tau * tau;
  auto weighted = [&](double omega, double g) -> double {
    if (!(omega > 0.0) || g == 0.0) return 0.0;
    const double ls = spec.log_eval(omega);
    if (ls == kNegInf) return 0.0;
    const double v = std::exp(ls + std::log(std::abs(g) * tau2));
    return (g < 0.0 ? -v : v) / std::numbers::pi;
  };
  auto integrand = [&](double omega) { return weighted(omega, kernel(omega * tau)); };
  auto magnitude = [&](double omega) {
    return envelope ? weighted(omega, std::abs(envelope(omega * tau))) : std::abs(integrand(omega));
  };

  const auto cuts = panel_breakpoints(spec, a, b, std::numbers::pi / tau, cfg.max_panels);

  // Coarse pass sets the scale; each panel then gets an equal share of an
  // absolute error budget, so panels that cancel or are negligible stop early.
  using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  boost::math::quadrature::tanh_sinh<double> ts(10);
  const std::size_t panels = cuts.size() - 1;
  std::vector<double> coarse(panels), coarse_err(panels);
  double scale = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    if (i == 0 && cuts[0] == 0.0) {
      coarse[i] = ts.integrate(integrand, cuts[0], cuts[1], cfg.rel_tol, &coarse_err[i]);
      scale += ts.integrate(magnitude, cuts[0], cuts[1], cfg.rel_tol);
    } else {
      coarse[i] = Rule::integrate(integrand, cuts[i], cuts[i + 1], 0, 0.0, &coarse_err[i]);
      scale += Rule::integrate(magnitude, cuts[i], cuts[i + 1], 0, 0.0);
    }
  }
  const double budget = cfg.rel_tol * scale / static_cast<double>(panels);
  std::function<double(double, double, double, double, double, int)> refine =
      [&](double lo, double hi, double estimate, double err, double tol, int depth) {
        if (!(err > tol) || depth >= 12) {
          out.error += err;
          return estimate;
        }
        const double mid = 0.5 * (lo + hi);
        double e1 = 0.0, e2 = 0.0;
        const double v1 = Rule::integrate(integrand, lo, mid, 0, 0.0, &e1);
        const double v2 = Rule::integrate(integrand, mid, hi, 0, 0.0, &e2);
        return refine(lo, mid, v1, e1, tol / 2, depth + 1) +
               refine(mid, hi, v2, e2, tol / 2, depth + 1);
      };
  for (std::size_t i = 0; i < panels; ++i) {
    if (i == 0 && cuts[0] == 0.0) {
      out.value += coarse[i];
      out.error += coarse_err[i];
      continue;
    }
    out.value += refine(cuts[i], cuts[i + 1], coarse[i], coarse_err[i], budget, 0);
  }
  if (!std::isfinite(out.value)) {
    throw NumericalError("coherence integral did not converge");
  }
  out.error = std::max(out.error, cfg.abs_tol * 1e-3);
  return out;
}

namespace {

CoherenceResult finish(double chi_value, double err) {
  CoherenceResult r;
  r.chi = std::max(0.0, chi_value);
  r.W = std::exp(-r.chi);
  r.error = -std::expm1(-r.chi);
  r.quad_error = err;
  return r;
}

void check_infrared(const NoiseSpectrum& spec, unsigned alpha) {
  if (spec.is_zero() || spec.omega_ir > 0.0) return;
  const double q = spec.infrared_exponent();
  if (q >= 2.0 * alpha + 1.0) {
    throw DivergenceError("infrared divergence: S(w) ~ w^-" + std::to_string(q) +
                          " against a filter with low-frequency order " + std::to_string(alpha) +
                          "; set omega_ir > 0 or use a higher-order sequence");
  }
}

CoherenceResult chi_impl(const std::function<double(double)>& kernel, double tau,
                         double min_interval, unsigned alpha, double mean_f,
                         const NoiseSpectrum& spec, const QuadratureConfig& cfg) {
  spec.validate();
  check_infrared(spec, alpha);
  const double omega_max =
      cfg.omega_max > 0.0 ? cfg.omega_max : default_omega_max(spec, tau, min_interval);
  QuadratureConfig local = cfg;
  local.omega_max = omega_max;
  const auto integral = integrate_kernel(kernel, tau, min_interval, spec, local);
  double value = integral.value;
  if (cfg.tail_correction && spec.unbounded()) {
    value += mean_f * spec.tail_over_omega_sq(omega_max) / std::numbers::pi;
  }
  auto r = finish(value, integral.error);
  r.omega_max = omega_max;
  return r;
}

}  // namespace

CoherenceResult chi(const PulsePattern& pattern, const NoiseSpectrum& spec,
                    const QuadratureConfig& cfg) {
  auto kernel = [&pattern](double theta) { return std::norm(normalized_transform(pattern, theta)); };
  return chi_impl(kernel, pattern.tau(), pattern.min_interval(), low_frequency_order(pattern),
                  mean_filter(pattern), spec, cfg);
}

CoherenceResult chi_wdd(std::uint64_t n, double tau, const NoiseSpectrum& spec,
                        const QuadratureConfig& cfg) {
  if (!(tau > 0.0)) throw ValidationError("chi: tau must be positive");
  const WalshIndex idx(n);
  auto kernel = [n](double theta) { return std::norm(wdd_transform(n, theta)); };
  const double min_interval = std::ldexp(1.0, -static_cast<int>(idx.bit_length()));
  const double mean_f = 2.0 + 4.0 * static_cast<double>(idx.sequency());
  return chi_impl(kernel, tau, min_interval, idx.hamming_weight(), mean_f, spec, cfg);
}

double t2_time(std::uint64_t n, const NoiseSpectrum& spec, const T2Options& opts) {
  spec.validate();
  if (spec.is_zero()) throw NoBracketError("t2: spectrum is identically zero; chi never reaches 1");
  double tau = opts.tau_guess;
  if (!(tau > 0.0)) {
    tau = spec.omega_c > 0.0 ? 1.0 / spec.omega_c : (spec.amplitude > 0.0 ? 1.0 / spec.amplitude : 1.0);
  }
  tau = std::clamp(tau, opts.tau_lo, opts.tau_hi);
  auto chi_at = [&](double t) { return chi_wdd(n, t, spec, opts.quad).chi; };

  double lo = 0.0, hi = 0.0;
  if (chi_at(tau) < 1.0) {
    lo = tau;
    do {
      lo = tau;
      tau *= 2.0;
      if (tau > opts.tau_hi) {
        throw NoBracketError("t2: chi stays below 1 up to tau = " + std::to_string(opts.tau_hi));
      }
    } while (chi_at(tau) < 1.0);
    hi = tau;
  } else {
    hi = tau;
    do {
      hi = tau;
      tau /= 2.0;
      if (tau < opts.tau_lo) {
        throw NoBracketError("t2: chi exceeds 1 down to tau = " + std::to_string(opts.tau_lo));
      }
    } while (chi_at(tau) >= 1.0);
    lo = tau;
  }
  while (hi / lo - 1.0 > opts.rel_tol) {
    const double mid = std::sqrt(lo * hi);
    if (chi_at(mid) < 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::sqrt(lo * hi);
}

}  // namespace wdd
