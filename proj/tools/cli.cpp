#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wdd/dcg.hpp"
#include "wdd/errors.hpp"
#include "wdd/filter.hpp"
#include "wdd/gwdd.hpp"
#include "wdd/io.hpp"
#include "wdd/noise.hpp"
#include "wdd/parallel.hpp"
#include "wdd/search.hpp"
#include "wdd/sequences.hpp"
#include "wdd/simulate.hpp"
#include "wdd/walsh.hpp"

namespace wdd::cli {

namespace {

using Config = nlohmann::json;

struct Context {
  std::ostream& out;
  std::ostream& err;
  unsigned threads;
  const Config& config;

  void header() const { out << "# config: " << config.dump() << '\n'; }
  // JSON documents carry the config as their first member instead.
  Json document() const {
    Json j;
    j["config"] = Json::parse(config.dump());
    return j;
  }
};

void check_format(const std::string& format) {
  if (format != "csv" && format != "json") throw ValidationError("format must be csv or json");
}

// Noise spectrum given inline or as a JSON file; the file is folded into
// the inline fields so replays do not depend on it.
struct SpectrumArgs {
  std::string kind;
  double A = 0.0;
  double p = 0.0;
  double omega_c = 0.0;
  double omega_ir = 0.0;
  std::vector<double> omega;
  std::vector<double> S;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE_WITH_DEFAULT(SpectrumArgs, kind, A, p, omega_c, omega_ir, omega, S)

  std::string file;

  void add_options(CLI::App& app) {
    app.add_option("--spectrum", file, "Spectrum JSON file {kind, A, p, omega_c, omega_ir}");
    app.add_option("--noise", kind,
                   "Spectrum kind: power_law_gaussian_cutoff, white, ohmic, one_over_f");
    app.add_option("--A", A, "Spectrum amplitude");
    app.add_option("--p", p, "Power-law exponent");
    app.add_option("--omega-c", omega_c, "Cutoff frequency (rad/s)");
    app.add_option("--omega-ir", omega_ir, "Infrared cutoff (rad/s)");
  }

  void resolve() {
    if (!file.empty()) {
      const auto s = load_spectrum(file);
      kind = to_string(s.kind);
      A = s.amplitude;
      p = s.exponent;
      omega_c = s.omega_c;
      omega_ir = s.omega_ir;
      omega = s.table_omega;
      S = s.table_psd;
      file.clear();
    }
    if (kind.empty()) throw ValidationError("a noise spectrum is required (--spectrum or --noise)");
    spectrum();
  }

  NoiseSpectrum spectrum() const {
    NoiseSpectrum s;
    s.kind = parse_spectrum_kind(kind);
    s.amplitude = A;
    s.exponent = p;
    s.omega_c = omega_c;
    s.omega_ir = omega_ir;
    s.table_omega = omega;
    s.table_psd = S;
    s.validate();
    return s;
  }
};

// One pulse sequence: a Walsh index, a named family member or UDD.
struct PatternArgs {
  std::int64_t n = -1;
  std::string family;
  unsigned r = 0;
  unsigned udd = 0;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE_WITH_DEFAULT(PatternArgs, n, family, r, udd)

  void add_options(CLI::App& app) {
    app.add_option("--n", n, "Walsh index");
    app.add_option("--family", family, "Named sequence: pdd, cpmg, cdd (with --r)");
    app.add_option("--r", r, "Order of the named sequence");
    app.add_option("--udd", udd, "Uhrig sequence with this many pulses");
  }

  void resolve() {
    const int given = (n >= 0) + !family.empty() + (udd > 0);
    if (given != 1) throw ValidationError("give exactly one of --n, --family/--r, --udd");
    if (!family.empty()) {
      n = static_cast<std::int64_t>(named_index(parse_sequence_kind(family), r).value());
      family.clear();
      r = 0;
    }
  }

  std::optional<std::uint64_t> index() const {
    if (n >= 0) return static_cast<std::uint64_t>(n);
    return std::nullopt;
  }

  PulsePattern pattern(double tau) const {
    if (auto i = index()) return wdd_pattern(*i, tau);
    return udd_pattern(udd, tau);
  }
};

// Several Walsh indices, given directly or as named-family orders.
struct IndexListArgs {
  std::vector<std::uint64_t> n;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE_WITH_DEFAULT(IndexListArgs, n)

  std::string family;
  std::vector<unsigned> r;

  void add_options(CLI::App& app) {
    app.add_option("--n", n, "Walsh indices");
    app.add_option("--family", family, "Named sequence: pdd, cpmg, cdd");
    app.add_option("--r", r, "Orders of the named sequence");
  }

  void resolve() {
    if (!family.empty()) {
      const auto kind = parse_sequence_kind(family);
      for (unsigned order : r) n.push_back(named_index(kind, order).value());
      family.clear();
      r.clear();
    }
    if (n.empty()) throw ValidationError("no sequences given (--n or --family/--r)");
  }
};

// ---------------------------------------------------------------- commands

struct WalshCmd {
  static constexpr const char* name = "walsh";
  static constexpr const char* help = "Walsh function samples";
  std::uint64_t n = 0;
  unsigned m = 0;
  std::string format = "csv";
  NLOHMANN_DEFINE_TYPE_INTRUSIVE_WITH_DEFAULT(WalshCmd, n, m, format)

  void add_options(CLI::App& app) {
    app.add_option("--n", n, "Walsh index")->required();
    app.add_option("--m", m, "Resolution (2^m pieces); 0 picks the smallest");
    app.add_option("--format", format, "csv or json");
  }
  void resolve() {
    check_format(format);
    if (m == 0) m = std::max(1U, bit_length(n));
  }
  void run(const Context& ctx) const {
    const auto w = walsh(WalshIndex(n), m);
    if (format == "json") {
      auto j = ctx.document();
      j["n"] = n;
      j["m"] = m;
      j["signs"] = w.signs();
      j["string"] = w.to_string();
      Json points = Json::array();
      for (const auto& p : switch_points(n)) points.push_back(p.exact().get_str());
      j["switch_points"] = points;
      ctx.out << j.dump(2) << '\n';
      return;
    }
    ctx.header();
    CsvWriter csv(ctx.out);
    csv.header({"k", "x", "W"});
    const double step = std::ldexp(1.0, -static_cast<int>(m));
    for (std::size_t k = 0; k < w.size(); ++k) {
      csv.row({static_cast<double>(k), static_cast<double>(k) * step, static_cast<double>(w[k])});
    }
  }
};

struct SeqCmd {
  static constexpr const char* name = "seq";
  static constexpr const char* help = "Pulse locations and digital schedule of a sequence";
  PatternArgs sequence;
  double tau = 1.0;
  unsigned m = 0;
  std::string format = "json";
  NLOHMANN_DEFINE_TYPE_INTRUSIVE_WITH_DEFAULT(SeqCmd, sequence, tau, m, format)

  void add_options(CLI::App& app) {
    sequence.add_options(app);
    app.add_option("--tau", tau, "Sequence duration (s)");
    app.add_option("--m", m, "Clock resolution for the digital schedule; 0 picks the smallest");
    app.add_option("--format", format, "csv or json");
  }
  void resolve() {
    check_format(format);
    sequence.resolve();
    if (!(tau > 0.0)) throw ValidationError("--tau must be positive");
  }
  void run(const Context& ctx) const {
    const auto pattern = sequence.pattern(tau);
    std::optional<DigitalSchedule> schedule;
    std::vector<double> rounding;
    if (auto n = sequence.index()) {
      const unsigned mm = m == 0 ? std::max(1U, bit_length(*n)) : m;
      schedule = compile_schedule(*n, mm, tau);
    } else if (m > 0) {
      auto report = digitize(pattern, m);
      rounding = report.rounding_error;
      schedule = report.schedule;
    }
    if (format == "json") {
      auto j = ctx.document();
      j.update(pattern_json(pattern, sequence.index(), schedule ? &*schedule : nullptr));
      if (schedule) j["middle_pulse"] = schedule->has_middle_pulse();
      if (!rounding.empty()) j["rounding_error"] = rounding;
      ctx.out << j.dump(2) << '\n';
      return;
    }
    ctx.header();
    CsvWriter csv(ctx.out);
    if (schedule && schedule->ticks.size() == pattern.pulse_count()) {
      csv.header({"j", "delta", "tick"});
      for (std::size_t i = 0; i < pattern.pulse_count(); ++i) {
        csv.row({static_cast<double>(i + 1), pattern.deltas()[i],
                 static_cast<double>(schedule->ticks[i])});
      }
    } else {
      csv.header({"j", "delta"});
      for (std::size_t i = 0; i < pattern.pulse_count(); ++i) {
        csv.row({static_cast<double>(i + 1), pattern.deltas()[i]});
      }
    }
  }
};

struct FilterCmd {
  static constexpr const char* name = "filter";
  static constexpr const char* help = "Filter function on a grid of w tau";
  PatternArgs sequence;
  std::string grid = "log:1e-3:1e2:2048";
  bool log = false;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE_WITH_DEFAULT(FilterCmd, sequence, grid, log)

  void add_options(CLI::App& app) {
    sequence.add_options(app);
    app.add_option("--grid", grid, "log:lo:hi:N or lin:lo:hi:N");
    app.add_flag("--log", log, "Emit ln F instead of F");
  }
  void resolve() {
    sequence.resolve();
    parse_grid(grid);
  }
  void run(const Context& ctx) const {
    const auto xs = parse_grid(grid);
    const auto profile = sequence.index() ? filter_profile(*sequence.index(), xs, ctx.threads)
                                          : filter_profile(sequence.pattern(1.0), xs, ctx.threads);
    ctx.header();
    CsvWriter csv(ctx.out);
    csv.header({"omega_tau", log ? "logF" : "F"});
    for (std::size_t i = 0; i < xs.size(); ++i) {
      csv.row({xs[i], log ? profile.log_values[i] : profile.values[i]});
    }
  }
};

struct RolloffCmd {
  static constexpr const char* name = "rolloff";
  static constexpr const char* help = "Low-frequency power-law exponent of F";
  IndexListArgs sequences;
  double lo = 1e-4;
  double hi = 1e-3;
  std::size_t points = 32;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE_WITH_DEFAULT(RolloffCmd, sequences, lo, hi, points)

  void add_options(CLI::App& app) {
    sequences.add_options(app);
    app.add_option("--lo", lo, "Fit window start (w tau)");
    app.add_option("--hi", hi, "Fit window end (w tau)");
    app.add_option("--points", points, "Fit points");
  }
  void resolve() { sequences.resolve(); }
  void run(const Context& ctx) const {
    ctx.header();
    CsvWriter csv(ctx.out);
    csv.header({"n", "r", "s", "slope", "max_residual"});
    for (auto n : sequences.n) {
      const auto fit = rolloff_exponent(n, FitWindow{lo, hi, points});
      csv.row({static_cast<double>(n), static_cast<double>(hamming_weight(n)),
               static_cast<double>(sequency(n)), fit.slope, fit.max_residual});
    }
  }
};

struct BandwidthCmd {
  static constexpr const char* name = "bandwidth";
  static constexpr const char* help = "Largest w tau below which F <= 1";
  IndexListArgs sequences;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE_WITH_DEFAULT(BandwidthCmd, sequences)

  void add_options(CLI::App& app) { sequences.add_options(app); }
  void resolve() { sequences.resolve(); }
  void run(const Context& ctx) const {
    ctx.header();
    CsvWriter csv(ctx.out);
    csv.header({"n", "r", "s", "bandwidth"});
    for (auto n : sequences.n) {
      csv.row({static_cast<double>(n), static_cast<double>(hamming_weight(n)),
               static_cast<double>(sequency(n)), bandwidth(n)});
    }
  }
};

struct CoherenceCmd {
  static constexpr const char* name = "coherence";
  static constexpr const char* help = "Decoherence exponent chi and W = exp(-chi) against tau";
  IndexListArgs sequences;
  SpectrumArgs spectrum;
  std::string tau_grid = "log:1e-3:1e1:41";
  double omega_max = 0.0;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE_WITH_DEFAULT(CoherenceCmd, sequences, spectrum, tau_grid, omega_max)

  void add_options(CLI::App& app) {
    sequences.add_options(app);
    spectrum.add_options(app);
    app.add_option("--tau-grid", tau_grid, "Grid of sequence durations");
    app.add_option("--omega-max", omega_max, "Quadrature ceiling; 0 picks the default");
  }
  void resolve() {
    sequences.resolve();
    spectrum.resolve();
    parse_grid(tau_grid);
  }
  void run(const Context& ctx) const {
    const auto spec = spectrum.spectrum();
    const auto taus = parse_grid(tau_grid);
    QuadratureConfig cfg;
    cfg.omega_max = omega_max;
    std::vector<CoherenceResult> results(sequences.n.size() * taus.size());
    parallel_for(results.size(), ctx.threads, [&](std::size_t i) {
      results[i] = chi_wdd(sequences.n[i / taus.size()], taus[i % taus.size()], spec, cfg);
    });
    ctx.header();
    CsvWriter csv(ctx.out);
    csv.header({"n", "tau", "chi", "W"});
    for (std::size_t i = 0; i < results.size(); ++i) {
      csv.row({static_cast<double>(sequences.n[i / taus.size()]), taus[i % taus.size()],
               results[i].chi, results[i].W});
    }
  }
};

struct T2Cmd {
  static constexpr const char* name = "t2";
  static constexpr const char* help = "1/e coherence time (chi = 1)";
  IndexListArgs sequences;
  SpectrumArgs spectrum;
  double tau_guess = 0.0;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE_WITH_DEFAULT(T2Cmd, sequences, spectrum, tau_guess)

  void add_options(CLI::App& app) {
    sequences.add_options(app);
    spectrum.add_options(app);
    app.add_option("--tau-guess", tau_guess, "Starting point of the bracket search");
  }
  void resolve() {
    sequences.resolve();
    spectrum.resolve();
  }
  void run(const Context& ctx) const {
    const auto spec = spectrum.spectrum();
    T2Options opts;
    opts.tau_guess = tau_guess;
    std::vector<double> t2(sequences.n.size());
    parallel_for(t2.size(), ctx.threads,
                 [&](std::size_t i) { t2[i] = t2_time(sequences.n[i], spec, opts); });
    ctx.header();
    CsvWriter csv(ctx.out);
    csv.header({"n", "r", "T2"});
    for (std::size_t i = 0; i < t2.size(); ++i) {
      csv.row({static_cast<double>(sequences.n[i]), static_cast<double>(hamming_weight(sequences.n[i])),
               t2[i]});
    }
  }
};

struct McCmd {
  static constexpr const char* name = "mc";
  static constexpr const char* help = "Monte Carlo coherence under Gaussian dephasing noise";
  PatternArgs sequence;
  SpectrumArgs spectrum;
  std::string tau_grid = "lin:0.1:1:4";
  std::size_t n_traj = 10000;
  std::uint64_t seed = 0;
  double omega_max = 0.0;
  std::size_t bootstrap = 200;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE_WITH_DEFAULT(McCmd, sequence, spectrum, tau_grid, n_traj, seed,
                                              omega_max, bootstrap)

  void add_options(CLI::App& app) {
    sequence.add_options(app);
    spectrum.add_options(app);
    app.add_option("--tau-grid", tau_grid, "Grid of sequence durations");
    app.add_option("--n-traj", n_traj, "Trajectories per point");
    app.add_option("--seed", seed, "Random seed")->required();
    app.add_option("--omega-max", omega_max, "Highest noise frequency; 0 picks the default");
    app.add_option("--bootstrap", bootstrap, "Bootstrap resamples for the standard error");
  }
  void resolve() {
    sequence.resolve();
    spectrum.resolve();
    parse_grid(tau_grid);
  }
  void run(const Context& ctx) const {
    const auto spec = spectrum.spectrum();
    const auto taus = parse_grid(tau_grid);
    ctx.header();
    ctx.out << "# seed: " << seed << '\n';
    CsvWriter csv(ctx.out);
    csv.header({"tau", "W_mc", "stderr", "W_analytic"});
    for (std::size_t i = 0; i < taus.size(); ++i) {
      const auto pattern = sequence.pattern(taus[i]);
      McOptions opts;
      opts.n_traj = n_traj;
      opts.seed = derive_seed(seed, i);
      opts.threads = ctx.threads;
      opts.omega_max = omega_max;
      opts.bootstrap = bootstrap;
      const auto mc = mc_coherence(pattern, spec, opts);
      QuadratureConfig cfg;
      cfg.omega_max = omega_max;
      csv.row({taus[i], mc.W, mc.stderr_W, chi(pattern, spec, cfg).W});
    }
  }
};

struct BathCmd {
  static constexpr const char* name = "bath";
  static constexpr const char* help = "Exact qubit-plus-bath evolution under WDD_n";
  std::uint64_t n = 1;
  std::size_t d = 4;
  std::uint64_t seed = 0;
  double coupling_norm = 1.0;
  double bath_norm = 1.0;
  std::string tau_grid = "log:0.01:0.316:12";
  bool generic = false;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE_WITH_DEFAULT(BathCmd, n, d, seed, coupling_norm, bath_norm, tau_grid,
                                              generic)

  void add_options(CLI::App& app) {
    app.add_option("--n", n, "Walsh index");
    app.add_option("--d", d, "Bath dimension");
    app.add_option("--seed", seed, "Seed for the random bath")->required();
    app.add_option("--coupling-norm", coupling_norm, "Spectral norm of the coupling");
    app.add_option("--bath-norm", bath_norm, "Spectral norm of the bath Hamiltonian");
    app.add_option("--tau-grid", tau_grid, "Grid of sequence durations");
    app.add_flag("--generic", generic, "Three-axis coupling with the two-axis sequence");
  }
  void resolve() {
    parse_grid(tau_grid);
  }
  void run(const Context& ctx) const {
    const auto taus = parse_grid(tau_grid);
    BathSweep sweep;
    if (generic) {
      const auto bath = GenericBathModel::random(d, seed, coupling_norm, bath_norm);
      const auto signs = toggling_signs(gwdd_schedule(n, bit_length(n)));
      sweep = generic_bath_fidelity(signs, bath, taus);
    } else {
      sweep = bath_fidelity(n, BathModel::random(d, seed, coupling_norm, bath_norm), taus);
    }
    if (sweep.regime_warning) {
      ctx.err << "warning: norm * tau exceeds 0.5; outside the perturbative regime\n";
    }
    ctx.header();
    ctx.out << "# seed: " << seed << '\n';
    ctx.out << "# slope: " << format_double(sweep.fit.slope) << '\n';
    CsvWriter csv(ctx.out);
    csv.header({"tau", "fidelity_loss"});
    for (std::size_t i = 0; i < taus.size(); ++i) csv.row({sweep.tau[i], sweep.loss[i]});
  }
};

struct DcgCmd {
  static constexpr const char* name = "dcg";
  static constexpr const char* help = "Phase-flip gate: notch scaling or detuning robustness";
  std::string mode = "notch";
  unsigned r = 4;
  std::int64_t placement = -1;
  std::string offsets = "log:1e-4:1e-2:32";
  PatternArgs sequence;
  double delta = 0.0;
  double Omega = 1.0;
  double tau = 1.0;
  std::string sigma_grid = "log:1e-3:1:31";
  std::size_t nodes = 64;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE_WITH_DEFAULT(DcgCmd, mode, r, placement, offsets, sequence, delta,
                                              Omega, tau, sigma_grid, nodes)

  void add_options(CLI::App& app) {
    app.add_option("--mode", mode, "notch or robustness");
    app.add_option("--order", r, "Notch mode: WDD_(2^r - 1)");
    app.add_option("--placement", placement,
                   "Notch mode: delta tau / 2 pi = 2^placement (default r)");
    app.add_option("--offsets", offsets, "Notch mode: grid of Delta tau");
    sequence.add_options(app);
    app.add_option("--delta", delta, "Robustness mode: nominal detuning (rad/s)");
    app.add_option("--Omega", Omega, "Robustness mode: drive strength (rad/s)");
    app.add_option("--tau", tau, "Robustness mode: gate duration (s)");
    app.add_option("--sigma-grid", sigma_grid, "Robustness mode: detuning spreads");
    app.add_option("--nodes", nodes, "Gauss-Hermite nodes");
  }
  void resolve() {
    if (mode == "notch") {
      if (placement < 0) placement = r;
      parse_grid(offsets);
      sequence = PatternArgs{};
    } else if (mode == "robustness") {
      sequence.resolve();
      parse_grid(sigma_grid);
    } else {
      throw ValidationError("--mode must be notch or robustness");
    }
  }
  void run(const Context& ctx) const {
    ctx.header();
    CsvWriter csv(ctx.out);
    if (mode == "notch") {
      if (r < 1 || r > 20 || placement > 40) throw ValidationError("notch: r or placement out of range");
      const auto xs = parse_grid(offsets);
      const std::uint64_t n = (std::uint64_t{1} << r) - 1;
      const double delta_tau = std::ldexp(2.0 * std::numbers::pi, static_cast<int>(placement));
      const auto sweep = notch_sweep(n, delta_tau, xs);
      ctx.out << "# slope: " << format_double(sweep.fit.slope) << '\n';
      csv.header({"Delta_tau", "y_tilde_sq"});
      for (std::size_t i = 0; i < xs.size(); ++i) csv.row({sweep.delta_tau[i], sweep.y_tilde_sq[i]});
      return;
    }
    const auto pattern = sequence.pattern(tau);
    csv.header({"sigma", "expected_alpha_sq"});
    for (double sigma : parse_grid(sigma_grid)) {
      const GateErrorConfig cfg{delta, Omega, sigma, tau};
      csv.row({sigma, expected_alpha_sq(pattern, cfg, nodes)});
    }
  }
};

struct GwddCmd {
  static constexpr const char* name = "gwdd";
  static constexpr const char* help = "Two-axis schedule and its first-order residuals";
  std::uint64_t n = 3;
  unsigned m = 0;
  std::int64_t cdd_level = -1;
  std::string format = "json";
  NLOHMANN_DEFINE_TYPE_INTRUSIVE_WITH_DEFAULT(GwddCmd, n, m, cdd_level, format)

  void add_options(CLI::App& app) {
    app.add_option("--n", n, "Walsh index");
    app.add_option("--m", m, "Clock resolution; 0 picks the bit length of n");
    app.add_option("--cdd-level", cdd_level, "Build the concatenated sequence of this level instead");
    app.add_option("--format", format, "csv or json");
  }
  void resolve() {
    check_format(format);
    if (cdd_level < 0 && m == 0) m = bit_length(n);
  }
  void run(const Context& ctx) const {
    const auto s = cdd_level >= 0 ? generic_cdd(static_cast<unsigned>(cdd_level)) : gwdd_schedule(n, m);
    const auto res = first_order_residuals(s);
    if (format == "json") {
      auto j = ctx.document();
      j.update(to_json(s));
      j["residuals"] = {{"x", res[0]}, {"y", res[1]}, {"z", res[2]}};
      j["first_order_residual"] = std::max({res[0], res[1], res[2]});
      ctx.out << j.dump(2) << '\n';
      return;
    }
    ctx.header();
    ctx.out << "tick,axis\n";
    for (const auto& e : s.events) ctx.out << e.tick << ',' << axis_name(e.axis) << '\n';
  }
};

struct SearchCmd {
  static constexpr const char* name = "search";
  static constexpr const char* help = "Best WDD sequence at fixed tau, optionally against all digital patterns";
  unsigned m = 3;
  unsigned r_min = 0;
  double tau = 1.0;
  SpectrumArgs spectrum;
  bool oracle = false;
  double omega_max = 0.0;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE_WITH_DEFAULT(SearchCmd, m, r_min, tau, spectrum, oracle, omega_max)

  void add_options(CLI::App& app) {
    app.add_option("--m", m, "Clock resolution");
    app.add_option("--r-min", r_min, "Minimum Hamming weight");
    app.add_option("--tau", tau, "Sequence duration (s)");
    spectrum.add_options(app);
    app.add_flag("--oracle", oracle, "Also search all 2^(2^m) digital patterns (m <= 4)");
    app.add_option("--omega-max", omega_max, "Quadrature ceiling; 0 picks the default");
  }
  void resolve() { spectrum.resolve(); }
  void run(const Context& ctx) const {
    const auto spec = spectrum.spectrum();
    SearchOptions opts;
    opts.threads = ctx.threads;
    opts.quad.omega_max = omega_max;
    const auto report = oracle ? brute_force_digital(m, spec, tau, r_min, opts)
                               : best_wdd(m, spec, tau, r_min, opts);
    ctx.err << "search: " << format_double(report.seconds) << " s\n";
    auto j = ctx.document();
    j.update(to_json(report, spec));
    ctx.out << j.dump(2) << '\n';
  }
};

struct MomentsCmd {
  static constexpr const char* name = "moments";
  static constexpr const char* help = "Exact moments of W_n(x) x^k on [0,1]";
  std::uint64_t n_max = 63;
  std::int64_t k_max = -1;
  NLOHMANN_DEFINE_TYPE_INTRUSIVE_WITH_DEFAULT(MomentsCmd, n_max, k_max)

  void add_options(CLI::App& app) {
    app.add_option("--n-max", n_max, "Largest Walsh index");
    app.add_option("--k-max", k_max, "Largest power; -1 stops at the first nonzero moment");
  }
  void resolve() {
    if (n_max > 4095) throw ValidationError("--n-max must be at most 4095");
    if (k_max > 64) throw ValidationError("--k-max must be at most 64");
  }
  void run(const Context& ctx) const {
    ctx.header();
    ctx.out << "n,r,k,moment\n";
    for (std::uint64_t n = 0; n <= n_max; ++n) {
      const unsigned r = hamming_weight(n);
      const auto last = k_max < 0 ? static_cast<std::int64_t>(r) : k_max;
      for (std::int64_t k = 0; k <= last; ++k) {
        ctx.out << n << ',' << r << ',' << k << ',' << moment(n, static_cast<unsigned>(k)).get_str()
                << '\n';
      }
    }
  }
};

// ----------------------------------------------------------------- dispatch

class Command {
 public:
  virtual ~Command() = default;
  virtual std::string name() const = 0;
  virtual void attach(CLI::App& app) = 0;
  virtual bool selected() const = 0;
  virtual void load(const Config& j) = 0;
  virtual void resolve() = 0;
  virtual Config config() const = 0;
  virtual void run(const Context& ctx) const = 0;
};

template <typename P>
class CommandImpl final : public Command {
 public:
  std::string name() const override { return P::name; }
  void attach(CLI::App& app) override {
    sub_ = app.add_subcommand(P::name, P::help);
    params_.add_options(*sub_);
  }
  bool selected() const override { return sub_ && sub_->parsed(); }
  void load(const Config& j) override { params_ = j.get<P>(); }
  void resolve() override { params_.resolve(); }
  Config config() const override {
    Config j = params_;
    j["command"] = P::name;
    return j;
  }
  void run(const Context& ctx) const override { params_.run(ctx); }

 private:
  P params_;
  CLI::App* sub_ = nullptr;
};

std::vector<std::unique_ptr<Command>> make_commands() {
  std::vector<std::unique_ptr<Command>> c;
  c.push_back(std::make_unique<CommandImpl<WalshCmd>>());
  c.push_back(std::make_unique<CommandImpl<SeqCmd>>());
  c.push_back(std::make_unique<CommandImpl<FilterCmd>>());
  c.push_back(std::make_unique<CommandImpl<RolloffCmd>>());
  c.push_back(std::make_unique<CommandImpl<BandwidthCmd>>());
  c.push_back(std::make_unique<CommandImpl<CoherenceCmd>>());
  c.push_back(std::make_unique<CommandImpl<T2Cmd>>());
  c.push_back(std::make_unique<CommandImpl<McCmd>>());
  c.push_back(std::make_unique<CommandImpl<BathCmd>>());
  c.push_back(std::make_unique<CommandImpl<DcgCmd>>());
  c.push_back(std::make_unique<CommandImpl<GwddCmd>>());
  c.push_back(std::make_unique<CommandImpl<SearchCmd>>());
  c.push_back(std::make_unique<CommandImpl<MomentsCmd>>());
  return c;
}

// Accepts inline JSON, a file holding a "# config: " header line, or a
// JSON document whose "config" member is the config.
Config read_config(const std::string& arg) {
  std::string text = arg;
  if (arg.empty() || arg.front() != '{') {
    std::ifstream in(arg);
    if (!in) throw ValidationError("cannot open config '" + arg + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    text = buffer.str();
  }
  constexpr std::string_view prefix = "# config: ";
  if (text.rfind(prefix, 0) == 0) {
    text = text.substr(prefix.size(), text.find('\n') - prefix.size());
  }
  Config j = Config::parse(text);
  if (!j.contains("command") && j.contains("config")) j = j["config"];
  if (!j.is_object() || !j.contains("command") || !j["command"].is_string()) {
    throw ValidationError("config has no 'command'");
  }
  return j;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Walsh dynamical decoupling: filters, coherence, simulation and search"};
  app.name("wdd");
  app.fallthrough();
  std::string config_arg;
  std::string out_path;
  unsigned threads = default_threads();
  app.add_option("--config", config_arg, "Replay a recorded config (JSON, header line or output file)");
  app.add_option("--out", out_path, "Write output to this file instead of stdout");
  app.add_option("--threads", threads, "Worker threads (default: WDD_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  auto commands = make_commands();
  for (auto& c : commands) c->attach(app);
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: ValidationError: " << e.what() << '\n';
    return 2;
  }

  try {
    Command* command = nullptr;
    if (!config_arg.empty()) {
      const auto j = read_config(config_arg);
      for (auto& c : commands) {
        if (c->name() == j["command"].get<std::string>()) command = c.get();
      }
      if (!command) throw ValidationError("unknown command in config");
      command->load(j);
    } else {
      for (auto& c : commands) {
        if (c->selected()) command = c.get();
      }
      if (!command) throw ValidationError("no subcommand given; see --help");
    }
    command->resolve();
    const Config cfg = command->config();

    std::ofstream file;
    if (!out_path.empty()) {
      file.open(out_path);
      if (!file) throw ValidationError("cannot write '" + out_path + "'");
    }
    std::ostringstream buffer;
    command->run(Context{buffer, err, threads, cfg});
    (out_path.empty() ? out : file) << buffer.str();
    return 0;
  } catch (const ValidationError& e) {
    err << "error: ValidationError: " << e.what() << '\n';
    return 2;
  } catch (const DivergenceError& e) {
    err << "error: DivergenceError: " << e.what() << '\n';
    return 3;
  } catch (const NoBracketError& e) {
    err << "error: NoBracketError: " << e.what() << '\n';
    return 3;
  } catch (const NumericalError& e) {
    err << "error: NumericalError: " << e.what() << '\n';
    return 3;
  } catch (const nlohmann::json::exception& e) {
    err << "error: ValidationError: malformed config: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace wdd::cli
