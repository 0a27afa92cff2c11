#include "wdd/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "wdd/errors.hpp"

namespace wdd {

namespace {

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ValidationError("grid: bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double number_field(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ValidationError(std::string("spectrum: '") + key + "' must be a number");
  return j[key].get<double>();
}

}  // namespace

std::vector<double> parse_grid(std::string_view spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 4 || (parts[0] != "log" && parts[0] != "lin")) {
    throw ValidationError("grid: expected log:lo:hi:N or lin:lo:hi:N, got '" + std::string(spec) + "'");
  }
  const double lo = parse_number(parts[1], "lower bound");
  const double hi = parse_number(parts[2], "upper bound");
  const double count = parse_number(parts[3], "point count");
  if (count < 2 || count != std::floor(count) || count > 1e8) {
    throw ValidationError("grid: N must be an integer in [2, 1e8]");
  }
  if (!(hi > lo)) throw ValidationError("grid: need lo < hi");
  const bool log = parts[0] == "log";
  if (log && !(lo > 0.0)) throw ValidationError("grid: log grid needs lo > 0");
  const auto n = static_cast<std::size_t>(count);
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    xs[i] = log ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo);
  }
  xs.front() = lo;
  xs.back() = hi;
  return xs;
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

void CsvWriter::comment(std::string_view text) { out_ << "# " << text << '\n'; }

void CsvWriter::header(const std::vector<std::string>& columns) {
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
  out_ << '\n';
}

NoiseSpectrum spectrum_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("spectrum: expected a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string()) throw ValidationError("spectrum: missing 'kind'");
  NoiseSpectrum s;
  s.kind = parse_spectrum_kind(j["kind"].get<std::string>());
  s.amplitude = number_field(j, "A", 0.0);
  s.exponent = number_field(j, "p", 0.0);
  s.omega_c = number_field(j, "omega_c", 0.0);
  s.omega_ir = number_field(j, "omega_ir", 0.0);
  if (s.kind == SpectrumKind::Tabulated) {
    if (!j.contains("omega") || !j.contains("S")) {
      throw ValidationError("tabulated spectrum: need 'omega' and 'S' arrays");
    }
    try {
      s.table_omega = j["omega"].get<std::vector<double>>();
      s.table_psd = j["S"].get<std::vector<double>>();
    } catch (const nlohmann::json::exception&) {
      throw ValidationError("tabulated spectrum: 'omega' and 'S' must be numeric arrays");
    }
  }
  s.validate();
  return s;
}

Json to_json(const NoiseSpectrum& spec) {
  Json j;
  j["kind"] = to_string(spec.kind);
  j["A"] = spec.amplitude;
  j["p"] = spec.exponent;
  j["omega_c"] = spec.omega_c;
  j["omega_ir"] = spec.omega_ir;
  if (spec.kind == SpectrumKind::Tabulated) {
    j["omega"] = spec.table_omega;
    j["S"] = spec.table_psd;
  }
  return j;
}

NoiseSpectrum load_spectrum(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open spectrum file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("spectrum file '" + path + "': " + e.what());
  }
  return spectrum_from_json(j);
}

Json pattern_json(const PulsePattern& pattern, std::optional<std::uint64_t> n,
                  const DigitalSchedule* schedule) {
  Json j;
  if (n) j["n"] = *n;
  j["tau"] = pattern.tau();
  j["deltas"] = pattern.deltas();
  if (schedule) {
    j["ticks"] = schedule->ticks;
    j["m"] = schedule->m;
  }
  if (n) {
    j["r"] = hamming_weight(*n);
    j["s"] = sequency(*n);
  }
  return j;
}

Json to_json(const AxisSchedule& schedule) {
  Json j;
  j["m"] = schedule.m;
  j["x_bits"] = schedule.x_bits;
  j["y_bits"] = schedule.y_bits;
  Json events = Json::array();
  for (const auto& e : schedule.events) {
    events.push_back({{"tick", e.tick}, {"axis", std::string(1, axis_name(e.axis))}});
  }
  j["events"] = events;
  return j;
}

Json to_json(const SearchReport& r, const NoiseSpectrum& spec) {
  Json j;
  j["m"] = r.m;
  j["r_min"] = r.r_min;
  j["tau"] = r.tau;
  j["spectrum"] = to_json(spec);
  j["candidates"] = r.candidates;
  j["skipped"] = r.skipped;
  j["best_n"] = r.best_n;
  j["best_chi"] = r.best_chi;
  j["ties"] = r.ties;
  Json table = Json::array();
  for (std::size_t i = 0; i < r.wdd_index.size(); ++i) {
    Json row{{"n", r.wdd_index[i]}};
    if (std::isnan(r.wdd_chi[i])) {
      row["chi"] = nullptr;
    } else {
      row["chi"] = r.wdd_chi[i];
    }
    table.push_back(row);
  }
  j["wdd"] = table;
  if (r.oracle_run) {
    j["oracle_candidates"] = r.oracle_candidates;
    j["oracle_skipped"] = r.oracle_skipped;
    j["oracle_best_chi"] = r.oracle_best_chi;
    j["oracle_pattern_ticks"] = r.oracle_pattern_ticks;
    j["oracle_ties"] = r.oracle_ties;
    j["wdd_is_global_opt"] = r.wdd_is_global_opt;
  } else {
    j["oracle_best_chi"] = nullptr;
    j["oracle_pattern_ticks"] = Json::array();
    j["wdd_is_global_opt"] = nullptr;
  }
  return j;
}

}  // namespace wdd
