#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wdd/gwdd.hpp"
#include "wdd/noise.hpp"
#include "wdd/search.hpp"
#include "wdd/sequences.hpp"

namespace wdd {

using Json = nlohmann::ordered_json;

// "log:lo:hi:N" (geometric) or "lin:lo:hi:N" (uniform), endpoints included.
std::vector<double> parse_grid(std::string_view spec);

// Shortest text that reads back to the same double (17 significant digits).
std::string format_double(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void comment(std::string_view text);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);

 private:
  std::ostream& out_;
};

NoiseSpectrum spectrum_from_json(const Json& j);
Json to_json(const NoiseSpectrum& spec);
NoiseSpectrum load_spectrum(const std::string& path);

// {n, tau, deltas[], ticks[], m, r, s}; n, ticks, m, r, s are omitted for
// patterns that are not a Walsh sequence.
Json pattern_json(const PulsePattern& pattern, std::optional<std::uint64_t> n = std::nullopt,
                  const DigitalSchedule* schedule = nullptr);
Json to_json(const AxisSchedule& schedule);
Json to_json(const SearchReport& report, const NoiseSpectrum& spec);

}  // namespace wdd
