#include "wdd/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "wdd/errors.hpp"

namespace wdd {

PulsePattern::PulsePattern(double tau, std::vector<double> deltas)
    : tau_(tau), deltas_(std::move(deltas)) {
  if (!(tau_ > 0.0) || !std::isfinite(tau_)) {
    throw ValidationError("pulse pattern: tau must be positive and finite");
  }
  double prev = 0.0;
  for (double d : deltas_) {
    if (!(d > prev) || !(d < 1.0)) {
      throw ValidationError("pulse pattern: locations must increase strictly inside (0,1)");
    }
    prev = d;
  }
}

std::vector<double> PulsePattern::boundaries() const {
  std::vector<double> b;
  b.reserve(deltas_.size() + 2);
  b.push_back(0.0);
  b.insert(b.end(), deltas_.begin(), deltas_.end());
  b.push_back(1.0);
  return b;
}

double PulsePattern::min_interval() const {
  const auto b = boundaries();
  double gap = 1.0;
  for (std::size_t j = 1; j < b.size(); ++j) gap = std::min(gap, b[j] - b[j - 1]);
  return gap;
}

double DigitalSchedule::tau() const { return std::ldexp(tau_min, static_cast<int>(m)); }

PulsePattern DigitalSchedule::pattern() const {
  std::vector<double> deltas;
  deltas.reserve(ticks.size());
  for (auto t : ticks) deltas.push_back(std::ldexp(static_cast<double>(t), -static_cast<int>(m)));
  return PulsePattern(tau(), std::move(deltas));
}

DyadicFunction DigitalSchedule::propagator() const {
  std::vector<std::int8_t> signs(std::size_t{1} << m);
  std::int8_t s = 1;
  std::size_t next = 0;
  for (std::size_t k = 0; k < signs.size(); ++k) {
    if (next < ticks.size() && ticks[next] == k) {
      s = static_cast<std::int8_t>(-s);
      ++next;
    }
    signs[k] = s;
  }
  return DyadicFunction(m, std::move(signs));
}

bool DigitalSchedule::has_middle_pulse() const {
  if (m == 0) return false;
  const std::uint64_t mid = std::uint64_t{1} << (m - 1);
  return std::binary_search(ticks.begin(), ticks.end(), mid);
}

SequenceKind parse_sequence_kind(std::string_view name) {
  if (name == "PDD" || name == "pdd") return SequenceKind::PDD;
  if (name == "CPMG" || name == "cpmg") return SequenceKind::CPMG;
  if (name == "CDD" || name == "cdd") return SequenceKind::CDD;
  throw ValidationError("unknown sequence kind '" + std::string(name) + "'");
}

std::string to_string(SequenceKind kind) {
  switch (kind) {
    case SequenceKind::PDD: return "PDD";
    case SequenceKind::CPMG: return "CPMG";
    case SequenceKind::CDD: return "CDD";
  }
  return "?";
}

PulsePattern wdd_pattern(std::uint64_t n, double tau) {
  std::vector<double> deltas;
  for (const auto& p : switch_points(n)) deltas.push_back(p.value());
  return PulsePattern(tau, std::move(deltas));
}

WalshIndex named_index(SequenceKind kind, unsigned r) {
  if (r < 1) throw ValidationError("named_index: r must be at least 1");
  if (r > 29) throw ValidationError("named_index: r too large");
  const std::uint64_t p = std::uint64_t{1} << r;
  switch (kind) {
    case SequenceKind::PDD: return WalshIndex(p);
    case SequenceKind::CPMG: return WalshIndex(p / 2 + p);
    case SequenceKind::CDD: return WalshIndex(p - 1);
  }
  throw ValidationError("named_index: unknown kind");
}

std::uint64_t named_pulse_count(SequenceKind kind, unsigned r) {
  if (r < 1) throw ValidationError("named_pulse_count: r must be at least 1");
  const std::uint64_t p = std::uint64_t{1} << r;
  switch (kind) {
    case SequenceKind::PDD: return 2 * p - 1;
    case SequenceKind::CPMG: return p;
    case SequenceKind::CDD: return (2 * p - 2 + 2) / 3;  // ceil((2^(r+1)-2)/3)
  }
  return 0;
}

PulsePattern udd_pattern(unsigned s, double tau) {
  if (s < 1) throw ValidationError("udd_pattern: need at least one pulse");
  std::vector<double> deltas(s);
  for (unsigned j = 1; j <= s; ++j) {
    const double v = std::sin(j * std::numbers::pi / (2.0 * s + 2.0));
    deltas[j - 1] = v * v;
  }
  return PulsePattern(tau, std::move(deltas));
}

DyadicFunction build_by_recursion(std::uint64_t n, unsigned m) {
  const WalshIndex idx(n);
  const unsigned len = idx.bit_length();
  if (m < len) throw ValidationError("build_by_recursion: resolution too small");
  DyadicFunction y = DyadicFunction::constant(m - len);
  for (unsigned j = len; j >= 1; --j) y = y.doubled(idx.bit(j));
  return y;
}

DigitalSchedule schedule_from_propagator(const DyadicFunction& y, double tau) {
  if (!(tau > 0.0)) throw ValidationError("schedule: tau must be positive");
  DigitalSchedule sched;
  sched.m = y.resolution();
  sched.tau_min = std::ldexp(tau, -static_cast<int>(sched.m));
  sched.ticks = y.switch_ticks();

  // Recognise single Walsh functions through their transform.
  std::vector<double> samples(y.signs().begin(), y.signs().end());
  const auto a = walsh_transform(samples);
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (std::abs(a[n]) == 1.0) {
      sched.rademacher_bits = WalshIndex(n).set_bits();
      break;
    }
  }
  return sched;
}

DigitalSchedule compile_schedule(std::uint64_t n, unsigned m, double tau) {
  const WalshIndex idx(n);
  auto sched = schedule_from_propagator(walsh(idx, m), tau);
  sched.rademacher_bits = idx.set_bits();
  return sched;
}

DigitizeReport digitize(const PulsePattern& pattern, unsigned m) {
  if (m < 1 || m > 30) throw ValidationError("digitize: m must be in [1, 30]");
  const double scale = std::ldexp(1.0, static_cast<int>(m));
  const std::uint64_t last = (std::uint64_t{1} << m);

  DigitizeReport report;
  std::map<std::uint64_t, unsigned> hits;
  for (double d : pattern.deltas()) {
    const double x = d * scale;
    const auto tick = static_cast<std::uint64_t>(std::llround(x));
    report.rounding_error.push_back(x - static_cast<double>(tick));
    if (tick == 0 || tick == last) {
      ++report.dropped_at_boundary;
      continue;
    }
    ++hits[tick];
  }
  for (auto [tick, count] : hits) {
    if (count > 1) report.collision = true;
    if (count % 2 == 1) {
      report.schedule.ticks.push_back(tick);
    } else {
      report.cancelled_ticks.push_back(tick);
    }
  }
  report.schedule.m = m;
  report.schedule.tau_min = pattern.tau() / scale;

  const auto y = report.schedule.propagator();
  report.schedule.rademacher_bits = schedule_from_propagator(y, pattern.tau()).rademacher_bits;
  return report;
}

}  // namespace wdd
