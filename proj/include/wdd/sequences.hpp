#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wdd/walsh.hpp"

namespace wdd {

// Normalized pi-pulse locations 0 < delta_1 < ... < delta_s < 1 of a
// sequence of total duration tau. An empty pattern is free evolution.
class PulsePattern {
 public:
  PulsePattern(double tau, std::vector<double> deltas);
  static PulsePattern free_evolution(double tau) { return PulsePattern(tau, {}); }

  double tau() const { return tau_; }
  const std::vector<double>& deltas() const { return deltas_; }
  std::size_t pulse_count() const { return deltas_.size(); }

  // Piece boundaries 0, delta_1, ..., delta_s, 1.
  std::vector<double> boundaries() const;
  // Shortest free-evolution interval, normalized.
  double min_interval() const;
  PulsePattern with_tau(double tau) const { return PulsePattern(tau, deltas_); }

 private:
  double tau_;
  std::vector<double> deltas_;
};

// Pulse times on a clock of 2^m ticks per sequence (tau_min = tau / 2^m).
struct DigitalSchedule {
  unsigned m = 0;
  double tau_min = 0.0;
  std::vector<std::uint64_t> ticks;
  // Rademacher generators feeding the propagator; empty if it is not a
  // single Walsh function.
  std::vector<unsigned> rademacher_bits;

  double tau() const;
  PulsePattern pattern() const;
  DyadicFunction propagator() const;
  bool has_middle_pulse() const;
};

struct DigitizeReport {
  DigitalSchedule schedule;
  // delta_j 2^m - tick_j for every input pulse, in units of tau_min.
  std::vector<double> rounding_error;
  // Ticks where an even number of pulses landed and cancelled.
  std::vector<std::uint64_t> cancelled_ticks;
  bool collision = false;
  // Pulses rounded onto t = 0 or t = tau; these only flip the global sign.
  std::size_t dropped_at_boundary = 0;
};

enum class SequenceKind { PDD, CPMG, CDD };

SequenceKind parse_sequence_kind(std::string_view name);
std::string to_string(SequenceKind kind);

PulsePattern wdd_pattern(std::uint64_t n, double tau);

// Walsh index of the familiar sequence of order r >= 1.
WalshIndex named_index(SequenceKind kind, unsigned r);
// Closed-form pulse counts: 2^(r+1)-1, 2^r and ceil((2^(r+1)-2)/3).
std::uint64_t named_pulse_count(SequenceKind kind, unsigned r);

// Uhrig locations sin^2(j pi / (2s + 2)), j = 1..s.
PulsePattern udd_pattern(unsigned s, double tau);

inline std::uint64_t repeat(std::uint64_t n) { return 2 * n; }
inline std::uint64_t concatenate(std::uint64_t n) { return 2 * n + 1; }

// Builds W_n on 2^m pieces from the constant function by applying the
// digits of n, most significant first, as repeat (0) / concatenate (1).
DyadicFunction build_by_recursion(std::uint64_t n, unsigned m);

DigitalSchedule compile_schedule(std::uint64_t n, unsigned m, double tau);

// Propagator with sign +1 on the first piece.
DigitalSchedule schedule_from_propagator(const DyadicFunction& y, double tau);

DigitizeReport digitize(const PulsePattern& pattern, unsigned m);

}  // namespace wdd
