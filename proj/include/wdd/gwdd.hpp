#pragma once

// Two-axis Walsh decoupling. The set bits of n are split alternately
// between x(t) (first, third, ...) and y(t) (second, fourth, ...). A tick
// where only x switches carries an X pulse, only y a Y pulse, both a Z
// pulse. Overall signs of the control propagator are ignored.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace wdd {

enum class Axis { X = 1, Y = 2, Z = 3 };

char axis_name(Axis a);
Axis parse_axis(char c);

struct AxisEvent {
  std::uint64_t tick = 0;
  Axis axis = Axis::X;
  friend bool operator==(const AxisEvent&, const AxisEvent&) = default;
};

struct AxisSchedule {
  unsigned m = 0;
  std::vector<AxisEvent> events;  // increasing ticks in (0, 2^m)
  std::vector<unsigned> x_bits;
  std::vector<unsigned> y_bits;

  std::uint64_t segments() const { return std::uint64_t{1} << m; }
  std::string to_string() const;
};

AxisSchedule gwdd_schedule(std::uint64_t n, unsigned m);

// WDD_n with every pulse about one axis.
AxisSchedule single_axis_schedule(std::uint64_t n, unsigned m, Axis axis);

// Level-l concatenated two-axis sequence on 4^l segments:
// C_{l+1} = C_l Y C_l Z C_l Y C_l Z, coinciding pulses merged.
AxisSchedule generic_cdd(unsigned level);

// Sign s_i(k) with U_c^dag sigma_i U_c = s_i sigma_i on segment k, i = x, y, z.
std::vector<std::array<int, 3>> toggling_signs(const AxisSchedule& schedule);

// Spectral norm of (1/tau) int U_c^dag sigma_i U_c dt for i = x, y, z.
std::array<double, 3> first_order_residuals(const AxisSchedule& schedule);
double first_order_residual(const AxisSchedule& schedule);

}  // namespace wdd
