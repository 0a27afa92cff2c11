#include "wdd/gwdd.hpp"

#include <complex>
#include <map>

#include <Eigen/Dense>

#include "wdd/errors.hpp"
#include "wdd/walsh.hpp"

namespace wdd {

namespace {

constexpr unsigned kMaxResolution = 24;

DyadicFunction product_of(const std::vector<unsigned>& bits, unsigned m) {
  auto f = DyadicFunction::constant(m);
  for (unsigned j : bits) f = f * rademacher(j, m);
  return f;
}

void check_resolution(unsigned m) {
  if (m > kMaxResolution) throw ValidationError("gwdd: resolution above 24 is not supported");
}

Eigen::Matrix2cd pauli(Axis a) {
  using C = std::complex<double>;
  switch (a) {
    case Axis::X:
      return (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
    case Axis::Y:
      return (Eigen::Matrix2cd() << 0, C(0, -1), C(0, 1), 0).finished();
    case Axis::Z:
      return (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();
  }
  return Eigen::Matrix2cd::Identity();
}

// Control propagator on each segment as an explicit 2x2 unitary.
std::vector<Eigen::Matrix2cd> segment_propagators(const AxisSchedule& s) {
  std::vector<Eigen::Matrix2cd> u;
  u.reserve(s.segments());
  Eigen::Matrix2cd current = Eigen::Matrix2cd::Identity();
  std::size_t next = 0;
  for (std::uint64_t k = 0; k < s.segments(); ++k) {
    while (next < s.events.size() && s.events[next].tick == k) {
      current = pauli(s.events[next].axis) * current;
      ++next;
    }
    u.push_back(current);
  }
  return u;
}

}  // namespace

char axis_name(Axis a) {
  switch (a) {
    case Axis::X:
      return 'X';
    case Axis::Y:
      return 'Y';
    case Axis::Z:
      return 'Z';
  }
  return '?';
}

Axis parse_axis(char c) {
  switch (c) {
    case 'X':
    case 'x':
      return Axis::X;
    case 'Y':
    case 'y':
      return Axis::Y;
    case 'Z':
    case 'z':
      return Axis::Z;
    default:
      throw ValidationError(std::string("unknown axis '") + c + "'");
  }
}

std::string AxisSchedule::to_string() const {
  std::string out;
  for (const auto& e : events) {
    if (!out.empty()) out += ' ';
    out += std::to_string(e.tick) + axis_name(e.axis);
  }
  return out;
}

AxisSchedule gwdd_schedule(std::uint64_t n, unsigned m) {
  const WalshIndex idx(n);
  if (m < idx.bit_length()) throw ValidationError("gwdd: m must be at least the bit length of n");
  check_resolution(m);
  AxisSchedule s;
  s.m = m;
  const auto bits = idx.set_bits();
  for (std::size_t i = 0; i < bits.size(); ++i) {
    (i % 2 == 0 ? s.x_bits : s.y_bits).push_back(bits[i]);
  }
  const auto x = product_of(s.x_bits, m);
  const auto y = product_of(s.y_bits, m);
  for (std::uint64_t k = 1; k < s.segments(); ++k) {
    const bool fx = x[k] != x[k - 1];
    const bool fy = y[k] != y[k - 1];
    if (fx && fy) {
      s.events.push_back({k, Axis::Z});
    } else if (fx) {
      s.events.push_back({k, Axis::X});
    } else if (fy) {
      s.events.push_back({k, Axis::Y});
    }
  }
  return s;
}

AxisSchedule single_axis_schedule(std::uint64_t n, unsigned m, Axis axis) {
  const WalshIndex idx(n);
  if (m < idx.bit_length()) throw ValidationError("gwdd: m must be at least the bit length of n");
  check_resolution(m);
  AxisSchedule s;
  s.m = m;
  for (auto t : walsh(idx, m).switch_ticks()) s.events.push_back({t, axis});
  return s;
}

AxisSchedule generic_cdd(unsigned level) {
  if (2 * level > kMaxResolution) throw ValidationError("generic_cdd: level too large");
  // Pulses keyed by tick; the 2-bit codes multiply like Paulis up to sign.
  std::map<std::uint64_t, unsigned> block;
  std::uint64_t length = 1;
  constexpr std::array<unsigned, 4> junction = {2, 3, 2, 3};  // Y Z Y Z
  for (unsigned l = 0; l < level; ++l) {
    std::map<std::uint64_t, unsigned> next;
    for (std::uint64_t b = 0; b < 4; ++b) {
      for (const auto& [tick, code] : block) next[b * length + tick] ^= code;
      next[(b + 1) * length] ^= junction[b];
    }
    block = std::move(next);
    length *= 4;
  }
  AxisSchedule s;
  s.m = 2 * level;
  for (const auto& [tick, code] : block) {
    if (tick == 0 || tick >= length || code == 0) continue;
    s.events.push_back({tick, static_cast<Axis>(code)});
  }
  return s;
}

std::vector<std::array<int, 3>> toggling_signs(const AxisSchedule& schedule) {
  const auto u = segment_propagators(schedule);
  std::vector<std::array<int, 3>> signs;
  signs.reserve(u.size());
  for (const auto& uk : u) {
    std::array<int, 3> s{};
    for (int i = 0; i < 3; ++i) {
      const auto p = pauli(static_cast<Axis>(i + 1));
      const double c = (uk.adjoint() * p * uk * p).trace().real() / 2.0;
      s[i] = c > 0 ? 1 : -1;
    }
    signs.push_back(s);
  }
  return signs;
}

std::array<double, 3> first_order_residuals(const AxisSchedule& schedule) {
  const auto u = segment_propagators(schedule);
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) {
    const auto p = pauli(static_cast<Axis>(i + 1));
    Eigen::Matrix2cd acc = Eigen::Matrix2cd::Zero();
    for (const auto& uk : u) acc += uk.adjoint() * p * uk;
    acc /= static_cast<double>(u.size());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(acc, Eigen::EigenvaluesOnly);
    out[static_cast<std::size_t>(i)] = es.eigenvalues().cwiseAbs().maxCoeff();
  }
  return out;
}

double first_order_residual(const AxisSchedule& schedule) {
  const auto r = first_order_residuals(schedule);
  return std::max({r[0], r[1], r[2]});
}

}  // namespace wdd
