#pragma once

// Rademacher and Walsh functions in Paley ordering on dyadic grids.
//
// A Walsh function W_n is the product of the Rademacher functions R_j
// selected by the binary digits b_j of n (b_1 is the least significant
// digit). R_j(x) = sgn sin(2^j pi x) switches every 2^-j, so on a grid of
// 2^m intervals R_j is determined by digit (m - j) of the interval index.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace wdd {

using Rational = mpq_class;

unsigned bit_length(std::uint64_t n);
unsigned hamming_weight(std::uint64_t n);

// Number of sign changes of W_n on (0,1): the inverse Gray code of n.
std::uint64_t sequency(std::uint64_t n);

// Reverses the lowest `width` bits of n.
std::uint64_t reverse_bits(std::uint64_t n, unsigned width);

class WalshIndex {
 public:
  explicit WalshIndex(std::uint64_t n);

  std::uint64_t value() const { return n_; }
  // Binary digits b_1..b_m, least significant first.
  std::vector<int> bits() const;
  // 1-based positions j with b_j = 1, increasing.
  std::vector<unsigned> set_bits() const;
  bool bit(unsigned j) const { return j >= 1 && j <= 63 && ((n_ >> (j - 1)) & 1U); }

  unsigned bit_length() const { return wdd::bit_length(n_); }
  unsigned hamming_weight() const { return wdd::hamming_weight(n_); }
  std::uint64_t sequency() const { return wdd::sequency(n_); }

  friend bool operator==(const WalshIndex&, const WalshIndex&) = default;

 private:
  std::uint64_t n_;
};

// Dyadic rational numerator / 2^exponent, kept in lowest terms.
struct DyadicRational {
  std::uint64_t numerator = 0;
  unsigned exponent = 0;

  double value() const;
  Rational exact() const;
  friend bool operator==(const DyadicRational&, const DyadicRational&) = default;
};

DyadicRational make_dyadic(std::uint64_t numerator, unsigned exponent);

// Right-continuous +-1 step function on [0,1] with 2^m equal pieces.
class DyadicFunction {
 public:
  DyadicFunction(unsigned m, std::vector<std::int8_t> signs);
  static DyadicFunction constant(unsigned m);

  unsigned resolution() const { return m_; }
  std::size_t size() const { return signs_.size(); }
  int operator[](std::size_t k) const { return signs_[k]; }
  const std::vector<std::int8_t>& signs() const { return signs_; }

  // Same function sampled on 2^m' pieces, m' >= m.
  DyadicFunction refine(unsigned m) const;
  std::size_t sign_changes() const;
  // Interval indices k at which the value differs from piece k-1.
  std::vector<std::uint64_t> switch_ticks() const;

  // Entrywise product; the coarser operand is refined first.
  DyadicFunction operator*(const DyadicFunction& other) const;
  DyadicFunction operator-() const;

  // [f(2x), +-f(2x-1)]: the repetition / concatenation step.
  DyadicFunction doubled(bool negate_second_half) const;

  std::string to_string() const;

  friend bool operator==(const DyadicFunction&, const DyadicFunction&) = default;

 private:
  unsigned m_;
  std::vector<std::int8_t> signs_;
};

// R_j sampled on 2^m pieces. Requires m >= max(j, 1).
DyadicFunction rademacher(unsigned j, unsigned m);

// W_n sampled on 2^m pieces. Requires m >= bit_length(n).
DyadicFunction walsh(const WalshIndex& n, unsigned m);
// Sampled at the smallest resolution that resolves it (at least 1).
DyadicFunction walsh(const WalshIndex& n);

// Sign-change locations of W_n in (0,1), increasing.
std::vector<DyadicRational> switch_points(std::uint64_t n);

// Paley-ordered Walsh analysis a_n = 2^-m sum_k f_k W_n(k) and synthesis.
std::vector<double> walsh_transform(std::span<const double> samples);
std::vector<double> inverse_walsh_transform(std::span<const double> coefficients);

// Exact value of the integral of W_n(x) x^k over [0,1].
Rational moment(std::uint64_t n, unsigned k);

// Integral of W_n(x) exp(i c x) x^k over [0,1] from closed-form
// antiderivatives on each dyadic piece.
std::complex<double> walsh_exp_moment(std::uint64_t n, double c, unsigned k);

// walsh_exp_moment for n = 2^r - 1 and c = 2^(r+1) pi. Vanishes for k <= r.
std::complex<double> modulated_moment(unsigned r, unsigned k);

}  // namespace wdd
