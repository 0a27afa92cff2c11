#include "wdd/walsh.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "wdd/errors.hpp"

namespace wdd {

namespace {

constexpr unsigned kMaxResolution = 30;

void check_power_of_two(std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0) {
    throw ValidationError("walsh transform: length " + std::to_string(n) +
                          " is not a power of two");
  }
}

// In-place unnormalized Walsh-Hadamard butterfly (natural ordering).
void hadamard_butterfly(std::vector<double>& v) {
  for (std::size_t half = 1; half < v.size(); half <<= 1) {
    for (std::size_t i = 0; i < v.size(); i += 2 * half) {
      for (std::size_t k = i; k < i + half; ++k) {
        const double a = v[k];
        const double b = v[k + half];
        v[k] = a + b;
        v[k + half] = a - b;
      }
    }
  }
}

}  // namespace

unsigned bit_length(std::uint64_t n) { return static_cast<unsigned>(std::bit_width(n)); }

unsigned hamming_weight(std::uint64_t n) { return static_cast<unsigned>(std::popcount(n)); }

std::uint64_t sequency(std::uint64_t n) {
  std::uint64_t s = 0;
  for (; n != 0; n >>= 1) s ^= n;
  return s;
}

std::uint64_t reverse_bits(std::uint64_t n, unsigned width) {
  std::uint64_t out = 0;
  for (unsigned i = 0; i < width; ++i) {
    out = (out << 1) | ((n >> i) & 1U);
  }
  return out;
}

WalshIndex::WalshIndex(std::uint64_t n) : n_(n) {
  if (wdd::bit_length(n) > kMaxResolution) {
    throw ValidationError("walsh index " + std::to_string(n) + " exceeds 2^" +
                          std::to_string(kMaxResolution));
  }
}

std::vector<int> WalshIndex::bits() const {
  std::vector<int> out;
  for (std::uint64_t v = n_; v != 0; v >>= 1) out.push_back(static_cast<int>(v & 1U));
  return out;
}

std::vector<unsigned> WalshIndex::set_bits() const {
  std::vector<unsigned> out;
  for (unsigned j = 1; j <= bit_length(); ++j) {
    if (bit(j)) out.push_back(j);
  }
  return out;
}

double DyadicRational::value() const {
  return std::ldexp(static_cast<double>(numerator), -static_cast<int>(exponent));
}

Rational DyadicRational::exact() const {
  mpz_class den = 1;
  den <<= exponent;
  Rational q(mpz_class(static_cast<unsigned long>(numerator)), den);
  q.canonicalize();
  return q;
}

DyadicRational make_dyadic(std::uint64_t numerator, unsigned exponent) {
  while (exponent > 0 && numerator % 2 == 0) {
    numerator /= 2;
    --exponent;
  }
  if (numerator == 0) exponent = 0;
  return {numerator, exponent};
}

DyadicFunction::DyadicFunction(unsigned m, std::vector<std::int8_t> signs)
    : m_(m), signs_(std::move(signs)) {
  if (m_ > kMaxResolution) throw ValidationError("dyadic resolution too large");
  if (signs_.size() != (std::size_t{1} << m_)) {
    throw ValidationError("dyadic function: expected 2^" + std::to_string(m_) +
                          " samples, got " + std::to_string(signs_.size()));
  }
  for (auto s : signs_) {
    if (s != 1 && s != -1) throw ValidationError("dyadic function entries must be +-1");
  }
}

DyadicFunction DyadicFunction::constant(unsigned m) {
  return DyadicFunction(m, std::vector<std::int8_t>(std::size_t{1} << m, 1));
}

DyadicFunction DyadicFunction::refine(unsigned m) const {
  if (m < m_) throw ValidationError("refine: target resolution below current");
  const std::size_t factor = std::size_t{1} << (m - m_);
  std::vector<std::int8_t> out;
  out.reserve(signs_.size() * factor);
  for (auto s : signs_) out.insert(out.end(), factor, s);
  return DyadicFunction(m, std::move(out));
}

std::size_t DyadicFunction::sign_changes() const { return switch_ticks().size(); }

std::vector<std::uint64_t> DyadicFunction::switch_ticks() const {
  std::vector<std::uint64_t> ticks;
  for (std::size_t k = 1; k < signs_.size(); ++k) {
    if (signs_[k] != signs_[k - 1]) ticks.push_back(k);
  }
  return ticks;
}

DyadicFunction DyadicFunction::operator*(const DyadicFunction& other) const {
  const unsigned m = std::max(m_, other.m_);
  DyadicFunction a = refine(m);
  const DyadicFunction b = other.refine(m);
  for (std::size_t k = 0; k < a.signs_.size(); ++k) a.signs_[k] *= b.signs_[k];
  return a;
}

DyadicFunction DyadicFunction::operator-() const {
  DyadicFunction out = *this;
  for (auto& s : out.signs_) s = static_cast<std::int8_t>(-s);
  return out;
}

DyadicFunction DyadicFunction::doubled(bool negate_second_half) const {
  std::vector<std::int8_t> out(signs_);
  out.reserve(2 * signs_.size());
  for (auto s : signs_) out.push_back(negate_second_half ? static_cast<std::int8_t>(-s) : s);
  return DyadicFunction(m_ + 1, std::move(out));
}

std::string DyadicFunction::to_string() const {
  std::string out;
  for (auto s : signs_) out += s > 0 ? '+' : '-';
  return out;
}

DyadicFunction rademacher(unsigned j, unsigned m) {
  if (m < j) {
    throw ValidationError("rademacher: resolution 2^" + std::to_string(m) +
                          " cannot resolve R_" + std::to_string(j));
  }
  if (m < 1) throw ValidationError("rademacher: resolution must be at least 1");
  if (m > kMaxResolution) throw ValidationError("rademacher: resolution too large");
  std::vector<std::int8_t> signs(std::size_t{1} << m);
  for (std::size_t k = 0; k < signs.size(); ++k) {
    // floor(k 2^(j-m)) even <=> +1
    const bool odd = j > 0 && ((k >> (m - j)) & 1U);
    signs[k] = odd ? -1 : 1;
  }
  return DyadicFunction(m, std::move(signs));
}

DyadicFunction walsh(const WalshIndex& n, unsigned m) {
  if (m < n.bit_length()) {
    throw ValidationError("walsh: resolution 2^" + std::to_string(m) + " too small for W_" +
                          std::to_string(n.value()));
  }
  if (m > kMaxResolution) throw ValidationError("walsh: resolution too large");
  // W_n(k) = (-1)^popcount(k & reverse_m(n))
  const std::uint64_t mask = reverse_bits(n.value(), m);
  std::vector<std::int8_t> signs(std::size_t{1} << m);
  for (std::size_t k = 0; k < signs.size(); ++k) {
    signs[k] = (std::popcount(k & mask) & 1) ? -1 : 1;
  }
  return DyadicFunction(m, std::move(signs));
}

DyadicFunction walsh(const WalshIndex& n) { return walsh(n, std::max(1U, n.bit_length())); }

std::vector<DyadicRational> switch_points(std::uint64_t n) {
  const WalshIndex idx(n);
  const unsigned m = std::max(1U, idx.bit_length());
  std::vector<DyadicRational> out;
  for (auto tick : walsh(idx, m).switch_ticks()) out.push_back(make_dyadic(tick, m));
  return out;
}

std::vector<double> walsh_transform(std::span<const double> samples) {
  check_power_of_two(samples.size());
  const unsigned m = static_cast<unsigned>(std::countr_zero(samples.size()));
  std::vector<double> h(samples.begin(), samples.end());
  hadamard_butterfly(h);
  std::vector<double> a(h.size());
  const double scale = 1.0 / static_cast<double>(h.size());
  for (std::size_t n = 0; n < a.size(); ++n) a[n] = h[reverse_bits(n, m)] * scale;
  return a;
}

std::vector<double> inverse_walsh_transform(std::span<const double> coefficients) {
  check_power_of_two(coefficients.size());
  const unsigned m = static_cast<unsigned>(std::countr_zero(coefficients.size()));
  std::vector<double> h(coefficients.size());
  for (std::size_t n = 0; n < h.size(); ++n) h[reverse_bits(n, m)] = coefficients[n];
  hadamard_butterfly(h);
  return h;
}

Rational moment(std::uint64_t n, unsigned k) {
  const WalshIndex idx(n);
  const unsigned m = std::max(1U, idx.bit_length());
  const auto w = walsh(idx, m);
  // sum_i s_i ((i+1)^(k+1) - i^(k+1)) / ((k+1) 2^(m(k+1)))
  mpz_class acc = 0;
  mpz_class prev = 0;  // i^(k+1) at i = 0
  for (std::size_t i = 0; i < w.size(); ++i) {
    mpz_class next;
    mpz_ui_pow_ui(next.get_mpz_t(), static_cast<unsigned long>(i + 1), k + 1);
    if (w[i] > 0) {
      acc += next - prev;
    } else {
      acc -= next - prev;
    }
    prev = next;
  }
  mpz_class den = k + 1;
  den <<= m * (k + 1);
  Rational q(acc, den);
  q.canonicalize();
  return q;
}

std::complex<double> walsh_exp_moment(std::uint64_t n, double c, unsigned k) {
  using cld = std::complex<long double>;
  const WalshIndex idx(n);
  const unsigned m = std::max(1U, idx.bit_length());
  const auto w = walsh(idx, m);
  const long double width = std::ldexp(1.0L, -static_cast<int>(m));

  if (c == 0.0) {
    long double acc = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const long double a = i * width;
      const long double b = (i + 1) * width;
      acc += w[i] * (std::pow(b, k + 1) - std::pow(a, k + 1)) / (k + 1);
    }
    return {static_cast<double>(acc), 0.0};
  }

  // d/dx [e^{icx} sum_l (-1)^l k!/(k-l)! x^(k-l) / (ic)^(l+1)] = x^k e^{icx}
  const cld ic(0.0L, static_cast<long double>(c));
  auto antiderivative = [&](long double x) {
    cld sum = 0;
    long double falling = 1;  // k!/(k-l)!
    cld power = ic;           // (ic)^(l+1)
    for (unsigned l = 0; l <= k; ++l) {
      const long double sign = (l % 2 == 0) ? 1.0L : -1.0L;
      sum += sign * falling * std::pow(x, static_cast<long double>(k - l)) / power;
      falling *= static_cast<long double>(k - l);
      power *= ic;
    }
    return std::exp(ic * x) * sum;
  };

  cld acc = 0;
  cld left = antiderivative(0.0L);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const cld right = antiderivative((i + 1) * width);
    acc += static_cast<long double>(w[i]) * (right - left);
    left = right;
  }
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

std::complex<double> modulated_moment(unsigned r, unsigned k) {
  if (r < 1) throw ValidationError("modulated_moment: r must be at least 1");
  const std::uint64_t n = (std::uint64_t{1} << r) - 1;
  const double c = std::ldexp(std::numbers::pi, static_cast<int>(r + 1));
  return walsh_exp_moment(n, c, k);
}

}  // namespace wdd
