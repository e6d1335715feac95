#include "depthlab/dyadic.hpp"

#include <charconv>
#include <stdexcept>

namespace depthlab {

namespace {

__extension__ typedef unsigned __int128 u128;

std::uint64_t narrow_or_throw(u128 value) {
  if (value > static_cast<u128>(UINT64_MAX)) {
    throw std::overflow_error("dyadic numerator exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(value);
}

std::uint64_t parse_u64(std::string_view text) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("malformed dyadic rational component: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Dyadic::Dyadic(std::uint64_t numerator, unsigned exponent) : numerator_(numerator), exponent_(exponent) {
  if (exponent_ > kMaxExponent) {
    throw std::overflow_error("dyadic exponent exceeds 63");
  }
  if (numerator_ == 0) {
    exponent_ = 0;
    return;
  }
  while (exponent_ > 0 && (numerator_ & 1u) == 0) {
    numerator_ >>= 1;
    --exponent_;
  }
}

Dyadic Dyadic::inverse_power_of_two(unsigned k) { return Dyadic(1, k); }

Dyadic Dyadic::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    throw std::invalid_argument("dyadic rational must be 'p/q': '" + std::string(text) + "'");
  }
  const std::uint64_t p = parse_u64(text.substr(0, slash));
  const std::uint64_t q = parse_u64(text.substr(slash + 1));
  if (q == 0 || (q & (q - 1)) != 0) {
    throw std::invalid_argument("dyadic denominator must be a power of two: '" + std::string(text) + "'");
  }
  unsigned exponent = 0;
  while ((std::uint64_t{1} << exponent) != q) ++exponent;
  return Dyadic(p, exponent);
}

Dyadic& Dyadic::operator+=(const Dyadic& other) {
  const unsigned exponent = std::max(exponent_, other.exponent_);
  const u128 sum = (static_cast<u128>(numerator_) << (exponent - exponent_)) +
                   (static_cast<u128>(other.numerator_) << (exponent - other.exponent_));
  // Reduce before narrowing so sums like 1/2 + 1/2 never spuriously overflow.
  u128 reduced = sum;
  unsigned e = exponent;
  while (e > 0 && reduced != 0 && (reduced & 1u) == 0) {
    reduced >>= 1;
    --e;
  }
  *this = Dyadic(narrow_or_throw(reduced), reduced == 0 ? 0 : e);
  return *this;
}

std::strong_ordering operator<=>(const Dyadic& lhs, const Dyadic& rhs) {
  const unsigned exponent = std::max(lhs.exponent_, rhs.exponent_);
  const u128 a = static_cast<u128>(lhs.numerator_) << (exponent - lhs.exponent_);
  const u128 b = static_cast<u128>(rhs.numerator_) << (exponent - rhs.exponent_);
  return a <=> b;
}

std::string Dyadic::to_string() const {
  return std::to_string(numerator_) + "/" + std::to_string(denominator());
}

double Dyadic::to_double() const {
  return static_cast<double>(numerator_) / static_cast<double>(denominator());
}

}  // namespace depthlab
