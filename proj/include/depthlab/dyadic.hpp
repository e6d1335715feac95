#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace depthlab {

// Exact non-negative dyadic rational numerator / 2^exponent, kept reduced
// (numerator odd, or exponent zero). Every algorithmic probability and Kraft
// sum over bit programs is dyadic, so no general rational type is needed.
class Dyadic {
 public:
  static constexpr unsigned kMaxExponent = 63;

  constexpr Dyadic() = default;
  Dyadic(std::uint64_t numerator, unsigned exponent);

  // 2^-k
  static Dyadic inverse_power_of_two(unsigned k);

  // Parses "p/q" where q is a power of two.
  static Dyadic parse(std::string_view text);

  std::uint64_t numerator() const { return numerator_; }
  unsigned exponent() const { return exponent_; }
  std::uint64_t denominator() const { return std::uint64_t{1} << exponent_; }
  bool is_zero() const { return numerator_ == 0; }

  Dyadic& operator+=(const Dyadic& other);
  friend Dyadic operator+(Dyadic lhs, const Dyadic& rhs) { return lhs += rhs; }

  friend bool operator==(const Dyadic&, const Dyadic&) = default;
  friend std::strong_ordering operator<=>(const Dyadic& lhs, const Dyadic& rhs);

  // "p/q", e.g. "11/64"; zero prints as "0/1".
  std::string to_string() const;

  // Lossy; for display only.
  double to_double() const;

 private:
  std::uint64_t numerator_ = 0;
  unsigned exponent_ = 0;
};

}  // namespace depthlab
