#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace depthlab {

// A finite binary string, stored as '0'/'1' characters.
//
// The ordering is the canonical one used for every file and report: shorter
// strings first, then lexicographic.
class BitString {
 public:
  BitString() = default;

  // Strict: only '0' and '1' are accepted.
  static BitString parse(std::string_view text);

  static BitString from_uint(std::uint64_t value, std::size_t width);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i] == '1'; }

  void push_back(bool bit) { bits_.push_back(bit ? '1' : '0'); }
  void append(const BitString& other) { bits_ += other.bits_; }

  bool is_prefix_of(const BitString& other) const;

  const std::string& str() const { return bits_; }

  friend bool operator==(const BitString&, const BitString&) = default;
  friend std::strong_ordering operator<=>(const BitString& lhs, const BitString& rhs) {
    if (auto c = lhs.bits_.size() <=> rhs.bits_.size(); c != 0) return c;
    return lhs.bits_.compare(rhs.bits_) <=> 0;
  }

 private:
  explicit BitString(std::string bits) : bits_(std::move(bits)) {}
  std::string bits_;
};

// A self-delimiting program for the fixed machine.
class Program {
 public:
  Program() = default;
  explicit Program(BitString bits) : bits_(std::move(bits)) {}

  // ASCII '0'/'1'; whitespace is stripped, anything else rejected.
  static Program parse(std::string_view text);

  const BitString& bits() const { return bits_; }
  std::size_t length() const { return bits_.size(); }
  const std::string& str() const { return bits_.str(); }

  friend bool operator==(const Program&, const Program&) = default;
  friend std::strong_ordering operator<=>(const Program&, const Program&) = default;

 private:
  BitString bits_;
};

// MSB-first bit packing, shared by the codec frame and the protocol messages.
class BitWriter {
 public:
  void write_bit(bool bit);
  void write_bits(std::uint64_t value, unsigned width);
  // Elias gamma code of value + 1, so zero is representable.
  void write_gamma(std::uint64_t value);
  void write_bitstring(const BitString& bits);

  std::size_t bit_count() const { return bit_count_; }
  // Bytes with the final byte zero-padded.
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::vector<std::uint8_t> take_bytes() && { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t bit_count_ = 0;
};

class BitReader {
 public:
  BitReader(const std::vector<std::uint8_t>& bytes, std::size_t bit_count)
      : bytes_(&bytes), bit_count_(bit_count) {}

  // All readers throw std::out_of_range when the stream is exhausted.
  bool read_bit();
  std::uint64_t read_bits(unsigned width);
  std::uint64_t read_gamma();
  BitString read_bitstring();

  std::size_t position() const { return position_; }
  std::size_t remaining() const { return bit_count_ - position_; }

 private:
  const std::vector<std::uint8_t>* bytes_;
  std::size_t bit_count_;
  std::size_t position_ = 0;
};

std::string to_hex(const std::vector<std::uint8_t>& bytes);

}  // namespace depthlab

template <>
struct std::hash<depthlab::BitString> {
  std::size_t operator()(const depthlab::BitString& b) const noexcept { return std::hash<std::string>{}(b.str()); }
};
