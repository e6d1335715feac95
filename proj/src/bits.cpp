#include "depthlab/bits.hpp"

#include <cctype>
#include <stdexcept>

namespace depthlab {

BitString BitString::parse(std::string_view text) {
  std::string bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("bitstring may contain only '0' and '1': '" + std::string(text) + "'");
    }
    bits.push_back(c);
  }
  return BitString(std::move(bits));
}

BitString BitString::from_uint(std::uint64_t value, std::size_t width) {
  std::string bits(width, '0');
  for (std::size_t i = 0; i < width && i < 64; ++i) {
    if ((value >> i) & 1u) bits[width - 1 - i] = '1';
  }
  return BitString(std::move(bits));
}

bool BitString::is_prefix_of(const BitString& other) const {
  return bits_.size() <= other.bits_.size() && other.bits_.compare(0, bits_.size(), bits_) == 0;
}

Program Program::parse(std::string_view text) {
  std::string bits;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c != '0' && c != '1') {
      throw std::invalid_argument(std::string("invalid character '") + c + "' in program text");
    }
    bits.push_back(c);
  }
  return Program(BitString::parse(bits));
}

void BitWriter::write_bit(bool bit) {
  if (bit_count_ % 8 == 0) bytes_.push_back(0);
  if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bit_count_ % 8));
  ++bit_count_;
}

void BitWriter::write_bits(std::uint64_t value, unsigned width) {
  for (unsigned i = width; i-- > 0;) write_bit((value >> i) & 1u);
}

void BitWriter::write_gamma(std::uint64_t value) {
  if (value == UINT64_MAX) throw std::overflow_error("gamma code argument too large");
  const std::uint64_t v = value + 1;
  unsigned width = 0;
  while (width < 63 && (v >> (width + 1)) != 0) ++width;
  for (unsigned i = 0; i < width; ++i) write_bit(false);
  write_bits(v, width + 1);
}

void BitWriter::write_bitstring(const BitString& bits) {
  write_gamma(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) write_bit(bits[i]);
}

bool BitReader::read_bit() {
  if (position_ >= bit_count_) throw std::out_of_range("bit stream exhausted");
  const bool bit = ((*bytes_)[position_ / 8] >> (7 - position_ % 8)) & 1u;
  ++position_;
  return bit;
}

std::uint64_t BitReader::read_bits(unsigned width) {
  std::uint64_t value = 0;
  for (unsigned i = 0; i < width; ++i) value = (value << 1) | (read_bit() ? 1u : 0u);
  return value;
}

std::uint64_t BitReader::read_gamma() {
  unsigned zeros = 0;
  while (!read_bit()) {
    if (++zeros > 63) throw std::out_of_range("gamma code too long");
  }
  const std::uint64_t v = (std::uint64_t{1} << zeros) | read_bits(zeros);
  return v - 1;
}

BitString BitReader::read_bitstring() {
  const std::uint64_t length = read_gamma();
  if (length > remaining()) throw std::out_of_range("bitstring length exceeds stream");
  std::string bits;
  bits.reserve(length);
  for (std::uint64_t i = 0; i < length; ++i) bits.push_back(read_bit() ? '1' : '0');
  return BitString::parse(bits);
}

std::string to_hex(const std::vector<std::uint8_t>& bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

}  // namespace depthlab
