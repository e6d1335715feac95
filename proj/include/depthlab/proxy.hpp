#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace depthlab {

// Fixed LZ77 stand-in codec whose decoder counts its own work.
//
// Frame layout, bit-packed MSB-first and zero-padded to a byte boundary:
//   32-bit big-endian decoded length, then tokens until that length is reached:
//     0 + 8-bit literal
//     1 + 12-bit (offset - 1) + 6-bit (length - 3)
inline constexpr std::size_t kWindowSize = 4096;
inline constexpr std::size_t kMinMatch = 3;
inline constexpr std::size_t kMaxMatch = 66;
inline constexpr std::size_t kLiteralTokenBits = 9;
inline constexpr std::size_t kMatchTokenBits = 19;
inline constexpr std::size_t kFrameHeaderBits = 32;

struct LiteralToken {
  std::uint8_t byte = 0;
  friend bool operator==(const LiteralToken&, const LiteralToken&) = default;
};
struct MatchToken {
  std::uint16_t offset = 0;  // 1..4096
  std::uint8_t length = 0;   // 3..66
  friend bool operator==(const MatchToken&, const MatchToken&) = default;
};
using Token = std::variant<LiteralToken, MatchToken>;

struct CodecFrame {
  std::uint32_t output_length = 0;
  std::vector<Token> tokens;

  // Header plus tokens, excluding the final padding.
  std::size_t bit_length() const;

  friend bool operator==(const CodecFrame&, const CodecFrame&) = default;
};

class CodecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Greedy longest match within the window; ties go to the smallest offset.
CodecFrame compress(std::span<const std::uint8_t> data);

std::vector<std::uint8_t> encode_frame(const CodecFrame& frame);
// Strict parser: rejects truncation, overlong tokens, nonzero padding and
// trailing bytes.
CodecFrame decode_frame(std::span<const std::uint8_t> bytes);

// Throws CodecError unless the frame satisfies every layout invariant.
void validate_frame(const CodecFrame& frame);

struct CostModel {
  std::uint64_t per_token = 1;
  std::uint64_t per_literal_byte = 1;
  std::uint64_t per_match_byte = 1;

  void validate() const;
};

struct DecodeResult {
  std::vector<std::uint8_t> data;
  std::uint64_t steps = 0;
};

DecodeResult decompress_instrumented(const CodecFrame& frame, const CostModel& model = {});

struct ConstantCorpus {
  std::size_t n = 0;
  std::uint8_t byte = 0;
};
struct NoiseCorpus {
  std::size_t n = 0;
  std::uint64_t seed = 0;  // nonzero
};
// Rule 110 from a single live rightmost cell with dead boundaries. Each row
// is packed MSB-first and padded to a whole byte; the initial row counts.
struct StructuredCorpus {
  std::size_t width = 0;
  std::size_t generations = 0;
};
using CorpusKind = std::variant<ConstantCorpus, NoiseCorpus, StructuredCorpus>;

std::vector<std::uint8_t> generate_corpus(const CorpusKind& kind);
std::string corpus_name(const CorpusKind& kind);

struct ProxyReport {
  std::string name;
  std::size_t original_bytes = 0;
  std::size_t compressed_bits = 0;
  std::uint64_t decode_steps = 0;
};

struct ProxyResult {
  std::vector<ProxyReport> reports;
  // order[i][j] = sign(decode_steps[i] - decode_steps[j])
  std::vector<std::vector<int>> decode_order;
};

ProxyResult proxy_depth_report(std::span<const CorpusKind> corpus, const CostModel& model = {}, unsigned workers = 1);

// Fixed-point ratio with six decimals, computed in integers.
std::string format_ratio(std::uint64_t numerator, std::uint64_t denominator);

// name,n_bytes,compressed_bits,decode_steps,steps_per_output_byte
std::string proxy_csv(const ProxyResult& result);

}  // namespace depthlab
