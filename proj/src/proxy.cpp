#include "depthlab/proxy.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <thread>

#include "depthlab/bits.hpp"
#include "depthlab/rng.hpp"

namespace depthlab {

std::size_t CodecFrame::bit_length() const {
  std::size_t bits = kFrameHeaderBits;
  for (const auto& token : tokens) {
    bits += std::holds_alternative<LiteralToken>(token) ? kLiteralTokenBits : kMatchTokenBits;
  }
  return bits;
}

namespace {

constexpr unsigned kHashBits = 15;

std::uint32_t hash3(const std::uint8_t* p) {
  const std::uint32_t v = (std::uint32_t{p[0]} << 16) | (std::uint32_t{p[1]} << 8) | p[2];
  return (v * 2654435761u) >> (32 - kHashBits);
}

}  // namespace

CodecFrame compress(std::span<const std::uint8_t> data) {
  if (data.size() > std::numeric_limits<std::uint32_t>::max()) throw CodecError("input too large for a frame");
  CodecFrame frame;
  frame.output_length = static_cast<std::uint32_t>(data.size());
  const std::size_t n = data.size();

  std::vector<std::int64_t> head(std::size_t{1} << kHashBits, -1);
  std::vector<std::int64_t> prev(n, -1);
  auto insert = [&](std::size_t pos) {
    if (pos + kMinMatch > n) return;
    const auto h = hash3(&data[pos]);
    prev[pos] = head[h];
    head[h] = static_cast<std::int64_t>(pos);
  };

  std::size_t pos = 0;
  while (pos < n) {
    std::size_t best_length = 0;
    std::size_t best_offset = 0;
    if (pos + kMinMatch <= n) {
      const std::size_t limit = std::min(kMaxMatch, n - pos);
      // Chains run newest first, so a strict improvement keeps the smallest offset.
      for (std::int64_t c = head[hash3(&data[pos])]; c >= 0; c = prev[static_cast<std::size_t>(c)]) {
        const auto candidate = static_cast<std::size_t>(c);
        if (pos - candidate > kWindowSize) break;
        std::size_t length = 0;
        while (length < limit && data[candidate + length] == data[pos + length]) ++length;
        if (length > best_length) {
          best_length = length;
          best_offset = pos - candidate;
          if (best_length == limit) break;
        }
      }
    }
    if (best_length >= kMinMatch) {
      frame.tokens.push_back(
          MatchToken{static_cast<std::uint16_t>(best_offset), static_cast<std::uint8_t>(best_length)});
      for (std::size_t i = 0; i < best_length; ++i) insert(pos + i);
      pos += best_length;
    } else {
      frame.tokens.push_back(LiteralToken{data[pos]});
      insert(pos);
      ++pos;
    }
  }
  return frame;
}

std::vector<std::uint8_t> encode_frame(const CodecFrame& frame) {
  BitWriter w;
  w.write_bits(frame.output_length, 32);
  for (const auto& token : frame.tokens) {
    if (const auto* lit = std::get_if<LiteralToken>(&token)) {
      w.write_bit(false);
      w.write_bits(lit->byte, 8);
    } else {
      const auto& match = std::get<MatchToken>(token);
      w.write_bit(true);
      w.write_bits(match.offset - 1u, 12);
      w.write_bits(match.length - kMinMatch, 6);
    }
  }
  return std::move(w).take_bytes();
}

CodecFrame decode_frame(std::span<const std::uint8_t> bytes) {
  const std::vector<std::uint8_t> buffer(bytes.begin(), bytes.end());
  BitReader r(buffer, buffer.size() * 8);
  CodecFrame frame;
  try {
    frame.output_length = static_cast<std::uint32_t>(r.read_bits(32));
    std::uint64_t produced = 0;
    while (produced < frame.output_length) {
      if (!r.read_bit()) {
        frame.tokens.push_back(LiteralToken{static_cast<std::uint8_t>(r.read_bits(8))});
        produced += 1;
      } else {
        const auto offset = static_cast<std::uint16_t>(r.read_bits(12) + 1);
        const auto length = static_cast<std::uint8_t>(r.read_bits(6) + kMinMatch);
        if (offset > produced) throw CodecError("match offset reaches before the start of output");
        frame.tokens.push_back(MatchToken{offset, length});
        produced += length;
      }
    }
    if (produced != frame.output_length) throw CodecError("tokens overrun the declared length");
  } catch (const std::out_of_range&) {
    throw CodecError("truncated frame");
  }
  if (r.remaining() >= 8) throw CodecError("trailing bytes after frame");
  while (r.remaining() > 0) {
    if (r.read_bit()) throw CodecError("nonzero padding bits");
  }
  return frame;
}

void validate_frame(const CodecFrame& frame) {
  std::uint64_t produced = 0;
  for (const auto& token : frame.tokens) {
    if (std::holds_alternative<LiteralToken>(token)) {
      produced += 1;
      continue;
    }
    const auto& match = std::get<MatchToken>(token);
    if (match.offset < 1 || match.offset > kWindowSize) throw CodecError("match offset outside 1..4096");
    if (match.length < kMinMatch || match.length > kMaxMatch) throw CodecError("match length outside 3..66");
    if (match.offset > produced) throw CodecError("match offset reaches before the start of output");
    produced += match.length;
  }
  if (produced != frame.output_length) throw CodecError("decoded length does not match header");
}

void CostModel::validate() const {
  if (per_token == 0 && per_literal_byte == 0 && per_match_byte == 0) {
    throw std::invalid_argument("cost model needs at least one positive cost");
  }
}

DecodeResult decompress_instrumented(const CodecFrame& frame, const CostModel& model) {
  model.validate();
  validate_frame(frame);
  DecodeResult result;
  result.data.reserve(frame.output_length);
  for (const auto& token : frame.tokens) {
    result.steps += model.per_token;
    if (const auto* lit = std::get_if<LiteralToken>(&token)) {
      result.data.push_back(lit->byte);
      result.steps += model.per_literal_byte;
      continue;
    }
    const auto& match = std::get<MatchToken>(token);
    // Byte by byte so self-overlapping matches replicate.
    std::size_t from = result.data.size() - match.offset;
    for (std::size_t i = 0; i < match.length; ++i) result.data.push_back(result.data[from++]);
    result.steps += match.length * model.per_match_byte;
  }
  return result;
}

std::vector<std::uint8_t> generate_corpus(const CorpusKind& kind) {
  if (const auto* c = std::get_if<ConstantCorpus>(&kind)) {
    if (c->n == 0) throw std::invalid_argument("corpus size must be positive");
    return std::vector<std::uint8_t>(c->n, c->byte);
  }
  if (const auto* c = std::get_if<NoiseCorpus>(&kind)) {
    if (c->n == 0) throw std::invalid_argument("corpus size must be positive");
    Xorshift64Star rng(c->seed);
    std::vector<std::uint8_t> out(c->n);
    for (auto& b : out) b = rng.next_byte();
    return out;
  }
  const auto& s = std::get<StructuredCorpus>(kind);
  if (s.width == 0 || s.generations == 0) throw std::invalid_argument("automaton width and generations must be positive");
  constexpr unsigned kRule = 110;
  std::vector<std::uint8_t> cells(s.width, 0);
  std::vector<std::uint8_t> next(s.width, 0);
  cells.back() = 1;
  const std::size_t row_bytes = (s.width + 7) / 8;
  std::vector<std::uint8_t> out;
  out.reserve(row_bytes * s.generations);
  for (std::size_t g = 0; g < s.generations; ++g) {
    if (g > 0) {
      for (std::size_t i = 0; i < s.width; ++i) {
        const unsigned left = i > 0 ? cells[i - 1] : 0;
        const unsigned right = i + 1 < s.width ? cells[i + 1] : 0;
        next[i] = (kRule >> ((left << 2) | (cells[i] << 1) | right)) & 1u;
      }
      cells.swap(next);
    }
    for (std::size_t b = 0; b < row_bytes; ++b) {
      std::uint8_t byte = 0;
      for (std::size_t bit = 0; bit < 8; ++bit) {
        const std::size_t i = b * 8 + bit;
        if (i < s.width && cells[i]) byte |= static_cast<std::uint8_t>(0x80u >> bit);
      }
      out.push_back(byte);
    }
  }
  return out;
}

std::string corpus_name(const CorpusKind& kind) {
  if (const auto* c = std::get_if<ConstantCorpus>(&kind)) {
    return "constant-" + std::to_string(c->n) + "-" + std::to_string(c->byte);
  }
  if (const auto* c = std::get_if<NoiseCorpus>(&kind)) {
    return "noise-" + std::to_string(c->n) + "-" + std::to_string(c->seed);
  }
  const auto& s = std::get<StructuredCorpus>(kind);
  return "rule110-" + std::to_string(s.width) + "x" + std::to_string(s.generations);
}

ProxyResult proxy_depth_report(std::span<const CorpusKind> corpus, const CostModel& model, unsigned workers) {
  model.validate();
  ProxyResult result;
  result.reports.resize(corpus.size());

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < corpus.size(); i = next.fetch_add(1)) {
      const auto data = generate_corpus(corpus[i]);
      const CodecFrame frame = compress(data);
      const auto decoded = decompress_instrumented(frame, model);
      if (decoded.data != data) throw CodecError("round trip failed for " + corpus_name(corpus[i]));
      result.reports[i] = ProxyReport{corpus_name(corpus[i]), data.size(), frame.bit_length(), decoded.steps};
    }
  };
  if (workers <= 1 || corpus.size() <= 1) {
    work();
  } else {
    // Failures inside workers are rethrown after the join.
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> threads;
      for (unsigned w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
          try {
            work();
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  const std::size_t n = result.reports.size();
  result.decode_order.assign(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto a = result.reports[i].decode_steps;
      const auto b = result.reports[j].decode_steps;
      result.decode_order[i][j] = a < b ? -1 : (a > b ? 1 : 0);
    }
  }
  return result;
}

std::string format_ratio(std::uint64_t numerator, std::uint64_t denominator) {
  __extension__ typedef unsigned __int128 u128;
  if (denominator == 0) return "0.000000";
  const auto scaled = static_cast<u128>(numerator) * 1000000u / denominator;
  const auto whole = static_cast<std::uint64_t>(scaled / 1000000u);
  std::string frac = std::to_string(static_cast<std::uint64_t>(scaled % 1000000u));
  frac.insert(0, 6 - frac.size(), '0');
  return std::to_string(whole) + "." + frac;
}

std::string proxy_csv(const ProxyResult& result) {
  std::string csv = "name,n_bytes,compressed_bits,decode_steps,steps_per_output_byte\n";
  for (const auto& r : result.reports) {
    csv += r.name + "," + std::to_string(r.original_bytes) + "," + std::to_string(r.compressed_bits) + "," +
           std::to_string(r.decode_steps) + "," + format_ratio(r.decode_steps, r.original_bytes) + "\n";
  }
  return csv;
}

}  // namespace depthlab
