#include "doctest.h"
#include "depthlab/proxy.hpp"
#include "depthlab/rng.hpp"

#include <algorithm>
#include <string>

using namespace depthlab;

namespace {

std::vector<std::uint8_t> bytes_of(std::string_view s) { return {s.begin(), s.end()}; }

// Quadratic greedy parse straight from the definition.
std::vector<Token> brute_force_parse(const std::vector<std::uint8_t>& d) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < d.size()) {
    std::size_t best_len = 0, best_off = 0;
    for (std::size_t off = 1; off <= std::min(i, kWindowSize); ++off) {
      std::size_t len = 0;
      while (len < kMaxMatch && i + len < d.size() && d[i + len] == d[i + len - off]) ++len;
      if (len > best_len) {
        best_len = len;
        best_off = off;
      }
    }
    if (best_len >= kMinMatch) {
      out.push_back(MatchToken{static_cast<std::uint16_t>(best_off), static_cast<std::uint8_t>(best_len)});
      i += best_len;
    } else {
      out.push_back(LiteralToken{d[i]});
      ++i;
    }
  }
  return out;
}

std::vector<std::uint8_t> random_input(Xorshift64Star& rng) {
  const std::size_t size_class = rng.uniform_below(10);
  std::size_t n = size_class < 6 ? rng.uniform_below(300) : size_class < 9 ? rng.uniform_below(8192)
                                                                           : rng.uniform_below(65537);
  std::vector<std::uint8_t> d(n);
  const std::uint64_t alphabet = 1 + rng.uniform_below(256);
  for (auto& b : d) b = static_cast<std::uint8_t>(rng.uniform_below(alphabet));
  // Splice in some repeats, including self-overlapping ones.
  for (int k = 0; k < 4 && n > 8; ++k) {
    const std::size_t dst = rng.uniform_below(n);
    const std::size_t src = rng.uniform_below(dst + 1);
    const std::size_t len = std::min<std::size_t>(rng.uniform_below(200), n - dst);
    for (std::size_t j = 0; j < len; ++j) d[dst + j] = d[src + j];
  }
  return d;
}

}  // namespace

TEST_CASE("hand-traced frames") {
  const auto empty = compress({});
  CHECK(empty.output_length == 0);
  CHECK(empty.tokens.empty());
  CHECK(encode_frame(empty) == std::vector<std::uint8_t>{0, 0, 0, 0});
  CHECK(decompress_instrumented(empty).steps == 0);

  const auto ab = compress(bytes_of("AB"));
  CHECK(ab.tokens == std::vector<Token>{LiteralToken{'A'}, LiteralToken{'B'}});
  CHECK(decompress_instrumented(ab).steps == 4);

  const auto a6 = compress(bytes_of("AAAAAA"));
  CHECK(a6.tokens == std::vector<Token>{LiteralToken{'A'}, MatchToken{1, 5}});
  const auto decoded = decompress_instrumented(a6);
  CHECK(decoded.data == bytes_of("AAAAAA"));
  CHECK(decoded.steps == 8);
  CHECK(a6.bit_length() == 32 + 9 + 19);
  // 00000006 | 0 01000001 | 1 000000000000 000010 | pad
  CHECK(encode_frame(a6) == std::vector<std::uint8_t>{0x00, 0x00, 0x00, 0x06, 0x20, 0xC0, 0x00, 0x20});
}

TEST_CASE("ties go to the smallest offset") {
  const auto f = compress(bytes_of("abcXabcYabc"));
  REQUIRE(f.tokens.size() == 7);
  CHECK(f.tokens.back() == Token{MatchToken{4, 3}});
}

TEST_CASE("greedy parse matches a brute-force reference") {
  auto rng = Xorshift64Star::from_any_seed(2024);
  for (int i = 0; i < 150; ++i) {
    std::vector<std::uint8_t> d(rng.uniform_below(600));
    const std::uint64_t alphabet = 1 + rng.uniform_below(4);
    for (auto& b : d) b = static_cast<std::uint8_t>(rng.uniform_below(alphabet));
    CHECK(compress(d).tokens == brute_force_parse(d));
  }
  const auto c = generate_corpus(StructuredCorpus{64, 80});
  CHECK(compress(c).tokens == brute_force_parse(c));
  std::vector<std::uint8_t> long_run(kWindowSize + 500, 'z');
  long_run[kWindowSize / 2] = 'y';
  CHECK(compress(long_run).tokens == brute_force_parse(long_run));
}

TEST_CASE("round trip fuzz") {
  auto rng = Xorshift64Star::from_any_seed(7);
  for (int i = 0; i < 1000; ++i) {
    const auto d = random_input(rng);
    const auto frame = compress(d);
    validate_frame(frame);
    const auto bytes = encode_frame(frame);
    CHECK(bytes.size() == (frame.bit_length() + 7) / 8);
    const auto parsed = decode_frame(bytes);
    REQUIRE(parsed == frame);
    const auto result = decompress_instrumented(parsed);
    REQUIRE(result.data == d);
  }
  for (const CorpusKind& kind : {CorpusKind{ConstantCorpus{65536, 0}}, CorpusKind{NoiseCorpus{65536, 99}},
                                 CorpusKind{StructuredCorpus{128, 512}}}) {
    const auto d = generate_corpus(kind);
    CHECK(decompress_instrumented(decode_frame(encode_frame(compress(d)))).data == d);
  }
}

TEST_CASE("strict frame parser") {
  const auto good = encode_frame(compress(bytes_of("AAAAAA")));
  auto truncated = good;
  truncated.pop_back();
  CHECK_THROWS_AS(decode_frame(truncated), CodecError);
  CHECK_THROWS_AS(decode_frame(std::vector<std::uint8_t>{0, 0, 0}), CodecError);
  auto trailing = good;
  trailing.push_back(0);
  CHECK_THROWS_AS(decode_frame(trailing), CodecError);
  auto padded = good;
  padded.back() |= 0x01;
  CHECK_THROWS_AS(decode_frame(padded), CodecError);
  // Match before any output: offset 1 with nothing decoded.
  CHECK_THROWS_AS(decode_frame(std::vector<std::uint8_t>{0, 0, 0, 3, 0x80, 0x00, 0x00}), CodecError);
  // Match overruns the declared length.
  auto overrun = good;
  overrun[3] = 4;
  CHECK_THROWS_AS(decode_frame(overrun), CodecError);

  CHECK_THROWS_AS(validate_frame(CodecFrame{1, {MatchToken{1, 3}}}), CodecError);
  CHECK_THROWS_AS(validate_frame(CodecFrame{5, {LiteralToken{1}, MatchToken{1, 2}}}), CodecError);
  CHECK_THROWS_AS(validate_frame(CodecFrame{2, {LiteralToken{1}}}), CodecError);
  CHECK_THROWS_AS(decompress_instrumented(CodecFrame{3, {MatchToken{2, 3}}}), CodecError);
}

TEST_CASE("cost model") {
  const auto frame = compress(generate_corpus(StructuredCorpus{64, 64}));
  const auto base = decompress_instrumented(frame, {3, 5, 7}).steps;
  CHECK(decompress_instrumented(frame, {6, 10, 14}).steps == 2 * base);
  std::uint64_t expected = 0;
  for (const auto& t : frame.tokens) {
    if (const auto* m = std::get_if<MatchToken>(&t)) {
      expected += 3 + 7 * m->length;
    } else {
      expected += 3 + 5;
    }
  }
  CHECK(base == expected);
  CHECK_THROWS_AS(CostModel({0, 0, 0}).validate(), std::invalid_argument);
  CHECK_NOTHROW(CostModel({0, 0, 1}).validate());
}

TEST_CASE("corpora") {
  CHECK(generate_corpus(ConstantCorpus{4, 'A'}) == bytes_of("AAAA"));
  CHECK(generate_corpus(StructuredCorpus{8, 1}) == std::vector<std::uint8_t>{0x01});
  CHECK(generate_corpus(StructuredCorpus{8, 2}) == std::vector<std::uint8_t>{0x01, 0x03});
  CHECK(generate_corpus(StructuredCorpus{8, 4}) == std::vector<std::uint8_t>{0x01, 0x03, 0x07, 0x0D});
  CHECK(generate_corpus(StructuredCorpus{10, 2}) == std::vector<std::uint8_t>{0x00, 0x40, 0x00, 0xC0});
  CHECK(generate_corpus(NoiseCorpus{8, 1}) ==
        std::vector<std::uint8_t>{0x47, 0xab, 0xb9, 0x4d, 0x0e, 0xc8, 0xd0, 0xac});
  CHECK_THROWS_AS(generate_corpus(NoiseCorpus{8, 0}), std::invalid_argument);
  CHECK_THROWS_AS(generate_corpus(ConstantCorpus{0, 1}), std::invalid_argument);
  CHECK(corpus_name(StructuredCorpus{256, 2048}) == "rule110-256x2048");
}

TEST_CASE("proxy report") {
  const std::vector<CorpusKind> small = {ConstantCorpus{1024, 'A'}, NoiseCorpus{1024, 1}};
  const auto r = proxy_depth_report(small);
  CHECK(r.reports[0].compressed_bits < 8 * 1024 / 10);
  CHECK(r.reports[1].compressed_bits >= 8 * 1024);
  CHECK(r.decode_order[0][0] == 0);
  CHECK(r.decode_order[0][1] == -r.decode_order[1][0]);

  const std::vector<CorpusKind> items = {ConstantCorpus{4096, 7}, NoiseCorpus{4096, 3}, StructuredCorpus{64, 256},
                                         ConstantCorpus{100, 1}, NoiseCorpus{333, 5}};
  const auto csv = proxy_csv(proxy_depth_report(items, {}, 1));
  for (unsigned w : {2u, 3u, 8u}) CHECK(proxy_csv(proxy_depth_report(items, {}, w)) == csv);
  CHECK(csv.rfind("name,n_bytes,compressed_bits,decode_steps,steps_per_output_byte\n", 0) == 0);

  CHECK(format_ratio(2, 1) == "2.000000");
  CHECK(format_ratio(1, 3) == "0.333333");
  CHECK(format_ratio(2, 3) == "0.666666");
  CHECK(format_ratio(0, 0) == "0.000000");
}
