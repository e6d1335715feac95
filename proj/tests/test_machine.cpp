#include <set>

#include "doctest.h"
#include "depthlab/machine.hpp"
#include "oracle.hpp"

using namespace depthlab;

namespace {

ExecutionOutcome run_text(const char* text, std::uint64_t steps, std::uint64_t cap = 64) {
  return run(Program::parse(text), MachineLimits{steps, cap});
}

}  // namespace

TEST_CASE("hand-traced programs") {
  CHECK(run_text("000", 10) == ExecutionOutcome{Halted{BitString::parse(""), 1, 3}});
  CHECK(run_text("010 001 000", 10) == ExecutionOutcome{Halted{BitString::parse("10"), 3, 9}});
  // A = 0: LBEG scans OUT1 and LEND, then HALT.
  CHECK(run_text("110 010 111 000", 10) == ExecutionOutcome{Halted{BitString::parse(""), 4, 12}});
  CHECK(run_text("011 110 111", 100) == ExecutionOutcome{Timeout{100}});
}

TEST_CASE("loop body executes while A is nonzero") {
  // INCA INCA LBEG OUT1 DECA LEND HALT: body runs twice, LBEG re-executes on each jump.
  const auto outcome = run_text("011 011 110 010 100 111 000", 100);
  REQUIRE(std::holds_alternative<Halted>(outcome));
  const auto& h = std::get<Halted>(outcome);
  CHECK(h.output.str() == "11");
  // 2 INCA + LBEG + 2*(OUT1 DECA LEND) + LBEG(re-entry) + HALT
  CHECK(h.steps == 2 + 1 + 6 + 1 + 1);
}

TEST_CASE("failure modes") {
  CHECK(std::holds_alternative<InputUnderflow>(run_text("", 10)));
  CHECK(std::holds_alternative<InputUnderflow>(run_text("01", 10)));
  CHECK(std::holds_alternative<InputUnderflow>(run_text("010", 10)));
  CHECK(std::holds_alternative<UnmatchedBracket>(run_text("111", 10)));
  CHECK(std::holds_alternative<UnmatchedBracket>(run_text("011 111", 10)));
  CHECK(std::holds_alternative<OutputOverflow>(run_text("010 010 000", 10, 1)));
  CHECK(run_text("010 000", 1) == ExecutionOutcome{Timeout{1}});
  // Scanning past the end of the program is an underflow, not a halt.
  CHECK(std::holds_alternative<InputUnderflow>(run_text("110 000", 10)));
}

TEST_CASE("halting before the end leaves the program invalid") {
  const auto p = Program::parse("000 000");
  const auto outcome = run(p, MachineLimits{10, 8});
  REQUIRE(std::holds_alternative<Halted>(outcome));
  CHECK(std::get<Halted>(outcome).consumed_bits == 3);
  CHECK_FALSE(is_valid_run(p, outcome));
}

TEST_CASE("DecA floors at zero and Swap exchanges registers") {
  auto output_of = [](const char* text) {
    const auto outcome = run_text(text, 100);
    REQUIRE(std::holds_alternative<Halted>(outcome));
    return std::get<Halted>(outcome).output.str();
  };
  // DECA on zero leaves A = 0, so the loop is skipped.
  CHECK(output_of("100 110 010 111 000") == "");
  // INCA SWAP: the 1 moves to B and the loop is skipped.
  CHECK(output_of("011 101 110 010 111 000") == "");
  // INCA SWAP SWAP: back in A, the body runs once.
  CHECK(output_of("011 101 101 110 010 100 111 000") == "1");
}

TEST_CASE("parse_program") {
  CHECK(Program::parse("000").str() == "000");
  CHECK(Program::parse("010 000").str() == "010000");
  CHECK(Program::parse(" 0\t1\n0 ").str() == "010");
  CHECK_THROWS_AS(Program::parse("01a"), std::invalid_argument);
}

TEST_CASE("limits must be positive") {
  CHECK_THROWS_AS(run_text("000", 0), std::invalid_argument);
  CHECK_THROWS_AS(run(Program::parse("000"), MachineLimits{10, 0}), std::invalid_argument);
}

TEST_CASE("run agrees with the reference interpreter on every bitstring up to 15 bits") {
  for (std::uint64_t steps : {1u, 4u, 20u, 100u}) {
    for (std::uint64_t cap : {1u, 3u}) {
      for (std::size_t length = 0; length <= 15; ++length) {
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << length); ++v) {
          const std::string bits = oracle::bits_of(v, length);
          const auto expected = oracle::reference_run(bits, steps, cap);
          const auto actual = run(Program(BitString::parse(bits)), MachineLimits{steps, cap});
          if (!(expected == actual)) FAIL("mismatch on ", bits, " t=", steps, " cap=", cap);
        }
      }
    }
  }
}

TEST_CASE("valid programs form a prefix-free set") {
  std::vector<std::string> valid;
  for (std::size_t length = 0; length <= 15; ++length) {
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << length); ++v) {
      const Program p(BitString::parse(oracle::bits_of(v, length)));
      if (is_valid_run(p, run(p, MachineLimits{200, 16}))) valid.push_back(p.str());
    }
  }
  REQUIRE(valid.size() > 100);
  std::set<std::string> all(valid.begin(), valid.end());
  for (const auto& p : valid) {
    for (std::size_t k = 0; k < p.size(); ++k) CHECK_FALSE(all.count(p.substr(0, k)));
    CHECK(p.size() % 3 == 0);
  }
}

TEST_CASE("determinism and step monotonicity") {
  for (std::size_t length = 3; length <= 12; length += 3) {
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << length); ++v) {
      const Program p(BitString::parse(oracle::bits_of(v, length)));
      const MachineLimits limits{60, 12};
      const auto first = run(p, limits);
      CHECK(first == run(p, limits));
      if (const auto* h = std::get_if<Halted>(&first)) {
        for (std::uint64_t t : {h->steps, h->steps + 1, h->steps + 7, std::uint64_t{10000}}) {
          CHECK(run(p, MachineLimits{t, 12}) == first);
        }
      }
      std::uint64_t used = 0;
      run(p, limits, &used);
      CHECK(used <= limits.max_steps);
    }
  }
}
