#include "doctest.h"
#include "depthlab/scenario.hpp"
#include "depthlab/verify.hpp"

using namespace depthlab;

namespace {

BitString bs(const char* text) { return BitString::parse(text); }
Program pg(const char* text) { return Program::parse(text); }

std::optional<RejectReason> reason_of(const Transcript& t) {
  if (const auto* r = std::get_if<Reject>(&t.verdict())) return r->reason;
  return std::nullopt;
}

std::size_t row_index(const ProverMessages& m, const Program& p) {
  const auto table = decode_table(m);
  REQUIRE(table.has_value());
  for (std::size_t i = 0; i < table->rows.size(); ++i) {
    if (table->rows[i].program == p) return i;
  }
  FAIL("program not in table");
  return 0;
}

}  // namespace

TEST_CASE("output claims") {
  auto ok = verify_output_claim({pg("010000"), bs("1"), 2});
  CHECK(ok.accepted());
  CHECK(ok.verifier_steps() == 2);
  CHECK(reason_of(verify_output_claim({pg("010000"), bs("1"), 1})) == RejectReason::Timeout);
  CHECK(reason_of(verify_output_claim({pg("010000"), bs("0"), 10})) == RejectReason::OutputMismatch);
  CHECK(reason_of(verify_output_claim({pg("010000"), bs(""), 10})) == RejectReason::OutputMismatch);
  CHECK(reason_of(verify_output_claim({pg("000000"), bs(""), 10})) == RejectReason::InvalidProgram);
  CHECK(reason_of(verify_output_claim({pg("010"), bs("1"), 10})) == RejectReason::InvalidProgram);
  CHECK(reason_of(verify_output_claim({pg("111000"), bs(""), 10})) == RejectReason::InvalidProgram);
  CHECK_THROWS_AS(verify_output_claim({pg("000"), bs(""), 0}), std::invalid_argument);
}

TEST_CASE("honest minimality tables") {
  const auto m = prove_minimality({pg("010000"), bs("1"), 10});
  const auto table = decode_table(m);
  REQUIRE(table.has_value());
  CHECK(table->rows.size() == 6);
  CHECK(table->coverage == TableCoverage{6, 10, 6});
  CHECK(m.prover_steps > 0);
  CHECK(m.messages.size() == 7);
  const auto again = prove_minimality({pg("010000"), bs("1"), 10});
  CHECK(again.messages.size() == m.messages.size());
  for (std::size_t i = 0; i < m.messages.size(); ++i) CHECK(again.messages[i].payload == m.messages[i].payload);
  const auto reencoded = encode_table(*table, m.prover_steps);
  for (std::size_t i = 0; i < m.messages.size(); ++i) CHECK(reencoded.messages[i].payload == m.messages[i].payload);

  const auto tiny = decode_table(prove_minimality({pg("000"), bs(""), 10}));
  REQUIRE(tiny.has_value());
  REQUIRE(tiny->rows.size() == 1);
  CHECK(tiny->rows[0] == TableRow{pg("000"), bs(""), 1});
}

TEST_CASE("minimality verification") {
  const MinimalityClaim claim{pg("010000"), bs("1"), 10};
  const auto honest = prove_minimality(claim);
  CHECK(verify_minimality(claim, honest, FullReplay{}).accepted());
  CHECK(verify_minimality(claim, honest, SpotCheck{3, 7}).accepted());

  // INCA OUT1 DECA HALT: outputs "1" in 4 steps while 010000 takes 2.
  const MinimalityClaim slow{pg("011010100000"), bs("1"), 10};
  const auto table = prove_minimality(slow);
  const auto omitted = cheat_omit(table, row_index(table, pg("010000")));
  const auto full = verify_minimality(slow, omitted, FullReplay{});
  REQUIRE(reason_of(full) == RejectReason::CounterexampleFound);
  const auto& evidence = *std::get<Reject>(full.verdict()).evidence;
  CHECK(evidence.program == pg("010000"));
  CHECK(evidence.steps == 2);
  CHECK(verify_output_claim({evidence.program, bs("1"), evidence.steps}).accepted());
  CHECK(full.table_discrepancies() == 1);
  // INCA OUT1 HALT takes 3; its only faster rival is 010000. Omitting that
  // row escapes the spot checker, a documented non-soundness.
  const MinimalityClaim three{pg("011010000"), bs("1"), 10};
  const auto three_table = prove_minimality(three);
  const auto hidden = cheat_omit(three_table, row_index(three_table, pg("010000")));
  CHECK(verify_minimality(three, hidden, SpotCheck{1000, 1}).accepted());
  CHECK(reason_of(verify_minimality(three, hidden, FullReplay{})) == RejectReason::CounterexampleFound);
  CHECK(reason_of(verify_minimality(slow, table, SpotCheck{1, 1})) == RejectReason::CounterexampleFound);

  // Ties do not refute: 001000 and 010000 both take 2 steps.
  CHECK(verify_minimality({pg("001000"), bs("0"), 10}, prove_minimality({pg("001000"), bs("0"), 10}), FullReplay{})
            .accepted());

  CHECK(reason_of(verify_minimality({pg("010000"), bs("1"), 1}, honest, FullReplay{})) == RejectReason::Timeout);
}

TEST_CASE("spot check with k = table size catches every falsified row") {
  const MinimalityClaim claim{pg("010000"), bs("1"), 10};
  const auto honest = prove_minimality(claim);
  const auto rows = decode_table(honest)->rows.size();
  for (std::size_t row = 0; row < rows; ++row) {
    for (std::uint64_t seed : {0ull, 1ull, 42ull, 0xdeadbeefull}) {
      const auto bad = cheat_falsify(honest, row, bs("11"), 3);
      const auto t = verify_minimality(claim, bad, SpotCheck{rows, seed});
      CHECK(reason_of(t) == RejectReason::ReplayMismatch);
      // Full mode ignores the table and follows ground truth.
      CHECK(verify_minimality(claim, bad, FullReplay{}).accepted());
    }
  }
  CHECK_THROWS_AS(cheat_falsify(honest, rows, bs("1"), 1), std::invalid_argument);
  CHECK_THROWS_AS(cheat_omit(honest, rows), std::invalid_argument);
}

TEST_CASE("falsified counterexample is confirmed before rejecting") {
  // A fake fast row for x would look like a counterexample; spot mode must
  // replay it before accepting that conclusion.
  const MinimalityClaim claim{pg("010000"), bs("1"), 10};
  const auto honest = prove_minimality(claim);
  const auto bad = cheat_falsify(honest, row_index(honest, pg("000")), bs("1"), 1);
  const auto t = verify_minimality(claim, bad, SpotCheck{0, 5});
  CHECK(reason_of(t) == RejectReason::ReplayMismatch);
}

TEST_CASE("malformed and insufficient tables") {
  const MinimalityClaim claim{pg("010000"), bs("1"), 10};
  ProverMessages empty;
  CHECK(reason_of(verify_minimality(claim, empty, FullReplay{})) == RejectReason::Malformed);

  auto truncated = prove_minimality(claim);
  truncated.messages.pop_back();
  CHECK_FALSE(decode_table(truncated).has_value());
  CHECK(reason_of(verify_minimality(claim, truncated, FullReplay{})) == RejectReason::Malformed);

  auto swapped = prove_minimality(claim);
  std::swap(swapped.messages[1], swapped.messages[2]);
  CHECK_FALSE(decode_table(swapped).has_value());

  auto garbage = prove_minimality(claim);
  garbage.messages[1].bits = 1;
  CHECK_FALSE(decode_table(garbage).has_value());

  // A table built for a smaller budget cannot back a spot check.
  const auto small = prove_minimality({pg("010000"), bs("1"), 3});
  CHECK(reason_of(verify_minimality(claim, small, SpotCheck{6, 1})) == RejectReason::InsufficientProof);
}

TEST_CASE("depth claims") {
  const auto messages = prove_depth({bs("1"), 10, 0, 6});
  CHECK(verify_depth_claim({bs("1"), 2, 0, 6}, messages).accepted());
  const auto r = verify_depth_claim({bs("1"), 3, 0, 6}, messages);
  REQUIRE(reason_of(r) == RejectReason::CounterexampleFound);
  CHECK(std::get<Reject>(r.verdict()).evidence->program == pg("010000"));
  CHECK(std::get<Reject>(r.verdict()).evidence->steps == 2);

  CHECK(verify_depth_claim({bs(""), 1, 0, 3}, prove_depth({bs(""), 10, 0, 3})).accepted());
  CHECK(verify_depth_claim({bs(""), 1, 0, 3}, prove_depth({bs(""), 1, 0, 3})).accepted());

  // Coverage too short in program length or steps.
  CHECK(reason_of(verify_depth_claim({bs("1"), 2, 0, 6}, prove_depth({bs("1"), 10, 0, 3}))) ==
        RejectReason::InsufficientProof);
  CHECK(reason_of(verify_depth_claim({bs("1"), 20, 0, 6}, messages)) == RejectReason::InsufficientProof);
}

TEST_CASE("transcript accounting") {
  const MinimalityClaim claim{pg("010000"), bs("1"), 10};
  const auto t = verify_minimality(claim, prove_minimality(claim), SpotCheck{4, 9});
  std::size_t sum = 0;
  for (const auto& m : t.messages()) sum += m.bits;
  CHECK(t.total_payload_bits() == sum);
  CHECK(t.messages().front().label == "claim");
  CHECK(t.messages().back().label == "challenge");
  CHECK(t.messages().back().sender == Party::Verifier);
  CHECK(t.prover_steps() > 0);
  CHECK(t.verifier_steps() > 0);

  Transcript fresh;
  CHECK_THROWS_AS(fresh.verdict(), std::logic_error);
  fresh.set_verdict(Accept{});
  CHECK_THROWS_AS(fresh.set_verdict(Accept{}), std::logic_error);
}

TEST_CASE("refute_shallow") {
  const auto r = refute_shallow(bs("1"), 100, 6, 10);
  REQUIRE(r.has_value());
  CHECK(r->program == pg("010000"));
  CHECK(r->steps == 2);
  CHECK(verify_output_claim({r->program, r->x, r->steps}).accepted());
  CHECK_FALSE(refute_shallow(bs("11"), 100, 6, 10).has_value());
  CHECK_FALSE(refute_shallow(bs("1"), 2, 6, 10).has_value());
  CHECK(refute_shallow(bs("1"), 3, 6, 10).has_value());
  CHECK_FALSE(refute_shallow(bs(""), 1, 6, 10).has_value());
  CHECK_THROWS_AS(refute_shallow(bs(""), 0, 6, 10), std::invalid_argument);
}

TEST_CASE("scenarios") {
  const char* text = R"({"claim": {"type": "minimality", "p": "010000", "x": "1", "t": 10},
                         "prover": {"type": "cheat-falsify", "row": 2, "fake": {"output": "0", "steps": 1}},
                         "verifier_mode": {"type": "spot", "k": 6}, "seed": 17})";
  const Scenario s = parse_scenario_text(text);
  CHECK(std::holds_alternative<MinimalityClaim>(s.claim));
  CHECK(std::get<FalsifyRow>(s.prover).row == 2);
  CHECK(std::get<SpotCheck>(s.verifier_mode).seed == 17);
  CHECK(parse_scenario(scenario_to_json(s)).seed == 17);
  CHECK(scenario_to_json(parse_scenario(scenario_to_json(s))) == scenario_to_json(s));

  const auto a = run_scenario(s);
  const auto b = run_scenario(s);
  CHECK(reason_of(a) == RejectReason::ReplayMismatch);
  REQUIRE(a.messages().size() == b.messages().size());
  for (std::size_t i = 0; i < a.messages().size(); ++i) {
    CHECK(a.messages()[i].payload == b.messages()[i].payload);
    CHECK(a.messages()[i].bits == b.messages()[i].bits);
  }
  CHECK(a.verifier_steps() == b.verifier_steps());
  CHECK(a.prover_steps() == b.prover_steps());

  CHECK(run_scenario(parse_scenario_text(R"({"claim": {"type": "output", "p": "010000", "x": "1", "t": 2}})"))
            .accepted());
  CHECK(run_scenario(parse_scenario_text(
                         R"({"claim": {"type": "depth", "x": "1", "t": 2, "s": 0, "k_hat": 6}, "prover": "honest"})"))
            .accepted());

  CHECK_THROWS_AS(parse_scenario_text("{"), std::invalid_argument);
  CHECK_THROWS_AS(parse_scenario_text(R"({"claim": {"type": "magic"}})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_scenario_text(R"({"claim": {"type": "output", "p": "0102", "x": "", "t": 1}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_scenario_text(R"({"claim": {"type": "output", "p": "000", "x": "", "t": 0}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_scenario(parse_scenario_text(
                      R"({"claim": {"type": "output", "p": "000", "x": "", "t": 1}, "prover": {"type": "cheat-omit", "row": 0}})")),
                  std::invalid_argument);
}
