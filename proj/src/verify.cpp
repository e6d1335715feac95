#include "depthlab/verify.hpp"

#include <algorithm>
#include <stdexcept>

#include "depthlab/rng.hpp"

namespace depthlab {

namespace {

constexpr std::uint64_t kClaimOutput = 0;
constexpr std::uint64_t kClaimMinimality = 1;
constexpr std::uint64_t kClaimDepth = 2;

std::uint64_t cap_for(std::size_t program_bits, const BitString& x) {
  return std::max<std::uint64_t>({program_bits, x.size(), 1});
}

Message claim_message(const Claim& claim) {
  BitWriter w;
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, OutputClaim> || std::is_same_v<T, MinimalityClaim>) {
          w.write_bits(std::is_same_v<T, OutputClaim> ? kClaimOutput : kClaimMinimality, 2);
          w.write_bitstring(c.p.bits());
          w.write_bitstring(c.x);
          w.write_gamma(c.t);
        } else {
          w.write_bits(kClaimDepth, 2);
          w.write_bitstring(c.x);
          w.write_gamma(c.t);
          w.write_gamma(c.s);
          w.write_gamma(c.k_hat);
        }
      },
      claim);
  return make_message(Party::Prover, "claim", std::move(w));
}

// Replays `program` and maps the outcome against the expected output.
std::optional<Reject> check_output(const Program& program, const BitString& x, const MachineLimits& limits,
                                   std::uint64_t& steps_used) {
  const auto outcome = run(program, limits, &steps_used);
  if (const auto* halted = std::get_if<Halted>(&outcome)) {
    if (halted->consumed_bits != program.length()) {
      return Reject{RejectReason::InvalidProgram, "program halts before consuming all of its bits", std::nullopt};
    }
    if (halted->output != x) {
      return Reject{RejectReason::OutputMismatch, "program outputs '" + halted->output.str() + "'", std::nullopt};
    }
    return std::nullopt;
  }
  if (std::holds_alternative<Timeout>(outcome)) {
    return Reject{RejectReason::Timeout, "program does not halt within " + std::to_string(limits.max_steps) + " steps",
                  std::nullopt};
  }
  if (std::holds_alternative<OutputOverflow>(outcome)) {
    return Reject{RejectReason::OutputMismatch, "program output exceeds the claimed output", std::nullopt};
  }
  return Reject{RejectReason::InvalidProgram, std::string("program is not valid: ") + std::string(outcome_name(outcome)),
                std::nullopt};
}

bool row_replays(const TableRow& row, const MachineLimits& limits, std::uint64_t& steps_used) {
  const auto outcome = run(row.program, limits, &steps_used);
  const auto* halted = std::get_if<Halted>(&outcome);
  return halted != nullptr && halted->consumed_bits == row.program.length() && halted->output == row.output &&
         halted->steps == row.steps;
}

// Fastest row for x strictly below `steps_bound`, ties to the smaller program.
std::optional<TableRow> fastest_for(const std::vector<TableRow>& rows, const BitString& x, std::uint64_t steps_bound) {
  std::optional<TableRow> best;
  for (const auto& row : rows) {
    if (row.output != x || row.steps >= steps_bound) continue;
    if (!best || row.steps < best->steps) best = row;
  }
  return best;
}

std::size_t count_discrepancies(const std::vector<TableRow>& claimed, const std::vector<TableRow>& truth) {
  std::vector<TableRow> a = claimed;
  std::vector<TableRow> b = truth;
  auto less = [](const TableRow& l, const TableRow& r) {
    if (l.program != r.program) return l.program < r.program;
    if (l.output != r.output) return l.output < r.output;
    return l.steps < r.steps;
  };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  std::vector<TableRow> diff;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff), less);
  return diff.size();
}

void copy_prover_messages(Transcript& transcript, const ProverMessages& messages) {
  for (const auto& m : messages.messages) transcript.send(m);
  transcript.add_prover_steps(messages.prover_steps);
}

ProofTable enumerate_table(unsigned max_program_bits, std::uint64_t max_steps, std::uint64_t max_output_bits,
                           const BuildOptions& options, std::uint64_t& steps_used) {
  ProofTable table{TableCoverage{max_program_bits, max_steps, max_output_bits}, {}};
  steps_used = 0;
  if (max_program_bits < kOpcodeBits || max_steps == 0) return table;  // no valid program fits
  CensusParams params{max_program_bits, MachineLimits{max_steps, max_output_bits}, std::string(kMachineVersion)};
  BuildStats stats;
  table = table_from_census(build_census(params, options, &stats));
  steps_used = stats.machine_steps;
  return table;
}

}  // namespace

void validate_claim(const Claim& claim) {
  const std::uint64_t t = std::visit([](const auto& c) { return c.t; }, claim);
  if (t == 0) throw std::invalid_argument("claim step bound t must be >= 1");
}

Message make_message(Party sender, std::string label, BitWriter writer) {
  const std::size_t bits = writer.bit_count();
  return Message{sender, std::move(label), std::move(writer).take_bytes(), bits};
}

std::string_view reject_reason_name(RejectReason reason) {
  switch (reason) {
    case RejectReason::Timeout: return "timeout";
    case RejectReason::OutputMismatch: return "output-mismatch";
    case RejectReason::InvalidProgram: return "invalid-program";
    case RejectReason::Malformed: return "malformed";
    case RejectReason::CounterexampleFound: return "counterexample-found";
    case RejectReason::ReplayMismatch: return "replay-mismatch";
    case RejectReason::InsufficientProof: return "insufficient-proof";
  }
  return "unknown";
}

void Transcript::send(Message message) { messages_.push_back(std::move(message)); }

void Transcript::set_verdict(Verdict verdict) {
  if (verdict_) throw std::logic_error("transcript verdict already set");
  verdict_ = std::move(verdict);
}

const Verdict& Transcript::verdict() const {
  if (!verdict_) throw std::logic_error("transcript has no verdict yet");
  return *verdict_;
}

std::size_t Transcript::total_payload_bits() const {
  std::size_t total = 0;
  for (const auto& m : messages_) total += m.bits;
  return total;
}

ProofTable table_from_census(const HaltingCensus& census) {
  const auto& params = census.params();
  ProofTable table{TableCoverage{params.max_program_bits, params.limits.max_steps, params.limits.max_output_bits}, {}};
  for (const auto& [output, list] : census.entries()) {
    for (const auto& entry : list) table.rows.push_back(TableRow{entry.program, output, entry.steps});
  }
  std::sort(table.rows.begin(), table.rows.end(),
            [](const TableRow& a, const TableRow& b) { return a.program < b.program; });
  return table;
}

ProverMessages encode_table(const ProofTable& table, std::uint64_t prover_steps) {
  ProverMessages out;
  out.prover_steps = prover_steps;
  BitWriter header;
  header.write_gamma(table.coverage.max_program_bits);
  header.write_gamma(table.coverage.max_steps);
  header.write_gamma(table.coverage.max_output_bits);
  header.write_gamma(table.rows.size());
  out.messages.push_back(make_message(Party::Prover, "coverage", std::move(header)));
  for (const auto& row : table.rows) {
    BitWriter w;
    w.write_bitstring(row.program.bits());
    w.write_bitstring(row.output);
    w.write_gamma(row.steps);
    out.messages.push_back(make_message(Party::Prover, "row", std::move(w)));
  }
  return out;
}

std::optional<ProofTable> decode_table(const ProverMessages& messages) {
  const auto& ms = messages.messages;
  if (ms.empty() || ms.front().label != "coverage" || ms.front().sender != Party::Prover) return std::nullopt;
  ProofTable table;
  try {
    BitReader header(ms.front().payload, ms.front().bits);
    const std::uint64_t max_bits = header.read_gamma();
    if (max_bits > kMaxCensusProgramBits) return std::nullopt;
    table.coverage.max_program_bits = static_cast<unsigned>(max_bits);
    table.coverage.max_steps = header.read_gamma();
    table.coverage.max_output_bits = header.read_gamma();
    const std::uint64_t count = header.read_gamma();
    if (header.remaining() != 0 || count != ms.size() - 1) return std::nullopt;

    for (std::size_t i = 1; i < ms.size(); ++i) {
      if (ms[i].label != "row" || ms[i].sender != Party::Prover) return std::nullopt;
      BitReader r(ms[i].payload, ms[i].bits);
      TableRow row;
      row.program = Program(r.read_bitstring());
      row.output = r.read_bitstring();
      row.steps = r.read_gamma();
      if (r.remaining() != 0) return std::nullopt;
      if (row.program.length() > table.coverage.max_program_bits) return std::nullopt;
      if (row.steps == 0 || row.steps > table.coverage.max_steps) return std::nullopt;
      if (row.output.size() > table.coverage.max_output_bits) return std::nullopt;
      if (!table.rows.empty() && !(table.rows.back().program < row.program)) return std::nullopt;
      table.rows.push_back(std::move(row));
    }
  } catch (const std::out_of_range&) {
    return std::nullopt;
  }
  return table;
}

ProverMessages prove_minimality(const MinimalityClaim& claim, const BuildOptions& options) {
  validate_claim(claim);
  const auto bits = static_cast<unsigned>(claim.p.length());
  std::uint64_t steps = 0;
  const ProofTable table = enumerate_table(bits, claim.t, cap_for(bits, claim.x), options, steps);
  return encode_table(table, steps);
}

ProverMessages prove_depth(const DepthClaim& claim, const BuildOptions& options) {
  validate_claim(claim);
  const auto bits = static_cast<unsigned>(claim.k_hat + claim.s);
  std::uint64_t steps = 0;
  const ProofTable table = enumerate_table(bits, claim.t, cap_for(bits, claim.x), options, steps);
  return encode_table(table, steps);
}

ProverMessages cheat_omit(const ProverMessages& honest, std::size_t row) {
  auto table = decode_table(honest);
  if (!table || row >= table->rows.size()) throw std::invalid_argument("cheat-omit row out of range");
  table->rows.erase(table->rows.begin() + static_cast<std::ptrdiff_t>(row));
  return encode_table(*table, honest.prover_steps);
}

ProverMessages cheat_falsify(const ProverMessages& honest, std::size_t row, const BitString& fake_output,
                             std::uint64_t fake_steps) {
  auto table = decode_table(honest);
  if (!table || row >= table->rows.size()) throw std::invalid_argument("cheat-falsify row out of range");
  table->rows[row].output = fake_output;
  table->rows[row].steps = fake_steps;
  return encode_table(*table, honest.prover_steps);
}

Transcript verify_output_claim(const OutputClaim& claim) {
  validate_claim(claim);
  Transcript transcript;
  transcript.send(claim_message(claim));
  std::uint64_t steps = 0;
  auto failure = check_output(claim.p, claim.x, MachineLimits{claim.t, cap_for(0, claim.x)}, steps);
  transcript.add_verifier_steps(steps);
  if (failure) {
    transcript.set_verdict(std::move(*failure));
  } else {
    transcript.set_verdict(Accept{});
  }
  return transcript;
}

Transcript verify_minimality(const MinimalityClaim& claim, const ProverMessages& messages, const VerifierMode& mode,
                             const BuildOptions& options) {
  validate_claim(claim);
  Transcript transcript;
  transcript.send(claim_message(claim));
  copy_prover_messages(transcript, messages);

  const auto table = decode_table(messages);
  if (!table) {
    transcript.set_verdict(Reject{RejectReason::Malformed, "prover table does not decode", std::nullopt});
    return transcript;
  }

  const auto bits = static_cast<unsigned>(claim.p.length());
  const MachineLimits limits{claim.t, cap_for(bits, claim.x)};
  std::uint64_t claimant_steps = 0;
  if (auto failure = check_output(claim.p, claim.x, limits, claimant_steps)) {
    transcript.add_verifier_steps(claimant_steps);
    transcript.set_verdict(std::move(*failure));
    return transcript;
  }
  transcript.add_verifier_steps(claimant_steps);

  if (std::holds_alternative<FullReplay>(mode)) {
    std::uint64_t steps = 0;
    const ProofTable truth = enumerate_table(bits, claim.t, limits.max_output_bits, options, steps);
    transcript.add_verifier_steps(steps);
    transcript.note_discrepancies(count_discrepancies(table->rows, truth.rows));
    if (auto beat = fastest_for(truth.rows, claim.x, claimant_steps)) {
      transcript.set_verdict(Reject{RejectReason::CounterexampleFound,
                                    beat->program.str() + " outputs x in " + std::to_string(beat->steps) + " steps",
                                    beat});
    } else {
      transcript.set_verdict(Accept{});
    }
    return transcript;
  }

  const auto& spot = std::get<SpotCheck>(mode);
  if (table->coverage != TableCoverage{bits, limits.max_steps, limits.max_output_bits}) {
    transcript.set_verdict(
        Reject{RejectReason::InsufficientProof, "table coverage does not match the claim", std::nullopt});
    return transcript;
  }

  // Challenge: partial Fisher-Yates over row indices.
  const std::size_t n = table->rows.size();
  const std::size_t k = std::min(spot.k, n);
  std::vector<std::size_t> indices(n);
  for (std::size_t i = 0; i < n; ++i) indices[i] = i;
  auto rng = Xorshift64Star::from_any_seed(spot.seed);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_below(n - i));
    std::swap(indices[i], indices[j]);
  }
  indices.resize(k);
  std::sort(indices.begin(), indices.end());
  BitWriter challenge;
  challenge.write_gamma(k);
  for (auto i : indices) challenge.write_gamma(i);
  transcript.send(make_message(Party::Verifier, "challenge", std::move(challenge)));

  for (auto i : indices) {
    const auto& row = table->rows[i];
    std::uint64_t steps = 0;
    const bool ok = row_replays(row, limits, steps);
    transcript.add_verifier_steps(steps);
    if (!ok) {
      transcript.set_verdict(
          Reject{RejectReason::ReplayMismatch, "row " + std::to_string(i) + " does not replay", row});
      return transcript;
    }
  }

  if (auto beat = fastest_for(table->rows, claim.x, claimant_steps)) {
    // Confirm before rejecting so every counterexample is a true one.
    std::uint64_t steps = 0;
    const bool ok = row_replays(*beat, limits, steps);
    transcript.add_verifier_steps(steps);
    if (ok) {
      transcript.set_verdict(Reject{RejectReason::CounterexampleFound,
                                    beat->program.str() + " outputs x in " + std::to_string(beat->steps) + " steps",
                                    beat});
    } else {
      transcript.set_verdict(Reject{RejectReason::ReplayMismatch, "claimed counterexample does not replay", beat});
    }
    return transcript;
  }
  transcript.set_verdict(Accept{});
  return transcript;
}

Transcript verify_depth_claim(const DepthClaim& claim, const ProverMessages& messages, const BuildOptions& options) {
  validate_claim(claim);
  Transcript transcript;
  transcript.send(claim_message(claim));
  copy_prover_messages(transcript, messages);

  const auto table = decode_table(messages);
  if (!table) {
    transcript.set_verdict(Reject{RejectReason::Malformed, "prover table does not decode", std::nullopt});
    return transcript;
  }
  const auto bits = static_cast<unsigned>(claim.k_hat + claim.s);
  const auto& cov = table->coverage;
  if (cov.max_program_bits < bits || cov.max_steps + 1 < claim.t || cov.max_output_bits < claim.x.size()) {
    transcript.set_verdict(Reject{RejectReason::InsufficientProof,
                                  "table must cover programs of length <= " + std::to_string(bits) +
                                      " running fewer than " + std::to_string(claim.t) + " steps",
                                  std::nullopt});
    return transcript;
  }

  // Programs strictly faster than t; t == 1 leaves nothing to enumerate.
  std::uint64_t steps = 0;
  const ProofTable truth = enumerate_table(bits, claim.t - 1, cap_for(bits, claim.x), options, steps);
  transcript.add_verifier_steps(steps);

  std::vector<TableRow> claimed_region;
  for (const auto& row : table->rows) {
    if (row.program.length() <= bits && row.steps < claim.t && row.output.size() <= cap_for(bits, claim.x)) {
      claimed_region.push_back(row);
    }
  }
  transcript.note_discrepancies(count_discrepancies(claimed_region, truth.rows));

  if (auto beat = fastest_for(truth.rows, claim.x, claim.t)) {
    transcript.set_verdict(Reject{RejectReason::CounterexampleFound,
                                  beat->program.str() + " outputs x in " + std::to_string(beat->steps) + " steps",
                                  beat});
  } else {
    transcript.set_verdict(Accept{});
  }
  return transcript;
}

std::optional<ShallowRefutation> refute_shallow(const BitString& x, std::uint64_t depth_threshold,
                                                unsigned max_program_bits, std::uint64_t max_steps,
                                                const BuildOptions& options) {
  if (depth_threshold == 0 || max_steps == 0) throw std::invalid_argument("refute_shallow budgets must be positive");
  if (depth_threshold == 1) return std::nullopt;  // nothing runs in zero steps
  CensusParams params{max_program_bits,
                      MachineLimits{std::min(max_steps, depth_threshold - 1), cap_for(max_program_bits, x)},
                      std::string(kMachineVersion)};
  const HaltingCensus census = build_census(params, options);
  const auto entries = census.lookup(x);
  if (entries.empty()) return std::nullopt;
  return ShallowRefutation{entries.front().program, x, entries.front().steps};
}

}  // namespace depthlab
