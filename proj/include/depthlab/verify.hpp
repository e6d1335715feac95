#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "depthlab/bits.hpp"
#include "depthlab/census.hpp"

namespace depthlab {

// "p outputs x within t steps."
struct OutputClaim {
  Program p;
  BitString x;
  std::uint64_t t = 0;
};

// "p outputs x within t steps and no program of length <= |p| does so in
// strictly fewer steps." Ties do not refute.
struct MinimalityClaim {
  Program p;
  BitString x;
  std::uint64_t t = 0;
};

// "No program of length <= k_hat + s outputs x in fewer than t steps."
struct DepthClaim {
  BitString x;
  std::uint64_t t = 0;
  unsigned s = 0;
  std::size_t k_hat = 0;
};

using Claim = std::variant<OutputClaim, MinimalityClaim, DepthClaim>;

void validate_claim(const Claim& claim);

enum class Party { Prover, Verifier };

struct Message {
  Party sender = Party::Prover;
  std::string label;
  std::vector<std::uint8_t> payload;  // MSB-first, zero-padded
  std::size_t bits = 0;
};

Message make_message(Party sender, std::string label, BitWriter writer);

// One row of a halting table: a program and what it did.
struct TableRow {
  Program program;
  BitString output;
  std::uint64_t steps = 0;
  friend bool operator==(const TableRow&, const TableRow&) = default;
};

enum class RejectReason {
  Timeout,
  OutputMismatch,
  InvalidProgram,
  Malformed,
  CounterexampleFound,
  ReplayMismatch,
  InsufficientProof,
};

std::string_view reject_reason_name(RejectReason reason);

struct Accept {
  friend bool operator==(const Accept&, const Accept&) = default;
};

struct Reject {
  RejectReason reason;
  std::string detail;
  // CounterexampleFound: a true row that beats the claim.
  // ReplayMismatch: the claimed row that failed to replay.
  std::optional<TableRow> evidence;
  friend bool operator==(const Reject&, const Reject&) = default;
};

using Verdict = std::variant<Accept, Reject>;

class Transcript {
 public:
  void send(Message message);
  void add_prover_steps(std::uint64_t steps) { prover_steps_ += steps; }
  void add_verifier_steps(std::uint64_t steps) { verifier_steps_ += steps; }
  void note_discrepancies(std::size_t count) { table_discrepancies_ += count; }

  // The verdict is set exactly once; a second call throws std::logic_error.
  void set_verdict(Verdict verdict);

  const std::vector<Message>& messages() const { return messages_; }
  std::uint64_t prover_steps() const { return prover_steps_; }
  std::uint64_t verifier_steps() const { return verifier_steps_; }
  // Rows of the prover's table that differ from the verifier's own
  // enumeration. Informational; never changes a Full-mode verdict.
  std::size_t table_discrepancies() const { return table_discrepancies_; }
  std::size_t total_payload_bits() const;

  bool has_verdict() const { return verdict_.has_value(); }
  const Verdict& verdict() const;
  bool accepted() const { return has_verdict() && std::holds_alternative<Accept>(*verdict_); }

 private:
  std::vector<Message> messages_;
  std::uint64_t prover_steps_ = 0;
  std::uint64_t verifier_steps_ = 0;
  std::size_t table_discrepancies_ = 0;
  std::optional<Verdict> verdict_;
};

struct TableCoverage {
  unsigned max_program_bits = 0;
  std::uint64_t max_steps = 0;
  std::uint64_t max_output_bits = 0;
  friend bool operator==(const TableCoverage&, const TableCoverage&) = default;
};

struct ProofTable {
  TableCoverage coverage;
  std::vector<TableRow> rows;  // canonical program order
};

// What the prover sends: a coverage header followed by one message per row.
struct ProverMessages {
  std::vector<Message> messages;
  std::uint64_t prover_steps = 0;
};

ProofTable table_from_census(const HaltingCensus& census);
ProverMessages encode_table(const ProofTable& table, std::uint64_t prover_steps);
// nullopt when the messages do not decode to a well-formed table.
std::optional<ProofTable> decode_table(const ProverMessages& messages);

// Honest provers.
ProverMessages prove_minimality(const MinimalityClaim& claim, const BuildOptions& options = {});
ProverMessages prove_depth(const DepthClaim& claim, const BuildOptions& options = {});

// Dishonest provers; both re-encode a modified table.
ProverMessages cheat_omit(const ProverMessages& honest, std::size_t row);
ProverMessages cheat_falsify(const ProverMessages& honest, std::size_t row, const BitString& fake_output,
                             std::uint64_t fake_steps);

struct FullReplay {};
// Replays k rows sampled without replacement. Not sound against falsified
// rows that escape the sample, nor against omitted rows.
struct SpotCheck {
  std::size_t k = 0;
  std::uint64_t seed = 0;
};
using VerifierMode = std::variant<FullReplay, SpotCheck>;

Transcript verify_output_claim(const OutputClaim& claim);
Transcript verify_minimality(const MinimalityClaim& claim, const ProverMessages& messages, const VerifierMode& mode,
                             const BuildOptions& options = {});
Transcript verify_depth_claim(const DepthClaim& claim, const ProverMessages& messages,
                              const BuildOptions& options = {});

struct ShallowRefutation {
  Program program;
  BitString x;
  std::uint64_t steps = 0;
};

// First census(L, min(t, threshold - 1)) program emitting x, or nullopt.
// nullopt is not a proof of depth.
std::optional<ShallowRefutation> refute_shallow(const BitString& x, std::uint64_t depth_threshold,
                                                unsigned max_program_bits, std::uint64_t max_steps,
                                                const BuildOptions& options = {});

}  // namespace depthlab
