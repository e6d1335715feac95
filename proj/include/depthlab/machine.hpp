#pragma once

#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "depthlab/bits.hpp"

namespace depthlab {

// UM-1: a prefix-free counter machine that reads its program three bits at a
// time, on demand. The instruction set is fixed; any change must bump the
// version string, which is recorded in every census file.
inline constexpr std::string_view kMachineVersion = "UM-1";

enum class Opcode : std::uint8_t {
  Halt = 0b000,
  Out0 = 0b001,
  Out1 = 0b010,
  IncA = 0b011,
  DecA = 0b100,  // floors at zero
  Swap = 0b101,  // A <-> B
  LoopBegin = 0b110,
  LoopEnd = 0b111,
};

inline constexpr unsigned kOpcodeBits = 3;
inline constexpr unsigned kOpcodeCount = 8;

struct MachineLimits {
  std::uint64_t max_steps = 0;
  std::uint64_t max_output_bits = 0;

  // Throws std::invalid_argument unless both limits are positive.
  void validate() const;

  friend bool operator==(const MachineLimits&, const MachineLimits&) = default;
};

struct Halted {
  BitString output;
  std::uint64_t steps = 0;
  std::uint64_t consumed_bits = 0;
  friend bool operator==(const Halted&, const Halted&) = default;
};
struct Timeout {
  std::uint64_t steps = 0;
  friend bool operator==(const Timeout&, const Timeout&) = default;
};
struct InputUnderflow {
  friend bool operator==(const InputUnderflow&, const InputUnderflow&) = default;
};
struct OutputOverflow {
  friend bool operator==(const OutputOverflow&, const OutputOverflow&) = default;
};
struct UnmatchedBracket {
  friend bool operator==(const UnmatchedBracket&, const UnmatchedBracket&) = default;
};

using ExecutionOutcome = std::variant<Halted, Timeout, InputUnderflow, OutputOverflow, UnmatchedBracket>;

std::string_view outcome_name(const ExecutionOutcome& outcome);

// Runs a program to completion or failure. Deterministic. `steps_used`
// receives the step count for every outcome, failures included.
ExecutionOutcome run(const Program& program, const MachineLimits& limits, std::uint64_t* steps_used = nullptr);

// True iff the machine halted having consumed exactly the whole program.
bool is_valid_run(const Program& program, const ExecutionOutcome& outcome);

// Resumable interpreter state. It suspends whenever it needs another opcode,
// so the census can fork one state into eight children instead of re-running
// every shared prefix.
class Interpreter {
 public:
  enum class Status { NeedOpcode, Halted, Timeout, OutputOverflow, UnmatchedBracket };

  explicit Interpreter(const MachineLimits& limits);

  // Executes until the next opcode must be read, or until a terminal status.
  Status resume();

  // Appends the next program opcode; only legal after resume() == NeedOpcode.
  void feed(Opcode opcode);

  std::uint64_t steps() const { return steps_; }
  const BitString& output() const { return output_; }
  std::size_t opcode_count() const { return code_.size(); }
  std::uint64_t consumed_bits() const { return code_.size() * kOpcodeBits; }

  // The consumed opcodes, as a program.
  Program program() const;

 private:
  static constexpr std::uint32_t kNoMatch = UINT32_MAX;

  MachineLimits limits_;
  std::vector<Opcode> code_;
  std::vector<std::uint32_t> loop_match_;  // for LoopEnd: index of its LoopBegin
  std::vector<std::uint32_t> open_loops_;
  std::size_t ip_ = 0;
  // A only grows by IncA, so both registers stay below max_steps.
  std::uint64_t a_ = 0;
  std::uint64_t b_ = 0;
  std::uint64_t steps_ = 0;
  BitString output_;
  bool scanning_ = false;
  std::uint64_t scan_depth_ = 0;
};

}  // namespace depthlab
