#include "depthlab/machine.hpp"

#include <stdexcept>
#include <utility>

namespace depthlab {

void MachineLimits::validate() const {
  if (max_steps == 0) throw std::invalid_argument("max_steps must be positive");
  if (max_output_bits == 0) throw std::invalid_argument("max_output_bits must be positive");
}

std::string_view outcome_name(const ExecutionOutcome& outcome) {
  struct Visitor {
    std::string_view operator()(const Halted&) const { return "halted"; }
    std::string_view operator()(const Timeout&) const { return "timeout"; }
    std::string_view operator()(const InputUnderflow&) const { return "input-underflow"; }
    std::string_view operator()(const OutputOverflow&) const { return "output-overflow"; }
    std::string_view operator()(const UnmatchedBracket&) const { return "unmatched-bracket"; }
  };
  return std::visit(Visitor{}, outcome);
}

Interpreter::Interpreter(const MachineLimits& limits) : limits_(limits) { limits_.validate(); }

void Interpreter::feed(Opcode opcode) {
  const auto index = static_cast<std::uint32_t>(code_.size());
  code_.push_back(opcode);
  std::uint32_t match = kNoMatch;
  if (opcode == Opcode::LoopBegin) {
    open_loops_.push_back(index);
  } else if (opcode == Opcode::LoopEnd && !open_loops_.empty()) {
    match = open_loops_.back();
    open_loops_.pop_back();
  }
  loop_match_.push_back(match);
}

Interpreter::Status Interpreter::resume() {
  for (;;) {
    if (steps_ == limits_.max_steps) return Status::Timeout;
    if (ip_ == code_.size()) return Status::NeedOpcode;

    const Opcode op = code_[ip_];
    ++steps_;

    if (scanning_) {
      if (op == Opcode::LoopBegin) {
        ++scan_depth_;
      } else if (op == Opcode::LoopEnd) {
        if (scan_depth_ == 0) {
          scanning_ = false;
        } else {
          --scan_depth_;
        }
      }
      ++ip_;
      continue;
    }

    switch (op) {
      case Opcode::Halt:
        return Status::Halted;
      case Opcode::Out0:
      case Opcode::Out1:
        if (output_.size() >= limits_.max_output_bits) return Status::OutputOverflow;
        output_.push_back(op == Opcode::Out1);
        ++ip_;
        break;
      case Opcode::IncA:
        ++a_;
        ++ip_;
        break;
      case Opcode::DecA:
        if (a_ > 0) --a_;
        ++ip_;
        break;
      case Opcode::Swap:
        std::swap(a_, b_);
        ++ip_;
        break;
      case Opcode::LoopBegin:
        if (a_ == 0) {
          scanning_ = true;
          scan_depth_ = 0;
        }
        ++ip_;
        break;
      case Opcode::LoopEnd: {
        const std::uint32_t match = loop_match_[ip_];
        if (match == kNoMatch) return Status::UnmatchedBracket;
        ip_ = a_ != 0 ? match : ip_ + 1;
        break;
      }
    }
  }
}

Program Interpreter::program() const {
  BitString bits;
  for (Opcode op : code_) {
    const auto v = static_cast<unsigned>(op);
    bits.push_back(v & 4u);
    bits.push_back(v & 2u);
    bits.push_back(v & 1u);
  }
  return Program(std::move(bits));
}

ExecutionOutcome run(const Program& program, const MachineLimits& limits, std::uint64_t* steps_used) {
  Interpreter machine(limits);
  struct Report {
    const Interpreter& machine;
    std::uint64_t* out;
    ~Report() {
      if (out != nullptr) *out = machine.steps();
    }
  } report{machine, steps_used};
  const BitString& bits = program.bits();
  std::size_t cursor = 0;
  for (;;) {
    switch (machine.resume()) {
      case Interpreter::Status::NeedOpcode: {
        if (bits.size() - cursor < kOpcodeBits) return InputUnderflow{};
        unsigned v = 0;
        for (unsigned i = 0; i < kOpcodeBits; ++i) v = (v << 1) | (bits[cursor++] ? 1u : 0u);
        machine.feed(static_cast<Opcode>(v));
        break;
      }
      case Interpreter::Status::Halted:
        return Halted{machine.output(), machine.steps(), machine.consumed_bits()};
      case Interpreter::Status::Timeout:
        return Timeout{machine.steps()};
      case Interpreter::Status::OutputOverflow:
        return OutputOverflow{};
      case Interpreter::Status::UnmatchedBracket:
        return UnmatchedBracket{};
    }
  }
}

bool is_valid_run(const Program& program, const ExecutionOutcome& outcome) {
  const auto* halted = std::get_if<Halted>(&outcome);
  return halted != nullptr && halted->consumed_bits == program.length();
}

}  // namespace depthlab
