#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "depthlab/bits.hpp"
#include "depthlab/dyadic.hpp"
#include "depthlab/machine.hpp"

namespace depthlab {

inline constexpr unsigned kMaxCensusProgramBits = 60;

struct CensusParams {
  unsigned max_program_bits = 0;  // L
  MachineLimits limits;           // t and the output cap
  std::string machine_version{kMachineVersion};

  // Output cap defaults to L bits.
  static CensusParams with_default_cap(unsigned max_program_bits, std::uint64_t max_steps);

  // Throws std::invalid_argument on L < 3, L > 60, non-positive limits, or a
  // machine version other than UM-1.
  void validate() const;

  friend bool operator==(const CensusParams&, const CensusParams&) = default;
};

struct CensusEntry {
  Program program;
  std::uint64_t steps = 0;
  friend bool operator==(const CensusEntry&, const CensusEntry&) = default;
};

// Every valid program of length <= L halting within t steps, keyed by output.
// Immutable once built; outputs and program lists are in canonical order.
class HaltingCensus {
 public:
  using EntryMap = std::map<BitString, std::vector<CensusEntry>>;

  HaltingCensus() = default;

  // Canonicalizes arbitrary (output, entry) pairs. Rejects duplicate programs.
  static HaltingCensus from_entries(CensusParams params, std::vector<std::pair<BitString, CensusEntry>> entries);

  const CensusParams& params() const { return params_; }
  const EntryMap& entries() const { return entries_; }
  std::size_t program_count() const { return program_count_; }
  const Dyadic& kraft() const { return kraft_; }

  std::span<const CensusEntry> lookup(const BitString& output) const;

  friend bool operator==(const HaltingCensus&, const HaltingCensus&) = default;

 private:
  CensusParams params_;
  EntryMap entries_;
  std::size_t program_count_ = 0;
  Dyadic kraft_;
};

struct BuildOptions {
  unsigned workers = 1;
  std::uint64_t node_budget = std::uint64_t{1} << 26;
};

struct BuildStats {
  std::uint64_t nodes = 0;
  std::uint64_t machine_steps = 0;
};

class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Explores the tree of on-demand opcode reads, forking the interpreter at
// each read. Throws ResourceLimitError when the node budget is exceeded.
HaltingCensus build_census(const CensusParams& params, const BuildOptions& options = {},
                           BuildStats* stats = nullptr);

std::span<const CensusEntry> census_lookup(const HaltingCensus& census, const BitString& output);

}  // namespace depthlab
