#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "depthlab/census.hpp"

namespace depthlab {

inline constexpr std::string_view kCensusFormat = "depthlab-census/1";

class CensusFormatError : public std::runtime_error {
 public:
  enum class Kind { VersionMismatch, ChecksumMismatch, Malformed };
  CensusFormatError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

std::string sha256_hex(std::string_view data);

// Canonical body lines, one JSON object per output, each '\n'-terminated.
std::string census_body(const HaltingCensus& census);

// SHA-256 of the canonical body; census identity in every derived artifact.
std::string census_checksum(const HaltingCensus& census);

std::string serialize_census(const HaltingCensus& census);
HaltingCensus parse_census(std::string_view text);

void save_census(const HaltingCensus& census, const std::filesystem::path& path);
HaltingCensus load_census(const std::filesystem::path& path);

}  // namespace depthlab
