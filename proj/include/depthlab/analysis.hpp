#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "depthlab/census.hpp"

namespace depthlab {

// Step budget as either one absolute bound or c * |x|^k of the output length.
class BudgetPolicy {
 public:
  static BudgetPolicy absolute(std::uint64_t steps);
  static BudgetPolicy per_output_length(std::uint64_t c, unsigned k);

  // Saturates at UINT64_MAX.
  std::uint64_t steps_for(std::size_t output_length) const;

 private:
  bool functional_ = false;
  std::uint64_t steps_or_c_ = 0;
  unsigned k_ = 0;
};

// K^t(x) within the census: shortest program length, or nullopt when x has no
// census entry (then K^t(x) > L at this t; a lower bound, not a value).
std::optional<std::size_t> k_t(const HaltingCensus& census, const BitString& x);

// Same, restricting to programs within policy.steps_for(|x|). The result is
// exact only if the policy does not exceed the census step bound.
std::optional<std::size_t> k_t(const HaltingCensus& census, const BitString& x, const BudgetPolicy& policy);

// Time-bounded algorithmic probability of x, exact.
Dyadic q_t(const HaltingCensus& census, const BitString& x);

struct DepthReport {
  BitString x;
  std::optional<std::size_t> k_hat;
  Dyadic q_hat;
  unsigned significance = 0;
  // Minimal steps when a witness exists; otherwise the census step bound as a
  // lower bound, with depth_exact false.
  std::uint64_t depth_hat = 0;
  bool depth_exact = false;
  std::optional<Program> witness;
  unsigned max_program_bits = 0;
  std::uint64_t max_steps = 0;

  friend bool operator==(const DepthReport&, const DepthReport&) = default;
};

DepthReport depth(const HaltingCensus& census, const BitString& x, unsigned significance);

struct DiagonalCertificate {
  BitString x;
  std::uint64_t max_steps = 0;      // T
  unsigned max_program_bits = 0;    // L
  unsigned margin = 0;
  Dyadic q_fast;
  Dyadic threshold;                 // 2^-(n + margin)
  std::string census_checksum;

  friend bool operator==(const DiagonalCertificate&, const DiagonalCertificate&) = default;
};

class NoDeepStringError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lexicographically first x of length n with q_fast(x) < 2^-(n + margin),
// over an existing census. Throws NoDeepStringError if none exists.
DiagonalCertificate diagonal_create(const HaltingCensus& census, std::size_t n, unsigned margin = 0);

// Builds census(L, T) with output cap max(L, n), then diagonalizes over it.
DiagonalCertificate diagonal_create(std::size_t n, std::uint64_t max_steps, unsigned max_program_bits,
                                    unsigned margin = 0, const BuildOptions& options = {});

enum class Transform { Append0, Append1, Duplicate, Complement, Reverse };

inline constexpr std::string_view kTransformSetVersion = "slow-growth-transforms/1";
inline constexpr Transform kAllTransforms[] = {Transform::Append0, Transform::Append1, Transform::Duplicate,
                                               Transform::Complement, Transform::Reverse};

std::string_view transform_name(Transform f);
Transform parse_transform(std::string_view name);
BitString apply_transform(Transform f, const BitString& x);

struct AuditRow {
  BitString x;
  Transform transform;
  std::uint64_t depth_x = 0;
  // nullopt when f(x) has no census entry; its depth is then only known to
  // be at least the census step bound and the row is never flagged.
  std::optional<std::uint64_t> depth_fx;
  bool flagged = false;
};

struct AuditReport {
  std::string transform_set_version{kTransformSetVersion};
  std::uint64_t budget = 0;
  std::uint64_t census_max_steps = 0;
  std::vector<AuditRow> rows;
  std::size_t flagged_count = 0;
};

// Flags rows with depth(f(x)) > depth(x) + budget. Observations at bounded
// scale; a flag is a candidate anomaly, not a violation of the law.
AuditReport slow_growth_audit(const HaltingCensus& census, std::span<const Transform> transforms,
                              std::uint64_t budget);

struct SpeedupRecord {
  DepthReport via_lookup;
  DepthReport via_enumeration;
  bool reports_equal = false;
  std::uint64_t lookup_nanoseconds = 0;
  std::uint64_t enumeration_nanoseconds = 0;
  std::uint64_t lookup_probes = 0;
  std::uint64_t enumeration_machine_steps = 0;
  std::uint64_t enumeration_nodes = 0;
};

// Depth of x via the stored census versus a fresh enumeration at the same
// bounds. Throws std::logic_error if the two reports differ.
SpeedupRecord speedup_demo(const BitString& x, const HaltingCensus& census, unsigned significance = 0,
                           const BuildOptions& options = {});

}  // namespace depthlab
