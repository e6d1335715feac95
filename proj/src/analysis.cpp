#include "depthlab/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

#include "depthlab/census_io.hpp"

namespace depthlab {

BudgetPolicy BudgetPolicy::absolute(std::uint64_t steps) {
  BudgetPolicy policy;
  policy.steps_or_c_ = steps;
  return policy;
}

BudgetPolicy BudgetPolicy::per_output_length(std::uint64_t c, unsigned k) {
  BudgetPolicy policy;
  policy.functional_ = true;
  policy.steps_or_c_ = c;
  policy.k_ = k;
  return policy;
}

std::uint64_t BudgetPolicy::steps_for(std::size_t output_length) const {
  if (!functional_) return steps_or_c_;
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t value = steps_or_c_;
  for (unsigned i = 0; i < k_; ++i) {
    if (output_length != 0 && value > kMax / output_length) return kMax;
    value *= output_length;
  }
  return value;
}

std::optional<std::size_t> k_t(const HaltingCensus& census, const BitString& x) {
  const auto entries = census.lookup(x);
  if (entries.empty()) return std::nullopt;
  // Canonical order puts a shortest program first.
  return entries.front().program.length();
}

std::optional<std::size_t> k_t(const HaltingCensus& census, const BitString& x, const BudgetPolicy& policy) {
  const std::uint64_t bound = policy.steps_for(x.size());
  for (const auto& entry : census.lookup(x)) {
    if (entry.steps <= bound) return entry.program.length();
  }
  return std::nullopt;
}

Dyadic q_t(const HaltingCensus& census, const BitString& x) {
  Dyadic total;
  for (const auto& entry : census.lookup(x)) {
    total += Dyadic::inverse_power_of_two(static_cast<unsigned>(entry.program.length()));
  }
  return total;
}

DepthReport depth(const HaltingCensus& census, const BitString& x, unsigned significance) {
  DepthReport report;
  report.x = x;
  report.significance = significance;
  report.max_program_bits = census.params().max_program_bits;
  report.max_steps = census.params().limits.max_steps;
  report.q_hat = q_t(census, x);
  report.k_hat = k_t(census, x);
  if (!report.k_hat) {
    report.depth_hat = report.max_steps;
    report.depth_exact = false;
    return report;
  }
  const std::size_t length_bound = *report.k_hat + significance;
  const CensusEntry* best = nullptr;
  for (const auto& entry : census.lookup(x)) {
    if (entry.program.length() > length_bound) break;
    if (best == nullptr || entry.steps < best->steps) best = &entry;
  }
  report.depth_hat = best->steps;
  report.depth_exact = true;
  report.witness = best->program;
  return report;
}

DiagonalCertificate diagonal_create(const HaltingCensus& census, std::size_t n, unsigned margin) {
  if (n == 0) throw std::invalid_argument("diagonal output length n must be >= 1");
  if (n + margin > Dyadic::kMaxExponent) throw std::invalid_argument("n + margin must be <= 63");
  const Dyadic threshold = Dyadic::inverse_power_of_two(static_cast<unsigned>(n + margin));
  const std::uint64_t candidates = n >= 64 ? std::numeric_limits<std::uint64_t>::max() : (std::uint64_t{1} << n);

  // Strings without census programs have q = 0, so the scan stops after at
  // most (number of census outputs of length n) + 1 candidates.
  for (std::uint64_t v = 0; v < candidates; ++v) {
    const BitString x = BitString::from_uint(v, n);
    const Dyadic q = q_t(census, x);
    if (q < threshold) {
      return DiagonalCertificate{x,
                                 census.params().limits.max_steps,
                                 census.params().max_program_bits,
                                 margin,
                                 q,
                                 threshold,
                                 census_checksum(census)};
    }
  }
  throw NoDeepStringError("no-deep-string-at-these-bounds: every string of length " + std::to_string(n) +
                          " has q_fast >= " + threshold.to_string());
}

DiagonalCertificate diagonal_create(std::size_t n, std::uint64_t max_steps, unsigned max_program_bits, unsigned margin,
                                    const BuildOptions& options) {
  auto params = CensusParams::with_default_cap(max_program_bits, max_steps);
  params.limits.max_output_bits = std::max<std::uint64_t>(max_program_bits, n);
  return diagonal_create(build_census(params, options), n, margin);
}

std::string_view transform_name(Transform f) {
  switch (f) {
    case Transform::Append0: return "append0";
    case Transform::Append1: return "append1";
    case Transform::Duplicate: return "duplicate";
    case Transform::Complement: return "complement";
    case Transform::Reverse: return "reverse";
  }
  return "unknown";
}

Transform parse_transform(std::string_view name) {
  for (Transform f : kAllTransforms) {
    if (transform_name(f) == name) return f;
  }
  throw std::invalid_argument("unknown transform '" + std::string(name) + "'");
}

BitString apply_transform(Transform f, const BitString& x) {
  BitString out;
  switch (f) {
    case Transform::Append0:
      out = x;
      out.push_back(false);
      break;
    case Transform::Append1:
      out = x;
      out.push_back(true);
      break;
    case Transform::Duplicate:
      out = x;
      out.append(x);
      break;
    case Transform::Complement:
      for (std::size_t i = 0; i < x.size(); ++i) out.push_back(!x[i]);
      break;
    case Transform::Reverse:
      for (std::size_t i = x.size(); i-- > 0;) out.push_back(x[i]);
      break;
  }
  return out;
}

AuditReport slow_growth_audit(const HaltingCensus& census, std::span<const Transform> transforms,
                              std::uint64_t budget) {
  for (const auto& [x, unused] : census.entries()) {
    if (apply_transform(Transform::Complement, apply_transform(Transform::Complement, x)) != x) {
      throw std::logic_error("complement is not an involution on " + x.str());
    }
  }

  AuditReport report;
  report.budget = budget;
  report.census_max_steps = census.params().limits.max_steps;
  for (const auto& [x, unused] : census.entries()) {
    const std::uint64_t depth_x = depth(census, x, 0).depth_hat;
    for (Transform f : transforms) {
      AuditRow row{x, f, depth_x, std::nullopt, false};
      const auto fx = depth(census, apply_transform(f, x), 0);
      if (fx.depth_exact) {
        row.depth_fx = fx.depth_hat;
        row.flagged = fx.depth_hat > depth_x && fx.depth_hat - depth_x > budget;
      }
      if (row.flagged) ++report.flagged_count;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

SpeedupRecord speedup_demo(const BitString& x, const HaltingCensus& census, unsigned significance,
                           const BuildOptions& options) {
  using Clock = std::chrono::steady_clock;
  auto elapsed_ns = [](Clock::time_point start) {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count());
  };

  SpeedupRecord record;
  auto start = Clock::now();
  record.via_lookup = depth(census, x, significance);
  record.lookup_nanoseconds = elapsed_ns(start);
  record.lookup_probes = 1;

  start = Clock::now();
  BuildStats stats;
  const HaltingCensus fresh = build_census(census.params(), options, &stats);
  record.via_enumeration = depth(fresh, x, significance);
  record.enumeration_nanoseconds = elapsed_ns(start);
  record.enumeration_machine_steps = stats.machine_steps;
  record.enumeration_nodes = stats.nodes;

  record.reports_equal = record.via_lookup == record.via_enumeration;
  if (!record.reports_equal) {
    throw std::logic_error("census lookup and fresh enumeration disagree on depth of '" + x.str() + "'");
  }
  return record;
}

}  // namespace depthlab
