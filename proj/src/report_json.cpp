#include "depthlab/report_json.hpp"

#include "depthlab/census_io.hpp"

namespace depthlab {

using nlohmann::json;

json to_json(const DepthReport& r) {
  json out = {
      {"x", r.x.str()},
      {"k_hat", r.k_hat ? json(*r.k_hat) : json(nullptr)},
      {"q_hat", r.q_hat.to_string()},
      {"s", r.significance},
      {"depth_hat", r.depth_hat},
      {"depth_exact", r.depth_exact},
      {"witness", r.witness ? json(r.witness->str()) : json(nullptr)},
      {"bounds", {{"L", r.max_program_bits}, {"t", r.max_steps}}},
  };
  return out;
}

json to_json(const DiagonalCertificate& c) {
  return {
      {"x", c.x.str()},
      {"n", c.x.size()},
      {"T", c.max_steps},
      {"L", c.max_program_bits},
      {"margin", c.margin},
      {"q_fast", c.q_fast.to_string()},
      {"threshold", c.threshold.to_string()},
      {"census_checksum", c.census_checksum},
  };
}

json to_json(const AuditReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back({
        {"x", row.x.str()},
        {"transform", transform_name(row.transform)},
        {"depth_x", row.depth_x},
        {"depth_fx", row.depth_fx ? json(*row.depth_fx) : json(nullptr)},
        {"flagged", row.flagged},
    });
  }
  return {
      {"transform_set", report.transform_set_version},
      {"budget", report.budget},
      {"census_t", report.census_max_steps},
      {"flagged_count", report.flagged_count},
      {"rows", std::move(rows)},
  };
}

std::string audit_csv(const AuditReport& report) {
  std::string csv = "x,transform,depth_x,depth_fx,flagged\n";
  for (const auto& row : report.rows) {
    csv += row.x.str() + "," + std::string(transform_name(row.transform)) + "," + std::to_string(row.depth_x) + "," +
           (row.depth_fx ? std::to_string(*row.depth_fx) : ">=" + std::to_string(report.census_max_steps)) + "," +
           (row.flagged ? "1" : "0") + "\n";
  }
  return csv;
}

json to_json(const SpeedupRecord& r) {
  return {
      {"via_lookup", to_json(r.via_lookup)},
      {"via_enumeration", to_json(r.via_enumeration)},
      {"reports_equal", r.reports_equal},
      {"lookup", {{"nanoseconds", r.lookup_nanoseconds}, {"probes", r.lookup_probes}}},
      {"enumeration",
       {{"nanoseconds", r.enumeration_nanoseconds},
        {"machine_steps", r.enumeration_machine_steps},
        {"nodes", r.enumeration_nodes}}},
  };
}

json to_json(const Claim& claim) {
  return std::visit(
      [](const auto& c) -> json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, DepthClaim>) {
          return {{"type", "depth"}, {"x", c.x.str()}, {"t", c.t}, {"s", c.s}, {"k_hat", c.k_hat}};
        } else {
          return {{"type", std::is_same_v<T, OutputClaim> ? "output" : "minimality"},
                  {"p", c.p.str()},
                  {"x", c.x.str()},
                  {"t", c.t}};
        }
      },
      claim);
}

json to_json(const Verdict& verdict) {
  if (std::holds_alternative<Accept>(verdict)) return {{"result", "accept"}};
  const auto& reject = std::get<Reject>(verdict);
  json out = {{"result", "reject"}, {"reason", reject_reason_name(reject.reason)}, {"detail", reject.detail}};
  if (reject.evidence) {
    out["evidence"] = {{"p", reject.evidence->program.str()},
                       {"output", reject.evidence->output.str()},
                       {"steps", reject.evidence->steps}};
  }
  return out;
}

json to_json(const Transcript& t) {
  json messages = json::array();
  for (const auto& m : t.messages()) {
    messages.push_back({{"sender", m.sender == Party::Prover ? "prover" : "verifier"},
                        {"label", m.label},
                        {"bits", m.bits},
                        {"payload", to_hex(m.payload)}});
  }
  return {
      {"messages", std::move(messages)},
      {"total_payload_bits", t.total_payload_bits()},
      {"prover_steps", t.prover_steps()},
      {"verifier_steps", t.verifier_steps()},
      {"table_discrepancies", t.table_discrepancies()},
      {"verdict", t.has_verdict() ? to_json(t.verdict()) : json(nullptr)},
  };
}

json to_json(const ShallowRefutation& r) {
  return {{"x", r.x.str()}, {"p", r.program.str()}, {"steps", r.steps}};
}

json to_json(const ProxyResult& result) {
  json reports = json::array();
  for (const auto& r : result.reports) {
    reports.push_back({{"name", r.name},
                       {"n_bytes", r.original_bytes},
                       {"compressed_bits", r.compressed_bits},
                       {"decode_steps", r.decode_steps},
                       {"steps_per_output_byte", format_ratio(r.decode_steps, r.original_bytes)},
                       {"compressed_bits_per_input_bit", format_ratio(r.compressed_bits, 8 * r.original_bytes)}});
  }
  return {{"reports", std::move(reports)}, {"decode_order", result.decode_order}};
}

json census_summary(const HaltingCensus& census) {
  const auto& p = census.params();
  return {
      {"machine", p.machine_version},
      {"L", p.max_program_bits},
      {"t", p.limits.max_steps},
      {"output_cap", p.limits.max_output_bits},
      {"count", census.program_count()},
      {"outputs", census.entries().size()},
      {"kraft", census.kraft().to_string()},
      {"checksum", census_checksum(census)},
  };
}

}  // namespace depthlab
