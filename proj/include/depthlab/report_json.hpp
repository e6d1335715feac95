#pragma once

#include <string>

#include "depthlab/analysis.hpp"
#include "depthlab/proxy.hpp"
#include "depthlab/verify.hpp"
#include "json.hpp"

namespace depthlab {

// Rationals are "p/q" strings; censuses are referenced by checksum.
nlohmann::json to_json(const DepthReport& report);
nlohmann::json to_json(const DiagonalCertificate& certificate);
nlohmann::json to_json(const AuditReport& report);
nlohmann::json to_json(const SpeedupRecord& record);
nlohmann::json to_json(const Claim& claim);
nlohmann::json to_json(const Verdict& verdict);
// Payloads hex-encoded alongside their exact bit lengths.
nlohmann::json to_json(const Transcript& transcript);
nlohmann::json to_json(const ShallowRefutation& refutation);
nlohmann::json to_json(const ProxyResult& result);
nlohmann::json census_summary(const HaltingCensus& census);

std::string audit_csv(const AuditReport& report);

}  // namespace depthlab
