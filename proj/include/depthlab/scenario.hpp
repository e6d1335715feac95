#pragma once

#include <cstdint>
#include <string_view>
#include <variant>

#include "depthlab/verify.hpp"
#include "json.hpp"

namespace depthlab {

struct HonestProver {};
struct OmitRow {
  std::size_t row = 0;
};
struct FalsifyRow {
  std::size_t row = 0;
  BitString output;
  std::uint64_t steps = 0;
};
using ProverBehavior = std::variant<HonestProver, OmitRow, FalsifyRow>;

// A complete verification experiment. Spot-mode sampling uses `seed`.
struct Scenario {
  Claim claim;
  ProverBehavior prover;
  VerifierMode verifier_mode = FullReplay{};
  std::uint64_t seed = 0;
};

// Scenario file layout:
//   {"claim": {"type": "output"|"minimality", "p": bits, "x": bits, "t": n}
//           | {"type": "depth", "x": bits, "t": n, "s": n, "k_hat": n},
//    "prover": "honest" | {"type": "cheat-omit", "row": i}
//            | {"type": "cheat-falsify", "row": i, "fake": {"output": bits, "steps": n}},
//    "verifier_mode": "full" | {"type": "spot", "k": n},
//    "seed": n}
// Throws std::invalid_argument on any schema violation.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario parse_scenario_text(std::string_view text);
nlohmann::json scenario_to_json(const Scenario& scenario);

// Output claims take no prover table; a cheating prover there is rejected
// as an invalid scenario.
Transcript run_scenario(const Scenario& scenario, const BuildOptions& options = {});

}  // namespace depthlab
