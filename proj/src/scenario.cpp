#include "depthlab/scenario.hpp"

#include <stdexcept>
#include <string>

namespace depthlab {

using nlohmann::json;

namespace {

std::string type_of(const json& node) {
  if (node.is_string()) return node.get<std::string>();
  return node.at("type").get<std::string>();
}

Claim parse_claim(const json& node) {
  const std::string type = node.at("type").get<std::string>();
  if (type == "output" || type == "minimality") {
    Program p = Program::parse(node.at("p").get<std::string>());
    BitString x = BitString::parse(node.at("x").get<std::string>());
    const auto t = node.at("t").get<std::uint64_t>();
    if (type == "output") return OutputClaim{std::move(p), std::move(x), t};
    return MinimalityClaim{std::move(p), std::move(x), t};
  }
  if (type == "depth") {
    return DepthClaim{BitString::parse(node.at("x").get<std::string>()), node.at("t").get<std::uint64_t>(),
                      node.at("s").get<unsigned>(), node.at("k_hat").get<std::size_t>()};
  }
  throw std::invalid_argument("unknown claim type '" + type + "'");
}

}  // namespace

Scenario parse_scenario(const json& doc) {
  try {
    Scenario scenario;
    scenario.claim = parse_claim(doc.at("claim"));
    validate_claim(scenario.claim);

    const json& prover = doc.contains("prover") ? doc.at("prover") : json("honest");
    const std::string prover_type = type_of(prover);
    if (prover_type == "honest") {
      scenario.prover = HonestProver{};
    } else if (prover_type == "cheat-omit") {
      scenario.prover = OmitRow{prover.at("row").get<std::size_t>()};
    } else if (prover_type == "cheat-falsify") {
      const json& fake = prover.at("fake");
      scenario.prover = FalsifyRow{prover.at("row").get<std::size_t>(),
                                   BitString::parse(fake.at("output").get<std::string>()),
                                   fake.at("steps").get<std::uint64_t>()};
    } else {
      throw std::invalid_argument("unknown prover type '" + prover_type + "'");
    }

    scenario.seed = doc.value("seed", std::uint64_t{0});
    const json& mode = doc.contains("verifier_mode") ? doc.at("verifier_mode") : json("full");
    const std::string mode_type = type_of(mode);
    if (mode_type == "full") {
      scenario.verifier_mode = FullReplay{};
    } else if (mode_type == "spot") {
      scenario.verifier_mode = SpotCheck{mode.at("k").get<std::size_t>(), scenario.seed};
    } else {
      throw std::invalid_argument("unknown verifier mode '" + mode_type + "'");
    }
    return scenario;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("invalid scenario: ") + e.what());
  }
}

Scenario parse_scenario_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("scenario is not valid JSON: ") + e.what());
  }
  return parse_scenario(doc);
}

json scenario_to_json(const Scenario& scenario) {
  json doc;
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, DepthClaim>) {
          doc["claim"] = {{"type", "depth"}, {"x", c.x.str()}, {"t", c.t}, {"s", c.s}, {"k_hat", c.k_hat}};
        } else {
          doc["claim"] = {{"type", std::is_same_v<T, OutputClaim> ? "output" : "minimality"},
                          {"p", c.p.str()},
                          {"x", c.x.str()},
                          {"t", c.t}};
        }
      },
      scenario.claim);
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, HonestProver>) {
          doc["prover"] = "honest";
        } else if constexpr (std::is_same_v<T, OmitRow>) {
          doc["prover"] = {{"type", "cheat-omit"}, {"row", p.row}};
        } else {
          doc["prover"] = {{"type", "cheat-falsify"},
                           {"row", p.row},
                           {"fake", {{"output", p.output.str()}, {"steps", p.steps}}}};
        }
      },
      scenario.prover);
  if (const auto* spot = std::get_if<SpotCheck>(&scenario.verifier_mode)) {
    doc["verifier_mode"] = {{"type", "spot"}, {"k", spot->k}};
  } else {
    doc["verifier_mode"] = "full";
  }
  doc["seed"] = scenario.seed;
  return doc;
}

Transcript run_scenario(const Scenario& scenario, const BuildOptions& options) {
  auto apply_prover = [&](ProverMessages honest) {
    return std::visit(
        [&](const auto& p) -> ProverMessages {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, HonestProver>) {
            return honest;
          } else if constexpr (std::is_same_v<T, OmitRow>) {
            return cheat_omit(honest, p.row);
          } else {
            return cheat_falsify(honest, p.row, p.output, p.steps);
          }
        },
        scenario.prover);
  };

  if (const auto* c = std::get_if<OutputClaim>(&scenario.claim)) {
    if (!std::holds_alternative<HonestProver>(scenario.prover)) {
      throw std::invalid_argument("output claims carry no prover table to falsify");
    }
    return verify_output_claim(*c);
  }
  if (const auto* c = std::get_if<MinimalityClaim>(&scenario.claim)) {
    return verify_minimality(*c, apply_prover(prove_minimality(*c, options)), scenario.verifier_mode, options);
  }
  const auto& c = std::get<DepthClaim>(scenario.claim);
  return verify_depth_claim(c, apply_prover(prove_depth(c, options)), options);
}

}  // namespace depthlab
