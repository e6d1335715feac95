#include "depthlab/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "depthlab/analysis.hpp"
#include "depthlab/census_io.hpp"
#include "depthlab/proxy.hpp"
#include "depthlab/report_json.hpp"
#include "depthlab/scenario.hpp"
#include "depthlab/verify.hpp"

namespace depthlab {

using nlohmann::json;

std::string cache_key(const CensusParams& params) {
  return params.machine_version + "/L" + std::to_string(params.max_program_bits) + "/t" +
         std::to_string(params.limits.max_steps) + "/cap" + std::to_string(params.limits.max_output_bits);
}

std::filesystem::path resolve_cache_dir(const std::optional<std::string>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kCacheEnvVar); env != nullptr && *env != '\0') return env;
  return kDefaultCacheDir;
}

HaltingCensus obtain_census(const CensusParams& params, const std::filesystem::path& cache_dir,
                            const BuildOptions& options, std::ostream& warnings, bool* from_cache) {
  params.validate();
  const auto path = cache_dir / (cache_key(params) + ".jsonl");
  if (from_cache != nullptr) *from_cache = false;
  if (std::filesystem::exists(path)) {
    try {
      HaltingCensus cached = load_census(path);
      if (cached.params() == params) {
        if (from_cache != nullptr) *from_cache = true;
        return cached;
      }
      warnings << "warning: cached census " << path.string() << " has different parameters; rebuilding\n";
    } catch (const std::exception& e) {
      warnings << "warning: cached census " << path.string() << " is unusable (" << e.what() << "); rebuilding\n";
    }
  }
  HaltingCensus census = build_census(params, options);
  std::filesystem::create_directories(path.parent_path());
  save_census(census, path);
  return census;
}

namespace {

class DomainFailure : public std::runtime_error {
 public:
  DomainFailure(std::string kind, const std::string& message) : std::runtime_error(message), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

struct CensusSource {
  std::string file;
  unsigned max_program_bits = 0;
  std::uint64_t max_steps = 0;
  std::optional<std::uint64_t> cap;
};

void add_census_source(CLI::App* sub, CensusSource& src) {
  sub->add_option("-c,--census", src.file, "Census file produced by the census subcommand");
  sub->add_option("-L", src.max_program_bits, "Program length bound in bits (when no -c)");
  sub->add_option("-t", src.max_steps, "Step bound (when no -c)");
  sub->add_option("--cap", src.cap, "Output cap in bits (default L)");
}

CensusParams params_from(unsigned max_program_bits, std::uint64_t max_steps, const std::optional<std::uint64_t>& cap) {
  auto params = CensusParams::with_default_cap(max_program_bits, max_steps);
  if (cap) params.limits.max_output_bits = *cap;
  params.validate();
  return params;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& text, std::size_t expected, const char* what) {
  std::vector<std::uint64_t> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw std::invalid_argument(std::string("malformed ") + what + ": " + text);
    values.push_back(v);
  }
  if (values.size() != expected) {
    throw std::invalid_argument(std::string(what) + " expects " + std::to_string(expected) + " comma-separated values");
  }
  return values;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"depthlab: bounded-exact Kolmogorov complexity, algorithmic probability and logical depth on UM-1"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig config;
  std::optional<std::string> cache_flag;
  std::string format = "json";
  app.add_option("--workers", config.workers, "Worker threads for enumeration")->check(CLI::PositiveNumber);
  app.add_option("--cache", cache_flag, "Census cache directory (overrides $DEPTHLAB_CACHE)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  std::function<int()> action;
  auto options = [&] { return BuildOptions{config.workers, BuildOptions{}.node_budget}; };
  auto census_from = [&](const CensusSource& src) -> HaltingCensus {
    if (!src.file.empty()) return load_census(src.file);
    if (src.max_program_bits == 0 || src.max_steps == 0) {
      throw std::invalid_argument("either -c FILE or both -L and -t are required");
    }
    return obtain_census(params_from(src.max_program_bits, src.max_steps, src.cap), config.cache_dir, options(), err);
  };
  auto emit = [&](const json& doc) { out << doc.dump(2) << '\n'; };

  // census
  auto* census_cmd = app.add_subcommand("census", "Build (or reuse from cache) the halting census for (L, t)");
  unsigned census_L = 0;
  std::uint64_t census_t = 0;
  std::optional<std::uint64_t> census_cap;
  std::string census_out;
  census_cmd->add_option("-L", census_L, "Program length bound in bits")->required();
  census_cmd->add_option("-t", census_t, "Step bound")->required();
  census_cmd->add_option("--cap", census_cap, "Output cap in bits (default L)");
  census_cmd->add_option("-o,--output", census_out, "Write the census file here");
  census_cmd->callback([&] {
    action = [&] {
      bool cached = false;
      const auto params = params_from(census_L, census_t, census_cap);
      const auto census = obtain_census(params, config.cache_dir, options(), err, &cached);
      if (cached) err << "note: reused cached census " << cache_key(params) << '\n';
      if (!census_out.empty()) save_census(census, census_out);
      json summary = census_summary(census);
      summary["key"] = cache_key(params);
      emit(summary);
      return 0;
    };
  });

  // kt / qt / depth
  CensusSource query_src;
  std::string query_x;
  unsigned query_s = 0;
  std::string per_length;
  auto* kt_cmd = app.add_subcommand("kt", "Time-bounded Kolmogorov complexity of x within the census");
  add_census_source(kt_cmd, query_src);
  kt_cmd->add_option("-x", query_x, "Target bitstring ('' for the empty string)")->required();
  kt_cmd->add_option("--per-length", per_length, "Budget c,k meaning t = c*|x|^k instead of the census t");
  kt_cmd->callback([&] {
    action = [&] {
      const auto census = census_from(query_src);
      const auto x = BitString::parse(query_x);
      json doc = {{"x", x.str()}, {"bounds", {{"L", census.params().max_program_bits}, {"t", census.params().limits.max_steps}}}};
      std::optional<std::size_t> k;
      if (per_length.empty()) {
        k = k_t(census, x);
      } else {
        const auto ck = parse_u64_list(per_length, 2, "--per-length");
        const auto policy = BudgetPolicy::per_output_length(ck[0], static_cast<unsigned>(ck[1]));
        k = k_t(census, x, policy);
        doc["policy_steps"] = policy.steps_for(x.size());
        doc["policy_within_census"] = policy.steps_for(x.size()) <= census.params().limits.max_steps;
      }
      doc["k_hat"] = k ? json(*k) : json("none-found");
      emit(doc);
      return 0;
    };
  });

  auto* qt_cmd = app.add_subcommand("qt", "Time-bounded algorithmic probability of x within the census");
  add_census_source(qt_cmd, query_src);
  qt_cmd->add_option("-x", query_x, "Target bitstring")->required();
  qt_cmd->callback([&] {
    action = [&] {
      const auto census = census_from(query_src);
      const auto x = BitString::parse(query_x);
      emit({{"x", x.str()}, {"q_hat", q_t(census, x).to_string()},
            {"bounds", {{"L", census.params().max_program_bits}, {"t", census.params().limits.max_steps}}}});
      return 0;
    };
  });

  auto* depth_cmd = app.add_subcommand("depth", "Logical depth of x at significance s within the census");
  add_census_source(depth_cmd, query_src);
  depth_cmd->add_option("-x", query_x, "Target bitstring")->required();
  depth_cmd->add_option("-s", query_s, "Significance in bits");
  depth_cmd->callback([&] {
    action = [&] {
      emit(to_json(depth(census_from(query_src), BitString::parse(query_x), query_s)));
      return 0;
    };
  });

  // diagonal
  std::size_t diag_n = 0;
  std::uint64_t diag_T = 0;
  unsigned diag_L = 0;
  unsigned diag_margin = 0;
  auto* diag_cmd = app.add_subcommand("diagonal", "Find the first length-n string no short fast program makes likely");
  diag_cmd->add_option("-n", diag_n, "Output length")->required();
  diag_cmd->add_option("-T", diag_T, "Step bound")->required();
  diag_cmd->add_option("-L", diag_L, "Program length bound")->required();
  diag_cmd->add_option("--margin", diag_margin, "Tighten the threshold to 2^-(n+margin)");
  diag_cmd->callback([&] {
    action = [&] {
      auto params = CensusParams::with_default_cap(diag_L, diag_T);
      params.limits.max_output_bits = std::max<std::uint64_t>(diag_L, diag_n);
      const auto census = obtain_census(params, config.cache_dir, options(), err);
      try {
        emit(to_json(diagonal_create(census, diag_n, diag_margin)));
      } catch (const NoDeepStringError& e) {
        throw DomainFailure("no-deep-string-at-these-bounds", e.what());
      }
      return 0;
    };
  });

  // audit
  CensusSource audit_src;
  std::uint64_t audit_budget = 0;
  std::vector<std::string> audit_transforms;
  auto* audit_cmd = app.add_subcommand("audit", "Slow-growth audit of fixed transforms over every census output");
  add_census_source(audit_cmd, audit_src);
  audit_cmd->add_option("--budget", audit_budget, "Allowed depth increase before a row is flagged")->required();
  audit_cmd->add_option("--transforms", audit_transforms, "Subset of append0,append1,duplicate,complement,reverse")
      ->delimiter(',');
  audit_cmd->callback([&] {
    action = [&] {
      std::vector<Transform> transforms;
      for (const auto& name : audit_transforms) transforms.push_back(parse_transform(name));
      if (transforms.empty()) transforms.assign(std::begin(kAllTransforms), std::end(kAllTransforms));
      const auto report = slow_growth_audit(census_from(audit_src), transforms, audit_budget);
      if (format == "csv") {
        out << audit_csv(report);
      } else {
        emit(to_json(report));
      }
      return 0;
    };
  });

  // speedup
  CensusSource speed_src;
  std::string speed_x;
  unsigned speed_s = 0;
  bool speed_timings = false;
  auto* speed_cmd = app.add_subcommand("speedup", "Depth via census lookup versus fresh enumeration");
  add_census_source(speed_cmd, speed_src);
  speed_cmd->add_option("-x", speed_x, "Target bitstring")->required();
  speed_cmd->add_option("-s", speed_s, "Significance in bits");
  speed_cmd->add_flag("--timings", speed_timings, "Include wall-clock nanoseconds (not reproducible)");
  speed_cmd->callback([&] {
    action = [&] {
      const auto record = speedup_demo(BitString::parse(speed_x), census_from(speed_src), speed_s, options());
      json doc = to_json(record);
      if (!speed_timings) {
        doc["lookup"].erase("nanoseconds");
        doc["enumeration"].erase("nanoseconds");
      }
      emit(doc);
      return 0;
    };
  });

  // verify
  std::string scenario_file;
  auto* verify_cmd = app.add_subcommand("verify", "Run a prover/verifier scenario and print the transcript");
  verify_cmd->add_option("--scenario", scenario_file, "Scenario JSON file")->required();
  verify_cmd->callback([&] {
    action = [&] {
      const Scenario scenario = parse_scenario_text(read_file(scenario_file));
      const Transcript transcript = run_scenario(scenario, options());
      json doc = to_json(transcript);
      doc["scenario"] = scenario_to_json(scenario);
      emit(doc);
      return transcript.accepted() ? 0 : 1;
    };
  });

  // refute
  std::string refute_x;
  std::uint64_t refute_threshold = 0;
  unsigned refute_L = 0;
  std::uint64_t refute_t = 0;
  auto* refute_cmd = app.add_subcommand("refute", "Search for a fast short program disproving a depth claim");
  refute_cmd->add_option("-x", refute_x, "Target bitstring")->required();
  refute_cmd->add_option("--threshold", refute_threshold, "Claimed depth in steps")->required();
  refute_cmd->add_option("-L", refute_L, "Program length bound")->required();
  refute_cmd->add_option("-t", refute_t, "Step bound")->required();
  refute_cmd->callback([&] {
    action = [&] {
      const auto x = BitString::parse(refute_x);
      const auto found = refute_shallow(x, refute_threshold, refute_L, refute_t, options());
      if (!found) {
        emit({{"x", x.str()}, {"result", "no-refutation-found"}});
        return 1;
      }
      json doc = to_json(*found);
      doc["result"] = "refuted";
      emit(doc);
      return 0;
    };
  });

  // proxy
  std::vector<std::string> constant_items;
  std::vector<std::string> noise_items;
  std::vector<std::string> structured_items;
  std::string model_text = "1,1,1";
  std::string proxy_out;
  auto* proxy_cmd = app.add_subcommand("proxy", "Compression-based depth proxy over a corpus");
  proxy_cmd->add_option("--constant", constant_items, "n,byte (repeatable)");
  proxy_cmd->add_option("--noise", noise_items, "n,seed (repeatable)");
  proxy_cmd->add_option("--structured", structured_items, "width,generations (repeatable)");
  proxy_cmd->add_option("--model", model_text, "Costs per_token,per_literal_byte,per_match_byte");
  proxy_cmd->add_option("-o,--output", proxy_out, "Write the report here instead of stdout");
  proxy_cmd->callback([&] {
    action = [&] {
      std::vector<CorpusKind> corpus;
      for (const auto& item : constant_items) {
        const auto v = parse_u64_list(item, 2, "--constant");
        if (v[1] > 255) throw std::invalid_argument("--constant byte must be 0..255");
        corpus.push_back(ConstantCorpus{v[0], static_cast<std::uint8_t>(v[1])});
      }
      for (const auto& item : noise_items) {
        const auto v = parse_u64_list(item, 2, "--noise");
        if (v[1] == 0) throw std::invalid_argument("--noise seed must be nonzero");
        corpus.push_back(NoiseCorpus{v[0], v[1]});
      }
      for (const auto& item : structured_items) {
        const auto v = parse_u64_list(item, 2, "--structured");
        corpus.push_back(StructuredCorpus{v[0], v[1]});
      }
      if (corpus.empty()) {
        corpus = {ConstantCorpus{65536, 'A'}, NoiseCorpus{65536, 1}, StructuredCorpus{256, 2048}};
      }
      const auto m = parse_u64_list(model_text, 3, "--model");
      const CostModel model{m[0], m[1], m[2]};
      const auto result = proxy_depth_report(corpus, model, config.workers);
      const std::string text = format == "csv" ? proxy_csv(result) : to_json(result).dump(2) + "\n";
      if (proxy_out.empty()) {
        out << text;
      } else {
        write_file(proxy_out, text);
      }
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      app.exit(e, out, err);
      return 0;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  config.subcommand = app.get_subcommands().front()->get_name();
  config.format = format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
  config.cache_dir = resolve_cache_dir(cache_flag);

  auto domain_error = [&](const std::string& kind, const std::string& message) {
    err << json{{"error", kind}, {"message", message}}.dump() << '\n';
    return 1;
  };
  try {
    return action();
  } catch (const DomainFailure& e) {
    return domain_error(e.kind(), e.what());
  } catch (const ResourceLimitError& e) {
    return domain_error("resource-limit", e.what());
  } catch (const CensusFormatError& e) {
    return domain_error("census-format", e.what());
  } catch (const CodecError& e) {
    return domain_error("codec", e.what());
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n\n" << app.get_subcommands().front()->help();
    return 2;
  } catch (const std::exception& e) {
    return domain_error("failure", e.what());
  }
}

}  // namespace depthlab
