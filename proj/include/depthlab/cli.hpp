#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "depthlab/census.hpp"

namespace depthlab {

enum class OutputFormat { Json, Csv };

struct RunConfig {
  std::string subcommand;
  std::filesystem::path cache_dir;
  OutputFormat format = OutputFormat::Json;
  unsigned workers = 1;
};

inline constexpr const char* kCacheEnvVar = "DEPTHLAB_CACHE";
inline constexpr const char* kDefaultCacheDir = ".depthlab-cache";

// "UM-1/L{L}/t{t}/cap{c}"
std::string cache_key(const CensusParams& params);

// Flag, then $DEPTHLAB_CACHE, then the default.
std::filesystem::path resolve_cache_dir(const std::optional<std::string>& flag);

// Loads the cached census for `params` if present and intact; otherwise
// builds it and (re)writes the cache, warning on `warnings` when a corrupt
// file is replaced.
HaltingCensus obtain_census(const CensusParams& params, const std::filesystem::path& cache_dir,
                            const BuildOptions& options, std::ostream& warnings, bool* from_cache = nullptr);

// Exit status: 0 success, 1 domain failure, 2 usage error.
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace depthlab
