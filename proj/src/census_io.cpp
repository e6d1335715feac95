#include "depthlab/census_io.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>

#include "json.hpp"

namespace depthlab {

using nlohmann::json;

std::string sha256_hex(std::string_view data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  return to_hex(std::vector<std::uint8_t>(digest, digest + length));
}

std::string census_body(const HaltingCensus& census) {
  std::string body;
  for (const auto& [output, list] : census.entries()) {
    json programs = json::array();
    for (const auto& entry : list) programs.push_back({{"p", entry.program.str()}, {"steps", entry.steps}});
    body += json{{"output", output.str()}, {"programs", std::move(programs)}}.dump();
    body += '\n';
  }
  return body;
}

std::string census_checksum(const HaltingCensus& census) { return sha256_hex(census_body(census)); }

std::string serialize_census(const HaltingCensus& census) {
  const std::string body = census_body(census);
  const auto& params = census.params();
  json header = {
      {"format", kCensusFormat},
      {"machine", params.machine_version},
      {"L", params.max_program_bits},
      {"t", params.limits.max_steps},
      {"output_cap", params.limits.max_output_bits},
      {"count", census.program_count()},
      {"kraft", census.kraft().to_string()},
      {"checksum", sha256_hex(body)},
  };
  return header.dump() + '\n' + body;
}

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw CensusFormatError(CensusFormatError::Kind::Malformed, "malformed census file: " + what);
}

}  // namespace

HaltingCensus parse_census(std::string_view text) {
  const auto newline = text.find('\n');
  if (newline == std::string_view::npos) malformed("missing header line");
  const std::string_view body = text.substr(newline + 1);

  json header;
  try {
    header = json::parse(text.substr(0, newline));
  } catch (const json::exception& e) {
    malformed(std::string("header: ") + e.what());
  }
  if (!header.is_object()) malformed("header is not an object");

  CensusParams params;
  std::size_t count = 0;
  std::string kraft;
  std::string checksum;
  try {
    if (header.at("format").get<std::string>() != kCensusFormat) {
      throw CensusFormatError(CensusFormatError::Kind::VersionMismatch,
                              "unsupported census format '" + header.at("format").get<std::string>() + "'");
    }
    params.machine_version = header.at("machine").get<std::string>();
    if (params.machine_version != kMachineVersion) {
      throw CensusFormatError(CensusFormatError::Kind::VersionMismatch,
                              "census built for machine '" + params.machine_version + "', expected '" +
                                  std::string(kMachineVersion) + "'");
    }
    params.max_program_bits = header.at("L").get<unsigned>();
    params.limits.max_steps = header.at("t").get<std::uint64_t>();
    params.limits.max_output_bits = header.at("output_cap").get<std::uint64_t>();
    count = header.at("count").get<std::size_t>();
    kraft = header.at("kraft").get<std::string>();
    checksum = header.at("checksum").get<std::string>();
  } catch (const json::exception& e) {
    malformed(std::string("header field: ") + e.what());
  }

  if (sha256_hex(body) != checksum) {
    throw CensusFormatError(CensusFormatError::Kind::ChecksumMismatch, "census checksum mismatch");
  }

  std::vector<std::pair<BitString, CensusEntry>> entries;
  try {
    params.validate();
    std::size_t start = 0;
    while (start < body.size()) {
      const auto end = body.find('\n', start);
      if (end == std::string_view::npos) malformed("unterminated body line");
      const json line = json::parse(body.substr(start, end - start));
      const auto output = BitString::parse(line.at("output").get<std::string>());
      for (const auto& program : line.at("programs")) {
        entries.emplace_back(output, CensusEntry{Program(BitString::parse(program.at("p").get<std::string>())),
                                                 program.at("steps").get<std::uint64_t>()});
      }
      start = end + 1;
    }
  } catch (const CensusFormatError&) {
    throw;
  } catch (const std::exception& e) {
    malformed(e.what());
  }

  HaltingCensus census;
  try {
    census = HaltingCensus::from_entries(params, std::move(entries));
  } catch (const std::exception& e) {
    malformed(e.what());
  }
  if (census.program_count() != count) malformed("program count does not match header");
  if (census.kraft().to_string() != kraft) malformed("Kraft sum does not match header");
  if (census_body(census) != body) malformed("body is not in canonical form");
  return census;
}

void save_census(const HaltingCensus& census, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << serialize_census(census);
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

HaltingCensus load_census(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_census(text);
}

}  // namespace depthlab
