#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace fatpoints::commands {

struct Defaults {
  std::uint32_t prime = 32003;
  std::uint32_t prime2 = 31013;
  std::uint64_t seed = 1;
  int threads = 1;
  bool timing = true;
};

enum Verdict { kVerified = 0, kViolated = 1, kInconclusive = 2 };

struct Report {
  nlohmann::json json;
  Verdict verdict = kVerified;
};

/// Throws fatpoints::Error for bad requests; unknown commands raise
/// UnknownCommand.
Report run(const std::string& command, const nlohmann::json& request, const Defaults& defaults);

std::vector<std::string> command_names();

struct UnknownCommand : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const char* version();

}  // namespace fatpoints::commands
