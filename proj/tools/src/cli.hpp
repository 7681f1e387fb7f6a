#pragma once

// Batch front end: parses arguments, runs one subcommand, and writes
// summary.json, table.csv and meta.json into the output directory. Nothing is
// written unless the whole run succeeds.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mutualcover::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCriterionFailed = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitCapExceeded = 3;

struct RunConfig {
  std::string subcommand;
  std::string input;
  std::string out_dir = "mutualcover-out";
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  bool bits = false;
  std::vector<std::string> sweeps;  // key=a:b:step, key=v or key=v1,v2
  std::uint64_t samples = 0;
  std::string kind = "dee";
  std::string bound = "talagrand";
};

// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace mutualcover::cli
