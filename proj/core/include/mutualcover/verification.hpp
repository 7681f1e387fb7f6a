#pragma once

// The acceptance suite: ten property checks with pinned tolerances, each
// computed against exact enumeration or a closed-form reference.

#include <cstdint>
#include <string>
#include <vector>

#include "mutualcover/broadcast.hpp"
#include "mutualcover/probcore.hpp"

namespace mutualcover {

struct VerifyOptions {
  unsigned workers = 1;
  std::uint64_t seed = 20240917;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriteria = 10;

CriterionResult run_criterion(int id, const VerifyOptions& options);
std::vector<CriterionResult> run_acceptance(const VerifyOptions& options);

// "PASS [3] name: detail (0.01 s)".
std::string format_result(const CriterionResult& r);

// x = (u, v) on a four-letter input; Y observes u through BSC(p1) and Z
// observes v through BSC(p2).
struct BscPairChannels {
  CondPmf y;
  CondPmf z;
  std::vector<std::size_t> x_map;
};

BscPairChannels bsc_pair_channels(double p1, double p2);

}  // namespace mutualcover
