#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mutualcover/bounds.hpp"
#include "mutualcover/probcore.hpp"

namespace mutualcover::testing {

inline JointPmf dsbs(double p) {
  return build_joint({{(1 - p) / 2, p / 2}, {p / 2, (1 - p) / 2}});
}

inline JointPmf independent(std::vector<double> pu, std::vector<double> pv) {
  Matrix m(pu.size(), std::vector<double>(pv.size()));
  for (std::size_t u = 0; u < pu.size(); ++u)
    for (std::size_t v = 0; v < pv.size(); ++v) m[u][v] = pu[u] * pv[v];
  return build_joint(m);
}

// Random joint pmf; with probability `zero_prob` each cell is forced to zero
// (at least one cell stays positive).
inline JointPmf random_joint(std::mt19937_64& rng, std::size_t rows,
                             std::size_t cols, double zero_prob = 0.0) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> cells(rows * cols);
  double total = 0.0;
  for (auto& c : cells) {
    c = unif(rng) < zero_prob ? 0.0 : -std::log(1.0 - unif(rng));
    total += c;
  }
  if (total == 0.0) {
    cells[0] = 1.0;
    total = 1.0;
  }
  Matrix m(rows, std::vector<double>(cols));
  for (std::size_t i = 0; i < cells.size(); ++i)
    m[i / cols][i % cols] = cells[i] / total;
  return build_joint(m);
}

inline CoveringSet random_set(std::mt19937_64& rng, std::size_t rows,
                              std::size_t cols) {
  std::vector<std::uint8_t> mask(rows * cols);
  for (auto& b : mask) b = static_cast<std::uint8_t>(rng() & 1u);
  return CoveringSet::from_mask(rows, cols, mask);
}

// Natural-log binary entropy.
inline double h_e(double p) {
  return -p * std::log(p) - (1 - p) * std::log(1 - p);
}

}  // namespace mutualcover::testing
