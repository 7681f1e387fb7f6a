#pragma once

// Joint-distribution simulation by selection: given N candidate symbols drawn
// jointly, pick one index so the selected symbol follows a target law. The
// optimal rule comes from an integer max-flow form of Hall's marriage
// theorem on K-type quantizations of both laws.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mutualcover/oracle.hpp"
#include "mutualcover/probcore.hpp"

namespace mutualcover {

// For each realization, a distribution over the N selectable indices.
struct SelectionRule {
  std::size_t indices = 0;
  std::vector<std::string> keys;      // one label per realization
  std::vector<double> probs;          // realizations x indices, row-major
  std::vector<std::uint8_t> flagged;  // row came from a fallback

  std::size_t realizations() const { return keys.size(); }
  double operator()(std::size_t r, std::size_t i) const {
    return probs[r * indices + i];
  }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(probs).subspan(r * indices, indices);
  }
  std::size_t flagged_rows() const;
};

// Masses scaled to integers summing to k by the largest-remainder method;
// ties go to the lower index.
struct KTypeQuantization {
  std::int64_t k = 0;
  std::vector<std::int64_t> counts;
};

KTypeQuantization quantize(std::span<const double> probs, std::int64_t k);

// Joint law of (Z_1..Z_N) given by its realizations with positive mass.
struct SequenceLaw {
  std::size_t alphabet = 0;
  std::size_t length = 0;
  std::vector<std::vector<std::size_t>> sequences;
  std::vector<double> probs;
  std::vector<std::string> keys;  // optional labels; defaults to the tuple
};

struct SamplerResult {
  SelectionRule rule;
  double achieved_tv = 0.0;
  // Quantized sup-side gap: the max-flow deficiency divided by k.
  double quantized_gap = 0.0;
  std::int64_t k = 0;
  std::int64_t overflow_units = 0;
  std::size_t network_edges = 0;
};

SamplerResult select_from_sequence(const SequenceLaw& law, const Pmf& target,
                                   std::int64_t k);

// Codebook realizations (u_1..u_m, v_1..v_l) in mixed radix with u_1 most
// significant; selectable index (i, j) is i * l + j.
SequenceLaw pair_sequence_law(const JointPmf& j, int m, int l);

SamplerResult optimal_pair_sampler(const JointPmf& j, int m, int l,
                                   std::int64_t k);

// Selects (i, j) with probability proportional to exp(ı(u_i; v_j)).
SelectionRule weighted_sampler_rule(const JointPmf& j, int m, int l);

// Half the L1 distance between the selected pair's law and P_UV.
double exact_tv_of_rule(const JointPmf& j, const SelectionRule& rule, int m,
                        int l);

// Law of the selected symbol under a sequence law.
std::vector<double> output_distribution(const SequenceLaw& law,
                                        const SelectionRule& rule);

struct TvEstimate {
  McEstimate estimate;   // mean is the plug-in TV
  double bias_bound = 0.0;
};

TvEstimate mc_tv_of_rule(const JointPmf& j, const SelectionRule& rule,
                         const CodebookSpec& spec, unsigned workers = 1);
// The weighted rule evaluated on the fly, for codebooks too large to
// tabulate.
TvEstimate mc_tv_weighted(const JointPmf& j, const CodebookSpec& spec,
                          unsigned workers = 1);

struct DualityReport {
  double sup_side = 0.0;
  double inf_side = 0.0;
  double slack = 0.0;
  bool ordered = false;  // sup_side <= inf_side (+1e-12)
  bool within_slack = false;
  CoveringSet worst_set;
  SamplerResult sampler;
};

DualityReport duality_check(const JointPmf& j, int m, int l, std::int64_t k,
                            unsigned workers = 1);

}  // namespace mutualcover
