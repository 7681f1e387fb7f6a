#pragma once

// Ground truth for covering failure: exact probabilities by enumerating the
// types of the V-codebook, brute-force worst-case gaps over all sets F, and
// seeded Monte Carlo estimates that do not depend on the worker count.

#include <cstdint>
#include <vector>

#include "mutualcover/bounds.hpp"
#include "mutualcover/probcore.hpp"

namespace mutualcover {

struct CodebookSpec {
  int m = 1;
  int l = 1;
  std::uint64_t seed = 0;
  std::uint64_t n_samples = 1;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  unsigned worker_count = 1;
  std::uint64_t hits = 0;
};

// P[no pair (U_i, V_j) lands in F] for i.i.d. codebooks U_1..U_m ~ P_U and
// V_1..V_l ~ P_V.
double exact_failure(const JointPmf& j, const CoveringSet& f, int m, int l,
                     std::size_t cap = kTypeCap);

// Same event, evaluated for many sets F that share (j, l). Holds the law of
// the set of distinct V symbols appearing in the codebook.
class FailureEvaluator {
 public:
  FailureEvaluator(const JointPmf& j, int l, std::size_t cap = kTypeCap);

  double failure(const CoveringSet& f, int m) const;
  // Row-wise bitmask form: rows[u] has bit v set when (u,v) ∈ F.
  double failure_rows(std::span<const std::uint64_t> rows, int m) const;

  std::size_t support_sets() const { return sets_.size(); }

 private:
  std::vector<double> pu_;
  std::size_t cols_ = 0;
  std::vector<std::uint64_t> sets_;
  std::vector<double> weights_;
};

McEstimate mc_failure(const JointPmf& j, const CoveringSet& f,
                      const CodebookSpec& spec, unsigned workers = 1);

struct WorstCaseGap {
  double gap = 0.0;
  CoveringSet argmax;
};

// max over all F of P_UV(F) - P[some pair lands in F]. Ties within 1e-13
// resolve to the lexicographically first row-major mask.
WorstCaseGap worstcase_gap_exact(const JointPmf& j, int m, int l,
                                 unsigned workers = 1);

// {(u,v) in the support : a <= ı(u;v) <= b}.
CoveringSet density_window_set(const JointPmf& j, double a, double b);

// {(u,v) in the support : ı(u;v) <= tau}.
CoveringSet density_threshold_set(const JointPmf& j, double tau);

struct TypicalWindow {
  CoveringSet set;
  double a = 0.0;
  double b = 0.0;
  double mass = 0.0;
  bool in_target = false;  // mass ∈ (1 - eps, 1 - eps/2)
};

// Symmetric window [I - w, I + w] with w chosen by bisection so that
// P_UV(F) lands in (1 - eps, 1 - eps/2) when some w achieves it; otherwise
// the narrowest window with mass above 1 - eps.
TypicalWindow typical_window(const JointPmf& j, double eps);

struct WeightedSumStats {
  std::uint64_t n_samples = 0;
  double mean = 0.0;
  double mean_stderr = 0.0;
  double zero_fraction = 0.0;
  double zero_stderr = 0.0;
  double g_mass = 0.0;        // P_UV(G), the expectation of S
  double talagrand = 0.0;     // Lemma-4 value at the same (F, M, L, gamma)
  bool mean_consistent = false;  // |mean - P_UV(G)| <= 4 mean_stderr
};

// Samples S = (1/ML) sum_{i,j} exp(ı(U_i;V_j)) 1{(U_i,V_j) ∈ G} with
// G = F ∩ {ı <= ln ML - gamma}.
WeightedSumStats weighted_sum_stats(const JointPmf& j, const CoveringSet& f,
                                    const CodebookSpec& spec, double gamma,
                                    unsigned workers = 1);

}  // namespace mutualcover
