#pragma once

// Closed-form covering and simulation bounds, and their exponents.
//
// Codebook sizes are doubles so the same evaluators serve single-shot
// instances (M = 8) and asymptotic ones (M = exp(nR) with n in the hundreds).
// Probability-valued reports are clamped to [0, 1]; `log_value` keeps the
// natural log of the unclamped expression so doubly exponential decay stays
// visible after the value itself underflows.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mutualcover/probcore.hpp"
#include "mutualcover/spectrum.hpp"

namespace mutualcover {

// F ⊆ U×V as a row-major mask.
class CoveringSet {
 public:
  enum class Origin { kExplicit, kDensityThreshold, kDensityWindow };

  CoveringSet() = default;
  static CoveringSet full(std::size_t rows, std::size_t cols);
  static CoveringSet none(std::size_t rows, std::size_t cols);
  static CoveringSet from_mask(std::size_t rows, std::size_t cols,
                               std::vector<std::uint8_t> mask);
  // Bit i of `bits` marks atom i (row-major); requires rows*cols <= 64.
  static CoveringSet from_bits(std::size_t rows, std::size_t cols,
                               std::uint64_t bits);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool contains(std::size_t u, std::size_t v) const {
    return mask_[u * cols_ + v] != 0;
  }
  bool contains(std::size_t atom) const { return mask_[atom] != 0; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  std::size_t count() const;

  Origin origin() const { return origin_; }
  // Threshold (window lower end) and window upper end, when applicable.
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  CoveringSet& tag(Origin origin, double lower, double upper);

  void check_matches(const JointPmf& j) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> mask_;
  Origin origin_ = Origin::kExplicit;
  double lower_ = 0.0;
  double upper_ = 0.0;
};

struct BoundReport {
  std::string name;
  double value = 0.0;
  double log_value = 0.0;
  std::map<std::string, double> params;
  std::vector<std::string> notes;
  bool probability = true;
  bool clamped = false;
};

struct RatePair {
  double r1 = 0.0;
  double r2 = 0.0;

  double sum() const { return r1 + r2; }
};

// P_UV(F), P_UV(F^c), and P[(U,V) ∈ F, ı <= threshold].
double covered_mass(const JointPmf& j, const CoveringSet& f);
double truncated_mass(const JointPmf& j, const CoveringSet& f,
                      double threshold);
// G = F ∩ {ı <= threshold} restricted to the support.
CoveringSet truncated_set(const JointPmf& j, const CoveringSet& f,
                          double threshold);

// Lemma-1 style bound with one V and m U-codewords.
BoundReport unilateral_bound(const JointPmf& j, const CoveringSet& f, double m,
                             double gamma);

BoundReport resolvability_bound(const JointPmf& j, const CoveringSet& f,
                                double m, double l, double delta,
                                double gamma);

// The Chebyshev second-moment bound with smooth mutual information. The
// printed statement divides by P_UV(F^c) - eps; kCorrected divides by
// P_UV(F) - eps, the form that follows from the second-moment argument.
enum class SecondMomentForm { kAsPrinted, kCorrected };

BoundReport secondmoment_bound(const JointPmf& j, const CoveringSet& f,
                               double m, double l, double eps,
                               SecondMomentForm form =
                                   SecondMomentForm::kAsPrinted);

BoundReport limited_independence_bound(const JointPmf& j, const CoveringSet& f,
                                       double m, double l, double gamma);

BoundReport talagrand_bound(const JointPmf& j, const CoveringSet& f, double m,
                            double l, double gamma);

// inf over eps in [0, p] of exp(-(p - eps) / (2/M + 2/L + 4 e^{I^eps}/(ML))),
// scanned on the staircase of achievable truncation masses.
BoundReport typical_bound_optimized(const InfoSpectrum& s, double p, double m,
                                    double l);
BoundReport typical_bound_optimized(const JointPmf& j, double p, double m,
                                    double l);

double dee_exponent(const JointPmf& j, const RatePair& rates);
double dee_exponent(double mutual_info, const RatePair& rates);

// P_{V_1..V_k} marginal of a multivariate pmf whose Z is degenerate.
double multivariate_dee_exponent(const MultivarPmf& p,
                                 const std::vector<double>& rates);

// Conditional multivariate covering bound. `f` is a mask over the full
// (z, v_1..v_k) tensor; an empty vector means the full set.
BoundReport multivariate_bound(const MultivarPmf& p,
                               const std::vector<double>& sizes, double gamma,
                               const std::vector<std::uint8_t>& f = {});

BoundReport sim_achievability_bound(const InfoSpectrum& s, double m, double l,
                                    double p);
BoundReport sim_achievability_bound(const JointPmf& j, double m, double l,
                                    double p);

BoundReport sim_converse_bound(const InfoSpectrum& s, double m, double l);
BoundReport sim_converse_bound(const JointPmf& j, double m, double l);

struct ExponentResult {
  double value = 0.0;
  double argmax = 0.0;
  std::vector<std::string> notes;
};

inline constexpr double kAlphaMax = 50.0;

ExponentResult sim_exponent(const InfoSpectrum& s, const RatePair& rates);
ExponentResult sim_exponent(const JointPmf& j, const RatePair& rates);

double second_order_error(const JointPmf& j, double a_coefficient);

struct WeightedSamplerBounds {
  BoundReport e108;
  BoundReport e109;
};

WeightedSamplerBounds weighted_sampler_bound(const InfoSpectrum& s, double m,
                                             double l);
WeightedSamplerBounds weighted_sampler_bound(const JointPmf& j, double m,
                                             double l);

enum class WeightedCase {
  kTiltedInterior,  // R1+R2 <= R^(1): value is D(P^(1+rho*) || P_UV)
  kSaturated,       // R1+R2 > R^(1): value is R1+R2 - D_2
};

struct WeightedExponent {
  double value = 0.0;
  double rho_star = 0.0;
  WeightedCase regime = WeightedCase::kTiltedInterior;
  // The same exponent from the piecewise closed form, for cross-checking the
  // ternary search.
  double closed_form = 0.0;
  double tilted_rate_at_one = 0.0;
};

WeightedExponent weighted_exponent(const JointPmf& j, const RatePair& rates);

struct RegimeCheck {
  bool inside = false;
  double tilted_rate_at_one = 0.0;  // R^(1)
  double d2 = 0.0;                  // D_2(P_UV || P_U x P_V)
  double lower = 0.0;               // R^(1)
  double upper = 0.0;               // 2 R^(1) - max{D_2, R1, R2}
  double sum = 0.0;
};

RegimeCheck weighted_regime_check(const JointPmf& j, const RatePair& rates);

BoundReport worstcase_gap_bound(const InfoSpectrum& s, double m, double l,
                                double p);
BoundReport worstcase_gap_bound(const JointPmf& j, double m, double l,
                                double p);

}  // namespace mutualcover
