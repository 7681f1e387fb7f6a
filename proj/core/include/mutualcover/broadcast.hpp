#pragma once

// Broadcast-channel error exponents for the two-auxiliary Marton scheme.

#include <string>
#include <utility>
#include <vector>

#include "mutualcover/bounds.hpp"
#include "mutualcover/probcore.hpp"

namespace mutualcover {

struct BroadcastSpec {
  JointPmf joint;
  CondPmf y_channel;               // P_{Y|X}
  CondPmf z_channel;               // P_{Z|X}
  std::vector<std::size_t> x_map;  // x(u, v), row-major over U x V
  double m1 = 1.0;
  double m2 = 1.0;
  double n1 = 1.0;
  double n2 = 1.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double gamma = 0.0;

  void validate() const;
};

// Positive table over (u, y) or (v, z), row-major.
struct ScoreFunction {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  std::size_t floored = 0;  // cells raised to kScoreFloor

  double operator()(std::size_t a, std::size_t b) const {
    return values[a * cols + b];
  }
};

inline constexpr double kScoreFloor = 1e-300;

// -ln sum_y (sum_u P(u) W(y|u)^{1/(1+theta)})^{1+theta}.
double gallager_e0(const Pmf& input, const CondPmf& channel, double theta);

// I(U;Y) for input law P_U through P_{Y|U}.
double channel_mutual_information(const Pmf& input, const CondPmf& channel);

// P_{Y|U} and P_{Z|V} induced by the joint law, x(.) and the channels. Inputs
// with zero marginal mass average the channel rows uniformly.
std::pair<CondPmf, CondPmf> induced_channels(const JointPmf& joint,
                                             const CondPmf& y_channel,
                                             const CondPmf& z_channel,
                                             const std::vector<std::size_t>& x_map);

// h(u,y) = exp(ı_{U;Y}(u;y)/(1+theta1)) and g(v,z) likewise with theta2.
std::pair<ScoreFunction, ScoreFunction> default_scores(const BroadcastSpec& spec);

// φ_k(u,v) over U x V, row-major; which is 1 or 2.
std::vector<double> phi(const BroadcastSpec& spec, int which,
                        const ScoreFunction& scores);

struct Lemma6Report {
  BoundReport bound1;
  BoundReport bound2;
  CoveringSet f;
  double mean_phi1 = 0.0;
  double mean_phi2 = 0.0;
  double covering_term = 0.0;
};

Lemma6Report lemma6_bound(const BroadcastSpec& spec, const ScoreFunction& h,
                          const ScoreFunction& g);

struct BroadcastExponent {
  double value = 0.0;
  double theta = 0.0;
  double term1 = 0.0;
  double term2 = 0.0;
  double term3 = 0.0;
  double i_uy = 0.0;
  double i_vz = 0.0;
  double i_uv = 0.0;
  std::vector<std::string> notes;
};

BroadcastExponent theorem2_exponent(const JointPmf& joint,
                                    const CondPmf& y_channel,
                                    const CondPmf& z_channel,
                                    const std::vector<std::size_t>& x_map,
                                    const RatePair& rates);

}  // namespace mutualcover
