#pragma once

// The information spectrum: the law of ı(U;V) under P_UV, as a finite list
// of distinct density values with their masses. Every bound that depends on
// P_UV only through the law of ı works on a spectrum, which lets n-fold
// tensor powers be handled by composition counting instead of materializing
// |U|^n |V|^n atoms.

#include <cstddef>
#include <vector>

#include "mutualcover/probcore.hpp"

namespace mutualcover {

struct SpectrumLine {
  double density = 0.0;
  double mass = 0.0;
};

class InfoSpectrum {
 public:
  InfoSpectrum() = default;
  // Sorts ascending and merges densities closer than the merge tolerance.
  explicit InfoSpectrum(std::vector<SpectrumLine> lines);

  const std::vector<SpectrumLine>& lines() const { return lines_; }
  std::size_t size() const { return lines_.size(); }
  bool empty() const { return lines_.empty(); }

  double max_density() const;

  // P[ı >= t] and P[ı > t].
  double tail_ge(double t) const;
  double tail_gt(double t) const;

  double mean() const;
  double variance() const;

  // ln E[exp(alpha ı)], evaluated with log-sum-exp.
  double log_moment(double alpha) const;
  // d/d alpha of log_moment: the mean of ı under the tilted law.
  double tilted_mean(double alpha) const;

  // E[f(ı)] for a callable f.
  template <typename F>
  double expect(F&& f) const {
    double acc = 0.0;
    for (const auto& line : lines_) acc += line.mass * f(line.density);
    return acc;
  }

 private:
  std::vector<SpectrumLine> lines_;
};

InfoSpectrum info_spectrum(const JointPmf& j);

// Spectrum of P_UV^{⊗n}: densities add across coordinates, so the n-fold law
// is a multinomial over the base spectrum's lines.
InfoSpectrum spectrum_power(const InfoSpectrum& base, int n,
                            std::size_t cap = kTypeCap);

// One step of the smooth-MI staircase: for eps in [removed, next removed),
// I_inf^eps equals `value`.
struct SmoothStep {
  double removed = 0.0;
  double value = 0.0;
};

// Steps ordered by increasing removed mass; first step has removed == 0.
std::vector<SmoothStep> smooth_mi_profile(const InfoSpectrum& s);

double smooth_mutual_information(const InfoSpectrum& s, double eps);

}  // namespace mutualcover
