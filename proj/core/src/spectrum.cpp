#include "mutualcover/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "compositions.hpp"

namespace mutualcover {

namespace {

bool same_density(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

InfoSpectrum::InfoSpectrum(std::vector<SpectrumLine> lines) {
  std::erase_if(lines, [](const SpectrumLine& l) { return !(l.mass > 0.0); });
  std::sort(lines.begin(), lines.end(),
            [](const SpectrumLine& a, const SpectrumLine& b) {
              return a.density < b.density;
            });
  for (const auto& l : lines) {
    if (!lines_.empty() && same_density(lines_.back().density, l.density)) {
      auto& back = lines_.back();
      // Mass-weighted representative keeps the mean exact.
      back.density = (back.density * back.mass + l.density * l.mass) /
                     (back.mass + l.mass);
      back.mass += l.mass;
    } else {
      lines_.push_back(l);
    }
  }
}

double InfoSpectrum::max_density() const {
  return lines_.empty() ? kNegInf : lines_.back().density;
}

double InfoSpectrum::tail_ge(double t) const {
  double acc = 0.0;
  for (auto it = lines_.rbegin(); it != lines_.rend() && it->density >= t; ++it)
    acc += it->mass;
  return acc;
}

double InfoSpectrum::tail_gt(double t) const {
  double acc = 0.0;
  for (auto it = lines_.rbegin(); it != lines_.rend() && it->density > t; ++it)
    acc += it->mass;
  return acc;
}

double InfoSpectrum::mean() const {
  return expect([](double d) { return d; });
}

double InfoSpectrum::variance() const {
  const double mu = mean();
  return expect([mu](double d) { return (d - mu) * (d - mu); });
}

double InfoSpectrum::log_moment(double alpha) const {
  double top = kNegInf;
  for (const auto& l : lines_)
    top = std::max(top, std::log(l.mass) + alpha * l.density);
  double acc = 0.0;
  for (const auto& l : lines_)
    acc += std::exp(std::log(l.mass) + alpha * l.density - top);
  return top + std::log(acc);
}

double InfoSpectrum::tilted_mean(double alpha) const {
  double top = kNegInf;
  for (const auto& l : lines_)
    top = std::max(top, std::log(l.mass) + alpha * l.density);
  double num = 0.0, den = 0.0;
  for (const auto& l : lines_) {
    const double w = std::exp(std::log(l.mass) + alpha * l.density - top);
    num += w * l.density;
    den += w;
  }
  return num / den;
}

InfoSpectrum info_spectrum(const JointPmf& j) {
  const auto dens = info_density(j);
  std::vector<SpectrumLine> lines;
  for (std::size_t i = 0; i < j.atoms(); ++i)
    if (j.data()[i] > 0.0) lines.push_back({dens.values[i], j.data()[i]});
  return InfoSpectrum(std::move(lines));
}

InfoSpectrum spectrum_power(const InfoSpectrum& base, int n, std::size_t cap) {
  require(n >= 1, ErrorKind::kInvalidArgument, "spectrum power needs n >= 1");
  cap = effective_cap(cap);
  const std::size_t parts = base.size();
  const double count =
      detail::composition_count(static_cast<std::size_t>(n), parts);
  require(count <= static_cast<double>(cap), ErrorKind::kSizeCapExceeded,
          "spectrum power needs " + std::to_string(count) + " compositions");
  std::vector<double> logp(parts);
  for (std::size_t i = 0; i < parts; ++i)
    logp[i] = std::log(base.lines()[i].mass);
  std::vector<SpectrumLine> lines;
  lines.reserve(static_cast<std::size_t>(count));
  detail::for_each_composition(
      static_cast<std::size_t>(n), parts,
      [&](const std::vector<std::size_t>& t) {
        double lm = detail::log_multinomial(t);
        double d = 0.0;
        for (std::size_t i = 0; i < parts; ++i) {
          lm += static_cast<double>(t[i]) * logp[i];
          d += static_cast<double>(t[i]) * base.lines()[i].density;
        }
        lines.push_back({d, std::exp(lm)});
      });
  return InfoSpectrum(std::move(lines));
}

std::vector<SmoothStep> smooth_mi_profile(const InfoSpectrum& s) {
  std::vector<SmoothStep> steps;
  double removed = 0.0;
  for (auto it = s.lines().rbegin(); it != s.lines().rend(); ++it) {
    steps.push_back({removed, it->density});
    removed += it->mass;
  }
  return steps;
}

double smooth_mutual_information(const InfoSpectrum& s, double eps) {
  require(eps >= 0.0 && eps < 1.0, ErrorKind::kInvalidArgument,
          "eps must lie in [0, 1)");
  double value = s.max_density();
  for (const auto& step : smooth_mi_profile(s)) {
    if (step.removed > eps + 1e-12) break;
    value = step.value;
  }
  return value;
}

}  // namespace mutualcover
