#include "mutualcover/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "density_compare.hpp"

namespace mutualcover {

namespace {

using detail::above;
using detail::at_least;
using detail::at_most;
using detail::below;
using detail::tol_at;

void check_size(double x, const char* what) {
  require(std::isfinite(x) && x >= 1.0, ErrorKind::kInvalidArgument,
          std::string(what) + " must be a finite size >= 1");
}

void check_rates(const RatePair& r) {
  require(std::isfinite(r.r1) && std::isfinite(r.r2) && r.r1 >= 0.0 &&
              r.r2 >= 0.0,
          ErrorKind::kInvalidArgument, "rates must be finite and >= 0");
}

BoundReport probability_report(std::string name, double raw) {
  BoundReport r;
  r.name = std::move(name);
  r.log_value = raw > 0.0 ? std::log(raw) : kNegInf;
  r.value = std::clamp(raw, 0.0, 1.0);
  if (raw > 1.0 || raw < 0.0 || std::isnan(raw)) {
    r.clamped = true;
    r.notes.push_back("clamped to [0,1]");
  }
  if (std::isnan(raw)) r.value = 1.0;
  return r;
}

// exp(-x) report where x >= 0 may be huge.
BoundReport exp_report(std::string name, double x) {
  BoundReport r;
  r.name = std::move(name);
  r.log_value = -x;
  r.value = std::exp(-x);
  return r;
}

double tail_ge(const InfoDensityTable& dens, const JointPmf& j, double t) {
  double acc = 0.0;
  for (std::size_t i = 0; i < j.atoms(); ++i)
    if (j.data()[i] > 0.0 && at_least(dens.values[i], t)) acc += j.data()[i];
  return acc;
}

double spectrum_tail_gt(const InfoSpectrum& s, double t) {
  return s.tail_gt(t + tol_at(t));
}

double log_ml(double m, double l) { return std::log(m) + std::log(l); }

}  // namespace

CoveringSet CoveringSet::full(std::size_t rows, std::size_t cols) {
  return from_mask(rows, cols, std::vector<std::uint8_t>(rows * cols, 1));
}

CoveringSet CoveringSet::none(std::size_t rows, std::size_t cols) {
  return from_mask(rows, cols, std::vector<std::uint8_t>(rows * cols, 0));
}

CoveringSet CoveringSet::from_mask(std::size_t rows, std::size_t cols,
                                   std::vector<std::uint8_t> mask) {
  require(mask.size() == rows * cols, ErrorKind::kShapeMismatch,
          "covering mask size differs from the alphabet product");
  CoveringSet f;
  f.rows_ = rows;
  f.cols_ = cols;
  for (auto& b : mask) b = b != 0 ? 1 : 0;
  f.mask_ = std::move(mask);
  return f;
}

CoveringSet CoveringSet::from_bits(std::size_t rows, std::size_t cols,
                                   std::uint64_t bits) {
  require(rows * cols <= 64, ErrorKind::kSizeCapExceeded,
          "bit masks cover at most 64 atoms");
  std::vector<std::uint8_t> mask(rows * cols);
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = (bits >> i) & 1u;
  return from_mask(rows, cols, std::move(mask));
}

std::size_t CoveringSet::count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), 1));
}

CoveringSet& CoveringSet::tag(Origin origin, double lower, double upper) {
  origin_ = origin;
  lower_ = lower;
  upper_ = upper;
  return *this;
}

void CoveringSet::check_matches(const JointPmf& j) const {
  require(rows_ == j.rows() && cols_ == j.cols(), ErrorKind::kShapeMismatch,
          "covering set built for a different alphabet");
}

double covered_mass(const JointPmf& j, const CoveringSet& f) {
  f.check_matches(j);
  double acc = 0.0;
  for (std::size_t i = 0; i < j.atoms(); ++i)
    if (f.contains(i)) acc += j.data()[i];
  return acc;
}

CoveringSet truncated_set(const JointPmf& j, const CoveringSet& f,
                          double threshold) {
  f.check_matches(j);
  const auto dens = info_density(j);
  std::vector<std::uint8_t> mask(j.atoms(), 0);
  for (std::size_t i = 0; i < j.atoms(); ++i)
    mask[i] = f.contains(i) && j.data()[i] > 0.0 &&
              at_most(dens.values[i], threshold);
  return CoveringSet::from_mask(j.rows(), j.cols(), std::move(mask));
}

double truncated_mass(const JointPmf& j, const CoveringSet& f,
                      double threshold) {
  return covered_mass(j, truncated_set(j, f, threshold));
}

BoundReport unilateral_bound(const JointPmf& j, const CoveringSet& f, double m,
                             double gamma) {
  check_size(m, "m");
  require(gamma > 0.0, ErrorKind::kInvalidArgument, "gamma must be > 0");
  const double miss = 1.0 - covered_mass(j, f);
  const double tail = tail_ge(info_density(j), j, std::log(m) - gamma);
  const double last = std::exp(-std::exp(gamma));
  auto r = probability_report("unilateral", std::max(0.0, miss) + tail + last);
  r.params = {{"m", m}, {"gamma", gamma}};
  return r;
}

BoundReport resolvability_bound(const JointPmf& j, const CoveringSet& f,
                                double m, double l, double delta,
                                double gamma) {
  check_size(m, "m");
  check_size(l, "l");
  require(delta > 0.0 && gamma > 0.0, ErrorKind::kInvalidArgument,
          "delta and gamma must be > 0");
  const double miss = std::max(0.0, 1.0 - covered_mass(j, f));
  const double level = m * l * std::exp(-gamma) - delta;
  // P[exp(ı) >= level]; every atom qualifies once level <= 0.
  const double tail = level > 0.0
                          ? tail_ge(info_density(j), j, std::log(level))
                          : 1.0;
  const double third = (std::min(m, l) - 1.0) / delta;
  const double last = std::exp(-std::exp(gamma));
  auto r = probability_report("resolvability", miss + tail + third + last);
  r.params = {{"m", m}, {"l", l}, {"delta", delta}, {"gamma", gamma}};
  return r;
}

BoundReport secondmoment_bound(const JointPmf& j, const CoveringSet& f,
                               double m, double l, double eps,
                               SecondMomentForm form) {
  check_size(m, "m");
  check_size(l, "l");
  require(eps > 0.0 && eps < 1.0, ErrorKind::kInvalidArgument,
          "eps must lie in (0,1)");
  const double covered = covered_mass(j, f);
  const double base =
      form == SecondMomentForm::kAsPrinted ? 1.0 - covered : covered;
  const double gap = base - eps;
  require(gap > 0.0, ErrorKind::kEpsilonTooLarge,
          form == SecondMomentForm::kAsPrinted
              ? "P_UV(F^c) must exceed eps"
              : "P_UV(F) must exceed eps");
  const double ismooth = smooth_mutual_information(j, eps);
  const double raw = std::exp(ismooth - log_ml(m, l)) / gap +
                     (m + l) / (gap * gap * m * l);
  auto r = probability_report(form == SecondMomentForm::kAsPrinted
                                  ? "secondmoment"
                                  : "secondmoment_corrected",
                              raw);
  r.params = {{"m", m}, {"l", l}, {"eps", eps}, {"smooth_mi", ismooth}};
  return r;
}

BoundReport limited_independence_bound(const JointPmf& j, const CoveringSet& f,
                                       double m, double l, double gamma) {
  check_size(m, "m");
  check_size(l, "l");
  require(gamma > 0.0, ErrorKind::kInvalidArgument, "gamma must be > 0");
  const double denom = truncated_mass(j, f, log_ml(m, l) - gamma);
  BoundReport r;
  if (denom <= 0.0) {
    r = probability_report("limited_independence", 1.0);
    r.notes.push_back("vacuous: truncated mass is zero");
  } else {
    r = probability_report("limited_independence",
                           (std::exp(-gamma) + 1.0 / m + 1.0 / l) / denom);
  }
  r.params = {{"m", m}, {"l", l}, {"gamma", gamma}, {"truncated_mass", denom}};
  return r;
}

BoundReport talagrand_bound(const JointPmf& j, const CoveringSet& f, double m,
                            double l, double gamma) {
  check_size(m, "m");
  check_size(l, "l");
  require(gamma > 0.0, ErrorKind::kInvalidArgument, "gamma must be > 0");
  const double num = truncated_mass(j, f, log_ml(m, l) - gamma);
  const double den = 4.0 * std::exp(-gamma) + 2.0 / m + 2.0 / l;
  auto r = exp_report("talagrand", num / den);
  r.params = {{"m", m}, {"l", l}, {"gamma", gamma}, {"truncated_mass", num}};
  return r;
}

BoundReport typical_bound_optimized(const InfoSpectrum& s, double p, double m,
                                    double l) {
  check_size(m, "m");
  check_size(l, "l");
  require(p > 0.0 && p <= 1.0, ErrorKind::kInvalidArgument,
          "p must lie in (0,1]");
  const double lml = log_ml(m, l);
  double best = 0.0;
  double best_eps = 0.0;
  double best_i = s.max_density();
  bool first = true;
  for (const auto& step : smooth_mi_profile(s)) {
    if (step.removed > p + 1e-12) break;
    const double num = std::max(0.0, p - step.removed);
    const double den = 2.0 / m + 2.0 / l + 4.0 * std::exp(step.value - lml);
    const double x = num / den;
    if (first || x > best) {
      best = x;
      best_eps = step.removed;
      best_i = step.value;
      first = false;
    }
  }
  auto r = exp_report("typical_optimized", best);
  r.params = {{"p", p}, {"m", m}, {"l", l}, {"eps", best_eps},
              {"smooth_mi", best_i}};
  return r;
}

BoundReport typical_bound_optimized(const JointPmf& j, double p, double m,
                                    double l) {
  return typical_bound_optimized(info_spectrum(j), p, m, l);
}

double dee_exponent(double mutual_info, const RatePair& rates) {
  check_rates(rates);
  return std::min({rates.r1, rates.r2, rates.sum() - mutual_info});
}

double dee_exponent(const JointPmf& j, const RatePair& rates) {
  return dee_exponent(mutual_information(j), rates);
}

namespace {

// Marginal of the V-block onto the coordinates in `subset` (bit i = V_i),
// indexed mixed-radix with the lowest selected coordinate slowest.
std::vector<double> subset_marginal(const MultivarPmf& p,
                                    std::span<const double> block,
                                    unsigned subset,
                                    std::vector<std::size_t>& index_of) {
  const std::size_t k = p.arity();
  std::size_t size = 1;
  for (std::size_t i = 0; i < k; ++i)
    if (subset >> i & 1u) size *= p.v_size(i);
  std::vector<double> out(size, 0.0);
  index_of.assign(block.size(), 0);
  std::vector<std::size_t> sym(k);
  for (std::size_t c = 0; c < block.size(); ++c) {
    p.decode(c, sym);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (subset >> i & 1u) idx = idx * p.v_size(i) + sym[i];
    index_of[c] = idx;
    out[idx] += block[c];
  }
  return out;
}

}  // namespace

double multivariate_dee_exponent(const MultivarPmf& p,
                                 const std::vector<double>& rates) {
  const std::size_t k = p.arity();
  require(k <= 6, ErrorKind::kSizeCapExceeded,
          "multivariate exponent supports k <= 6");
  require(rates.size() == k, ErrorKind::kShapeMismatch,
          "need one rate per V coordinate");
  std::size_t zpos = 0, live = 0;
  for (std::size_t z = 0; z < p.z_size(); ++z) {
    double mass = 0.0;
    for (std::size_t c = 0; c < p.block(); ++c)
      mass += p.tensor()[z * p.block() + c];
    if (mass > 0.0) {
      zpos = z;
      ++live;
    }
  }
  require(live == 1, ErrorKind::kInvalidArgument,
          "multivariate exponent needs a constant Z");
  const auto block = p.tensor().subspan(zpos * p.block(), p.block());

  std::vector<std::vector<double>> single(k);
  std::vector<std::vector<std::size_t>> single_index(k);
  for (std::size_t i = 0; i < k; ++i)
    single[i] = subset_marginal(p, block, 1u << i, single_index[i]);

  double best = kPosInf;
  std::vector<std::size_t> index_of;
  std::vector<std::size_t> sym(k);
  for (unsigned s = 1; s < (1u << k); ++s) {
    const auto marg = subset_marginal(p, block, s, index_of);
    // D(P_{V_S} || prod P_{V_i}) summed over cells grouped by their S-index.
    std::vector<double> prod(marg.size(), 0.0);
    for (std::size_t c = 0; c < block.size(); ++c) {
      double q = 1.0;
      for (std::size_t i = 0; i < k; ++i)
        if (s >> i & 1u) q *= single[i][single_index[i][c]];
      prod[index_of[c]] = q;
    }
    double rate = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      if (s >> i & 1u) rate += rates[i];
    best = std::min(best, rate - kl_divergence(marg, prod));
  }
  return best;
}

BoundReport multivariate_bound(const MultivarPmf& p,
                               const std::vector<double>& sizes, double gamma,
                               const std::vector<std::uint8_t>& f) {
  const std::size_t k = p.arity();
  require(k >= 1 && k <= 4, ErrorKind::kSizeCapExceeded,
          "multivariate bound supports 1 <= k <= 4");
  require(sizes.size() == k, ErrorKind::kShapeMismatch,
          "need one codebook size per V coordinate");
  for (double m : sizes) check_size(m, "codebook size");
  require(f.empty() || f.size() == p.tensor().size(), ErrorKind::kShapeMismatch,
          "covering mask size differs from the tensor");
  const double scale =
      static_cast<double>(k) * std::ldexp(1.0, static_cast<int>(k)) *
      std::exp(-gamma);

  std::vector<double> log_sizes(k);
  for (std::size_t i = 0; i < k; ++i) log_sizes[i] = std::log(sizes[i]);

  double bound = 0.0;
  double min_cond = 1.0;
  std::vector<std::size_t> index_of;
  for (std::size_t z = 0; z < p.z_size(); ++z) {
    const auto joint = p.tensor().subspan(z * p.block(), p.block());
    double pz = 0.0;
    for (double x : joint) pz += x;
    if (pz <= 0.0) continue;
    std::vector<double> cond(joint.begin(), joint.end());
    for (double& x : cond) x /= pz;

    std::vector<std::vector<double>> single(k);
    std::vector<std::vector<std::size_t>> single_index(k);
    for (std::size_t i = 0; i < k; ++i)
      single[i] = subset_marginal(p, cond, 1u << i, single_index[i]);

    std::vector<std::uint8_t> in_g(cond.size(), 0);
    for (std::size_t c = 0; c < cond.size(); ++c)
      in_g[c] = cond[c] > 0.0 && (f.empty() || f[z * p.block() + c] != 0);
    for (unsigned s = 1; s < (1u << k); ++s) {
      const auto marg = subset_marginal(p, cond, s, index_of);
      double threshold = -gamma;
      for (std::size_t i = 0; i < k; ++i)
        if (s >> i & 1u) threshold += log_sizes[i];
      for (std::size_t c = 0; c < cond.size(); ++c) {
        if (!in_g[c]) continue;
        double dens = std::log(marg[index_of[c]]);
        for (std::size_t i = 0; i < k; ++i)
          if (s >> i & 1u) dens -= std::log(single[i][single_index[i][c]]);
        if (!below(dens, threshold)) in_g[c] = 0;
      }
    }
    double g_mass = 0.0;
    for (std::size_t c = 0; c < cond.size(); ++c)
      if (in_g[c]) g_mass += cond[c];
    min_cond = std::min(min_cond, g_mass);
    bound += pz * std::exp(-g_mass / scale);
  }
  auto r = probability_report("multivariate", bound);
  r.params = {{"k", static_cast<double>(k)}, {"gamma", gamma},
              {"min_conditional_g_mass", min_cond}};
  for (std::size_t i = 0; i < k; ++i)
    r.params["m" + std::to_string(i + 1)] = sizes[i];
  return r;
}

BoundReport sim_achievability_bound(const InfoSpectrum& s, double m, double l,
                                    double p) {
  require(p > 0.0 && p < 1.0, ErrorKind::kInvalidArgument,
          "p must lie in (0,1)");
  check_size(m, "m");
  check_size(l, "l");
  const double c = std::log(1.0 / (1.0 - p));
  const double need = 3.0 / p * c;
  require(m >= need && l >= need, ErrorKind::kPreconditionMN,
          "M and L must be at least (3/p) ln(1/(1-p)) = " + std::to_string(need));
  const double threshold = std::log(p) + log_ml(m, l) - std::log(3.0 * c);
  const double first = spectrum_tail_gt(s, threshold);
  const auto second = typical_bound_optimized(s, p, m, l);
  auto r = probability_report("sim_achievability",
                              std::max(first, second.value));
  r.params = {{"m", m},
              {"l", l},
              {"p", p},
              {"threshold", threshold},
              {"tail_term", first},
              {"typical_term", second.value},
              {"eps", second.params.at("eps")}};
  r.notes.push_back(first >= second.value ? "tail term dominates"
                                          : "typical term dominates");
  return r;
}

BoundReport sim_achievability_bound(const JointPmf& j, double m, double l,
                                    double p) {
  return sim_achievability_bound(info_spectrum(j), m, l, p);
}

BoundReport sim_converse_bound(const InfoSpectrum& s, double m, double l) {
  check_size(m, "m");
  check_size(l, "l");
  const double c = log_ml(m, l);
  // On each gap between consecutive densities above c the tail is constant
  // and 1 - e^{-lambda} grows, so the supremum is approached as lambda rises
  // to the next jump d_j - c.
  double best = 0.0;
  double best_lambda = 0.0;
  double upper = 0.0;
  const auto& lines = s.lines();
  for (std::size_t i = lines.size(); i-- > 0;) {
    upper += lines[i].mass;
    if (!above(lines[i].density, c)) break;
    const double lambda = lines[i].density - c;
    const double value = -std::expm1(-lambda) * upper;
    if (value > best) {
      best = value;
      best_lambda = lambda;
    }
  }
  auto r = probability_report("sim_converse", best);
  r.params = {{"m", m}, {"l", l}, {"lambda", best_lambda}};
  return r;
}

BoundReport sim_converse_bound(const JointPmf& j, double m, double l) {
  return sim_converse_bound(info_spectrum(j), m, l);
}

namespace {

// Maximizes a concave function on [lo, hi] to a bracket width of 1e-9.
std::pair<double, double> ternary_max(const std::function<double(double)>& f,
                                      double lo, double hi) {
  while (hi - lo > 1e-9) {
    const double a = lo + (hi - lo) / 3.0;
    const double b = hi - (hi - lo) / 3.0;
    if (f(a) < f(b))
      lo = a;
    else
      hi = b;
  }
  const double x = 0.5 * (lo + hi);
  return {x, f(x)};
}

}  // namespace

ExponentResult sim_exponent(const InfoSpectrum& s, const RatePair& rates) {
  check_rates(rates);
  const double rate = rates.sum();
  require(rate > 0.0, ErrorKind::kInvalidArgument, "R1 + R2 must be > 0");
  ExponentResult out;
  if (rate - s.tilted_mean(kAlphaMax) > 1e-6) {
    out.value = kPosInf;
    out.argmax = kPosInf;
    out.notes.push_back("rate exceeds D_inf: exponent unbounded");
    return out;
  }
  const auto f = [&](double a) { return a * rate - s.log_moment(a); };
  auto [a, v] = ternary_max(f, 0.0, kAlphaMax);
  // A nonpositive slope at zero makes the concave map peak at alpha -> 0.
  if (rate <= s.mean() || v <= 0.0) {
    out.value = 0.0;
    out.argmax = 0.0;
    out.notes.push_back("R1 + R2 <= I: supremum approached as alpha -> 0");
  } else {
    out.value = v;
    out.argmax = a;
  }
  return out;
}

ExponentResult sim_exponent(const JointPmf& j, const RatePair& rates) {
  return sim_exponent(info_spectrum(j), rates);
}

double second_order_error(const JointPmf& j, double a_coefficient) {
  require(std::isfinite(a_coefficient), ErrorKind::kInvalidArgument,
          "A must be finite");
  const double v = varentropy(j);
  if (!(v > 0.0)) {
    require(a_coefficient == 0.0, ErrorKind::kZeroVarentropy,
            "varentropy is zero");
    return 0.5;
  }
  return q_function(a_coefficient / v);
}

WeightedSamplerBounds weighted_sampler_bound(const InfoSpectrum& s, double m,
                                             double l) {
  check_size(m, "m");
  check_size(l, "l");
  const double c = log_ml(m, l);
  // 1/(1 + ML e^{-ı}) as a logistic in c - ı, stable for either sign.
  const double e108 = s.expect([c](double d) {
    const double x = c - d;
    return x > 0.0 ? std::exp(-x) / (1.0 + std::exp(-x)) : 1.0 / (1.0 + std::exp(x));
  });

  // P[ı > c - gamma] + e^{-gamma} is minimized over each constant stretch of
  // the tail at its right end, gamma = c - d_j, where d_j leaves the tail.
  double best = 1.0;  // gamma -> infinity
  double best_gamma = kPosInf;
  const auto& lines = s.lines();
  double above_mass = 0.0;
  for (std::size_t i = lines.size(); i-- > 0;) {
    const double gamma = c - lines[i].density;
    if (gamma > 0.0) {
      const double value = above_mass + std::exp(-gamma);
      if (value < best) {
        best = value;
        best_gamma = gamma;
      }
    }
    above_mass += lines[i].mass;
  }
  for (int i = 0; i < 200; ++i) {
    const double gamma = std::pow(10.0, -6.0 + 9.0 * i / 199.0);
    const double value = spectrum_tail_gt(s, c - gamma) + std::exp(-gamma);
    if (value < best) {
      best = value;
      best_gamma = gamma;
    }
  }

  WeightedSamplerBounds out;
  out.e108 = probability_report("weighted_e108", e108);
  out.e108.params = {{"m", m}, {"l", l}};
  out.e109 = probability_report("weighted_e109", best);
  out.e109.params = {{"m", m}, {"l", l}, {"gamma", best_gamma}};
  return out;
}

WeightedSamplerBounds weighted_sampler_bound(const JointPmf& j, double m,
                                             double l) {
  return weighted_sampler_bound(info_spectrum(j), m, l);
}

WeightedExponent weighted_exponent(const JointPmf& j, const RatePair& rates) {
  check_rates(rates);
  const auto s = info_spectrum(j);
  const double rate = rates.sum();
  const double info = s.mean();
  require(rate >= info - 1e-12, ErrorKind::kRegimeError,
          "weighted exponent needs R1 + R2 >= I(U;V)");
  const auto f = [&](double r) { return r * rate - s.log_moment(r); };
  WeightedExponent out;
  auto [rho, v] = ternary_max(f, 0.0, 1.0);
  // The endpoints are candidates too; the search only brackets them.
  for (double edge : {0.0, 1.0}) {
    if (f(edge) >= v) {
      rho = edge;
      v = f(edge);
    }
  }
  out.value = std::max(0.0, v);
  out.rho_star = rho;
  out.tilted_rate_at_one = s.tilted_mean(1.0);
  if (rate <= out.tilted_rate_at_one) {
    out.regime = WeightedCase::kTiltedInterior;
    // kappa'(rho) = R^(rho) is nondecreasing; solve R^(rho) = R1 + R2.
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      (s.tilted_mean(mid) < rate ? lo : hi) = mid;
    }
    const double r = 0.5 * (lo + hi);
    out.closed_form = r * s.tilted_mean(r) - s.log_moment(r);
  } else {
    out.regime = WeightedCase::kSaturated;
    out.closed_form = rate - s.log_moment(1.0);
  }
  return out;
}

RegimeCheck weighted_regime_check(const JointPmf& j, const RatePair& rates) {
  check_rates(rates);
  const auto s = info_spectrum(j);
  RegimeCheck c;
  c.tilted_rate_at_one = s.tilted_mean(1.0);
  c.d2 = s.log_moment(1.0);
  c.lower = c.tilted_rate_at_one;
  c.upper = 2.0 * c.tilted_rate_at_one - std::max({c.d2, rates.r1, rates.r2});
  c.sum = rates.sum();
  c.inside = c.lower < c.sum && c.sum < c.upper;
  return c;
}

BoundReport worstcase_gap_bound(const InfoSpectrum& s, double m, double l,
                                double p) {
  require(p > 0.0 && p <= 1.0, ErrorKind::kInvalidArgument,
          "p must lie in (0,1]");
  check_size(m, "m");
  check_size(l, "l");
  if (p == 1.0) {
    auto r = probability_report("worstcase_gap", 1.0);
    r.params = {{"m", m}, {"l", l}, {"p", p}, {"threshold", kNegInf}};
    r.notes.push_back("p = 1: threshold is -inf");
    return r;
  }
  const double c = std::log(1.0 / (1.0 - p));
  const double need = 6.0 / p * c;
  require(m >= need && l >= need, ErrorKind::kPreconditionMN,
          "M and L must be at least (6/p) ln(1/(1-p)) = " + std::to_string(need));
  const double threshold = std::log(p) + log_ml(m, l) - std::log(3.0 * c);
  auto r = probability_report("worstcase_gap", spectrum_tail_gt(s, threshold));
  r.params = {{"m", m}, {"l", l}, {"p", p}, {"threshold", threshold}};
  return r;
}

BoundReport worstcase_gap_bound(const JointPmf& j, double m, double l,
                                double p) {
  return worstcase_gap_bound(info_spectrum(j), m, l, p);
}

}  // namespace mutualcover
