#include "mutualcover/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "compositions.hpp"
#include "density_compare.hpp"
#include "mutualcover/rng.hpp"
#include "parallel.hpp"

namespace mutualcover {

namespace {

void check_codebook(int m, int l) {
  require(m >= 1 && l >= 1, ErrorKind::kInvalidArgument,
          "codebook sizes must be >= 1");
}

void check_bitmask_cols(const JointPmf& j) {
  require(j.cols() <= 64, ErrorKind::kSizeCapExceeded,
          "failure evaluation supports at most 64 V symbols");
}

std::vector<std::uint64_t> row_bits(const CoveringSet& f) {
  std::vector<std::uint64_t> rows(f.rows(), 0);
  for (std::size_t u = 0; u < f.rows(); ++u)
    for (std::size_t v = 0; v < f.cols(); ++v)
      if (f.contains(u, v)) rows[u] |= std::uint64_t{1} << v;
  return rows;
}

// a precedes b when, at the first atom where they differ, a leaves it out.
bool lex_less(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t d = a ^ b;
  if (d == 0) return false;
  return (a & (d & (~d + 1))) == 0;
}

}  // namespace

FailureEvaluator::FailureEvaluator(const JointPmf& j, int l, std::size_t cap)
    : pu_(j.pu().probs().begin(), j.pu().probs().end()), cols_(j.cols()) {
  check_codebook(1, l);
  check_bitmask_cols(j);
  std::vector<std::size_t> support;
  std::vector<double> logp;
  for (std::size_t v = 0; v < j.cols(); ++v) {
    if (j.pv()[v] > 0.0) {
      support.push_back(v);
      logp.push_back(std::log(j.pv()[v]));
    }
  }
  cap = effective_cap(cap);
  const double count =
      detail::composition_count(static_cast<std::size_t>(l), support.size());
  require(count <= static_cast<double>(cap), ErrorKind::kSizeCapExceeded,
          "exact failure needs " + std::to_string(count) + " V-types");

  // Law of the set of distinct V symbols: sum multinomial type probabilities
  // over the types with that support.
  std::map<std::uint64_t, detail::CompensatedSum> by_set;
  detail::for_each_composition(
      static_cast<std::size_t>(l), support.size(),
      [&](const std::vector<std::size_t>& t) {
        double lw = detail::log_multinomial(t);
        std::uint64_t set = 0;
        for (std::size_t i = 0; i < t.size(); ++i) {
          if (t[i] == 0) continue;
          lw += static_cast<double>(t[i]) * logp[i];
          set |= std::uint64_t{1} << support[i];
        }
        by_set[set].add(std::exp(lw));
      });
  for (const auto& [set, sum] : by_set) {
    sets_.push_back(set);
    weights_.push_back(sum.value());
  }
}

double FailureEvaluator::failure_rows(std::span<const std::uint64_t> rows,
                                      int m) const {
  check_codebook(m, 1);
  detail::CompensatedSum total;
  for (std::size_t k = 0; k < sets_.size(); ++k) {
    double miss = 0.0;
    for (std::size_t u = 0; u < pu_.size(); ++u)
      if ((rows[u] & sets_[k]) == 0) miss += pu_[u];
    if (miss > 0.0) total.add(weights_[k] * std::pow(miss, m));
  }
  return std::clamp(total.value(), 0.0, 1.0);
}

double FailureEvaluator::failure(const CoveringSet& f, int m) const {
  require(f.rows() == pu_.size() && f.cols() == cols_,
          ErrorKind::kShapeMismatch, "covering set built for another alphabet");
  const auto rows = row_bits(f);
  return failure_rows(rows, m);
}

double exact_failure(const JointPmf& j, const CoveringSet& f, int m, int l,
                     std::size_t cap) {
  f.check_matches(j);
  check_codebook(m, l);
  return FailureEvaluator(j, l, cap).failure(f, m);
}

McEstimate mc_failure(const JointPmf& j, const CoveringSet& f,
                      const CodebookSpec& spec, unsigned workers) {
  f.check_matches(j);
  check_codebook(spec.m, spec.l);
  check_bitmask_cols(j);
  require(spec.n_samples >= 1, ErrorKind::kInvalidArgument,
          "Monte Carlo needs at least one sample");
  workers = std::max(1u, workers);
  const auto rows = row_bits(f);
  const DiscreteSampler su(j.pu().probs()), sv(j.pv().probs());
  std::vector<std::uint64_t> hits(workers, 0);
  detail::parallel_chunks(
      spec.n_samples, workers,
      [&](std::uint64_t begin, std::uint64_t end, unsigned w) {
        std::vector<std::size_t> us(static_cast<std::size_t>(spec.m));
        std::uint64_t local = 0;
        for (std::uint64_t s = begin; s < end; ++s) {
          PhiloxStream rng(spec.seed, s);
          for (auto& u : us) u = su.draw(rng.uniform());
          std::uint64_t seen = 0;
          for (int k = 0; k < spec.l; ++k)
            seen |= std::uint64_t{1} << sv.draw(rng.uniform());
          bool covered = false;
          for (std::size_t u : us)
            if (rows[u] & seen) {
              covered = true;
              break;
            }
          if (!covered) ++local;
        }
        hits[w] = local;
      });
  McEstimate est;
  for (auto h : hits) est.hits += h;
  est.n_samples = spec.n_samples;
  est.seed = spec.seed;
  est.worker_count = workers;
  est.mean = static_cast<double>(est.hits) / static_cast<double>(spec.n_samples);
  est.std_error =
      std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(spec.n_samples));
  return est;
}

WorstCaseGap worstcase_gap_exact(const JointPmf& j, int m, int l,
                                 unsigned workers) {
  check_codebook(m, l);
  const std::size_t atoms = j.atoms();
  require(atoms <= effective_cap(kMaskAtomCap), ErrorKind::kSizeCapExceeded,
          "worst-case gap enumerates 2^(|U||V|) sets; |U||V| = " +
              std::to_string(atoms));
  require(atoms < 63, ErrorKind::kSizeCapExceeded,
          "worst-case gap supports fewer than 63 atoms");
  const FailureEvaluator eval(j, l);
  const std::size_t cols = j.cols();
  const std::uint64_t total = std::uint64_t{1} << atoms;
  workers = std::max(1u, workers);

  struct Best {
    double gap = -1.0;
    std::uint64_t mask = 0;
    bool set = false;
  };
  const auto better = [](double g, std::uint64_t mask, const Best& b) {
    if (!b.set || g > b.gap + 1e-13) return true;
    return g >= b.gap - 1e-13 && lex_less(mask, b.mask);
  };
  std::vector<Best> best(workers);
  detail::parallel_chunks(
      total, workers, [&](std::uint64_t begin, std::uint64_t end, unsigned w) {
        std::uint64_t gray = begin ^ (begin >> 1);
        std::vector<std::uint64_t> rows(j.rows(), 0);
        double pf = 0.0;
        for (std::size_t a = 0; a < atoms; ++a) {
          if (gray >> a & 1u) {
            rows[a / cols] |= std::uint64_t{1} << (a % cols);
            pf += j.data()[a];
          }
        }
        Best local;
        for (std::uint64_t i = begin; i < end; ++i) {
          if (i != begin) {
            // Consecutive Gray codes differ in bit ctz(i).
            const auto a = static_cast<std::size_t>(std::countr_zero(i));
            gray ^= std::uint64_t{1} << a;
            rows[a / cols] ^= std::uint64_t{1} << (a % cols);
            pf += (gray >> a & 1u) ? j.data()[a] : -j.data()[a];
          }
          const double g = pf + eval.failure_rows(rows, m) - 1.0;
          if (better(g, gray, local)) local = {g, gray, true};
        }
        best[w] = local;
      });
  Best out;
  for (const auto& b : best)
    if (b.set && better(b.gap, b.mask, out)) out = b;
  WorstCaseGap r;
  r.gap = std::max(0.0, out.gap);
  r.argmax = CoveringSet::from_bits(j.rows(), cols, out.mask);
  return r;
}

CoveringSet density_window_set(const JointPmf& j, double a, double b) {
  require(a <= b, ErrorKind::kInvalidArgument, "window needs a <= b");
  const auto dens = info_density(j);
  std::vector<std::uint8_t> mask(j.atoms(), 0);
  for (std::size_t i = 0; i < j.atoms(); ++i)
    mask[i] = j.data()[i] > 0.0 && detail::at_least(dens.values[i], a) &&
              detail::at_most(dens.values[i], b);
  auto f = CoveringSet::from_mask(j.rows(), j.cols(), std::move(mask));
  f.tag(CoveringSet::Origin::kDensityWindow, a, b);
  return f;
}

CoveringSet density_threshold_set(const JointPmf& j, double tau) {
  auto f = density_window_set(j, kNegInf, tau);
  f.tag(CoveringSet::Origin::kDensityThreshold, tau, tau);
  return f;
}

TypicalWindow typical_window(const JointPmf& j, double eps) {
  require(eps > 0.0 && eps < 1.0, ErrorKind::kInvalidArgument,
          "eps must lie in (0,1)");
  const double mi = mutual_information(j);
  const auto dens = info_density(j);
  double widest = 0.0;
  for (std::size_t i = 0; i < j.atoms(); ++i)
    if (j.data()[i] > 0.0) widest = std::max(widest, std::abs(dens.values[i] - mi));
  const auto at = [&](double w) {
    TypicalWindow t;
    t.a = mi - w;
    t.b = mi + w;
    t.set = density_window_set(j, t.a, t.b);
    t.mass = covered_mass(j, t.set);
    t.in_target = t.mass > 1.0 - eps && t.mass < 1.0 - eps / 2.0;
    return t;
  };
  double lo = 0.0, hi = widest;
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    auto t = at(mid);
    if (t.in_target) return t;
    (t.mass >= 1.0 - eps / 2.0 ? hi : lo) = mid;
  }
  auto t = at(hi);
  if (!t.in_target) {
    auto low = at(lo);
    if (low.in_target) return low;
  }
  return t;
}

WeightedSumStats weighted_sum_stats(const JointPmf& j, const CoveringSet& f,
                                    const CodebookSpec& spec, double gamma,
                                    unsigned workers) {
  f.check_matches(j);
  check_codebook(spec.m, spec.l);
  require(spec.n_samples >= 2, ErrorKind::kInvalidArgument,
          "weighted-sum statistics need at least two samples");
  workers = std::max(1u, workers);
  const double ml = static_cast<double>(spec.m) * spec.l;
  const double threshold = std::log(ml) - gamma;
  const auto g = truncated_set(j, f, threshold);

  // exp(ı) 1_G, scaled by 1/ML.
  std::vector<double> weight(j.atoms(), 0.0);
  for (std::size_t u = 0; u < j.rows(); ++u)
    for (std::size_t v = 0; v < j.cols(); ++v)
      if (g.contains(u, v))
        weight[u * j.cols() + v] = j(u, v) / (j.pu()[u] * j.pv()[v]) / ml;

  const DiscreteSampler su(j.pu().probs()), sv(j.pv().probs());
  std::vector<double> samples(spec.n_samples);
  detail::parallel_chunks(
      spec.n_samples, workers,
      [&](std::uint64_t begin, std::uint64_t end, unsigned) {
        std::vector<std::size_t> us(static_cast<std::size_t>(spec.m));
        std::vector<std::size_t> vs(static_cast<std::size_t>(spec.l));
        for (std::uint64_t s = begin; s < end; ++s) {
          PhiloxStream rng(spec.seed, s);
          for (auto& u : us) u = su.draw(rng.uniform());
          for (auto& v : vs) v = sv.draw(rng.uniform());
          double acc = 0.0;
          for (std::size_t u : us)
            for (std::size_t v : vs) acc += weight[u * j.cols() + v];
          samples[s] = acc;
        }
      });

  WeightedSumStats out;
  out.n_samples = spec.n_samples;
  const double n = static_cast<double>(spec.n_samples);
  detail::CompensatedSum sum;
  std::uint64_t zeros = 0;
  for (double x : samples) {
    sum.add(x);
    if (x == 0.0) ++zeros;
  }
  out.mean = sum.value() / n;
  detail::CompensatedSum sq;
  for (double x : samples) sq.add((x - out.mean) * (x - out.mean));
  out.mean_stderr = std::sqrt(sq.value() / (n - 1.0) / n);
  out.zero_fraction = static_cast<double>(zeros) / n;
  out.zero_stderr = std::sqrt(out.zero_fraction * (1.0 - out.zero_fraction) / n);
  out.g_mass = covered_mass(j, g);
  out.talagrand = talagrand_bound(j, f, spec.m, spec.l, gamma).value;
  out.mean_consistent = std::abs(out.mean - out.g_mass) <= 4.0 * out.mean_stderr;
  return out;
}

}  // namespace mutualcover
