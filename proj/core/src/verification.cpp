#include "mutualcover/verification.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "mutualcover/bounds.hpp"
#include "mutualcover/oracle.hpp"
#include "mutualcover/rng.hpp"
#include "mutualcover/sampler.hpp"
#include "mutualcover/spectrum.hpp"

namespace mutualcover {

namespace {

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

// Instance generator on its own Philox stream per criterion.
class Gen {
 public:
  Gen(std::uint64_t seed, int criterion) : rng_(seed, 1000 + criterion) {}

  double uniform() { return rng_.uniform(); }
  int between(int lo, int hi) {
    return lo + static_cast<int>(rng_.next_u32() % (hi - lo + 1));
  }

  JointPmf joint(std::size_t rows, std::size_t cols, double zero_prob) {
    std::vector<double> cells(rows * cols);
    double total = 0.0;
    for (auto& c : cells) {
      c = uniform() < zero_prob ? 0.0 : -std::log(1.0 - uniform());
      total += c;
    }
    if (total == 0.0) {
      cells[0] = 1.0;
      total = 1.0;
    }
    for (auto& c : cells) c /= total;
    return make_joint_unchecked(std::move(cells), index_labels(rows),
                                index_labels(cols));
  }

  CoveringSet set(std::size_t rows, std::size_t cols) {
    std::vector<std::uint8_t> mask(rows * cols);
    for (auto& b : mask) b = static_cast<std::uint8_t>(rng_.next_u32() & 1u);
    return CoveringSet::from_mask(rows, cols, std::move(mask));
  }

 private:
  PhiloxStream rng_;
};

MultivarPmf as_pair(const JointPmf& j) {
  return MultivarPmf::make({"z"}, {j.u_labels(), j.v_labels()},
                           {j.data().begin(), j.data().end()});
}

JointPmf product(std::vector<double> pu, std::vector<double> pv) {
  std::vector<double> cells;
  for (double a : pu)
    for (double b : pv) cells.push_back(a * b);
  return make_joint_unchecked(std::move(cells), index_labels(pu.size()),
                              index_labels(pv.size()));
}

JointPmf dsbs(double p) {
  return make_joint_unchecked({(1 - p) / 2, p / 2, p / 2, (1 - p) / 2},
                              index_labels(2), index_labels(2));
}

CriterionResult bound_validity(const VerifyOptions& o) {
  Gen g(o.seed, 1);
  int checks = 0, violations = 0, printed_checks = 0, printed_violations = 0;
  double worst = kNegInf;
  const auto check = [&](double bound, double exact) {
    ++checks;
    worst = std::max(worst, exact - bound);
    if (bound < exact - 1e-12) ++violations;
  };
  for (int t = 0; t < 500; ++t) {
    const auto j = g.joint(g.between(1, 4), g.between(1, 4), 0.25);
    const auto f = g.set(j.rows(), j.cols());
    const int m = g.between(1, 8), l = g.between(1, 8);
    const double exact = exact_failure(j, f, m, l);
    const double exact_l1 = exact_failure(j, f, m, 1);
    const auto mv = as_pair(j);
    for (double gamma : {0.5, 1.0, 2.0, 4.0}) {
      check(unilateral_bound(j, f, m, gamma).value, exact_l1);
      for (double delta : {0.5, 2.0, 8.0})
        check(resolvability_bound(j, f, m, l, delta, gamma).value, exact);
      check(limited_independence_bound(j, f, m, l, gamma).value, exact);
      check(talagrand_bound(j, f, m, l, gamma).value, exact);
      check(multivariate_bound(mv, {double(m), double(l)}, gamma, f.mask())
                .value,
            exact);
    }
    for (double eps : {0.05, 0.2}) {
      if (covered_mass(j, f) <= eps) continue;
      check(secondmoment_bound(j, f, m, l, eps, SecondMomentForm::kCorrected)
                .value,
            exact);
      if (1.0 - covered_mass(j, f) <= eps) continue;
      ++printed_checks;
      if (secondmoment_bound(j, f, m, l, eps).value < exact - 1e-12)
        ++printed_violations;
    }
  }
  return {1, "bound validity", violations == 0,
          fmt("%d checks, %d below exact (tol 1e-12), max excess %.3g; "
              "printed second-moment form below exact in %d of %d",
              checks, violations, worst, printed_violations, printed_checks)};
}

CriterionResult duality(const VerifyOptions& o) {
  Gen g(o.seed, 2);
  int far = 0, unordered = 0;
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const auto j = g.joint(2, 2, 0.1);
    const auto rep = duality_check(j, 2, 2, 100000, o.workers);
    const double diff = std::abs(rep.sup_side - rep.inf_side);
    worst = std::max(worst, diff);
    if (diff > 1e-3) ++far;
    if (!rep.ordered) ++unordered;
  }
  return {2, "duality equality", far == 0 && unordered == 0,
          fmt("50 instances, max |sup-inf| %.3g (tol 1e-3), sup > inf in %d",
              worst, unordered)};
}

CriterionResult figure_one(const VerifyOptions&) {
  SequenceLaw law;
  law.alphabet = 3;
  law.length = 3;
  law.sequences = {{0, 1, 2}, {0, 0, 2}};
  law.probs = {2.0 / 3, 1.0 / 3};
  const auto target = Pmf::make({"1", "2", "3"}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  const auto res = select_from_sequence(law, target, 3000);
  const auto& r = res.rule;
  // On (1,2,3) the rule outputs 1 and 2 with probability 1/2 each, in either
  // slot order; on (1,1,3) it outputs 3.
  const double sym1 = r(0, 0), sym2 = r(0, 1), sym3 = r(0, 2);
  const double other3 = r(1, 2);
  const bool rule_ok = std::abs(sym1 - 0.5) <= 1e-12 &&
                       std::abs(sym2 - 0.5) <= 1e-12 && sym3 <= 1e-12 &&
                       std::abs(other3 - 1.0) <= 1e-12;
  const bool tv_ok = res.achieved_tv <= 1e-12;
  return {3, "figure-one golden", rule_ok && tv_ok,
          fmt("achieved tv %.3g (tol 1e-12); rule on (1,2,3) = "
              "(%.6g, %.6g, %.6g), on (1,1,3) symbol 3 w.p. %.6g",
              res.achieved_tv, sym1, sym2, sym3, other3)};
}

CriterionResult double_exponential(const VerifyOptions&) {
  const auto j = dsbs(0.11);
  const double rate = 0.5 * std::log(2.0);
  const double target =
      std::min({rate, rate, 2 * rate - mutual_information(j)});
  const auto base = info_spectrum(j);
  std::vector<double> rates;
  std::string detail;
  for (int n : {50, 100, 200}) {
    const double m = std::exp(n * rate);
    const auto r = typical_bound_optimized(spectrum_power(base, n), 1.0, m, m);
    // ln ln(1/bound) = ln(-log bound).
    rates.push_back(std::log(-r.log_value) / n);
    detail += fmt("n=%d %.6f; ", n, rates.back());
  }
  const double rel = std::abs(rates.back() - target) / target;
  const bool monotone = std::abs(rates[0] - target) > std::abs(rates[1] - target) &&
                        std::abs(rates[1] - target) > std::abs(rates[2] - target);
  return {4, "double-exponential rate", rel <= 0.10 && monotone,
          detail + fmt("target %.6f, rel err at n=200 %.4f (tol 0.10), "
                       "approach monotone %s",
                       target, rel, monotone ? "yes" : "no")};
}

CriterionResult exponent_ordering(const VerifyOptions& o) {
  Gen g(o.seed, 5);
  int inside = 0, outside = 0, inside_bad = 0, outside_bad = 0;
  double min_margin = kPosInf;
  for (int attempt = 0; attempt < 5000 && (inside < 50 || outside < 50);
       ++attempt) {
    const auto j = g.joint(2, 2, 0.0);
    const double i = mutual_information(j);
    const double r1 = tilted_rate(j, 1.0);
    if (!(r1 > i + 1e-9) || i < 0.05) continue;
    const double split = 0.3 + 0.4 * g.uniform();
    const bool want_inside = inside < 50 && (outside >= 50 || attempt % 2 == 0);
    const double sum = want_inside ? r1 * (1.0 + g.uniform())
                                   : i + 3.0 * r1 * g.uniform();
    const RatePair rates{split * sum, (1.0 - split) * sum};
    if (rates.sum() < i) continue;
    const auto region = weighted_regime_check(j, rates);
    const bool in_region = region.inside;
    if (in_region != want_inside) continue;
    // Inside points keep to the middle half of [lower, upper], where the
    // gap is not masked by its continuity at the edges.
    const double width = region.upper - region.lower;
    if (in_region && (rates.sum() < region.lower + 0.25 * width ||
                      rates.sum() > region.upper - 0.25 * width))
      continue;
    const double w = weighted_exponent(j, rates).value;
    const double s = sim_exponent(j, rates).value;
    if (in_region) {
      ++inside;
      min_margin = std::min(min_margin, s - w);
      if (!(w < s - 1e-6)) ++inside_bad;
    } else {
      ++outside;
      if (w > s + 1e-8) ++outside_bad;
    }
  }
  const bool ok = inside == 50 && outside == 50 && inside_bad == 0 &&
                  outside_bad == 0;
  return {5, "exponent ordering", ok,
          fmt("inside region (middle half, I >= 0.05) %d instances, "
              "weighted < sim - 1e-6 failed %d "
              "(min gap %.3g); outside %d instances, weighted > sim + 1e-8 "
              "in %d",
              inside, inside_bad, min_margin, outside, outside_bad)};
}

CriterionResult weighted_validity(const VerifyOptions& o) {
  Gen g(o.seed, 6);
  int count = 0, above = 0, order = 0;
  double worst = kNegInf;
  for (int t = 0; t < 80; ++t) {
    const auto j = g.joint(g.between(2, 3), g.between(2, 3), 0.15);
    const int m = g.between(1, 4), l = g.between(1, 4);
    const double space = std::pow(double(j.rows()), m) *
                         std::pow(double(j.cols()), l);
    if (space > 1e5) continue;
    ++count;
    const double tv = exact_tv_of_rule(j, weighted_sampler_rule(j, m, l), m, l);
    const auto b = weighted_sampler_bound(j, m, l);
    worst = std::max(worst, tv - b.e108.value);
    if (tv > b.e108.value + 1e-12) ++above;
    if (b.e108.value > b.e109.value) ++order;
  }
  return {6, "weighted-sampler bound validity", above == 0 && order == 0,
          fmt("%d instances, exact tv > e108 + 1e-12 in %d (max excess %.3g), "
              "e108 > e109 in %d",
              count, above, worst, order)};
}

CriterionResult converse(const VerifyOptions& o) {
  Gen g(o.seed, 7);
  int bad = 0, checks = 0;
  for (int t = 0; t < 60; ++t) {
    const auto j = g.joint(g.between(1, 3), g.between(1, 3), 0.25);
    const int m = g.between(1, 3), l = g.between(1, 3);
    ++checks;
    if (sim_converse_bound(j, m, l).value >
        worstcase_gap_exact(j, m, l, o.workers).gap + 1e-12)
      ++bad;
  }
  int product_bad = 0;
  for (int t = 0; t < 10; ++t) {
    const double a = 0.05 + 0.9 * g.uniform(), b = 0.05 + 0.9 * g.uniform();
    const auto p = product({a, 1 - a}, {b, 1 - b});
    const int m = g.between(1, 3), l = g.between(1, 3);
    if (sim_converse_bound(p, m, l).value != 0.0 ||
        worstcase_gap_exact(p, m, l, o.workers).gap > 1e-12)
      ++product_bad;
  }
  return {7, "converse consistency", bad == 0 && product_bad == 0,
          fmt("%d instances, converse > gap + 1e-12 in %d; 10 products, "
              "nonzero (tol 1e-12) in %d",
              checks, bad, product_bad)};
}

CriterionResult mc_calibration(const VerifyOptions& o) {
  Gen g(o.seed, 8);
  int outside = 0, mismatched = 0;
  double worst = 0.0;
  constexpr std::uint64_t kSamples = 20000;
  for (int t = 0; t < 200; ++t) {
    const auto j = g.joint(g.between(1, 3), g.between(1, 3), 0.2);
    const auto f = g.set(j.rows(), j.cols());
    const int m = g.between(1, 4), l = g.between(1, 4);
    const CodebookSpec spec{m, l, o.seed + static_cast<std::uint64_t>(t),
                            kSamples};
    const double p = exact_failure(j, f, m, l);
    const auto one = mc_failure(j, f, spec, 1);
    for (unsigned w : {4u, 8u})
      if (mc_failure(j, f, spec, w).hits != one.hits) ++mismatched;
    const double sigma = std::sqrt(p * (1 - p) / kSamples);
    const double dev = std::abs(one.mean - p);
    if (sigma > 0.0) worst = std::max(worst, dev / sigma);
    if (dev > 4 * sigma + 1e-15) ++outside;
  }
  return {8, "monte carlo calibration", outside == 0 && mismatched == 0,
          fmt("200 pairs, %llu samples each, beyond 4 sigma %d (max %.2f "
              "sigma), worker-count mismatches %d",
              static_cast<unsigned long long>(kSamples), outside, worst,
              mismatched)};
}

CriterionResult concentration(const VerifyOptions& o) {
  Gen g(o.seed, 9);
  int zero_bad = 0, mean_bad = 0;
  for (int t = 0; t < 50; ++t) {
    const auto j = g.joint(g.between(2, 3), g.between(2, 3), 0.15);
    const auto f = g.set(j.rows(), j.cols());
    const int m = g.between(1, 6), l = g.between(1, 6);
    const double gamma = std::array{0.5, 1.0, 2.0}[g.between(0, 2)];
    const CodebookSpec spec{m, l, o.seed + 7919u * static_cast<unsigned>(t),
                            20000};
    const auto s = weighted_sum_stats(j, f, spec, gamma, o.workers);
    if (s.zero_fraction > s.talagrand + 4 * s.zero_stderr) ++zero_bad;
    if (!s.mean_consistent) ++mean_bad;
  }
  return {9, "concentration sanity", zero_bad == 0 && mean_bad == 0,
          fmt("50 instances, P[S=0] > talagrand + 4 se in %d, "
              "|mean - P(G)| > 4 se in %d",
              zero_bad, mean_bad)};
}

CriterionResult broadcast_boundary(const VerifyOptions&) {
  const auto ch = bsc_pair_channels(0.25, 0.3);
  const auto j = dsbs(0.4);
  const auto [py_u, pz_v] = induced_channels(j, ch.y, ch.z, ch.x_map);
  const double iuy = channel_mutual_information(j.pu(), py_u);
  const double ivz = channel_mutual_information(j.pv(), pz_v);
  const double iuv = mutual_information(j);
  const auto e = [&](RatePair r) {
    return theorem2_exponent(j, ch.y, ch.z, ch.x_map, r).value;
  };
  // Corners of the region: the sum constraint meets each single-user one.
  const std::vector<RatePair> boundary{{iuy, ivz - iuv},
                                       {iuy - iuv, ivz},
                                       {iuy - iuv / 2, ivz - iuv / 2}};
  double worst_boundary = 0.0;
  for (const auto& r : boundary) worst_boundary = std::max(worst_boundary, e(r));
  // Every constraint slack by at least 0.05 nats.
  const RatePair inner{iuy - iuv / 2 - 0.05, ivz - iuv / 2 - 0.05};
  const double inside = e(inner);
  return {10, "broadcast exponent boundary",
          worst_boundary <= 1e-3 && inside >= 1e-3,
          fmt("I(U;Y)=%.4f I(V;Z)=%.4f I(U;V)=%.4f; max on boundary %.3g "
              "(tol 1e-3), inside by 0.05 at (%.4f, %.4f) %.4g (min 1e-3)",
              iuy, ivz, iuv, worst_boundary, inner.r1, inner.r2, inside)};
}

}  // namespace

BscPairChannels bsc_pair_channels(double p1, double p2) {
  const Labels in{"00", "01", "10", "11"}, out{"0", "1"};
  Matrix y(4), z(4);
  for (std::size_t x = 0; x < 4; ++x) {
    const std::size_t u = x / 2, v = x % 2;
    y[x] = u == 0 ? std::vector<double>{1 - p1, p1}
                  : std::vector<double>{p1, 1 - p1};
    z[x] = v == 0 ? std::vector<double>{1 - p2, p2}
                  : std::vector<double>{p2, 1 - p2};
  }
  return {CondPmf::make(in, out, y), CondPmf::make(in, out, z), {0, 1, 2, 3}};
}

CriterionResult run_criterion(int id, const VerifyOptions& options) {
  using Fn = std::function<CriterionResult(const VerifyOptions&)>;
  static const Fn table[kCriteria] = {
      bound_validity, duality,       figure_one,     double_exponential,
      exponent_ordering, weighted_validity, converse, mc_calibration,
      concentration, broadcast_boundary};
  require(id >= 1 && id <= kCriteria, ErrorKind::kInvalidArgument,
          "criterion id must be in 1..10");
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = table[id - 1](options);
  } catch (const Error& e) {
    r = {id, "criterion " + std::to_string(id), false,
         std::string("error: ") + e.what()};
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            start)
                  .count();
  return r;
}

std::vector<CriterionResult> run_acceptance(const VerifyOptions& options) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriteria; ++id)
    out.push_back(run_criterion(id, options));
  return out;
}

std::string format_result(const CriterionResult& r) {
  return fmt("%s [%d] %s: %s (%.2f s)", r.passed ? "PASS" : "FAIL", r.id,
             r.name.c_str(), r.detail.c_str(), r.seconds);
}

}  // namespace mutualcover
