#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "mutualcover/bounds.hpp"
#include "mutualcover/maxflow.hpp"
#include "mutualcover/oracle.hpp"
#include "mutualcover/sampler.hpp"
#include "test_support.hpp"

namespace mutualcover {
namespace {

using testing::dsbs;
using testing::independent;
using testing::random_joint;

double half_l1(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return 0.5 * acc;
}

std::vector<double> product_of_marginals(const JointPmf& j) {
  std::vector<double> out(j.atoms());
  for (std::size_t u = 0; u < j.rows(); ++u)
    for (std::size_t v = 0; v < j.cols(); ++v)
      out[u * j.cols() + v] = j.pu()[u] * j.pv()[v];
  return out;
}

JointPmf swap_rows(const JointPmf& j) {
  Matrix m(j.rows(), std::vector<double>(j.cols()));
  for (std::size_t u = 0; u < j.rows(); ++u)
    for (std::size_t v = 0; v < j.cols(); ++v)
      m[j.rows() - 1 - u][v] = j(u, v);
  return build_joint(m);
}

TEST(MaxFlow, SmallNetwork) {
  FlowNetwork net(4);
  const auto a = net.add_edge(0, 1, 3);
  const auto b = net.add_edge(0, 2, 2);
  net.add_edge(1, 2, 5);
  net.add_edge(1, 3, 2);
  net.add_edge(2, 3, 3);
  EXPECT_EQ(net.solve(0, 3), 5);
  EXPECT_EQ(net.flow(a) + net.flow(b), 5);
  EXPECT_EQ(net.solve(0, 3), 0);
}

TEST(MaxFlow, IncrementalSolveAugments) {
  FlowNetwork net(3);
  net.add_edge(0, 1, 10);
  net.add_edge(1, 2, 4);
  EXPECT_EQ(net.solve(0, 2), 4);
  net.add_edge(1, 2, 3);
  EXPECT_EQ(net.solve(0, 2), 3);
}

TEST(Quantize, SumsToKAndStaysClose) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> p(1 + rng() % 12);
    for (auto& x : p) x = unif(rng);
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& x : p) x /= total;
    const std::int64_t k = 1000 + static_cast<std::int64_t>(rng() % 5000);
    const auto q = quantize(p, k);
    EXPECT_EQ(std::accumulate(q.counts.begin(), q.counts.end(), std::int64_t{0}), k);
    double tv = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double dev = static_cast<double>(q.counts[i]) / k - p[i];
      EXPECT_LT(std::abs(dev), 1.0 / k);
      tv += 0.5 * std::abs(dev);
    }
    EXPECT_LE(tv, static_cast<double>(p.size()) / k);
  }
}

TEST(Quantize, TiesGoToLowerIndex) {
  const std::vector<double> p{1.0 / 3, 1.0 / 3, 1.0 / 3};
  const auto q = quantize(p, 1000);
  EXPECT_EQ(q.counts, (std::vector<std::int64_t>{334, 333, 333}));
}

TEST(SelectFromSequence, FigureOneInstance) {
  SequenceLaw law;
  law.alphabet = 3;
  law.length = 3;
  law.sequences = {{0, 1, 2}, {0, 0, 2}};
  law.probs = {2.0 / 3, 1.0 / 3};
  const auto target = Pmf::make({"1", "2", "3"}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  const auto res = select_from_sequence(law, target, 3000);
  EXPECT_NEAR(res.achieved_tv, 0.0, 1e-15);
  EXPECT_EQ(res.overflow_units, 0);
  EXPECT_EQ(res.rule.flagged_rows(), 0u);
  // (1,2,3): output 1 or 2 with equal probability.
  EXPECT_NEAR(res.rule(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(res.rule(0, 1), 0.5, 1e-15);
  EXPECT_NEAR(res.rule(0, 2), 0.0, 1e-15);
  // (1,1,3): output 3.
  EXPECT_NEAR(res.rule(1, 2), 1.0, 1e-15);
  EXPECT_EQ(res.rule.keys[0], "(1,2,3)");
}

TEST(SelectFromSequence, SingleSymbolMatchingTarget) {
  SequenceLaw law;
  law.alphabet = 3;
  law.length = 1;
  law.sequences = {{0}, {1}, {2}};
  law.probs = {0.2, 0.3, 0.5};
  const auto target = Pmf::make({"a", "b", "c"}, {0.2, 0.3, 0.5});
  const auto res = select_from_sequence(law, target, 1000);
  EXPECT_NEAR(res.achieved_tv, 0.0, 1e-15);
  for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(res.rule(r, 0), 1.0);
}

TEST(SelectFromSequence, SingleSymbolMismatch) {
  SequenceLaw law;
  law.alphabet = 3;
  law.length = 1;
  law.sequences = {{0}, {1}, {2}};
  law.probs = {0.6, 0.1, 0.3};
  const std::vector<double> q{0.2, 0.45, 0.35};
  const auto target = Pmf::make({"a", "b", "c"}, q);
  for (std::int64_t k : {1000, 7919, 100000}) {
    const auto res = select_from_sequence(law, target, k);
    EXPECT_NEAR(res.achieved_tv, half_l1(law.probs, q), 2.0 * 3 / k);
    EXPECT_NEAR(res.quantized_gap, half_l1(law.probs, q), 2.0 * 3 / k);
  }
}

TEST(SelectFromSequence, RejectsSmallK) {
  SequenceLaw law;
  law.alphabet = 1;
  law.length = 1;
  law.sequences = {{0}};
  law.probs = {1.0};
  EXPECT_THROW(select_from_sequence(law, Pmf::make({"a"}, {1.0}), 999),
               Error);
}

TEST(SelectFromSequence, RowsAreDistributions) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 20; ++t) {
    const auto j = random_joint(rng, 2, 3, 0.2);
    const auto res = optimal_pair_sampler(j, 2, 2, 20000);
    for (std::size_t r = 0; r < res.rule.realizations(); ++r) {
      double acc = 0.0;
      for (double x : res.rule.row(r)) {
        EXPECT_GE(x, 0.0);
        acc += x;
      }
      EXPECT_NEAR(acc, 1.0, 1e-12);
    }
  }
}

TEST(OptimalPairSampler, ProductSingleCodeword) {
  const auto j = independent({0.3, 0.7}, {0.6, 0.4});
  const auto res = optimal_pair_sampler(j, 1, 1, 10000);
  EXPECT_NEAR(res.achieved_tv, 0.0, 1e-12);
  for (std::size_t r = 0; r < res.rule.realizations(); ++r)
    EXPECT_EQ(res.rule(r, 0), 1.0);
}

TEST(OptimalPairSampler, SingleCodewordGeneral) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    const auto j = random_joint(rng, 3, 2, 0.1);
    const auto res = optimal_pair_sampler(j, 1, 1, 10000);
    const std::vector<double> target(j.data().begin(), j.data().end());
    EXPECT_NEAR(res.achieved_tv, half_l1(target, product_of_marginals(j)),
                1e-12);
  }
}

TEST(OptimalPairSampler, AchievedTvMatchesExactEvaluation) {
  const auto j = dsbs(0.11);
  const auto res = optimal_pair_sampler(j, 2, 2, 100000);
  EXPECT_DOUBLE_EQ(res.achieved_tv, exact_tv_of_rule(j, res.rule, 2, 2));
}

TEST(OptimalPairSampler, KeysFollowMixedRadix) {
  const auto law = pair_sequence_law(dsbs(0.2), 2, 1);
  ASSERT_EQ(law.sequences.size(), 8u);
  EXPECT_EQ(law.keys[0], "u=(0,0);v=(0)");
  EXPECT_EQ(law.keys[1], "u=(0,0);v=(1)");
  EXPECT_EQ(law.keys[6], "u=(1,1);v=(0)");
  // u=(1,1), v=(0): pair symbols (1,0) twice.
  EXPECT_EQ(law.sequences[6], (std::vector<std::size_t>{2, 2}));
}

TEST(OptimalPairSampler, SizeCaps) {
  std::mt19937_64 rng(1);
  const auto big = random_joint(rng, 5, 5);
  EXPECT_THROW(optimal_pair_sampler(big, 1, 1, 1000), Error);
  const auto j = dsbs(0.1);
  EXPECT_THROW(optimal_pair_sampler(j, 9, 9, 1000), Error);
}

TEST(Duality, DsbsTwoByTwo) {
  const auto rep = duality_check(dsbs(0.11), 2, 2, 100000, 2);
  EXPECT_TRUE(rep.ordered);
  EXPECT_TRUE(rep.within_slack);
  EXPECT_NEAR(rep.sup_side, rep.inf_side, 1e-3);
  EXPECT_DOUBLE_EQ(rep.slack, 4.0 * (4 + 16) / 100000.0);
}

TEST(Duality, SingleCodewordBothSidesEqualTv) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 10; ++t) {
    const auto j = random_joint(rng, 2, 3);
    const auto rep = duality_check(j, 1, 1, 10000);
    const std::vector<double> target(j.data().begin(), j.data().end());
    const double tv = half_l1(target, product_of_marginals(j));
    EXPECT_NEAR(rep.sup_side, tv, 1e-12);
    EXPECT_NEAR(rep.inf_side, tv, rep.slack);
    EXPECT_TRUE(rep.ordered);
  }
}

TEST(Duality, ProductBothSidesZero) {
  const auto rep = duality_check(independent({0.25, 0.75}, {0.5, 0.5}), 2, 2,
                                 10000);
  EXPECT_NEAR(rep.sup_side, 0.0, 1e-12);
  EXPECT_NEAR(rep.inf_side, 0.0, rep.slack);
}

TEST(Duality, RandomInstancesOrderedAndClose) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 15; ++t) {
    const auto j = random_joint(rng, 2, 2, 0.15);
    const auto rep = duality_check(j, 2, 2, 100000);
    EXPECT_TRUE(rep.ordered) << rep.sup_side << " vs " << rep.inf_side;
    EXPECT_TRUE(rep.within_slack);
  }
}

TEST(WeightedRule, ProductIsUniform) {
  const auto rule = weighted_sampler_rule(independent({0.4, 0.6}, {0.1, 0.9}), 2, 3);
  for (double x : rule.probs) EXPECT_NEAR(x, 1.0 / 6, 1e-15);
  EXPECT_EQ(rule.flagged_rows(), 0u);
}

TEST(WeightedRule, DsbsSpecificRealization) {
  const auto rule = weighted_sampler_rule(dsbs(0.11), 2, 2);
  // u=(0,1), v=(0,1) sits at mixed-radix position 0b0101.
  EXPECT_EQ(rule.keys[5], "u=(0,1);v=(0,1)");
  const std::vector<double> w{1.78, 0.22, 0.22, 1.78};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(rule(5, i), w[i] / 4.0, 1e-14);
}

TEST(WeightedRule, SinglePositivePairGetsEverything) {
  const auto j = build_joint({{0.5, 0.0}, {0.0, 0.5}});
  const auto rule = weighted_sampler_rule(j, 2, 1);
  // u=(0,1), v=(1): only (u_2, v_1) has positive mass.
  EXPECT_EQ(rule(2 + 1, 1), 1.0);
  EXPECT_EQ(rule(2 + 1, 0), 0.0);
}

TEST(WeightedRule, ZeroRowFallsBackUniform) {
  const auto j = build_joint({{0.5, 0.0}, {0.0, 0.5}});
  const auto rule = weighted_sampler_rule(j, 1, 2);
  // u=(0), v=(1,1): no positive pair.
  EXPECT_EQ(rule.flagged[3], 1);
  EXPECT_EQ(rule(3, 0), 0.5);
}

TEST(WeightedRule, ExactTvBelowBound) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 60; ++t) {
    const auto j = random_joint(rng, 2, 2, 0.1);
    const int m = 1 + static_cast<int>(rng() % 3);
    const int l = 1 + static_cast<int>(rng() % 3);
    const double tv = exact_tv_of_rule(j, weighted_sampler_rule(j, m, l), m, l);
    const auto b = weighted_sampler_bound(j, m, l);
    EXPECT_LE(tv, b.e108.value + 1e-12);
    EXPECT_LE(b.e108.value, b.e109.value + 1e-12);
  }
}

TEST(WeightedRule, IdentityAtSingleCodeword) {
  std::mt19937_64 rng(43);
  const auto j = random_joint(rng, 3, 3);
  const std::vector<double> target(j.data().begin(), j.data().end());
  EXPECT_NEAR(exact_tv_of_rule(j, weighted_sampler_rule(j, 1, 1), 1, 1),
              half_l1(target, product_of_marginals(j)), 1e-14);
}

TEST(WeightedRule, SlotPermutationSymmetry) {
  std::mt19937_64 rng(47);
  const auto j = random_joint(rng, 2, 3);
  const int m = 2, l = 2;
  const auto rule = weighted_sampler_rule(j, m, l);
  // Swapping u_1 and u_2 permutes the row by exchanging index blocks.
  const std::size_t nv = j.cols(), nvl = nv * nv;
  for (std::size_t r = 0; r < rule.realizations(); ++r) {
    const std::size_t u1 = r / (2 * nvl), u2 = (r / nvl) % 2, vv = r % nvl;
    const std::size_t swapped = (u2 * 2 + u1) * nvl + vv;
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < l; ++k)
        EXPECT_NEAR(rule(swapped, (1 - i) * l + k), rule(r, i * l + k), 1e-15);
  }
  // Relabeling the U alphabet leaves the exact TV unchanged.
  const auto s = swap_rows(j);
  EXPECT_NEAR(exact_tv_of_rule(j, rule, m, l),
              exact_tv_of_rule(s, weighted_sampler_rule(s, m, l), m, l), 1e-14);
}

TEST(WeightedRule, OptimalNeverWorse) {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 20; ++t) {
    const auto j = random_joint(rng, 2, 2);
    const std::int64_t k = 100000;
    const auto opt = optimal_pair_sampler(j, 2, 2, k);
    const double weighted =
        exact_tv_of_rule(j, weighted_sampler_rule(j, 2, 2), 2, 2);
    EXPECT_LE(opt.achieved_tv, weighted + 4.0 * (4 + 16) / k);
  }
}

TEST(OptimalPairSampler, MonotoneInCodebookSizes) {
  std::mt19937_64 rng(59);
  for (int t = 0; t < 8; ++t) {
    const auto j = random_joint(rng, 2, 2);
    const std::int64_t k = 200000;
    const auto slack = [&](int m, int l) {
      return 4.0 * (4 + std::pow(2.0, m + l)) / k;
    };
    const double a = optimal_pair_sampler(j, 1, 1, k).achieved_tv;
    const double b = optimal_pair_sampler(j, 2, 1, k).achieved_tv;
    const double c = optimal_pair_sampler(j, 2, 2, k).achieved_tv;
    const double d = optimal_pair_sampler(j, 2, 3, k).achieved_tv;
    EXPECT_LE(b, a + slack(2, 1));
    EXPECT_LE(c, b + slack(2, 2));
    EXPECT_LE(d, c + slack(2, 3));
  }
}

TEST(McTv, ProductWeightedWithinBias) {
  const auto j = independent({0.3, 0.7}, {0.5, 0.5});
  const CodebookSpec spec{2, 2, 99, 200000};
  const auto est = mc_tv_weighted(j, spec, 2);
  EXPECT_LE(est.estimate.mean, est.bias_bound);
  EXPECT_DOUBLE_EQ(est.bias_bound, std::sqrt(4.0 / (2.0 * 200000)));
}

TEST(McTv, MatchesExactOnTinyInstance) {
  const auto j = dsbs(0.2);
  const auto rule = weighted_sampler_rule(j, 2, 2);
  const double exact = exact_tv_of_rule(j, rule, 2, 2);
  const CodebookSpec spec{2, 2, 7, 400000};
  const auto est = mc_tv_of_rule(j, rule, spec, 3);
  EXPECT_LE(std::abs(est.estimate.mean - exact),
            est.bias_bound + 4.0 * est.estimate.std_error);
  const auto on_the_fly = mc_tv_weighted(j, spec, 1);
  EXPECT_DOUBLE_EQ(on_the_fly.estimate.mean, est.estimate.mean);
}

TEST(McTv, ReproducibleAcrossWorkers) {
  const auto j = dsbs(0.11);
  const auto rule = optimal_pair_sampler(j, 2, 2, 10000).rule;
  const CodebookSpec spec{2, 2, 1234, 50000};
  const auto a = mc_tv_of_rule(j, rule, spec, 1);
  const auto b = mc_tv_of_rule(j, rule, spec, 4);
  EXPECT_EQ(a.estimate.mean, b.estimate.mean);
  const auto c = mc_tv_of_rule(j, rule, {2, 2, 1235, 50000}, 1);
  EXPECT_NE(a.estimate.mean, c.estimate.mean);
}

}  // namespace
}  // namespace mutualcover
