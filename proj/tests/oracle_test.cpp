#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mutualcover/oracle.hpp"
#include "mutualcover/rng.hpp"
#include "test_support.hpp"

namespace mutualcover {
namespace {

using testing::dsbs;
using testing::independent;
using testing::random_joint;
using testing::random_set;

// Sums over every codebook realization (u_1..u_m, v_1..v_l).
double naive_failure(const JointPmf& j, const CoveringSet& f, int m, int l) {
  const std::size_t nu = j.rows(), nv = j.cols();
  std::vector<std::size_t> us(m, 0), vs(l, 0);
  double total = 0.0;
  while (true) {
    double p = 1.0;
    for (auto u : us) p *= j.pu()[u];
    for (auto v : vs) p *= j.pv()[v];
    bool hit = false;
    for (auto u : us)
      for (auto v : vs) hit = hit || f.contains(u, v);
    if (!hit) total += p;
    // Odometer over us then vs.
    int k = 0;
    for (; k < m + l; ++k) {
      auto& d = k < m ? us[k] : vs[k - m];
      const std::size_t radix = k < m ? nu : nv;
      if (++d < radix) break;
      d = 0;
    }
    if (k == m + l) break;
  }
  return total;
}

TEST(Philox, KnownAnswerVectors) {
  auto a = philox4x32_10({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(a, (PhiloxBlock{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  auto b = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                         {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(b, (PhiloxBlock{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  auto c = philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                         {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(c, (PhiloxBlock{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Philox, UniformRangeAndMean) {
  PhiloxStream s(42, 7);
  double acc = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    acc += u;
  }
  EXPECT_NEAR(acc / 100000, 0.5, 4 * std::sqrt(1.0 / 12 / 100000));
}

TEST(ExactFailure, UnitCodebooksAndFullSet) {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 30; ++t) {
    auto j = random_joint(rng, 3, 3, 0.2);
    auto f = random_set(rng, 3, 3);
    double miss = 0.0;
    for (std::size_t u = 0; u < 3; ++u)
      for (std::size_t v = 0; v < 3; ++v)
        if (!f.contains(u, v)) miss += j.pu()[u] * j.pv()[v];
    EXPECT_NEAR(exact_failure(j, f, 1, 1), miss, 1e-14);
  }
  auto p = independent({0.3, 0.7}, {0.5, 0.5});
  EXPECT_EQ(exact_failure(p, CoveringSet::full(2, 2), 5, 4), 0.0);
}

TEST(ExactFailure, MatchesNaiveEnumeration) {
  std::mt19937_64 rng(67);
  for (int t = 0; t < 20; ++t) {
    auto j = random_joint(rng, 3, 3, 0.2);
    auto f = random_set(rng, 3, 3);
    for (auto [m, l] : {std::pair{3, 3}, std::pair{1, 4}, std::pair{2, 3}})
      EXPECT_NEAR(exact_failure(j, f, m, l), naive_failure(j, f, m, l), 1e-13);
  }
}

TEST(ExactFailure, Monotone) {
  std::mt19937_64 rng(71);
  for (int t = 0; t < 30; ++t) {
    auto j = random_joint(rng, 3, 4, 0.2);
    auto mask = random_set(rng, 3, 4).mask();
    double prev_m = 1.0, prev_l = 1.0;
    for (int k = 1; k <= 8; ++k) {
      auto f = CoveringSet::from_mask(3, 4, mask);
      const double a = exact_failure(j, f, k, 3), b = exact_failure(j, f, 3, k);
      EXPECT_LE(a, prev_m + 1e-15);
      EXPECT_LE(b, prev_l + 1e-15);
      prev_m = a;
      prev_l = b;
    }
    // Growing chain of sets.
    std::vector<std::uint8_t> grow(12, 0);
    double prev = 1.0;
    for (std::size_t i = 0; i < 12; ++i) {
      grow[(i * 5) % 12] = 1;
      const double x = exact_failure(j, CoveringSet::from_mask(3, 4, grow), 2, 2);
      EXPECT_LE(x, prev + 1e-15);
      prev = x;
    }
  }
}

TEST(ExactFailure, SingleUReduction) {
  std::mt19937_64 rng(73);
  auto j = random_joint(rng, 4, 3, 0.1);
  auto f = random_set(rng, 4, 3);
  double ref = 0.0;
  for (std::size_t v = 0; v < 3; ++v) {
    double miss = 0.0;
    for (std::size_t u = 0; u < 4; ++u)
      if (!f.contains(u, v)) miss += j.pu()[u];
    ref += j.pv()[v] * miss;
  }
  EXPECT_NEAR(exact_failure(j, f, 1, 1), ref, 1e-15);
}

TEST(ExactFailure, LargeCodebookAndCap) {
  auto j = dsbs(0.11);
  auto f = CoveringSet::from_bits(2, 2, 0b1001);
  // Fails only when every U and every V agree on one symbol, with opposite
  // values: 2 * 0.5^m * 0.5^l.
  EXPECT_NEAR(exact_failure(j, f, 10, 1000), 2 * std::pow(0.5, 1010), 1e-310);
  EXPECT_NEAR(exact_failure(j, f, 3, 4), 2 * std::pow(0.5, 7), 1e-16);
  std::mt19937_64 rng(1);
  auto wide = random_joint(rng, 2, 20);
  EXPECT_THROW(exact_failure(wide, CoveringSet::full(2, 20), 2, 60, 1000),
               Error);
}

TEST(MonteCarlo, FullSetAndReproducibility) {
  auto j = dsbs(0.11);
  auto est = mc_failure(j, CoveringSet::full(2, 2), {3, 3, 5, 10000});
  EXPECT_EQ(est.mean, 0.0);
  std::mt19937_64 rng(79);
  auto k = random_joint(rng, 3, 3, 0.2);
  auto f = random_set(rng, 3, 3);
  auto a = mc_failure(k, f, {2, 2, 99, 20000}, 1);
  auto b = mc_failure(k, f, {2, 2, 99, 20000}, 4);
  auto c = mc_failure(k, f, {2, 2, 99, 20000}, 8);
  EXPECT_EQ(a.hits, b.hits);
  EXPECT_EQ(a.mean, c.mean);
  EXPECT_EQ(b.worker_count, 4u);
}

TEST(MonteCarlo, WithinFourSigmaOfExact) {
  std::mt19937_64 rng(83);
  for (int t = 0; t < 30; ++t) {
    auto j = random_joint(rng, 1 + rng() % 4, 1 + rng() % 4, 0.2);
    auto f = random_set(rng, j.rows(), j.cols());
    const int m = 1 + rng() % 4, l = 1 + rng() % 4;
    const double p = exact_failure(j, f, m, l);
    const std::uint64_t n = 20000;
    auto est = mc_failure(j, f, {m, l, rng(), n}, 2);
    EXPECT_LE(std::abs(est.mean - p), 4 * std::sqrt(p * (1 - p) / n) + 1e-15);
  }
}

TEST(MonteCarlo, ZScoresCentered) {
  std::mt19937_64 rng(89);
  auto j = random_joint(rng, 3, 3, 0.0);
  auto f = random_set(rng, 3, 3);
  const double p = exact_failure(j, f, 2, 2);
  ASSERT_GT(p, 0.01);
  ASSERT_LT(p, 0.99);
  const std::uint64_t n = 2000;
  double zsum = 0.0;
  for (int r = 0; r < 100; ++r) {
    auto est = mc_failure(j, f, {2, 2, 1000 + static_cast<std::uint64_t>(r), n});
    zsum += (est.mean - p) / std::sqrt(p * (1 - p) / n);
  }
  EXPECT_LE(std::abs(zsum / 100), 0.5);
}

TEST(WorstCase, UnitCodebooksGiveTotalVariation) {
  std::mt19937_64 rng(97);
  for (int t = 0; t < 20; ++t) {
    auto j = random_joint(rng, 1 + rng() % 3, 1 + rng() % 4, 0.2);
    double tv = 0.0;
    std::vector<std::uint8_t> above(j.atoms());
    for (std::size_t u = 0; u < j.rows(); ++u)
      for (std::size_t v = 0; v < j.cols(); ++v) {
        const double d = j(u, v) - j.pu()[u] * j.pv()[v];
        tv += std::abs(d) / 2;
        above[u * j.cols() + v] = d > 1e-13;
      }
    auto w = worstcase_gap_exact(j, 1, 1, 3);
    EXPECT_NEAR(w.gap, tv, 1e-13);
    EXPECT_EQ(w.argmax.mask(), above);
  }
}

TEST(WorstCase, ProductIsZeroAtEmptySet) {
  auto p = independent({0.2, 0.3, 0.5}, {0.6, 0.4});
  auto w = worstcase_gap_exact(p, 3, 2);
  EXPECT_NEAR(w.gap, 0.0, 1e-13);
  EXPECT_EQ(w.argmax.count(), 0u);
}

TEST(WorstCase, BruteForceAndWorkerInvariance) {
  std::mt19937_64 rng(101);
  auto j = random_joint(rng, 2, 3, 0.1);
  double best = -1;
  for (std::uint64_t mask = 0; mask < 64; ++mask) {
    auto f = CoveringSet::from_bits(2, 3, mask);
    best = std::max(best, covered_mass(j, f) - 1 + naive_failure(j, f, 2, 2));
  }
  auto a = worstcase_gap_exact(j, 2, 2, 1);
  auto b = worstcase_gap_exact(j, 2, 2, 5);
  EXPECT_NEAR(a.gap, best, 1e-13);
  EXPECT_EQ(a.argmax.mask(), b.argmax.mask());
  EXPECT_EQ(a.gap, b.gap);
  EXPECT_THROW(worstcase_gap_exact(random_joint(rng, 5, 5), 1, 1), Error);
}

TEST(Windows, DensitySets) {
  auto j = build_joint({{0.5, 0.0}, {0.25, 0.25}});
  EXPECT_EQ(density_window_set(j, kNegInf, kPosInf).mask(),
            (std::vector<std::uint8_t>{1, 0, 1, 1}));
  auto p = independent({0.5, 0.5}, {0.2, 0.8});
  EXPECT_EQ(density_window_set(p, 0.0, 0.0).count(), 4u);
  auto d = dsbs(0.11);
  const double top = info_density(d)(0, 0);
  auto diag = density_window_set(d, top, top);
  EXPECT_EQ(diag.mask(), (std::vector<std::uint8_t>{1, 0, 0, 1}));
  EXPECT_EQ(diag.origin(), CoveringSet::Origin::kDensityWindow);
  auto thr = density_threshold_set(d, 0.0);
  EXPECT_EQ(thr.mask(), (std::vector<std::uint8_t>{0, 1, 1, 0}));
}

TEST(Windows, TypicalWindowBisection) {
  auto s = tensor_power(dsbs(0.11), 8);
  auto t = typical_window(s, 0.1);
  EXPECT_GT(t.mass, 0.9 - 1e-12);
  EXPECT_NEAR(t.mass, covered_mass(s, t.set), 1e-15);
  EXPECT_NEAR(0.5 * (t.a + t.b), mutual_information(s), 1e-12);
  if (t.in_target) EXPECT_LT(t.mass, 0.95);
}

TEST(WeightedSum, EmptyGAndConcentration) {
  auto j = dsbs(0.11);
  auto z = weighted_sum_stats(j, CoveringSet::none(2, 2), {4, 4, 1, 1000}, 1.0);
  EXPECT_EQ(z.mean, 0.0);
  EXPECT_EQ(z.zero_fraction, 1.0);
  EXPECT_TRUE(z.mean_consistent);

  std::mt19937_64 rng(103);
  for (int t = 0; t < 10; ++t) {
    auto k = random_joint(rng, 3, 3, 0.1);
    auto f = random_set(rng, 3, 3);
    auto s = weighted_sum_stats(k, f, {4, 5, rng(), 20000}, 0.5, 4);
    EXPECT_LE(std::abs(s.mean - s.g_mass), 4 * s.mean_stderr + 1e-15);
    EXPECT_LE(s.zero_fraction, s.talagrand + 4 * s.zero_stderr + 1e-15);
    auto again = weighted_sum_stats(k, f, {4, 5, 7, 5000}, 0.5, 1);
    auto par = weighted_sum_stats(k, f, {4, 5, 7, 5000}, 0.5, 3);
    EXPECT_EQ(again.mean, par.mean);
  }
}

}  // namespace
}  // namespace mutualcover
