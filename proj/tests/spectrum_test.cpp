#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mutualcover/spectrum.hpp"
#include "test_support.hpp"

namespace mutualcover {
namespace {

using testing::dsbs;
using testing::random_joint;

TEST(Spectrum, DsbsHasTwoLines) {
  auto s = info_spectrum(dsbs(0.11));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_NEAR(s.lines()[0].density, std::log(0.22), 1e-14);
  EXPECT_NEAR(s.lines()[0].mass, 0.11, 1e-15);
  EXPECT_NEAR(s.lines()[1].mass, 0.89, 1e-15);
  EXPECT_NEAR(s.tail_ge(std::log(1.78)), 0.89, 1e-15);
  EXPECT_NEAR(s.tail_gt(std::log(1.78)), 0.0, 1e-15);
}

TEST(Spectrum, MomentsMatchAtomSums) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 50; ++t) {
    auto j = random_joint(rng, 1 + rng() % 4, 1 + rng() % 4, 0.25);
    auto s = info_spectrum(j);
    EXPECT_NEAR(s.mean(), mutual_information(j), 1e-12);
    EXPECT_NEAR(std::sqrt(s.variance()), varentropy(j), 1e-9);
    for (double a : {0.3, 1.0, 2.5})
      EXPECT_NEAR(s.log_moment(a), log_moment(j, a), 1e-12);
    EXPECT_NEAR(s.tilted_mean(1.0), tilted_rate(j, 1.0), 1e-10);
    for (double e : {0.0, 0.1, 0.4, 0.8})
      EXPECT_NEAR(smooth_mutual_information(s, e),
                  smooth_mutual_information(j, e), 1e-12);
  }
}

// The spectrum of an explicit tensor power is the reference for composition
// counting.
TEST(Spectrum, PowerMatchesMaterializedTensor) {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 10; ++t) {
    auto j = random_joint(rng, 2, 3, 0.2);
    for (int n : {1, 2, 3, 4}) {
      auto direct = info_spectrum(tensor_power(j, n));
      auto counted = spectrum_power(info_spectrum(j), n);
      ASSERT_EQ(direct.size(), counted.size());
      for (std::size_t i = 0; i < direct.size(); ++i) {
        EXPECT_NEAR(direct.lines()[i].density, counted.lines()[i].density, 1e-10);
        EXPECT_NEAR(direct.lines()[i].mass, counted.lines()[i].mass, 1e-12);
      }
    }
  }
}

TEST(Spectrum, DsbsPowerIsBinomial) {
  const int n = 200;
  auto s = spectrum_power(info_spectrum(dsbs(0.11)), n);
  ASSERT_EQ(s.size(), static_cast<std::size_t>(n + 1));
  // Line k (ascending) has n - k mismatches.
  const int k = 178;
  const double lm = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                    std::lgamma(n - k + 1.0) + k * std::log(0.89) +
                    (n - k) * std::log(0.11);
  EXPECT_NEAR(s.lines()[k].mass, std::exp(lm), 1e-12 * std::exp(lm) + 1e-300);
  EXPECT_NEAR(s.lines()[k].density,
              k * std::log(1.78) + (n - k) * std::log(0.22), 1e-9);
  EXPECT_NEAR(s.mean(), n * mutual_information(dsbs(0.11)), 1e-9);
}

TEST(Spectrum, PowerCap) {
  std::mt19937_64 rng(1);
  auto s = info_spectrum(random_joint(rng, 4, 4));
  EXPECT_THROW(spectrum_power(s, 40, 1000), Error);
}

TEST(Spectrum, SmoothProfileSteps) {
  auto s = info_spectrum(dsbs(0.11));
  auto steps = smooth_mi_profile(s);
  ASSERT_EQ(steps.size(), 2u);
  EXPECT_EQ(steps[0].removed, 0.0);
  EXPECT_NEAR(steps[1].removed, 0.89, 1e-15);
  EXPECT_NEAR(steps[1].value, std::log(0.22), 1e-14);
}

}  // namespace
}  // namespace mutualcover
