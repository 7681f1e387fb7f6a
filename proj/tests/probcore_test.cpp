#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "mutualcover/probcore.hpp"
#include "test_support.hpp"

namespace mutualcover {
namespace {

using testing::dsbs;
using testing::h_e;
using testing::independent;
using testing::random_joint;

TEST(BuildJoint, UniformIndependentHasUniformMarginals) {
  auto j = build_joint({{0.25, 0.25}, {0.25, 0.25}});
  EXPECT_DOUBLE_EQ(j.pu()[0], 0.5);
  EXPECT_DOUBLE_EQ(j.pv()[1], 0.5);
  EXPECT_EQ(j.u_labels()[1], "1");
}

TEST(BuildJoint, RejectsBadInput) {
  try {
    build_joint({{0.5, 0.6}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotNormalized);
  }
  try {
    build_joint({{1.2, -0.2}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNegativeEntry);
  }
  try {
    build_joint({{0.5, 0.5}}, {"a"}, {"x", "x"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDuplicateLabel);
  }
  EXPECT_THROW(build_joint({{0.5, 0.25}, {0.25}}), Error);
}

TEST(BuildJoint, DsbsMarginalsAreRowAndColumnSums) {
  auto j = dsbs(0.11);
  EXPECT_NEAR(j.pu()[0], 0.445 + 0.055, 1e-15);
  EXPECT_NEAR(j.pv()[1], 0.055 + 0.445, 1e-15);
}

TEST(InfoDensity, ProductIsZeroAndNullAtomsAreNegInf) {
  auto j = independent({0.3, 0.7}, {0.2, 0.5, 0.3});
  for (double d : info_density(j).values) EXPECT_NEAR(d, 0.0, 1e-14);
  auto z = build_joint({{0.5, 0.0}, {0.0, 0.5}});
  EXPECT_EQ(info_density(z)(0, 1), kNegInf);
  EXPECT_NEAR(info_density(z)(0, 0), std::log(2.0), 1e-15);
}

TEST(InfoDensity, Dsbs) {
  auto t = info_density(dsbs(0.11));
  EXPECT_NEAR(t(0, 0), std::log(2 * 0.89), 1e-14);
  EXPECT_NEAR(t(1, 0), std::log(2 * 0.11), 1e-14);
}

TEST(MutualInformation, ClosedForms) {
  EXPECT_NEAR(mutual_information(independent({0.4, 0.6}, {0.1, 0.9})), 0.0,
              1e-15);
  EXPECT_NEAR(mutual_information(build_joint({{0.5, 0.0}, {0.0, 0.5}})),
              std::log(2.0), 1e-15);
  EXPECT_NEAR(mutual_information(dsbs(0.11)), std::log(2.0) - h_e(0.11),
              1e-14);
}

TEST(Varentropy, TwoPointFormula) {
  EXPECT_NEAR(varentropy(independent({0.4, 0.6}, {0.1, 0.9})), 0.0, 1e-12);
  EXPECT_NEAR(varentropy(build_joint({{0.5, 0.0}, {0.0, 0.5}})), 0.0, 1e-12);
  // Two-point law: sd = sqrt(q(1-q)) |a - b|.
  const double a = std::log(1.78), b = std::log(0.22);
  EXPECT_NEAR(varentropy(dsbs(0.11)), std::sqrt(0.89 * 0.11) * (a - b), 1e-13);
}

TEST(Renyi, DirectSums) {
  auto prod = independent({0.2, 0.8}, {0.5, 0.5});
  for (double a : {0.5, 2.0, 3.0}) EXPECT_NEAR(renyi_divergence(prod, a), 0.0, 1e-13);
  EXPECT_NEAR(renyi_divergence(dsbs(0.11), 2.0),
              std::log(0.89 * 1.78 + 0.11 * 0.22), 1e-13);
  auto j = dsbs(0.11);
  const double i = mutual_information(j);
  EXPECT_LT(renyi_divergence(j, 1 - 1e-4), i);
  EXPECT_GT(renyi_divergence(j, 1 + 1e-4), i);
  EXPECT_THROW(renyi_divergence(j, 0.0), Error);
  try {
    renyi_divergence(j, -1.0);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnsupportedOrder);
  }
}

TEST(Renyi, NondecreasingInOrder) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    auto j = random_joint(rng, 1 + rng() % 4, 1 + rng() % 4, 0.2);
    double prev = -1.0;
    for (double a : {0.5, 1.5, 2.0, 4.0}) {
      const double d = renyi_divergence(j, a);
      EXPECT_GE(d, prev - 1e-12);
      prev = d;
    }
  }
}

TEST(Tilted, Definitions) {
  auto j = dsbs(0.11);
  auto same = tilted_distribution(j, 0.0);
  for (std::size_t i = 0; i < 4; ++i)
    EXPECT_NEAR(same.data()[i], j.data()[i], 1e-15);
  auto prod = independent({0.3, 0.7}, {0.6, 0.4});
  auto tp = tilted_distribution(prod, 1.7);
  for (std::size_t i = 0; i < 4; ++i)
    EXPECT_NEAR(tp.data()[i], prod.data()[i], 1e-14);

  const double d = 0.445 * 0.445 / 0.25, o = 0.055 * 0.055 / 0.25;
  auto t1 = tilted_distribution(j, 1.0);
  EXPECT_NEAR(t1(0, 0), d / (2 * d + 2 * o), 1e-14);
  EXPECT_NEAR(t1(0, 1), o / (2 * d + 2 * o), 1e-14);

  EXPECT_NEAR(tilted_rate(j, 0.0), mutual_information(j), 1e-14);
  EXPECT_NEAR(tilted_rate(prod, 2.0), 0.0, 1e-14);
  const auto dens = info_density(j);
  double direct = 0.0;
  for (std::size_t i = 0; i < 4; ++i) direct += t1.data()[i] * dens.values[i];
  EXPECT_NEAR(tilted_rate(j, 1.0), direct, 1e-14);
}

TEST(Tilted, RateNondecreasing) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    auto j = random_joint(rng, 2 + rng() % 3, 2 + rng() % 3, 0.1);
    double prev = -kPosInf;
    for (double rho = 0.0; rho <= 3.0; rho += 0.25) {
      const double r = tilted_rate(j, rho);
      EXPECT_GE(r, prev - 1e-12);
      prev = r;
    }
  }
}

TEST(SmoothMi, GreedyRemoval) {
  auto j = dsbs(0.11);
  EXPECT_NEAR(smooth_mutual_information(j, 0.0), std::log(1.78), 1e-14);
  EXPECT_NEAR(smooth_mutual_information(j, 0.12), std::log(1.78), 1e-14);
  // Removing one diagonal atom (0.445) still leaves the other.
  EXPECT_NEAR(smooth_mutual_information(j, 0.5), std::log(1.78), 1e-14);
  EXPECT_NEAR(smooth_mutual_information(j, 0.9), std::log(0.22), 1e-14);
  EXPECT_NEAR(smooth_mutual_information(j, 1.0 - 0.055), std::log(0.22), 1e-14);
}

TEST(SmoothMi, NonincreasingInEps) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 50; ++t) {
    auto j = random_joint(rng, 3, 3, 0.2);
    const auto dens = info_density(j);
    double top = kNegInf;
    for (std::size_t i = 0; i < j.atoms(); ++i)
      if (j.data()[i] > 0) top = std::max(top, dens.values[i]);
    EXPECT_DOUBLE_EQ(smooth_mutual_information(j, 0.0), top);
    double prev = kPosInf;
    for (double e = 0.0; e < 1.0; e += 0.05) {
      const double v = smooth_mutual_information(j, e);
      EXPECT_LE(v, prev);
      prev = v;
    }
  }
}

// Composite Simpson on [x, x + 12] of the standard normal density.
double q_by_integration(double x) {
  const int n = 200000;
  const double h = 12.0 / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = x + i * h;
    const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    acc += w * std::exp(-t * t / 2);
  }
  return acc * h / 3 / std::sqrt(2 * std::acos(-1.0));
}

TEST(QFunction, ValuesAndSymmetry) {
  EXPECT_DOUBLE_EQ(q_function(0.0), 0.5);
  for (double x : {0.3, 1.0, 2.5, 7.9})
    EXPECT_NEAR(q_function(x) + q_function(-x), 1.0, 1e-15);
  EXPECT_NEAR(q_function(1.959964), 0.025, 1e-7);
  for (double x : {-1.5, 0.7, 1.959964, 3.0})
    EXPECT_NEAR(q_function(x), q_by_integration(x), 1e-10);
}

TEST(TensorPower, Additivity) {
  std::mt19937_64 rng(17);
  auto j = random_joint(rng, 2, 3, 0.0);
  auto same = tensor_power(j, 1);
  for (std::size_t i = 0; i < j.atoms(); ++i)
    EXPECT_DOUBLE_EQ(same.data()[i], j.data()[i]);
  for (int n : {2, 3}) {
    auto p = tensor_power(j, n);
    EXPECT_EQ(p.rows(), static_cast<std::size_t>(std::pow(2, n)));
    EXPECT_NEAR(mutual_information(p), n * mutual_information(j), 1e-9);
    EXPECT_NEAR(varentropy(p) * varentropy(p),
                n * varentropy(j) * varentropy(j), 1e-9);
    EXPECT_NEAR(log_moment(p, 0.7), n * log_moment(j, 0.7), 1e-9);
  }
  auto p2 = tensor_power(j, 2);
  const auto d1 = info_density(j), d2 = info_density(p2);
  // Row (u1,u2) = u1*2 + u2, column (v1,v2) = v1*3 + v2.
  EXPECT_NEAR(d2(1 * 2 + 0, 2 * 3 + 1), d1(1, 2) + d1(0, 1), 1e-12);
  EXPECT_EQ(p2.u_labels()[1], "0,1");
}

TEST(TensorPower, CapExceeded) {
  try {
    tensor_power(dsbs(0.1), 30);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSizeCapExceeded);
  }
}

TEST(Invariants, ChangeOfMeasureIdentity) {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 100; ++t) {
    auto j = random_joint(rng, 1 + rng() % 4, 1 + rng() % 4, 0.3);
    const auto dens = info_density(j);
    double lhs = 0.0, support = 0.0;
    for (std::size_t u = 0; u < j.rows(); ++u)
      for (std::size_t v = 0; v < j.cols(); ++v)
        if (j(u, v) > 0) {
          lhs += j(u, v) * std::exp(-dens(u, v));
          support += j.pu()[u] * j.pv()[v];
        }
    EXPECT_NEAR(lhs, support, 1e-12);
    EXPECT_LE(lhs, 1.0 + 1e-12);
  }
}

}  // namespace
}  // namespace mutualcover
