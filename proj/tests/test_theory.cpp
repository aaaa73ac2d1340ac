#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "rom/rng.hpp"
#include "rom/theory.hpp"

using namespace rom;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("angle between vectors") {
  CHECK(angle_between({1, 0}, {0, 1}) == doctest::Approx(kPi / 2));
  CHECK(angle_between({1, 1}, {2, 2}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(angle_between({1, 0}, {-1, 0}) == doctest::Approx(kPi));
  // stable for nearly parallel vectors
  CHECK(angle_between({1, 1e-9}, {1, 0}) == doctest::Approx(1e-9).epsilon(1e-6));
  CHECK_THROWS_AS((void)angle_between({1, 0}, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS((void)angle_between({1, 0}, {1, 0, 0}), std::invalid_argument);
}

TEST_CASE("formula inputs") {
  const auto in = MseFormulaInputs::from({1, 2, 0, -1}, {0, 1, 1, 2}, 3);
  CHECK(in.n == 4);
  CHECK(in.m == 3);
  CHECK(in.dot == doctest::Approx(0.0));
  CHECK(in.normprod == doctest::Approx(6.0 * 6.0));
  CHECK(in.overlap == doctest::Approx(0 + 4 + 0 + 4));
}

TEST_CASE("base MSE") {
  const auto in = MseFormulaInputs::from({1, 2, 0, -1}, {0, 1, 1, 2}, 4);
  CHECK(mse_base_dot(in) == doctest::Approx((0.0 + 36.0) / 4.0));
}

TEST_CASE("spot values of the structured-product MSE") {
  const std::vector<double> e1 = {1, 0, 0, 0};
  const auto in = MseFormulaInputs::from(e1, e1, 2);
  CHECK(mse_sd_rademacher(in, 1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(mse_sd_rademacher(in, 2) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mse_sd_rademacher(in, 3) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("structured product always beats the unstructured baseline") {
  Rng rng(31);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = std::size_t{1} << (2 + rng.next_index(4));  // 4..32
    const std::size_t m = 1 + rng.next_index(n - 1);                  // m < n
    const std::size_t k = 1 + rng.next_index(4);
    std::vector<double> x(n), y(n);
    for (double& v : x) v = rng.next_gaussian();
    for (double& v : y) v = rng.next_gaussian();
    const auto in = MseFormulaInputs::from(x, y, m);
    CHECK(mse_sd_rademacher(in, k) < mse_base_dot(in));
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("complex diagonals halve the MSE") {
  Rng rng(32);
  std::vector<double> x(8), y(8);
  for (double& v : x) v = rng.next_gaussian();
  for (double& v : y) v = rng.next_gaussian();
  const auto in = MseFormulaInputs::from(x, y, 5);
  for (std::size_t k = 1; k <= 4; ++k)
    CHECK(mse_sd_hybrid(in, k) == doctest::Approx(0.5 * mse_sd_rademacher(in, k)));
}

TEST_CASE("replacement sampling inflates the MSE by (n-1)/(n-m)") {
  Rng rng(33);
  std::vector<double> x(8), y(8);
  for (double& v : x) v = rng.next_gaussian();
  for (double& v : y) v = rng.next_gaussian();
  for (std::size_t m = 1; m < 8; ++m) {
    const auto in = MseFormulaInputs::from(x, y, m);
    for (std::size_t k = 1; k <= 3; ++k) {
      const double without = mse_sd_rademacher(in, k);
      const double with_r = mse_with_replacement(in, k, SdFamily::Rademacher);
      CHECK(with_r / without == doctest::Approx(7.0 / (8.0 - m)).epsilon(1e-12));
    }
  }
}

TEST_CASE("full-rank structured estimates are exact") {
  const auto in = MseFormulaInputs::from({1, -2, 3, 0}, {2, 0, 1, 1}, 4);
  for (std::size_t k = 1; k <= 3; ++k) {
    CHECK(mse_sd_rademacher(in, k) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(mse_sd_uniform(in, k) == doctest::Approx(0.0).epsilon(1e-15));
  }
}

TEST_CASE("orthogonal Gaussian MSE never exceeds the iid baseline") {
  Rng rng(34);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = std::size_t{1} << (2 + rng.next_index(4));
    const std::size_t m = 1 + rng.next_index(n);
    std::vector<double> x(n), y(n);
    for (double& v : x) v = rng.next_gaussian();
    for (double& v : y) v = rng.next_gaussian();
    const auto in = MseFormulaInputs::from(x, y, m);
    CHECK(mse_ort_dot(in) <= mse_base_dot(in) + 1e-12);
  }
  CHECK_THROWS_AS((void)mse_ort_dot(MseFormulaInputs::from({1, 1}, {1, 0}, 1)),
                  std::domain_error);
}

TEST_CASE("angular base MSE") {
  CHECK(mse_angular_base(kPi / 2, 4) == doctest::Approx(4.0 * (kPi / 2) * (kPi / 2) /
                                                        (4.0 * kPi * kPi)));
  CHECK(mse_angular_base(0.0, 7) == doctest::Approx(0.0));
  CHECK(mse_angular_base(kPi, 7) == doctest::Approx(0.0));
  CHECK_THROWS_AS((void)mse_angular_base(-0.1, 4), std::domain_error);
  CHECK_THROWS_AS((void)mse_angular_base(3.5, 4), std::domain_error);
}

TEST_CASE("general angular MSE reduces to the base form for iid rows") {
  const double theta = kPi / 3;
  for (std::size_t m : {1ul, 4ul, 16ul}) {
    const std::vector<double> probs(m, theta / kPi);
    const DenseMatrix deltas(m, m);  // zero
    CHECK(mse_angular_general(probs, deltas, theta, m) ==
          doctest::Approx(mse_angular_base(theta, m)).epsilon(1e-12));
  }
}

TEST_CASE("general angular MSE decreases with negative correlations") {
  const double theta = kPi / 3;
  const std::size_t m = 4;
  const std::vector<double> probs(m, theta / kPi);
  DenseMatrix deltas(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j) deltas(i, j) = -0.01;
  CHECK(mse_angular_general(probs, deltas, theta, m) < mse_angular_base(theta, m));
}

TEST_CASE("argument validation") {
  const auto in = MseFormulaInputs::from({1, 0, 0, 0}, {0, 1, 0, 0}, 5);
  CHECK_THROWS_AS((void)mse_sd_rademacher(in, 2), std::invalid_argument);  // m > n
  const auto ok = MseFormulaInputs::from({1, 0, 0, 0}, {0, 1, 0, 0}, 2);
  CHECK_THROWS_AS((void)mse_sd_rademacher(ok, 0), std::invalid_argument);  // k < 1
  CHECK_THROWS_AS((void)mse_angular_general({0.5}, DenseMatrix(2, 2), 1.0, 2),
                  std::invalid_argument);
}
