#pragma once

#include <cstddef>
#include <vector>

#include "rom/dense.hpp"

namespace rom {

// Input bundle shared by the closed-form MSE evaluators. All derived
// quantities are computed once at construction.
struct MseFormulaInputs {
  std::size_t n = 0;
  std::size_t m = 1;
  double dot = 0.0;       // x^T y
  double normprod = 0.0;  // |x|^2 |y|^2
  double overlap = 0.0;   // sum_i x_i^2 y_i^2
  double theta = 0.0;     // angle between x and y

  static MseFormulaInputs from(const std::vector<double>& x,
                               const std::vector<double>& y, std::size_t m);
};

// Numerically stable angle between x and y, exact near 0 and pi.
double angle_between(const std::vector<double>& x, const std::vector<double>& y);

enum class SdFamily { Rademacher, Hybrid, Uniform };

// (1/m)((x^T y)^2 + |x|^2 |y|^2), unstructured iid baseline.
double mse_base_dot(const MseFormulaInputs& in);

// Gaussian-orthogonal estimator; requires n >= 4.
double mse_ort_dot(const MseFormulaInputs& in);

// k-block SD product with Rademacher diagonals, subsampled without
// replacement.
double mse_sd_rademacher(const MseFormulaInputs& in, std::size_t k);

// Final complex diagonal (unit circle or fourth roots, same value):
// exactly half the Rademacher MSE.
double mse_sd_hybrid(const MseFormulaInputs& in, std::size_t k);

// All diagonals uniform on the complex unit circle.
double mse_sd_uniform(const MseFormulaInputs& in, std::size_t k);

// With-replacement subsampling: the bracket form without the
// (n-m)/(n-1) factor, i.e. the without-replacement value scaled by
// (n-1)/(n-m) for m < n, finite at m = n.
double mse_with_replacement(const MseFormulaInputs& in, std::size_t k,
                            SdFamily family);

// 4 theta (pi - theta) / (m pi^2) for iid Gaussian sign features.
double mse_angular_base(double theta, std::size_t m);

// General sign-feature MSE from per-row flip probabilities P[A^i] and
// pairwise covariance corrections delta_ij:
//   (1/m^2)[m - sum_i (1-2P_i)^2 + 4 sum_{i!=j} delta_ij]
//   + (4/m^2)(sum_i (P_i - theta/pi))^2
// The last term is the squared bias of the estimator; it vanishes when all
// rows are marginally Gaussian. Validated against direct Monte Carlo
// measurement for biased (structured) feature maps.
double mse_angular_general(const std::vector<double>& probs,
                           const DenseMatrix& deltas, double theta, std::size_t m);

}  // namespace rom
