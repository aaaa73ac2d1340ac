#pragma once

#include <cstdint>
#include <vector>

#include "rom/dense.hpp"
#include "rom/estimators.hpp"
#include "rom/transforms.hpp"

namespace rom {

// Monte Carlo summary with standard errors.
struct EstimateStats {
  double mean = 0.0;
  double mse = 0.0;
  double se_mean = 0.0;
  double se_mse = 0.0;
  std::size_t trials = 0;
};

// Exact E[(Khat - x^T y)^2] by enumerating every discrete diagonal
// assignment and every row selection. Rademacher blocks contribute 2^n
// assignments each, FourthRoots blocks 4^n; UnitCircle laws are rejected
// (continuous support). Summation order is fixed: selections outermost.
double brute_force_mse_dot(const SdProductSpec& spec, const std::vector<double>& x,
                           const std::vector<double>& y,
                           std::uint64_t term_cap = 100000000ull);

// Streaming Monte Carlo MSE of a dot-product estimator against x^T y.
// Deterministic for a fixed seed at any worker count (per-trial streams).
EstimateStats monte_carlo_mse_dot(const DotEstimatorSpec& spec,
                                  const std::vector<double>& x,
                                  const std::vector<double>& y, std::size_t trials,
                                  std::uint64_t seed);

// Same, for an angular estimator against 1 - 2 theta / pi.
EstimateStats monte_carlo_mse_angular(const AngularEstimatorSpec& spec,
                                      const std::vector<double>& x,
                                      const std::vector<double>& y, std::size_t trials,
                                      std::uint64_t seed);

// Empirical P[A^i] and delta_ij = P[A^i and A^j] - P[A^i] P[A^j] for the
// sign-flip events A^i = { sign(r_i . x) != sign(r_i . y) }.
struct AngularProbEstimate {
  std::vector<double> probs;
  std::vector<double> se_probs;
  DenseMatrix deltas;     // symmetric, zero diagonal
  DenseMatrix se_deltas;  // delta-method standard errors
  std::size_t trials = 0;
};

AngularProbEstimate estimate_angular_probs(const AngularEstimatorSpec& spec,
                                           const std::vector<double>& x,
                                           const std::vector<double>& y,
                                           std::size_t trials, std::uint64_t seed);

// Dense ground-truth matrices for the fast paths. n <= 64.
DenseMatrix dense_reference(const StructuredOrthogonal& s);

// Dense (S D_k)...(S D_1) with explicit real diagonals.
DenseMatrix dense_reference(const SdProductSpec& spec,
                            const std::vector<Diagonal>& diagonals);

}  // namespace rom
