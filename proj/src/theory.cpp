#include "rom/theory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rom {

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

double angle_between(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("angle_between: dimension mismatch");
  const double nx = std::sqrt(norm2(x));
  const double ny = std::sqrt(norm2(y));
  if (nx == 0.0 || ny == 0.0) throw std::invalid_argument("angle_between: zero vector");
  // theta = 2 atan2(|u - w|, |u + w|) for unit u, w; no acos cancellation
  double dm = 0.0, dp = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = x[i] / nx;
    const double w = y[i] / ny;
    dm += (u - w) * (u - w);
    dp += (u + w) * (u + w);
  }
  return 2.0 * std::atan2(std::sqrt(dm), std::sqrt(dp));
}

MseFormulaInputs MseFormulaInputs::from(const std::vector<double>& x,
                                        const std::vector<double>& y, std::size_t m) {
  if (x.size() != y.size() || x.empty())
    throw std::invalid_argument("MseFormulaInputs: dimension mismatch");
  if (m < 1) throw std::invalid_argument("MseFormulaInputs: m must be >= 1");
  MseFormulaInputs in;
  in.n = x.size();
  in.m = m;
  for (std::size_t i = 0; i < x.size(); ++i) {
    in.dot += x[i] * y[i];
    in.overlap += x[i] * x[i] * y[i] * y[i];
  }
  in.normprod = norm2(x) * norm2(y);
  in.theta = angle_between(x, y);
  return in;
}

double mse_base_dot(const MseFormulaInputs& in) {
  return (in.dot * in.dot + in.normprod) / static_cast<double>(in.m);
}

double mse_ort_dot(const MseFormulaInputs& in) {
  if (in.n < 4) throw std::domain_error("mse_ort_dot: requires n >= 4");
  const double n = static_cast<double>(in.n);
  const double m = static_cast<double>(in.m);
  const double cos2 = std::cos(in.theta) * std::cos(in.theta);
  const double correction =
      in.normprod * n * (n - 2.0) / 2.0 *
          ((cos2 + 0.5) / ((n + 2.0) * (n - 1.0)) +
           (cos2 - 0.5) / ((n - 1.0) * (n - 2.0))) -
      in.dot * in.dot;
  return mse_base_dot(in) + (m - 1.0) / m * correction;
}

namespace {

// Bracket of the SD-product MSE, shared by the without/with-replacement and
// real/complex variants.
double sd_bracket(const MseFormulaInputs& in, std::size_t k, SdFamily family) {
  const double n = static_cast<double>(in.n);
  const double dot2 = in.dot * in.dot;
  const double a = dot2 + in.normprod;
  double sum = a;
  double factor = 1.0;
  for (std::size_t r = 1; r + 1 <= k; ++r) {
    if (family == SdFamily::Uniform) {
      factor *= -1.0 / n;
      sum += factor * (3.0 * dot2 + in.normprod);
    } else {
      factor *= -2.0 / n;
      sum += factor * (2.0 * dot2 + in.normprod);
    }
  }
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  if (family == SdFamily::Uniform) {
    sum += sign * 2.0 * std::pow(n, -(static_cast<double>(k) - 1.0)) * in.overlap;
  } else {
    sum += sign * std::pow(2.0, static_cast<double>(k)) *
           std::pow(n, -(static_cast<double>(k) - 1.0)) * in.overlap;
  }
  if (family != SdFamily::Rademacher) sum *= 0.5;
  return sum;
}

void check_sd_args(const MseFormulaInputs& in, std::size_t k) {
  if (k < 1) throw std::invalid_argument("sd mse: k must be >= 1");
  if (in.m > in.n) throw std::invalid_argument("sd mse: m > n");
}

}  // namespace

double mse_sd_rademacher(const MseFormulaInputs& in, std::size_t k) {
  check_sd_args(in, k);
  const double n = static_cast<double>(in.n);
  const double m = static_cast<double>(in.m);
  if (in.n == 1) return 0.0;  // m = n forced
  return (n - m) / (m * (n - 1.0)) * sd_bracket(in, k, SdFamily::Rademacher);
}

double mse_sd_hybrid(const MseFormulaInputs& in, std::size_t k) {
  check_sd_args(in, k);
  return 0.5 * mse_sd_rademacher(in, k);
}

double mse_sd_uniform(const MseFormulaInputs& in, std::size_t k) {
  check_sd_args(in, k);
  const double n = static_cast<double>(in.n);
  const double m = static_cast<double>(in.m);
  if (in.n == 1) return 0.0;
  return (n - m) / (m * (n - 1.0)) * sd_bracket(in, k, SdFamily::Uniform);
}

double mse_with_replacement(const MseFormulaInputs& in, std::size_t k, SdFamily family) {
  if (k < 1) throw std::invalid_argument("mse_with_replacement: k must be >= 1");
  // bracket form stays finite at m = n, where the (n-1)/(n-m) ratio does not
  return sd_bracket(in, k, family) / static_cast<double>(in.m);
}

double mse_angular_base(double theta, std::size_t m) {
  if (theta < 0.0 || theta > std::numbers::pi)
    throw std::domain_error("mse_angular_base: theta outside [0, pi]");
  if (m < 1) throw std::invalid_argument("mse_angular_base: m must be >= 1");
  const double pi = std::numbers::pi;
  return 4.0 * theta * (pi - theta) / (static_cast<double>(m) * pi * pi);
}

double mse_angular_general(const std::vector<double>& probs, const DenseMatrix& deltas,
                           double theta, std::size_t m) {
  if (probs.size() != m || deltas.rows != m || deltas.cols != m)
    throw std::invalid_argument("mse_angular_general: shape mismatch");
  const double pi = std::numbers::pi;
  double sq = 0.0;        // sum (1 - 2 P[A^i])^2
  double bias_sum = 0.0;  // sum (P[A^i] - theta/pi); the squared-bias term is
                          // (E[Khat] - K)^2 = (2/m)^2 (sum_i (P_i - theta/pi))^2
  double delta_sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double p = probs[i];
    if (p < 0.0 || p > 1.0)
      throw std::invalid_argument("mse_angular_general: prob outside [0,1]");
    sq += (1.0 - 2.0 * p) * (1.0 - 2.0 * p);
    bias_sum += p - theta / pi;
    for (std::size_t j = 0; j < m; ++j)
      if (j != i) delta_sum += deltas(i, j);
  }
  const double md = static_cast<double>(m);
  return (md - sq) / (md * md) +
         4.0 / (md * md) * (bias_sum * bias_sum + delta_sum);
}

}  // namespace rom
