#include "rom/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>

#include "rom/theory.hpp"

namespace rom {

namespace {

double dot_of(const std::vector<double>& x, const std::vector<double>& y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d += x[i] * y[i];
  return d;
}

std::uint64_t assignments_per_block(DiagonalLaw law, std::size_t n) {
  switch (law) {
    case DiagonalLaw::Rademacher: return std::uint64_t{1} << n;
    case DiagonalLaw::FourthRoots: return std::uint64_t{1} << (2 * n);
    case DiagonalLaw::UnitCircle:
      throw std::invalid_argument("brute_force_mse_dot: UnitCircle has continuous support");
  }
  return 0;
}

void decode_diagonal(DiagonalLaw law, std::uint64_t code, std::size_t n, Diagonal& d) {
  switch (law) {
    case DiagonalLaw::Rademacher:
      d.re.resize(n);
      d.im.clear();
      for (std::size_t i = 0; i < n; ++i) d.re[i] = ((code >> i) & 1u) ? -1.0 : 1.0;
      break;
    case DiagonalLaw::FourthRoots: {
      static constexpr double kRe[4] = {1.0, 0.0, -1.0, 0.0};
      static constexpr double kIm[4] = {0.0, 1.0, 0.0, -1.0};
      d.re.resize(n);
      d.im.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t q = (code >> (2 * i)) & 3u;
        d.re[i] = kRe[q];
        d.im[i] = kIm[q];
      }
      break;
    }
    case DiagonalLaw::UnitCircle:
      throw std::invalid_argument("brute_force_mse_dot: UnitCircle has continuous support");
  }
}

// All m-subsets of {0..n-1}, or all n^m ordered tuples, or just (0..m-1).
std::vector<std::vector<std::size_t>> enumerate_selections(SubsamplingPolicy policy,
                                                           std::size_t n, std::size_t m) {
  std::vector<std::vector<std::size_t>> out;
  switch (policy) {
    case SubsamplingPolicy::FirstM: {
      std::vector<std::size_t> sel(m);
      for (std::size_t i = 0; i < m; ++i) sel[i] = i;
      out.push_back(std::move(sel));
      break;
    }
    case SubsamplingPolicy::WithoutReplacement: {
      if (m > n) throw std::invalid_argument("brute force: m > n");
      std::vector<std::size_t> sel(m);
      for (std::size_t i = 0; i < m; ++i) sel[i] = i;
      while (true) {
        out.push_back(sel);
        // next combination in lexicographic order
        std::size_t i = m;
        while (i > 0 && sel[i - 1] == n - m + i - 1) --i;
        if (i == 0) break;
        ++sel[i - 1];
        for (std::size_t j = i; j < m; ++j) sel[j] = sel[j - 1] + 1;
      }
      break;
    }
    case SubsamplingPolicy::WithReplacement: {
      std::vector<std::size_t> sel(m, 0);
      while (true) {
        out.push_back(sel);
        std::size_t i = 0;
        while (i < m && sel[i] == n - 1) sel[i++] = 0;
        if (i == m) break;
        ++sel[i];
      }
      break;
    }
  }
  return out;
}

}  // namespace

double brute_force_mse_dot(const SdProductSpec& spec, const std::vector<double>& x,
                           const std::vector<double>& y, std::uint64_t term_cap) {
  spec.validate();
  if (x.size() != spec.dim() || y.size() != spec.dim())
    throw std::invalid_argument("brute_force_mse_dot: dimension mismatch");
  const std::size_t n = spec.dim();
  const std::size_t m = spec.m;
  const double target = dot_of(x, y);

  std::vector<std::uint64_t> block_counts(spec.k);
  std::uint64_t combos = 1;
  for (std::size_t b = 0; b < spec.k; ++b) {
    block_counts[b] = assignments_per_block(spec.laws[b], n);
    if (combos > term_cap / block_counts[b])
      throw std::length_error("brute_force_mse_dot: state space above cap");
    combos *= block_counts[b];
  }
  const auto selections = enumerate_selections(spec.policy, n, m);
  if (combos > term_cap / selections.size())
    throw std::length_error("brute_force_mse_dot: state space above cap");

  std::vector<Diagonal> diags(spec.k);
  const double scale = static_cast<double>(n) / static_cast<double>(m);

  // selection loop outermost; fixed summation order
  double total = 0.0;
  for (const auto& sel : selections) {
    double per_sel = 0.0;
    for (std::uint64_t combo = 0; combo < combos; ++combo) {
      std::uint64_t rest = combo;
      for (std::size_t b = 0; b < spec.k; ++b) {
        decode_diagonal(spec.laws[b], rest % block_counts[b], n, diags[b]);
        rest /= block_counts[b];
      }
      const FeatureMap vx = sd_product_apply(spec, diags, x);
      const FeatureMap vy = sd_product_apply(spec, diags, y);
      double est = 0.0;
      for (std::size_t j : sel) {
        est += vx.re[j] * vy.re[j];
        if (vx.is_complex()) est += vx.im[j] * vy.im[j];
      }
      est *= scale;
      per_sel += (est - target) * (est - target);
    }
    total += per_sel;
  }
  return total / (static_cast<double>(selections.size()) * static_cast<double>(combos));
}

namespace {

template <class TrialFn>
EstimateStats run_monte_carlo(TrialFn&& trial, double target, std::size_t trials,
                              std::uint64_t seed) {
  if (trials < 100) throw std::invalid_argument("monte carlo: trials must be >= 100");
  std::vector<double> vals(trials);
  const Rng base(seed);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(trials); ++t) {
    Rng r = base.split(static_cast<std::uint64_t>(t));
    vals[t] = trial(r);
  }
  // fixed-order reduction keeps the result independent of the worker count
  double sum = 0.0, sum_sq = 0.0, sum_e2 = 0.0, sum_e4 = 0.0;
  for (double v : vals) {
    const double e2 = (v - target) * (v - target);
    sum += v;
    sum_sq += v * v;
    sum_e2 += e2;
    sum_e4 += e2 * e2;
  }
  const double nt = static_cast<double>(trials);
  EstimateStats s;
  s.trials = trials;
  s.mean = sum / nt;
  s.mse = sum_e2 / nt;
  const double var_v = std::max(0.0, sum_sq / nt - s.mean * s.mean);
  const double var_e2 = std::max(0.0, sum_e4 / nt - s.mse * s.mse);
  s.se_mean = std::sqrt(var_v / nt);
  s.se_mse = std::sqrt(var_e2 / nt);
  return s;
}

}  // namespace

EstimateStats monte_carlo_mse_dot(const DotEstimatorSpec& spec,
                                  const std::vector<double>& x,
                                  const std::vector<double>& y, std::size_t trials,
                                  std::uint64_t seed) {
  const double target = dot_of(x, y);
  return run_monte_carlo(
      [&](Rng& r) { return estimate_dot(spec, x, y, r); }, target, trials, seed);
}

EstimateStats monte_carlo_mse_angular(const AngularEstimatorSpec& spec,
                                      const std::vector<double>& x,
                                      const std::vector<double>& y, std::size_t trials,
                                      std::uint64_t seed) {
  const double target = 1.0 - 2.0 * angle_between(x, y) / std::numbers::pi;
  return run_monte_carlo(
      [&](Rng& r) { return estimate_angular(spec, x, y, r); }, target, trials, seed);
}

AngularProbEstimate estimate_angular_probs(const AngularEstimatorSpec& spec,
                                           const std::vector<double>& x,
                                           const std::vector<double>& y,
                                           std::size_t trials, std::uint64_t seed) {
  if (trials < 100) throw std::invalid_argument("estimate_angular_probs: trials must be >= 100");
  const std::size_t m = spec.m;
  std::vector<std::uint8_t> flips(trials * m);
  const Rng base(seed);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(trials); ++t) {
    Rng r = base.split(static_cast<std::uint64_t>(t));
    const SignFeatures s = angular_signs(spec, x, y, r);
    for (std::size_t i = 0; i < m; ++i)
      flips[static_cast<std::size_t>(t) * m + i] = (s.x[i] != s.y[i]) ? 1 : 0;
  }

  std::vector<std::uint64_t> count(m, 0);
  std::vector<std::uint64_t> joint(m * m, 0);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint8_t* row = flips.data() + t * m;
    for (std::size_t i = 0; i < m; ++i) {
      if (!row[i]) continue;
      ++count[i];
      for (std::size_t j = i + 1; j < m; ++j)
        if (row[j]) ++joint[i * m + j];
    }
  }

  const double nt = static_cast<double>(trials);
  AngularProbEstimate out;
  out.trials = trials;
  out.probs.resize(m);
  out.se_probs.resize(m);
  out.deltas = DenseMatrix(m, m);
  out.se_deltas = DenseMatrix(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    const double p = static_cast<double>(count[i]) / nt;
    out.probs[i] = p;
    out.se_probs[i] = std::sqrt(std::max(0.0, p * (1.0 - p) / nt));
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double pa = out.probs[i];
      const double pb = out.probs[j];
      const double pj = static_cast<double>(joint[i * m + j]) / nt;
      const double delta = pj - pa * pb;
      // delta method on u = ab - pb*a - pa*b
      const double eu = pj - 2.0 * pa * pb;
      const double eu2 = pj + pb * pb * pa + pa * pa * pb - 2.0 * (pa + pb) * pj +
                         2.0 * pa * pb * pj;
      const double var_u = std::max(0.0, eu2 - eu * eu);
      const double se = std::sqrt(var_u / nt);
      out.deltas(i, j) = delta;
      out.deltas(j, i) = delta;
      out.se_deltas(i, j) = se;
      out.se_deltas(j, i) = se;
    }
  }
  return out;
}

DenseMatrix dense_reference(const StructuredOrthogonal& s) {
  if (s.dim() > 64) throw std::length_error("dense_reference: n > 64");
  return s.dense();
}

DenseMatrix dense_reference(const SdProductSpec& spec,
                            const std::vector<Diagonal>& diagonals) {
  const std::size_t n = spec.dim();
  if (n > 64) throw std::length_error("dense_reference: n > 64");
  if (diagonals.size() != spec.k)
    throw std::invalid_argument("dense_reference: need k diagonals");
  const DenseMatrix sd = spec.s.dense();
  DenseMatrix m = DenseMatrix::identity(n);
  for (std::size_t b = 0; b < spec.k; ++b) {
    const Diagonal& d = diagonals[b];
    if (d.is_complex())
      throw std::invalid_argument("dense_reference: real diagonals only");
    DenseMatrix next(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t c = 0; c < n; ++c) acc += sd(i, c) * d.re[c] * m(c, j);
        next(i, j) = acc;
      }
    m = std::move(next);
  }
  return m;
}

}  // namespace rom
