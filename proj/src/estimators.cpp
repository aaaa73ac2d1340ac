#include "rom/estimators.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rom/theory.hpp"

namespace rom {

namespace {

void check_pair(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty())
    throw std::invalid_argument("estimator: dimension mismatch");
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double e : v) s += e * e;
  return s;
}

std::int8_t sign_of(double t) { return t > 0.0 ? std::int8_t{1} : std::int8_t{-1}; }

// Re(conj(a) . b) summed over features.
double pair_features(const FeatureMap& fx, const FeatureMap& fy) {
  double acc = 0.0;
  for (std::size_t i = 0; i < fx.size(); ++i) acc += fx.re[i] * fy.re[i];
  if (fx.is_complex())
    for (std::size_t i = 0; i < fx.size(); ++i) acc += fx.im[i] * fy.im[i];
  return acc;
}

void check_sd_dot(const SdProductSpec& sd) {
  if (sd.m > sd.dim())
    throw std::invalid_argument("dot estimator: m > n is not supported for SD variants");
}

}  // namespace

DotEstimatorSpec DotEstimatorSpec::base(std::size_t m) {
  if (m < 1) throw std::invalid_argument("DotEstimatorSpec: m must be >= 1");
  return {Kind::Base, m, std::nullopt};
}

DotEstimatorSpec DotEstimatorSpec::ort(std::size_t m) {
  if (m < 1) throw std::invalid_argument("DotEstimatorSpec: m must be >= 1");
  return {Kind::Ort, m, std::nullopt};
}

DotEstimatorSpec DotEstimatorSpec::sd_rademacher(SdProductSpec spec) {
  check_sd_dot(spec);
  const std::size_t m = spec.m;
  return {Kind::SdRademacher, m, std::move(spec)};
}

DotEstimatorSpec DotEstimatorSpec::sd_hybrid(SdProductSpec spec) {
  check_sd_dot(spec);
  if (!is_complex_law(spec.laws.back()))
    throw std::invalid_argument("sd_hybrid: final diagonal law must be complex");
  const std::size_t m = spec.m;
  return {Kind::SdHybrid, m, std::move(spec)};
}

DotEstimatorSpec DotEstimatorSpec::sd_uniform(SdProductSpec spec) {
  check_sd_dot(spec);
  for (DiagonalLaw law : spec.laws)
    if (law != DiagonalLaw::UnitCircle)
      throw std::invalid_argument("sd_uniform: all laws must be UnitCircle");
  const std::size_t m = spec.m;
  return {Kind::SdUniform, m, std::move(spec)};
}

const char* to_string(DotEstimatorSpec::Kind kind) {
  switch (kind) {
    case DotEstimatorSpec::Kind::Base: return "base";
    case DotEstimatorSpec::Kind::Ort: return "ort";
    case DotEstimatorSpec::Kind::SdRademacher: return "sd-rademacher";
    case DotEstimatorSpec::Kind::SdHybrid: return "sd-hybrid";
    case DotEstimatorSpec::Kind::SdUniform: return "sd-uniform";
  }
  return "?";
}

double estimate_dot(const DotEstimatorSpec& spec, const std::vector<double>& x,
                    const std::vector<double>& y, Rng& rng) {
  check_pair(x, y);
  const std::size_t n = x.size();
  const std::size_t m = spec.m;
  switch (spec.kind) {
    case DotEstimatorSpec::Kind::Base: {
      double acc = 0.0;
      std::vector<double> g(n);
      for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t j = 0; j < n; ++j) g[j] = rng.next_gaussian();
        double gx = 0.0, gy = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          gx += g[j] * x[j];
          gy += g[j] * y[j];
        }
        acc += gx * gy;
      }
      return acc / static_cast<double>(m);
    }
    case DotEstimatorSpec::Kind::Ort: {
      const DenseMatrix mat = sample_gort(m, n, rng);
      double acc = 0.0;
      for (std::size_t r = 0; r < m; ++r) {
        double gx = 0.0, gy = 0.0;
        const double* row = mat.row(r);
        for (std::size_t j = 0; j < n; ++j) {
          gx += row[j] * x[j];
          gy += row[j] * y[j];
        }
        acc += gx * gy;
      }
      return acc / static_cast<double>(m);
    }
    default: {
      const SdProductSpec& sd = *spec.sd;
      if (sd.dim() != n) throw std::invalid_argument("estimate_dot: spec dimension mismatch");
      if (sd.m != m) throw std::invalid_argument("estimate_dot: m disagrees with sd spec");
      const SdDraw draw = realize_sd_draw(sd, rng);
      const FeatureMap fx = embed_with(sd, draw, x);
      const FeatureMap fy = embed_with(sd, draw, y);
      return pair_features(fx, fy) / static_cast<double>(m);
    }
  }
}

AngularEstimatorSpec AngularEstimatorSpec::base(std::size_t m) {
  if (m < 1) throw std::invalid_argument("AngularEstimatorSpec: m must be >= 1");
  return {Kind::Base, m, std::nullopt};
}

AngularEstimatorSpec AngularEstimatorSpec::ort(std::size_t m) {
  if (m < 1) throw std::invalid_argument("AngularEstimatorSpec: m must be >= 1");
  return {Kind::Ort, m, std::nullopt};
}

AngularEstimatorSpec AngularEstimatorSpec::sd_rademacher(StructuredOrthogonal s,
                                                         std::size_t k,
                                                         SubsamplingPolicy policy,
                                                         std::size_t m) {
  if (m < 1) throw std::invalid_argument("AngularEstimatorSpec: m must be >= 1");
  // sd->m is set per block at evaluation time
  const std::size_t block_m = std::min(m, s.dim());
  SdProductSpec sd = SdProductSpec::rademacher(std::move(s), k, policy, block_m);
  return {Kind::SdRademacher, m, std::move(sd)};
}

const char* to_string(AngularEstimatorSpec::Kind kind) {
  switch (kind) {
    case AngularEstimatorSpec::Kind::Base: return "base";
    case AngularEstimatorSpec::Kind::Ort: return "ort";
    case AngularEstimatorSpec::Kind::SdRademacher: return "sd-rademacher";
  }
  return "?";
}

SignFeatures angular_signs(const AngularEstimatorSpec& spec, const std::vector<double>& x,
                           const std::vector<double>& y, Rng& rng) {
  check_pair(x, y);
  if (norm2(x) == 0.0 || norm2(y) == 0.0)
    throw std::invalid_argument("angular estimator: zero vector");
  const std::size_t n = x.size();
  const std::size_t m = spec.m;
  SignFeatures out;
  out.x.resize(m);
  out.y.resize(m);
  switch (spec.kind) {
    case AngularEstimatorSpec::Kind::Base: {
      std::vector<double> g(n);
      for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t j = 0; j < n; ++j) g[j] = rng.next_gaussian();
        double gx = 0.0, gy = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          gx += g[j] * x[j];
          gy += g[j] * y[j];
        }
        out.x[r] = sign_of(gx);
        out.y[r] = sign_of(gy);
      }
      break;
    }
    case AngularEstimatorSpec::Kind::Ort: {
      const DenseMatrix mat = sample_gort(m, n, rng);
      for (std::size_t r = 0; r < m; ++r) {
        double gx = 0.0, gy = 0.0;
        const double* row = mat.row(r);
        for (std::size_t j = 0; j < n; ++j) {
          gx += row[j] * x[j];
          gy += row[j] * y[j];
        }
        out.x[r] = sign_of(gx);
        out.y[r] = sign_of(gy);
      }
      break;
    }
    case AngularEstimatorSpec::Kind::SdRademacher: {
      // independent structured blocks concatenated until m features exist
      SdProductSpec block = *spec.sd;
      std::size_t done = 0;
      while (done < m) {
        block.m = std::min(n, m - done);
        const SdDraw draw = realize_sd_draw(block, rng);
        const FeatureMap fx = embed_with(block, draw, x);
        const FeatureMap fy = embed_with(block, draw, y);
        for (std::size_t r = 0; r < block.m; ++r) {
          out.x[done + r] = sign_of(fx.re[r]);
          out.y[done + r] = sign_of(fy.re[r]);
        }
        done += block.m;
      }
      break;
    }
  }
  return out;
}

double estimate_angular(const AngularEstimatorSpec& spec, const std::vector<double>& x,
                        const std::vector<double>& y, Rng& rng) {
  const SignFeatures s = angular_signs(spec, x, y, rng);
  long acc = 0;
  for (std::size_t r = 0; r < spec.m; ++r)
    acc += static_cast<long>(s.x[r]) * static_cast<long>(s.y[r]);
  return static_cast<double>(acc) / static_cast<double>(spec.m);
}

DenseMatrix gram_matrix(const std::vector<std::vector<double>>& points, KernelKind kernel) {
  const std::size_t p = points.size();
  DenseMatrix k(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) {
      double v;
      if (kernel == KernelKind::Dot) {
        check_pair(points[i], points[j]);
        v = 0.0;
        for (std::size_t c = 0; c < points[i].size(); ++c) v += points[i][c] * points[j][c];
      } else {
        v = 1.0 - 2.0 * angle_between(points[i], points[j]) / std::numbers::pi;
      }
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

DenseMatrix approx_gram_dot(const std::vector<std::vector<double>>& points,
                            const DotEstimatorSpec& spec, Rng& rng) {
  const std::size_t p = points.size();
  if (p == 0) return DenseMatrix{};
  const std::size_t n = points[0].size();
  const std::size_t m = spec.m;

  std::vector<FeatureMap> feats(p);
  switch (spec.kind) {
    case DotEstimatorSpec::Kind::Base:
    case DotEstimatorSpec::Kind::Ort: {
      DenseMatrix mat;
      if (spec.kind == DotEstimatorSpec::Kind::Ort) {
        mat = sample_gort(m, n, rng);
      } else {
        mat = DenseMatrix(m, n);
        for (double& e : mat.a) e = rng.next_gaussian();
      }
      for (std::size_t i = 0; i < p; ++i) feats[i] = FeatureMap{matvec(mat, points[i]), {}};
      break;
    }
    default: {
      const SdProductSpec& sd = *spec.sd;
      const SdDraw draw = realize_sd_draw(sd, rng);
      for (std::size_t i = 0; i < p; ++i) feats[i] = embed_with(sd, draw, points[i]);
      break;
    }
  }

  DenseMatrix k(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) {
      const double v = pair_features(feats[i], feats[j]) / static_cast<double>(m);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

DenseMatrix approx_gram_angular(const std::vector<std::vector<double>>& points,
                                const AngularEstimatorSpec& spec, Rng& rng) {
  const std::size_t p = points.size();
  if (p == 0) return DenseMatrix{};
  const std::size_t n = points[0].size();
  const std::size_t m = spec.m;

  // one matrix draw shared by every point
  std::vector<std::vector<std::int8_t>> signs(p, std::vector<std::int8_t>(m));
  switch (spec.kind) {
    case AngularEstimatorSpec::Kind::Base:
    case AngularEstimatorSpec::Kind::Ort: {
      DenseMatrix mat;
      if (spec.kind == AngularEstimatorSpec::Kind::Ort) {
        mat = sample_gort(m, n, rng);
      } else {
        mat = DenseMatrix(m, n);
        for (double& e : mat.a) e = rng.next_gaussian();
      }
      for (std::size_t i = 0; i < p; ++i) {
        const auto proj = matvec(mat, points[i]);
        for (std::size_t r = 0; r < m; ++r) signs[i][r] = sign_of(proj[r]);
      }
      break;
    }
    case AngularEstimatorSpec::Kind::SdRademacher: {
      SdProductSpec block = *spec.sd;
      std::size_t done = 0;
      while (done < m) {
        block.m = std::min(n, m - done);
        const SdDraw draw = realize_sd_draw(block, rng);
        for (std::size_t i = 0; i < p; ++i) {
          const FeatureMap f = embed_with(block, draw, points[i]);
          for (std::size_t r = 0; r < block.m; ++r) signs[i][done + r] = sign_of(f.re[r]);
        }
        done += block.m;
      }
      break;
    }
  }

  DenseMatrix k(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) {
      long acc = 0;
      for (std::size_t r = 0; r < m; ++r)
        acc += static_cast<long>(signs[i][r]) * static_cast<long>(signs[j][r]);
      const double v = static_cast<double>(acc) / static_cast<double>(m);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

double gram_error(const DenseMatrix& exact, const DenseMatrix& approx) {
  if (exact.rows != approx.rows || exact.cols != approx.cols)
    throw std::invalid_argument("gram_error: shape mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < exact.a.size(); ++i) {
    const double d = exact.a[i] - approx.a[i];
    num += d * d;
    den += exact.a[i] * exact.a[i];
  }
  if (den == 0.0) throw std::invalid_argument("gram_error: zero exact matrix");
  return std::sqrt(num / den);
}

}  // namespace rom
