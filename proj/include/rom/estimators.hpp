#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rom/dense.hpp"
#include "rom/rng.hpp"
#include "rom/transforms.hpp"

namespace rom {

// One randomized dot-product estimator configuration.
struct DotEstimatorSpec {
  enum class Kind { Base, Ort, SdRademacher, SdHybrid, SdUniform };

  Kind kind;
  std::size_t m = 1;
  std::optional<SdProductSpec> sd;  // set for SD kinds; sd->m == m

  static DotEstimatorSpec base(std::size_t m);
  static DotEstimatorSpec ort(std::size_t m);
  static DotEstimatorSpec sd_rademacher(SdProductSpec spec);
  static DotEstimatorSpec sd_hybrid(SdProductSpec spec);
  static DotEstimatorSpec sd_uniform(SdProductSpec spec);
};

const char* to_string(DotEstimatorSpec::Kind kind);

// One realization of the estimator; x and y share a single matrix draw.
double estimate_dot(const DotEstimatorSpec& spec, const std::vector<double>& x,
                    const std::vector<double>& y, Rng& rng);

// Sign-feature estimator of the angular kernel 1 - 2 theta / pi.
struct AngularEstimatorSpec {
  enum class Kind { Base, Ort, SdRademacher };

  Kind kind;
  std::size_t m = 1;
  // Per-block SD configuration for SdRademacher; m may exceed n, in which
  // case independent structured blocks are concatenated.
  std::optional<SdProductSpec> sd;

  static AngularEstimatorSpec base(std::size_t m);
  static AngularEstimatorSpec ort(std::size_t m);
  static AngularEstimatorSpec sd_rademacher(StructuredOrthogonal s, std::size_t k,
                                            SubsamplingPolicy policy, std::size_t m);
};

const char* to_string(AngularEstimatorSpec::Kind kind);

double estimate_angular(const AngularEstimatorSpec& spec, const std::vector<double>& x,
                        const std::vector<double>& y, Rng& rng);

// Per-row sign features of one shared matrix draw, for x and y.
// sign(t) = +1 if t > 0, -1 otherwise.
struct SignFeatures {
  std::vector<std::int8_t> x;
  std::vector<std::int8_t> y;
};

SignFeatures angular_signs(const AngularEstimatorSpec& spec, const std::vector<double>& x,
                           const std::vector<double>& y, Rng& rng);

enum class KernelKind { Dot, Angular };

// Exact pairwise kernel values.
DenseMatrix gram_matrix(const std::vector<std::vector<double>>& points, KernelKind kernel);

// Feature-map Gram approximation; one matrix draw per full Gram computation.
DenseMatrix approx_gram_dot(const std::vector<std::vector<double>>& points,
                            const DotEstimatorSpec& spec, Rng& rng);
DenseMatrix approx_gram_angular(const std::vector<std::vector<double>>& points,
                                const AngularEstimatorSpec& spec, Rng& rng);

// |K - Khat|_F / |K|_F
double gram_error(const DenseMatrix& exact, const DenseMatrix& approx);

}  // namespace rom
