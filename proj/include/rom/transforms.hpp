#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rom/dense.hpp"
#include "rom/rng.hpp"

namespace rom {

constexpr bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n);

// Normalized fast Walsh-Hadamard transform, in place. O(n log n).
// Parallelizes the butterfly passes for large n.
void fwht(std::vector<double>& v);

// Serial reference implementation, kept for testing and benchmarks.
void fwht_serial(std::vector<double>& v);

// Zero-pad to the next power of 2; unchanged if already a power of 2.
std::vector<double> pad_to_pow2(const std::vector<double>& x);

// Walsh matrix entry w_ij = (1/sqrt(n)) * (-1)^(i_{N-1}j_0 + ... + i_0 j_{N-1}).
double walsh_entry(std::size_t i, std::size_t j, std::size_t n);

std::vector<double> walsh_matvec(const std::vector<double>& v);

// (A_1 (x) ... (x) A_l) v without materializing the n x n product.
std::vector<double> kron_matvec(const std::vector<DenseMatrix>& blocks,
                                const std::vector<double>& v);

// The S matrix family: orthogonal rows, every entry of magnitude 1/sqrt(n),
// with an O(n log n) matvec.
class StructuredOrthogonal {
 public:
  enum class Kind { Hadamard, Walsh, Kronecker };

  static StructuredOrthogonal hadamard(int log2n);
  static StructuredOrthogonal walsh(int log2n);
  // Validates that each block is square with equal-magnitude entries and
  // pairwise orthogonal rows, then L2-normalizes. Rejects anything else.
  static StructuredOrthogonal kronecker(std::vector<DenseMatrix> blocks);

  Kind kind() const { return kind_; }
  std::size_t dim() const { return n_; }

  void apply(std::vector<double>& v) const;
  DenseMatrix dense() const;

 private:
  StructuredOrthogonal(Kind k, std::size_t n) : kind_(k), n_(n) {}
  Kind kind_;
  std::size_t n_;
  std::vector<DenseMatrix> blocks_;  // Kronecker only, row-normalized
};

enum class DiagonalLaw { Rademacher, FourthRoots, UnitCircle };

constexpr bool is_complex_law(DiagonalLaw law) { return law != DiagonalLaw::Rademacher; }

// Complex values are explicit (re, im) channel pairs; real pipelines leave
// `im` empty and never touch it.
struct Diagonal {
  std::vector<double> re;
  std::vector<double> im;
  bool is_complex() const { return !im.empty(); }
  std::size_t size() const { return re.size(); }
};

Diagonal sample_diagonal(DiagonalLaw law, std::size_t n, Rng& rng);

enum class SubsamplingPolicy { WithoutReplacement, WithReplacement, FirstM };

std::vector<std::size_t> subsample_rows(SubsamplingPolicy policy, std::size_t n,
                                        std::size_t m, Rng& rng);

// One random embedding family: k blocks of S times a random diagonal,
// followed by row subsampling down to m coordinates.
struct SdProductSpec {
  StructuredOrthogonal s;
  std::size_t k = 1;
  std::vector<DiagonalLaw> laws;  // length k, applied D_1 first
  SubsamplingPolicy policy = SubsamplingPolicy::WithoutReplacement;
  std::size_t m = 1;

  std::size_t dim() const { return s.dim(); }
  bool complex_output() const;
  void validate() const;

  static SdProductSpec rademacher(StructuredOrthogonal s, std::size_t k,
                                  SubsamplingPolicy policy, std::size_t m);
  // Rademacher x (k-1) then one complex final law.
  static SdProductSpec hybrid(StructuredOrthogonal s, std::size_t k,
                              DiagonalLaw final_law, SubsamplingPolicy policy,
                              std::size_t m);
  static SdProductSpec uniform(StructuredOrthogonal s, std::size_t k,
                               SubsamplingPolicy policy, std::size_t m);
};

// A realized random embedding of one vector.
struct FeatureMap {
  std::vector<double> re;
  std::vector<double> im;
  bool is_complex() const { return !im.empty(); }
  std::size_t size() const { return re.size(); }
};

// One concrete draw of the random parts of an SD-product embedding,
// shared between the x and y sides of an estimator. Diagonals may also be
// forced directly for deterministic tests.
struct SdDraw {
  std::vector<Diagonal> diagonals;
  std::vector<std::size_t> rows;
};

SdDraw realize_sd_draw(const SdProductSpec& spec, Rng& rng);

// Full (SD_k)...(SD_1) x, no subsampling; unitary, so norm-preserving.
FeatureMap sd_product_apply(const SdProductSpec& spec,
                            const std::vector<Diagonal>& diagonals,
                            const std::vector<double>& x);

enum class EmbedPath {
  Fast,   // paired-row reuse on the final Hadamard block
  Naive,  // per-row evaluation, same arithmetic, no reuse
};

// m selected coordinates of the full SD-product output, scaled by sqrt(n);
// (1/m) * pairing of two embeddings is then an unbiased dot-product estimate.
FeatureMap embed_with(const SdProductSpec& spec, const SdDraw& draw,
                      const std::vector<double>& x,
                      EmbedPath path = EmbedPath::Fast);

FeatureMap embed(const SdProductSpec& spec, const std::vector<double>& x, Rng& rng,
                 EmbedPath path = EmbedPath::Fast);

// Expected number of (i, n/2+i) row pairs selected under uniform
// without-replacement subsampling: m(m-1) / (2(n-1)).
double expected_pair_count(std::size_t n, std::size_t m);

// Pairs present in one without-replacement draw.
std::size_t measure_pair_count(std::size_t n, std::size_t m, Rng& rng);

// Gaussian-orthogonal sample: blocks of n Haar-orthonormal rows, each row
// scaled by an independent chi_n draw; rows beyond m_rows are dropped.
DenseMatrix sample_gort(std::size_t m_rows, std::size_t n, Rng& rng);

}  // namespace rom
