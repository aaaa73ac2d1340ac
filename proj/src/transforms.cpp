#include "rom/transforms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace rom {

namespace {

constexpr std::size_t kParallelFwht = std::size_t{1} << 14;

void check_pow2(std::size_t n) {
  if (!is_pow2(n)) throw std::invalid_argument("fwht: length must be a power of 2");
}

void butterflies(double* v, std::size_t n) {
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double s = v[j];
        const double t = v[j + h];
        v[j] = s + t;
        v[j + h] = s - t;
      }
    }
  }
}

void butterflies_parallel(double* v, std::size_t n) {
  for (std::size_t h = 1; h < n; h <<= 1) {
    if (h >= n / 4) {
      // few wide blocks: split the inner range instead
      for (std::size_t i = 0; i < n; i += 2 * h) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i);
             j < static_cast<std::ptrdiff_t>(i + h); ++j) {
          const double s = v[j];
          const double t = v[j + h];
          v[j] = s + t;
          v[j + h] = s - t;
        }
      }
    } else {
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n);
           i += static_cast<std::ptrdiff_t>(2 * h)) {
        for (std::ptrdiff_t j = i; j < i + static_cast<std::ptrdiff_t>(h); ++j) {
          const double s = v[j];
          const double t = v[j + h];
          v[j] = s + t;
          v[j + h] = s - t;
        }
      }
    }
  }
}

void scale(double* v, std::size_t n, double c) {
  if (n >= kParallelFwht) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) v[i] *= c;
  } else {
    for (std::size_t i = 0; i < n; ++i) v[i] *= c;
  }
}

std::size_t bit_reverse(std::size_t i, int bits) {
  std::size_t r = 0;
  for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
  return r;
}

int log2_of(std::size_t n) { return std::countr_zero(n); }

// +1/-1 sign of the unnormalized Hadamard entry.
double hadamard_sign(std::size_t i, std::size_t j) {
  return (std::popcount(i & j) & 1) ? -1.0 : 1.0;
}

}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fwht(std::vector<double>& v) {
  check_pow2(v.size());
  const std::size_t n = v.size();
  if (n >= kParallelFwht) {
    butterflies_parallel(v.data(), n);
  } else {
    butterflies(v.data(), n);
  }
  scale(v.data(), n, 1.0 / std::sqrt(static_cast<double>(n)));
}

void fwht_serial(std::vector<double>& v) {
  check_pow2(v.size());
  butterflies(v.data(), v.size());
  const double c = 1.0 / std::sqrt(static_cast<double>(v.size()));
  for (double& x : v) x *= c;
}

std::vector<double> pad_to_pow2(const std::vector<double>& x) {
  if (x.empty()) throw std::invalid_argument("pad_to_pow2: empty input");
  std::vector<double> out = x;
  out.resize(next_pow2(x.size()), 0.0);
  return out;
}

double walsh_entry(std::size_t i, std::size_t j, std::size_t n) {
  check_pow2(n);
  if (i >= n || j >= n) throw std::out_of_range("walsh_entry: index out of range");
  const int bits = log2_of(n);
  const double s = hadamard_sign(bit_reverse(i, bits), j);
  return s / std::sqrt(static_cast<double>(n));
}

std::vector<double> walsh_matvec(const std::vector<double>& v) {
  check_pow2(v.size());
  std::vector<double> h = v;
  fwht(h);
  // W v is H v with bit-reversed row order
  const int bits = log2_of(v.size());
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = h[bit_reverse(i, bits)];
  return out;
}

std::vector<double> kron_matvec(const std::vector<DenseMatrix>& blocks,
                                const std::vector<double>& v) {
  std::size_t n = 1;
  for (const auto& b : blocks) {
    if (b.rows != b.cols || b.rows == 0)
      throw std::invalid_argument("kron_matvec: blocks must be square and nonempty");
    n *= b.rows;
  }
  if (blocks.empty() || v.size() != n)
    throw std::invalid_argument("kron_matvec: dimension mismatch");

  std::vector<double> cur = v;
  std::vector<double> tmp(n);
  std::size_t left = 1;
  std::size_t right = n;
  for (const auto& block : blocks) {
    const std::size_t d = block.rows;
    right /= d;
    for (std::size_t a = 0; a < left; ++a) {
      for (std::size_t c = 0; c < right; ++c) {
        const std::size_t base = a * d * right + c;
        for (std::size_t i = 0; i < d; ++i) {
          double acc = 0.0;
          for (std::size_t j = 0; j < d; ++j) acc += block(i, j) * cur[base + j * right];
          tmp[base + i * right] = acc;
        }
      }
    }
    std::swap(cur, tmp);
    left *= d;
  }
  return cur;
}

StructuredOrthogonal StructuredOrthogonal::hadamard(int log2n) {
  if (log2n < 0) throw std::invalid_argument("hadamard: negative log2n");
  return StructuredOrthogonal(Kind::Hadamard, std::size_t{1} << log2n);
}

StructuredOrthogonal StructuredOrthogonal::walsh(int log2n) {
  if (log2n < 0) throw std::invalid_argument("walsh: negative log2n");
  return StructuredOrthogonal(Kind::Walsh, std::size_t{1} << log2n);
}

StructuredOrthogonal StructuredOrthogonal::kronecker(std::vector<DenseMatrix> blocks) {
  if (blocks.empty()) throw std::invalid_argument("kronecker: no blocks");
  std::size_t n = 1;
  for (auto& b : blocks) {
    if (b.rows != b.cols || b.rows == 0)
      throw std::invalid_argument("kronecker: blocks must be square");
    const std::size_t d = b.rows;
    const double mag = std::abs(b(0, 0));
    if (mag == 0.0) throw std::invalid_argument("kronecker: zero entry");
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        if (std::abs(std::abs(b(i, j)) - mag) > 1e-12 * mag)
          throw std::invalid_argument("kronecker: entries must have equal magnitude");
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i + 1; j < d; ++j) {
        double dot = 0.0;
        for (std::size_t c = 0; c < d; ++c) dot += b(i, c) * b(j, c);
        if (std::abs(dot) > 1e-10 * mag * mag * static_cast<double>(d))
          throw std::invalid_argument("kronecker: rows must be orthogonal");
      }
    }
    // normalize rows to unit norm; entry magnitude becomes 1/sqrt(d)
    const double inv = 1.0 / (mag * std::sqrt(static_cast<double>(d)));
    for (double& x : b.a) x *= inv;
    n *= d;
  }
  StructuredOrthogonal s(Kind::Kronecker, n);
  s.blocks_ = std::move(blocks);
  return s;
}

void StructuredOrthogonal::apply(std::vector<double>& v) const {
  if (v.size() != n_) throw std::invalid_argument("StructuredOrthogonal: dimension mismatch");
  switch (kind_) {
    case Kind::Hadamard:
      fwht(v);
      break;
    case Kind::Walsh: {
      fwht(v);
      const int bits = log2_of(n_);
      for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t r = bit_reverse(i, bits);
        if (r > i) std::swap(v[i], v[r]);
      }
      break;
    }
    case Kind::Kronecker:
      v = kron_matvec(blocks_, v);
      break;
  }
}

DenseMatrix StructuredOrthogonal::dense() const {
  DenseMatrix m(n_, n_);
  switch (kind_) {
    case Kind::Hadamard: {
      const double c = 1.0 / std::sqrt(static_cast<double>(n_));
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) m(i, j) = c * hadamard_sign(i, j);
      break;
    }
    case Kind::Walsh:
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) m(i, j) = walsh_entry(i, j, n_);
      break;
    case Kind::Kronecker: {
      m = DenseMatrix(1, 1);
      m(0, 0) = 1.0;
      for (const auto& b : blocks_) {
        DenseMatrix next(m.rows * b.rows, m.cols * b.cols);
        for (std::size_t i = 0; i < next.rows; ++i)
          for (std::size_t j = 0; j < next.cols; ++j)
            next(i, j) = m(i / b.rows, j / b.cols) * b(i % b.rows, j % b.cols);
        m = std::move(next);
      }
      break;
    }
  }
  return m;
}

Diagonal sample_diagonal(DiagonalLaw law, std::size_t n, Rng& rng) {
  Diagonal d;
  d.re.resize(n);
  switch (law) {
    case DiagonalLaw::Rademacher:
      for (std::size_t i = 0; i < n; ++i) d.re[i] = (rng.next_u64() & 1u) ? 1.0 : -1.0;
      break;
    case DiagonalLaw::FourthRoots: {
      d.im.assign(n, 0.0);
      static constexpr double kRe[4] = {1.0, 0.0, -1.0, 0.0};
      static constexpr double kIm[4] = {0.0, 1.0, 0.0, -1.0};
      for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t q = rng.next_index(4);
        d.re[i] = kRe[q];
        d.im[i] = kIm[q];
      }
      break;
    }
    case DiagonalLaw::UnitCircle: {
      d.im.assign(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double a = 2.0 * std::numbers::pi * rng.next_double();
        d.re[i] = std::cos(a);
        d.im[i] = std::sin(a);
      }
      break;
    }
  }
  return d;
}

std::vector<std::size_t> subsample_rows(SubsamplingPolicy policy, std::size_t n,
                                        std::size_t m, Rng& rng) {
  std::vector<std::size_t> out(m);
  switch (policy) {
    case SubsamplingPolicy::FirstM:
      if (m > n) throw std::invalid_argument("subsample_rows: m > n");
      std::iota(out.begin(), out.end(), std::size_t{0});
      break;
    case SubsamplingPolicy::WithoutReplacement: {
      if (m > n) throw std::invalid_argument("subsample_rows: m > n");
      // partial Fisher-Yates: O(n) memory, O(m) swaps
      std::vector<std::size_t> idx(n);
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = i + rng.next_index(n - i);
        std::swap(idx[i], idx[j]);
        out[i] = idx[i];
      }
      break;
    }
    case SubsamplingPolicy::WithReplacement:
      for (std::size_t i = 0; i < m; ++i) out[i] = rng.next_index(n);
      break;
  }
  return out;
}

bool SdProductSpec::complex_output() const {
  return std::any_of(laws.begin(), laws.end(),
                     [](DiagonalLaw l) { return is_complex_law(l); });
}

void SdProductSpec::validate() const {
  if (k < 1 || laws.size() != k)
    throw std::invalid_argument("SdProductSpec: laws length must equal k >= 1");
  if (m < 1) throw std::invalid_argument("SdProductSpec: m must be >= 1");
  if (policy != SubsamplingPolicy::WithReplacement && m > dim())
    throw std::invalid_argument("SdProductSpec: m > n under a distinct-index policy");
}

SdProductSpec SdProductSpec::rademacher(StructuredOrthogonal s, std::size_t k,
                                        SubsamplingPolicy policy, std::size_t m) {
  SdProductSpec spec{std::move(s), k,
                     std::vector<DiagonalLaw>(k, DiagonalLaw::Rademacher), policy, m};
  spec.validate();
  return spec;
}

SdProductSpec SdProductSpec::hybrid(StructuredOrthogonal s, std::size_t k,
                                    DiagonalLaw final_law, SubsamplingPolicy policy,
                                    std::size_t m) {
  if (!is_complex_law(final_law))
    throw std::invalid_argument("SdProductSpec::hybrid: final law must be complex");
  std::vector<DiagonalLaw> laws(k, DiagonalLaw::Rademacher);
  laws.back() = final_law;
  SdProductSpec spec{std::move(s), k, std::move(laws), policy, m};
  spec.validate();
  return spec;
}

SdProductSpec SdProductSpec::uniform(StructuredOrthogonal s, std::size_t k,
                                     SubsamplingPolicy policy, std::size_t m) {
  SdProductSpec spec{std::move(s), k,
                     std::vector<DiagonalLaw>(k, DiagonalLaw::UnitCircle), policy, m};
  spec.validate();
  return spec;
}

SdDraw realize_sd_draw(const SdProductSpec& spec, Rng& rng) {
  spec.validate();
  SdDraw draw;
  draw.diagonals.reserve(spec.k);
  for (std::size_t b = 0; b < spec.k; ++b)
    draw.diagonals.push_back(sample_diagonal(spec.laws[b], spec.dim(), rng));
  draw.rows = subsample_rows(spec.policy, spec.dim(), spec.m, rng);
  return draw;
}

namespace {

// (re, im) channel pair; im empty while the pipeline is purely real.
struct Channels {
  std::vector<double> re;
  std::vector<double> im;
};

void apply_diagonal(Channels& v, const Diagonal& d) {
  const std::size_t n = v.re.size();
  if (d.size() != n) throw std::invalid_argument("apply_diagonal: dimension mismatch");
  if (!d.is_complex()) {
    for (std::size_t i = 0; i < n; ++i) v.re[i] *= d.re[i];
    for (std::size_t i = 0; i < v.im.size(); ++i) v.im[i] *= d.re[i];
    return;
  }
  if (v.im.empty()) v.im.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double re = v.re[i] * d.re[i] - v.im[i] * d.im[i];
    const double im = v.re[i] * d.im[i] + v.im[i] * d.re[i];
    v.re[i] = re;
    v.im[i] = im;
  }
}

void apply_s(Channels& v, const StructuredOrthogonal& s) {
  s.apply(v.re);
  if (!v.im.empty()) s.apply(v.im);
}

// Half-row partial sums of the unnormalized final Hadamard block: rows i and
// n/2+i of H share the same half-row pattern, so (p1+p2) and (p1-p2) give the
// two scaled row dot products.
struct RowPartials {
  double re1, re2, im1, im2;
};

RowPartials hadamard_partials(const Channels& u, std::size_t i) {
  const std::size_t half = u.re.size() / 2;
  RowPartials p{0.0, 0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < half; ++j) {
    const double s = (std::popcount(i & j) & 1) ? -1.0 : 1.0;
    p.re1 += s * u.re[j];
    p.re2 += s * u.re[j + half];
  }
  if (!u.im.empty()) {
    for (std::size_t j = 0; j < half; ++j) {
      const double s = (std::popcount(i & j) & 1) ? -1.0 : 1.0;
      p.im1 += s * u.im[j];
      p.im2 += s * u.im[j + half];
    }
  }
  return p;
}

}  // namespace

FeatureMap sd_product_apply(const SdProductSpec& spec,
                            const std::vector<Diagonal>& diagonals,
                            const std::vector<double>& x) {
  if (x.size() != spec.dim())
    throw std::invalid_argument("sd_product_apply: dimension mismatch");
  if (diagonals.size() != spec.k)
    throw std::invalid_argument("sd_product_apply: need k diagonals");
  Channels v{x, {}};
  for (std::size_t b = 0; b < spec.k; ++b) {
    apply_diagonal(v, diagonals[b]);
    apply_s(v, spec.s);
  }
  return FeatureMap{std::move(v.re), std::move(v.im)};
}

FeatureMap embed_with(const SdProductSpec& spec, const SdDraw& draw,
                      const std::vector<double>& x, EmbedPath path) {
  const std::size_t n = spec.dim();
  if (x.size() != n) throw std::invalid_argument("embed: dimension mismatch");
  if (draw.diagonals.size() != spec.k || draw.rows.size() != spec.m)
    throw std::invalid_argument("embed: draw does not match spec");

  Channels v{x, {}};
  for (std::size_t b = 0; b + 1 < spec.k; ++b) {
    apply_diagonal(v, draw.diagonals[b]);
    apply_s(v, spec.s);
  }
  apply_diagonal(v, draw.diagonals[spec.k - 1]);

  FeatureMap out;
  const bool complex = !v.im.empty();
  out.re.resize(spec.m);
  if (complex) out.im.resize(spec.m);

  if (spec.s.kind() == StructuredOrthogonal::Kind::Hadamard && n >= 2) {
    // Features are sqrt(n) * (H v)_r, i.e. unnormalized row dot products.
    // Rows r and n/2+r of H differ only in the sign of the second half-row,
    // so one pair of half-partials serves both.
    const std::size_t half = n / 2;
    std::vector<char> cached(path == EmbedPath::Fast ? half : 0, 0);
    std::vector<RowPartials> cache(path == EmbedPath::Fast ? half : 0);
    for (std::size_t r = 0; r < spec.m; ++r) {
      const std::size_t row = draw.rows[r];
      const std::size_t i = row & (half - 1);
      RowPartials p;
      if (path == EmbedPath::Fast) {
        if (!cached[i]) {
          cache[i] = hadamard_partials(v, i);
          cached[i] = 1;
        }
        p = cache[i];
      } else {
        p = hadamard_partials(v, i);
      }
      const bool top = row >= half;
      out.re[r] = top ? p.re1 - p.re2 : p.re1 + p.re2;
      if (complex) out.im[r] = top ? p.im1 - p.im2 : p.im1 + p.im2;
    }
  } else {
    apply_s(v, spec.s);
    const double scale = std::sqrt(static_cast<double>(n));
    for (std::size_t r = 0; r < spec.m; ++r) {
      out.re[r] = scale * v.re[draw.rows[r]];
      if (complex) out.im[r] = scale * v.im[draw.rows[r]];
    }
  }
  return out;
}

FeatureMap embed(const SdProductSpec& spec, const std::vector<double>& x, Rng& rng,
                 EmbedPath path) {
  const SdDraw draw = realize_sd_draw(spec, rng);
  return embed_with(spec, draw, x, path);
}

double expected_pair_count(std::size_t n, std::size_t m) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("expected_pair_count: n must be even");
  if (m > n) throw std::invalid_argument("expected_pair_count: m > n");
  return static_cast<double>(m) * static_cast<double>(m - 1) /
         (2.0 * static_cast<double>(n - 1));
}

std::size_t measure_pair_count(std::size_t n, std::size_t m, Rng& rng) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("measure_pair_count: n must be even");
  const auto rows = subsample_rows(SubsamplingPolicy::WithoutReplacement, n, m, rng);
  std::vector<char> present(n, 0);
  for (std::size_t r : rows) present[r] = 1;
  std::size_t pairs = 0;
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < half; ++i)
    if (present[i] && present[i + half]) ++pairs;
  return pairs;
}

DenseMatrix sample_gort(std::size_t m_rows, std::size_t n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_gort: n must be >= 1");
  DenseMatrix out(m_rows, n);
  std::size_t filled = 0;
  while (filled < m_rows) {
    const std::size_t r = std::min(n, m_rows - filled);
    DenseMatrix q(r, n);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < n; ++j) q(i, j) = rng.next_gaussian();
    // modified Gram-Schmidt; positive triangular diagonal makes the Haar
    // sample a deterministic function of the Gaussian draw
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t p = 0; p < i; ++p) {
        double c = 0.0;
        for (std::size_t j = 0; j < n; ++j) c += q(i, j) * q(p, j);
        for (std::size_t j = 0; j < n; ++j) q(i, j) -= c * q(p, j);
      }
      double norm2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) norm2 += q(i, j) * q(i, j);
      const double inv = 1.0 / std::sqrt(norm2);
      for (std::size_t j = 0; j < n; ++j) q(i, j) *= inv;
    }
    // fresh independent chi_n scale per row
    for (std::size_t i = 0; i < r; ++i) {
      double s2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double g = rng.next_gaussian();
        s2 += g * g;
      }
      const double scale = std::sqrt(s2);
      for (std::size_t j = 0; j < n; ++j) out(filled + i, j) = scale * q(i, j);
    }
    filled += r;
  }
  return out;
}

}  // namespace rom
