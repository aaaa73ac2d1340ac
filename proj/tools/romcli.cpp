// romcli: experiment harness for the random orthogonal embedding library.
//
// Subcommands: mse-curve, gram-error, angular, pair-count, markov, verify.
// Exit status: 0 success, 1 verification failure, 2 usage/config error,
// 3 I/O error.

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "rom/estimators.hpp"
#include "rom/markov.hpp"
#include "rom/oracle.hpp"
#include "rom/theory.hpp"
#include "rom/transforms.hpp"

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// output

struct Row {
  std::string estimator;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t k = 0;
  std::string metric;
  double value = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class Writer {
 public:
  Writer(const std::string& path, const std::string& format) : format_(format) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw IoError("cannot open output file: " + path);
      out_ = &file_;
    } else {
      out_ = &std::cout;
    }
    if (format_ == "csv") *out_ << "estimator,n,m,k,metric,value,trials,seed\n";
  }

  void write(const Row& r) {
    if (format_ == "csv") {
      *out_ << r.estimator << ',' << r.n << ',' << r.m << ',' << r.k << ','
            << r.metric << ',' << format_double(r.value) << ',' << r.trials << ','
            << r.seed << '\n';
    } else {
      nlohmann::ordered_json j;
      j["estimator"] = r.estimator;
      j["n"] = r.n;
      j["m"] = r.m;
      j["k"] = r.k;
      j["metric"] = r.metric;
      j["value"] = r.value;
      j["trials"] = r.trials;
      j["seed"] = r.seed;
      *out_ << j.dump() << '\n';
    }
    if (!*out_) throw IoError("write failed");
  }

 private:
  std::string format_;
  std::ofstream file_;
  std::ostream* out_ = nullptr;
};

// ---------------------------------------------------------------------------
// data

std::vector<std::vector<double>> load_dataset(const std::string& path, bool drop_label) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        std::size_t pos = 0;
        vals.push_back(std::stod(field, &pos));
        while (pos < field.size() && std::isspace(static_cast<unsigned char>(field[pos])))
          ++pos;
        if (pos != field.size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw ConfigError("dataset " + path + " line " + std::to_string(lineno) +
                          ": non-numeric field '" + field + "'");
      }
    }
    if (drop_label) {
      if (vals.empty())
        throw ConfigError("dataset " + path + " line " + std::to_string(lineno) +
                          ": no fields left after dropping label");
      vals.pop_back();
    }
    if (width == 0) width = vals.size();
    if (vals.size() != width)
      throw ConfigError("dataset " + path + " line " + std::to_string(lineno) +
                        ": ragged row (" + std::to_string(vals.size()) + " fields, expected " +
                        std::to_string(width) + ")");
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw ConfigError("dataset " + path + ": empty file");
  const std::size_t padded = rom::next_pow2(width);
  for (auto& r : rows) r.resize(padded, 0.0);
  return rows;
}

std::vector<std::vector<double>> subsample(std::vector<std::vector<double>> rows,
                                           std::size_t count, std::uint64_t seed) {
  if (count == 0 || count >= rows.size()) return rows;
  rom::Rng rng = rom::Rng(seed).split(0x5085e7);
  std::vector<std::size_t> idx(rows.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (std::size_t i = 0; i < count; ++i)
    std::swap(idx[i], idx[i + rng.next_index(idx.size() - i)]);
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  std::vector<std::vector<double>> out;
  out.reserve(count);
  for (std::size_t i : idx) out.push_back(std::move(rows[i]));
  return out;
}

std::vector<std::vector<double>> synthesize(const std::string& recipe, std::size_t n,
                                            std::size_t count, std::uint64_t seed) {
  if (!rom::is_pow2(n)) throw ConfigError("synthetic recipe: n must be a power of two");
  rom::Rng base = rom::Rng(seed).split(0xda7a);
  std::vector<std::vector<double>> out(count);
  for (std::size_t p = 0; p < count; ++p) {
    rom::Rng rng = base.split(p);
    std::vector<double> v(n);
    for (double& x : v) x = rng.next_gaussian();
    if (recipe == "spherical") {
      double norm = 0.0;
      for (double x : v) norm += x * x;
      norm = std::sqrt(norm);
      for (double& x : v) x /= norm;
    } else if (recipe == "sparse") {
      // keep roughly 10% of coordinates; never zero out everything
      bool any = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (rng.next_double() < 0.1) any = true;
        else v[i] = 0.0;
      }
      if (!any) v[rng.next_index(n)] = rng.next_gaussian();
    } else if (recipe != "gaussian") {
      throw ConfigError("unknown recipe: " + recipe);
    }
    out[p] = std::move(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// shared experiment options

struct CommonOpts {
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "csv";
  std::size_t threads = 0;
  std::string dataset;
  std::size_t subset = 0;
  bool drop_label = false;
};

void add_common(CLI::App* sub, CommonOpts& c, bool seed_required = true) {
  auto* seed = sub->add_option("--seed", c.seed, "RNG seed");
  if (seed_required) seed->required();
  sub->add_option("--out", c.out, "output path (default stdout)");
  sub->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"csv", "jsonl"}))
      ->capture_default_str();
  sub->add_option("--threads", c.threads, "worker thread count");
  sub->add_option("--dataset", c.dataset, "CSV dataset path");
  sub->add_option("--subset", c.subset, "seeded subsample size for the dataset");
  sub->add_flag("--drop-label", c.drop_label, "drop the trailing label column");
  sub->fallthrough();  // lets the parent-level --config appear after the subcommand
}

void apply_threads(const CommonOpts& c) {
#ifdef _OPENMP
  if (c.threads > 0) omp_set_num_threads(static_cast<int>(c.threads));
#else
  (void)c;
#endif
}

std::vector<std::vector<double>> points_for(const CommonOpts& c, const std::string& recipe,
                                            std::size_t n, std::size_t count) {
  std::vector<std::vector<double>> pts;
  if (!c.dataset.empty()) {
    pts = subsample(load_dataset(c.dataset, c.drop_label), c.subset, c.seed);
    if (count > 0 && pts.size() < count)
      throw ConfigError("dataset has " + std::to_string(pts.size()) +
                        " points, need " + std::to_string(count));
    if (count > 0) pts.resize(count);
  } else {
    pts = synthesize(recipe, n, count, c.seed);
  }
  return pts;
}

rom::SdProductSpec make_sd(std::size_t n, std::size_t k, std::size_t m,
                           const std::string& kind) {
  const std::size_t log2n = static_cast<std::size_t>(std::countr_zero(n));
  auto s = rom::StructuredOrthogonal::hadamard(log2n);
  using P = rom::SubsamplingPolicy;
  if (kind == "sd-rademacher")
    return rom::SdProductSpec::rademacher(s, k, P::WithoutReplacement, m);
  if (kind == "sd-hybrid")
    return rom::SdProductSpec::hybrid(s, k, rom::DiagonalLaw::FourthRoots,
                                      P::WithoutReplacement, m);
  if (kind == "sd-uniform")
    return rom::SdProductSpec::uniform(s, k, P::WithoutReplacement, m);
  throw ConfigError("unknown estimator: " + kind);
}

void validate_grid(std::size_t n, const std::vector<std::size_t>& m_grid) {
  if (!rom::is_pow2(n)) throw ConfigError("n must be a power of two");
  for (std::size_t m : m_grid)
    if (m < 1 || m > n) throw ConfigError("m-grid entries must lie in [1, n]");
}

// ---------------------------------------------------------------------------
// mse-curve

struct MseCurveOpts {
  CommonOpts common;
  std::size_t n = 16;
  std::vector<std::size_t> m_grid = {4, 8, 12, 16};
  std::vector<std::size_t> k_grid = {3};
  std::vector<std::string> estimators = {"base", "ort", "sd-rademacher", "sd-hybrid",
                                         "sd-uniform"};
  std::size_t trials = 10000;
  std::size_t pairs = 5;
  std::string recipe = "gaussian";
};

void run_mse_curve(const MseCurveOpts& o) {
  apply_threads(o.common);
  validate_grid(o.n, o.m_grid);
  if (o.trials < 1) throw ConfigError("trials must be >= 1");
  const auto pts = points_for(o.common, o.recipe, o.n, 2 * o.pairs);
  Writer w(o.common.out, o.common.format);

  auto estimators = o.estimators;
  std::sort(estimators.begin(), estimators.end());
  for (const auto& est : estimators) {
    const bool sd = est.starts_with("sd-");
    const std::vector<std::size_t> ks = sd ? o.k_grid : std::vector<std::size_t>{0};
    for (std::size_t m : o.m_grid) {
      for (std::size_t k : ks) {
        double mse_sum = 0.0, se_sq = 0.0, mean_sum = 0.0, theory_sum = 0.0;
        bool have_theory = true;
        for (std::size_t p = 0; p < o.pairs; ++p) {
          const auto& x = pts[2 * p];
          const auto& y = pts[2 * p + 1];
          rom::DotEstimatorSpec spec = [&] {
            if (est == "base") return rom::DotEstimatorSpec::base(m);
            if (est == "ort") return rom::DotEstimatorSpec::ort(m);
            auto sp = make_sd(o.n, k, m, est);
            if (est == "sd-rademacher") return rom::DotEstimatorSpec::sd_rademacher(sp);
            if (est == "sd-hybrid") return rom::DotEstimatorSpec::sd_hybrid(sp);
            return rom::DotEstimatorSpec::sd_uniform(sp);
          }();
          const std::uint64_t pair_seed =
              rom::Rng(o.common.seed).split(1000 + p).next_u64();
          const auto st = rom::monte_carlo_mse_dot(spec, x, y, o.trials, pair_seed);
          mse_sum += st.mse;
          se_sq += st.se_mse * st.se_mse;
          mean_sum += st.mean;
          const auto in = rom::MseFormulaInputs::from(x, y, m);
          if (est == "base") theory_sum += rom::mse_base_dot(in);
          else if (est == "ort" && o.n >= 4) theory_sum += rom::mse_ort_dot(in);
          else if (est == "sd-rademacher") theory_sum += rom::mse_sd_rademacher(in, k);
          else if (est == "sd-hybrid") theory_sum += rom::mse_sd_hybrid(in, k);
          else if (est == "sd-uniform") theory_sum += rom::mse_sd_uniform(in, k);
          else have_theory = false;
        }
        const double np = static_cast<double>(o.pairs);
        w.write({est, o.n, m, k, "mse", mse_sum / np, o.trials, o.common.seed});
        w.write({est, o.n, m, k, "se", std::sqrt(se_sq) / np, o.trials, o.common.seed});
        w.write({est, o.n, m, k, "mean", mean_sum / np, o.trials, o.common.seed});
        if (have_theory)
          w.write({est, o.n, m, k, "theory_mse", theory_sum / np, o.trials, o.common.seed});
      }
    }
  }
}

// ---------------------------------------------------------------------------
// gram-error

struct GramErrorOpts {
  CommonOpts common;
  std::size_t n = 16;
  std::size_t points = 64;
  std::vector<std::size_t> m_grid = {4, 8, 12};
  std::size_t k = 3;
  std::size_t reps = 1000;
  std::vector<std::string> estimators = {"base", "sd-rademacher", "sd-hybrid"};
  std::string kernel = "dot";
  std::string recipe = "gaussian";
};

void run_gram_error(const GramErrorOpts& o) {
  apply_threads(o.common);
  validate_grid(o.n, o.m_grid);
  if (o.reps < 1) throw ConfigError("reps must be >= 1");
  const auto pts = points_for(o.common, o.recipe, o.n, o.points);
  const std::size_t n = pts.front().size();
  const rom::KernelKind kernel =
      o.kernel == "dot" ? rom::KernelKind::Dot : rom::KernelKind::Angular;
  const rom::DenseMatrix exact = rom::gram_matrix(pts, kernel);
  Writer w(o.common.out, o.common.format);

  auto estimators = o.estimators;
  std::sort(estimators.begin(), estimators.end());
  for (const auto& est : estimators) {
    for (std::size_t m : o.m_grid) {
      const std::size_t k = est.starts_with("sd-") ? o.k : 0;
      std::vector<double> errs(o.reps);
      const rom::Rng base = rom::Rng(o.common.seed).split(2000);
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(o.reps); ++r) {
        rom::Rng rng = base.split(static_cast<std::uint64_t>(r));
        rom::DenseMatrix approx = [&] {
          if (kernel == rom::KernelKind::Dot) {
            rom::DotEstimatorSpec spec = [&] {
              if (est == "base") return rom::DotEstimatorSpec::base(m);
              if (est == "ort") return rom::DotEstimatorSpec::ort(m);
              auto sp = make_sd(n, k, m, est);
              if (est == "sd-rademacher") return rom::DotEstimatorSpec::sd_rademacher(sp);
              if (est == "sd-hybrid") return rom::DotEstimatorSpec::sd_hybrid(sp);
              return rom::DotEstimatorSpec::sd_uniform(sp);
            }();
            return rom::approx_gram_dot(pts, spec, rng);
          }
          rom::AngularEstimatorSpec spec = [&] {
            if (est == "base") return rom::AngularEstimatorSpec::base(m);
            if (est == "ort") return rom::AngularEstimatorSpec::ort(m);
            const std::size_t log2n = static_cast<std::size_t>(std::countr_zero(n));
            return rom::AngularEstimatorSpec::sd_rademacher(
                rom::StructuredOrthogonal::hadamard(log2n), k,
                rom::SubsamplingPolicy::WithoutReplacement, m);
          }();
          return rom::approx_gram_angular(pts, spec, rng);
        }();
        errs[r] = rom::gram_error(exact, approx);
      }
      double sum = 0.0, sum_sq = 0.0;
      for (double e : errs) {
        sum += e;
        sum_sq += e * e;
      }
      const double nr = static_cast<double>(o.reps);
      const double mean = sum / nr;
      const double var = std::max(0.0, sum_sq / nr - mean * mean);
      w.write({est, n, m, k, "gram_frobenius_error", mean, o.reps, o.common.seed});
      w.write({est, n, m, k, "se", std::sqrt(var / nr), o.reps, o.common.seed});
    }
  }
}

// ---------------------------------------------------------------------------
// angular

struct AngularOpts {
  CommonOpts common;
  std::size_t n = 8;
  std::vector<double> theta_grid = {std::numbers::pi / 6, std::numbers::pi / 3,
                                    std::numbers::pi / 2};
  std::vector<std::size_t> m_grid = {4, 16};
  std::vector<std::string> estimators = {"base", "ort", "sd-rademacher"};
  std::size_t k = 3;
  std::size_t trials = 10000;
};

void run_angular(const AngularOpts& o) {
  apply_threads(o.common);
  if (!rom::is_pow2(o.n)) throw ConfigError("n must be a power of two");
  if (o.n < 2) throw ConfigError("n must be >= 2");
  if (o.trials < 1) throw ConfigError("trials must be >= 1");
  Writer w(o.common.out, o.common.format);

  auto estimators = o.estimators;
  std::sort(estimators.begin(), estimators.end());
  for (const auto& est : estimators) {
    for (std::size_t m : o.m_grid) {
      for (double theta : o.theta_grid) {
        // planar pair at the requested angle
        std::vector<double> x(o.n, 0.0), y(o.n, 0.0);
        x[0] = 1.0;
        y[0] = std::cos(theta);
        y[1] = std::sin(theta);
        rom::AngularEstimatorSpec spec = [&] {
          if (est == "base") return rom::AngularEstimatorSpec::base(m);
          if (est == "ort") return rom::AngularEstimatorSpec::ort(m);
          if (est == "sd-rademacher") {
            const std::size_t log2n = static_cast<std::size_t>(std::countr_zero(o.n));
            return rom::AngularEstimatorSpec::sd_rademacher(
                rom::StructuredOrthogonal::hadamard(log2n), o.k,
                rom::SubsamplingPolicy::WithoutReplacement, std::min(m, o.n));
          }
          throw ConfigError("unknown estimator: " + est);
        }();
        if (est == "sd-rademacher" && m > o.n) spec.m = m;  // concatenated blocks
        const std::uint64_t run_seed =
            rom::Rng(o.common.seed).split(3000 + m).next_u64() ^
            static_cast<std::uint64_t>(theta * 1e9);
        const auto st = rom::monte_carlo_mse_angular(spec, x, y, o.trials, run_seed);
        const std::size_t k = est == "sd-rademacher" ? o.k : 0;
        w.write({est, o.n, m, k, "mse", st.mse, o.trials, o.common.seed});
        w.write({est, o.n, m, k, "se", st.se_mse, o.trials, o.common.seed});
        w.write({est, o.n, m, k, "mean", st.mean, o.trials, o.common.seed});
        if (est == "base")
          w.write({est, o.n, m, k, "theory_mse", rom::mse_angular_base(theta, m),
                   o.trials, o.common.seed});
      }
    }
  }
}

// ---------------------------------------------------------------------------
// pair-count

struct PairCountOpts {
  CommonOpts common;
  std::size_t n = 16;
  std::vector<std::size_t> m_grid = {2, 4, 8};
  std::size_t draws = 100000;
};

void run_pair_count(const PairCountOpts& o) {
  apply_threads(o.common);
  validate_grid(o.n, o.m_grid);
  if (o.draws < 1) throw ConfigError("draws must be >= 1");
  Writer w(o.common.out, o.common.format);
  for (std::size_t m : o.m_grid) {
    const rom::Rng base = rom::Rng(o.common.seed).split(4000 + m);
    std::vector<double> counts(o.draws);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(o.draws); ++t) {
      rom::Rng rng = base.split(static_cast<std::uint64_t>(t));
      counts[t] = static_cast<double>(rom::measure_pair_count(o.n, m, rng));
    }
    double sum = 0.0, sum_sq = 0.0;
    for (double c : counts) {
      sum += c;
      sum_sq += c * c;
    }
    const double nd = static_cast<double>(o.draws);
    const double mean = sum / nd;
    const double var = std::max(0.0, sum_sq / nd - mean * mean);
    w.write({"pair-count", o.n, m, 0, "mean", mean, o.draws, o.common.seed});
    w.write({"pair-count", o.n, m, 0, "se", std::sqrt(var / nd), o.draws, o.common.seed});
    w.write({"pair-count", o.n, m, 0, "expected", rom::expected_pair_count(o.n, m),
             o.draws, o.common.seed});
  }
}

// ---------------------------------------------------------------------------
// markov

struct MarkovOpts {
  CommonOpts common;
  std::size_t n = 2;
};

void run_markov(const MarkovOpts& o) {
  const rom::ChainReport rep = rom::analyze(o.n);
  Writer w(o.common.out, o.common.format);
  const std::uint64_t seed = o.common.seed;
  w.write({"markov", o.n, 0, 0, "state_count", static_cast<double>(rep.state_count), 0, seed});
  w.write({"markov", o.n, 0, 0, "period", static_cast<double>(rep.period), 0, seed});
  w.write({"markov", o.n, 0, 0, "cayley_diameter", static_cast<double>(rep.cayley_diameter),
           0, seed});
  w.write({"markov", o.n, 0, 0, "mixing_step", static_cast<double>(rep.mixing_step), 0, seed});
  for (std::size_t k = 0; k < rep.per_step_supports.size(); ++k)
    w.write({"markov", o.n, 0, k, "support", static_cast<double>(rep.per_step_supports[k]),
             0, seed});
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOpts {
  CommonOpts common;
  double tamper_tolerance = 0.0;  // test hook: override the relative tolerance
};

void run_verify(const VerifyOpts& o, int& exit_code) {
  apply_threads(o.common);
  const double tol = o.tamper_tolerance > 0.0 ? o.tamper_tolerance : 1e-10;
  Writer w(o.common.out, o.common.format);
  bool all_ok = true;
  auto report = [&](const std::string& check, bool ok) {
    w.write({check, 0, 0, 0, "pass", ok ? 1.0 : 0.0, 0, o.common.seed});
    if (!ok) all_ok = false;
  };

  rom::Rng rng = rom::Rng(o.common.seed).split(5000);
  auto s4 = rom::StructuredOrthogonal::hadamard(2);
  using P = rom::SubsamplingPolicy;

  // brute-force enumeration agrees with the closed form at n = 4
  {
    bool ok = true;
    for (int p = 0; p < 3 && ok; ++p) {
      std::vector<double> x(4), y(4);
      for (auto* v : {&x, &y})
        for (double& e : *v)
          e = static_cast<double>(static_cast<long long>(rng.next_index(9)) - 4);
      if (std::inner_product(y.begin(), y.end(), y.begin(), 0.0) == 0.0) y[0] = 1.0;
      if (std::inner_product(x.begin(), x.end(), x.begin(), 0.0) == 0.0) x[0] = 1.0;
      for (std::size_t m = 1; m <= 4 && ok; ++m)
        for (std::size_t k = 1; k <= 3 && ok; ++k) {
          const auto in = rom::MseFormulaInputs::from(x, y, m);
          const double f = rom::mse_sd_rademacher(in, k);
          const double b = rom::brute_force_mse_dot(
              rom::SdProductSpec::rademacher(s4, k, P::WithoutReplacement, m), x, y);
          ok = std::abs(b - f) <= tol * std::max(1.0, std::abs(f));
        }
    }
    report("brute_force_matches_closed_form", ok);
  }

  // a complex final diagonal halves the MSE
  {
    std::vector<double> x = {1, -2, 0, 3}, y = {2, 1, -1, 1};
    bool ok = true;
    for (std::size_t m = 1; m <= 4 && ok; ++m)
      for (std::size_t k = 1; k <= 2 && ok; ++k) {
        const auto in = rom::MseFormulaInputs::from(x, y, m);
        const double b = rom::brute_force_mse_dot(
            rom::SdProductSpec::hybrid(s4, k, rom::DiagonalLaw::FourthRoots,
                                       P::WithoutReplacement, m),
            x, y);
        const double f = rom::mse_sd_rademacher(in, k) / 2.0;
        ok = std::abs(b - f) <= tol * std::max(1.0, std::abs(f));
      }
    report("complex_final_block_halves_mse", ok);
  }

  // replacement sampling inflates the MSE by (n-1)/(n-m)
  {
    std::vector<double> x = {1, 2, -1, 0}, y = {0, 1, 1, -2};
    bool ok = true;
    for (std::size_t m = 1; m <= 3 && ok; ++m) {
      const double without = rom::brute_force_mse_dot(
          rom::SdProductSpec::rademacher(s4, 2, P::WithoutReplacement, m), x, y);
      const double with_r = rom::brute_force_mse_dot(
          rom::SdProductSpec::rademacher(s4, 2, P::WithReplacement, m), x, y);
      const double ratio = with_r / without;
      const double expected = 3.0 / (4.0 - static_cast<double>(m));
      ok = std::abs(ratio - expected) <= tol * expected;
    }
    report("with_replacement_ratio", ok);
  }

  // exact chain analysis
  {
    const rom::ChainReport rep = rom::analyze(2);
    report("markov_chain_n2", rep.state_count == 16 && rep.period == 2 &&
                                  rep.cayley_diameter == 3 && rep.mixing_step == 3);
  }

  // fast transforms agree with dense references
  {
    bool ok = true;
    for (std::size_t log2n = 1; log2n <= 6 && ok; ++log2n) {
      const std::size_t n = std::size_t{1} << log2n;
      for (auto s : {rom::StructuredOrthogonal::hadamard(log2n),
                     rom::StructuredOrthogonal::walsh(log2n)}) {
        const rom::DenseMatrix d = rom::dense_reference(s);
        std::vector<double> v(n);
        for (double& e : v) e = rng.next_gaussian();
        std::vector<double> fast = v;
        s.apply(fast);
        const std::vector<double> slow = rom::matvec(d, v);
        for (std::size_t i = 0; i < n; ++i)
          ok = ok && std::abs(fast[i] - slow[i]) <= tol;
      }
    }
    report("fast_transform_matches_dense", ok);
  }

  // sampled paired-row count tracks its expectation
  {
    const std::size_t draws = 20000;
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t t = 0; t < draws; ++t) {
      rom::Rng rt = rng.split(t);
      const double c = static_cast<double>(rom::measure_pair_count(16, 8, rt));
      sum += c;
      sum_sq += c * c;
    }
    const double mean = sum / draws;
    const double se =
        std::sqrt(std::max(0.0, sum_sq / draws - mean * mean) / draws);
    report("pair_count_expectation",
           std::abs(mean - rom::expected_pair_count(16, 8)) <= 4.0 * se);
  }

  if (!all_ok) exit_code = 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random orthogonal embedding experiments"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "key=value config file with a [subcommand] section; flags win");

  MseCurveOpts mse;
  auto* mse_cmd = app.add_subcommand("mse-curve", "Monte Carlo MSE vs theory sweep");
  add_common(mse_cmd, mse.common);
  mse_cmd->add_option("--n", mse.n, "ambient dimension (power of two)");
  mse_cmd->add_option("--m-grid", mse.m_grid, "projected dimensions");
  mse_cmd->add_option("--k-grid", mse.k_grid, "SD block counts");
  mse_cmd->add_option("--estimators", mse.estimators, "estimator list");
  mse_cmd->add_option("--trials", mse.trials, "Monte Carlo trials per pair");
  mse_cmd->add_option("--pairs", mse.pairs, "number of vector pairs");
  mse_cmd->add_option("--recipe", mse.recipe, "synthetic data recipe")
      ->check(CLI::IsMember({"gaussian", "spherical", "sparse"}));

  GramErrorOpts gram;
  auto* gram_cmd = app.add_subcommand("gram-error", "Gram matrix Frobenius error sweep");
  add_common(gram_cmd, gram.common);
  gram_cmd->add_option("--n", gram.n, "ambient dimension (power of two)");
  gram_cmd->add_option("--points", gram.points, "number of data points");
  gram_cmd->add_option("--m-grid", gram.m_grid, "projected dimensions");
  gram_cmd->add_option("--k", gram.k, "SD block count");
  gram_cmd->add_option("--reps", gram.reps, "repetitions per configuration");
  gram_cmd->add_option("--estimators", gram.estimators, "estimator list");
  gram_cmd->add_option("--kernel", gram.kernel, "kernel")
      ->check(CLI::IsMember({"dot", "angular"}));
  gram_cmd->add_option("--recipe", gram.recipe, "synthetic data recipe")
      ->check(CLI::IsMember({"gaussian", "spherical", "sparse"}));

  AngularOpts ang;
  auto* ang_cmd = app.add_subcommand("angular", "angular kernel MSE sweep");
  add_common(ang_cmd, ang.common);
  ang_cmd->add_option("--n", ang.n, "ambient dimension (power of two)");
  ang_cmd->add_option("--theta-grid", ang.theta_grid, "angles in radians");
  ang_cmd->add_option("--m-grid", ang.m_grid, "feature counts");
  ang_cmd->add_option("--estimators", ang.estimators, "estimator list");
  ang_cmd->add_option("--k", ang.k, "SD block count");
  ang_cmd->add_option("--trials", ang.trials, "Monte Carlo trials");

  PairCountOpts pc;
  auto* pc_cmd = app.add_subcommand("pair-count", "paired-row count statistics");
  add_common(pc_cmd, pc.common);
  pc_cmd->add_option("--n", pc.n, "ambient dimension (power of two)");
  pc_cmd->add_option("--m-grid", pc.m_grid, "subsample sizes");
  pc_cmd->add_option("--draws", pc.draws, "number of draws");

  MarkovOpts mk;
  auto* mk_cmd = app.add_subcommand("markov", "exact walk analysis");
  add_common(mk_cmd, mk.common, /*seed_required=*/false);
  mk_cmd->add_option("--n", mk.n, "matrix dimension (2 or 4)");

  VerifyOpts vf;
  auto* vf_cmd = app.add_subcommand("verify", "run the built-in verification suite");
  add_common(vf_cmd, vf.common);
  vf_cmd->add_option("--tamper-tolerance", vf.tamper_tolerance,
                     "test hook: replace the relative tolerance")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  int exit_code = 0;
  try {
    if (mse_cmd->parsed()) run_mse_curve(mse);
    else if (gram_cmd->parsed()) run_gram_error(gram);
    else if (ang_cmd->parsed()) run_angular(ang);
    else if (pc_cmd->parsed()) run_pair_count(pc);
    else if (mk_cmd->parsed()) run_markov(mk);
    else if (vf_cmd->parsed()) run_verify(vf, exit_code);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return exit_code;
}
