// Microbenchmark: OpenMP-parallel kernels vs the serial reference paths.
//
//   transform  : parallel fwht vs fwht_serial
//   embed      : paired-row reuse vs per-row naive evaluation
//   monte-carlo: parallel trial loop vs a single worker

#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rom/estimators.hpp"
#include "rom/oracle.hpp"
#include "rom/transforms.hpp"

using namespace rom;

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e30;
  for (int r = 0; r < reps; ++r) {
    const double t0 = now_seconds();
    f();
    best = std::min(best, now_seconds() - t0);
  }
  return best;
}

void bench_fwht() {
  std::printf("%-10s %10s %14s %14s %8s\n", "kernel", "n", "parallel_s", "serial_s",
              "speedup");
  Rng rng(1);
  for (int log2n : {10, 13, 16, 20}) {
    const std::size_t n = std::size_t{1} << log2n;
    std::vector<double> v(n);
    for (double& x : v) x = rng.next_gaussian();
    auto w = v;
    const double tp = best_of(10, [&] { fwht(w); });
    const double ts = best_of(10, [&] { fwht_serial(w); });
    std::printf("%-10s %10zu %14.6f %14.6f %8.2f\n", "fwht", n, tp, ts, ts / tp);
  }
}

void bench_embed() {
  std::printf("%-10s %10s %14s %14s %8s\n", "kernel", "n", "fast_s", "naive_s",
              "speedup");
  Rng rng(2);
  for (int log2n : {6, 10, 13}) {
    const std::size_t n = std::size_t{1} << log2n;
    const auto spec = SdProductSpec::rademacher(
        StructuredOrthogonal::hadamard(log2n), 3,
        SubsamplingPolicy::WithoutReplacement, n / 2);
    std::vector<double> x(n);
    for (double& e : x) e = rng.next_gaussian();
    const SdDraw draw = realize_sd_draw(spec, rng);
    const double tf = best_of(10, [&] { (void)embed_with(spec, draw, x, EmbedPath::Fast); });
    const double tn =
        best_of(10, [&] { (void)embed_with(spec, draw, x, EmbedPath::Naive); });
    std::printf("%-10s %10zu %14.6f %14.6f %8.2f\n", "embed", n, tf, tn, tn / tf);
  }
}

void bench_monte_carlo() {
  std::printf("%-10s %10s %14s %14s %8s\n", "kernel", "trials", "parallel_s",
              "one_thread_s", "speedup");
  Rng rng(3);
  std::vector<double> x(64), y(64);
  for (double& e : x) e = rng.next_gaussian();
  for (double& e : y) e = rng.next_gaussian();
  const auto spec = DotEstimatorSpec::sd_rademacher(SdProductSpec::rademacher(
      StructuredOrthogonal::hadamard(6), 3, SubsamplingPolicy::WithoutReplacement, 32));
  const std::size_t trials = 100000;
  const double tp =
      best_of(3, [&] { (void)monte_carlo_mse_dot(spec, x, y, trials, 7); });
#ifdef _OPENMP
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
#endif
  const double t1 =
      best_of(3, [&] { (void)monte_carlo_mse_dot(spec, x, y, trials, 7); });
#ifdef _OPENMP
  omp_set_num_threads(saved);
#endif
  std::printf("%-10s %10zu %14.6f %14.6f %8.2f\n", "mc-dot", trials, tp, t1, t1 / tp);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string which = argc > 1 ? argv[1] : "all";
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (no OpenMP)\n");
#endif
  if (which == "all" || which == "fwht") bench_fwht();
  if (which == "all" || which == "embed") bench_embed();
  if (which == "all" || which == "mc") bench_monte_carlo();
  return 0;
}
