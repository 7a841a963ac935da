// Timing comparison of the OpenMP rhs kernels against the serial reference.

#include <chrono>
#include <cstdio>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lubrisurf/discretize.hpp"

using namespace lubrisurf;

namespace {

State random_state(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto u = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };
  State s;
  s.h.resize(n);
  s.m.resize(n);
  s.gamma.resize(n);
  for (int i = 0; i < n; ++i) {
    s.h[i] = 0.5 + u();
    s.m[i] = 0.01 + 0.05 * u();
    s.gamma[i] = 0.01 + 0.05 * u();
  }
  return s;
}

template <typename F>
double time_best_of(F&& f, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main() {
  Params p;
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP\n");
#endif
  std::printf("%10s %14s %14s %8s %10s\n", "n_cells", "serial [s]", "parallel [s]",
              "speedup", "max|diff|");

  for (int n : {1 << 12, 1 << 15, 1 << 18, 1 << 21}) {
    const Grid g(n, 1.0);
    const State s = random_state(n, 42);
    RhsArrays a, b;
    const double ts = time_best_of([&] { a = rhs_serial(s, g, p); }, 5);
    const double tp = time_best_of([&] { b = rhs(s, g, p); }, 5);
    double diff = 0.0;
    for (int i = 0; i < n; ++i) {
      diff = std::max(diff, std::abs(a.dh[i] - b.dh[i]));
      diff = std::max(diff, std::abs(a.dm[i] - b.dm[i]));
      diff = std::max(diff, std::abs(a.dgamma[i] - b.dgamma[i]));
    }
    std::printf("%10d %14.6f %14.6f %8.2f %10.2e\n", n, ts, tp, ts / tp, diff);
  }
  return 0;
}
