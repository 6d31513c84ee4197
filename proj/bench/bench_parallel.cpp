// Timing comparison between the serial reference path and the OpenMP path of
// each data-parallel kernel. Build and run:
//   cmake --build build --target nlreg_bench && ./build/bench/nlreg_bench

#include <chrono>
#include <cstdio>

#include "nlreg/lemmas.hpp"
#include "nlreg/probe.hpp"
#include "nlreg/solver.hpp"

using namespace nlreg;

namespace {

const QuadratureConfig kQuad{1e-10, 1e-8, {}, 4000};

template <class F>
double time_best_of(int reps, F&& body) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    best = std::min(best,
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-28s serial %8.3f ms   omp %8.3f ms   speedup %.2fx\n", name, 1e3 * serial,
              1e3 * parallel, serial / parallel);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", thread_count());

  {
    const auto k = make_kernel(2, make_power_scaling(0.8));
    const auto grid = make_grid({{-0.5, -0.5}, {0.5, 0.5}, 2}, 1.0 / 24.0);
    const auto g = [](const Point& p) { return std::sin(p[0] + p[1]); };
    const double ts = time_best_of(2, [&] { build_stencil(k, grid, g, kQuad, Exec::serial); });
    const double tp = time_best_of(2, [&] { build_stencil(k, grid, g, kQuad, Exec::parallel); });
    report("stencil assembly (2d)", ts, tp);
  }

  {
    const auto k = make_kernel(2, make_power_scaling(0.8));
    const auto cls = make_class(1.0, 2.0, true, k);
    const auto bump = BumpFunction{{0.0, 0.0}, 0.4}.as_smooth(2);
    Box box{{-0.5, -0.5}, {0.5, 0.5}, 2};
    const auto u = sample_to_grid(bump, box, 1.0 / 24.0);
    const double ts = time_best_of(2, [&] { residual(cls, u, kQuad, Exec::serial); });
    const double tp = time_best_of(2, [&] { residual(cls, u, kQuad, Exec::parallel); });
    report("extremal residual (2d)", ts, tp);
  }

  {
    const auto k = make_kernel(1, make_power_scaling(0.5));
    const auto cls = make_class(1.0, 2.0, true, k);
    const auto samples = random_bump_samples(1, k.r0(), 64, 7);
    const double ts =
        time_best_of(2, [&] { verify_bump_bound(cls, samples, kQuad, Exec::serial); });
    const double tp =
        time_best_of(2, [&] { verify_bump_bound(cls, samples, kQuad, Exec::parallel); });
    report("bump-bound sweep", ts, tp);
  }

  {
    SmoothFunction f;
    f.value = [](const Point& p) { return std::sin(7.0 * p[0]); };
    Box box{{-1.0, 0.0}, {1.0, 0.0}, 1};
    const auto u = sample_to_grid(f, box, 1.0 / 2048.0);
    const double ts = time_best_of(
        3, [&] { holder_seminorm_report(u, {0.0, 0.0}, 1.5, 0.5, 1.0, 2000000, Exec::serial); });
    const double tp = time_best_of(
        3, [&] { holder_seminorm_report(u, {0.0, 0.0}, 1.5, 0.5, 1.0, 2000000, Exec::parallel); });
    report("seminorm pair scan", ts, tp);
  }

  return 0;
}
