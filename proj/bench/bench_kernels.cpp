// Serial reference kernels against their OpenMP counterparts.
//
//   bench_kernels [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#ifdef TROPIC_HAVE_OPENMP
#include <omp.h>
#endif

#include "tropic/arrangement.hpp"
#include "tropic/minkowski.hpp"

using namespace tropic;

namespace {

double best_of(int repeats, const std::function<void()>& f) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto start = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
  }
  return best;
}

void row(const std::string& kernel, const std::string& instance, double serial, double parallel, bool same) {
  std::printf("%-10s %-26s %12.1f %12.1f %8.2fx  %s\n", kernel.c_str(), instance.c_str(), serial, parallel,
              serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 1;
  int threads = 1;
#ifdef TROPIC_HAVE_OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("threads: %d, best of %d runs, times in ms\n", threads, repeats);
  std::printf("%-10s %-26s %12s %12s %9s\n", "kernel", "instance", "serial", "parallel", "speedup");

  bool all_same = true;
  struct Shape {
    std::size_t n;
    std::vector<std::size_t> ranks;
    const char* name;
  };
  const std::vector<Shape> shapes{{2, {3, 3, 3}, "n=2 ranks 3,3,3"},
                                  {2, {4, 4, 4, 4}, "n=2 ranks 4,4,4,4"},
                                  {3, {3, 3, 3, 3}, "n=3 ranks 3,3,3,3"},
                                  {3, {4, 4, 4, 4}, "n=3 ranks 4,4,4,4"}};

  for (const auto& s : shapes) {
    const auto layer = network::construct_shallow_optimal(s.n, s.ranks, 1);
    std::vector<arrangement::Cell> a, b;
    const double ts = best_of(repeats, [&] { a = arrangement::enumerate_cells_serial(layer); });
    const double tp = best_of(repeats, [&] { b = arrangement::enumerate_cells(layer); });
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) same = a[i].signature == b[i].signature && a[i].witness == b[i].witness;
    all_same = all_same && same;
    row("cells", s.name, ts, tp, same);
  }

  for (const auto& s : shapes) {
    const auto layer = network::construct_shallow_optimal(s.n, s.ranks, 1);
    const auto sum = minkowski::sum_of_vertices(minkowski::lift_layer(layer));
    minkowski::VertexClassification a, b;
    const double ts = best_of(repeats, [&] { a = minkowski::classify_vertices_serial(sum); });
    const double tp = best_of(repeats, [&] { b = minkowski::classify_vertices(sum); });
    all_same = all_same && a == b;
    row("vertices", s.name, ts, tp, a == b);
  }
  return all_same ? 0 : 1;
}
