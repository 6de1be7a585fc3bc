// Serial reference versus OpenMP spectrum kernel on a dense linear-taper grid.

#include "taperconv/dispersion.hpp"
#include "taperconv/parallel.hpp"
#include "taperconv/spectrum.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>

using namespace taperconv;

int main(int argc, char** argv) {
  const std::size_t points = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 801;
  const double length = argc > 2 ? std::strtod(argv[2], nullptr) : 1000.0;

  const auto model = default_model();
  const Scenario s{model, LinearProfile{defaults::kW0Um, 4.0, length}, length, 1.0, {}};
  auto grid = default_grid(s);
  grid.points = points;

  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();
  const auto serial = compute_spectrum_serial(s, grid);
  auto t1 = clock::now();
  const auto parallel = compute_spectrum(s, grid);
  auto t2 = clock::now();

  const double ts = std::chrono::duration<double>(t1 - t0).count();
  const double tp = std::chrono::duration<double>(t2 - t1).count();
  std::printf("points %zu  length %g um  threads %d\n", points, length, resolve_thread_count());
  std::printf("serial   %.3f s\nparallel %.3f s\nspeedup  %.2fx\n", ts, tp, ts / tp);
  std::printf("identical %s\n", serial.etas == parallel.etas ? "yes" : "NO");
  return serial.etas == parallel.etas ? 0 : 1;
}
