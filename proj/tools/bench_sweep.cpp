// Benchmark: rotation-number staircase computed with the serial reference
// path (jobs = 1) and with the parallel worker pool, checking that both
// produce identical results.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "swff/params.hpp"
#include "swff/rotation.hpp"
#include "swff/sweep.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  double k_hi = 0.55, k_lo = 0.45, step = 0.002;
  if (argc == 4) {
    k_hi = std::atof(argv[1]);
    k_lo = std::atof(argv[2]);
    step = std::atof(argv[3]);
  } else if (argc != 1) {
    std::fprintf(stderr, "usage: %s [k_hi k_lo step]\n", argv[0]);
    return 2;
  }

  swff::ParameterSet p;
  const auto ks = swff::descending_grid(k_hi, k_lo, step);
  const swff::SimulateDays sim = [](const swff::ParameterSet& pp,
                                    double days) {
    return swff::simulate_default(pp, days);
  };

  std::printf("staircase over %zu cells, k in [%g, %g]\n", ks.size(), k_lo,
              k_hi);

  const auto t0 = std::chrono::steady_clock::now();
  const swff::Staircase serial = swff::staircase(ks, p, sim, 1);
  const double t_serial = seconds_since(t0);
  std::printf("serial reference: %8.2f s\n", t_serial);

  const int jobs = swff::default_jobs();
  const auto t1 = std::chrono::steady_clock::now();
  const swff::Staircase parallel = swff::staircase(ks, p, sim, jobs);
  const double t_parallel = seconds_since(t1);
  std::printf("parallel (%d jobs): %6.2f s  speedup %.2fx\n", jobs, t_parallel,
              t_parallel > 0.0 ? t_serial / t_parallel : 0.0);

  if (serial.cells.size() != parallel.cells.size()) {
    std::fprintf(stderr, "FAIL: cell counts differ\n");
    return 1;
  }
  for (std::size_t i = 0; i < serial.cells.size(); ++i) {
    const auto& a = serial.cells[i].rot;
    const auto& b = parallel.cells[i].rot;
    if (a.p != b.p || a.q != b.q || a.rho != b.rho || a.exact != b.exact) {
      std::fprintf(stderr, "FAIL: cell %zu differs between serial and parallel\n",
                   i);
      return 1;
    }
  }
  std::printf("serial and parallel staircases identical\n");
  return 0;
}
