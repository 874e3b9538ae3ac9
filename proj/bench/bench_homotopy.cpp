// Timing comparison of the parallel homotopy kernel against the serial
// reference on an so(3)*-cotangent reparametrization family.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "apaths/homotopy.hpp"
#include "apaths/suites.hpp"

using namespace apaths;

namespace {

double time_ms(HomotopyField (*solve)(const PathFamily&), const PathFamily& fam,
               int reps, HomotopyField* out) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    *out = solve(fam);
    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
    if (ms < best) best = ms;
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  int n_t = argc > 1 ? std::atoi(argv[1]) : 257;
  int n_eps = argc > 2 ? std::atoi(argv[2]) : 257;
  int reps = argc > 3 ? std::atoi(argv[3]) : 3;

  Rng rng(kDefaultSeed);
  PoissonBivector pi = so3_dual_bivector();
  Algebroid cot = Algebroid::cotangent(pi);
  PathFamily fam = so3_cotangent_homotopy_family(cot, n_t, n_eps, rng);

  HomotopyField serial, parallel;
  double ms_serial = time_ms(solve_homotopy_equation_serial, fam, reps, &serial);
  double ms_parallel = time_ms(solve_homotopy_equation, fam, reps, &parallel);

  double diff = 0.0;
  for (int j = 0; j < n_eps; ++j)
    for (int k = 0; k < n_t; ++k)
      diff = std::max(diff, norm_inf(axpy(-1.0, parallel.b[j][k], serial.b[j][k])));

  std::printf("grid %d x %d, best of %d reps\n", n_eps, n_t, reps);
  std::printf("  serial   : %9.3f ms\n", ms_serial);
  std::printf("  parallel : %9.3f ms  (speedup %.2fx)\n", ms_parallel,
              ms_serial / ms_parallel);
  std::printf("  max |serial - parallel| = %g %s\n", diff,
              diff == 0.0 ? "(bit-identical)" : "(MISMATCH)");
  return diff == 0.0 ? 0 : 1;
}
