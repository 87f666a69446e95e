#include <doctest.h>

#include "andrews/andrews_verifier.hpp"
#include "andrews/metric_library.hpp"
#include "andrews/parallel.hpp"
#include "andrews/runner.hpp"

using namespace andrews;

// The OpenMP kernels only distribute independent items (modes, task x grid
// jobs) into private slots, so their output must be bitwise identical to the
// serial reference.

namespace {

struct ParallelGuard {
  bool saved = parallel::enabled();
  ~ParallelGuard() { parallel::set_enabled(saved); }
};

}  // namespace

TEST_CASE("eigen mode sweep: serial reference and OpenMP kernel agree bitwise") {
  ParallelGuard guard;
  const auto fb = build_football(4, -0.5);

  parallel::set_enabled(false);
  const EigenResult serial = first_eigenvalue(fb.manifold, 6, 500);
  parallel::set_enabled(true);
  const EigenResult par = first_eigenvalue(fb.manifold, 6, 500);

  CHECK(serial.lambda1_global == par.lambda1_global);
  CHECK(serial.minimizing_degree == par.minimizing_degree);
  REQUIRE(serial.per_mode.size() == par.per_mode.size());
  for (std::size_t i = 0; i < serial.per_mode.size(); ++i) {
    CHECK(serial.per_mode[i].lambda == par.per_mode[i].lambda);
    REQUIRE(serial.per_mode[i].phi.size() == par.per_mode[i].phi.size());
    for (std::size_t j = 0; j < serial.per_mode[i].phi.size(); ++j)
      CHECK(serial.per_mode[i].phi[j] == par.per_mode[i].phi[j]);
  }
}

TEST_CASE("runner job sweep: identical CSV for serial and OpenMP execution") {
  ParallelGuard guard;
  ExperimentConfig cfg;
  cfg.preset = "round_sphere";
  cfg.dim = 3;
  cfg.grids = {80, 160};
  cfg.lmax = 2;
  cfg.tasks = {"curvature", "eigen", "bochner"};

  parallel::set_enabled(false);
  const RunReport serial = run(cfg);
  parallel::set_enabled(true);
  const RunReport par = run(cfg);
  CHECK(serial.csv == par.csv);
}
