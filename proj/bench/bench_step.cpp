// Throughput comparison of the OpenMP step kernel against the serial
// reference, plus the consensus reduction on its own.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <string>

#include "cbo/consensus.hpp"
#include "cbo/dynamics.hpp"
#include "cbo/objectives.hpp"

using namespace cbo;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class Step>
double time_steps(Ensemble& ens, const CboParams& params, const Objective& obj,
                  const RngStream& stream, int n_steps, Step&& step) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int k = 0; k < n_steps; ++k) step(ens, params, obj, stream, k);
  return seconds_since(t0);
}

}  // namespace

int main(int argc, char** argv) {
  std::int64_t n = 100000;
  int d = 2;
  int steps = 50;
  if (argc > 1) n = std::stoll(argv[1]);
  if (argc > 2) d = std::stoi(argv[2]);
  if (argc > 3) steps = std::stoi(argv[3]);

  const Objective obj = rastrigin_nd(d, {1.0});
  CboParams params;
  params.lambda = 1.0;
  params.sigma = 0.5;
  params.alpha = 1e15;
  params.kappa = 0.9;
  params.delta = 0.5;
  params.dt = 0.01;
  params.n_steps = steps;
  const InitSpec init = InitSpec::uniform_box(std::vector<double>(d, 2.0), std::vector<double>(d, 3.0));
  const RngStream stream(7, RngStream::kDynamics);

  std::printf("N=%lld d=%d steps=%d threads=%d\n", static_cast<long long>(n), d, steps,
              omp_get_max_threads());

  Ensemble ens_ref = init_ensemble(init, n, d, 7);
  refresh_fvalues(ens_ref, obj);
  const double t_ref = time_steps(ens_ref, params, obj, stream, steps,
                                  [](auto&... a) { return em_step_reference(a...); });

  Ensemble ens_omp = init_ensemble(init, n, d, 7);
  refresh_fvalues(ens_omp, obj);
  const double t_omp =
      time_steps(ens_omp, params, obj, stream, steps, [](auto&... a) { return em_step(a...); });

  const double updates = static_cast<double>(n) * d * steps;
  std::printf("serial reference: %8.3f s  (%.1f M axis-updates/s)\n", t_ref, updates / t_ref / 1e6);
  std::printf("openmp kernel:    %8.3f s  (%.1f M axis-updates/s)\n", t_omp, updates / t_omp / 1e6);
  std::printf("speedup: %.2fx\n", t_ref / t_omp);

  // Consensus reduction alone.
  const int reps = 200;
  auto t0 = std::chrono::steady_clock::now();
  double sink = 0.0;
  for (int r = 0; r < reps; ++r) sink += consensus_point(ens_omp, params.alpha).point[0];
  const double t_cons = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) sink += consensus_point_reference(ens_omp, params.alpha).point[0];
  const double t_cons_ref = seconds_since(t0);
  std::printf("consensus blocked: %.3f ms/call   reference: %.3f ms/call   (ignore %.1f)\n",
              1e3 * t_cons / reps, 1e3 * t_cons_ref / reps, sink);
  return 0;
}
